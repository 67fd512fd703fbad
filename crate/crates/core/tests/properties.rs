mod common;

use cayley_nzflow::flow::{oracle_nz3, parity_lift, quotient_lift, verify};
use cayley_nzflow::generate::random_regular;
use cayley_nzflow::pseudoforest::{certificate_from_flow, flow_from_certificate, search_certificate, zero_one_orientation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_one_orientation_hits_the_roots(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_pseudoforest(&mut rng);
        let roots = common::random_roots(&g, &mut rng);
        let o = zero_one_orientation(&g, &roots).unwrap();
        prop_assert!(o.check(&g).is_ok());
        for &v in g.vertices() {
            prop_assert_eq!(o.out_degree(v), usize::from(!roots.contains(&v)));
        }
        if let Some(bad) = common::corrupt_roots(&g, &roots, &mut rng) {
            prop_assert!(zero_one_orientation(&g, &bad).is_err());
        }
    }

    #[test]
    fn parity_lift_verifies(seed in any::<u64>()) {
        let (graph, sub, flow) = common::random_parity_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let lifted = parity_lift(&graph, &sub, &flow).unwrap();
        prop_assert!(verify(&graph, &lifted).unwrap().ok());
    }

    #[test]
    fn quotient_lift_verifies(seed in any::<u64>()) {
        let (gamma, normal, flow) = common::random_quotient_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let lifted = quotient_lift(&gamma, &normal, &flow).unwrap();
        prop_assert!(verify(gamma.graph(), &lifted).unwrap().ok());
    }

    #[test]
    fn cubic_graphs_have_flows_iff_bipartite(seed in any::<u64>(), half in 2usize..=5) {
        let g = random_regular(2 * half, 3, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(oracle_nz3(&g).unwrap().is_some(), g.is_bipartite());
    }

    #[test]
    fn oracle_flows_give_certificates(seed in any::<u64>()) {
        let g = random_regular(10, 5, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let flow = oracle_nz3(&g).unwrap();
        prop_assert_eq!(flow.is_some(), search_certificate(&g).unwrap().is_some());
        if let Some(f) = flow {
            let cert = certificate_from_flow(&g, &f).unwrap();
            prop_assert!(cert.validate(&g).is_ok());
            prop_assert!(verify(&g, &flow_from_certificate(&g, &cert).unwrap()).unwrap().ok());
        }
    }
}
