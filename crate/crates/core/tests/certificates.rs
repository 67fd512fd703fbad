mod common;

use cayley_nzflow::constructions::{a4_counterexample, campaign_specs, construct, GammaSpec};
use cayley_nzflow::flow::{oracle_nz3, verify, Z3Flow};
use cayley_nzflow::generate::{complement, random_regular};
use cayley_nzflow::graph::{Graph, GraphJson};
use cayley_nzflow::group::{FiniteGroup, GroupJson};
use cayley_nzflow::pseudoforest::{
    certificate_for_partition, certificate_from_flow, flow_from_certificate, search_certificate, PartitionCertificate,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn nowhere_zero(graph: &Graph, flow: &Z3Flow) -> bool {
    verify(graph, flow).is_ok_and(|v| v.ok())
}

#[test]
fn every_certificate_flow_round_trips() {
    let specs = campaign_specs(&["gamma2", "gamma3", "gamma4"], 13, &[1, 5]).unwrap();
    assert!(specs.len() > 60);
    for spec in specs {
        let c = construct(&spec).unwrap_or_else(|e| panic!("{spec:?}: {e}"));
        let cert = certificate_from_flow(c.graph(), &c.flow).unwrap();
        cert.validate(c.graph()).unwrap();
        let back = flow_from_certificate(c.graph(), &cert).unwrap();
        assert!(nowhere_zero(c.graph(), &back), "{spec:?}");
        let again = certificate_from_flow(c.graph(), &back).unwrap();
        assert_eq!(again.u, cert.u, "{spec:?}: the U side is read off the orientation");
    }
}

#[test]
fn construction_u_sides_rederive() {
    for spec in [GammaSpec::Gamma2 { p: 7, k: 1, r: 2 }, GammaSpec::Gamma3 { p: 7, s: 3 }, GammaSpec::Gamma4 { p: 5, s: 1 }] {
        let c = construct(&spec).unwrap();
        let cert = c.certificate.unwrap();
        let found = certificate_for_partition(c.cayley.graph(), &cert.u, &cert.w).unwrap();
        assert!(found.is_some(), "{spec:?}");
    }
}

#[test]
fn k6_two_triangles() {
    // The complement of the empty graph on 6 vertices.
    let k6 = complement(&Graph::from_pairs(6, &[]).unwrap()).unwrap();
    let u = [0, 1, 2].into_iter().collect();
    let w = [3, 4, 5].into_iter().collect();
    let cert = certificate_for_partition(&k6, &u, &w).unwrap().unwrap();
    assert!(cert.u_prime.is_empty() && cert.w_prime.is_empty() && cert.matching.is_empty());
    assert!(nowhere_zero(&k6, &flow_from_certificate(&k6, &cert).unwrap()));
    assert!(oracle_nz3(&k6).unwrap().is_some());
}

#[test]
fn a4_multigraph_has_no_certificate() {
    let cay = a4_counterexample().unwrap();
    assert!(search_certificate(cay.graph()).unwrap().is_none());
}

#[test]
fn search_refuses_large_graphs() {
    let g = random_regular(22, 5, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    assert!(search_certificate(&g).is_err());
}

#[test]
fn json_artifacts_round_trip() {
    let c = construct(&GammaSpec::Gamma3 { p: 5, s: 1 }).unwrap();

    let graph_text = serde_json::to_string(&c.graph().to_json()).unwrap();
    let graph_back = Graph::from_json(&serde_json::from_str::<GraphJson>(&graph_text).unwrap()).unwrap();
    assert_eq!(serde_json::to_string(&graph_back.to_json()).unwrap(), graph_text);

    let group_text = serde_json::to_string(&c.cayley.group().to_json()).unwrap();
    let group_back = FiniteGroup::from_json(&serde_json::from_str::<GroupJson>(&group_text).unwrap()).unwrap();
    assert_eq!(serde_json::to_string(&group_back.to_json()).unwrap(), group_text);

    let flow_text = serde_json::to_string(&c.flow.to_json()).unwrap();
    let flow_back = Z3Flow::from_json(&serde_json::from_str(&flow_text).unwrap()).unwrap();
    assert_eq!(flow_back, c.flow);

    let cert = c.certificate.unwrap();
    let cert_back: PartitionCertificate = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
    assert_eq!(cert_back, cert);

    let spec = GammaSpec::Gamma4 { p: 7, s: 2 };
    let spec_back: GammaSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
    assert_eq!(spec_back, spec);
}
