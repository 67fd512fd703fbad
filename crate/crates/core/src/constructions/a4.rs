//! `Cay(A4, {a, b, b, b^-1, b^-1})`: a connected 5-valent Cayley multigraph
//! with no nowhere-zero Z3-flow.

use crate::flow::{oracle_nz3, FlowError};
use crate::graph::{CayleyMultigraph, GraphError};
use crate::group::FiniteGroup;

/// `a` is a double transposition and `b` a 3-cycle.
pub fn a4_counterexample() -> Result<CayleyMultigraph, GraphError> {
    let group = FiniteGroup::alternating4()?;
    CayleyMultigraph::parse(&group, "a,b,b,b^-1,b^-1")
}

/// The simple cubic graph `Cay(A4, {a, b, b^-1})`.
pub fn a4_simple_subgraph() -> Result<CayleyMultigraph, GraphError> {
    let group = FiniteGroup::alternating4()?;
    CayleyMultigraph::parse(&group, "a,b,b^-1")
}

/// Runs the exhaustive search; `true` when it proves there is no flow.
pub fn verify_counterexample() -> Result<bool, FlowError> {
    let cay = a4_counterexample()?;
    Ok(oracle_nz3(cay.graph())?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let cay = a4_counterexample().unwrap();
        let g = cay.graph();
        assert_eq!((g.vertex_count(), g.edge_count()), (12, 30));
        assert_eq!(g.regular_degree(), Some(5));
        assert_eq!(cay.edges_labelled("a").count(), 6);
        assert_eq!(cay.edges_labelled("b").count(), 24);
        assert!(g.is_connected());
        let simple = a4_simple_subgraph().unwrap();
        assert_eq!(simple.graph().regular_degree(), Some(3));
        assert!(!simple.graph().is_bipartite());
    }

    #[test]
    fn no_flow() {
        assert!(verify_counterexample().unwrap());
    }
}
