//! Character trees, the lattice `[[W]]`, label normalization and vertex stabilizers.

mod crt;
mod lattice;
mod stabilizer;
mod tree;

pub use crt::{crt_normalize, CrtResult};
pub use lattice::{bound_form, orbit_reps, reduce, translate, w_project_ceil, LatticePoint, WProjection};
pub use stabilizer::{stabilizer_data, HnnPresentation, StabilizerData};
pub use tree::{
    act_on_vertex, av_membership, compute_beta, line_intersection_sup, tree_ball, TreeBall, TreeContext, TreeVertex,
};

use itertools::Itertools;

use crate::charspace::{build_V, halfspace_test, Character};
use crate::error::Result;
use crate::valuations::ValuationId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityResult {
    pub holds: bool,
    /// The first `m`-subset of `V` with no open halfspace containing it.
    pub failing: Option<Vec<ValuationId>>,
}

/// Checks that every `m`-subset of `V` lies in an open halfspace.
pub fn connectivity_precondition(setup: &crate::exactalg::Setup, m: usize) -> Result<ConnectivityResult> {
    let v = build_V(setup)?;
    for idx in (0..v.len()).combinations(m) {
        let chars: Vec<Character> = idx.iter().map(|&i| v[i].character.clone()).collect();
        if !halfspace_test(&chars)?.separated {
            return Ok(ConnectivityResult { holds: false, failing: Some(idx.iter().map(|&i| v[i].id).collect()) });
        }
    }
    Ok(ConnectivityResult { holds: true, failing: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Setup;

    #[test]
    fn g2_connectivity() {
        let s = Setup::g_n(2).unwrap();
        assert!(connectivity_precondition(&s, 1).unwrap().holds);
        assert!(connectivity_precondition(&s, 3).unwrap().holds);
        let r = connectivity_precondition(&s, 4).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failing.unwrap().len(), 4);
    }
}
