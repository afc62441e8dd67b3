use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{coset_action, is_two_transitive, Elem, FiniteGroup};

/// Why a subgroup fails to belong to an `n`-regular 2-transitive cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverFailure {
    pub subgroup: usize,
    pub two_transitive: bool,
    /// Some element of order `n` acts nontrivially on the cosets.
    pub n_regular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverVerdict {
    pub n: u64,
    pub covers: bool,
    /// Elements lying in no listed subgroup.
    pub uncovered: Vec<Elem>,
    pub failing: Vec<CoverFailure>,
    pub pass: bool,
}

/// Checks that `subgroups` form an `n`-regular 2-transitive cover of `G`.
pub fn cover_check(g: &FiniteGroup, subgroups: &[usize], n: u64) -> Result<CoverVerdict> {
    let lat = g.lattice();
    for &h in subgroups {
        if h >= lat.len() {
            return Err(Error::Precondition(format!("no subgroup with id {h}")));
        }
        if h == lat.whole_id() {
            return Err(Error::NotProper);
        }
    }
    let uncovered: Vec<Elem> = g.elements().filter(|&x| !subgroups.iter().any(|&h| lat.get(h).contains(x))).collect();
    let of_order = g.elements_of_order(n);
    let mut failing = Vec::new();
    for &h in subgroups {
        let action = coset_action(g, h)?;
        let two_transitive = is_two_transitive(&action);
        let n_regular =
            of_order.iter().any(|&x| action.row(x as usize).iter().enumerate().any(|(i, &j)| i as u32 != j));
        if !two_transitive || !n_regular {
            failing.push(CoverFailure { subgroup: h, two_transitive, n_regular });
        }
    }
    let covers = uncovered.is_empty();
    let pass = covers && failing.is_empty() && !subgroups.is_empty();
    Ok(CoverVerdict { n, covers, uncovered, failing, pass })
}
