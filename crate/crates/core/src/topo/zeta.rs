use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{psl2_order, FiniteGroup};

/// `μ(H, G)` for every subgroup `H`, indexed by lattice id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MobiusTable {
    pub values: Vec<i64>,
}

impl MobiusTable {
    pub fn get(&self, h: usize) -> i64 {
        self.values[h]
    }

    /// `μ(1, G)`.
    pub fn at_trivial(&self) -> i64 {
        self.values[0]
    }

    /// `μ(G,G) = 1` and `Σ_{K ≥ H} μ(K,G) = 0` for `H < G`.
    pub fn check(&self, g: &FiniteGroup) -> bool {
        let lat = g.lattice();
        let whole = lat.whole_id();
        self.values[whole] == 1 && (0..whole).all(|h| lat.supergroups(h).map(|k| self.values[k]).sum::<i64>() == 0)
    }
}

/// Downward recursion from the top of the lattice.
pub fn mobius_table(g: &FiniteGroup) -> MobiusTable {
    let lat = g.lattice();
    let n = lat.len();
    let mut values = vec![0i64; n];
    for h in (0..n).rev() {
        values[h] = if h == lat.whole_id() {
            1
        } else {
            -lat.supergroups(h).filter(|&k| k != h).map(|k| values[k]).sum::<i64>()
        };
    }
    MobiusTable { values }
}

/// `P(G, s) = Σ_H μ(H,G) (G:H)^{-s}`, exactly.
pub fn prob_zeta(g: &FiniteGroup, table: &MobiusTable, s: i64) -> BigRational {
    let lat = g.lattice();
    let mut total = BigRational::zero();
    for (h, &mu) in table.values.iter().enumerate() {
        if mu == 0 {
            continue;
        }
        let index = BigInt::from(g.order() / lat.get(h).order());
        let power = if s <= 0 {
            BigRational::from_integer(num_traits::pow(index, (-s) as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(index, s as usize))
        };
        total += BigRational::from_integer(BigInt::from(mu)) * power;
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaReport {
    /// `(s, P(G, s))` with values as reduced fractions.
    pub values: Vec<(i64, String)>,
    pub p_minus_one: i64,
    /// `χ̃(Δ(C(G)))` when computed.
    pub reduced_euler: Option<i64>,
    /// `P(G,-1) = -χ̃` when both are known.
    pub identity_holds: Option<bool>,
}

pub fn zeta_report(g: &FiniteGroup, points: &[i64], reduced_euler: Option<i64>) -> ZetaReport {
    let table = mobius_table(g);
    let values = points.iter().map(|&s| (s, prob_zeta(g, &table, s).to_string())).collect();
    let pm1 = prob_zeta(g, &table, -1);
    debug_assert!(pm1.is_integer());
    let p_minus_one = pm1.to_integer().to_i64().expect("P(G,-1) fits in i64");
    ZetaReport { values, p_minus_one, reduced_euler, identity_holds: reduced_euler.map(|e| p_minus_one == -e) }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerPslValue {
    pub p: u64,
    pub order: u64,
    /// Value of the closed form; not cross-checked against the Möbius table.
    pub euler: i128,
    /// `PSL2(p)` is not simple for `p < 5`.
    pub degenerate: bool,
}

/// Evaluates `o(G)·(p(p-1)(p+1)/12 - p - 4) + 1` for `p ≡ ±3 (mod 8)`, `p ≡ ±2 (mod 5)`.
///
/// At `p = 13` this differs from `1 - P(G,-1)` computed by [`prob_zeta`] (677041).
pub fn euler_psl_formula(p: u64) -> Result<EulerPslValue> {
    if !crate::group::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if !matches!(p % 8, 3 | 5) || !matches!(p % 5, 2 | 3) {
        return Err(Error::Precondition(format!("{p} fails p ≡ ±3 (mod 8) and p ≡ ±2 (mod 5)")));
    }
    let pp = p as i128;
    let order = psl2_order(p);
    let euler = order as i128 * (pp * (pp - 1) * (pp + 1) / 12 - pp - 4) + 1;
    Ok(EulerPslValue { p, order, euler, degenerate: p < 5 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_group;

    fn group(spec: &str) -> FiniteGroup {
        FiniteGroup::new(catalog_group(spec).unwrap()).unwrap()
    }

    fn mu_of_order(g: &FiniteGroup, t: &MobiusTable, n: usize) -> Vec<i64> {
        g.lattice().subgroups().iter().enumerate().filter(|(_, h)| h.order() == n).map(|(i, _)| t.get(i)).collect()
    }

    #[test]
    fn mobius_small() {
        let z6 = group("cyclic:6");
        let t = mobius_table(&z6);
        assert!(t.check(&z6));
        assert_eq!(t.at_trivial(), 1);
        assert_eq!(mu_of_order(&z6, &t, 2), vec![-1]);
        assert_eq!(mu_of_order(&z6, &t, 3), vec![-1]);
        let s3 = group("sym:3");
        let t = mobius_table(&s3);
        assert_eq!(t.at_trivial(), 3);
        assert_eq!(t.get(s3.lattice().whole_id()), 1);
    }

    #[test]
    fn zeta_values() {
        let z6 = group("cyclic:6");
        let t = mobius_table(&z6);
        assert_eq!(prob_zeta(&z6, &t, -1), BigRational::from_integer(2.into()));
        // P(G, s) at s = 0 is Σ μ(H, G) = 0 for nontrivial G
        assert!(prob_zeta(&z6, &t, 0).is_zero());
        // P(Z6, 1) = 1 - 1/2 - 1/3 + 1/6 = 1/3
        assert_eq!(prob_zeta(&z6, &t, 1), BigRational::new(1.into(), 3.into()));
        let r = zeta_report(&z6, &[-1, 1], Some(-2));
        assert_eq!(r.p_minus_one, 2);
        assert_eq!(r.identity_holds, Some(true));
    }

    #[test]
    fn zeta_large_groups() {
        let a5 = group("alt:5");
        assert_eq!(zeta_report(&a5, &[], None).p_minus_one, -1560);
        let g = group("psl2:7");
        assert_eq!(zeta_report(&g, &[], None).p_minus_one, -17 * 168);
    }

    #[test]
    fn euler_psl() {
        let v = euler_psl_formula(13).unwrap();
        assert_eq!(v.euler, 1092 * (182 - 17) + 1);
        assert_eq!(v.euler, 180181);
        assert!(!v.degenerate);
        let v3 = euler_psl_formula(3).unwrap();
        assert!(v3.degenerate);
        assert_eq!(v3.euler, 12 * (2 - 7) + 1);
        assert!(euler_psl_formula(7).is_err());
        assert!(euler_psl_formula(9).is_err());
        // p = 5 fails the mod-5 condition
        assert!(euler_psl_formula(5).is_err());
        // PSL2(3) ≅ A4, where the closed form does not give χ(C(A4)) = 1 - P(A4, -1)
        let a4 = group("alt:4");
        assert_ne!(1 - zeta_report(&a4, &[], None).p_minus_one, v3.euler as i64);
    }
}
