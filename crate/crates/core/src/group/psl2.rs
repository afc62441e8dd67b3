//! The Möbius-transformation model of `PSL_2(F_p)` acting on the projective line.
//!
//! Points `0..p-1` are the field elements, point `p` is `∞`.

use std::collections::HashMap;
use std::fmt;

use super::{Elem, FiniteGroup, PermAction, PermGroup, Permutation};
use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `|PSL_2(F_p)| = p(p-1)(p+1)/2` for odd `p`, `6` for `p = 2`.
pub fn psl2_order(p: u64) -> u64 {
    let n = p * (p - 1) * (p + 1);
    if p == 2 {
        n
    } else {
        n / 2
    }
}

fn inv_mod(x: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = x % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// `x ↦ (ax + b)/(cx + d)` with `ad - bc = 1`, stored up to a global sign.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MobiusTransform {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub p: u64,
}

impl MobiusTransform {
    /// Normalizes the sign so the first nonzero entry lies in `1..=(p-1)/2`.
    pub fn new(a: i64, b: i64, c: i64, d: i64, p: u64) -> Result<Self> {
        let m = |x: i64| x.rem_euclid(p as i64) as u64;
        let (a, b, c, d) = (m(a), m(b), m(c), m(d));
        if (a * d + p * p - b * c % p) % p != 1 {
            return Err(Error::Precondition(format!("det of [[{a},{b}],[{c},{d}]] is not 1 mod {p}")));
        }
        Ok(Self { a, b, c, d, p }.canonical())
    }

    fn canonical(self) -> Self {
        let p = self.p;
        if p == 2 {
            return self;
        }
        let first = [self.a, self.b, self.c, self.d].into_iter().find(|&x| x != 0).expect("det 1");
        if first <= (p - 1) / 2 {
            self
        } else {
            let neg = |x: u64| (p - x) % p;
            Self { a: neg(self.a), b: neg(self.b), c: neg(self.c), d: neg(self.d), p }
        }
    }

    pub fn identity(p: u64) -> Self {
        Self { a: 1, b: 0, c: 0, d: 1, p }
    }

    /// Matrix product `self · other`, i.e. `self ∘ other` as maps.
    pub fn compose(&self, other: &Self) -> Self {
        let p = self.p;
        Self {
            a: (self.a * other.a + self.b * other.c) % p,
            b: (self.a * other.b + self.b * other.d) % p,
            c: (self.c * other.a + self.d * other.c) % p,
            d: (self.c * other.b + self.d * other.d) % p,
            p,
        }
        .canonical()
    }

    pub fn inverse(&self) -> Self {
        let p = self.p;
        Self { a: self.d, b: (p - self.b) % p, c: (p - self.c) % p, d: self.a, p }.canonical()
    }

    /// Image of a projective point (`p` encodes `∞`).
    pub fn apply(&self, x: u64) -> u64 {
        let p = self.p;
        if x == p {
            return if self.c == 0 { p } else { self.a * inv_mod(self.c, p) % p };
        }
        let num = (self.a * x + self.b) % p;
        let den = (self.c * x + self.d) % p;
        if den == 0 {
            p
        } else {
            num * inv_mod(den, p) % p
        }
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::from_images((0..=self.p).map(|x| self.apply(x) as u32).collect())
            .expect("Möbius maps are bijections")
    }

    /// `(a + d)^2 mod p`, independent of the sign.
    pub fn trace_squared(&self) -> u64 {
        let t = (self.a + self.d) % self.p;
        t * t % self.p
    }

    /// `β α β⁻¹` for `β = [[e, f], [g, h]]` with nonzero determinant (an element of `PGL_2`).
    pub fn conjugate_by(&self, e: u64, f: u64, g: u64, h: u64) -> Self {
        let p = self.p;
        let det = (e * h + p * p - f * g % p) % p;
        let di = inv_mod(det, p);
        // β · α
        let a1 = (e * self.a + f * self.c) % p;
        let b1 = (e * self.b + f * self.d) % p;
        let c1 = (g * self.a + h * self.c) % p;
        let d1 = (g * self.b + h * self.d) % p;
        // · adj(β) / det(β)
        let (ea, fa, ga, ha) = (h, (p - f) % p, (p - g) % p, e);
        Self {
            a: (a1 * ea + b1 * ga) % p * di % p,
            b: (a1 * fa + b1 * ha) % p * di % p,
            c: (c1 * ea + d1 * ga) % p * di % p,
            d: (c1 * fa + d1 * ha) % p * di % p,
            p,
        }
        .canonical()
    }
}

impl fmt::Display for MobiusTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}x+{})/({}x+{}) mod {}", self.a, self.b, self.c, self.d, self.p)
    }
}

impl fmt::Debug for MobiusTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Element order of a non-identity element of `PSL_2(F_7)` from its squared trace.
pub fn order_from_trace(p: u64, t: u64) -> Result<u64> {
    if p != 7 {
        return Err(Error::Precondition(format!("trace table is for p = 7, not {p}")));
    }
    match t % 7 {
        0 => Ok(2),
        1 => Ok(3),
        2 => Ok(4),
        4 => Ok(7),
        other => Err(Error::ImpossibleTrace(other)),
    }
}

/// `PSL_2(F_p)` on `p + 1` points, generated by `x + 1` and `-1/x`.
pub fn psl2(p: u64) -> Result<PermGroup> {
    if !is_prime(p) {
        return Err(Error::InvalidSpec { spec: format!("psl2:{p}"), reason: "p must be prime".into() });
    }
    let t = MobiusTransform::new(1, 1, 0, 1, p)?;
    let s = MobiusTransform::new(0, -1, 1, 0, p)?;
    PermGroup::new(format!("psl2:{p}"), p as usize + 1, vec![t.to_permutation(), s.to_permutation()])
}

/// Bijection between the element table of a `psl2:p` group and Möbius transforms.
#[derive(Debug)]
pub struct Psl2Model {
    p: u64,
    transforms: Vec<MobiusTransform>,
    index: HashMap<MobiusTransform, Elem>,
}

impl Psl2Model {
    pub fn new(g: &FiniteGroup, p: u64) -> Result<Self> {
        if g.perm_group().degree() != p as usize + 1 || g.order() as u64 != psl2_order(p) {
            return Err(Error::Precondition(format!("{} is not the psl2:{p} permutation model", g.name())));
        }
        let mut transforms = vec![MobiusTransform::identity(p); g.order()];
        let mut index = HashMap::new();
        let pi = p as i64;
        for a in 0..pi {
            for b in 0..pi {
                for c in 0..pi {
                    for d in 0..pi {
                        if (a * d - b * c).rem_euclid(pi) != 1 {
                            continue;
                        }
                        let m = MobiusTransform::new(a, b, c, d, p)?;
                        if index.contains_key(&m) {
                            continue;
                        }
                        let e = g.index_of(&m.to_permutation())?;
                        transforms[e as usize] = m;
                        index.insert(m, e);
                    }
                }
            }
        }
        if index.len() != g.order() {
            return Err(Error::Precondition("Möbius model does not cover the group".into()));
        }
        Ok(Self { p, transforms, index })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn transform(&self, e: Elem) -> MobiusTransform {
        self.transforms[e as usize]
    }

    pub fn element(&self, m: &MobiusTransform) -> Result<Elem> {
        self.index.get(m).copied().ok_or(Error::NotAMember)
    }

    pub fn trace_squared(&self, e: Elem) -> u64 {
        self.transforms[e as usize].trace_squared()
    }

    /// `PGL_2(F_p)` acting on the element table by conjugation, generated by
    /// `x + 1`, `-1/x` and `x ↦ ωx` for a non-square `ω`.
    pub fn pgl2_conjugation_action(&self) -> Result<PermAction> {
        let p = self.p;
        let omega = (2..p.max(3)).find(|&w| (1..p).all(|y| y * y % p != w)).unwrap_or(1);
        let mats: [(u64, u64, u64, u64); 3] = [(1, 1, 0, 1), (0, p - 1, 1, 0), (omega, 0, 0, 1)];
        let gens = mats
            .iter()
            .map(|&(e, f, g, h)| {
                let images = self.transforms.iter().map(|m| self.index[&m.conjugate_by(e, f, g, h)]).collect();
                Permutation::from_images(images).expect("conjugation is a bijection")
            })
            .collect();
        PermAction::from_generators(self.transforms.len(), gens)
    }
}
