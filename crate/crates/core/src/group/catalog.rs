use serde::Serialize;

use super::io::{parse_group_file, parse_semidirect_file};
use super::psl2::{is_prime, psl2};
use super::{PermGroup, Permutation};
use crate::error::{Error, Result};

fn bad(spec: &str, reason: impl Into<String>) -> Error {
    Error::InvalidSpec { spec: spec.into(), reason: reason.into() }
}

fn parse_n(spec: &str, arg: &str) -> Result<usize> {
    arg.trim()
        .parse::<usize>()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| bad(spec, format!("`{arg}` is not a positive integer")))
}

fn perm(degree: usize, cycles: &[Vec<u32>]) -> Permutation {
    Permutation::from_cycles(degree, cycles).expect("catalog cycles are valid")
}

fn range_cycle(start: usize, len: usize) -> Vec<u32> {
    (start as u32..(start + len) as u32).collect()
}

/// Left-regular representation of a group given by a multiplication rule on `0..n`.
pub(crate) fn regular(
    name: String,
    n: usize,
    gens: &[usize],
    mul: impl Fn(usize, usize) -> usize,
) -> Result<PermGroup> {
    let perms = gens
        .iter()
        .map(|&g| Permutation::from_images((0..n).map(|x| mul(g, x) as u32).collect()))
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(name, n, perms)
}

fn cyclic(n: usize) -> Result<PermGroup> {
    PermGroup::new(format!("cyclic:{n}"), n, vec![perm(n, &[range_cycle(0, n)])])
}

fn elementary(spec: &str, arg: &str) -> Result<PermGroup> {
    let (p, k) = arg.split_once('^').ok_or_else(|| bad(spec, "expected p^k"))?;
    let p = parse_n(spec, p)?;
    let k = parse_n(spec, k)?;
    if !is_prime(p as u64) {
        return Err(bad(spec, format!("{p} is not prime")));
    }
    let degree = p * k;
    let gens = (0..k).map(|i| perm(degree, &[range_cycle(i * p, p)])).collect();
    PermGroup::new(format!("elem:{p}^{k}"), degree, gens)
}

fn dihedral(n: usize) -> Result<PermGroup> {
    let name = format!("dihedral:{n}");
    match n {
        1 => PermGroup::new(name, 2, vec![perm(2, &[vec![0, 1]])]),
        // the Klein four-group, as the symmetries of a 2-gon
        2 => PermGroup::new(name, 4, vec![perm(4, &[vec![0, 1], vec![2, 3]]), perm(4, &[vec![0, 2], vec![1, 3]])]),
        _ => {
            let rotation = perm(n, &[range_cycle(0, n)]);
            let reflection = Permutation::from_images((0..n).map(|i| ((n - i) % n) as u32).collect())?;
            PermGroup::new(name, n, vec![rotation, reflection])
        }
    }
}

/// `⟨a, x | a^{2n}, x² = a^n, x a x⁻¹ = a⁻¹⟩`, order `4n`, regular on `a^k x^e ↦ k + 2n·e`.
fn dicyclic(n: usize) -> Result<PermGroup> {
    let m = 2 * n;
    let mul = |g: usize, y: usize| {
        let (k1, e1) = (g % m, g / m);
        let (k2, e2) = (y % m, y / m);
        // a^k1 x^e1 · a^k2 x^e2
        let k2 = if e1 == 1 { (m - k2) % m } else { k2 };
        let mut k = (k1 + k2) % m;
        let mut e = e1 + e2;
        if e == 2 {
            e = 0;
            k = (k + n) % m;
        }
        k + m * e
    };
    regular(format!("dicyclic:{n}"), 2 * m, &[1, m], mul)
}

fn symmetric(n: usize) -> Result<PermGroup> {
    let gens = if n < 2 { vec![] } else { vec![perm(n, &[vec![0, 1]]), perm(n, &[range_cycle(0, n)])] };
    PermGroup::new(format!("sym:{n}"), n, gens)
}

fn alternating(n: usize) -> Result<PermGroup> {
    let gens = (2..n).map(|i| perm(n, &[vec![0, 1, i as u32]])).collect();
    PermGroup::new(format!("alt:{n}"), n, gens)
}

/// Disjoint-union action of the factors.
pub fn direct_product(specs: &[PermGroup], name: String) -> Result<PermGroup> {
    let degree: usize = specs.iter().map(|g| g.degree()).sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for g in specs {
        for s in g.generators() {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            for (i, &j) in s.images().iter().enumerate() {
                images[offset + i] = offset as u32 + j;
            }
            gens.push(Permutation::from_images(images)?);
        }
        offset += g.degree();
    }
    PermGroup::new(name, degree, gens)
}

fn split_top_level(s: &str) -> Vec<&str> {
    // `product:` nests only by listing its factors; commas always separate factors
    s.split(',').map(str::trim).collect()
}

/// Builds a group from a descriptor such as `sym:4`, `psl2:7` or `product:sym:3,cyclic:5`.
pub fn catalog_group(spec: &str) -> Result<PermGroup> {
    let spec = spec.trim();
    let (tag, arg) = spec.split_once(':').ok_or_else(|| bad(spec, "expected tag:argument"))?;
    match tag {
        "cyclic" => cyclic(parse_n(spec, arg)?),
        "elem" => elementary(spec, arg),
        "dihedral" => dihedral(parse_n(spec, arg)?),
        "dicyclic" => dicyclic(parse_n(spec, arg)?),
        "sym" => symmetric(parse_n(spec, arg)?),
        "alt" => alternating(parse_n(spec, arg)?),
        "psl2" => {
            let p = parse_n(spec, arg)? as u64;
            if !is_prime(p) {
                return Err(bad(spec, format!("{p} is not prime")));
            }
            if p > 13 {
                return Err(bad(spec, "psl2 is cataloged for p <= 13"));
            }
            psl2(p)
        }
        "product" => {
            let factors = split_top_level(arg);
            if factors.len() < 2 {
                return Err(bad(spec, "product needs at least two factors"));
            }
            let groups = factors.iter().map(|f| catalog_group(f)).collect::<Result<Vec<_>>>()?;
            direct_product(&groups, spec.to_string())
        }
        "semidirect" => Ok(parse_semidirect_file(arg)?.with_name(spec)),
        "file" => Ok(parse_group_file(arg)?.with_name(spec)),
        _ => Err(bad(spec, format!("unknown tag `{tag}`"))),
    }
}

/// A built-in group with a short display label.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub spec: &'static str,
    pub label: &'static str,
}

/// The built-in catalog, smallest first.
pub fn default_catalog() -> Vec<CatalogEntry> {
    [
        ("cyclic:2", "Z2"),
        ("cyclic:3", "Z3"),
        ("cyclic:4", "Z4"),
        ("elem:2^2", "Z2xZ2"),
        ("cyclic:5", "Z5"),
        ("cyclic:6", "Z6"),
        ("sym:3", "S3"),
        ("cyclic:8", "Z8"),
        ("product:cyclic:2,cyclic:4", "Z2xZ4"),
        ("elem:2^3", "Z2^3"),
        ("dihedral:4", "D8"),
        ("dicyclic:2", "Q8"),
        ("cyclic:9", "Z9"),
        ("elem:3^2", "Z3xZ3"),
        ("dihedral:5", "D10"),
        ("alt:4", "A4"),
        ("dihedral:6", "D12"),
        ("product:sym:3,cyclic:5", "S3xZ5"),
        ("sym:4", "S4"),
        ("product:sym:3,sym:3", "S3xS3"),
        ("alt:5", "A5"),
        ("product:alt:5,cyclic:2", "A5xZ2"),
        ("psl2:7", "PSL2(7)"),
    ]
    .into_iter()
    .map(|(spec, label)| CatalogEntry { spec, label })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(spec: &str) -> usize {
        catalog_group(spec).unwrap().order().unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(order("cyclic:6"), 6);
        assert_eq!(catalog_group("cyclic:6").unwrap().generators().len(), 1);
        assert_eq!(catalog_group("cyclic:6").unwrap().degree(), 6);
        assert_eq!(order("alt:5"), 60);
        assert_eq!(order("psl2:7"), 168);
        assert_eq!(order("elem:2^3"), 8);
        assert_eq!(order("dihedral:4"), 8);
        assert_eq!(order("dihedral:2"), 4);
        assert_eq!(order("dicyclic:2"), 8);
        assert_eq!(order("dicyclic:3"), 12);
        assert_eq!(order("sym:1"), 1);
        assert_eq!(order("product:sym:3,cyclic:5"), 30);
        assert_eq!(order("product:cyclic:2,cyclic:2,cyclic:2"), 8);
    }

    #[test]
    fn q8_has_one_involution() {
        let g = catalog_group("dicyclic:2").unwrap();
        let involutions = g.elements().unwrap().iter().filter(|p| p.order() == 2).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(catalog_group("psl2:8").is_err());
        assert!(catalog_group("psl2:17").is_err());
        assert!(catalog_group("elem:4^2").is_err());
        assert!(catalog_group("torus:3").is_err());
        assert!(catalog_group("cyclic").is_err());
        assert!(catalog_group("cyclic:0").is_err());
        assert!(catalog_group("product:sym:3").is_err());
        assert!(catalog_group("file:/nonexistent/group.txt").is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        let a = catalog_group("sym:4").unwrap();
        let b = catalog_group("sym:4").unwrap();
        assert_eq!(a.generators(), b.generators());
    }

    #[test]
    fn catalog_orders_within_cap() {
        for e in default_catalog() {
            let n = order(e.spec);
            assert!(n <= crate::group::DEFAULT_ORDER_CAP, "{}", e.spec);
        }
    }
}
