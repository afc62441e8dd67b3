use std::fs;

use super::catalog::regular;
use super::iso::extend;
use super::{Elem, FiniteGroup, PermGroup, Permutation};
use crate::error::{Error, Result};

/// The accepted text formats, in prose.
pub const GROUP_FILE_GRAMMAR: &str = "\
Group file (`file:<path>`):
  Blank lines and lines starting with `#` are ignored.
  The first remaining line is `degree <n>`.
  Every further line is one generator in 1-based disjoint-cycle notation,
  e.g. `(1 2 3)(4 5)`; `()` is the identity. Points are separated by
  spaces or commas.

Semidirect file (`semidirect:<path>`), describing H ⋊ K:
  `[normal]`      followed by a group file body for H
  `[complement]`  followed by a group file body for K
  `[action]`      one line per generator of K, in order:
                  `<i>: <img_1> ; <img_2> ; ...`
                  where <img_j> is the image of the j-th generator of H
                  under the automorphism attached to K's i-th generator (1-based),
                  written in cycle notation on H's points.
  The product is realized by its regular permutation representation on
  pairs (h, k), index h + |H|·k, multiplied by (h1,k1)(h2,k2) = (h1·k1(h2), k1·k2).
";

fn malformed(path: &str, line: usize, reason: impl Into<String>) -> Error {
    Error::MalformedFile { path: path.into(), line, reason: reason.into() }
}

/// Parses `(1 2 3)(4 5)` on the given degree.
pub fn parse_cycles(text: &str, degree: usize) -> std::result::Result<Permutation, String> {
    let text = text.trim();
    let mut cycles: Vec<Vec<u32>> = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let open = rest.strip_prefix('(').ok_or_else(|| format!("expected `(` in `{text}`"))?;
        let close = open.find(')').ok_or_else(|| format!("unclosed cycle in `{text}`"))?;
        let body = &open[..close];
        let points = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<u32>() {
                Ok(p) if p >= 1 => Ok(p - 1),
                _ => Err(format!("bad point `{t}`")),
            })
            .collect::<std::result::Result<Vec<u32>, String>>()?;
        if points.len() > 1 {
            cycles.push(points);
        }
        rest = open[close + 1..].trim_start();
    }
    Permutation::from_cycles(degree, &cycles).map_err(|e| e.to_string())
}

struct Body {
    degree: usize,
    gens: Vec<Permutation>,
}

fn parse_body(path: &str, lines: &[(usize, &str)]) -> Result<Body> {
    let mut it = lines.iter();
    let &(ln, first) = it.next().ok_or_else(|| malformed(path, 0, "missing `degree <n>` line"))?;
    let degree = first
        .strip_prefix("degree")
        .and_then(|d| d.trim().parse::<usize>().ok())
        .ok_or_else(|| malformed(path, ln, "expected `degree <n>`"))?;
    let gens =
        it.map(|&(ln, l)| parse_cycles(l, degree).map_err(|r| malformed(path, ln, r))).collect::<Result<Vec<_>>>()?;
    Ok(Body { degree, gens })
}

fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| malformed(path, 0, e.to_string()))
}

pub fn parse_group_text(path: &str, text: &str) -> Result<PermGroup> {
    let body = parse_body(path, &content_lines(text))?;
    PermGroup::new(path, body.degree, body.gens)
}

pub fn parse_group_file(path: &str) -> Result<PermGroup> {
    parse_group_text(path, &read(path)?)
}

pub fn parse_semidirect_text(path: &str, text: &str) -> Result<PermGroup> {
    let lines = content_lines(text);
    let mut sections: [Vec<(usize, &str)>; 3] = Default::default();
    let mut current: Option<usize> = None;
    for (ln, l) in lines {
        match l {
            "[normal]" => current = Some(0),
            "[complement]" => current = Some(1),
            "[action]" => current = Some(2),
            _ => match current {
                Some(s) => sections[s].push((ln, l)),
                None => return Err(malformed(path, ln, "content before the first section header")),
            },
        }
    }
    let hb = parse_body(path, &sections[0])?;
    let kb = parse_body(path, &sections[1])?;
    let h_perm = PermGroup::new("H", hb.degree, hb.gens)?;
    let k_perm = PermGroup::new("K", kb.degree, kb.gens)?;
    let h_gen_count = h_perm.generators().len();
    let k_gen_count = k_perm.generators().len();
    let h = FiniteGroup::new(h_perm)?;
    let k = FiniteGroup::new(k_perm)?;

    let mut gen_auts: Vec<Option<Vec<Elem>>> = vec![None; k_gen_count];
    for &(ln, l) in &sections[2] {
        let (idx, imgs) = l.split_once(':').ok_or_else(|| malformed(path, ln, "expected `<i>: images`"))?;
        let i = idx
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&i| (1..=k_gen_count).contains(&i))
            .ok_or_else(|| malformed(path, ln, format!("bad complement generator index `{}`", idx.trim())))?;
        let images = imgs
            .split(';')
            .map(|t| {
                let p = parse_cycles(t, hb.degree).map_err(|r| malformed(path, ln, r))?;
                h.index_of(&p).map_err(|_| malformed(path, ln, format!("{p} is not in the normal factor")))
            })
            .collect::<Result<Vec<Elem>>>()?;
        if images.len() != h_gen_count {
            return Err(malformed(path, ln, format!("expected {h_gen_count} images, got {}", images.len())));
        }
        let aut = extend(&h, &h, h.generators(), &images).ok_or(Error::NotAutomorphic)?;
        gen_auts[i - 1] = Some(aut);
    }
    let gen_auts: Vec<Vec<Elem>> = gen_auts
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            a.ok_or_else(|| malformed(path, 0, format!("no action given for complement generator {}", i + 1)))
        })
        .collect::<Result<_>>()?;

    // φ: K → Aut(H) by breadth-first words; φ(k s) = φ(k) ∘ φ(s)
    let nh = h.order();
    let mut phi: Vec<Option<Vec<Elem>>> = vec![None; k.order()];
    phi[0] = Some((0..nh as Elem).collect());
    let mut queue = vec![0 as Elem];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let px = phi[x as usize].clone().expect("visited");
        for (&s, aut) in k.generators().iter().zip(&gen_auts) {
            let y = k.mul(x, s);
            let composed: Vec<Elem> = aut.iter().map(|&v| px[v as usize]).collect();
            match &phi[y as usize] {
                None => {
                    phi[y as usize] = Some(composed);
                    queue.push(y);
                }
                Some(existing) if *existing != composed => return Err(Error::NotAutomorphic),
                _ => {}
            }
        }
    }
    let phi: Vec<Vec<Elem>> = phi.into_iter().map(|p| p.expect("K is generated")).collect();

    let mul = |a: usize, b: usize| {
        let (h1, k1) = (a % nh, a / nh);
        let (h2, k2) = (b % nh, b / nh);
        let hh = h.mul(h1 as Elem, phi[k1][h2]) as usize;
        let kk = k.mul(k1 as Elem, k2 as Elem) as usize;
        hh + nh * kk
    };
    let mut gens: Vec<usize> = h.generators().iter().map(|&x| x as usize).collect();
    gens.extend(k.generators().iter().map(|&y| nh * y as usize));
    regular(path.to_string(), nh * k.order(), &gens, mul)
}

pub fn parse_semidirect_file(path: &str) -> Result<PermGroup> {
    parse_semidirect_text(path, &read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::are_isomorphic;
    use crate::group::catalog_group;

    #[test]
    fn group_file_roundtrip() {
        let g = parse_group_text("t", "# A4\ndegree 4\n(1 2 3)\n(2 3 4)\n").unwrap();
        assert_eq!(g.order().unwrap(), 12);
        assert!(parse_group_text("t", "(1 2)").is_err());
        assert!(parse_group_text("t", "degree 3\n(1 4)").is_err());
        assert!(parse_group_text("t", "degree 3\n1 2").is_err());
        assert_eq!(parse_cycles("()", 3).unwrap(), Permutation::identity(3));
        assert_eq!(parse_cycles("(1,2)(3 4)", 4).unwrap().to_string(), "(1 2)(3 4)");
    }

    #[test]
    fn semidirect_gives_s3_and_a4() {
        let s3 = "[normal]\ndegree 3\n(1 2 3)\n[complement]\ndegree 2\n(1 2)\n[action]\n1: (1 3 2)\n";
        let g = FiniteGroup::new(parse_semidirect_text("s3", s3).unwrap()).unwrap();
        let s3_cat = FiniteGroup::new(catalog_group("sym:3").unwrap()).unwrap();
        assert!(are_isomorphic(&g, &s3_cat));

        let a4 = "[normal]\ndegree 4\n(1 2)(3 4)\n(1 3)(2 4)\n[complement]\ndegree 3\n(1 2 3)\n[action]\n1: (1 3)(2 4) ; (1 4)(2 3)\n";
        let g = FiniteGroup::new(parse_semidirect_text("a4", a4).unwrap()).unwrap();
        let a4_cat = FiniteGroup::new(catalog_group("alt:4").unwrap()).unwrap();
        assert!(are_isomorphic(&g, &a4_cat));
    }

    #[test]
    fn semidirect_rejects_bad_actions() {
        // not a homomorphism of Z3
        let bad = "[normal]\ndegree 3\n(1 2 3)\n[complement]\ndegree 2\n(1 2)\n[action]\n1: ()\n";
        assert!(matches!(parse_semidirect_text("x", bad), Err(Error::NotAutomorphic)));
        // inversion has order 2, so it is not a well-defined action of Z3
        let bad = "[normal]\ndegree 3\n(1 2 3)\n[complement]\ndegree 3\n(1 2 3)\n[action]\n1: (1 3 2)\n";
        assert!(matches!(parse_semidirect_text("x", bad), Err(Error::NotAutomorphic)));
        let missing = "[normal]\ndegree 3\n(1 2 3)\n[complement]\ndegree 2\n(1 2)\n";
        assert!(parse_semidirect_text("x", missing).is_err());
    }
}
