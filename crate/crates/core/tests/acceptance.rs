//! Acceptance gate: one pass/fail line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use cosetopo::group::{generating_pair_classes, order_from_trace, psl2, FiniteGroup, Psl2Model};
use cosetopo::harness::{Cache, Workspace};
use cosetopo::homology::{chain_complex, smith_normal_form, HomologySummary, RankList};
use cosetopo::pi1::{propagate_triviality, replay, standard_presentation, TrivialityCertificate};
use cosetopo::poset::{atomize, minimal_cover_with, order_complex_budgeted, quillen_reduce, CoverPolicy, FinitePoset};
use cosetopo::topo::*;

/// Face budget for minimal covers; larger covers are compared on their complete skeleta.
const COVER_FACES: usize = 600_000;

struct Gate {
    failures: usize,
    lines: usize,
    /// Only criteria whose id starts with this run.
    only: Option<String>,
}

impl Gate {
    fn line(&mut self, id: &str, what: &str, pass: bool, detail: String, started: Instant) {
        self.lines += 1;
        if !pass {
            self.failures += 1;
        }
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("{verdict} [{id}] {what}: {detail} ({:.1}s)", started.elapsed().as_secs_f64());
    }

    /// Evaluates `f`, turning a library error into a failing line.
    fn check(&mut self, id: &str, what: &str, f: impl FnOnce() -> cosetopo::Result<(bool, String)>) {
        if self.only.as_ref().is_some_and(|o| !id.starts_with(o.as_str())) {
            return;
        }
        let t = Instant::now();
        match f() {
            Ok((pass, detail)) => self.line(id, what, pass, detail, t),
            Err(e) => self.line(id, what, false, format!("error: {e}"), t),
        }
    }
}

fn exact(h: &HomologySummary) -> bool {
    h.valid_through >= h.dimension
}

/// Ranks agree in every dimension both summaries computed exactly, and reduced Euler characteristics agree.
fn agree(a: &HomologySummary, b: &HomologySummary) -> bool {
    let top = a.valid_through.min(b.valid_through).max(-1);
    (-1..=top).all(|d| rank(a, d) == rank(b, d) && torsion(a, d) == torsion(b, d)) && a.reduced_euler == b.reduced_euler
}

fn rank(h: &HomologySummary, d: isize) -> u64 {
    if d < 0 {
        h.betti_minus_one
    } else {
        h.rank(d as usize)
    }
}

fn torsion(h: &HomologySummary, d: isize) -> Vec<String> {
    if d < 0 {
        Vec::new()
    } else {
        h.torsion.get(d as usize).cloned().unwrap_or_default()
    }
}

fn cosets_of_orders(g: &FiniteGroup, orders: &[usize]) -> Vec<usize> {
    let lat = g.lattice();
    lat.proper().filter(|&i| orders.contains(&lat.get(i).order())).collect()
}

fn normal_of_order(g: &FiniteGroup, order: usize) -> usize {
    let lat = g.lattice();
    lat.normal_subgroups(g).into_iter().find(|&i| lat.get(i).order() == order).expect("normal subgroup of that order")
}

fn main() -> ExitCode {
    let all = Instant::now();
    let mut gate = Gate { failures: 0, lines: 0, only: std::env::args().nth(1).filter(|a| !a.starts_with('-')) };
    let ws = match Workspace::catalog(Cache::disabled()) {
        Ok(ws) => ws,
        Err(e) => {
            println!("FAIL catalog construction: {e}");
            return ExitCode::FAILURE;
        }
    };
    let policy = ws.policy;

    gate.check("1", "C(A5) has 1018 vertices and reduces to a bouquet of 1560 two-spheres", || {
        let a5 = ws.by_spec("alt:5");
        let c = coset_poset(a5);
        let h = poset_homology(&c, policy)?;
        let pass = c.len() == 1018
            && exact(&h)
            && h.rank(1) == 0
            && h.rank(2) == 1560
            && h.is_torsion_free()
            && h.reduced_euler == 1560
            && h.rank_list() == RankList::from_dims(&[0, 0, 1560]);
        Ok((pass, format!("{} cosets, reduced Betti {:?}, reduced Euler {}", c.len(), h.nonzero(), h.reduced_euler)))
    });

    gate.check("2", "propagation certificates for M(A5), M(S4), M(PSL2(7)) replay", || {
        let mut parts = Vec::new();
        let mut pass = true;
        for (spec, label) in [("alt:5", "A5"), ("sym:4", "S4"), ("psl2:7", "PSL2(7)")] {
            let p = standard_presentation(ws.by_spec(spec))?;
            let prop = propagate_triviality(&p);
            let ok = match &prop.certificate {
                Some(c) => replay(&p, c).is_ok() && replay(&p, &TrivialityCertificate::from_log(&c.to_log())?).is_ok(),
                None => false,
            };
            pass &= ok;
            parts.push(format!("{label} {}/{} edges", prop.trivial_count(), p.edge_count()));
        }
        Ok((pass, parts.join(", ")))
    });

    gate.check("3", "P(G,-1) = -reduced Euler on the catalog; P(PSL2(7),-1) = -2856", || {
        let mut checked = 0;
        let mut bad = Vec::new();
        for i in 0..ws.len() {
            let g = ws.group(i);
            let t = ws.topology(i)?;
            let h = t.coset_homology()?;
            let z = zeta_report(g, &[-1], Some(h.reduced_euler));
            checked += 1;
            if z.identity_holds != Some(true) || !mobius_table(g).check(g) {
                bad.push(ws.entry(i).label);
            }
        }
        let p = zeta_report(ws.by_spec("psl2:7"), &[], None).p_minus_one;
        Ok((bad.is_empty() && p == -2856, format!("{checked} groups, failures {bad:?}, P(PSL2(7),-1) = {p}")))
    });

    gate.check("4", "solvable sphere counts match computed coset homology", || {
        let mut bad = Vec::new();
        for spec in [
            "cyclic:4",
            "cyclic:6",
            "elem:2^2",
            "sym:3",
            "dihedral:4",
            "dicyclic:2",
            "alt:4",
            "product:cyclic:2,cyclic:4",
            "product:sym:3,cyclic:5",
            "sym:4",
        ] {
            let i = ws.find(spec).expect("catalog member");
            let pred = predict_coset_spheres(ws.group(i))?;
            let t = ws.topology(i)?;
            let h = t.coset_homology()?;
            if !(exact(h) && h.is_torsion_free() && pred.rank_list() == h.rank_list()) {
                bad.push(spec);
            }
        }
        let spot = |spec: &str| -> cosetopo::Result<(isize, u64)> {
            let p = predict_coset_spheres(ws.by_spec(spec))?;
            Ok((p.dimension, p.count))
        };
        let (s3, a4, s3z5) = (spot("sym:3")?, spot("alt:4")?, spot("product:sym:3,cyclic:5")?);
        let pass = bad.is_empty() && s3 == (1, 8) && a4 == (1, 30) && s3z5 == (2, 32);
        Ok((pass, format!("mismatches {bad:?}; S3 {s3:?}, A4 {a4:?}, S3xZ5 {s3z5:?} as (dimension, count)")))
    });

    gate.check("5", "L(Z4) contractible, L(S3) and L(A4) are 3 and 4 zero-spheres", || {
        let mut parts = Vec::new();
        let mut pass = true;
        for (spec, want) in [("cyclic:4", None), ("sym:3", Some(3)), ("alt:4", Some(4))] {
            let i = ws.find(spec).expect("catalog member");
            let t = ws.topology(i)?;
            let h = t.subgroup_homology()?;
            let pred = predict_subgroup_spheres(ws.group(i))?;
            let ok = match want {
                None => h.rank_list() == RankList::point() && pred.contractible,
                Some(n) => h.rank_list() == RankList::from_dims(&[n]) && pred.rank_list() == h.rank_list(),
            };
            pass &= ok && h.is_torsion_free();
            parts.push(format!("{} {:?}", ws.entry(i).label, h.nonzero()));
        }
        Ok((pass, parts.join(", ")))
    });

    gate.check("6", "every rank bound instance holds; A4 8 <= 30 and Z2xZ2 2 <= 3 present", || {
        let mut total = 0;
        let mut bad = Vec::new();
        let seen = |spec: &str, bound: u64, computed: u64| -> cosetopo::Result<bool> {
            let t = ws.topology(ws.find(spec).expect("catalog member"))?;
            Ok(mv_rank_bounds(&t)?.iter().any(|b| b.bound == bound && b.computed == Some(computed)))
        };
        let a4 = seen("alt:4", 8, 30)?;
        let v4 = seen("elem:2^2", 2, 3)?;
        for i in 0..ws.len() {
            let t = ws.topology(i)?;
            for b in mv_rank_bounds(&t)? {
                total += 1;
                if b.holds != Some(true) {
                    bad.push(ws.entry(i).label);
                }
            }
        }
        Ok((bad.is_empty() && a4 && v4, format!("{total} instances, failures {bad:?}, A4 {a4}, Z2xZ2 {v4}")))
    });

    gate.check("7", "2-regular 2-transitive covers of A5 and PSL2(7)", || {
        let a5 = ws.by_spec("alt:5");
        let a5_family = cosets_of_orders(a5, &[12, 10]);
        let va5 = cover_check(a5, &a5_family, 2)?;
        let psl = ws.by_spec("psl2:7");
        let max = psl.lattice().maximal_subgroups().to_vec();
        let vpsl = cover_check(psl, &max, 2)?;
        Ok((
            va5.pass && vpsl.pass && a5_family.len() == 11,
            format!(
                "A5 with {} subgroups {}, PSL2(7) with {} maximal {}",
                a5_family.len(),
                va5.pass,
                max.len(),
                vpsl.pass
            ),
        ))
    });

    gate.check("8", "PSL2(7): trace orders, generating pair classes, maximal subgroup orders", || {
        let g = FiniteGroup::new(psl2(7)?)?;
        let model = Psl2Model::new(&g, 7)?;
        let mut agree_count = 0;
        for e in g.elements().filter(|&e| e != g.identity()) {
            if order_from_trace(7, model.trace_squared(e))? == g.element_order(e) {
                agree_count += 1;
            }
        }
        let aut = model.pgl2_conjugation_action()?;
        let phi: Vec<usize> = [3, 4, 7]
            .iter()
            .map(|&b| generating_pair_classes(&g, &aut, 2, b).map(|c| c.count))
            .collect::<Result<_, _>>()?;
        let lat = g.lattice();
        let mut orders: Vec<usize> = lat.maximal_subgroups().iter().map(|&m| lat.get(m).order()).collect();
        orders.sort_unstable();
        orders.dedup();
        let pass = agree_count == 167 && phi == [1, 1, 3] && orders == [21, 24];
        Ok((pass, format!("{agree_count}/167 orders agree, classes {phi:?}, maximal orders {orders:?}")))
    });

    gate.check("9", "general extension, direct product join and coprime subgroup lemmas", || {
        let mut checks = Vec::new();
        for (spec, order) in [("sym:3", 3), ("alt:4", 4)] {
            let g = ws.by_spec(spec);
            checks.push(general_extension_check(g, normal_of_order(g, order), policy)?);
        }
        let (s3, z5) = (ws.by_spec("sym:3"), ws.by_spec("cyclic:5"));
        checks.extend(direct_product_join_check(s3, z5, policy, true)?);
        checks.extend(direct_product_join_check(ws.by_spec("alt:5"), ws.by_spec("cyclic:2"), policy, true)?);
        checks.push(coprime_subgroup_check(s3, z5, policy)?);
        let bad: Vec<String> =
            checks.iter().filter(|c| c.holds != Some(true)).map(|c| format!("{}: {}", c.name, c.instance)).collect();
        Ok((bad.is_empty() && checks.len() == 7, format!("{} instances, failures {bad:?}", checks.len())))
    });

    gate.check("10", "rank H_n(L(G)) <= rank H_n+1(C(G)) for n <= 2; coprime closure on S3 x Z5", || {
        let mut bad = Vec::new();
        for i in 0..ws.len() {
            let t = ws.topology(i)?;
            if !hom_inequality_report(&t, 2)?.iter().all(|r| r.holds == Some(true)) {
                bad.push(ws.entry(i).label);
            }
        }
        let c = coprime_closure_check(ws.by_spec("sym:3"), ws.by_spec("cyclic:5"), 2)?;
        let pass = bad.is_empty() && c.factors_hold && c.product_holds;
        Ok((pass, format!("{} groups, failures {bad:?}, closure {}", ws.len(), c.factors_hold && c.product_holds)))
    });

    let posets = |i: usize| -> [(&'static str, FinitePoset); 2] {
        let g = ws.group(i);
        [("C", coset_poset(g)), ("L", subgroup_poset(g))]
    };

    gate.check("11a", "boundary of boundary vanishes and Smith forms satisfy divisibility", || {
        let mut matrices = 0;
        let mut bad = Vec::new();
        for i in 0..ws.len() {
            for (name, p) in posets(i) {
                let k = order_complex_budgeted(&quillen_reduce(&p), policy.max_faces);
                let cc = chain_complex(&k)?;
                let dd = cc.check_dd_zero().is_ok();
                let snf = (0..cc.face_counts().len()).all(|d| {
                    matrices += 1;
                    smith_normal_form(cc.boundary(d)).divisibility_holds()
                });
                if !(dd && snf) {
                    bad.push(format!("{}({})", name, ws.entry(i).label));
                }
            }
        }
        Ok((bad.is_empty(), format!("{matrices} boundary matrices, failures {bad:?}")))
    });

    gate.check("11b", "quillen_reduce and reduce_to_maximal_intersections preserve homology", || {
        let unreduced = HomologyPolicy { reduce: false, ..policy };
        let mut bad = Vec::new();
        for i in 0..ws.len() {
            let g = ws.group(i);
            let t = ws.topology(i)?;
            for (name, p) in posets(i) {
                let base = if name == "C" { t.coset_homology()? } else { t.subgroup_homology()? };
                let plain = poset_homology(&p, unreduced)?;
                let max_int = poset_homology(&reduce_to_maximal_intersections(&p, g)?, policy)?;
                if !(agree(base, &plain) && agree(base, &max_int)) {
                    bad.push(format!("{}({})", name, ws.entry(i).label));
                }
            }
        }
        Ok((bad.is_empty(), format!("{} posets, failures {bad:?}", 2 * ws.len())))
    });

    gate.check("11c", "order complex and minimal cover agree on atomized posets", || {
        let cover_policy = CoverPolicy { max_dim: None, max_faces: Some(COVER_FACES) };
        let mut compared = 0;
        let mut bad = Vec::new();
        let mut skeletal = Vec::new();
        for i in 0..ws.len() {
            let t = ws.topology(i)?;
            for (name, p) in posets(i) {
                let Ok(view) = atomize(&p) else { continue };
                let base = if name == "C" { t.coset_homology()? } else { t.subgroup_homology()? };
                let m = cosetopo::homology::reduced_homology(&minimal_cover_with(&view, cover_policy))?;
                compared += 1;
                let top = base.valid_through.min(m.valid_through).max(-1);
                if m.valid_through < m.dimension {
                    skeletal.push(format!("{}({}) through {top}", name, ws.entry(i).label));
                }
                if !(-1..=top).all(|d| rank(base, d) == rank(&m, d) && torsion(base, d) == torsion(&m, d)) {
                    bad.push(format!("{}({})", name, ws.entry(i).label));
                }
            }
        }
        Ok((
            bad.is_empty() && compared > 0,
            format!("{compared} atomized posets, failures {bad:?}, skeletal {skeletal:?}"),
        ))
    });

    gate.check("extra", "closed-form Euler characteristic at p = 13 evaluates to 180181", || {
        let e = euler_psl_formula(13)?;
        Ok((e.euler == 180181 && e.order == 1092, format!("{}", e.euler)))
    });

    gate.check(
        "extra",
        "C(PSL2(7)) has homology only through dimension 3, rank H2 >= 17*168, and matches -P(G,-1)",
        || {
            let i = ws.find("psl2:7").expect("catalog member");
            let t = ws.topology(i)?;
            let h = t.coset_homology()?;
            let p = zeta_report(ws.group(i), &[], None).p_minus_one;
            let top = h.nonzero().iter().map(|&(d, _)| d).max();
            let pass =
                exact(h) && h.rank(2) >= 17 * 168 && top <= Some(3) && h.reduced_euler == -p && h.is_torsion_free();
            Ok((pass, format!("reduced Betti {:?}, reduced Euler {}", h.nonzero(), h.reduced_euler)))
        },
    );

    let secs = all.elapsed().as_secs_f64();
    if gate.only.is_none() {
        gate.line("budget", "full acceptance suite within 30 minutes", secs <= 1800.0, format!("{secs:.0}s"), all);
    }
    println!("{} criteria, {} failed", gate.lines, gate.failures);
    if gate.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
