use serde::Serialize;

use super::Workspace;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::homology::HomologySummary;
use crate::pi1::{n_local_check, propagate_triviality, replay, standard_presentation, TrivialityCertificate};
use crate::topo::{
    coprime_closure_check, coprime_subgroup_check, cover_check, direct_product_join_check, euler_psl_formula,
    general_extension_check, hom_inequality_report, mobius_table, mv_rank_bounds, predict_coset_spheres,
    predict_subgroup_spheres, quotient_by, subgroup_group, wedge_decomposition_check, zeta_report, LemmaCheck,
    SpherePrediction,
};

/// Suite names accepted by [`run_suite`]; `all` runs every one.
pub const SUITES: [&str; 8] = ["solvable", "bounds", "covers", "pi1", "zeta", "inequality", "lemmas", "all"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub suite: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckLine {
    fn new(suite: &str, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { suite: suite.into(), name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<CheckLine>,
}

pub fn run_suite(ws: &Workspace, suite: &str) -> Result<Vec<SuiteReport>> {
    let names: Vec<&str> = match suite {
        "all" => SUITES[..SUITES.len() - 1].to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(Error::Precondition(format!("unknown suite `{s}`; expected one of {}", SUITES.join(", ")))),
    };
    names
        .into_iter()
        .map(|s| {
            let checks = match s {
                "solvable" => solvable(ws)?,
                "bounds" => bounds(ws)?,
                "covers" => covers(ws)?,
                "pi1" => pi1(ws)?,
                "zeta" => zeta(ws)?,
                "inequality" => inequality(ws)?,
                _ => lemmas(ws)?,
            };
            Ok(SuiteReport { suite: s.into(), pass: checks.iter().all(|c| c.pass), checks })
        })
        .collect()
}

fn exact(h: &HomologySummary) -> bool {
    h.valid_through >= h.dimension
}

fn compare(suite: &str, name: String, p: &SpherePrediction, h: &HomologySummary) -> CheckLine {
    let (want, got) = (p.rank_list(), h.rank_list());
    let pass = exact(h) && h.is_torsion_free() && want == got;
    CheckLine::new(suite, name, pass, format!("predicted {:?}, computed {:?}", want.nonzero(), got.nonzero()))
}

/// Sphere-count predictions against brute-force homology on every solvable catalog group.
fn solvable(ws: &Workspace) -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    for i in 0..ws.len() {
        let g = ws.group(i);
        if !g.is_solvable() {
            continue;
        }
        let t = ws.topology(i)?;
        let label = ws.entry(i).label;
        out.push(compare("solvable", format!("{label} coset"), &predict_coset_spheres(g)?, t.coset_homology()?));
        out.push(compare(
            "solvable",
            format!("{label} subgroup"),
            &predict_subgroup_spheres(g)?,
            t.subgroup_homology()?,
        ));
    }
    Ok(out)
}

fn bounds(ws: &Workspace) -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    for i in 0..ws.len() {
        let t = ws.topology(i)?;
        for b in mv_rank_bounds(&t)? {
            let detail = format!("{:?}: bound {}, computed {:?}", b.kind, b.bound, b.computed);
            out.push(CheckLine::new(
                "bounds",
                format!("{} rank bound", ws.entry(i).label),
                b.holds == Some(true),
                detail,
            ));
        }
    }
    Ok(out)
}

fn covers(ws: &Workspace) -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    let a5 = ws.by_spec("alt:5");
    let lat = a5.lattice();
    let family: Vec<usize> = lat.proper().filter(|&i| matches!(lat.get(i).order(), 10 | 12)).collect();
    let v = cover_check(a5, &family, 2)?;
    out.push(CheckLine::new("covers", "A5 by A4 and D10 copies, n = 2", v.pass, format!("{} subgroups", family.len())));
    let psl = ws.by_spec("psl2:7");
    let max = psl.lattice().maximal_subgroups().to_vec();
    let v = cover_check(psl, &max, 2)?;
    out.push(CheckLine::new(
        "covers",
        "PSL2(7) by maximal subgroups, n = 2",
        v.pass,
        format!("{} subgroups", max.len()),
    ));
    for (spec, label) in [("alt:5", "A5"), ("psl2:7", "PSL2(7)"), ("sym:4", "S4")] {
        let v = n_local_check(ws.by_spec(spec), 2)?;
        let detail = format!("{} edges checked, {} residual", v.edges_checked, v.residual.len());
        out.push(CheckLine::new("covers", format!("{label} 2-local triviality"), v.pass, detail));
    }
    Ok(out)
}

/// Propagation certificates and their replay through the text log.
fn pi1(ws: &Workspace) -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    for (spec, label) in [("sym:4", "M(S4)"), ("alt:5", "M(A5)"), ("psl2:7", "M(PSL2(7))")] {
        let g = ws.by_spec(spec);
        let p = standard_presentation(g)?;
        let prop = propagate_triviality(&p);
        let (pass, detail) = match &prop.certificate {
            Some(c) => {
                let log = TrivialityCertificate::from_log(&c.to_log())?;
                let ok = replay(&p, c).is_ok() && replay(&p, &log).is_ok();
                (ok, format!("{} steps over {} edges", c.steps.len(), p.edge_count()))
            }
            None => (false, format!("{} residual edges", prop.residual().len())),
        };
        out.push(CheckLine::new("pi1", format!("{label} certificate replays"), pass, detail));
    }
    Ok(out)
}

fn zeta(ws: &Workspace) -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    for i in 0..ws.len() {
        let g = ws.group(i);
        let t = ws.topology(i)?;
        let h = t.coset_homology()?;
        let mobius_ok = mobius_table(g).check(g);
        let z = zeta_report(g, &[-1], Some(h.reduced_euler));
        out.push(CheckLine::new(
            "zeta",
            format!("{} P(G,-1) = -reduced Euler", ws.entry(i).label),
            mobius_ok && z.identity_holds == Some(true),
            format!("P(G,-1) = {}, reduced Euler {}", z.p_minus_one, h.reduced_euler),
        ));
    }
    let p = zeta_report(ws.by_spec("psl2:7"), &[-1], None).p_minus_one;
    out.push(CheckLine::new("zeta", "PSL2(7) Mobius value", p == -2856, format!("P(G,-1) = {p}")));
    let e = euler_psl_formula(13)?;
    out.push(CheckLine::new("zeta", "PSL2(13) closed form", e.euler == 180181, format!("{}", e.euler)));
    Ok(out)
}

fn inequality(ws: &Workspace) -> Result<Vec<CheckLine>> {
    let mut out = Vec::new();
    for i in 0..ws.len() {
        let t = ws.topology(i)?;
        let rows = hom_inequality_report(&t, 2)?;
        let pass = rows.iter().all(|r| r.holds == Some(true));
        let detail: Vec<String> =
            rows.iter().map(|r| format!("n={}: {:?} <= {:?}", r.n, r.subgroup_rank, r.coset_rank)).collect();
        out.push(CheckLine::new("inequality", format!("{} n <= 2", ws.entry(i).label), pass, detail.join("; ")));
    }
    let c = coprime_closure_check(ws.by_spec("sym:3"), ws.by_spec("cyclic:5"), 2)?;
    out.push(CheckLine::new(
        "inequality",
        "coprime closure S3 x Z5",
        c.factors_hold && c.product_holds,
        format!("factors {}, product {}", c.factors_hold, c.product_holds),
    ));
    Ok(out)
}

fn normal_of_order(g: &FiniteGroup, order: usize) -> Option<usize> {
    g.lattice().normal_subgroups(g).into_iter().find(|&i| g.lattice().get(i).order() == order)
}

fn lemma_line(c: &LemmaCheck) -> CheckLine {
    let show =
        |r: &Option<crate::homology::RankList>| r.as_ref().map(|r| format!("{:?}", r.nonzero())).unwrap_or("-".into());
    CheckLine::new(
        "lemmas",
        format!("{}: {}", c.name, c.instance),
        c.holds == Some(true),
        format!("{} vs {}", show(&c.lhs), show(&c.rhs)),
    )
}

fn lemmas(ws: &Workspace) -> Result<Vec<CheckLine>> {
    let policy = ws.policy;
    let mut out = Vec::new();
    for (spec, order) in [("sym:3", 3), ("alt:4", 4)] {
        let g = ws.by_spec(spec);
        let n = normal_of_order(g, order).expect("normal subgroup present");
        out.push(lemma_line(&general_extension_check(g, n, policy)?));
        out.push(lemma_line(&wedge_decomposition_check(g, n, policy)?));
    }
    let a5 = ws.by_spec("alt:5");
    let z2 = ws.by_spec("cyclic:2");
    for c in direct_product_join_check(ws.by_spec("sym:3"), ws.by_spec("cyclic:5"), policy, true)? {
        out.push(lemma_line(&c));
    }
    for c in direct_product_join_check(a5, z2, policy, true)? {
        out.push(lemma_line(&c));
    }
    out.push(lemma_line(&coprime_subgroup_check(ws.by_spec("sym:3"), ws.by_spec("cyclic:5"), policy)?));
    let s4 = ws.by_spec("sym:4");
    let v4 = normal_of_order(s4, 4).expect("Klein subgroup of S4");
    let q = quotient_by(s4, v4)?;
    let k = subgroup_group(s4, v4)?;
    out.push(CheckLine::new(
        "lemmas",
        "S4 / V4 quotient and kernel orders",
        q.order() == 6 && k.order() == 4,
        format!("{} and {}", q.order(), k.order()),
    ));
    Ok(out)
}
