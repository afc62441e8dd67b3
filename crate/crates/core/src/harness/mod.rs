//! Job pipeline, report emission and verification suites behind the command line.

mod cache;
mod verify;

use std::sync::OnceLock;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{catalog_group, default_catalog, CatalogEntry, FiniteGroup};
use crate::homology::HomologySummary;
use crate::pi1::{propagate_triviality, replay, spanning_presentation, standard_presentation, Propagation};
use crate::topo::{
    classify_connectivity, coset_poset, family_membership, hom_inequality_report, mv_rank_bounds, poset_homology,
    predict_coset_spheres, predict_subgroup_spheres, subgroup_poset, zeta_report, GroupTopology, HomologyPolicy,
};

pub use cache::{Cache, CacheKey};
pub use verify::{run_suite, CheckLine, SuiteReport, SUITES};

/// Report schema version.
pub const SCHEMA: u32 = 1;

/// Default order cap for command-line jobs.
pub const DEFAULT_CAP: usize = 2000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Targets {
    pub coset: bool,
    pub subgroup: bool,
}

impl Targets {
    pub const ALL: Targets = Targets { coset: true, subgroup: true };

    pub fn any(&self) -> bool {
        self.coset || self.subgroup
    }

    fn union(self, o: Targets) -> Targets {
        Targets { coset: self.coset || o.coset, subgroup: self.subgroup || o.subgroup }
    }
}

/// One requested computation on one group.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub group: String,
    pub homology: Targets,
    pub predict: Targets,
    /// Compare predictions with computed homology.
    pub verify: bool,
    pub zeta: bool,
    pub classify: bool,
    pub bounds: bool,
    pub certificate: bool,
    pub cap: usize,
    pub policy: HomologyPolicy,
}

impl JobSpec {
    pub fn new(group: impl Into<String>) -> Self {
        Self {
            group: group.into(),
            homology: Targets::default(),
            predict: Targets::default(),
            verify: false,
            zeta: false,
            classify: false,
            bounds: false,
            certificate: false,
            cap: DEFAULT_CAP,
            policy: HomologyPolicy::default(),
        }
    }

    /// Adds the homology every requested check depends on.
    pub fn closed(mut self) -> Self {
        if self.verify {
            self.homology = self.homology.union(self.predict);
        }
        if self.bounds || self.classify {
            self.homology = Targets::ALL;
        }
        self
    }
}

pub fn load_group(spec: &str, cap: usize) -> Result<FiniteGroup> {
    FiniteGroup::with_cap(catalog_group(spec)?, cap)
}

fn homology_key(g: &FiniteGroup, target: &str, policy: HomologyPolicy) -> CacheKey {
    CacheKey::new(g, format!("{target}-homology:max_faces={}:reduce={}", policy.max_faces, policy.reduce))
}

/// Fills the topology caches from `cache`, computing and storing what is missing.
pub fn prime_topology(t: &GroupTopology<'_>, cache: &Cache, targets: Targets) -> Result<()> {
    if targets.coset {
        let key = homology_key(t.group, "coset", t.policy);
        let h = cache.get_or_compute(&key, || poset_homology(&coset_poset(t.group), t.policy))?;
        t.set_coset_homology(h);
    }
    if targets.subgroup {
        let key = homology_key(t.group, "subgroup", t.policy);
        let h = cache.get_or_compute(&key, || poset_homology(&subgroup_poset(t.group), t.policy))?;
        t.set_subgroup_homology(h);
    }
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn prediction_value(r: Result<crate::topo::SpherePrediction>) -> Result<Value> {
    match r {
        Ok(p) => Ok(to_value(&p)),
        Err(Error::NotSolvable) => Ok(json!({ "error": "group is not solvable" })),
        Err(e) => Err(e),
    }
}

/// Certificate section: presentation size, propagation outcome and replay.
pub fn certificate_section(g: &FiniteGroup) -> Result<(Value, Propagation)> {
    let (p, tree) = if g.is_cyclic() {
        (spanning_presentation(g), "breadth-first")
    } else {
        (standard_presentation(g)?, "star at identity")
    };
    let prop = propagate_triviality(&p);
    let replayed = prop.certificate.as_ref().map(|c| replay(&p, c).is_ok());
    let residual = prop.residual();
    let v = json!({
        "tree": tree,
        "vertices": p.vertex_count(),
        "edges": p.edge_count(),
        "triangles": p.triangle_count(),
        "trivial_edges": prop.trivial_count(),
        "issued": prop.certificate.is_some(),
        "replayed": replayed,
        "steps": prop.steps.len(),
        "residual_edges": residual.len(),
        "residual_sample": residual.iter().take(8).collect::<Vec<_>>(),
    });
    Ok((v, prop))
}

/// Runs a job and returns the JSON report plus whether every requested verification passed.
pub fn cmd_compute(job: &JobSpec, cache: &Cache) -> Result<(Value, bool)> {
    let job = job.clone().closed();
    let g = load_group(&job.group, job.cap)?;
    let t = GroupTopology::with_policy(&g, job.policy);
    prime_topology(&t, cache, job.homology)?;
    let family = family_membership(&g);
    let mut report = serde_json::Map::new();
    report.insert("schema".into(), json!(SCHEMA));
    report.insert(
        "group".into(),
        json!({
            "spec": job.group,
            "order": g.order(),
            "degree": g.perm_group().degree(),
            "abelian": g.is_abelian(),
            "cyclic": g.is_cyclic(),
            "solvable": g.is_solvable(),
            "simple": g.is_simple(),
            "in_f": family.in_f,
            "in_f_prime": family.in_f_prime,
            "subgroups": g.lattice().len(),
        }),
    );
    let mut ok = true;
    if job.homology.any() {
        let mut posets = serde_json::Map::new();
        let mut hom = serde_json::Map::new();
        if job.homology.coset {
            let c = coset_poset(&g);
            posets.insert("coset".into(), json!({ "elements": c.len(), "relations": c.relation_count() }));
            hom.insert("coset".into(), to_value(t.coset_homology()?));
        }
        if job.homology.subgroup {
            let l = subgroup_poset(&g);
            posets.insert("subgroup".into(), json!({ "elements": l.len(), "relations": l.relation_count() }));
            hom.insert("subgroup".into(), to_value(t.subgroup_homology()?));
        }
        report.insert("posets".into(), Value::Object(posets));
        report.insert("homology".into(), Value::Object(hom));
    }
    if job.predict.any() {
        let mut pred = serde_json::Map::new();
        let mut checks = Vec::new();
        if job.predict.coset {
            pred.insert("coset".into(), prediction_value(predict_coset_spheres(&g))?);
            if job.verify {
                checks.push(verify_prediction("coset", predict_coset_spheres(&g), t.coset_homology()?));
            }
        }
        if job.predict.subgroup {
            pred.insert("subgroup".into(), prediction_value(predict_subgroup_spheres(&g))?);
            if job.verify {
                checks.push(verify_prediction("subgroup", predict_subgroup_spheres(&g), t.subgroup_homology()?));
            }
        }
        report.insert("predictions".into(), Value::Object(pred));
        if job.verify {
            ok &= checks.iter().all(|c| c.pass);
            report.insert("verification".into(), to_value(&checks));
        }
    }
    if job.zeta {
        let chi = job.homology.coset.then(|| t.coset_homology().map(|h| h.reduced_euler)).transpose()?;
        let z = zeta_report(&g, &[-1, 0, 1, 2], chi);
        ok &= z.identity_holds != Some(false);
        report.insert("zeta".into(), to_value(&z));
    }
    if job.classify {
        let c = classify_connectivity(&t, !g.is_cyclic())?;
        ok &= !c.pi1_conflict;
        report.insert("classification".into(), to_value(&c));
    }
    if job.bounds {
        let b = mv_rank_bounds(&t)?;
        let rows = hom_inequality_report(&t, 2)?;
        ok &= b.iter().all(|x| x.holds != Some(false)) && rows.iter().all(|r| r.holds != Some(false));
        report.insert("bounds".into(), json!({ "rank_bounds": to_value(&b), "inequality": to_value(&rows) }));
    }
    if job.certificate {
        let (v, _) = certificate_section(&g)?;
        report.insert("certificate".into(), v);
    }
    Ok((Value::Object(report), ok))
}

fn verify_prediction(target: &str, pred: Result<crate::topo::SpherePrediction>, h: &HomologySummary) -> CheckLine {
    match pred {
        Ok(p) => {
            let (want, got) = (p.rank_list(), h.rank_list());
            let exact = h.valid_through >= h.dimension;
            CheckLine {
                suite: "compute".into(),
                name: format!("{target} prediction"),
                pass: exact && want == got && h.is_torsion_free(),
                detail: format!("predicted {:?}, computed {:?}", want.nonzero(), got.nonzero()),
            }
        }
        Err(e) => CheckLine {
            suite: "compute".into(),
            name: format!("{target} prediction"),
            pass: true,
            detail: format!("no prediction: {e}"),
        },
    }
}

/// Betti table rows `(group, poset, dimension, rank, torsion)` for CSV export.
pub fn betti_rows(report: &Value) -> Vec<[String; 5]> {
    let spec = report["group"]["spec"].as_str().unwrap_or_default().to_string();
    let mut rows = Vec::new();
    if let Some(hom) = report.get("homology").and_then(Value::as_object) {
        for (target, h) in hom {
            let Ok(h) = serde_json::from_value::<HomologySummary>(h.clone()) else {
                continue;
            };
            rows.push([spec.clone(), target.clone(), "-1".into(), h.betti_minus_one.to_string(), String::new()]);
            for (d, b) in h.betti.iter().enumerate() {
                let tors = h.torsion.get(d).map(|t| t.join(" ")).unwrap_or_default();
                rows.push([spec.clone(), target.clone(), d.to_string(), b.to_string(), tors]);
            }
        }
    }
    rows
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogRow {
    pub spec: String,
    pub label: String,
    pub order: usize,
    pub solvable: bool,
    pub simple: bool,
    pub in_f: bool,
    pub in_f_prime: bool,
}

impl CatalogRow {
    /// `spec, order n, [in F' | in F], [solvable | simple]`.
    pub fn line(&self) -> String {
        let mut parts = vec![self.spec.clone(), format!("order {}", self.order)];
        if self.in_f_prime {
            parts.push("in F'".into());
        } else if self.in_f {
            parts.push("in F".into());
        }
        if self.solvable {
            parts.push("solvable".into());
        }
        if self.simple {
            parts.push("simple".into());
        }
        parts.join(", ")
    }
}

pub fn cmd_catalog() -> Result<Vec<CatalogRow>> {
    default_catalog()
        .into_iter()
        .map(|CatalogEntry { spec, label }| {
            let g = load_group(spec, usize::MAX)?;
            let f = family_membership(&g);
            Ok(CatalogRow {
                spec: spec.into(),
                label: label.into(),
                order: g.order(),
                solvable: g.is_solvable(),
                simple: g.is_simple(),
                in_f: f.in_f,
                in_f_prime: f.in_f_prime,
            })
        })
        .collect()
}

/// Catalog groups with lazily computed, cache-backed homology shared between suites.
pub struct Workspace {
    pub policy: HomologyPolicy,
    cache: Cache,
    entries: Vec<(CatalogEntry, FiniteGroup)>,
    coset: Vec<OnceLock<HomologySummary>>,
    subgroup: Vec<OnceLock<HomologySummary>>,
}

impl Workspace {
    pub fn catalog(cache: Cache) -> Result<Self> {
        let entries = default_catalog()
            .into_iter()
            .map(|e| Ok((e.clone(), load_group(e.spec, usize::MAX)?)))
            .collect::<Result<Vec<_>>>()?;
        let n = entries.len();
        Ok(Self {
            policy: HomologyPolicy::default(),
            cache,
            entries,
            coset: (0..n).map(|_| OnceLock::new()).collect(),
            subgroup: (0..n).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, i: usize) -> &CatalogEntry {
        &self.entries[i].0
    }

    pub fn group(&self, i: usize) -> &FiniteGroup {
        &self.entries[i].1
    }

    pub fn find(&self, spec: &str) -> Option<usize> {
        self.entries.iter().position(|(e, _)| e.spec == spec)
    }

    pub fn by_spec(&self, spec: &str) -> &FiniteGroup {
        self.group(self.find(spec).unwrap_or_else(|| panic!("{spec} is not in the catalog")))
    }

    /// Topology of catalog group `i` with both homologies loaded.
    pub fn topology(&self, i: usize) -> Result<GroupTopology<'_>> {
        let g = self.group(i);
        let t = GroupTopology::with_policy(g, self.policy);
        for (cell, target) in [(&self.coset[i], "coset"), (&self.subgroup[i], "subgroup")] {
            let h = match cell.get() {
                Some(h) => h.clone(),
                None => {
                    let key = homology_key(g, target, self.policy);
                    let h = self.cache.get_or_compute(&key, || {
                        let p = if target == "coset" { coset_poset(g) } else { subgroup_poset(g) };
                        poset_homology(&p, self.policy)
                    })?;
                    cell.get_or_init(|| h).clone()
                }
            };
            if target == "coset" {
                t.set_coset_homology(h);
            } else {
                t.set_subgroup_homology(h);
            }
        }
        Ok(t)
    }
}
