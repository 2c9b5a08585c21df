//! Upper bounds for the derived dimension with hypothesis tracking, the
//! catalog of Igusa-Todorov parameters, and the search over sets of simples.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algebra::Algebra;
use crate::constructions::ItCertificate;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homology::{pd_set_from_table, simple_pds, PdResult};
use crate::rep::{loewy_length, Representation};
use crate::torsion::{algebra_layer_length, layer_length, SimpleSet};

/// Default bound on the number of finite-pd simples for subset search.
pub const DEFAULT_SEARCH_CAP: usize = 20;

/// Algebra-level invariants shared by every report.
#[derive(Clone, Debug)]
pub struct Invariants {
    pub loewy_length: usize,
    pub pd_simples: Vec<PdResult>,
    pub gldim: PdResult,
}

pub fn invariants<F: Field>(algebra: &Arc<Algebra<F>>, cutoff: usize) -> Result<Invariants> {
    let pd_simples = simple_pds(algebra, cutoff)?;
    let gldim = pd_simples
        .iter()
        .cloned()
        .fold(PdResult::MinusOne, PdResult::max);
    Ok(Invariants {
        loewy_length: loewy_length(&Representation::regular(algebra)),
        pd_simples,
        gldim,
    })
}

/// A bound value: an integer, a vacuous infinite bound, or no bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundValue {
    Finite(i64),
    Infinite,
    Inapplicable,
}

impl BoundValue {
    pub fn finite(&self) -> Option<i64> {
        match self {
            BoundValue::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BoundValue::Finite(v) => s.serialize_i64(*v),
            BoundValue::Infinite => s.serialize_str("infinite"),
            BoundValue::Inapplicable => s.serialize_none(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundEntry {
    pub id: String,
    pub formula: String,
    pub applicable: bool,
    pub value: BoundValue,
    /// Why the entry is (in)applicable.
    pub status: String,
    pub provenance: String,
}

impl BoundEntry {
    fn new(
        id: &str,
        formula: &str,
        provenance: &str,
        value: BoundValue,
        status: impl Into<String>,
    ) -> Self {
        Self {
            id: id.into(),
            formula: formula.into(),
            applicable: value != BoundValue::Inapplicable,
            value,
            status: status.into(),
            provenance: provenance.into(),
        }
    }
}

/// An `(m, n)` Igusa-Todorov parameter pair with the bound `2m + n + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertEntry {
    pub m: usize,
    pub n: usize,
    pub provenance: String,
    pub bound: usize,
    /// Sample modules on which the pair was checked constructively.
    pub samples_checked: usize,
}

impl CertEntry {
    fn new(m: usize, n: usize, provenance: &str) -> Self {
        Self {
            m,
            n,
            provenance: provenance.into(),
            bound: 2 * m + n + 1,
            samples_checked: 0,
        }
    }
}

/// The data of a chosen `V` needed by the bound formulas.
#[derive(Clone, Debug)]
pub struct SetData {
    pub v: SimpleSet,
    pub pd: PdResult,
    pub layer_length: usize,
}

pub fn set_data<F: Field>(algebra: &Arc<Algebra<F>>, inv: &Invariants, v: &SimpleSet) -> SetData {
    SetData {
        v: v.clone(),
        pd: pd_set_from_table(&inv.pd_simples, v),
        layer_length: algebra_layer_length(algebra, v),
    }
}

/// Catalog of parameter pairs: global dimension, Loewy length, the layer
/// length pair for each set with finite `pd`, and the closure under
/// `(m, n) -> (m + i, n - i)` and `(m, n) -> (m, n + 1)`.
pub fn it_certificates(inv: &Invariants, sets: &[SetData]) -> Vec<CertEntry> {
    let mut base = Vec::new();
    if let PdResult::Finite(g) = inv.gldim {
        base.push(CertEntry::new(g, 0, "global-dimension"));
    }
    let ll = inv.loewy_length;
    if ll >= 2 {
        base.push(CertEntry::new(ll - 1, 0, "loewy-resolution"));
        base.push(CertEntry::new(ll - 2, 1, "loewy-resolution"));
        base.push(CertEntry::new(ll - 2, 2, "loewy-resolution"));
    }
    for s in sets {
        if let (Some(pd), true) = (s.pd.finite_value(), s.layer_length >= 2) {
            base.push(CertEntry::new(
                s.layer_length - 2,
                (pd + 2) as usize,
                "layer-length",
            ));
        }
    }
    let mut out: Vec<CertEntry> = Vec::new();
    let mut push = |e: CertEntry| {
        if !out.iter().any(|o| o.m == e.m && o.n == e.n) {
            out.push(e);
        }
    };
    for e in &base {
        push(e.clone());
    }
    for e in &base {
        for i in 1..=e.n {
            push(CertEntry::new(e.m + i, e.n - i, "closure-shift"));
        }
        push(CertEntry::new(e.m, e.n + 1, "closure-raise"));
    }
    out
}

fn pd_status(pd: &PdResult) -> Option<&'static str> {
    match pd {
        PdResult::AtLeast(_) => Some("inapplicable (pd undetermined)"),
        _ => None,
    }
}

/// The formula entries B1 to B9.
pub fn evaluate_bounds(inv: &Invariants, set: &SetData, catalog: &[CertEntry]) -> Vec<BoundEntry> {
    use BoundValue::*;
    let ll = set.layer_length as i64;
    let mut out = Vec::new();
    out.push(BoundEntry::new(
        "B1",
        "LL(Λ) - 1",
        "loewy-length",
        Finite(inv.loewy_length as i64 - 1),
        "always",
    ));
    out.push(match (&inv.gldim, pd_status(&inv.gldim)) {
        (_, Some(s)) => BoundEntry::new("B2", "gldim Λ", "global-dimension", Inapplicable, s),
        (g, None) => match g.finite_value() {
            Some(v) => BoundEntry::new(
                "B2",
                "gldim Λ",
                "global-dimension",
                Finite(v.max(0)),
                "gldim finite",
            ),
            None => BoundEntry::new(
                "B2",
                "gldim Λ",
                "global-dimension",
                Infinite,
                "gldim infinite",
            ),
        },
    });
    let pd = set.pd.finite_value();
    let undetermined = pd_status(&set.pd);
    let family =
        |id: &str, formula: &str, prov: &str, f: &dyn Fn(i64) -> i64, ok: bool, why: &str| {
            if let Some(s) = undetermined {
                return BoundEntry::new(id, formula, prov, Inapplicable, s);
            }
            if !ok {
                return BoundEntry::new(
                    id,
                    formula,
                    prov,
                    Inapplicable,
                    format!("inapplicable ({why})"),
                );
            }
            match pd {
                Some(p) => BoundEntry::new(id, formula, prov, Finite(f(p)), "hypotheses hold"),
                None => BoundEntry::new(id, formula, prov, Infinite, "pd V infinite"),
            }
        };
    out.push(family(
        "B3",
        "(pd V + 2)(ℓℓ^{t_V}(Λ) + 1) - 2",
        "layer-length-product",
        &|p| (p + 2) * (ll + 1) - 2,
        true,
        "",
    ));
    out.push(family(
        "B4",
        "2(pd V + ℓℓ^{t_V}(Λ)) + 1",
        "layer-length-sum",
        &|p| 2 * (p + ll) + 1,
        true,
        "",
    ));
    out.push(family(
        "B5",
        "pd V + 3",
        "small-layer-length",
        &|p| p + 3,
        ll <= 2,
        "ℓℓ^{t_V}(Λ) > 2",
    ));
    let pd_finite = pd.is_some();
    out.push(family(
        "B6",
        "2ℓℓ^{t_V}(Λ) + pd V - 1",
        "layer-length-certificate",
        &|p| 2 * ll + p - 1,
        ll >= 2 && pd_finite,
        if pd_finite {
            "ℓℓ^{t_V}(Λ) < 2"
        } else {
            "pd V infinite"
        },
    ));
    out.push(family(
        "B7",
        "max{2ℓℓ^{t_V}(Λ) + pd V - 1, pd V + 3}",
        "layer-length-max",
        &|p| (2 * ll + p - 1).max(p + 3),
        pd_finite,
        "pd V infinite",
    ));
    match catalog.iter().min_by_key(|c| (c.bound, c.m)) {
        Some(c) => out.push(BoundEntry::new(
            "B8",
            "2m + n + 1",
            "it-certificate",
            Finite(c.bound as i64),
            format!("from ({}, {}) via {}", c.m, c.n, c.provenance),
        )),
        None => out.push(BoundEntry::new(
            "B8",
            "2m + n + 1",
            "it-certificate",
            Inapplicable,
            "inapplicable (no certificate)",
        )),
    }
    match catalog.iter().filter(|c| c.m == 1).min_by_key(|c| c.n) {
        Some(c) => out.push(BoundEntry::new(
            "B9",
            "n + 3",
            "one-step-certificate",
            Finite(c.n as i64 + 3),
            format!("from (1, {}) via {}", c.n, c.provenance),
        )),
        None => out.push(BoundEntry::new(
            "B9",
            "n + 3",
            "one-step-certificate",
            Inapplicable,
            "inapplicable (no (1, n) certificate)",
        )),
    }
    out
}

/// Minimum over the applicable finite entries.
pub fn best_value(entries: &[BoundEntry]) -> Option<i64> {
    entries.iter().filter_map(|e| e.value.finite()).min()
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraSummary {
    pub name: String,
    pub dim: usize,
    #[serde(rename = "LL")]
    pub loewy_length: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub algebra: AlgebraSummary,
    pub field: String,
    pub pd_simples: Vec<String>,
    pub gldim: String,
    #[serde(rename = "V")]
    pub v: Vec<String>,
    #[serde(rename = "V_complement")]
    pub v_complement: Vec<String>,
    #[serde(rename = "pd_V")]
    pub pd_v: String,
    pub layer_length: usize,
    pub layer_length_by_projective: Vec<usize>,
    pub bounds: Vec<BoundEntry>,
    pub best: Option<i64>,
    pub certificates: Vec<CertEntry>,
    pub warnings: Vec<String>,
}

impl BoundReport {
    pub fn bound(&self, id: &str) -> Option<&BoundEntry> {
        self.bounds.iter().find(|b| b.id == id)
    }
}

/// Full report for one `V`. A constructive certificate, when given, marks
/// the matching catalog entry with its sample count.
pub fn derived_dim_bounds<F: Field>(
    algebra: &Arc<Algebra<F>>,
    v: &SimpleSet,
    cutoff: usize,
    cert: Option<&ItCertificate<F>>,
) -> Result<BoundReport> {
    let inv = invariants(algebra, cutoff)?;
    report_from_invariants(algebra, &inv, v, cert)
}

pub fn report_from_invariants<F: Field>(
    algebra: &Arc<Algebra<F>>,
    inv: &Invariants,
    v: &SimpleSet,
    cert: Option<&ItCertificate<F>>,
) -> Result<BoundReport> {
    let nv = algebra.num_vertices();
    let set = set_data(algebra, inv, v);
    let mut catalog = it_certificates(inv, std::slice::from_ref(&set));
    if let Some(c) = cert {
        match catalog.iter_mut().find(|e| e.m == c.m && e.n == c.n) {
            Some(e) => e.samples_checked = c.evidence.len(),
            None => {
                let mut e = CertEntry::new(c.m, c.n, "constructive");
                e.samples_checked = c.evidence.len();
                catalog.push(e);
            }
        }
    }
    let bounds = evaluate_bounds(inv, &set, &catalog);

    // B6 must agree with 2m + n + 1 for the layer-length pair.
    if let Some(b6) = bounds
        .iter()
        .find(|b| b.id == "B6")
        .and_then(|b| b.value.finite())
    {
        let ll = set.layer_length;
        let pd = set.pd.finite_value().expect("B6 needs finite pd");
        let through_cert = 2 * (ll as i64 - 2) + (pd + 2) + 1;
        if through_cert != b6 {
            return Err(Error::Verification(format!(
                "B6 = {b6} disagrees with the certificate bound {through_cert}"
            )));
        }
    }

    let mut warnings = Vec::new();
    let q = algebra.quiver();
    for (i, pd) in inv.pd_simples.iter().enumerate() {
        if pd.is_undetermined() {
            warnings.push(format!(
                "pd S({}) undetermined up to the cutoff ({pd})",
                q.vertex_name(i)
            ));
        }
    }
    let by_proj: Vec<usize> = (0..nv)
        .map(|i| layer_length(&Representation::projective(algebra, i), v))
        .collect();
    let attained: Vec<&str> = (0..nv)
        .filter(|&i| by_proj[i] == set.layer_length)
        .map(|i| q.vertex_name(i))
        .collect();
    if set.layer_length > 0 && attained.len() == 1 && nv > 1 {
        let runner_up = by_proj
            .iter()
            .copied()
            .filter(|&l| l < set.layer_length)
            .max()
            .unwrap_or(0);
        warnings.push(format!(
            "layer length {} is attained only at P({}); every other projective has layer length at most {runner_up}",
            set.layer_length, attained[0]
        ));
    }
    Ok(BoundReport {
        algebra: AlgebraSummary {
            name: algebra.name().to_string(),
            dim: algebra.dim(),
            loewy_length: inv.loewy_length,
        },
        field: algebra.field().descriptor(),
        pd_simples: inv.pd_simples.iter().map(|p| p.to_string()).collect(),
        gldim: inv.gldim.to_string(),
        v: v.names(algebra),
        v_complement: v.complement(nv).names(algebra),
        pd_v: set.pd.to_string(),
        layer_length: set.layer_length,
        layer_length_by_projective: by_proj,
        best: best_value(&bounds),
        bounds,
        certificates: catalog,
        warnings,
    })
}

/// One row of the `(pd V, ℓℓ)` Pareto table.
#[derive(Clone, Debug, Serialize)]
pub struct ParetoRow {
    #[serde(rename = "V")]
    pub v: Vec<String>,
    #[serde(rename = "pd_V")]
    pub pd_v: i64,
    pub layer_length: usize,
    pub value: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    #[serde(rename = "best_V")]
    pub best_v: Vec<String>,
    pub best_value: Option<i64>,
    pub subsets_evaluated: usize,
    pub pareto: Vec<ParetoRow>,
    pub report: BoundReport,
    #[serde(skip)]
    pub best_set: SimpleSet,
}

/// Minimum over the applicable finite entries among B3 to B7.
fn set_objective(inv: &Invariants, set: &SetData) -> Option<i64> {
    let entries = evaluate_bounds(inv, set, &[]);
    entries
        .iter()
        .filter(|e| matches!(e.id.as_str(), "B3" | "B4" | "B5" | "B6" | "B7"))
        .filter_map(|e| e.value.finite())
        .min()
}

/// Exhaustive search over subsets of the simples with finite `pd`,
/// minimizing the best of B3 to B7; ties go to smaller `V`, then to the
/// lexicographically smaller vertex list.
pub fn search_best_v<F: Field>(
    algebra: &Arc<Algebra<F>>,
    cutoff: usize,
    cap: usize,
) -> Result<SearchResult> {
    let inv = invariants(algebra, cutoff)?;
    let finite: Vec<usize> = (0..algebra.num_vertices())
        .filter(|&i| inv.pd_simples[i].finite_value().is_some())
        .collect();
    if finite.len() > cap {
        return Err(Error::CapExceeded(format!(
            "{} simples have finite pd but the cap is {cap}; raise --cap or pass --V",
            finite.len()
        )));
    }
    let rows: Vec<(Vec<usize>, SetData, Option<i64>)> = (0u64..1 << finite.len())
        .into_par_iter()
        .map(|mask| {
            let members: Vec<usize> = (0..finite.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| finite[b])
                .collect();
            let set = set_data(
                algebra,
                &inv,
                &SimpleSet::from_indices(members.iter().copied()),
            );
            let obj = set_objective(&inv, &set);
            (members, set, obj)
        })
        .collect();
    let key =
        |r: &(Vec<usize>, SetData, Option<i64>)| (r.2.unwrap_or(i64::MAX), r.0.len(), r.0.clone());
    let best = rows
        .iter()
        .min_by_key(|r| key(r))
        .expect("the empty set is always a candidate");

    // Pareto front in (pd V, ℓℓ), each pair represented by its best set.
    let mut pareto: Vec<&(Vec<usize>, SetData, Option<i64>)> = Vec::new();
    for r in &rows {
        let (p, l) = (
            r.1.pd.finite_value().expect("finite by construction"),
            r.1.layer_length,
        );
        let dominated = rows.iter().any(|o| {
            let (op, ol) = (o.1.pd.finite_value().expect("finite"), o.1.layer_length);
            op <= p && ol <= l && (op < p || ol < l)
        });
        if dominated {
            continue;
        }
        match pareto
            .iter_mut()
            .find(|x| x.1.pd == r.1.pd && x.1.layer_length == l)
        {
            Some(x) if key(r) < key(x) => *x = r,
            Some(_) => {}
            None => pareto.push(r),
        }
    }
    pareto.sort_by_key(|r| (r.1.pd.finite_value(), r.1.layer_length));
    let names = |idx: &[usize]| SimpleSet::from_indices(idx.iter().copied()).names(algebra);
    let best_set = SimpleSet::from_indices(best.0.iter().copied());
    let report = report_from_invariants(algebra, &inv, &best_set, None)?;
    Ok(SearchResult {
        best_v: names(&best.0),
        best_value: best.2,
        subsets_evaluated: rows.len(),
        pareto: pareto
            .into_iter()
            .map(|r| ParetoRow {
                v: names(&r.0),
                pd_v: r.1.pd.finite_value().expect("finite"),
                layer_length: r.1.layer_length,
                value: r.2.unwrap_or(i64::MAX),
            })
            .collect(),
        report,
        best_set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::PrimeField;

    #[test]
    fn a2_with_second_simple() {
        let a = corpus::a2().build(PrimeField::default()).unwrap();
        let r = derived_dim_bounds(&a, &SimpleSet::from_indices([1]), 10, None).unwrap();
        assert_eq!(r.pd_v, "0");
        assert_eq!(r.layer_length, 1);
        let v = |id| r.bound(id).unwrap().value;
        assert_eq!(v("B3"), BoundValue::Finite(2));
        assert_eq!(v("B4"), BoundValue::Finite(3));
        assert_eq!(v("B5"), BoundValue::Finite(3));
        assert_eq!(v("B6"), BoundValue::Inapplicable);
        assert!(r
            .certificates
            .iter()
            .any(|c| (c.m, c.n, c.bound) == (1, 0, 3)));
    }

    #[test]
    fn empty_set_matches_loewy_bound() {
        let a = corpus::example1(5)
            .unwrap()
            .build(PrimeField::default())
            .unwrap();
        let r = derived_dim_bounds(&a, &SimpleSet::empty(), 30, None).unwrap();
        assert_eq!(r.bound("B3").unwrap().value, r.bound("B1").unwrap().value);
    }

    #[test]
    fn semisimple_search() {
        let a = corpus::semisimple(3)
            .unwrap()
            .build(PrimeField::default())
            .unwrap();
        let s = search_best_v(&a, 10, DEFAULT_SEARCH_CAP).unwrap();
        assert!(s.best_v.is_empty());
        assert_eq!(s.report.bound("B1").unwrap().value, BoundValue::Finite(0));
        assert_eq!(s.report.best, Some(0));
    }

    #[test]
    fn loewy_two_catalog() {
        let a = corpus::dual_numbers().build(PrimeField::default()).unwrap();
        let inv = invariants(&a, 5).unwrap();
        let cat = it_certificates(&inv, &[]);
        for pair in [(1, 0), (0, 1), (0, 2)] {
            assert!(cat.iter().any(|c| (c.m, c.n) == pair));
        }
    }
}
