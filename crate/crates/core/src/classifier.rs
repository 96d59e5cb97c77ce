//! Full pipelines: purely non-symplectic classification per order, the
//! not-purely variants, case records and table emission.

use std::cell::RefCell;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{divisors, divisors_desc, gcd, is_prime};
pub use crate::data::SymplecticData;
use crate::data::{DataStore, Fixture, PrintedOverride};
use crate::error::{Error, Result};
use crate::geomfilters::{
    enumerate_curve_scenarios, order3_candidates, order3_candidates_unfiltered, placement_verdict,
    residual_assignments, residual_euler_values, BaseCase, InvolutionInvariants, Order3Invariants, PlacementCandidate,
    ResidualProblem, ScenarioRecord,
};
use crate::lefschetz::{
    all_dims, chi_from_dims, enumerate_dims, enumerate_type_counts, invariant_rank, ns_rank, power_pushforward,
    ChiConstraint, DimsMode, EigenspaceDims, EulerProfile, PushforwardReading, TypeCountConstraints, TypeCountVector,
};

pub const PURELY_ORDERS: [u32; 5] = [7, 14, 21, 28, 42];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Purely,
    /// σ^power is symplectic
    NotPurely {
        power: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Admissible,
    Excluded {
        stage: String,
        reason: String,
        citation: String,
    },
}

impl Status {
    fn filter(stage: &str, reason: impl Into<String>) -> Self {
        Status::Excluded {
            stage: stage.into(),
            reason: reason.into(),
            citation: format!("filter:{stage}"),
        }
    }

    pub fn is_admissible(&self) -> bool {
        matches!(self, Status::Admissible)
    }

    pub fn stage(&self) -> Option<&str> {
        match self {
            Status::Admissible => None,
            Status::Excluded { stage, .. } => Some(stage),
        }
    }
}

/// Curves (by genus) and isolated points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedLocus {
    pub curves: Vec<u32>,
    pub points: u32,
}

impl FixedLocus {
    pub fn new(curves: &[u32], points: u32) -> Self {
        let mut c = curves.to_vec();
        c.sort_by(|a, b| b.cmp(a));
        FixedLocus { curves: c, points }
    }

    pub fn chi(&self) -> i64 {
        self.points as i64 + self.curves.iter().map(|&g| 2 - 2 * g as i64).sum::<i64>()
    }
}

impl fmt::Display for FixedLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let mut count: BTreeMap<Reverse<u32>, u32> = BTreeMap::new();
        for &g in &self.curves {
            *count.entry(Reverse(g)).or_default() += 1;
        }
        for (Reverse(g), c) in count {
            let name = match g {
                0 => "R".to_string(),
                1 => "E".to_string(),
                g => format!("C{g}"),
            };
            parts.push(if c == 1 { name } else { format!("{c}{name}") });
        }
        if self.points > 0 {
            parts.push(format!("{}pts", self.points));
        }
        if parts.is_empty() {
            write!(f, "∅")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsInfo {
    pub rank: u32,
    /// orders of the powers whose invariant lattice has this rank
    pub attaining_orders: Vec<u32>,
    /// e.g. "S(σ7)=U⊕K7"
    pub lattice: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub order: u32,
    pub mode: Mode,
    pub label: String,
    /// label without involution or order-3 invariants
    pub variant: String,
    pub base: Option<String>,
    pub type_counts: Option<TypeCountVector>,
    /// points of the residual action sitting on curves of the base power
    pub on_curve: Option<u32>,
    pub points: Option<i64>,
    pub dims: Option<EigenspaceDims>,
    pub euler: Option<EulerProfile>,
    pub involution: Option<InvolutionInvariants>,
    pub involution_options: Vec<InvolutionInvariants>,
    pub order3: Option<Order3Invariants>,
    /// Fix(σ^{n/k}) keyed by the order k of the power
    pub loci: BTreeMap<u32, FixedLocus>,
    pub ns: Option<NsInfo>,
    pub reading: Option<PushforwardReading>,
    pub status: Status,
    pub example: Option<String>,
    pub notes: Vec<String>,
}

impl CaseRecord {
    fn new(order: u32, mode: Mode, variant: &str) -> Self {
        CaseRecord {
            order,
            mode,
            label: variant.to_string(),
            variant: variant.to_string(),
            base: None,
            type_counts: None,
            on_curve: None,
            points: None,
            dims: None,
            euler: None,
            involution: None,
            involution_options: vec![],
            order3: None,
            loci: BTreeMap::new(),
            ns: None,
            reading: None,
            status: Status::Admissible,
            example: None,
            notes: vec![],
        }
    }

    pub fn chi(&self, k: u32) -> Option<i64> {
        self.euler.as_ref().and_then(|e| e.of_order(k))
    }

    fn set_dims(&mut self, d: &EigenspaceDims) {
        self.euler = Some(EulerProfile::from_dims(d));
        self.dims = Some(d.clone());
    }
}

/// Output of one classification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub order: u32,
    pub mode: Mode,
    pub records: Vec<CaseRecord>,
    /// per-reading count of admissible records (not-purely runs only)
    pub verdicts: BTreeMap<String, usize>,
    pub divergent: bool,
    pub notes: Vec<String>,
}

impl Classification {
    /// Admissible records under the primary reading.
    pub fn admissible(&self) -> Vec<&CaseRecord> {
        self.records
            .iter()
            .filter(|r| r.status.is_admissible() && r.reading != Some(PushforwardReading::Orbit))
            .collect()
    }

    pub fn admissible_under(&self, reading: PushforwardReading) -> Vec<&CaseRecord> {
        self.records
            .iter()
            .filter(|r| r.status.is_admissible() && r.reading.is_none_or(|x| x == reading))
            .collect()
    }
}

fn lattice_name(data: &DataStore, base: Option<&str>) -> Option<String> {
    base.and_then(|b| data.base(b)).map(|b| b.lattice.clone())
}

/// Néron–Severi rank with its preferred realizing invariant lattice: the
/// order-7 power first, then the involution, then any other. Order 28
/// reports the involution first.
pub fn ns_info(dims: &EigenspaceDims, order7_lattice: Option<&str>) -> NsInfo {
    let r = ns_rank(dims);
    let orders = r.attaining_orders(dims.order);
    let prefer = if dims.order == 28 { [2u32, 7] } else { [7, 2] };
    let pick = prefer
        .into_iter()
        .find(|o| orders.contains(o))
        .or_else(|| orders.first().copied());
    let lattice = match pick {
        None => "no invariant lattice attains the rank".to_string(),
        Some(7) => match order7_lattice {
            Some(l) => format!("S(σ7)={l}"),
            None => "S(σ7)".to_string(),
        },
        Some(o) => format!("S(σ{o})"),
    };
    NsInfo {
        rank: r.rank,
        attaining_orders: orders,
        lattice,
    }
}

fn orbit_counts(n_points: u32, e: u32) -> BTreeSet<i64> {
    // points of Fix(σ^e) that σ fixes: N minus a sum of nontrivial orbit sizes
    let sizes: Vec<u32> = divisors(e).into_iter().filter(|&c| c > 1).collect();
    let mut reach = vec![false; n_points as usize + 1];
    reach[0] = true;
    for t in 0..=n_points as usize {
        if reach[t] {
            for &c in &sizes {
                if t + c as usize <= n_points as usize {
                    reach[t + c as usize] = true;
                }
            }
        }
    }
    reach
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(s, _)| n_points as i64 - s as i64)
        .collect()
}

/// Runs pipelines against one data store, memoizing finished orders.
pub struct Classifier {
    data: DataStore,
    purely: RefCell<BTreeMap<u32, Classification>>,
    not_purely: RefCell<BTreeMap<(u32, u32, PushforwardReading), Vec<EigenspaceDims>>>,
}

impl Classifier {
    pub fn new(data: DataStore) -> Self {
        Classifier {
            data,
            purely: RefCell::new(BTreeMap::new()),
            not_purely: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn data(&self) -> &DataStore {
        &self.data
    }

    fn label_rank(&self, order: u32, variant: &str) -> usize {
        let plain = variant.trim_end_matches('*');
        self.data
            .labels
            .iter()
            .position(|l| l.order == order && l.label == plain)
            .unwrap_or(usize::MAX)
    }

    pub fn classify_purely(&self, n: u32) -> Result<Classification> {
        if let Some(c) = self.purely.borrow().get(&n) {
            return Ok(c.clone());
        }
        let c = match n {
            7 => self.purely7()?,
            14 => self.purely14()?,
            21 => self.purely21()?,
            28 => self.purely28()?,
            42 => self.purely42()?,
            _ => return Err(Error::UnsupportedOrder(n)),
        };
        self.check_chi(&c)?;
        self.purely.borrow_mut().insert(n, c.clone());
        Ok(c)
    }

    /// Both Lefschetz routes must agree on χ_n wherever both are known.
    fn check_chi(&self, c: &Classification) -> Result<()> {
        for r in &c.records {
            if let (Some(v), Some(d)) = (&r.type_counts, &r.dims) {
                if v.chi() != chi_from_dims(d, 1) {
                    return Err(Error::Inconsistent(format!(
                        "{}: χ from type counts {} but {} from dimensions {}",
                        r.label,
                        v.chi(),
                        chi_from_dims(d, 1),
                        d
                    )));
                }
            }
        }
        Ok(())
    }

    fn purely7(&self) -> Result<Classification> {
        let mut records = Vec::new();
        for alpha in 0..=2 {
            for v in enumerate_type_counts(7, &TypeCountConstraints::euler_box(7, alpha))? {
                let bases: Vec<&str> = self
                    .data
                    .base_cases
                    .iter()
                    .filter(|b| b.m == v.m && b.alpha() == v.alpha)
                    .map(|b| b.label.as_str())
                    .collect();
                let label = if bases.is_empty() {
                    format!("{v}")
                } else {
                    bases.join("/")
                };
                let mut r = CaseRecord::new(7, Mode::Purely, &label);
                r.points = Some(v.points() as i64);
                r.type_counts = Some(v);
                records.push(r);
            }
        }
        Ok(Classification {
            order: 7,
            mode: Mode::Purely,
            records,
            verdicts: BTreeMap::new(),
            divergent: false,
            notes: vec![],
        })
    }

    fn ledger_status(&self, order: u32, labels: &[&str], stage: &str) -> Option<Status> {
        labels.iter().find_map(|l| {
            self.data
                .ledger_entry(order, l)
                .filter(|e| e.stage == stage)
                .map(|e| Status::Excluded {
                    stage: format!("ledger:{}", e.stage),
                    reason: e.reason.clone(),
                    citation: e.citation.clone(),
                })
        })
    }

    fn base_locus(b: &BaseCase) -> FixedLocus {
        FixedLocus::new(&b.curves, b.points())
    }

    fn purely14(&self) -> Result<Classification> {
        let mut records = Vec::new();
        let mut seen = BTreeSet::new();
        for base in &self.data.base_cases {
            for s in enumerate_curve_scenarios(base, 2) {
                let c = TypeCountConstraints::against_base(14, 2, &base.m, s.alpha, s.on_curve);
                for v in enumerate_type_counts(14, &c)? {
                    let plain = self
                        .data
                        .variant_label(14, &base.label, &v.m, v.alpha)
                        .ok_or_else(|| Error::Inconsistent(format!("no name for {v} over case {}", base.label)))?;
                    let variant = format!("{plain}{}", if s.translation { "*" } else { "" });
                    if !seen.insert(variant.clone()) {
                        continue;
                    }
                    records.extend(self.order14_rows(base, &s, &v, &variant)?);
                }
            }
        }
        records.sort_by_key(|r| {
            (
                self.label_rank(14, &r.variant),
                r.variant.ends_with('*'),
                r.dims.as_ref().map(|d| Reverse(d.values.clone())),
                r.involution,
            )
        });
        Ok(Classification {
            order: 14,
            mode: Mode::Purely,
            records,
            verdicts: BTreeMap::new(),
            divergent: false,
            notes: vec![],
        })
    }

    fn order14_rows(
        &self,
        base: &BaseCase,
        s: &ScenarioRecord,
        v: &TypeCountVector,
        variant: &str,
    ) -> Result<Vec<CaseRecord>> {
        let mut proto = CaseRecord::new(14, Mode::Purely, variant);
        proto.base = Some(base.label.clone());
        proto.type_counts = Some(v.clone());
        proto.on_curve = Some(s.on_curve);
        proto.points = Some(v.points() as i64);
        proto.loci.insert(14, FixedLocus::new(&s.fixed_genera(), v.points()));
        proto.loci.insert(7, Self::base_locus(base));
        if s.translation {
            proto.notes.push("acts on E by a translation".into());
        }
        if let Some(st) = self.ledger_status(14, &[variant], "type_counts") {
            proto.status = st;
            return Ok(vec![proto]);
        }
        let req = [
            (1, ChiConstraint::Exact(v.chi())),
            (2, ChiConstraint::Exact(base.chi())),
        ];
        let dims = enumerate_dims(14, &req, DimsMode::Purely);
        if dims.is_empty() {
            proto.status = Status::filter("dims", "no eigenspace dimensions give these Euler characteristics");
            return Ok(vec![proto]);
        }
        let mut out = Vec::new();
        for d in dims.iter().rev() {
            let mut row = proto.clone();
            row.set_dims(d);
            row.ns = Some(ns_info(d, lattice_name(&self.data, Some(&base.label)).as_deref()));
            let options = self
                .data
                .nikulin
                .involution_candidates(invariant_rank(d, 7))
                .unwrap_or_default();
            row.involution_options = options.clone();
            if options.is_empty() {
                row.status = Status::filter("involution", "no involution has an invariant lattice of this rank");
                out.push(row);
                continue;
            }
            for inv in options {
                let mut r = row.clone();
                r.involution = Some(inv);
                r.label = match inv {
                    InvolutionInvariants::Generic { .. } => format!("{variant}{inv}"),
                    _ => format!("{variant}[{inv}]"),
                };
                r.loci.insert(2, FixedLocus::new(&inv.components(), 0));
                let cand = PlacementCandidate {
                    order: 14,
                    exponent: 7,
                    m: v.m.clone(),
                    components: inv.components(),
                    fixed_genera: s.fixed_genera(),
                    cycles: true,
                };
                r.status = match placement_verdict(&cand) {
                    Some(stage) => Status::filter(stage.name(), placement_reason(stage.name())),
                    None => self
                        .ledger_status(14, &[&r.label, variant], "placement")
                        .unwrap_or(Status::Admissible),
                };
                out.push(r);
            }
        }
        Ok(out)
    }

    fn purely21(&self) -> Result<Classification> {
        let mut records = Vec::new();
        for base in &self.data.base_cases {
            for s in enumerate_curve_scenarios(base, 3) {
                let c = TypeCountConstraints::against_base(21, 3, &base.m, s.alpha, s.on_curve);
                for v in enumerate_type_counts(21, &c)? {
                    let vname = self
                        .data
                        .variant_label(21, &base.label, &v.m, v.alpha)
                        .ok_or_else(|| Error::Inconsistent(format!("no name for {v}")))?
                        .to_string();
                    records.extend(self.order21_rows(base, &s, &v, &vname)?);
                }
            }
        }
        records.sort_by_key(|r| {
            (
                r.base.as_deref() != Some("C"),
                r.base.clone(),
                self.label_rank(21, r.notes.first().map(|s| s.as_str()).unwrap_or("")),
                r.order3.map(|o| Reverse(o.points)),
            )
        });
        // one record per (vector, base, order-3 candidate): scenarios can repeat
        let mut seen = BTreeSet::new();
        records.retain(|r| {
            let key = (
                r.label.clone(),
                r.base.clone(),
                r.dims.clone(),
                r.status.is_admissible(),
            );
            seen.insert(key)
        });
        Ok(Classification {
            order: 21,
            mode: Mode::Purely,
            records,
            verdicts: BTreeMap::new(),
            divergent: false,
            notes: vec![],
        })
    }

    fn order21_rows(
        &self,
        base: &BaseCase,
        s: &ScenarioRecord,
        v: &TypeCountVector,
        vname: &str,
    ) -> Result<Vec<CaseRecord>> {
        let variant = format!("{}({vname})", base.label);
        let mut proto = CaseRecord::new(21, Mode::Purely, &variant);
        proto.base = Some(base.label.clone());
        proto.type_counts = Some(v.clone());
        proto.on_curve = Some(s.on_curve);
        proto.points = Some(v.points() as i64);
        proto.notes.push(vname.to_string());
        proto.loci.insert(21, FixedLocus::new(&s.fixed_genera(), v.points()));
        proto.loci.insert(7, Self::base_locus(base));
        if let Some(st) = self.ledger_status(21, &[&variant], "type_counts") {
            proto.status = st;
            return Ok(vec![proto]);
        }
        let req = [
            (1, ChiConstraint::Exact(v.chi())),
            (3, ChiConstraint::Exact(base.chi())),
        ];
        let dims = enumerate_dims(21, &req, DimsMode::Purely);
        if dims.is_empty() {
            proto.status = Status::filter("dims", "no eigenspace dimensions give these Euler characteristics");
            return Ok(vec![proto]);
        }
        let mut out = Vec::new();
        for d in &dims {
            let mut row = proto.clone();
            row.set_dims(d);
            row.ns = Some(ns_info(d, lattice_name(&self.data, Some(&base.label)).as_deref()));
            let chi3 = chi_from_dims(d, 7);
            let all = order3_candidates_unfiltered(chi3);
            if all.is_empty() {
                row.status = Status::filter("order3", format!("χ3 = {chi3} is not 3N - 6 for any N ≥ 1"));
                out.push(row);
                continue;
            }
            let kept = order3_candidates(chi3);
            for c in all {
                let mut r = row.clone();
                r.order3 = Some(c);
                r.label = match c.genus {
                    Some(g) => format!("{}({},{},{})", base.label, g, c.rationals, c.points),
                    None => format!("{}(-,-,{})", base.label, c.points),
                };
                r.loci.insert(3, FixedLocus::new(&c.components(), c.points));
                r.status = if !kept.contains(&c) {
                    Status::filter("homma", "the order-3 curve cannot carry an automorphism of order 7")
                } else {
                    let p = ResidualProblem {
                        components: c.components(),
                        points: c.points,
                        q: 7,
                        fixed_genera: s.fixed_genera(),
                        target: v.points(),
                        homma: true,
                        cycles: true,
                    };
                    if residual_assignments(&p).is_empty() {
                        Status::filter(
                            "order7_action",
                            "σ21 acting with order 7 on Fix(σ3) cannot produce these fixed curves and points",
                        )
                    } else {
                        Status::Admissible
                    }
                };
                out.push(r);
            }
        }
        Ok(out)
    }

    fn purely28(&self) -> Result<Classification> {
        let half = self.classify_purely(14)?;
        let admissible14: Vec<&CaseRecord> = half.admissible();
        // vector name -> (vector, bases, scenarios)
        let mut vectors: BTreeMap<String, (TypeCountVector, Vec<(BaseCase, ScenarioRecord)>)> = BTreeMap::new();
        for base in &self.data.base_cases {
            for s in enumerate_curve_scenarios(base, 4) {
                let c = TypeCountConstraints::against_base(28, 4, &base.m, s.alpha, s.on_curve);
                for v in enumerate_type_counts(28, &c)? {
                    let name = self
                        .data
                        .variant_label(28, &base.label, &v.m, v.alpha)
                        .ok_or_else(|| Error::Inconsistent(format!("no name for {v}")))?
                        .to_string();
                    vectors
                        .entry(name)
                        .or_insert_with(|| (v.clone(), vec![]))
                        .1
                        .push((base.clone(), s.clone()));
                }
            }
        }
        let mut records = Vec::new();
        for (name, (v, sources)) in &vectors {
            let chis: BTreeSet<i64> = sources.iter().map(|(b, _)| b.chi()).collect();
            let req = [
                (1, ChiConstraint::Exact(v.chi())),
                (4, ChiConstraint::OneOf(chis.iter().copied().collect())),
            ];
            let mut dims = enumerate_dims(28, &req, DimsMode::Purely);
            dims.sort_by_key(|d| d.values.iter().rev().copied().collect::<Vec<_>>());
            if dims.is_empty() {
                let mut r = CaseRecord::new(28, Mode::Purely, name);
                r.type_counts = Some(v.clone());
                r.points = Some(v.points() as i64);
                r.status = Status::filter("dims", "no eigenspace dimensions give these Euler characteristics");
                records.push(r);
                continue;
            }
            for d in &dims {
                let chi7 = chi_from_dims(d, 4);
                let Some((base, s)) = sources.iter().find(|(b, _)| b.chi() == chi7) else {
                    continue;
                };
                let mut r = CaseRecord::new(28, Mode::Purely, name);
                r.base = Some(base.label.clone());
                r.type_counts = Some(v.clone());
                r.on_curve = Some(s.on_curve);
                r.points = Some(v.points() as i64);
                r.set_dims(d);
                r.ns = Some(ns_info(d, lattice_name(&self.data, Some(&base.label)).as_deref()));
                r.loci.insert(28, FixedLocus::new(&s.fixed_genera(), v.points()));
                r.loci.insert(7, Self::base_locus(base));
                let image = power_pushforward(d, 2, PushforwardReading::Orbit);
                let matches: Vec<&&CaseRecord> = admissible14
                    .iter()
                    .filter(|h| {
                        h.dims.as_ref() == Some(&image)
                            && sources.iter().any(|(b, _)| Some(&b.label) == h.base.as_ref())
                    })
                    .collect();
                if matches.is_empty() {
                    r.status = Status::filter(
                        "order14_match",
                        format!("σ2-power dimensions {image} are not an admissible order-14 case"),
                    );
                    records.push(r);
                    continue;
                }
                let chi4 = chi_from_dims(d, 7);
                let good: Vec<&&CaseRecord> = matches
                    .iter()
                    .copied()
                    .filter(|h| {
                        let comps = h.involution.map(|i| i.components()).unwrap_or_default();
                        residual_euler_values(&comps, 0, 2).contains(&chi4)
                    })
                    .collect();
                let h = good.first().copied().unwrap_or(matches[0]);
                r.label = h.label.clone();
                r.variant = h.label.clone();
                r.base = h.base.clone();
                r.involution = h.involution;
                if let Some(l) = h.loci.get(&14) {
                    r.loci.insert(14, l.clone());
                }
                if let Some(l) = h.loci.get(&2) {
                    r.loci.insert(2, l.clone());
                }
                r.notes.push(name.clone());
                r.status = if good.is_empty() {
                    Status::filter("chi4", format!("χ4 = {chi4} cannot come from σ4 acting on Fix(σ2)"))
                } else {
                    Status::Admissible
                };
                records.push(r);
            }
        }
        Ok(Classification {
            order: 28,
            mode: Mode::Purely,
            records,
            verdicts: BTreeMap::new(),
            divergent: false,
            notes: vec![],
        })
    }

    fn purely42(&self) -> Result<Classification> {
        let c21 = self.classify_purely(21)?;
        let c14 = self.classify_purely(14)?;
        let adm14 = c14.admissible();
        let mut records = Vec::new();
        for h in c21.admissible() {
            let (Some(v21), Some(d21)) = (&h.type_counts, &h.dims) else {
                continue;
            };
            let fixed21 = h.loci.get(&21).map(|l| l.curves.clone()).unwrap_or_default();
            let pseudo = BaseCase {
                label: h.label.clone(),
                m: v21.m.clone(),
                curves: fixed21,
                lattice: String::new(),
                citation: String::new(),
            };
            let chi3 = chi_from_dims(d21, 7);
            let mut seen = BTreeSet::new();
            for s in enumerate_curve_scenarios(&pseudo, 2) {
                let c = TypeCountConstraints::against_base(42, 2, &v21.m, s.alpha, s.on_curve);
                for v in enumerate_type_counts(42, &c)? {
                    let req = [
                        (1, ChiConstraint::Exact(v.chi())),
                        (2, ChiConstraint::Exact(v21.chi())),
                        (6, ChiConstraint::Exact(chi_from_dims(d21, 3))),
                        (14, ChiConstraint::Exact(chi3)),
                    ];
                    for d in enumerate_dims(42, &req, DimsMode::Purely) {
                        if !seen.insert((v.clone(), d.clone())) {
                            continue;
                        }
                        let mut r = CaseRecord::new(42, Mode::Purely, &h.label);
                        r.base = h.base.clone();
                        r.type_counts = Some(v.clone());
                        r.on_curve = Some(s.on_curve);
                        r.points = Some(v.points() as i64);
                        r.set_dims(&d);
                        r.order3 = h.order3;
                        r.ns = Some(ns_info(&d, lattice_name(&self.data, h.base.as_deref()).as_deref()));
                        r.loci.insert(42, FixedLocus::new(&s.fixed_genera(), v.points()));
                        for k in [7, 21, 3] {
                            if let Some(l) = h.loci.get(&k) {
                                r.loci.insert(k, l.clone());
                            }
                        }
                        r.notes.push(format!("σ21 of type {}", h.label));
                        let image = power_pushforward(&d, 3, PushforwardReading::Orbit);
                        let m14: Vec<&&CaseRecord> = adm14.iter().filter(|x| x.dims.as_ref() == Some(&image)).collect();
                        r.status = match m14.first() {
                            None => Status::filter(
                                "order14_match",
                                format!("σ3-power dimensions {image} are not an admissible order-14 case"),
                            ),
                            Some(x) if x.base != h.base => {
                                r.label = x.variant.clone();
                                Status::filter(
                                    "order7_base",
                                    format!(
                                        "σ14 of type {} needs σ7 of type {}",
                                        x.variant,
                                        x.base.clone().unwrap_or_default()
                                    ),
                                )
                            }
                            Some(x) => {
                                r.label = x.variant.clone();
                                r.variant = x.variant.clone();
                                Status::Admissible
                            }
                        };
                        records.push(r);
                    }
                }
            }
        }
        records.sort_by_key(|r| {
            (
                !r.status.is_admissible(),
                r.base.as_deref() != Some("C"),
                self.label_rank(14, &r.variant),
            )
        });
        Ok(Classification {
            order: 42,
            mode: Mode::Purely,
            records,
            verdicts: BTreeMap::new(),
            divergent: false,
            notes: vec![],
        })
    }

    /// σ^k symplectic. Evaluated under both pushforward readings; the
    /// printed reading (unit weights plus quoted relations) is primary.
    pub fn classify_not_purely(&self, n: u32, k: u32) -> Result<Classification> {
        if !PURELY_ORDERS[1..].contains(&n) {
            return Err(Error::UnsupportedOrder(n));
        }
        if k <= 1 || k >= n || !n.is_multiple_of(k) {
            return Err(Error::Invalid(format!(
                "σ^{k} is not a proper nontrivial power of an order-{n} automorphism"
            )));
        }
        let g = n / k;
        if self.data.symplectic(g).is_none() {
            return Err(Error::NoSymplectic(g));
        }
        let mut records = Vec::new();
        let mut verdicts = BTreeMap::new();
        let mut sets = Vec::new();
        for reading in [PushforwardReading::Unit, PushforwardReading::Orbit] {
            let rs = self.not_purely_reading(n, k, reading)?;
            let adm: BTreeSet<EigenspaceDims> = rs
                .iter()
                .filter(|r| r.status.is_admissible())
                .filter_map(|r| r.dims.clone())
                .collect();
            verdicts.insert(reading_name(reading).to_string(), adm.len());
            sets.push(adm);
            records.extend(rs);
        }
        let divergent = sets[0] != sets[1];
        let mut notes = Vec::new();
        if divergent {
            notes.push(format!(
                "readings diverge: printed admits {}, orbit admits {}",
                show_set(&sets[0]),
                show_set(&sets[1])
            ));
        }
        Ok(Classification {
            order: n,
            mode: Mode::NotPurely { power: k },
            records,
            verdicts,
            divergent,
            notes,
        })
    }

    fn not_purely_survivors(&self, n: u32, e: u32, reading: PushforwardReading) -> Result<Vec<EigenspaceDims>> {
        if let Some(v) = self.not_purely.borrow().get(&(n, e, reading)) {
            return Ok(v.clone());
        }
        let out = if e <= 1 || e >= n || !n.is_multiple_of(e) || self.data.symplectic(n / e).is_none() {
            vec![]
        } else {
            self.not_purely_reading(n, e, reading)?
                .into_iter()
                .filter(|r| r.status.is_admissible())
                .filter_map(|r| r.dims)
                .collect()
        };
        self.not_purely.borrow_mut().insert((n, e, reading), out.clone());
        Ok(out)
    }

    fn not_purely_reading(&self, n: u32, e: u32, reading: PushforwardReading) -> Result<Vec<CaseRecord>> {
        let g = n / e;
        let sym = self.data.symplectic(g).ok_or(Error::NoSymplectic(g))?;
        let over = match reading {
            PushforwardReading::Unit => self.data.printed_override(n, e),
            PushforwardReading::Orbit => None,
        };
        let chi_at = |d: &EigenspaceDims, j: u32| -> i64 {
            over.and_then(|o| o.chi.iter().find(|f| f.power == j))
                .map(|f| f.eval(d))
                .unwrap_or_else(|| chi_from_dims(d, j))
        };
        let allowed = orbit_counts(sym.points, e);
        let candidates: Vec<EigenspaceDims> = match over {
            Some(o) => override_candidates(n, e, o),
            None => all_dims(n, DimsMode::Multiplier(e))
                .into_iter()
                .filter(|d| invariant_rank(d, e) == sym.rank)
                .collect(),
        }
        .into_iter()
        .filter(|d| chi_at(d, e) == sym.points as i64 && allowed.contains(&chi_at(d, 1)))
        .collect();
        let mode = Mode::NotPurely { power: e };
        let mut out = Vec::new();
        for d in candidates {
            let mut r = CaseRecord::new(n, mode, &d.to_string());
            r.reading = Some(reading);
            r.dims = Some(d.clone());
            r.euler = Some(EulerProfile {
                order: n,
                chi: d.divisors().into_iter().map(|k| (k, chi_at(&d, n / k))).collect(),
            });
            let npts = chi_at(&d, 1);
            r.points = Some(npts);
            r.loci.insert(n, FixedLocus::new(&[], npts.max(0) as u32));
            r.loci.insert(g, FixedLocus::new(&[], sym.points));
            if d.weighted_total() == 22 {
                r.ns = Some(ns_info(&d, None));
            }
            if let Some(o) = over {
                r.notes.push(format!("relations: {}", o.citation));
            }
            r.status = self.cross_checks(&mut r, &d, n, e, reading, &chi_at)?;
            if r.status.is_admissible() {
                r.status = self.residual_check(&mut r, &d, n, e, npts, &chi_at);
            }
            out.push(r);
        }
        out.sort_by_key(|r| (r.points, r.dims.clone()));
        Ok(out)
    }

    fn cross_checks(
        &self,
        r: &mut CaseRecord,
        d: &EigenspaceDims,
        n: u32,
        e: u32,
        reading: PushforwardReading,
        chi_at: &dyn Fn(&EigenspaceDims, u32) -> i64,
    ) -> Result<Status> {
        let mut first_fail: Option<Status> = None;
        for j in divisors(n).into_iter().filter(|&j| j > 1 && j < n) {
            let m = n / j;
            let ej = e / gcd(e, j);
            let chi = chi_at(d, j);
            let fail = if ej == m {
                match m {
                    7 => (![3, 10, 17].contains(&chi)).then(|| format!("χ7 = {chi} is not an order-7 value")),
                    2 => {
                        let opts = self
                            .data
                            .nikulin
                            .involution_candidates(invariant_rank(d, j))
                            .unwrap_or_default();
                        r.involution_options = opts.clone();
                        r.notes.push(format!("χ2 = {chi}"));
                        opts.is_empty().then(|| format!("no involution with χ2 = {chi}"))
                    }
                    3 => order3_candidates(chi)
                        .is_empty()
                        .then(|| format!("χ3 = {chi} admits no order-3 fixed locus")),
                    14 | 21 | 28 | 42 => {
                        let purely = self.classify_purely(m)?;
                        let adm = purely.admissible();
                        match reading {
                            PushforwardReading::Orbit => {
                                let image = power_pushforward(d, j, reading);
                                let ok = adm.iter().any(|h| h.dims.as_ref() == Some(&image));
                                (!ok).then(|| format!("σ^{j} would be a purely order-{m} case with dimensions {image}"))
                            }
                            // the printed argument identifies the power by its Euler characteristics
                            PushforwardReading::Unit => {
                                let profile: BTreeMap<u32, i64> =
                                    divisors(m).into_iter().map(|k| (k, chi_at(d, n / k))).collect();
                                let ok = adm.iter().any(|h| h.euler.as_ref().map(|e| &e.chi) == Some(&profile));
                                let shown: Vec<String> = profile.iter().map(|(k, v)| format!("χ{k}={v}")).collect();
                                (!ok).then(|| {
                                    format!("σ^{j} would be a purely order-{m} case with {}", shown.join(", "))
                                })
                            }
                        }
                    }
                    _ => None,
                }
            } else if ej == 1 {
                match self.data.symplectic(m) {
                    None => Some(format!("σ^{j} would be symplectic of order {m}")),
                    Some(s) if s.points as i64 != chi => Some(format!(
                        "symplectic σ^{j} of order {m} needs χ = {}, got {chi}",
                        s.points
                    )),
                    _ => None,
                }
            } else if !PURELY_ORDERS[1..].contains(&m) {
                // no classification of this order to compare against
                None
            } else {
                let image = power_pushforward(d, j, reading);
                let ok = self.not_purely_survivors(m, ej, reading)?.contains(&image);
                (!ok).then(|| format!("σ^{j} dimensions {image} are not a not-purely order-{m} case"))
            };
            if let (Some(msg), None) = (fail, &first_fail) {
                first_fail = Some(Status::filter("cross_order", msg));
            }
        }
        Ok(first_fail.unwrap_or(Status::Admissible))
    }

    /// σ acting with prime order on the fixed locus of a prime-order purely
    /// non-symplectic power must leave exactly N isolated fixed points.
    fn residual_check(
        &self,
        r: &mut CaseRecord,
        d: &EigenspaceDims,
        n: u32,
        e: u32,
        npts: i64,
        chi_at: &dyn Fn(&EigenspaceDims, u32) -> i64,
    ) -> Status {
        for q in [2u32, 3, 7] {
            if !n.is_multiple_of(q) || !is_prime(n / q) {
                continue;
            }
            let j = n / q;
            if e / gcd(e, j) != q {
                continue;
            }
            let loci: Vec<(String, FixedLocus)> = match q {
                2 => self
                    .data
                    .nikulin
                    .involution_candidates(invariant_rank(d, j))
                    .unwrap_or_default()
                    .into_iter()
                    .map(|i| (i.to_string(), FixedLocus::new(&i.components(), 0)))
                    .collect(),
                3 => order3_candidates_unfiltered(chi_at(d, j))
                    .into_iter()
                    .map(|c| (c.to_string(), FixedLocus::new(&c.components(), c.points)))
                    .collect(),
                _ => self
                    .data
                    .base_cases
                    .iter()
                    .filter(|b| b.chi() == chi_at(d, j))
                    .map(|b| (b.label.clone(), Self::base_locus(b)))
                    .collect(),
            };
            let good: Vec<&(String, FixedLocus)> = loci
                .iter()
                .filter(|(_, l)| {
                    npts >= 0
                        && !residual_assignments(&ResidualProblem {
                            components: l.curves.clone(),
                            points: l.points,
                            q: n / q,
                            fixed_genera: vec![],
                            target: npts as u32,
                            homma: true,
                            cycles: true,
                        })
                        .is_empty()
                })
                .collect();
            if good.is_empty() {
                return Status::filter(
                    "residual",
                    format!(
                        "σ cannot act with order {} on any fixed locus of its order-{q} power",
                        n / q
                    ),
                );
            }
            let names: Vec<&str> = good.iter().map(|(s, _)| s.as_str()).collect();
            r.notes.push(format!("Fix(σ{q}): {}", names.join(", ")));
            r.loci.insert(q, good[0].1.clone());
        }
        Status::Admissible
    }
}

fn override_candidates(n: u32, e: u32, o: &PrintedOverride) -> Vec<EigenspaceDims> {
    let divs = divisors_desc(n);
    let mut out = Vec::new();
    let mut cur = vec![0u32; divs.len()];
    fn rec(i: usize, cur: &mut Vec<u32>, n: u32, o: &PrintedOverride, out: &mut Vec<EigenspaceDims>) {
        if i == cur.len() {
            let d = EigenspaceDims {
                order: n,
                values: cur.clone(),
            };
            if o.equations.iter().all(|f| f.eval(&d) == f.value) {
                out.push(d);
            }
            return;
        }
        for x in 0..=22 {
            cur[i] = x;
            rec(i + 1, cur, n, o, out);
        }
    }
    rec(0, &mut cur, n, o, &mut out);
    out.retain(|d| d.get(1) >= 1 && d.get(e) >= 1);
    out
}

fn reading_name(r: PushforwardReading) -> &'static str {
    match r {
        PushforwardReading::Unit => "printed",
        PushforwardReading::Orbit => "orbit",
    }
}

fn show_set(s: &BTreeSet<EigenspaceDims>) -> String {
    if s.is_empty() {
        "nothing".into()
    } else {
        s.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ")
    }
}

fn placement_reason(stage: &str) -> &'static str {
    match stage {
        "count" => "no action on Fix(σ2) accounts for the isolated points",
        "homma" => "a curve of Fix(σ2) would carry an order-7 automorphism it cannot have",
        "consecutive" => "points on an invariant rational curve cannot be paired by type",
        _ => "the two points on the genus-7 curve would share a type",
    }
}

/// A rendered table: header plus string cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Markdown,
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub table: String,
    pub passed: bool,
    pub diffs: Vec<String>,
    /// waived cells, with their notes
    pub waived: Vec<String>,
}

/// Which table to build from a classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    Order7TypeCounts,
    Order14Possibilities,
    Order14Dims,
    Order14PurelyFinal,
    Order14FixedLoci,
    Order21Vectors,
    Order21PurelyFinal,
    Order28Dims,
    Order28PurelyFinal,
    Order42Dims,
    Order42PurelyFinal,
    Order14Sigma7Symplectic,
    Order14Sigma2Symplectic,
    Order21Sigma7Symplectic,
    NsOrder14,
    NsOrder21,
    NsOrder28,
    NsOrder42,
    /// every record with its status
    Records,
    /// admissible not-purely records under the primary reading
    NotPurely,
}

impl TableKind {
    pub fn name(&self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default()
    }

    /// Tables checked for a purely run of this order.
    pub fn for_purely(n: u32) -> Vec<TableKind> {
        use TableKind::*;
        match n {
            7 => vec![Order7TypeCounts],
            14 => vec![
                Order14Possibilities,
                Order14Dims,
                Order14PurelyFinal,
                Order14FixedLoci,
                NsOrder14,
            ],
            21 => vec![Order21Vectors, Order21PurelyFinal, NsOrder21],
            28 => vec![Order28Dims, Order28PurelyFinal, NsOrder28],
            42 => vec![Order42Dims, Order42PurelyFinal, NsOrder42],
            _ => vec![],
        }
    }

    /// The headline table of a purely run.
    pub fn final_for(n: u32) -> TableKind {
        match n {
            7 => TableKind::Order7TypeCounts,
            14 => TableKind::Order14PurelyFinal,
            21 => TableKind::Order21PurelyFinal,
            28 => TableKind::Order28PurelyFinal,
            _ => TableKind::Order42PurelyFinal,
        }
    }

    /// Tables checked for a not-purely run.
    pub fn for_not_purely(n: u32, k: u32) -> Vec<TableKind> {
        match (n, k) {
            (14, 2) => vec![TableKind::Order14Sigma7Symplectic],
            (14, 7) => vec![TableKind::Order14Sigma2Symplectic],
            (21, 3) => vec![TableKind::Order21Sigma7Symplectic],
            _ => vec![],
        }
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "–".into())
}

fn curve_names(genera: &[u32]) -> String {
    let mut g = genera.to_vec();
    g.sort();
    if g.is_empty() {
        return "∅".into();
    }
    g.iter()
        .map(|&x| {
            if x == 0 {
                "R"
            } else if x == 1 {
                "E"
            } else {
                "C"
            }
        })
        .collect::<Vec<_>>()
        .join("⊔")
}

fn pairs(list: &[InvolutionInvariants]) -> String {
    let v: Vec<String> = list
        .iter()
        .filter(|i| matches!(i, InvolutionInvariants::Generic { .. }))
        .map(|i| i.to_string())
        .collect();
    if v.is_empty() {
        "–".into()
    } else {
        v.join(",")
    }
}

fn m_only(v: &TypeCountVector) -> String {
    format!("({})", v.m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn locus(r: &CaseRecord, k: u32) -> String {
    opt(r.loci.get(&k))
}

/// Builds the requested table from a classification's records.
pub fn build_table(kind: TableKind, c: &Classification) -> Table {
    use TableKind::*;
    let cols = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let adm: Vec<&CaseRecord> = c.admissible();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let chi = |r: &CaseRecord, k| opt(r.chi(k));
    let columns = match kind {
        Order7TypeCounts => {
            for r in &c.records {
                if let Some(v) = &r.type_counts {
                    rows.push(vec![m_only(v), v.alpha.to_string()]);
                }
            }
            cols(&["m", "alpha"])
        }
        Order14Possibilities => {
            for r in &c.records {
                if let Some(v) = &r.type_counts {
                    if seen.insert(r.variant.clone()) {
                        let fixed = r.loci.get(&14).map(|l| l.curves.clone()).unwrap_or_default();
                        rows.push(vec![
                            r.variant.clone(),
                            m_only(v),
                            v.alpha.to_string(),
                            curve_names(&fixed),
                        ]);
                    }
                }
            }
            cols(&["case", "m", "alpha", "fixed_curves"])
        }
        Order14Dims => {
            for r in c.records.iter().filter(|r| r.dims.is_some()) {
                if seen.insert(format!("{}|{}", r.variant, opt(r.dims.as_ref()))) {
                    let v = r.type_counts.as_ref().unwrap();
                    rows.push(vec![
                        r.variant.clone(),
                        v.points().to_string(),
                        v.alpha.to_string(),
                        chi(r, 14),
                        chi(r, 7),
                        chi(r, 2),
                        opt(r.dims.as_ref()),
                        pairs(&r.involution_options),
                    ]);
                }
            }
            cols(&["case", "N", "alpha", "chi14", "chi7", "chi2", "dims", "g2k2"])
        }
        Order14PurelyFinal => {
            for r in &adm {
                let v = r.type_counts.as_ref().unwrap();
                rows.push(vec![
                    r.variant.clone(),
                    v.points().to_string(),
                    v.alpha.to_string(),
                    chi(r, 14),
                    chi(r, 7),
                    chi(r, 2),
                    opt(r.involution),
                    opt(r.dims.as_ref()),
                ]);
            }
            cols(&["case", "N", "alpha", "chi14", "chi7", "chi2", "g2k2", "dims"])
        }
        Order14FixedLoci => {
            for r in &adm {
                rows.push(vec![r.label.clone(), locus(r, 14), locus(r, 7), locus(r, 2)]);
            }
            cols(&["case", "fix14", "fix7", "fix2"])
        }
        Order21Vectors => {
            for r in c.records.iter().filter(|r| r.dims.is_some()) {
                if seen.insert(format!("{}|{}", opt(r.base.clone()), opt(r.dims.as_ref()))) {
                    let v = r.type_counts.as_ref().unwrap();
                    let m = format!(
                        "({};{},{})",
                        v.m.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                        v.alpha,
                        opt(r.on_curve)
                    );
                    rows.push(vec![
                        opt(r.base.clone()),
                        chi(r, 7),
                        chi(r, 21),
                        chi(r, 3),
                        opt(r.dims.as_ref()),
                        m,
                    ]);
                }
            }
            cols(&["sigma7", "chi7", "chi21", "chi3", "dims", "m"])
        }
        Order21PurelyFinal => {
            for r in &adm {
                rows.push(vec![r.label.clone(), locus(r, 21), locus(r, 7), locus(r, 3)]);
            }
            cols(&["case", "fix21", "fix7", "fix3"])
        }
        Order28Dims => {
            let mut by: BTreeMap<(String, Vec<u32>), (Vec<String>, bool)> = BTreeMap::new();
            let mut order = Vec::new();
            for r in c.records.iter().filter(|r| r.dims.is_some()) {
                let w = r.notes.first().cloned().unwrap_or_else(|| r.label.clone());
                let key = (w.clone(), r.dims.as_ref().unwrap().values.clone());
                let row = vec![
                    w,
                    chi(r, 28),
                    opt(r.dims.as_ref()),
                    chi(r, 14),
                    chi(r, 7),
                    chi(r, 4),
                    chi(r, 2),
                ];
                let e = by.entry(key.clone()).or_insert_with(|| {
                    order.push(key.clone());
                    (row, false)
                });
                e.1 |= r.status.is_admissible();
            }
            for k in order {
                let (mut row, ok) = by.remove(&k).unwrap();
                row.push(if ok { "yes" } else { "no" }.into());
                rows.push(row);
            }
            cols(&["w", "chi28", "dims", "chi14", "chi7", "chi4", "chi2", "survives"])
        }
        Order28PurelyFinal => {
            for r in &adm {
                rows.push(vec![
                    r.label.clone(),
                    opt(r.dims.as_ref()),
                    locus(r, 28),
                    locus(r, 14),
                    locus(r, 7),
                    locus(r, 2),
                ]);
            }
            cols(&["case", "dims", "fix28", "fix14", "fix7", "fix2"])
        }
        Order42Dims => {
            for r in &adm {
                rows.push(vec![
                    r.label.clone(),
                    chi(r, 42),
                    locus(r, 42),
                    opt(r.dims.as_ref()),
                    chi(r, 21),
                    chi(r, 14),
                    chi(r, 7),
                    chi(r, 6),
                    chi(r, 3),
                    chi(r, 2),
                ]);
            }
            cols(&[
                "case", "chi42", "fix42", "dims", "chi21", "chi14", "chi7", "chi6", "chi3", "chi2",
            ])
        }
        Order42PurelyFinal => {
            for r in &adm {
                rows.push(vec![
                    r.label.clone(),
                    locus(r, 42),
                    locus(r, 7),
                    locus(r, 21),
                    locus(r, 3),
                ]);
            }
            cols(&["case", "fix42", "fix7", "fix21", "fix3"])
        }
        Order14Sigma7Symplectic => {
            for r in c.records.iter().filter(|r| r.reading == Some(PushforwardReading::Unit)) {
                let mut opts = r.involution_options.clone();
                opts.sort_by(|a, b| b.cmp(a));
                rows.push(vec![opt(r.points), opt(r.dims.as_ref()), chi(r, 2), pairs(&opts)]);
            }
            cols(&["N", "dims", "chi2", "g2k2"])
        }
        Order14Sigma2Symplectic => {
            let mut rs: Vec<&CaseRecord> = c
                .admissible_under(PushforwardReading::Unit)
                .into_iter()
                .filter(|r| r.reading == Some(PushforwardReading::Unit))
                .collect();
            rs.sort_by_key(|r| r.dims.clone());
            for r in rs {
                rows.push(vec![opt(r.points), opt(r.dims.as_ref()), chi(r, 7)]);
            }
            cols(&["N", "dims", "chi7"])
        }
        Order21Sigma7Symplectic => {
            for r in c.records.iter().filter(|r| r.reading == Some(PushforwardReading::Unit)) {
                rows.push(vec![opt(r.points), opt(r.dims.as_ref()), chi(r, 3)]);
            }
            cols(&["N", "dims", "chi3"])
        }
        NsOrder14 | NsOrder21 | NsOrder28 | NsOrder42 => {
            let ks: &[u32] = match kind {
                NsOrder14 => &[14, 7, 2],
                NsOrder21 => &[21, 7, 3],
                NsOrder28 => &[2, 4, 7, 14, 28],
                _ => &[21, 7, 3],
            };
            for r in &adm {
                let Some(ns) = &r.ns else { continue };
                if ns.attaining_orders.is_empty() || !seen.insert(format!("{}|{}", r.variant, opt(r.dims.as_ref()))) {
                    continue;
                }
                let case = if kind == NsOrder14 {
                    r.variant.clone()
                } else {
                    r.label.clone()
                };
                let mut row = vec![case];
                row.extend(ks.iter().map(|&k| chi(r, k)));
                row.push(opt(r.dims.as_ref()));
                row.push(ns.lattice.clone());
                rows.push(row);
            }
            let mut h = vec!["case".to_string()];
            h.extend(ks.iter().map(|k| format!("chi{k}")));
            h.push("dims".into());
            h.push("ns".into());
            h
        }
        Records => {
            for r in &c.records {
                let (status, why) = match &r.status {
                    Status::Admissible => ("admissible".to_string(), String::new()),
                    Status::Excluded {
                        stage,
                        reason,
                        citation,
                    } => (format!("excluded:{stage}"), format!("{reason} [{citation}]")),
                };
                rows.push(vec![
                    r.label.clone(),
                    opt(r.reading.map(reading_name)),
                    opt(r.type_counts.as_ref()),
                    opt(r.dims.as_ref()),
                    opt(r.points),
                    status,
                    why,
                ]);
            }
            cols(&["case", "reading", "type_counts", "dims", "N", "status", "reason"])
        }
        NotPurely => {
            for r in c.admissible_under(PushforwardReading::Unit) {
                if r.reading == Some(PushforwardReading::Unit) {
                    let fix: Vec<String> = r.notes.iter().filter(|s| s.starts_with("Fix(")).cloned().collect();
                    rows.push(vec![opt(r.points), opt(r.dims.as_ref()), fix.join("; ")]);
                }
            }
            cols(&["N", "dims", "fixed_locus_of_powers"])
        }
    };
    Table {
        name: kind.name(),
        columns,
        rows,
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Markdown => {
                let mut s = format!("| {} |\n", self.columns.join(" | "));
                s.push_str(&format!("|{}\n", "---|".repeat(self.columns.len())));
                if self.rows.is_empty() {
                    let mut cells = vec!["no admissible cases".to_string()];
                    cells.extend(std::iter::repeat_n(String::new(), self.columns.len().saturating_sub(1)));
                    s.push_str(&format!("| {} |\n", cells.join(" | ")));
                }
                for r in &self.rows {
                    s.push_str(&format!("| {} |\n", r.join(" | ")));
                }
                s
            }
            Format::Csv => {
                let mut s = self.columns.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(",") + "\n";
                for r in &self.rows {
                    s.push_str(&(r.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(",") + "\n"));
                }
                s
            }
            Format::Json => {
                let rows: Vec<BTreeMap<&str, &str>> = self
                    .rows
                    .iter()
                    .map(|r| {
                        self.columns
                            .iter()
                            .map(|c| c.as_str())
                            .zip(r.iter().map(|x| x.as_str()))
                            .collect()
                    })
                    .collect();
                serde_json::to_string_pretty(&serde_json::json!({ "table": self.name, "rows": rows }))
                    .unwrap_or_default()
                    + "\n"
            }
        }
    }

    /// Cell-by-cell comparison with a fixture; lists of pairs compare as sets.
    pub fn check(&self, fx: &Fixture) -> CheckReport {
        let mut diffs = Vec::new();
        let mut waived = Vec::new();
        let idx: Vec<Option<usize>> = fx
            .columns
            .iter()
            .map(|c| self.columns.iter().position(|x| x == c))
            .collect();
        for (c, i) in fx.columns.iter().zip(&idx) {
            if i.is_none() {
                diffs.push(format!("column {c} missing from output"));
            }
        }
        if fx.unordered {
            let mut sorted = self.clone();
            let key: Vec<usize> = idx.iter().flatten().copied().collect();
            let pos = |row: &Vec<String>| {
                fx.rows
                    .iter()
                    .position(|w| key.iter().zip(w).all(|(&i, c)| same_cell(&row[i], c)))
            };
            sorted.rows.sort_by_key(|r| pos(r).unwrap_or(usize::MAX));
            return sorted.check(&Fixture {
                unordered: false,
                ..fx.clone()
            });
        }
        if self.rows.len() != fx.rows.len() {
            diffs.push(format!("expected {} rows, got {}", fx.rows.len(), self.rows.len()));
        }
        for (ri, want) in fx.rows.iter().enumerate() {
            let Some(got) = self.rows.get(ri) else {
                diffs.push(format!("row {ri}: missing, expected [{}]", want.join(" | ")));
                continue;
            };
            for ((col, i), w) in fx.columns.iter().zip(&idx).zip(want) {
                let Some(i) = i else { continue };
                let g = &got[*i];
                if same_cell(g, w) {
                    continue;
                }
                match fx.waivers.iter().find(|x| x.row == ri && &x.column == col) {
                    Some(wv) if same_cell(g, &wv.accept) => {
                        waived.push(format!("row {ri} {col}: {w} -> {g} ({})", wv.note))
                    }
                    _ => diffs.push(format!("row {ri} {col}: expected {w}, got {g}")),
                }
            }
        }
        for (ri, got) in self.rows.iter().enumerate().skip(fx.rows.len()) {
            diffs.push(format!("row {ri}: unexpected [{}]", got.join(" | ")));
        }
        CheckReport {
            table: fx.table.clone(),
            passed: diffs.is_empty(),
            diffs,
            waived,
        }
    }
}

fn normalize(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .replace(['-', '–'], "−")
}

fn same_cell(a: &str, b: &str) -> bool {
    let (a, b) = (normalize(a), normalize(b));
    if a == b {
        return true;
    }
    let groups = |s: &str| -> Option<BTreeSet<String>> {
        if !s.starts_with('(') || !s.contains("),(") {
            return None;
        }
        Some(
            s.split("),(")
                .map(|x| x.trim_matches(|c| c == '(' || c == ')').to_string())
                .collect(),
        )
    };
    match (groups(&a), groups(&b)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

/// Renders the table of a classification; with a fixture, also checks it.
pub fn emit_table(
    c: &Classification,
    kind: TableKind,
    format: Format,
    check: Option<&Fixture>,
) -> (String, Option<CheckReport>) {
    let t = build_table(kind, c);
    let report = check.map(|f| t.check(f));
    (t.render(format), report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls() -> Classifier {
        Classifier::new(DataStore::embedded().unwrap())
    }

    #[test]
    fn locus_rendering() {
        assert_eq!(FixedLocus::new(&[0, 3, 0], 3).to_string(), "C3+2R+3pts");
        assert_eq!(FixedLocus::new(&[1, 0], 8).to_string(), "E+R+8pts");
        assert_eq!(FixedLocus::new(&[], 0).to_string(), "∅");
        assert_eq!(FixedLocus::new(&[0, 0, 0], 0).to_string(), "3R");
    }

    #[test]
    fn orbit_counts_small() {
        assert_eq!(orbit_counts(3, 2), BTreeSet::from([1, 3]));
        assert_eq!(orbit_counts(6, 3), BTreeSet::from([0, 3, 6]));
        assert_eq!(orbit_counts(3, 7), BTreeSet::from([3]));
    }

    #[test]
    fn cell_sets() {
        assert!(same_cell("(3,6),(2,5)", "(2,5), (3,6)"));
        assert!(same_cell("-14", "−14"));
        assert!(!same_cell("(1,2)", "(2,1)"));
    }

    #[test]
    fn order7_baseline() {
        let c = cls().classify_purely(7).unwrap();
        let t = build_table(TableKind::Order7TypeCounts, &c);
        assert_eq!(
            t.rows,
            vec![vec!["(2,1,0)", "0"], vec!["(4,3,1)", "1"], vec!["(6,5,2)", "2"]]
        );
    }

    #[test]
    fn empty_table_says_so() {
        let t = Table {
            name: "x".into(),
            columns: vec!["a".into(), "b".into()],
            rows: vec![],
        };
        assert!(t.render(Format::Markdown).contains("no admissible cases"));
    }

    #[test]
    fn bad_symplectic_order() {
        let c = cls();
        assert_eq!(c.classify_not_purely(42, 2).unwrap_err(), Error::NoSymplectic(21));
        assert!(matches!(c.classify_not_purely(14, 3), Err(Error::Invalid(_))));
        assert_eq!(c.classify_purely(13).unwrap_err(), Error::UnsupportedOrder(13));
    }
}
