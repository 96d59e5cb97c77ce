//! Geometric pruning: Riemann-Hurwitz counts, Homma's bound, involution and
//! order-3 invariants, curve-action scenarios and point-placement filters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{divisors, is_prime};
use crate::error::{Error, Result};
use crate::localtypes::chain_partner;

/// A row of the order-7 classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCase {
    pub label: String,
    /// (m_1, m_2, m_3)
    pub m: Vec<u32>,
    /// genera of the curves fixed by σ_7
    pub curves: Vec<u32>,
    pub lattice: String,
    #[serde(default)]
    pub citation: String,
}

impl BaseCase {
    pub fn alpha(&self) -> i64 {
        self.curves.iter().map(|&g| 1 - g as i64).sum()
    }

    pub fn points(&self) -> u32 {
        self.m.iter().sum()
    }

    pub fn chi(&self) -> i64 {
        self.points() as i64 + 2 * self.alpha()
    }
}

/// f with 2g-2 = q(2g'-2) + f(q-1) for some quotient genus g' ≥ 0.
pub fn rh_fixed_point_counts(q: u32, g: u32) -> Vec<u32> {
    let mut out = BTreeSet::new();
    let lhs = 2 * g as i64 - 2;
    for gp in 0..=g as i64 {
        let num = lhs - q as i64 * (2 * gp - 2);
        if num >= 0 && num % (q as i64 - 1) == 0 {
            out.insert((num / (q as i64 - 1)) as u32);
        }
    }
    out.into_iter().collect()
}

/// A genus-g curve can carry an automorphism of prime order q > g only if
/// q = g+1 or q = 2g+1.
pub fn homma_admissible(q: u32, g: u32) -> bool {
    g <= 1 || q <= g || q == g + 1 || q == 2 * g + 1
}

fn lcm(a: u32, b: u32) -> u32 {
    a / crate::cyclotomic::gcd(a, b) * b
}

/// Fixed-point counts of a generator of Z/e acting faithfully on a genus-g
/// curve, over all signatures allowed by Harvey's conditions.
pub fn cyclic_fixed_point_counts(e: u32, g: u32) -> Vec<u32> {
    if is_prime(e) {
        return rh_fixed_point_counts(e, g);
    }
    let periods: Vec<u32> = divisors(e).into_iter().filter(|&m| m > 1).collect();
    let mut out = BTreeSet::new();
    // 2g-2 = e(2g'-2) + Σ e(1 - 1/m_i); work in units of 1 with integer e/m_i.
    for gp in 0..=g {
        let budget = 2 * g as i64 - 2 - e as i64 * (2 * gp as i64 - 2);
        if budget < 0 {
            continue;
        }
        let mut sig = Vec::new();
        signatures(&periods, 0, budget, e, &mut sig, &mut |s| {
            if harvey(e, gp, s) {
                out.insert(s.iter().filter(|&&m| m == e).count() as u32);
            }
        });
    }
    out.into_iter().collect()
}

fn signatures(periods: &[u32], from: usize, budget: i64, e: u32, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
    if budget == 0 {
        f(cur);
        return;
    }
    for (i, &m) in periods.iter().enumerate().skip(from) {
        let cost = (e - e / m) as i64;
        if cost <= budget {
            cur.push(m);
            signatures(periods, i, budget - cost, e, cur, f);
            cur.pop();
        }
    }
}

fn harvey(e: u32, gp: u32, sig: &[u32]) -> bool {
    let r = sig.len();
    if r == 1 || (gp == 0 && r < 2 && e > 1) {
        return false;
    }
    let all = sig.iter().fold(1, |a, &m| lcm(a, m));
    if gp == 0 && all != e {
        return false;
    }
    for i in 0..r {
        let rest = sig
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(1, |a, (_, &m)| lcm(a, m));
        if rest != all {
            return false;
        }
    }
    if e.is_multiple_of(2) {
        let two = 1 << e.trailing_zeros();
        if sig.iter().filter(|&&m| m % two == 0).count() % 2 == 1 {
            return false;
        }
    }
    true
}

/// (r, a, δ) of a 2-elementary lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NikulinTriple {
    pub r: u32,
    pub a: u32,
    pub delta: u8,
}

/// Shape of Fix(σ_2) for a non-symplectic involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InvolutionInvariants {
    /// C_g ⊔ R_1 ⊔ … ⊔ R_k
    Generic { g: u32, k: u32 },
    /// (10, 8, 0): two disjoint elliptic curves
    TwoElliptic,
    /// (10, 10, 0): nothing fixed
    Empty,
}

impl InvolutionInvariants {
    pub fn chi(&self) -> i64 {
        match *self {
            InvolutionInvariants::Generic { g, k } => 2 - 2 * g as i64 + 2 * k as i64,
            _ => 0,
        }
    }

    /// Genera of the fixed curves.
    pub fn components(&self) -> Vec<u32> {
        match *self {
            InvolutionInvariants::Generic { g, k } => {
                let mut v = vec![g];
                v.extend(std::iter::repeat_n(0, k as usize));
                v
            }
            InvolutionInvariants::TwoElliptic => vec![1, 1],
            InvolutionInvariants::Empty => vec![],
        }
    }
}

impl fmt::Display for InvolutionInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvolutionInvariants::Generic { g, k } => write!(f, "({g},{k})"),
            InvolutionInvariants::TwoElliptic => write!(f, "2E"),
            InvolutionInvariants::Empty => write!(f, "empty"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NikulinTable {
    pub triples: Vec<NikulinTriple>,
}

impl NikulinTable {
    pub fn contains(&self, t: NikulinTriple) -> bool {
        self.triples.contains(&t)
    }

    /// Involution fixed loci compatible with an invariant lattice of rank r,
    /// ordered by (g, k), exceptional shapes last.
    pub fn involution_candidates(&self, r: u32) -> Result<Vec<InvolutionInvariants>> {
        if !self.triples.iter().any(|t| t.r == r) {
            return Err(Error::RankOutOfTable(r));
        }
        let mut out = BTreeSet::new();
        for t in self.triples.iter().filter(|t| t.r == r) {
            let inv = match (t.r, t.a, t.delta) {
                (10, 10, 0) => InvolutionInvariants::Empty,
                (10, 8, 0) => InvolutionInvariants::TwoElliptic,
                _ => InvolutionInvariants::Generic {
                    g: (22 - t.r - t.a) / 2,
                    k: (t.r - t.a) / 2,
                },
            };
            out.insert(inv);
        }
        Ok(out.into_iter().collect())
    }
}

/// Fix(σ_3) = C_g ⊔ R_1 ⊔ … ⊔ R_k ⊔ {N points}; `genus = None` when no
/// curve is fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Order3Invariants {
    pub genus: Option<u32>,
    pub rationals: u32,
    pub points: u32,
}

impl Order3Invariants {
    pub fn components(&self) -> Vec<u32> {
        match self.genus {
            None => vec![],
            Some(g) => {
                let mut v = vec![g];
                v.extend(std::iter::repeat_n(0, self.rationals as usize));
                v
            }
        }
    }

    pub fn chi(&self) -> i64 {
        let curves: i64 = self.components().iter().map(|&g| 2 - 2 * g as i64).sum();
        self.points as i64 + curves
    }
}

impl fmt::Display for Order3Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.genus {
            Some(g) => write!(f, "({},{},{})", g, self.rationals, self.points),
            None => write!(f, "(-,-,{})", self.points),
        }
    }
}

/// Candidates with χ_3 = 3N - 6 and 1 - g + k = N - 3, before any genus filter.
pub fn order3_candidates_unfiltered(chi3: i64) -> Vec<Order3Invariants> {
    if chi3 + 6 <= 0 || (chi3 + 6) % 3 != 0 {
        return vec![];
    }
    let n = ((chi3 + 6) / 3) as u32;
    let mut out = Vec::new();
    if n == 3 {
        out.push(Order3Invariants {
            genus: None,
            rationals: 0,
            points: 3,
        });
    }
    // g ≤ (10 - N)/2 bounds the genus of the main fixed curve
    if n <= 10 {
        for g in 0..=(10 - n) / 2 {
            let k = n as i64 - 4 + g as i64;
            if k >= 0 {
                out.push(Order3Invariants {
                    genus: Some(g),
                    rationals: k as u32,
                    points: n,
                });
            }
        }
    }
    out
}

/// Candidates whose main curve can carry the order-7 action (Homma).
pub fn order3_candidates(chi3: i64) -> Vec<Order3Invariants> {
    order3_candidates_unfiltered(chi3)
        .into_iter()
        .filter(|c| c.genus.is_none_or(|g| homma_admissible(7, g)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum CurveAction {
    Fixed,
    /// acts with order `order`, fixing `points` points
    Invariant {
        order: u32,
        points: u32,
    },
    /// permuted in a cycle of this length
    Cycled {
        length: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScenarioRecord {
    /// (genus, action) per base curve, sorted
    pub assignments: Vec<(u32, CurveAction)>,
    pub alpha: i64,
    pub on_curve: u32,
    /// an elliptic curve is invariant without fixed points
    pub translation: bool,
}

impl ScenarioRecord {
    pub fn fixed_genera(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self
            .assignments
            .iter()
            .filter(|(_, a)| *a == CurveAction::Fixed)
            .map(|(g, _)| *g)
            .collect();
        v.sort();
        v
    }
}

/// Ways a residual action of order p can treat the base case's fixed curves.
pub fn enumerate_curve_scenarios(base: &BaseCase, p: u32) -> Vec<ScenarioRecord> {
    let orders: Vec<u32> = divisors(p).into_iter().filter(|&e| e > 1).collect();
    let per_curve = |g: u32| -> Vec<CurveAction> {
        let mut o = vec![CurveAction::Fixed];
        for &e in &orders {
            for f in cyclic_fixed_point_counts(e, g) {
                o.push(CurveAction::Invariant { order: e, points: f });
            }
        }
        o
    };
    let mut groups: BTreeMap<u32, u32> = BTreeMap::new();
    for &g in &base.curves {
        *groups.entry(g).or_default() += 1;
    }
    // per genus group: every multiset of actions, with cycles of length c | p
    let mut partials: Vec<Vec<(u32, CurveAction)>> = vec![vec![]];
    for (&g, &count) in &groups {
        let opts = per_curve(g);
        let mut group_choices: Vec<Vec<(u32, CurveAction)>> = Vec::new();
        cycle_splits(count, &orders, &mut vec![], &mut |cycles, rest| {
            let mut base_v: Vec<(u32, CurveAction)> = Vec::new();
            for &c in cycles {
                for _ in 0..c {
                    base_v.push((g, CurveAction::Cycled { length: c }));
                }
            }
            multisets(&opts, rest, 0, &mut vec![], &mut |ms| {
                let mut v = base_v.clone();
                v.extend(ms.iter().map(|a| (g, *a)));
                group_choices.push(v);
            });
        });
        let mut next = Vec::new();
        for p in &partials {
            for c in &group_choices {
                let mut v = p.clone();
                v.extend(c.iter().cloned());
                next.push(v);
            }
        }
        partials = next;
    }
    let mut out = BTreeSet::new();
    for mut a in partials {
        a.sort();
        let alpha = a
            .iter()
            .filter(|(_, x)| *x == CurveAction::Fixed)
            .map(|(g, _)| 1 - *g as i64)
            .sum();
        let on_curve = a
            .iter()
            .map(|(_, x)| match x {
                CurveAction::Invariant { points, .. } => *points,
                _ => 0,
            })
            .sum();
        let translation = a
            .iter()
            .any(|(g, x)| *g == 1 && matches!(x, CurveAction::Invariant { points: 0, .. }));
        out.insert(ScenarioRecord {
            assignments: a,
            alpha,
            on_curve,
            translation,
        });
    }
    out.into_iter().collect()
}

fn cycle_splits(count: u32, lens: &[u32], cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32], u32)) {
    f(cur, count);
    let from = cur.last().copied().unwrap_or(0);
    for &c in lens.iter().filter(|&&c| c >= from) {
        if c <= count {
            cur.push(c);
            cycle_splits(count - c, lens, cur, f);
            cur.pop();
        }
    }
}

fn multisets<T: Copy>(opts: &[T], k: u32, from: usize, cur: &mut Vec<T>, f: &mut dyn FnMut(&[T])) {
    if k == 0 {
        f(cur);
        return;
    }
    for i in from..opts.len() {
        cur.push(opts[i]);
        multisets(opts, k - 1, i, cur, f);
        cur.pop();
    }
}

/// Fixed locus of a power σ^j, acted on by σ with prime order q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualProblem {
    /// genera of the curves in Fix(σ^j)
    pub components: Vec<u32>,
    /// isolated points of Fix(σ^j)
    pub points: u32,
    pub q: u32,
    /// genera that σ must fix pointwise (exactly these)
    pub fixed_genera: Vec<u32>,
    /// isolated fixed points σ must end up with
    pub target: u32,
    pub homma: bool,
    pub cycles: bool,
}

/// What σ does to one genus class of Fix(σ^j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupChoice {
    pub genus: u32,
    pub fixed: u32,
    pub cycled: u32,
    /// (fixed points on the curve, number of such curves)
    pub invariant: Vec<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualAssignment {
    pub groups: Vec<GroupChoice>,
    /// isolated points of σ^j that σ fixes
    pub fixed_points: u32,
}

impl ResidualAssignment {
    pub fn on_curves(&self) -> u32 {
        self.groups
            .iter()
            .flat_map(|g| g.invariant.iter().map(|(f, c)| f * c))
            .sum()
    }

    /// Invariant, not pointwise fixed, rational curves.
    pub fn invariant_rationals(&self) -> u32 {
        self.groups
            .iter()
            .filter(|g| g.genus == 0)
            .flat_map(|g| g.invariant.iter().map(|(_, c)| *c))
            .sum()
    }

    /// (genus, fixed points) for each invariant curve of positive genus.
    pub fn invariant_higher(&self) -> Vec<(u32, u32)> {
        let mut v = Vec::new();
        for g in self.groups.iter().filter(|g| g.genus > 0) {
            for &(f, c) in &g.invariant {
                for _ in 0..c {
                    v.push((g.genus, f));
                }
            }
        }
        v
    }
}

/// Every way σ can act on Fix(σ^j) that reproduces the required fixed
/// curves and the isolated-point count.
pub fn residual_assignments(p: &ResidualProblem) -> Vec<ResidualAssignment> {
    let mut groups: BTreeMap<u32, u32> = BTreeMap::new();
    for &g in &p.components {
        *groups.entry(g).or_default() += 1;
    }
    let mut need: BTreeMap<u32, u32> = BTreeMap::new();
    for &g in &p.fixed_genera {
        *need.entry(g).or_default() += 1;
    }
    if need.iter().any(|(g, c)| groups.get(g).copied().unwrap_or(0) < *c) {
        return vec![];
    }
    let mut per_group: Vec<Vec<GroupChoice>> = Vec::new();
    for (&g, &count) in &groups {
        let fixed = need.get(&g).copied().unwrap_or(0);
        let free = count - fixed;
        let opts: Vec<u32> = if p.homma && !homma_admissible(p.q, g) {
            vec![]
        } else {
            rh_fixed_point_counts(p.q, g)
        };
        let mut choices = Vec::new();
        let max_cycles = if p.cycles { free / p.q } else { 0 };
        for t in 0..=max_cycles {
            let rest = free - t * p.q;
            multisets(&opts, rest, 0, &mut vec![], &mut |ms| {
                let mut inv: BTreeMap<u32, u32> = BTreeMap::new();
                for &f in ms {
                    *inv.entry(f).or_default() += 1;
                }
                choices.push(GroupChoice {
                    genus: g,
                    fixed,
                    cycled: t * p.q,
                    invariant: inv.into_iter().collect(),
                });
            });
        }
        per_group.push(choices);
    }
    let point_options: Vec<u32> = (0..=p.points / p.q)
        .filter(|s| p.cycles || *s == 0 || p.points == 0)
        .map(|s| p.points - s * p.q)
        .collect();
    let point_options = if p.cycles { point_options } else { vec![p.points] };
    let mut out = Vec::new();
    let mut stack: Vec<GroupChoice> = Vec::new();
    fn rec(
        i: usize,
        per_group: &[Vec<GroupChoice>],
        stack: &mut Vec<GroupChoice>,
        point_options: &[u32],
        target: u32,
        out: &mut Vec<ResidualAssignment>,
    ) {
        if i == per_group.len() {
            let a = ResidualAssignment {
                groups: stack.clone(),
                fixed_points: 0,
            };
            let curves = a.on_curves();
            for &pt in point_options {
                if curves + pt == target {
                    out.push(ResidualAssignment {
                        groups: stack.clone(),
                        fixed_points: pt,
                    });
                }
            }
            return;
        }
        for c in &per_group[i] {
            stack.push(c.clone());
            rec(i + 1, per_group, stack, point_options, target, out);
            stack.pop();
        }
    }
    rec(0, &per_group, &mut stack, &point_options, p.target, &mut out);
    out
}

/// Possible χ(Fix σ) when σ acts with prime order q on a fixed locus made of
/// the given curves and points (curves may be fixed, invariant or cycled).
pub fn residual_euler_values(components: &[u32], points: u32, q: u32) -> Vec<i64> {
    let mut groups: BTreeMap<u32, u32> = BTreeMap::new();
    for &g in components {
        *groups.entry(g).or_default() += 1;
    }
    let mut sums: BTreeSet<i64> = BTreeSet::new();
    sums.insert(0);
    for (&g, &count) in &groups {
        let mut per: Vec<i64> = vec![2 - 2 * g as i64];
        per.extend(rh_fixed_point_counts(q, g).into_iter().map(|f| f as i64));
        let mut next = BTreeSet::new();
        for t in 0..=count / q {
            let rest = count - t * q;
            multisets(&per, rest, 0, &mut vec![], &mut |ms| {
                let s: i64 = ms.iter().sum();
                for &b in &sums {
                    next.insert(b + s);
                }
            });
        }
        sums = next;
    }
    let mut out = BTreeSet::new();
    for s in 0..=points / q {
        for &b in &sums {
            out.insert(b + (points - s * q) as i64);
        }
    }
    out.into_iter().collect()
}

/// Isolated σ_n points, as a multiset of canonical indices.
pub fn type_multiset(m: &[u32]) -> BTreeMap<u32, u32> {
    m.iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (i as u32 + 1, c))
        .collect()
}

/// Can the points be split so that every invariant rational curve carries
/// a pair of chain partners? With `genus7`, a genus-7 curve holding the last
/// two points must not see them share a type.
pub fn pairs_placeable(
    n: u32,
    k: u32,
    types: &mut BTreeMap<u32, u32>,
    rationals: u32,
    higher: &[(u32, u32)],
    genus7: bool,
) -> bool {
    if rationals == 0 {
        if genus7 {
            for &(g, f) in higher {
                if g == 7 && f == 2 {
                    let left: u32 = types.values().sum();
                    let distinct = types.values().filter(|&&c| c > 0).count();
                    if left == 2 && distinct < 2 {
                        return false;
                    }
                }
            }
        }
        return true;
    }
    let keys: Vec<u32> = types.iter().filter(|(_, &c)| c > 0).map(|(&i, _)| i).collect();
    for i in keys {
        let Some(j) = chain_partner(n, k, i) else { continue };
        let have_j = types.get(&j).copied().unwrap_or(0);
        if have_j == 0 || (i == j && have_j < 2) {
            continue;
        }
        *types.get_mut(&i).unwrap() -= 1;
        *types.get_mut(&j).unwrap() -= 1;
        let ok = pairs_placeable(n, k, types, rationals - 1, higher, genus7);
        *types.get_mut(&i).unwrap() += 1;
        *types.get_mut(&j).unwrap() += 1;
        if ok {
            return true;
        }
    }
    false
}

/// Placement filter stages, applied in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementStage {
    /// the isolated points must be accountable at all
    Count,
    /// Homma's bound on curves carrying the residual action
    Homma,
    /// points on invariant rational curves come in consecutive pairs
    Consecutive,
    /// the two points on a genus-7 curve have different types
    Genus7,
}

impl PlacementStage {
    pub const ALL: [PlacementStage; 4] = [
        PlacementStage::Count,
        PlacementStage::Homma,
        PlacementStage::Consecutive,
        PlacementStage::Genus7,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PlacementStage::Count => "count",
            PlacementStage::Homma => "homma",
            PlacementStage::Consecutive => "consecutive",
            PlacementStage::Genus7 => "genus7",
        }
    }
}

/// Candidate σ_n fixed locus to be placed on Fix(σ^k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacementCandidate {
    pub order: u32,
    pub exponent: u32,
    /// counts m_1..m_K
    pub m: Vec<u32>,
    pub components: Vec<u32>,
    pub fixed_genera: Vec<u32>,
    pub cycles: bool,
}

/// First stage at which the candidate fails, or `None` if it survives all.
pub fn placement_verdict(c: &PlacementCandidate) -> Option<PlacementStage> {
    // σ acts on Fix(σ^k) with order gcd(n, k)
    let q = crate::cyclotomic::gcd(c.order, c.exponent);
    let target: u32 = c.m.iter().sum();
    let problem = |homma| ResidualProblem {
        components: c.components.clone(),
        points: 0,
        q,
        fixed_genera: c.fixed_genera.clone(),
        target,
        homma,
        cycles: c.cycles,
    };
    if residual_assignments(&problem(false)).is_empty() {
        return Some(PlacementStage::Count);
    }
    let with_homma = residual_assignments(&problem(true));
    if with_homma.is_empty() {
        return Some(PlacementStage::Homma);
    }
    let types = type_multiset(&c.m);
    let placeable = |g7: bool| {
        with_homma.iter().any(|a| {
            let mut t = types.clone();
            pairs_placeable(
                c.order,
                c.exponent,
                &mut t,
                a.invariant_rationals(),
                &a.invariant_higher(),
                g7,
            )
        })
    };
    if !placeable(false) {
        return Some(PlacementStage::Consecutive);
    }
    if !placeable(true) {
        return Some(PlacementStage::Genus7);
    }
    None
}

/// `consecutive_type_filter` on its own: true when points can sit in
/// consecutive pairs on the invariant rational curves of some placement.
pub fn consecutive_type_filter(c: &PlacementCandidate) -> bool {
    !matches!(
        placement_verdict(c),
        Some(PlacementStage::Count | PlacementStage::Homma | PlacementStage::Consecutive)
    )
}

/// `genus7_distinct_types_filter` on its own.
pub fn genus7_distinct_types_filter(c: &PlacementCandidate) -> bool {
    placement_verdict(c).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riemann_hurwitz_examples() {
        assert_eq!(rh_fixed_point_counts(2, 1), vec![0, 4]);
        assert_eq!(rh_fixed_point_counts(3, 1), vec![0, 3]);
        assert_eq!(rh_fixed_point_counts(7, 7), vec![2]);
        assert_eq!(rh_fixed_point_counts(2, 0), vec![2]);
        assert_eq!(rh_fixed_point_counts(7, 3), vec![3]);
    }

    #[test]
    fn homma_examples() {
        assert!(homma_admissible(7, 3));
        assert!(!homma_admissible(7, 4));
        assert!(!homma_admissible(7, 2));
        assert!(homma_admissible(2, 5));
        assert!(homma_admissible(7, 6));
    }

    #[test]
    fn order4_on_low_genus() {
        assert_eq!(cyclic_fixed_point_counts(4, 1), vec![0, 2]);
        assert_eq!(cyclic_fixed_point_counts(4, 0), vec![2]);
    }

    #[test]
    fn order3_examples() {
        let c = order3_candidates_unfiltered(3);
        let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, vec!["(-,-,3)", "(1,0,3)", "(2,1,3)", "(3,2,3)"]);
        let f: Vec<String> = order3_candidates(3).iter().map(|x| x.to_string()).collect();
        assert_eq!(f, vec!["(-,-,3)", "(1,0,3)", "(3,2,3)"]);
        let u: Vec<String> = order3_candidates_unfiltered(-3).iter().map(|x| x.to_string()).collect();
        assert_eq!(u, vec!["(3,0,1)", "(4,1,1)"]);
        let f: Vec<String> = order3_candidates(-3).iter().map(|x| x.to_string()).collect();
        assert_eq!(f, vec!["(3,0,1)"]);
        assert!(order3_candidates(-4).is_empty());
        for x in order3_candidates_unfiltered(0) {
            assert_eq!(x.chi(), 0);
        }
    }

    fn base(label: &str, m: &[u32], curves: &[u32]) -> BaseCase {
        BaseCase {
            label: label.into(),
            m: m.to_vec(),
            curves: curves.to_vec(),
            lattice: String::new(),
            citation: String::new(),
        }
    }

    fn alpha_r(v: &[ScenarioRecord]) -> BTreeSet<(i64, u32)> {
        v.iter().map(|s| (s.alpha, s.on_curve)).collect()
    }

    #[test]
    fn scenarios_case_a() {
        let s = enumerate_curve_scenarios(&base("A", &[2, 1, 0], &[1]), 2);
        assert_eq!(s.len(), 3);
        assert_eq!(alpha_r(&s), BTreeSet::from([(0, 0), (0, 4)]));
        assert_eq!(s.iter().filter(|x| x.translation).count(), 1);
    }

    #[test]
    fn scenarios_case_d() {
        let s = enumerate_curve_scenarios(&base("D", &[6, 5, 2], &[0, 0]), 2);
        assert_eq!(alpha_r(&s), BTreeSet::from([(2, 0), (1, 2), (0, 4), (0, 0)]));
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn scenarios_case_c_order3() {
        let s = enumerate_curve_scenarios(&base("C", &[4, 3, 1], &[0]), 3);
        assert_eq!(alpha_r(&s), BTreeSet::from([(1, 0), (0, 2)]));
    }

    #[test]
    fn scenarios_order4() {
        let b = enumerate_curve_scenarios(&base("B", &[4, 3, 1], &[1, 0]), 4);
        assert_eq!(
            alpha_r(&b),
            BTreeSet::from([(1, 0), (1, 2), (1, 4), (0, 2), (0, 4), (0, 6)])
        );
    }

    #[test]
    fn chi4_values() {
        assert_eq!(residual_euler_values(&[3, 0, 0], 0, 2), vec![-4, 0, 4, 8, 12]);
    }

    #[test]
    fn consecutive_rejects_a2_on_10_1() {
        let c = PlacementCandidate {
            order: 14,
            exponent: 7,
            m: vec![0, 1, 0, 0, 0, 4],
            components: vec![10, 0],
            fixed_genera: vec![],
            cycles: false,
        };
        assert_eq!(placement_verdict(&c), Some(PlacementStage::Consecutive));
        assert!(!consecutive_type_filter(&c));
    }

    #[test]
    fn c2_on_7_1_fails_pairing() {
        let c = PlacementCandidate {
            order: 14,
            exponent: 7,
            m: vec![0, 1, 1, 0, 0, 2],
            components: vec![7, 0],
            fixed_genera: vec![],
            cycles: false,
        };
        assert_eq!(placement_verdict(&c), Some(PlacementStage::Consecutive));
    }

    #[test]
    fn genus7_needs_distinct_types() {
        let c = PlacementCandidate {
            order: 14,
            exponent: 7,
            m: vec![0, 0, 0, 0, 0, 2],
            components: vec![7],
            fixed_genera: vec![],
            cycles: false,
        };
        assert_eq!(placement_verdict(&c), Some(PlacementStage::Genus7));
        let ok = PlacementCandidate {
            m: vec![0, 0, 0, 0, 1, 1],
            ..c
        };
        assert!(genus7_distinct_types_filter(&ok));
    }

    #[test]
    fn no_rational_curves_is_vacuous() {
        let mut t = type_multiset(&[1, 0, 0, 0, 0, 1]);
        assert!(pairs_placeable(14, 7, &mut t, 0, &[], true));
    }
}
