//! Holomorphic and topological Lefschetz bookkeeping.
//!
//! The holomorphic side turns
//! `Σ m_i / ((1-ζ^{1+i})(1-ζ^{n-i})) + α(1+ζ)/(1-ζ)² = 1 + ζ^{n-1}`
//! into φ(n) rational equations and walks its non-negative lattice points.
//! The topological side works with eigenspace dimensions d_d, d | n.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{
    divisors_desc, gcd, q, ramanujan_sum, rref, totient, CyclotomicNumber, Rational, RationalLinearSystem,
};
use crate::error::{Error, Result};
use crate::localtypes::{aggregation_map, LocalType};

/// Isolated-point counts m_1..m_K (K = ⌊(n-1)/2⌋) plus the curve term α.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeCountVector {
    pub order: u32,
    pub m: Vec<u32>,
    pub alpha: i64,
}

impl TypeCountVector {
    pub fn new(order: u32, m: Vec<u32>, alpha: i64) -> Result<Self> {
        if m.len() != LocalType::max_index(order) as usize {
            return Err(Error::Invalid(format!(
                "order {order} needs {} counts, got {}",
                LocalType::max_index(order),
                m.len()
            )));
        }
        Ok(TypeCountVector { order, m, alpha })
    }

    pub fn points(&self) -> u32 {
        self.m.iter().sum()
    }

    /// χ(Fix σ): points count 1, a genus-g curve 2-2g.
    pub fn chi(&self) -> i64 {
        self.points() as i64 + 2 * self.alpha
    }

    /// Left minus right side of the holomorphic formula, in Q(ζ_n).
    pub fn residual(&self) -> CyclotomicNumber {
        let n = self.order;
        let mut acc = curve_term(n).scale(&q(self.alpha));
        for (i, &c) in self.m.iter().enumerate() {
            if c > 0 {
                acc = &acc + &point_term(n, i as u32 + 1).scale(&q(c as i64));
            }
        }
        &acc - &lefschetz_rhs(n)
    }
}

impl fmt::Display for TypeCountVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.m.iter().map(|x| x.to_string()).collect();
        write!(f, "({};{})", m.join(","), self.alpha)
    }
}

/// 1/((1-ζ^{1+i})(1-ζ^{n-i})).
pub fn point_term(n: u32, i: u32) -> CyclotomicNumber {
    let one = CyclotomicNumber::one(n);
    let a = &one - &CyclotomicNumber::zeta(n, 1 + i as i64);
    let b = &one - &CyclotomicNumber::zeta(n, n as i64 - i as i64);
    (&a * &b).inverse().expect("nonzero for 1 <= i < n-1")
}

/// (1+ζ)/(1-ζ)².
pub fn curve_term(n: u32) -> CyclotomicNumber {
    let one = CyclotomicNumber::one(n);
    let z = CyclotomicNumber::zeta(n, 1);
    let d = &one - &z;
    &(&one + &z) * &(&d * &d).inverse().expect("n >= 2")
}

pub fn lefschetz_rhs(n: u32) -> CyclotomicNumber {
    &CyclotomicNumber::one(n) + &CyclotomicNumber::zeta(n, n as i64 - 1)
}

/// Unknowns m_1..m_K, alpha; one row per power-basis coordinate.
pub fn build_holomorphic_system(n: u32) -> Result<RationalLinearSystem> {
    if n < 3 {
        return Err(Error::UnsupportedOrder(n));
    }
    let k = LocalType::max_index(n);
    let mut labels: Vec<String> = (1..=k).map(|i| format!("m_{i}")).collect();
    labels.push("alpha".into());
    let mut cols: Vec<CyclotomicNumber> = (1..=k).map(|i| point_term(n, i)).collect();
    cols.push(curve_term(n));
    let rhs = lefschetz_rhs(n);
    let mut sys = RationalLinearSystem::new(labels)?;
    for r in 0..totient(n) as usize {
        let row = cols.iter().map(|c| c.coeffs()[r].clone()).collect();
        sys.push_row(row, rhs.coeffs()[r].clone())?;
    }
    Ok(sys)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

/// `Σ_{i ∈ indices} m_i (≤ | =) value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumConstraint {
    pub indices: Vec<u32>,
    pub relation: Relation,
    pub value: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeCountConstraints {
    pub alpha: i64,
    pub sums: Vec<SumConstraint>,
}

impl TypeCountConstraints {
    /// Aggregation inequalities against the σ^k image with counts `base`
    /// (indexed from 1), plus exactly `on_curve` points mapping onto fixed
    /// curves of σ^k.
    pub fn against_base(n: u32, k: u32, base: &[u32], alpha: i64, on_curve: u32) -> Self {
        let agg = aggregation_map(n, k);
        let mut sums: Vec<SumConstraint> = agg
            .groups
            .iter()
            .map(|(&j, idx)| SumConstraint {
                indices: idx.clone(),
                relation: Relation::Le,
                value: base.get(j as usize - 1).copied().unwrap_or(0),
            })
            .collect();
        sums.push(SumConstraint {
            indices: agg.on_curve.clone(),
            relation: Relation::Eq,
            value: on_curve,
        });
        TypeCountConstraints { alpha, sums }
    }

    /// Only the Euler bound N + 2α ≤ 24.
    pub fn euler_box(n: u32, alpha: i64) -> Self {
        let cap = (24 - 2 * alpha).max(0) as u32;
        TypeCountConstraints {
            alpha,
            sums: vec![SumConstraint {
                indices: (1..=LocalType::max_index(n)).collect(),
                relation: Relation::Le,
                value: cap,
            }],
        }
    }

    fn satisfied(&self, m: &[u32]) -> bool {
        self.sums.iter().all(|s| {
            let t: u32 = s.indices.iter().map(|&i| m[i as usize - 1]).sum();
            match s.relation {
                Relation::Le => t <= s.value,
                Relation::Eq => t == s.value,
            }
        })
    }
}

/// All non-negative integer solutions of the holomorphic system under the
/// constraints, sorted lexicographically.
pub fn enumerate_type_counts(n: u32, c: &TypeCountConstraints) -> Result<Vec<TypeCountVector>> {
    let sys = build_holomorphic_system(n)?;
    let k = LocalType::max_index(n) as usize;
    let mut ub: Vec<Option<u32>> = vec![None; k];
    for s in &c.sums {
        for &i in &s.indices {
            let slot = &mut ub[i as usize - 1];
            *slot = Some(slot.map_or(s.value, |u| u.min(s.value)));
        }
    }
    // α is fixed: move its column to the constant side.
    let alpha = q(c.alpha);
    let mut aug: Vec<Vec<Rational>> = sys
        .rows()
        .iter()
        .zip(sys.rhs())
        .map(|(row, b)| {
            let mut v = row[..k].to_vec();
            v.push(b - &row[k] * &alpha);
            v
        })
        .collect();
    for s in c.sums.iter().filter(|s| s.relation == Relation::Eq) {
        let mut v = vec![Rational::zero(); k + 1];
        for &i in &s.indices {
            v[i as usize - 1] = Rational::one();
        }
        v[k] = q(s.value as i64);
        aug.push(v);
    }
    let red = rref(aug);
    if red.inconsistent() {
        return Ok(vec![]);
    }
    let free: Vec<usize> = (0..k).filter(|c| !red.pivots.contains(c)).collect();
    let mut bounds = Vec::with_capacity(free.len());
    for &f in &free {
        match ub[f] {
            Some(u) => bounds.push(u),
            None => return Err(Error::Unbounded(format!("m_{} of order {n} has no upper bound", f + 1))),
        }
    }
    let mut out = Vec::new();
    let mut vals = vec![0u32; k];
    walk(
        0,
        &free,
        &bounds,
        &mut vals,
        &red.rows,
        &red.pivots,
        c,
        &ub,
        n,
        &mut out,
    );
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    t: usize,
    free: &[usize],
    bounds: &[u32],
    vals: &mut Vec<u32>,
    rows: &[Vec<Rational>],
    pivots: &[usize],
    c: &TypeCountConstraints,
    ub: &[Option<u32>],
    n: u32,
    out: &mut Vec<TypeCountVector>,
) {
    if t == free.len() {
        let k = vals.len();
        let mut x = vals.clone();
        for (row, &p) in rows.iter().zip(pivots) {
            let mut v = row[k].clone();
            for &f in free {
                if !row[f].is_zero() {
                    v -= &row[f] * q(vals[f] as i64);
                }
            }
            if !v.is_integer() || v.is_negative() {
                return;
            }
            let Some(v) = v.to_integer().to_u32() else { return };
            if ub[p].is_some_and(|u| v > u) {
                return;
            }
            x[p] = v;
        }
        if c.satisfied(&x) {
            out.push(TypeCountVector {
                order: n,
                m: x,
                alpha: c.alpha,
            });
        }
        return;
    }
    for v in 0..=bounds[t] {
        vals[free[t]] = v;
        // prune partial sums of free variables against ≤ constraints
        let ok = c.sums.iter().all(|s| {
            let part: u32 = s
                .indices
                .iter()
                .filter(|&&i| free[..=t].contains(&(i as usize - 1)))
                .map(|&i| vals[i as usize - 1])
                .sum();
            part <= s.value
        });
        if ok {
            walk(t + 1, free, bounds, vals, rows, pivots, c, ub, n, out);
        }
    }
    vals[free[t]] = 0;
}

/// Dimensions d_d of the ζ_d-eigenspaces on H², d | n, stored with d
/// descending (d_n first, d_1 last).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EigenspaceDims {
    pub order: u32,
    pub values: Vec<u32>,
}

impl EigenspaceDims {
    pub fn new(order: u32, values: Vec<u32>) -> Result<Self> {
        let divs = divisors_desc(order);
        if values.len() != divs.len() {
            return Err(Error::Invalid(format!(
                "order {order} has {} divisors, got {} dimensions",
                divs.len(),
                values.len()
            )));
        }
        let d = EigenspaceDims { order, values };
        if d.weighted_total() != 22 {
            return Err(Error::Invalid(format!("{d} does not add up to 22")));
        }
        Ok(d)
    }

    pub fn divisors(&self) -> Vec<u32> {
        divisors_desc(self.order)
    }

    pub fn get(&self, d: u32) -> u32 {
        self.divisors()
            .iter()
            .position(|&x| x == d)
            .map_or(0, |p| self.values[p])
    }

    pub fn weighted_total(&self) -> u32 {
        self.divisors()
            .iter()
            .zip(&self.values)
            .map(|(&d, &v)| totient(d) * v)
            .sum()
    }
}

impl fmt::Display for EigenspaceDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", v.join(","))
    }
}

/// χ(Fix σ^j) = 2 + Σ_d d_d c_d(j).
pub fn chi_from_dims(dims: &EigenspaceDims, j: u32) -> i64 {
    2 + dims
        .divisors()
        .iter()
        .zip(&dims.values)
        .map(|(&d, &v)| v as i64 * ramanujan_sum(d, j as i64))
        .sum::<i64>()
}

/// χ_k := χ(Fix σ^{n/k}) for every divisor k of n (k = order of the power).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerProfile {
    pub order: u32,
    pub chi: BTreeMap<u32, i64>,
}

impl EulerProfile {
    pub fn from_dims(dims: &EigenspaceDims) -> Self {
        let n = dims.order;
        let chi = dims
            .divisors()
            .into_iter()
            .map(|k| (k, chi_from_dims(dims, n / k)))
            .collect();
        EulerProfile { order: n, chi }
    }

    /// χ of the power of order k.
    pub fn of_order(&self, k: u32) -> Option<i64> {
        self.chi.get(&k).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChiConstraint {
    Exact(i64),
    OneOf(Vec<i64>),
}

impl ChiConstraint {
    pub fn admits(&self, v: i64) -> bool {
        match self {
            ChiConstraint::Exact(x) => *x == v,
            ChiConstraint::OneOf(xs) => xs.contains(&v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimsMode {
    /// d_n ≥ 1 and d_1 ≥ 1.
    Purely,
    /// σ multiplies ω by a primitive e-th root: d_e ≥ 1 and d_1 ≥ 1.
    Multiplier(u32),
}

/// Every non-negative solution of Σ φ(d) d_d = 22, lexicographic in
/// (d_n, …, d_1), restricted by the mode's positivity rule.
pub fn all_dims(n: u32, mode: DimsMode) -> Vec<EigenspaceDims> {
    let divs = divisors_desc(n);
    let w: Vec<u32> = divs.iter().map(|&d| totient(d)).collect();
    let mut out = Vec::new();
    let mut acc = Vec::with_capacity(divs.len());
    fn rec(i: usize, rem: u32, w: &[u32], acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == w.len() {
            if rem == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for x in 0..=rem / w[i] {
            acc.push(x);
            rec(i + 1, rem - x * w[i], w, acc, out);
            acc.pop();
        }
    }
    rec(0, 22, &w, &mut acc, &mut out);
    let need = match mode {
        DimsMode::Purely => n,
        DimsMode::Multiplier(e) => e,
    };
    let pos_need = divs.iter().position(|&d| d == need);
    let last = divs.len() - 1;
    out.into_iter()
        .filter(|v| v[last] >= 1 && pos_need.is_none_or(|p| v[p] >= 1))
        .map(|values| EigenspaceDims { order: n, values })
        .collect()
}

/// Dimension vectors meeting every `(j, χ(Fix σ^j))` requirement.
pub fn enumerate_dims(n: u32, required: &[(u32, ChiConstraint)], mode: DimsMode) -> Vec<EigenspaceDims> {
    all_dims(n, mode)
        .into_iter()
        .filter(|d| required.iter().all(|(j, c)| c.admits(chi_from_dims(d, *j))))
        .collect()
}

/// Rank of the invariant lattice of σ^k: Σ_{d | gcd(n,k)} φ(d) d_d.
pub fn invariant_rank(dims: &EigenspaceDims, k: u32) -> u32 {
    let g = gcd(dims.order, k);
    dims.divisors()
        .iter()
        .zip(&dims.values)
        .filter(|(&d, _)| g.is_multiple_of(d))
        .map(|(&d, &v)| totient(d) * v)
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PushforwardReading {
    /// Eigenvalues of σ on an eigenspace spread over the Galois orbit:
    /// d_d contributes φ(d)/φ(e) d_d to d'_e.
    Orbit,
    /// Every d_d contributes once to d'_e (the relations as printed).
    Unit,
}

/// Eigenspace dimensions of σ^k (order n / gcd(n,k)) from those of σ.
pub fn power_pushforward(dims: &EigenspaceDims, k: u32, reading: PushforwardReading) -> EigenspaceDims {
    let n = dims.order;
    let m = n / gcd(n, k);
    let target = divisors_desc(m);
    let mut out = vec![0u32; target.len()];
    for (&d, &v) in dims.divisors().iter().zip(&dims.values) {
        let e = d / gcd(d, k);
        let w = match reading {
            PushforwardReading::Orbit => totient(d) / totient(e),
            PushforwardReading::Unit => 1,
        };
        let p = target.iter().position(|&x| x == e).expect("e divides m");
        out[p] += w * v;
    }
    EigenspaceDims { order: m, values: out }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsRank {
    pub rank: u32,
    /// exponents k (σ^k, 1 ≤ k < n, k | n) whose invariant lattice has this rank
    pub attaining: Vec<u32>,
}

impl NsRank {
    /// Orders n/k of the attaining powers.
    pub fn attaining_orders(&self, n: u32) -> Vec<u32> {
        self.attaining.iter().map(|k| n / k).collect()
    }
}

/// ρ = 22 - φ(n) d_n, with the powers whose invariant lattice has rank ρ.
pub fn ns_rank(dims: &EigenspaceDims) -> NsRank {
    let n = dims.order;
    let rank = 22 - totient(n) * dims.get(n);
    let attaining = crate::cyclotomic::divisors(n)
        .into_iter()
        .filter(|&k| k < n && invariant_rank(dims, k) == rank)
        .collect();
    NsRank { rank, attaining }
}

/// Floating-point brute force over the Euler box: all (m, α) with
/// α in `alphas`, N + 2α ≤ 24, whose complex residual is below `tol`.
pub fn oracle_type_counts(n: u32, alphas: &[i64], tol: f64) -> Vec<TypeCountVector> {
    let k = LocalType::max_index(n) as usize;
    let eval = |c: &CyclotomicNumber| c.to_complex();
    let pts: Vec<(f64, f64)> = (1..=k as u32).map(|i| eval(&point_term(n, i))).collect();
    let cur = eval(&curve_term(n));
    let rhs = eval(&lefschetz_rhs(n));
    let mut out = Vec::new();
    for &a in alphas {
        let cap = 24 - 2 * a;
        if cap < 0 {
            continue;
        }
        let start = (a as f64 * cur.0 - rhs.0, a as f64 * cur.1 - rhs.1);
        let mut m = vec![0u32; k];
        float_walk(&pts, 0, cap as u32, start, &mut m, &mut |m: &[u32], z: (f64, f64)| {
            if z.0.hypot(z.1) < tol {
                out.push(TypeCountVector {
                    order: n,
                    m: m.to_vec(),
                    alpha: a,
                });
            }
        });
    }
    out.sort();
    out
}

fn float_walk(
    pts: &[(f64, f64)],
    i: usize,
    left: u32,
    z: (f64, f64),
    m: &mut [u32],
    f: &mut impl FnMut(&[u32], (f64, f64)),
) {
    if i == pts.len() {
        f(m, z);
        return;
    }
    for c in 0..=left {
        m[i] = c;
        let w = (z.0 + c as f64 * pts[i].0, z.1 + c as f64 * pts[i].1);
        float_walk(pts, i + 1, left - c, w, m, f);
    }
    m[i] = 0;
}
