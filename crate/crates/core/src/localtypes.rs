//! Local fixed-point types A_{i,n} and how they behave under powers.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::gcd;
use crate::error::{Error, Result};

/// A_{i,n}: local action diag(ζ^{1+i}, ζ^{n-i}). Index 0 means the point
/// sits on a pointwise-fixed curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalType {
    pub order: u32,
    pub index: u32,
}

impl LocalType {
    /// Canonicalizes i and n-1-i to the smaller one.
    pub fn new(order: u32, index: u32) -> Result<Self> {
        if order < 2 || index >= order {
            return Err(Error::Invalid(format!("A_{{{index},{order}}} is not a local type")));
        }
        let index = index.min(order - 1 - index);
        Ok(LocalType { order, index })
    }

    pub fn max_index(order: u32) -> u32 {
        (order - 1) / 2
    }

    /// The unordered exponent pair, smaller first.
    pub fn eigenexponents(&self) -> (u32, u32) {
        let n = self.order;
        let a = (1 + self.index) % n;
        let b = (n - self.index) % n;
        (a.min(b), a.max(b))
    }

    pub fn on_fixed_curve(&self) -> bool {
        self.index == 0
    }
}

impl fmt::Display for LocalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{{{},{}}}", self.index, self.order)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PowerImage {
    Type(LocalType),
    OnFixedCurve,
}

/// Type of an A_{i,n} point under σ^k.
pub fn power_map(n: u32, k: u32, i: u32) -> PowerImage {
    let m = n / gcd(n, k);
    let j = i % m;
    if j == 0 || j == m - 1 {
        return PowerImage::OnFixedCurve;
    }
    PowerImage::Type(LocalType {
        order: m,
        index: j.min(m - 1 - j),
    })
}

/// Grouping of the isolated indices of order n by their image under σ^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Aggregation {
    pub order: u32,
    pub exponent: u32,
    pub target_order: u32,
    /// target index -> source indices
    pub groups: BTreeMap<u32, Vec<u32>>,
    pub on_curve: Vec<u32>,
}

impl Aggregation {
    /// Which group a source index belongs to (`None` = on a fixed curve).
    pub fn group_of(&self, i: u32) -> Option<u32> {
        self.groups.iter().find(|(_, v)| v.contains(&i)).map(|(&j, _)| j)
    }
}

pub fn aggregation_map(n: u32, k: u32) -> Aggregation {
    let mut groups: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut on_curve = Vec::new();
    for i in 1..=LocalType::max_index(n) {
        match power_map(n, k, i) {
            PowerImage::OnFixedCurve => on_curve.push(i),
            PowerImage::Type(t) => groups.entry(t.index).or_default().push(i),
        }
    }
    Aggregation {
        order: n,
        exponent: k,
        target_order: n / gcd(n, k),
        groups,
        on_curve,
    }
}

/// Index of the point at the far end of an invariant rational curve through
/// an A_{i,n} point, when the curve's tangent there is the eigendirection
/// killed by σ^k. `None` when no such direction exists (or both are).
pub fn chain_partner(n: u32, k: u32, i: u32) -> Option<u32> {
    let exps = [(1 + i) % n, (n - i) % n];
    let hit: Vec<u32> = exps.iter().copied().filter(|e| (e * k).is_multiple_of(n)).collect();
    if hit.len() != 1 {
        return None;
    }
    let e = hit[0];
    let a = (n - e) % n;
    let b = (1 + e) % n;
    (0..=LocalType::max_index(n)).find(|&j| {
        let t = LocalType { order: n, index: j }.eigenexponents();
        t == (a.min(b), a.max(b))
    })
}

/// Types along a chain of `chain` fixed points on invariant rational curves
/// whose two ends lie on pointwise-fixed curves. Indices climb by one from
/// each end; an even chain must meet in a self-paired middle type.
pub fn tree_types(n: u32, chain: u32) -> Result<Vec<LocalType>> {
    if chain == 0 {
        return Err(Error::Chain("empty chain".into()));
    }
    let top = LocalType::max_index(n);
    let len = chain as usize;
    let idx: Vec<u32> = (0..len).map(|t| t.min(len - 1 - t) as u32).collect();
    let peak = *idx.iter().max().unwrap();
    if peak > top {
        return Err(Error::Chain(format!(
            "{chain} points need index {peak}, order {n} stops at {top}"
        )));
    }
    if len.is_multiple_of(2) && !(n.is_multiple_of(2) && peak == top) {
        return Err(Error::Chain(format!(
            "middle pair A_{peak} / A_{peak} is not consecutive for order {n}"
        )));
    }
    Ok(idx.into_iter().map(|index| LocalType { order: n, index }).collect())
}
