//! Weierstrass models y² = x³ + A(t)x + B(t): discriminant, singular fibers
//! by place, and the action of diagonal automorphisms on the 2-form.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{gcd, q, qf, CyclotomicNumber, Rational};
use crate::data::DataStore;
use crate::error::{Error, Result};

/// Polynomial in t over Q(ζ_N), lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    order: u32,
    coeffs: Vec<CyclotomicNumber>,
}

impl Poly {
    pub fn new(order: u32, mut coeffs: Vec<CyclotomicNumber>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { order, coeffs }
    }

    pub fn zero(order: u32) -> Self {
        Poly { order, coeffs: vec![] }
    }

    pub fn from_rationals(order: u32, c: &[Rational]) -> Self {
        Self::new(
            order,
            c.iter()
                .map(|r| CyclotomicNumber::from_rational(order, r.clone()))
                .collect(),
        )
    }

    pub fn from_ints(order: u32, c: &[i64]) -> Self {
        Self::from_rationals(order, &c.iter().map(|&x| q(x)).collect::<Vec<_>>())
    }

    /// c·t^k
    pub fn monomial(c: CyclotomicNumber, k: usize) -> Self {
        let order = c.order();
        let mut v = vec![CyclotomicNumber::zero(order); k];
        v.push(c);
        Self::new(order, v)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[CyclotomicNumber] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn coeff(&self, i: usize) -> CyclotomicNumber {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| CyclotomicNumber::zero(self.order))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.order, (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(self.order, (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.order);
        }
        let mut v = vec![CyclotomicNumber::zero(self.order); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        Poly::new(self.order, v)
    }

    pub fn scale(&self, c: &CyclotomicNumber) -> Poly {
        Poly::new(self.order, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::from_ints(self.order, &[1]);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.order,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&q(i as i64)))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let Some(dd) = d.degree() else {
            return Err(Error::ZeroInverse(self.order));
        };
        let inv = d.coeffs[dd].inverse()?;
        let mut r = self.clone();
        let mut qv = vec![CyclotomicNumber::zero(self.order); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = &r.coeffs[rd] * &inv;
            qv[rd - dd] = c.clone();
            r = r.sub(&Poly::monomial(c, rd - dd).mul(d));
        }
        Ok((Poly::new(self.order, qv), r))
    }

    pub fn monic(&self) -> Result<Poly> {
        match self.degree() {
            None => Ok(self.clone()),
            Some(d) => Ok(self.scale(&self.coeffs[d].inverse()?)),
        }
    }

    pub fn gcd(&self, o: &Poly) -> Result<Poly> {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Largest k with p^k | self (∞ for the zero polynomial).
    pub fn valuation(&self, p: &Poly) -> Result<Valuation> {
        if self.is_zero() {
            return Ok(Valuation::Infinite);
        }
        let mut k = 0;
        let mut f = self.clone();
        loop {
            let (qq, r) = f.div_rem(p)?;
            if !r.is_zero() {
                return Ok(Valuation::Finite(k));
            }
            f = qq;
            k += 1;
        }
    }

    /// Same polynomial over Q(ζ_M), M a multiple of the current order.
    pub fn embed(&self, target: u32) -> Result<Poly> {
        Ok(Poly::new(
            target,
            self.coeffs.iter().map(|c| c.embed(target)).collect::<Result<_>>()?,
        ))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = if c.is_one() && i > 0 {
                String::new()
            } else {
                format!("({c})")
            };
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{cs}t"),
                _ => format!("{cs}t^{i}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Splits a list of polynomials into pairwise coprime squarefree monic
/// factors; every input is a product of powers of them.
pub fn gcd_free_basis(polys: &[Poly]) -> Result<Vec<Poly>> {
    let mut basis: Vec<Poly> = Vec::new();
    for p in polys {
        if p.degree().unwrap_or(0) > 0 {
            basis.push(p.monic()?);
        }
    }
    'outer: loop {
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let g = basis[i].gcd(&basis[j])?;
                if g.degree().unwrap_or(0) > 0 {
                    let a = basis[i].div_rem(&g)?.0;
                    let b = basis[j].div_rem(&g)?.0;
                    basis.remove(j);
                    basis.remove(i);
                    for p in [g, a, b] {
                        if p.degree().unwrap_or(0) > 0 {
                            basis.push(p.monic()?);
                        }
                    }
                    continue 'outer;
                }
            }
        }
        for i in 0..basis.len() {
            let g = basis[i].gcd(&basis[i].derivative())?;
            if g.degree().unwrap_or(0) > 0 {
                let a = basis[i].div_rem(&g)?.0;
                basis.remove(i);
                basis.push(g);
                basis.push(a.monic()?);
                continue 'outer;
            }
        }
        break;
    }
    basis.sort_by_key(|p| p.degree());
    Ok(basis)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    fn at_least(self, k: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinite => true,
        }
    }

    fn is(self, k: u32) -> bool {
        self == Valuation::Finite(k)
    }

    fn shift(self, k: u32) -> Self {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v - k),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "∞"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum KodairaType {
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    pub fn euler(&self) -> u32 {
        match *self {
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => 6 + n,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    /// Characteristic-zero table. `None` for patterns that only occur on a
    /// non-minimal model.
    pub fn classify(va: Valuation, vb: Valuation, vd: u32) -> Option<KodairaType> {
        use KodairaType::*;
        let t = match vd {
            0 => return None,
            _ if va.is(0) && vb.is(0) => I(vd),
            2 if va.at_least(1) && vb.is(1) => II,
            3 if va.is(1) && vb.at_least(2) => III,
            4 if va.at_least(2) && vb.is(2) => IV,
            6 if va.at_least(2) && vb.at_least(3) => IStar(0),
            _ if vd > 6 && va.is(2) && vb.is(3) => IStar(vd - 6),
            8 if va.at_least(3) && vb.is(4) => IVStar,
            9 if va.is(3) && vb.at_least(5) => IIIStar,
            10 if va.at_least(4) && vb.is(5) => IIStar,
            _ => return None,
        };
        Some(t)
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Place {
    /// the roots of a squarefree factor; one fiber per root
    Finite {
        factor: String,
        degree: u32,
    },
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite { factor, .. } => write!(f, "{factor} = 0"),
            Place::Infinity => write!(f, "t = ∞"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KodairaFiber {
    pub place: Place,
    pub va: Valuation,
    pub vb: Valuation,
    pub vd: u32,
    pub kind: KodairaType,
    /// number of fibers at this place (degree of the factor)
    pub count: u32,
    /// true when the (4, 6, 12) shift was applied first
    pub shifted: bool,
}

impl KodairaFiber {
    pub fn euler(&self) -> u32 {
        self.kind.euler() * self.count
    }
}

#[derive(Clone, Debug)]
pub struct WeierstrassFamily {
    pub id: String,
    pub a: Poly,
    pub b: Poly,
}

impl WeierstrassFamily {
    pub fn new(id: &str, a: Poly, b: Poly) -> Result<Self> {
        if a.order() != b.order() {
            return Err(Error::OrderMismatch(a.order(), b.order()));
        }
        if a.degree().unwrap_or(0) > 8 || b.degree().unwrap_or(0) > 12 {
            return Err(Error::Invalid(format!("{id}: deg A ≤ 8 and deg B ≤ 12 are required")));
        }
        Ok(WeierstrassFamily {
            id: id.to_string(),
            a,
            b,
        })
    }

    pub fn order(&self) -> u32 {
        self.a.order()
    }
}

/// Δ = 4A³ + 27B².
pub fn discriminant(f: &WeierstrassFamily) -> Result<Poly> {
    let n = f.order();
    let c4 = CyclotomicNumber::from_rational(n, q(4));
    let c27 = CyclotomicNumber::from_rational(n, q(27));
    let d = f.a.pow(3).scale(&c4).add(&f.b.pow(2).scale(&c27));
    if d.is_zero() {
        return Err(Error::ZeroDiscriminant);
    }
    Ok(d)
}

fn classify_place(place: Place, va: Valuation, vb: Valuation, vd: u32, count: u32) -> Result<KodairaFiber> {
    let (va2, vb2, vd2, shifted) = if va.at_least(4) && vb.at_least(6) && vd >= 12 {
        (va.shift(4), vb.shift(6), vd - 12, true)
    } else {
        (va, vb, vd, false)
    };
    let fin = |v: Valuation| match v {
        Valuation::Finite(x) => x,
        Valuation::Infinite => u32::MAX,
    };
    let kind = KodairaType::classify(va2, vb2, vd2).ok_or(Error::NonMinimal((fin(va), fin(vb), vd)))?;
    Ok(KodairaFiber {
        place,
        va: va2,
        vb: vb2,
        vd: vd2,
        kind,
        count,
        shifted,
    })
}

/// Singular fibers, finite places first (by factor degree), then infinity.
/// Fails unless the Euler numbers add up to 24.
pub fn fiber_configuration(f: &WeierstrassFamily) -> Result<Vec<KodairaFiber>> {
    let d = discriminant(f)?;
    let mut out = Vec::new();
    for p in gcd_free_basis(&[f.a.clone(), f.b.clone(), d.clone()])? {
        let Valuation::Finite(vd) = d.valuation(&p)? else {
            unreachable!("Δ is nonzero")
        };
        if vd == 0 {
            continue;
        }
        let deg = p.degree().unwrap_or(0) as u32;
        let place = Place::Finite {
            factor: p.to_string(),
            degree: deg,
        };
        out.push(classify_place(place, f.a.valuation(&p)?, f.b.valuation(&p)?, vd, deg)?);
    }
    let at_inf = |p: &Poly, w: u32| match p.degree() {
        None => Valuation::Infinite,
        Some(k) => Valuation::Finite(w - k as u32),
    };
    let vd = 24 - d.degree().unwrap_or(0) as u32;
    if vd > 0 {
        out.push(classify_place(
            Place::Infinity,
            at_inf(&f.a, 8),
            at_inf(&f.b, 12),
            vd,
            1,
        )?);
    }
    let total: u32 = out.iter().map(|x| x.euler()).sum();
    if total != 24 {
        return Err(Error::Inconsistent(format!(
            "{}: fiber Euler numbers add up to {total}",
            f.id
        )));
    }
    Ok(out)
}

/// Fiber types with multiplicities, e.g. {"III": 1, "I1": 21}.
pub fn fiber_multiset(fibers: &[KodairaFiber]) -> BTreeMap<String, u32> {
    let mut m = BTreeMap::new();
    for x in fibers {
        *m.entry(x.kind.to_string()).or_insert(0) += x.count;
    }
    m
}

/// A product of roots of unity, as (order, exponent) factors: [(7,6),(3,1)] is ζ7⁶ζ3.
pub type RootSpec = Vec<(u32, i64)>;

fn lcm_all(it: impl IntoIterator<Item = u32>) -> u32 {
    it.into_iter().fold(1, |a, b| a.lcm(&b))
}

/// (x, y, t) ↦ (λx, μy, τt).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismSpec {
    #[serde(default)]
    pub x: RootSpec,
    #[serde(default)]
    pub y: RootSpec,
    #[serde(default)]
    pub t: RootSpec,
}

impl AutomorphismSpec {
    /// Smallest field Q(ζ_N) holding λ, μ, τ.
    pub fn field(&self) -> u32 {
        lcm_all(self.x.iter().chain(&self.y).chain(&self.t).map(|(o, _)| *o))
    }

    fn exponents(spec: &RootSpec, n: u32) -> i64 {
        spec.iter()
            .map(|&(o, e)| e * (n / o) as i64)
            .sum::<i64>()
            .rem_euclid(n as i64)
    }

    fn value(spec: &RootSpec, n: u32) -> CyclotomicNumber {
        CyclotomicNumber::zeta(n, Self::exponents(spec, n))
    }

    /// Order of the map itself: lcm of the orders of λ, μ, τ.
    pub fn order(&self) -> u32 {
        let n = self.field();
        [&self.x, &self.y, &self.t]
            .iter()
            .map(|s| n / gcd(n, Self::exponents(s, n) as u32))
            .fold(1, |a, b| a.lcm(&b))
    }

    /// σ followed by `o`.
    pub fn compose(&self, o: &AutomorphismSpec) -> AutomorphismSpec {
        let cat = |a: &RootSpec, b: &RootSpec| a.iter().chain(b).copied().collect();
        AutomorphismSpec {
            x: cat(&self.x, &o.x),
            y: cat(&self.y, &o.y),
            t: cat(&self.t, &o.t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierReport {
    /// field order N of the reduced root ζ_N^k
    pub field: u32,
    pub exponent: u32,
    /// multiplicative order of λτ/μ
    pub order: u32,
    pub automorphism_order: u32,
    /// multiplier primitive of the automorphism's order
    pub purely: bool,
}

impl fmt::Display for MultiplierReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = gcd(self.field, self.exponent).max(1);
        let (n, k) = (self.field / g, self.exponent / g);
        if self.exponent == 0 {
            write!(f, "1")?;
        } else {
            write!(f, "ζ{n}^{k}")?;
        }
        write!(
            f,
            " (order {}, automorphism of order {}, {})",
            self.order,
            self.automorphism_order,
            if self.purely {
                "purely non-symplectic"
            } else {
                "not purely non-symplectic"
            }
        )
    }
}

/// A(τt) = λ²A(t), B(τt) = λ³B(t) and λ³ = μ².
pub fn check_invariance(f: &WeierstrassFamily, auto: &AutomorphismSpec) -> Result<()> {
    let n = lcm_all([f.order(), auto.field()]);
    let lam = AutomorphismSpec::value(&auto.x, n);
    let mu = AutomorphismSpec::value(&auto.y, n);
    let tau = AutomorphismSpec::value(&auto.t, n);
    let l2 = &lam * &lam;
    let l3 = &l2 * &lam;
    if l3 != &mu * &mu {
        return Err(Error::NotInvariant(format!(
            "{}: λ³ ≠ μ², the cubic term is not preserved",
            f.id
        )));
    }
    for (name, p, w) in [("A", &f.a, &l2), ("B", &f.b, &l3)] {
        let p = p.embed(n)?;
        for (i, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() && &tau.pow(i as u32) != w {
                return Err(Error::NotInvariant(format!(
                    "{}: the t^{i} term of {name} is not preserved",
                    f.id
                )));
            }
        }
    }
    Ok(())
}

/// λτ/μ, the factor by which σ* multiplies dx ∧ dt / 2y.
pub fn omega_multiplier(f: &WeierstrassFamily, auto: &AutomorphismSpec) -> Result<MultiplierReport> {
    check_invariance(f, auto)?;
    let n = auto.field();
    let lam = AutomorphismSpec::value(&auto.x, n);
    let mu = AutomorphismSpec::value(&auto.y, n);
    let tau = AutomorphismSpec::value(&auto.t, n);
    let m = &(&lam * &tau) * &mu.inverse()?;
    let k = m
        .root_of_unity_exponent()
        .ok_or_else(|| Error::Inconsistent("multiplier is not a root of unity".into()))?;
    let order = n / gcd(n, k);
    let ao = auto.order();
    Ok(MultiplierReport {
        field: n,
        exponent: k,
        order,
        automorphism_order: ao,
        purely: order == ao,
    })
}

/// Registry entry for one worked example.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleEntry {
    pub id: String,
    pub case: String,
    /// order of the automorphism
    pub order: u32,
    #[serde(default)]
    pub skipped: Option<String>,
    /// degree -> coefficient: a rational like "-27/4" or a parameter name
    #[serde(default)]
    pub a: BTreeMap<u32, String>,
    #[serde(default)]
    pub b: BTreeMap<u32, String>,
    /// parameter -> "generic" or a rational value
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    #[serde(default)]
    pub auto: Option<AutomorphismSpec>,
    #[serde(default)]
    pub fibers: BTreeMap<String, u32>,
    #[serde(default)]
    pub multiplier_order: Option<u32>,
    #[serde(default)]
    pub purely: Option<bool>,
    /// claims about fixed points on fiber components; not checked
    #[serde(default)]
    pub annotations: Vec<String>,
    #[serde(default)]
    pub notes: Vec<String>,
    pub citation: String,
}

#[derive(Deserialize)]
struct ExampleFile {
    examples: Vec<ExampleEntry>,
}

pub fn load_registry(data: &DataStore) -> Result<Vec<ExampleEntry>> {
    let text = data.raw("examples.json").ok_or(Error::Data {
        file: "examples.json".into(),
        msg: "missing".into(),
    })?;
    let f: ExampleFile = serde_json::from_str(text).map_err(|e| Error::Data {
        file: "examples.json".into(),
        msg: e.to_string(),
    })?;
    Ok(f.examples)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExampleStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub id: String,
    pub case: String,
    pub status: ExampleStatus,
    pub fibers: Vec<KodairaFiber>,
    pub multiset: BTreeMap<String, u32>,
    pub multiplier: Option<MultiplierReport>,
    /// parameter values actually used
    pub sample: BTreeMap<String, String>,
    pub diffs: Vec<String>,
    pub notes: Vec<String>,
}

impl fmt::Display for ExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            ExampleStatus::Pass => "pass",
            ExampleStatus::Fail => "FAIL",
            ExampleStatus::Skipped => "skipped",
        };
        writeln!(f, "{} [{}]: {status}", self.id, self.case)?;
        if !self.sample.is_empty() {
            let s: Vec<String> = self.sample.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(f, "  parameters: {}", s.join(", "))?;
        }
        for x in &self.fibers {
            let mult = if x.count > 1 {
                format!("{} x ", x.count)
            } else {
                String::new()
            };
            let shift = if x.shifted { " (after minimalization)" } else { "" };
            writeln!(
                f,
                "  {mult}{} at {} (vA={}, vB={}, vΔ={}){shift}",
                x.kind, x.place, x.va, x.vb, x.vd
            )?;
        }
        if !self.fibers.is_empty() {
            let e: u32 = self.fibers.iter().map(|x| x.euler()).sum();
            writeln!(f, "  Euler sum {e}")?;
        }
        if let Some(m) = &self.multiplier {
            writeln!(f, "  ω multiplier {m}")?;
        }
        for d in &self.diffs {
            writeln!(f, "  mismatch: {d}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (a.trim().parse::<i64>().ok()?, b.trim().parse::<i64>().ok()?);
            (b != 0).then(|| qf(a, b))
        }
        None => s.parse::<i64>().ok().map(q),
    }
}

/// Bounded-height nonzero rational.
fn sample_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-60i64..=60);
    }
    qf(num, rng.gen_range(1i64..=24))
}

fn instantiate(e: &ExampleEntry, rng: &mut ChaCha8Rng) -> Result<(WeierstrassFamily, BTreeMap<String, String>)> {
    let mut values: BTreeMap<String, Rational> = BTreeMap::new();
    for (k, v) in &e.params {
        let r = if v == "generic" {
            sample_rational(rng)
        } else {
            parse_rational(v).ok_or_else(|| Error::Invalid(format!("{}: parameter {k} = {v}", e.id)))?
        };
        values.insert(k.clone(), r);
    }
    let build = |m: &BTreeMap<u32, String>| -> Result<Poly> {
        let deg = m.keys().max().copied().unwrap_or(0) as usize;
        let mut c = vec![Rational::zero(); deg + 1];
        for (&d, s) in m {
            c[d as usize] = match parse_rational(s) {
                Some(r) => r,
                None => values
                    .get(s.trim())
                    .cloned()
                    .ok_or_else(|| Error::Invalid(format!("{}: unknown coefficient {s}", e.id)))?,
            };
        }
        Ok(Poly::from_rationals(1, &c))
    };
    let fam = WeierstrassFamily::new(&e.id, build(&e.a)?, build(&e.b)?)?;
    let shown = values
        .iter()
        .filter(|(k, _)| e.params.get(*k).is_some_and(|v| v == "generic"))
        .map(|(k, v)| (k.clone(), v.to_string()))
        .collect();
    Ok((fam, shown))
}

const MAX_SAMPLE_ROUNDS: usize = 8;

/// Recomputes fibers and multiplier and compares them with the registry.
/// Generic parameters are drawn twice from `seed`; the two fiber
/// configurations must agree, otherwise a fresh pair is drawn.
pub fn verify_entry(e: &ExampleEntry, seed: u64) -> ExampleReport {
    let mut rep = ExampleReport {
        id: e.id.clone(),
        case: e.case.clone(),
        status: ExampleStatus::Pass,
        fibers: vec![],
        multiset: BTreeMap::new(),
        multiplier: None,
        sample: BTreeMap::new(),
        diffs: vec![],
        notes: e.notes.clone(),
    };
    if let Some(why) = &e.skipped {
        rep.status = ExampleStatus::Skipped;
        rep.notes.insert(0, format!("{why} [{}]", e.citation));
        return rep;
    }
    let generic = e.params.values().any(|v| v == "generic");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = None;
    for round in 0..MAX_SAMPLE_ROUNDS {
        let first = instantiate(e, &mut rng).and_then(|(f, s)| Ok((fiber_configuration(&f)?, f, s)));
        if !generic {
            chosen = Some(first);
            break;
        }
        let second = instantiate(e, &mut rng).and_then(|(f, _)| fiber_configuration(&f));
        match (&first, &second) {
            (Ok((a, _, _)), Ok(b)) if fiber_multiset(a) == fiber_multiset(b) => {
                if round > 0 {
                    rep.notes
                        .push(format!("resampled {round} time(s) after disagreeing samples"));
                }
                chosen = Some(first);
                break;
            }
            _ => continue,
        }
    }
    let Some(res) = chosen else {
        rep.status = ExampleStatus::Fail;
        rep.diffs
            .push(format!("no two parameter samples agreed in {MAX_SAMPLE_ROUNDS} rounds"));
        return rep;
    };
    let (fibers, fam, sample) = match res {
        Ok(x) => x,
        Err(err) => {
            rep.status = ExampleStatus::Fail;
            rep.diffs.push(err.to_string());
            return rep;
        }
    };
    rep.sample = sample;
    rep.multiset = fiber_multiset(&fibers);
    if rep.multiset != e.fibers {
        rep.diffs
            .push(format!("fibers {:?}, expected {:?}", rep.multiset, e.fibers));
    }
    let vd_total: u32 = fibers
        .iter()
        .map(|x| x.vd * x.count + if x.shifted { 12 * x.count } else { 0 })
        .sum();
    if vd_total != 24 {
        rep.diffs.push(format!("vanishing orders of Δ add up to {vd_total}"));
    }
    rep.fibers = fibers;
    if let Some(auto) = &e.auto {
        match omega_multiplier(&fam, auto) {
            Ok(m) => {
                if m.automorphism_order != e.order {
                    rep.diffs.push(format!(
                        "automorphism has order {}, expected {}",
                        m.automorphism_order, e.order
                    ));
                }
                if let Some(o) = e.multiplier_order {
                    if m.order != o {
                        rep.diffs.push(format!("multiplier order {}, expected {o}", m.order));
                    }
                }
                if let Some(p) = e.purely {
                    if m.purely != p {
                        rep.diffs
                            .push(format!("purely non-symplectic: {}, expected {p}", m.purely));
                    }
                }
                rep.multiplier = Some(m);
            }
            Err(err) => rep.diffs.push(err.to_string()),
        }
    }
    for a in &e.annotations {
        rep.notes.push(format!("not checked: {a}"));
    }
    if !rep.diffs.is_empty() {
        rep.status = ExampleStatus::Fail;
    }
    rep
}

pub fn verify_example(data: &DataStore, id: &str, seed: u64) -> Result<ExampleReport> {
    let reg = load_registry(data)?;
    let e = reg
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownExample(id.to_string()))?;
    Ok(verify_entry(e, seed))
}

pub fn verify_all(data: &DataStore, seed: u64) -> Result<Vec<ExampleReport>> {
    Ok(load_registry(data)?.iter().map(|e| verify_entry(e, seed)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(a: &[i64], b: &[i64]) -> WeierstrassFamily {
        WeierstrassFamily::new("t", Poly::from_ints(1, a), Poly::from_ints(1, b)).unwrap()
    }

    fn t_pow(k: usize, c: i64) -> Vec<i64> {
        let mut v = vec![0; k + 1];
        v[k] = c;
        v
    }

    #[test]
    fn discriminant_expansions() {
        let f = fam(&t_pow(2, 1), &t_pow(10, 1));
        let mut want = vec![0; 21];
        want[6] = 4;
        want[20] = 27;
        assert_eq!(discriminant(&f).unwrap(), Poly::from_ints(1, &want));
        // B = t^5 (t^7 - 1)
        let mut b = vec![0; 13];
        b[5] = -1;
        b[12] = 1;
        let f = fam(&[], &b);
        let d = discriminant(&f).unwrap();
        let mut s = vec![0; 8];
        s[0] = -1;
        s[7] = 1;
        let want = Poly::monomial(CyclotomicNumber::from_rational(1, q(27)), 10).mul(&Poly::from_ints(1, &s).pow(2));
        assert_eq!(d, want);
        assert_eq!(discriminant(&fam(&[], &[])).unwrap_err(), Error::ZeroDiscriminant);
    }

    #[test]
    fn kodaira_table() {
        use KodairaType::*;
        use Valuation::*;
        let c = |a, b, d| KodairaType::classify(a, b, d);
        assert_eq!(c(Finite(0), Finite(0), 5), Some(I(5)));
        assert_eq!(c(Finite(1), Finite(1), 2), Some(II));
        assert_eq!(c(Infinite, Finite(1), 2), Some(II));
        assert_eq!(c(Finite(1), Infinite, 3), Some(III));
        assert_eq!(c(Finite(2), Finite(2), 4), Some(IV));
        assert_eq!(c(Finite(2), Finite(3), 6), Some(IStar(0)));
        assert_eq!(c(Finite(2), Finite(3), 9), Some(IStar(3)));
        assert_eq!(c(Finite(3), Finite(4), 8), Some(IVStar));
        assert_eq!(c(Finite(3), Finite(5), 9), Some(IIIStar));
        assert_eq!(c(Infinite, Finite(5), 10), Some(IIStar));
        assert_eq!(c(Finite(4), Finite(6), 12), None);
        let euler: Vec<u32> = [I(1), II, III, IV, IStar(0), IStar(2), IVStar, IIIStar, IIStar]
            .iter()
            .map(|k| k.euler())
            .collect();
        assert_eq!(euler, vec![1, 2, 3, 4, 6, 8, 8, 9, 10]);
    }

    #[test]
    fn configurations() {
        let m = |f: &WeierstrassFamily| fiber_multiset(&fiber_configuration(f).unwrap());
        // A = t^2, B = t^10
        assert_eq!(
            m(&fam(&t_pow(2, 1), &t_pow(10, 1))),
            BTreeMap::from([("I0*".into(), 1), ("IV".into(), 1), ("I1".into(), 14)])
        );
        // A = 1, B = t^7
        assert_eq!(
            m(&fam(&[1], &t_pow(7, 1))),
            BTreeMap::from([("II*".into(), 1), ("I1".into(), 14)])
        );
        // B = 4 t^4 (t^7 - 1)
        let mut b = vec![0; 12];
        b[4] = -4;
        b[11] = 4;
        assert_eq!(m(&fam(&[], &b)), BTreeMap::from([("IV*".into(), 1), ("II".into(), 8)]));
    }

    #[test]
    fn non_minimal_is_shifted_once() {
        use Valuation::Finite;
        let e = classify_place(Place::Infinity, Finite(6), Finite(7), 14, 1).unwrap();
        assert_eq!(e.kind, KodairaType::II);
        assert!(e.shifted);
        let e = classify_place(Place::Infinity, Finite(4), Finite(6), 13, 1).unwrap();
        assert_eq!((e.kind, e.vd), (KodairaType::I(1), 1));
        // a second shift would be needed
        assert!(classify_place(Place::Infinity, Finite(8), Finite(12), 26, 1).is_err());
    }

    #[test]
    fn gcd_free_basis_splits_repeated_factors() {
        // (t-1)^2 (t+1) and (t-1)(t^2+1)
        let p = Poly::from_ints(1, &[-1, 1]).pow(2).mul(&Poly::from_ints(1, &[1, 1]));
        let r = Poly::from_ints(1, &[-1, 1]).mul(&Poly::from_ints(1, &[1, 0, 1]));
        let b = gcd_free_basis(&[p, r]).unwrap();
        let degs: Vec<usize> = b.iter().map(|x| x.degree().unwrap()).collect();
        assert_eq!(degs, vec![1, 1, 2]);
    }

    fn spec(x: &[(u32, i64)], y: &[(u32, i64)], t: &[(u32, i64)]) -> AutomorphismSpec {
        AutomorphismSpec {
            x: x.to_vec(),
            y: y.to_vec(),
            t: t.to_vec(),
        }
    }

    #[test]
    fn multipliers() {
        let mut a = vec![0; 8];
        a[7] = 2;
        a[0] = 3;
        let mut b = vec![0; 8];
        b[7] = 1;
        b[0] = -1;
        let f = fam(&a, &b);
        let s = spec(&[], &[(2, 1)], &[(7, 4)]);
        let m = omega_multiplier(&f, &s).unwrap();
        assert_eq!((m.order, m.automorphism_order, m.purely), (14, 14, true));
        // −ζ7⁴ = ζ14^(7+8)
        assert_eq!(m.exponent, 1);
        let mut b = vec![0; 13];
        b[5] = -1;
        b[12] = 1;
        let f = fam(&[], &b);
        let m = omega_multiplier(&f, &spec(&[(21, 2)], &[(7, 1)], &[(7, 6)])).unwrap();
        assert_eq!((m.field, m.exponent, m.order), (21, 17, 21));
        let id = spec(&[], &[], &[]);
        let m = omega_multiplier(&f, &id).unwrap();
        assert_eq!((m.exponent, m.order), (0, 1));
    }

    #[test]
    fn non_invariant_map_is_reported() {
        let mut b = vec![0; 11];
        b[3] = 1;
        b[10] = 1;
        let f = fam(&[], &b);
        let e = omega_multiplier(&f, &spec(&[(7, 2)], &[(2, 1), (7, 3)], &[(7, 3)])).unwrap_err();
        assert!(matches!(e, Error::NotInvariant(_)));
        assert!(omega_multiplier(&f, &spec(&[(7, 2)], &[(2, 1), (7, 3)], &[(7, 2)])).is_ok());
    }

    #[test]
    fn composition_multiplies_multipliers() {
        let f = fam(&t_pow(2, 1), &t_pow(10, 1));
        let s = spec(&[(7, 1)], &[(7, 5)], &[(2, 1), (7, 1)]);
        let m1 = omega_multiplier(&f, &s).unwrap();
        let m2 = omega_multiplier(&f, &s.compose(&s)).unwrap();
        let n = m1.field;
        assert_eq!(m2.field, n);
        assert_eq!(m2.exponent, (2 * m1.exponent) % n);
    }

    #[test]
    fn registry_examples_pass() {
        let d = DataStore::embedded().unwrap();
        let reps = verify_all(&d, 7).unwrap();
        let failed: Vec<String> = reps
            .iter()
            .filter(|r| r.status == ExampleStatus::Fail)
            .map(|r| r.to_string())
            .collect();
        assert!(failed.is_empty(), "{}", failed.join("\n"));
        let passed = reps.iter().filter(|r| r.status == ExampleStatus::Pass).count();
        assert!(passed >= 10);
    }
}
