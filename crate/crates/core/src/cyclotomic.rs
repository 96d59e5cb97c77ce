//! Exact arithmetic in Q(ζ_n) plus the small number-theory toolkit the rest
//! of the crate leans on.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den`.
pub fn qf(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn gcd(a: u32, b: u32) -> u32 {
    a.gcd(&b)
}

/// Divisors in ascending order.
pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Divisors in descending order, the layout used for eigenspace dimensions.
pub fn divisors_desc(n: u32) -> Vec<u32> {
    let mut d = divisors(n);
    d.reverse();
    d
}

pub fn totient(n: u32) -> u32 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u32
}

pub fn mobius(n: u32) -> i32 {
    let mut m = n;
    let mut r = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if m > 1 {
        r = -r;
    }
    r
}

pub fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

/// c_d(m): the sum of ζ^m over the primitive d-th roots of unity, via
/// μ(d/g)·φ(d)/φ(d/g) with g = gcd(d, m) (and g = d when d | m).
pub fn ramanujan_sum(d: u32, m: i64) -> i64 {
    assert!(d >= 1, "ramanujan_sum needs d >= 1");
    let r = m.rem_euclid(d as i64) as u32;
    let g = if r == 0 { d } else { gcd(d, r) };
    let e = d / g;
    mobius(e) as i64 * (totient(d) / totient(e)) as i64
}

fn poly_div_xd_minus_one(p: &[i64], d: usize) -> Vec<i64> {
    // exact division by x^d - 1, top down
    let deg = p.len() - 1;
    let mut rem = p.to_vec();
    let mut quo = vec![0i64; deg - d + 1];
    for i in (0..=deg - d).rev() {
        let c = rem[i + d];
        quo[i] = c;
        rem[i + d] -= c;
        rem[i] += c;
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quo
}

fn poly_mul_xd_minus_one(p: &[i64], d: usize) -> Vec<i64> {
    let mut out = vec![0i64; p.len() + d];
    for (i, &c) in p.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

/// Monic n-th cyclotomic polynomial, coefficients from the constant term up.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic_polynomial needs n >= 1");
    // Φ_n = Π_{d|n} (x^d - 1)^{μ(n/d)}; multiply first, then divide.
    let mut p = vec![1i64];
    let divs = divisors(n);
    for &d in &divs {
        if mobius(n / d) == 1 {
            p = poly_mul_xd_minus_one(&p, d as usize);
        }
    }
    for &d in &divs {
        if mobius(n / d) == -1 {
            p = poly_div_xd_minus_one(&p, d as usize);
        }
    }
    p
}

fn modulus(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("cyclotomic cache poisoned");
    map.entry(n)
        .or_insert_with(|| Arc::new(cyclotomic_polynomial(n)))
        .clone()
}

// Dense rational polynomials, lowest degree first. Only what inversion needs.
fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead = &b[db];
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut quo = vec![Rational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / lead;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        quo[shift] = c;
        r.pop();
        trim(&mut r);
    }
    (quo, r)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// An element of Q(ζ_n), stored as its coordinates on 1, ζ, …, ζ^{φ(n)-1}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    /// Reduces an arbitrary-length polynomial in ζ modulo Φ_n.
    pub fn new(order: u32, poly: Vec<Rational>) -> Self {
        assert!(order >= 1);
        let m = modulus(order);
        let d = m.len() - 1;
        let mut c = poly;
        // Φ_n is monic, so plain long division from the top works.
        for i in (d..c.len()).rev() {
            if c[i].is_zero() {
                continue;
            }
            let t = c[i].clone();
            for (j, &pj) in m.iter().enumerate() {
                if pj != 0 {
                    c[i - d + j] -= &t * BigInt::from(pj);
                }
            }
        }
        c.resize(d, Rational::zero());
        CyclotomicNumber { order, coeffs: c }
    }

    pub fn from_ints(order: u32, poly: &[i64]) -> Self {
        Self::new(order, poly.iter().map(|&x| q(x)).collect())
    }

    pub fn zero(order: u32) -> Self {
        Self::new(order, vec![])
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, r: Rational) -> Self {
        Self::new(order, vec![r])
    }

    /// ζ_n^k for any integer k.
    pub fn zeta(order: u32, k: i64) -> Self {
        let k = k.rem_euclid(order as i64) as usize;
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = Rational::one();
        Self::new(order, v)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.order)
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CyclotomicNumber {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CyclotomicNumber {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(Self::new(self.order, poly_mul(&self.coeffs, &other.coeffs)))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Inverse via the extended Euclidean algorithm against Φ_n.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse(self.order));
        }
        let m: Vec<Rational> = modulus(self.order).iter().map(|&x| q(x)).collect();
        let mut a = self.coeffs.clone();
        trim(&mut a);
        // invariant: s_i * a ≡ r_i (mod Φ_n)
        let (mut r0, mut r1) = (m, a);
        let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (vec![], vec![Rational::one()]);
        while r1.len() > 1 {
            let (quo, rem) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&quo, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since Φ_n is irreducible
        let c = r1[0].clone();
        let s: Vec<Rational> = s1.iter().map(|x| x / &c).collect();
        Ok(Self::new(self.order, s))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under Q(ζ_n) → Q(ζ_m), ζ_n ↦ ζ_m^{m/n}; requires n | m.
    pub fn embed(&self, target: u32) -> Result<Self> {
        if !target.is_multiple_of(self.order) {
            return Err(Error::OrderMismatch(self.order, target));
        }
        let step = (target / self.order) as usize;
        let mut v = vec![Rational::zero(); step * self.coeffs.len().max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Ok(Self::new(target, v))
    }

    /// Returns k with self = ζ_n^k, if self is an n-th root of unity.
    pub fn root_of_unity_exponent(&self) -> Option<u32> {
        (0..self.order).find(|&k| *self == Self::zeta(self.order, k as i64))
    }

    /// Trace down to Q.
    pub fn trace(&self) -> Rational {
        let n = self.order;
        let mut acc = Rational::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * q(ramanujan_sum(n, i as i64));
        }
        acc
    }

    /// Value at ζ = exp(2πi/n), as (re, im). Floating point, for oracles only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n;
            let v = rational_to_f64(c);
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

macro_rules! binop {
    ($tr:ident, $f:ident, $checked:ident) => {
        impl std::ops::$tr<&CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;
            /// Panics on mixed orders; use the checked variant to get an error instead.
            fn $f(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                self.$checked(rhs)
                    .expect("cyclotomic operands of different order")
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        self.scale(&q(-1))
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => format!("ζ{}", self.order),
                _ => format!("ζ{}^{}", self.order, i),
            };
            if i == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(ζ{})[{}]", self.order, self)
    }
}

/// Linear equations `Σ a_ij x_j = b_i` over Q with named unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalLinearSystem {
    labels: Vec<String>,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

/// Reduced row echelon form of an augmented matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// nonzero rows only, each of length `unknowns + 1`
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    /// True when some row reads 0 = c with c ≠ 0.
    pub fn inconsistent(&self) -> bool {
        let n = self.rows.first().map_or(0, |r| r.len() - 1);
        self.pivots.contains(&n)
    }
}

/// Gauss-Jordan on an augmented matrix (last column is the constant).
pub fn rref(mut a: Vec<Vec<Rational>>) -> Rref {
    if a.is_empty() {
        return Rref {
            rows: vec![],
            pivots: vec![],
        };
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= &pv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let (src, dst) = if i < r {
                    let (lo, hi) = a.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d -= &f * s;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    Rref { rows: a, pivots }
}

impl RationalLinearSystem {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::Invalid(format!("duplicate unknown {l}")));
            }
        }
        Ok(RationalLinearSystem {
            labels,
            rows: vec![],
            rhs: vec![],
        })
    }

    pub fn push_row(&mut self, coeffs: Vec<Rational>, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.labels.len() {
            return Err(Error::Invalid(format!(
                "row has {} coefficients for {} unknowns",
                coeffs.len(),
                self.labels.len()
            )));
        }
        self.rows.push(coeffs);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn augmented(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(r, b)| {
                let mut v = r.clone();
                v.push(b.clone());
                v
            })
            .collect()
    }

    pub fn rref(&self) -> Rref {
        rref(self.augmented())
    }

    /// Same rational solution set (both systems over the same unknowns).
    pub fn row_equivalent(&self, other: &Self) -> bool {
        self.labels == other.labels && self.rref() == other.rref()
    }

    /// `A x - b` for a candidate solution.
    pub fn residual(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(r, b)| r.iter().zip(x).map(|(a, v)| a * v).sum::<Rational>() - b)
            .collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(7), vec![1; 7]);
        assert_eq!(cyclotomic_polynomial(14), vec![1, -1, 1, -1, 1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
    }

    #[test]
    fn zeta_times_inverse_power() {
        let a = CyclotomicNumber::zeta(7, 1);
        let b = CyclotomicNumber::zeta(7, 6);
        assert!((&a * &b).is_one());
    }

    #[test]
    fn norm_of_one_minus_zeta7() {
        let one = CyclotomicNumber::one(7);
        let mut acc = one.clone();
        for j in 1..7 {
            acc = &acc * &(&one - &CyclotomicNumber::zeta(7, j));
        }
        assert_eq!(acc, CyclotomicNumber::from_rational(7, q(7)));
    }

    #[test]
    fn inverse_one_minus_zeta3() {
        let x = &CyclotomicNumber::one(3) - &CyclotomicNumber::zeta(3, 1);
        let inv = x.inverse().unwrap();
        let want = CyclotomicNumber::new(3, vec![qf(2, 3), qf(1, 3)]);
        assert_eq!(inv, want);
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(CyclotomicNumber::zero(5).inverse(), Err(Error::ZeroInverse(5)));
    }

    #[test]
    fn mixed_orders_rejected() {
        let a = CyclotomicNumber::one(7);
        let b = CyclotomicNumber::one(14);
        assert_eq!(a.checked_add(&b), Err(Error::OrderMismatch(7, 14)));
    }

    #[test]
    fn ramanujan_examples() {
        assert_eq!(ramanujan_sum(7, 14), 6);
        assert_eq!(ramanujan_sum(7, 1), -1);
        assert_eq!(ramanujan_sum(14, 7), -6);
        assert_eq!(ramanujan_sum(1, 5), 1);
    }

    #[test]
    fn totient_and_mobius() {
        assert_eq!([1, 2, 3, 6, 7, 14, 21, 42].map(totient), [1, 1, 2, 2, 6, 6, 12, 12]);
        assert_eq!([1, 2, 4, 6, 30].map(mobius), [1, -1, 0, 1, -1]);
    }

    #[test]
    fn embed_matches_power() {
        let z = CyclotomicNumber::zeta(7, 3);
        assert_eq!(z.embed(14).unwrap(), CyclotomicNumber::zeta(14, 6));
        assert_eq!(z.embed(14).unwrap().root_of_unity_exponent(), Some(6));
    }

    #[test]
    fn display_is_readable() {
        let x = CyclotomicNumber::new(3, vec![qf(2, 3), qf(-1, 3)]);
        assert_eq!(x.to_string(), "2/3 - 1/3*ζ3");
        assert_eq!(CyclotomicNumber::zero(3).to_string(), "0");
    }

    #[test]
    fn rref_detects_inconsistency() {
        let r = rref(vec![vec![q(1), q(1), q(1)], vec![q(2), q(2), q(3)]]);
        assert!(r.inconsistent());
    }

    #[test]
    fn trace_of_zeta() {
        assert_eq!(CyclotomicNumber::zeta(7, 1).trace(), q(-1));
        assert_eq!(CyclotomicNumber::one(14).trace(), q(6));
    }
}
