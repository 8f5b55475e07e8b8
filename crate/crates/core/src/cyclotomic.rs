//! Exact finite sums of rational multiples of roots of unity.
//!
//! A [`CyclotomicSum`] stores terms `q * exp(2 pi i r)` with `r` a rational
//! angle in `[0, 1)`. Vanishing is decided exactly: with `N` the common
//! denominator of the angles, the sum is the value at `zeta_N` of a rational
//! polynomial of degree below `N`, and that value is zero iff the polynomial
//! is divisible by the cyclotomic polynomial `Phi_N`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Reduces a rational angle into `[0, 1)`.
pub fn normalize_angle(r: &BigRational) -> BigRational {
    r - r.floor()
}

#[derive(Clone, Default)]
pub struct CyclotomicSum {
    terms: BTreeMap<BigRational, BigRational>,
}

impl CyclotomicSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(BigRational::one(), BigRational::zero())
    }

    pub fn rational(q: BigRational) -> Self {
        Self::term(q, BigRational::zero())
    }

    /// `coeff * exp(2 pi i angle)`; the angle is taken mod 1.
    pub fn term(coeff: BigRational, angle: BigRational) -> Self {
        let mut s = Self::zero();
        s.add_term(coeff, angle);
        s
    }

    pub fn add_term(&mut self, coeff: BigRational, angle: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let angle = normalize_angle(&angle);
        match self.terms.entry(angle) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Terms as `(angle, coefficient)` pairs in increasing angle order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when no terms are stored. A non-empty sum may still vanish; use
    /// [`CyclotomicSum::is_zero`] for that.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least common denominator of the stored angles (1 for an empty sum).
    pub fn canonical_modulus(&self) -> BigInt {
        self.terms
            .keys()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()))
    }

    /// Multiplies every term by `exp(2 pi i angle)`.
    pub fn rotate(&self, angle: &BigRational) -> Self {
        let mut out = Self::zero();
        for (a, q) in &self.terms {
            out.add_term(q.clone(), a + angle);
        }
        out
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut out = Self::zero();
        for (a, c) in &self.terms {
            out.add_term(c * q, a.clone());
        }
        out
    }

    /// Exact vanishing test.
    pub fn is_zero(&self) -> bool {
        sum_is_zero(self)
    }

    /// Floating-point value, for cross-checks only.
    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (a, q) in &self.terms {
            let theta = std::f64::consts::TAU * a.to_f64().unwrap_or(0.0);
            let q = q.to_f64().unwrap_or(0.0);
            re += q * theta.cos();
            im += q * theta.sin();
        }
        (re, im)
    }

    pub fn magnitude(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }
}

/// Exact test that the represented complex number is zero.
pub fn sum_is_zero(s: &CyclotomicSum) -> bool {
    if s.terms.is_empty() {
        return true;
    }
    let n = s
        .canonical_modulus()
        .to_usize()
        .expect("angle denominator exceeds addressable polynomial degree");
    if n == 1 {
        // only the angle 0 remains, with a nonzero coefficient
        return false;
    }
    let denom = s
        .terms
        .values()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut poly = vec![BigInt::zero(); n];
    for (a, q) in &s.terms {
        let e = (a * BigInt::from(n))
            .to_integer()
            .to_usize()
            .expect("exponent below n");
        poly[e] += (q * &denom).to_integer();
    }
    let phi = cyclotomic_polynomial(n);
    reduce_mod_monic(&mut poly, &phi);
    poly.iter().all(Zero::is_zero)
}

/// Replaces `poly` by its remainder modulo the monic polynomial `m`
/// (coefficients in increasing degree).
fn reduce_mod_monic(poly: &mut [BigInt], m: &[BigInt]) {
    let deg = m.len() - 1;
    for top in (deg..poly.len()).rev() {
        if poly[top].is_zero() {
            continue;
        }
        let lead = std::mem::take(&mut poly[top]);
        let shift = top - deg;
        for (k, c) in m[..deg].iter().enumerate() {
            if !c.is_zero() {
                poly[shift + k] -= &lead * c;
            }
        }
    }
}

type PolyCache = RwLock<HashMap<usize, Arc<[BigInt]>>>;

fn cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Phi_n` with integer coefficients in increasing degree, memoized.
///
/// Computed as `x^n - 1` divided by `Phi_m` for every proper divisor `m`.
/// Concurrent callers may compute the same entry twice; they insert identical
/// values.
pub fn cyclotomic_polynomial(n: usize) -> Arc<[BigInt]> {
    assert!(n >= 1, "cyclotomic polynomials are indexed from 1");
    if let Some(p) = cache().read().expect("cache lock").get(&n) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = -BigInt::one();
    num[n] = BigInt::one();
    for m in (1..n).filter(|m| n.is_multiple_of(*m)) {
        let phi = cyclotomic_polynomial(m);
        num = exact_div_monic(&num, &phi);
    }
    let p: Arc<[BigInt]> = num.into();
    cache()
        .write()
        .expect("cache lock")
        .entry(n)
        .or_insert(p)
        .clone()
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for top in (dd..num.len()).rev() {
        let lead = std::mem::take(&mut rem[top]);
        if lead.is_zero() {
            continue;
        }
        let shift = top - dd;
        for (k, c) in den[..dd].iter().enumerate() {
            rem[shift + k] -= &lead * c;
        }
        quot[shift] = lead;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

impl PartialEq for CyclotomicSum {
    /// Equality of the represented complex numbers.
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }
}

impl Eq for CyclotomicSum {}

impl AddAssign<&CyclotomicSum> for CyclotomicSum {
    fn add_assign(&mut self, rhs: &CyclotomicSum) {
        for (a, q) in &rhs.terms {
            self.add_term(q.clone(), a.clone());
        }
    }
}

impl Add for CyclotomicSum {
    type Output = CyclotomicSum;
    fn add(mut self, rhs: CyclotomicSum) -> CyclotomicSum {
        self += &rhs;
        self
    }
}

impl Neg for CyclotomicSum {
    type Output = CyclotomicSum;
    fn neg(mut self) -> CyclotomicSum {
        for q in self.terms.values_mut() {
            *q = -std::mem::take(q);
        }
        self
    }
}

impl Sub for CyclotomicSum {
    type Output = CyclotomicSum;
    fn sub(self, rhs: CyclotomicSum) -> CyclotomicSum {
        self + (-rhs)
    }
}

impl std::iter::Sum for CyclotomicSum {
    fn sum<I: Iterator<Item = CyclotomicSum>>(iter: I) -> Self {
        iter.fold(CyclotomicSum::zero(), |acc, s| acc + s)
    }
}

impl fmt::Debug for CyclotomicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (a, q)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(if q.is_negative() { " - " } else { " + " })?;
            } else if q.is_negative() {
                f.write_str("-")?;
            }
            let q = q.abs();
            if a.is_zero() {
                write!(f, "{q}")?;
            } else {
                write!(f, "{q}*e({a})")?;
            }
        }
        Ok(())
    }
}
