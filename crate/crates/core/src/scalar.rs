//! Exact arithmetic in the cyclotomic field K = Q(zeta_m).
//!
//! Elements are polynomials in `zeta_m` reduced modulo the m-th cyclotomic
//! polynomial, with arbitrary-precision rational coefficients. `m = 1` or
//! `m = 2` gives plain Q.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug)]
pub(crate) struct FieldData {
    m: u32,
    /// Monic minimal polynomial Phi_m, low-to-high integer coefficients.
    phi: Vec<BigInt>,
    degree: usize,
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<FieldData>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Exact division of integer polynomials, requiring a monic divisor.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
    while rem.len() > dd {
        let k = rem.len() - 1;
        let c = rem[k].clone();
        if !c.is_zero() {
            quot[k - dd] = c.clone();
            for (i, d) in den.iter().enumerate() {
                let idx = k - dd + i;
                let v = std::mem::take(&mut rem[idx]) - &c * d;
                rem[idx] = v;
            }
        }
        rem.pop();
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// Phi_m as integer coefficients, computed by dividing X^m - 1 by all
/// Phi_d with d | m, d < m.
fn cyclotomic_poly(m: u32) -> Vec<BigInt> {
    if m == 1 {
        return vec![-BigInt::one(), BigInt::one()];
    }
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    let mut acc = num;
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_poly(d);
            acc = poly_div_exact(&acc, &phi_d);
        }
    }
    acc
}

/// The coefficient field Q(zeta_m). Cheap to clone; data is shared per `m`.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(m={})", self.0.m)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.m == other.0.m
    }
}
impl Eq for Field {}

impl Field {
    pub fn new(m: u32) -> Result<Field> {
        if m == 0 {
            return Err(Error::InvariantViolation("cyclotomic order m must be >= 1".into()));
        }
        let mut cache = cyclotomic_cache().lock().unwrap();
        let data = cache
            .entry(m)
            .or_insert_with(|| {
                let phi = cyclotomic_poly(m);
                let degree = phi.len() - 1;
                Arc::new(FieldData { m, phi, degree })
            })
            .clone();
        Ok(Field(data))
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    /// Degree of Phi_m, i.e. the dimension of K over Q.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// Order of the group of roots of unity in K: lcm(2, m).
    pub fn root_of_unity_bound(&self) -> u32 {
        if self.0.m % 2 == 0 {
            self.0.m
        } else {
            2 * self.0.m
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar {
            field: self.clone(),
            coeffs: vec![BigRational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> Scalar {
        self.integer(1)
    }

    pub fn integer(&self, value: i64) -> Scalar {
        self.rational(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn rational(&self, value: BigRational) -> Scalar {
        let mut coeffs = vec![BigRational::zero(); self.degree()];
        coeffs[0] = value;
        let mut s = Scalar { field: self.clone(), coeffs };
        // degree() >= 1 always, but m = 1 reduces X - 1, so renormalize.
        s.reduce_in_place(&[]);
        s
    }

    pub fn ratio(&self, numer: i64, denom: i64) -> Result<Scalar> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.rational(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    /// The primitive m-th root of unity zeta_m.
    pub fn zeta(&self) -> Scalar {
        self.zeta_pow(1)
    }

    /// zeta_m^k for any integer k.
    pub fn zeta_pow(&self, k: i64) -> Scalar {
        let m = self.0.m as i64;
        let e = k.rem_euclid(m) as usize;
        let mut raw = vec![BigRational::zero(); e + 1];
        raw[e] = BigRational::one();
        self.from_raw(raw)
    }

    /// Generator of the full group of roots of unity in K
    /// (order `root_of_unity_bound()`): zeta for even m, -zeta^((m+1)/2) for odd m.
    pub fn omega_pow(&self, k: i64) -> Scalar {
        let mm = self.root_of_unity_bound() as i64;
        let e = k.rem_euclid(mm);
        if self.0.m % 2 == 0 {
            self.zeta_pow(e)
        } else {
            let half = (self.0.m as i64 + 1) / 2;
            let z = self.zeta_pow(e * half);
            if e % 2 == 1 {
                -&z
            } else {
                z
            }
        }
    }

    /// Builds a scalar from low-to-high coefficients of a polynomial in zeta,
    /// reducing modulo Phi_m.
    pub fn from_coeffs(&self, coeffs: Vec<BigRational>) -> Scalar {
        self.from_raw(coeffs)
    }

    fn from_raw(&self, coeffs: Vec<BigRational>) -> Scalar {
        let mut s = Scalar { field: self.clone(), coeffs };
        s.reduce_in_place(&[]);
        s
    }
}

/// An element of Q(zeta_m) in canonical reduced form.
#[derive(Clone)]
pub struct Scalar {
    field: Field,
    /// Length `field.degree()`, low-to-high coefficients.
    coeffs: Vec<BigRational>,
}

impl Scalar {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Rational value when the element lies in Q, otherwise None.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn assert_same_field(&self, other: &Scalar) {
        assert_eq!(
            self.field.m(),
            other.field.m(),
            "scalar arithmetic across different cyclotomic fields"
        );
    }

    /// Reduces `self.coeffs ++ high` modulo Phi_m and truncates to degree.
    fn reduce_in_place(&mut self, high: &[BigRational]) {
        let deg = self.field.degree();
        let phi = &self.field.0.phi;
        let mut v = std::mem::take(&mut self.coeffs);
        v.extend_from_slice(high);
        while v.len() > deg {
            let k = v.len() - 1;
            let c = v[k].clone();
            if !c.is_zero() {
                for (i, p) in phi.iter().enumerate() {
                    let idx = k - deg + i;
                    if idx < k {
                        let delta = &c * BigRational::from_integer(p.clone());
                        let cur = std::mem::take(&mut v[idx]);
                        v[idx] = cur - delta;
                    }
                }
            }
            v.pop();
        }
        v.resize(deg, BigRational::zero());
        self.coeffs = v;
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Extended Euclid in Q[X] against the irreducible Phi_m.
        let deg = self.field.degree();
        let mut r0: Vec<BigRational> = self
            .field
            .0
            .phi
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut r1 = self.coeffs.clone();
        trim(&mut r0);
        trim(&mut r1);
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 = gcd (a nonzero constant), s0 * self = r0 mod Phi.
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let mut coeffs: Vec<BigRational> = s0.iter().map(|x| x / &c).collect();
        coeffs.resize(deg.max(coeffs.len()), BigRational::zero());
        let mut out = Scalar { field: self.field.clone(), coeffs };
        out.reduce_in_place(&[]);
        Ok(out)
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        self.assert_same_field(other);
        Ok(self * &other.inv()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i64) -> Result<Scalar> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = self.field.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Least r >= 1 with self^r = 1, searching up to lcm(2, m);
    /// None means the element is not a root of unity.
    pub fn root_of_unity_order(&self) -> Result<Option<u32>> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let bound = self.field.root_of_unity_bound();
        let mut pow = self.clone();
        for r in 1..=bound {
            if pow.is_one() {
                return Ok(Some(r));
            }
            pow = &pow * self;
        }
        Ok(None)
    }

    /// Canonical string form: "p/q" for rational fields, otherwise
    /// "(c0, c1, ...)/d" over a common denominator d.
    pub fn canonical_string(&self) -> String {
        if self.field.degree() == 1 {
            return rational_string(&self.coeffs[0]);
        }
        let mut denom = BigInt::one();
        for c in &self.coeffs {
            denom = denom.lcm(c.denom());
        }
        let nums: Vec<String> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(denom.clone())).numer().to_string())
            .collect();
        format!("({})/{}", nums.join(", "), denom)
    }
}

fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let cur = std::mem::take(&mut out[i + j]);
            out[i + j] = cur + x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = a.to_vec();
    out.resize(out.len().max(b.len()), BigRational::zero());
    for (i, y) in b.iter().enumerate() {
        let cur = std::mem::take(&mut out[i]);
        out[i] = cur - y;
    }
    trim(&mut out);
    out
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den.last().unwrap();
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    while rem.len() > dd {
        let k = rem.len() - 1;
        let c = &rem[k] / lead;
        if !c.is_zero() {
            quot[k - dd] = c.clone();
            for (i, d) in den.iter().enumerate() {
                let idx = k - dd + i;
                let cur = std::mem::take(&mut rem[idx]);
                rem[idx] = cur - &c * d;
            }
        }
        rem.pop();
    }
    trim(&mut rem);
    (quot, rem)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}
impl Eq for Scalar {}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.canonical_string())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Scalar { field: self.field.clone(), coeffs }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Scalar { field: self.field.clone(), coeffs }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.assert_same_field(rhs);
        let prod = poly_mul(&self.coeffs, &rhs.coeffs);
        let mut out = Scalar {
            field: self.field.clone(),
            coeffs: prod,
        };
        out.reduce_in_place(&[]);
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}
impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}
impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}
impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.canonical_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::new(1).unwrap()
    }

    fn q4() -> Field {
        Field::new(4).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        // Phi_1 = X - 1, Phi_2 = X + 1, Phi_4 = X^2 + 1, Phi_6 = X^2 - X + 1
        assert_eq!(Field::new(1).unwrap().degree(), 1);
        assert_eq!(Field::new(2).unwrap().degree(), 1);
        assert_eq!(Field::new(4).unwrap().degree(), 2);
        assert_eq!(Field::new(6).unwrap().degree(), 2);
        assert_eq!(Field::new(5).unwrap().degree(), 4);
        assert_eq!(Field::new(12).unwrap().degree(), 4);
        let f12 = Field::new(12).unwrap();
        // Phi_12 = X^4 - X^2 + 1
        let expect: Vec<BigInt> = [1, 0, -1, 0, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(f12.0.phi, expect);
    }

    #[test]
    fn rational_arithmetic_m1() {
        let f = q();
        let a = f.ratio(1, 2).unwrap();
        let b = f.ratio(1, 3).unwrap();
        assert_eq!(&a + &b, f.ratio(5, 6).unwrap());
        assert_eq!((&a * &b).canonical_string(), "1/6");
    }

    #[test]
    fn zeta_squares_to_minus_one_m4() {
        let f = q4();
        let z = f.zeta();
        assert_eq!(&z * &z, f.integer(-1));
    }

    #[test]
    fn inverse_of_one_plus_zeta_m4() {
        // (1 + zeta)^-1 = (1 - zeta)/2, checked by multiplication.
        let f = q4();
        let a = &f.one() + &f.zeta();
        let inv = a.inv().unwrap();
        let expect = (&f.one() - &f.zeta()).div(&f.integer(2)).unwrap();
        assert_eq!(inv, expect);
        assert!((&a * &inv).is_one());
    }

    #[test]
    fn division_by_zero_rejected() {
        let f = q();
        assert_eq!(f.one().div(&f.zero()), Err(Error::DivisionByZero));
        assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn root_of_unity_orders() {
        let f = q();
        assert_eq!(f.one().root_of_unity_order().unwrap(), Some(1));
        assert_eq!(f.integer(2).root_of_unity_order().unwrap(), None);
        assert_eq!(f.integer(-1).root_of_unity_order().unwrap(), Some(2));
        assert_eq!(f.zero().root_of_unity_order(), Err(Error::ZeroInput));

        let f4 = q4();
        // powers of zeta: zeta, -1, -zeta, 1
        assert_eq!(f4.zeta().root_of_unity_order().unwrap(), Some(4));
        let mut pow = f4.one();
        for _ in 0..4 {
            pow = &pow * &f4.zeta();
        }
        assert!(pow.is_one());
    }

    #[test]
    fn omega_generates_all_roots_of_unity() {
        for m in [1u32, 2, 3, 4, 5, 6, 8, 12] {
            let f = Field::new(m).unwrap();
            let bound = f.root_of_unity_bound();
            let omega = f.omega_pow(1);
            assert_eq!(omega.root_of_unity_order().unwrap(), Some(bound));
            // omega^{m/ gcd} consistency: zeta is a power of omega
            let e = if m % 2 == 0 { 1 } else { 2 };
            assert_eq!(f.omega_pow(e), f.zeta());
        }
    }

    #[test]
    fn negative_powers() {
        let f = q4();
        let z = f.zeta();
        assert_eq!(z.pow(-1).unwrap(), f.zeta_pow(-1));
        assert!((&z.pow(-1).unwrap() * &z).is_one());
        assert_eq!(f.integer(2).pow(-2).unwrap(), f.ratio(1, 4).unwrap());
    }

    #[test]
    fn canonical_strings() {
        let f = q();
        assert_eq!(f.ratio(5, 6).unwrap().canonical_string(), "5/6");
        assert_eq!(f.integer(3).canonical_string(), "3");
        let f4 = q4();
        let s = &f4.ratio(1, 2).unwrap() - &f4.zeta();
        assert_eq!(s.canonical_string(), "(1, -2)/2");
    }
}
