//! The quantum torus Q = k_q[x_1^{+-1}, ..., x_n^{+-1}] with relations
//! x_i x_j = q_ij x_j x_i: monomial commutation, element arithmetic, the
//! centre and central grading group, the splitting Q = Z(Q) + [Q, Q], units,
//! and the fgc test.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{smith_kernel, GroupIndex, LatticeVec, RelationRow, SubgroupBasis};
use crate::scalar::{Field, Scalar};

/// One entry of the quantum matrix, restricted to the exactly representable
/// form q = r * zeta^a. Internally normalized as (positive rational) * omega^e
/// where omega generates the full group of roots of unity of K, so that sign
/// and zeta-power cannot encode the same value two ways.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QEntry {
    pos_rat: BigRational,
    rou_exp: u32,
}

impl QEntry {
    /// Builds from a rational part and a zeta-exponent.
    pub fn new(field: &Field, rat: BigRational, zeta_exp: i64) -> Result<QEntry> {
        if rat.is_zero() {
            return Err(Error::ZeroInput);
        }
        let bound = field.root_of_unity_bound() as i64;
        let zeta_as_omega = if field.m() % 2 == 0 { 1i64 } else { 2i64 };
        let mut e = (zeta_exp.rem_euclid(field.m() as i64)) * zeta_as_omega;
        if rat.is_negative() {
            e += bound / 2;
        }
        Ok(QEntry {
            pos_rat: rat.abs(),
            rou_exp: e.rem_euclid(bound) as u32,
        })
    }

    pub fn one() -> QEntry {
        QEntry { pos_rat: BigRational::one(), rou_exp: 0 }
    }

    pub fn is_one(&self) -> bool {
        self.pos_rat.is_one() && self.rou_exp == 0
    }

    fn mul(&self, other: &QEntry, bound: u32) -> QEntry {
        QEntry {
            pos_rat: &self.pos_rat * &other.pos_rat,
            rou_exp: (self.rou_exp + other.rou_exp) % bound,
        }
    }

    fn pow(&self, k: i64, bound: u32) -> QEntry {
        let rat = rational_pow(&self.pos_rat, k);
        let e = (self.rou_exp as i64 * k).rem_euclid(bound as i64) as u32;
        QEntry { pos_rat: rat, rou_exp: e }
    }

    fn inverse(&self, bound: u32) -> QEntry {
        self.pow(-1, bound)
    }

    pub fn to_scalar(&self, field: &Field) -> Scalar {
        &field.rational(self.pos_rat.clone()) * &field.omega_pow(self.rou_exp as i64)
    }

    /// Prime exponents of the positive rational part, for relation extraction.
    fn prime_exponents(&self) -> Vec<(u64, i64)> {
        let mut out: BTreeMap<u64, i64> = BTreeMap::new();
        for (int, sign) in [
            (self.pos_rat.numer().clone(), 1i64),
            (self.pos_rat.denom().clone(), -1i64),
        ] {
            let mut v: u64 = int
                .try_into()
                .expect("quantum matrix rational parts must fit in u64 for factorization");
            let mut p = 2u64;
            while p * p <= v {
                while v % p == 0 {
                    *out.entry(p).or_insert(0) += sign;
                    v /= p;
                }
                p += 1;
            }
            if v > 1 {
                *out.entry(v).or_insert(0) += sign;
            }
        }
        out.into_iter().filter(|(_, e)| *e != 0).collect()
    }

    pub fn rou_exp(&self) -> u32 {
        self.rou_exp
    }
}

fn rational_pow(r: &BigRational, k: i64) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    let base = if k < 0 { r.recip() } else { r.clone() };
    let mut acc = BigRational::one();
    let mut sq = base;
    let mut e = k.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        sq = &sq.clone() * &sq;
        e >>= 1;
    }
    acc
}

/// The quantum matrix (q_ij) with q_ii = 1 and q_ij q_ji = 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuantumMatrix {
    n: usize,
    entries: Vec<Vec<QEntry>>,
}

impl QuantumMatrix {
    /// Builds from the upper triangle (entries (i, j) with i < j, row-major).
    pub fn from_upper_triangle(field: &Field, n: usize, upper: Vec<((usize, usize), QEntry)>) -> Result<QuantumMatrix> {
        let bound = field.root_of_unity_bound();
        let mut entries = vec![vec![QEntry::one(); n]; n];
        for ((i, j), q) in upper {
            if i >= j || j >= n {
                return Err(Error::InvariantViolation(format!(
                    "quantum matrix entry ({}, {}) must satisfy i < j <= n",
                    i + 1,
                    j + 1
                )));
            }
            entries[j][i] = q.inverse(bound);
            entries[i][j] = q;
        }
        Ok(QuantumMatrix { n, entries })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &QEntry {
        &self.entries[i][j]
    }
}

#[derive(Debug)]
struct TorusData {
    field: Field,
    qmat: QuantumMatrix,
    xi: SubgroupBasis,
}

/// Immutable context (field, quantum matrix, cached central grading group).
#[derive(Clone)]
pub struct TorusContext(Arc<TorusData>);

impl fmt::Debug for TorusContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusContext(n={}, m={})", self.rank(), self.field().m())
    }
}

impl PartialEq for TorusContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.qmat == other.0.qmat)
    }
}
impl Eq for TorusContext {}

impl TorusContext {
    pub fn new(field: Field, qmat: QuantumMatrix) -> Result<TorusContext> {
        let xi = central_grading_group(&field, &qmat)?;
        Ok(TorusContext(Arc::new(TorusData { field, qmat, xi })))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn qmat(&self) -> &QuantumMatrix {
        &self.0.qmat
    }

    pub fn rank(&self) -> usize {
        self.0.qmat.n
    }

    /// Cached basis of the central grading group.
    pub fn xi(&self) -> &SubgroupBasis {
        &self.0.xi
    }

    /// Recomputes the central grading group and compares with the cache.
    pub fn validate(&self) -> Result<()> {
        let fresh = central_grading_group(&self.0.field, &self.0.qmat)?;
        if fresh != self.0.xi {
            return Err(Error::InvariantViolation("cached central grading group is stale".into()));
        }
        Ok(())
    }

    /// True iff the central grading group has full rank, i.e. finite index.
    pub fn is_fgc(&self) -> bool {
        matches!(self.0.xi.index, GroupIndex::Finite(_))
    }

    fn check_rank(&self, v: &LatticeVec) -> Result<()> {
        if v.rank() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: v.rank() });
        }
        Ok(())
    }

    /// The normal-ordering factor f with x^a * x^b = f(a, b) x^{a+b},
    /// f(a, b) = prod_{i > j} q_ij^{a_i b_j}.
    pub fn bicharacter(&self, a: &LatticeVec, b: &LatticeVec) -> Result<Scalar> {
        Ok(self.bicharacter_entry(a, b)?.to_scalar(self.field()))
    }

    fn bicharacter_entry(&self, a: &LatticeVec, b: &LatticeVec) -> Result<QEntry> {
        self.check_rank(a)?;
        self.check_rank(b)?;
        let bound = self.field().root_of_unity_bound();
        let mut acc = QEntry::one();
        for i in 1..self.rank() {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..i {
                if b.0[j] == 0 {
                    continue;
                }
                let f = self.0.qmat.entry(i, j).pow(a.0[i] * b.0[j], bound);
                acc = acc.mul(&f, bound);
            }
        }
        Ok(acc)
    }

    /// True iff x^lambda is central: prod_j q_ij^{lambda_j} = 1 for every i.
    pub fn center_membership(&self, lambda: &LatticeVec) -> Result<bool> {
        self.check_rank(lambda)?;
        let bound = self.field().root_of_unity_bound();
        for i in 0..self.rank() {
            let mut acc = QEntry::one();
            for j in 0..self.rank() {
                if lambda.0[j] != 0 {
                    acc = acc.mul(&self.0.qmat.entry(i, j).pow(lambda.0[j], bound), bound);
                }
            }
            if !acc.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Conjugation factor of x^lambda by x_i: x_i x^lambda x_i^{-1} = gamma x^lambda.
    pub fn conjugation_factor(&self, i: usize, lambda: &LatticeVec) -> Result<Scalar> {
        self.check_rank(lambda)?;
        let bound = self.field().root_of_unity_bound();
        let mut acc = QEntry::one();
        for j in 0..self.rank() {
            if lambda.0[j] != 0 {
                acc = acc.mul(&self.0.qmat.entry(i, j).pow(lambda.0[j], bound), bound);
            }
        }
        Ok(acc.to_scalar(self.field()))
    }

    pub fn zero(&self) -> TorusElement {
        TorusElement { ctx: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> TorusElement {
        self.monomial(LatticeVec::zero(self.rank()), self.field().one())
    }

    pub fn scalar(&self, c: Scalar) -> TorusElement {
        self.monomial(LatticeVec::zero(self.rank()), c)
    }

    pub fn monomial(&self, degree: LatticeVec, coeff: Scalar) -> TorusElement {
        assert_eq!(degree.rank(), self.rank(), "monomial degree has wrong rank");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(degree, coeff);
        }
        TorusElement { ctx: self.clone(), terms }
    }

    /// The generator x_i.
    pub fn x(&self, i: usize) -> TorusElement {
        self.monomial(LatticeVec::basis(self.rank(), i), self.field().one())
    }
}

/// Extracts the multiplicative relation system cutting out the central
/// grading group and solves it: one plain row per prime appearing in a
/// rational part, one mod-lcm(2, m) row for the root-of-unity exponents
/// (signs are folded into those exponents).
pub fn central_grading_group(field: &Field, qmat: &QuantumMatrix) -> Result<SubgroupBasis> {
    let n = qmat.n;
    let bound = field.root_of_unity_bound() as i64;
    let mut rows: Vec<RelationRow> = vec![];
    for i in 0..n {
        let mut primes: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
        let mut rou_row = vec![0i64; n];
        let mut rou_nontrivial = false;
        for j in 0..n {
            let q = qmat.entry(i, j);
            for (p, e) in q.prime_exponents() {
                primes.entry(p).or_insert_with(|| vec![0; n])[j] = e;
            }
            rou_row[j] = q.rou_exp() as i64;
            if q.rou_exp() != 0 {
                rou_nontrivial = true;
            }
        }
        for (_, coeffs) in primes {
            rows.push(RelationRow::plain(coeffs));
        }
        if rou_nontrivial {
            rows.push(RelationRow::modular(rou_row, bound));
        }
    }
    smith_kernel(n, &rows)
}

/// A finite k-linear combination of normal-ordered monomials x^lambda.
#[derive(Clone)]
pub struct TorusElement {
    ctx: TorusContext,
    terms: BTreeMap<LatticeVec, Scalar>,
}

impl TorusElement {
    pub fn context(&self) -> &TorusContext {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<LatticeVec, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&LatticeVec::zero(self.ctx.rank()))
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of x^0; this is the trace form epsilon.
    pub fn epsilon(&self) -> Scalar {
        self.terms
            .get(&LatticeVec::zero(self.ctx.rank()))
            .cloned()
            .unwrap_or_else(|| self.ctx.field().zero())
    }

    /// Coefficient of x^lambda.
    pub fn coeff(&self, lambda: &LatticeVec) -> Scalar {
        self.terms
            .get(lambda)
            .cloned()
            .unwrap_or_else(|| self.ctx.field().zero())
    }

    fn check_ctx(&self, other: &TorusElement) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn scale(&self, c: &Scalar) -> TorusElement {
        if c.is_zero() {
            return self.ctx.zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.clone(), v * c))
            .collect();
        TorusElement { ctx: self.ctx.clone(), terms }
    }

    pub fn try_add(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_ctx(other)?;
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            match terms.get_mut(k) {
                Some(cur) => {
                    let sum = &*cur + v;
                    if sum.is_zero() {
                        terms.remove(k);
                    } else {
                        *cur = sum;
                    }
                }
                None => {
                    terms.insert(k.clone(), v.clone());
                }
            }
        }
        Ok(TorusElement { ctx: self.ctx.clone(), terms })
    }

    pub fn try_mul(&self, other: &TorusElement) -> Result<TorusElement> {
        self.check_ctx(other)?;
        let mut out = self.ctx.zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let f = self.ctx.bicharacter(a, b)?;
                let coeff = &(ca * cb) * &f;
                if coeff.is_zero() {
                    continue;
                }
                let deg = a + b;
                match out.terms.get_mut(&deg) {
                    Some(cur) => {
                        let sum = &*cur + &coeff;
                        if sum.is_zero() {
                            out.terms.remove(&deg);
                        } else {
                            *cur = sum;
                        }
                    }
                    None => {
                        out.terms.insert(deg, coeff);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Commutator ab - ba in Lie(Q).
    pub fn bracket(&self, other: &TorusElement) -> Result<TorusElement> {
        Ok(&self.try_mul(other)? - &other.try_mul(self)?)
    }

    /// Splits into (central part, commutator part): terms with degree in Xi
    /// versus the rest. The second component lies in [Q, Q].
    pub fn split_center_commutator(&self) -> (TorusElement, TorusElement) {
        let mut central = self.ctx.zero();
        let mut comm = self.ctx.zero();
        for (k, v) in &self.terms {
            let target = if self.ctx.center_membership(k).expect("rank matches") {
                &mut central
            } else {
                &mut comm
            };
            target.terms.insert(k.clone(), v.clone());
        }
        (central, comm)
    }

    pub fn is_central(&self) -> bool {
        self.terms
            .keys()
            .all(|k| self.ctx.center_membership(k).expect("rank matches"))
    }

    /// Unit test per the graded-unit criterion: a is invertible iff it is a
    /// nonzero single graded term c x^lambda. Returns that data.
    pub fn is_unit(&self) -> Option<(LatticeVec, Scalar)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, v) = self.terms.iter().next().unwrap();
        Some((k.clone(), v.clone()))
    }

    /// Inverse of a unit: (c x^l)^{-1} = c^{-1} f(l, -l)^{-1} x^{-l}.
    pub fn unit_inverse(&self) -> Result<TorusElement> {
        let (lambda, c) = self.is_unit().ok_or(Error::NotAUnit)?;
        let f = self.ctx.bicharacter(&lambda, &-&lambda)?;
        let coeff = c.inv()?.div(&f)?;
        Ok(self.ctx.monomial(-&lambda, coeff))
    }

    /// Writes the commutator part as explicit brackets: each non-central term
    /// c x^l equals (1 - gamma^{-1})^{-1} [x_i, x_i^{-1} c x^l] for any i whose
    /// conjugation factor gamma on x^l differs from 1.
    pub fn commutator_part_as_brackets(&self) -> Vec<(TorusElement, TorusElement)> {
        let (_, comm) = self.split_center_commutator();
        let mut out = vec![];
        for (lambda, c) in &comm.terms {
            let i = (0..self.ctx.rank())
                .find(|&i| {
                    !self
                        .ctx
                        .conjugation_factor(i, lambda)
                        .expect("rank matches")
                        .is_one()
                })
                .expect("non-central term must have a nontrivial conjugation");
            let gamma = self.ctx.conjugation_factor(i, lambda).unwrap();
            let factor = (&self.ctx.field().one() - &gamma.inv().unwrap())
                .inv()
                .expect("gamma != 1");
            let xi = self.ctx.x(i);
            let rest = xi
                .unit_inverse()
                .unwrap()
                .try_mul(&self.ctx.monomial(lambda.clone(), c * &factor))
                .unwrap();
            out.push((xi, rest));
        }
        out
    }
}

impl PartialEq for TorusElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.terms == other.terms
    }
}
impl Eq for TorusElement {}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusElement({self})")
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, coeff) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono: Vec<String> = deg
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", coeff, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for TorusElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (deg, coeff) in &self.terms {
            seq.serialize_element(&(deg, coeff))?;
        }
        seq.end()
    }
}

impl Add for &TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: &TorusElement) -> TorusElement {
        self.try_add(rhs).expect("context mismatch in +")
    }
}

impl Sub for &TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: &TorusElement) -> TorusElement {
        self.try_add(&-rhs).expect("context mismatch in -")
    }
}

impl Mul for &TorusElement {
    type Output = TorusElement;
    fn mul(self, rhs: &TorusElement) -> TorusElement {
        self.try_mul(rhs).expect("context mismatch in *")
    }
}

impl Neg for &TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect();
        TorusElement { ctx: self.ctx.clone(), terms }
    }
}
