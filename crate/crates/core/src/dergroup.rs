//! Derivations of Q and their entrywise action on matrices: degree
//! derivations, inner derivations ad q, centroidal derivations z * d_theta,
//! brackets between them, and the skewness test for the trace form.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::LatticeVec;
use crate::matlie::MatrixOverTorus;
use crate::qtorus::{TorusContext, TorusElement};
use crate::scalar::Scalar;

/// A centroidal summand z * d_theta with z a single central monomial.
#[derive(Clone, PartialEq, Debug)]
pub struct CentroidalTerm {
    z: TorusElement,
    theta: Vec<BigRational>,
}

impl CentroidalTerm {
    pub fn new(z: TorusElement, theta: Vec<BigRational>) -> Result<CentroidalTerm> {
        let n = z.context().rank();
        if theta.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: theta.len() });
        }
        let Some((xi, _)) = z.is_unit() else {
            return Err(Error::InvariantViolation(
                "centroidal coefficient must be a single monomial".into(),
            ));
        };
        if !z.context().center_membership(&xi)? {
            return Err(Error::NotCentral);
        }
        Ok(CentroidalTerm { z, theta })
    }

    pub fn z(&self) -> &TorusElement {
        &self.z
    }

    pub fn theta(&self) -> &[BigRational] {
        &self.theta
    }

    pub fn xi(&self) -> LatticeVec {
        self.z.is_unit().expect("validated monomial").0
    }
}

fn theta_eval(theta: &[BigRational], v: &LatticeVec) -> BigRational {
    theta
        .iter()
        .zip(&v.0)
        .map(|(t, &x)| t * BigRational::from_integer(x.into()))
        .sum()
}

/// A derivation of Q given as degree part + inner part + centroidal parts.
#[derive(Clone, Debug)]
pub struct DerivationSpec {
    ctx: TorusContext,
    degree: Vec<BigRational>,
    inner: TorusElement,
    centroidal: Vec<CentroidalTerm>,
}

impl DerivationSpec {
    pub fn zero(ctx: &TorusContext) -> DerivationSpec {
        DerivationSpec {
            ctx: ctx.clone(),
            degree: vec![BigRational::zero(); ctx.rank()],
            inner: ctx.zero(),
            centroidal: vec![],
        }
    }

    /// The degree derivation d_theta with theta in Q^n.
    pub fn degree(ctx: &TorusContext, theta: Vec<BigRational>) -> Result<DerivationSpec> {
        if theta.len() != ctx.rank() {
            return Err(Error::DimensionMismatch { expected: ctx.rank(), got: theta.len() });
        }
        let mut d = Self::zero(ctx);
        d.degree = theta;
        Ok(d)
    }

    pub fn degree_ints(ctx: &TorusContext, theta: &[i64]) -> Result<DerivationSpec> {
        Self::degree(
            ctx,
            theta.iter().map(|&t| BigRational::from_integer(t.into())).collect(),
        )
    }

    /// The inner derivation ad q.
    pub fn inner(q: TorusElement) -> DerivationSpec {
        let ctx = q.context().clone();
        let mut d = Self::zero(&ctx);
        d.inner = q;
        d
    }

    /// The centroidal derivation z * d_theta for a single central monomial z.
    pub fn centroidal(z: TorusElement, theta: Vec<BigRational>) -> Result<DerivationSpec> {
        let ctx = z.context().clone();
        let term = CentroidalTerm::new(z, theta)?;
        let mut d = Self::zero(&ctx);
        d.centroidal = vec![term];
        Ok(d)
    }

    pub fn context(&self) -> &TorusContext {
        &self.ctx
    }

    pub fn degree_part(&self) -> &[BigRational] {
        &self.degree
    }

    pub fn inner_part(&self) -> &TorusElement {
        &self.inner
    }

    pub fn centroidal_parts(&self) -> &[CentroidalTerm] {
        &self.centroidal
    }

    /// When the derivation is a single centroidal monomial term (and nothing
    /// else), returns it.
    pub fn as_single_centroidal(&self) -> Option<&CentroidalTerm> {
        if self.degree.iter().all(|t| t.is_zero())
            && self.inner.is_zero()
            && self.centroidal.len() == 1
        {
            self.centroidal.first()
        } else {
            None
        }
    }

    /// Normalizes a pure degree derivation or a single centroidal term to
    /// the common monomial form (z, theta); a degree derivation d_theta is
    /// 1 * x^0 * d_theta.
    pub fn as_centroidal_monomial(&self) -> Option<CentroidalTerm> {
        if !self.inner.is_zero() {
            return None;
        }
        let has_degree = self.degree.iter().any(|t| !t.is_zero());
        match (has_degree, self.centroidal.len()) {
            (true, 0) => Some(CentroidalTerm { z: self.ctx.one(), theta: self.degree.clone() }),
            (false, 1) => self.centroidal.first().cloned(),
            _ => None,
        }
    }

    fn check_ctx(&self, other: &TorusContext) -> Result<()> {
        if &self.ctx != other {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    /// Applies the derivation to a torus element.
    pub fn apply(&self, a: &TorusElement) -> Result<TorusElement> {
        self.check_ctx(a.context())?;
        let field = self.ctx.field();
        let mut out = self.ctx.zero();
        if self.degree.iter().any(|t| !t.is_zero()) {
            for (lam, c) in a.terms() {
                let t = theta_eval(&self.degree, lam);
                if !t.is_zero() {
                    out = &out + &self.ctx.monomial(lam.clone(), c * &field.rational(t));
                }
            }
        }
        if !self.inner.is_zero() {
            out = &out + &self.inner.bracket(a)?;
        }
        for term in &self.centroidal {
            let mut scaled = self.ctx.zero();
            for (lam, c) in a.terms() {
                let t = theta_eval(&term.theta, lam);
                if !t.is_zero() {
                    scaled = &scaled + &self.ctx.monomial(lam.clone(), c * &field.rational(t));
                }
            }
            out = &out + &term.z.try_mul(&scaled)?;
        }
        Ok(out)
    }

    /// Entrywise application to a matrix.
    pub fn apply_matrix(&self, x: &MatrixOverTorus) -> Result<MatrixOverTorus> {
        self.check_ctx(x.context())?;
        let mut out = MatrixOverTorus::zero(x.context(), x.size());
        for (&(i, j), v) in x.entries() {
            out.set(i, j, self.apply(v)?);
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &DerivationSpec) -> Result<DerivationSpec> {
        self.check_ctx(&other.ctx)?;
        let mut out = self.clone();
        for (t, u) in out.degree.iter_mut().zip(&other.degree) {
            *t += u;
        }
        out.inner = &out.inner + &other.inner;
        out.centroidal.extend(other.centroidal.iter().cloned());
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> DerivationSpec {
        let mut out = self.clone();
        // rational degree coefficients only scale by rationals; a general
        // scalar multiple is folded into centroidal form
        if let Some(r) = c.as_rational() {
            for t in out.degree.iter_mut() {
                *t *= r;
            }
        } else if out.degree.iter().any(|t| !t.is_zero()) {
            let theta = std::mem::replace(&mut out.degree, vec![BigRational::zero(); self.ctx.rank()]);
            out.centroidal.push(
                CentroidalTerm::new(self.ctx.scalar(c.clone()), theta).expect("scalar is central"),
            );
            out.inner = out.inner.scale(c);
            for term in out.centroidal.iter_mut() {
                term.z = term.z.scale(c);
            }
            out.centroidal.retain(|t| !t.z.is_zero());
            return out;
        }
        out.inner = out.inner.scale(c);
        for term in out.centroidal.iter_mut() {
            term.z = term.z.scale(c);
        }
        out.centroidal.retain(|t| !t.z.is_zero());
        out
    }

    /// Commutator of derivations, re-expressed in spec form via
    /// [z1 d1, z2 d2] = d1(xi2) z1 z2 d2 - d2(xi1) z1 z2 d1 on centroidal
    /// parts and [d, ad q] = ad(d(q)) on inner parts.
    pub fn bracket(&self, other: &DerivationSpec) -> Result<DerivationSpec> {
        self.check_ctx(&other.ctx)?;
        let field = self.ctx.field();
        let n = self.ctx.rank();
        // centroidal views including the degree part as 1 * x^0 * d_theta
        let view = |d: &DerivationSpec| -> Vec<CentroidalTerm> {
            let mut v = d.centroidal.clone();
            if d.degree.iter().any(|t| !t.is_zero()) {
                v.push(CentroidalTerm { z: d.ctx.one(), theta: d.degree.clone() });
            }
            v
        };
        let left = view(self);
        let right = view(other);
        let mut out = Self::zero(&self.ctx);
        for a in &left {
            for b in &right {
                let xi_a = a.xi();
                let xi_b = b.xi();
                let zz = a.z.try_mul(&b.z)?;
                let t1 = theta_eval(&a.theta, &xi_b);
                if !t1.is_zero() {
                    out.centroidal.push(CentroidalTerm {
                        z: zz.scale(&field.rational(t1)),
                        theta: b.theta.clone(),
                    });
                }
                let t2 = theta_eval(&b.theta, &xi_a);
                if !t2.is_zero() {
                    out.centroidal.push(CentroidalTerm {
                        z: zz.scale(&-&field.rational(t2)),
                        theta: a.theta.clone(),
                    });
                }
            }
        }
        out.centroidal.retain(|t| !t.z.is_zero());
        // inner parts: [d, ad q] = ad(d q), [ad q1, ad q2] = ad([q1, q2])
        let mut inner_result = self.ctx.zero();
        if !other.inner.is_zero() {
            let outer = DerivationSpec { inner: self.ctx.zero(), ..self.clone() };
            inner_result = &inner_result + &outer.apply(&other.inner)?;
        }
        if !self.inner.is_zero() {
            let outer = DerivationSpec { inner: self.ctx.zero(), ..other.clone() };
            inner_result = &inner_result - &outer.apply(&self.inner)?;
        }
        if !self.inner.is_zero() && !other.inner.is_zero() {
            inner_result = &inner_result + &self.inner.bracket(&other.inner)?;
        }
        out.inner = inner_result;
        let _ = n;
        Ok(out)
    }

    /// Canonical form of the non-inner part: degree xi -> sum of z-coefficient
    /// times theta, as a vector over K^n.
    pub fn canonical_centroidal(&self) -> BTreeMap<LatticeVec, Vec<Scalar>> {
        let field = self.ctx.field();
        let n = self.ctx.rank();
        let mut map: BTreeMap<LatticeVec, Vec<Scalar>> = BTreeMap::new();
        let mut add = |xi: LatticeVec, coeff: Scalar, theta: &[BigRational]| {
            let entry = map.entry(xi).or_insert_with(|| vec![field.zero(); n]);
            for (e, t) in entry.iter_mut().zip(theta) {
                *e = &*e + &(&coeff * &field.rational(t.clone()));
            }
        };
        if self.degree.iter().any(|t| !t.is_zero()) {
            add(LatticeVec::zero(n), field.one(), &self.degree);
        }
        for term in &self.centroidal {
            let (xi, c) = term.z.is_unit().expect("validated monomial");
            add(xi, c, &term.theta);
        }
        map.retain(|_, w| w.iter().any(|s| !s.is_zero()));
        map
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero() && self.canonical_centroidal().is_empty()
    }

    /// Exact skewness for the form (a, b) -> eps(ab): inner parts are always
    /// skew, a centroidal part z d_theta with deg z = xi is skew iff
    /// theta(xi) = 0. The provided samples are additionally checked
    /// numerically via eps((d a) a) = 0.
    pub fn skew_check(&self, samples: &[TorusElement]) -> Result<bool> {
        let mut structural = self.degree.iter().all(|_| true);
        for term in &self.centroidal {
            if !theta_eval(&term.theta, &term.xi()).is_zero() {
                structural = false;
            }
        }
        for a in samples {
            let da = self.apply(a)?;
            if !da.try_mul(a)?.epsilon().is_zero() {
                structural = false;
            }
        }
        Ok(structural)
    }
}

impl PartialEq for DerivationSpec {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx
            && self.inner == other.inner
            && self.canonical_centroidal() == other.canonical_centroidal()
    }
}

impl fmt::Display for DerivationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        if self.degree.iter().any(|t| !t.is_zero()) {
            let theta: Vec<String> = self.degree.iter().map(|t| t.to_string()).collect();
            parts.push(format!("d[{}]", theta.join(", ")));
        }
        if !self.inner.is_zero() {
            parts.push(format!("ad({})", self.inner));
        }
        for term in &self.centroidal {
            let theta: Vec<String> = term.theta.iter().map(|t| t.to_string()).collect();
            parts.push(format!("({})*d[{}]", term.z, theta.join(", ")));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtorus::{QEntry, QuantumMatrix};
    use crate::scalar::Field;
    use num_rational::BigRational;
    use num_traits::One;

    fn ctx_q2() -> TorusContext {
        let field = Field::new(1).unwrap();
        let q = QEntry::new(&field, BigRational::from_integer(2.into()), 0).unwrap();
        let qmat = QuantumMatrix::from_upper_triangle(&field, 2, vec![((0, 1), q)]).unwrap();
        TorusContext::new(field, qmat).unwrap()
    }

    fn ctx_zeta4() -> TorusContext {
        let field = Field::new(4).unwrap();
        let q = QEntry::new(&field, BigRational::one(), 1).unwrap();
        let qmat = QuantumMatrix::from_upper_triangle(&field, 2, vec![((0, 1), q)]).unwrap();
        TorusContext::new(field, qmat).unwrap()
    }

    fn lv(v: &[i64]) -> LatticeVec {
        LatticeVec(v.to_vec())
    }

    fn mono(ctx: &TorusContext, v: &[i64]) -> TorusElement {
        ctx.monomial(lv(v), ctx.field().one())
    }

    #[test]
    fn degree_derivation_scales_by_theta() {
        let ctx = ctx_q2();
        let d = DerivationSpec::degree_ints(&ctx, &[1, 0]).unwrap();
        let a = mono(&ctx, &[3, 2]);
        assert_eq!(d.apply(&a).unwrap(), a.scale(&ctx.field().integer(3)));
        assert!(d.apply(&ctx.one()).unwrap().is_zero());
    }

    #[test]
    fn inner_derivation_is_bracket() {
        let ctx = ctx_q2();
        let d = DerivationSpec::inner(mono(&ctx, &[1, 0]));
        let a = mono(&ctx, &[0, 1]);
        let expect = ctx.monomial(lv(&[1, 1]), ctx.field().ratio(1, 2).unwrap());
        assert_eq!(d.apply(&a).unwrap(), expect);
    }

    #[test]
    fn centroidal_derivation_on_unit() {
        let ctx = ctx_zeta4();
        let d = DerivationSpec::centroidal(mono(&ctx, &[4, 0]), vec![
            BigRational::zero(),
            BigRational::one(),
        ])
        .unwrap();
        assert!(d.apply(&ctx.one()).unwrap().is_zero());
        let a = mono(&ctx, &[0, 1]);
        let expect = mono(&ctx, &[4, 0]).try_mul(&a).unwrap();
        assert_eq!(d.apply(&a).unwrap(), expect);
    }

    #[test]
    fn centroidal_requires_central_monomial() {
        let ctx = ctx_zeta4();
        let err = DerivationSpec::centroidal(mono(&ctx, &[1, 0]), vec![
            BigRational::zero(),
            BigRational::zero(),
        ])
        .unwrap_err();
        assert_eq!(err, Error::NotCentral);
        let two_terms = &ctx.one() + &mono(&ctx, &[4, 0]);
        assert!(DerivationSpec::centroidal(two_terms, vec![BigRational::zero(), BigRational::zero()]).is_err());
    }

    #[test]
    fn leibniz_rule_on_matrices() {
        let ctx = ctx_q2();
        let d = DerivationSpec::degree_ints(&ctx, &[1, -2]).unwrap();
        let x = MatrixOverTorus::single(&ctx, 2, 0, 1, mono(&ctx, &[1, 0]));
        let y = MatrixOverTorus::single(&ctx, 2, 1, 0, mono(&ctx, &[0, 1]));
        let lhs = d.apply_matrix(&x.try_mul(&y).unwrap()).unwrap();
        let rhs = &d.apply_matrix(&x).unwrap().try_mul(&y).unwrap()
            + &x.try_mul(&d.apply_matrix(&y).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_derivations_commute() {
        let ctx = ctx_q2();
        let d1 = DerivationSpec::degree_ints(&ctx, &[1, 0]).unwrap();
        let d2 = DerivationSpec::degree_ints(&ctx, &[0, 1]).unwrap();
        assert!(d1.bracket(&d2).unwrap().is_zero());
    }

    #[test]
    fn bracket_with_inner_gives_ad_of_image() {
        let ctx = ctx_q2();
        let d = DerivationSpec::degree_ints(&ctx, &[1, 0]).unwrap();
        let adq = DerivationSpec::inner(mono(&ctx, &[1, 0]));
        let br = d.bracket(&adq).unwrap();
        let expect = DerivationSpec::inner(mono(&ctx, &[1, 0]));
        assert_eq!(br, expect);
        // check action agreement on a probe as well
        let probe = mono(&ctx, &[0, 1]);
        assert_eq!(br.apply(&probe).unwrap(), expect.apply(&probe).unwrap());
    }

    #[test]
    fn centroidal_bracket_formula_commutative_case() {
        // all q = 1: [x^xi d_theta, x^xi' d_theta'] =
        // theta(xi') x^{xi+xi'} d_theta' - theta'(xi) x^{xi+xi'} d_theta
        let field = Field::new(1).unwrap();
        let qmat = QuantumMatrix::from_upper_triangle(&field, 2, vec![]).unwrap();
        let ctx = TorusContext::new(field, qmat).unwrap();
        let one = BigRational::one();
        let zero = BigRational::zero();
        let d1 = DerivationSpec::centroidal(mono(&ctx, &[1, 0]), vec![zero.clone(), one.clone()]).unwrap();
        let d2 = DerivationSpec::centroidal(mono(&ctx, &[0, 1]), vec![one.clone(), zero.clone()]).unwrap();
        let br = d1.bracket(&d2).unwrap();
        // theta1(xi2) = theta1((0,1)) = 1, theta2(xi1) = theta2((1,0)) = 1
        let expect = DerivationSpec::centroidal(mono(&ctx, &[1, 1]), vec![one.clone(), zero.clone()])
            .unwrap()
            .try_add(&DerivationSpec::centroidal(mono(&ctx, &[1, 1]), vec![zero, -one]).unwrap())
            .unwrap();
        assert_eq!(br, expect);
        for probe in [mono(&ctx, &[1, 0]), mono(&ctx, &[0, 1]), mono(&ctx, &[2, -1])] {
            assert_eq!(br.apply(&probe).unwrap(), expect.apply(&probe).unwrap());
        }
    }

    #[test]
    fn skew_checks() {
        let ctx = ctx_zeta4();
        let samples: Vec<TorusElement> = vec![
            &mono(&ctx, &[1, 0]) + &mono(&ctx, &[-1, 0]),
            &mono(&ctx, &[2, 0]) + &mono(&ctx, &[-2, 0]),
            &mono(&ctx, &[-4, 0]) + &mono(&ctx, &[4, 0]),
            mono(&ctx, &[0, 1]),
        ];
        let d = DerivationSpec::degree_ints(&ctx, &[1, 0]).unwrap();
        assert!(d.skew_check(&samples).unwrap());

        let adq = DerivationSpec::inner(mono(&ctx, &[1, 0]));
        assert!(adq.skew_check(&samples).unwrap());

        // z = x^(4,0), theta = (1,0): theta(xi) = 4 != 0, not skew
        let bad = DerivationSpec::centroidal(mono(&ctx, &[4, 0]), vec![
            BigRational::one(),
            BigRational::zero(),
        ])
        .unwrap();
        assert!(!bad.skew_check(&samples).unwrap());
        // and the quadratic form is nonzero on a witness whose support sums
        // to -xi: a = x^(-4,0) + 1
        let a = &mono(&ctx, &[-4, 0]) + &ctx.one();
        let da = bad.apply(&a).unwrap();
        assert!(!da.try_mul(&a).unwrap().epsilon().is_zero());
    }

    #[test]
    fn jacobi_for_derivation_brackets() {
        let ctx = ctx_zeta4();
        let one = BigRational::one();
        let zero = BigRational::zero();
        let d1 = DerivationSpec::degree_ints(&ctx, &[1, 0]).unwrap();
        let d2 = DerivationSpec::centroidal(mono(&ctx, &[4, 0]), vec![zero.clone(), one.clone()]).unwrap();
        let d3 = DerivationSpec::centroidal(mono(&ctx, &[0, 4]), vec![one, zero]).unwrap();
        let j = d1
            .bracket(&d2)
            .unwrap()
            .bracket(&d3)
            .unwrap()
            .try_add(&d2.bracket(&d3).unwrap().bracket(&d1).unwrap())
            .unwrap()
            .try_add(&d3.bracket(&d1).unwrap().bracket(&d2).unwrap())
            .unwrap();
        assert!(j.is_zero(), "jacobi defect: {j}");
    }

    #[test]
    fn semidirect_identity_on_random_pairs() {
        // [d, ad q] = ad(d q) as operators
        let ctx = ctx_q2();
        let d = DerivationSpec::degree_ints(&ctx, &[2, 1]).unwrap();
        let q = &mono(&ctx, &[1, 0]) + &mono(&ctx, &[0, 2]);
        let lhs = d.bracket(&DerivationSpec::inner(q.clone())).unwrap();
        let rhs = DerivationSpec::inner(d.apply(&q).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scder_grading() {
        // homogeneous skew-centroidal d of degree xi maps degree lambda to
        // degree xi + lambda
        let ctx = ctx_zeta4();
        let d = DerivationSpec::centroidal(mono(&ctx, &[4, 0]), vec![
            BigRational::zero(),
            BigRational::one(),
        ])
        .unwrap();
        let a = mono(&ctx, &[1, 1]);
        let da = d.apply(&a).unwrap();
        assert_eq!(da.terms().len(), 1);
        assert_eq!(da.terms().keys().next().unwrap(), &lv(&[5, 1]));
    }
}
