//! Seeded random generation of scalars, torus elements, matrices, and
//! generator words for the randomized exact-identity checks. All sampling is
//! deterministic given the seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::glwords::{GLGenerator, GLWord};
use crate::lattice::LatticeVec;
use crate::matlie::MatrixOverTorus;
use crate::qtorus::{TorusContext, TorusElement};
use crate::scalar::{Field, Scalar};

pub struct Sampler {
    rng: ChaCha8Rng,
    pub degree_bound: i64,
}

impl Sampler {
    pub fn new(seed: u64, degree_bound: i64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), degree_bound }
    }

    pub fn gen_range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn gen_usize(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub fn lattice_vec(&mut self, n: usize) -> LatticeVec {
        let b = self.degree_bound;
        LatticeVec((0..n).map(|_| self.rng.gen_range(-b..=b)).collect())
    }

    /// Small rational, possibly times a power of the root of unity.
    pub fn scalar(&mut self, field: &Field) -> Scalar {
        let num = self.rng.gen_range(-4i64..=4);
        let den = self.rng.gen_range(1i64..=4);
        let base = field.ratio(num, den).expect("den > 0");
        if field.degree() > 1 && self.rng.gen_bool(0.5) {
            let e = self.rng.gen_range(0..field.m() as i64);
            &base * &field.zeta_pow(e)
        } else {
            base
        }
    }

    pub fn nonzero_scalar(&mut self, field: &Field) -> Scalar {
        loop {
            let s = self.scalar(field);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn torus_element(&mut self, ctx: &TorusContext, max_terms: usize) -> TorusElement {
        let k = self.rng.gen_range(0..=max_terms);
        let mut out = ctx.zero();
        for _ in 0..k {
            let deg = self.lattice_vec(ctx.rank());
            let c = self.scalar(ctx.field());
            out = &out + &ctx.monomial(deg, c);
        }
        out
    }

    pub fn nonzero_torus_element(&mut self, ctx: &TorusContext, max_terms: usize) -> TorusElement {
        loop {
            let e = self.torus_element(ctx, max_terms.max(1));
            if !e.is_zero() {
                return e;
            }
        }
    }

    pub fn monomial(&mut self, ctx: &TorusContext) -> TorusElement {
        ctx.monomial(self.lattice_vec(ctx.rank()), self.nonzero_scalar(ctx.field()))
    }

    /// A random unit c x^lambda.
    pub fn unit(&mut self, ctx: &TorusContext) -> TorusElement {
        self.monomial(ctx)
    }

    /// Random matrix in gl_l(Q) with entries of at most `max_terms` terms.
    pub fn gl_matrix(&mut self, ctx: &TorusContext, ell: usize, max_terms: usize) -> MatrixOverTorus {
        let mut m = MatrixOverTorus::zero(ctx, ell);
        let fills = self.rng.gen_range(1..=ell * 2);
        for _ in 0..fills {
            let i = self.gen_usize(ell);
            let j = self.gen_usize(ell);
            let e = self.torus_element(ctx, max_terms);
            m.set(i, j, &m.entry(i, j) + &e);
        }
        m
    }

    /// Random element of sl_l(Q): a random gl matrix with its central part
    /// projected away.
    pub fn sl_matrix(&mut self, ctx: &TorusContext, ell: usize, max_terms: usize) -> MatrixOverTorus {
        let m = self.gl_matrix(ctx, ell, max_terms);
        let (_, s) = m.split_central_sl();
        s
    }

    /// Random homogeneous element of sl_l(Q): a single (root, degree) atom.
    pub fn homogeneous_sl_atom(&mut self, ctx: &TorusContext, ell: usize) -> MatrixOverTorus {
        let lam = self.lattice_vec(ctx.rank());
        let c = self.nonzero_scalar(ctx.field());
        let i = self.gen_usize(ell);
        let mut j = self.gen_usize(ell);
        if i == j {
            // diagonal atom: x^lam E_ii works when lam is not central,
            // otherwise use x^lam (E_ii - E_jj)
            if !ctx.center_membership(&lam).expect("rank matches") {
                return MatrixOverTorus::single(ctx, ell, i, i, ctx.monomial(lam, c));
            }
            j = (i + 1) % ell;
            let mut m = MatrixOverTorus::zero(ctx, ell);
            m.set(i, i, ctx.monomial(lam.clone(), c.clone()));
            m.set(j, j, ctx.monomial(lam, -&c));
            return m;
        }
        MatrixOverTorus::single(ctx, ell, i, j, ctx.monomial(lam, c))
    }

    /// Random word in GL_l(Q) generators.
    pub fn gl_word(&mut self, ctx: &TorusContext, ell: usize, len: usize, with_diag_units: bool) -> GLWord {
        let mut gens = vec![];
        for _ in 0..len {
            if with_diag_units && self.rng.gen_bool(0.4) {
                let i = self.gen_usize(ell);
                gens.push(GLGenerator::diag_unit(i, self.unit(ctx)).expect("monomials are units"));
            } else {
                let i = self.gen_usize(ell);
                let mut j = self.gen_usize(ell);
                if j == i {
                    j = (i + 1) % ell;
                }
                let a = self.torus_element(ctx, 2);
                gens.push(GLGenerator::elementary(i, j, a).expect("i != j"));
            }
        }
        GLWord::new(ctx, ell, gens).expect("indices in range")
    }
}
