//! GL_l(Q) as generator words: elementary transvections and diagonal unit
//! insertions, conjugation Int(g), the constructive Whitehead normal form
//! splitting off a single unit, block stabilization, and the subgroup test
//! H_D = { g : (dg) g^{-1} in sl_l(Q) }.

use std::fmt;

use crate::dergroup::DerivationSpec;
use crate::error::{Error, Result};
use crate::matlie::MatrixOverTorus;
use crate::qtorus::{TorusContext, TorusElement};

/// A generator of GL_l(Q).
#[derive(Clone, PartialEq, Debug)]
pub enum GLGenerator {
    /// E_l + a E_ij with i != j; a arbitrary in Q.
    Elementary { i: usize, j: usize, a: TorusElement },
    /// Identity with the unit u at diagonal position i.
    DiagUnit { i: usize, u: TorusElement },
}

impl GLGenerator {
    pub fn elementary(i: usize, j: usize, a: TorusElement) -> Result<GLGenerator> {
        if i == j {
            return Err(Error::IndexClash);
        }
        Ok(GLGenerator::Elementary { i, j, a })
    }

    pub fn diag_unit(i: usize, u: TorusElement) -> Result<GLGenerator> {
        if u.is_unit().is_none() {
            return Err(Error::NotAUnit);
        }
        Ok(GLGenerator::DiagUnit { i, u })
    }

    pub fn inverse(&self) -> GLGenerator {
        match self {
            GLGenerator::Elementary { i, j, a } => GLGenerator::Elementary { i: *i, j: *j, a: -a },
            GLGenerator::DiagUnit { i, u } => GLGenerator::DiagUnit {
                i: *i,
                u: u.unit_inverse().expect("diagonal entries are units"),
            },
        }
    }

    pub fn to_matrix(&self, ctx: &TorusContext, size: usize) -> MatrixOverTorus {
        let mut m = MatrixOverTorus::identity(ctx, size);
        match self {
            GLGenerator::Elementary { i, j, a } => m.set(*i, *j, a.clone()),
            GLGenerator::DiagUnit { i, u } => m.set(*i, *i, u.clone()),
        }
        m
    }

    pub fn is_elementary(&self) -> bool {
        matches!(self, GLGenerator::Elementary { .. })
    }
}

impl fmt::Display for GLGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GLGenerator::Elementary { i, j, a } => write!(f, "E({},{},\"{}\")", i + 1, j + 1, a),
            GLGenerator::DiagUnit { i, u } => write!(f, "D({},\"{}\")", i + 1, u),
        }
    }
}

/// An element of GL_l(Q) as an ordered word in generators; the matrix is the
/// left-to-right product.
#[derive(Clone, PartialEq, Debug)]
pub struct GLWord {
    ctx: TorusContext,
    size: usize,
    gens: Vec<GLGenerator>,
}

impl GLWord {
    pub fn identity(ctx: &TorusContext, size: usize) -> GLWord {
        GLWord { ctx: ctx.clone(), size, gens: vec![] }
    }

    pub fn new(ctx: &TorusContext, size: usize, gens: Vec<GLGenerator>) -> Result<GLWord> {
        for g in &gens {
            let (i, j) = match g {
                GLGenerator::Elementary { i, j, .. } => (*i, *j),
                GLGenerator::DiagUnit { i, .. } => (*i, *i),
            };
            if i >= size || j >= size {
                return Err(Error::SizeMismatch { left: i.max(j) + 1, right: size });
            }
        }
        Ok(GLWord { ctx: ctx.clone(), size, gens })
    }

    pub fn context(&self) -> &TorusContext {
        &self.ctx
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn gens(&self) -> &[GLGenerator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_elementary_only(&self) -> bool {
        self.gens.iter().all(GLGenerator::is_elementary)
    }

    pub fn push(&mut self, g: GLGenerator) {
        self.gens.push(g);
    }

    pub fn concat(&self, other: &GLWord) -> Result<GLWord> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.size != other.size {
            return Err(Error::SizeMismatch { left: self.size, right: other.size });
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(GLWord { ctx: self.ctx.clone(), size: self.size, gens })
    }

    /// The group commutator w1 w2 w1^{-1} w2^{-1}.
    pub fn commutator(&self, other: &GLWord) -> Result<GLWord> {
        self.concat(other)?
            .concat(&self.inverse())?
            .concat(&other.inverse())
    }

    pub fn to_matrix(&self) -> MatrixOverTorus {
        let mut m = MatrixOverTorus::identity(&self.ctx, self.size);
        for g in &self.gens {
            m = &m * &g.to_matrix(&self.ctx, self.size);
        }
        m
    }

    /// Reversed word of generator inverses.
    pub fn inverse(&self) -> GLWord {
        let gens = self.gens.iter().rev().map(GLGenerator::inverse).collect();
        GLWord { ctx: self.ctx.clone(), size: self.size, gens }
    }

    /// Re-reads the same generators in a larger size (block embedding
    /// diag(g, E_m)).
    pub fn embed(&self, extra: usize) -> GLWord {
        GLWord {
            ctx: self.ctx.clone(),
            size: self.size + extra,
            gens: self.gens.clone(),
        }
    }

    /// Conjugation Int(g)(x) = g x g^{-1}.
    pub fn int_apply(&self, x: &MatrixOverTorus) -> Result<MatrixOverTorus> {
        if x.size() != self.size {
            return Err(Error::SizeMismatch { left: self.size, right: x.size() });
        }
        let g = self.to_matrix();
        let ginv = self.inverse().to_matrix();
        g.try_mul(x)?.try_mul(&ginv)
    }
}

impl fmt::Display for GLWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// The commutator word [[E + a E_ij, E + E_jl]] whose matrix is E + a E_il,
/// for pairwise distinct i, j, l. The identity is verified on return.
pub fn elementary_commutator_identity(
    ctx: &TorusContext,
    size: usize,
    i: usize,
    j: usize,
    l: usize,
    a: &TorusElement,
) -> Result<GLWord> {
    if i == j || j == l || i == l {
        return Err(Error::IndexClash);
    }
    let x = GLWord::new(ctx, size, vec![GLGenerator::elementary(i, j, a.clone())?])?;
    let y = GLWord::new(ctx, size, vec![GLGenerator::elementary(j, l, ctx.one())?])?;
    let w = x.commutator(&y)?;
    let mut expect = MatrixOverTorus::identity(ctx, size);
    expect.set(i, l, &expect.entry(i, l) + a);
    if w.to_matrix() != expect {
        return Err(Error::InvariantViolation(
            "commutator word does not reduce to E + a E_il".into(),
        ));
    }
    Ok(w)
}

/// Whitehead factorization of diag(u at i, u^{-1} at j) into six
/// transvections: w(u) w(-1) with w(v) = e_ij(v) e_ji(-v^{-1}) e_ij(v).
pub fn whitehead_pair(ctx: &TorusContext, size: usize, u: &TorusElement, i: usize, j: usize) -> Result<GLWord> {
    if i == j {
        return Err(Error::IndexClash);
    }
    if u.is_unit().is_none() {
        return Err(Error::NotAUnit);
    }
    let w_of = |v: &TorusElement| -> Result<Vec<GLGenerator>> {
        let vinv = v.unit_inverse()?;
        Ok(vec![
            GLGenerator::elementary(i, j, v.clone())?,
            GLGenerator::elementary(j, i, -&vinv)?,
            GLGenerator::elementary(i, j, v.clone())?,
        ])
    };
    let mut gens = w_of(u)?;
    gens.extend(w_of(&-&ctx.one())?);
    let word = GLWord::new(ctx, size, gens)?;
    let mut expect = MatrixOverTorus::identity(ctx, size);
    expect.set(i, i, u.clone());
    expect.set(j, j, u.unit_inverse()?);
    if word.to_matrix() != expect {
        return Err(Error::InvariantViolation("whitehead pair factorization failed".into()));
    }
    Ok(word)
}

/// Result of the unit-splitting normal form: matrix(w) = diag(u, 1, ..., 1)
/// times an elementary-only word.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub unit: TorusElement,
    pub elementary: GLWord,
}

/// Pushes every DiagUnit to the left, merges the diagonal prefix into a
/// single unit at position 1 times Whitehead pairs, and verifies the
/// certificate identity matrix(w) = diag(u, 1, ..., 1) * matrix(e) exactly.
pub fn normalize_word(w: &GLWord) -> Result<NormalForm> {
    let ctx = w.context();
    let size = w.size();
    // accumulated diagonal prefix and the elementary tail
    let mut diag: Vec<TorusElement> = vec![ctx.one(); size];
    let mut tail: Vec<GLGenerator> = vec![];
    for g in w.gens() {
        match g {
            GLGenerator::Elementary { i, j, a } => {
                tail.push(GLGenerator::Elementary { i: *i, j: *j, a: a.clone() });
            }
            GLGenerator::DiagUnit { i, u } => {
                // move diag(u at i) left through the collected tail:
                // E(i', j', a) D = D E(i', j', v_i'^{-1} a v_j') with v the
                // diagonal of D
                for t in tail.iter_mut() {
                    let GLGenerator::Elementary { i: ti, j: tj, a } = t else {
                        unreachable!("tail holds only elementary generators")
                    };
                    let left = if *ti == *i { u.unit_inverse()? } else { ctx.one() };
                    let right = if *tj == *i { u.clone() } else { ctx.one() };
                    *a = left.try_mul(a)?.try_mul(&right)?;
                }
                diag[*i] = diag[*i].try_mul(u)?;
            }
        }
    }
    // merge diag(u_1, ..., u_l) = diag(u_1 ... u_l, 1, ..., 1) * prod of
    // Whitehead pairs at positions (1, j), applied right-to-left
    let mut unit = diag[0].clone();
    let mut pairs: Vec<GLWord> = vec![];
    for (j, u_j) in diag.iter().enumerate().skip(1) {
        if u_j.is_one() {
            continue;
        }
        unit = unit.try_mul(u_j)?;
        pairs.push(whitehead_pair(ctx, size, &u_j.unit_inverse()?, 0, j)?);
    }
    let mut elementary = GLWord::identity(ctx, size);
    for p in pairs.iter().rev() {
        elementary = elementary.concat(p)?;
    }
    elementary = elementary.concat(&GLWord::new(ctx, size, tail)?)?;

    let mut prefix = MatrixOverTorus::identity(ctx, size);
    prefix.set(0, 0, unit.clone());
    if &prefix * &elementary.to_matrix() != w.to_matrix() {
        return Err(Error::InvariantViolation("normal form certificate mismatch".into()));
    }
    Ok(NormalForm { unit, elementary })
}

/// Result of stabilization: diag(matrix(w), E_m) * diag(u, 1, ..., 1) equals
/// the matrix of the elementary certificate word in size l + m.
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub unit: TorusElement,
    pub certificate: GLWord,
}

/// Embeds w in size l + m and splits off the inverse unit so that the
/// remaining word is elementary; the block identity is verified exactly.
pub fn stabilize(w: &GLWord, extra: usize) -> Result<Stabilized> {
    let ctx = w.context();
    let big = w.embed(extra);
    let nf = normalize_word(&big)?;
    let unit = nf.unit.unit_inverse()?;
    let adjusted = big.concat(&GLWord::new(
        ctx,
        big.size(),
        vec![GLGenerator::diag_unit(0, unit.clone())?],
    )?)?;
    let nf2 = normalize_word(&adjusted)?;
    if !nf2.unit.is_one() {
        return Err(Error::NotStablyElementaryCertificate);
    }
    let mut block = MatrixOverTorus::identity(ctx, big.size());
    block.set(0, 0, unit.clone());
    if &big.to_matrix() * &block != nf2.elementary.to_matrix() {
        return Err(Error::InvariantViolation("stabilization certificate mismatch".into()));
    }
    Ok(Stabilized { unit, certificate: nf2.elementary })
}

/// Membership in H_D: (d g) g^{-1} lies in sl_l(Q) for every d in D.
pub fn hd_membership(w: &GLWord, derivations: &[DerivationSpec]) -> Result<bool> {
    let g = w.to_matrix();
    let ginv = w.inverse().to_matrix();
    for d in derivations {
        let dg = d.apply_matrix(&g)?;
        if !dg.try_mul(&ginv)?.sl_membership() {
            return Ok(false);
        }
    }
    Ok(true)
}
