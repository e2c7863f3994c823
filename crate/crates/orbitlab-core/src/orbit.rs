//! Coadjoint orbit machinery over the solvable factor.
//!
//! The central object is [`OrbitEngine`], which bundles a real form, its
//! restricted root data and cascade, and precomputes everything needed to
//! act on functionals exactly:
//!
//! * an ordered frame of `a + n` grouped as `[a | n_c | n_half | n_3]`
//!   together with its bracket tensor, so coadjoint computations on
//!   `(a+n)*` never leave frame coordinates;
//! * a root-adapted basis of the full algebra, diagonalizing the split
//!   torus action, so torus letters act by rational monomials;
//! * per-generator rotation data (Lagrange projectors of `ad(W)` plus
//!   integer frequency multipliers), so compact one-parameter subgroups
//!   can be sampled at exactly rational points via Pythagorean pairs.
//!
//! Group elements are [`GroupWord`]s, lists of [`Letter`]s whose adjoint
//! matrices are exact rational matrices. Words containing a float letter
//! taint the result and are rejected by the exact evaluation paths.
//!
//! On top of the letters sit the verification drivers: the KKS openness
//! test, the cascade-elimination signature with its openness cross-check,
//! the strong-ellipticity and holomorphy predicates (each computed by two
//! independent routes that must agree), and the sampling drivers for the
//! main theorem, the sign lemma, the projection lemma, the cone suite,
//! and the convex-hull lemma.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cascade::{Cascade, RootClass};
use crate::complex_roots::{ComplexRootSystem, Weight};
use crate::exact::hull::{in_convex_hull, HullError};
use crate::exact::mat::QMat;
use crate::exact::{rat, rational_gcd, rational_sqrt, rint, Rational};
use crate::lie::{inner, Covector, LieAlgebra, Subspace};
use crate::realforms::{RealForm, RestrictedRootSystem};

/// Errors from orbit-side computations.
#[derive(Debug, Error)]
pub enum OrbitError {
    #[error("vector is not ad-nilpotent, exponential series does not terminate")]
    NotNilpotent,
    #[error("torus letter needs {expected} positive rational parameters, got {got}")]
    BadTorusParameters { expected: usize, got: usize },
    #[error("rotation generator {0} has no exact rational rotation data")]
    RotationUnavailable(usize),
    #[error("word contains a float letter; exact evaluation refuses tainted words")]
    TaintedWord,
    #[error("functional is not strongly elliptic: {0}")]
    NotStronglyElliptic(String),
    #[error("pairing of f with noncompact root {0} vanishes; holomorphy undefined")]
    DegeneratePairing(String),
    #[error("holomorphy routes disagree: bracket closure {closure}, Weyl stability {stability}")]
    RouteDisagreement { closure: bool, stability: bool },
    #[error("complex root data required (Hermitian-type operation): {0}")]
    MissingComplexData(String),
    #[error("sampled data contradicts the theorem under test: {0}")]
    TheoremViolation(String),
    #[error("cone inequality failed on an exact sample: {0}")]
    ConeViolation(String),
    #[error("internal consistency check failed: {0}")]
    Verification(String),
    #[error("convex hull test failed: {0}")]
    Hull(#[from] HullError),
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn rat_pow(base: &Rational, e: i64) -> Rational {
    let mut acc = Rational::one();
    let b = if e >= 0 {
        base.clone()
    } else {
        base.recip()
    };
    for _ in 0..e.unsigned_abs() {
        acc *= &b;
    }
    acc
}

/// Chebyshev pair (T_m(c), U_{m-1}(c)) used to rotate the frequency-m
/// eigenplane by m times the base angle.
fn chebyshev_pair(m: i64, c: &Rational) -> (Rational, Rational) {
    assert!(m >= 1);
    let mut t_prev = Rational::one(); // T_0
    let mut t_cur = c.clone(); // T_1
    let mut u_prev = Rational::zero(); // U_{-1}
    let mut u_cur = Rational::one(); // U_0
    let two_c = rat(2, 1) * c;
    for _ in 1..m {
        let t_next = &two_c * &t_cur - &t_prev;
        t_prev = t_cur;
        t_cur = t_next;
        let u_next = &two_c * &u_cur - &u_prev;
        u_prev = u_cur;
        u_cur = u_next;
    }
    (t_cur, u_cur)
}

// ---------------------------------------------------------------------------
// The a+n frame.
// ---------------------------------------------------------------------------

/// Ordered basis of `a + n` with the cascade grading made explicit, plus the
/// bracket tensor and the split-torus weights of every basis vector.
///
/// Ordering: the split torus basis first, then the difference-half spaces
/// (`n_c`), then the single-half spaces, then the `n_3` blocks in the order
/// the cascade lists them (diagonal blocks carry the normalized cascade
/// generators when one dimensional). When the grading is unavailable the
/// frame falls back to `[a | positive root spaces]`.
pub struct AnFrame {
    space: Subspace,
    a_len: usize,
    nc_len: usize,
    half_len: usize,
    n3_len: usize,
    /// Frame index of X_j for each cascade slot, when the diagonal blocks
    /// are one dimensional.
    diag_slots: Vec<Option<usize>>,
    /// Off-diagonal n3 blocks (i, j, frame slots), i < j.
    offdiag_blocks: Vec<(usize, usize, Vec<usize>)>,
    /// Sparse frame coordinates of [b_i, b_j].
    bracket: Vec<Vec<Vec<(usize, Rational)>>>,
    /// Integer split-torus weight of each frame vector (zero on the a part).
    weights: Vec<Vec<i64>>,
}

impl AnFrame {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn a_len(&self) -> usize {
        self.a_len
    }

    pub fn nc_len(&self) -> usize {
        self.nc_len
    }

    pub fn half_len(&self) -> usize {
        self.half_len
    }

    pub fn n3_len(&self) -> usize {
        self.n3_len
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        self.space.basis()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    fn n3_offset(&self) -> usize {
        self.a_len + self.nc_len + self.half_len
    }

    /// Values of a full-algebra functional on the frame basis.
    pub fn project(&self, f: &Covector) -> Vec<Rational> {
        self.space.basis().iter().map(|b| f.eval(b)).collect()
    }

    /// Zero out everything except the n3 slots.
    pub fn restrict_to_n3(&self, lambda: &[Rational]) -> Vec<Rational> {
        let start = self.n3_offset();
        lambda
            .iter()
            .enumerate()
            .map(|(i, v)| if i >= start { v.clone() } else { Rational::zero() })
            .collect()
    }

    /// ad of a frame vector (given in frame coordinates) as a frame matrix.
    fn ad_frame(&self, z: &[Rational]) -> QMat {
        let n = self.dim();
        let mut m = QMat::zeros(n, n);
        for (i, zi) in z.iter().enumerate() {
            if zi.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, c) in &self.bracket[i][j] {
                    m[(*k, j)] = &m[(*k, j)] + &(zi * c);
                }
            }
        }
        m
    }

    /// Coadjoint action of exp(z) on a frame functional, z given in ambient
    /// coordinates and required to lie in the frame span with ad-nilpotent
    /// frame action: lambda -> lambda o exp(-ad z).
    pub fn coadjoint_nilpotent(
        &self,
        z_ambient: &[Rational],
        lambda: &[Rational],
    ) -> Result<Vec<Rational>, OrbitError> {
        let zf = self
            .space
            .coords_of(z_ambient)
            .ok_or_else(|| OrbitError::Verification("letter vector outside a+n".into()))?;
        let m = self.ad_frame(&zf).scale(&rat(-1, 1));
        let e = nilpotent_exp_matrix(&m)?;
        Ok(e.transpose().mul_vec(lambda))
    }

    /// Coadjoint action of the split torus point with coordinates t on a
    /// frame functional: each slot scales by the inverse monomial of its
    /// weight.
    pub fn coadjoint_torus(
        &self,
        t: &[Rational],
        lambda: &[Rational],
    ) -> Result<Vec<Rational>, OrbitError> {
        if t.len() != self.a_len || t.iter().any(|x| !x.is_positive()) {
            return Err(OrbitError::BadTorusParameters {
                expected: self.a_len,
                got: t.len(),
            });
        }
        let mut out = Vec::with_capacity(self.dim());
        for (i, v) in lambda.iter().enumerate() {
            let mut c = Rational::one();
            for (m, tm) in t.iter().enumerate() {
                c *= rat_pow(tm, -self.weights[i][m]);
            }
            out.push(v * c);
        }
        Ok(out)
    }

    /// The Kirillov-Kostant-Souriau matrix B[i][j] = lambda([b_i, b_j]).
    pub fn kks_matrix(&self, lambda: &[Rational]) -> QMat {
        let n = self.dim();
        let mut b = QMat::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let mut v = Rational::zero();
                for (k, c) in &self.bracket[i][j] {
                    v += &lambda[*k] * c;
                }
                b[(i, j)] = v.clone();
                b[(j, i)] = -v;
            }
        }
        b
    }

    /// Openness of the AN-orbit through lambda: full KKS rank. Skew matrices
    /// have even rank; an odd rank is reported as an internal error.
    pub fn is_open_orbit_point(&self, lambda: &[Rational]) -> Result<bool, OrbitError> {
        let rank = self.kks_matrix(lambda).rank();
        if rank % 2 != 0 {
            return Err(OrbitError::Verification(format!(
                "skew KKS matrix reported odd rank {rank}"
            )));
        }
        Ok(rank == self.dim())
    }
}

fn nilpotent_exp_matrix(m: &QMat) -> Result<QMat, OrbitError> {
    let n = m.nrows();
    let mut acc = QMat::identity(n);
    let mut term = QMat::identity(n);
    for k in 1..=(n + 1) {
        term = term.mul(m).scale(&rat(1, k as i64));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&term);
    }
    Err(OrbitError::NotNilpotent)
}

fn build_frame(
    form: &RealForm,
    sys: &RestrictedRootSystem,
    cascade: &Cascade,
) -> Result<AnFrame, OrbitError> {
    let alg = &form.algebra;
    let a_basis: Vec<Vec<Rational>> = sys.a.basis().to_vec();
    let a_len = a_basis.len();
    let mut basis = a_basis;
    let mut nc_len = 0;
    let mut half_len = 0;
    let mut n3_len = 0;
    let mut diag_slots: Vec<Option<usize>> = vec![None; cascade.cascade_rank()];
    let mut offdiag_blocks: Vec<(usize, usize, Vec<usize>)> = Vec::new();

    if let Some(graded) = &cascade.graded {
        for v in graded.nc.basis() {
            basis.push(v.clone());
            nc_len += 1;
        }
        for v in graded.half.basis() {
            basis.push(v.clone());
            half_len += 1;
        }
        for block in &graded.n3_blocks {
            let mut slots = Vec::new();
            for v in block.space.basis() {
                slots.push(basis.len());
                basis.push(v.clone());
                n3_len += 1;
            }
            if block.i == block.j {
                if block.space.dim() == 1 {
                    if block.space.basis()[0] != cascade.x[block.i] {
                        return Err(OrbitError::Verification(
                            "diagonal n3 block basis is not the cascade generator".into(),
                        ));
                    }
                    diag_slots[block.i] = Some(slots[0]);
                }
            } else {
                offdiag_blocks.push((block.i, block.j, slots));
            }
        }
    } else {
        for root in sys.positive_roots() {
            for v in root.space.basis() {
                basis.push(v.clone());
            }
        }
    }

    let space = Subspace::from_basis(alg.dim(), basis)
        .map_err(|e| OrbitError::Verification(format!("frame basis dependent: {e}")))?;
    let dim = space.dim();

    // Split-torus weight of every frame vector, read off directly and
    // verified: [A_m, v] must be an exact integer multiple of v.
    let mut weights: Vec<Vec<i64>> = Vec::with_capacity(dim);
    for (idx, v) in space.basis().iter().enumerate() {
        let mut w = Vec::with_capacity(a_len);
        for am in sys.a.basis() {
            if idx < a_len {
                w.push(0);
                continue;
            }
            let bv = alg.bracket(am, v);
            let pos = v.iter().position(|c| !c.is_zero()).expect("nonzero basis vector");
            let mu = &bv[pos] / &v[pos];
            let scaled: Vec<Rational> = v.iter().map(|c| c * &mu).collect();
            if scaled != bv {
                return Err(OrbitError::Verification(
                    "frame vector is not a split-torus weight vector".into(),
                ));
            }
            if !mu.is_integer() {
                return Err(OrbitError::Verification(
                    "split-torus weight of a frame vector is not an integer".into(),
                ));
            }
            let as_int: i64 = mu
                .to_integer()
                .try_into()
                .map_err(|_| OrbitError::Verification("torus weight overflows i64".into()))?;
            w.push(as_int);
        }
        weights.push(w);
    }

    // Bracket tensor in frame coordinates; a + n is a subalgebra so every
    // bracket must resolve.
    let mut bracket: Vec<Vec<Vec<(usize, Rational)>>> = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            let w = alg.bracket(&space.basis()[i], &space.basis()[j]);
            let coords = space
                .coords_of(&w)
                .ok_or_else(|| OrbitError::Verification("a+n is not bracket closed".into()))?;
            bracket[i][j] = coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
        }
    }

    Ok(AnFrame {
        space,
        a_len,
        nc_len,
        half_len,
        n3_len,
        diag_slots,
        offdiag_blocks,
        bracket,
        weights,
    })
}

// ---------------------------------------------------------------------------
// Group letters.
// ---------------------------------------------------------------------------

/// One generator letter of a group word. The adjoint matrix of every exact
/// letter is an exact rational matrix.
#[derive(Clone, Debug)]
pub enum Letter {
    /// exp(z) for an ad-nilpotent z (in n or theta(n)), ambient coordinates.
    Nilpotent { z: Vec<Rational> },
    /// Split torus point, one positive rational per a-coordinate.
    Torus { t: Vec<Rational> },
    /// Rotation exp(phi W) along the compact generator with the given index,
    /// at the rational point cos(mu0 phi) = (1-u^2)/(1+u^2),
    /// sin(mu0 phi) = 2u/(1+u^2).
    Rotation { generator: usize, u: Rational },
    /// Float-time flow of an arbitrary element; taints the word.
    FloatExp { x: Vec<Rational>, time: f64 },
}

/// A word in the generator letters, applied left to right as a product of
/// group elements.
#[derive(Clone, Debug, Default)]
pub struct GroupWord {
    pub letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord { letters: Vec::new() }
    }

    pub fn is_exact(&self) -> bool {
        !self
            .letters
            .iter()
            .any(|l| matches!(l, Letter::FloatExp { .. }))
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::Nilpotent { .. } => "N".to_string(),
                Letter::Torus { .. } => "A".to_string(),
                Letter::Rotation { generator, .. } => format!("K{generator}"),
                Letter::FloatExp { .. } => "F".to_string(),
            })
            .collect();
        parts.join(".")
    }
}

struct RotationPart {
    mult: i64,
    proj: QMat,
    jmat: QMat,
}

/// Exact rotation data for one compact generator W: Lagrange projectors of
/// ad(W) onto its frequency eigenplanes plus integer frequency multipliers
/// over the base frequency.
pub struct RotationGenerator {
    vector: Vec<Rational>,
    proj0: QMat,
    parts: Vec<RotationPart>,
}

impl RotationGenerator {
    fn build(alg: &LieAlgebra, w: &[Rational]) -> Option<RotationGenerator> {
        let n = alg.dim();
        let m = alg.ad(w);
        let m2 = m.mul(&m);
        let eig = crate::exact::eigen::eigen_split(&m2).ok()?;
        let total: usize = eig.iter().map(|(_, vs)| vs.len()).sum();
        if total != n {
            return None;
        }
        let mut freqs: Vec<Rational> = Vec::new();
        for (nu, _) in &eig {
            if nu.is_positive() {
                return None;
            }
            if !nu.is_zero() {
                freqs.push(rational_sqrt(&(-nu.clone()))?);
            }
        }
        if freqs.is_empty() {
            // ad(W) = 0: the letter is the identity, still usable.
        }
        let mut mu0 = Rational::zero();
        for f in &freqs {
            mu0 = rational_gcd(&mu0, f);
        }
        // Change of basis to the eigenbasis of ad(W)^2.
        let mut cols: Vec<Vec<Rational>> = Vec::new();
        let mut spans: Vec<(Rational, usize, usize)> = Vec::new(); // (nu, start, len)
        for (nu, vs) in &eig {
            let start = cols.len();
            for v in vs {
                cols.push(v.clone());
            }
            spans.push((nu.clone(), start, vs.len()));
        }
        let p = QMat::from_cols(cols, n);
        let pinv = p.inverse()?;
        let mut proj0 = QMat::zeros(n, n);
        let mut parts = Vec::new();
        for (nu, start, len) in spans {
            let mut e = QMat::zeros(n, n);
            for k in start..start + len {
                e[(k, k)] = Rational::one();
            }
            let proj = p.mul(&e).mul(&pinv);
            if nu.is_zero() {
                proj0 = proj0.add(&proj);
            } else {
                let mu = rational_sqrt(&(-nu))?;
                let mult_r = &mu / &mu0;
                if !mult_r.is_integer() {
                    return None;
                }
                let mult: i64 = mult_r.to_integer().try_into().ok()?;
                let jmat = m.mul(&proj).scale(&mu.recip());
                parts.push(RotationPart { mult, proj, jmat });
            }
        }
        Some(RotationGenerator {
            vector: w.to_vec(),
            proj0,
            parts,
        })
    }

    /// Rotation matrix at the Pythagorean point (c, s), c^2 + s^2 = 1.
    fn matrix(&self, c: &Rational, s: &Rational) -> QMat {
        let mut out = self.proj0.clone();
        for part in &self.parts {
            let (t, u) = chebyshev_pair(part.mult, c);
            out = out.add(&part.proj.scale(&t));
            out = out.add(&part.jmat.scale(&(u * s)));
        }
        out
    }

    pub fn generator_vector(&self) -> &[Rational] {
        &self.vector
    }
}

fn pythagorean_pair(u: &Rational) -> (Rational, Rational) {
    let u2 = u * u;
    let den = Rational::one() + &u2;
    let c = (Rational::one() - &u2) / den.clone();
    let s = (rat(2, 1) * u) / den;
    (c, s)
}

// ---------------------------------------------------------------------------
// The engine.
// ---------------------------------------------------------------------------

/// Precomputed exact-action data for one real form.
pub struct OrbitEngine<'a> {
    pub form: &'a RealForm,
    pub sys: &'a RestrictedRootSystem,
    pub cascade: &'a Cascade,
    pub croots: Option<&'a ComplexRootSystem>,
    pub frame: AnFrame,
    adapted_p: QMat,
    adapted_pinv: QMat,
    /// Integer split-torus weight per adapted column.
    adapted_weights: Vec<Vec<i64>>,
    /// Columns of the adapted basis lying in n3.
    adapted_n3_mask: Vec<bool>,
    rotations: Vec<Option<RotationGenerator>>,
    n_basis: Vec<Vec<Rational>>,
    theta_n_basis: Vec<Vec<Rational>>,
    theta_nc_basis: Vec<Vec<Rational>>,
}

/// Signature outcome of the cascade elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignatureOutcome {
    Open(Vec<i8>),
    NotOpen(NotOpenReason),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotOpenReason {
    /// The pivot at the given cascade slot vanished after elimination.
    ZeroPivot(usize),
    /// The algebra fails the open-orbit criterion, so no orbit is open.
    NoOpenOrbitCriterion,
}

impl SignatureOutcome {
    pub fn is_open(&self) -> bool {
        matches!(self, SignatureOutcome::Open(_))
    }

    /// Deterministic histogram key.
    pub fn key(&self) -> String {
        match self {
            SignatureOutcome::Open(signs) => {
                let body: String = signs.iter().map(|s| if *s > 0 { '+' } else { '-' }).collect();
                format!("open({body})")
            }
            SignatureOutcome::NotOpen(NotOpenReason::ZeroPivot(k)) => {
                format!("not-open(pivot {})", k + 1)
            }
            SignatureOutcome::NotOpen(NotOpenReason::NoOpenOrbitCriterion) => {
                "not-open(no-criterion)".to_string()
            }
        }
    }
}

impl<'a> OrbitEngine<'a> {
    pub fn new(
        form: &'a RealForm,
        sys: &'a RestrictedRootSystem,
        cascade: &'a Cascade,
        croots: Option<&'a ComplexRootSystem>,
    ) -> Result<Self, OrbitError> {
        let alg = &form.algebra;
        let frame = build_frame(form, sys, cascade)?;

        // Root-adapted basis of the full algebra: centralizer of a first,
        // then every root space in stored order.
        let mut cols: Vec<Vec<Rational>> = sys.g0.basis().to_vec();
        let mut adapted_weights: Vec<Vec<i64>> = vec![vec![0; sys.a.dim()]; sys.g0.dim()];
        let mut adapted_n3_mask: Vec<bool> = vec![false; sys.g0.dim()];
        let positives: Vec<&crate::realforms::RestrictedRoot> =
            sys.roots.iter().filter(|r| r.is_positive()).collect();
        for root in &sys.roots {
            let w: Vec<i64> = root
                .coords
                .iter()
                .map(|c| {
                    c.to_integer()
                        .try_into()
                        .expect("restricted root coordinates are small integers")
                })
                .collect();
            let in_n3 = if root.is_positive() {
                positives
                    .iter()
                    .position(|r| r.coords == root.coords)
                    .map(|idx| {
                        matches!(
                            cascade.classes[idx],
                            Some(RootClass::Upsilon(_)) | Some(RootClass::SumHalf(_, _))
                        )
                    })
                    .unwrap_or(false)
            } else {
                false
            };
            for v in root.space.basis() {
                cols.push(v.clone());
                adapted_weights.push(w.clone());
                adapted_n3_mask.push(in_n3);
            }
        }
        let adapted_p = QMat::from_cols(cols, alg.dim());
        let adapted_pinv = adapted_p
            .inverse()
            .ok_or_else(|| OrbitError::Verification("root-adapted basis is singular".into()))?;

        let rotations: Vec<Option<RotationGenerator>> = form
            .k
            .basis()
            .iter()
            .map(|w| RotationGenerator::build(alg, w))
            .collect();

        let n_basis: Vec<Vec<Rational>> = frame.space.basis()[frame.a_len..].to_vec();
        let theta_n_basis: Vec<Vec<Rational>> =
            n_basis.iter().map(|v| alg.theta_apply(v)).collect();
        let theta_nc_basis: Vec<Vec<Rational>> = match &cascade.graded {
            Some(g) => g.nc.basis().iter().map(|v| alg.theta_apply(v)).collect(),
            None => Vec::new(),
        };

        Ok(OrbitEngine {
            form,
            sys,
            cascade,
            croots,
            frame,
            adapted_p,
            adapted_pinv,
            adapted_weights,
            adapted_n3_mask,
            rotations,
            n_basis,
            theta_n_basis,
            theta_nc_basis,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.form.algebra
    }

    pub fn split_rank(&self) -> usize {
        self.sys.a.dim()
    }

    /// Indices of compact-basis generators with exact rotation data.
    pub fn available_rotations(&self) -> Vec<usize> {
        self.rotations
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|_| i))
            .collect()
    }

    // -- letter matrices ----------------------------------------------------

    fn torus_matrix(&self, t: &[Rational], invert: bool) -> Result<QMat, OrbitError> {
        let rank = self.split_rank();
        if t.len() != rank || t.iter().any(|x| !x.is_positive()) {
            return Err(OrbitError::BadTorusParameters {
                expected: rank,
                got: t.len(),
            });
        }
        let n = self.algebra().dim();
        let mut d = QMat::zeros(n, n);
        for (j, w) in self.adapted_weights.iter().enumerate() {
            let mut c = Rational::one();
            for (m, tm) in t.iter().enumerate() {
                let e = if invert { -w[m] } else { w[m] };
                c *= rat_pow(tm, e);
            }
            d[(j, j)] = c;
        }
        Ok(self.adapted_p.mul(&d).mul(&self.adapted_pinv))
    }

    /// Adjoint matrix of one letter (or of its inverse).
    pub fn letter_matrix(&self, letter: &Letter, invert: bool) -> Result<QMat, OrbitError> {
        match letter {
            Letter::Nilpotent { z } => {
                let zz: Vec<Rational> = if invert {
                    z.iter().map(|c| -c.clone()).collect()
                } else {
                    z.clone()
                };
                nilpotent_exp_matrix(&self.algebra().ad(&zz))
            }
            Letter::Torus { t } => self.torus_matrix(t, invert),
            Letter::Rotation { generator, u } => {
                let rot = self
                    .rotations
                    .get(*generator)
                    .and_then(|r| r.as_ref())
                    .ok_or(OrbitError::RotationUnavailable(*generator))?;
                let (c, s) = pythagorean_pair(u);
                let s = if invert { -s } else { s };
                Ok(rot.matrix(&c, &s))
            }
            Letter::FloatExp { .. } => Err(OrbitError::TaintedWord),
        }
    }

    /// Ad(g) x for an exact word g.
    pub fn apply_word_to_vector(
        &self,
        word: &GroupWord,
        x: &[Rational],
    ) -> Result<Vec<Rational>, OrbitError> {
        let mut v = x.to_vec();
        for letter in word.letters.iter().rev() {
            v = self.letter_matrix(letter, false)?.mul_vec(&v);
        }
        Ok(v)
    }

    /// Coadjoint action g . f = f o Ad(g)^{-1} for an exact word g.
    pub fn apply_word_to_covector(
        &self,
        word: &GroupWord,
        f: &Covector,
    ) -> Result<Covector, OrbitError> {
        let mut coords = f.coords.clone();
        for letter in word.letters.iter().rev() {
            coords = self.letter_matrix(letter, true)?.transpose().mul_vec(&coords);
        }
        Ok(Covector::new(coords))
    }

    /// Float coadjoint action; accepts tainted words. Exact letters are
    /// evaluated exactly and then rounded.
    pub fn apply_word_to_covector_f64(
        &self,
        word: &GroupWord,
        f: &[f64],
    ) -> Result<Vec<f64>, OrbitError> {
        let n = self.algebra().dim();
        let mut coords = f.to_vec();
        for letter in word.letters.iter().rev() {
            let m: Vec<Vec<f64>> = match letter {
                Letter::FloatExp { x, time } => {
                    let ad = self.algebra().ad(x);
                    let mut a = vec![vec![0.0; n]; n];
                    for i in 0..n {
                        for j in 0..n {
                            a[i][j] = -rational_to_f64(&ad[(i, j)]) * *time;
                        }
                    }
                    expm_f64(&a)
                }
                other => {
                    let exact = self.letter_matrix(other, true)?;
                    let mut a = vec![vec![0.0; n]; n];
                    for i in 0..n {
                        for j in 0..n {
                            a[i][j] = rational_to_f64(&exact[(i, j)]);
                        }
                    }
                    a
                }
            };
            // coords <- m^T coords
            let mut out = vec![0.0; n];
            for i in 0..n {
                for j in 0..n {
                    out[j] += m[i][j] * coords[i];
                }
            }
            coords = out;
        }
        Ok(coords)
    }

    // -- projections ---------------------------------------------------------

    /// p : g* -> (a+n)*, as values on the frame basis.
    pub fn project_covector(&self, f: &Covector) -> Vec<Rational> {
        self.frame.project(f)
    }

    /// p1 : g* -> n3*, embedded as a frame functional supported on n3 slots.
    pub fn project_covector_n3(&self, f: &Covector) -> Vec<Rational> {
        self.frame.restrict_to_n3(&self.frame.project(f))
    }

    /// The theta-twisted inner product dual: solve <x, .> = f.
    pub fn inner_dual_vector(&self, f: &Covector) -> Result<Vec<Rational>, OrbitError> {
        let alg = self.algebra();
        let n = alg.dim();
        let mut gram = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gram[(i, j)] = inner(alg, &alg.basis_vector(i), &alg.basis_vector(j));
            }
        }
        gram.solve(&f.coords)
            .ok_or_else(|| OrbitError::Verification("theta-twisted Gram matrix singular".into()))
    }

    /// Orthogonal projection of an algebra element onto n3 with respect to
    /// the theta-twisted inner product, computed in the root-adapted basis.
    pub fn pr_n3(&self, x: &[Rational]) -> Vec<Rational> {
        let coords = self.adapted_pinv.mul_vec(x);
        let masked: Vec<Rational> = coords
            .into_iter()
            .zip(&self.adapted_n3_mask)
            .map(|(c, keep)| if *keep { c } else { Rational::zero() })
            .collect();
        self.adapted_p.mul_vec(&masked)
    }

    /// Frame functional of the theta-twisted dual of an n3 element:
    /// lambda(Y) = <x, Y> on n3 slots, zero elsewhere.
    pub fn n3_dual_functional(&self, x: &[Rational]) -> Vec<Rational> {
        let alg = self.algebra();
        let start = self.frame.n3_offset();
        self.frame
            .basis()
            .iter()
            .enumerate()
            .map(|(i, b)| {
                if i >= start {
                    inner(alg, x, b)
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }

    // -- signature ------------------------------------------------------------

    /// Cascade-elimination signature with the natural inner order.
    pub fn cascade_signature(&self, lambda: &[Rational]) -> Result<SignatureOutcome, OrbitError> {
        self.cascade_signature_with_order(lambda, false)
    }

    /// Cascade-elimination signature; `reverse_inner` flips the order in
    /// which the blocks of each pivot row are annihilated (the result must
    /// not change, and tests assert this).
    ///
    /// The outcome is always cross-checked against the KKS openness test on
    /// the same functional, which is the openness equivalence of the
    /// elimination: a disagreement is an internal error, not a value.
    pub fn cascade_signature_with_order(
        &self,
        lambda: &[Rational],
        reverse_inner: bool,
    ) -> Result<SignatureOutcome, OrbitError> {
        let open_point = self.frame.is_open_orbit_point(lambda)?;
        let outcome = self.signature_inner(lambda, reverse_inner)?;
        if outcome.is_open() != open_point {
            return Err(OrbitError::Verification(format!(
                "cascade signature ({}) disagrees with KKS openness ({})",
                outcome.key(),
                open_point
            )));
        }
        Ok(outcome)
    }

    fn signature_inner(
        &self,
        lambda: &[Rational],
        reverse_inner: bool,
    ) -> Result<SignatureOutcome, OrbitError> {
        if !self.cascade.has_open_orbits() {
            return Ok(SignatureOutcome::NotOpen(NotOpenReason::NoOpenOrbitCriterion));
        }
        let r = self.cascade.cascade_rank();
        let mut lam = self.frame.restrict_to_n3(lambda);
        let mut signs = Vec::with_capacity(r);
        for k in 0..r {
            let slot = self.frame.diag_slots[k].ok_or_else(|| {
                OrbitError::Verification("open-orbit criterion holds but a diagonal slot is missing".into())
            })?;
            let pivot = lam[slot].clone();
            if pivot.is_zero() {
                return Ok(SignatureOutcome::NotOpen(NotOpenReason::ZeroPivot(k)));
            }
            let mut row: Vec<&(usize, usize, Vec<usize>)> = self
                .frame
                .offdiag_blocks
                .iter()
                .filter(|(i, _, _)| *i == k)
                .collect();
            if reverse_inner {
                row.reverse();
            }
            for (i, j, slots) in row {
                lam = self.annihilate_block(lam, *i, *j, slots)?;
            }
            signs.push(sign_of(&pivot));
        }
        Ok(SignatureOutcome::Open(signs))
    }

    /// Annihilate lambda on the (i, j) sum block using exact letters from
    /// the (beta_i - beta_j)/2 space, then verify the block is zero.
    fn annihilate_block(
        &self,
        lam: Vec<Rational>,
        i: usize,
        j: usize,
        slots: &[usize],
    ) -> Result<Vec<Rational>, OrbitError> {
        if slots.iter().all(|s| lam[*s].is_zero()) {
            return Ok(lam);
        }
        let letters = self.diff_half_basis(i, j).ok_or_else(|| {
            OrbitError::Verification(format!(
                "no difference-half letters available for block ({i}, {j})"
            ))
        })?;
        // Linear system: sum_b c_b lambda([Z_b, Y_s]) = lambda(Y_s).
        let rows = slots.len();
        let mut l = QMat::zeros(rows, letters.len());
        let mut rhs = Vec::with_capacity(rows);
        for (row_idx, s) in slots.iter().enumerate() {
            let y = &self.frame.basis()[*s].clone();
            for (col_idx, z) in letters.iter().enumerate() {
                let w = self.algebra().bracket(z, y);
                let coords = self
                    .frame
                    .space
                    .coords_of(&w)
                    .ok_or_else(|| OrbitError::Verification("elimination bracket left a+n".into()))?;
                let mut val = Rational::zero();
                for (idx, c) in coords.iter().enumerate() {
                    if !c.is_zero() {
                        val += &lam[idx] * c;
                    }
                }
                l[(row_idx, col_idx)] = val;
            }
            rhs.push(lam[*s].clone());
        }
        let coeffs = l.solve(&rhs).ok_or_else(|| {
            OrbitError::Verification(format!("elimination system for block ({i}, {j}) unsolvable"))
        })?;
        let mut z = vec![Rational::zero(); self.algebra().dim()];
        for (c, zb) in coeffs.iter().zip(letters.iter()) {
            for (zi, b) in z.iter_mut().zip(zb.iter()) {
                *zi += c * b;
            }
        }
        let out = self.frame.coadjoint_nilpotent(&z, &lam)?;
        if slots.iter().any(|s| !out[*s].is_zero()) {
            return Err(OrbitError::Verification(format!(
                "block ({i}, {j}) not annihilated exactly"
            )));
        }
        Ok(out)
    }

    fn diff_half_basis(&self, i: usize, j: usize) -> Option<Vec<Vec<Rational>>> {
        let positives: Vec<&crate::realforms::RestrictedRoot> =
            self.sys.roots.iter().filter(|r| r.is_positive()).collect();
        for (idx, class) in self.cascade.classes.iter().enumerate() {
            if *class == Some(RootClass::DiffHalf(i, j)) {
                return Some(positives[idx].space.basis().to_vec());
            }
        }
        None
    }

    /// Frame functional of one canonical representative: the given signs on
    /// the diagonal cascade slots and zero everywhere else.
    pub fn canonical_representative(&self, signs: &[i8]) -> Result<Vec<Rational>, OrbitError> {
        if signs.len() != self.cascade.cascade_rank() || !self.cascade.has_open_orbits() {
            return Err(OrbitError::Verification(
                "canonical representatives need the open-orbit criterion".into(),
            ));
        }
        let mut lam = vec![Rational::zero(); self.frame.dim()];
        for (k, s) in signs.iter().enumerate() {
            let slot = self.frame.diag_slots[k]
                .ok_or_else(|| OrbitError::Verification("missing diagonal slot".into()))?;
            lam[slot] = rint(*s as i64);
        }
        Ok(lam)
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // Good enough for exploratory float paths.
    let fnum: f64 = num.to_string().parse().unwrap_or(f64::NAN);
    let fden: f64 = den.to_string().parse().unwrap_or(f64::NAN);
    fnum / fden
}

fn expm_f64(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let norm: f64 = a
        .iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 1.0 / f64::powi(2.0, s as i32);
    let mut scaled = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            scaled[i][j] = a[i][j] * scale;
        }
    }
    // Taylor series on the scaled matrix.
    let mut result = vec![vec![0.0; n]; n];
    let mut term = vec![vec![0.0; n]; n];
    for i in 0..n {
        result[i][i] = 1.0;
        term[i][i] = 1.0;
    }
    for k in 1..=14 {
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for l in 0..n {
                if term[i][l] == 0.0 {
                    continue;
                }
                for j in 0..n {
                    next[i][j] += term[i][l] * scaled[l][j] / k as f64;
                }
            }
        }
        term = next;
        for i in 0..n {
            for j in 0..n {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..s {
        let mut sq = vec![vec![0.0; n]; n];
        for i in 0..n {
            for l in 0..n {
                if result[i][l] == 0.0 {
                    continue;
                }
                for j in 0..n {
                    sq[i][j] += result[i][l] * result[l][j];
                }
            }
        }
        result = sq;
    }
    result
}

// ---------------------------------------------------------------------------
// Sampling.
// ---------------------------------------------------------------------------

fn small_nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = *[-2i64, -1, 1, 2].get(rng.gen_range(0..4)).unwrap();
    let den = rng.gen_range(1..=3i64);
    rat(num, den)
}

fn positive_small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.gen_range(1..=3i64);
    let den = rng.gen_range(1..=3i64);
    rat(num, den)
}

fn sample_nilpotent_from(pool: &[Vec<Rational>], rng: &mut ChaCha8Rng) -> Option<Letter> {
    if pool.is_empty() {
        return None;
    }
    let n = pool[0].len();
    let mut z = vec![Rational::zero(); n];
    let picks = 1 + rng.gen_range(0..2usize);
    for _ in 0..picks {
        let v = &pool[rng.gen_range(0..pool.len())];
        let c = small_nonzero_rational(rng);
        for (zi, vi) in z.iter_mut().zip(v.iter()) {
            *zi += &c * vi;
        }
    }
    if z.iter().all(|c| c.is_zero()) {
        return None;
    }
    Some(Letter::Nilpotent { z })
}

impl<'a> OrbitEngine<'a> {
    fn sample_torus_letter(&self, rng: &mut ChaCha8Rng) -> Letter {
        let t: Vec<Rational> = (0..self.split_rank())
            .map(|_| positive_small_rational(rng))
            .collect();
        Letter::Torus { t }
    }

    /// A random word over the full group generators.
    pub fn sample_word(&self, rng: &mut ChaCha8Rng) -> GroupWord {
        let rotations = self.available_rotations();
        let len = rng.gen_range(3..=6usize);
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            let kind = rng.gen_range(0..10u32);
            let letter = if kind < 4 && !rotations.is_empty() {
                let generator = rotations[rng.gen_range(0..rotations.len())];
                Letter::Rotation {
                    generator,
                    u: small_nonzero_rational(rng),
                }
            } else if kind < 6 {
                match sample_nilpotent_from(&self.n_basis, rng) {
                    Some(l) => l,
                    None => self.sample_torus_letter(rng),
                }
            } else if kind < 8 {
                match sample_nilpotent_from(&self.theta_n_basis, rng) {
                    Some(l) => l,
                    None => self.sample_torus_letter(rng),
                }
            } else {
                self.sample_torus_letter(rng)
            };
            letters.push(letter);
        }
        GroupWord { letters }
    }

    /// A random word over AN generators only.
    pub fn sample_an_word(&self, rng: &mut ChaCha8Rng) -> GroupWord {
        let len = rng.gen_range(2..=5usize);
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            let kind = rng.gen_range(0..10u32);
            let letter = if kind < 6 {
                match sample_nilpotent_from(&self.n_basis, rng) {
                    Some(l) => l,
                    None => self.sample_torus_letter(rng),
                }
            } else {
                self.sample_torus_letter(rng)
            };
            letters.push(letter);
        }
        GroupWord { letters }
    }

    fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        rng
    }

    /// Deterministic orbit sample: the `stream`-th point of the seeded walk
    /// through G . f. The empty stream 0 is the identity.
    pub fn sample_orbit_point(
        &self,
        f: &Covector,
        seed: u64,
        stream: u64,
        mode: SampleMode,
    ) -> Result<OrbitSample, OrbitError> {
        let word = if stream == 0 {
            GroupWord::identity()
        } else {
            let mut rng = Self::stream_rng(seed, stream);
            match mode {
                SampleMode::Exact => self.sample_word(&mut rng),
                SampleMode::Float => {
                    let mut w = self.sample_word(&mut rng);
                    // One float letter demonstrates the tainted path.
                    let x: Vec<Rational> =
                        (0..self.algebra().dim()).map(|_| small_nonzero_rational(&mut rng)).collect();
                    let time = rng.gen_range(-0.5..0.5);
                    w.letters.push(Letter::FloatExp { x, time });
                    w
                }
            }
        };
        match mode {
            SampleMode::Exact => {
                let exact = self.apply_word_to_covector(&word, f)?;
                Ok(OrbitSample {
                    word,
                    exact: Some(exact),
                    float: None,
                })
            }
            SampleMode::Float => {
                let f64coords: Vec<f64> = f.coords.iter().map(rational_to_f64).collect();
                let float = self.apply_word_to_covector_f64(&word, &f64coords)?;
                Ok(OrbitSample {
                    word,
                    exact: None,
                    float: Some(float),
                })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    Exact,
    Float,
}

/// One sampled orbit point. Exactly one of the value fields is set,
/// depending on the sampling mode.
pub struct OrbitSample {
    pub word: GroupWord,
    pub exact: Option<Covector>,
    pub float: Option<Vec<f64>>,
}

impl OrbitSample {
    pub fn tainted(&self) -> bool {
        !self.word.is_exact()
    }
}

// ---------------------------------------------------------------------------
// Predicates.
// ---------------------------------------------------------------------------

/// Strong ellipticity of an arbitrary functional: the stabilizer subalgebra
/// is compact (negative definite Killing form).
pub fn is_strongly_elliptic(alg: &LieAlgebra, f: &Covector) -> Result<bool, OrbitError> {
    let stab = alg
        .stabilizer(f)
        .map_err(|e| OrbitError::Verification(format!("stabilizer: {e}")))?;
    alg.is_compact_subalgebra(&stab)
        .map_err(|e| OrbitError::Verification(format!("compactness: {e}")))
}

/// Strong ellipticity of a torus-aligned functional, by the root criterion
/// (no vanishing noncompact pairing), cross-checked against the direct
/// stabilizer computation.
pub fn is_strongly_elliptic_weight(
    alg: &LieAlgebra,
    croots: &ComplexRootSystem,
    f: &Weight,
) -> Result<bool, OrbitError> {
    let by_roots = croots
        .roots
        .iter()
        .filter(|r| !r.compact)
        .all(|r| !croots.pairing(f, r).is_zero());
    let direct = is_strongly_elliptic(alg, &croots.extend_weight(alg, f))?;
    if by_roots != direct {
        return Err(OrbitError::Verification(format!(
            "ellipticity routes disagree: roots {by_roots}, stabilizer {direct}"
        )));
    }
    Ok(by_roots)
}

/// Holomorphy of a strongly elliptic torus-aligned functional.
///
/// Route one: the span of the root spaces with positive noncompact pairing
/// is bracket closed (hence an abelian subalgebra of the complexified p).
/// Route two: that set of roots is stable under the compact Weyl group.
/// The routes must agree; any vanishing noncompact pairing is rejected.
pub fn is_holomorphic(
    alg: &LieAlgebra,
    croots: &ComplexRootSystem,
    f: &Weight,
) -> Result<bool, OrbitError> {
    let mut plus: Vec<usize> = Vec::new();
    for (idx, root) in croots.roots.iter().enumerate() {
        if root.compact {
            continue;
        }
        let p = croots.pairing(f, root);
        if p.is_zero() {
            return Err(OrbitError::DegeneratePairing(format!("{:?}", root.fcoords)));
        }
        if p.is_positive() {
            plus.push(idx);
        }
    }

    // Route one: bracket closure of the span.
    let mut closure = true;
    'outer: for &i in &plus {
        for &j in &plus {
            if i == j {
                continue;
            }
            let w = crate::complex_roots::complex_bracket(
                alg,
                &croots.roots[i].vector,
                &croots.roots[j].vector,
            );
            if w.is_zero() {
                continue;
            }
            // [g_alpha, g_beta] lies in g_{alpha+beta}; closure holds only if
            // that root is again in the positive noncompact set.
            let sum: Vec<Rational> = croots.roots[i]
                .q
                .iter()
                .zip(&croots.roots[j].q)
                .map(|(a, b)| a + b)
                .collect();
            let in_set = plus.iter().any(|&k| croots.roots[k].q == sum);
            if !in_set {
                closure = false;
                break 'outer;
            }
        }
    }

    // Route two: Weyl stability of the positive noncompact set, acting on
    // the functional coordinates of the roots.
    let coords_of = |idx: usize| croots.roots[idx].fcoords.clone();
    let set: Vec<Vec<Rational>> = plus.iter().map(|&i| coords_of(i)).collect();
    let mut stable = true;
    'wloop: for w in &croots.wk {
        for c in &set {
            let image = w.mul_vec(c);
            if !set.contains(&image) {
                stable = false;
                break 'wloop;
            }
        }
    }

    if closure != stable {
        return Err(OrbitError::RouteDisagreement {
            closure,
            stability: stable,
        });
    }
    Ok(closure)
}

// ---------------------------------------------------------------------------
// Dichotomy driver.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ConsistentHolomorphic,
    ConsistentNonholomorphic,
    Inconclusive,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::ConsistentHolomorphic => "CONSISTENT-HOLOMORPHIC",
            Verdict::ConsistentNonholomorphic => "CONSISTENT-NONHOLOMORPHIC",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Outcome of the main-theorem sampling driver.
pub struct TheoremOutcome {
    pub holomorphic: bool,
    pub exists_open_orbit: bool,
    pub verdict: Verdict,
    pub histogram: BTreeMap<String, usize>,
    pub witnesses: Vec<String>,
    pub n_samples: usize,
    pub seed: u64,
}

/// Sample the coadjoint orbit of the torus-aligned functional f, project
/// every sample to (a+n)*, and compare signatures against holomorphy.
///
/// A strongly elliptic holomorphic f must project onto one constant open
/// signature; a non-holomorphic one is confirmed by a witness (two distinct
/// signatures or a non-open projection). Absence of a witness is reported
/// as inconclusive, never as refutation. When the algebra has no open
/// orbits the driver asserts non-holomorphy and that every projection is
/// non-open.
pub fn verify_dichotomy(
    engine: &OrbitEngine,
    f: &Weight,
    n_samples: usize,
    seed: u64,
) -> Result<TheoremOutcome, OrbitError> {
    let croots = engine
        .croots
        .ok_or_else(|| OrbitError::MissingComplexData("theorem driver needs a compact Cartan".into()))?;
    let alg = engine.algebra();
    if !is_strongly_elliptic_weight(alg, croots, f)? {
        return Err(OrbitError::NotStronglyElliptic(format!("{f:?}")));
    }
    let holomorphic = is_holomorphic(alg, croots, f)?;
    let exists_open = engine.cascade.has_open_orbits();
    if !exists_open && holomorphic {
        return Err(OrbitError::TheoremViolation(
            "holomorphic functional found although no open AN-orbit exists".into(),
        ));
    }

    let big_f = croots.extend_weight(alg, f);
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    let mut witnesses: Vec<String> = Vec::new();
    let mut seen_open: Vec<(String, String)> = Vec::new(); // (key, word)
    let mut not_open_witness: Option<String> = None;

    for i in 0..n_samples {
        let sample = engine.sample_orbit_point(&big_f, seed, i as u64, SampleMode::Exact)?;
        let fv = sample.exact.as_ref().expect("exact mode");
        let lambda = engine.project_covector(fv);
        let outcome = engine.cascade_signature(&lambda)?;
        let key = outcome.key();
        *histogram.entry(key.clone()).or_insert(0) += 1;
        match &outcome {
            SignatureOutcome::Open(_) => {
                if !seen_open.iter().any(|(k, _)| *k == key) {
                    seen_open.push((key, sample.word.describe()));
                }
            }
            SignatureOutcome::NotOpen(_) => {
                if not_open_witness.is_none() {
                    not_open_witness = Some(format!("sample {i} [{}] -> {key}", sample.word.describe()));
                }
            }
        }
    }

    let verdict = if !exists_open {
        // Everything must be non-open here.
        if !seen_open.is_empty() {
            return Err(OrbitError::TheoremViolation(
                "open projected signature found although the open-orbit criterion fails".into(),
            ));
        }
        Verdict::ConsistentNonholomorphic
    } else if holomorphic {
        if not_open_witness.is_some() || seen_open.len() != 1 {
            let detail = not_open_witness
                .clone()
                .unwrap_or_else(|| format!("{} distinct open signatures", seen_open.len()));
            return Err(OrbitError::TheoremViolation(format!(
                "holomorphic functional projected outside a single open orbit: {detail}"
            )));
        }
        Verdict::ConsistentHolomorphic
    } else {
        // Non-holomorphic: look for a witness.
        if let Some(w) = &not_open_witness {
            witnesses.push(w.clone());
            Verdict::ConsistentNonholomorphic
        } else if seen_open.len() >= 2 {
            for (k, w) in seen_open.iter().take(2) {
                witnesses.push(format!("signature {k} via [{w}]"));
            }
            Verdict::ConsistentNonholomorphic
        } else {
            Verdict::Inconclusive
        }
    };

    Ok(TheoremOutcome {
        holomorphic,
        exists_open_orbit: exists_open,
        verdict,
        histogram,
        witnesses,
        n_samples,
        seed,
    })
}

// ---------------------------------------------------------------------------
// Lemma drivers.
// ---------------------------------------------------------------------------

/// Outcome of the sign-constancy check on the highest cascade slot.
pub struct SignConstancyOutcome {
    pub samples_per_orbit: usize,
    pub orbits_checked: usize,
    pub flip_witness: Option<String>,
}

/// For every canonical representative s, the sign of (w.s)(X_1) must equal
/// the sign of s(X_1) over exact AN-words (a hard failure otherwise); for
/// r >= 2 a flip witness on some later slot is searched for, first by a
/// deterministic quadratic-correction scan, then by random words.
pub fn sign_constancy_check(
    engine: &OrbitEngine,
    n_samples: usize,
    seed: u64,
) -> Result<SignConstancyOutcome, OrbitError> {
    if !engine.cascade.has_open_orbits() {
        return Err(OrbitError::Verification(
            "sign lemma needs the open-orbit criterion".into(),
        ));
    }
    let r = engine.cascade.cascade_rank();
    let x1_slot = engine.frame.diag_slots[0]
        .ok_or_else(|| OrbitError::Verification("missing diagonal slot".into()))?;
    let reps: Vec<Vec<i8>> = (0..(1u32 << r))
        .map(|mask| {
            (0..r)
                .map(|j| if mask & (1 << j) == 0 { 1i8 } else { -1i8 })
                .collect()
        })
        .collect();
    let mut flip_witness: Option<String> = None;

    for signs in &reps {
        let s = engine.canonical_representative(signs)?;
        let expect = signs[0];
        let mut rng = OrbitEngine::stream_rng(seed, 0xa1);
        for i in 0..n_samples {
            let word = engine.sample_an_word(&mut rng);
            let moved = apply_an_word_on_frame(engine, &word, &s)?;
            let got = sign_of(&moved[x1_slot]);
            if got != expect {
                return Err(OrbitError::TheoremViolation(format!(
                    "sign of lambda(X_1) flipped from {expect} to {got} on sample {i} of orbit {signs:?}"
                )));
            }
            if flip_witness.is_none() {
                for j in 1..r {
                    if let Some(slot) = engine.frame.diag_slots[j] {
                        let got_j = sign_of(&moved[slot]);
                        if got_j != 0 && got_j != signs[j] {
                            flip_witness = Some(format!(
                                "orbit {signs:?}: lambda(X_{}) sign {} -> {} via [{}]",
                                j + 1,
                                signs[j],
                                got_j,
                                word.describe()
                            ));
                        }
                    }
                }
            }
        }

        // Deterministic quadratic scan for a flip witness.
        if flip_witness.is_none() && r >= 2 {
            'scan: for j in 1..r {
                let slot = match engine.frame.diag_slots[j] {
                    Some(s) => s,
                    None => continue,
                };
                for i in 0..j {
                    if let Some(zs) = engine.diff_half_basis(i, j) {
                        for z in &zs {
                            for scale in [1i64, 2, 4, 8, 16] {
                                for dir in [1i64, -1] {
                                    let zz: Vec<Rational> =
                                        z.iter().map(|c| c * rat(dir * scale, 1)).collect();
                                    let moved = engine.frame.coadjoint_nilpotent(&zz, &s)?;
                                    let got = sign_of(&moved[slot]);
                                    if got != 0 && got != signs[j] {
                                        flip_witness = Some(format!(
                                            "orbit {signs:?}: lambda(X_{}) sign {} -> {} via exp({}{}.Z_({},{}))",
                                            j + 1,
                                            signs[j],
                                            got,
                                            if dir > 0 { "" } else { "-" },
                                            scale,
                                            i + 1,
                                            j + 1,
                                        ));
                                        break 'scan;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(SignConstancyOutcome {
        samples_per_orbit: n_samples,
        orbits_checked: reps.len(),
        flip_witness,
    })
}

/// Apply an AN-word directly on a frame functional (the word letters must be
/// torus letters or nilpotent letters with vectors inside a+n).
fn apply_an_word_on_frame(
    engine: &OrbitEngine,
    word: &GroupWord,
    lam: &[Rational],
) -> Result<Vec<Rational>, OrbitError> {
    let mut out = lam.to_vec();
    for letter in word.letters.iter().rev() {
        out = match letter {
            Letter::Nilpotent { z } => engine.frame.coadjoint_nilpotent(z, &out)?,
            Letter::Torus { t } => engine.frame.coadjoint_torus(t, &out)?,
            _ => {
                return Err(OrbitError::Verification(
                    "AN-word contained a non-AN letter".into(),
                ))
            }
        };
    }
    Ok(out)
}

/// Both paths of the projection diagram: restricting a functional to n3
/// must agree with the theta-twisted dual of the orthogonal projection of
/// its dual vector onto n3.
pub fn projection_diagram_check(engine: &OrbitEngine, f: &Covector) -> Result<(), OrbitError> {
    let path1 = engine.project_covector_n3(f);
    let x = engine.inner_dual_vector(f)?;
    let pr = engine.pr_n3(&x);
    let path2 = engine.n3_dual_functional(&pr);
    if path1 != path2 {
        return Err(OrbitError::Verification(
            "projection diagram does not commute".into(),
        ));
    }
    Ok(())
}

/// Exact convex-hull containment of the positive noncompact roots in the
/// compact-Weyl orbit of a long one (Hermitian case).
pub fn kostant_hull_check(croots: &ComplexRootSystem) -> Result<bool, OrbitError> {
    if !croots.hermitian {
        return Err(OrbitError::MissingComplexData(
            "hull lemma applies to the Hermitian case".into(),
        ));
    }
    let delta_n_plus: Vec<&crate::complex_roots::ComplexRoot> = croots
        .delta_n_plus
        .iter()
        .map(|&i| &croots.roots[i])
        .collect();
    let long = delta_n_plus
        .iter()
        .max_by(|a, b| {
            let wa = Weight(a.fcoords.clone());
            let wb = Weight(b.fcoords.clone());
            croots
                .weight_inner(&wa, &wa)
                .cmp(&croots.weight_inner(&wb, &wb))
        })
        .ok_or_else(|| OrbitError::Verification("empty positive noncompact system".into()))?;
    let orbit = croots.weyl_orbit(&Weight(long.fcoords.clone()));
    let generators: Vec<Vec<Rational>> = orbit.into_iter().map(|w| w.0).collect();
    for root in &delta_n_plus {
        if !in_convex_hull(&root.fcoords, &generators)? {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Cone suite.
// ---------------------------------------------------------------------------

/// Counters from the cone suite; any strict-inequality failure aborts with
/// an error instead.
pub struct ConeOutcome {
    pub pattern: Vec<i8>,
    pub pv_pairs: usize,
    pub projection_signatures: usize,
    pub omega_pairs: usize,
    pub cross_pairs: usize,
    pub translate_signatures: usize,
}

/// The convex-cone battery around a holomorphic functional: the
/// Paneitz-Vinberg positivity of C_max against the f-aligned highest
/// generator, the all-aligned signature of n3-projections of C_max samples,
/// pairwise positivity of the symmetric-cone samples, and the membership of
/// projected AN-translates in the cone (all exact).
pub fn cone_tests(
    engine: &OrbitEngine,
    f: &Weight,
    n_samples: usize,
    seed: u64,
) -> Result<ConeOutcome, OrbitError> {
    let croots = engine
        .croots
        .ok_or_else(|| OrbitError::MissingComplexData("cone suite needs complex root data".into()))?;
    if !croots.hermitian {
        return Err(OrbitError::MissingComplexData(
            "cone suite applies to the Hermitian case".into(),
        ));
    }
    let alg = engine.algebra();
    if !is_strongly_elliptic_weight(alg, croots, f)? {
        return Err(OrbitError::NotStronglyElliptic(format!("{f:?}")));
    }
    if !is_holomorphic(alg, croots, f)? {
        return Err(OrbitError::Verification(
            "cone suite needs a holomorphic functional".into(),
        ));
    }
    // Normalize the orientation so that the positive system of f is the
    // stored canonical one.
    let first = &croots.roots[croots.delta_n_plus[0]];
    let fplus = if croots.pairing(f, first).is_positive() {
        f.clone()
    } else {
        f.neg()
    };

    let r = engine.cascade.cascade_rank();
    let rank = croots.rank();
    // Expected signature and f-aligned generators: the diagonal slot of
    // f at T_j fixes the sign of X_j.
    let hk_len = rank - r;
    let mut pattern: Vec<i8> = Vec::with_capacity(r);
    let mut x_star: Vec<Vec<Rational>> = Vec::with_capacity(r);
    for j in 0..r {
        let sign = sign_of(&fplus.0[hk_len + j]);
        if sign == 0 {
            return Err(OrbitError::Verification(
                "holomorphic functional vanishes on a cascade slot".into(),
            ));
        }
        pattern.push(sign);
        let xj = &engine.cascade.x[j];
        x_star.push(if sign > 0 {
            xj.clone()
        } else {
            xj.iter().map(|c| -c.clone()).collect()
        });
    }

    // c_max samples: t-coordinates with every positive noncompact pairing
    // strictly positive, seeded at the dual vector of f.
    let mut cmax_points: Vec<Vec<Rational>> = vec![croots.weight_vector(&fplus)];
    let mut rng = OrbitEngine::stream_rng(seed, 0xc0);
    let in_cmax = |x_t: &Weight| -> bool {
        croots.delta_n_plus.iter().all(|&i| {
            let root = &croots.roots[i];
            // i alpha(X) for X with t-coordinates x is -q . x.
            let mut v = Rational::zero();
            for (qm, xm) in root.q.iter().zip(&x_t.0) {
                v += qm * xm;
            }
            v.is_negative()
        })
    };
    let mut attempts = 0;
    while cmax_points.len() < 5 && attempts < 200 {
        attempts += 1;
        // Perturb the functional; keep the candidate when its dual vector
        // still satisfies every cone inequality.
        let fc = Weight(
            fplus
                .0
                .iter()
                .map(|a| a + &small_nonzero_rational(&mut rng) * &rat(1, 4))
                .collect::<Vec<Rational>>(),
        );
        let t_coords = croots.gram_inv.mul_vec(&fc.0);
        if in_cmax(&Weight(t_coords)) {
            cmax_points.push(croots.weight_vector(&fc));
        }
    }
    let _ = rank;

    let x1_star = &x_star[0];
    let mut pv_pairs = 0;
    let mut projection_signatures = 0;
    let mut cmax_projections: Vec<Vec<Rational>> = Vec::new();
    let budget = n_samples.max(4);
    let mut rng = OrbitEngine::stream_rng(seed, 0xc1);
    for i in 0..budget {
        let g = engine.sample_word(&mut rng);
        let gp = engine.sample_word(&mut rng);
        let x = &cmax_points[i % cmax_points.len()];
        let v = engine.apply_word_to_vector(&g, x)?;
        let w = engine.apply_word_to_vector(&gp, x1_star)?;
        let ip = inner(alg, &v, &w);
        if !ip.is_positive() {
            return Err(OrbitError::ConeViolation(format!(
                "<Ad(g) X, Ad(g') X_1> = {ip} <= 0 at sample {i}"
            )));
        }
        pv_pairs += 1;

        // n3 projection of the C_max sample must sit in the aligned cone.
        let prv = engine.pr_n3(&v);
        let lam = engine.n3_dual_functional(&prv);
        match engine.cascade_signature(&lam)? {
            SignatureOutcome::Open(signs) if signs == pattern => {
                projection_signatures += 1;
            }
            other => {
                return Err(OrbitError::ConeViolation(format!(
                    "projection of a C_max sample has signature {} instead of the aligned cone",
                    other.key()
                )));
            }
        }
        if cmax_projections.len() < 12 {
            cmax_projections.push(prv);
        }
    }

    // Symmetric-cone samples via theta(N_c)-conjugated positive sums.
    let mut omega: Vec<Vec<Rational>> = Vec::new();
    let mut rng = OrbitEngine::stream_rng(seed, 0xc2);
    let omega_count = n_samples.clamp(4, 40);
    for _ in 0..omega_count {
        let mut seedvec = vec![Rational::zero(); alg.dim()];
        for xj in &x_star {
            let c = positive_small_rational(&mut rng);
            for (s, x) in seedvec.iter_mut().zip(xj.iter()) {
                *s += &c * x;
            }
        }
        let mut word = GroupWord::identity();
        for _ in 0..rng.gen_range(1..=3usize) {
            if let Some(l) = sample_nilpotent_from(&engine.theta_nc_basis, &mut rng) {
                word.letters.push(l);
            }
        }
        let moved = engine.apply_word_to_vector(&word, &seedvec)?;
        // theta(N_c) conjugates inside g; project back to n3 to land in the
        // cone model (the complement components are orthogonal to n3).
        omega.push(engine.pr_n3(&moved));
    }
    let mut omega_pairs = 0;
    for i in 0..omega.len() {
        for j in (i + 1)..omega.len() {
            let ip = inner(alg, &omega[i], &omega[j]);
            if !ip.is_positive() {
                return Err(OrbitError::ConeViolation(format!(
                    "symmetric-cone self-duality pair <w_{i}, w_{j}> = {ip} <= 0"
                )));
            }
            omega_pairs += 1;
        }
    }
    // Cone samples must carry the aligned signature as functionals and pair
    // positively against every n3-projected C_max sample.
    let mut cross_pairs = 0;
    for (i, w) in omega.iter().enumerate() {
        let lam = engine.n3_dual_functional(w);
        match engine.cascade_signature(&lam)? {
            SignatureOutcome::Open(signs) if signs == pattern => {}
            other => {
                return Err(OrbitError::ConeViolation(format!(
                    "symmetric-cone sample {i} has signature {}",
                    other.key()
                )));
            }
        }
        for (j, y) in cmax_projections.iter().enumerate() {
            let ip = inner(alg, y, w);
            if !ip.is_positive() {
                return Err(OrbitError::ConeViolation(format!(
                    "<pr(C_max sample {j}), cone sample {i}> = {ip} <= 0"
                )));
            }
            cross_pairs += 1;
        }
    }

    // Projected AN-translates of f: constant aligned signature (the
    // projection lemma in its operational form).
    let big_f = croots.extend_weight(alg, &fplus);
    let mut translate_signatures = 0;
    let mut rng = OrbitEngine::stream_rng(seed, 0xc3);
    for i in 0..budget {
        let word = engine.sample_an_word(&mut rng);
        let moved = engine.apply_word_to_covector(&word, &big_f)?;
        let lam = engine.project_covector(&moved);
        match engine.cascade_signature(&lam)? {
            SignatureOutcome::Open(signs) if signs == pattern => {
                translate_signatures += 1;
            }
            other => {
                return Err(OrbitError::ConeViolation(format!(
                    "projected AN-translate {i} has signature {} instead of the aligned cone",
                    other.key()
                )));
            }
        }
    }

    Ok(ConeOutcome {
        pattern,
        pv_pairs,
        projection_signatures,
        omega_pairs,
        cross_pairs,
        translate_signatures,
    })
}

/// The distinguished open-orbit point h(Y) = -K(Z_0, Y) on a+n, as a frame
/// functional.
pub fn h_covector(engine: &OrbitEngine) -> Result<Vec<Rational>, OrbitError> {
    let croots = engine
        .croots
        .ok_or_else(|| OrbitError::MissingComplexData("h needs complex root data".into()))?;
    let z0 = croots
        .z0_vector()
        .ok_or_else(|| OrbitError::MissingComplexData("h needs the Hermitian center element".into()))?;
    let alg = engine.algebra();
    Ok(engine
        .frame
        .basis()
        .iter()
        .map(|b| -alg.killing(&z0, b))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::build_cascade;
    use crate::complex_roots::complex_root_system;
    use crate::exact::vec_is_zero;
    use crate::lie::dual_covector;
    use crate::realforms::{build_real_form, restricted_root_system, RealFormSpec};

    struct Fixture {
        form: RealForm,
        sys: RestrictedRootSystem,
        cascade: Cascade,
        croots: Option<ComplexRootSystem>,
    }

    impl Fixture {
        fn new(family: &str, params: &[usize]) -> Fixture {
            let spec = RealFormSpec::parse(family, params).unwrap();
            let form = build_real_form(&spec).unwrap();
            let sys = restricted_root_system(&form).unwrap();
            let cascade = build_cascade(&form, &sys).unwrap();
            let croots = complex_root_system(&form, &cascade).ok();
            Fixture {
                form,
                sys,
                cascade,
                croots,
            }
        }

        fn engine(&self) -> OrbitEngine<'_> {
            OrbitEngine::new(&self.form, &self.sys, &self.cascade, self.croots.as_ref()).unwrap()
        }
    }

    #[test]
    fn frame_shape_sp4() {
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        assert_eq!(engine.frame.a_len(), 2);
        assert_eq!(engine.frame.nc_len(), 1);
        assert_eq!(engine.frame.half_len(), 0);
        assert_eq!(engine.frame.n3_len(), 3);
        assert_eq!(engine.frame.dim(), 6);
        assert!(engine.frame.diag_slots.iter().all(|s| s.is_some()));
    }

    #[test]
    fn canonical_representatives_are_open_su11_sp4() {
        for (family, params) in [("su", vec![1usize, 1]), ("sp", vec![2usize])] {
            let fx = Fixture::new(family, &params);
            let engine = fx.engine();
            let r = fx.cascade.cascade_rank();
            for mask in 0..(1u32 << r) {
                let signs: Vec<i8> = (0..r)
                    .map(|j| if mask & (1 << j) == 0 { 1 } else { -1 })
                    .collect();
                let s = engine.canonical_representative(&signs).unwrap();
                assert!(engine.frame.is_open_orbit_point(&s).unwrap());
                match engine.cascade_signature(&s).unwrap() {
                    SignatureOutcome::Open(got) => assert_eq!(got, signs),
                    other => panic!("expected open, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn signature_matches_symmetric_model_sp4() {
        // n3 of sp(4, R) is the symmetric 2x2 model: values (a, b, c) on
        // (X_1, mixed, X_2). Diagonal data reproduces diagonal signatures;
        // a hollow matrix has a zero first pivot.
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        let slot1 = engine.frame.diag_slots[0].unwrap();
        let slot2 = engine.frame.diag_slots[1].unwrap();
        let mixed = engine.frame.offdiag_blocks[0].2[0];

        let mut lam = vec![Rational::zero(); engine.frame.dim()];
        lam[slot1] = rint(1);
        lam[slot2] = rint(1);
        assert_eq!(
            engine.cascade_signature(&lam).unwrap(),
            SignatureOutcome::Open(vec![1, 1])
        );

        lam[slot2] = rint(-1);
        assert_eq!(
            engine.cascade_signature(&lam).unwrap(),
            SignatureOutcome::Open(vec![1, -1])
        );

        let mut hollow = vec![Rational::zero(); engine.frame.dim()];
        hollow[mixed] = rint(1);
        assert_eq!(
            engine.cascade_signature(&hollow).unwrap(),
            SignatureOutcome::NotOpen(NotOpenReason::ZeroPivot(0))
        );
    }

    #[test]
    fn signature_agrees_with_kks_on_random_functionals() {
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        let mut rng = OrbitEngine::stream_rng(7, 1);
        for _ in 0..100 {
            let lam: Vec<Rational> = (0..engine.frame.dim())
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        Rational::zero()
                    } else {
                        small_nonzero_rational(&mut rng)
                    }
                })
                .collect();
            // The equivalence itself is asserted inside cascade_signature.
            let _ = engine.cascade_signature(&lam).unwrap();
        }
    }

    #[test]
    fn signature_inner_order_is_irrelevant() {
        let fx = Fixture::new("sp", &[3]);
        let engine = fx.engine();
        let mut rng = OrbitEngine::stream_rng(11, 2);
        for _ in 0..40 {
            let lam: Vec<Rational> = (0..engine.frame.dim())
                .map(|_| {
                    if rng.gen_bool(0.25) {
                        Rational::zero()
                    } else {
                        small_nonzero_rational(&mut rng)
                    }
                })
                .collect();
            let a = engine.cascade_signature_with_order(&lam, false).unwrap();
            let b = engine.cascade_signature_with_order(&lam, true).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn signature_is_an_orbit_invariant() {
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        let mut rng = OrbitEngine::stream_rng(23, 3);
        let s = engine.canonical_representative(&[1, -1]).unwrap();
        for _ in 0..25 {
            let word = engine.sample_an_word(&mut rng);
            let moved = apply_an_word_on_frame(&engine, &word, &s).unwrap();
            assert_eq!(
                engine.cascade_signature(&moved).unwrap(),
                SignatureOutcome::Open(vec![1, -1])
            );
        }
    }

    #[test]
    fn torus_letter_scales_su11_canonical_point_positively() {
        let fx = Fixture::new("su", &[1, 1]);
        let engine = fx.engine();
        let s = engine.canonical_representative(&[1]).unwrap();
        for t in [rat(1, 3), rat(2, 1), rat(5, 2)] {
            let moved = engine.frame.coadjoint_torus(&[t], &s).unwrap();
            let slot = engine.frame.diag_slots[0].unwrap();
            assert!(moved[slot].is_positive());
        }
    }

    #[test]
    fn rotation_letters_are_exact_automorphisms() {
        let fx = Fixture::new("su", &[1, 1]);
        let engine = fx.engine();
        let rotations = engine.available_rotations();
        assert!(!rotations.is_empty());
        let alg = engine.algebra();
        let letter = Letter::Rotation {
            generator: rotations[0],
            u: rat(1, 2),
        };
        let m = engine.letter_matrix(&letter, false).unwrap();
        let minv = engine.letter_matrix(&letter, true).unwrap();
        assert!(m.mul(&minv).sub(&QMat::identity(alg.dim())).is_zero());
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = m.mul_vec(&alg.bracket(&alg.basis_vector(i), &alg.basis_vector(j)));
                let rhs = alg.bracket(&m.col(i), &m.col(j));
                assert_eq!(lhs, rhs, "rotation is not an automorphism at ({i},{j})");
            }
        }
    }

    #[test]
    fn word_application_is_exact_and_invertible() {
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        let mut rng = OrbitEngine::stream_rng(5, 9);
        let word = engine.sample_word(&mut rng);
        let f = dual_covector(engine.algebra(), &fx.croots.as_ref().unwrap().weight_vector(&Weight(vec![rat(2, 1), rat(1, 1)])));
        let moved = engine.apply_word_to_covector(&word, &f).unwrap();
        // Undo with the reversed inverse word.
        let mut inverse = GroupWord::identity();
        for letter in word.letters.iter().rev() {
            inverse.letters.push(match letter {
                Letter::Nilpotent { z } => Letter::Nilpotent {
                    z: z.iter().map(|c| -c.clone()).collect(),
                },
                Letter::Torus { t } => Letter::Torus {
                    t: t.iter().map(|x| x.recip()).collect(),
                },
                Letter::Rotation { generator, u } => Letter::Rotation {
                    generator: *generator,
                    u: -u.clone(),
                },
                Letter::FloatExp { .. } => unreachable!(),
            });
        }
        let back = engine.apply_word_to_covector(&inverse, &moved).unwrap();
        assert_eq!(back.coords, f.coords);
    }

    #[test]
    fn strongly_elliptic_examples() {
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        let alg = engine.algebra();
        let croots = fx.croots.as_ref().unwrap();

        // Regular torus functional: elliptic.
        let f = croots.extend_weight(alg, &Weight(vec![rat(2, 1), rat(1, 1)]));
        assert!(is_strongly_elliptic(alg, &f).unwrap());

        // Zero functional: stabilizer is everything.
        assert!(!is_strongly_elliptic(alg, &Covector::zero(alg.dim())).unwrap());

        // Dual of a split torus element: stabilizer contains a.
        let h = &fx.sys.a.basis()[0];
        assert!(!is_strongly_elliptic(alg, &dual_covector(alg, h)).unwrap());
    }

    #[test]
    fn holomorphy_routes_sp4() {
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        let alg = engine.algebra();
        let croots = fx.croots.as_ref().unwrap();
        assert!(is_holomorphic(alg, croots, &Weight(vec![rat(2, 1), rat(1, 1)])).unwrap());
        assert!(!is_holomorphic(alg, croots, &Weight(vec![rat(2, 1), rat(-1, 1)])).unwrap());
        assert!(matches!(
            is_holomorphic(alg, croots, &Weight(vec![rat(2, 1), rat(0, 1)])),
            Err(OrbitError::DegeneratePairing(_))
        ));
        // Scale invariance of the predicate.
        assert!(is_holomorphic(
            alg,
            croots,
            &Weight(vec![rat(2, 1), rat(1, 1)]).scale(&rat(7, 3))
        )
        .unwrap());
    }

    #[test]
    fn theorem_driver_sp4_holomorphic() {
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        let out = verify_dichotomy(&engine, &Weight(vec![rat(2, 1), rat(1, 1)]), 24, 20260818).unwrap();
        assert!(out.holomorphic);
        assert_eq!(out.verdict, Verdict::ConsistentHolomorphic);
        assert_eq!(out.histogram.len(), 1);
        let (key, count) = out.histogram.iter().next().unwrap();
        assert_eq!(key, "open(++)");
        assert_eq!(*count, 24);
    }

    #[test]
    fn theorem_driver_sp4_nonholomorphic() {
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        let out = verify_dichotomy(&engine, &Weight(vec![rat(2, 1), rat(-1, 1)]), 80, 20260818).unwrap();
        assert!(!out.holomorphic);
        assert_eq!(out.verdict, Verdict::ConsistentNonholomorphic);
        assert!(!out.witnesses.is_empty());
    }

    #[test]
    fn theorem_driver_so41_control() {
        let fx = Fixture::new("so", &[4, 1]);
        let engine = fx.engine();
        let croots = fx.croots.as_ref().unwrap();
        // Pick a strongly elliptic functional on the compact Cartan.
        let f = Weight(vec![rat(3, 1), rat(1, 1)]);
        assert!(is_strongly_elliptic_weight(engine.algebra(), croots, &f).unwrap());
        let out = verify_dichotomy(&engine, &f, 16, 7).unwrap();
        assert!(!out.holomorphic);
        assert!(!out.exists_open_orbit);
        assert_eq!(out.verdict, Verdict::ConsistentNonholomorphic);
        assert!(out.histogram.keys().all(|k| k == "not-open(no-criterion)"));
    }

    #[test]
    fn sign_lemma_sp4_constancy_and_flip() {
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        let out = sign_constancy_check(&engine, 60, 99).unwrap();
        assert_eq!(out.orbits_checked, 4);
        assert!(out.flip_witness.is_some(), "expected a sign flip witness on X_2");
    }

    #[test]
    fn projection_diagram_commutes_on_random_functionals() {
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        let mut rng = OrbitEngine::stream_rng(31, 4);
        for _ in 0..100 {
            let coords: Vec<Rational> = (0..engine.algebra().dim())
                .map(|_| small_nonzero_rational(&mut rng))
                .collect();
            projection_diagram_check(&engine, &Covector::new(coords)).unwrap();
        }
    }

    #[test]
    fn kostant_hull_sp4_su21() {
        for (family, params) in [("su", vec![2usize, 1]), ("sp", vec![2usize])] {
            let fx = Fixture::new(family, &params);
            assert!(kostant_hull_check(fx.croots.as_ref().unwrap()).unwrap());
        }
    }

    #[test]
    fn cone_suite_sp4() {
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        let out = cone_tests(&engine, &Weight(vec![rat(2, 1), rat(1, 1)]), 12, 20260818).unwrap();
        assert_eq!(out.pattern, vec![1, 1]);
        assert!(out.pv_pairs >= 12);
        assert!(out.omega_pairs > 0);
    }

    #[test]
    fn h_point_is_open_sp4() {
        let fx = Fixture::new("sp", &[2]);
        let engine = fx.engine();
        let h = h_covector(&engine).unwrap();
        assert!(engine.frame.is_open_orbit_point(&h).unwrap());
        match engine.cascade_signature(&h).unwrap() {
            SignatureOutcome::Open(signs) => {
                assert!(signs.iter().all(|s| *s == signs[0]), "h signature {signs:?}");
            }
            other => panic!("h not open: {other:?}"),
        }
    }

    #[test]
    fn float_path_exists_and_is_tainted() {
        let fx = Fixture::new("su", &[1, 1]);
        let engine = fx.engine();
        let croots = fx.croots.as_ref().unwrap();
        let f = croots.extend_weight(engine.algebra(), &Weight(vec![rat(1, 1)]));
        let sample = engine
            .sample_orbit_point(&f, 3, 1, SampleMode::Float)
            .unwrap();
        assert!(sample.tainted());
        assert!(sample.float.is_some());
        // Exact evaluation refuses the tainted word.
        assert!(matches!(
            engine.apply_word_to_covector(&sample.word, &f),
            Err(OrbitError::TaintedWord)
        ));
        // Empty word is the identity.
        let id = engine
            .sample_orbit_point(&f, 3, 0, SampleMode::Exact)
            .unwrap();
        assert_eq!(id.exact.unwrap().coords, f.coords);
        assert!(!vec_is_zero(&f.coords));
    }
}
