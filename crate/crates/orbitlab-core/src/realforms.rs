//! The four classical Hermitian-type matrix families and their Iwasawa data.
//!
//! Each family is realized as a space of complex matrices closed under the
//! commutator, with Cartan involution theta(X) = -X^dagger. Structure
//! constants are extracted exactly by flattening basis matrices into rational
//! vectors and solving; everything downstream works with the abstract
//! structure table and never touches matrices again.
//!
//! Supported families:
//!   su(p,q)      block form [[A, B], [B^dagger, D]], A, D skew-Hermitian,
//!                trace A + trace D = 0
//!   sp(2n,R)     real [[A, B], [C, -A^T]] with B, C symmetric
//!   so*(2n)      [[A, B], [-conj(B), conj(A)]], A complex skew-symmetric,
//!                B Hermitian
//!   so(p,q)      real [[A, B], [B^T, D]], A, D skew-symmetric

use crate::exact::eigen::{eigen_split, EigenError};
use crate::exact::mat::{symmetric_signature, GMat, LinearSolver, QMat};
use crate::exact::{gaussian, rint, vec_add, vec_scale, zero_vec, Gaussian, Rational};
use crate::lie::{is_nilpotent, is_solvable, LieAlgebra, LieError, Subspace};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RealFormError {
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
    #[error("realization basis is linearly dependent")]
    DependentRealization,
    #[error("realization is not closed under commutators at basis pair ({0}, {1})")]
    NotClosed(usize, usize),
    #[error("theta image of basis element {0} leaves the realization span")]
    ThetaEscapes(usize),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("structure verification failed: {0}")]
    Verification(String),
}

/// Family identifier plus parameters, validated at parse time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealFormSpec {
    /// su(p, q), p + q >= 2.
    SuPQ { p: usize, q: usize },
    /// sp(2n, R), n >= 1.
    Sp2nR { n: usize },
    /// so*(2n), n >= 2.
    SoStar2n { n: usize },
    /// so(p, q), p + q >= 3.
    SoPQ { p: usize, q: usize },
}

impl RealFormSpec {
    /// Parse a family keyword and parameter list, e.g. ("su", [2, 1]).
    pub fn parse(family: &str, params: &[usize]) -> Result<Self, RealFormError> {
        let two = |what: &str| -> Result<(usize, usize), RealFormError> {
            if params.len() != 2 {
                return Err(RealFormError::InvalidSpec(format!(
                    "{what} takes two parameters p,q (got {})",
                    params.len()
                )));
            }
            Ok((params[0], params[1]))
        };
        let one = |what: &str| -> Result<usize, RealFormError> {
            if params.len() != 1 {
                return Err(RealFormError::InvalidSpec(format!(
                    "{what} takes one parameter n (got {})",
                    params.len()
                )));
            }
            Ok(params[0])
        };
        match family {
            "su" | "su_pq" => {
                let (p, q) = two("su")?;
                if p == 0 || q == 0 || p + q < 2 {
                    return Err(RealFormError::InvalidSpec(
                        "su(p,q) needs p, q >= 1".into(),
                    ));
                }
                Ok(RealFormSpec::SuPQ { p, q })
            }
            "sp" | "sp_2n_r" => {
                let n = one("sp")?;
                if n == 0 {
                    return Err(RealFormError::InvalidSpec("sp(2n,R) needs n >= 1".into()));
                }
                Ok(RealFormSpec::Sp2nR { n })
            }
            "so_star" | "so_star_2n" | "sostar" => {
                let n = one("so*")?;
                if n < 2 {
                    return Err(RealFormError::InvalidSpec("so*(2n) needs n >= 2".into()));
                }
                Ok(RealFormSpec::SoStar2n { n })
            }
            "so" | "so_pq" => {
                let (p, q) = two("so")?;
                if p == 0 || q == 0 || p + q < 3 {
                    return Err(RealFormError::InvalidSpec(
                        "so(p,q) needs p, q >= 1 and p + q >= 3".into(),
                    ));
                }
                Ok(RealFormSpec::SoPQ { p, q })
            }
            other => Err(RealFormError::InvalidSpec(format!(
                "unknown family '{other}' (expected su, sp, so_star, so)"
            ))),
        }
    }

    /// Display name, e.g. "su(2,1)" or "sp(4,R)".
    pub fn name(&self) -> String {
        match self {
            RealFormSpec::SuPQ { p, q } => format!("su({p},{q})"),
            RealFormSpec::Sp2nR { n } => format!("sp({},R)", 2 * n),
            RealFormSpec::SoStar2n { n } => format!("so*({})", 2 * n),
            RealFormSpec::SoPQ { p, q } => format!("so({p},{q})"),
        }
    }

    /// Size of the matrices in the defining realization.
    pub fn matrix_size(&self) -> usize {
        match self {
            RealFormSpec::SuPQ { p, q } => p + q,
            RealFormSpec::Sp2nR { n } => 2 * n,
            RealFormSpec::SoStar2n { n } => 2 * n,
            RealFormSpec::SoPQ { p, q } => p + q,
        }
    }

    /// Real rank (dimension of the maximal split torus).
    pub fn split_rank(&self) -> usize {
        match self {
            RealFormSpec::SuPQ { p, q } => *p.min(q),
            RealFormSpec::Sp2nR { n } => *n,
            RealFormSpec::SoStar2n { n } => n / 2,
            RealFormSpec::SoPQ { p, q } => *p.min(q),
        }
    }
}

/// A constructed real form: abstract structure table, Cartan decomposition,
/// and the family-standard maximal split torus.
pub struct RealForm {
    pub spec: RealFormSpec,
    pub algebra: LieAlgebra,
    /// +1 eigenspace of theta (maximal compactly embedded subalgebra).
    pub k: Subspace,
    /// -1 eigenspace of theta.
    pub p: Subspace,
    /// Family-standard maximal abelian subspace of p.
    pub a: Subspace,
}

// Matrix-building helpers on Gaussian matrices.

fn elem(n: usize, i: usize, j: usize, v: Gaussian) -> GMat {
    let mut m = GMat::zeros(n, n);
    m[(i, j)] = v;
    m
}

fn gone() -> Gaussian {
    gaussian(rint(1), rint(0))
}

fn gi() -> Gaussian {
    gaussian(rint(0), rint(1))
}

fn add_all(n: usize, terms: &[(usize, usize, Gaussian)]) -> GMat {
    let mut m = GMat::zeros(n, n);
    for (i, j, v) in terms {
        m[(*i, *j)] = &m[(*i, *j)] + v;
    }
    m
}

fn dagger(m: &GMat) -> GMat {
    let mut out = GMat::zeros(m.ncols(), m.nrows());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = &m[(i, j)];
            out[(j, i)] = Gaussian::new(v.re.clone(), -v.im.clone());
        }
    }
    out
}

fn commutator(a: &GMat, b: &GMat) -> GMat {
    a.mul(b).sub(&b.mul(a))
}

/// Flatten a complex matrix into a real vector: all real parts row-major,
/// then all imaginary parts.
fn flatten(m: &GMat) -> Vec<Rational> {
    let n2 = m.nrows() * m.ncols();
    let mut v = zero_vec(2 * n2);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let idx = i * m.ncols() + j;
            v[idx] = m[(i, j)].re.clone();
            v[n2 + idx] = m[(i, j)].im.clone();
        }
    }
    v
}

struct Realization {
    size: usize,
    mats: Vec<GMat>,
    labels: Vec<String>,
    /// Matrices spanning the family-standard maximal abelian subspace of p.
    split_torus: Vec<GMat>,
}

fn realize(spec: &RealFormSpec) -> Realization {
    match spec {
        RealFormSpec::SuPQ { p, q } => realize_su(*p, *q),
        RealFormSpec::Sp2nR { n } => realize_sp(*n),
        RealFormSpec::SoStar2n { n } => realize_so_star(*n),
        RealFormSpec::SoPQ { p, q } => realize_so(*p, *q),
    }
}

fn realize_su(p: usize, q: usize) -> Realization {
    let n = p + q;
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    // Traceless imaginary diagonal.
    for m in 0..n - 1 {
        mats.push(add_all(n, &[(m, m, gi()), (m + 1, m + 1, -gi())]));
        labels.push(format!("i(E{}_{}-E{}_{})", m + 1, m + 1, m + 2, m + 2));
    }
    // Compact off-diagonal: pairs within the p block or within the q block.
    let same_block = |k: usize, l: usize| (k < p) == (l < p);
    for k in 0..n {
        for l in k + 1..n {
            if same_block(k, l) {
                mats.push(add_all(n, &[(k, l, gone()), (l, k, -gone())]));
                labels.push(format!("E{}_{}-E{}_{}", k + 1, l + 1, l + 1, k + 1));
                mats.push(add_all(n, &[(k, l, gi()), (l, k, gi())]));
                labels.push(format!("i(E{}_{}+E{}_{})", k + 1, l + 1, l + 1, k + 1));
            }
        }
    }
    // Noncompact block: k in the p block, l in the q block.
    for k in 0..p {
        for l in p..n {
            mats.push(add_all(n, &[(k, l, gone()), (l, k, gone())]));
            labels.push(format!("E{}_{}+E{}_{}", k + 1, l + 1, l + 1, k + 1));
            mats.push(add_all(n, &[(k, l, gi()), (l, k, -gi())]));
            labels.push(format!("i(E{}_{}-E{}_{})", k + 1, l + 1, l + 1, k + 1));
        }
    }
    let r = p.min(q);
    let split_torus = (0..r)
        .map(|j| add_all(n, &[(j, p + j, gone()), (p + j, j, gone())]))
        .collect();
    Realization {
        size: n,
        mats,
        labels,
        split_torus,
    }
}

fn realize_sp(n: usize) -> Realization {
    let sz = 2 * n;
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    // A block: gl(n).
    for k in 0..n {
        for l in 0..n {
            if k == l {
                mats.push(add_all(sz, &[(k, k, gone()), (n + k, n + k, -gone())]));
                labels.push(format!("H{}", k + 1));
            } else {
                mats.push(add_all(sz, &[(k, l, gone()), (n + l, n + k, -gone())]));
                labels.push(format!("A{}_{}", k + 1, l + 1));
            }
        }
    }
    // B block: symmetric, upper right.
    for k in 0..n {
        for l in k..n {
            if k == l {
                mats.push(elem(sz, k, n + k, gone()));
                labels.push(format!("B{}_{}", k + 1, k + 1));
            } else {
                mats.push(add_all(sz, &[(k, n + l, gone()), (l, n + k, gone())]));
                labels.push(format!("B{}_{}", k + 1, l + 1));
            }
        }
    }
    // C block: symmetric, lower left.
    for k in 0..n {
        for l in k..n {
            if k == l {
                mats.push(elem(sz, n + k, k, gone()));
                labels.push(format!("C{}_{}", k + 1, k + 1));
            } else {
                mats.push(add_all(sz, &[(n + k, l, gone()), (n + l, k, gone())]));
                labels.push(format!("C{}_{}", k + 1, l + 1));
            }
        }
    }
    let split_torus = (0..n)
        .map(|k| add_all(sz, &[(k, k, gone()), (n + k, n + k, -gone())]))
        .collect();
    Realization {
        size: sz,
        mats,
        labels,
        split_torus,
    }
}

fn realize_so_star(n: usize) -> Realization {
    let sz = 2 * n;
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    // A complex skew-symmetric: real and imaginary parts separately.
    for k in 0..n {
        for l in k + 1..n {
            mats.push(add_all(
                sz,
                &[
                    (k, l, gone()),
                    (l, k, -gone()),
                    (n + k, n + l, gone()),
                    (n + l, n + k, -gone()),
                ],
            ));
            labels.push(format!("Ar{}_{}", k + 1, l + 1));
            mats.push(add_all(
                sz,
                &[
                    (k, l, gi()),
                    (l, k, -gi()),
                    (n + k, n + l, -gi()),
                    (n + l, n + k, gi()),
                ],
            ));
            labels.push(format!("Ai{}_{}", k + 1, l + 1));
        }
    }
    // B Hermitian: diagonal, real symmetric, imaginary skew parts.
    for k in 0..n {
        mats.push(add_all(sz, &[(k, n + k, gone()), (n + k, k, -gone())]));
        labels.push(format!("Bd{}", k + 1));
    }
    for k in 0..n {
        for l in k + 1..n {
            mats.push(add_all(
                sz,
                &[
                    (k, n + l, gone()),
                    (l, n + k, gone()),
                    (n + k, l, -gone()),
                    (n + l, k, -gone()),
                ],
            ));
            labels.push(format!("Bs{}_{}", k + 1, l + 1));
            mats.push(add_all(
                sz,
                &[
                    (k, n + l, gi()),
                    (l, n + k, -gi()),
                    (n + k, l, gi()),
                    (n + l, k, -gi()),
                ],
            ));
            labels.push(format!("Bi{}_{}", k + 1, l + 1));
        }
    }
    let split_torus = (0..n / 2)
        .map(|j| {
            let (k, l) = (2 * j, 2 * j + 1);
            add_all(
                sz,
                &[
                    (k, n + l, gi()),
                    (l, n + k, -gi()),
                    (n + k, l, gi()),
                    (n + l, k, -gi()),
                ],
            )
        })
        .collect();
    Realization {
        size: sz,
        mats,
        labels,
        split_torus,
    }
}

fn realize_so(p: usize, q: usize) -> Realization {
    let n = p + q;
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    let same_block = |k: usize, l: usize| (k < p) == (l < p);
    for k in 0..n {
        for l in k + 1..n {
            if same_block(k, l) {
                mats.push(add_all(n, &[(k, l, gone()), (l, k, -gone())]));
                labels.push(format!("L{}_{}", k + 1, l + 1));
            } else {
                mats.push(add_all(n, &[(k, l, gone()), (l, k, gone())]));
                labels.push(format!("P{}_{}", k + 1, l + 1));
            }
        }
    }
    let r = p.min(q);
    let split_torus = (0..r)
        .map(|j| add_all(n, &[(j, p + j, gone()), (p + j, j, gone())]))
        .collect();
    Realization {
        size: n,
        mats,
        labels,
        split_torus,
    }
}

/// Split the algebra into theta eigenspaces and verify the Cartan
/// decomposition identities and definiteness.
pub fn cartan_decomposition(alg: &LieAlgebra) -> Result<(Subspace, Subspace), RealFormError> {
    let n = alg.dim();
    let theta = alg.theta();
    let id = QMat::identity(n);
    let k = Subspace::span(n, theta.sub(&id).kernel())?;
    let p = Subspace::span(n, theta.add(&id).kernel())?;
    if k.dim() + p.dim() != n {
        return Err(RealFormError::Verification(
            "theta eigenspaces do not fill the algebra".into(),
        ));
    }
    let check = |c: bool, msg: &str| -> Result<(), RealFormError> {
        if c {
            Ok(())
        } else {
            Err(RealFormError::Verification(msg.into()))
        }
    };
    check(k.is_subalgebra(alg), "[k, k] is not contained in k")?;
    for x in k.basis() {
        for y in p.basis() {
            check(p.contains(&alg.bracket(x, y)), "[k, p] leaves p")?;
        }
    }
    for x in p.basis() {
        for y in p.basis() {
            check(k.contains(&alg.bracket(x, y)), "[p, p] leaves k")?;
        }
    }
    if k.dim() > 0 {
        let (pos, _, zero) = symmetric_signature(&alg.restricted_killing_gram(&k));
        check(pos == 0 && zero == 0, "Killing form is not negative definite on k")?;
    }
    if p.dim() > 0 {
        let (pos, neg, zero) = symmetric_signature(&alg.restricted_killing_gram(&p));
        check(
            neg == 0 && zero == 0 && pos == p.dim(),
            "Killing form is not positive definite on p",
        )?;
    }
    Ok((k, p))
}

/// Build the structure-constant table for a family spec and verify all
/// construction invariants.
pub fn build_real_form(spec: &RealFormSpec) -> Result<RealForm, RealFormError> {
    let rz = realize(spec);
    let d = rz.mats.len();
    let flat_len = 2 * rz.size * rz.size;
    let flats: Vec<Vec<Rational>> = rz.mats.iter().map(flatten).collect();
    let basis_matrix = QMat::from_cols(flats, flat_len);
    let solver = LinearSolver::new(&basis_matrix);
    if solver.rank() != d {
        return Err(RealFormError::DependentRealization);
    }
    let mut table = vec![vec![zero_vec(d); d]; d];
    for i in 0..d {
        for j in i + 1..d {
            let com = commutator(&rz.mats[i], &rz.mats[j]);
            let coords = solver
                .solve(&flatten(&com))
                .ok_or(RealFormError::NotClosed(i, j))?;
            table[j][i] = coords.iter().map(|c| -c.clone()).collect();
            table[i][j] = coords;
        }
    }
    let mut theta = QMat::zeros(d, d);
    for i in 0..d {
        let img = dagger(&rz.mats[i]);
        let neg = GMat::zeros(rz.size, rz.size).sub(&img);
        let coords = solver
            .solve(&flatten(&neg))
            .ok_or(RealFormError::ThetaEscapes(i))?;
        for (r, c) in coords.into_iter().enumerate() {
            theta[(r, i)] = c;
        }
    }
    let algebra = LieAlgebra::new(rz.labels, table, theta)?;
    let (k, p) = cartan_decomposition(&algebra)?;
    // Locate the family split torus inside the abstract coordinates.
    let mut a_vecs = Vec::new();
    for m in rz.split_torus.iter() {
        let coords = solver.solve(&flatten(m)).ok_or_else(|| {
            RealFormError::Verification("split torus generator is outside the algebra".into())
        })?;
        a_vecs.push(coords);
    }
    let a = Subspace::from_basis(d, a_vecs)?;
    for v in a.basis() {
        if !p.contains(v) {
            return Err(RealFormError::Verification(
                "split torus generator is not in p".into(),
            ));
        }
    }
    if !a.is_abelian(&algebra) {
        return Err(RealFormError::Verification(
            "split torus is not abelian".into(),
        ));
    }
    // Maximality: the centralizer of a inside p must be a itself.
    let za_p = algebra.centralizer(&a).intersect(&p);
    if !za_p.same_span(&a) {
        return Err(RealFormError::Verification(
            "split torus is not maximal abelian in p".into(),
        ));
    }
    Ok(RealForm {
        spec: spec.clone(),
        algebra,
        k,
        p,
        a,
    })
}

/// One restricted root: its coordinate vector on the split torus basis
/// (values of the root on each basis element) and its root space.
#[derive(Clone, Debug)]
pub struct RestrictedRoot {
    pub coords: Vec<Rational>,
    pub space: Subspace,
}

impl RestrictedRoot {
    pub fn multiplicity(&self) -> usize {
        self.space.dim()
    }

    pub fn is_positive(&self) -> bool {
        lex_positive(&self.coords)
    }
}

/// First nonzero coordinate positive.
pub fn lex_positive(coords: &[Rational]) -> bool {
    for c in coords {
        if !c.is_zero() {
            return c > &Rational::zero();
        }
    }
    false
}

/// Restricted root data for a real form: the (re-normalized) split torus
/// basis, the centralizer m of a in k, and the full set of roots sorted in
/// descending lexicographic order (so all positive roots come first).
pub struct RestrictedRootSystem {
    pub a: Subspace,
    pub m: Subspace,
    pub g0: Subspace,
    pub roots: Vec<RestrictedRoot>,
}

impl RestrictedRootSystem {
    pub fn rank(&self) -> usize {
        self.a.dim()
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &RestrictedRoot> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn find_root(&self, coords: &[Rational]) -> Option<&RestrictedRoot> {
        self.roots.iter().find(|r| r.coords == coords)
    }
}

fn restrict_operator(
    op: &QMat,
    s: &Subspace,
    solver: &LinearSolver<Rational>,
) -> Result<QMat, RealFormError> {
    let d = s.dim();
    let mut m = QMat::zeros(d, d);
    for (j, b) in s.basis().iter().enumerate() {
        let img = op.mul_vec(b);
        let coords = solver.solve(&img).ok_or_else(|| {
            RealFormError::Verification("operator does not preserve the subspace".into())
        })?;
        for (i, c) in coords.into_iter().enumerate() {
            m[(i, j)] = c;
        }
    }
    Ok(m)
}

/// Simultaneously diagonalize ad(a) on the algebra and assemble the
/// restricted root system. The split torus basis is rescaled so that every
/// root takes integer values on it.
pub fn restricted_root_system(form: &RealForm) -> Result<RestrictedRootSystem, RealFormError> {
    let alg = &form.algebra;
    let n = alg.dim();
    let r = form.a.dim();
    let mut parts: Vec<(Vec<Rational>, Subspace)> = vec![(Vec::new(), Subspace::full(n))];
    for h in form.a.basis() {
        let ad_h = alg.ad(h);
        let mut next = Vec::new();
        for (vals, s) in parts {
            if s.dim() == 0 {
                continue;
            }
            let solver = s.solver();
            let m = restrict_operator(&ad_h, &s, &solver)?;
            for (lambda, vecs) in eigen_split(&m)? {
                let lifted: Vec<Vec<Rational>> = vecs
                    .iter()
                    .map(|c| {
                        let mut v = zero_vec(n);
                        for (i, b) in s.basis().iter().enumerate() {
                            if !c[i].is_zero() {
                                v = vec_add(&v, &vec_scale(&c[i], b));
                            }
                        }
                        v
                    })
                    .collect();
                let mut key = vals.clone();
                key.push(lambda);
                next.push((key, Subspace::from_basis(n, lifted)?));
            }
        }
        parts = next;
    }
    let total: usize = parts.iter().map(|(_, s)| s.dim()).sum();
    if total != n {
        return Err(RealFormError::Verification(format!(
            "joint eigenspaces span {total} of {n} dimensions"
        )));
    }
    // Normalize the torus basis so all root values are integers.
    let mut scales: Vec<BigInt> = vec![BigInt::one(); r];
    for (vals, _) in &parts {
        for (m, v) in vals.iter().enumerate() {
            scales[m] = scales[m].lcm(v.denom());
        }
    }
    let a_basis: Vec<Vec<Rational>> = form
        .a
        .basis()
        .iter()
        .zip(&scales)
        .map(|(b, s)| vec_scale(&Rational::from(s.clone()), b))
        .collect();
    let a = Subspace::from_basis(n, a_basis)?;
    let mut g0 = None;
    let mut roots = Vec::new();
    for (vals, space) in parts {
        let coords: Vec<Rational> = vals
            .iter()
            .zip(&scales)
            .map(|(v, s)| v * &Rational::from(s.clone()))
            .collect();
        if coords.iter().all(|c| c.is_zero()) {
            g0 = Some(space);
        } else {
            roots.push(RestrictedRoot { coords, space });
        }
    }
    let g0 = g0.ok_or_else(|| {
        RealFormError::Verification("zero weight space is missing (a not inside it?)".into())
    })?;
    roots.sort_by(|x, y| y.coords.cmp(&x.coords));
    // m = Z_k(a); g0 must be m + a.
    let m = alg.centralizer(&a).intersect(&form.k);
    if m.dim() + a.dim() != g0.dim()
        || !g0.contains_subspace(&m)
        || !g0.contains_subspace(&a)
    {
        return Err(RealFormError::Verification(
            "zero weight space is not m + a".into(),
        ));
    }
    let sys = RestrictedRootSystem { a, m, g0, roots };
    verify_root_system(alg, &sys)?;
    Ok(sys)
}

fn verify_root_system(
    alg: &LieAlgebra,
    sys: &RestrictedRootSystem,
) -> Result<(), RealFormError> {
    // theta maps each root space onto the opposite one.
    for root in &sys.roots {
        let neg: Vec<Rational> = root.coords.iter().map(|c| -c.clone()).collect();
        let opposite = sys.find_root(&neg).ok_or_else(|| {
            RealFormError::Verification("root system is not symmetric under negation".into())
        })?;
        if opposite.space.dim() != root.space.dim() {
            return Err(RealFormError::Verification(
                "opposite root spaces have different multiplicities".into(),
            ));
        }
        for b in root.space.basis() {
            if !opposite.space.contains(&alg.theta_apply(b)) {
                return Err(RealFormError::Verification(
                    "theta does not map the root space onto its opposite".into(),
                ));
            }
        }
    }
    // Bracket containment [g_alpha, g_beta] inside g_{alpha+beta}.
    for x in &sys.roots {
        for y in &sys.roots {
            let sum: Vec<Rational> = x
                .coords
                .iter()
                .zip(&y.coords)
                .map(|(a, b)| a + b)
                .collect();
            let target: Option<&Subspace> = if sum.iter().all(|c| c.is_zero()) {
                Some(&sys.g0)
            } else {
                sys.find_root(&sum).map(|r| &r.space)
            };
            for bx in x.space.basis() {
                for by in y.space.basis() {
                    let z = alg.bracket(bx, by);
                    let ok = match target {
                        Some(t) => t.contains(&z),
                        None => crate::exact::vec_is_zero(&z),
                    };
                    if !ok {
                        return Err(RealFormError::Verification(format!(
                            "[g_a, g_b] escapes g_(a+b) for a = {:?}, b = {:?}",
                            x.coords, y.coords
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// The nilpotent Iwasawa piece n (sum of positive root spaces) and a + n.
pub struct IwasawaData {
    pub n: Subspace,
    pub an: Subspace,
}

pub fn iwasawa_data(
    form: &RealForm,
    sys: &RestrictedRootSystem,
) -> Result<IwasawaData, RealFormError> {
    let alg = &form.algebra;
    let mut vecs = Vec::new();
    for root in sys.roots.iter().filter(|r| r.is_positive()) {
        vecs.extend(root.space.basis().iter().cloned());
    }
    let n = Subspace::from_basis(alg.dim(), vecs)?;
    let an = sys.a.sum(&n);
    let check = |c: bool, msg: &str| -> Result<(), RealFormError> {
        if c {
            Ok(())
        } else {
            Err(RealFormError::Verification(msg.into()))
        }
    };
    check(n.is_subalgebra(alg), "n is not a subalgebra")?;
    check(is_nilpotent(alg, &n), "n is not nilpotent")?;
    check(an.is_subalgebra(alg), "a + n is not a subalgebra")?;
    check(is_solvable(alg, &an), "a + n is not solvable")?;
    check(n.is_ideal_in(alg, &an), "n is not an ideal in a + n")?;
    check(
        form.k.dim() + sys.a.dim() + n.dim() == alg.dim(),
        "Iwasawa dimensions do not add up",
    )?;
    check(
        form.k.sum(&an).dim() == alg.dim(),
        "k + a + n does not span the algebra",
    )?;
    Ok(IwasawaData { n, an })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rint;

    fn coords_i64(root: &RestrictedRoot) -> Vec<i64> {
        root.coords
            .iter()
            .map(|c| {
                assert!(c.is_integer(), "root coordinate not integer: {c}");
                let n: BigInt = c.numer().clone();
                i64::try_from(n).unwrap()
            })
            .collect()
    }

    /// Multiset of (coords, multiplicity) over positive roots.
    fn positive_profile(sys: &RestrictedRootSystem) -> Vec<(Vec<i64>, usize)> {
        let mut v: Vec<(Vec<i64>, usize)> = sys
            .positive_roots()
            .map(|r| (coords_i64(r), r.multiplicity()))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn su_1_1_is_sl2() {
        let spec = RealFormSpec::parse("su", &[1, 1]).unwrap();
        let form = build_real_form(&spec).unwrap();
        assert_eq!(form.algebra.dim(), 3);
        assert_eq!(form.k.dim(), 1);
        assert_eq!(form.p.dim(), 2);
        let sys = restricted_root_system(&form).unwrap();
        assert_eq!(sys.rank(), 1);
        assert_eq!(sys.m.dim(), 0);
        assert_eq!(positive_profile(&sys), vec![(vec![2], 1)]);
        // Killing form on the split generator E12 + E21 equals 8, matching
        // K(h, h) in sl(2, R).
        let h = &sys.a.basis()[0];
        assert_eq!(form.algebra.killing(h, h), rint(8));
        let iw = iwasawa_data(&form, &sys).unwrap();
        assert_eq!(iw.n.dim(), 1);
    }

    #[test]
    fn su_2_1_profile() {
        let spec = RealFormSpec::parse("su", &[2, 1]).unwrap();
        let form = build_real_form(&spec).unwrap();
        assert_eq!(form.algebra.dim(), 8);
        assert_eq!(form.k.dim(), 4);
        let sys = restricted_root_system(&form).unwrap();
        assert_eq!(sys.rank(), 1);
        assert_eq!(sys.m.dim(), 1);
        assert_eq!(positive_profile(&sys), vec![(vec![1], 2), (vec![2], 1)]);
        let iw = iwasawa_data(&form, &sys).unwrap();
        assert_eq!(iw.n.dim(), 3);
    }

    #[test]
    fn sp_4_r_profile() {
        let spec = RealFormSpec::parse("sp", &[2]).unwrap();
        let form = build_real_form(&spec).unwrap();
        assert_eq!(form.algebra.dim(), 10);
        assert_eq!(form.k.dim(), 4);
        assert_eq!(form.p.dim(), 6);
        let sys = restricted_root_system(&form).unwrap();
        assert_eq!(sys.rank(), 2);
        assert_eq!(sys.m.dim(), 0);
        assert_eq!(
            positive_profile(&sys),
            vec![
                (vec![0, 2], 1),
                (vec![1, -1], 1),
                (vec![1, 1], 1),
                (vec![2, 0], 1),
            ]
        );
        let iw = iwasawa_data(&form, &sys).unwrap();
        assert_eq!(iw.n.dim(), 4);
    }

    #[test]
    fn so_2_1_is_split_rank_one() {
        let spec = RealFormSpec::parse("so", &[2, 1]).unwrap();
        let form = build_real_form(&spec).unwrap();
        assert_eq!(form.algebra.dim(), 3);
        let sys = restricted_root_system(&form).unwrap();
        assert_eq!(positive_profile(&sys), vec![(vec![1], 1)]);
    }

    #[test]
    fn so_4_1_has_multiplicity_three() {
        let spec = RealFormSpec::parse("so", &[4, 1]).unwrap();
        let form = build_real_form(&spec).unwrap();
        assert_eq!(form.algebra.dim(), 10);
        assert_eq!(form.k.dim(), 6);
        let sys = restricted_root_system(&form).unwrap();
        assert_eq!(sys.rank(), 1);
        assert_eq!(sys.m.dim(), 3);
        assert_eq!(positive_profile(&sys), vec![(vec![1], 3)]);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(RealFormSpec::parse("su", &[0, 1]).is_err());
        assert!(RealFormSpec::parse("sp", &[]).is_err());
        assert!(RealFormSpec::parse("so", &[1, 1]).is_err());
        assert!(RealFormSpec::parse("so_star", &[1]).is_err());
        assert!(RealFormSpec::parse("e8", &[8]).is_err());
    }

    #[test]
    fn names_and_ranks() {
        assert_eq!(
            RealFormSpec::parse("su", &[2, 1]).unwrap().name(),
            "su(2,1)"
        );
        assert_eq!(RealFormSpec::parse("sp", &[2]).unwrap().name(), "sp(4,R)");
        assert_eq!(
            RealFormSpec::parse("so_star", &[3]).unwrap().name(),
            "so*(6)"
        );
        assert_eq!(
            RealFormSpec::parse("so", &[2, 4]).unwrap().split_rank(),
            2
        );
        assert_eq!(
            RealFormSpec::parse("so_star", &[3]).unwrap().split_rank(),
            1
        );
    }
}
