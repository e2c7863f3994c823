//! Roots of the complexified algebra relative to the compact Cartan t.
//!
//! Every H in t acts with purely imaginary eigenvalues; a root alpha is
//! stored through its rational vector q with alpha(H_m) = i q_m on the t
//! basis. Real-valued functionals f on t (the restriction of covectors in
//! g*) are stored as f_m = f(H_m). The functional i*alpha then has
//! coordinates -q, and the inner product transported from the Killing form
//! uses the positive definite Gram matrix G = -K|t, giving the pairing
//! `<f, i alpha> = -f^T G^{-1} q_alpha`.
//!
//! A root is compact when its root space lies in the complexified k,
//! noncompact when it lies in the complexified p; theta acts by +1 or -1 on
//! each root space and decides the flag. When the center of k meets t in a
//! line, the algebra is Hermitian type: the normalized generator Z0 splits
//! the noncompact roots into the holomorphic system Delta_n+ (q . z = -1)
//! and its negative.

use crate::cascade::Cascade;
use crate::exact::mat::{GMat, LinearSolver, QMat};
use crate::exact::{
    gaussian, rational_sqrt, rint, vec_add, vec_dot, vec_is_zero, vec_scale, zero_vec, Gaussian,
    Rational,
};
use crate::lie::{Covector, LieAlgebra, Subspace};
use crate::realforms::RealForm;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CRootsError {
    #[error("the algebra has no compact Cartan subalgebra: {0}")]
    NoCompactCartan(String),
    #[error("adjoint spectrum on t is not rational")]
    NotRationalSpectrum,
    #[error("complex root verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Lie(#[from] crate::lie::LieError),
    #[error(transparent)]
    Eigen(#[from] crate::exact::eigen::EigenError),
}

/// Real-valued functional on t in basis coordinates f_m = f(H_m).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weight(pub Vec<Rational>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(zero_vec(rank))
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(vec_add(&self.0, &other.0))
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Weight {
        Weight(vec_scale(c, &self.0))
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a.clone()).collect())
    }
}

/// A complex vector in the complexified algebra, as (real part, imag part).
#[derive(Clone, Debug, PartialEq)]
pub struct CVec {
    pub re: Vec<Rational>,
    pub im: Vec<Rational>,
}

impl CVec {
    pub fn is_zero(&self) -> bool {
        vec_is_zero(&self.re) && vec_is_zero(&self.im)
    }
}

/// Bracket extended complex-bilinearly.
pub fn complex_bracket(alg: &LieAlgebra, a: &CVec, b: &CVec) -> CVec {
    let rr = alg.bracket(&a.re, &b.re);
    let ii = alg.bracket(&a.im, &b.im);
    let ri = alg.bracket(&a.re, &b.im);
    let ir = alg.bracket(&a.im, &b.re);
    CVec {
        re: rr.iter().zip(&ii).map(|(x, y)| x - y).collect(),
        im: ri.iter().zip(&ir).map(|(x, y)| x + y).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct ComplexRoot {
    /// alpha(H_m) = i q_m.
    pub q: Vec<Rational>,
    /// Coordinates of i*alpha as a real functional: -q.
    pub fcoords: Vec<Rational>,
    pub compact: bool,
    /// Root vector spanning the (one dimensional) root space.
    pub vector: CVec,
}

pub struct ComplexRootSystem {
    /// The compact Cartan, basis as built by the cascade ([h_k | T_1..T_r]).
    pub t: Subspace,
    /// G = -K restricted to t, positive definite.
    pub gram: QMat,
    pub gram_inv: QMat,
    pub roots: Vec<ComplexRoot>,
    /// Weyl group of the compact subsystem, as matrices acting on f-coords.
    pub wk: Vec<QMat>,
    /// Fixed compact positive system (indices into roots).
    pub delta_c_plus: Vec<usize>,
    pub rho_k: Weight,
    pub hermitian: bool,
    /// Coordinates of Z0 on the t basis (Hermitian case).
    pub z0: Option<Vec<Rational>>,
    /// Holomorphic noncompact positive system (indices into roots).
    pub delta_n_plus: Vec<usize>,
    /// rho of Delta_c+ union Delta_n+ (Hermitian case).
    pub rho_g_holomorphic: Option<Weight>,
}

impl ComplexRootSystem {
    pub fn rank(&self) -> usize {
        self.t.dim()
    }

    /// <w1, w2> through the dual Gram matrix.
    pub fn weight_inner(&self, w1: &Weight, w2: &Weight) -> Rational {
        let gw = self.gram_inv.mul_vec(&w2.0);
        vec_dot(&w1.0, &gw)
    }

    /// <f, i alpha> = -f^T G^{-1} q.
    pub fn pairing(&self, f: &Weight, root: &ComplexRoot) -> Rational {
        let gq = self.gram_inv.mul_vec(&root.q);
        -vec_dot(&f.0, &gq)
    }

    /// 2 <f, i alpha> / <i alpha, i alpha>.
    pub fn coroot_pairing(&self, f: &Weight, root: &ComplexRoot) -> Rational {
        let num = self.pairing(f, root);
        let alpha = Weight(root.fcoords.clone());
        let den = self.weight_inner(&alpha, &alpha);
        rint(2) * num / den
    }

    /// Indices of the positive system selected by a regular functional.
    /// Errors when f is singular (some pairing vanishes).
    pub fn positive_system(&self, f: &Weight) -> Result<Vec<usize>, CRootsError> {
        let mut out = Vec::new();
        for (i, root) in self.roots.iter().enumerate() {
            let v = self.pairing(f, root);
            if v.is_zero() {
                return Err(CRootsError::Verification(format!(
                    "functional is singular: vanishes against root {:?}",
                    root.fcoords.iter().map(|c| c.to_string()).collect::<Vec<_>>()
                )));
            }
            if v.is_positive() {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Half sum of i*alpha over the given roots.
    pub fn rho_of(&self, indices: &[usize]) -> Weight {
        let mut s = zero_vec(self.rank());
        for &i in indices {
            s = vec_add(&s, &self.roots[i].fcoords);
        }
        Weight(vec_scale(&crate::exact::rat(1, 2), &s))
    }

    /// Orbit of a weight under the compact Weyl group, deduplicated.
    pub fn weyl_orbit(&self, w: &Weight) -> Vec<Weight> {
        let mut out: Vec<Weight> = Vec::new();
        for m in &self.wk {
            let img = Weight(m.mul_vec(&w.0));
            if !out.contains(&img) {
                out.push(img);
            }
        }
        out
    }

    /// The element Z_f of t representing f through f(H) = -K(Z_f, H),
    /// in ambient algebra coordinates.
    pub fn weight_vector(&self, f: &Weight) -> Vec<Rational> {
        let z = self.gram_inv.mul_vec(&f.0);
        let mut v = zero_vec(self.t.ambient());
        for (c, b) in z.iter().zip(self.t.basis()) {
            if !c.is_zero() {
                v = vec_add(&v, &vec_scale(c, b));
            }
        }
        v
    }

    /// Extend f on t to a covector on the whole algebra, zero on every root
    /// space component (inner-product extension).
    pub fn extend_weight(&self, alg: &LieAlgebra, f: &Weight) -> Covector {
        let zf = self.weight_vector(f);
        let cov = crate::lie::dual_covector(alg, &zf);
        // The dual covector pairs through -K(zf, theta y); on t that equals
        // -K(zf, y) = f(y).
        for (m, h) in self.t.basis().iter().enumerate() {
            debug_assert_eq!(cov.eval(h), f.0[m]);
        }
        cov
    }

    /// Z0 as an ambient algebra vector (Hermitian case).
    pub fn z0_vector(&self) -> Option<Vec<Rational>> {
        let z = self.z0.as_ref()?;
        let mut v = zero_vec(self.t.ambient());
        for (c, b) in z.iter().zip(self.t.basis()) {
            if !c.is_zero() {
                v = vec_add(&v, &vec_scale(c, b));
            }
        }
        Some(v)
    }

    pub fn compact_roots(&self) -> impl Iterator<Item = &ComplexRoot> {
        self.roots.iter().filter(|r| r.compact)
    }

    pub fn noncompact_roots(&self) -> impl Iterator<Item = &ComplexRoot> {
        self.roots.iter().filter(|r| !r.compact)
    }
}

fn to_gmat(m: &QMat) -> GMat {
    let mut out = GMat::zeros(m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[(i, j)] = gaussian(m[(i, j)].clone(), Rational::zero());
        }
    }
    out
}

/// Candidate imaginary parts q >= 0 for eigenvalues iq of ad(H): read off
/// the rational (and necessarily nonpositive) spectrum of ad(H)^2.
fn imaginary_candidates(alg: &LieAlgebra, h: &[Rational]) -> Result<Vec<Rational>, CRootsError> {
    let ad = alg.ad(h);
    let sq = ad.mul(&ad);
    let parts = crate::exact::eigen::eigen_split(&sq)?;
    let mut out = Vec::new();
    for (mu, _) in parts {
        if mu.is_positive() {
            return Err(CRootsError::Verification(
                "ad(H)^2 has a positive eigenvalue on the compact Cartan".into(),
            ));
        }
        let q = rational_sqrt(&(-mu)).ok_or(CRootsError::NotRationalSpectrum)?;
        if !out.contains(&q) {
            out.push(q);
        }
    }
    Ok(out)
}

struct WeightSpace {
    q: Vec<Rational>,
    basis: Vec<Vec<Gaussian>>,
}

fn split_by(
    alg: &LieAlgebra,
    h: &[Rational],
    spaces: Vec<WeightSpace>,
) -> Result<Vec<WeightSpace>, CRootsError> {
    let n = alg.dim();
    let ad = to_gmat(&alg.ad(h));
    let candidates = imaginary_candidates(alg, h)?;
    let mut next = Vec::new();
    for ws in spaces {
        let d = ws.basis.len();
        if d == 0 {
            continue;
        }
        let b = GMat::from_cols(ws.basis.clone(), n);
        let solver = LinearSolver::new(&b);
        // Restrict ad(h) to the space.
        let mut restricted = GMat::zeros(d, d);
        for (j, v) in ws.basis.iter().enumerate() {
            let img = ad.mul_vec(v);
            let coords = solver.solve(&img).ok_or_else(|| {
                CRootsError::Verification("ad(H) does not preserve a weight space".into())
            })?;
            for (i, c) in coords.into_iter().enumerate() {
                restricted[(i, j)] = c;
            }
        }
        let mut found = 0usize;
        let mut signed: Vec<Rational> = Vec::new();
        for q in &candidates {
            signed.push(q.clone());
            if !q.is_zero() {
                signed.push(-q.clone());
            }
        }
        for q in signed {
            let mut shifted = restricted.clone();
            let iq = gaussian(Rational::zero(), q.clone());
            for i in 0..d {
                shifted[(i, i)] = &shifted[(i, i)] - &iq;
            }
            let ker = shifted.kernel();
            if ker.is_empty() {
                continue;
            }
            found += ker.len();
            let lifted: Vec<Vec<Gaussian>> = ker
                .iter()
                .map(|c| {
                    let mut v = vec![Gaussian::zero(); n];
                    for (k, b) in ws.basis.iter().enumerate() {
                        if !c[k].is_zero() {
                            for idx in 0..n {
                                v[idx] = &v[idx] + &(&c[k] * &b[idx]);
                            }
                        }
                    }
                    v
                })
                .collect();
            let mut qv = ws.q.clone();
            qv.push(q);
            next.push(WeightSpace {
                q: qv,
                basis: lifted,
            });
        }
        if found != d {
            return Err(CRootsError::Verification(format!(
                "weight split found {found} of {d} dimensions"
            )));
        }
    }
    Ok(next)
}

/// Build the complex root system of (g_C, t_C) from the cascade's compact
/// Cartan. Fails when the algebra has no compact Cartan.
pub fn complex_root_system(
    form: &RealForm,
    cascade: &Cascade,
) -> Result<ComplexRootSystem, CRootsError> {
    let alg = &form.algebra;
    let n = alg.dim();
    let t = cascade
        .t
        .clone()
        .ok_or_else(|| {
            CRootsError::NoCompactCartan(
                cascade
                    .no_compact_cartan
                    .clone()
                    .unwrap_or_else(|| "unknown".into()),
            )
        })?;
    let rank = t.dim();
    // Gram matrix of -K on t.
    let kg = alg.restricted_killing_gram(&t);
    let mut gram = QMat::zeros(rank, rank);
    for i in 0..rank {
        for j in 0..rank {
            gram[(i, j)] = -kg[(i, j)].clone();
        }
    }
    let gram_inv = gram.inverse().ok_or_else(|| {
        CRootsError::Verification("Gram matrix on t is singular".into())
    })?;
    {
        let (pos, _, zero) = crate::exact::mat::symmetric_signature(&gram);
        if pos != rank || zero != 0 {
            return Err(CRootsError::Verification(
                "-K is not positive definite on t".into(),
            ));
        }
    }

    // Joint weight split of the complexified algebra.
    let mut spaces = vec![WeightSpace {
        q: Vec::new(),
        basis: (0..n)
            .map(|i| {
                let mut v = vec![Gaussian::zero(); n];
                v[i] = gaussian(rint(1), Rational::zero());
                v
            })
            .collect(),
    }];
    for h in t.basis() {
        spaces = split_by(alg, h, spaces)?;
    }
    let mut roots = Vec::new();
    let mut zero_dim = 0usize;
    for ws in spaces {
        if ws.q.iter().all(|c| c.is_zero()) {
            zero_dim += ws.basis.len();
            // The zero weight space must be the complexified t.
            for v in &ws.basis {
                let re: Vec<Rational> = v.iter().map(|g| g.re.clone()).collect();
                let im: Vec<Rational> = v.iter().map(|g| g.im.clone()).collect();
                if !(t.contains(&re) && (vec_is_zero(&im) || t.contains(&im))) {
                    return Err(CRootsError::Verification(
                        "zero weight space is larger than t".into(),
                    ));
                }
            }
            continue;
        }
        if ws.basis.len() != 1 {
            return Err(CRootsError::Verification(format!(
                "root space has dimension {}",
                ws.basis.len()
            )));
        }
        let v = &ws.basis[0];
        let vector = CVec {
            re: v.iter().map(|g| g.re.clone()).collect(),
            im: v.iter().map(|g| g.im.clone()).collect(),
        };
        // theta acts by +-1; read the sign off the real part (or imaginary
        // part when the real part vanishes).
        let tre = alg.theta_apply(&vector.re);
        let tim = alg.theta_apply(&vector.im);
        let compact = if !vec_is_zero(&vector.re) {
            if tre == vector.re && tim == vector.im {
                true
            } else if tre == vector.re.iter().map(|c| -c.clone()).collect::<Vec<_>>()
                && tim == vector.im.iter().map(|c| -c.clone()).collect::<Vec<_>>()
            {
                false
            } else {
                return Err(CRootsError::Verification(
                    "theta does not act by a sign on a root space".into(),
                ));
            }
        } else if tim == vector.im {
            true
        } else if tim == vector.im.iter().map(|c| -c.clone()).collect::<Vec<_>>() {
            false
        } else {
            return Err(CRootsError::Verification(
                "theta does not act by a sign on a root space".into(),
            ));
        };
        let fcoords: Vec<Rational> = ws.q.iter().map(|c| -c.clone()).collect();
        roots.push(ComplexRoot {
            q: ws.q,
            fcoords,
            compact,
            vector,
        });
    }
    if zero_dim != rank {
        return Err(CRootsError::Verification(format!(
            "zero weight space has dimension {zero_dim}, expected {rank}"
        )));
    }
    if roots.len() + rank != n {
        return Err(CRootsError::Verification(
            "root count does not match the dimension".into(),
        ));
    }
    // +- symmetry with matching compactness.
    for root in &roots {
        let negq: Vec<Rational> = root.q.iter().map(|c| -c.clone()).collect();
        let opp = roots.iter().find(|r| r.q == negq).ok_or_else(|| {
            CRootsError::Verification("roots are not symmetric under negation".into())
        })?;
        if opp.compact != root.compact {
            return Err(CRootsError::Verification(
                "opposite roots disagree on compactness".into(),
            ));
        }
    }
    let n_compact = roots.iter().filter(|r| r.compact).count();
    if n_compact != form.k.dim() - rank || roots.len() - n_compact != form.p.dim() {
        return Err(CRootsError::Verification(
            "compact/noncompact root counts do not match dim k and dim p".into(),
        ));
    }

    // Compact Weyl group.
    let wk = compact_weyl_group(&gram, &gram_inv, &roots)?;
    // Fixed compact positive system from a deterministic regular functional.
    let delta_c_plus = fixed_compact_positives(&gram_inv, &roots)?;
    let rho_k = {
        let mut s = zero_vec(rank);
        for &i in &delta_c_plus {
            s = vec_add(&s, &roots[i].fcoords);
        }
        Weight(vec_scale(&crate::exact::rat(1, 2), &s))
    };

    // Hermitian structure: center of k meeting t in a line.
    let mut rows = Vec::new();
    for r in roots.iter().filter(|r| r.compact) {
        rows.push(r.q.clone());
    }
    let zk = if rows.is_empty() {
        // No compact roots: all of t centralizes k.
        Subspace::full(rank)
    } else {
        Subspace::span(rank, QMat::from_rows(rows).kernel())?
    };
    let mut hermitian = false;
    let mut z0 = None;
    let mut delta_n_plus = Vec::new();
    let mut rho_g_holomorphic = None;
    if zk.dim() == 1 {
        let mut z = zk.basis()[0].clone();
        // All noncompact roots must pair with z by the same nonzero absolute
        // value; normalize it to one.
        let vals: Vec<Rational> = roots
            .iter()
            .filter(|r| !r.compact)
            .map(|r| vec_dot(&r.q, &z))
            .collect();
        let ok = !vals.is_empty()
            && vals.iter().all(|v| !v.is_zero())
            && vals.iter().all(|v| v.abs() == vals[0].abs());
        if ok {
            z = vec_scale(&(rint(1) / vals[0].abs()), &z);
            if !crate::realforms::lex_positive(&z) {
                z = vec_scale(&rint(-1), &z);
            }
            hermitian = true;
            for (i, r) in roots.iter().enumerate() {
                if !r.compact && vec_dot(&r.q, &z) == rint(-1) {
                    delta_n_plus.push(i);
                }
            }
            // Verification: Delta_n+ is W_K-stable and p+ is abelian.
            let plus_set: Vec<&Vec<Rational>> =
                delta_n_plus.iter().map(|&i| &roots[i].fcoords).collect();
            for m in &wk {
                for fc in &plus_set {
                    let img = m.mul_vec(fc);
                    if !plus_set.iter().any(|c| **c == img) {
                        return Err(CRootsError::Verification(
                            "Delta_n+ is not stable under the compact Weyl group".into(),
                        ));
                    }
                }
            }
            for &i in &delta_n_plus {
                for &j in &delta_n_plus {
                    let br = complex_bracket(alg, &roots[i].vector, &roots[j].vector);
                    if !br.is_zero() {
                        return Err(CRootsError::Verification(
                            "p+ is not abelian".into(),
                        ));
                    }
                }
            }
            let mut all_plus = delta_c_plus.clone();
            all_plus.extend(delta_n_plus.iter().copied());
            let mut s = zero_vec(rank);
            for &i in &all_plus {
                s = vec_add(&s, &roots[i].fcoords);
            }
            rho_g_holomorphic = Some(Weight(vec_scale(&crate::exact::rat(1, 2), &s)));
            z0 = Some(z);
        }
    }

    Ok(ComplexRootSystem {
        t,
        gram,
        gram_inv,
        roots,
        wk,
        delta_c_plus,
        rho_k,
        hermitian,
        z0,
        delta_n_plus,
        rho_g_holomorphic,
    })
}

fn reflection(gram_inv: &QMat, q: &[Rational]) -> QMat {
    let rank = q.len();
    let gq = gram_inv.mul_vec(q);
    let norm = vec_dot(q, &gq);
    let mut m = QMat::identity(rank);
    let factor = rint(2) / norm;
    for i in 0..rank {
        for j in 0..rank {
            m[(i, j)] = &m[(i, j)] - &(&q[i] * &gq[j] * &factor);
        }
    }
    m
}

fn compact_weyl_group(
    gram: &QMat,
    gram_inv: &QMat,
    roots: &[ComplexRoot],
) -> Result<Vec<QMat>, CRootsError> {
    let rank = gram.nrows();
    let mut gens: Vec<QMat> = Vec::new();
    for r in roots.iter().filter(|r| r.compact) {
        let s = reflection(gram_inv, &r.fcoords);
        // Orthogonality with respect to the dual inner product.
        let lhs = s.transpose().mul(gram_inv).mul(&s);
        if lhs != *gram_inv {
            return Err(CRootsError::Verification(
                "root reflection is not orthogonal".into(),
            ));
        }
        if !gens.contains(&s) {
            gens.push(s);
        }
    }
    let mut group = vec![QMat::identity(rank)];
    let mut frontier = group.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &gens {
                let h = s.mul(g);
                if !group.contains(&h) {
                    group.push(h.clone());
                    next.push(h);
                    if group.len() > 1024 {
                        return Err(CRootsError::Verification(
                            "compact Weyl group exceeded the size bound".into(),
                        ));
                    }
                }
            }
        }
        frontier = next;
    }
    // Each element must permute the root f-coordinate set.
    let all: Vec<&Vec<Rational>> = roots.iter().map(|r| &r.fcoords).collect();
    for g in &group {
        for fc in &all {
            let img = g.mul_vec(fc);
            if !all.iter().any(|c| **c == img) {
                return Err(CRootsError::Verification(
                    "Weyl element does not permute the roots".into(),
                ));
            }
        }
    }
    Ok(group)
}

fn fixed_compact_positives(
    gram_inv: &QMat,
    roots: &[ComplexRoot],
) -> Result<Vec<usize>, CRootsError> {
    let rank = gram_inv.nrows();
    // Deterministic regular functional: geometric coordinates (N^(rank-1),
    // ..., N, 1) with growing N until no compact pairing vanishes.
    for n in 2..64u32 {
        let mut f = Vec::with_capacity(rank);
        let mut c = rint(1);
        for _ in 0..rank {
            f.push(c.clone());
            c = c * rint(n as i64);
        }
        f.reverse();
        let fw = Weight(f);
        let mut ok = true;
        let mut out = Vec::new();
        for (i, r) in roots.iter().enumerate() {
            if !r.compact {
                continue;
            }
            let gq = gram_inv.mul_vec(&r.q);
            let v = -vec_dot(&fw.0, &gq);
            if v.is_zero() {
                ok = false;
                break;
            }
            if v.is_positive() {
                out.push(i);
            }
        }
        if ok {
            return Ok(out);
        }
    }
    Err(CRootsError::Verification(
        "no regular functional found for the compact system".into(),
    ))
}
