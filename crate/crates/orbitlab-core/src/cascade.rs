//! Cascade of strongly orthogonal restricted roots and the induced grading.
//!
//! Starting from the lexicographically highest positive restricted root and
//! repeatedly descending to roots strongly orthogonal to everything chosen so
//! far produces the cascade Upsilon = (beta_1 > ... > beta_r). When r equals
//! the split rank and every cascade root space is one dimensional, the
//! coadjoint action of the solvable group AN has open orbits, with 2^r
//! canonical representatives indexed by sign patterns.
//!
//! The module also builds the grading of n by cascade weight:
//!     n_c  = sum of g_((beta_i - beta_j)/2), i < j
//!     half = sum of g_(beta_i / 2)
//!     n3   = sum of g_((beta_i + beta_j)/2), i <= j   (top, abelian)
//!     n1   = a + n_c,   n2 = half + n3
//! and the compact Cartan subalgebra t = h_k + sum R (X_j + theta X_j).

use crate::exact::{rational_sqrt, rint, vec_add, vec_is_zero, vec_scale, Rational};
use crate::lie::{maximal_abelian_in, LieAlgebra, LieError, Subspace};
use crate::realforms::{RealForm, RestrictedRootSystem};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CascadeError {
    #[error("normalization of the cascade generator for root {0:?} requires an irrational scale")]
    NonSquareNormalization(Vec<String>),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("cascade verification failed: {0}")]
    Verification(String),
}

/// Why the coadjoint orbits of AN cannot be open (when they cannot).
#[derive(Clone, Debug, PartialEq)]
pub enum OpenOrbitObstruction {
    /// The cascade is shorter than the split rank.
    RankDeficit { cascade: usize, split: usize },
    /// Some cascade root space has dimension greater than one.
    RootMultiplicity { coords: Vec<Rational>, dim: usize },
}

/// Position of a positive restricted root relative to the cascade.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootClass {
    /// gamma = beta_j.
    Upsilon(usize),
    /// gamma = (beta_i + beta_j)/2, i < j.
    SumHalf(usize, usize),
    /// gamma = (beta_i - beta_j)/2, i < j.
    DiffHalf(usize, usize),
    /// gamma = beta_j / 2.
    SingleHalf(usize),
}

/// One weight block of n3: the root space of (beta_i + beta_j)/2. Diagonal
/// blocks (i == j) carry the normalized cascade generator as their basis when
/// they are one dimensional.
#[derive(Clone, Debug)]
pub struct N3Block {
    pub i: usize,
    pub j: usize,
    pub space: Subspace,
}

#[derive(Clone, Debug)]
pub struct GradedPieces {
    pub nc: Subspace,
    pub half: Subspace,
    pub n3: Subspace,
    pub n3_blocks: Vec<N3Block>,
    pub n1: Subspace,
    pub n2: Subspace,
}

pub struct Cascade {
    /// Cascade roots, decreasing lexicographic order, as coordinate vectors
    /// on the split torus basis.
    pub upsilon: Vec<Vec<Rational>>,
    /// Normalized generators X_j of the cascade root spaces.
    pub x: Vec<Vec<Rational>>,
    /// theta X_j.
    pub theta_x: Vec<Vec<Rational>>,
    /// Y_j = -[X_j, theta X_j]; beta_k(Y_j) = 2 delta_jk.
    pub y: Vec<Vec<Rational>>,
    /// Obstructions to open AN-orbits; empty means open orbits exist.
    pub obstructions: Vec<OpenOrbitObstruction>,
    /// Class of every positive root, indexed like the positive roots of the
    /// restricted system; None where no cascade pattern matches.
    pub classes: Vec<Option<RootClass>>,
    /// Positive roots that matched no cascade pattern.
    pub unclassified: Vec<Vec<Rational>>,
    /// The grading, present when every positive root was classified.
    pub graded: Option<GradedPieces>,
    /// Maximal abelian subalgebra of the centralizer of the X_j in m.
    pub h_k: Subspace,
    /// Compact Cartan subalgebra, basis ordered [h_k..., T_1..T_r], when the
    /// algebra has one.
    pub t: Option<Subspace>,
    /// Reason t is absent, when it is.
    pub no_compact_cartan: Option<String>,
    /// Absolute rank, read off a maximally split Cartan subalgebra.
    pub rank: usize,
}

impl Cascade {
    pub fn cascade_rank(&self) -> usize {
        self.upsilon.len()
    }

    pub fn has_open_orbits(&self) -> bool {
        self.obstructions.is_empty()
    }

    /// The 2^r canonical elements E_eps = sum_j eps_j X_j, paired with their
    /// sign patterns. Only meaningful when open orbits exist.
    pub fn representatives(&self) -> Vec<(Vec<i8>, Vec<Rational>)> {
        let r = self.x.len();
        let n = if r == 0 { 0 } else { self.x[0].len() };
        let mut out = Vec::with_capacity(1 << r);
        for mask in 0..(1u32 << r) {
            let mut signs = Vec::with_capacity(r);
            let mut v = crate::exact::zero_vec(n);
            for (j, xj) in self.x.iter().enumerate() {
                let s: i8 = if mask & (1 << j) == 0 { 1 } else { -1 };
                signs.push(s);
                let term = vec_scale(&rint(s as i64), xj);
                v = vec_add(&v, &term);
            }
            out.push((signs, v));
        }
        out
    }
}

fn coords_eq(a: &[Rational], b: &[Rational]) -> bool {
    a == b
}

fn half_sum(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let two = rint(2);
    a.iter().zip(b).map(|(x, y)| (x + y) / &two).collect()
}

fn half_diff(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let two = rint(2);
    a.iter().zip(b).map(|(x, y)| (x - y) / &two).collect()
}

fn is_root(sys: &RestrictedRootSystem, coords: &[Rational]) -> bool {
    sys.find_root(coords).is_some()
}

/// gamma strongly orthogonal to beta: neither sum nor difference is a root.
fn strongly_orthogonal(sys: &RestrictedRootSystem, beta: &[Rational], gamma: &[Rational]) -> bool {
    let sum: Vec<Rational> = beta.iter().zip(gamma).map(|(a, b)| a + b).collect();
    let diff: Vec<Rational> = beta.iter().zip(gamma).map(|(a, b)| a - b).collect();
    !is_root(sys, &sum) && !is_root(sys, &diff)
}

/// Build the cascade and everything derived from it. `generator_signs`, when
/// given, flips the raw generator of the j-th cascade root space; results
/// must not depend on it except for the signs of the X_j themselves (the set
/// of canonical representatives is invariant). It exists so tests can pin
/// that invariance down.
pub fn build_cascade_with_signs(
    form: &RealForm,
    sys: &RestrictedRootSystem,
    generator_signs: Option<&[bool]>,
) -> Result<Cascade, CascadeError> {
    let alg = &form.algebra;
    let n = alg.dim();
    // Positive roots in decreasing lex order (as stored).
    let positives: Vec<&crate::realforms::RestrictedRoot> =
        sys.roots.iter().filter(|r| r.is_positive()).collect();
    // Greedy cascade.
    let mut upsilon_idx: Vec<usize> = Vec::new();
    for (i, cand) in positives.iter().enumerate() {
        if upsilon_idx
            .iter()
            .all(|&k| strongly_orthogonal(sys, &positives[k].coords, &cand.coords))
        {
            upsilon_idx.push(i);
        }
    }
    let upsilon: Vec<Vec<Rational>> = upsilon_idx
        .iter()
        .map(|&k| positives[k].coords.clone())
        .collect();
    let r = upsilon.len();

    // Open orbit criterion.
    let mut obstructions = Vec::new();
    if r != sys.rank() {
        obstructions.push(OpenOrbitObstruction::RankDeficit {
            cascade: r,
            split: sys.rank(),
        });
    }
    for &k in &upsilon_idx {
        let root = positives[k];
        if root.multiplicity() != 1 {
            obstructions.push(OpenOrbitObstruction::RootMultiplicity {
                coords: root.coords.clone(),
                dim: root.multiplicity(),
            });
        }
    }

    // Normalized generators. The Gram matrix of the Killing form on a gives
    // the dual vector H_beta and the squared length of each cascade root.
    let gram_a = alg.restricted_killing_gram(&sys.a);
    let gram_solver = crate::exact::mat::LinearSolver::new(&gram_a);
    let mut x = Vec::with_capacity(r);
    let mut theta_x = Vec::with_capacity(r);
    let mut y = Vec::with_capacity(r);
    for (j, &k) in upsilon_idx.iter().enumerate() {
        let root = positives[k];
        let mut raw = root.space.basis()[0].clone();
        if let Some(signs) = generator_signs {
            if signs.get(j).copied().unwrap_or(false) {
                raw = vec_scale(&rint(-1), &raw);
            }
        }
        let h_coords = gram_solver.solve(&root.coords).ok_or_else(|| {
            CascadeError::Verification("Killing gram on a is singular".into())
        })?;
        // <beta, beta> = beta(H_beta) = coords . h_coords.
        let len2 = crate::exact::vec_dot(&root.coords, &h_coords);
        let c = alg.killing(&raw, &alg.theta_apply(&raw));
        // Want K(tX, theta tX) = -2 / <beta, beta>, so t^2 = -2 / (len2 c).
        let t2 = -rint(2) / (&len2 * &c);
        let t = rational_sqrt(&t2).ok_or_else(|| {
            CascadeError::NonSquareNormalization(
                root.coords.iter().map(|c| c.to_string()).collect(),
            )
        })?;
        let xj = vec_scale(&t, &raw);
        let txj = alg.theta_apply(&xj);
        let yj: Vec<Rational> = alg
            .bracket(&xj, &txj)
            .iter()
            .map(|v| -v.clone())
            .collect();
        x.push(xj);
        theta_x.push(txj);
        y.push(yj);
    }
    // Sanity: beta_k(Y_j) = 2 delta_jk, and Y_j really lies in a.
    for (j, yj) in y.iter().enumerate() {
        let a_coords = sys.a.coords_of(yj).ok_or_else(|| {
            CascadeError::Verification("Y_j does not lie in the split torus".into())
        })?;
        for (k, beta) in upsilon.iter().enumerate() {
            let val = crate::exact::vec_dot(beta, &a_coords);
            let expected = if j == k { rint(2) } else { rint(0) };
            if val != expected {
                return Err(CascadeError::Verification(format!(
                    "beta_{k}(Y_{j}) = {val}, expected {expected}"
                )));
            }
        }
    }

    // Classify every positive root against the cascade patterns.
    let mut classes: Vec<Option<RootClass>> = Vec::with_capacity(positives.len());
    let mut unclassified = Vec::new();
    for root in &positives {
        let mut class = None;
        'outer: for i in 0..r {
            if coords_eq(&root.coords, &upsilon[i]) {
                class = Some(RootClass::Upsilon(i));
                break;
            }
            for j in i + 1..r {
                if coords_eq(&root.coords, &half_sum(&upsilon[i], &upsilon[j])) {
                    class = Some(RootClass::SumHalf(i, j));
                    break 'outer;
                }
                if coords_eq(&root.coords, &half_diff(&upsilon[i], &upsilon[j])) {
                    class = Some(RootClass::DiffHalf(i, j));
                    break 'outer;
                }
            }
            let twice: Vec<Rational> = root.coords.iter().map(|c| c * &rint(2)).collect();
            if coords_eq(&twice, &upsilon[i]) {
                class = Some(RootClass::SingleHalf(i));
                break;
            }
        }
        if class.is_none() {
            unclassified.push(root.coords.clone());
        }
        classes.push(class);
    }

    let graded = if unclassified.is_empty() {
        Some(build_graded(alg, sys, &positives, &classes, &upsilon, &x, r)?)
    } else {
        None
    };

    // Compact Cartan. First the absolute rank from a maximally split Cartan
    // h = a + (maximal abelian in m), which must be self-centralizing.
    let m_cartan = if sys.m.dim() == 0 {
        Subspace::zero(n)
    } else {
        maximal_abelian_in(alg, &sys.m)?
    };
    let split_cartan = sys.a.sum(&m_cartan);
    if !alg.centralizer(&split_cartan).same_span(&split_cartan) {
        return Err(CascadeError::Verification(
            "a + (maximal abelian in m) is not self-centralizing".into(),
        ));
    }
    let rank = split_cartan.dim();
    // h_k: maximal abelian in the centralizer of all X_j inside m.
    let mut z_m = sys.m.clone();
    for xj in &x {
        let fixed: Vec<Vec<Rational>> = z_m
            .basis()
            .iter()
            .cloned()
            .collect();
        // Solve for combinations of the current basis commuting with X_j.
        if z_m.dim() == 0 {
            break;
        }
        let mut cols = Vec::new();
        for b in &fixed {
            cols.push(alg.bracket(b, xj));
        }
        let mat = crate::exact::mat::QMat::from_cols(cols, n);
        let ker = mat.kernel();
        let vecs: Vec<Vec<Rational>> = ker
            .iter()
            .map(|c| {
                let mut v = crate::exact::zero_vec(n);
                for (i, b) in fixed.iter().enumerate() {
                    if !c[i].is_zero() {
                        v = vec_add(&v, &vec_scale(&c[i], b));
                    }
                }
                v
            })
            .collect();
        z_m = Subspace::span(n, vecs)?;
    }
    let h_k = if z_m.dim() == 0 {
        Subspace::zero(n)
    } else {
        maximal_abelian_in(alg, &z_m)?
    };
    let mut t_basis = h_k.basis().to_vec();
    for (xj, txj) in x.iter().zip(&theta_x) {
        t_basis.push(vec_add(xj, txj));
    }
    let t_candidate = Subspace::from_basis(n, t_basis)?;
    if !t_candidate.is_abelian(alg) {
        return Err(CascadeError::Verification(
            "candidate compact Cartan is not abelian".into(),
        ));
    }
    if !form.k.contains_subspace(&t_candidate) {
        return Err(CascadeError::Verification(
            "candidate compact Cartan is not inside k".into(),
        ));
    }
    let self_centralizing = alg.centralizer(&t_candidate).same_span(&t_candidate);
    let (t, no_compact_cartan) = if t_candidate.dim() == rank && self_centralizing {
        (Some(t_candidate), None)
    } else {
        let why = if t_candidate.dim() < rank {
            format!(
                "torus in k has dimension {} < rank {}",
                t_candidate.dim(),
                rank
            )
        } else {
            "torus in k is not self-centralizing".into()
        };
        (None, Some(why))
    };

    Ok(Cascade {
        upsilon,
        x,
        theta_x,
        y,
        obstructions,
        classes,
        unclassified,
        graded,
        h_k,
        t,
        no_compact_cartan,
        rank,
    })
}

pub fn build_cascade(
    form: &RealForm,
    sys: &RestrictedRootSystem,
) -> Result<Cascade, CascadeError> {
    build_cascade_with_signs(form, sys, None)
}

fn build_graded(
    alg: &LieAlgebra,
    sys: &RestrictedRootSystem,
    positives: &[&crate::realforms::RestrictedRoot],
    classes: &[Option<RootClass>],
    upsilon: &[Vec<Rational>],
    x: &[Vec<Rational>],
    r: usize,
) -> Result<GradedPieces, CascadeError> {
    let n = alg.dim();
    let mut nc_vecs = Vec::new();
    let mut half_vecs = Vec::new();
    // n3 blocks in lexicographic (i, j) order.
    let mut blocks: Vec<N3Block> = Vec::new();
    for i in 0..r {
        for j in i..r {
            let mut space_vecs: Vec<Vec<Rational>> = Vec::new();
            if i == j {
                let root = positives
                    .iter()
                    .find(|root| coords_eq(&root.coords, &upsilon[i]))
                    .expect("cascade root is positive");
                if root.multiplicity() == 1 {
                    space_vecs.push(x[i].clone());
                } else {
                    space_vecs.extend(root.space.basis().iter().cloned());
                }
            } else {
                let target = half_sum(&upsilon[i], &upsilon[j]);
                if let Some(root) = sys.find_root(&target) {
                    space_vecs.extend(root.space.basis().iter().cloned());
                }
            }
            if !space_vecs.is_empty() {
                blocks.push(N3Block {
                    i,
                    j,
                    space: Subspace::from_basis(n, space_vecs)?,
                });
            }
        }
    }
    for (root, class) in positives.iter().zip(classes) {
        match class {
            Some(RootClass::DiffHalf(_, _)) => {
                nc_vecs.extend(root.space.basis().iter().cloned())
            }
            Some(RootClass::SingleHalf(_)) => {
                half_vecs.extend(root.space.basis().iter().cloned())
            }
            _ => {}
        }
    }
    let nc = Subspace::from_basis(n, nc_vecs)?;
    let half = Subspace::from_basis(n, half_vecs)?;
    let mut n3_vecs = Vec::new();
    for b in &blocks {
        n3_vecs.extend(b.space.basis().iter().cloned());
    }
    let n3 = Subspace::from_basis(n, n3_vecs)?;
    let n1 = sys.a.sum(&nc);
    let n2 = half.sum(&n3);
    Ok(GradedPieces {
        nc,
        half,
        n3,
        n3_blocks: blocks,
        n1,
        n2,
    })
}

/// Structural facts behind the normal form analysis on n3*: which hold and
/// which fail, with human-readable reasons.
#[derive(Debug)]
pub struct HypothesisReport {
    pub open_orbit: bool,
    pub all_classified: bool,
    pub failures: Vec<String>,
}

impl HypothesisReport {
    pub fn satisfied(&self) -> bool {
        self.open_orbit && self.all_classified && self.failures.is_empty()
    }
}

/// Check the grading identities that the open-orbit normal form relies on.
pub fn verify_hypotheses(
    form: &RealForm,
    sys: &RestrictedRootSystem,
    cascade: &Cascade,
) -> HypothesisReport {
    let alg = &form.algebra;
    let mut failures = Vec::new();
    let open_orbit = cascade.has_open_orbits();
    if !open_orbit {
        for o in &cascade.obstructions {
            match o {
                OpenOrbitObstruction::RankDeficit { cascade, split } => failures.push(format!(
                    "cascade length {cascade} is less than the split rank {split}"
                )),
                OpenOrbitObstruction::RootMultiplicity { coords, dim } => failures.push(format!(
                    "cascade root {:?} has multiplicity {dim}",
                    coords.iter().map(|c| c.to_string()).collect::<Vec<_>>()
                )),
            }
        }
    }
    let all_classified = cascade.unclassified.is_empty();
    if !all_classified {
        failures.push(format!(
            "{} positive roots match no cascade pattern",
            cascade.unclassified.len()
        ));
    }
    if let Some(g) = &cascade.graded {
        let mut check = |cond: bool, msg: &str| {
            if !cond {
                failures.push(msg.to_string());
            }
        };
        check(g.n3.is_abelian(alg), "n3 is not abelian");
        let mut n2_n3_zero = true;
        for a in g.n2.basis() {
            for b in g.n3.basis() {
                if !vec_is_zero(&alg.bracket(a, b)) {
                    n2_n3_zero = false;
                }
            }
        }
        check(n2_n3_zero, "[n2, n3] is nonzero");
        let mut n2_sq_in_n3 = true;
        for a in g.n2.basis() {
            for b in g.n2.basis() {
                if !g.n3.contains(&alg.bracket(a, b)) {
                    n2_sq_in_n3 = false;
                }
            }
        }
        check(n2_sq_in_n3, "[n2, n2] escapes n3");
        check(g.n1.is_subalgebra(alg), "n1 = a + nc is not a subalgebra");
        let mut n1_acts = true;
        for a in g.n1.basis() {
            for b in g.n2.basis() {
                if !g.n2.contains(&alg.bracket(a, b)) {
                    n1_acts = false;
                }
            }
            for b in g.n3.basis() {
                if !g.n3.contains(&alg.bracket(a, b)) {
                    n1_acts = false;
                }
            }
        }
        check(n1_acts, "n1 does not preserve the grading");
        let n_dim: usize = sys
            .roots
            .iter()
            .filter(|r| r.is_positive())
            .map(|r| r.multiplicity())
            .sum();
        check(
            g.nc.dim() + g.half.dim() + g.n3.dim() == n_dim,
            "graded pieces do not fill n",
        );
    }
    HypothesisReport {
        open_orbit,
        all_classified,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realforms::{build_real_form, restricted_root_system, RealFormSpec};

    fn setup(family: &str, params: &[usize]) -> (RealForm, RestrictedRootSystem) {
        let spec = RealFormSpec::parse(family, params).unwrap();
        let form = build_real_form(&spec).unwrap();
        let sys = restricted_root_system(&form).unwrap();
        (form, sys)
    }

    fn coords_i64(v: &[Rational]) -> Vec<i64> {
        v.iter()
            .map(|c| {
                assert!(c.is_integer());
                i64::try_from(c.numer().clone()).unwrap()
            })
            .collect()
    }

    #[test]
    fn su11_cascade() {
        let (form, sys) = setup("su", &[1, 1]);
        let c = build_cascade(&form, &sys).unwrap();
        assert_eq!(c.cascade_rank(), 1);
        assert_eq!(coords_i64(&c.upsilon[0]), vec![2]);
        assert!(c.has_open_orbits());
        assert_eq!(c.representatives().len(), 2);
        let rep = verify_hypotheses(&form, &sys, &c);
        assert!(rep.satisfied(), "failures: {:?}", rep.failures);
        // Compact Cartan is one dimensional (rank 1).
        assert_eq!(c.rank, 1);
        let t = c.t.as_ref().unwrap();
        assert_eq!(t.dim(), 1);
        assert!(form.algebra.is_compact_subalgebra(t).unwrap());
    }

    #[test]
    fn sp4_cascade_and_grading() {
        let (form, sys) = setup("sp", &[2]);
        let c = build_cascade(&form, &sys).unwrap();
        assert_eq!(c.cascade_rank(), 2);
        assert_eq!(coords_i64(&c.upsilon[0]), vec![2, 0]);
        assert_eq!(coords_i64(&c.upsilon[1]), vec![0, 2]);
        assert!(c.has_open_orbits());
        let g = c.graded.as_ref().unwrap();
        assert_eq!(g.nc.dim(), 1, "g_(e1-e2)");
        assert_eq!(g.half.dim(), 0);
        assert_eq!(g.n3.dim(), 3, "g_(2e1) + g_(e1+e2) + g_(2e2)");
        assert_eq!(g.n1.dim(), 3);
        assert_eq!(g.n2.dim(), 3);
        assert_eq!(g.n3_blocks.len(), 3);
        let rep = verify_hypotheses(&form, &sys, &c);
        assert!(rep.satisfied(), "failures: {:?}", rep.failures);
        assert_eq!(c.rank, 2);
        assert_eq!(c.t.as_ref().unwrap().dim(), 2);
        assert_eq!(c.h_k.dim(), 0);
        assert_eq!(c.representatives().len(), 4);
    }

    #[test]
    fn su21_half_roots() {
        let (form, sys) = setup("su", &[2, 1]);
        let c = build_cascade(&form, &sys).unwrap();
        assert_eq!(c.cascade_rank(), 1);
        assert!(c.has_open_orbits());
        let g = c.graded.as_ref().unwrap();
        assert_eq!(g.nc.dim(), 0);
        assert_eq!(g.half.dim(), 2, "g_(e) has multiplicity 2");
        assert_eq!(g.n3.dim(), 1);
        let rep = verify_hypotheses(&form, &sys, &c);
        assert!(rep.satisfied(), "failures: {:?}", rep.failures);
        // rank 2: the compact Cartan is h_k (dim 1) + R T_1.
        assert_eq!(c.rank, 2);
        assert_eq!(c.h_k.dim(), 1);
        assert_eq!(c.t.as_ref().unwrap().dim(), 2);
    }

    #[test]
    fn so24_cascade_uses_b2_pairs() {
        let (form, sys) = setup("so", &[2, 4]);
        let c = build_cascade(&form, &sys).unwrap();
        assert_eq!(c.cascade_rank(), 2);
        assert_eq!(coords_i64(&c.upsilon[0]), vec![1, 1]);
        assert_eq!(coords_i64(&c.upsilon[1]), vec![1, -1]);
        assert!(c.has_open_orbits());
        let g = c.graded.as_ref().unwrap();
        // e2 = (beta1 - beta2)/2 with multiplicity 2; e1 = (beta1 + beta2)/2.
        assert_eq!(g.nc.dim(), 2);
        assert_eq!(g.half.dim(), 0);
        assert_eq!(g.n3.dim(), 4);
        let rep = verify_hypotheses(&form, &sys, &c);
        assert!(rep.satisfied(), "failures: {:?}", rep.failures);
        assert_eq!(c.rank, 3);
        assert_eq!(c.t.as_ref().unwrap().dim(), 3);
    }

    #[test]
    fn so41_has_no_open_orbits_but_compact_cartan() {
        let (form, sys) = setup("so", &[4, 1]);
        let c = build_cascade(&form, &sys).unwrap();
        assert_eq!(c.cascade_rank(), 1);
        assert!(!c.has_open_orbits());
        assert!(matches!(
            c.obstructions[0],
            OpenOrbitObstruction::RootMultiplicity { dim: 3, .. }
        ));
        let rep = verify_hypotheses(&form, &sys, &c);
        assert!(!rep.satisfied());
        assert_eq!(c.rank, 2);
        assert!(c.t.is_some(), "so(4,1) does have a compact Cartan");
        assert_eq!(c.t.as_ref().unwrap().dim(), 2);
    }

    #[test]
    fn so51_has_no_compact_cartan() {
        let (form, sys) = setup("so", &[5, 1]);
        let c = build_cascade(&form, &sys).unwrap();
        assert!(!c.has_open_orbits());
        assert_eq!(c.rank, 3);
        assert!(c.t.is_none());
        assert!(c.no_compact_cartan.as_ref().unwrap().contains("rank"));
    }

    #[test]
    fn generator_sign_flip_preserves_representative_set() {
        let (form, sys) = setup("sp", &[2]);
        let c1 = build_cascade_with_signs(&form, &sys, None).unwrap();
        let c2 = build_cascade_with_signs(&form, &sys, Some(&[true, false])).unwrap();
        assert_eq!(c1.y, c2.y, "Y_j must be independent of generator signs");
        let set1: Vec<Vec<Rational>> =
            c1.representatives().into_iter().map(|(_, v)| v).collect();
        let set2: Vec<Vec<Rational>> =
            c2.representatives().into_iter().map(|(_, v)| v).collect();
        for v in &set2 {
            assert!(set1.contains(v), "representative sets must agree");
        }
    }
}
