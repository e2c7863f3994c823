//! Finite dimensional real Lie algebras as exact structure constant tables.
//!
//! A `LieAlgebra` is a basis e_1..e_n, the rational table c with
//! [e_i, e_j] = sum_k c[i][j][k] e_k, and a Cartan involution theta given as
//! a matrix on the same basis. Construction verifies antisymmetry, the Jacobi
//! identity, that theta is an involutive automorphism, and that the Killing
//! form is nondegenerate; nothing downstream has to re-establish those facts.

use crate::exact::mat::{symmetric_signature, LinearSolver, QMat};
use crate::exact::{rint, vec_is_zero, vec_scale, zero_vec, Rational};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("structure table has wrong shape at ({0}, {1})")]
    TableShape(usize, usize),
    #[error("antisymmetry fails at basis pair ({0}, {1})")]
    Antisymmetry(usize, usize),
    #[error("Jacobi identity fails at basis triple ({0}, {1}, {2})")]
    Jacobi(usize, usize, usize),
    #[error("theta matrix is not an involution")]
    ThetaNotInvolution,
    #[error("theta is not an automorphism at basis pair ({0}, {1})")]
    ThetaNotAutomorphism(usize, usize),
    #[error("Killing form is degenerate (algebra not semisimple)")]
    DegenerateKilling,
    #[error("vector has length {0}, algebra dimension is {1}")]
    BadVectorLength(usize, usize),
    #[error("subspace basis is linearly dependent")]
    DependentBasis,
    #[error("subspace ambient dimension mismatch")]
    AmbientMismatch,
    #[error("cache payload invalid: {0}")]
    BadCache(String),
}

type Sparse = Vec<(usize, Rational)>;

#[derive(Clone)]
pub struct LieAlgebra {
    labels: Vec<String>,
    table: Vec<Vec<Sparse>>,
    theta: QMat,
    killing: QMat,
}

fn to_sparse(v: &[Rational]) -> Sparse {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| (k, x.clone()))
        .collect()
}

fn sparse_to_dense(s: &Sparse, n: usize) -> Vec<Rational> {
    let mut v = zero_vec(n);
    for (k, x) in s {
        v[*k] = x.clone();
    }
    v
}

impl LieAlgebra {
    /// Build and fully verify an algebra from a dense structure table.
    /// `table[i][j]` holds the coordinates of [e_i, e_j].
    pub fn new(
        labels: Vec<String>,
        table: Vec<Vec<Vec<Rational>>>,
        theta: QMat,
    ) -> Result<Self, LieError> {
        let n = labels.len();
        if table.len() != n {
            return Err(LieError::TableShape(table.len(), 0));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(LieError::TableShape(i, row.len()));
            }
            for (j, entry) in row.iter().enumerate() {
                if entry.len() != n {
                    return Err(LieError::TableShape(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..=i {
                for k in 0..n {
                    if table[i][j][k] != -table[j][i][k].clone() {
                        return Err(LieError::Antisymmetry(i, j));
                    }
                }
            }
        }
        let sparse: Vec<Vec<Sparse>> = table
            .iter()
            .map(|row| row.iter().map(|e| to_sparse(e)).collect())
            .collect();
        let alg = LieAlgebra {
            labels,
            table: sparse,
            theta: QMat::identity(n),
            killing: QMat::zeros(n, n),
        };
        // Jacobi on ordered triples (alternation covers the rest).
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut s = alg.bracket(&alg.basis_vector(i), &sparse_to_dense(&alg.table[j][k], n));
                    let t = alg.bracket(&alg.basis_vector(j), &sparse_to_dense(&alg.table[k][i], n));
                    let u = alg.bracket(&alg.basis_vector(k), &sparse_to_dense(&alg.table[i][j], n));
                    for m in 0..n {
                        s[m] = &s[m] + &t[m] + &u[m];
                    }
                    if !vec_is_zero(&s) {
                        return Err(LieError::Jacobi(i, j, k));
                    }
                }
            }
        }
        // theta: involution and automorphism.
        if theta.nrows() != n || theta.ncols() != n {
            return Err(LieError::ThetaNotInvolution);
        }
        if theta.mul(&theta) != QMat::identity(n) {
            return Err(LieError::ThetaNotInvolution);
        }
        for i in 0..n {
            for j in i + 1..n {
                let lhs = theta.mul_vec(&sparse_to_dense(&alg.table[i][j], n));
                let rhs = alg.bracket(&theta.col(i), &theta.col(j));
                if lhs != rhs {
                    return Err(LieError::ThetaNotAutomorphism(i, j));
                }
            }
        }
        // Killing gram, cached once.
        let ads: Vec<QMat> = (0..n).map(|i| alg.ad(&alg.basis_vector(i))).collect();
        let mut killing = QMat::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut tr = Rational::zero();
                for r in 0..n {
                    for c in 0..n {
                        if !ads[i][(r, c)].is_zero() && !ads[j][(c, r)].is_zero() {
                            tr += &ads[i][(r, c)] * &ads[j][(c, r)];
                        }
                    }
                }
                killing[(i, j)] = tr.clone();
                killing[(j, i)] = tr;
            }
        }
        if killing.rank() != n {
            return Err(LieError::DegenerateKilling);
        }
        Ok(LieAlgebra {
            theta,
            killing,
            ..alg
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rational> {
        crate::exact::unit_vec(self.dim(), i)
    }

    /// [x, y] in basis coordinates.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        let mut out = zero_vec(n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi * yj;
                for (k, c) in &self.table[i][j] {
                    out[*k] += c * &f;
                }
            }
        }
        out
    }

    /// Matrix of ad(x): column j holds [x, e_j].
    pub fn ad(&self, x: &[Rational]) -> QMat {
        let n = self.dim();
        let mut m = QMat::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, c) in &self.table[i][j] {
                    m[(*k, j)] = &m[(*k, j)] + &(c * xi);
                }
            }
        }
        m
    }

    pub fn theta(&self) -> &QMat {
        &self.theta
    }

    pub fn theta_apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.theta.mul_vec(x)
    }

    pub fn killing_gram(&self) -> &QMat {
        &self.killing
    }

    /// Killing form K(x, y) = tr(ad x ad y), evaluated through the cached gram.
    pub fn killing(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let kx = self.killing.mul_vec(x);
        crate::exact::vec_dot(&kx, y)
    }

    /// Stabilizer of a covector f under the coadjoint action:
    /// { x : f([x, e_j]) = 0 for all j }.
    pub fn stabilizer(&self, f: &Covector) -> Result<Subspace, LieError> {
        let n = self.dim();
        if f.coords.len() != n {
            return Err(LieError::BadVectorLength(f.coords.len(), n));
        }
        // Row j, column i: f([e_i, e_j]).
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = Rational::zero();
                for (k, c) in &self.table[i][j] {
                    s += c * &f.coords[*k];
                }
                m[(j, i)] = s;
            }
        }
        Subspace::span(n, m.kernel())
    }

    /// Centralizer of a subspace: { x : [x, s] = 0 for all s in the span }.
    pub fn centralizer(&self, s: &Subspace) -> Subspace {
        let n = self.dim();
        if s.dim() == 0 {
            return Subspace::full(n);
        }
        // Stack the maps x -> [x, b] over the basis b; the kernel is the
        // centralizer. [x, b] = -ad(b) x.
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for b in s.basis() {
            let adb = self.ad(b);
            for r in 0..n {
                rows.push(adb.row(r));
            }
        }
        let m = QMat::from_rows(rows);
        Subspace::span(n, m.kernel()).expect("kernel basis is independent")
    }

    /// Center of the algebra.
    pub fn center(&self) -> Subspace {
        self.centralizer(&Subspace::full(self.dim()))
    }

    /// Exact compactness test: s must be a subalgebra and the restricted
    /// Killing form negative definite. The zero subalgebra is compact.
    pub fn is_compact_subalgebra(&self, s: &Subspace) -> Result<bool, LieError> {
        if s.ambient() != self.dim() {
            return Err(LieError::AmbientMismatch);
        }
        if !s.is_subalgebra(self) {
            return Ok(false);
        }
        if s.dim() == 0 {
            return Ok(true);
        }
        let g = self.restricted_killing_gram(s);
        let (pos, neg, zero) = symmetric_signature(&g);
        Ok(pos == 0 && zero == 0 && neg == s.dim())
    }

    /// Gram matrix of the Killing form restricted to a subspace basis.
    pub fn restricted_killing_gram(&self, s: &Subspace) -> QMat {
        let d = s.dim();
        let mut g = QMat::zeros(d, d);
        for i in 0..d {
            let ki = self.killing.mul_vec(&s.basis()[i]);
            for j in i..d {
                let v = crate::exact::vec_dot(&ki, &s.basis()[j]);
                g[(i, j)] = v.clone();
                g[(j, i)] = v;
            }
        }
        g
    }

    /// Serialize the structure table and involution to the cache format.
    pub fn to_cache_json(&self, family_label: &str) -> String {
        let mut records = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                for (k, c) in &self.table[i][j] {
                    records.push(CacheEntry {
                        i,
                        j,
                        k: *k,
                        num: c.numer().to_string(),
                        den: c.denom().to_string(),
                    });
                }
            }
        }
        let mut theta = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let x = &self.theta[(i, j)];
                if !x.is_zero() {
                    theta.push(CacheEntry {
                        i,
                        j,
                        k: 0,
                        num: x.numer().to_string(),
                        den: x.denom().to_string(),
                    });
                }
            }
        }
        let payload = CachePayload {
            schema_version: 1,
            family: family_label.to_string(),
            dim: self.dim(),
            labels: self.labels.clone(),
            structure: records,
            theta,
        };
        serde_json::to_string_pretty(&payload).expect("cache serialization")
    }

    /// Rebuild an algebra from the cache format, re-running all construction
    /// checks. Returns the family label alongside the algebra.
    pub fn from_cache_json(text: &str) -> Result<(Self, String), LieError> {
        let payload: CachePayload =
            serde_json::from_str(text).map_err(|e| LieError::BadCache(e.to_string()))?;
        if payload.schema_version != 1 {
            return Err(LieError::BadCache(format!(
                "unsupported schema_version {}",
                payload.schema_version
            )));
        }
        let n = payload.dim;
        if payload.labels.len() != n {
            return Err(LieError::BadCache("label count != dim".into()));
        }
        let parse = |num: &str, den: &str| -> Result<Rational, LieError> {
            let nu = BigInt::from_str(num).map_err(|e| LieError::BadCache(e.to_string()))?;
            let de = BigInt::from_str(den).map_err(|e| LieError::BadCache(e.to_string()))?;
            if de.is_zero() {
                return Err(LieError::BadCache("zero denominator".into()));
            }
            Ok(Rational::new(nu, de))
        };
        let mut table = vec![vec![zero_vec(n); n]; n];
        for rec in &payload.structure {
            if rec.i >= n || rec.j >= n || rec.k >= n {
                return Err(LieError::BadCache("index out of range".into()));
            }
            let c = parse(&rec.num, &rec.den)?;
            table[rec.i][rec.j][rec.k] = c.clone();
            table[rec.j][rec.i][rec.k] = -c;
        }
        let mut theta = QMat::zeros(n, n);
        for rec in &payload.theta {
            if rec.i >= n || rec.j >= n {
                return Err(LieError::BadCache("theta index out of range".into()));
            }
            theta[(rec.i, rec.j)] = parse(&rec.num, &rec.den)?;
        }
        let alg = LieAlgebra::new(payload.labels, table, theta)?;
        Ok((alg, payload.family))
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    i: usize,
    j: usize,
    k: usize,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct CachePayload {
    schema_version: u32,
    family: String,
    dim: usize,
    labels: Vec<String>,
    structure: Vec<CacheEntry>,
    theta: Vec<CacheEntry>,
}

/// A linear subspace of the algebra, kept as an explicit ordered basis in
/// ambient coordinates. The basis is exactly what the caller supplied (so
/// distinguished vectors keep their identity); independence is verified.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn from_basis(ambient: usize, basis: Vec<Vec<Rational>>) -> Result<Self, LieError> {
        for v in &basis {
            if v.len() != ambient {
                return Err(LieError::AmbientMismatch);
            }
        }
        if !basis.is_empty() {
            let m = QMat::from_rows(basis.clone());
            if m.rank() != basis.len() {
                return Err(LieError::DependentBasis);
            }
        }
        Ok(Subspace { ambient, basis })
    }

    /// Span of arbitrary vectors: dependent generators are dropped in order.
    pub fn span(ambient: usize, vectors: Vec<Vec<Rational>>) -> Result<Self, LieError> {
        let mut kept: Vec<Vec<Rational>> = Vec::new();
        for v in vectors {
            if v.len() != ambient {
                return Err(LieError::AmbientMismatch);
            }
            if vec_is_zero(&v) {
                continue;
            }
            let mut trial = kept.clone();
            trial.push(v.clone());
            if QMat::from_rows(trial).rank() == kept.len() + 1 {
                kept.push(v);
            }
        }
        Ok(Subspace {
            ambient,
            basis: kept,
        })
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| crate::exact::unit_vec(ambient, i)).collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn solver(&self) -> LinearSolver<Rational> {
        LinearSolver::new(&QMat::from_cols(self.basis.clone(), self.ambient))
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coords_of(v).is_some()
    }

    /// Coordinates of v in this basis, if v lies in the span.
    pub fn coords_of(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient, "ambient mismatch");
        if self.basis.is_empty() {
            return if vec_is_zero(v) { Some(Vec::new()) } else { None };
        }
        QMat::from_cols(self.basis.clone(), self.ambient).solve(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn same_span(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        // Null space of [B1 | -B2] glued on coordinates gives the pairs of
        // coefficient vectors with equal image.
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        let mut cols = Vec::new();
        for v in &self.basis {
            cols.push(v.clone());
        }
        for v in &other.basis {
            cols.push(v.iter().map(|x| -x.clone()).collect());
        }
        let m = QMat::from_cols(cols, self.ambient);
        let mut vectors = Vec::new();
        for k in m.kernel() {
            let mut v = zero_vec(self.ambient);
            for (i, b) in self.basis.iter().enumerate() {
                if !k[i].is_zero() {
                    let t = vec_scale(&k[i], b);
                    v = crate::exact::vec_add(&v, &t);
                }
            }
            vectors.push(v);
        }
        Subspace::span(self.ambient, vectors).expect("intersection span")
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.clone());
        Subspace::span(self.ambient, vectors).expect("sum span")
    }

    pub fn is_subalgebra(&self, alg: &LieAlgebra) -> bool {
        for (i, x) in self.basis.iter().enumerate() {
            for y in self.basis.iter().skip(i + 1) {
                if !self.contains(&alg.bracket(x, y)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_abelian(&self, alg: &LieAlgebra) -> bool {
        for (i, x) in self.basis.iter().enumerate() {
            for y in self.basis.iter().skip(i + 1) {
                if !vec_is_zero(&alg.bracket(x, y)) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether [parent, self] is contained in self.
    pub fn is_ideal_in(&self, alg: &LieAlgebra, parent: &Subspace) -> bool {
        for x in parent.basis() {
            for y in &self.basis {
                if !self.contains(&alg.bracket(x, y)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Span of all brackets [x, y] with x in s, y in t.
pub fn bracket_span(alg: &LieAlgebra, s: &Subspace, t: &Subspace) -> Subspace {
    let mut vectors = Vec::new();
    for x in s.basis() {
        for y in t.basis() {
            vectors.push(alg.bracket(x, y));
        }
    }
    Subspace::span(alg.dim(), vectors).expect("bracket span")
}

/// Derived series termination (solvability), exact.
pub fn is_solvable(alg: &LieAlgebra, s: &Subspace) -> bool {
    let mut cur = s.clone();
    loop {
        let next = bracket_span(alg, &cur, &cur);
        if next.dim() == 0 {
            return true;
        }
        if next.dim() >= cur.dim() {
            return false;
        }
        cur = next;
    }
}

/// Lower central series termination (nilpotency), exact.
pub fn is_nilpotent(alg: &LieAlgebra, s: &Subspace) -> bool {
    let mut cur = s.clone();
    for _ in 0..=alg.dim() {
        let next = bracket_span(alg, s, &cur);
        if next.dim() == 0 {
            return true;
        }
        if next.dim() >= cur.dim() {
            return false;
        }
        cur = next;
    }
    false
}

/// Greedy maximal abelian subalgebra inside `within`: basis vectors first,
/// then pairwise sums as a fallback pool. Maximality (self-centralizing
/// inside `within`) is verified; failure is a programming error in the
/// realization tables, reported as DependentBasis-free panic-worthy state.
pub fn maximal_abelian_in(alg: &LieAlgebra, within: &Subspace) -> Result<Subspace, LieError> {
    let mut pool: Vec<Vec<Rational>> = within.basis().to_vec();
    for (i, x) in within.basis().iter().enumerate() {
        for y in within.basis().iter().skip(i + 1) {
            pool.push(crate::exact::vec_add(x, y));
        }
    }
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    for cand in pool {
        if chosen.iter().any(|c| !vec_is_zero(&alg.bracket(c, &cand))) {
            continue;
        }
        let mut trial = chosen.clone();
        trial.push(cand.clone());
        if QMat::from_rows(trial).rank() == chosen.len() + 1 {
            chosen.push(cand);
        }
    }
    let sub = Subspace::span(alg.dim(), chosen)?;
    // Maximal abelian inside `within` iff the centralizer there is itself.
    let z = alg.centralizer(&sub).intersect(within);
    if !z.same_span(&sub) {
        return Err(LieError::BadCache(
            "greedy abelian subalgebra is not maximal (unexpected realization shape)".into(),
        ));
    }
    Ok(sub)
}

/// A covector in the dual basis of an explicit frame (the full algebra basis
/// or a subspace frame, depending on context).
#[derive(Clone, Debug, PartialEq)]
pub struct Covector {
    pub coords: Vec<Rational>,
}

impl Covector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Covector { coords }
    }

    pub fn zero(n: usize) -> Self {
        Covector {
            coords: zero_vec(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        crate::exact::vec_dot(&self.coords, x)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Covector {
            coords: vec_scale(c, &self.coords),
        }
    }

    pub fn add(&self, other: &Covector) -> Self {
        Covector {
            coords: crate::exact::vec_add(&self.coords, &other.coords),
        }
    }

    pub fn neg(&self) -> Self {
        Covector {
            coords: self.coords.iter().map(|x| -x.clone()).collect(),
        }
    }

    /// Restriction to a subspace: values on its basis vectors.
    pub fn restrict(&self, s: &Subspace) -> Covector {
        Covector {
            coords: s.basis().iter().map(|b| self.eval(b)).collect(),
        }
    }
}

/// Covector Killing-dual to x twisted by theta: f(y) = -K(x, theta y).
/// This is the inner-product pairing used for orbit geometry.
pub fn dual_covector(alg: &LieAlgebra, x: &[Rational]) -> Covector {
    let kx = alg.killing_gram().mul_vec(x);
    let coords = alg.theta().transpose().mul_vec(&kx);
    Covector {
        coords: coords.iter().map(|c| -c.clone()).collect(),
    }
}

/// The theta-twisted inner product <x, y> = -K(x, theta y), positive definite
/// on the whole algebra.
pub fn inner(alg: &LieAlgebra, x: &[Rational], y: &[Rational]) -> Rational {
    -alg.killing(x, &alg.theta_apply(y))
}

pub fn rational_from_i64(n: i64) -> Rational {
    rint(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint, unit_vec};
    use num_traits::Signed;

    /// sl(2, R) with basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h,
    /// theta(x) = -x^T realized on this basis as h -> -h, e -> -f, f -> -e.
    fn sl2() -> LieAlgebra {
        let n = 3;
        let mut table = vec![vec![crate::exact::zero_vec(n); n]; n];
        let set = |t: &mut Vec<Vec<Vec<Rational>>>, i: usize, j: usize, v: Vec<(usize, i64)>| {
            for (k, c) in v {
                t[i][j][k] = rint(c);
                t[j][i][k] = rint(-c);
            }
        };
        set(&mut table, 0, 1, vec![(1, 2)]);
        set(&mut table, 0, 2, vec![(2, -2)]);
        set(&mut table, 1, 2, vec![(0, 1)]);
        let mut theta = QMat::zeros(3, 3);
        theta[(0, 0)] = rint(-1);
        theta[(2, 1)] = rint(-1);
        theta[(1, 2)] = rint(-1);
        LieAlgebra::new(
            vec!["h".into(), "e".into(), "f".into()],
            table,
            theta,
        )
        .unwrap()
    }

    #[test]
    fn sl2_brackets_and_killing() {
        let g = sl2();
        let h = g.basis_vector(0);
        let e = g.basis_vector(1);
        let f = g.basis_vector(2);
        assert_eq!(g.bracket(&h, &e), vec![rint(0), rint(2), rint(0)]);
        assert_eq!(g.bracket(&e, &f), h);
        // K(h, h) = 8 in sl(2).
        assert_eq!(g.killing(&h, &h), rint(8));
        assert_eq!(g.killing(&e, &f), rint(4));
        assert_eq!(g.killing(&e, &e), rint(0));
    }

    #[test]
    fn killing_is_invariant_on_sl2() {
        let g = sl2();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let z = g.basis_vector(i);
                    let x = g.basis_vector(j);
                    let y = g.basis_vector(k);
                    let lhs = g.killing(&g.bracket(&z, &x), &y);
                    let rhs = g.killing(&x, &g.bracket(&z, &y));
                    assert!((lhs + rhs).is_zero(), "invariance fails at {i},{j},{k}");
                }
            }
        }
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        let n = 3;
        let mut table = vec![vec![crate::exact::zero_vec(n); n]; n];
        // [e0,e1] = e2, [e1,e2] = e0, [e2,e0] = e0: fails Jacobi.
        table[0][1][2] = rint(1);
        table[1][0][2] = rint(-1);
        table[1][2][0] = rint(1);
        table[2][1][0] = rint(-1);
        table[2][0][0] = rint(1);
        table[0][2][0] = rint(-1);
        let r = LieAlgebra::new(
            vec!["a".into(), "b".into(), "c".into()],
            table,
            QMat::identity(3),
        );
        assert!(matches!(r, Err(LieError::Jacobi(_, _, _)) | Err(LieError::DegenerateKilling)));
    }

    #[test]
    fn stabilizer_of_dual_of_compact_generator() {
        let g = sl2();
        // u = e - f spans the compact direction; f_u = -K(., theta u).
        let mut u = unit_vec(3, 1);
        u[2] = rint(-1);
        let fu = dual_covector(&g, &u);
        let stab = g.stabilizer(&fu).unwrap();
        assert_eq!(stab.dim(), 1);
        assert!(stab.contains(&u));
        // And the stabilizer is compact: Killing negative definite on it.
        assert!(g.is_compact_subalgebra(&stab).unwrap());
    }

    #[test]
    fn stabilizer_of_zero_is_everything() {
        let g = sl2();
        let st = g.stabilizer(&Covector::zero(3)).unwrap();
        assert_eq!(st.dim(), 3);
    }

    #[test]
    fn subspace_operations() {
        let g = sl2();
        let e = Subspace::from_basis(3, vec![g.basis_vector(1)]).unwrap();
        let h_e = Subspace::from_basis(3, vec![g.basis_vector(0), g.basis_vector(1)]).unwrap();
        assert!(h_e.is_subalgebra(&g));
        assert!(!h_e.is_abelian(&g));
        assert!(e.is_ideal_in(&g, &h_e));
        assert!(is_solvable(&g, &h_e));
        assert!(!is_solvable(&g, &Subspace::full(3)));
        assert!(is_nilpotent(&g, &e));
        let i = h_e.intersect(&e);
        assert!(i.same_span(&e));
        assert_eq!(h_e.sum(&e).dim(), 2);
    }

    #[test]
    fn dependent_basis_rejected() {
        let v = vec![rint(1), rint(2), rint(0)];
        let w = vec![rint(2), rint(4), rint(0)];
        assert!(matches!(
            Subspace::from_basis(3, vec![v, w]),
            Err(LieError::DependentBasis)
        ));
    }

    #[test]
    fn compactness_of_split_directions() {
        let g = sl2();
        // span(h) is a subalgebra with K(h,h) = 8 > 0: not compact.
        let h = Subspace::from_basis(3, vec![g.basis_vector(0)]).unwrap();
        assert!(!g.is_compact_subalgebra(&h).unwrap());
        assert!(g.is_compact_subalgebra(&Subspace::zero(3)).unwrap());
    }

    #[test]
    fn cache_round_trip_is_bit_exact() {
        let g = sl2();
        let json = g.to_cache_json("sl2-test");
        let (g2, label) = LieAlgebra::from_cache_json(&json).unwrap();
        assert_eq!(label, "sl2-test");
        let json2 = g2.to_cache_json("sl2-test");
        assert_eq!(json, json2, "cache serialization must be stable");
        assert_eq!(g2.killing(&g2.basis_vector(0), &g2.basis_vector(0)), rint(8));
    }

    #[test]
    fn maximal_abelian_in_full_sl2() {
        let g = sl2();
        let m = maximal_abelian_in(&g, &Subspace::full(3)).unwrap();
        assert_eq!(m.dim(), 1);
    }

    #[test]
    fn inner_product_is_positive_definite_on_sl2() {
        let g = sl2();
        for i in 0..3 {
            let v = g.basis_vector(i);
            assert!(inner(&g, &v, &v).is_positive());
        }
        let x = vec![rat(1, 2), rint(-3), rat(2, 7)];
        assert!(inner(&g, &x, &x).is_positive());
    }
}
