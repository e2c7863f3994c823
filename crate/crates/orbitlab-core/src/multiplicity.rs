//! Multiplicity bookkeeping for holomorphic orbit functionals.
//!
//! For a regular functional `lambda` on the compact Cartan the module
//! computes the chamber data it determines (positive system, half sums,
//! the shifted parameters `L = lambda + rho_G - 2 rho_K` and
//! `L' = lambda - rho_K`), the Weyl dimensions of the compact-group
//! representations with those highest weights, and the exact Liouville
//! volume of the compact coadjoint orbit. The three numbers must agree;
//! [`dimension_chain_check`] asserts the identity and returns them.
//!
//! When the compact positive system has a single root the flag orbit is a
//! two-sphere, and [`mc_sphere_check`] re-derives the volume by Monte Carlo
//! integration in an explicit chart as an independent floating-point
//! cross-check. Everything else in the module is exact.

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex_roots::{ComplexRootSystem, Weight};
use crate::exact::Rational;
use crate::orbit::{
    h_covector, is_holomorphic, is_strongly_elliptic_weight, OrbitEngine, OrbitError,
    SignatureOutcome,
};

#[derive(Debug, Error)]
pub enum MultiplicityError {
    #[error("functional is singular: pairing with root {0} vanishes")]
    NotRegular(String),
    #[error("highest weight is not dominant: pairing with compact root {0} is negative")]
    NonDominant(String),
    #[error("multiplicity chain broke: {0}")]
    ChainMismatch(String),
    #[error("functional is not holomorphic, report undefined")]
    NotHolomorphic,
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// Chamber data of a regular functional on the compact Cartan.
pub struct BlattnerData {
    pub lambda: Weight,
    /// Root indices with positive pairing against lambda.
    pub delta_plus: Vec<usize>,
    pub delta_c_plus: Vec<usize>,
    pub delta_n_plus: Vec<usize>,
    pub rho_g: Weight,
    pub rho_k: Weight,
    pub rho_n: Weight,
    /// lambda + rho_g - 2 rho_k.
    pub lambda_cap: Weight,
    /// lambda - rho_k.
    pub lambda_prime: Weight,
    /// Whether every coroot pairing of lambda is an integer.
    pub integral: bool,
}

/// Chamber decomposition and the two shifted parameters of a regular
/// functional. The positive system is the one lambda itself selects, not a
/// fixed reference chamber.
pub fn blattner(
    croots: &ComplexRootSystem,
    lambda: &Weight,
) -> Result<BlattnerData, MultiplicityError> {
    let mut delta_plus = Vec::new();
    let mut delta_c_plus = Vec::new();
    let mut delta_n_plus = Vec::new();
    let mut integral = true;
    for (idx, root) in croots.roots.iter().enumerate() {
        let p = croots.pairing(lambda, root);
        if p.is_zero() {
            return Err(MultiplicityError::NotRegular(format!("{:?}", root.fcoords)));
        }
        if !croots.coroot_pairing(lambda, root).is_integer() {
            integral = false;
        }
        if p.is_positive() {
            delta_plus.push(idx);
            if root.compact {
                delta_c_plus.push(idx);
            } else {
                delta_n_plus.push(idx);
            }
        }
    }
    let rho_g = croots.rho_of(&delta_plus);
    let rho_k = croots.rho_of(&delta_c_plus);
    let rho_n = croots.rho_of(&delta_n_plus);
    let check = rho_k.add(&rho_n).sub(&rho_g);
    if check.0.iter().any(|c| !c.is_zero()) {
        return Err(MultiplicityError::ChainMismatch(
            "rho_g != rho_k + rho_n".into(),
        ));
    }
    let lambda_cap = lambda.add(&rho_g).sub(&rho_k).sub(&rho_k);
    let lambda_prime = lambda.sub(&rho_k);
    Ok(BlattnerData {
        lambda: lambda.clone(),
        delta_plus,
        delta_c_plus,
        delta_n_plus,
        rho_g,
        rho_k,
        rho_n,
        lambda_cap,
        lambda_prime,
        integral,
    })
}

/// Weyl dimension of the compact-group representation with the given
/// highest weight, relative to the given compact positive system.
pub fn weyl_dim(
    croots: &ComplexRootSystem,
    highest_weight: &Weight,
    delta_c_plus: &[usize],
) -> Result<Rational, MultiplicityError> {
    let rho_k = croots.rho_of(delta_c_plus);
    let shifted = highest_weight.add(&rho_k);
    let mut dim = Rational::from_integer(1.into());
    for &idx in delta_c_plus {
        let root = &croots.roots[idx];
        let alpha = Weight(root.fcoords.clone());
        let num = croots.weight_inner(&shifted, &alpha);
        let den = croots.weight_inner(&rho_k, &alpha);
        if !num.is_positive() {
            return Err(MultiplicityError::NonDominant(format!("{:?}", root.fcoords)));
        }
        dim *= num / den;
    }
    Ok(dim)
}

/// Exact Liouville volume of the compact coadjoint orbit through lambda:
/// the product of root pairings normalized by the rho_k pairings over the
/// chamber lambda selects.
pub fn liouville_volume(
    croots: &ComplexRootSystem,
    lambda: &Weight,
    delta_c_plus: &[usize],
) -> Result<Rational, MultiplicityError> {
    let rho_k = croots.rho_of(delta_c_plus);
    let mut vol = Rational::from_integer(1.into());
    for &idx in delta_c_plus {
        let root = &croots.roots[idx];
        let alpha = Weight(root.fcoords.clone());
        let num = croots.weight_inner(lambda, &alpha);
        if num.is_zero() {
            return Err(MultiplicityError::NotRegular(format!("{:?}", root.fcoords)));
        }
        let den = croots.weight_inner(&rho_k, &alpha);
        vol *= num / den;
    }
    if vol.is_negative() {
        return Err(MultiplicityError::ChainMismatch(
            "Liouville volume came out negative; lambda is outside its own chamber".into(),
        ));
    }
    Ok(vol)
}

/// The multiplicity identity: the dimension at the shifted parameter, the
/// dimension at the primed parameter, and the Liouville volume coincide.
/// Returns the common value; a mismatch is an error carrying all three.
pub fn dimension_chain_check(
    croots: &ComplexRootSystem,
    data: &BlattnerData,
) -> Result<Rational, MultiplicityError> {
    let dim_cap = weyl_dim(croots, &data.lambda_cap, &data.delta_c_plus)?;
    let dim_prime = weyl_dim(croots, &data.lambda_prime, &data.delta_c_plus)?;
    let vol = liouville_volume(croots, &data.lambda, &data.delta_c_plus)?;
    if dim_cap != dim_prime || dim_prime != vol {
        return Err(MultiplicityError::ChainMismatch(format!(
            "dim at shifted = {dim_cap}, dim at primed = {dim_prime}, Liouville volume = {vol}"
        )));
    }
    Ok(vol)
}

/// Floating-point cross-check of the Liouville volume when the compact
/// flag orbit is a two-sphere.
pub struct McCheck {
    pub estimate: f64,
    pub target: f64,
    pub rel_error: f64,
    pub samples: usize,
    pub within_tolerance: bool,
}

/// Monte Carlo integration of the Liouville form of the sphere orbit in
/// the polar chart: the integrand is (2 j / 4 pi) sin(theta) over the box
/// [0, pi] x [0, 2 pi], whose integral is exactly 2 j, the volume the exact
/// chain produces. Returns None when the compact system is not rank one.
pub fn mc_sphere_check(
    croots: &ComplexRootSystem,
    data: &BlattnerData,
    samples: usize,
    seed: u64,
) -> Result<Option<McCheck>, MultiplicityError> {
    if data.delta_c_plus.len() != 1 || samples == 0 {
        return Ok(None);
    }
    let root = &croots.roots[data.delta_c_plus[0]];
    let alpha = Weight(root.fcoords.clone());
    let num = croots.weight_inner(&data.lambda, &alpha);
    let den = croots.weight_inner(&alpha, &alpha);
    let j = (num / den)
        .to_f64()
        .expect("rational spin converts to f64");
    let target = liouville_volume(croots, &data.lambda, &data.delta_c_plus)?
        .to_f64()
        .expect("rational volume converts to f64");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = 0.0f64;
    for _ in 0..samples {
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let _phi: f64 = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
        acc += (2.0 * j / (4.0 * std::f64::consts::PI)) * theta.sin();
    }
    let box_volume = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
    let estimate = box_volume * acc / samples as f64;
    let rel_error = if target != 0.0 {
        (estimate - target).abs() / target.abs()
    } else {
        f64::INFINITY
    };
    Ok(Some(McCheck {
        estimate,
        target,
        rel_error,
        samples,
        within_tolerance: rel_error <= 0.02,
    }))
}

/// Full multiplicity report for a holomorphic functional: the chamber data,
/// the identity chain, the distinguished open-orbit point, and the Monte
/// Carlo cross-check where available.
pub struct MultiplicityOutcome {
    pub data: BlattnerData,
    pub common_value: Rational,
    pub h_signature: SignatureOutcome,
    pub mc: Option<McCheck>,
    /// Set when some coroot pairing of lambda is not an integer; the exact
    /// chain still goes through, the weights are just not integral.
    pub integrality_warning: bool,
}

pub fn multiplicity_report(
    engine: &OrbitEngine,
    lambda: &Weight,
    mc_samples: usize,
    seed: u64,
) -> Result<MultiplicityOutcome, MultiplicityError> {
    let croots = engine.croots.ok_or(MultiplicityError::NotHolomorphic)?;
    let alg = engine.algebra();
    if !is_strongly_elliptic_weight(alg, croots, lambda)? {
        return Err(MultiplicityError::NotRegular("lambda is not strongly elliptic".into()));
    }
    if !is_holomorphic(alg, croots, lambda)? {
        return Err(MultiplicityError::NotHolomorphic);
    }
    let data = blattner(croots, lambda)?;
    let common_value = dimension_chain_check(croots, &data)?;
    let h = h_covector(engine)?;
    if !engine.frame.is_open_orbit_point(&h)? {
        return Err(MultiplicityError::ChainMismatch(
            "distinguished functional h is not an open orbit point".into(),
        ));
    }
    let h_signature = engine.cascade_signature(&h)?;
    let mc = mc_sphere_check(croots, &data, mc_samples, seed)?;
    let integrality_warning = !data.integral;
    Ok(MultiplicityOutcome {
        data,
        common_value,
        h_signature,
        mc,
        integrality_warning,
    })
}
