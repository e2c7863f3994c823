//! Serializable report structures shared by the library and the command
//! line tool. All rational values are emitted as exact numerator and
//! denominator strings; maps are ordered so serialization is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::context::AlgebraContext;
use crate::exact::Rational;
use crate::multiplicity::MultiplicityOutcome;
use crate::orbit::{ConeOutcome, TheoremOutcome};

pub const SCHEMA_VERSION: u32 = 1;

/// An exact fraction as decimal strings, safe for arbitrary magnitude.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Frac {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for Frac {
    fn from(r: &Rational) -> Frac {
        Frac {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

pub fn frac_vec(values: &[Rational]) -> Vec<Frac> {
    values.iter().map(Frac::from).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestrictedRootReport {
    pub coords: Vec<Frac>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub schema_version: u32,
    pub name: String,
    pub dim: usize,
    pub dim_k: usize,
    pub dim_p: usize,
    pub split_rank: usize,
    pub absolute_rank: usize,
    pub positive_restricted_roots: Vec<RestrictedRootReport>,
    pub cascade: Vec<Vec<Frac>>,
    pub exists_open_orbit: bool,
    /// 2^r when open orbits exist.
    pub open_orbit_count: Option<u64>,
    pub hypotheses_satisfied: bool,
    pub hypothesis_failures: Vec<String>,
    pub has_compact_cartan: bool,
    pub hermitian: Option<bool>,
    pub weyl_k_order: Option<usize>,
    pub rho_k: Option<Vec<Frac>>,
    pub rho_g_holomorphic: Option<Vec<Frac>>,
    pub z0: Option<Vec<Frac>>,
    pub notes: Vec<String>,
}

impl AlgebraReport {
    pub fn from_context(ctx: &AlgebraContext) -> AlgebraReport {
        let cascade_rank = ctx.cascade.cascade_rank() as u32;
        let mut notes = Vec::new();
        if let Some(why) = &ctx.croots_unavailable {
            notes.push(format!("complexified root data unavailable: {why}"));
        }
        AlgebraReport {
            schema_version: SCHEMA_VERSION,
            name: ctx.spec.name(),
            dim: ctx.form.algebra.dim(),
            dim_k: ctx.form.k.dim(),
            dim_p: ctx.form.p.dim(),
            split_rank: ctx.sys.rank(),
            absolute_rank: ctx.cascade.rank,
            positive_restricted_roots: ctx
                .sys
                .positive_roots()
                .map(|r| RestrictedRootReport {
                    coords: frac_vec(&r.coords),
                    multiplicity: r.multiplicity(),
                })
                .collect(),
            cascade: ctx.cascade.upsilon.iter().map(|c| frac_vec(c)).collect(),
            exists_open_orbit: ctx.cascade.has_open_orbits(),
            open_orbit_count: ctx
                .cascade
                .has_open_orbits()
                .then(|| 1u64 << cascade_rank),
            hypotheses_satisfied: ctx.hypotheses.satisfied(),
            hypothesis_failures: ctx.hypotheses.failures.clone(),
            has_compact_cartan: ctx.cascade.t.is_some(),
            hermitian: ctx.croots.as_ref().map(|c| c.hermitian),
            weyl_k_order: ctx.croots.as_ref().map(|c| c.wk.len()),
            rho_k: ctx.croots.as_ref().map(|c| frac_vec(&c.rho_k.0)),
            rho_g_holomorphic: ctx
                .croots
                .as_ref()
                .and_then(|c| c.rho_g_holomorphic.as_ref())
                .map(|w| frac_vec(&w.0)),
            z0: ctx
                .croots
                .as_ref()
                .and_then(|c| c.z0.as_ref())
                .map(|z| frac_vec(z)),
            notes,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoremReport {
    pub schema_version: u32,
    pub name: String,
    pub f: Vec<Frac>,
    pub strongly_elliptic: bool,
    pub holomorphic: bool,
    pub exists_open_orbit: bool,
    pub verdict: String,
    pub signature_histogram: BTreeMap<String, usize>,
    pub witnesses: Vec<String>,
    pub n_samples: usize,
    pub seed: u64,
}

impl TheoremReport {
    pub fn new(name: String, f: &[Rational], out: &TheoremOutcome) -> TheoremReport {
        TheoremReport {
            schema_version: SCHEMA_VERSION,
            name,
            f: frac_vec(f),
            strongly_elliptic: true,
            holomorphic: out.holomorphic,
            exists_open_orbit: out.exists_open_orbit,
            verdict: out.verdict.label().to_string(),
            signature_histogram: out.histogram.clone(),
            witnesses: out.witnesses.clone(),
            n_samples: out.n_samples,
            seed: out.seed,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McReport {
    pub estimate: f64,
    pub target: f64,
    pub rel_error: f64,
    pub samples: usize,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub schema_version: u32,
    pub name: String,
    pub lambda: Vec<Frac>,
    pub lambda_shifted: Vec<Frac>,
    pub lambda_primed: Vec<Frac>,
    pub rho_g: Vec<Frac>,
    pub rho_k: Vec<Frac>,
    pub rho_n: Vec<Frac>,
    pub dimension: Frac,
    pub liouville_volume: Frac,
    pub h_signature: String,
    pub integrality_warning: bool,
    pub monte_carlo: Option<McReport>,
}

impl MultiplicityReport {
    pub fn new(name: String, out: &MultiplicityOutcome) -> MultiplicityReport {
        MultiplicityReport {
            schema_version: SCHEMA_VERSION,
            name,
            lambda: frac_vec(&out.data.lambda.0),
            lambda_shifted: frac_vec(&out.data.lambda_cap.0),
            lambda_primed: frac_vec(&out.data.lambda_prime.0),
            rho_g: frac_vec(&out.data.rho_g.0),
            rho_k: frac_vec(&out.data.rho_k.0),
            rho_n: frac_vec(&out.data.rho_n.0),
            dimension: Frac::from(&out.common_value),
            liouville_volume: Frac::from(&out.common_value),
            h_signature: out.h_signature.key(),
            integrality_warning: out.integrality_warning,
            monte_carlo: out.mc.as_ref().map(|m| McReport {
                estimate: m.estimate,
                target: m.target,
                rel_error: m.rel_error,
                samples: m.samples,
                within_tolerance: m.within_tolerance,
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeReport {
    pub schema_version: u32,
    pub name: String,
    pub f: Vec<Frac>,
    pub pattern: String,
    pub pv_pairs: usize,
    pub projection_signatures: usize,
    pub omega_pairs: usize,
    pub cross_pairs: usize,
    pub translate_signatures: usize,
    pub all_strict: bool,
}

impl ConeReport {
    pub fn new(name: String, f: &[Rational], out: &ConeOutcome) -> ConeReport {
        let pattern: String = out
            .pattern
            .iter()
            .map(|s| if *s > 0 { '+' } else { '-' })
            .collect();
        ConeReport {
            schema_version: SCHEMA_VERSION,
            name,
            f: frac_vec(f),
            pattern,
            pv_pairs: out.pv_pairs,
            projection_signatures: out.projection_signatures,
            omega_pairs: out.omega_pairs,
            cross_pairs: out.cross_pairs,
            translate_signatures: out.translate_signatures,
            all_strict: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelftestReport {
    pub schema_version: u32,
    pub name: String,
    pub checks: Vec<CheckLine>,
    pub passed: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::analyze;
    use crate::realforms::RealFormSpec;

    #[test]
    fn algebra_report_serializes_deterministically() {
        let ctx = analyze(&RealFormSpec::parse("sp", &[2]).unwrap()).unwrap();
        let report = AlgebraReport::from_context(&ctx);
        let a = serde_json::to_string_pretty(&report).unwrap();
        let report2 = AlgebraReport::from_context(&ctx);
        let b = serde_json::to_string_pretty(&report2).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"schema_version\": 1"));
        assert_eq!(report.open_orbit_count, Some(4));
        assert_eq!(report.hermitian, Some(true));
    }

    #[test]
    fn frac_is_exact() {
        let r = crate::exact::rat(-22, 7);
        let f = Frac::from(&r);
        assert_eq!(f.num, "-22");
        assert_eq!(f.den, "7");
    }
}
