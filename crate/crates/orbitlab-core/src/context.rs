//! One-stop analysis context: everything the drivers need for one real
//! form, built in dependency order, plus the structure-constant cache.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::cascade::{build_cascade, verify_hypotheses, Cascade, CascadeError, HypothesisReport};
use crate::complex_roots::{complex_root_system, CRootsError, ComplexRootSystem};
use crate::lie::LieError;
use crate::orbit::{OrbitEngine, OrbitError};
use crate::realforms::{
    build_real_form, iwasawa_data, restricted_root_system, IwasawaData, RealForm, RealFormError,
    RealFormSpec, RestrictedRootSystem,
};

#[derive(Debug, Error)]
pub enum ContextError {
    #[error(transparent)]
    RealForm(#[from] RealFormError),
    #[error(transparent)]
    Cascade(#[from] CascadeError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("cache io: {0}")]
    CacheIo(#[from] std::io::Error),
    #[error("cached structure constants disagree with the rebuilt algebra: {0}")]
    BadCache(String),
}

/// Fully analyzed real form.
pub struct AlgebraContext {
    pub spec: RealFormSpec,
    pub form: RealForm,
    pub sys: RestrictedRootSystem,
    pub iwasawa: IwasawaData,
    pub cascade: Cascade,
    pub hypotheses: HypothesisReport,
    pub croots: Option<ComplexRootSystem>,
    /// Why the complexified root data is unavailable, when it is.
    pub croots_unavailable: Option<String>,
}

impl AlgebraContext {
    /// Build the orbit engine over this context.
    pub fn engine(&self) -> Result<OrbitEngine<'_>, OrbitError> {
        OrbitEngine::new(&self.form, &self.sys, &self.cascade, self.croots.as_ref())
    }
}

/// Run the full analysis chain for one family spec.
pub fn analyze(spec: &RealFormSpec) -> Result<AlgebraContext, ContextError> {
    let form = build_real_form(spec)?;
    let sys = restricted_root_system(&form)?;
    let iwasawa = iwasawa_data(&form, &sys)?;
    let cascade = build_cascade(&form, &sys)?;
    let hypotheses = verify_hypotheses(&form, &sys, &cascade);
    let (croots, croots_unavailable) = match complex_root_system(&form, &cascade) {
        Ok(c) => (Some(c), None),
        Err(CRootsError::NoCompactCartan(why)) => (None, Some(why)),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(AlgebraContext {
        spec: spec.clone(),
        form,
        sys,
        iwasawa,
        cascade,
        hypotheses,
        croots,
        croots_unavailable,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    /// No cache file existed; the freshly built table was written.
    Written,
    /// A cache file existed and reproduced the rebuilt table bit for bit.
    Verified,
}

/// Analyze with a structure-constant cache directory. The algebra is always
/// rebuilt from scratch; an existing cache entry must reload to the exact
/// same table, labels, and involution, otherwise the cache is rejected.
pub fn analyze_with_cache(
    spec: &RealFormSpec,
    cache_dir: &Path,
) -> Result<(AlgebraContext, CacheStatus), ContextError> {
    let ctx = analyze(spec)?;
    let fresh = ctx.form.algebra.to_cache_json(&ctx.spec.name());
    let file = cache_dir.join(format!("{}.json", cache_file_stem(spec)));
    if file.exists() {
        let stored = fs::read_to_string(&file)?;
        let (alg, label) = crate::lie::LieAlgebra::from_cache_json(&stored)?;
        if label != ctx.spec.name() {
            return Err(ContextError::BadCache(format!(
                "label {label} != {}",
                ctx.spec.name()
            )));
        }
        // Bit-identical round trip: serializing the reloaded algebra must
        // reproduce the freshly built serialization exactly.
        let reserialized = alg.to_cache_json(&label);
        if reserialized != fresh {
            return Err(ContextError::BadCache(
                "reloaded table serializes differently".into(),
            ));
        }
        Ok((ctx, CacheStatus::Verified))
    } else {
        fs::create_dir_all(cache_dir)?;
        fs::write(&file, fresh)?;
        Ok((ctx, CacheStatus::Written))
    }
}

fn cache_file_stem(spec: &RealFormSpec) -> String {
    match spec {
        RealFormSpec::SuPQ { p, q } => format!("su_{p}_{q}"),
        RealFormSpec::Sp2nR { n } => format!("sp_{}", 2 * n),
        RealFormSpec::SoStar2n { n } => format!("sostar_{}", 2 * n),
        RealFormSpec::SoPQ { p, q } => format!("so_{p}_{q}"),
    }
}
