//! Persisted model description: a JSON document holding the parameter
//! vector plus the derived quantities and fit metadata needed to audit and
//! exactly reproduce downstream queries.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tailmix_core::estimate::{build_model, FitResult, FittedModel, ModelKind, TransformSettings};
use tailmix_core::transform::WarpMode;

use crate::fail::{stage, Failure};

pub const SCHEMA_VERSION: u32 = 1;

/// Warp geometry of a warped-normal model; fixed, never fitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WarpSpec {
    pub eps: f64,
    pub mode: String,
}

/// Provenance of a fitted model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitMeta {
    pub loglik: f64,
    pub seed: u64,
    pub converged: bool,
    pub iterations: usize,
    pub evaluations: usize,
    /// Number of observations fitted.
    pub n: usize,
    /// SHA-256 over the observations as little-endian doubles.
    pub data_digest: String,
}

/// On-disk model document. `kappa` is present for mixture models, `warp`
/// for warped-normal models, `fit` whenever the model came from data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    pub kind: String,
    pub params: Vec<f64>,
    pub thresholds: [f64; 2],
    pub epsilons: [f64; 2],
    #[serde(default)]
    pub kappa: Option<f64>,
    #[serde(default)]
    pub warp: Option<WarpSpec>,
    #[serde(default)]
    pub fit: Option<FitMeta>,
}

pub fn mode_name(mode: WarpMode) -> &'static str {
    match mode {
        WarpMode::Quartic => "quartic",
        WarpMode::Quintic => "quintic",
    }
}

pub fn parse_mode(s: &str) -> Result<WarpMode, String> {
    match s {
        "quartic" => Ok(WarpMode::Quartic),
        "quintic" => Ok(WarpMode::Quintic),
        other => Err(format!("unknown warp mode {other:?} (expected quartic or quintic)")),
    }
}

pub fn data_digest(values: &[f64]) -> String {
    let mut hasher = Sha256::new();
    for v in values {
        hasher.update(v.to_le_bytes());
    }
    let digest = hasher.finalize();
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

impl ModelFile {
    pub fn from_fit(
        result: &FitResult,
        transform: &TransformSettings,
        seed: u64,
        data: &[f64],
    ) -> Self {
        let warp = (result.kind == ModelKind::TransformNormal).then(|| WarpSpec {
            eps: transform.eps,
            mode: mode_name(transform.mode).to_string(),
        });
        ModelFile {
            schema_version: SCHEMA_VERSION,
            kind: result.kind.as_str().to_string(),
            params: result.params.clone(),
            thresholds: [result.u1, result.u2],
            epsilons: [result.epsilons.0, result.epsilons.1],
            kappa: (result.kind != ModelKind::TransformNormal).then_some(result.kappa),
            warp,
            fit: Some(FitMeta {
                loglik: result.loglik,
                seed,
                converged: result.converged,
                iterations: result.iterations,
                evaluations: result.evaluations,
                n: data.len(),
                data_digest: data_digest(data),
            }),
        }
    }

    /// Describe a model directly from its parameters, without fit metadata.
    pub fn from_params(
        kind: ModelKind,
        params: &[f64],
        transform: &TransformSettings,
    ) -> Result<Self, Failure> {
        let model = stage("build", build_model(kind, params, transform))?;
        let warp = (kind == ModelKind::TransformNormal).then(|| WarpSpec {
            eps: transform.eps,
            mode: mode_name(transform.mode).to_string(),
        });
        let (u1, u2) = model.thresholds();
        let (e1, e2) = model.epsilons();
        Ok(ModelFile {
            schema_version: SCHEMA_VERSION,
            kind: kind.as_str().to_string(),
            params: params.to_vec(),
            thresholds: [u1, u2],
            epsilons: [e1, e2],
            kappa: (kind != ModelKind::TransformNormal).then(|| model.kappa()),
            warp,
            fit: None,
        })
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
        let file: ModelFile = serde_json::from_str(&text)
            .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Failure::Data(format!(
                "{}: unsupported schema version {}",
                path.display(),
                file.schema_version
            )));
        }
        Ok(file)
    }

    /// Reconstruct the model from the persisted parameters.
    pub fn build(&self) -> Result<(ModelKind, FittedModel, TransformSettings), Failure> {
        let kind: ModelKind = self
            .kind
            .parse()
            .map_err(|_| Failure::Data(format!("unknown model kind {:?}", self.kind)))?;
        let mut transform = TransformSettings::default();
        if let Some(warp) = &self.warp {
            transform.eps = warp.eps;
            transform.mode = parse_mode(&warp.mode).map_err(Failure::Data)?;
        }
        let model = stage("build", build_model(kind, &self.params, &transform))?;
        Ok((kind, model, transform))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_order_sensitive() {
        let d = data_digest(&[1.0, 2.0, 3.0]);
        assert_eq!(d.len(), 64);
        assert_eq!(d, data_digest(&[1.0, 2.0, 3.0]));
        assert_ne!(d, data_digest(&[3.0, 2.0, 1.0]));
    }

    #[test]
    fn params_round_trip_through_json() {
        let file =
            ModelFile::from_params(ModelKind::GpdNGpd, &[0.3, 0.4, 1.0, 0.2, 0.4], &TransformSettings::default())
                .unwrap();
        let text = serde_json::to_string(&file).unwrap();
        let back: ModelFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.params, file.params);
        assert_eq!(back.thresholds, file.thresholds);
        assert_eq!(back.kappa, file.kappa);
        assert!(back.warp.is_none() && back.fit.is_none());
        let (kind, model, _) = back.build().unwrap();
        assert_eq!(kind, ModelKind::GpdNGpd);
        assert_eq!(model.thresholds().0, file.thresholds[0]);
    }

    #[test]
    fn mode_names_round_trip() {
        for mode in [WarpMode::Quartic, WarpMode::Quintic] {
            assert_eq!(parse_mode(mode_name(mode)).unwrap(), mode);
        }
        assert!(parse_mode("cubic").is_err());
    }
}
