use eggfit::channel::MixtureModel;
use eggfit::em::EmConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofBlock {
    pub mse: f64,
    pub r2: f64,
    pub bins: usize,
}

/// Fit result as written by `eggfit fit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    #[serde(flatten)]
    pub model: MixtureModel<f64>,
    pub scintillation_index: f64,
    pub loglik: f64,
    pub iterations: usize,
    pub converged: bool,
    pub gof: GofBlock,
    pub em_config: EmConfig,
    pub tool_version: String,
    pub input_digest: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, source: &str) -> CliResult<Self> {
        let r: Report =
            serde_json::from_str(text).map_err(|e| CliError::input(format!("{source}: not a fit report: {e}")))?;
        r.model
            .validate()
            .map_err(|e| CliError::input(format!("{source}: {e}")))?;
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use eggfit::channel::{EgParams, EggParams};

    fn sample(model: MixtureModel<f64>) -> Report {
        Report {
            model,
            scintillation_index: 0.1484,
            loglik: -12.5,
            iterations: 7,
            converged: true,
            gof: GofBlock {
                mse: 1e-6,
                r2: 0.99,
                bins: 50,
            },
            em_config: EmConfig::default(),
            tool_version: "0.1.0".into(),
            input_digest: "ab".into(),
        }
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let r = sample(MixtureModel::Egg(
            EggParams::new(0.2130, 0.3291, 1.4299, 1.1817, 17.1984).unwrap(),
        ));
        let text = r.to_json();
        let back = Report::from_json(&text, "r").unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), text);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["model"], "egg");
        assert_eq!(v["params"]["c"], 17.1984);
    }

    #[test]
    fn eg_params_keys() {
        let r = sample(MixtureModel::Eg(EgParams::new(0.3, 0.5, 2.0, 0.4).unwrap()));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let mut keys: Vec<&String> = v["params"].as_object().unwrap().keys().collect();
        keys.sort();
        assert_eq!(keys, ["alpha", "beta", "lambda", "omega"]);
    }

    #[test]
    fn rejects_foreign_json() {
        assert!(Report::from_json("{\"mse\": 1}", "x").is_err());
        assert!(Report::from_json("not json", "x").is_err());
    }
}
