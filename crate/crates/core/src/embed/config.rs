use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Node aggregation and graph readout operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pooling {
    Sum,
    Mean,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightInit {
    Orthogonal,
    Uniform,
}

/// Architecture of the random GIN.
///
/// Also readable from a flat `key = value` file:
///
/// ```text
/// layers = 3
/// dim = 35
/// aggregator = "sum"
/// readout = "sum"
/// concat_layers = true
/// mlp_layers = 2
/// seed = 0
/// init = "orthogonal"
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GinConfig {
    /// Propagation rounds.
    pub layers: usize,
    /// Node embedding width.
    pub dim: usize,
    pub aggregator: Pooling,
    pub readout: Pooling,
    pub concat_layers: bool,
    pub mlp_layers: usize,
    pub seed: u64,
    pub init: WeightInit,
}

impl Default for GinConfig {
    fn default() -> Self {
        GinConfig {
            layers: 3,
            dim: 35,
            aggregator: Pooling::Sum,
            readout: Pooling::Sum,
            concat_layers: true,
            mlp_layers: 2,
            seed: 0,
            init: WeightInit::Orthogonal,
        }
    }
}

impl GinConfig {
    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 || self.dim == 0 || self.mlp_layers == 0 {
            return Err(Error::Config(format!(
                "layers, dim and mlp_layers must be >= 1 (got {}, {}, {})",
                self.layers, self.dim, self.mlp_layers
            )));
        }
        Ok(())
    }

    pub fn output_width(&self) -> usize {
        if self.concat_layers {
            self.layers * self.dim
        } else {
            self.dim
        }
    }

    pub fn with_seed(&self, seed: u64) -> GinConfig {
        GinConfig {
            seed,
            ..self.clone()
        }
    }

    /// Parses the `key = value` form.
    pub fn from_toml(text: &str) -> Result<GinConfig> {
        let cfg: GinConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Short label such as `L3d35` (with `-mean`, `-nocat` style suffixes for
    /// non-default operators).
    pub fn label(&self) -> String {
        let mut s = format!("L{}d{}", self.layers, self.dim);
        if self.aggregator != Pooling::Sum {
            s.push_str(&format!("-agg{}", self.aggregator));
        }
        if self.readout != Pooling::Sum {
            s.push_str(&format!("-ro{}", self.readout));
        }
        if !self.concat_layers {
            s.push_str("-nocat");
        }
        s
    }
}

impl fmt::Display for Pooling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pooling::Sum => "sum",
            Pooling::Mean => "mean",
            Pooling::Max => "max",
        })
    }
}

impl FromStr for Pooling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Pooling> {
        match s {
            "sum" => Ok(Pooling::Sum),
            "mean" => Ok(Pooling::Mean),
            "max" => Ok(Pooling::Max),
            _ => Err(Error::Config(format!("unknown pooling '{s}'"))),
        }
    }
}

/// Parses `LxD` shorthand such as `3x35`.
impl FromStr for GinConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<GinConfig> {
        let (l, d) = s
            .trim()
            .split_once('x')
            .ok_or_else(|| Error::Config(format!("expected LAYERSxDIM, got '{s}'")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("bad number in '{s}'")))
        };
        let cfg = GinConfig {
            layers: parse(l)?,
            dim: parse(d)?,
            ..GinConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
