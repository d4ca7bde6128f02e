//! Model specifications as read from TOML config files.

use serde::{Deserialize, Serialize};

use super::block::BlockModel;
use super::counterexamples::{build_counterexample_split, build_counterexample_star};
use super::expected::{build_expected_sbm, ExpectedMatrix};
use super::kronecker::{build_kronecker, MulticharacteristicModel};
use super::realized::RealizedNetwork;
use super::samplers::{
    sample_bernoulli, sample_clustered, sample_weighted_uniform, ClusteredModel,
    WeightedIntervalModel,
};
use super::spatial::{build_spatial_grid, SpatialGridModel};
use crate::error::{Error, Result};

/// One network family. The `kind` key selects the variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    ErdosRenyi {
        p: f64,
    },
    Homophily {
        shares: Vec<f64>,
        p_s: f64,
        p_d: f64,
    },
    Sbm {
        shares: Vec<f64>,
        probs: Vec<Vec<f64>>,
    },
    Weighted {
        shares: Vec<f64>,
        lower: Vec<Vec<f64>>,
        upper: Vec<Vec<f64>>,
    },
    Clustered {
        shares: Vec<f64>,
        dyad_probs: Vec<Vec<f64>>,
        triangle_probs: Vec<Vec<Vec<f64>>>,
    },
    Spatial {
        k: usize,
        rho: f64,
    },
    Kronecker {
        layer1: BlockModel,
        n1: usize,
        layer2: BlockModel,
        n2: usize,
    },
    Split,
    Star,
}

/// A validated model ready to build or sample.
#[derive(Debug, Clone)]
pub enum Model {
    Block(BlockModel),
    Weighted(WeightedIntervalModel),
    Clustered(ClusteredModel),
    Spatial(SpatialGridModel),
    Kronecker {
        layer1: BlockModel,
        n1: usize,
        layer2: BlockModel,
        n2: usize,
    },
    Split,
    Star,
}

impl ModelSpec {
    pub fn resolve(&self) -> Result<Model> {
        Ok(match self.clone() {
            ModelSpec::ErdosRenyi { p } => Model::Block(BlockModel::erdos_renyi(p)?),
            ModelSpec::Homophily { shares, p_s, p_d } => {
                Model::Block(BlockModel::homophily(shares, p_s, p_d)?)
            }
            ModelSpec::Sbm { shares, probs } => Model::Block(BlockModel::new(shares, probs)?),
            ModelSpec::Weighted { shares, lower, upper } => {
                Model::Weighted(WeightedIntervalModel::new(shares, lower, upper)?)
            }
            ModelSpec::Clustered {
                shares,
                dyad_probs,
                triangle_probs,
            } => Model::Clustered(ClusteredModel::new(shares, dyad_probs, triangle_probs)?),
            ModelSpec::Spatial { k, rho } => Model::Spatial(SpatialGridModel::new(k, rho)?),
            ModelSpec::Kronecker {
                layer1,
                n1,
                layer2,
                n2,
            } => {
                layer1.group_sizes(n1).map_err(|e| rename(e, "n1"))?;
                layer2.group_sizes(n2).map_err(|e| rename(e, "n2"))?;
                Model::Kronecker {
                    layer1,
                    n1,
                    layer2,
                    n2,
                }
            }
            ModelSpec::Split => Model::Split,
            ModelSpec::Star => Model::Star,
        })
    }
}

fn rename(err: Error, field: &str) -> Error {
    match err {
        Error::Invalid { reason, .. } => Error::invalid(field, reason),
        other => other,
    }
}

impl Model {
    /// Population fixed by the model itself, if any.
    pub fn intrinsic_n(&self) -> Option<usize> {
        match self {
            Model::Spatial(m) => Some(m.n()),
            Model::Kronecker { n1, n2, .. } => Some(n1 * n2),
            _ => None,
        }
    }

    /// Expected matrix at population `n`. Spatial and Kronecker models ignore `n`.
    pub fn expected(&self, n: usize) -> Result<ExpectedMatrix> {
        match self {
            Model::Block(m) => build_expected_sbm(m, n),
            Model::Weighted(m) => m.expected(n),
            Model::Clustered(m) => m.expected(n),
            Model::Spatial(m) => build_spatial_grid(m),
            Model::Kronecker {
                layer1,
                n1,
                layer2,
                n2,
            } => build_kronecker(&MulticharacteristicModel {
                layer1: build_expected_sbm(layer1, *n1)?,
                layer2: build_expected_sbm(layer2, *n2)?,
            }),
            Model::Split => build_counterexample_split(n),
            Model::Star => build_counterexample_star(n),
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<RealizedNetwork> {
        match self {
            Model::Weighted(m) => sample_weighted_uniform(m, n, seed),
            Model::Clustered(m) => sample_clustered(m, n, seed),
            Model::Spatial(_) => Err(Error::invalid(
                "kind",
                "spatial grids are deterministic and cannot be sampled",
            )),
            _ => sample_bernoulli(&self.expected(n)?, seed),
        }
    }
}

/// Contents of a network config file: a model plus population and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    pub model: ModelSpec,
}

impl NetworkConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: NetworkConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.model.resolve()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Population after applying the model's own size, then `n`.
    pub fn population(&self, model: &Model) -> Result<usize> {
        match (model.intrinsic_n(), self.n) {
            (Some(k), _) => Ok(k),
            (None, Some(n)) => Ok(n),
            (None, None) => Err(Error::invalid("n", "missing population size")),
        }
    }
}
