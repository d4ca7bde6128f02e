use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SHARE_SUM_TOL: f64 = 1e-12;

/// A stochastic block family: group population shares and a symmetric matrix
/// of link probabilities between groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBlockModel", into = "RawBlockModel")]
pub struct BlockModel {
    shares: Vec<f64>,
    probs: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawBlockModel {
    shares: Vec<f64>,
    probs: Vec<Vec<f64>>,
}

impl TryFrom<RawBlockModel> for BlockModel {
    type Error = Error;

    fn try_from(raw: RawBlockModel) -> Result<Self> {
        BlockModel::new(raw.shares, raw.probs)
    }
}

impl From<BlockModel> for RawBlockModel {
    fn from(model: BlockModel) -> Self {
        RawBlockModel {
            shares: model.shares,
            probs: model.probs,
        }
    }
}

impl BlockModel {
    pub fn new(shares: Vec<f64>, probs: Vec<Vec<f64>>) -> Result<Self> {
        validate_shares(&shares)?;
        validate_square_symmetric("probs", &probs, shares.len())?;
        for (i, row) in probs.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                if !(p > 0.0 && p <= 1.0) {
                    return Err(Error::invalid(
                        "probs",
                        format!("p[{i}][{j}] = {p} must lie in (0, 1]"),
                    ));
                }
            }
        }
        Ok(BlockModel { shares, probs })
    }

    /// Two-probability form: `p_s` within groups, `p_d` between groups.
    pub fn homophily(shares: Vec<f64>, p_s: f64, p_d: f64) -> Result<Self> {
        let m = shares.len();
        let probs = (0..m)
            .map(|i| (0..m).map(|j| if i == j { p_s } else { p_d }).collect())
            .collect();
        BlockModel::new(shares, probs)
    }

    pub fn erdos_renyi(p: f64) -> Result<Self> {
        BlockModel::new(vec![1.0], vec![vec![p]])
    }

    pub fn groups(&self) -> usize {
        self.shares.len()
    }

    pub fn shares(&self) -> &[f64] {
        &self.shares
    }

    pub fn probs(&self) -> &[Vec<f64>] {
        &self.probs
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.probs[i][j]
    }

    /// `(p_s, p_d)` when every diagonal entry equals `p_s` and every
    /// off-diagonal entry equals `p_d`. A single group reports `p_d = p_s`.
    pub fn homophily_params(&self) -> Option<(f64, f64)> {
        let m = self.groups();
        let p_s = self.probs[0][0];
        let p_d = if m > 1 { self.probs[0][1] } else { p_s };
        let uniform = (0..m).all(|i| {
            (0..m).all(|j| {
                let want = if i == j { p_s } else { p_d };
                self.probs[i][j] == want
            })
        });
        uniform.then_some((p_s, p_d))
    }

    /// Integer group sizes for a population of `n` (largest-remainder rounding,
    /// ties to the lower group index).
    pub fn group_sizes(&self, n: usize) -> Result<Vec<usize>> {
        largest_remainder(&self.shares, n)
    }

    pub fn blocks(&self, n: usize) -> Result<BlockStructure> {
        let sizes = self.group_sizes(n)?;
        Ok(BlockStructure::contiguous(sizes, self.probs.clone()))
    }

    /// Copy with a replaced probability matrix. Only symmetry is enforced, so
    /// perturbed models used by finite differences may step past 1.
    pub(crate) fn with_probs_unchecked(&self, probs: Vec<Vec<f64>>) -> Self {
        debug_assert!(validate_square_symmetric("probs", &probs, self.groups()).is_ok());
        BlockModel {
            shares: self.shares.clone(),
            probs,
        }
    }
}

pub(crate) fn validate_shares(shares: &[f64]) -> Result<()> {
    if shares.is_empty() {
        return Err(Error::invalid("shares", "at least one group is required"));
    }
    if let Some(s) = shares.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
        return Err(Error::invalid("shares", format!("share {s} must be positive")));
    }
    let total: f64 = shares.iter().sum();
    if (total - 1.0).abs() > SHARE_SUM_TOL {
        return Err(Error::invalid(
            "shares",
            format!("shares sum to {total}, expected 1"),
        ));
    }
    Ok(())
}

pub(crate) fn validate_square_symmetric(field: &str, rows: &[Vec<f64>], m: usize) -> Result<()> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(Error::invalid(field, format!("expected a {m}x{m} matrix")));
    }
    for i in 0..m {
        for j in 0..i {
            if rows[i][j] != rows[j][i] {
                return Err(Error::invalid(
                    field,
                    format!("not symmetric at ({i}, {j}): {} vs {}", rows[i][j], rows[j][i]),
                ));
            }
        }
        if rows[i].iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid(field, format!("row {i} has a non-finite entry")));
        }
    }
    Ok(())
}

pub(crate) fn largest_remainder(shares: &[f64], n: usize) -> Result<Vec<usize>> {
    let m = shares.len();
    if n < m {
        return Err(Error::invalid(
            "n",
            format!("population {n} is smaller than the number of groups {m}"),
        ));
    }
    let raw: Vec<f64> = shares.iter().map(|s| s * n as f64).collect();
    let mut sizes: Vec<usize> = raw.iter().map(|r| r.floor() as usize).collect();
    let assigned: usize = sizes.iter().sum();
    let mut order: Vec<usize> = (0..m).collect();
    // stable sort keeps the lower index first among equal remainders
    order.sort_by(|&a, &b| {
        let ra = raw[a] - raw[a].floor();
        let rb = raw[b] - raw[b].floor();
        rb.total_cmp(&ra)
    });
    for &g in order.iter().take(n.saturating_sub(assigned)) {
        sizes[g] += 1;
    }
    if let Some(g) = sizes.iter().position(|&s| s == 0) {
        return Err(Error::invalid(
            "n",
            format!("group {g} is empty at population {n}"),
        ));
    }
    Ok(sizes)
}

/// Group structure of a block-constant matrix: which group each agent is in,
/// how large each group is, and the (symmetric) value shared by every entry
/// between two groups, diagonal included.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockStructure {
    sizes: Vec<usize>,
    values: Vec<Vec<f64>>,
    group_of: Vec<usize>,
}

impl BlockStructure {
    pub(crate) fn contiguous(sizes: Vec<usize>, values: Vec<Vec<f64>>) -> Self {
        let group_of = sizes
            .iter()
            .enumerate()
            .flat_map(|(g, &s)| std::iter::repeat_n(g, s))
            .collect();
        BlockStructure {
            sizes,
            values,
            group_of,
        }
    }

    pub(crate) fn with_assignment(sizes: Vec<usize>, values: Vec<Vec<f64>>, group_of: Vec<usize>) -> Self {
        BlockStructure {
            sizes,
            values,
            group_of,
        }
    }

    pub fn groups(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.group_of.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn group_of(&self) -> &[usize] {
        &self.group_of
    }

    /// Representative-agent matrix `P[g][h] = size_h * value[g][h]`.
    pub fn reduced_matrix(&self) -> Vec<Vec<f64>> {
        let m = self.groups();
        (0..m)
            .map(|g| (0..m).map(|h| self.sizes[h] as f64 * self.values[g][h]).collect())
            .collect()
    }

    /// `D^{1/2} V D^{1/2}` with `D = diag(sizes)`; similar to the reduced matrix.
    pub(crate) fn symmetrized(&self) -> Vec<Vec<f64>> {
        let m = self.groups();
        let root: Vec<f64> = self.sizes.iter().map(|&s| (s as f64).sqrt()).collect();
        (0..m)
            .map(|g| (0..m).map(|h| root[g] * self.values[g][h] * root[h]).collect())
            .collect()
    }

    /// Spread per-group values over agents.
    pub fn expand(&self, per_group: &[f64]) -> Vec<f64> {
        self.group_of.iter().map(|&g| per_group[g]).collect()
    }

    /// Euclidean norm of the agent vector that `per_group` expands to.
    pub(crate) fn expanded_norm(&self, per_group: &[f64]) -> f64 {
        self.sizes
            .iter()
            .zip(per_group)
            .map(|(&s, &x)| s as f64 * x * x)
            .sum::<f64>()
            .sqrt()
    }
}
