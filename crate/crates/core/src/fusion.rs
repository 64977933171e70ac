//! Combining traditional and network membership evidence.
//!
//! Two fusion rules: the hybrid classifier takes the convex combination
//! lambda * m_R + (1 - lambda) * m_T and decides by argmax; the tiebreaker
//! classifier keeps the traditional decision unless the top-2 traditional
//! margin falls below theta, in which case the network memberships decide
//! between those two classes. Sweeps evaluate a full parameter grid and
//! report the accuracy gain over the traditional-only baseline.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::learn::{argmax, MembershipMatrix};

/// Parameter grids for the two fusion rules. Steps must divide 1 so the
/// grids contain both endpoints 0 and 1.
#[derive(Debug, Clone, Serialize)]
pub struct FusionConfig {
    pub lambda_step: f64,
    pub theta_step: f64,
}

impl Default for FusionConfig {
    fn default() -> Self {
        FusionConfig {
            lambda_step: 0.01,
            theta_step: 0.01,
        }
    }
}

/// Grid over [0, 1] with the given step; both endpoints included.
pub fn parameter_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::Validation(format!(
            "grid step must lie in (0, 1], got {step}"
        )));
    }
    let n = (1.0 / step).round();
    if (n * step - 1.0).abs() > 1e-9 {
        return Err(Error::Validation(format!(
            "grid step {step} does not divide the interval [0, 1]"
        )));
    }
    let n = n as usize;
    Ok((0..=n).map(|i| i as f64 / n as f64).collect())
}

fn check_aligned(a: &MembershipMatrix, b: &MembershipMatrix) -> Result<()> {
    if a.len() != b.len() || a.n_classes != b.n_classes {
        return Err(Error::ShapeMismatch {
            left: format!("{}x{}", a.len(), a.n_classes),
            right: format!("{}x{}", b.len(), b.n_classes),
        });
    }
    Ok(())
}

/// Elementwise convex combination of the network and traditional
/// membership matrices.
pub fn hybrid_combine(
    network: &MembershipMatrix,
    traditional: &MembershipMatrix,
    lambda: f64,
) -> Result<MembershipMatrix> {
    check_aligned(network, traditional)?;
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Validation(format!(
            "lambda must lie in [0, 1], got {lambda}"
        )));
    }
    let rows = network
        .rows
        .iter()
        .zip(&traditional.rows)
        .map(|(r, t)| {
            r.iter()
                .zip(t)
                .map(|(&mr, &mt)| lambda * mr + (1.0 - lambda) * mt)
                .collect()
        })
        .collect();
    Ok(MembershipMatrix::new(network.n_classes, rows))
}

/// Argmax decision on combined memberships, lowest class index on ties.
pub fn hybrid_decide(memberships: &MembershipMatrix) -> Vec<usize> {
    memberships.decide()
}

/// Top-2 classes by membership: the argmax and the runner-up, each taking
/// the lowest index among ties.
fn top_two(row: &[f64]) -> (usize, usize) {
    let first = argmax(row);
    let mut second = if first == 0 { 1 } else { 0 };
    for (j, &v) in row.iter().enumerate() {
        if j == first || j == second {
            continue;
        }
        if v > row[second] {
            second = j;
        }
    }
    (first, second)
}

/// The tiebreaker rule: traditional argmax when the top-2 traditional
/// margin reaches theta, otherwise the class among those two with the
/// larger network membership.
pub fn tiebreaker_decide(
    traditional: &MembershipMatrix,
    network: &MembershipMatrix,
    theta: f64,
) -> Result<Vec<usize>> {
    check_aligned(traditional, network)?;
    if traditional.n_classes < 2 {
        return Err(Error::Validation(
            "tiebreaker rule needs at least 2 classes".into(),
        ));
    }
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Validation(format!(
            "theta must lie in [0, 1], got {theta}"
        )));
    }
    let mut decisions = Vec::with_capacity(traditional.len());
    for (t_row, r_row) in traditional.rows.iter().zip(&network.rows) {
        let (j, k) = top_two(t_row);
        let margin = t_row[j] - t_row[k];
        let decision = if margin >= theta {
            j
        } else if r_row[k] > r_row[j] {
            k
        } else if r_row[j] > r_row[k] {
            j
        } else {
            j.min(k)
        };
        decisions.push(decision);
    }
    Ok(decisions)
}

/// Which fusion rule a sweep exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FusionMode {
    Hybrid,
    Tiebreaker,
}

impl FusionMode {
    pub fn parameter_name(self) -> &'static str {
        match self {
            FusionMode::Hybrid => "lambda",
            FusionMode::Tiebreaker => "theta",
        }
    }
}

/// Aligned membership matrices and true labels for one cross-validation
/// fold.
#[derive(Debug, Clone)]
pub struct FoldPair {
    pub traditional: MembershipMatrix,
    pub network: MembershipMatrix,
    pub truth: Vec<usize>,
}

/// One grid point of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct GainPoint {
    pub x: f64,
    pub gamma_hybrid: f64,
    /// Gamma_H / Gamma_T; absent when the traditional accuracy is zero.
    pub ratio: Option<f64>,
    /// (Gamma_H - Gamma_T) / Gamma_T; absent when the traditional accuracy
    /// is zero.
    pub diff: Option<f64>,
}

/// Accuracy gain of a fused classifier over the traditional baseline.
#[derive(Debug, Clone, Serialize)]
pub struct GainReport {
    pub mode: FusionMode,
    pub gamma_traditional: f64,
    pub gamma_network: f64,
    pub curve: Vec<GainPoint>,
    /// Best ratio over the grid and the smallest parameter attaining it.
    pub max_ratio: Option<f64>,
    pub max_diff: Option<f64>,
    pub best_parameter: Option<f64>,
}

fn pooled_accuracy(folds: &[FoldPair], decide: impl Fn(&FoldPair) -> Result<Vec<usize>>) -> Result<f64> {
    let mut correct = 0usize;
    let mut total = 0usize;
    for fold in folds {
        let decisions = decide(fold)?;
        correct += decisions
            .iter()
            .zip(&fold.truth)
            .filter(|&(d, t)| d == t)
            .count();
        total += fold.truth.len();
    }
    if total == 0 {
        return Err(Error::Validation("sweep received no instances".into()));
    }
    Ok(correct as f64 / total as f64)
}

/// Evaluate one fusion rule over its parameter grid, pooling decisions
/// across folds, and report the accuracy-gain curve. The evaluation order
/// of grid points does not affect the report.
pub fn sweep(mode: FusionMode, folds: &[FoldPair], config: &FusionConfig) -> Result<GainReport> {
    for fold in folds {
        check_aligned(&fold.traditional, &fold.network)?;
        if fold.truth.len() != fold.traditional.len() {
            return Err(Error::ShapeMismatch {
                left: format!("{} label(s)", fold.truth.len()),
                right: format!("{} instance(s)", fold.traditional.len()),
            });
        }
    }
    let step = match mode {
        FusionMode::Hybrid => config.lambda_step,
        FusionMode::Tiebreaker => config.theta_step,
    };
    let grid = parameter_grid(step)?;
    let gamma_traditional = pooled_accuracy(folds, |f| Ok(f.traditional.decide()))?;
    let gamma_network = pooled_accuracy(folds, |f| Ok(f.network.decide()))?;

    let mut curve = Vec::with_capacity(grid.len());
    for &x in &grid {
        let gamma = pooled_accuracy(folds, |f| match mode {
            FusionMode::Hybrid => Ok(hybrid_decide(&hybrid_combine(&f.network, &f.traditional, x)?)),
            FusionMode::Tiebreaker => tiebreaker_decide(&f.traditional, &f.network, x),
        })?;
        let (ratio, diff) = if gamma_traditional > 0.0 {
            (
                Some(gamma / gamma_traditional),
                Some((gamma - gamma_traditional) / gamma_traditional),
            )
        } else {
            (None, None)
        };
        curve.push(GainPoint {
            x,
            gamma_hybrid: gamma,
            ratio,
            diff,
        });
    }
    let mut max_ratio = None;
    let mut max_diff = None;
    let mut best_parameter = None;
    for point in &curve {
        if let (Some(r), Some(d)) = (point.ratio, point.diff) {
            if max_ratio.is_none_or(|m| r > m) {
                max_ratio = Some(r);
                max_diff = Some(d);
                best_parameter = Some(point.x);
            }
        }
    }
    Ok(GainReport {
        mode,
        gamma_traditional,
        gamma_network,
        curve,
        max_ratio,
        max_diff,
        best_parameter,
    })
}
