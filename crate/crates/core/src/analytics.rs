//! User roles, score distributions and centrality correlations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centrality::{CentralityTable, Measure};
use crate::ids::UserId;
use crate::num::Scalar;
use crate::qr::Interaction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("correlations need at least 3 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("every centrality column is constant; no correlation is defined")]
    NoVariance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    QuestionerOnly,
    ResponderOnly,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoleSummary {
    pub questioners_only: u64,
    pub responders_only: u64,
    pub both: u64,
    /// `questioners_only / responders_only`; `None` without responders.
    pub qr_ratio: Option<f64>,
}

impl RoleSummary {
    pub fn from_counts(questioners_only: u64, responders_only: u64, both: u64) -> Self {
        RoleSummary {
            questioners_only,
            responders_only,
            both,
            qr_ratio: qr_ratio(questioners_only, responders_only),
        }
    }

    pub fn total_users(&self) -> u64 {
        self.questioners_only + self.responders_only + self.both
    }
}

pub fn qr_ratio(questioners_only: u64, responders_only: u64) -> Option<f64> {
    (responders_only > 0).then(|| questioners_only as f64 / responders_only as f64)
}

/// Rounds for display only, e.g. `round_to(4.0847, 2) == 4.08`.
pub fn round_to(x: f64, decimals: usize) -> f64 {
    format!("{x:.decimals$}").parse().unwrap_or(x)
}

/// Partitions the users seen in `interactions` by the sides they appear on.
pub fn classify_roles<T>(interactions: &[Interaction<T>]) -> (RoleSummary, BTreeMap<UserId, Role>) {
    let mut sides: BTreeMap<UserId, (bool, bool)> = BTreeMap::new();
    for i in interactions {
        sides.entry(i.questioner).or_default().0 = true;
        sides.entry(i.responder).or_default().1 = true;
    }
    let roles: BTreeMap<UserId, Role> = sides
        .into_iter()
        .map(|(user, sides)| {
            let role = match sides {
                (true, true) => Role::Both,
                (true, false) => Role::QuestionerOnly,
                _ => Role::ResponderOnly,
            };
            (user, role)
        })
        .collect();
    let count = |r: Role| roles.values().filter(|&&x| x == r).count() as u64;
    let summary = RoleSummary::from_counts(
        count(Role::QuestionerOnly),
        count(Role::ResponderOnly),
        count(Role::Both),
    );
    (summary, roles)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StdEstimator {
    /// `n - 1` denominator.
    #[default]
    Sample,
    /// `n` denominator.
    Population,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary<T> {
    pub mean: Option<T>,
    pub std: Option<T>,
}

pub fn mean_std<T: Scalar>(values: &[T], estimator: StdEstimator) -> Summary<T> {
    let n = values.len();
    if n == 0 {
        return Summary {
            mean: None,
            std: None,
        };
    }
    let mean = values.iter().copied().sum::<T>() / T::from_count(n);
    let denom = match estimator {
        StdEstimator::Sample if n < 2 => {
            return Summary {
                mean: Some(mean),
                std: None,
            }
        }
        StdEstimator::Sample => n - 1,
        StdEstimator::Population => n,
    };
    let sq: T = values.iter().map(|&x| (x - mean) * (x - mean)).sum();
    Summary {
        mean: Some(mean),
        std: Some((sq / T::from_count(denom)).sqrt()),
    }
}

/// Mean and standard deviation of every measure, in [`Measure::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricStats<T> {
    pub estimator: StdEstimator,
    pub entries: Vec<(Measure, Summary<T>)>,
}

impl<T: Scalar> MetricStats<T> {
    pub fn get(&self, measure: Measure) -> Summary<T> {
        self.entries
            .iter()
            .find(|(m, _)| *m == measure)
            .map(|(_, s)| *s)
            .expect("every measure is summarized")
    }
}

pub fn metric_stats<T: Scalar>(
    table: &CentralityTable<T>,
    estimator: StdEstimator,
) -> MetricStats<T> {
    MetricStats {
        estimator,
        entries: Measure::ALL
            .iter()
            .map(|&m| (m, mean_std(table.scores(m), estimator)))
            .collect(),
    }
}

fn is_constant<T: Scalar>(x: &[T]) -> bool {
    x.iter().all(|&v| v == x[0])
}

/// Pearson correlation. `None` when either input is constant or the lengths
/// differ or are below two.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Option<T> {
    if x.len() != y.len() || x.len() < 2 || is_constant(x) || is_constant(y) {
        return None;
    }
    let n = T::from_count(x.len());
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    let denom = (sxx * syy).sqrt();
    if !(denom > T::zero()) {
        return None;
    }
    Some((sxy / denom).max(-T::one()).min(T::one()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix<T> {
    pub labels: [Measure; 6],
    /// `None` marks an undefined coefficient (zero-variance column).
    pub values: [[Option<T>; 6]; 6],
}

impl<T: Scalar> CorrelationMatrix<T> {
    pub fn get(&self, a: Measure, b: Measure) -> Option<T> {
        let i = self.labels.iter().position(|&m| m == a)?;
        let j = self.labels.iter().position(|&m| m == b)?;
        self.values[i][j]
    }
}

/// Pairwise Pearson correlations in [`Measure::CORRELATION_ORDER`]. The
/// matrix is exactly symmetric; defined diagonal entries are exactly 1.
pub fn correlation_matrix<T: Scalar>(
    table: &CentralityTable<T>,
) -> Result<CorrelationMatrix<T>, AnalyticsError> {
    if table.len() < 3 {
        return Err(AnalyticsError::TooFewNodes(table.len()));
    }
    let labels = Measure::CORRELATION_ORDER;
    let columns: Vec<&[T]> = labels.iter().map(|&m| table.scores(m)).collect();
    if columns.iter().all(|c| is_constant(c)) {
        return Err(AnalyticsError::NoVariance);
    }
    let mut values = [[None; 6]; 6];
    for i in 0..6 {
        if !is_constant(columns[i]) {
            values[i][i] = Some(T::one());
        }
        for j in (i + 1)..6 {
            let r = pearson(columns[i], columns[j]);
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrelationMatrix { labels, values })
}
