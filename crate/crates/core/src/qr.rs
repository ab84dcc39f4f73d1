//! Questioner-responder network construction.
//!
//! Every answer whose question is present becomes an [`Interaction`]; the
//! interactions are then aggregated per ordered user pair into a [`QrGraph`]
//! whose edge weight is the sum of `1 / (r + epsilon)` over the pair's
//! response times `r`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ids::UserId;
use crate::ingest::{PostRecord, PostType};
use crate::num::Scalar;

pub const DEFAULT_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
    #[error("edge {0} -> {1} is a self-loop")]
    SelfLoop(UserId, UserId),
    #[error("edge {0} -> {1} has non-positive weight")]
    NonPositiveWeight(UserId, UserId),
    #[error("edge {0} -> {1} appears twice")]
    DuplicateEdge(UserId, UserId),
    #[error("edge endpoint {0} is not a node")]
    UnknownNode(UserId),
}

/// Unit in which response times are expressed before weighting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    #[default]
    Hours,
    Minutes,
    Seconds,
}

impl TimeUnit {
    pub fn millis(self) -> f64 {
        match self {
            TimeUnit::Hours => 3_600_000.0,
            TimeUnit::Minutes => 60_000.0,
            TimeUnit::Seconds => 1_000.0,
        }
    }
}

/// Which way an answered question points.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeDirection {
    /// Questioner -> responder.
    #[default]
    QuestionerToResponder,
    ResponderToQuestioner,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interaction<T> {
    pub questioner: UserId,
    pub responder: UserId,
    /// Non-negative, in the unit chosen at derivation time.
    pub response_time: T,
    pub question_id: u64,
    pub answer_id: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnomalyCounts {
    pub negative_response_time: u64,
    pub self_answers: u64,
    pub orphan_answers: u64,
}

/// Pairs answers with their questions.
///
/// Posts may arrive in any order. Answers are dropped (and counted) when the
/// parent question is missing, when they predate the question, or when the
/// question's author answered it.
pub fn derive_interactions<T: Scalar>(
    posts: &[PostRecord],
    unit: TimeUnit,
) -> (Vec<Interaction<T>>, AnomalyCounts) {
    let questions: HashMap<u64, &PostRecord> = posts
        .iter()
        .filter(|p| p.post_type == PostType::Question)
        .map(|p| (p.post_id, p))
        .collect();

    let mut anomalies = AnomalyCounts::default();
    let mut interactions = Vec::new();
    for answer in posts.iter().filter(|p| p.post_type == PostType::Answer) {
        let question = match answer.parent_id.and_then(|id| questions.get(&id)) {
            Some(q) => *q,
            None => {
                anomalies.orphan_answers += 1;
                continue;
            }
        };
        let (Some(questioner), Some(responder)) = (question.owner_user_id, answer.owner_user_id)
        else {
            continue;
        };
        if questioner == responder {
            anomalies.self_answers += 1;
            continue;
        }
        let elapsed = answer.creation_time.millis() - question.creation_time.millis();
        if elapsed < 0 {
            anomalies.negative_response_time += 1;
            continue;
        }
        interactions.push(Interaction {
            questioner,
            responder,
            response_time: T::from_f64_lossy(elapsed as f64 / unit.millis()),
            question_id: question.post_id,
            answer_id: answer.post_id,
        });
    }
    (interactions, anomalies)
}

/// `1 / (r + epsilon)`.
#[inline]
pub fn edge_weight<T: Scalar>(response_time: T, epsilon: T) -> T {
    (response_time + epsilon).recip()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeData<T> {
    pub weight: T,
    pub interaction_count: u64,
}

/// Directed weighted user graph. Nodes are kept in ascending id order.
#[derive(Debug, Clone, PartialEq)]
pub struct QrGraph<T> {
    nodes: Vec<UserId>,
    edges: BTreeMap<(UserId, UserId), EdgeData<T>>,
    epsilon: T,
    pub anomaly_counts: AnomalyCounts,
}

impl<T: Scalar> QrGraph<T> {
    /// Aggregates interactions into edges.
    ///
    /// Each edge's weight is the sum of the per-interaction weights, added
    /// in ascending order so the result does not depend on input order.
    pub fn build(
        interactions: &[Interaction<T>],
        epsilon: T,
        direction: EdgeDirection,
    ) -> Result<Self, GraphError> {
        check_epsilon(epsilon)?;
        let mut grouped: BTreeMap<(UserId, UserId), Vec<T>> = BTreeMap::new();
        let mut nodes = BTreeSet::new();
        for i in interactions {
            let key = match direction {
                EdgeDirection::QuestionerToResponder => (i.questioner, i.responder),
                EdgeDirection::ResponderToQuestioner => (i.responder, i.questioner),
            };
            nodes.insert(i.questioner);
            nodes.insert(i.responder);
            grouped
                .entry(key)
                .or_default()
                .push(edge_weight(i.response_time, epsilon));
        }
        let edges = grouped
            .into_iter()
            .map(|(key, mut weights)| {
                weights.sort_by(|a, b| a.partial_cmp(b).expect("weights are finite"));
                let data = EdgeData {
                    weight: weights.iter().fold(T::zero(), |acc, &w| acc + w),
                    interaction_count: weights.len() as u64,
                };
                (key, data)
            })
            .collect();
        Ok(QrGraph {
            nodes: nodes.into_iter().collect(),
            edges,
            epsilon,
            anomaly_counts: AnomalyCounts::default(),
        })
    }

    /// Builds a graph from explicit nodes and aggregated edges, checking the
    /// graph invariants. Edge endpoints are added to the node set.
    pub fn from_edges(
        nodes: impl IntoIterator<Item = UserId>,
        edges: impl IntoIterator<Item = (UserId, UserId, EdgeData<T>)>,
        epsilon: T,
    ) -> Result<Self, GraphError> {
        check_epsilon(epsilon)?;
        let mut node_set: BTreeSet<UserId> = nodes.into_iter().collect();
        let mut map = BTreeMap::new();
        for (src, dst, data) in edges {
            if src == dst {
                return Err(GraphError::SelfLoop(src, dst));
            }
            if !(data.weight > T::zero()) || data.interaction_count == 0 {
                return Err(GraphError::NonPositiveWeight(src, dst));
            }
            if map.insert((src, dst), data).is_some() {
                return Err(GraphError::DuplicateEdge(src, dst));
            }
            node_set.insert(src);
            node_set.insert(dst);
        }
        Ok(QrGraph {
            nodes: node_set.into_iter().collect(),
            edges: map,
            epsilon,
            anomaly_counts: AnomalyCounts::default(),
        })
    }

    /// Unit-weight graph over `0..n` from index pairs. Handy for tests and
    /// synthetic benchmarks.
    pub fn from_index_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let unit = EdgeData {
            weight: T::one(),
            interaction_count: 1,
        };
        Self::from_edges(
            (0..n as i64).map(UserId),
            edges
                .iter()
                .map(|&(a, b)| (UserId(a as i64), UserId(b as i64), unit)),
            T::from_f64_lossy(DEFAULT_EPSILON),
        )
    }

    pub fn nodes(&self) -> &[UserId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn edge(&self, src: UserId, dst: UserId) -> Option<&EdgeData<T>> {
        self.edges.get(&(src, dst))
    }

    /// Edges in ascending `(src, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = (UserId, UserId, &EdgeData<T>)> + '_ {
        self.edges.iter().map(|(&(s, d), e)| (s, d, e))
    }

    pub fn node_index(&self, id: UserId) -> Option<usize> {
        self.nodes.binary_search(&id).ok()
    }

    pub fn with_anomalies(mut self, anomalies: AnomalyCounts) -> Self {
        self.anomaly_counts = anomalies;
        self
    }
}

fn check_epsilon<T: Scalar>(epsilon: T) -> Result<(), GraphError> {
    if epsilon > T::zero() && epsilon.is_finite() {
        Ok(())
    } else {
        Err(GraphError::InvalidEpsilon(epsilon.to_f64_lossy()))
    }
}
