//! Questioner-responder (QR) network analytics for Stack Exchange data dumps.
//!
//! The pipeline is:
//!
//! 1. [`ingest`] streams `Posts.xml` rows into [`PostRecord`]s.
//! 2. [`qr`] pairs answers with their questions into [`qr::Interaction`]s and
//!    aggregates them into a weighted directed [`qr::QrGraph`], edges pointing
//!    from questioner to responder with weight `1 / (r + epsilon)`.
//! 3. [`centrality`] computes degree, betweenness, closeness, PageRank,
//!    eigenvector and harmonic centrality.
//! 4. [`analytics`] classifies user roles and summarizes the score
//!    distributions and their Pearson correlations.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*F64` and
//! `*F32` aliases below name the common instantiations.

pub mod analytics;
pub mod centrality;
pub mod ids;
pub mod ingest;
pub mod num;
pub mod oracle;
pub mod qr;
pub mod topology;

pub use ids::UserId;
pub use ingest::{IngestStats, PostRecord, PostType};
pub use num::Scalar;

pub type InteractionF64 = qr::Interaction<f64>;
pub type InteractionF32 = qr::Interaction<f32>;
pub type QrGraphF64 = qr::QrGraph<f64>;
pub type QrGraphF32 = qr::QrGraph<f32>;
pub type CentralityTableF64 = centrality::CentralityTable<f64>;
pub type CentralityTableF32 = centrality::CentralityTable<f32>;
pub type MetricStatsF64 = analytics::MetricStats<f64>;
pub type MetricStatsF32 = analytics::MetricStats<f32>;
pub type CorrelationMatrixF64 = analytics::CorrelationMatrix<f64>;
pub type CorrelationMatrixF32 = analytics::CorrelationMatrix<f32>;
