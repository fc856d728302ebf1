//! Dominating cliques in dense random graphs.
//!
//! A dominating clique of a graph is a node set that is simultaneously a
//! maximal clique and a dominating set. In G(n,p) with constant p, whether
//! such a set exists (and at which sizes) undergoes sharp transitions: always
//! for p > 1/2, never for p ≤ (3−√5)/2, and in between only around a critical
//! clique size governed by the exponent α(p) = ln(1−p)/ln(p).
//!
//! The crate provides four interlocking pieces:
//!
//! * [`graph`]: bit-vector graphs and reproducible G(n,p) sampling, with
//!   coupled multi-threshold sampling and exhaustive small-n iteration.
//! * [`exact`]: per-graph counting of maximal and dominating r-cliques,
//!   maximum-clique search, and probability-weighted exhaustive oracles that
//!   compute expectations with no asymptotics at all (n ≤ 6).
//! * [`analytic`]: log-space evaluators for the closed-form expectations,
//!   the clique-number window endpoints, the dominating/maximal ratio, the
//!   phase classifier, and the second-moment machinery behind the bounds.
//! * [`montecarlo`]: deterministic, mergeable trial aggregation whose
//!   results are bit-identical under any partitioning across workers.
//!
//! Everything is a pure function of its inputs; sampling determinism flows
//! from the counter-based generator in [`rng`].

pub mod analytic;
pub mod error;
pub mod exact;
pub mod graph;
pub mod montecarlo;
pub mod rng;

pub use analytic::{AnalyticContext, CriticalSide, OffsetKind, PhaseClass};
pub use error::{Error, Result};
pub use exact::{CliqueCounts, ExhaustiveTally, SizeCounts};
pub use graph::{GnpParams, Graph, NodeSet};
pub use montecarlo::{ConcentrationReport, EstimateWithCI, IntervalMethod, TrialAggregate};
