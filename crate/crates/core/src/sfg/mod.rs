//! Generating-function machinery: polynomials, rational functions, Markov
//! chains, signal flow graphs and Mason's gain formula.

pub mod chain;
pub mod graph;
pub mod poly;
pub mod rational;
pub mod recurrence;

pub use chain::MarkovChain;
pub use graph::{chain_to_flowgraph, mason_transfer, FlowGraph};
pub use poly::Polynomial;
pub use rational::{pgf_moments, pgf_series, InterRefreshStats, RationalFunction};
pub use recurrence::{
    build_transmitter_chain, inter_refresh_pgf, inter_refresh_pgf_closed_form, inter_refresh_ratio,
    REFRESHED,
};
