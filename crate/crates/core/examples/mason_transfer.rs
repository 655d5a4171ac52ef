//! Inter-refresh PGF from Mason's gain formula, compared with the closed form,
//! and the first few terms of its distribution.

use aoi_aloha::model::{AccessPolicy, SystemConfig};
use aoi_aloha::sfg::{
    build_transmitter_chain, chain_to_flowgraph, inter_refresh_pgf, inter_refresh_pgf_closed_form,
    pgf_moments, pgf_series, REFRESHED,
};

fn main() -> aoi_aloha::error::Result<()> {
    let config = SystemConfig::new(50, 0.1, 0.25)?;
    let policy = AccessPolicy::new(0.2, 0.05)?;
    let omega = 0.8;

    let chain = build_transmitter_chain(&config, &policy, omega)?;
    let graph = chain_to_flowgraph(&chain, REFRESHED)?;
    for (src, dst, w) in graph.edges() {
        println!("{src:>3} -> {dst:<3} {:?}", w.coeffs());
    }

    let mason = inter_refresh_pgf(&config, &policy, omega)?;
    let closed = inter_refresh_pgf_closed_form(&config, &policy, omega);
    println!("mason  num {:?} den {:?}", mason.num().coeffs(), mason.den().coeffs());
    println!("closed num {:?} den {:?}", closed.num().coeffs(), closed.den().coeffs());

    let m = pgf_moments(&mason)?;
    println!("E[Y]={:.4} E[Y^2]={:.4} ratio={:.4}", m.mean, m.second_moment, m.ratio);
    for (y, p) in pgf_series(&mason, 8)?.iter().enumerate() {
        println!("P(Y={}) = {p:.6}", y + 1);
    }
    Ok(())
}
