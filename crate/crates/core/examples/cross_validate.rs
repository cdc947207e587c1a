//! Both expansion methods on the cyclic groups up to order 8, plus the
//! identity `N(Theta(C_p)) = (p - 1 + C(2p - 1, p - 1)) / p` for small primes.
//!
//! Usage: `cargo run --example cross_validate`

use std::time::Instant;

use groupdet::det::{group_determinant_with, Method};
use groupdet::group::make_cyclic;
use groupdet::partitions::card_lambda;
use groupdet::poly::{CoefficientMode, MemoryBudget};
use groupdet::wolstenholme::n_theta_via_identity;

fn main() -> groupdet::Result<()> {
    for n in 1..=8 {
        let g = make_cyclic(n)?;
        let t = Instant::now();
        let dp = group_determinant_with(&g, Method::SubsetDp, CoefficientMode::Exact, MemoryBudget::default())?;
        let dp_time = t.elapsed();
        let t = Instant::now();
        let ch = group_determinant_with(&g, Method::Character, CoefficientMode::Exact, MemoryBudget::default())?;
        let ch_time = t.elapsed();
        println!(
            "C{n}: {:>4} terms, equal={} (subset {dp_time:.2?}, character {ch_time:.2?})",
            dp.term_count(),
            dp == ch
        );
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        let g = make_cyclic(p as usize)?;
        let terms = group_determinant_with(&g, Method::Character, CoefficientMode::Exact, MemoryBudget::default())?
            .term_count();
        println!(
            "p={p:>2}: N = {terms}, |Lambda| = {}, identity = {}",
            card_lambda(p, 1)?.value,
            n_theta_via_identity(p)?
        );
    }
    Ok(())
}
