//! Term counts of powers of circulant determinants.
//!
//! Usage: `cargo run --release --example cyclic_terms -- N K_MAX`

use std::time::Instant;

use groupdet::det::det_circulant_character;
use groupdet::poly::{CoefficientMode, MemoryBudget};

fn main() -> groupdet::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let n = args.first().copied().unwrap_or(5);
    let k_max = args.get(1).copied().unwrap_or(4) as u32;
    let started = Instant::now();
    let theta = det_circulant_character(n, CoefficientMode::Exact)?;
    println!(
        "Theta(C_{n}) has {} terms ({:.2?})",
        theta.term_count(),
        started.elapsed()
    );
    theta.pow_sequence(k_max, MemoryBudget::default(), |k, p| {
        println!("k = {k:>2}: {:>12} terms ({:.2?})", p.count(), started.elapsed());
        Ok(())
    })?;
    Ok(())
}
