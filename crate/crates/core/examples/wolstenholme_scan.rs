//! Resumable scan for primes with `C(2p - 1, p - 1) = 1 (mod p^4)`.
//!
//! Usage: `cargo run --example wolstenholme_scan -- LO HI [CHECKPOINT]`
//!
//! Interrupt and rerun with the same checkpoint to continue where the last
//! completed chunk ended.

use groupdet::wolstenholme::{classify_prime, scan_range, ScanConfig};

fn main() -> groupdet::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let lo = args.first().map_or(2, |a| a.parse().expect("integer LO"));
    let hi = args.get(1).map_or(20_000, |a| a.parse().expect("integer HI"));
    let mut config = ScanConfig::new(lo, hi);
    if let Some(path) = args.get(2) {
        config = config.with_checkpoint(path);
    }
    let outcome = scan_range(&config)?;
    if let Some(last) = outcome.resumed_after {
        println!("resumed after {last}");
    }
    println!(
        "{} primes in this run, found {:?}",
        outcome.reports.len(),
        outcome.wolstenholme
    );
    for p in &outcome.wolstenholme {
        println!("{}", serde_json::to_string_pretty(&classify_prime(*p)?)?);
    }
    Ok(())
}
