//! `|Lambda_n^k|` by the divisor-sum formula, checked against enumeration
//! where the enumerator accepts the pair.
//!
//! Usage: `cargo run --example partitions_table -- [N_MAX] [K_MAX]`

use groupdet::partitions::{card_lambda, enumerate_lambda};

/// Largest `k n` confirmed by enumeration; larger pairs take minutes.
const CHECK_LIMIT: u64 = 18;

fn main() -> groupdet::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let n_max = args.first().copied().unwrap_or(9);
    let k_max = args.get(1).copied().unwrap_or(10);
    for n in 1..=n_max {
        let mut row = Vec::new();
        for k in 1..=k_max {
            let c = card_lambda(n, k)?;
            let mark = if k * n <= CHECK_LIMIT {
                assert_eq!(enumerate_lambda(n, k)?.value, c.value, "n={n} k={k}");
                "'"
            } else {
                ""
            };
            row.push(format!("{}{mark}", c.value));
        }
        println!("{n:>3}: {}", row.join(" "));
    }
    println!("' marks values confirmed by enumeration");
    Ok(())
}
