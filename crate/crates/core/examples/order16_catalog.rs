//! The fourteen groups of order 16 with their element-order statistics, and
//! the term counts of the order-8 groups.
//!
//! Usage: `cargo run --example order16_catalog [-- --with-order-16]`
//!
//! `--with-order-16` expands every order-16 determinant with modular
//! coefficients; that needs tens of GiB and hours.

use groupdet::det::{group_determinant, Method};
use groupdet::group::{catalog_order16, catalog_order8};
use groupdet::poly::{CoefficientMode, MemoryBudget};

fn main() -> groupdet::Result<()> {
    let heavy = std::env::args().any(|a| a == "--with-order-16");
    for g in catalog_order16()? {
        let (o, i) = g.gap_id().expect("catalogued");
        let stats: Vec<String> = g.order_statistics().iter().map(|(k, v)| format!("{k}^{v}")).collect();
        println!(
            "{o},{i:<3} {:<8} abelian={:<5} valid={} orders {}",
            g.name(),
            g.is_abelian(),
            g.is_valid(),
            stats.join(" ")
        );
    }
    println!();
    for g in catalog_order8()? {
        let t = group_determinant(&g, CoefficientMode::Exact, MemoryBudget::default())?;
        println!(
            "{:<6} {:>5} terms via {}",
            g.name(),
            t.term_count(),
            Method::for_group(&g)
        );
    }
    if heavy {
        for g in catalog_order16()? {
            let t = group_determinant(&g, CoefficientMode::ModPrime, MemoryBudget::unlimited())?;
            println!("{:<8} {}", g.name(), t.count());
        }
    }
    Ok(())
}
