//! Writes powers of a circulant determinant to a cache directory and reads
//! them back, showing that a warm cache performs no multiplications.
//!
//! Usage: `cargo run --example poly_cache -- [N] [K_MAX] [DIR]`

use groupdet::cli::{RunConfig, Runner};

fn main() -> groupdet::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(6, |a| a.parse().expect("integer N"));
    let k_max: u32 = args.get(1).map_or(6, |a| a.parse().expect("integer K_MAX"));
    let dir = match args.get(2) {
        Some(d) => d.into(),
        None => std::env::temp_dir().join("gdet-example-cache"),
    };
    for pass in ["cold", "warm"] {
        let mut runner = Runner::new(RunConfig {
            cache_dir: Some(dir.clone()),
            ..RunConfig::default()
        })?;
        let (table, _) = runner.terms_table(&[n], k_max)?;
        print!("{}", table.csv());
        println!("{pass}: {:?}", runner.stats());
    }
    let mut files: Vec<_> = std::fs::read_dir(&dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e == "gdp"));
    files.sort();
    for path in files {
        let h = groupdet::poly::read_header(&path)?;
        println!("{} -> {} terms, {}", path.display(), h.terms, h.mode);
    }
    Ok(())
}
