//! Sparse polynomial arithmetic: products, powers, evaluation and the binary
//! format.
//!
//! Usage: `cargo run --example sparse_poly`

use num_bigint::BigInt;

use groupdet::poly::{deserialize, serialize, CoefficientMode, MemoryBudget, SparsePoly};

fn main() -> groupdet::Result<()> {
    let x0 = SparsePoly::variable(3, 0)?;
    let x1 = SparsePoly::variable(3, 1)?;
    let x2 = SparsePoly::variable(3, 2)?;
    let budget = MemoryBudget::default();
    let f = x0.sub(&x1)?.mul(&x0.add(&x1)?, budget)?;
    println!("(x0 - x1)(x0 + x1) = {f}");
    let g = x0.add(&x1)?.add(&x2)?;
    for k in [2, 5, 10] {
        let p = g.pow(k, budget)?;
        println!("(x0 + x1 + x2)^{k}: {} terms, l1 norm {}", p.term_count(), p.l1_norm());
    }
    let p = g.pow(10, budget)?;
    let at = p.evaluate(&[BigInt::from(1), BigInt::from(2), BigInt::from(-1)])?;
    println!("value at (1, 2, -1): {at}");
    let bytes = serialize(&p);
    assert_eq!(deserialize(&bytes)?, p);
    println!("serialized to {} bytes, round trip ok", bytes.len());
    let m = p.to_mode(CoefficientMode::ModPrime)?;
    println!("modular copy: {}", m.count());
    Ok(())
}
