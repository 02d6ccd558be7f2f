//! Each PE fills a symmetric array with its id and pulls its right-hand
//! neighbour's copy with a one-sided get.
//!
//! ```text
//! cargo run --example ring_copy -- 4
//! ```

fn main() {
    let np: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(4);
    let program = frenz::compile(include_str!("../programs/ring_copy.lol")).expect("ring_copy.lol");
    let result = frenz::spawn(&program, np, 0);
    assert!(result.is_success(), "{:?}", result.outcome);
    for (pe, lines) in result.outputs.iter().enumerate() {
        println!("PE {pe}: array = [{} x {}]", lines[0], lines.len());
    }
}
