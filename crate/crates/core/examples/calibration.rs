//! Recomputes the convention constants from their oracles.
//!
//! Run with `cargo run --example calibration`.

fn main() {
    let cal = btlab::calibration::calibrate();
    println!("{}", serde_json::to_string_pretty(&cal).expect("serialisable"));
}
