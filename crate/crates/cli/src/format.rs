//! Number formatting shared by the CSV and JSON writers.

use phasespace_core::{Complex, Poly};

/// Shortest representation that parses back to the same `f64`.
pub fn float(x: f64) -> String {
    format!("{x:?}")
}

pub fn csv_row(fields: &[f64]) -> String {
    fields
        .iter()
        .map(|&x| float(x))
        .collect::<Vec<_>>()
        .join(",")
}

/// `[re, im]`.
pub fn pair(z: Complex) -> [f64; 2] {
    [z.re, z.im]
}

pub fn poly_pairs(p: &Poly) -> Vec<[f64; 2]> {
    p.coeffs().iter().map(|&c| pair(c)).collect()
}
