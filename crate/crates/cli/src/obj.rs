//! Wavefront OBJ export of the first three coordinates.

use std::fmt::Write as _;

use shapecert::complex::Realization;
use shapecert::rational::Rational;

/// `v` lines for every vertex, `f` lines for every 2-simplex and `l` lines
/// for edges that lie in no 2-simplex. Indices are 1-based.
pub fn to_obj(r: &Realization, places: u32) -> String {
    let c = r.complex();
    let mut out = String::new();
    let zero = Rational::zero();
    for p in r.coords() {
        let xyz: Vec<String> = (0..3)
            .map(|k| p.get(k).unwrap_or(&zero).to_decimal_string(places))
            .collect();
        writeln!(out, "v {}", xyz.join(" ")).unwrap();
    }
    let faces: Vec<&Vec<usize>> = c.simplices_of_dim(2).collect();
    for &(a, b) in c.edges() {
        if !faces.iter().any(|f| f.contains(&a) && f.contains(&b)) {
            writeln!(out, "l {} {}", a + 1, b + 1).unwrap();
        }
    }
    for f in faces {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
    }
    out
}
