#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use shapecert::complex::Realization;
use shapecert_cli::ComplexDescription;

pub const FIXTURES: [&str; 4] = ["triangle", "icosahedron", "four_simplex", "antiprism"];

pub fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.toml"))
}

pub fn load(name: &str) -> ComplexDescription {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    ComplexDescription::parse(&text).unwrap()
}

pub fn realization(d: &ComplexDescription) -> &Realization {
    d.realization.as_ref().expect("fixture has coordinates")
}

pub fn shapecert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shapecert"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}
