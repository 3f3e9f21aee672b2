//! The fourteen acceptance criteria at their stated tolerances, one test per criterion.
//! Each test writes its PASS/FAIL line straight to stderr so it shows without `--nocapture`.

use std::io::Write;

use evolab::verify::{run, Options};

fn criterion(id: &str) {
    let report = run(id, &Options::default()).expect("criterion runs");
    let mut text = format!("\n{}\n", report.summary());
    for c in report.checks.iter().filter(|c| !c.passed()) {
        text.push_str(&format!("    {c}\n"));
    }
    std::io::stderr().write_all(text.as_bytes()).unwrap();
    assert!(report.passed(), "{}", report.summary());
}

#[test]
fn c01_equiangular_spectrum() {
    criterion("equiangular-spectrum");
}

#[test]
fn c02_symmetric_spectrum() {
    criterion("symmetric-spectrum");
}

#[test]
fn c03_quadrilateral_homothety() {
    criterion("quadrilateral-homothety");
}

#[test]
fn c04_grunbaum_pentagon() {
    criterion("grunbaum-pentagon");
}

#[test]
fn c05_degenerate_pentagon() {
    criterion("degenerate-pentagon");
}

#[test]
fn c06_hexagon_duality() {
    criterion("hexagon-duality");
}

#[test]
fn c07_hypocycloid_scalings() {
    criterion("hypocycloid-scalings");
}

#[test]
fn c08_antisymmetry() {
    criterion("antisymmetry");
}

#[test]
fn c09_involute_round_trips() {
    criterion("involute-round-trips");
}

#[test]
fn c10_a_odd_evolvent() {
    criterion("a-odd-evolvent");
}

#[test]
fn c11_ergodic_map() {
    criterion("ergodic-map");
}

#[test]
fn c12_smooth_limits() {
    criterion("smooth-limits");
}

#[test]
fn c13_equiangular_a_limit() {
    criterion("equiangular-a-limit");
}

#[test]
fn c14_evolvent_limits() {
    criterion("evolvent-limits");
}
