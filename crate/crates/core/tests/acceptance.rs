//! One line per acceptance criterion. Exits non-zero when any criterion is red.

use std::process::ExitCode;
use std::time::Instant;

use qhred::cech::torsor::torsor_suite;
use qhred::lie::{BackendKind, LieBackend};
use qhred::report::{Check, Expect, Sampling};
use qhred::suites::{
    ad_rule_check, closedness_checks, exactness_checks, hamiltonian_checks, moment_checks, nondegeneracy_checks, quasi_iso_checks,
    structural_checks,
};
use qhred::transgression::{gl1_torus_check, punctured_torus_suite, transgress_circle_theorem};

const TOL: f64 = 1e-9;
const SAMPLES: usize = 200;
const SEED: u64 = 20240917;

fn backends() -> [LieBackend; 2] {
    [LieBackend::new(BackendKind::Sl2).unwrap(), LieBackend::new(BackendKind::Gl(3)).unwrap()]
}

fn sampling() -> Sampling {
    Sampling::new(SAMPLES, TOL, SEED)
}

struct Criterion {
    label: &'static str,
    run: fn() -> Vec<Check>,
}

fn on_both(f: impl Fn(&LieBackend) -> Vec<Check>) -> Vec<Check> {
    backends().iter().flat_map(|b| f(b).into_iter().map(|mut c| {
        c.name = format!("[{}] {}", b.name(), c.name);
        c
    })).collect()
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            label: "1 closedness of omega0 + u omega1 on [G/G] (sl2, gl3; 200 samples; 1e-9)",
            run: || on_both(|b| closedness_checks(b, sampling())),
        },
        Criterion {
            label: "2 torsor associativity, invariant section, multiplicativity and mutation controls",
            run: || on_both(|b| torsor_suite(b, sampling())),
        },
        Criterion {
            label: "3 circle transgression of phi = descent of omega0; pants returns phi exactly",
            run: || on_both(|b| transgress_circle_theorem(b, sampling())),
        },
        Criterion {
            label: "4 punctured torus routes = closed formula (1e-9); gl1 = dlog a ^ dlog b (1e-12)",
            run: || {
                let mut out = on_both(|b| punctured_torus_suite(b, sampling()));
                out.push(gl1_torus_check(Sampling::new(SAMPLES, 1e-12, SEED)));
                out
            },
        },
        Criterion {
            label: "5 moment equations: commutator, genus 1..3, T*g and [g*/G]",
            run: || on_both(|b| {
                let mut out = moment_checks(b, &[1, 2, 3], sampling());
                out.extend(hamiltonian_checks(b, sampling()));
                out
            }),
        },
        Criterion {
            label: "6 nondegeneracy (e + 50), class exactness (e + 20), fused quasi-iso (20 points)",
            run: || on_both(|b| {
                let mut out = nondegeneracy_checks(b, 50, sampling());
                out.extend(exactness_checks(b, 20, sampling()));
                out.extend(quasi_iso_checks(b, 20, sampling()));
                out
            }),
        },
        Criterion {
            label: "7 d(Ad_w beta) rule vs finite differences (100 instances; 1e-6)",
            run: || on_both(|b| vec![ad_rule_check(b, 100, sampling())]),
        },
        Criterion {
            label: "8 structural: d d = 0, delta delta = 0, pullback functoriality, normalize (100 samples)",
            run: || on_both(|b| structural_checks(b, 100, sampling())),
        },
    ]
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut red = 0;
    for c in criteria() {
        let t = Instant::now();
        let checks = (c.run)();
        let bad: Vec<&Check> = checks.iter().filter(|c| !c.passed()).collect();
        let worst = checks
            .iter()
            .filter(|c| c.expect == Expect::Equal)
            .map(|c| c.worst_residual)
            .fold(0.0_f64, f64::max);
        let verdict = if bad.is_empty() && !checks.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {}  [{} checks, worst equality residual {worst:.1e}, {:.1}s]",
            c.label,
            checks.len(),
            t.elapsed().as_secs_f64()
        );
        for b in &bad {
            println!("     red: {} ({:?}, residual {:.3e})", b.name, b.status, b.worst_residual);
        }
        if !bad.is_empty() || checks.is_empty() {
            red += 1;
        }
    }
    println!("acceptance: {} red, {:.1}s total", red, start.elapsed().as_secs_f64());
    if red == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
