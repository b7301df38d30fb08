//! Named verification suites and the report they produce.

use std::collections::HashMap;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::{omega0, omega1, phi};
use crate::cech::{check_closed_pair, descent_map, Action, CechElement, ClosedPair, Datum};
use crate::form::{equal_numeric, normalize, residual, FormExpr, GroupWord, Verdict, Witness};
use crate::gen::ExprGen;
use crate::lie::{trial_seed, GroupPoint, LieBackend, Mat, Sampler};
use crate::oracle::{fd_exterior_derivative, symbolic_exterior_derivative};
use crate::qham::{self, ExactnessCase, LinearModel, LinearSpace, QHamSpace};
use crate::report::{compare_forms, Check, Expect, Report, RunConfigEcho, Sampling, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Lie,
    Forms,
    Cech,
    Torsor,
    Transgression,
    Qham,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["all", "lie", "forms", "cech", "torsor", "transgression", "qham"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Lie => "lie",
            Suite::Forms => "forms",
            Suite::Cech => "cech",
            Suite::Torsor => "torsor",
            Suite::Transgression => "transgression",
            Suite::Qham => "qham",
        }
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "all" => Suite::All,
            "lie" => Suite::Lie,
            "forms" => Suite::Forms,
            "cech" => Suite::Cech,
            "torsor" => Suite::Torsor,
            "transgression" => Suite::Transgression,
            "qham" => Suite::Qham,
            other => return Err(format!("unknown suite `{other}` (expected one of {})", Suite::NAMES.join(", "))),
        })
    }
}

/// Runs `suite` and assembles the report; check order is fixed, so output is deterministic.
pub fn run(suite: Suite, backend: &LieBackend, s: Sampling) -> Report {
    let checks = match suite {
        Suite::All => [Suite::Lie, Suite::Forms, Suite::Cech, Suite::Torsor, Suite::Transgression, Suite::Qham]
            .iter()
            .enumerate()
            .flat_map(|(i, &x)| checks(x, backend, s.offset(1000 * (i as u64 + 1))))
            .collect(),
        one => checks(one, backend, s),
    };
    let config = RunConfigEcho {
        suite: suite.name().into(),
        backend: backend.name().into(),
        trials: s.trials,
        tol: s.tol,
        seed: s.seed,
    };
    Report::new(config, backend.pairing_normalization(), checks)
}

pub fn checks(suite: Suite, backend: &LieBackend, s: Sampling) -> Vec<Check> {
    match suite {
        Suite::All => run(Suite::All, backend, s).checks,
        Suite::Lie => lie_suite(backend, s),
        Suite::Forms => forms_suite(backend, s),
        Suite::Cech => cech_suite(backend, s),
        Suite::Torsor => crate::cech::torsor::torsor_suite(backend, s),
        Suite::Transgression => {
            let mut out = crate::transgression::transgress_circle_theorem(backend, s);
            out.extend(crate::transgression::punctured_torus_suite(backend, s.offset(50)));
            out
        }
        Suite::Qham => qham_suite(backend, s),
    }
}

fn bound(suite: &str, name: &str, anchor: &str, value: f64, tol: f64) -> Check {
    let status = if value < tol { Status::Pass } else { Status::Fail };
    Check::custom(suite, name, anchor, Expect::Equal, status, value)
}

/// Worst of `n` independent per-sample verdicts.
fn merge(verdicts: Vec<Verdict>, tol: f64) -> Verdict {
    let mut worst: Option<Verdict> = None;
    for v in verdicts {
        if worst.as_ref().map_or(true, |w| v.worst_residual > w.worst_residual || v.worst_residual.is_nan()) {
            worst = Some(v);
        }
    }
    let w = worst.unwrap_or(Verdict { equal: true, trials: 0, worst_residual: 0.0, witness: None });
    let equal = w.worst_residual.is_finite() && w.worst_residual < tol;
    Verdict { equal, trials: w.trials, worst_residual: w.worst_residual, witness: if equal { None } else { w.witness } }
}

/// A property over `n` seeded random instances, each compared at one random sample.
fn sampled<F>(at: (&str, &str, &str), n: usize, s: Sampling, f: F) -> Check
where
    F: Fn(u64) -> Result<Verdict, String> + Sync,
{
    let (suite, name, anchor) = at;
    let results: Result<Vec<Verdict>, String> = (0..n).into_par_iter().map(|i| f(trial_seed(s.seed, i as u64))).collect();
    match results {
        Ok(vs) => {
            let mut v = merge(vs, s.tol);
            v.trials = n;
            Check::equal(suite, name, anchor, v)
        }
        Err(e) => Check::error(suite, name, anchor, e),
    }
}

fn lie_suite(b: &LieBackend, s: Sampling) -> Vec<Check> {
    const SUITE: &str = "lie";
    let tol = 1e-12;
    let mut out = vec![
        bound(SUITE, "antisymmetry of structure constants", "liebracket", b.antisymmetry_residual(), tol),
        bound(SUITE, "Jacobi identity on basis triples", "liebracket", b.jacobi_residual(), tol),
        bound(SUITE, "structure constants reproduce matrix commutators", "liebracket", b.commutator_residual(), tol),
        bound(SUITE, "ad-invariance of the pairing", "invpairing", b.ad_invariance_residual(), tol),
    ];
    let rel = |a: &Mat, c: &Mat| (a - c).amax() / (1.0 + a.amax().max(c.amax()));
    let samples = |k: u64| -> Vec<(Mat, Mat, Mat, Mat)> {
        (0..s.trials)
            .map(|i| {
                let mut smp = Sampler::new(trial_seed(s.offset(k).seed, i as u64));
                let g = b.random_group_element(smp.rng());
                let h = b.random_group_element(smp.rng());
                (g, h, smp.lie(b), smp.lie(b))
            })
            .collect()
    };
    let tol = 1e-10;
    let auto = samples(1)
        .iter()
        .map(|(g, _, x, y)| {
            let l = b.adjoint(g, &b.bracket(x, y)).expect("invertible");
            let r = b.bracket(&b.adjoint(g, x).expect("invertible"), &b.adjoint(g, y).expect("invertible"));
            rel(&l, &r)
        })
        .fold(0.0, f64::max);
    out.push(bound(SUITE, "Ad_g is a Lie algebra automorphism", "adjoint", auto, tol));
    let comp = samples(2)
        .iter()
        .map(|(g, h, x, _)| {
            let l = b.adjoint(g, &b.adjoint(h, x).expect("invertible")).expect("invertible");
            let r = b.adjoint(&(h * g), x).expect("invertible");
            rel(&l, &r)
        })
        .fold(0.0, f64::max);
    out.push(bound(SUITE, "Ad_g Ad_h = Ad_hg", "adjoint", comp, tol));
    let pair = samples(3)
        .iter()
        .map(|(g, _, x, y)| {
            let l = b.pair(&b.adjoint(g, x).expect("invertible"), &b.adjoint(g, y).expect("invertible"));
            let r = b.pair(x, y);
            (l - r).abs() / (1.0 + l.abs().max(r.abs()))
        })
        .fold(0.0, f64::max);
    out.push(bound(SUITE, "pairing is Ad-invariant", "invpairing", pair, tol));
    out
}

/// Instances of `d(Ad_w β) = Ad_w(dβ) − [w*θ, Ad_w β]` checked against finite differences.
pub fn ad_rule_check(b: &LieBackend, n: usize, s: Sampling) -> Check {
    let tol = 1e-6;
    let s = Sampling { tol, ..s };
    sampled(("forms", "d(Ad_w beta) agrees with finite differences", "adrule"), n, s, |seed| {
        let mut g = ExprGen::new(seed, 2, b.dim());
        let w = g.word();
        let deg = (seed % 2) as usize;
        let beta = g.lie(deg, 1);
        let e = FormExpr::pair(&FormExpr::ad(&w, &beta).map_err(|e| e.to_string())?, &FormExpr::slot(2, "x"))
            .map_err(|e| e.to_string())?;
        let mut smp = Sampler::new(seed ^ 0x5a5a);
        let p = smp.point(b, 2);
        let xis: Vec<Vec<Mat>> = (0..=deg).map(|_| vec![smp.lie(b), smp.lie(b)]).collect();
        let slots = HashMap::from([("x".to_string(), smp.lie(b))]);
        let fd = fd_exterior_derivative(&e, b, &p, &xis, &slots).map_err(|e| e.to_string())?;
        let sy = symbolic_exterior_derivative(&e, b, &p, &xis, &slots).map_err(|e| e.to_string())?;
        let ts: Vec<_> = xis.iter().map(|x| crate::lie::Tangent::left_invariant(&p, x)).collect();
        let r = residual(&fd, &sy);
        Ok(Verdict {
            equal: r < tol,
            trials: 1,
            worst_residual: r,
            witness: Some(Witness::new(0, &p, &ts, &slots, &fd, &sy)),
        })
    })
}

/// d² = 0, δ² = 0, pullback functoriality and normalize soundness over `n` random instances.
pub fn structural_checks(b: &LieBackend, n: usize, s: Sampling) -> Vec<Check> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    let cmp = |l: &FormExpr, r: &FormExpr, seed: u64| equal_numeric(l, r, b, 1, s.tol, seed).map_err(|e| err(&e));
    let dd = sampled(("forms", "d d = 0", "structural"), n, s.offset(1), |seed| {
        let e = ExprGen::new(seed, 2, b.dim()).scalar((seed % 3) as usize, 3);
        let dd = e.de_rham().de_rham();
        cmp(&dd, &FormExpr::zero(dd.shape()), seed)
    });
    let delta = sampled(("cech", "delta delta = 0", "structural"), n, s.offset(2), |seed| {
        let a = Action::conjugation(1);
        let level = (seed % 3) as usize;
        let e = ExprGen::new(seed, a.level_arity(level), b.dim()).scalar((seed / 3 % 3) as usize, 2);
        let c = CechElement::nerve(&a, level, e).map_err(|e| err(&e))?;
        let dd = c.cech_differential().and_then(|d| d.cech_differential()).map_err(|e| err(&e))?;
        cmp(&dd.form, &FormExpr::zero(dd.form.shape()), seed)
    });
    let functorial = sampled(("forms", "pullback functoriality", "structural"), n, s.offset(3), |seed| {
        let e = ExprGen::new(seed, 2, b.dim()).scalar((seed % 3) as usize, 2);
        let mut wg = ExprGen::new(seed.rotate_left(7), 2, b.dim());
        let f = vec![wg.word(), wg.word()];
        let mut wg3 = ExprGen::new(seed.rotate_left(13), 3, b.dim());
        let g = vec![wg3.word(), wg3.word()];
        let composed: Vec<GroupWord> = f.iter().map(|w| w.substitute_from(3, &g)).collect::<Result<_, _>>().map_err(|e| err(&e))?;
        let lhs = e.pullback(&f).and_then(|x| x.pullback(&g)).map_err(|e| err(&e))?;
        let rhs = e.pullback_from(3, &composed).map_err(|e| err(&e))?;
        cmp(&lhs, &rhs, seed)
    });
    let chain = sampled(("forms", "pullback commutes with d", "structural"), n, s.offset(4), |seed| {
        let e = ExprGen::new(seed, 2, b.dim()).scalar((seed % 3) as usize, 2);
        let mut wg = ExprGen::new(seed ^ 0xabcdef, 3, b.dim());
        let map = vec![wg.word(), wg.word()];
        let lhs = e.de_rham().pullback_from(3, &map).map_err(|e| err(&e))?;
        let rhs = e.pullback_from(3, &map).map_err(|e| err(&e))?.de_rham();
        cmp(&lhs, &rhs, seed)
    });
    let sound = sampled(("forms", "normalize preserves values", "structural"), n, s.offset(5), |seed| {
        let deg = (seed % 4) as usize;
        let shape = if seed % 2 == 0 { crate::form::Shape::scalar(2, deg) } else { crate::form::Shape::lie(2, deg) };
        let e = ExprGen::new(seed, 2, b.dim()).expr(shape, 3);
        cmp(&e, &normalize(&e), seed)
    });
    vec![dd, delta, functorial, chain, sound]
}

fn forms_suite(b: &LieBackend, s: Sampling) -> Vec<Check> {
    let mut out = vec![ad_rule_check(b, s.trials.min(100).max(1), s.offset(7))];
    out.extend(structural_checks(b, s.trials.min(100).max(1), s));
    out
}

/// The closed pairs on `[G/G]` and `B•G`, descent and linearization.
pub fn closedness_checks(b: &LieBackend, s: Sampling) -> Vec<Check> {
    let mut out = Vec::new();
    let a = Action::conjugation(1);
    let mut push = |label: &str, r: Result<Vec<Check>, crate::cech::CechError>| match r {
        Ok(cs) => out.extend(cs.into_iter().map(|mut c| {
            c.name = format!("{label}: {}", c.name);
            c
        })),
        Err(e) => out.push(Check::error("cech", label, "closedness", e)),
    };
    let cartan = (|| {
        let pair = ClosedPair::new(CechElement::cartan(&a, 1, omega0())?, CechElement::cartan(&a, 0, omega1())?)?;
        check_closed_pair(&pair, b, s)
    })();
    push("Cartan model of [G/G]", cartan);
    let nerve = (|| {
        let d = descent_map(&a, &Datum::Linear(omega0()), b)?.remove(0);
        let pair = ClosedPair::new(d, CechElement::nerve(&a, 0, omega1().neg())?)?;
        check_closed_pair(&pair, b, s.offset(10))
    })();
    push("nerve of [G/G]", nerve);
    let bg = (|| {
        let p = Action::point();
        let pair = ClosedPair::new(CechElement::nerve(&p, 2, phi())?, CechElement::nerve(&p, 1, omega1())?)?;
        check_closed_pair(&pair, b, s.offset(20))
    })();
    push("B G", bg);
    out
}

fn cech_suite(b: &LieBackend, s: Sampling) -> Vec<Check> {
    let mut out = closedness_checks(b, s);
    let a = Action::conjugation(1);
    let at = |n| ("cech", n, "descent");
    match descent_map(&Action::point(), &Datum::Quadratic(crate::form::Q::from_integer(1.into())), b) {
        Ok(v) => out.push(compare_forms(at("quadratic form descends to phi"), Expect::Equal, &v[0].form, &phi(), b, s.offset(30))),
        Err(e) => out.push(Check::error("cech", "quadratic form descends to phi", "descent", e)),
    }
    match descent_map(&a, &Datum::Linear(omega0()), b).and_then(|mut v| v.remove(0).linearize()) {
        Ok(l) => out.push(compare_forms(at("linearization inverts descent of omega0"), Expect::Equal, &l.form, &omega0(), b, s.offset(31))),
        Err(e) => out.push(Check::error("cech", "linearization inverts descent of omega0", "descent", e)),
    }
    out.extend(structural_checks(b, s.trials.min(100).max(1), s.offset(32)).into_iter().filter(|c| c.suite == "cech"));
    out
}

/// A random semisimple element `h exp(D) h⁻¹` with `D` in the diagonal part of the algebra.
pub fn random_semisimple(b: &LieBackend, smp: &mut Sampler) -> Mat {
    let x = smp.lie(b);
    let d = Mat::from_diagonal(&x.diagonal());
    let in_algebra = (b.from_coords(&b.coords(&d)) - &d).amax() < 1e-12 && d.amax() > 1e-3;
    let core = if in_algebra { (d * 1.5).exp() } else { x.exp() };
    let h = b.random_group_element(smp.rng());
    let hi = crate::lie::checked_inverse(&h).expect("invertible");
    h * core * hi
}

/// Moment equations of the commutator and genus-`g` spaces.
pub fn moment_checks(b: &LieBackend, genera: &[usize], s: Sampling) -> Vec<Check> {
    let mut out = qham::moment_check(&qham::commutator_space(), b, s);
    for (i, &g) in genera.iter().enumerate() {
        match qham::genus_surface_space(g) {
            Ok(space) => {
                let mut cs = qham::moment_check(&space, b, s.offset(10 + i as u64));
                if let (Ok(gs), Some(last)) = (space.as_group(), cs.last_mut()) {
                    let m = Sampler::new(trial_seed(s.seed, 77 + g as u64)).point(b, gs.arity());
                    if let Ok(info) = qham::rank::level_set_pairing_rank(gs, &m, b) {
                        let detail = last.detail.take().unwrap_or(serde_json::json!({}));
                        last.detail = Some(serde_json::json!({ "check": detail, "dimension_bookkeeping": info }));
                    }
                }
                out.extend(cs);
            }
            Err(e) => out.push(Check::error(qham::SUITE, &format!("genus {g}"), "momentmap", e)),
        }
    }
    out
}

/// Nondegeneracy at `e` and `n` random points, and its degenerate-pairing control.
pub fn nondegeneracy_checks(b: &LieBackend, n: usize, s: Sampling) -> Vec<Check> {
    let mut points = vec![b.identity()];
    let mut smp = Sampler::new(s.offset(40).seed);
    points.extend((0..n).map(|_| b.random_group_element(smp.rng())));
    let reports: Vec<_> = points.par_iter().map(|a| qham::nondegeneracy_check(b, a)).collect();
    let mut out = Vec::new();
    let mut statuses = Vec::new();
    let mut worst = 0.0_f64;
    let mut first_bad = None;
    for r in reports {
        match r {
            Ok(r) => {
                worst = worst.max(r.identity_residual);
                if r.status != Status::Pass && first_bad.is_none() {
                    first_bad = Some(r.clone());
                }
                statuses.push(r.status);
            }
            Err(e) => return vec![Check::error(qham::SUITE, "nondegeneracy", "nondegeneracy", e)],
        }
    }
    let status = qham::rank::combine(&statuses);
    let mut c = Check::custom(
        qham::SUITE,
        &format!("nondegeneracy of omega0 at e and {n} random points"),
        "nondegeneracy",
        Expect::Rank,
        status,
        worst,
    );
    c.detail = Some(serde_json::json!({ "points": points.len(), "first_non_passing": first_bad }));
    out.push(c);

    let mut p = b.pairing_matrix().clone();
    p.row_mut(0).fill(0.0);
    let bad = b.with_pairing_matrix_unchecked(p);
    match qham::nondegeneracy_check(&bad, &bad.identity()) {
        Ok(r) => {
            let detected = r.status == Status::Fail;
            let c = Check::custom(
                qham::SUITE,
                "nondegeneracy, mutated: degenerate pairing",
                "nondegeneracy",
                Expect::Distinct,
                if detected { Status::Pass } else { Status::Fail },
                r.identity_residual,
            );
            out.push(c.with_detail(serde_json::to_value(&r).expect("serializes")));
        }
        Err(e) => out.push(Check::error(qham::SUITE, "nondegeneracy, mutated: degenerate pairing", "nondegeneracy", e)),
    }
    out
}

fn aggregate(name: &str, anchor: &str, reports: Vec<Result<qham::ExactnessReport, qham::QHamError>>) -> Check {
    let mut statuses = Vec::new();
    let mut first_bad = None;
    let mut worst = 0.0_f64;
    let n = reports.len();
    for r in reports {
        match r {
            Ok(r) => {
                worst = worst.max(r.conditions.iter().map(|c| c.residual).fold(0.0, f64::max));
                if r.status != Status::Pass && first_bad.is_none() {
                    first_bad = Some(r.clone());
                }
                statuses.push(r.status);
            }
            Err(e) => return Check::error(qham::SUITE, name, anchor, e),
        }
    }
    Check::custom(qham::SUITE, name, anchor, Expect::Rank, qham::rank::combine(&statuses), worst)
        .with_detail(serde_json::json!({ "cases": n, "first_non_passing": first_bad }))
}

/// Conjugacy-class exactness at `e` and `n` random semisimple elements.
pub fn exactness_checks(b: &LieBackend, n: usize, s: Sampling) -> Vec<Check> {
    let disk = match qham::lagrangian_exactness_check(&ExactnessCase::Disk, b) {
        Ok(r) => r.to_check("disk: exactness of g[1] -> g[1] + g -> g*"),
        Err(e) => Check::error(qham::SUITE, "disk", "exactness", e),
    };
    let mut smp = Sampler::new(s.offset(41).seed);
    let gs: Vec<Mat> = (0..n).map(|_| random_semisimple(b, &mut smp)).collect();
    let reports = gs.par_iter().map(|g| qham::lagrangian_exactness_check(&ExactnessCase::ConjugacyClass(g.clone()), b)).collect();
    vec![disk, aggregate(&format!("conjugacy class exactness at {n} random semisimple elements"), "exactness", reports)]
}

/// Pointwise quasi-isomorphism for fused spaces at `n` random points.
pub fn quasi_iso_checks(b: &LieBackend, n: usize, s: Sampling) -> Vec<Check> {
    let spaces = [
        qham::commutator_space(),
        qham::genus_surface_space(2).expect("genus 2"),
        qham::fuse(&qham::double_internal(), &qham::double_internal()).expect("fusion"),
    ];
    let mut out = Vec::new();
    for (k, space) in spaces.iter().enumerate() {
        let g = space.as_group().expect("group-valued").clone();
        let mut smp = Sampler::new(s.offset(50 + k as u64).seed);
        let pts: Vec<GroupPoint> = (0..n).map(|_| smp.point(b, g.arity())).collect();
        let reports = pts
            .into_par_iter()
            .map(|m| qham::lagrangian_exactness_check(&ExactnessCase::QHamSpace(Box::new(g.clone()), m), b))
            .collect();
        out.push(aggregate(&format!("{}: quasi-isomorphism at {n} random points", g.name), "quasiiso", reports));
    }
    out
}

/// The Hamiltonian models `T*𝔤` and `[𝔤*/G]`.
pub fn hamiltonian_checks(b: &LieBackend, s: Sampling) -> Vec<Check> {
    let mut out = qham::moment_check(&QHamSpace::Linear(LinearSpace::new(LinearModel::CotangentAdjoint)), b, s);
    let mutated = LinearSpace::with_dropped_term(LinearModel::CotangentAdjoint, 1).moment_check(b, s.offset(1));
    let failing: Vec<&Check> = mutated.iter().filter(|c| !c.passed()).collect();
    let worst = mutated.iter().map(|c| c.worst_residual).fold(0.0, f64::max);
    out.push(
        Check::custom(
            qham::SUITE,
            "cotangent of adjoint, mutated: drop a term of h0",
            "cotangent",
            Expect::Distinct,
            if failing.is_empty() { Status::Fail } else { Status::Pass },
            worst,
        )
        .with_detail(serde_json::json!({ "detected_by": failing.iter().map(|c| c.name.clone()).collect::<Vec<_>>() })),
    );
    out.extend(qham::moment_check(&QHamSpace::Linear(LinearSpace::new(LinearModel::Coadjoint)), b, s.offset(2)));
    out
}

fn qham_suite(b: &LieBackend, s: Sampling) -> Vec<Check> {
    let mut out = moment_checks(b, &[2, 3], s);
    let at = |n| (qham::SUITE, n, "momentmap");

    let comm = qham::commutator_space();
    let comm = comm.as_group().expect("group-valued");
    out.push(compare_forms(
        (qham::SUITE, "commutator: alternative presentation of h0 equals the closed formula", "doublelagr"),
        Expect::Equal,
        &qham::commutator_h0_literal(),
        &comm.h0,
        b,
        s.offset(60),
    ));
    for i in 0..3 {
        let name = format!("commutator, mutated: drop term {i} of h0");
        match qham::drop_term(&comm.h0, i).and_then(|h| comm.with_h0(&name, h)) {
            Ok(m) => out.push(qham::mutation_check(&name, &m, b, s.offset(61 + i as u64))),
            Err(e) => out.push(Check::error(qham::SUITE, &name, "momentmap", e)),
        }
    }
    let mut flipped = comm.clone();
    flipped.epsilon = -flipped.epsilon;
    flipped.name = "commutator with the opposite moment sign".into();
    out.push(qham::mutation_check("commutator: the opposite moment-map sign does not hold", &flipped, b, s.offset(64)));

    out.extend(qham::moment_check(&qham::double_space(), b, s.offset(65)));
    let internal = qham::double_internal();
    out.push(compare_forms(
        at("internal fusion of the double reproduces the commutator h0"),
        Expect::Equal,
        &internal.as_group().expect("group-valued").h0,
        &comm.h0,
        b,
        s.offset(66),
    ));
    match qham::fuse(&qham::double_internal(), &qham::double_internal()) {
        Ok(f) => out.extend(qham::moment_check(&f, b, s.offset(67))),
        Err(e) => out.push(Check::error(qham::SUITE, "fused doubles", "momentmap", e)),
    }
    match qham::fuse(&qham::commutator_space(), &qham::trivial_space()) {
        Ok(f) => out.extend(qham::moment_check(&f, b, s.offset(68))),
        Err(e) => out.push(Check::error(qham::SUITE, "fusion with the trivial space", "momentmap", e)),
    }

    out.extend(hamiltonian_checks(b, s.offset(70)));
    out.extend(nondegeneracy_checks(b, 10, s));
    out.extend(exactness_checks(b, 10, s));
    out.extend(quasi_iso_checks(b, 5, s));
    out.push(crate::transgression::gl1_torus_check(s.offset(80)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::BackendKind;

    #[test]
    fn suite_names_round_trip() {
        for n in Suite::NAMES {
            assert_eq!(n.parse::<Suite>().unwrap().name(), n);
        }
        assert!("e8".parse::<Suite>().is_err());
    }

    #[test]
    fn lie_and_forms_pass_on_sl2() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let r = run(Suite::Lie, &b, Sampling::new(20, 1e-9, 1));
        assert!(!r.has_failures(), "{}", r.to_json());
        let r = run(Suite::Forms, &b, Sampling::new(20, 1e-9, 1));
        assert!(!r.has_failures(), "{}", r.to_json());
    }

    #[test]
    fn cech_suite_passes_on_gl2() {
        let b = LieBackend::new(BackendKind::Gl(2)).unwrap();
        let r = run(Suite::Cech, &b, Sampling::new(20, 1e-9, 2));
        assert!(!r.has_failures(), "{}", r.to_json());
    }

    #[test]
    fn semisimple_samples_have_regular_stabilizers() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let mut s = Sampler::new(9);
        for _ in 0..5 {
            let g = random_semisimple(&b, &mut s);
            assert!((g.determinant() - 1.0).abs() < 1e-9);
        }
    }
}
