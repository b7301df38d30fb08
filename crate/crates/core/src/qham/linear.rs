//! Hamiltonian (`𝔤*`-valued) models on vector spaces, evaluated in coordinates.
//!
//! `𝔤*` is identified with `𝔤` through the invariant pairing, so a covector `p`
//! acts by `y ↦ (p, y)`. The right action on `𝔤` and `𝔤*` is `x ↦ g⁻¹xg`, with
//! infinitesimal action `a(v)x = [x, v]`.

use rayon::prelude::*;
use serde::Serialize;

use super::rank::{rank_status, RankVerdict};
use super::SUITE;
use crate::lie::{checked_inverse, mat_rows, trial_seed, LieBackend, Mat, Sampler};
use crate::report::{Check, Expect, Sampling, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearModel {
    /// `T*V` for `V = 𝔤` with `h₀ = dθ_can` and `μ(q, p)(v) = (p, [q, v])`.
    CotangentAdjoint,
    /// `[𝔤*/G]` with the level-0 form `ω₀(y)(w) = (w, y)`.
    Coadjoint,
}

#[derive(Debug, Clone)]
pub struct LinearSpace {
    pub model: LinearModel,
    /// Index of an `h₀` summand left out (mutation control).
    pub dropped_term: Option<usize>,
}

/// A point `(q, p)` of `T*𝔤 = 𝔤 × 𝔤*` or, for `𝔤*`, just `p`.
#[derive(Debug, Clone)]
struct Pt {
    q: Mat,
    p: Mat,
}

impl Pt {
    fn shift(&self, t: f64, w: &Pt) -> Pt {
        Pt { q: &self.q + &w.q * t, p: &self.p + &w.p * t }
    }

    fn json(&self) -> serde_json::Value {
        serde_json::json!({ "q": mat_rows(&self.q), "p": mat_rows(&self.p) })
    }
}

const FD_STEP: f64 = 0.5;

/// Central difference of `f` along `w`; exact for polynomials of degree ≤ 2.
fn deriv(f: impl Fn(&Pt) -> f64, x: &Pt, w: &Pt) -> f64 {
    (f(&x.shift(FD_STEP, w)) - f(&x.shift(-FD_STEP, w))) / (2.0 * FD_STEP)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

impl LinearSpace {
    pub fn new(model: LinearModel) -> Self {
        Self { model, dropped_term: None }
    }

    pub fn with_dropped_term(model: LinearModel, i: usize) -> Self {
        Self { model, dropped_term: Some(i) }
    }

    pub fn name(&self) -> &str {
        match (self.model, self.dropped_term) {
            (LinearModel::CotangentAdjoint, None) => "cotangent of adjoint",
            (LinearModel::CotangentAdjoint, Some(_)) => "cotangent of adjoint, mutated",
            (LinearModel::Coadjoint, None) => "coadjoint quotient",
            (LinearModel::Coadjoint, Some(_)) => "coadjoint quotient, mutated",
        }
    }

    pub fn descriptor(&self) -> serde_json::Value {
        match self.model {
            LinearModel::CotangentAdjoint => serde_json::json!({ "cotangent": "adjoint" }),
            LinearModel::Coadjoint => serde_json::json!({ "dual": "adjoint" }),
        }
    }

    pub fn moment_description(&self) -> &'static str {
        match self.model {
            LinearModel::CotangentAdjoint => "mu(q, p)(v) = (p, [q, v])",
            LinearModel::Coadjoint => "mu = id",
        }
    }

    pub fn h0_description(&self) -> &'static str {
        match self.model {
            LinearModel::CotangentAdjoint => "d theta_can = (X_p, Y_q) - (Y_p, X_q)",
            LinearModel::Coadjoint => "0; omega0(y)(w) = (w, y)",
        }
    }

    fn h0(&self, b: &LieBackend, _x: &Pt, u: &Pt, w: &Pt) -> f64 {
        let terms = [b.pair(&u.p, &w.q), -b.pair(&w.p, &u.q)];
        terms.iter().enumerate().filter(|(i, _)| Some(*i) != self.dropped_term).map(|(_, t)| t).sum()
    }

    fn theta(&self, b: &LieBackend, x: &Pt, w: &Pt) -> f64 {
        b.pair(&x.p, &w.q)
    }

    fn mu(&self, b: &LieBackend, x: &Pt, v: &Mat) -> f64 {
        b.pair(&x.p, &b.bracket(&x.q, v))
    }

    fn field(&self, b: &LieBackend, x: &Pt, v: &Mat) -> Pt {
        Pt { q: b.bracket(&x.q, v), p: b.bracket(&x.p, v) }
    }

    fn random_pt(&self, b: &LieBackend, s: &mut Sampler) -> Pt {
        let q = s.lie(b);
        let p = s.lie(b);
        match self.model {
            LinearModel::CotangentAdjoint => Pt { q, p },
            LinearModel::Coadjoint => Pt { q: Mat::zeros(q.nrows(), q.ncols()), p },
        }
    }

    /// The Hamiltonian equations of the model, each as a check.
    pub fn moment_check(&self, backend: &LieBackend, s: Sampling) -> Vec<Check> {
        match self.model {
            LinearModel::CotangentAdjoint => self.cotangent_checks(backend, s),
            LinearModel::Coadjoint => self.coadjoint_checks(backend, s),
        }
    }

    fn cotangent_checks(&self, b: &LieBackend, s: Sampling) -> Vec<Check> {
        let basis = b.basis();
        let moment = worst_over(s, 0, |smp| {
            let x = self.random_pt(b, smp);
            let w = self.random_pt(b, smp);
            let mut worst = (0.0, serde_json::Value::Null);
            for v in basis {
                let lhs = -self.h0(b, &x, &self.field(b, &x, v), &w);
                let rhs = deriv(|y| self.mu(b, y, v), &x, &w);
                let r = rel(lhs, rhs);
                if r >= worst.0 {
                    worst = (r, serde_json::json!({ "point": x.json(), "tangent": w.json(), "v": mat_rows(v), "lhs": lhs, "rhs": rhs }));
                }
            }
            worst
        });
        let closed = worst_over(s, 1, |smp| {
            let x = self.random_pt(b, smp);
            let [u, v, w] = [0, 1, 2].map(|_| self.random_pt(b, smp));
            let lhs = deriv(|y| self.h0(b, y, &v, &w), &x, &u) - deriv(|y| self.h0(b, y, &u, &w), &x, &v)
                + deriv(|y| self.h0(b, y, &u, &v), &x, &w);
            (rel(lhs, 0.0), serde_json::json!({ "point": x.json(), "value": lhs }))
        });
        let exact = worst_over(s, 2, |smp| {
            let x = self.random_pt(b, smp);
            let u = self.random_pt(b, smp);
            let v = self.random_pt(b, smp);
            let lhs = self.h0(b, &x, &u, &v);
            let rhs = deriv(|y| self.theta(b, y, &v), &x, &u) - deriv(|y| self.theta(b, y, &u), &x, &v);
            (rel(lhs, rhs), serde_json::json!({ "point": x.json(), "lhs": lhs, "rhs": rhs }))
        });
        let equiv = worst_over(s, 3, |smp| {
            let x = self.random_pt(b, smp);
            let g = b.random_group_element(smp.rng());
            let Ok(gi) = checked_inverse(&g) else { return (f64::NAN, serde_json::Value::Null) };
            let moved = Pt { q: &gi * &x.q * &g, p: &gi * &x.p * &g };
            let mut worst: (f64, serde_json::Value) = (0.0, serde_json::Value::Null);
            for v in b.basis() {
                let lhs = self.mu(b, &moved, v);
                let rhs = self.mu(b, &x, &(&g * v * &gi));
                let r = rel(lhs, rhs);
                if r >= worst.0 {
                    worst = (r, serde_json::json!({ "point": x.json(), "g": mat_rows(&g), "lhs": lhs, "rhs": rhs }));
                }
            }
            worst
        });
        let anchor = "cotangent";
        let name = |n: &str| format!("{}: {n}", self.name());
        vec![
            scalar_check(&name("equivariance of mu (coadjoint)"), anchor, equiv, s.tol.min(1e-10)),
            scalar_check(&name("-i_a(v) h0 = d mu(v)"), anchor, moment, s.tol),
            scalar_check(&name("d h0 = 0"), anchor, closed, s.tol),
            scalar_check(&name("h0 = d theta_can"), anchor, exact, s.tol),
        ]
    }

    fn coadjoint_checks(&self, b: &LieBackend, s: Sampling) -> Vec<Check> {
        let anchor = "coadjoint";
        let name = |n: &str| format!("{}: {n}", self.name());
        let closed = worst_over(s, 0, |smp| {
            let x = self.random_pt(b, smp);
            let (u, v) = (smp.lie(b), smp.lie(b));
            // ι_{a(u)}ω₀(v) + ι_{a(v)}ω₀(u)
            let beta = |u: &Mat, v: &Mat| b.pair(&b.bracket(&x.p, u), v);
            let sym = beta(&u, &v) + beta(&v, &u);
            (rel(sym, 0.0), serde_json::json!({ "point": x.json(), "value": sym }))
        });
        let de_rham = worst_over(s, 1, |smp| {
            let x = self.random_pt(b, smp);
            let (u, v, y) = (self.random_pt(b, smp), self.random_pt(b, smp), smp.lie(b));
            let w0 = |_: &Pt, w: &Pt| b.pair(&w.p, &y);
            let d = deriv(|z| w0(z, &v), &x, &u) - deriv(|z| w0(z, &u), &x, &v);
            (rel(d, 0.0), serde_json::json!({ "point": x.json(), "value": d }))
        });
        let mut out = vec![
            scalar_check(&name("delta omega0 = 0"), anchor, closed, s.tol),
            scalar_check(&name("d omega0 = 0"), anchor, de_rham, s.tol),
        ];
        let mut smp = Sampler::new(trial_seed(s.seed, 99));
        let xi = self.random_pt(b, &mut smp);
        out.push(self.coadjoint_iso(b, &xi.p, s.tol));
        out
    }

    /// `ω₀` as a map of complexes `𝕋 → 𝕃[1]` at `ξ`, with ranks of both vertical maps.
    fn coadjoint_iso(&self, b: &LieBackend, xi: &Mat, tol: f64) -> Check {
        let d = b.dim();
        let pairing = b.pairing_matrix().clone();
        let d_t = nalgebra::DMatrix::from_fn(d, d, |l, j| b.coords(&b.bracket(xi, &b.basis()[j]))[l]);
        let d_l = nalgebra::DMatrix::from_fn(d, d, |l, j| -b.pair(&b.bracket(xi, &b.basis()[l]), &b.basis()[j]));
        let v_minus = nalgebra::DMatrix::<f64>::identity(d, d);
        let square = (&pairing * &d_t - &d_l * &v_minus).amax();
        let r0: RankVerdict = rank_status(&v_minus, d);
        let r1: RankVerdict = rank_status(&pairing, d);
        let status = if !(square < tol) {
            Status::Fail
        } else {
            super::rank::combine(&[r0.status, r1.status])
        };
        Check::custom(SUITE, &format!("{}: omega0 gives T -> L[1] isomorphism", self.name()), "coadjoint", Expect::Rank, status, square)
            .with_detail(serde_json::json!({
                "point": mat_rows(xi),
                "square_residual": square,
                "degree_minus_one": r0,
                "degree_zero": r1,
            }))
    }
}

/// Worst residual over `s.trials` seeded samples (parallel, deterministic).
fn worst_over<F>(s: Sampling, k: u64, f: F) -> (f64, serde_json::Value)
where
    F: Fn(&mut Sampler) -> (f64, serde_json::Value) + Sync,
{
    let seed = s.offset(k).seed;
    let results: Vec<(f64, serde_json::Value)> = (0..s.trials)
        .into_par_iter()
        .map(|i| f(&mut Sampler::new(trial_seed(seed, i as u64))))
        .collect();
    let mut worst = (0.0, serde_json::Value::Null);
    for r in results {
        if r.0.is_nan() || r.0 > worst.0 {
            worst = r;
            if worst.0.is_nan() {
                break;
            }
        }
    }
    worst
}

fn scalar_check(name: &str, anchor: &str, (residual, witness): (f64, serde_json::Value), tol: f64) -> Check {
    let status = if residual < tol { Status::Pass } else { Status::Fail };
    let c = Check::custom(SUITE, name, anchor, Expect::Equal, status, residual);
    if status == Status::Fail {
        c.with_detail(serde_json::json!({ "witness": witness }))
    } else {
        c
    }
}
