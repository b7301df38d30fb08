//! Randomized identity testing.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::{EvalContext, FormError, FormExpr, Value};
use crate::lie::{mat_rows, trial_seed, GroupPoint, LieBackend, Mat, Sampler, Tangent};

/// Sample at which two evaluations were compared.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub trial: usize,
    pub point: Vec<Vec<Vec<f64>>>,
    pub tangents: Vec<Vec<Vec<Vec<f64>>>>,
    pub slots: BTreeMap<String, Vec<Vec<f64>>>,
    pub lhs: serde_json::Value,
    pub rhs: serde_json::Value,
    pub residual: f64,
}

impl Witness {
    pub fn new(
        trial: usize,
        point: &GroupPoint,
        tangents: &[Tangent],
        slots: &HashMap<String, Mat>,
        lhs: &Value,
        rhs: &Value,
    ) -> Self {
        Self {
            trial,
            point: point.to_rows(),
            tangents: tangents.iter().map(|t| t.components.iter().map(mat_rows).collect()).collect(),
            slots: slots.iter().map(|(k, v)| (k.clone(), mat_rows(v))).collect(),
            lhs: lhs.to_json(),
            rhs: rhs.to_json(),
            residual: residual(lhs, rhs),
        }
    }
}

/// Outcome of a randomized comparison.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub equal: bool,
    pub trials: usize,
    pub worst_residual: f64,
    /// The worst sample when the comparison fails.
    pub witness: Option<Witness>,
}

/// `|a − b| / (1 + max(|a|, |b|))` in the max-entry norm.
pub fn residual(a: &Value, b: &Value) -> f64 {
    a.distance(b) / (1.0 + a.max_abs().max(b.max_abs()))
}

/// Runs `trials` independent samples (in parallel, deterministic per seed) and keeps the worst.
pub fn sweep<F>(trials: usize, seed: u64, tol: f64, f: F) -> Result<Verdict, FormError>
where
    F: Fn(usize, u64) -> Result<Witness, FormError> + Sync,
{
    let results: Vec<Result<Witness, FormError>> =
        (0..trials).into_par_iter().map(|i| f(i, trial_seed(seed, i as u64))).collect();
    let mut worst: Option<Witness> = None;
    for r in results {
        let w = r?;
        let bad = w.residual.is_nan();
        let replace = match &worst {
            None => true,
            Some(cur) => bad && !cur.residual.is_nan() || w.residual > cur.residual,
        };
        if replace {
            worst = Some(w);
        }
    }
    let worst_residual = worst.as_ref().map(|w| w.residual).unwrap_or(0.0);
    let equal = worst_residual.is_finite() && worst_residual < tol;
    Ok(Verdict { equal, trials, worst_residual, witness: if equal { None } else { worst } })
}

/// Random slot values for every name in `names`.
pub fn random_slots(s: &mut Sampler, backend: &LieBackend, names: &BTreeSet<String>) -> HashMap<String, Mat> {
    names.iter().map(|n| (n.clone(), s.lie(backend))).collect()
}

/// Compares two forms at `trials` random points, tangents and slot values.
pub fn equal_numeric(
    e1: &FormExpr,
    e2: &FormExpr,
    backend: &LieBackend,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<Verdict, FormError> {
    if e1.shape() != e2.shape() {
        return Err(FormError::ShapeMismatch { op: "equal_numeric", left: e1.shape(), right: e2.shape() });
    }
    let slots1 = e1.slots();
    let slots2 = e2.slots();
    let names: BTreeSet<String> = slots1.union(&slots2).cloned().collect();
    sweep(trials, seed, tol, |i, s| {
        let mut smp = Sampler::new(s);
        let point = smp.point(backend, e1.arity());
        let tangents = smp.tangents(backend, &point, e1.degree());
        let slots = random_slots(&mut smp, backend, &names);
        let ctx = EvalContext::new(backend, &point, &slots)?;
        let a = ctx.eval(e1, &tangents)?;
        let b = ctx.eval(e2, &tangents)?;
        Ok(Witness::new(i, &point, &tangents, &slots, &a, &b))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{parse_sexpr, FormExpr};
    use crate::lie::BackendKind;

    #[test]
    fn reflexive() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let e = parse_sexpr("(pair (lmc 0) (ad (w 1 -1) (rmc 1)))", None).unwrap();
        let v = equal_numeric(&e, &e, &b, 50, 1e-9, 0).unwrap();
        assert!(v.equal);
        assert_eq!(v.worst_residual, 0.0);
    }

    #[test]
    fn theta_is_not_theta_bar() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let t = FormExpr::lmc(1, 0).unwrap();
        let tb = FormExpr::rmc(1, 0).unwrap();
        let v = equal_numeric(&t, &tb, &b, 20, 1e-9, 0).unwrap();
        assert!(!v.equal);
        assert!(v.witness.is_some());
    }

    #[test]
    fn shape_mismatch_is_distinct() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let t = FormExpr::lmc(1, 0).unwrap();
        let p = FormExpr::pair(&t, &t).unwrap();
        assert!(matches!(equal_numeric(&t, &p, &b, 5, 1e-9, 0), Err(FormError::ShapeMismatch { .. })));
    }

    #[test]
    fn deterministic_per_seed() {
        let b = LieBackend::new(BackendKind::Gl(2)).unwrap();
        let t = FormExpr::lmc(1, 0).unwrap();
        let tb = FormExpr::rmc(1, 0).unwrap();
        let v1 = equal_numeric(&t, &tb, &b, 30, 1e-9, 42).unwrap();
        let v2 = equal_numeric(&t, &tb, &b, 30, 1e-9, 42).unwrap();
        assert_eq!(v1.worst_residual, v2.worst_residual);
        assert_eq!(v1.witness.unwrap().trial, v2.witness.unwrap().trial);
    }
}
