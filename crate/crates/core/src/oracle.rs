//! Finite-difference exterior derivative, independent of the symbolic rules.
//!
//! For left-invariant vector fields `X_i(a) = a·ξ_i` on `G^k`,
//! `dα(X_0..X_p) = Σ (−1)^i X_i(α(..X̂_i..)) + Σ_{i<j} (−1)^{i+j} α([ξ_i,ξ_j], ..X̂_i..X̂_j..)`.
//! Directional derivatives use a fourth-order central stencil along `a·exp(tξ_i)`.

use std::collections::HashMap;

use crate::form::{EvalContext, FormError, FormExpr, Value};
use crate::lie::{commutator, GroupPoint, LieBackend, Mat, Tangent};

pub const FD_STEP: f64 = 1e-3;

fn field(point: &GroupPoint, xi: &[Mat]) -> Tangent {
    Tangent::left_invariant(point, xi)
}

fn moved(point: &GroupPoint, xi: &[Mat], t: f64) -> GroupPoint {
    GroupPoint::new(point.coords.iter().zip(xi).map(|(a, x)| a * (x * t).exp()).collect())
}

fn eval_on_fields(
    e: &FormExpr,
    backend: &LieBackend,
    point: &GroupPoint,
    xis: &[&Vec<Mat>],
    slots: &HashMap<String, Mat>,
) -> Result<Value, FormError> {
    let ctx = EvalContext::new(backend, point, slots)?;
    let ts: Vec<Tangent> = xis.iter().map(|xi| field(point, xi)).collect();
    ctx.eval(e, &ts)
}

/// `dα` evaluated on the left-invariant fields of `xis` (one Lie element per factor each),
/// computed from values of `α` only.
pub fn fd_exterior_derivative(
    e: &FormExpr,
    backend: &LieBackend,
    point: &GroupPoint,
    xis: &[Vec<Mat>],
    slots: &HashMap<String, Mat>,
) -> Result<Value, FormError> {
    let p = e.degree();
    if xis.len() != p + 1 {
        return Err(FormError::TangentCount { expected: p + 1, got: xis.len() });
    }
    let h = FD_STEP;
    let mut acc: Option<Value> = None;
    let mut add = |c: f64, v: Value| match &mut acc {
        Some(a) => a.scaled_add(c, &v),
        None => {
            let mut z = v.zero_like();
            z.scaled_add(c, &v);
            acc = Some(z);
        }
    };
    for i in 0..=p {
        let rest: Vec<&Vec<Mat>> = (0..=p).filter(|&j| j != i).map(|j| &xis[j]).collect();
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        for (t, w) in [(2.0 * h, -1.0), (h, 8.0), (-h, -8.0), (-2.0 * h, 1.0)] {
            let q = moved(point, &xis[i], t);
            let v = eval_on_fields(e, backend, &q, &rest, slots)?;
            add(sign * w / (12.0 * h), v);
        }
    }
    for i in 0..=p {
        for j in (i + 1)..=p {
            let br: Vec<Mat> = xis[i].iter().zip(&xis[j]).map(|(a, b)| commutator(a, b)).collect();
            let mut args: Vec<&Vec<Mat>> = vec![&br];
            args.extend((0..=p).filter(|&k| k != i && k != j).map(|k| &xis[k]));
            let v = eval_on_fields(e, backend, point, &args, slots)?;
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            add(sign, v);
        }
    }
    Ok(acc.expect("at least one term"))
}

/// `dα` from the symbolic rules, evaluated on the same left-invariant fields.
pub fn symbolic_exterior_derivative(
    e: &FormExpr,
    backend: &LieBackend,
    point: &GroupPoint,
    xis: &[Vec<Mat>],
    slots: &HashMap<String, Mat>,
) -> Result<Value, FormError> {
    let refs: Vec<&Vec<Mat>> = xis.iter().collect();
    eval_on_fields(&e.de_rham(), backend, point, &refs, slots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{parse_sexpr, residual};
    use crate::lie::{BackendKind, Sampler};

    #[test]
    fn agrees_on_maurer_cartan_forms() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let mut s = Sampler::new(2);
        for text in ["(pair (lmc 0) (slot x))", "(pair (rmc 0) (slot x))", "(pair (lmc 0) (rmc 0))"] {
            let e = parse_sexpr(text, Some(1)).unwrap();
            for _ in 0..5 {
                let p = s.point(&b, 1);
                let xis: Vec<Vec<Mat>> = (0..=e.degree()).map(|_| vec![s.lie(&b)]).collect();
                let slots = HashMap::from([("x".to_string(), s.lie(&b))]);
                let fd = fd_exterior_derivative(&e, &b, &p, &xis, &slots).unwrap();
                let sy = symbolic_exterior_derivative(&e, &b, &p, &xis, &slots).unwrap();
                assert!(residual(&fd, &sy) < 1e-7, "{text}");
            }
        }
    }
}
