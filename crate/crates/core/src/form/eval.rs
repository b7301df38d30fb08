//! Pointwise numeric evaluation.

use std::cell::RefCell;
use std::collections::HashMap;

use super::{q_to_f64, FormError, FormExpr, GroupWord, LieConst, Node, Valued};
use crate::lie::{checked_inverse, GroupPoint, LieBackend, Mat, Tangent, TangentVector};

/// Value of a form on a list of tangent vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(f64),
    Lie(Mat),
}

impl Value {
    pub fn as_scalar(&self) -> f64 {
        match self {
            Value::Scalar(s) => *s,
            Value::Lie(_) => panic!("expected a scalar value"),
        }
    }

    pub fn as_lie(&self) -> &Mat {
        match self {
            Value::Lie(m) => m,
            Value::Scalar(_) => panic!("expected a Lie algebra value"),
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        match self {
            Value::Scalar(s) => s.abs(),
            Value::Lie(m) => m.amax(),
        }
    }

    pub fn distance(&self, other: &Value) -> f64 {
        match (self, other) {
            (Value::Scalar(a), Value::Scalar(b)) => (a - b).abs(),
            (Value::Lie(a), Value::Lie(b)) => (a - b).amax(),
            _ => f64::INFINITY,
        }
    }

    /// `self += c·other`.
    pub fn scaled_add(&mut self, c: f64, other: &Value) {
        match (self, other) {
            (Value::Scalar(a), Value::Scalar(b)) => *a += c * b,
            (Value::Lie(a), Value::Lie(b)) => *a += b * c,
            _ => unreachable!("valuedness checked at construction"),
        }
    }

    pub fn zero_like(&self) -> Value {
        match self {
            Value::Scalar(_) => Value::Scalar(0.0),
            Value::Lie(m) => Value::Lie(Mat::zeros(m.nrows(), m.ncols())),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Scalar(s) => serde_json::json!(s),
            Value::Lie(m) => serde_json::json!(crate::lie::mat_rows(m)),
        }
    }
}

/// A point together with cached inverses, slot bindings and word values.
pub struct EvalContext<'a> {
    backend: &'a LieBackend,
    coords: Vec<Mat>,
    inverses: Vec<Mat>,
    slots: &'a HashMap<String, Mat>,
    words: RefCell<HashMap<GroupWord, (Mat, Mat)>>,
}

impl<'a> EvalContext<'a> {
    pub fn new(
        backend: &'a LieBackend,
        point: &GroupPoint,
        slots: &'a HashMap<String, Mat>,
    ) -> Result<Self, FormError> {
        let n = backend.matrix_size();
        for c in &point.coords {
            if c.nrows() != n || c.ncols() != n {
                return Err(FormError::MatrixSize { expected: n, got: c.nrows() });
            }
        }
        let inverses = point.coords.iter().map(checked_inverse).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { backend, coords: point.coords.clone(), inverses, slots, words: RefCell::new(HashMap::new()) })
    }

    /// Evaluates `e` on full tangent vectors.
    pub fn eval(&self, e: &FormExpr, tangents: &[Tangent]) -> Result<Value, FormError> {
        if e.arity() != self.coords.len() {
            return Err(FormError::PointArity { expected: e.arity(), got: self.coords.len() });
        }
        if tangents.len() != e.degree() {
            return Err(FormError::TangentCount { expected: e.degree(), got: tangents.len() });
        }
        let n = self.backend.matrix_size();
        for t in tangents {
            if t.components.len() != self.coords.len() {
                return Err(FormError::PointArity { expected: self.coords.len(), got: t.components.len() });
            }
            if t.components.iter().any(|c| c.nrows() != n || c.ncols() != n) {
                return Err(FormError::MatrixSize { expected: n, got: t.components[0].nrows() });
            }
        }
        let refs: Vec<&Tangent> = tangents.iter().collect();
        self.ev(e, &refs)
    }

    fn word(&self, w: &GroupWord) -> (Mat, Mat) {
        if let Some(v) = self.words.borrow().get(w) {
            return v.clone();
        }
        let m = w.eval_with(&self.coords, &self.inverses);
        let mi = w.inverse().eval_with(&self.coords, &self.inverses);
        self.words.borrow_mut().insert(w.clone(), (m.clone(), mi.clone()));
        (m, mi)
    }

    fn constant(&self, c: &LieConst) -> Result<Mat, FormError> {
        match c {
            LieConst::Basis(i) => self
                .backend
                .basis()
                .get(*i)
                .cloned()
                .ok_or(FormError::BasisIndex { index: *i, dim: self.backend.dim() }),
            LieConst::Matrix(m) => {
                let n = self.backend.matrix_size();
                if m.nrows() != n || m.ncols() != n {
                    Err(FormError::MatrixSize { expected: n, got: m.nrows() })
                } else {
                    Ok(m.clone())
                }
            }
            LieConst::Slot(s) => self.slots.get(s).cloned().ok_or_else(|| FormError::UnboundSlot(s.clone())),
        }
    }

    fn zero(&self, v: Valued) -> Value {
        let n = self.backend.matrix_size();
        match v {
            Valued::Scalar => Value::Scalar(0.0),
            Valued::Lie => Value::Lie(Mat::zeros(n, n)),
        }
    }

    fn ev(&self, e: &FormExpr, vs: &[&Tangent]) -> Result<Value, FormError> {
        Ok(match e.node() {
            Node::Zero => self.zero(e.valued()),
            Node::Lmc(i) => Value::Lie(&self.inverses[*i] * &vs[0].components[*i]),
            Node::Rmc(i) => Value::Lie(&vs[0].components[*i] * &self.inverses[*i]),
            Node::Lie(c) => Value::Lie(self.constant(c)?),
            Node::Ad(w, b) => {
                let (m, mi) = self.word(w);
                let inner = self.ev(b, vs)?;
                Value::Lie(mi * inner.as_lie() * m)
            }
            Node::Sum(ts) => {
                let mut acc = self.zero(e.valued());
                for (c, t) in ts {
                    acc.scaled_add(q_to_f64(c), &self.ev(t, vs)?);
                }
                acc
            }
            Node::Pair(l, r) => {
                let mut acc = 0.0;
                self.shuffles(l, r, vs, &mut |sign, a, b| {
                    acc += sign * self.backend.pair(a.as_lie(), b.as_lie());
                })?;
                Value::Scalar(acc)
            }
            Node::Bracket(l, r) => {
                let n = self.backend.matrix_size();
                let mut acc = Mat::zeros(n, n);
                self.shuffles(l, r, vs, &mut |sign, a, b| {
                    let (x, y) = (a.as_lie(), b.as_lie());
                    acc += (x * y - y * x) * sign;
                })?;
                Value::Lie(acc)
            }
            Node::Wedge(l, r) => {
                let mut acc = 0.0;
                self.shuffles(l, r, vs, &mut |sign, a, b| {
                    acc += sign * a.as_scalar() * b.as_scalar();
                })?;
                Value::Scalar(acc)
            }
        })
    }

    /// Calls `f(sign, l(v_I), r(v_J))` over all `(p,q)`-shuffles `I ⊔ J`.
    fn shuffles(
        &self,
        l: &FormExpr,
        r: &FormExpr,
        vs: &[&Tangent],
        f: &mut dyn FnMut(f64, &Value, &Value),
    ) -> Result<(), FormError> {
        let p = l.degree();
        let n = vs.len();
        for subset in combinations(n, p) {
            let mut inv = 0usize;
            for (k, &i) in subset.iter().enumerate() {
                inv += i - k;
            }
            let sign = if inv % 2 == 0 { 1.0 } else { -1.0 };
            let left: Vec<&Tangent> = subset.iter().map(|&i| vs[i]).collect();
            let right: Vec<&Tangent> = (0..n).filter(|i| !subset.contains(i)).map(|i| vs[i]).collect();
            let a = self.ev(l, &left)?;
            let b = self.ev(r, &right)?;
            f(sign, &a, &b);
        }
        Ok(())
    }
}

/// All increasing `p`-element subsets of `0..n`.
pub(crate) fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < p - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        go(0, n, p, &mut Vec::new(), &mut out);
    }
    out
}

/// Evaluates `e` at `point` on full tangent vectors.
pub fn eval_full(
    e: &FormExpr,
    backend: &LieBackend,
    point: &GroupPoint,
    tangents: &[Tangent],
    slots: &HashMap<String, Mat>,
) -> Result<Value, FormError> {
    EvalContext::new(backend, point, slots)?.eval(e, tangents)
}

/// Evaluates `e` at `point` on tangent vectors each supported on a single factor.
pub fn eval_at(
    e: &FormExpr,
    backend: &LieBackend,
    point: &GroupPoint,
    tangents: &[TangentVector],
    slots: &HashMap<String, Mat>,
) -> Result<Value, FormError> {
    let k = point.arity();
    let n = backend.matrix_size();
    let full = tangents
        .iter()
        .map(|t| {
            if t.factor >= k {
                Err(FormError::TangentFactor { factor: t.factor, arity: k })
            } else {
                Ok(Tangent::from_single(t, k, n))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    eval_full(e, backend, point, &full, slots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{BackendKind, Sampler};

    fn no_slots() -> HashMap<String, Mat> {
        HashMap::new()
    }

    #[test]
    fn theta_on_unipotent() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let a = Mat::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let xi = Mat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let p = GroupPoint::new(vec![a]);
        let t = FormExpr::lmc(1, 0).unwrap();
        let v = eval_at(&t, &b, &p, &[TangentVector { factor: 0, value: xi.clone() }], &no_slots()).unwrap();
        assert_eq!(v.as_lie(), &xi);
    }

    #[test]
    fn one_form_on_zero_tangent() {
        let b = LieBackend::new(BackendKind::Gl(2)).unwrap();
        let p = Sampler::new(1).point(&b, 1);
        let t = FormExpr::rmc(1, 0).unwrap();
        let v = eval_at(&t, &b, &p, &[TangentVector { factor: 0, value: Mat::zeros(2, 2) }], &no_slots()).unwrap();
        assert_eq!(v.max_abs(), 0.0);
    }

    #[test]
    fn wedge_matches_brute_force() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let mut s = Sampler::new(9);
        let alpha = FormExpr::pair(&FormExpr::lmc(2, 0).unwrap(), &FormExpr::basis(2, 0)).unwrap();
        let beta = FormExpr::pair(&FormExpr::rmc(2, 1).unwrap(), &FormExpr::basis(2, 2)).unwrap();
        let w = FormExpr::wedge(&alpha, &beta).unwrap();
        for _ in 0..20 {
            let p = s.point(&b, 2);
            let v1 = s.tangent(&b, &p);
            let v2 = s.tangent(&b, &p);
            let e = |f: &FormExpr, v: &Tangent| eval_full(f, &b, &p, &[v.clone()], &no_slots()).unwrap().as_scalar();
            let want = e(&alpha, &v1) * e(&beta, &v2) - e(&alpha, &v2) * e(&beta, &v1);
            let got = eval_full(&w, &b, &p, &[v1, v2], &no_slots()).unwrap().as_scalar();
            assert!((want - got).abs() < 1e-12);
        }
    }

    #[test]
    fn errors_on_bad_inputs() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let p = Sampler::new(1).point(&b, 1);
        let e = FormExpr::pair(&FormExpr::lmc(1, 0).unwrap(), &FormExpr::slot(1, "v")).unwrap();
        let v = TangentVector { factor: 0, value: p.coords[0].clone() };
        assert!(matches!(eval_at(&e, &b, &p, &[v.clone()], &no_slots()), Err(FormError::UnboundSlot(_))));
        assert!(matches!(eval_at(&e, &b, &p, &[], &no_slots()), Err(FormError::TangentCount { .. })));
        let bad = TangentVector { factor: 3, value: p.coords[0].clone() };
        assert!(eval_at(&e, &b, &p, &[bad], &no_slots()).is_err());
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
