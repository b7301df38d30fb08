//! Pullback, de Rham differential and contraction.

use num_traits::One;

use super::{parity_sign, q, FormError, FormExpr, GroupWord, LieConst, Node, Shape, Valued, Q};

/// Which invariant vector field a Lie element generates on a factor:
/// `L` is `x·a` (generated by left multiplication), `R` is `a·x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    L,
    R,
}

/// `w*θ` for the map `G^k → G` given by `w`.
///
/// Along a product each letter contributes its own pullback twisted by the suffix
/// that follows it: `(uv)*θ = Ad_v(u*θ) + v*θ`, and `(a⁻¹)*θ = −a*θ̄`.
pub fn word_lmc(w: &GroupWord) -> FormExpr {
    let k = w.arity();
    let mut terms = Vec::with_capacity(w.len());
    for (j, &(i, e)) in w.letters().iter().enumerate() {
        let (gen, c) = if e > 0 {
            (FormExpr::lmc(k, i).expect("letter in range"), Q::one())
        } else {
            (FormExpr::rmc(k, i).expect("letter in range"), -Q::one())
        };
        let twisted = FormExpr::ad(&w.suffix(j + 1), &gen).expect("same arity");
        terms.push((c, twisted));
    }
    FormExpr::sum(Shape::lie(k, 1), terms).expect("uniform shape")
}

/// `w*θ̄`: `(uv)*θ̄ = u*θ̄ + Ad_{u⁻¹}(v*θ̄)`, and `(a⁻¹)*θ̄ = −a*θ`.
pub fn word_rmc(w: &GroupWord) -> FormExpr {
    let k = w.arity();
    let mut terms = Vec::with_capacity(w.len());
    for (j, &(i, e)) in w.letters().iter().enumerate() {
        let (gen, c) = if e > 0 {
            (FormExpr::rmc(k, i).expect("letter in range"), Q::one())
        } else {
            (FormExpr::lmc(k, i).expect("letter in range"), -Q::one())
        };
        let twisted = FormExpr::ad(&w.prefix(j).inverse(), &gen).expect("same arity");
        terms.push((c, twisted));
    }
    FormExpr::sum(Shape::lie(k, 1), terms).expect("uniform shape")
}

impl FormExpr {
    /// Pullback along `G^m → G^k` given by `k` words in `m` variables.
    pub fn pullback(&self, map: &[GroupWord]) -> Result<FormExpr, FormError> {
        let m = match map.first() {
            Some(w) => w.arity(),
            None => return Err(FormError::InconsistentMap),
        };
        self.pullback_from(m, map)
    }

    /// Pullback along `G^m → G^k`; unlike [`FormExpr::pullback`] this accepts `k = 0`.
    pub fn pullback_from(&self, m: usize, map: &[GroupWord]) -> Result<FormExpr, FormError> {
        if map.len() != self.arity() {
            return Err(FormError::ArityMismatch { expected: self.arity(), got: map.len() });
        }
        if map.iter().any(|w| w.arity() != m) {
            return Err(FormError::InconsistentMap);
        }
        self.pullback_inner(map, m)
    }

    /// Replaces the slot `name` by a Lie-valued form, raising degrees accordingly.
    ///
    /// Every summand must contain the slot the same number of times.
    pub fn subst_slot_form(&self, name: &str, value: &FormExpr) -> Result<FormExpr, FormError> {
        if value.arity() != self.arity() {
            return Err(FormError::ArityMismatch { expected: self.arity(), got: value.arity() });
        }
        if value.valued() != Valued::Lie {
            return Err(FormError::Valuedness { op: "slot substitution", expected: "Lie-valued", got: value.shape().to_string() });
        }
        Ok(match self.node() {
            Node::Lie(LieConst::Slot(s)) if s == name => value.clone(),
            Node::Lmc(_) | Node::Rmc(_) | Node::Lie(_) | Node::Zero => self.clone(),
            Node::Ad(w, e) => FormExpr::ad(w, &e.subst_slot_form(name, value)?)?,
            Node::Pair(l, r) => FormExpr::pair(&l.subst_slot_form(name, value)?, &r.subst_slot_form(name, value)?)?,
            Node::Bracket(l, r) => {
                FormExpr::bracket(&l.subst_slot_form(name, value)?, &r.subst_slot_form(name, value)?)?
            }
            Node::Wedge(l, r) => FormExpr::wedge(&l.subst_slot_form(name, value)?, &r.subst_slot_form(name, value)?)?,
            Node::Sum(ts) => {
                let terms = ts
                    .iter()
                    .map(|(c, e)| Ok((c.clone(), e.subst_slot_form(name, value)?)))
                    .collect::<Result<Vec<_>, FormError>>()?;
                let shape = terms.first().map(|(_, e)| e.shape()).unwrap_or(self.shape());
                FormExpr::sum(shape, terms)?
            }
        })
    }

    fn pullback_inner(&self, map: &[GroupWord], m: usize) -> Result<FormExpr, FormError> {
        let shape = Shape { arity: m, ..self.shape() };
        Ok(match self.node() {
            Node::Lmc(i) => word_lmc(&map[*i]),
            Node::Rmc(i) => word_rmc(&map[*i]),
            Node::Zero => FormExpr::zero(shape),
            Node::Lie(c) => FormExpr::lie_const(m, c.clone()),
            Node::Ad(w, e) => FormExpr::ad(&w.substitute(map)?, &e.pullback_inner(map, m)?)?,
            Node::Pair(l, r) => FormExpr::pair(&l.pullback_inner(map, m)?, &r.pullback_inner(map, m)?)?,
            Node::Bracket(l, r) => FormExpr::bracket(&l.pullback_inner(map, m)?, &r.pullback_inner(map, m)?)?,
            Node::Wedge(l, r) => FormExpr::wedge(&l.pullback_inner(map, m)?, &r.pullback_inner(map, m)?)?,
            Node::Sum(ts) => FormExpr::sum(
                shape,
                ts.iter()
                    .map(|(c, e)| Ok((c.clone(), e.pullback_inner(map, m)?)))
                    .collect::<Result<_, FormError>>()?,
            )?,
        })
    }

    /// The de Rham differential.
    ///
    /// Generators obey `dθ = −½[θ,θ]`, `dθ̄ = ½[θ̄,θ̄]`; twists obey
    /// `d(Ad_w β) = Ad_w(dβ) − [w*θ, Ad_w β]`; products are graded derivations.
    pub fn de_rham(&self) -> FormExpr {
        let shape = Shape { degree: self.degree() + 1, ..self.shape() };
        let k = self.arity();
        match self.node() {
            Node::Zero | Node::Lie(_) => FormExpr::zero(shape),
            Node::Lmc(_) => FormExpr::bracket(self, self).expect("lie").scale(q(-1, 2)),
            Node::Rmc(_) => FormExpr::bracket(self, self).expect("lie").scale(q(1, 2)),
            Node::Ad(w, b) => {
                let twisted_d = FormExpr::ad(w, &b.de_rham()).expect("lie");
                let corr = FormExpr::bracket(&word_lmc(w), self).expect("lie");
                debug_assert_eq!(corr.arity(), k);
                twisted_d.sub(&corr).expect("same shape")
            }
            Node::Pair(l, r) => leibniz(l, r, FormExpr::pair, shape),
            Node::Bracket(l, r) => leibniz(l, r, FormExpr::bracket, shape),
            Node::Wedge(l, r) => leibniz(l, r, FormExpr::wedge, shape),
            Node::Sum(ts) => FormExpr::sum(shape, ts.iter().map(|(c, e)| (c.clone(), e.de_rham())).collect())
                .expect("uniform shape"),
        }
    }

    /// Contraction with the invariant vector field of `x` on `factor`.
    ///
    /// `ι_{x^R}θ = x`, `ι_{x^L}θ = Ad_a x`, `ι_{x^L}θ̄ = x`, `ι_{x^R}θ̄ = Ad_{a⁻¹} x`.
    pub fn contract(&self, factor: usize, side: Side, x: &LieConst) -> Result<FormExpr, FormError> {
        if self.degree() == 0 {
            return Err(FormError::DegreeZeroContraction);
        }
        if factor >= self.arity() {
            return Err(FormError::IndexOutOfRange { index: factor, arity: self.arity() });
        }
        Ok(self.contract_inner(&[(factor, side, Q::one())], x))
    }

    /// Contraction with a signed sum of invariant vector fields of the same element `x`.
    pub fn contract_field(&self, field: &[(usize, Side, Q)], x: &LieConst) -> Result<FormExpr, FormError> {
        if self.degree() == 0 {
            return Err(FormError::DegreeZeroContraction);
        }
        for &(f, _, _) in field {
            if f >= self.arity() {
                return Err(FormError::IndexOutOfRange { index: f, arity: self.arity() });
            }
        }
        Ok(self.contract_inner(field, x))
    }

    fn contract_inner(&self, field: &[(usize, Side, Q)], x: &LieConst) -> FormExpr {
        let k = self.arity();
        if self.degree() == 0 {
            return FormExpr::zero(self.shape());
        }
        let shape = Shape { degree: self.degree() - 1, ..self.shape() };
        let xe = FormExpr::lie_const(k, x.clone());
        match self.node() {
            Node::Zero | Node::Lie(_) => FormExpr::zero(shape),
            Node::Lmc(i) | Node::Rmc(i) => {
                let left_mc = matches!(self.node(), Node::Lmc(_));
                let terms = field
                    .iter()
                    .filter(|(f, _, _)| f == i)
                    .map(|(_, side, c)| {
                        let v = match (left_mc, side) {
                            (true, Side::R) | (false, Side::L) => xe.clone(),
                            (true, Side::L) => FormExpr::ad(&GroupWord::var(k, *i), &xe).expect("lie"),
                            (false, Side::R) => {
                                FormExpr::ad(&GroupWord::var(k, *i).inverse(), &xe).expect("lie")
                            }
                        };
                        (c.clone(), v)
                    })
                    .collect();
                FormExpr::sum(shape, terms).expect("uniform shape")
            }
            Node::Ad(w, b) => FormExpr::ad(w, &b.contract_inner(field, x)).expect("lie"),
            Node::Pair(l, r) => anti_leibniz(l, r, FormExpr::pair, shape, field, x),
            Node::Bracket(l, r) => anti_leibniz(l, r, FormExpr::bracket, shape, field, x),
            Node::Wedge(l, r) => anti_leibniz(l, r, FormExpr::wedge, shape, field, x),
            Node::Sum(ts) => FormExpr::sum(
                shape,
                ts.iter().map(|(c, e)| (c.clone(), e.contract_inner(field, x))).collect(),
            )
            .expect("uniform shape"),
        }
    }

    /// Pullback along the coordinate projection `G^m → G^k`, `(x_0..x_{m-1}) ↦ (x_{idx[0]}, ..)`.
    pub fn along(&self, m: usize, idx: &[usize]) -> Result<FormExpr, FormError> {
        self.reindex(m, idx)
    }

    /// Whether the form is scalar valued.
    pub fn is_scalar(&self) -> bool {
        self.valued() == Valued::Scalar
    }
}

type Bin = fn(&FormExpr, &FormExpr) -> Result<FormExpr, FormError>;

fn leibniz(l: &FormExpr, r: &FormExpr, op: Bin, shape: Shape) -> FormExpr {
    let a = op(&l.de_rham(), r).expect("shape");
    let b = op(l, &r.de_rham()).expect("shape");
    FormExpr::sum(shape, vec![(Q::one(), a), (parity_sign(l.degree()), b)]).expect("uniform shape")
}

fn anti_leibniz(
    l: &FormExpr,
    r: &FormExpr,
    op: Bin,
    shape: Shape,
    field: &[(usize, Side, Q)],
    x: &LieConst,
) -> FormExpr {
    let mut terms = Vec::new();
    if l.degree() > 0 {
        terms.push((Q::one(), op(&l.contract_inner(field, x), r).expect("shape")));
    }
    if r.degree() > 0 {
        terms.push((parity_sign(l.degree()), op(l, &r.contract_inner(field, x)).expect("shape")));
    }
    FormExpr::sum(shape, terms).expect("uniform shape")
}
