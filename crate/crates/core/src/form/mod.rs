//! Symbolic invariant differential forms on powers of a matrix group.
//!
//! Forms are immutable trees built from the Maurer–Cartan generators `θ = a⁻¹da`
//! and `θ̄ = da·a⁻¹` on each factor, Ad-twists by group words, the invariant
//! pairing, the Lie bracket, wedge products and rational linear combinations.
//!
//! Binary products use the shuffle convention without factorial weights:
//! `(α∧β)(v₁,v₂) = α(v₁)β(v₂) − α(v₂)β(v₁)`, and likewise for `(α,β)` and `[α,β]`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lie::{LieError, Mat};

mod calculus;
mod eval;
mod identity;
mod normalize;
mod sexpr;
mod word;

pub use calculus::{word_lmc, word_rmc, Side};
pub use eval::{eval_at, eval_full, EvalContext, Value};
pub use identity::{equal_numeric, residual, sweep, Verdict, Witness};
pub use normalize::normalize;
pub use sexpr::parse_sexpr;
pub use word::GroupWord;

pub type Q = BigRational;

/// Exact rational `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_to_f64(c: &Q) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("word exponent must be ±1, got {0}")]
    BadExponent(i8),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("map words do not share a common source arity")]
    InconsistentMap,
    #[error("{op} expects {expected} operands, got {got}")]
    Valuedness { op: &'static str, expected: &'static str, got: String },
    #[error("shape mismatch in {op}: {left} vs {right}")]
    ShapeMismatch { op: &'static str, left: Shape, right: Shape },
    #[error("contraction of a degree-0 form")]
    DegreeZeroContraction,
    #[error("unbound slot `{0}`")]
    UnboundSlot(String),
    #[error("expected {expected} tangent vectors, got {got}")]
    TangentCount { expected: usize, got: usize },
    #[error("point has {got} factors, form has arity {expected}")]
    PointArity { expected: usize, got: usize },
    #[error("tangent vector on factor {factor} but point has {arity} factors")]
    TangentFactor { factor: usize, arity: usize },
    #[error("basis index {index} out of range for algebra of dimension {dim}")]
    BasisIndex { index: usize, dim: usize },
    #[error("constant matrix has shape {got}x{got}, backend uses {expected}x{expected}")]
    MatrixSize { expected: usize, got: usize },
    #[error("s-expression parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Scalar- or Lie-algebra-valued.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valued {
    Scalar,
    Lie,
}

/// Arity of the source `G^k`, form degree and valuedness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Shape {
    pub valued: Valued,
    pub degree: usize,
    pub arity: usize,
}

impl Shape {
    pub fn scalar(arity: usize, degree: usize) -> Self {
        Self { valued: Valued::Scalar, degree, arity }
    }

    pub fn lie(arity: usize, degree: usize) -> Self {
        Self { valued: Valued::Lie, degree, arity }
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = match self.valued {
            Valued::Scalar => "scalar",
            Valued::Lie => "Lie-valued",
        };
        write!(f, "{v} {}-form on G^{}", self.degree, self.arity)
    }
}

/// A degree-0 Lie-valued constant.
#[derive(Debug, Clone, PartialEq)]
pub enum LieConst {
    /// The `i`-th basis element of the backend.
    Basis(usize),
    /// An explicit matrix.
    Matrix(Mat),
    /// A symbolic element bound at evaluation time.
    Slot(String),
}

#[derive(Debug, Clone)]
pub enum Node {
    Lmc(usize),
    Rmc(usize),
    Ad(GroupWord, FormExpr),
    Pair(FormExpr, FormExpr),
    Bracket(FormExpr, FormExpr),
    Wedge(FormExpr, FormExpr),
    Sum(Vec<(Q, FormExpr)>),
    Lie(LieConst),
    Zero,
}

#[derive(Debug)]
struct Inner {
    node: Node,
    shape: Shape,
}

/// A symbolic differential form on `G^k`; cheap to clone.
#[derive(Debug, Clone)]
pub struct FormExpr(Arc<Inner>);

impl PartialEq for FormExpr {
    /// Structural equality (via the canonical s-expression rendering).
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.shape() == other.shape() && self.to_sexpr() == other.to_sexpr())
    }
}

impl FormExpr {
    fn mk(node: Node, shape: Shape) -> Self {
        Self(Arc::new(Inner { node, shape }))
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn shape(&self) -> Shape {
        self.0.shape
    }

    pub fn degree(&self) -> usize {
        self.0.shape.degree
    }

    pub fn arity(&self) -> usize {
        self.0.shape.arity
    }

    pub fn valued(&self) -> Valued {
        self.0.shape.valued
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0.node, Node::Zero)
    }

    pub fn zero(shape: Shape) -> Self {
        Self::mk(Node::Zero, shape)
    }

    /// `θ` on factor `i` of `G^arity`.
    pub fn lmc(arity: usize, i: usize) -> Result<Self, FormError> {
        if i >= arity {
            return Err(FormError::IndexOutOfRange { index: i, arity });
        }
        Ok(Self::mk(Node::Lmc(i), Shape::lie(arity, 1)))
    }

    /// `θ̄` on factor `i` of `G^arity`.
    pub fn rmc(arity: usize, i: usize) -> Result<Self, FormError> {
        if i >= arity {
            return Err(FormError::IndexOutOfRange { index: i, arity });
        }
        Ok(Self::mk(Node::Rmc(i), Shape::lie(arity, 1)))
    }

    pub fn lie_const(arity: usize, c: LieConst) -> Self {
        Self::mk(Node::Lie(c), Shape::lie(arity, 0))
    }

    pub fn slot(arity: usize, name: &str) -> Self {
        Self::lie_const(arity, LieConst::Slot(name.to_string()))
    }

    pub fn basis(arity: usize, i: usize) -> Self {
        Self::lie_const(arity, LieConst::Basis(i))
    }

    /// `Ad_w(e) = w⁻¹ e w`.
    pub fn ad(w: &GroupWord, e: &FormExpr) -> Result<Self, FormError> {
        e.expect_lie("Ad")?;
        if w.arity() != e.arity() {
            return Err(FormError::ArityMismatch { expected: e.arity(), got: w.arity() });
        }
        if e.is_zero() || w.is_identity() {
            return Ok(e.clone());
        }
        Ok(Self::mk(Node::Ad(w.clone(), e.clone()), e.shape()))
    }

    pub fn pair(l: &FormExpr, r: &FormExpr) -> Result<Self, FormError> {
        l.expect_lie("pair")?;
        r.expect_lie("pair")?;
        let shape = binary_shape("pair", l, r, Valued::Scalar)?;
        if l.is_zero() || r.is_zero() {
            return Ok(Self::zero(shape));
        }
        Ok(Self::mk(Node::Pair(l.clone(), r.clone()), shape))
    }

    pub fn bracket(l: &FormExpr, r: &FormExpr) -> Result<Self, FormError> {
        l.expect_lie("bracket")?;
        r.expect_lie("bracket")?;
        let shape = binary_shape("bracket", l, r, Valued::Lie)?;
        if l.is_zero() || r.is_zero() {
            return Ok(Self::zero(shape));
        }
        Ok(Self::mk(Node::Bracket(l.clone(), r.clone()), shape))
    }

    pub fn wedge(l: &FormExpr, r: &FormExpr) -> Result<Self, FormError> {
        l.expect_scalar("wedge")?;
        r.expect_scalar("wedge")?;
        let shape = binary_shape("wedge", l, r, Valued::Scalar)?;
        if l.is_zero() || r.is_zero() {
            return Ok(Self::zero(shape));
        }
        Ok(Self::mk(Node::Wedge(l.clone(), r.clone()), shape))
    }

    /// Linear combination; every term must have shape `shape`.
    pub fn sum(shape: Shape, terms: Vec<(Q, FormExpr)>) -> Result<Self, FormError> {
        let mut kept = Vec::with_capacity(terms.len());
        for (c, e) in terms {
            if e.shape() != shape {
                return Err(FormError::ShapeMismatch { op: "sum", left: shape, right: e.shape() });
            }
            if c.is_zero() || e.is_zero() {
                continue;
            }
            kept.push((c, e));
        }
        match kept.len() {
            0 => Ok(Self::zero(shape)),
            1 if kept[0].0.is_one() => Ok(kept.pop().unwrap().1),
            _ => Ok(Self::mk(Node::Sum(kept), shape)),
        }
    }

    pub fn scale(&self, c: Q) -> Self {
        Self::sum(self.shape(), vec![(c, self.clone())]).expect("same shape")
    }

    pub fn neg(&self) -> Self {
        self.scale(-Q::one())
    }

    pub fn add(&self, other: &FormExpr) -> Result<Self, FormError> {
        Self::sum(self.shape(), vec![(Q::one(), self.clone()), (Q::one(), other.clone())])
    }

    pub fn sub(&self, other: &FormExpr) -> Result<Self, FormError> {
        Self::sum(self.shape(), vec![(Q::one(), self.clone()), (-Q::one(), other.clone())])
    }

    /// Sum of expressions of a common shape.
    pub fn total(shape: Shape, items: impl IntoIterator<Item = FormExpr>) -> Result<Self, FormError> {
        Self::sum(shape, items.into_iter().map(|e| (Q::one(), e)).collect())
    }

    fn expect_lie(&self, op: &'static str) -> Result<(), FormError> {
        if self.valued() != Valued::Lie {
            return Err(FormError::Valuedness { op, expected: "Lie-valued", got: self.shape().to_string() });
        }
        Ok(())
    }

    fn expect_scalar(&self, op: &'static str) -> Result<(), FormError> {
        if self.valued() != Valued::Scalar {
            return Err(FormError::Valuedness { op, expected: "scalar", got: self.shape().to_string() });
        }
        Ok(())
    }

    /// Names of all symbolic slots.
    pub fn slots(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_slots(&mut out);
        out
    }

    fn collect_slots(&self, out: &mut BTreeSet<String>) {
        match self.node() {
            Node::Lie(LieConst::Slot(s)) => {
                out.insert(s.clone());
            }
            Node::Ad(_, e) => e.collect_slots(out),
            Node::Pair(l, r) | Node::Bracket(l, r) | Node::Wedge(l, r) => {
                l.collect_slots(out);
                r.collect_slots(out);
            }
            Node::Sum(ts) => ts.iter().for_each(|(_, e)| e.collect_slots(out)),
            _ => {}
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Ad(_, e) => 1 + e.size(),
            Node::Pair(l, r) | Node::Bracket(l, r) | Node::Wedge(l, r) => 1 + l.size() + r.size(),
            Node::Sum(ts) => 1 + ts.iter().map(|(_, e)| e.size()).sum::<usize>(),
            _ => 1,
        }
    }

    /// Replaces every Lie constant by `f(constant)`.
    pub fn map_consts(&self, f: &dyn Fn(&LieConst) -> FormExpr) -> Result<Self, FormError> {
        Ok(match self.node() {
            Node::Lie(c) => {
                let r = f(c);
                if r.shape() != self.shape() {
                    return Err(FormError::ShapeMismatch { op: "substitute", left: self.shape(), right: r.shape() });
                }
                r
            }
            Node::Lmc(_) | Node::Rmc(_) | Node::Zero => self.clone(),
            Node::Ad(w, e) => Self::ad(w, &e.map_consts(f)?)?,
            Node::Pair(l, r) => Self::pair(&l.map_consts(f)?, &r.map_consts(f)?)?,
            Node::Bracket(l, r) => Self::bracket(&l.map_consts(f)?, &r.map_consts(f)?)?,
            Node::Wedge(l, r) => Self::wedge(&l.map_consts(f)?, &r.map_consts(f)?)?,
            Node::Sum(ts) => Self::sum(
                self.shape(),
                ts.iter().map(|(c, e)| Ok((c.clone(), e.map_consts(f)?))).collect::<Result<_, FormError>>()?,
            )?,
        })
    }

    /// Substitutes a constant for the slot `name`.
    pub fn subst_slot(&self, name: &str, value: &LieConst) -> Result<Self, FormError> {
        let arity = self.arity();
        self.map_consts(&|c| match c {
            LieConst::Slot(s) if s == name => FormExpr::lie_const(arity, value.clone()),
            other => FormExpr::lie_const(arity, other.clone()),
        })
    }

    /// Renames the slot `from` to `to`.
    pub fn rename_slot(&self, from: &str, to: &str) -> Result<Self, FormError> {
        self.subst_slot(from, &LieConst::Slot(to.to_string()))
    }

    /// Embeds a form on `G^k` into `G^m` along the coordinate inclusion `i ↦ targets[i]`.
    pub fn reindex(&self, m: usize, targets: &[usize]) -> Result<Self, FormError> {
        let map: Vec<GroupWord> = targets
            .iter()
            .map(|&t| GroupWord::new(m, vec![(t, 1)]))
            .collect::<Result<_, _>>()?;
        self.pullback_from(m, &map)
    }
}

fn binary_shape(op: &'static str, l: &FormExpr, r: &FormExpr, valued: Valued) -> Result<Shape, FormError> {
    if l.arity() != r.arity() {
        return Err(FormError::ShapeMismatch { op, left: l.shape(), right: r.shape() });
    }
    Ok(Shape { valued, degree: l.degree() + r.degree(), arity: l.arity() })
}

/// Sign `(-1)^n`.
pub(crate) fn parity_sign(n: usize) -> Q {
    if n % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

pub(crate) fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else if c.is_negative() {
        format!("-{}/{}", c.numer().abs(), c.denom())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}
