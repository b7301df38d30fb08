//! Moment-map equations, fusion and character-variety builders.
//!
//! A group-valued space is `G^k` with a right action of `G^r` (see [`Action`]),
//! a moment map `μ = (μ₁, …, μ_r)` given by words and a 2-form `h₀`. The moment
//! equations read `ι_{a_j(v)}h₀ = ε·½ μ_j*(θ + θ̄, v)` and `d h₀ = ε·Σ_j μ_j*ω₁`
//! with `ε = −1` for every space built here.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::canonical::{half_mc_pair_along, omega1_along};
use crate::cech::{Action, CechError};
use crate::form::{normalize, q, word_lmc, word_rmc, FormError, FormExpr, GroupWord, LieConst, Shape, Verdict, Witness};
use crate::lie::{LieBackend, Sampler};
use crate::report::{Check, Expect, Sampling};

pub mod linear;
pub mod rank;

pub use linear::{LinearModel, LinearSpace};
pub use rank::{
    lagrangian_exactness_check, nondegeneracy_check, ExactnessCase, ExactnessReport, NondegeneracyReport,
    TangentComplexSnapshot,
};

pub(crate) const SUITE: &str = "qham";

#[derive(Debug, Error)]
pub enum QHamError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Cech(#[from] CechError),
    #[error("flavor mismatch: {0}")]
    Flavor(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    GroupValued,
    LieCoalgebraValued,
}

/// A `G^r`-space `G^k` with a group-valued moment map.
#[derive(Debug, Clone)]
pub struct GroupSpace {
    pub name: String,
    pub action: Action,
    pub moment: Vec<GroupWord>,
    pub h0: FormExpr,
    pub epsilon: i8,
}

#[derive(Debug, Clone)]
pub enum QHamSpace {
    Group(GroupSpace),
    Linear(LinearSpace),
}

impl QHamSpace {
    pub fn flavor(&self) -> Flavor {
        match self {
            QHamSpace::Group(_) => Flavor::GroupValued,
            QHamSpace::Linear(_) => Flavor::LieCoalgebraValued,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            QHamSpace::Group(s) => &s.name,
            QHamSpace::Linear(s) => s.name(),
        }
    }

    pub fn as_group(&self) -> Result<&GroupSpace, QHamError> {
        match self {
            QHamSpace::Group(s) => Ok(s),
            QHamSpace::Linear(s) => Err(QHamError::Flavor(format!("{} is not group-valued", s.name()))),
        }
    }

    /// Descriptor, moment map and `h₀` as JSON.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            QHamSpace::Group(s) => serde_json::json!({
                "name": s.name,
                "flavor": self.flavor(),
                "space": { "group_power": s.action.x_arity(), "acting_rank": s.action.rank, "action": s.action.coords },
                "moment": s.moment.iter().map(GroupWord::to_sexpr).collect::<Vec<_>>(),
                "h0": s.h0.to_sexpr(),
                "epsilon": s.epsilon,
            }),
            QHamSpace::Linear(s) => serde_json::json!({
                "name": s.name(),
                "flavor": self.flavor(),
                "space": s.descriptor(),
                "moment": s.moment_description(),
                "h0": s.h0_description(),
            }),
        }
    }
}

impl GroupSpace {
    pub fn new(name: &str, action: Action, moment: Vec<GroupWord>, h0: FormExpr, epsilon: i8) -> Result<Self, QHamError> {
        let k = action.x_arity();
        if moment.len() != action.rank {
            return Err(QHamError::Shape(format!("{} moment words for a group of rank {}", moment.len(), action.rank)));
        }
        if moment.iter().any(|w| w.arity() != k) {
            return Err(QHamError::Shape(format!("moment words must have arity {k}")));
        }
        if h0.shape() != Shape::scalar(k, 2) {
            return Err(QHamError::Shape(format!("h0 must be a scalar 2-form on G^{k}, got {}", h0.shape())));
        }
        if epsilon.abs() != 1 {
            return Err(QHamError::Invalid(format!("epsilon must be ±1, got {epsilon}")));
        }
        Ok(Self { name: name.into(), action, moment, h0, epsilon })
    }

    pub fn arity(&self) -> usize {
        self.action.x_arity()
    }

    pub fn with_h0(&self, name: &str, h0: FormExpr) -> Result<Self, QHamError> {
        Self::new(name, self.action.clone(), self.moment.clone(), h0, self.epsilon)
    }
}

fn x(k: usize, i: usize) -> GroupWord {
    GroupWord::var(k, i)
}

/// The internal-fusion correction `−ε·½(u*θ, v*θ̄)`.
fn fusion_term(u: &GroupWord, v: &GroupWord, epsilon: i8) -> Result<FormExpr, FormError> {
    Ok(FormExpr::pair(&word_lmc(u), &word_rmc(v))?.scale(q(-i64::from(epsilon), 2)))
}

/// `½(a*θ, b*θ̄) + ½(a*θ̄, b*θ)` on the double `D(G) = G × G`.
pub fn double_h0() -> FormExpr {
    let t = |i| FormExpr::lmc(2, i).expect("valid");
    let tb = |i| FormExpr::rmc(2, i).expect("valid");
    FormExpr::pair(&t(0), &tb(1)).and_then(|l| l.add(&FormExpr::pair(&tb(0), &t(1))?)).expect("valid").scale(q(1, 2))
}

/// The double `D(G)` with `μ(a, b) = (ab, a⁻¹b⁻¹)`.
pub fn double_space() -> QHamSpace {
    let (a, b) = (x(2, 0), x(2, 1));
    let moment = vec![a.mul(&b), a.inverse().mul(&b.inverse())];
    QHamSpace::Group(GroupSpace::new("double", Action::double(), moment, double_h0(), -1).expect("valid"))
}

/// Internal fusion of the double: a space over `G` with `μ = aba⁻¹b⁻¹`.
pub fn double_internal() -> QHamSpace {
    let QHamSpace::Group(d) = double_space() else { unreachable!("double is group-valued") };
    let mut f = fuse_internal(&d, 0, 1).expect("rank 2");
    f.name = "fused double".into();
    QHamSpace::Group(f)
}

/// `G²` with `μ = aba⁻¹b⁻¹` and the three-term `h₀`.
pub fn commutator_space() -> QHamSpace {
    let (a, b) = (x(2, 0), x(2, 1));
    let mu = a.mul(&b).mul(&a.inverse()).mul(&b.inverse());
    let h0 = crate::transgression::double_lagrangian();
    QHamSpace::Group(GroupSpace::new("commutator", Action::conjugation(2), vec![mu], h0, -1).expect("valid"))
}

/// `½(p₁*θ, p₂*θ̄) + ½(p₂*θ, p₁*θ̄) + ½(m*θ, i*m*θ̄)` with `i` the inversion on each factor.
pub fn commutator_h0_literal() -> FormExpr {
    let (a, b) = (x(2, 0), x(2, 1));
    let t = |i| FormExpr::lmc(2, i).expect("valid");
    let tb = |i| FormExpr::rmc(2, i).expect("valid");
    let m = a.mul(&b);
    let im = a.inverse().mul(&b.inverse());
    let terms = vec![
        (q(1, 2), FormExpr::pair(&t(0), &tb(1)).expect("valid")),
        (q(1, 2), FormExpr::pair(&t(1), &tb(0)).expect("valid")),
        (q(1, 2), FormExpr::pair(&word_lmc(&m), &word_rmc(&im)).expect("valid")),
    ];
    FormExpr::sum(Shape::scalar(2, 2), terms).expect("valid")
}

/// `M = pt`, `μ = e`, `h₀ = 0`.
pub fn trivial_space() -> QHamSpace {
    let h0 = FormExpr::zero(Shape::scalar(0, 2));
    QHamSpace::Group(GroupSpace::new("trivial", Action::point(), vec![GroupWord::identity(0)], h0, -1).expect("valid"))
}

/// `M₁ × M₂` acted on by `G^{r₁} × G^{r₂}`.
pub fn product(s1: &GroupSpace, s2: &GroupSpace) -> Result<GroupSpace, QHamError> {
    if s1.epsilon != s2.epsilon {
        return Err(QHamError::Invalid("spaces use different moment-map signs".into()));
    }
    let (k1, k2) = (s1.arity(), s2.arity());
    let k = k1 + k2;
    let vars = GroupWord::vars(k);
    let r1 = s1.action.rank;
    let shift = |c: Option<usize>| c.map(|j| j + r1);
    let mut coords = s1.action.coords.clone();
    coords.extend(s2.action.coords.iter().map(|&(l, r)| (shift(l), shift(r))));
    let action = Action::new(r1 + s2.action.rank, coords)?;
    let mut moment = Vec::new();
    for w in &s1.moment {
        moment.push(w.substitute_from(k, &vars[..k1])?);
    }
    for w in &s2.moment {
        moment.push(w.substitute_from(k, &vars[k1..])?);
    }
    let first: Vec<usize> = (0..k1).collect();
    let second: Vec<usize> = (k1..k).collect();
    let h0 = s1.h0.reindex(k, &first)?.add(&s2.h0.reindex(k, &second)?)?;
    GroupSpace::new(&format!("{} x {}", s1.name, s2.name), action, moment, h0, s1.epsilon)
}

/// Restricts the action of factors `i < j` to the diagonal, with `μ_i ↦ μ_i μ_j`.
pub fn fuse_internal(space: &GroupSpace, i: usize, j: usize) -> Result<GroupSpace, QHamError> {
    let r = space.action.rank;
    if i >= j || j >= r {
        return Err(QHamError::Invalid(format!("cannot fuse factors {i} and {j} of a group of rank {r}")));
    }
    let relabel = |c: Option<usize>| {
        c.map(|f| match f.cmp(&j) {
            std::cmp::Ordering::Equal => i,
            std::cmp::Ordering::Greater => f - 1,
            std::cmp::Ordering::Less => f,
        })
    };
    let coords = space.action.coords.iter().map(|&(l, rr)| (relabel(l), relabel(rr))).collect();
    let action = Action::new(r - 1, coords)?;
    let (mi, mj) = (&space.moment[i], &space.moment[j]);
    let h0 = space.h0.add(&fusion_term(mi, mj, space.epsilon)?)?;
    let mut moment = space.moment.clone();
    moment[i] = mi.mul(mj);
    moment.remove(j);
    GroupSpace::new(&format!("fused({})", space.name), action, moment, h0, space.epsilon)
}

/// Fusion product of two spaces over `G`.
pub fn fuse(s1: &QHamSpace, s2: &QHamSpace) -> Result<QHamSpace, QHamError> {
    let (g1, g2) = (s1.as_group()?, s2.as_group()?);
    if g1.action.rank != 1 || g2.action.rank != 1 {
        return Err(QHamError::Invalid("fuse expects two spaces over G; use fuse_internal for products".into()));
    }
    let mut out = fuse_internal(&product(g1, g2)?, 0, 1)?;
    out.name = format!("fuse({}, {})", g1.name, g2.name);
    Ok(QHamSpace::Group(out))
}

/// Iterated fusion of `g` commutator spaces; `μ` is the product of `g` commutators.
pub fn genus_surface_space(g: usize) -> Result<QHamSpace, QHamError> {
    if g == 0 {
        return Err(QHamError::Invalid("genus must be at least 1".into()));
    }
    let mut out = commutator_space();
    for _ in 1..g {
        out = fuse(&out, &commutator_space())?;
    }
    if let QHamSpace::Group(s) = &mut out {
        s.name = format!("genus {g}");
    }
    Ok(out)
}

/// Equivariance `μ_j(m·g) = g_j⁻¹ μ_j(m) g_j` at random points.
fn equivariance_verdict(space: &GroupSpace, backend: &LieBackend, s: Sampling) -> Result<Verdict, QHamError> {
    let act = &space.action;
    let k = act.level_arity(1);
    let moved = act.face_map(1, 0);
    let vars = GroupWord::vars(k);
    let mut pairs = Vec::new();
    for (j, w) in space.moment.iter().enumerate() {
        let g = x(k, act.x_arity() + j);
        let lhs = w.substitute_from(k, &moved)?;
        let rhs = g.inverse().mul(&w.substitute_from(k, &vars[..act.x_arity()])?).mul(&g);
        pairs.push((lhs, rhs));
    }
    let tol = s.tol.min(1e-10);
    Ok(crate::form::sweep(s.trials, s.seed, tol, |i, seed| {
        let mut smp = Sampler::new(seed);
        let point = smp.point(backend, k);
        let mut worst: Option<Witness> = None;
        for (l, r) in &pairs {
            let a = crate::form::Value::Lie(l.eval(&point).map_err(FormError::from)?);
            let b = crate::form::Value::Lie(r.eval(&point).map_err(FormError::from)?);
            let w = Witness::new(i, &point, &[], &HashMap::new(), &a, &b);
            if worst.as_ref().map_or(true, |c| w.residual > c.residual) {
                worst = Some(w);
            }
        }
        Ok(worst.expect("at least one moment word"))
    })?)
}

/// Compares two forms in the slot `slot` with the slot swept over the backend basis.
pub fn compare_swept(
    at: (&str, &str, &str),
    expect: Expect,
    lhs: &FormExpr,
    rhs: &FormExpr,
    slot: &str,
    backend: &LieBackend,
    s: Sampling,
) -> Check {
    let (suite, name, anchor) = at;
    let mut merged: Option<Verdict> = None;
    for i in 0..backend.dim() {
        let v = (|| {
            let l = lhs.subst_slot(slot, &LieConst::Basis(i))?;
            let r = rhs.subst_slot(slot, &LieConst::Basis(i))?;
            crate::form::equal_numeric(&l, &r, backend, s.trials, s.tol, s.offset(i as u64).seed)
        })();
        let v = match v {
            Ok(v) => v,
            Err(e) => return Check::error(suite, name, anchor, e),
        };
        merged = Some(match merged {
            None => v,
            Some(m) => {
                let worse = v.worst_residual > m.worst_residual;
                Verdict {
                    equal: m.equal && v.equal,
                    trials: m.trials + v.trials,
                    worst_residual: m.worst_residual.max(v.worst_residual),
                    witness: if worse { v.witness.or(m.witness) } else { m.witness.or(v.witness) },
                }
            }
        });
    }
    let v = merged.expect("backend has positive dimension");
    let check = match expect {
        Expect::Distinct => crate::report::undetectable_on(backend, Check::distinct(suite, name, anchor, v)),
        _ => Check::equal(suite, name, anchor, v),
    };
    check.with_detail(serde_json::json!({ "slot": slot, "swept_over_basis": backend.dim() }))
}

/// Both sides of the moment equations of a group-valued space.
pub fn moment_equations(space: &GroupSpace) -> Result<Vec<(String, FormExpr, FormExpr)>, QHamError> {
    let eps = q(i64::from(space.epsilon), 1);
    let k = space.arity();
    let mut out = Vec::new();
    for (j, mu) in space.moment.iter().enumerate() {
        let lhs = space.action.contract_action(&space.h0, j, &LieConst::Slot("v".into()))?;
        let rhs = half_mc_pair_along(mu, "v").scale(eps.clone());
        let label = if space.action.rank == 1 { String::new() } else { format!(" (factor {j})") };
        out.push((format!("i_a(v) h0 = eps/2 mu*(theta + theta bar, v){label}"), lhs, rhs));
    }
    let mut rhs = FormExpr::zero(Shape::scalar(k, 3));
    for mu in &space.moment {
        rhs = rhs.add(&omega1_along(mu))?;
    }
    out.push(("d h0 = eps mu*omega1".to_string(), space.h0.de_rham(), rhs.scale(eps)));
    Ok(out)
}

/// Equivariance and the moment equations, with `v` swept over the backend basis.
pub fn moment_check(space: &QHamSpace, backend: &LieBackend, s: Sampling) -> Vec<Check> {
    match space {
        QHamSpace::Linear(l) => l.moment_check(backend, s),
        QHamSpace::Group(g) => group_moment_check(g, backend, s, Expect::Equal),
    }
}

fn group_moment_check(space: &GroupSpace, backend: &LieBackend, s: Sampling, expect: Expect) -> Vec<Check> {
    let anchor = "momentmap";
    let title = |n: &str| format!("{}: {n}", space.name);
    let mut out = Vec::new();
    match equivariance_verdict(space, backend, s) {
        Ok(v) => out.push(Check::equal(SUITE, &title("equivariance of mu"), anchor, v)),
        Err(e) => out.push(Check::error(SUITE, &title("equivariance of mu"), anchor, e)),
    }
    match moment_equations(space) {
        Ok(eqs) => {
            for (n, (name, lhs, rhs)) in eqs.into_iter().enumerate() {
                // symbolic cancellation first: long words produce large cancelling terms
                let (lhs, rhs) = (normalize(&lhs), normalize(&rhs));
                let c = if lhs.slots().is_empty() {
                    crate::report::compare_forms((SUITE, &title(&name), anchor), expect, &lhs, &rhs, backend, s.offset(n as u64 + 1))
                } else {
                    compare_swept((SUITE, &title(&name), anchor), expect, &lhs, &rhs, "v", backend, s.offset(n as u64 + 1))
                };
                out.push(c);
            }
        }
        Err(e) => out.push(Check::error(SUITE, &title("moment equations"), anchor, e)),
    }
    out
}

/// `h₀` with term `i` of its top-level sum removed.
pub fn drop_term(h0: &FormExpr, i: usize) -> Result<FormExpr, QHamError> {
    match h0.node() {
        crate::form::Node::Sum(terms) if i < terms.len() => {
            let kept = terms.iter().enumerate().filter(|(n, _)| *n != i).map(|(_, t)| t.clone()).collect();
            Ok(FormExpr::sum(h0.shape(), kept)?)
        }
        _ => Err(QHamError::Invalid(format!("h0 has no term {i}"))),
    }
}

/// A mutation control: passes iff some moment equation of the mutated space fails.
pub fn mutation_check(name: &str, mutated: &GroupSpace, backend: &LieBackend, s: Sampling) -> Check {
    let checks = group_moment_check(mutated, backend, s, Expect::Equal);
    let failing: Vec<&Check> = checks.iter().filter(|c| !c.passed() && c.witness.is_some()).collect();
    let worst = checks.iter().map(|c| c.worst_residual).fold(0.0, f64::max);
    let status = if failing.is_empty() { crate::report::Status::Fail } else { crate::report::Status::Pass };
    let mut c = Check::custom(SUITE, name, "momentmap", Expect::Distinct, status, worst);
    c.witness = failing.first().and_then(|f| f.witness.clone());
    let c = c.with_detail(serde_json::json!({
        "detected_by": failing.iter().map(|f| f.name.clone()).collect::<Vec<_>>(),
    }));
    crate::report::undetectable_on(backend, c)
}

/// `h₀` at `a = b = e` on `(ξ₁, ξ₂)` tangents: the value is `(ξ₁ᵃ, ξ₂ᵇ) − (ξ₂ᵃ, ξ₁ᵇ)`.
pub fn identity_point_value(backend: &LieBackend, xi: [&crate::lie::Mat; 4]) -> Result<f64, QHamError> {
    let h0 = crate::transgression::double_lagrangian();
    let point = crate::lie::GroupPoint::identity(backend, 2);
    let t1 = crate::lie::Tangent { components: vec![xi[0].clone(), xi[1].clone()] };
    let t2 = crate::lie::Tangent { components: vec![xi[2].clone(), xi[3].clone()] };
    Ok(crate::form::eval_full(&h0, backend, &point, &[t1, t2], &HashMap::new())?.as_scalar())
}

/// Group words of a space rendered as s-expressions.
pub fn moment_sexprs(space: &GroupSpace) -> Vec<String> {
    space.moment.iter().map(GroupWord::to_sexpr).collect()
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Flavor::GroupValued => write!(f, "group_valued"),
            Flavor::LieCoalgebraValued => write!(f, "lie_coalgebra_valued"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{equal_numeric, normalize};
    use crate::lie::BackendKind;

    fn sl2() -> LieBackend {
        LieBackend::new(BackendKind::Sl2).unwrap()
    }

    fn all_pass(checks: &[Check]) {
        for c in checks {
            assert!(c.passed(), "{}: {:e} {:?}", c.name, c.worst_residual, c.detail);
        }
    }

    #[test]
    fn commutator_and_double_satisfy_moment_equations() {
        let b = sl2();
        all_pass(&moment_check(&commutator_space(), &b, Sampling::new(20, 1e-9, 1)));
        all_pass(&moment_check(&double_space(), &b, Sampling::new(20, 1e-9, 2)));
    }

    #[test]
    fn literal_sign_fails() {
        let b = sl2();
        let QHamSpace::Group(mut s) = commutator_space() else { unreachable!() };
        s.epsilon = 1;
        let checks = moment_check(&QHamSpace::Group(s), &b, Sampling::new(10, 1e-9, 3));
        assert!(checks[0].passed());
        assert!(!checks[1].passed() && !checks[2].passed());
    }

    #[test]
    fn internal_fusion_of_double_is_commutator_space() {
        let QHamSpace::Group(d) = double_space() else { unreachable!() };
        let f = fuse_internal(&d, 0, 1).unwrap();
        let QHamSpace::Group(c) = commutator_space() else { unreachable!() };
        assert_eq!(f.moment, c.moment);
        assert_eq!(f.action, c.action);
        let v = equal_numeric(&f.h0, &c.h0, &sl2(), 20, 1e-10, 4).unwrap();
        assert!(v.equal);
    }

    #[test]
    fn genus_builders() {
        assert!(genus_surface_space(0).is_err());
        let g1 = genus_surface_space(1).unwrap();
        let (g1, c) = (g1.as_group().unwrap().clone(), commutator_space().as_group().unwrap().clone());
        assert_eq!(normalize(&g1.h0), normalize(&c.h0));
        let g2 = genus_surface_space(2).unwrap();
        let g2 = g2.as_group().unwrap();
        assert_eq!(g2.arity(), 4);
        assert_eq!(g2.moment[0].len(), 8);
        all_pass(&moment_check(&QHamSpace::Group(g2.clone()), &sl2(), Sampling::new(10, 1e-9, 5)));
    }

    #[test]
    fn trivial_space_is_a_unit() {
        let b = sl2();
        all_pass(&moment_check(&trivial_space(), &b, Sampling::new(5, 1e-9, 6)));
        let f = fuse(&commutator_space(), &trivial_space()).unwrap();
        let g = f.as_group().unwrap();
        assert!(normalize(&g.h0.sub(&commutator_space().as_group().unwrap().h0).unwrap()).is_zero());
        all_pass(&moment_check(&f, &b, Sampling::new(10, 1e-9, 7)));
    }

    #[test]
    fn dropping_a_term_is_detected() {
        let b = sl2();
        let c = commutator_space();
        let c = c.as_group().unwrap();
        for i in 0..3 {
            let m = c.with_h0("mutated", drop_term(&c.h0, i).unwrap()).unwrap();
            assert!(mutation_check("drop", &m, &b, Sampling::new(10, 1e-9, 8)).passed(), "term {i}");
        }
    }

    #[test]
    fn literal_presentation_differs_from_closed_formula() {
        let b = sl2();
        let v = equal_numeric(&commutator_h0_literal(), &crate::transgression::double_lagrangian(), &b, 20, 1e-9, 9)
            .unwrap();
        assert!(!v.equal);
    }

    #[test]
    fn identity_point_value_is_the_pairing_of_legs() {
        let b = sl2();
        let e = &b.basis()[0];
        let f = &b.basis()[1];
        let h = &b.basis()[2];
        let v = identity_point_value(&b, [e, h, h, f]).unwrap();
        // (ξ₁ᵃ, ξ₂ᵇ) − (ξ₂ᵃ, ξ₁ᵇ) = (e, f) − (h, h) = 1 − 2
        assert!((v - (-1.0)).abs() < 1e-12, "{v}");
    }

    #[test]
    fn fuse_rejects_linear_spaces() {
        let l = QHamSpace::Linear(LinearSpace::new(LinearModel::CotangentAdjoint));
        assert!(matches!(fuse(&l, &commutator_space()), Err(QHamError::Flavor(_))));
        assert!(fuse(&double_space(), &commutator_space()).is_err());
    }

    #[test]
    fn json_descriptor() {
        let j = commutator_space().to_json();
        assert_eq!(j["flavor"], "group_valued");
        assert_eq!(j["moment"][0], moment_sexprs(commutator_space().as_group().unwrap())[0]);
    }
}
