//! The standard invariant forms on `G`, `G×G` and their pullbacks along words.

use crate::form::{q, FormError, FormExpr, GroupWord, Shape};

/// `ω₀ = −½(θ + θ̄, x)` on factor `i` of `G^k`, a 1-form linear in the slot.
pub fn omega0_on(k: usize, i: usize, slot: &str) -> Result<FormExpr, FormError> {
    let mc = FormExpr::lmc(k, i)?.add(&FormExpr::rmc(k, i)?)?;
    Ok(FormExpr::pair(&mc, &FormExpr::slot(k, slot))?.scale(q(-1, 2)))
}

/// `ω₁ = (1/12)(θ, [θ, θ])` on factor `i` of `G^k`.
pub fn omega1_on(k: usize, i: usize) -> Result<FormExpr, FormError> {
    let t = FormExpr::lmc(k, i)?;
    Ok(FormExpr::pair(&t, &FormExpr::bracket(&t, &t)?)?.scale(q(1, 12)))
}

/// `φ = −½(θ_i, θ̄_j)` on `G^k`.
pub fn phi_on(k: usize, i: usize, j: usize) -> Result<FormExpr, FormError> {
    Ok(FormExpr::pair(&FormExpr::lmc(k, i)?, &FormExpr::rmc(k, j)?)?.scale(q(-1, 2)))
}

pub fn omega0() -> FormExpr {
    omega0_on(1, 0, "x").expect("valid")
}

pub fn omega1() -> FormExpr {
    omega1_on(1, 0).expect("valid")
}

pub fn phi() -> FormExpr {
    phi_on(2, 0, 1).expect("valid")
}

/// `w*ω₁` for a word `w` in `k` variables.
pub fn omega1_along(w: &GroupWord) -> FormExpr {
    omega1().pullback(std::slice::from_ref(w)).expect("arity 1")
}

/// `φ` pulled back along the map `(u, v)` of two words.
pub fn phi_along(u: &GroupWord, v: &GroupWord) -> FormExpr {
    phi().pullback(&[u.clone(), v.clone()]).expect("arity 2")
}

/// `½ w*(θ + θ̄, x)`.
pub fn half_mc_pair_along(w: &GroupWord, slot: &str) -> FormExpr {
    omega0().pullback(std::slice::from_ref(w)).expect("arity 1").rename_slot("x", slot).expect("slot").neg()
}

/// `dlog a_i ∧ dlog a_j` for the abelian backend gl(1) (basis element `E₁₁`).
pub fn dlog_wedge(k: usize, i: usize, j: usize) -> Result<FormExpr, FormError> {
    let e = FormExpr::basis(k, 0);
    let a = FormExpr::pair(&FormExpr::lmc(k, i)?, &e)?;
    let b = FormExpr::pair(&FormExpr::lmc(k, j)?, &e)?;
    FormExpr::wedge(&a, &b)
}

/// Zero scalar form of the given degree on `G^k`.
pub fn zero_scalar(k: usize, degree: usize) -> FormExpr {
    FormExpr::zero(Shape::scalar(k, degree))
}
