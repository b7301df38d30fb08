//! Descent from the Cartan model of `[X/G]` to the nerve, and closed pairs.

use num_traits::One;

use super::{basis_and_dual, half, Action, CechElement, CechError, Presentation};
use crate::form::{FormExpr, GroupWord, Shape, Q};
use crate::lie::LieBackend;
use crate::report::{vanishes, Check, Sampling};

/// An invariant datum on `[X/G]` in Cartan form.
#[derive(Debug, Clone)]
pub enum Datum {
    /// A `G`-invariant form on `X` without slots.
    Invariant(FormExpr),
    /// A form on `X` linear in the slot `x` (a `𝔤*`-valued function or 1-form).
    Linear(FormExpr),
    /// `c·(−,−)` in `Sym²(𝔤*)^G`.
    Quadratic(Q),
}

fn p1(action: &Action, e: &FormExpr) -> Result<FormExpr, CechError> {
    let m = action.x_arity();
    let targets: Vec<usize> = (0..m).collect();
    Ok(e.reindex(action.level_arity(1), &targets)?)
}

/// Images under descent, one element per nonzero level.
///
/// Level 1 uses the right Maurer–Cartan form `θ̄_g` of the group coordinate;
/// the quadratic rule lands in level 2 as `−½c(θ̄_{g₁}, Ad_{g₁⁻¹} θ̄_{g₂})`.
pub fn descent_map(action: &Action, datum: &Datum, backend: &LieBackend) -> Result<Vec<CechElement>, CechError> {
    if action.rank != 1 {
        return Err(CechError::Unsupported(format!("descent for groups of rank {}", action.rank)));
    }
    let m = action.x_arity();
    match datum {
        Datum::Invariant(f) => {
            if !f.slots().is_empty() {
                return Err(CechError::Unsupported("invariant datum with slots".into()));
            }
            Ok(vec![CechElement::nerve(action, 0, f.clone())?])
        }
        Datum::Linear(t) => {
            let names = t.slots();
            if names.len() != 1 || !names.contains("x") || t.arity() != m {
                return Err(CechError::Unsupported("linear datum must be a form on X in the slot `x`".into()));
            }
            let k = action.level_arity(1);
            let g_bar = FormExpr::rmc(k, m)?;
            let form = match t.degree() {
                0 => p1(action, t)?.subst_slot_form("x", &g_bar)?.neg(),
                1 => two_form_rule(action, t, backend, &g_bar)?,
                d => return Err(CechError::Unsupported(format!("linear datum of form degree {d}"))),
            };
            Ok(vec![CechElement::nerve(action, 1, form)?])
        }
        Datum::Quadratic(c) => {
            let k = action.level_arity(2);
            let g1 = GroupWord::var(k, m);
            let rhs = FormExpr::ad(&g1.inverse(), &FormExpr::rmc(k, m + 1)?)?;
            let form = FormExpr::pair(&FormExpr::rmc(k, m)?, &rhs)?.scale(-half() * c.clone());
            Ok(vec![CechElement::nerve(action, 2, form)?])
        }
    }
}

/// `Σᵢ t(eᵢ) ∧ (θ̄_g, eⁱ) − ½ Σᵢⱼ ι_{a(eⱼ)}t(eᵢ) · (θ̄_g, eⁱ) ∧ (θ̄_g, eʲ)`.
fn two_form_rule(action: &Action, t: &FormExpr, backend: &LieBackend, g_bar: &FormExpr) -> Result<FormExpr, CechError> {
    let k = g_bar.arity();
    let (basis, dual) = basis_and_dual(backend);
    let legs: Vec<FormExpr> = dual
        .iter()
        .map(|d| FormExpr::pair(g_bar, &FormExpr::lie_const(k, d.clone())))
        .collect::<Result<_, _>>()?;
    let mut terms = Vec::new();
    for (i, ei) in basis.iter().enumerate() {
        let ti = t.subst_slot("x", ei)?;
        terms.push((Q::one(), FormExpr::wedge(&p1(action, &ti)?, &legs[i])?));
        for (j, ej) in basis.iter().enumerate() {
            let sij = action.contract_action(&ti, 0, ej)?;
            if sij.is_zero() {
                continue;
            }
            let w = FormExpr::wedge(&p1(action, &sij)?, &FormExpr::wedge(&legs[i], &legs[j])?)?;
            terms.push((-half(), w));
        }
    }
    Ok(FormExpr::sum(Shape::scalar(k, 2), terms)?)
}

/// A closed form `ω₀ + uω₁` on `[X/G]`, with `ω₁` one level below `ω₀`.
#[derive(Debug, Clone)]
pub struct ClosedPair {
    pub omega0: CechElement,
    pub omega1: CechElement,
    pub shift: usize,
}

impl ClosedPair {
    pub fn new(omega0: CechElement, omega1: CechElement) -> Result<Self, CechError> {
        if omega0.presentation != omega1.presentation || omega0.action != omega1.action {
            return Err(CechError::Shape("components live in different complexes".into()));
        }
        // a level costs one form degree on the nerve and two in the Cartan model
        let step = match omega0.presentation {
            Presentation::Nerve => 1,
            Presentation::Cartan => 2,
        };
        if omega0.level != omega1.level + 1 || omega1.degree() != omega0.degree() + step {
            return Err(CechError::Shape(format!(
                "expected ω₁ one level lower and {step} form degrees higher; got levels {}/{} degrees {}/{}",
                omega0.level,
                omega1.level,
                omega0.degree(),
                omega1.degree()
            )));
        }
        if omega0.presentation == Presentation::Nerve && omega1.form.arity() + omega0.action.rank != omega0.form.arity()
        {
            return Err(CechError::Shape("arities do not match levels".into()));
        }
        let shift = omega0.level;
        Ok(Self { omega0, omega1, shift })
    }
}

/// Checks `δω₀ = 0`, `d ω₀ + δω₁ = 0` and `d ω₁ = 0`.
pub fn check_closed_pair(pair: &ClosedPair, backend: &LieBackend, s: Sampling) -> Result<Vec<Check>, CechError> {
    let at = |name| ("cech", name, "closedness");
    let d_w0 = pair.omega0.cech_differential()?;
    let mixed = super::combine(&pair.omega0.de_rham(), &pair.omega1.cech_differential()?, Q::one())?;
    let dd_w1 = pair.omega1.de_rham();
    Ok(vec![
        vanishes(at("delta omega0 = 0"), &d_w0.form, backend, s),
        vanishes(at("d omega0 + delta omega1 = 0"), &mixed.form, backend, s.offset(1)),
        vanishes(at("d omega1 = 0"), &dd_w1.form, backend, s.offset(2)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{omega0, omega1, phi};
    use crate::form::{equal_numeric, normalize};
    use crate::lie::BackendKind;

    fn sl2() -> LieBackend {
        LieBackend::new(BackendKind::Sl2).unwrap()
    }

    #[test]
    fn quadratic_descends_to_phi() {
        let b = sl2();
        let out = descent_map(&Action::point(), &Datum::Quadratic(Q::one()), &b).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].level, 2);
        let v = equal_numeric(&out[0].form, &phi(), &b, 30, 1e-10, 4).unwrap();
        assert!(v.equal);
    }

    #[test]
    fn zero_datum_descends_to_zero() {
        let b = sl2();
        let a = Action::conjugation(1);
        let z = FormExpr::zero(Shape::scalar(1, 1));
        let out = descent_map(&a, &Datum::Invariant(z), &b).unwrap();
        assert!(out[0].form.is_zero());
        let q0 = descent_map(&Action::point(), &Datum::Quadratic(Q::from_integer(0.into())), &b).unwrap();
        assert!(normalize(&q0[0].form).is_zero());
    }

    #[test]
    fn omega0_descent_is_a_cocycle() {
        let b = sl2();
        let a = Action::conjugation(1);
        let d = descent_map(&a, &Datum::Linear(omega0()), &b).unwrap().remove(0);
        let dd = d.cech_differential().unwrap();
        assert!(equal_numeric(&dd.form, &FormExpr::zero(dd.form.shape()), &b, 30, 1e-9, 5).unwrap().equal);
    }

    #[test]
    fn linearization_inverts_descent_on_linear_data() {
        let b = sl2();
        let a = Action::conjugation(1);
        let d = descent_map(&a, &Datum::Linear(omega0()), &b).unwrap().remove(0);
        let lin = d.linearize().unwrap();
        assert!(equal_numeric(&lin.form, &omega0(), &b, 30, 1e-9, 6).unwrap().equal);
    }

    #[test]
    fn closed_pairs_on_adjoint_quotient() {
        let b = sl2();
        let a = Action::conjugation(1);
        let w0 = CechElement::cartan(&a, 1, omega0()).unwrap();
        let w1 = CechElement::cartan(&a, 0, omega1()).unwrap();
        let checks = check_closed_pair(&ClosedPair::new(w0.clone(), w1.clone()).unwrap(), &b, Sampling::new(20, 1e-9, 1)).unwrap();
        assert!(checks.iter().all(|c| c.passed()));

        let zero = ClosedPair::new(w0.zero_like(1, 1), w1.zero_like(0, 3)).unwrap();
        assert!(check_closed_pair(&zero, &b, Sampling::new(5, 1e-9, 1)).unwrap().iter().all(|c| c.passed()));

        let broken = ClosedPair::new(w0.clone(), w1.zero_like(0, 3)).unwrap();
        let checks = check_closed_pair(&broken, &b, Sampling::new(20, 1e-9, 1)).unwrap();
        assert!(checks[0].passed() && !checks[1].passed() && checks[2].passed());
        assert!(checks[1].worst_residual > 1e-3);
    }

    #[test]
    fn nerve_pair_on_adjoint_quotient() {
        let b = sl2();
        let a = Action::conjugation(1);
        let d = descent_map(&a, &Datum::Linear(omega0()), &b).unwrap().remove(0);
        let w1 = CechElement::nerve(&a, 0, omega1().neg()).unwrap();
        let checks = check_closed_pair(&ClosedPair::new(d, w1).unwrap(), &b, Sampling::new(20, 1e-9, 2)).unwrap();
        assert!(checks.iter().all(|c| c.passed()), "{checks:?}");
    }

    #[test]
    fn classifying_stack_pair() {
        let b = LieBackend::new(BackendKind::Gl(2)).unwrap();
        let p = Action::point();
        let w0 = CechElement::nerve(&p, 2, phi()).unwrap();
        let w1 = CechElement::nerve(&p, 1, omega1()).unwrap();
        let checks = check_closed_pair(&ClosedPair::new(w0, w1).unwrap(), &b, Sampling::new(20, 1e-9, 3)).unwrap();
        assert!(checks.iter().all(|c| c.passed()), "{checks:?}");
    }

    #[test]
    fn pair_shapes_are_validated() {
        let a = Action::conjugation(1);
        let w0 = CechElement::cartan(&a, 1, omega0()).unwrap();
        assert!(ClosedPair::new(w0.clone(), w0).is_err());
    }
}
