//! The multiplicative `Ω²`-torsor on `G` given by `φ`, and its invariant section.

use crate::canonical::{omega1_along, phi_along, phi_on};
use crate::form::{q, FormError, FormExpr, GroupWord, LieConst, Side};
use crate::lie::LieBackend;
use crate::report::{compare_forms, Check, Expect, Sampling};

const SUITE: &str = "torsor";

fn w(k: usize, letters: &[(usize, i8)]) -> GroupWord {
    GroupWord::from_letters(k, letters)
}

/// `(m₂₃*φ + p₂₃*φ, m₁₂*φ + p₁₂*φ)` on `G³` for a 2-form `f` on `G²`.
pub fn associativity_sides(f: &FormExpr) -> Result<(FormExpr, FormExpr), FormError> {
    let (m23, p23, m12, p12) = assoc_maps();
    let lhs = f.pullback(&m23)?.add(&f.pullback(&p23)?)?;
    let rhs = f.pullback(&m12)?.add(&f.pullback(&p12)?)?;
    Ok((lhs, rhs))
}

type Map = Vec<GroupWord>;

fn assoc_maps() -> (Map, Map, Map, Map) {
    let a = GroupWord::var(3, 0);
    let b = GroupWord::var(3, 1);
    let c = GroupWord::var(3, 2);
    (
        vec![a.clone(), b.mul(&c)],
        vec![b.clone(), c.clone()],
        vec![a.mul(&b), c.clone()],
        vec![a, b],
    )
}

/// The pullback of the cocycle combination `m₁₂*φ + p₁₂*φ − p₁₃*φ` along `(a, g) ↦ (g⁻¹, a, g)`.
pub fn section_combination(drop_middle: bool) -> Result<FormExpr, FormError> {
    let g_inv = w(2, &[(1, -1)]);
    let a = GroupWord::var(2, 0);
    let g = GroupWord::var(2, 1);
    let m12 = phi_along(&g_inv.mul(&a), &g);
    let p12 = phi_along(&g_inv, &a);
    let p13 = phi_along(&g_inv, &g);
    let s = if drop_middle { m12 } else { m12.add(&p12)? };
    s.sub(&p13)
}

/// `R = −½(θ_a − Ad_a θ̄_g + θ̄_a, θ̄_g)` on `G²`; `flip` changes the sign of the twisted term.
pub fn section_form(flip: bool) -> Result<FormExpr, FormError> {
    let theta_a = FormExpr::lmc(2, 0)?;
    let bar_a = FormExpr::rmc(2, 0)?;
    let bar_g = FormExpr::rmc(2, 1)?;
    let twisted = FormExpr::ad(&GroupWord::var(2, 0), &bar_g)?;
    let inner = if flip { theta_a.add(&twisted)? } else { theta_a.sub(&twisted)? }.add(&bar_a)?;
    Ok(FormExpr::pair(&inner, &bar_g)?.scale(q(-1, 2)))
}

/// Restriction of a form on `(a, g)` to `g = e`.
fn at_identity(e: &FormExpr) -> Result<FormExpr, FormError> {
    e.pullback_from(1, &[GroupWord::var(1, 0), GroupWord::identity(1)])
}

fn slot(k: usize, name: &str) -> FormExpr {
    FormExpr::slot(k, name)
}

fn slot_c(name: &str) -> LieConst {
    LieConst::Slot(name.into())
}

/// Consequences of the invariant-section identity for a candidate `R`.
fn section_consequences(r: &FormExpr, label: &str) -> Result<Vec<(String, FormExpr, FormExpr)>, FormError> {
    // (1) R only sees the g-direction.
    let along_a = r.contract(0, Side::L, &slot_c("v"))?.contract(0, Side::L, &slot_c("w"))?;
    // (2) ι_{v on g} R at g = e.
    let first = at_identity(&r.contract(1, Side::L, &slot_c("v"))?)?;
    let mc = FormExpr::lmc(1, 0)?.add(&FormExpr::rmc(1, 0)?)?;
    let first_rhs = FormExpr::pair(&mc, &slot(1, "v"))?.scale(q(1, 2));
    // (3) ι_w ι_v R at g = e.
    let second = at_identity(&r.contract(1, Side::L, &slot_c("v"))?.contract(1, Side::L, &slot_c("w"))?)?;
    let a = GroupWord::var(1, 0);
    let diff = FormExpr::ad(&a.inverse(), &slot(1, "w"))?.sub(&FormExpr::ad(&a, &slot(1, "w"))?)?;
    let second_rhs = FormExpr::pair(&diff, &slot(1, "v"))?.scale(q(1, 2));
    Ok(vec![
        (format!("{label}: vanishes along the orbit"), along_a.clone(), FormExpr::zero(along_a.shape())),
        (format!("{label}: contraction with v at g = e"), first, first_rhs),
        (format!("{label}: double contraction at g = e"), second, second_rhs),
    ])
}

/// Associativity, the invariant section and multiplicativity of `ω₁`, with mutation controls.
pub fn torsor_suite(backend: &LieBackend, s: Sampling) -> Vec<Check> {
    let mut out = Vec::new();
    let mut k = 0u64;
    let mut push = |name: &str, anchor: &str, expect: Expect, r: Result<(FormExpr, FormExpr), FormError>| {
        k += 1;
        let c = match r {
            Ok((l, rhs)) => compare_forms((SUITE, name, anchor), expect, &l, &rhs, backend, s.offset(k)),
            Err(e) => Check::error(SUITE, name, anchor, e),
        };
        out.push(c);
    };

    let phi = phi_on(2, 0, 1).expect("valid");
    push("associativity", "assoc", Expect::Equal, associativity_sides(&phi));
    let lmc_only = FormExpr::pair(&FormExpr::lmc(2, 0).unwrap(), &FormExpr::lmc(2, 1).unwrap()).unwrap().scale(q(-1, 2));
    push("associativity, mutated: left forms only", "assoc", Expect::Distinct, associativity_sides(&lmc_only));
    let (m23, p23, m12, p12) = assoc_maps();
    let full = |drop: usize, flip: usize| -> Result<(FormExpr, FormExpr), FormError> {
        let terms = [(&m23, 1i64), (&p23, 1), (&m12, -1), (&p12, -1)];
        let mut lhs = FormExpr::zero(phi.pullback(&m23)?.shape());
        for (i, (map, c)) in terms.iter().enumerate() {
            if i == drop {
                continue;
            }
            let c = if i == flip { -c } else { *c };
            lhs = lhs.add(&phi.pullback(map)?.scale(q(c, 1)))?;
        }
        Ok((lhs.clone(), FormExpr::zero(lhs.shape())))
    };
    push("associativity, mutated: drop p23", "assoc", Expect::Distinct, full(1, usize::MAX));
    push("associativity, mutated: flip m12", "assoc", Expect::Distinct, full(usize::MAX, 2));

    let r = section_form(false).unwrap();
    push("invariant section identity", "invsectioncech", Expect::Equal, section_combination(false).map(|c| (c, r.clone())));
    push(
        "invariant section, mutated: drop middle term",
        "invsectioncech",
        Expect::Distinct,
        section_combination(true).map(|c| (c, r.clone())),
    );
    match section_consequences(&r, "invariant section") {
        Ok(cs) => cs.into_iter().for_each(|(n, l, rhs)| push(&n, "invsection", Expect::Equal, Ok((l, rhs)))),
        Err(e) => push("invariant section consequences", "invsection", Expect::Equal, Err(e)),
    }
    let flipped = section_form(true).unwrap();
    push(
        "invariant section, mutated: flip Ad term",
        "invsectioncech",
        Expect::Distinct,
        section_combination(false).map(|c| (c, flipped.clone())),
    );
    if let Ok(cs) = section_consequences(&flipped, "invariant section, mutated: flip Ad term") {
        let (n, l, rhs) = cs.into_iter().nth(2).expect("three consequences");
        push(&n, "invsection", Expect::Distinct, Ok((l, rhs)));
    }
    let mc = FormExpr::lmc(1, 0).unwrap().add(&FormExpr::rmc(1, 0).unwrap()).unwrap();
    let field = [(0, Side::R, q(1, 1)), (0, Side::L, q(-1, 1))];
    let a = GroupWord::var(1, 0);
    let rhs = FormExpr::ad(&a.inverse(), &slot(1, "w")).unwrap().sub(&FormExpr::ad(&a, &slot(1, "w")).unwrap()).unwrap();
    push(
        "contraction of the Maurer-Cartan sum with the action field",
        "invsection",
        Expect::Equal,
        mc.contract_field(&field, &slot_c("w")).map(|l| (l, rhs)),
    );

    let chimult = |dphi: Option<i64>| -> Result<(FormExpr, FormExpr), FormError> {
        let ab = w(2, &[(0, 1), (1, 1)]);
        let mut lhs = omega1_along(&ab);
        if let Some(c) = dphi {
            lhs = lhs.add(&phi.de_rham().scale(q(c, 1)))?;
        }
        let rhs = omega1_along(&GroupWord::var(2, 0)).add(&omega1_along(&GroupWord::var(2, 1)))?;
        Ok((lhs, rhs))
    };
    // ω₁ is a multiplicative section for −φ: m*ω₁ − dφ = p₁*ω₁ + p₂*ω₁.
    push("multiplicativity of omega1", "chimult", Expect::Equal, chimult(Some(-1)));
    push("multiplicativity, mutated: drop d phi", "chimult", Expect::Distinct, chimult(None));
    push("multiplicativity, mutated: flip d phi", "chimult", Expect::Distinct, chimult(Some(1)));
    out
}
