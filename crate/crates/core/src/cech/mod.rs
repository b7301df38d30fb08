//! Čech and Cartan models of forms on quotient stacks `[X/G]`.
//!
//! `X = G^m` carries a right action of `G^r` in which coordinate `x_i` is moved to
//! `g_L⁻¹ x_i g_R` for an optional pair of group factors `(L, R)`. The nerve of the
//! action groupoid has `X × (G^r)^n` in level `n`, with `d₀` the action,
//! `d_i` multiplying adjacent blocks and `d_n` dropping the last block;
//! `δ = Σ (−1)^i d_i*`.
//!
//! The Cartan presentation keeps forms on `X` polynomial in Lie slots `x_j`
//! (one per group factor), with `δ = −Σ_j ι_{a_j(x_j)}`.

use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::form::{q, FormError, FormExpr, GroupWord, LieConst, Shape, Side, Q};
use crate::lie::LieBackend;

mod descent;
pub mod torsor;

pub use descent::{check_closed_pair, descent_map, ClosedPair, Datum};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CechError {
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// A right action of `G^rank` on `G^m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Action {
    pub rank: usize,
    /// For each coordinate of `X`, the group factors acting on the left and right.
    pub coords: Vec<(Option<usize>, Option<usize>)>,
}

impl Action {
    pub fn new(rank: usize, coords: Vec<(Option<usize>, Option<usize>)>) -> Result<Self, CechError> {
        if rank == 0 {
            return Err(CechError::Unsupported("group of rank 0".into()));
        }
        for (l, r) in &coords {
            if l.map_or(false, |j| j >= rank) || r.map_or(false, |j| j >= rank) {
                return Err(CechError::Shape(format!("action factor out of range for rank {rank}")));
            }
        }
        Ok(Self { rank, coords })
    }

    /// Diagonal conjugation of `G` on `G^m`.
    pub fn conjugation(m: usize) -> Self {
        Self { rank: 1, coords: vec![(Some(0), Some(0)); m] }
    }

    /// `X = pt`, so the nerve is `B•G`.
    pub fn point() -> Self {
        Self { rank: 1, coords: Vec::new() }
    }

    /// `G × G` acting on the double by `(a, b)·(g₁, g₂) = (g₁⁻¹ a g₂, g₂⁻¹ b g₁)`.
    pub fn double() -> Self {
        Self { rank: 2, coords: vec![(Some(0), Some(1)), (Some(1), Some(0))] }
    }

    pub fn x_arity(&self) -> usize {
        self.coords.len()
    }

    /// Arity of `X × (G^r)^n`.
    pub fn level_arity(&self, n: usize) -> usize {
        self.x_arity() + n * self.rank
    }

    fn block(&self, b: usize, c: usize) -> usize {
        self.x_arity() + (b - 1) * self.rank + c
    }

    /// Words of `x·g` for `x` in `X` and `g` the group block `b` of a level of arity `k`.
    fn act(&self, k: usize, b: usize) -> Vec<GroupWord> {
        self.coords
            .iter()
            .enumerate()
            .map(|(i, (l, r))| {
                let mut letters = Vec::new();
                if let Some(j) = l {
                    letters.push((self.block(b, *j), -1));
                }
                letters.push((i, 1));
                if let Some(j) = r {
                    letters.push((self.block(b, *j), 1));
                }
                GroupWord::new(k, letters).expect("in range")
            })
            .collect()
    }

    /// The face map `d_i : X × G^{rn} → X × G^{r(n−1)}`, `0 ≤ i ≤ n`.
    pub fn face_map(&self, n: usize, i: usize) -> Vec<GroupWord> {
        assert!(n >= 1 && i <= n, "face d_{i} undefined in level {n}");
        let k = self.level_arity(n);
        let var = |j: usize| GroupWord::var(k, j);
        let mut out: Vec<GroupWord> =
            if i == 0 { self.act(k, 1) } else { (0..self.x_arity()).map(var).collect() };
        for b in 1..n {
            for c in 0..self.rank {
                let w = if i == 0 {
                    var(self.block(b + 1, c))
                } else if b < i {
                    var(self.block(b, c))
                } else if b == i {
                    var(self.block(b, c)).mul(&var(self.block(b + 1, c)))
                } else {
                    var(self.block(b + 1, c))
                };
                out.push(w);
            }
        }
        out
    }

    /// The degeneracy `s_i : X × G^{rn} → X × G^{r(n+1)}` inserting an identity block.
    pub fn degeneracy_map(&self, n: usize, i: usize) -> Vec<GroupWord> {
        assert!(i <= n, "degeneracy s_{i} undefined in level {n}");
        let k = self.level_arity(n);
        let mut out: Vec<GroupWord> = (0..self.x_arity()).map(|j| GroupWord::var(k, j)).collect();
        for b in 1..=(n + 1) {
            for c in 0..self.rank {
                let w = if b <= i {
                    GroupWord::var(k, self.block(b, c))
                } else if b == i + 1 {
                    GroupWord::identity(k)
                } else {
                    GroupWord::var(k, self.block(b - 1, c))
                };
                out.push(w);
            }
        }
        out
    }

    /// The action vector field `a_j(x) = Σ x^R − Σ x^L` of group factor `j` on `X`.
    pub fn field(&self, j: usize) -> Vec<(usize, Side, Q)> {
        let mut out = Vec::new();
        for (i, (l, r)) in self.coords.iter().enumerate() {
            if *r == Some(j) {
                out.push((i, Side::R, Q::one()));
            }
            if *l == Some(j) {
                out.push((i, Side::L, -Q::one()));
            }
        }
        out
    }

    /// Slot carrying the Lie algebra variable of group factor `j`.
    pub fn slot_name(&self, j: usize) -> String {
        if self.rank == 1 {
            "x".to_string()
        } else {
            format!("x{j}")
        }
    }

    /// `ι_{a_j(v)} e` for a constant or slot `v`; zero for 0-forms.
    pub fn contract_action(&self, e: &FormExpr, j: usize, v: &LieConst) -> Result<FormExpr, FormError> {
        if e.degree() == 0 {
            return Ok(FormExpr::zero(e.shape()));
        }
        e.contract_field(&self.field(j), v)
    }
}

/// Which model of the quotient a [`CechElement`] lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Presentation {
    /// Forms on `X × G^{rn}`.
    Nerve,
    /// Forms on `X` of polynomial degree `n` in the slots.
    Cartan,
}

/// An element of level `level` in the Čech (nerve) or Cartan model of `[X/G]`.
#[derive(Debug, Clone)]
pub struct CechElement {
    pub action: Action,
    pub presentation: Presentation,
    pub level: usize,
    pub form: FormExpr,
}

impl CechElement {
    pub fn nerve(action: &Action, level: usize, form: FormExpr) -> Result<Self, CechError> {
        let want = action.level_arity(level);
        if form.arity() != want {
            return Err(CechError::Shape(format!("level {level} needs arity {want}, form has {}", form.arity())));
        }
        if !form.is_scalar() {
            return Err(CechError::Shape("Čech elements are scalar forms".into()));
        }
        Ok(Self { action: action.clone(), presentation: Presentation::Nerve, level, form })
    }

    pub fn cartan(action: &Action, level: usize, form: FormExpr) -> Result<Self, CechError> {
        if form.arity() != action.x_arity() {
            return Err(CechError::Shape(format!(
                "Cartan elements live on X of arity {}, form has {}",
                action.x_arity(),
                form.arity()
            )));
        }
        if !form.is_scalar() {
            return Err(CechError::Shape("Cartan elements are scalar forms".into()));
        }
        let allowed: Vec<String> = (0..action.rank).map(|j| action.slot_name(j)).collect();
        if let Some(s) = form.slots().into_iter().find(|s| !allowed.contains(s)) {
            return Err(CechError::Shape(format!("unexpected slot `{s}`")));
        }
        Ok(Self { action: action.clone(), presentation: Presentation::Cartan, level, form })
    }

    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    pub fn zero_like(&self, level: usize, degree: usize) -> Self {
        let arity = match self.presentation {
            Presentation::Nerve => self.action.level_arity(level),
            Presentation::Cartan => self.action.x_arity(),
        };
        Self { form: FormExpr::zero(Shape::scalar(arity, degree)), level, ..self.clone() }
    }

    /// The Čech differential, raising the level by one.
    pub fn cech_differential(&self) -> Result<Self, CechError> {
        match self.presentation {
            Presentation::Nerve => {
                let n = self.level + 1;
                let k = self.action.level_arity(n);
                let mut terms = Vec::with_capacity(n + 1);
                for i in 0..=n {
                    let map = self.action.face_map(n, i);
                    let c = if i % 2 == 0 { Q::one() } else { -Q::one() };
                    terms.push((c, self.form.pullback_from(k, &map)?));
                }
                let form = FormExpr::sum(Shape::scalar(k, self.degree()), terms)?;
                Ok(Self { form, level: n, ..self.clone() })
            }
            Presentation::Cartan => {
                if self.degree() == 0 {
                    return Ok(self.zero_like(self.level + 1, 0));
                }
                let mut terms = Vec::with_capacity(self.action.rank);
                for j in 0..self.action.rank {
                    let slot = LieConst::Slot(self.action.slot_name(j));
                    terms.push((-Q::one(), self.action.contract_action(&self.form, j, &slot)?));
                }
                let shape = Shape::scalar(self.action.x_arity(), self.degree() - 1);
                Ok(Self { form: FormExpr::sum(shape, terms)?, level: self.level + 1, ..self.clone() })
            }
        }
    }

    pub fn de_rham(&self) -> Self {
        Self { form: self.form.de_rham(), ..self.clone() }
    }

    /// Pullback along the degeneracy `s_i`, lowering the level by one.
    pub fn degeneracy(&self, i: usize) -> Result<Self, CechError> {
        if self.presentation != Presentation::Nerve || self.level == 0 {
            return Err(CechError::Unsupported("degeneracies act on nerve elements of level ≥ 1".into()));
        }
        let n = self.level - 1;
        let map = self.action.degeneracy_map(n, i);
        let form = self.form.pullback_from(self.action.level_arity(n), &map)?;
        Ok(Self { form, level: n, ..self.clone() })
    }

    /// Infinitesimal part of a level-1 nerve element:
    /// `L(c) = −Σ_j ι_{x_j on block factor j} c` restricted to the identity block.
    ///
    /// For a level-0 form `φ`, `L(δφ)` is the Cartan differential `−Σ ι_{a_j(x_j)}φ`.
    pub fn linearize(&self) -> Result<Self, CechError> {
        if self.presentation != Presentation::Nerve || self.level != 1 {
            return Err(CechError::Unsupported("linearization of level-1 nerve elements only".into()));
        }
        if self.degree() == 0 {
            return Err(CechError::Form(FormError::DegreeZeroContraction));
        }
        let m = self.action.x_arity();
        let k = self.action.level_arity(1);
        let mut terms = Vec::new();
        for j in 0..self.action.rank {
            let slot = LieConst::Slot(self.action.slot_name(j));
            terms.push((-Q::one(), self.form.contract(m + j, Side::R, &slot)?));
        }
        let contracted = FormExpr::sum(Shape::scalar(k, self.degree() - 1), terms)?;
        let mut map: Vec<GroupWord> = (0..m).map(|i| GroupWord::var(m, i)).collect();
        map.extend((0..self.action.rank).map(|_| GroupWord::identity(m)));
        let form = contracted.pullback_from(m, &map)?;
        Self::cartan(&self.action, 1, form)
    }
}

/// `a ± b` on nerve or Cartan elements of the same level.
pub fn combine(a: &CechElement, b: &CechElement, cb: Q) -> Result<CechElement, CechError> {
    if a.presentation != b.presentation || a.level != b.level || a.action != b.action {
        return Err(CechError::Shape("elements live in different places of the complex".into()));
    }
    if a.form.shape() != b.form.shape() {
        return Err(CechError::Shape(format!("{} vs {}", a.form.shape(), b.form.shape())));
    }
    let form = FormExpr::sum(a.form.shape(), vec![(Q::one(), a.form.clone()), (cb, b.form.clone())])?;
    Ok(CechElement { form, ..a.clone() })
}

/// Basis and pairing-dual basis as Lie constants (`(e_j, e^∨_i) = δ_ij`).
pub(crate) fn basis_and_dual(backend: &LieBackend) -> (Vec<LieConst>, Vec<LieConst>) {
    let basis = (0..backend.dim()).map(LieConst::Basis).collect();
    let dual = backend.dual_basis().into_iter().map(LieConst::Matrix).collect();
    (basis, dual)
}

pub(crate) fn half() -> Q {
    q(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{omega0, omega1, phi};
    use crate::form::equal_numeric;
    use crate::gen::ExprGen;
    use crate::lie::BackendKind;

    fn is_zero(e: &CechElement, b: &LieBackend) -> bool {
        let z = FormExpr::zero(e.form.shape());
        equal_numeric(&e.form, &z, b, 20, 1e-9, 1).unwrap().equal
    }

    #[test]
    fn circle_faces_match_conjugation() {
        let a = Action::conjugation(1);
        let d0 = a.face_map(1, 0);
        assert_eq!(d0[0], GroupWord::from_letters(2, &[(1, -1), (0, 1), (1, 1)]));
        assert_eq!(a.face_map(1, 1)[0], GroupWord::var(2, 0));
    }

    #[test]
    fn nerve_of_bg_faces() {
        let a = Action::point();
        // level 2 → 1: d0 (u, v) = v, d1 = uv, d2 = u
        assert_eq!(a.face_map(2, 0), vec![GroupWord::var(2, 1)]);
        assert_eq!(a.face_map(2, 1), vec![GroupWord::from_letters(2, &[(0, 1), (1, 1)])]);
        assert_eq!(a.face_map(2, 2), vec![GroupWord::var(2, 0)]);
    }

    #[test]
    fn delta_squared_vanishes() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        for action in [Action::conjugation(1), Action::point(), Action::double()] {
            for level in 0..=2 {
                let k = action.level_arity(level);
                if k == 0 {
                    continue;
                }
                let form = ExprGen::new(level as u64 + 7, k, b.dim()).with_slots(&[]).scalar(2, 2);
                let c = CechElement::nerve(&action, level, form).unwrap();
                let dd = c.cech_differential().unwrap().cech_differential().unwrap();
                assert!(is_zero(&dd, &b), "level {level}");
            }
        }
    }

    #[test]
    fn level_zero_shortcut_agrees() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        for action in [Action::conjugation(1), Action::conjugation(2), Action::double()] {
            let form = ExprGen::new(3, action.x_arity(), b.dim()).with_slots(&[]).scalar(2, 2);
            let nerve = CechElement::nerve(&action, 0, form.clone()).unwrap();
            let cartan = CechElement::cartan(&action, 0, form).unwrap();
            let lin = nerve.cech_differential().unwrap().linearize().unwrap();
            let short = cartan.cech_differential().unwrap();
            assert!(equal_numeric(&lin.form, &short.form, &b, 20, 1e-9, 2).unwrap().equal);
        }
    }

    #[test]
    fn cartan_closedness_on_adjoint_quotient() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let a = Action::conjugation(1);
        let w0 = CechElement::cartan(&a, 1, omega0()).unwrap();
        let w1 = CechElement::cartan(&a, 0, omega1()).unwrap();
        assert!(is_zero(&w0.cech_differential().unwrap(), &b));
        let eq2 = combine(&w0.de_rham(), &w1.cech_differential().unwrap(), Q::one()).unwrap();
        assert!(is_zero(&eq2, &b));
    }

    #[test]
    fn phi_is_a_cocycle_on_bg() {
        let b = LieBackend::new(BackendKind::Gl(2)).unwrap();
        let c = CechElement::nerve(&Action::point(), 2, phi()).unwrap();
        assert!(is_zero(&c.cech_differential().unwrap(), &b));
    }

    #[test]
    fn degeneracies_are_sections_of_faces() {
        let a = Action::conjugation(1);
        for n in 0..3 {
            for i in 0..=n {
                // d_i s_i = id
                let s = a.degeneracy_map(n, i);
                let d = a.face_map(n + 1, i);
                let comp: Vec<GroupWord> = d.iter().map(|w| w.substitute(&s).unwrap()).collect();
                let id: Vec<GroupWord> = (0..a.level_arity(n)).map(|j| GroupWord::var(a.level_arity(n), j)).collect();
                assert_eq!(comp, id);
            }
        }
    }
}
