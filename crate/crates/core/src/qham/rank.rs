//! Pointwise linear algebra of tangent and cotangent complexes.
//!
//! Ranks are read off singular values scaled by `max(1, σ_max)`: a value above
//! [`PASS_THRESHOLD`] is nonzero, one below [`FAIL_THRESHOLD`] is zero, anything in
//! between makes the decision inconclusive.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::Serialize;

use super::{GroupSpace, QHamError, SUITE};
use crate::canonical::omega0;
use crate::form::{eval_full, word_lmc};
use crate::lie::{mat_rows, GroupPoint, LieBackend, Mat, Tangent};
use crate::report::{Check, Expect, Status};

pub const PASS_THRESHOLD: f64 = 1e-6;
pub const FAIL_THRESHOLD: f64 = 1e-8;
/// Tolerance for entries that vanish identically (compositions of differentials, identities).
const EXACT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct RankVerdict {
    pub expected: usize,
    pub singular_values: Vec<f64>,
    pub status: Status,
}

fn scaled_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let scale = sv.first().copied().unwrap_or(0.0).max(1.0);
    sv.iter().map(|s| s / scale).collect()
}

fn classify(s: f64) -> Option<bool> {
    if s > PASS_THRESHOLD {
        Some(true)
    } else if s < FAIL_THRESHOLD {
        Some(false)
    } else {
        None
    }
}

/// Whether `m` has rank exactly `expected`.
pub fn rank_status(m: &DMatrix<f64>, expected: usize) -> RankVerdict {
    let sv = scaled_singular_values(m);
    let mut statuses = Vec::new();
    if expected > sv.len() {
        statuses.push(Status::Fail);
    }
    if expected >= 1 && expected <= sv.len() {
        statuses.push(match classify(sv[expected - 1]) {
            Some(true) => Status::Pass,
            Some(false) => Status::Fail,
            None => Status::Inconclusive,
        });
    }
    if expected < sv.len() {
        statuses.push(match classify(sv[expected]) {
            Some(false) => Status::Pass,
            Some(true) => Status::Fail,
            None => Status::Inconclusive,
        });
    }
    RankVerdict { expected, singular_values: sv, status: combine(&statuses) }
}

/// Numeric rank, or `None` if a singular value falls in the dead zone.
pub fn numeric_rank(m: &DMatrix<f64>) -> Option<usize> {
    let sv = scaled_singular_values(m);
    let mut r = 0;
    for s in sv {
        match classify(s) {
            Some(true) => r += 1,
            Some(false) => {}
            None => return None,
        }
    }
    Some(r)
}

/// Orthonormal basis of the kernel of `m` (as columns), or `None` in the dead zone.
pub fn kernel(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let (r, c) = m.shape();
    let mut sq = DMatrix::zeros(r.max(c), c);
    sq.view_mut((0, 0), (r, c)).copy_from(m);
    let svd = sq.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let scale = svd.singular_values.max().max(1.0);
    let mut cols = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        match classify(s / scale) {
            Some(true) => {}
            Some(false) => cols.push(vt.row(i).transpose()),
            None => return None,
        }
    }
    Some(if cols.is_empty() { DMatrix::zeros(c, 0) } else { DMatrix::from_columns(&cols) })
}

pub fn combine(statuses: &[Status]) -> Status {
    if statuses.contains(&Status::Fail) {
        Status::Fail
    } else if statuses.contains(&Status::Inconclusive) {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn residual_status(r: f64) -> Status {
    if r < EXACT_TOL {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// Matrices of a two-step complex and the map built from `(h₀, ω₀)` at a point.
#[derive(Debug, Clone, Serialize)]
pub struct TangentComplexSnapshot {
    pub point: Vec<Vec<Vec<f64>>>,
    pub tangent: Vec<Vec<Vec<f64>>>,
    pub cotangent: Vec<Vec<Vec<f64>>>,
    pub pairing: Vec<Vec<Vec<f64>>>,
    /// Largest entry of the composite of consecutive differentials.
    pub square_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NondegeneracyReport {
    pub point: Vec<Vec<f64>>,
    pub kernel_dim: Option<usize>,
    pub rank: RankVerdict,
    /// `max |−½(Ad_a x + x, v) + (x, v)|` over the basis and the kernel.
    pub identity_residual: f64,
    pub status: Status,
}

impl NondegeneracyReport {
    pub fn to_check(&self, name: &str) -> Check {
        Check::custom(SUITE, name, "nondegeneracy", Expect::Rank, self.status, self.identity_residual)
            .with_detail(serde_json::to_value(self).expect("serializes"))
    }
}

/// Injectivity of `v ↦ ω₀(v)` on the kernel of `1 − Ad_{a⁻¹}` at `a ∈ G`.
pub fn nondegeneracy_check(backend: &LieBackend, a: &Mat) -> Result<NondegeneracyReport, QHamError> {
    let d = backend.dim();
    let ai = crate::lie::checked_inverse(a).map_err(crate::form::FormError::from)?;
    let ad = backend.adjoint_matrix(&ai).map_err(crate::form::FormError::from)?;
    let op = DMatrix::identity(d, d) - ad;
    let Some(ker) = kernel(&op) else {
        let rank = RankVerdict { expected: 0, singular_values: scaled_singular_values(&op), status: Status::Inconclusive };
        return Ok(NondegeneracyReport { point: mat_rows(a), kernel_dim: None, rank, identity_residual: f64::NAN, status: Status::Inconclusive });
    };
    let kdim = ker.ncols();
    let point = GroupPoint::new(vec![a.clone()]);
    let w0 = omega0();
    let mut m = DMatrix::zeros(d, kdim);
    let mut residual: f64 = 0.0;
    for c in 0..kdim {
        let v = backend.from_coords(&ker.column(c).into_owned());
        let slots = HashMap::from([("x".to_string(), v.clone())]);
        for (r, x) in backend.basis().iter().enumerate() {
            let t = Tangent { components: vec![a * x] };
            let val = eval_full(&w0, backend, &point, &[t], &slots)?.as_scalar();
            m[(r, c)] = val;
            let expect = -backend.pair(x, &v);
            residual = residual.max((val - expect).abs() / (1.0 + val.abs().max(expect.abs())));
        }
    }
    let rank = rank_status(&m, kdim);
    let status = combine(&[rank.status, residual_status(residual)]);
    Ok(NondegeneracyReport { point: mat_rows(a), kernel_dim: Some(kdim), rank, identity_residual: residual, status })
}

#[derive(Debug, Clone)]
pub enum ExactnessCase {
    /// `g = e`: `𝔤[1] → 𝔤[1] ⊕ 𝔤 → 𝔤*`.
    Disk,
    /// The conjugacy class of `g` with stabilizer `𝔥 = ker(1 − Ad_g)`.
    ConjugacyClass(Mat),
    /// The moment map of a space at a point.
    QHamSpace(Box<GroupSpace>, GroupPoint),
}

#[derive(Debug, Clone, Serialize)]
pub struct Condition {
    pub name: String,
    pub status: Status,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<RankVerdict>,
}

impl Condition {
    fn rank(name: &str, r: RankVerdict) -> Self {
        Self { name: name.into(), status: r.status, residual: 0.0, rank: Some(r) }
    }

    fn residual(name: &str, residual: f64) -> Self {
        Self { name: name.into(), status: residual_status(residual), residual, rank: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactnessReport {
    pub case: String,
    pub conditions: Vec<Condition>,
    pub snapshot: TangentComplexSnapshot,
    pub status: Status,
}

impl ExactnessReport {
    fn new(case: String, conditions: Vec<Condition>, snapshot: TangentComplexSnapshot) -> Self {
        let status = combine(&conditions.iter().map(|c| c.status).collect::<Vec<_>>());
        Self { case, conditions, snapshot, status }
    }

    pub fn to_check(&self, name: &str) -> Check {
        let anchor = if self.case == "qham_space" { "quasiiso" } else { "exactness" };
        let worst = self.conditions.iter().map(|c| c.residual).fold(0.0, f64::max);
        Check::custom(SUITE, name, anchor, Expect::Rank, self.status, worst)
            .with_detail(serde_json::to_value(self).expect("serializes"))
    }
}

pub fn lagrangian_exactness_check(case: &ExactnessCase, backend: &LieBackend) -> Result<ExactnessReport, QHamError> {
    match case {
        ExactnessCase::Disk => conjugacy_class(backend, &backend.identity(), "disk"),
        ExactnessCase::ConjugacyClass(g) => conjugacy_class(backend, g, "conjugacy_class"),
        ExactnessCase::QHamSpace(space, point) => quasi_iso(space, point, backend),
    }
}

/// `𝔤 --(1 − Ad_g)--> 𝔤 --π--> 𝔥*` with `π(y) = (y, −)|_𝔥`.
fn conjugacy_class(backend: &LieBackend, g: &Mat, label: &str) -> Result<ExactnessReport, QHamError> {
    let d = backend.dim();
    let ad = backend.adjoint_matrix(g).map_err(crate::form::FormError::from)?;
    let op = DMatrix::identity(d, d) - ad;
    let snapshot = |pi: &DMatrix<f64>, sq: f64| TangentComplexSnapshot {
        point: vec![mat_rows(g)],
        tangent: vec![rows(&op), rows(pi)],
        cotangent: vec![rows(&pi.transpose()), rows(&op.transpose())],
        pairing: vec![rows(backend.pairing_matrix())],
        square_residual: sq,
    };
    let Some(h) = kernel(&op) else {
        let c = Condition::rank("stabilizer", RankVerdict { expected: 0, singular_values: scaled_singular_values(&op), status: Status::Inconclusive });
        let empty = DMatrix::zeros(0, d);
        return Ok(ExactnessReport::new(label.into(), vec![c], snapshot(&empty, 0.0)));
    };
    let hdim = h.ncols();
    let pi = h.transpose() * backend.pairing_matrix();
    let square = (&pi * &op).amax();

    // centralizer from gx = xg, independent of the adjoint matrix
    let n = backend.matrix_size();
    let z = DMatrix::from_fn(n * n, d, |idx, j| {
        let b = &backend.basis()[j];
        let c = g * b - b * g;
        c[(idx / n, idx % n)]
    });
    let centralizer = numeric_rank(&z).map(|r| d - r);
    let stab = Condition {
        name: "H^-1 = stabilizer".into(),
        status: match centralizer {
            None => Status::Inconclusive,
            Some(c) if c == hdim => Status::Pass,
            Some(_) => Status::Fail,
        },
        residual: 0.0,
        rank: Some(RankVerdict { expected: hdim, singular_values: scaled_singular_values(&z), status: Status::Pass }),
    };
    let conditions = vec![
        Condition::residual("complex: pi (1 - Ad_g) = 0", square),
        Condition::rank("H^1 = 0: g* -> h* surjective", rank_status(&pi, hdim)),
        Condition::rank("closed = exact: h-perp = im(1 - Ad_g)", rank_status(&op, d - hdim)),
        stab,
    ];
    Ok(ExactnessReport::new(label.into(), conditions, snapshot(&pi, square)))
}

fn coords_of(backend: &LieBackend, m: &Mat) -> Vec<f64> {
    backend.coords(m).iter().copied().collect()
}

/// The cone of `𝕋_f → 𝕃_L` at `m` is exact.
///
/// `𝕋_f ≃ [T_M → T_G^r]` via `dμ`, `𝕃_L = [T*_M → (𝔤^r)*]` via `−ι_a`; the vertical
/// maps are `w ↦ ι_w h₀` and `u ↦ −ε ω₀(−)(u)`.
fn quasi_iso(space: &GroupSpace, m: &GroupPoint, backend: &LieBackend) -> Result<ExactnessReport, QHamError> {
    let d = backend.dim();
    let k = space.arity();
    let r = space.action.rank;
    if m.arity() != k {
        return Err(QHamError::Shape(format!("point has {} factors, space has {k}", m.arity())));
    }
    let no_slots = HashMap::new();
    let basis = backend.basis();
    let tangent = |i: usize, l: usize| {
        let mut t = Tangent::zero(k, backend.matrix_size());
        t.components[i] = &m.coords[i] * &basis[l];
        t
    };
    let tangents: Vec<Tangent> = (0..k).flat_map(|i| (0..d).map(move |l| (i, l))).map(|(i, l)| tangent(i, l)).collect();
    let (dm, dg) = (k * d, r * d);

    let mut a = DMatrix::zeros(dg, dm);
    let mut v1 = DMatrix::zeros(dg, dg);
    let w0 = omega0();
    let eps = f64::from(space.epsilon);
    for (j, mu) in space.moment.iter().enumerate() {
        let lmc = word_lmc(mu);
        for (q, t) in tangents.iter().enumerate() {
            let z = eval_full(&lmc, backend, m, std::slice::from_ref(t), &no_slots)?;
            for (l, c) in coords_of(backend, z.as_lie()).into_iter().enumerate() {
                a[(j * d + l, q)] = c;
            }
        }
        let mu_pt = mu.eval(m).map_err(crate::form::FormError::from)?;
        let gp = GroupPoint::new(vec![mu_pt.clone()]);
        for (l, y) in basis.iter().enumerate() {
            let slots = HashMap::from([("x".to_string(), y.clone())]);
            for (mm, e) in basis.iter().enumerate() {
                let u = Tangent { components: vec![&mu_pt * e] };
                v1[(j * d + l, j * d + mm)] = -eps * eval_full(&w0, backend, &gp, &[u], &slots)?.as_scalar();
            }
        }
    }
    let mut v0 = DMatrix::zeros(dm, dm);
    for p in 0..dm {
        for q in 0..dm {
            v0[(p, q)] = eval_full(&space.h0, backend, m, &[tangents[q].clone(), tangents[p].clone()], &no_slots)?.as_scalar();
        }
    }
    // action fields a_j(e_l) in left-trivialized coordinates
    let mut field = DMatrix::zeros(dm, dg);
    for j in 0..r {
        for (l, y) in basis.iter().enumerate() {
            for (i, (left, right)) in space.action.coords.iter().enumerate() {
                let mut comp = Mat::zeros(y.nrows(), y.ncols());
                if *right == Some(j) {
                    comp += y;
                }
                if *left == Some(j) {
                    comp -= backend.adjoint(&m.coords[i], y).map_err(crate::form::FormError::from)?;
                }
                for (c, val) in coords_of(backend, &comp).into_iter().enumerate() {
                    field[(i * d + c, j * d + l)] = val;
                }
            }
        }
    }
    let b = -field.transpose();

    let mut d_minus = DMatrix::zeros(dg + dm, dm);
    d_minus.view_mut((0, 0), (dg, dm)).copy_from(&(-&a));
    d_minus.view_mut((dg, 0), (dm, dm)).copy_from(&v0);
    let mut d_zero = DMatrix::zeros(dg, dg + dm);
    d_zero.view_mut((0, 0), (dg, dg)).copy_from(&v1);
    d_zero.view_mut((0, dg), (dg, dm)).copy_from(&b);
    let composite = &d_zero * &d_minus;
    let scale = 1.0 + d_zero.amax().max(d_minus.amax());
    let square = composite.amax() / scale;

    let conditions = vec![
        Condition::residual("chain map: squares commute", square),
        Condition::rank("cone exact in degree -1", rank_status(&d_minus, dm)),
        Condition::rank("cone exact in degree 1", rank_status(&d_zero, dg)),
    ];
    let snapshot = TangentComplexSnapshot {
        point: m.to_rows(),
        tangent: vec![rows(&a)],
        cotangent: vec![rows(&b)],
        pairing: vec![rows(&v0), rows(&v1)],
        square_residual: square,
    };
    Ok(ExactnessReport::new("qham_space".into(), conditions, snapshot))
}

/// Rank of `h₀` restricted to `ker dμ` at `m`, for dimension bookkeeping.
pub fn level_set_pairing_rank(space: &GroupSpace, m: &GroupPoint, backend: &LieBackend) -> Result<serde_json::Value, QHamError> {
    let report = quasi_iso(space, m, backend)?;
    let a = DMatrix::from_row_slice(
        report.snapshot.tangent[0].len(),
        report.snapshot.tangent[0].first().map_or(0, Vec::len),
        &report.snapshot.tangent[0].concat(),
    );
    let v0 = DMatrix::from_row_slice(
        report.snapshot.pairing[0].len(),
        report.snapshot.pairing[0].len(),
        &report.snapshot.pairing[0].concat(),
    );
    let Some(ker) = kernel(&a) else { return Ok(serde_json::json!({ "level_set_tangent": null })) };
    let restricted = ker.transpose() * v0 * &ker;
    Ok(serde_json::json!({
        "level_set_tangent": ker.ncols(),
        "h0_rank_on_level_set": numeric_rank(&restricted),
    }))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{BackendKind, Sampler};
    use crate::qham::{commutator_space, double_space, genus_surface_space};

    fn sl2() -> LieBackend {
        LieBackend::new(BackendKind::Sl2).unwrap()
    }

    #[test]
    fn thresholds() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1e-3, 1e-12]));
        assert_eq!(rank_status(&m, 2).status, Status::Pass);
        assert_eq!(rank_status(&m, 3).status, Status::Fail);
        assert_eq!(rank_status(&m, 1).status, Status::Fail);
        let dz = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1e-7]));
        assert_eq!(rank_status(&dz, 2).status, Status::Inconclusive);
        assert_eq!(numeric_rank(&dz), None);
        assert!(kernel(&dz).is_none());
    }

    #[test]
    fn nondegeneracy_at_identity_and_random_points() {
        let b = sl2();
        let r = nondegeneracy_check(&b, &b.identity()).unwrap();
        assert_eq!(r.kernel_dim, Some(3));
        assert_eq!(r.status, Status::Pass);
        let mut s = Sampler::new(3);
        for _ in 0..5 {
            let a = b.random_group_element(s.rng());
            let r = nondegeneracy_check(&b, &a).unwrap();
            assert_eq!(r.kernel_dim, Some(1));
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
    }

    #[test]
    fn degenerate_pairing_is_detected() {
        let b = sl2();
        let mut p = b.pairing_matrix().clone();
        p.row_mut(0).fill(0.0);
        let bad = b.with_pairing_matrix_unchecked(p);
        let r = nondegeneracy_check(&bad, &bad.identity()).unwrap();
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn exactness_for_disk_and_semisimple_class() {
        let b = sl2();
        let r = lagrangian_exactness_check(&ExactnessCase::Disk, &b).unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
        let g = Mat::from_row_slice(2, 2, &[1.7, 0.0, 0.0, 1.0 / 1.7]);
        let r = lagrangian_exactness_check(&ExactnessCase::ConjugacyClass(g), &b).unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
        let gl3 = LieBackend::new(BackendKind::Gl(3)).unwrap();
        let g = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0, 0.5]));
        let r = lagrangian_exactness_check(&ExactnessCase::ConjugacyClass(g), &gl3).unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
    }

    #[test]
    fn quasi_isomorphism_for_spaces() {
        let b = sl2();
        let mut s = Sampler::new(5);
        for space in [commutator_space(), double_space(), genus_surface_space(2).unwrap()] {
            let g = space.as_group().unwrap().clone();
            let m = s.point(&b, g.arity());
            let r = lagrangian_exactness_check(&ExactnessCase::QHamSpace(Box::new(g.clone()), m), &b).unwrap();
            assert_eq!(r.status, Status::Pass, "{}: {:?}", g.name, r.conditions);
        }
    }
}
