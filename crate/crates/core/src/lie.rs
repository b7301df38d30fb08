//! Matrix models of finite-dimensional Lie algebras and their groups.
//!
//! A [`LieBackend`] fixes a basis of matrices, the structure constants, and an
//! invariant nondegenerate pairing. Group elements are ordinary invertible
//! matrices; the adjoint action is the right action `Ad_g(x) = g⁻¹ x g`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense real matrix used for Lie algebra and group elements.
pub type Mat = DMatrix<f64>;

/// Tolerance for structural identities checked on basis elements.
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Tolerance for identities checked on random samples.
pub const SAMPLE_TOL: f64 = 1e-10;

const MAX_CONDITION: f64 = 1e12;
const MIN_ABS_DET: f64 = 1e-6;
const MAX_RESAMPLES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("unknown backend `{0}` (expected sl2, so3, gl<n> or gl with --n)")]
    UnknownBackend(String),
    #[error("gl(n) requires n >= 1")]
    ZeroDimension,
    #[error("basis matrices are not linearly independent")]
    DependentBasis,
    #[error("basis matrices do not have a common square shape")]
    BadShape,
    #[error("span of the basis is not closed under the commutator (residual {0:e})")]
    NotClosed(f64),
    #[error("Jacobi identity fails on basis triple (residual {0:e})")]
    Jacobi(f64),
    #[error("pairing is not symmetric (residual {0:e})")]
    AsymmetricPairing(f64),
    #[error("pairing is degenerate (condition number {0:e})")]
    DegeneratePairing(f64),
    #[error("pairing is not ad-invariant (residual {0:e})")]
    NotInvariant(f64),
    #[error("group element is singular (|det| = {0:e})")]
    Singular(f64),
}

/// Supported backend families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BackendKind {
    /// gl(n) with the trace pairing.
    Gl(usize),
    /// sl(2) with the trace pairing, basis {e, f, h}.
    Sl2,
    /// so(3) with the pairing `-½ tr(xy)` (a negative multiple of the Killing form).
    So3,
}

impl BackendKind {
    /// Parses a backend selection string; `n` is consulted only for a bare `gl`.
    pub fn parse(name: &str, n: Option<usize>) -> Result<Self, LieError> {
        let lower = name.trim().to_ascii_lowercase();
        match lower.as_str() {
            "sl2" => Ok(Self::Sl2),
            "so3" => Ok(Self::So3),
            "gl" => match n {
                Some(0) => Err(LieError::ZeroDimension),
                Some(n) => Ok(Self::Gl(n)),
                None => Err(LieError::UnknownBackend(name.to_string())),
            },
            s if s.starts_with("gl") => {
                let n: usize = s[2..]
                    .parse()
                    .map_err(|_| LieError::UnknownBackend(name.to_string()))?;
                if n == 0 {
                    Err(LieError::ZeroDimension)
                } else {
                    Ok(Self::Gl(n))
                }
            }
            _ => Err(LieError::UnknownBackend(name.to_string())),
        }
    }
}

impl FromStr for BackendKind {
    type Err = LieError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s, None)
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gl(n) => write!(f, "gl{n}"),
            Self::Sl2 => write!(f, "sl2"),
            Self::So3 => write!(f, "so3"),
        }
    }
}

/// A Lie algebra given by a basis of square matrices, with an invariant pairing.
#[derive(Debug, Clone)]
pub struct LieBackend {
    name: String,
    n: usize,
    basis: Vec<Mat>,
    /// `bracket[i][j][k]`: coefficient of `e_k` in `[e_i, e_j]`.
    bracket: Vec<Vec<Vec<f64>>>,
    pairing: DMatrix<f64>,
    pairing_inv: DMatrix<f64>,
    /// Left inverse of the flattened basis: maps `vec(x)` to basis coordinates.
    coord_map: DMatrix<f64>,
    trace_scale: f64,
}

impl LieBackend {
    pub fn new(kind: BackendKind) -> Result<Self, LieError> {
        match kind {
            BackendKind::Gl(0) => Err(LieError::ZeroDimension),
            BackendKind::Gl(n) => {
                let mut basis = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        let mut m = Mat::zeros(n, n);
                        m[(i, j)] = 1.0;
                        basis.push(m);
                    }
                }
                Self::from_basis(&kind.to_string(), basis, 1.0)
            }
            BackendKind::Sl2 => {
                let e = Mat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
                let f = Mat::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
                let h = Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
                Self::from_basis("sl2", vec![e, f, h], 1.0)
            }
            BackendKind::So3 => {
                let lx = Mat::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0]);
                let ly = Mat::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0]);
                let lz = Mat::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
                Self::from_basis("so3", vec![lx, ly, lz], -0.5)
            }
        }
    }

    /// Builds a backend from an arbitrary basis with pairing `scale · tr(xy)`,
    /// validating closure, Jacobi, symmetry, nondegeneracy and ad-invariance.
    pub fn from_basis(name: &str, basis: Vec<Mat>, trace_scale: f64) -> Result<Self, LieError> {
        if basis.is_empty() {
            return Err(LieError::ZeroDimension);
        }
        let n = basis[0].nrows();
        if basis.iter().any(|b| b.nrows() != n || b.ncols() != n) {
            return Err(LieError::BadShape);
        }
        let dim = basis.len();
        let flat = DMatrix::from_fn(n * n, dim, |r, c| basis[c][(r / n, r % n)]);
        let gram = flat.transpose() * &flat;
        let gram_inv = gram.clone().try_inverse().ok_or(LieError::DependentBasis)?;
        if condition_number(&gram) > MAX_CONDITION {
            return Err(LieError::DependentBasis);
        }
        let coord_map = gram_inv * flat.transpose();
        let pairing = DMatrix::from_fn(dim, dim, |i, j| trace_scale * (&basis[i] * &basis[j]).trace());
        let mut backend = Self {
            name: name.to_string(),
            n,
            basis,
            bracket: Vec::new(),
            pairing_inv: DMatrix::zeros(dim, dim),
            pairing,
            coord_map,
            trace_scale,
        };
        backend.bracket = backend.compute_bracket_table()?;
        backend.validate_pairing()?;
        backend.pairing_inv = backend
            .pairing
            .clone()
            .try_inverse()
            .ok_or(LieError::DegeneratePairing(f64::INFINITY))?;
        backend.check_jacobi()?;
        Ok(backend)
    }

    fn compute_bracket_table(&self) -> Result<Vec<Vec<Vec<f64>>>, LieError> {
        let dim = self.dim();
        let mut table = vec![vec![vec![0.0; dim]; dim]; dim];
        let mut worst = 0.0_f64;
        for i in 0..dim {
            for j in 0..dim {
                let c = commutator(&self.basis[i], &self.basis[j]);
                let coords = self.coords(&c);
                let back = self.from_coords(&coords);
                worst = worst.max((&back - &c).amax());
                table[i][j] = coords.iter().copied().collect();
            }
        }
        if worst > STRUCTURE_TOL {
            return Err(LieError::NotClosed(worst));
        }
        Ok(table)
    }

    fn validate_pairing(&self) -> Result<(), LieError> {
        let asym = (&self.pairing - self.pairing.transpose()).amax();
        if asym > STRUCTURE_TOL {
            return Err(LieError::AsymmetricPairing(asym));
        }
        let cond = condition_number(&self.pairing);
        if !cond.is_finite() || cond > MAX_CONDITION {
            return Err(LieError::DegeneratePairing(cond));
        }
        let worst = self.ad_invariance_residual();
        if worst > STRUCTURE_TOL {
            return Err(LieError::NotInvariant(worst));
        }
        Ok(())
    }

    fn check_jacobi(&self) -> Result<(), LieError> {
        let r = self.jacobi_residual();
        if r > STRUCTURE_TOL {
            Err(LieError::Jacobi(r))
        } else {
            Ok(())
        }
    }

    /// Largest `|([x,y],z) + (y,[x,z])|` over all basis triples.
    pub fn ad_invariance_residual(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let (x, y, z) = (&self.basis[i], &self.basis[j], &self.basis[k]);
                    let r = self.pair(&commutator(x, y), z) + self.pair(y, &commutator(x, z));
                    worst = worst.max(r.abs());
                }
            }
        }
        worst
    }

    /// Largest Jacobi defect over basis triples, computed from the structure constants.
    pub fn jacobi_residual(&self) -> f64 {
        let dim = self.dim();
        let br = |a: &[f64], b: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; dim];
            for i in 0..dim {
                for j in 0..dim {
                    let c = a[i] * b[j];
                    if c != 0.0 {
                        for (k, o) in out.iter_mut().enumerate() {
                            *o += c * self.bracket[i][j][k];
                        }
                    }
                }
            }
            out
        };
        let unit = |i: usize| {
            let mut v = vec![0.0; dim];
            v[i] = 1.0;
            v
        };
        let mut worst = 0.0_f64;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let (x, y, z) = (unit(i), unit(j), unit(k));
                    let t1 = br(&x, &br(&y, &z));
                    let t2 = br(&y, &br(&z, &x));
                    let t3 = br(&z, &br(&x, &y));
                    for m in 0..dim {
                        worst = worst.max((t1[m] + t2[m] + t3[m]).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest antisymmetry defect `|c_ij^k + c_ji^k|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    worst = worst.max((self.bracket[i][j][k] + self.bracket[j][i][k]).abs());
                }
            }
        }
        worst
    }

    /// Largest disagreement between the structure constants and matrix commutators.
    pub fn commutator_residual(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..dim {
            for j in 0..dim {
                let c = commutator(&self.basis[i], &self.basis[j]);
                let mut s = Mat::zeros(self.n, self.n);
                for k in 0..dim {
                    s += &self.basis[k] * self.bracket[i][j][k];
                }
                worst = worst.max((&c - &s).amax());
            }
        }
        worst
    }

    /// Returns a copy with the pairing multiplied by `c`.
    pub fn with_pairing_scale(&self, c: f64) -> Result<Self, LieError> {
        Self::from_basis(&self.name, self.basis.clone(), self.trace_scale * c)
    }

    /// Replaces the pairing matrix without any validation. Used for mutation controls.
    pub fn with_pairing_matrix_unchecked(&self, pairing: DMatrix<f64>) -> Self {
        let mut out = self.clone();
        out.pairing_inv = pairing
            .clone()
            .pseudo_inverse(1e-12)
            .unwrap_or_else(|_| DMatrix::zeros(pairing.nrows(), pairing.ncols()));
        out.pairing = pairing;
        out.name = format!("{}-mutated", self.name);
        out
    }

    /// Whether all structure constants vanish.
    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().flatten().flatten().all(|c| *c == 0.0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Size `n` of the matrices representing group and algebra elements.
    pub fn matrix_size(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn bracket_table(&self) -> &[Vec<Vec<f64>>] {
        &self.bracket
    }

    pub fn pairing_matrix(&self) -> &DMatrix<f64> {
        &self.pairing
    }

    /// Human-readable description of the pairing normalization.
    pub fn pairing_normalization(&self) -> String {
        format!("(x,y) = {} * tr(xy)", self.trace_scale)
    }

    /// Basis coordinates of a Lie algebra element.
    pub fn coords(&self, x: &Mat) -> DVector<f64> {
        let flat = DVector::from_fn(self.n * self.n, |r, _| x[(r / self.n, r % self.n)]);
        &self.coord_map * flat
    }

    pub fn from_coords(&self, c: &DVector<f64>) -> Mat {
        let mut m = Mat::zeros(self.n, self.n);
        for (b, ci) in self.basis.iter().zip(c.iter()) {
            m += b * *ci;
        }
        m
    }

    /// The invariant pairing `(x, y)`, evaluated through basis coordinates.
    pub fn pair(&self, x: &Mat, y: &Mat) -> f64 {
        let cx = self.coords(x);
        let cy = self.coords(y);
        (cx.transpose() * &self.pairing * cy)[(0, 0)]
    }

    pub fn bracket(&self, x: &Mat, y: &Mat) -> Mat {
        commutator(x, y)
    }

    /// Elements `e^∨_i` with `(e_j, e^∨_i) = δ_ij`.
    pub fn dual_basis(&self) -> Vec<Mat> {
        (0..self.dim())
            .map(|i| self.from_coords(&self.pairing_inv.column(i).into_owned()))
            .collect()
    }

    /// `Ad_g(x) = g⁻¹ x g`.
    pub fn adjoint(&self, g: &Mat, x: &Mat) -> Result<Mat, LieError> {
        let gi = checked_inverse(g)?;
        Ok(&gi * x * g)
    }

    /// Matrix of `Ad_g` in basis coordinates (columns are images of basis vectors).
    pub fn adjoint_matrix(&self, g: &Mat) -> Result<DMatrix<f64>, LieError> {
        let gi = checked_inverse(g)?;
        let dim = self.dim();
        let mut out = DMatrix::zeros(dim, dim);
        for (j, b) in self.basis.iter().enumerate() {
            let img = &gi * b * g;
            out.set_column(j, &self.coords(&img));
        }
        Ok(out)
    }

    /// Random algebra element with basis coefficients uniform in [-1, 1].
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat {
        let c = DVector::from_fn(self.dim(), |_, _| rng.gen_range(-1.0..=1.0));
        self.from_coords(&c)
    }

    /// Random group element `exp(x)` with `x` a bounded random algebra element.
    pub fn random_group_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Mat {
        for _ in 0..MAX_RESAMPLES {
            let g = self.random_element(rng).exp();
            if g.determinant().abs() > MIN_ABS_DET {
                return g;
            }
        }
        Mat::identity(self.n, self.n)
    }

    pub fn identity(&self) -> Mat {
        Mat::identity(self.n, self.n)
    }
}

pub fn commutator(x: &Mat, y: &Mat) -> Mat {
    x * y - y * x
}

pub fn checked_inverse(g: &Mat) -> Result<Mat, LieError> {
    let det = g.determinant();
    if !det.is_finite() || det.abs() < 1e-12 {
        return Err(LieError::Singular(det.abs()));
    }
    g.clone().try_inverse().ok_or(LieError::Singular(det.abs()))
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// A point of `G^k`: one invertible matrix per factor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    pub coords: Vec<Mat>,
}

impl GroupPoint {
    pub fn new(coords: Vec<Mat>) -> Self {
        Self { coords }
    }

    pub fn identity(backend: &LieBackend, k: usize) -> Self {
        Self {
            coords: vec![backend.identity(); k],
        }
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    /// Matrix entries of every factor, row-major, for reports.
    pub fn to_rows(&self) -> Vec<Vec<Vec<f64>>> {
        self.coords.iter().map(mat_rows).collect()
    }
}

pub fn mat_rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// A tangent vector supported on a single factor of `G^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub factor: usize,
    pub value: Mat,
}

/// A tangent vector to `G^k` with a component on every factor.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    pub components: Vec<Mat>,
}

impl Tangent {
    pub fn zero(k: usize, n: usize) -> Self {
        Self {
            components: vec![Mat::zeros(n, n); k],
        }
    }

    pub fn from_single(v: &TangentVector, k: usize, n: usize) -> Self {
        let mut t = Self::zero(k, n);
        t.components[v.factor] = v.value.clone();
        t
    }

    /// The left-invariant field `a_i · ξ_i` on every factor, evaluated at `point`.
    pub fn left_invariant(point: &GroupPoint, xi: &[Mat]) -> Self {
        Self {
            components: point.coords.iter().zip(xi).map(|(a, x)| a * x).collect(),
        }
    }
}

/// Deterministic sampler of points, tangents and algebra elements.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn point(&mut self, backend: &LieBackend, k: usize) -> GroupPoint {
        GroupPoint::new((0..k).map(|_| backend.random_group_element(&mut self.rng)).collect())
    }

    pub fn lie(&mut self, backend: &LieBackend) -> Mat {
        backend.random_element(&mut self.rng)
    }

    /// A tangent vector `a_i ξ_i` on every factor with random `ξ_i` in the algebra.
    pub fn tangent(&mut self, backend: &LieBackend, point: &GroupPoint) -> Tangent {
        let xi: Vec<Mat> = (0..point.arity()).map(|_| self.lie(backend)).collect();
        Tangent::left_invariant(point, &xi)
    }

    pub fn tangents(&mut self, backend: &LieBackend, point: &GroupPoint, count: usize) -> Vec<Tangent> {
        (0..count).map(|_| self.tangent(backend, point)).collect()
    }
}

/// Samples a point of `G^k` and one tangent vector per factor.
pub fn sample(backend: &LieBackend, k: usize, seed: u64) -> (GroupPoint, Vec<TangentVector>) {
    let mut s = Sampler::new(seed);
    let point = s.point(backend, k);
    let tangents = (0..k)
        .map(|i| TangentVector {
            factor: i,
            value: &point.coords[i] * s.lie(backend),
        })
        .collect();
    (point, tangents)
}

/// Seed for trial `i` derived from a master seed (splitmix64 finalizer).
pub fn trial_seed(master: u64, i: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(i.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_pairing_in_standard_basis() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        assert_eq!(b.dim(), 3);
        let p = b.pairing_matrix();
        // e, f, h
        assert!((p[(0, 1)] - 1.0).abs() < 1e-15);
        assert!((p[(1, 0)] - 1.0).abs() < 1e-15);
        assert!((p[(2, 2)] - 2.0).abs() < 1e-15);
        assert!(p[(0, 0)].abs() < 1e-15 && p[(1, 1)].abs() < 1e-15 && p[(0, 2)].abs() < 1e-15);
    }

    #[test]
    fn gl1_is_abelian() {
        let b = LieBackend::new(BackendKind::Gl(1)).unwrap();
        assert_eq!(b.dim(), 1);
        assert_eq!(b.bracket_table()[0][0][0], 0.0);
    }

    #[test]
    fn gl2_ad_invariance_brute_force() {
        let b = LieBackend::new(BackendKind::Gl(2)).unwrap();
        // 4^3 triples of basis elements, plus the fourth index in the pairing
        let basis = b.basis();
        for x in basis {
            for y in basis {
                for z in basis {
                    let lhs = (commutator(x, y) * z).trace() + (y * commutator(x, z)).trace();
                    assert!(lhs.abs() < STRUCTURE_TOL);
                }
            }
        }
        assert!(b.ad_invariance_residual() < STRUCTURE_TOL);
    }

    #[test]
    fn structural_invariants_for_all_backends() {
        for kind in [BackendKind::Gl(1), BackendKind::Gl(2), BackendKind::Gl(3), BackendKind::Sl2, BackendKind::So3] {
            let b = LieBackend::new(kind).unwrap();
            assert!(b.antisymmetry_residual() < STRUCTURE_TOL, "{kind}");
            assert!(b.jacobi_residual() < STRUCTURE_TOL, "{kind}");
            assert!(b.commutator_residual() < STRUCTURE_TOL, "{kind}");
            assert!(b.ad_invariance_residual() < STRUCTURE_TOL, "{kind}");
        }
    }

    #[test]
    fn so3_pairing_is_positive_definite() {
        let b = LieBackend::new(BackendKind::So3).unwrap();
        let p = b.pairing_matrix();
        assert!((p - DMatrix::<f64>::identity(3, 3)).amax() < 1e-15);
    }

    #[test]
    fn rejects_zero_dimension_and_unknown_names() {
        assert_eq!(LieBackend::new(BackendKind::Gl(0)).unwrap_err(), LieError::ZeroDimension);
        assert!(matches!(BackendKind::parse("e8", None), Err(LieError::UnknownBackend(_))));
        assert_eq!(BackendKind::parse("gl", Some(0)), Err(LieError::ZeroDimension));
        assert_eq!(BackendKind::parse("gl", Some(4)), Ok(BackendKind::Gl(4)));
        assert_eq!(BackendKind::parse("gl3", None), Ok(BackendKind::Gl(3)));
        assert_eq!("SL2".parse::<BackendKind>(), Ok(BackendKind::Sl2));
    }

    #[test]
    fn rejects_degenerate_trace_form() {
        // upper-triangular 2x2 matrices: the trace form is singular on the nilradical
        let h = Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let e = Mat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let err = LieBackend::from_basis("borel", vec![h, e], 1.0).unwrap_err();
        assert!(matches!(err, LieError::DegeneratePairing(_)));
    }

    #[test]
    fn rejects_non_closed_span() {
        let e = Mat::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let f = Mat::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]);
        assert!(matches!(
            LieBackend::from_basis("ef", vec![e, f], 1.0),
            Err(LieError::NotClosed(_))
        ));
    }

    #[test]
    fn adjoint_examples() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let x = b.basis()[0].clone();
        assert_eq!(b.adjoint(&b.identity(), &x).unwrap(), x);
        let g = Mat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]);
        let ad = b.adjoint(&g, &x).unwrap();
        assert!((ad - &x * 0.25).amax() < 1e-15);
        assert!(matches!(b.adjoint(&Mat::zeros(2, 2), &x), Err(LieError::Singular(_))));
    }

    #[test]
    fn adjoint_preserves_pairing_and_bracket() {
        for kind in [BackendKind::Sl2, BackendKind::Gl(3), BackendKind::So3] {
            let b = LieBackend::new(kind).unwrap();
            let mut s = Sampler::new(11);
            for _ in 0..100 {
                let g = b.random_group_element(s.rng());
                let h = b.random_group_element(s.rng());
                let x = s.lie(&b);
                let y = s.lie(&b);
                let gx = b.adjoint(&g, &x).unwrap();
                let gy = b.adjoint(&g, &y).unwrap();
                let scale = 1.0 + b.pair(&x, &y).abs();
                assert!((b.pair(&gx, &gy) - b.pair(&x, &y)).abs() < SAMPLE_TOL * scale);
                let lhs = b.adjoint(&g, &commutator(&x, &y)).unwrap();
                let rhs = commutator(&gx, &gy);
                assert!((&lhs - &rhs).amax() < SAMPLE_TOL * (1.0 + lhs.amax()));
                // Ad_g(Ad_h(x)) = Ad_{hg}(x)
                let lhs = b.adjoint(&g, &b.adjoint(&h, &x).unwrap()).unwrap();
                let rhs = b.adjoint(&(&h * &g), &x).unwrap();
                assert!((&lhs - &rhs).amax() < SAMPLE_TOL * (1.0 + lhs.amax()));
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let (p0, t0) = sample(&b, 1, 0);
        let (p1, t1) = sample(&b, 1, 0);
        assert_eq!(p0, p1);
        assert_eq!(t0, t1);
        assert!((p0.coords[0].determinant() - 1.0).abs() < 1e-10);
        for seed in 0..1000 {
            let (p, ts) = sample(&b, 2, seed);
            for a in &p.coords {
                assert!((a.determinant() - 1.0).abs() < 1e-10);
            }
            for t in &ts {
                let xi = checked_inverse(&p.coords[t.factor]).unwrap() * &t.value;
                assert!(xi.trace().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn dual_basis_is_dual() {
        for kind in [BackendKind::Sl2, BackendKind::Gl(2), BackendKind::So3] {
            let b = LieBackend::new(kind).unwrap();
            let dual = b.dual_basis();
            for (j, e) in b.basis().iter().enumerate() {
                for (i, d) in dual.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((b.pair(e, d) - want).abs() < 1e-12);
                }
            }
        }
    }
}
