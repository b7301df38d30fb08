use std::fmt;

use serde::{Deserialize, Serialize};

use super::FormError;
use crate::lie::{checked_inverse, GroupPoint, LieError, Mat};

/// A word in the coordinates of `G^k` and their inverses, read left to right.
///
/// Evaluating at a point multiplies `coords[i]^{±1}` in order; the empty word is `e`.
/// Words are kept freely reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupWord {
    arity: usize,
    letters: Vec<(usize, i8)>,
}

impl GroupWord {
    pub fn new(arity: usize, letters: Vec<(usize, i8)>) -> Result<Self, FormError> {
        for &(i, e) in &letters {
            if i >= arity {
                return Err(FormError::IndexOutOfRange { index: i, arity });
            }
            if e != 1 && e != -1 {
                return Err(FormError::BadExponent(e));
            }
        }
        Ok(Self { arity, letters: reduce(letters) })
    }

    pub fn identity(arity: usize) -> Self {
        Self { arity, letters: Vec::new() }
    }

    /// The coordinate projection `a ↦ a_i`.
    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable {i} out of range for arity {arity}");
        Self { arity, letters: vec![(i, 1)] }
    }

    /// Projections onto every factor: the identity map of `G^k`.
    pub fn vars(arity: usize) -> Vec<Self> {
        (0..arity).map(|i| Self::var(arity, i)).collect()
    }

    /// Builds a word from a compact description such as `[(0, 1), (1, -1)]`, panicking
    /// on invalid input. Intended for literal words in library and test code.
    pub fn from_letters(arity: usize, letters: &[(usize, i8)]) -> Self {
        Self::new(arity, letters.to_vec()).expect("invalid literal word")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "word arity mismatch");
        let mut l = self.letters.clone();
        l.extend_from_slice(&other.letters);
        Self { arity: self.arity, letters: reduce(l) }
    }

    pub fn inverse(&self) -> Self {
        Self {
            arity: self.arity,
            letters: self.letters.iter().rev().map(|&(i, e)| (i, -e)).collect(),
        }
    }

    /// Prefix consisting of the first `n` letters.
    pub fn prefix(&self, n: usize) -> Self {
        Self { arity: self.arity, letters: self.letters[..n].to_vec() }
    }

    /// Suffix after the first `n` letters.
    pub fn suffix(&self, n: usize) -> Self {
        Self { arity: self.arity, letters: self.letters[n..].to_vec() }
    }

    /// Composes with a map `G^m → G^k` given by `k` words in `m` variables.
    pub fn substitute(&self, map: &[GroupWord]) -> Result<Self, FormError> {
        self.substitute_from(map.first().map(|w| w.arity).unwrap_or(0), map)
    }

    /// [`substitute`](Self::substitute) with the source arity `m` given explicitly.
    pub fn substitute_from(&self, m: usize, map: &[GroupWord]) -> Result<Self, FormError> {
        if map.len() != self.arity {
            return Err(FormError::ArityMismatch { expected: self.arity, got: map.len() });
        }
        if map.iter().any(|w| w.arity != m) {
            return Err(FormError::InconsistentMap);
        }
        let mut out = Vec::new();
        for &(i, e) in &self.letters {
            if e > 0 {
                out.extend_from_slice(&map[i].letters);
            } else {
                out.extend(map[i].letters.iter().rev().map(|&(j, f)| (j, -f)));
            }
        }
        Ok(Self { arity: m, letters: reduce(out) })
    }

    pub fn eval(&self, point: &GroupPoint) -> Result<Mat, LieError> {
        let n = point.coords.first().map(|m| m.nrows()).unwrap_or(1);
        let mut acc = Mat::identity(n, n);
        for &(i, e) in &self.letters {
            if e > 0 {
                acc *= &point.coords[i];
            } else {
                acc *= checked_inverse(&point.coords[i])?;
            }
        }
        Ok(acc)
    }

    /// Evaluation with precomputed inverses of the coordinates.
    pub(crate) fn eval_with(&self, coords: &[Mat], inverses: &[Mat]) -> Mat {
        let n = coords.first().map(|m| m.nrows()).unwrap_or(1);
        let mut acc = Mat::identity(n, n);
        for &(i, e) in &self.letters {
            if e > 0 {
                acc *= &coords[i];
            } else {
                acc *= &inverses[i];
            }
        }
        acc
    }

    /// Renders as `(w i e ...)`.
    pub fn to_sexpr(&self) -> String {
        let mut s = String::from("(w");
        for &(i, e) in &self.letters {
            s.push_str(&format!(" {i} {e}"));
        }
        s.push(')');
        s
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (k, &(i, e)) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, "·")?;
            }
            if e > 0 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}⁻¹")?;
            }
        }
        Ok(())
    }
}

fn reduce(letters: Vec<(usize, i8)>) -> Vec<(usize, i8)> {
    let mut out: Vec<(usize, i8)> = Vec::with_capacity(letters.len());
    for l in letters {
        match out.last() {
            Some(&(i, e)) if i == l.0 && e == -l.1 => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}
