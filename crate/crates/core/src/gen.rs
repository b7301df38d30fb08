//! Random well-formed expressions for property tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::form::{q, FormExpr, GroupWord, Shape, Valued};

/// Generator of random forms of a requested shape on `G^arity`.
pub struct ExprGen {
    rng: ChaCha8Rng,
    arity: usize,
    dim: usize,
    slots: Vec<String>,
}

impl ExprGen {
    pub fn new(seed: u64, arity: usize, dim: usize) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), arity, dim, slots: vec!["x".into()] }
    }

    pub fn with_slots(mut self, slots: &[&str]) -> Self {
        self.slots = slots.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn word(&mut self) -> GroupWord {
        let len = self.rng.gen_range(0..=3);
        let letters = (0..len)
            .map(|_| (self.rng.gen_range(0..self.arity), if self.rng.gen_bool(0.5) { 1 } else { -1 }))
            .collect();
        GroupWord::new(self.arity, letters).expect("letters in range")
    }

    fn coef(&mut self) -> crate::form::Q {
        let choices = [(-2, 1), (-1, 1), (-1, 2), (1, 2), (1, 1), (3, 2)];
        let (n, d) = *choices.choose(&mut self.rng).unwrap();
        q(n, d)
    }

    pub fn expr(&mut self, shape: Shape, depth: usize) -> FormExpr {
        match shape.valued {
            Valued::Lie => self.lie(shape.degree, depth),
            Valued::Scalar => self.scalar(shape.degree, depth),
        }
    }

    pub fn lie(&mut self, degree: usize, depth: usize) -> FormExpr {
        let k = self.arity;
        let leaf = depth == 0;
        match degree {
            0 => {
                let choice = if leaf { self.rng.gen_range(0..2) } else { self.rng.gen_range(0..4) };
                match choice {
                    0 => FormExpr::basis(k, self.rng.gen_range(0..self.dim)),
                    1 if !self.slots.is_empty() => {
                        let s = self.slots.choose(&mut self.rng).unwrap().clone();
                        FormExpr::slot(k, &s)
                    }
                    1 => FormExpr::basis(k, 0),
                    2 => {
                        let w = self.word();
                        FormExpr::ad(&w, &self.lie(0, depth - 1)).unwrap()
                    }
                    _ => FormExpr::bracket(&self.lie(0, depth - 1), &self.lie(0, depth - 1)).unwrap(),
                }
            }
            1 => {
                let choice = if leaf { self.rng.gen_range(0..2) } else { self.rng.gen_range(0..5) };
                match choice {
                    0 => FormExpr::lmc(k, self.rng.gen_range(0..k)).unwrap(),
                    1 => FormExpr::rmc(k, self.rng.gen_range(0..k)).unwrap(),
                    2 => {
                        let w = self.word();
                        FormExpr::ad(&w, &self.lie(1, depth - 1)).unwrap()
                    }
                    3 => {
                        let (a, b) = (self.lie(1, depth - 1), self.lie(1, depth - 1));
                        let (c, d) = (self.coef(), self.coef());
                        FormExpr::sum(Shape::lie(k, 1), vec![(c, a), (d, b)]).unwrap()
                    }
                    _ => FormExpr::bracket(&self.lie(0, depth - 1), &self.lie(1, depth - 1)).unwrap(),
                }
            }
            _ => {
                let d = depth.saturating_sub(1);
                let choice = if leaf { 0 } else { self.rng.gen_range(0..3) };
                match choice {
                    0 => {
                        let a = self.rng.gen_range(1..degree);
                        FormExpr::bracket(&self.lie(a, d), &self.lie(degree - a, d)).unwrap()
                    }
                    1 => {
                        let w = self.word();
                        FormExpr::ad(&w, &self.lie(degree, d)).unwrap()
                    }
                    _ => {
                        let (a, b) = (self.lie(degree, d), self.lie(degree, d));
                        let (c, e) = (self.coef(), self.coef());
                        FormExpr::sum(Shape::lie(k, degree), vec![(c, a), (e, b)]).unwrap()
                    }
                }
            }
        }
    }

    pub fn scalar(&mut self, degree: usize, depth: usize) -> FormExpr {
        let k = self.arity;
        let d = depth.saturating_sub(1);
        let choice = if depth == 0 || degree < 2 { self.rng.gen_range(0..2) } else { self.rng.gen_range(0..3) };
        match choice {
            0 => {
                let a = self.rng.gen_range(0..=degree);
                FormExpr::pair(&self.lie(a, d), &self.lie(degree - a, d)).unwrap()
            }
            1 if depth > 0 => {
                let (a, b) = (self.scalar(degree, d), self.scalar(degree, d));
                let (c, e) = (self.coef(), self.coef());
                FormExpr::sum(Shape::scalar(k, degree), vec![(c, a), (e, b)]).unwrap()
            }
            1 => FormExpr::pair(&self.lie(degree, 0), &self.lie(0, 0)).unwrap(),
            _ => {
                let a = self.rng.gen_range(1..degree);
                FormExpr::wedge(&self.scalar(a, d), &self.scalar(degree - a, d)).unwrap()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_are_respected() {
        for seed in 0..200 {
            let mut g = ExprGen::new(seed, 2, 3);
            for deg in 0..=3 {
                assert_eq!(g.lie(deg, 2).shape(), Shape::lie(2, deg));
                assert_eq!(g.scalar(deg, 2).shape(), Shape::scalar(2, deg));
            }
        }
    }
}
