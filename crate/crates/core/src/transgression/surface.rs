//! Small simplicial models of surfaces and their evaluation maps into `B•G`.
//!
//! Each model is a quotient of standard simplices in which all vertices are
//! identified, so an `n`-simplex is a monotone vertex sequence of length `n + 1`
//! inside one of the generating simplices. Maps to `B•G` are determined by the
//! values on edges.

use serde::Serialize;

use crate::cech::{Action, CechError};
use crate::form::GroupWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    Circle,
    Pants,
    PuncturedTorus,
}

impl std::str::FromStr for SurfaceKind {
    type Err = CechError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "circle" => Ok(Self::Circle),
            "pants" => Ok(Self::Pants),
            "punctured_torus" | "punctured-torus" => Ok(Self::PuncturedTorus),
            other => Err(CechError::Unsupported(format!("surface `{other}`"))),
        }
    }
}

/// A simplex: a monotone vertex sequence in generating cell `cell`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Simplex {
    pub cell: usize,
    pub vertices: Vec<usize>,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    fn normalized(mut self) -> Self {
        // every vertex is the base point
        if self.vertices.windows(2).all(|w| w[0] == w[1]) {
            let n = self.vertices.len();
            self.cell = 0;
            self.vertices = vec![0; n];
        }
        self
    }

    pub fn face(&self, i: usize) -> Self {
        let mut v = self.vertices.clone();
        v.remove(i);
        Self { cell: self.cell, vertices: v }.normalized()
    }

    pub fn degeneracy(&self, i: usize) -> Self {
        let mut v = self.vertices.clone();
        v.insert(i, v[i]);
        Self { cell: self.cell, vertices: v }.normalized()
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.windows(2).any(|w| w[0] == w[1])
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimplexEntry {
    pub dim: usize,
    pub label: String,
    pub vertices: Vec<usize>,
    pub cell: usize,
    pub faces: Vec<String>,
    pub nondegenerate: bool,
}

/// A pointed simplicial set with generating cells `Δ^{k_c}` and all vertices identified.
#[derive(Debug, Clone, Serialize)]
pub struct SimplicialSurface {
    pub kind: SurfaceKind,
    /// Dimension of each generating cell.
    pub cells: Vec<usize>,
    /// Names of nondegenerate simplices by (cell, vertex sequence).
    #[serde(skip)]
    names: Vec<(Simplex, String)>,
}

impl SimplicialSurface {
    pub fn build(kind: SurfaceKind) -> Self {
        let s = |cell, v: &[usize]| Simplex { cell, vertices: v.to_vec() };
        let (cells, names) = match kind {
            SurfaceKind::Circle => (vec![1], vec![(s(0, &[0]), "q"), (s(0, &[0, 1]), "τ")]),
            SurfaceKind::Pants => (
                vec![2],
                vec![
                    (s(0, &[0]), "q"),
                    (s(0, &[1, 2]), "τ0"),
                    (s(0, &[0, 2]), "τ1"),
                    (s(0, &[0, 1]), "τ2"),
                    (s(0, &[0, 1, 2]), "M"),
                ],
            ),
            SurfaceKind::PuncturedTorus => {
                (vec![1, 1], vec![(s(0, &[0]), "q"), (s(0, &[0, 1]), "a"), (s(1, &[0, 1]), "b")])
            }
        };
        Self { kind, cells, names: names.into_iter().map(|(x, n)| (x, n.to_string())).collect() }
    }

    /// All simplices of dimension `n` (degenerate ones included), each listed once.
    pub fn simplices(&self, n: usize) -> Vec<Simplex> {
        let mut out = vec![Simplex { cell: 0, vertices: vec![0; n + 1] }];
        for (c, &k) in self.cells.iter().enumerate() {
            for v in monotone(n + 1, k) {
                let x = Simplex { cell: c, vertices: v };
                if x.vertices.first() != x.vertices.last() {
                    out.push(x);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Rendering as iterated degeneracies of a nondegenerate simplex, e.g. `s1 s0 q`.
    pub fn label(&self, x: &Simplex) -> String {
        let mut core = x.vertices.clone();
        let mut ops = Vec::new();
        let mut j = 0;
        while j + 1 < core.len() {
            if core[j] == core[j + 1] {
                ops.push(j);
                core.remove(j + 1);
            } else {
                j += 1;
            }
        }
        let base = Simplex { cell: x.cell, vertices: core }.normalized();
        let name = self
            .names
            .iter()
            .find(|(s, _)| *s == base)
            .map(|(_, n)| n.clone())
            .unwrap_or_else(|| format!("{:?}", base.vertices));
        // canonical form s_{j_k} … s_{j_1} with j_k > … > j_1
        let mut idx: Vec<usize> = ops.iter().enumerate().map(|(k, &p)| p + k).collect();
        idx.reverse();
        let mut parts: Vec<String> = idx.iter().map(|i| format!("s{i}")).collect();
        parts.push(name);
        parts.join(" ")
    }

    pub fn table(&self, max_dim: usize) -> Vec<SimplexEntry> {
        (0..=max_dim)
            .flat_map(|n| {
                self.simplices(n).into_iter().map(move |x| {
                    let faces = if n == 0 { Vec::new() } else { (0..=n).map(|i| self.label(&x.face(i))).collect() };
                    SimplexEntry {
                        dim: n,
                        label: self.label(&x),
                        nondegenerate: !x.is_degenerate(),
                        vertices: x.vertices.clone(),
                        cell: x.cell,
                        faces,
                    }
                })
            })
            .collect()
    }

    /// Brute-force check of the simplicial identities up to dimension `max_dim`.
    pub fn identity_violations(&self, max_dim: usize) -> Vec<String> {
        let mut bad = Vec::new();
        for n in 0..=max_dim {
            for x in self.simplices(n) {
                if n >= 2 {
                    for j in 1..=n {
                        for i in 0..j {
                            if x.face(j).face(i) != x.face(i).face(j - 1) {
                                bad.push(format!("d{i}d{j} on {}", self.label(&x)));
                            }
                        }
                    }
                }
                for j in 0..=n {
                    for i in 0..=j {
                        if x.degeneracy(j).degeneracy(i) != x.degeneracy(i).degeneracy(j + 1) {
                            bad.push(format!("s{i}s{j} on {}", self.label(&x)));
                        }
                    }
                    for i in 0..=(n + 1) {
                        let lhs = x.degeneracy(j).face(i);
                        let rhs = if i < j {
                            x.face(i).degeneracy(j - 1)
                        } else if i <= j + 1 {
                            x.clone()
                        } else {
                            x.face(i - 1).degeneracy(j)
                        };
                        if lhs != rhs {
                            bad.push(format!("d{i}s{j} on {}", self.label(&x)));
                        }
                    }
                }
            }
        }
        bad
    }

    /// Number of group variables of `Hom(S•, B•G)`.
    pub fn rank(&self) -> usize {
        match self.kind {
            SurfaceKind::Circle => 1,
            SurfaceKind::Pants | SurfaceKind::PuncturedTorus => 2,
        }
    }

    /// The conjugation groupoid presenting the mapping stack.
    pub fn mapping_action(&self) -> Action {
        Action::conjugation(self.rank())
    }

    /// Value of the edge `(u, v)` of cell `cell` on the point `(g_1, …, g_r)` of `Hom(S•, B•G)`.
    fn edge(&self, k: usize, cell: usize, u: usize, v: usize) -> GroupWord {
        if u == v {
            return GroupWord::identity(k);
        }
        match (self.kind, cell, u, v) {
            (SurfaceKind::Circle, _, _, _) => GroupWord::var(k, 0),
            (SurfaceKind::Pants, _, 0, 1) => GroupWord::var(k, 0),
            (SurfaceKind::Pants, _, 1, 2) => GroupWord::var(k, 1),
            (SurfaceKind::Pants, _, 0, 2) => GroupWord::var(k, 0).mul(&GroupWord::var(k, 1)),
            (SurfaceKind::PuncturedTorus, c, _, _) => GroupWord::var(k, c),
            _ => unreachable!("edges are increasing pairs"),
        }
    }

    /// `ev_σ : (X/G)_n → B_nG` for an `n`-simplex `σ`, as words on `X × G^n`.
    ///
    /// The `j`-th component is the edge `(v_{j−1}, v_j)` evaluated at the object
    /// `(h₁⋯h_{j−1})⁻¹ x (h₁⋯h_{j−1})` followed by `h_j`.
    pub fn evaluation_map(&self, x: &Simplex) -> Vec<GroupWord> {
        let n = x.dim();
        let r = self.rank();
        let k = r + n;
        let mut prefix = GroupWord::identity(k);
        let mut out = Vec::with_capacity(n);
        for j in 1..=n {
            let edge = self.edge(r, x.cell, x.vertices[j - 1], x.vertices[j]);
            let objects: Vec<GroupWord> =
                (0..r).map(|i| prefix.inverse().mul(&GroupWord::var(k, i)).mul(&prefix)).collect();
            let h = GroupWord::var(k, r + j - 1);
            out.push(edge.substitute(&objects).expect("arity").mul(&h));
            prefix = prefix.mul(&h);
        }
        out
    }

    /// Looks a simplex up by its label.
    pub fn simplex(&self, label: &str) -> Option<Simplex> {
        (0..=3).flat_map(|n| self.simplices(n)).find(|x| self.label(x) == label)
    }
}

fn monotone(len: usize, max: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in monotone(len - 1, max) {
        let lo = rest.last().copied().unwrap_or(0);
        for v in lo..=max {
            let mut r = rest.clone();
            r.push(v);
            out.push(r);
        }
    }
    out
}
