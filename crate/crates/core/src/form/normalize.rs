//! Best-effort canonical form.
//!
//! Sums are flattened and expanded by bilinearity, Ad-twists are kept outermost and
//! composed, one Ad-twist is moved off every pairing and bracket using invariance,
//! and graded-commutative products are sorted by their rendering.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{parity_sign, FormExpr, GroupWord, Node, Shape, Q};

type Lin = Vec<(Q, FormExpr)>;

const MAX_PASSES: usize = 8;

/// Rewrites `e` into a numerically equal canonical form; idempotent.
pub fn normalize(e: &FormExpr) -> FormExpr {
    let mut cur = e.clone();
    let mut key = cur.to_sexpr();
    for _ in 0..MAX_PASSES {
        let next = build(cur.shape(), norm(&cur));
        let next_key = next.to_sexpr();
        if next_key == key {
            return next;
        }
        cur = next;
        key = next_key;
    }
    cur
}

fn build(shape: Shape, lin: Lin) -> FormExpr {
    FormExpr::sum(shape, lin).expect("normalized terms keep their shape")
}

fn merge(lin: Lin) -> Lin {
    let mut acc: BTreeMap<String, (Q, FormExpr)> = BTreeMap::new();
    for (c, m) in lin {
        if c.is_zero() || m.is_zero() {
            continue;
        }
        acc.entry(m.to_sexpr())
            .and_modify(|(a, _)| *a += c.clone())
            .or_insert((c, m));
    }
    acc.into_values().filter(|(c, _)| !c.is_zero()).collect()
}

fn norm(e: &FormExpr) -> Lin {
    let out = match e.node() {
        Node::Zero => Vec::new(),
        Node::Lmc(_) | Node::Rmc(_) | Node::Lie(_) => vec![(Q::one(), e.clone())],
        Node::Sum(ts) => ts
            .iter()
            .flat_map(|(c, t)| norm(t).into_iter().map(move |(d, m)| (c.clone() * d, m)))
            .collect(),
        Node::Ad(w, b) => norm(b).into_iter().map(|(c, m)| (c, ad_mono(w, &m))).collect(),
        Node::Pair(l, r) => expand(l, r, pair_mono),
        Node::Bracket(l, r) => expand(l, r, bracket_mono),
        Node::Wedge(l, r) => expand(l, r, wedge_mono),
    };
    merge(out)
}

fn expand(l: &FormExpr, r: &FormExpr, f: fn(&FormExpr, &FormExpr) -> Lin) -> Lin {
    let ls = norm(l);
    let rs = norm(r);
    let mut out = Vec::new();
    for (a, x) in &ls {
        for (b, y) in &rs {
            for (c, m) in f(x, y) {
                out.push((a.clone() * b.clone() * c, m));
            }
        }
    }
    out
}

fn strip(m: &FormExpr) -> (GroupWord, FormExpr) {
    match m.node() {
        Node::Ad(w, x) => (w.clone(), x.clone()),
        _ => (GroupWord::identity(m.arity()), m.clone()),
    }
}

/// `Ad_w` of a canonical monomial, composing with an existing outer twist.
fn ad_mono(w: &GroupWord, m: &FormExpr) -> FormExpr {
    let (v, x) = strip(m);
    FormExpr::ad(&v.mul(w), &x).expect("Lie-valued")
}

/// `(Ad_w x, Ad_v y) = (x, Ad_{v w⁻¹} y)`; picks the smaller of the two graded-symmetric orders.
fn pair_mono(a: &FormExpr, b: &FormExpr) -> Lin {
    let (w, x) = strip(a);
    let (v, y) = strip(b);
    let one = FormExpr::pair(&x, &ad_mono(&v.mul(&w.inverse()), &y)).expect("pair");
    let two = FormExpr::pair(&y, &ad_mono(&w.mul(&v.inverse()), &x)).expect("pair");
    let sign = parity_sign(a.degree() * b.degree());
    choose(one, two, sign, None)
}

/// `[Ad_w x, Ad_v y] = Ad_w [x, Ad_{v w⁻¹} y]`, with graded antisymmetry.
fn bracket_mono(a: &FormExpr, b: &FormExpr) -> Lin {
    let (w, x) = strip(a);
    let (v, y) = strip(b);
    let one = FormExpr::bracket(&x, &ad_mono(&v.mul(&w.inverse()), &y)).expect("bracket");
    let two = FormExpr::bracket(&y, &ad_mono(&w.mul(&v.inverse()), &x)).expect("bracket");
    let sign = -parity_sign(a.degree() * b.degree());
    choose(one, two, sign, Some((w, v)))
}

fn choose(one: FormExpr, two: FormExpr, sign: Q, outer: Option<(GroupWord, GroupWord)>) -> Lin {
    let k1 = one.to_sexpr();
    let k2 = two.to_sexpr();
    let wrap = |e: FormExpr, w: Option<GroupWord>| match w {
        Some(w) => FormExpr::ad(&w, &e).expect("Lie-valued"),
        None => e,
    };
    let (w1, w2) = match outer {
        Some((w, v)) => (Some(w), Some(v)),
        None => (None, None),
    };
    if k1 == k2 {
        if sign == -Q::one() {
            return Vec::new();
        }
        return vec![(Q::one(), wrap(one, w1))];
    }
    if k1 < k2 {
        vec![(Q::one(), wrap(one, w1))]
    } else {
        vec![(sign, wrap(two, w2))]
    }
}

fn wedge_factors(m: &FormExpr, out: &mut Vec<FormExpr>) {
    match m.node() {
        Node::Wedge(l, r) => {
            wedge_factors(l, out);
            wedge_factors(r, out);
        }
        _ => out.push(m.clone()),
    }
}

/// Flattens a wedge of monomials, sorts factors with Koszul signs, and drops
/// products with a repeated odd factor.
fn wedge_mono(a: &FormExpr, b: &FormExpr) -> Lin {
    let mut fs = Vec::new();
    wedge_factors(a, &mut fs);
    wedge_factors(b, &mut fs);
    let mut keyed: Vec<(String, FormExpr)> = fs.into_iter().map(|f| (f.to_sexpr(), f)).collect();
    let mut sign = Q::one();
    for i in 1..keyed.len() {
        let mut j = i;
        while j > 0 && keyed[j - 1].0 > keyed[j].0 {
            sign *= parity_sign(keyed[j - 1].1.degree() * keyed[j].1.degree());
            keyed.swap(j - 1, j);
            j -= 1;
        }
    }
    for pair in keyed.windows(2) {
        if pair[0].0 == pair[1].0 && pair[0].1.degree() % 2 == 1 {
            return Vec::new();
        }
    }
    let mut it = keyed.into_iter().rev();
    let mut acc = it.next().expect("at least two factors").1;
    for (_, f) in it {
        acc = FormExpr::wedge(&f, &acc).expect("scalar");
    }
    vec![(sign, acc)]
}
