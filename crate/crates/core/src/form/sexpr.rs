//! Plain-text serialization.
//!
//! ```text
//! expr  := (lmc i) | (rmc i) | (ad word expr) | (pair expr expr)
//!        | (bracket expr expr) | (wedge expr expr) | (sum (coef expr) ...)
//!        | (slot name) | (basis i) | (mat r c x11 x12 ...) | (zero lie|scalar degree)
//! word  := (w i e i e ...)        e ∈ {1, -1}
//! coef  := integer | integer/integer
//! ```

use std::str::FromStr;

use num_bigint::BigInt;

use super::{fmt_q, FormError, FormExpr, GroupWord, LieConst, Node, Shape, Q};
use crate::lie::Mat;

impl FormExpr {
    pub fn to_sexpr(&self) -> String {
        let mut s = String::new();
        self.write_sexpr(&mut s);
        s
    }

    fn write_sexpr(&self, s: &mut String) {
        match self.node() {
            Node::Lmc(i) => s.push_str(&format!("(lmc {i})")),
            Node::Rmc(i) => s.push_str(&format!("(rmc {i})")),
            Node::Zero => {
                let v = if self.is_scalar() { "scalar" } else { "lie" };
                s.push_str(&format!("(zero {v} {})", self.degree()));
            }
            Node::Lie(c) => match c {
                LieConst::Basis(i) => s.push_str(&format!("(basis {i})")),
                LieConst::Slot(n) => s.push_str(&format!("(slot {n})")),
                LieConst::Matrix(m) => {
                    s.push_str(&format!("(mat {} {}", m.nrows(), m.ncols()));
                    for i in 0..m.nrows() {
                        for j in 0..m.ncols() {
                            s.push_str(&format!(" {:?}", m[(i, j)]));
                        }
                    }
                    s.push(')');
                }
            },
            Node::Ad(w, e) => {
                s.push_str("(ad ");
                s.push_str(&w.to_sexpr());
                s.push(' ');
                e.write_sexpr(s);
                s.push(')');
            }
            Node::Pair(l, r) | Node::Bracket(l, r) | Node::Wedge(l, r) => {
                let head = match self.node() {
                    Node::Pair(..) => "pair",
                    Node::Bracket(..) => "bracket",
                    _ => "wedge",
                };
                s.push('(');
                s.push_str(head);
                s.push(' ');
                l.write_sexpr(s);
                s.push(' ');
                r.write_sexpr(s);
                s.push(')');
            }
            Node::Sum(ts) => {
                s.push_str("(sum");
                for (c, e) in ts {
                    s.push_str(&format!(" ({} ", fmt_q(c)));
                    e.write_sexpr(s);
                    s.push(')');
                }
                s.push(')');
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Atom(String),
    List(Vec<Tok>),
}

fn tokenize(text: &str) -> Result<Tok, FormError> {
    let mut stack: Vec<Vec<Tok>> = vec![Vec::new()];
    let mut atom = String::new();
    let flush = |atom: &mut String, stack: &mut Vec<Vec<Tok>>| {
        if !atom.is_empty() {
            stack.last_mut().unwrap().push(Tok::Atom(std::mem::take(atom)));
        }
    };
    for ch in text.chars() {
        match ch {
            '(' => {
                flush(&mut atom, &mut stack);
                stack.push(Vec::new());
            }
            ')' => {
                flush(&mut atom, &mut stack);
                if stack.len() < 2 {
                    return Err(FormError::Parse("unbalanced `)`".into()));
                }
                let list = stack.pop().unwrap();
                stack.last_mut().unwrap().push(Tok::List(list));
            }
            c if c.is_whitespace() => flush(&mut atom, &mut stack),
            c => atom.push(c),
        }
    }
    flush(&mut atom, &mut stack);
    if stack.len() != 1 {
        return Err(FormError::Parse("unbalanced `(`".into()));
    }
    let mut top = stack.pop().unwrap();
    if top.len() != 1 {
        return Err(FormError::Parse(format!("expected one expression, found {}", top.len())));
    }
    Ok(top.pop().unwrap())
}

fn atom(t: &Tok) -> Result<&str, FormError> {
    match t {
        Tok::Atom(a) => Ok(a),
        Tok::List(_) => Err(FormError::Parse("expected an atom".into())),
    }
}

fn num<T: FromStr>(t: &Tok) -> Result<T, FormError> {
    let a = atom(t)?;
    a.parse().map_err(|_| FormError::Parse(format!("bad number `{a}`")))
}

fn coef(t: &Tok) -> Result<Q, FormError> {
    let a = atom(t)?;
    let bad = || FormError::Parse(format!("bad coefficient `{a}`"));
    let (n, d) = match a.split_once('/') {
        Some((n, d)) => (n, d),
        None => (a, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

fn arity_of(t: &Tok) -> usize {
    match t {
        Tok::List(items) => match items.first() {
            Some(Tok::Atom(h)) if h == "lmc" || h == "rmc" => {
                items.get(1).and_then(|a| num::<usize>(a).ok()).map(|i| i + 1).unwrap_or(0)
            }
            Some(Tok::Atom(h)) if h == "w" => items[1..]
                .chunks(2)
                .filter_map(|c| num::<usize>(&c[0]).ok())
                .map(|i| i + 1)
                .max()
                .unwrap_or(0),
            _ => items.iter().map(arity_of).max().unwrap_or(0),
        },
        Tok::Atom(_) => 0,
    }
}

/// Parses an s-expression into a form on `G^arity`.
///
/// With `arity = None` the arity is the least one that accommodates every index.
pub fn parse_sexpr(text: &str, arity: Option<usize>) -> Result<FormExpr, FormError> {
    let tok = tokenize(text)?;
    let k = arity.unwrap_or_else(|| arity_of(&tok).max(1));
    build(&tok, k)
}

fn build(t: &Tok, k: usize) -> Result<FormExpr, FormError> {
    let items = match t {
        Tok::List(items) if !items.is_empty() => items,
        _ => return Err(FormError::Parse("expected a non-empty list".into())),
    };
    let head = atom(&items[0])?;
    let args = &items[1..];
    let want = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(FormError::Parse(format!("`{head}` takes {n} arguments, got {}", args.len())))
        }
    };
    match head {
        "lmc" => {
            want(1)?;
            FormExpr::lmc(k, num(&args[0])?)
        }
        "rmc" => {
            want(1)?;
            FormExpr::rmc(k, num(&args[0])?)
        }
        "slot" => {
            want(1)?;
            Ok(FormExpr::slot(k, atom(&args[0])?))
        }
        "basis" => {
            want(1)?;
            Ok(FormExpr::basis(k, num(&args[0])?))
        }
        "mat" => {
            if args.len() < 2 {
                return Err(FormError::Parse("`mat` needs a shape".into()));
            }
            let r: usize = num(&args[0])?;
            let c: usize = num(&args[1])?;
            if args.len() != 2 + r * c {
                return Err(FormError::Parse(format!("`mat {r} {c}` needs {} entries", r * c)));
            }
            let vals = args[2..].iter().map(num::<f64>).collect::<Result<Vec<_>, _>>()?;
            Ok(FormExpr::lie_const(k, LieConst::Matrix(Mat::from_row_slice(r, c, &vals))))
        }
        "zero" => {
            want(2)?;
            let d: usize = num(&args[1])?;
            match atom(&args[0])? {
                "lie" => Ok(FormExpr::zero(Shape::lie(k, d))),
                "scalar" => Ok(FormExpr::zero(Shape::scalar(k, d))),
                other => Err(FormError::Parse(format!("bad valuedness `{other}`"))),
            }
        }
        "ad" => {
            want(2)?;
            let w = build_word(&args[0], k)?;
            FormExpr::ad(&w, &build(&args[1], k)?)
        }
        "pair" | "bracket" | "wedge" => {
            want(2)?;
            let l = build(&args[0], k)?;
            let r = build(&args[1], k)?;
            match head {
                "pair" => FormExpr::pair(&l, &r),
                "bracket" => FormExpr::bracket(&l, &r),
                _ => FormExpr::wedge(&l, &r),
            }
        }
        "sum" => {
            let mut terms = Vec::with_capacity(args.len());
            for a in args {
                match a {
                    Tok::List(pair) if pair.len() == 2 => terms.push((coef(&pair[0])?, build(&pair[1], k)?)),
                    _ => return Err(FormError::Parse("sum terms are `(coef expr)`".into())),
                }
            }
            let shape = match terms.first() {
                Some((_, e)) => e.shape(),
                None => return Err(FormError::Parse("empty sum; use `zero`".into())),
            };
            FormExpr::sum(shape, terms)
        }
        other => Err(FormError::Parse(format!("unknown head `{other}`"))),
    }
}

fn build_word(t: &Tok, k: usize) -> Result<GroupWord, FormError> {
    let items = match t {
        Tok::List(items) if !items.is_empty() && atom(&items[0]).ok() == Some("w") => &items[1..],
        _ => return Err(FormError::Parse("expected a word `(w ...)`".into())),
    };
    if items.len() % 2 != 0 {
        return Err(FormError::Parse("word letters come in (index exponent) pairs".into()));
    }
    let letters = items
        .chunks(2)
        .map(|c| Ok((num::<usize>(&c[0])?, num::<i8>(&c[1])?)))
        .collect::<Result<Vec<_>, FormError>>()?;
    GroupWord::new(k, letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for text in [
            "(pair (lmc 0) (ad (w 1 -1) (rmc 1)))",
            "(sum (1/2 (pair (lmc 0) (slot x))) (-3 (pair (rmc 1) (basis 2))))",
            "(wedge (pair (lmc 0) (mat 2 2 1.0 0.0 0.0 -1.0)) (pair (rmc 0) (slot v)))",
            "(bracket (lmc 0) (zero lie 0))",
        ] {
            let e = parse_sexpr(text, None).unwrap();
            let again = parse_sexpr(&e.to_sexpr(), Some(e.arity())).unwrap();
            assert_eq!(e.to_sexpr(), again.to_sexpr());
        }
        let e = parse_sexpr("(pair (lmc 0) (ad (w 1 -1) (rmc 1)))", None).unwrap();
        assert_eq!(e.to_sexpr(), "(pair (lmc 0) (ad (w 1 -1) (rmc 1)))");
        assert_eq!(e.arity(), 2);
    }

    #[test]
    fn parse_errors() {
        for bad in ["(lmc)", "(pair (lmc 0))", "(foo 1)", "(lmc 0", "(wedge (lmc 0) (lmc 0))", "(sum (x (lmc 0)))"] {
            assert!(parse_sexpr(bad, None).is_err(), "{bad}");
        }
        assert!(parse_sexpr("(lmc 3)", Some(2)).is_err());
    }
}
