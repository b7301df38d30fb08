use proptest::prelude::*;
use qhred::canonical::{omega0, omega1, phi};
use qhred::cech::{descent_map, Action, Datum};
use qhred::form::{equal_numeric, normalize, Q};
use qhred::gen::ExprGen;
use qhred::lie::{BackendKind, LieBackend};
use qhred::report::Sampling;
use qhred::transgression::{
    double_lagrangian, em_pushforward, gl1_torus_check, punctured_torus_suite, transgress_circle_theorem, SimplicialSurface,
    SurfaceKind,
};

const KINDS: [(SurfaceKind, &str); 3] =
    [(SurfaceKind::Circle, "circle"), (SurfaceKind::Pants, "pants"), (SurfaceKind::PuncturedTorus, "punctured_torus")];

fn tables() -> serde_json::Value {
    let mut m = serde_json::Map::new();
    for (k, name) in KINDS {
        m.insert(name.into(), serde_json::to_value(SimplicialSurface::build(k).table(3)).unwrap());
    }
    serde_json::Value::Object(m)
}

#[test]
fn surface_tables_match_golden_fixture() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/surfaces.json");
    let now = tables();
    if std::env::var_os("QHRED_BLESS").is_some() {
        std::fs::write(path, serde_json::to_string_pretty(&now).unwrap() + "\n").unwrap();
    }
    let frozen: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(now, frozen);
}

#[test]
fn hand_checked_faces() {
    let find = |k, label: &str| {
        SimplicialSurface::build(k).table(2).into_iter().find(|e| e.label == label).unwrap_or_else(|| panic!("{label}"))
    };
    assert_eq!(find(SurfaceKind::Pants, "M").faces, ["τ0", "τ1", "τ2"]);
    assert_eq!(find(SurfaceKind::Circle, "τ").faces, ["q", "q"]);
    assert_eq!(find(SurfaceKind::Circle, "s0 τ").faces, ["τ", "τ", "s0 q"]);
    assert_eq!(find(SurfaceKind::Circle, "s1 τ").faces, ["s0 q", "τ", "τ"]);
    assert_eq!(find(SurfaceKind::PuncturedTorus, "b").faces, ["q", "q"]);
}

#[test]
fn simplicial_identities_hold() {
    for (k, name) in KINDS {
        let v = SimplicialSurface::build(k).identity_violations(4);
        assert!(v.is_empty(), "{name}: {v:?}");
    }
}

#[test]
fn nondegenerate_counts() {
    let count = |k, n| SimplicialSurface::build(k).table(3).iter().filter(|e| e.dim == n && e.nondegenerate).count();
    // circle: one vertex, one edge; pants: one vertex, three edges, one triangle; torus: wedge of two circles
    assert_eq!([0, 1, 2].map(|n| count(SurfaceKind::Circle, n)), [1, 1, 0]);
    assert_eq!([0, 1, 2].map(|n| count(SurfaceKind::Pants, n)), [1, 3, 1]);
    assert_eq!([0, 1, 2].map(|n| count(SurfaceKind::PuncturedTorus, n)), [1, 2, 0]);
}

#[test]
fn circle_pushforward_of_phi_is_descent_of_omega0_on_gl2() {
    let b = LieBackend::new(BackendKind::Gl(2)).unwrap();
    let em = em_pushforward(&SimplicialSurface::build(SurfaceKind::Circle), 2, &phi()).unwrap();
    let d = descent_map(&Action::conjugation(1), &Datum::Linear(omega0()), &b).unwrap().remove(0);
    let v = equal_numeric(&em.form, &d.form, &b, 50, 1e-9, 5).unwrap();
    assert!(v.equal, "{:e}", v.worst_residual);
}

#[test]
fn pants_returns_phi_exactly() {
    let p = em_pushforward(&SimplicialSurface::build(SurfaceKind::Pants), 2, &phi()).unwrap();
    assert_eq!(normalize(&p.form), normalize(&phi()));
    let w1 = em_pushforward(&SimplicialSurface::build(SurfaceKind::Circle), 1, &omega1()).unwrap();
    assert_eq!(w1.form.arity(), 1);
}

#[test]
fn theorem_and_torus_suites_pass_on_so3() {
    let b = LieBackend::new(BackendKind::So3).unwrap();
    let s = Sampling::new(40, 1e-9, 9);
    for c in transgress_circle_theorem(&b, s).into_iter().chain(punctured_torus_suite(&b, s)) {
        assert!(c.passed(), "{}: {:e}", c.name, c.worst_residual);
    }
    assert!(gl1_torus_check(s).passed());
    assert_eq!(double_lagrangian().arity(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pushforward_is_linear(seed in any::<u64>(), deg in 1usize..=3, num in -3i64..=3, which in 0usize..3) {
        let (kind, level) = [(SurfaceKind::Circle, 2), (SurfaceKind::Circle, 1), (SurfaceKind::Pants, 2)][which];
        let surface = SimplicialSurface::build(kind);
        let mut g = ExprGen::new(seed, level, 3);
        let (f, h) = (g.scalar(deg, 2), g.scalar(deg, 2));
        let c = Q::new(num.into(), 2.into());
        let combo = f.scale(c.clone()).add(&h).unwrap();
        let lhs = em_pushforward(&surface, level, &combo).unwrap().form;
        let rhs = em_pushforward(&surface, level, &f).unwrap().form.scale(c).add(&em_pushforward(&surface, level, &h).unwrap().form).unwrap();
        let b = LieBackend::new(BackendKind::Sl2).unwrap();
        let v = equal_numeric(&lhs, &rhs, &b, 4, 1e-9, seed).unwrap();
        prop_assert!(v.equal, "{:e}", v.worst_residual);
    }
}

#[test]
fn unsupported_pushforward_is_an_error() {
    let torus = SimplicialSurface::build(SurfaceKind::PuncturedTorus);
    assert!(em_pushforward(&torus, 2, &phi()).is_err());
    assert!(em_pushforward(&SimplicialSurface::build(SurfaceKind::Circle), 1, &phi()).is_err());
}
