use jetgauge_core::matlie::{exp_series_oracle, gauged_field_formula};
use jetgauge_core::random::Sampler;
use jetgauge_core::*;
use nalgebra::DMatrix;
use rand::Rng;

fn ctx3() -> JetContext {
    JetContext::new(&["x"], &["u", "v", "w", "z"], &["a1", "a2", "a3"], 1).unwrap()
}

fn all_reps() -> Vec<LieRepresentation> {
    LieRepresentation::builtin_tags().iter().map(|t| LieRepresentation::from_tag(t).unwrap()).collect()
}

fn symbols(n: usize) -> (JetContext, Vec<Expr>) {
    let names = ["a1", "a2", "a3"];
    let c = JetContext::new(&["x"], &["u"], &names[..n], 1).unwrap();
    let a = c.alphas();
    (c, a)
}

fn eps(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

#[test]
fn su2_commutator_is_twice_the_third_generator() {
    let rep = LieRepresentation::su2_real4();
    let l = rep.generators();
    assert_eq!(l[0].commutator(&l[1]).unwrap(), l[2].scale(&Expr::int(2)));
    assert!(l[0].commutator(&l[0]).unwrap().is_zero());
}

#[test]
fn generator_bracket_tables_hold_exactly() {
    let su2 = LieRepresentation::su2_real4();
    let so3 = LieRepresentation::so3();
    let id = MatrixExpr::identity(4);
    for i in 0..3 {
        for j in 0..3 {
            let mut want = if i == j { id.neg() } else { MatrixExpr::zeros(4) };
            let mut so3_want = MatrixExpr::zeros(3);
            for k in 0..3 {
                let e = Expr::int(eps(i, j, k));
                want = want.add(&su2.generators()[k].scale(&e)).unwrap();
                so3_want = so3_want.add(&so3.generators()[k].scale(&e)).unwrap();
            }
            assert_eq!(su2.generators()[i].mul(&su2.generators()[j]).unwrap(), want);
            assert_eq!(so3.generators()[i].commutator(&so3.generators()[j]).unwrap(), so3_want);
        }
    }
    for rep in all_reps().into_iter().filter(|r| r.family().is_abelian()) {
        let g = &rep.generators()[0];
        assert!(g.commutator(g).unwrap().is_zero());
    }
}

#[test]
fn symbolic_inverse() {
    let (c, a) = symbols(1);
    let m = MatrixExpr::from_rows(vec![vec![Expr::one(), a[0].clone()], vec![Expr::zero(), Expr::one()]]).unwrap();
    let want = MatrixExpr::from_rows(vec![vec![Expr::one(), -&a[0]], vec![Expr::zero(), Expr::one()]]).unwrap();
    assert_eq!(m.inverse().unwrap(), want);
    assert_eq!(m.inverse_checked(&Oracle::default()).unwrap(), want);
    let singular = MatrixExpr::parse("[[1, u], [u, u^2]]", &c).unwrap();
    assert_eq!(singular.inverse_checked(&Oracle::default()), Err(Error::NotInvertible));
    let k = LieRepresentation::su2_real4().exp_rep(&ctx3().alphas()).unwrap();
    let inv = k.inverse_checked(&Oracle::default()).unwrap();
    assert!(k.mul(&inv).unwrap().equal(&MatrixExpr::identity(4), &Oracle::default()).holds());
}

#[test]
fn dimension_errors() {
    let a = MatrixExpr::identity(2);
    let b = MatrixExpr::identity(3);
    assert!(matches!(a.mul(&b), Err(Error::Dimension(_))));
    assert!(matches!(a.add(&b), Err(Error::Dimension(_))));
    assert!(matches!(a.apply(&[Expr::one()]), Err(Error::Dimension(_))));
    assert!(MatrixExpr::new(2, vec![Expr::one(); 3]).is_err());
    let rep = LieRepresentation::su2_real4();
    assert!(matches!(rep.exp_rep(&[Expr::one()]), Err(Error::Dimension(_))));
    assert!(LieRepresentation::from_tag("sl3").is_err());
}

#[test]
fn matrix_parse_and_print() {
    let (c, _) = symbols(1);
    let m = MatrixExpr::parse("[[0, -u_x], [sin(u), 1/2]]", &c).unwrap();
    assert_eq!(m.to_string(), "[[0, -u_x], [sin(u), 1/2]]");
    assert_eq!(MatrixExpr::parse(&m.to_string(), &c).unwrap(), m);
    assert!(MatrixExpr::parse("[[1, 2], [3]]", &c).is_err());
    assert!(MatrixExpr::parse("[[1, 2], [3, 4]", &c).is_err());
}

#[test]
fn closed_form_exponentials() {
    let (_, a) = symbols(3);
    let su2 = LieRepresentation::su2_real4();
    assert_eq!(su2.exp_rep(&[Expr::zero(), Expr::zero(), Expr::zero()]).unwrap(), MatrixExpr::identity(4));

    let (_, a1) = symbols(1);
    let nil = LieRepresentation::nilpotent2().exp_rep(&a1).unwrap();
    assert_eq!(nil, MatrixExpr::from_rows(vec![vec![Expr::one(), a1[0].clone()], vec![Expr::zero(), Expr::one()]]).unwrap());

    let so3 = LieRepresentation::so3();
    let w = Expr::add(a.iter().map(|x| x.powi(2)).collect()).sqrt();
    let l = so3.generic(&a).unwrap();
    let want = MatrixExpr::identity(3)
        .add(&l.scale(&(w.sin() / &w)))
        .unwrap()
        .add(&l.mul(&l).unwrap().scale(&((Expr::one() - w.cos()) / w.powi(2))))
        .unwrap();
    assert!(so3.exp_rep(&a).unwrap().equal(&want, &Oracle::default()).holds());

    let so2 = LieRepresentation::so2().exp_rep(&a1).unwrap();
    assert_eq!(so2.to_string(), "[[cos(a1), -sin(a1)], [sin(a1), cos(a1)]]");
}

fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

#[test]
fn series_oracle_examples() {
    let su2 = LieRepresentation::su2_real4();
    let pt = [0.3, 0.1, 0.2];
    assert!(max_diff(&exp_series_oracle(&su2, &pt, 30).unwrap(), &su2.exp_numeric(&pt).unwrap()) < 1e-12);
    for rep in all_reps() {
        let zero = vec![0.0; rep.rank()];
        let s = exp_series_oracle(&rep, &zero, 20).unwrap();
        assert_eq!(s, DMatrix::identity(rep.dim(), rep.dim()));
    }
    let r = exp_series_oracle(&LieRepresentation::so3(), &[0.0, 0.0, std::f64::consts::FRAC_PI_2], 40).unwrap();
    let want = DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
    assert!(max_diff(&r, &want) < 1e-12);
}

#[test]
fn closed_forms_match_the_series_at_random_points() {
    let mut s = Sampler::new(0x6A65_7467);
    for rep in all_reps() {
        for _ in 0..10 {
            let pt: Vec<f64> = (0..rep.rank()).map(|_| s.rng().gen_range(-1.5..1.5)).collect();
            let d = max_diff(&exp_series_oracle(&rep, &pt, 40).unwrap(), &rep.exp_numeric(&pt).unwrap());
            assert!(d < 1e-10, "{} at {pt:?}: {d}", rep.tag());
        }
    }
}

#[test]
fn numeric_exponential_near_zero_uses_the_series() {
    let su2 = LieRepresentation::su2_real4();
    let tiny = [1e-10, -2e-10, 5e-11];
    let k = su2.exp_numeric(&tiny).unwrap();
    assert!(k.iter().all(|v| v.is_finite()));
    assert!(max_diff(&k, &DMatrix::identity(4, 4)) < 1e-9);
}

#[test]
fn power_relations() {
    let (_, a) = symbols(3);
    let o = Oracle::default();
    let w2 = Expr::add(a.iter().map(|x| x.powi(2)).collect());
    let l = LieRepresentation::su2_real4().generic(&a).unwrap();
    assert!(l.mul(&l).unwrap().equal(&MatrixExpr::identity(4).scale(&-&w2), &o).holds());
    let l = LieRepresentation::so3().generic(&a).unwrap();
    let l3 = l.mul(&l).unwrap().mul(&l).unwrap();
    assert!(l3.equal(&l.scale(&-&w2), &o).holds());
}

#[test]
fn exponentials_invert_under_negation() {
    let o = Oracle::default();
    for rep in all_reps() {
        let (_, a) = symbols(rep.rank());
        let neg: Vec<Expr> = a.iter().map(|x| -x).collect();
        let prod = rep.exp_rep(&a).unwrap().mul(&rep.exp_rep(&neg).unwrap()).unwrap();
        assert!(prod.equal(&MatrixExpr::identity(rep.dim()), &o).holds(), "{}", rep.tag());
    }
}

#[test]
fn gauged_fields() {
    let c = JetContext::new(&["x"], &["u", "v"], &["a"], 1).unwrap();
    let theta = vec![c.parse("2*u").unwrap(), c.u(1)];
    let q = gauged_field_formula(&LieRepresentation::nilpotent2(), &theta, &c.alphas()).unwrap();
    assert_eq!(q, vec![c.parse("2*u + a*v").unwrap(), c.u(1)]);
    let zero = gauged_field_formula(&LieRepresentation::nilpotent2(), &[Expr::zero(), Expr::zero()], &c.alphas()).unwrap();
    assert!(zero.iter().all(Expr::is_zero));

    let c4 = ctx3();
    let a = c4.alphas();
    let q = gauged_field_formula(&LieRepresentation::su2_real4(), &[-c4.u(0), Expr::zero(), Expr::zero(), Expr::zero()], &a).unwrap();
    let w = Expr::add(a.iter().map(|x| x.powi(2)).collect()).sqrt();
    let s = w.sin() / &w;
    let u = c4.u(0);
    let want = [-(&u * w.cos()), &s * &a[0] * &u, &s * &a[2] * &u, &s * &a[1] * &u];
    for (g, e) in q.iter().zip(&want) {
        assert!(Oracle::default().equal(g, e).holds());
    }
}

#[test]
fn custom_families() {
    let g = MatrixExpr::from_ints(&[&[0, -1], &[0, 0]]);
    let rep = LieRepresentation::nilpotent("upper", vec![g]).unwrap();
    let (_, a) = symbols(1);
    assert_eq!(rep.exp_rep(&a).unwrap().to_string(), "[[1, -a1], [0, 1]]");
    assert!(LieRepresentation::nilpotent("bad", vec![MatrixExpr::from_ints(&[&[0, -1], &[1, 0]])]).is_err());

    let (c, a) = symbols(1);
    let k = MatrixExpr::parse("[[exp(a1), 0], [0, 1]]", &c).unwrap();
    let diag = LieRepresentation::custom_closed_form("diag", vec![MatrixExpr::from_ints(&[&[1, 0], &[0, 0]])], vec![c.alpha_symbol(0).clone()], k).unwrap();
    assert_eq!(diag.tag(), "custom");
    let at = diag.exp_rep(&[Expr::int(2) * &a[0]]).unwrap();
    assert_eq!(at.get(0, 0), &(Expr::int(2) * &a[0]).exp());
    let num = diag.exp_numeric(&[0.5]).unwrap();
    assert!((num[(0, 0)] - 0.5f64.exp()).abs() < 1e-15);
}
