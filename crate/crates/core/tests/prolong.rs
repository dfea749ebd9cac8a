use jetgauge_core::gauge::lambda_of_section;
use jetgauge_core::prolong::*;
use jetgauge_core::random::Sampler;
use jetgauge_core::*;
use proptest::prelude::*;

fn ctx_uv() -> JetContext {
    JetContext::new(&["x"], &["u", "v"], &["a"], 3).unwrap()
}

fn exprs(c: &JetContext, items: &[&str]) -> Vec<Expr> {
    items.iter().map(|s| c.parse(s).unwrap()).collect()
}

fn idx(counts: &[u32]) -> MultiIndex {
    MultiIndex::from_counts(counts.to_vec())
}

fn mu1(c: &JetContext, text: &str) -> MuForm {
    MuForm::new(c, vec![MatrixExpr::parse(text, c).unwrap()]).unwrap()
}

#[test]
fn evolutionary_representatives() {
    let c = JetContext::new(&["x"], &["u"], &[], 2).unwrap();
    let phi = exprs(&c, &["x*u^2"]);
    assert_eq!(evolutionary(&[Expr::zero()], &phi, &c).unwrap().q(), phi.as_slice());
    assert_eq!(evolutionary(&[Expr::one()], &[Expr::zero()], &c).unwrap().q(), exprs(&c, &["-u_x"]).as_slice());
    assert_eq!(evolutionary(&exprs(&c, &["x"]), &exprs(&c, &["u"]), &c).unwrap().q(), exprs(&c, &["u - x*u_x"]).as_slice());
    assert!(evolutionary(&exprs(&c, &["u_x"]), &[Expr::zero()], &c).is_err());
    assert!(evolutionary(&[], &[Expr::zero()], &c).is_err());
}

#[test]
fn field_construction_rules() {
    let c = ctx_uv();
    assert!(EvoField::vertical(&c, exprs(&c, &["u_x", "a*v"])).is_ok());
    assert!(EvoField::vertical(&c, exprs(&c, &["u_xx", "0"])).is_err());
    assert!(EvoField::vertical(&c, exprs(&c, &["u"])).is_err());
    assert!(EvoField::new(&c, exprs(&c, &["u", "v"]), exprs(&c, &["1", "2"])).is_err());
    let f = EvoField::new(&c, exprs(&c, &["2*u + a*v", "v"]), exprs(&c, &["2*u + a*v"])).unwrap();
    assert_eq!(f.to_string(), "(2*u + v*a)*d/du + (v)*d/dv + (2*u + v*a)*d/da");
}

#[test]
fn standard_prolongation_examples() {
    let c = JetContext::new(&["x"], &["u"], &[], 2).unwrap();
    let y = std_prolong(&EvoField::vertical(&c, vec![c.u(0)]).unwrap(), 2).unwrap();
    assert_eq!(y.row(&idx(&[1])), exprs(&c, &["u_x"]).as_slice());
    assert_eq!(y.row(&idx(&[2])), exprs(&c, &["u_xx"]).as_slice());

    let c = ctx_uv();
    let q = exprs(&c, &["(u - a)*v", "v"]);
    let f = EvoField::new(&c, q.clone(), vec![q[0].clone()]).unwrap();
    let y = std_prolong(&f, 2).unwrap();
    assert_eq!(y.row(&idx(&[1])), exprs(&c, &["u_x*v + (u - a)*v_x", "v_x"]).as_slice());
    assert_eq!(y.row(&idx(&[2])), exprs(&c, &["u_xx*v + 2*u_x*v_x + (u - a)*v_xx", "v_xx"]).as_slice());
    assert_eq!(y.p(), &q[..1]);

    let q = exprs(&c, &["2*u + a*v", "v"]);
    let y = std_prolong(&EvoField::new(&c, q.clone(), vec![q[0].clone()]).unwrap(), 2).unwrap();
    assert_eq!(y.row(&idx(&[1])), exprs(&c, &["2*u_x + a*v_x", "v_x"]).as_slice());
    assert_eq!(y.row(&idx(&[2])), exprs(&c, &["2*u_xx + a*v_xx", "v_xx"]).as_slice());
    assert_eq!(y.p(), &q[..1]);
    assert_eq!(y.to_string(), "eta = (2*u + v*a, v)\neta_x = (2*u_x + v_x*a, v_x)\neta_xx = (2*u_xx + v_xx*a, v_xx)\nP = (2*u + v*a)\n");
}

#[test]
fn prolongation_past_the_context_order_fails() {
    let c = JetContext::new(&["x"], &["u"], &[], 2).unwrap();
    let f = EvoField::vertical(&c, exprs(&c, &["u_x"])).unwrap();
    assert!(matches!(std_prolong(&f, 2), Err(Error::OrderOverflow { .. })));
    assert!(std_prolong(&f, 1).is_ok());
}

#[test]
fn mu_prolongation_examples() {
    let c = ctx_uv();
    let w = EvoField::vertical(&c, exprs(&c, &["2*u + u*v", "v"])).unwrap();
    let y = mu_prolong(&w, &mu1(&c, "[[0, -u_x], [0, 0]]"), 2).unwrap();
    assert_eq!(y.row(&idx(&[1])), exprs(&c, &["2*u_x + u*v_x", "v_x"]).as_slice());
    assert_eq!(y.row(&idx(&[2])), exprs(&c, &["2*u_xx + u*v_xx", "v_xx"]).as_slice());

    let w = EvoField::vertical(&c, exprs(&c, &["1", "0"])).unwrap();
    let y = mu_prolong(&w, &mu1(&c, "[[0, 0], [v_x, 0]]"), 2).unwrap();
    assert_eq!(y.row(&idx(&[1])), exprs(&c, &["0", "v_x"]).as_slice());
    assert_eq!(y.row(&idx(&[2])), exprs(&c, &["0", "v_xx"]).as_slice());

    let f = EvoField::vertical(&c, exprs(&c, &["u*sin(v)", "x*u_x"])).unwrap();
    assert!(mu_prolong(&f, &MuForm::zero(&c), 2).unwrap().same_table(&std_prolong(&f, 2).unwrap()));
}

#[test]
fn mu_prolongation_rejects_bad_input() {
    let c = ctx_uv();
    let f = EvoField::new(&c, exprs(&c, &["u", "v"]), exprs(&c, &["u"])).unwrap();
    assert!(mu_prolong(&f, &MuForm::zero(&c), 1).is_err());
    assert!(MuForm::new(&c, vec![MatrixExpr::identity(3)]).is_err());
    assert!(MuForm::new(&c, vec![MatrixExpr::identity(2), MatrixExpr::identity(2)]).is_err());

    let c2 = JetContext::new(&["x", "y"], &["u", "v"], &[], 3).unwrap();
    let mu = MuForm::new(&c2, vec![MatrixExpr::parse("[[0, y], [0, 0]]", &c2).unwrap(), MatrixExpr::zeros(2)]).unwrap();
    let f = EvoField::vertical(&c2, exprs(&c2, &["u", "v"])).unwrap();
    assert_eq!(mu_prolong(&f, &mu, 2).unwrap_err(), Error::MaurerCartan { i: 1, j: 2 });
    assert!(mu_prolong_unchecked(&f, &mu, 2).is_ok());
}

#[test]
fn recognises_a_mu_prolonged_table() {
    let c = JetContext::new(&["x"], &["u", "v", "w", "z"], &["a1", "a2", "a3"], 3).unwrap();
    let o = Oracle::default();
    let rho = "sqrt(v^2 + z^2)";
    let eta = exprs(
        &c,
        &[
            &format!("u*cos({rho})"),
            &format!("-u*sin({rho})/{rho}*(v - z)"),
            &format!("u*cos({rho})"),
            &format!("-u*sin({rho})/{rho}*(v + z)"),
        ],
    );
    let mut table = std::collections::BTreeMap::new();
    table.insert(idx(&[0]), eta.clone());
    table.insert(idx(&[1]), eta.iter().map(|e| e * c.parse("u_x/u").unwrap()).collect());
    table.insert(idx(&[2]), eta.iter().map(|e| e * c.parse("u_xx/u").unwrap()).collect());
    let y = ProlongedField::from_table(&c, 2, table, Vec::new()).unwrap();

    let b0 = MatrixExpr::parse("[[0, -v, 0, -z], [v, 0, -z, 0], [0, z, 0, -v], [z, 0, v, 0]]", &c).unwrap();
    let b1 = MatrixExpr::parse("[[0, -z, 0, v], [z, 0, v, 0], [0, -v, 0, -z], [-v, 0, z, 0]]", &c).unwrap();
    let b2 = MatrixExpr::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, -1], &[-1, 0, 0, 0], &[0, 1, 0, 0]]);
    let s0 = c.parse(&format!("(v*v_x + z*z_x)/({rho})^2")).unwrap();
    let s1 = c.parse(&format!("(v_x*z - v*z_x)*sin(2*{rho})/(2*({rho})^3)")).unwrap();
    let s2 = c.parse(&format!("(v_x*z - v*z_x)*sin({rho})^2/({rho})^2")).unwrap();
    let lambda = b0.scale(&s0).add(&b1.scale(&s1)).unwrap().add(&b2.scale(&s2)).unwrap();
    let mu = MuForm::new(&c, vec![lambda]).unwrap();
    assert_eq!(is_mu_prolongation(&y, &mu, &o).unwrap(), None);
    assert!(is_mu_prolongation(&y, &MuForm::zero(&c), &o).unwrap().is_some());
}

#[test]
fn recursion_failures_are_located() {
    let c = ctx_uv();
    let o = Oracle::default();
    let w = EvoField::vertical(&c, exprs(&c, &["2*u + u*v", "v"])).unwrap();
    let y = mu_prolong(&w, &mu1(&c, "[[0, -u_x], [0, 0]]"), 2).unwrap();
    let fail = is_mu_prolongation(&y, &MuForm::zero(&c), &o).unwrap().expect("not a standard prolongation");
    assert_eq!((fail.field, fail.jet, fail.direction), (0, idx(&[1]), 0));
    assert!(fail.verdict.witness().is_some());
    assert_eq!(is_mu_prolongation(&std_prolong(&w, 2).unwrap(), &MuForm::zero(&c), &o).unwrap(), None);
}

#[test]
fn incomplete_tables_are_rejected() {
    let c = ctx_uv();
    let mut table = std::collections::BTreeMap::new();
    table.insert(idx(&[0]), exprs(&c, &["u", "v"]));
    assert!(ProlongedField::from_table(&c, 1, table.clone(), Vec::new()).is_err());
    table.insert(idx(&[1]), exprs(&c, &["u"]));
    assert!(ProlongedField::from_table(&c, 1, table, Vec::new()).is_err());
}

fn plane() -> JetContext {
    JetContext::new(&["x", "y"], &["u", "v"], &["a"], 3).unwrap()
}

fn random_field(c: &JetContext, s: &mut Sampler) -> EvoField {
    let vars: Vec<Expr> = (0..c.num_dependent()).map(|a| c.u(a)).chain((0..c.num_independent()).map(|i| c.x(i))).collect();
    EvoField::vertical(c, (0..c.num_dependent()).map(|_| s.smooth(&vars, 2)).collect()).unwrap()
}

fn random_mu(c: &JetContext, s: &mut Sampler) -> MuForm {
    let rep = if s.int(0, 1) == 0 { LieRepresentation::nilpotent2() } else { LieRepresentation::so2() };
    lambda_of_section(&rep, &s.polynomial_section(c, 2).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn zero_form_gives_the_standard_prolongation(seed in any::<u64>()) {
        let c = ctx_uv();
        let f = random_field(&c, &mut Sampler::new(seed));
        prop_assert!(mu_prolong(&f, &MuForm::zero(&c), 2).unwrap().same_table(&std_prolong(&f, 2).unwrap()));
    }

    #[test]
    fn mu_prolongation_is_additive(seed in any::<u64>()) {
        let c = ctx_uv();
        let mut s = Sampler::new(seed);
        let (f, g) = (random_field(&c, &mut s), random_field(&c, &mut s));
        let mu = random_mu(&c, &mut s);
        let sum = mu_prolong(&f.add(&g).unwrap(), &mu, 2).unwrap();
        let (yf, yg) = (mu_prolong(&f, &mu, 2).unwrap(), mu_prolong(&g, &mu, 2).unwrap());
        for (j, row) in sum.ordered_rows() {
            for a in 0..2 {
                prop_assert!(Oracle::default().equal(&row[a], &(yf.get(a, &j) + yg.get(a, &j))).holds());
            }
        }
    }

    #[test]
    fn mu_prolongations_pass_the_recursion_check(seed in any::<u64>()) {
        let c = ctx_uv();
        let mut s = Sampler::new(seed);
        let f = random_field(&c, &mut s);
        let mu = random_mu(&c, &mut s);
        let y = mu_prolong(&f, &mu, 2).unwrap();
        prop_assert_eq!(is_mu_prolongation(&y, &mu, &Oracle::default()).unwrap(), None);
    }

    #[test]
    fn section_forms_are_path_independent(seed in any::<u64>()) {
        let c = plane();
        let mut s = Sampler::new(seed);
        let f = random_field(&c, &mut s);
        let mu = random_mu(&c, &mut s);
        let y = mu_prolong(&f, &mu, 2).unwrap();
        let via = |first: usize, second: usize| -> Vec<Expr> {
            let mid = y.row(&MultiIndex::unit(2, first));
            (0..2)
                .map(|a| {
                    let d = jetgauge_core::jet::total_derivative(&c, second, &mid[a]).unwrap();
                    let l: Vec<Expr> = mu.lambda(second).apply(mid).unwrap();
                    d + &l[a]
                })
                .collect()
        };
        let (xy, yx) = (via(0, 1), via(1, 0));
        for a in 0..2 {
            prop_assert!(Oracle::default().equal(&xy[a], &yx[a]).holds());
            prop_assert!(Oracle::default().equal(&xy[a], y.get(a, &idx(&[1, 1]))).holds());
        }
    }
}
