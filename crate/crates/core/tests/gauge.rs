use jetgauge_core::gauge::*;
use jetgauge_core::jet::total_derivative;
use jetgauge_core::matlie::gauged_field_formula;
use jetgauge_core::prolong::*;
use jetgauge_core::random::Sampler;
use jetgauge_core::*;
use proptest::prelude::*;

const RHO: &str = "sqrt(1 - u^2)";

fn ctx_uv() -> JetContext {
    JetContext::new(&["x"], &["u", "v"], &["a"], 3).unwrap()
}

fn ctx_su2() -> JetContext {
    JetContext::new(&["x"], &["u", "v", "w", "z"], &["a1", "a2", "a3"], 3).unwrap()
}

fn ctx_so3() -> JetContext {
    JetContext::new(&["x"], &["u", "v", "w"], &["a1", "a2", "a3"], 3).unwrap()
}

fn exprs(c: &JetContext, items: &[&str]) -> Vec<Expr> {
    items.iter().map(|s| c.parse(s).unwrap()).collect()
}

fn section(c: &JetContext, items: &[&str]) -> GaugeSection {
    GaugeSection::new(c, exprs(c, items)).unwrap()
}

fn mat(c: &JetContext, text: &str) -> MatrixExpr {
    MatrixExpr::parse(text, c).unwrap()
}

fn mu1(c: &JetContext, text: &str) -> MuForm {
    MuForm::new(c, vec![mat(c, text)]).unwrap()
}

fn near_unit_u() -> Oracle {
    Oracle::with_domain(SampleDomain::default().with("u", Interval::Uniform { lo: -0.9, hi: 0.9 }))
}

fn assert_vec_eq(o: &Oracle, got: &[Expr], want: &[Expr]) {
    assert_eq!(got.len(), want.len());
    for (g, w) in got.iter().zip(want) {
        let v = o.equal(g, w);
        assert!(v.holds(), "{g} vs {w}: {v:?}");
    }
}

fn idx(counts: &[u32]) -> MultiIndex {
    MultiIndex::from_counts(counts.to_vec())
}

fn example1_field(c: &JetContext) -> EvoField {
    EvoField::new(c, exprs(c, &["2*u + a*v", "v"]), exprs(c, &["2*u + a*v"])).unwrap()
}

#[test]
fn sections_reject_jets_and_gauge_symbols() {
    let c = ctx_uv();
    assert!(GaugeSection::new(&c, exprs(&c, &["u_x"])).is_err());
    assert!(GaugeSection::new(&c, exprs(&c, &["a"])).is_err());
    assert!(GaugeSection::new(&c, exprs(&c, &["u", "v"])).is_err());
    assert!(GaugeSection::new(&c, exprs(&c, &["x*u + v^2"])).is_ok());
}

#[test]
fn restriction() {
    let c = ctx_uv();
    let g = section(&c, &["u"]);
    let xg = restrict(&g, &example1_field(&c));
    assert_eq!(xg.q(), exprs(&c, &["2*u + u*v", "v"]).as_slice());
    assert_eq!(xg.p(), exprs(&c, &["2*u + u*v"]).as_slice());

    let e = c.parse("u*sin(v) + x").unwrap();
    assert_eq!(restrict(&GaugeSection::trivial(&c), &e), e);

    let c = ctx_su2();
    let omega = c.parse("sqrt(a1^2 + a2^2 + a3^2)").unwrap();
    let big = restrict(&section(&c, &["z", "2*z", "5*z"]), &omega);
    let positive_z = Oracle::with_domain(SampleDomain::default().with("z", Interval::Uniform { lo: 0.05, hi: 0.9 }));
    assert!(positive_z.equal(&big, &c.parse("sqrt(30)*z").unwrap()).holds());
}

#[test]
fn restriction_of_a_prolongation_only_substitutes() {
    let c = ctx_uv();
    let g = section(&c, &["u"]);
    let y = std_prolong(&example1_field(&c), 2).unwrap();
    let r = restrict(&g, &y);
    assert_eq!(r.row(&idx(&[1])), exprs(&c, &["2*u_x + u*v_x", "v_x"]).as_slice());
    let other = std_prolong(&restrict(&g, &example1_field(&c)), 2).unwrap();
    assert!(!r.same_table(&other));
}

#[test]
fn projection() {
    let c = ctx_uv();
    let g = section(&c, &["u"]);
    let w = project(&restrict(&g, &example1_field(&c))).unwrap();
    assert_eq!(w.q(), exprs(&c, &["2*u + u*v", "v"]).as_slice());
    assert!(w.p().is_empty());
    assert_eq!(project(&w).unwrap().q(), w.q());
    assert_eq!(project(&example1_field(&c)).unwrap_err(), Error::ResidualGauge("a".into()));

    let c = ctx_su2();
    let o = near_unit_u();
    let g = section(&c, &["pi/2*u", "0", &format!("pi/2*{RHO}")]);
    let q = gauged_field_formula(&LieRepresentation::su2_real4(), &exprs(&c, &["-u", "0", "0", "0"]), &c.alphas()).unwrap();
    let x = complete_invariant(&EvoField::vertical(&c, q).unwrap(), &g).unwrap();
    assert!(invariance_check(&x, &g, &o).unwrap().holds());
    let w = project(&restrict(&g, &x)).unwrap();
    assert_vec_eq(&o, w.q(), &exprs(&c, &["0", "u^2", &format!("u*{RHO}"), "0"]));
}

#[test]
fn section_matrices() {
    let c = ctx_uv();
    let o = Oracle::default();
    let g = section(&c, &["u"]);
    let k = k_gamma(&LieRepresentation::nilpotent2(), &g).unwrap();
    assert_eq!(k, mat(&c, "[[1, u], [0, 1]]"));
    assert_eq!(r_matrices(&c, &k, &o).unwrap(), vec![mat(&c, "[[0, u_x], [0, 0]]")]);
    let k3 = k_gamma(&LieRepresentation::so2(), &g).unwrap();
    assert_eq!(r_matrices(&c, &k3, &o).unwrap()[0].neg(), mat(&c, "[[0, u_x], [-u_x, 0]]"));

    let konst = k_gamma(&LieRepresentation::so2(), &section(&c, &["2/3"])).unwrap();
    assert!(konst.entries().iter().all(|e| e.symbols().is_empty()));
    assert!(r_matrices(&c, &konst, &o).unwrap()[0].is_zero());
    assert_eq!(r_matrices(&c, &mat(&c, "[[1, u], [u, u^2]]"), &o).unwrap_err(), Error::NotInvertible);
    assert_eq!(r_matrices(&c, &mat(&c, "[[1, a], [0, 1]]"), &o).unwrap_err(), Error::ResidualGauge("a".into()));

    let c = ctx_su2();
    let g = section(&c, &["pi/2*u", "0", &format!("pi/2*{RHO}")]);
    let rep = LieRepresentation::su2_real4();
    let k = k_gamma(&rep, &g).unwrap();
    assert!(k_gamma_inverse(&rep, &g).unwrap().equal(&k.neg(), &near_unit_u()).holds());
    let shown = mat(&c, &format!("[[0, u, {RHO}, 0], [-u, 0, 0, -{RHO}], [-{RHO}, 0, 0, u], [0, {RHO}, -u, 0]]"));
    assert!(k.equal(&shown, &near_unit_u()).holds());
    assert!(matches!(k_gamma(&LieRepresentation::so3(), &g), Err(Error::Dimension(_))));
}

#[test]
fn lambda_from_sections() {
    let c = ctx_su2();
    let l8 = lambda_of_section(&LieRepresentation::su2_real4(), &section(&c, &["z", "2*z", "5*z"])).unwrap();
    let shown = mat(&c, "[[0, 1, 5, 2], [-1, 0, 2, -5], [-5, -2, 0, 1], [-2, 5, -1, 0]]").scale(&c.parse("-z_x").unwrap());
    assert!(l8.lambda(0).equal(&shown, &Oracle::default()).holds());

    let c = ctx_so3();
    let l11 = lambda_of_section(&LieRepresentation::so3(), &section(&c, &["pi/2*u", "0", &format!("pi/2*{RHO}")])).unwrap();
    let shown = mat(&c, &format!("[[0, -u, -1], [u, 0, {RHO}], [1, -{RHO}, 0]]")).scale(&c.parse(&format!("u_x/{RHO}")).unwrap());
    assert!(l11.lambda(0).equal(&shown, &near_unit_u()).holds());

    let konst = lambda_of_section(&LieRepresentation::so3(), &section(&c, &["1", "-2", "1/2"])).unwrap();
    assert!(konst.is_zero());
}

#[test]
fn su2_lambda_decomposition_matches() {
    let c = ctx_su2();
    let mut s = Sampler::new(7);
    for _ in 0..3 {
        let g = s.polynomial_section(&c, 1).unwrap();
        let direct = lambda_of_section(&LieRepresentation::su2_real4(), &g).unwrap();
        let dec = su2::lambda_decomposition(&c, 0, g.components()).unwrap();
        assert!(dec.equal(direct.lambda(0), &Oracle::default()).holds());
    }
}

#[test]
fn maurer_cartan() {
    let c = ctx_uv();
    let o = Oracle::default();
    let r = maurer_cartan_check(&mu1(&c, "[[u_x, sin(u)], [0, 1]]"), &o).unwrap();
    assert!(r.holds() && r.is_vacuous());

    let c2 = JetContext::new(&["x", "y"], &["u", "v"], &[], 2).unwrap();
    let bad = MuForm::new(&c2, vec![mat(&c2, "[[0, y], [0, 0]]"), MatrixExpr::zeros(2)]).unwrap();
    let r = maurer_cartan_check(&bad, &o).unwrap();
    let (i, j, v) = r.failure.expect("fails");
    assert_eq!((i, j), (1, 2));
    assert!(v.witness().is_some());
}

#[test]
fn twisted_derivatives() {
    let c = ctx_uv();
    let v = exprs(&c, &["2*u + u*v", "v"]);
    assert_eq!(nabla(&c, &[MatrixExpr::zeros(2)], 0, &v).unwrap(), v.iter().map(|e| total_derivative(&c, 0, e).unwrap()).collect::<Vec<_>>());
    let r = vec![mat(&c, "[[0, u_x], [0, 0]]")];
    let got = nabla(&c, &r, 0, &v).unwrap();
    assert_eq!(got, exprs(&c, &["2*u_x + u*v_x", "v_x"]));
    let k = mat(&c, "[[1, u], [0, 1]]");
    assert_eq!(got, k.apply(&exprs(&c, &["2*u_x", "v_x"])).unwrap());
    assert!(nabla(&c, &r, 1, &v).is_err());
}

#[test]
fn twisted_prolongations() {
    let c = ctx_uv();
    let rep = LieRepresentation::nilpotent2();
    let g = section(&c, &["u"]);
    let w = EvoField::vertical(&c, exprs(&c, &["2*u + u*v", "v"])).unwrap();
    let t = twisted_prolong(&w, &g, &rep, 2).unwrap();
    assert!(t.same_table(&mu_prolong(&w, &mu1(&c, "[[0, -u_x], [0, 0]]"), 2).unwrap()));
    let t0 = twisted_prolong(&w, &GaugeSection::trivial(&c), &rep, 2).unwrap();
    assert!(t0.same_table(&std_prolong(&w, 2).unwrap()));
    let gauged = EvoField::vertical(&c, exprs(&c, &["a", "v"])).unwrap();
    assert!(matches!(twisted_prolong(&gauged, &g, &rep, 2), Err(Error::ResidualGauge(_))));
}

#[test]
fn twisted_prolongation_of_a_rotated_field_scales_with_u() {
    let c = ctx_so3();
    let o = near_unit_u();
    let rep = LieRepresentation::so3();
    for beta in ["pi/2", "1/3"] {
        let g = section(&c, &[&format!("{beta}*u"), "0", &format!("{beta}*{RHO}")]);
        let w = EvoField::vertical(&c, k_gamma(&rep, &g).unwrap().apply(&exprs(&c, &["u", "0", "0"])).unwrap()).unwrap();
        let t = twisted_prolong(&w, &g, &rep, 2).unwrap();
        let eta = t.row(&idx(&[0]));
        for (j, factor) in [(1, "u_x/u"), (2, "u_xx/u")] {
            let f = c.parse(factor).unwrap();
            assert_vec_eq(&o, t.row(&idx(&[j])), &eta.iter().map(|e| e * &f).collect::<Vec<_>>());
        }
    }
    let g = section(&c, &["pi/2*u", "0", &format!("pi/2*{RHO}")]);
    let w = EvoField::vertical(&c, k_gamma(&rep, &g).unwrap().apply(&exprs(&c, &["u", "0", "0"])).unwrap()).unwrap();
    assert_vec_eq(&o, w.q(), &exprs(&c, &["u^3", &format!("u*{RHO}"), &format!("u^2*{RHO}")]));
}

#[test]
fn invariant_completion() {
    let c = ctx_uv();
    let o = Oracle::default();
    let g = section(&c, &["u"]);
    let x1 = complete_invariant(&EvoField::vertical(&c, exprs(&c, &["2*u + a*v", "v"])).unwrap(), &g).unwrap();
    assert_eq!(x1.p(), exprs(&c, &["2*u + a*v"]).as_slice());
    let x2 = complete_invariant(&EvoField::vertical(&c, exprs(&c, &["-v + a*u", "u"])).unwrap(), &g).unwrap();
    assert_eq!(x2.p(), exprs(&c, &["-v + a*u"]).as_slice());
    let x3 = complete_invariant(&EvoField::vertical(&c, exprs(&c, &["u", "v"])).unwrap(), &section(&c, &["3"])).unwrap();
    assert!(x3.p()[0].is_zero());
    for x in [&x1, &x2, &x3] {
        assert!(invariance_check(x, &g, &o).unwrap().holds() || std::ptr::eq(x, &x3));
    }
    let bare = EvoField::vertical(&c, exprs(&c, &["u", "0"])).unwrap();
    assert!(!invariance_check(&bare, &g, &o).unwrap().holds());
}

#[test]
fn commuting_diagrams() {
    let o = Oracle::default();
    let c = ctx_uv();
    let rep = LieRepresentation::nilpotent2();
    let d = diagram_check(&exprs(&c, &["2*u", "v"]), &rep, &section(&c, &["u"]), 2, &o).unwrap();
    assert!(d.overall(), "{:?}", d.first_failure());
    assert_eq!(d.route_b.row(&idx(&[2])), exprs(&c, &["2*u_xx + u*v_xx", "v_xx"]).as_slice());
    let names: Vec<&str> = d.edges.iter().map(|e| e.name.as_str()).collect();
    assert!(names.contains(&"prolong") && names.contains(&"restrict") && names.contains(&"project"));

    let theta = exprs(&c, &["u*v", "x + u"]);
    let d = diagram_check(&theta, &LieRepresentation::so2(), &section(&c, &["1/2"]), 2, &o).unwrap();
    assert!(d.overall());
    assert!(d.lambda.is_zero());
    let k = k_gamma(&LieRepresentation::so2(), &section(&c, &["1/2"])).unwrap();
    let std = std_prolong(&EvoField::vertical(&c, k.apply(&theta).unwrap()).unwrap(), 2).unwrap();
    assert!(d.route_a.compare(&std, &o).is_none());

    assert!(diagram_check(&exprs(&c, &["a", "v"]), &rep, &section(&c, &["u"]), 2, &o).is_err());
}

#[test]
fn su2_diagram_with_a_linear_section() {
    let c = ctx_su2();
    let o = Oracle::default();
    let rep = LieRepresentation::su2_real4();
    let g = section(&c, &["z", "2*z", "5*z"]);
    let theta = exprs(&c, &["u", "v", "-z", "w"]);
    let d = diagram_check(&theta, &rep, &g, 2, &o).unwrap();
    assert!(d.overall(), "{:?}", d.first_failure());
    let positive_z = Oracle::with_domain(SampleDomain::default().with("z", Interval::Uniform { lo: 0.05, hi: 0.9 }));
    let shown = exprs(
        &c,
        &[
            "cos(sqrt(30)*z)*u + sin(sqrt(30)*z)/sqrt(30)*(v - 5*z + 2*w)",
            "cos(sqrt(30)*z)*v + sin(sqrt(30)*z)/sqrt(30)*(-u - 2*z - 5*w)",
            "-cos(sqrt(30)*z)*z + sin(sqrt(30)*z)/sqrt(30)*(-5*u - 2*v + w)",
            "cos(sqrt(30)*z)*w + sin(sqrt(30)*z)/sqrt(30)*(-2*u + 5*v + z)",
        ],
    );
    assert_vec_eq(&positive_z, d.route_b.row(&idx(&[0])), &shown);
}

#[test]
fn abelian_reconstruction() {
    let c = ctx_uv();
    let o = Oracle::default();
    assert_eq!(reconstruct_k_abelian(&mu1(&c, "[[0, u_x], [0, 0]]"), &o).unwrap(), mat(&c, "[[1, -u], [0, 1]]"));
    assert_eq!(reconstruct_k_abelian(&MuForm::zero(&c), &o).unwrap(), MatrixExpr::identity(2));
    assert_eq!(reconstruct_k_abelian(&mu1(&c, "[[0, 0], [v_x, 0]]"), &o).unwrap(), mat(&c, "[[1, 0], [-v, 1]]"));
    assert!(matches!(reconstruct_k_abelian(&mu1(&c, "[[0, cos(u)*u_x], [0, 0]]"), &o), Err(Error::Unsupported(_))));
    let c2 = JetContext::new(&["x", "y"], &["u", "v"], &[], 2).unwrap();
    assert!(matches!(reconstruct_k_abelian(&MuForm::zero(&c2), &o), Err(Error::Unsupported(_))));
}

#[test]
fn candidate_verification() {
    let c = ctx_uv();
    let o = Oracle::default();
    let mu5 = mu1(&c, "[[0, u_x], [0, 0]]");
    assert!(verify_k(&mu5, &mat(&c, "[[1, -u], [0, 1]]"), &o).unwrap().holds());
    assert!(!verify_k(&mu5, &mat(&c, "[[1, u], [0, 1]]"), &o).unwrap().holds());
    assert!(verify_k(&MuForm::zero(&c), &MatrixExpr::identity(2), &o).unwrap().holds());
    assert!(verify_k(&mu5, &MatrixExpr::identity(3), &o).is_err());
}

fn upper_negative() -> LieRepresentation {
    LieRepresentation::nilpotent("upper", vec![MatrixExpr::from_ints(&[&[0, -1], &[0, 0]])]).unwrap()
}

#[test]
fn lifts_reproduce_the_back_gauged_fields() {
    let c = ctx_uv();
    let o = Oracle::default();
    let w = EvoField::vertical(&c, exprs(&c, &["0", "v"])).unwrap();
    let lift = theorem2_lift(&w, &mu1(&c, "[[0, u_x], [0, 0]]"), &mat(&c, "[[1, -u], [0, 1]]"), &upper_negative(), &section(&c, &["u"]), 2, &o).unwrap();
    assert!(lift.holds());
    assert_eq!(lift.field.q(), exprs(&c, &["(u - a)*v", "v"]).as_slice());
    assert_eq!(lift.field.p(), exprs(&c, &["(u - a)*v"]).as_slice());
    assert_eq!(lift.prolonged.row(&idx(&[2])), exprs(&c, &["u_xx*v + 2*u_x*v_x + (u - a)*v_xx", "v_xx"]).as_slice());

    let w = EvoField::vertical(&c, exprs(&c, &["1", "0"])).unwrap();
    let lift = theorem2_lift(&w, &mu1(&c, "[[0, 0], [v_x, 0]]"), &mat(&c, "[[1, 0], [-v, 1]]"), &LieRepresentation::lower_nilpotent2(), &section(&c, &["-v"]), 2, &o).unwrap();
    assert!(lift.holds());
    assert_eq!(lift.field.q(), exprs(&c, &["1", "a + v"]).as_slice());
    assert_eq!(lift.field.p(), exprs(&c, &["-(a + v)"]).as_slice());

    let w = EvoField::vertical(&c, exprs(&c, &["u*v", "sin(u)"])).unwrap();
    let lift = theorem2_lift(&w, &MuForm::zero(&c), &MatrixExpr::identity(2), &LieRepresentation::so2(), &GaugeSection::trivial(&c), 2, &o).unwrap();
    assert_eq!(restrict(&GaugeSection::trivial(&c), &lift.field).q(), w.q());
    assert!(lift.field.p().iter().all(Expr::is_zero));
    assert!(lift.holds());
}

#[test]
fn lifts_reject_inconsistent_data() {
    let c = ctx_uv();
    let o = Oracle::default();
    let w = EvoField::vertical(&c, exprs(&c, &["0", "v"])).unwrap();
    let mu = mu1(&c, "[[0, u_x], [0, 0]]");
    assert!(theorem2_lift(&w, &mu, &mat(&c, "[[1, u], [0, 1]]"), &upper_negative(), &section(&c, &["u"]), 2, &o).is_err());
    assert!(theorem2_lift(&w, &mu, &mat(&c, "[[1, -u], [0, 1]]"), &upper_negative(), &section(&c, &["2*u"]), 2, &o).is_err());
}

#[test]
fn gauge_fixing_and_the_augmented_derivative() {
    let c = JetContext::augmented(&["x"], &["u", "v"], &["a"], 3).unwrap();
    let o = Oracle::default();
    let g = section(&c, &["u"]);
    let f = c.parse("u*a").unwrap();
    let r = appendix_a1_check(&f, &g, &o).unwrap();
    assert!(r.holds());
    let lhs = restrict(&g, &jetgauge_core::jet::augmented_total_derivative(&c, 0, &f).unwrap());
    assert_eq!(lhs, c.parse("2*u*u_x").unwrap());
    assert!(appendix_a1_check(&c.parse("u*v^2").unwrap(), &g, &o).unwrap().holds());
    let plain = ctx_uv();
    assert!(appendix_a1_check(&plain.parse("u").unwrap(), &section(&plain, &["u"]), &o).is_err());
}

#[test]
fn z_matrices_restrict_to_r_matrices() {
    let c = JetContext::augmented(&["x"], &["u", "v", "w", "z"], &["a1", "a2", "a3"], 2).unwrap();
    let mut s = Sampler::new(11);
    for _ in 0..3 {
        let g = s.polynomial_section(&c, 1).unwrap();
        let v = z_matrix_check(&LieRepresentation::su2_real4(), &g, &Oracle::default()).unwrap();
        assert!(v.iter().all(Verdict::holds));
    }
}

fn plane(rep: &LieRepresentation) -> JetContext {
    let deps = ["u", "v", "w", "z"];
    let gauge = ["a1", "a2", "a3"];
    JetContext::new(&["x", "y"], &deps[..rep.dim()], &gauge[..rep.rank()], 3).unwrap()
}

fn line(rep: &LieRepresentation) -> JetContext {
    let deps = ["u", "v", "w", "z"];
    let gauge = ["a1", "a2", "a3"];
    JetContext::new(&["x"], &deps[..rep.dim()], &gauge[..rep.rank()], 3).unwrap()
}

fn u_section(c: &JetContext, s: &mut Sampler) -> GaugeSection {
    let u = [c.u(0)];
    GaugeSection::new(c, (0..c.num_gauge()).map(|_| s.polynomial_without_constant(&u, 2)).collect()).unwrap()
}

fn pick(s: &mut Sampler) -> LieRepresentation {
    let tags = LieRepresentation::builtin_tags();
    LieRepresentation::from_tag(tags[s.int(0, tags.len() as i64 - 1) as usize]).unwrap()
}

fn theta(c: &JetContext, s: &mut Sampler) -> Vec<Expr> {
    let vars: Vec<Expr> = (0..c.num_dependent()).map(|a| c.u(a)).collect();
    (0..c.num_dependent()).map(|_| s.polynomial(&vars[..2.min(vars.len())], 1)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn section_forms_satisfy_maurer_cartan(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let rep = pick(&mut s);
        let c = plane(&rep);
        let g = u_section(&c, &mut s);
        let r = section_r_matrices(&rep, &g).unwrap();
        let mc = maurer_cartan_check(&MuForm::new(&c, r).unwrap(), &Oracle::default()).unwrap();
        prop_assert!(mc.holds());
        prop_assert!(maurer_cartan_check(&lambda_of_section(&rep, &g).unwrap(), &Oracle::default()).unwrap().holds());
    }

    #[test]
    fn fixing_the_gauge_intertwines_derivatives(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let rep = pick(&mut s);
        let c = line(&rep);
        let g = u_section(&c, &mut s);
        let th = theta(&c, &mut s);
        let k_theta = gauged_field_formula(&rep, &th, &c.alphas()).unwrap();
        let lhs: Vec<Expr> = k_theta.iter().map(|e| restrict(&g, &total_derivative(&c, 0, e).unwrap())).collect();
        let r = section_r_matrices(&rep, &g).unwrap();
        let rhs = nabla(&c, &r, 0, &restrict(&g, &k_theta)).unwrap();
        let dtheta: Vec<Expr> = th.iter().map(|e| total_derivative(&c, 0, e).unwrap()).collect();
        let kd = k_gamma(&rep, &g).unwrap().apply(&dtheta).unwrap();
        for a in 0..c.num_dependent() {
            prop_assert!(Oracle::default().equal(&lhs[a], &rhs[a]).holds());
            prop_assert!(Oracle::default().equal(&rhs[a], &kd[a]).holds());
        }
    }

    #[test]
    fn twisted_derivatives_commute(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let rep = pick(&mut s);
        let c = plane(&rep);
        let g = u_section(&c, &mut s);
        let r = section_r_matrices(&rep, &g).unwrap();
        let v = theta(&c, &mut s);
        let xy = nabla(&c, &r, 1, &nabla(&c, &r, 0, &v).unwrap()).unwrap();
        let yx = nabla(&c, &r, 0, &nabla(&c, &r, 1, &v).unwrap()).unwrap();
        for a in 0..c.num_dependent() {
            prop_assert!(Oracle::default().equal(&xy[a], &yx[a]).holds());
        }
    }

    #[test]
    fn twisted_prolongation_is_the_mu_prolongation(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let rep = pick(&mut s);
        let c = line(&rep);
        let g = u_section(&c, &mut s);
        let w = EvoField::vertical(&c, theta(&c, &mut s)).unwrap();
        let t = twisted_prolong(&w, &g, &rep, 2).unwrap();
        let m = mu_prolong(&w, &lambda_of_section(&rep, &g).unwrap(), 2).unwrap();
        prop_assert!(t.compare(&m, &Oracle::default()).is_none());
    }

    #[test]
    fn section_matrices_verify(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let rep = pick(&mut s);
        let c = line(&rep);
        let g = u_section(&c, &mut s);
        let v = verify_k(&lambda_of_section(&rep, &g).unwrap(), &k_gamma(&rep, &g).unwrap(), &Oracle::default()).unwrap();
        prop_assert!(v.holds());
    }

    #[test]
    fn random_diagrams_commute(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let rep = pick(&mut s);
        let c = line(&rep);
        let g = u_section(&c, &mut s);
        let th = theta(&c, &mut s);
        let d = diagram_check(&th, &rep, &g, 2, &Oracle::default()).unwrap();
        prop_assert!(d.overall(), "{:?}", d.first_failure());
    }
}
