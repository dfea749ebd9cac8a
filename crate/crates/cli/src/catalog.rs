//! Built-in worked examples 1 to 12.
//!
//! Each example rebuilds its data from scratch, recomputes every displayed
//! quantity and records one verdict per identity. Displays that are known to
//! disagree with the computation are recorded as notes, with a verdict on the
//! corrected value.

use std::collections::{BTreeMap, HashMap};

use jetgauge_core::gauge::{
    complete_invariant, diagram_check, invariance_check, k_gamma, k_gamma_inverse, lambda_of_section, project, reconstruct_k_abelian, restrict, su2,
    theorem2_lift, twisted_prolong, verify_k, DiagramReport, GaugeSection,
};
use jetgauge_core::matlie::gauged_field_formula;
use jetgauge_core::prolong::{is_mu_prolongation, mu_prolong, std_prolong, EvoField, MuForm, ProlongedField};
use jetgauge_core::{Expr, JetContext, LieRepresentation, MatrixExpr, MultiIndex, Oracle, OracleConfig, Verdict};

use crate::problem::{ProblemError, ProblemResult};
use crate::report::Report;

pub const EXAMPLE_COUNT: usize = 12;

pub fn title(n: usize) -> &'static str {
    match n {
        1 => "upper nilpotent action, theta = (2u, v), section a = u",
        2 => "upper nilpotent action, theta = (-v, u), section a = u",
        3 => "rotation action, theta = (2u, v), section a = u",
        4 => "rotation action, theta = (-v, u), section a = u",
        5 => "abelian reconstruction of K from a mu-prolonged field (upper)",
        6 => "abelian reconstruction of K from a mu-prolonged field (lower)",
        7 => "su(2) on R^4, theta = (-u, 0, 0, 0), section (pi/2 u, 0, pi/2 rho)",
        8 => "su(2) on R^4, theta = (u, v, -z, w), section (z, 2z, 5z)",
        9 => "su(2) lift of a mu-prolonged field, section (v, z, 0)",
        10 => "su(2) lift of a mu-prolonged field, section (z, 2z, 5z)",
        11 => "so(3) on R^3, theta = (u, 0, 0), section (beta u, 0, beta rho)",
        12 => "so(3) lift with a trial K, section (pi/2 u, 0, pi/2 rho)",
        _ => "",
    }
}

pub fn run_example(n: usize, config: &OracleConfig) -> ProblemResult<Report> {
    if !(1..=EXAMPLE_COUNT).contains(&n) {
        return Err(ProblemError::new(format!("no example {n}; examples are numbered 1 to {EXAMPLE_COUNT}")));
    }
    let mut r = Report::new("example", &n.to_string(), config);
    r.title = format!("example {n}: {}", title(n));
    let o = Oracle::new(config.clone());
    let out = match n {
        1 => ex1(&mut r, &o),
        2 => ex2(&mut r, &o),
        3 => ex3(&mut r, &o),
        4 => ex4(&mut r, &o),
        5 => ex5(&mut r, &o),
        6 => ex6(&mut r, &o),
        7 => ex7(&mut r, &o),
        8 => ex8(&mut r, &o),
        9 => ex9(&mut r, &o),
        10 => ex10(&mut r, &o),
        11 => ex11(&mut r, &o),
        _ => ex12(&mut r, &o),
    };
    out.map_err(|e| ProblemError::new(format!("example {n}: {e}")))?;
    Ok(r)
}

type Res<T> = jetgauge_core::Result<T>;

const RHO: &str = "sqrt(1 - u^2)";
const OMEGA: &str = "sqrt(a1^2 + a2^2 + a3^2)";

fn abelian_ctx() -> Res<JetContext> {
    JetContext::new(&["x"], &["u", "v"], &["a"], 3)
}

fn su2_ctx() -> Res<JetContext> {
    JetContext::new(&["x"], &["u", "v", "w", "z"], &["a1", "a2", "a3"], 3)
}

fn so3_ctx() -> Res<JetContext> {
    JetContext::new(&["x"], &["u", "v", "w"], &["a1", "a2", "a3"], 3)
}

fn e(c: &JetContext, s: &str) -> Res<Expr> {
    c.parse(s)
}

fn v(c: &JetContext, items: &[&str]) -> Res<Vec<Expr>> {
    items.iter().map(|s| c.parse(s)).collect()
}

fn vs(c: &JetContext, items: &[String]) -> Res<Vec<Expr>> {
    items.iter().map(|s| c.parse(s)).collect()
}

fn m(c: &JetContext, s: &str) -> Res<MatrixExpr> {
    MatrixExpr::parse(s, c)
}

fn mu1(c: &JetContext, s: &str) -> Res<MuForm> {
    MuForm::new(c, vec![m(c, s)?])
}

/// Second-order table on one independent variable from rows eta, eta_x, eta_xx.
fn table(c: &JetContext, rows: [Vec<Expr>; 3]) -> Res<ProlongedField> {
    let t: BTreeMap<MultiIndex, Vec<Expr>> = rows.into_iter().enumerate().map(|(k, r)| (MultiIndex::from_counts(vec![k as u32]), r)).collect();
    ProlongedField::from_table(c, 2, t, Vec::new())
}

/// Rows eta, (u_x/u) eta, (u_xx/u) eta.
fn scaled_table(c: &JetContext, eta: &[Expr]) -> Res<ProlongedField> {
    let fx = e(c, "u_x/u")?;
    let fxx = e(c, "u_xx/u")?;
    table(c, [eta.to_vec(), eta.iter().map(|x| &fx * x).collect(), eta.iter().map(|x| &fxx * x).collect()])
}

fn vec_verdict(o: &Oracle, got: &[Expr], want: &[Expr]) -> Verdict {
    if got.len() != want.len() {
        return Verdict::Unsampleable { attempts: 0, reason: format!("{} components against {}", got.len(), want.len()) };
    }
    let pairs: Vec<(Expr, Expr)> = got.iter().cloned().zip(want.iter().cloned()).collect();
    o.all_equal(&pairs)
}

fn show(v: &[Expr]) -> String {
    format!("({})", v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "))
}

fn table_verdict(o: &Oracle, got: &ProlongedField, want: &ProlongedField) -> Verdict {
    match got.without_p().compare(&want.without_p(), o) {
        None => Verdict::Equal,
        Some(mm) => mm.verdict,
    }
}

fn recursion_verdict(o: &Oracle, y: &ProlongedField, mu: &MuForm) -> Res<Verdict> {
    Ok(match is_mu_prolongation(y, mu, o)? {
        None => Verdict::Equal,
        Some(f) => f.verdict,
    })
}

fn exact(r: &mut Report, name: &str, got: &MatrixExpr, want: &MatrixExpr) {
    r.check(name, got == want, (got != want).then(|| format!("computed {got}, expected {want}")));
}

fn exact_vec(r: &mut Report, name: &str, got: &[Expr], want: &[Expr]) {
    r.check(name, got == want, (got != want).then(|| format!("computed {}, expected {}", show(got), show(want))));
}

fn record_diagram(r: &mut Report, d: &DiagramReport) {
    for edge in &d.edges {
        r.verdict(&format!("diagram.{}", edge.name), &edge.verdict);
    }
}

fn outcome(v: &Verdict) -> &'static str {
    if v.holds() {
        "holds"
    } else {
        "fails"
    }
}

/// Data of a one-generator example with a gauged field K(a) theta.
struct Abelian<'a> {
    rep: LieRepresentation,
    theta: [&'a str; 2],
    x_q: [&'a str; 2],
    x_p: &'a str,
    xg_q: [&'a str; 2],
    x2: [[&'a str; 2]; 3],
    y: [[&'a str; 2]; 3],
    lambda: &'a str,
}

fn rows(c: &JetContext, t: [[&str; 2]; 3]) -> Res<ProlongedField> {
    table(c, [v(c, &t[0])?, v(c, &t[1])?, v(c, &t[2])?])
}

fn abelian_theorem1(r: &mut Report, o: &Oracle, d: &Abelian) -> Res<ProlongedField> {
    let c = abelian_ctx()?;
    let g = GaugeSection::new(&c, v(&c, &["u"])?)?;
    let theta = v(&c, &d.theta)?;
    let q = gauged_field_formula(&d.rep, &theta, &c.alphas())?;
    let x = complete_invariant(&EvoField::vertical(&c, q)?, &g)?;
    r.value("X", &x);
    r.verdict("X.q", &vec_verdict(o, x.q(), &v(&c, &d.x_q)?));
    r.verdict("X.P", &vec_verdict(o, x.p(), &v(&c, &[d.x_p])?));
    r.verdict("invariance", &invariance_check(&x, &g, o)?);

    let xg = restrict(&g, &x);
    r.value("X_gamma", &xg);
    let xg_q = v(&c, &d.xg_q)?;
    r.verdict("X_gamma.q", &vec_verdict(o, xg.q(), &xg_q));
    let w = project(&xg)?;
    r.value("W", &w);
    r.verdict("W", &vec_verdict(o, w.q(), &xg_q));

    let x2 = std_prolong(&x, 2)?;
    r.table("X2", &x2);
    r.verdict("X2.table", &table_verdict(o, &x2, &rows(&c, d.x2)?));
    let y = project(&restrict(&g, &x2))?;
    r.table("Y", &y);
    r.verdict("Y.table", &table_verdict(o, &y, &rows(&c, d.y)?));

    let mu = lambda_of_section(&d.rep, &g)?;
    r.value("K_gamma", k_gamma(&d.rep, &g)?);
    r.value("Lambda", mu.lambda(0));
    exact(r, "Lambda.exact", mu.lambda(0), &m(&c, d.lambda)?);
    r.verdict("recursion", &recursion_verdict(o, &y, &mu)?);
    record_diagram(r, &diagram_check(&theta, &d.rep, &g, 2, o)?);
    Ok(y)
}

fn ex1(r: &mut Report, o: &Oracle) -> Res<()> {
    abelian_theorem1(
        r,
        o,
        &Abelian {
            rep: LieRepresentation::nilpotent2(),
            theta: ["2*u", "v"],
            x_q: ["2*u + a*v", "v"],
            x_p: "2*u + a*v",
            xg_q: ["2*u + u*v", "v"],
            x2: [["2*u + a*v", "v"], ["2*u_x + a*v_x", "v_x"], ["2*u_xx + a*v_xx", "v_xx"]],
            y: [["2*u + u*v", "v"], ["2*u_x + u*v_x", "v_x"], ["2*u_xx + u*v_xx", "v_xx"]],
            lambda: "[[0, -u_x], [0, 0]]",
        },
    )?;
    Ok(())
}

fn ex2(r: &mut Report, o: &Oracle) -> Res<()> {
    abelian_theorem1(
        r,
        o,
        &Abelian {
            rep: LieRepresentation::nilpotent2(),
            theta: ["-v", "u"],
            x_q: ["-v + a*u", "u"],
            x_p: "a*u - v",
            xg_q: ["u^2 - v", "u"],
            x2: [["-v + a*u", "u"], ["-v_x + a*u_x", "u_x"], ["-v_xx + a*u_xx", "u_xx"]],
            y: [["u^2 - v", "u"], ["u*u_x - v_x", "u_x"], ["u*u_xx - v_xx", "u_xx"]],
            lambda: "[[0, -u_x], [0, 0]]",
        },
    )?;
    Ok(())
}

/// Checks a displayed table against the recursion and notes the outcome.
fn note_printed_table(r: &mut Report, o: &Oracle, what: &str, printed: &ProlongedField, computed: &ProlongedField, mu: &MuForm) -> Res<()> {
    let rec = recursion_verdict(o, printed, mu)?;
    let same = table_verdict(o, printed, computed);
    r.note(format!("{what}: recursion {}, agreement with the computed table {}", outcome(&rec), outcome(&same)));
    Ok(())
}

fn ex3(r: &mut Report, o: &Oracle) -> Res<()> {
    let kc = ["2*u*cos(a) - v*sin(a)", "v*cos(a) + 2*u*sin(a)"];
    let y = abelian_theorem1(
        r,
        o,
        &Abelian {
            rep: LieRepresentation::so2(),
            theta: ["2*u", "v"],
            x_q: kc,
            x_p: kc[0],
            xg_q: ["2*u*cos(u) - v*sin(u)", "v*cos(u) + 2*u*sin(u)"],
            x2: [kc, ["2*u_x*cos(a) - v_x*sin(a)", "v_x*cos(a) + 2*u_x*sin(a)"], ["2*u_xx*cos(a) - v_xx*sin(a)", "v_xx*cos(a) + 2*u_xx*sin(a)"]],
            y: [
                ["2*u*cos(u) - v*sin(u)", "v*cos(u) + 2*u*sin(u)"],
                ["2*u_x*cos(u) - v_x*sin(u)", "v_x*cos(u) + 2*u_x*sin(u)"],
                ["2*u_xx*cos(u) - v_xx*sin(u)", "v_xx*cos(u) + 2*u_xx*sin(u)"],
            ],
            lambda: "[[0, u_x], [-u_x, 0]]",
        },
    )?;
    let c = y.ctx().clone();
    let printed = rows(
        &c,
        [
            ["2*u*cos(u) - v*cos(u)", "v*cos(u) + 2*u*cos(u)"],
            ["2*u_x*cos(u) - v_x*cos(u)", "v_x*cos(u) + 2*u_x*cos(u)"],
            ["2*u_xx*cos(u) - v_xx*cos(u)", "v_xx*cos(u) + 2*u_xx*cos(u)"],
        ],
    )?;
    note_printed_table(r, o, "displayed eta table with cos(u) in place of sin(u)", &printed, &y, &mu1(&c, "[[0, u_x], [-u_x, 0]]")?)?;
    r.note("verdicts use the K theta values; the displayed table writes cos(u) where sin(u) belongs");
    Ok(())
}

fn ex4(r: &mut Report, o: &Oracle) -> Res<()> {
    let kc = ["-v*cos(a) - u*sin(a)", "u*cos(a) - v*sin(a)"];
    let y = abelian_theorem1(
        r,
        o,
        &Abelian {
            rep: LieRepresentation::so2(),
            theta: ["-v", "u"],
            x_q: kc,
            x_p: kc[0],
            xg_q: ["-v*cos(u) - u*sin(u)", "u*cos(u) - v*sin(u)"],
            x2: [kc, ["-v_x*cos(a) - u_x*sin(a)", "u_x*cos(a) - v_x*sin(a)"], ["-v_xx*cos(a) - u_xx*sin(a)", "u_xx*cos(a) - v_xx*sin(a)"]],
            y: [
                ["-v*cos(u) - u*sin(u)", "u*cos(u) - v*sin(u)"],
                ["-v_x*cos(u) - u_x*sin(u)", "u_x*cos(u) - v_x*sin(u)"],
                ["-v_xx*cos(u) - u_xx*sin(u)", "u_xx*cos(u) - v_xx*sin(u)"],
            ],
            lambda: "[[0, u_x], [-u_x, 0]]",
        },
    )?;
    let c = y.ctx().clone();
    let printed = rows(
        &c,
        [
            ["-v*cos(u) - u*cos(u)", "u*cos(u) - v*cos(u)"],
            ["-v_x*cos(u) - u_x*cos(u)", "u_x*cos(u) - v_x*cos(u)"],
            ["-v_xx*cos(u) - u_xx*cos(u)", "u_xx*cos(u) - v_xx*cos(u)"],
        ],
    )?;
    note_printed_table(r, o, "displayed eta table with cos(u) in place of sin(u)", &printed, &y, &mu1(&c, "[[0, u_x], [-u_x, 0]]")?)?;
    r.note("verdicts use the K theta values; the displayed table writes cos(u) where sin(u) belongs");
    Ok(())
}

/// Data of a one-generator reconstruction and lift.
struct Reconstruction<'a> {
    y: [[&'a str; 2]; 3],
    lambda: &'a str,
    k: &'a str,
    rep: LieRepresentation,
    section: &'a str,
    k_alpha: &'a str,
    x_q: [&'a str; 2],
    x_p: &'a str,
    psi: [[&'a str; 2]; 3],
}

fn abelian_theorem2(r: &mut Report, o: &Oracle, d: &Reconstruction) -> Res<()> {
    let c = abelian_ctx()?;
    let y = rows(&c, d.y)?;
    let mu = mu1(&c, d.lambda)?;
    r.table("Y", &y);
    r.value("Lambda", mu.lambda(0));
    r.verdict("recursion", &recursion_verdict(o, &y, &mu)?);

    let k = reconstruct_k_abelian(&mu, o)?;
    r.value("K_gamma", &k);
    exact(r, "K_gamma.exact", &k, &m(&c, d.k)?);
    r.verdict("verify-k", &verify_k(&mu, &k, o)?);

    let g = GaugeSection::new(&c, v(&c, &[d.section])?)?;
    let ka = d.rep.exp_rep(&c.alphas())?;
    r.value("K", &ka);
    exact(r, "K.exact", &ka, &m(&c, d.k_alpha)?);
    exact(r, "K_gamma.from-section", &k_gamma(&d.rep, &g)?, &k);
    exact(r, "Lambda.from-section", lambda_of_section(&d.rep, &g)?.lambda(0), mu.lambda(0));

    let w = EvoField::vertical(&c, y.row(&MultiIndex::zero(1)).to_vec())?;
    let lift = theorem2_lift(&w, &mu, &k, &d.rep, &g, 2, o)?;
    r.value("X", &lift.field);
    exact_vec(r, "X.q", lift.field.q(), &v(&c, &d.x_q)?);
    exact_vec(r, "X.P", lift.field.p(), &v(&c, &[d.x_p])?);
    r.table("X2", &lift.prolonged);
    r.verdict("X2.table", &table_verdict(o, &lift.prolonged, &rows(&c, d.psi)?));
    r.check("lift", lift.holds(), lift.mismatch.as_ref().map(|mm| format!("component {} at index `{}`", mm.field + 1, c.suffix(&mm.jet))));
    Ok(())
}

fn ex5(r: &mut Report, o: &Oracle) -> Res<()> {
    let c = abelian_ctx()?;
    abelian_theorem2(
        r,
        o,
        &Reconstruction {
            y: [["0", "v"], ["u_x*v", "v_x"], ["u_xx*v + 2*u_x*v_x", "v_xx"]],
            lambda: "[[0, u_x], [0, 0]]",
            k: "[[1, -u], [0, 1]]",
            rep: LieRepresentation::nilpotent("upper-negative", vec![m(&c, "[[0, -1], [0, 0]]")?])?,
            section: "u",
            k_alpha: "[[1, -a], [0, 1]]",
            x_q: ["(u - a)*v", "v"],
            x_p: "(u - a)*v",
            psi: [["(u - a)*v", "v"], ["u_x*v + (u - a)*v_x", "v_x"], ["u_xx*v + 2*u_x*v_x + (u - a)*v_xx", "v_xx"]],
        },
    )
}

fn ex6(r: &mut Report, o: &Oracle) -> Res<()> {
    abelian_theorem2(
        r,
        o,
        &Reconstruction {
            y: [["1", "0"], ["0", "v_x"], ["0", "v_xx"]],
            lambda: "[[0, 0], [v_x, 0]]",
            k: "[[1, 0], [-v, 1]]",
            rep: LieRepresentation::lower_nilpotent2(),
            section: "-v",
            k_alpha: "[[1, 0], [a, 1]]",
            x_q: ["1", "a + v"],
            x_p: "-(a + v)",
            psi: [["1", "a + v"], ["0", "v_x"], ["0", "v_xx"]],
        },
    )?;
    r.note("the displayed K(a) = [[1, 0], [a, 0]] is singular; the group element [[1, 0], [a, 1]] is used");
    Ok(())
}

fn su2_section(c: &JetContext, comps: &[&str]) -> Res<GaugeSection> {
    GaugeSection::new(c, v(c, comps)?)
}

/// Restricts a second-order table to the slice where the given jets vanish.
fn on_slice(c: &JetContext, y: &ProlongedField, zero: &[&str]) -> ProlongedField {
    let b: HashMap<_, _> = zero.iter().filter_map(|n| c.lookup(n)).map(|s| (s.clone(), Expr::zero())).collect();
    y.map(|e| e.substitute(&b))
}

fn ex7(r: &mut Report, o: &Oracle) -> Res<()> {
    let c = su2_ctx()?;
    let rep = LieRepresentation::su2_real4();
    let g = su2_section(&c, &["pi/2*u", "0", &format!("pi/2*{RHO}")])?;
    let theta = v(&c, &["-u", "0", "0", "0"])?;
    let x0 = gauged_field_formula(&rep, &theta, &c.alphas())?;
    let s = format!("sin({OMEGA})/{OMEGA}");
    r.verdict("X0", &vec_verdict(o, &x0, &vs(&c, &[format!("-u*cos({OMEGA})"), format!("{s}*a1*u"), format!("{s}*a3*u"), format!("{s}*a2*u")])?));
    let x = complete_invariant(&EvoField::vertical(&c, x0)?, &g)?;
    r.value("X", &x);
    r.verdict("X.P", &vec_verdict(o, x.p(), &vs(&c, &[format!("-pi/2*u*cos({OMEGA})"), "0".into(), format!("pi/2*u^2/{RHO}*cos({OMEGA})")])?));
    r.verdict("invariance", &invariance_check(&x, &g, o)?);
    let xg = restrict(&g, &x);
    let w_shown = vs(&c, &["0".into(), "u^2".into(), format!("u*{RHO}"), "0".into()])?;
    r.verdict("X_gamma.q", &vec_verdict(o, xg.q(), &w_shown));
    r.verdict("X_gamma.P", &vec_verdict(o, xg.p(), &v(&c, &["0", "0", "0"])?));
    let w = project(&xg)?;
    r.value("W", &w);
    r.verdict("W", &vec_verdict(o, w.q(), &w_shown));

    let kg = k_gamma(&rep, &g)?;
    let shown = m(&c, &format!("[[0, u, {RHO}, 0], [-u, 0, 0, -{RHO}], [-{RHO}, 0, 0, u], [0, {RHO}, -u, 0]]"))?;
    r.value("K_gamma", &shown);
    r.verdict("K_gamma", &kg.equal(&shown, o));
    r.verdict("K_gamma.inverse", &k_gamma_inverse(&rep, &g)?.equal(&kg.neg(), o));

    let mu = lambda_of_section(&rep, &g)?;
    let lam = m(&c, "[[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]")?.scale(&e(&c, &format!("u_x/{RHO}"))?);
    r.value("Lambda", &lam);
    r.verdict("Lambda", &mu.lambda(0).equal(&lam, o));
    r.verdict("Lambda.decomposition", &su2::lambda_decomposition(&c, 0, g.components())?.equal(&lam, o));

    let d = diagram_check(&theta, &rep, &g, 2, o)?;
    record_diagram(r, &d);
    r.table("Y", &d.route_a);
    let printed = {
        let base = vs(&c, &["0".into(), "u^2".into(), format!("{RHO}*u"), "0".into()])?;
        let neg: Vec<Expr> = base.iter().map(|x| -x).collect();
        scaled_table(&c, &neg)?
    };
    let flipped = printed.map(|x| -x);
    r.verdict("Y.table-up-to-sign", &table_verdict(o, &d.route_a, &flipped));
    r.verdict("Y.displayed-recursion", &recursion_verdict(o, &printed, &MuForm::new(&c, vec![lam])?)?);
    r.note(format!(
        "the displayed eta table carries an overall minus sign; the computed table equals K_gamma theta = {}; agreement with the displayed sign {}",
        show(w.q()),
        outcome(&table_verdict(o, &d.route_a, &printed))
    ));
    Ok(())
}

/// The 4x4 matrix -L(1, 2, 5) that appears with the (z, 2z, 5z) section.
const M8: &str = "[[0, 1, 5, 2], [-1, 0, 2, -5], [-5, -2, 0, 1], [-2, 5, -1, 0]]";
const BIG_OMEGA: &str = "sqrt(30)*z";

fn ex8(r: &mut Report, o: &Oracle) -> Res<()> {
    let c = su2_ctx()?;
    let rep = LieRepresentation::su2_real4();
    let g = su2_section(&c, &["z", "2*z", "5*z"])?;
    let theta = v(&c, &["u", "v", "-z", "w"])?;
    let x0 = gauged_field_formula(&rep, &theta, &c.alphas())?;
    let (co, s) = (format!("cos({OMEGA})"), format!("sin({OMEGA})/{OMEGA}"));
    let x0_shown = vs(
        &c,
        &[
            format!("{co}*u + {s}*(a1*v + a2*w - a3*z)"),
            format!("{co}*v - {s}*(a1*u + a3*w + a2*z)"),
            format!("-{co}*z - {s}*(a3*u + a2*v - a1*w)"),
            format!("{co}*w - {s}*(a2*u - a3*v - a1*z)"),
        ],
    )?;
    r.verdict("X0", &vec_verdict(o, &x0, &x0_shown));
    let x = complete_invariant(&EvoField::vertical(&c, x0)?, &g)?;
    r.value("X", &x);
    let p1 = format!("w*{co} - (a2*u - a3*v - a1*z)*{s}");
    r.verdict("X.P", &vec_verdict(o, x.p(), &vs(&c, &[p1.clone(), format!("2*({p1})"), format!("5*({p1})")])?));
    r.verdict("invariance", &invariance_check(&x, &g, o)?);
    let w = project(&restrict(&g, &x))?;
    let (cb, sb) = (format!("cos({BIG_OMEGA})"), format!("sin({BIG_OMEGA})/({BIG_OMEGA})"));
    let w_shown = vs(
        &c,
        &[
            format!("{cb}*u + {sb}*(v*z + 2*w*z - 5*z^2)"),
            format!("{cb}*v - {sb}*(u*z + 5*w*z + 2*z^2)"),
            format!("-{cb}*z - {sb}*(5*u*z + 2*v*z - w*z)"),
            format!("{cb}*w - {sb}*(2*u*z - 5*v*z - z^2)"),
        ],
    )?;
    r.value("W", &w);
    r.verdict("W", &vec_verdict(o, w.q(), &w_shown));

    let kg = k_gamma(&rep, &g)?;
    let kg_shown = MatrixExpr::identity(4).scale(&e(&c, &cb)?).add(&m(&c, M8)?.scale(&e(&c, &format!("sin({BIG_OMEGA})/sqrt(30)"))?))?;
    r.verdict("K_gamma", &kg.equal(&kg_shown, o));
    let mu = lambda_of_section(&rep, &g)?;
    let lam = m(&c, M8)?.scale(&e(&c, "-z_x")?);
    r.value("Lambda", &lam);
    r.verdict("Lambda", &mu.lambda(0).equal(&lam, o));
    r.verdict("Lambda.decomposition", &su2::lambda_decomposition(&c, 0, g.components())?.equal(&lam, o));

    let d = diagram_check(&theta, &rep, &g, 2, o)?;
    record_diagram(r, &d);
    r.table("Y", &d.route_a);
    let row = |sfx: &str| -> Res<Vec<Expr>> {
        let j = |n: &str| format!("{n}{sfx}");
        vs(
            &c,
            &[
                format!("{cb}*{} + sin({BIG_OMEGA})/sqrt(30)*({} + 2*{} - 5*{})", j("u"), j("v"), j("w"), j("z")),
                format!("{cb}*{} - sin({BIG_OMEGA})/sqrt(30)*({} + 5*{} + 2*{})", j("v"), j("u"), j("w"), j("z")),
                format!("-{cb}*{} - sin({BIG_OMEGA})/sqrt(30)*(5*{} + 2*{} - {})", j("z"), j("u"), j("v"), j("w")),
                format!("{cb}*{} + sin({BIG_OMEGA})/sqrt(30)*(-2*{} + 5*{} + {})", j("w"), j("u"), j("v"), j("z")),
            ],
        )
    };
    let printed = table(&c, [row("")?, row("_x")?, row("_xx")?])?;
    r.verdict("Y.table", &table_verdict(o, &d.route_a, &printed));
    r.verdict("Y.displayed-recursion", &recursion_verdict(o, &printed, &MuForm::new(&c, vec![lam])?)?);
    Ok(())
}

fn ex9(r: &mut Report, o: &Oracle) -> Res<()> {
    let c = su2_ctx()?;
    let rep = LieRepresentation::su2_real4();
    let rho = "sqrt(v^2 + z^2)";
    let eta = vs(
        &c,
        &[format!("u*cos({rho})"), format!("-u*sin({rho})/{rho}*(v - z)"), format!("u*cos({rho})"), format!("-u*sin({rho})/{rho}*(v + z)")],
    )?;
    let y = scaled_table(&c, &eta)?;
    r.table("Y", &y);
    let b0 = m(&c, "[[0, -v, 0, -z], [v, 0, -z, 0], [0, z, 0, -v], [z, 0, v, 0]]")?.scale(&e(&c, &format!("(v*v_x + z*z_x)/({rho})^2"))?);
    let b1 = m(&c, "[[0, -z, 0, v], [z, 0, v, 0], [0, -v, 0, -z], [-v, 0, z, 0]]")?.scale(&e(&c, &format!("(v_x*z - v*z_x)*sin(2*{rho})/(2*({rho})^3)"))?);
    let b2 = m(&c, "[[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]]")?.scale(&e(&c, &format!("(v_x*z - v*z_x)*sin({rho})^2/({rho})^2"))?);
    let lam = b0.add(&b1)?.add(&b2)?;
    let mu = MuForm::new(&c, vec![lam.clone()])?;
    r.verdict("recursion", &recursion_verdict(o, &y, &mu)?);

    let g = su2_section(&c, &["v", "z", "0"])?;
    r.verdict("Lambda.from-section", &lambda_of_section(&rep, &g)?.lambda(0).equal(&lam, o));
    r.verdict("Lambda.decomposition", &su2::lambda_decomposition(&c, 0, g.components())?.equal(&lam, o));
    let kg = MatrixExpr::identity(4)
        .scale(&e(&c, &format!("cos({rho})"))?)
        .add(&m(&c, "[[0, v, 0, z], [-v, 0, z, 0], [0, -z, 0, v], [-z, 0, -v, 0]]")?.scale(&e(&c, &format!("sin({rho})/{rho}"))?))?;
    r.value("K_gamma", &kg);
    r.verdict("K_gamma.from-section", &k_gamma(&rep, &g)?.equal(&kg, o));
    r.verdict("verify-k", &verify_k(&mu, &kg, o)?);

    let w = EvoField::vertical(&c, eta)?;
    let lift = theorem2_lift(&w, &mu, &kg, &rep, &g, 2, o)?;
    r.value("X", &lift.field);
    let theta = v(&c, &["u", "0", "u", "0"])?;
    r.verdict("X.q", &vec_verdict(o, lift.field.q(), &gauged_field_formula(&rep, &theta, &c.alphas())?));
    r.verdict("invariance", &invariance_check(&lift.field, &g, o)?);
    r.check("lift", lift.holds(), lift.mismatch.as_ref().map(|mm| format!("component {} at index `{}`", mm.field + 1, c.suffix(&mm.jet))));
    r.verdict("Y.table", &table_verdict(o, &lift.expected, &y));

    let s = format!("sin({OMEGA})/{OMEGA}");
    let printed = vs(
        &c,
        &[
            format!("cos({OMEGA})*u - {s}*u*a3"),
            format!("-{s}*u*(a2 - a1)"),
            format!("cos({OMEGA})*u + {s}*u*a3"),
            format!("-{s}*u*(a2 - a1)"),
        ],
    )?;
    r.note(format!(
        "the lifted field is K(a)(u, 0, u, 0); the displayed a-form of X {} against it (sign of the sin bracket and the z slot differ), and its cos part forces theta = (u, 0, u, 0)",
        if vec_verdict(o, lift.field.q(), &printed).holds() { "agrees" } else { "disagrees" }
    ));
    Ok(())
}

fn ex10(r: &mut Report, o: &Oracle) -> Res<()> {
    let c = su2_ctx()?;
    let rep = LieRepresentation::su2_real4();
    let (cb, sb) = (format!("cos({BIG_OMEGA})"), format!("z*sin({BIG_OMEGA})/({BIG_OMEGA})"));
    let eta = vs(&c, &[format!("{cb} + 5*{sb}"), sb.clone(), format!("{cb} - 5*{sb}"), format!("-3*{sb}")])?;
    let zero = v(&c, &["0", "0", "0", "0"])?;
    let y = table(&c, [eta.clone(), zero.clone(), zero])?;
    r.table("Y", &y);
    let lam = m(&c, "[[0, -1, -5, -2], [1, 0, -2, 5], [5, 2, 0, -1], [2, -5, 1, 0]]")?.scale(&e(&c, "z_x")?);
    let mu = MuForm::new(&c, vec![lam.clone()])?;
    r.value("Lambda", &lam);
    r.verdict("recursion", &recursion_verdict(o, &y, &mu)?);

    let g = su2_section(&c, &["z", "2*z", "5*z"])?;
    r.verdict("Lambda.from-section", &lambda_of_section(&rep, &g)?.lambda(0).equal(&lam, o));
    let kg = k_gamma(&rep, &g)?;
    r.value("K_gamma", &kg);
    r.verdict("verify-k", &verify_k(&mu, &kg, o)?);
    let cos_only = MatrixExpr::identity(4).scale(&e(&c, &cb)?);
    r.note(format!(
        "the displayed K_gamma = cos(Omega) I omits the sin(Omega)/sqrt(30) part; verify-k with it {}, with the full restriction of K(a) {}",
        outcome(&verify_k(&mu, &cos_only, o)?),
        outcome(&verify_k(&mu, &kg, o)?)
    ));
    let theta = v(&c, &["1", "0", "1", "0"])?;
    r.verdict("eta.from-theta", &vec_verdict(o, &kg.apply(&theta)?, &eta));

    let w = EvoField::vertical(&c, eta)?;
    let lift = theorem2_lift(&w, &mu, &kg, &rep, &g, 2, o)?;
    r.value("X", &lift.field);
    r.verdict("X.q", &vec_verdict(o, lift.field.q(), &gauged_field_formula(&rep, &theta, &c.alphas())?));
    let p1 = format!("-(a1 + a2)*sin({OMEGA})/{OMEGA}");
    r.verdict("X.P", &vec_verdict(o, lift.field.p(), &vs(&c, &[p1.clone(), format!("2*{p1}"), format!("5*{p1}")])?));
    r.check("lift", lift.holds(), lift.mismatch.as_ref().map(|mm| format!("component {} at index `{}`", mm.field + 1, c.suffix(&mm.jet))));
    let s = format!("sin({OMEGA})/{OMEGA}");
    let printed = vs(&c, &[format!("cos({OMEGA}) + {s}*a3"), format!("cos({OMEGA}) + {s}*(a2 - a1)"), format!("-{s}*a3"), format!("-{s}*(a1 + a2)")])?;
    r.note(format!(
        "the displayed cos part (1, 1, 0, 0) conflicts with theta = (1, 0, 1, 0); the displayed field {} against K(a) theta",
        if vec_verdict(o, lift.field.q(), &printed).holds() { "agrees" } else { "disagrees" }
    ));
    Ok(())
}

/// K_gamma for the so(3) section (beta u, 0, beta rho) as displayed.
fn so3_k_shown(c: &JetContext, beta: &str) -> Res<MatrixExpr> {
    let (cb, sb) = (format!("cos({beta})"), format!("sin({beta})"));
    m(
        c,
        &format!(
            "[[u^2 + (1 - u^2)*{cb}, -{RHO}*{sb}, {RHO}*u*(1 - {cb})], [{RHO}*{sb}, {cb}, -u*{sb}], [{RHO}*u*(1 - {cb}), u*{sb}, (1 - u^2) + u^2*{cb}]]"
        ),
    )
}

fn so3_k_inverse_shown(c: &JetContext, beta: &str) -> Res<MatrixExpr> {
    let (cb, sb) = (format!("cos({beta})"), format!("sin({beta})"));
    m(
        c,
        &format!(
            "[[u^2 + (1 - u^2)*{cb}, {RHO}*{sb}, {RHO}*u*(1 - {cb})], [-{RHO}*{sb}, {cb}, u*{sb}], [{RHO}*u*(1 - {cb}), -u*{sb}, (1 - u^2) + u^2*{cb}]]"
        ),
    )
}

/// Lambda at beta = pi/2, shared by the so(3) examples.
fn so3_lambda(c: &JetContext) -> Res<MatrixExpr> {
    Ok(m(c, &format!("[[0, -u, -1], [u, 0, {RHO}], [1, -{RHO}, 0]]"))?.scale(&e(c, &format!("u_x/{RHO}"))?))
}

fn ex11(r: &mut Report, o: &Oracle) -> Res<()> {
    let c = so3_ctx()?;
    let rep = LieRepresentation::so3();
    let theta = v(&c, &["u", "0", "0"])?;
    let x0 = gauged_field_formula(&rep, &theta, &c.alphas())?;
    let x0_shown = vs(
        &c,
        &[
            format!("u/({OMEGA})^2*(a1^2 + (a2^2 + a3^2)*cos({OMEGA}))"),
            format!("u/({OMEGA})^2*(a1*a2*(1 - cos({OMEGA})) + a3*{OMEGA}*sin({OMEGA}))"),
            format!("u/({OMEGA})^2*(a1*a3*(1 - cos({OMEGA})) - a2*{OMEGA}*sin({OMEGA}))"),
        ],
    )?;
    r.verdict("X0", &vec_verdict(o, &x0, &x0_shown));

    for (label, beta) in [("beta=pi/2", "pi/2"), ("beta=1/3", "1/3")] {
        let g = GaugeSection::new(&c, vs(&c, &[format!("{beta}*u"), "0".into(), format!("{beta}*{RHO}")])?)?;
        let x = complete_invariant(&EvoField::vertical(&c, x0.clone())?, &g)?;
        r.verdict(&format!("{label}.invariance"), &invariance_check(&x, &g, o)?);
        let kg = k_gamma(&rep, &g)?;
        r.verdict(&format!("{label}.K_gamma"), &kg.equal(&so3_k_shown(&c, beta)?, o));
        r.verdict(&format!("{label}.K_gamma.inverse"), &k_gamma_inverse(&rep, &g)?.equal(&so3_k_inverse_shown(&c, beta)?, o));
        let w = project(&restrict(&g, &x))?;
        let kw = kg.apply(&theta)?;
        r.value(&format!("{label}.W"), &w);
        r.verdict(&format!("{label}.W"), &vec_verdict(o, w.q(), &kw));
        let xg_p = vs(
            &c,
            &[format!("{beta}*u*(u^2 + (1 - u^2)*cos({beta}))"), "0".into(), format!("-{beta}*u^2/{RHO}*(u^2 + (1 - u^2)*cos({beta}))")],
        )?;
        r.verdict(&format!("{label}.X_gamma.P"), &vec_verdict(o, restrict(&g, &x).p(), &xg_p));
        let d = diagram_check(&theta, &rep, &g, 2, o)?;
        for edge in &d.edges {
            r.verdict(&format!("{label}.diagram.{}", edge.name), &edge.verdict);
        }
        let tw = twisted_prolong(&w, &g, &rep, 2)?;
        r.verdict(&format!("{label}.Y.scaling"), &table_verdict(o, &d.route_a, &scaled_table(&c, &kw)?));
        r.verdict(&format!("{label}.twisted"), &table_verdict(o, &tw, &d.route_a));
        let lam = lambda_of_section(&rep, &g)?;
        if beta == "pi/2" {
            r.table("Y", &d.route_a);
            let shown = so3_lambda(&c)?;
            r.value("Lambda", &shown);
            r.verdict("Lambda", &lam.lambda(0).equal(&shown, o));
            let eta = vs(&c, &["u^3".into(), format!("u*{RHO}"), format!("{RHO}*u^2")])?;
            r.verdict("Y.table", &table_verdict(o, &d.route_a, &scaled_table(&c, &eta)?));
        } else {
            let (cb, sb) = (format!("cos({beta})"), format!("sin({beta})"));
            let w_printed = vs(&c, &[format!("u + u^3*(1 - {cb})"), format!("u*{RHO}*{sb}"), format!("2*u^2*{RHO}*sin({beta}/2)^2")])?;
            let lam_printed = m(&c, &format!("[[0, -u, -1], [u*{sb}, 0, {RHO}*{sb}], [2*sin({beta}/2)^2, -{RHO}*{sb}, 0]]"))?.scale(&e(&c, &format!("u_x/{RHO}"))?);
            r.note(format!(
                "at {label} the displayed general-beta W {} against K_gamma theta, and the displayed general-beta Lambda {} against -(D_x K_gamma) K_gamma^-1; the beta = pi/2 displays are the ones asserted",
                if vec_verdict(o, &w_printed, &kw).holds() { "agrees" } else { "disagrees" },
                if lam.lambda(0).equal(&lam_printed, o).holds() { "agrees" } else { "disagrees" }
            ));
        }
    }
    Ok(())
}

fn ex12(r: &mut Report, o: &Oracle) -> Res<()> {
    let c = so3_ctx()?;
    let rep = LieRepresentation::so3();
    let base = vs(&c, &[format!("-{RHO}*w"), "0".into(), "u*w".into()])?;
    let scale = |f: &str| -> Res<Vec<Expr>> {
        let k = e(&c, f)?;
        Ok(base.iter().map(|x| &k * x).collect())
    };
    let eta = scale("u")?;
    let printed = table(&c, [eta.clone(), scale("u_x")?, scale("u_xx")?])?;
    r.table("Y.displayed", &printed);
    let lam_printed = m(&c, &format!("[[0, -u*u_x, -u_x], [u*u_x, 0, {RHO}*u_x], [u_x, -{RHO}*u_x, 0]]"))?.scale(&e(&c, RHO)?);
    let kg = m(&c, &format!("[[u^2, -{RHO}, {RHO}*u], [{RHO}, 0, -u], [{RHO}*u, u, 1 - u^2]]"))?;
    let kg_inv = m(&c, &format!("[[u^2, {RHO}, {RHO}*u], [-{RHO}, 0, u], [{RHO}*u, -u, 1 - u^2]]"))?;
    r.value("K_gamma", &kg);
    r.verdict("K_gamma.inverse", &kg.inverse()?.equal(&kg_inv, o));
    let mu_printed = MuForm::new(&c, vec![lam_printed])?;
    let lam = so3_lambda(&c)?;
    let mu = MuForm::new(&c, vec![lam.clone()])?;
    r.value("Lambda", &lam);
    r.verdict("verify-k", &verify_k(&mu, &kg, o)?);
    r.note(format!(
        "the displayed Lambda is rho^2 times -(D_x K_gamma) K_gamma^-1 for the trial K_gamma; verify-k with it {}; the corrected Lambda (u_x/rho)[[0, -u, -1], [u, 0, rho], [1, -rho, 0]] is used",
        outcome(&verify_k(&mu_printed, &kg, o)?)
    ));

    let g = GaugeSection::new(&c, vs(&c, &["pi/2*u".into(), "0".into(), format!("pi/2*{RHO}")])?)?;
    r.verdict("section.K_gamma", &k_gamma(&rep, &g)?.equal(&kg, o));
    r.verdict("section.Lambda", &lambda_of_section(&rep, &g)?.lambda(0).equal(&lam, o));

    let w = EvoField::vertical(&c, eta)?;
    let y = mu_prolong(&w, &mu, 2)?;
    r.table("Y", &y);
    let slice = ["w_x", "w_xx"];
    r.verdict("Y.table-on-slice", &table_verdict(o, &on_slice(&c, &y, &slice), &on_slice(&c, &printed, &slice)));
    r.note(format!(
        "the displayed eta_x = u_x (-rho w, 0, u w) drops the w_x terms; it matches the mu-prolongation only on w_x = w_xx = 0 (off the slice: {})",
        outcome(&table_verdict(o, &y, &printed))
    ));

    let theta_rows: BTreeMap<MultiIndex, Vec<Expr>> = y.ordered_rows().into_iter().map(|(j, row)| Ok((j, kg_inv.apply(row)?))).collect::<Res<_>>()?;
    let theta_table = ProlongedField::from_table(&c, 2, theta_rows, Vec::new())?;
    r.table("theta", &theta_table);
    let x0 = EvoField::vertical(&c, v(&c, &["0", "u*w", "0"])?)?;
    r.value("X0", &x0);
    r.verdict("theta.standard", &table_verdict(o, &theta_table, &std_prolong(&x0, 2)?));
    let x0_printed = e(&c, "u^2*w + u*(1 - u^2)*w")?;
    r.note(format!(
        "the displayed X0 coefficient u^2 w + u(1 - u^2) w {} against the computed u w = u^3 w + u(1 - u^2) w",
        if o.equal(&x0_printed, &x0.q()[1]).holds() { "agrees" } else { "disagrees" }
    ));

    let lift = theorem2_lift(&w, &mu, &kg, &rep, &g, 2, o)?;
    r.value("X", &lift.field);
    r.verdict("invariance", &invariance_check(&lift.field, &g, o)?);
    r.check("lift", lift.holds(), lift.mismatch.as_ref().map(|mm| format!("component {} at index `{}`", mm.field + 1, c.suffix(&mm.jet))));
    r.note(format!(
        "the displayed P = (pi/2 u, 0, pi/2 rho) is the section itself, while X0 = u w d/dv applied to it gives 0; the lifted field has P restricting to {} on the section",
        show(restrict(&g, &lift.field).p())
    ));
    Ok(())
}
