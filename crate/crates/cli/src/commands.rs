//! The commands behind `jetgauge <command> <input>`.

use std::fmt;

use jetgauge_core::gauge::{
    complete_invariant, diagram_check, invariance_check, k_gamma, lambda_of_section, r_matrices, reconstruct_k_abelian, theorem2_lift, verify_k,
};
use jetgauge_core::musym::{mu_symmetry_check, symmetry_check};
use jetgauge_core::prolong::{is_mu_prolongation, maurer_cartan_check, mu_prolong_with, std_prolong, MuForm};
use jetgauge_core::{Error, MatrixExpr, Oracle, OracleConfig};

use crate::catalog;
use crate::problem::{parse_seed, ProblemError, ProblemResult, ProblemSpec};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Prolong,
    MuProlong,
    LambdaOfSection,
    McCheck,
    DiagramCheck,
    CompleteInvariant,
    InvarianceCheck,
    ReconstructK,
    VerifyK,
    Lift,
    MusymCheck,
    Example,
}

impl Command {
    pub const ALL: [Command; 12] = [
        Command::Prolong,
        Command::MuProlong,
        Command::LambdaOfSection,
        Command::McCheck,
        Command::DiagramCheck,
        Command::CompleteInvariant,
        Command::InvarianceCheck,
        Command::ReconstructK,
        Command::VerifyK,
        Command::Lift,
        Command::MusymCheck,
        Command::Example,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Prolong => "prolong",
            Command::MuProlong => "mu-prolong",
            Command::LambdaOfSection => "lambda-of-section",
            Command::McCheck => "mc-check",
            Command::DiagramCheck => "diagram-check",
            Command::CompleteInvariant => "complete-invariant",
            Command::InvarianceCheck => "invariance-check",
            Command::ReconstructK => "reconstruct-k",
            Command::VerifyK => "verify-k",
            Command::Lift => "lift",
            Command::MusymCheck => "musym-check",
            Command::Example => "example",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Oracle settings given on the command line; they override the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, mut cfg: OracleConfig) -> OracleConfig {
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.samples {
            cfg.samples = n;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        cfg
    }
}

pub fn parse_seed_arg(s: &str) -> Result<u64, String> {
    parse_seed(s).ok_or_else(|| format!("`{s}` is not a decimal or 0x-prefixed integer"))
}

/// Wraps a core error with the block it came from.
fn in_block(block: &'static str) -> impl Fn(Error) -> ProblemError {
    move |e| ProblemError { line: None, block: Some(block.to_string()), key: None, message: e.to_string() }
}

/// Runs a command on a problem file path, or on an example number for `example`.
pub fn run(command: Command, input: &str, overrides: &Overrides) -> ProblemResult<Report> {
    if command == Command::Example {
        let n: usize = input.parse().map_err(|_| ProblemError::new(format!("`example` takes a number from 1 to {}, found `{input}`", catalog::EXAMPLE_COUNT)))?;
        return catalog::run_example(n, &overrides.apply(OracleConfig::default()));
    }
    let spec = ProblemSpec::load(std::path::Path::new(input))?;
    run_spec(command, input, &spec, overrides)
}

pub fn run_spec(command: Command, input: &str, spec: &ProblemSpec, overrides: &Overrides) -> ProblemResult<Report> {
    let cfg = overrides.apply(spec.oracle.clone());
    if cfg.samples == 0 {
        return Err(ProblemError::new("the oracle needs at least one sample"));
    }
    let o = Oracle::new(cfg.clone());
    let mut r = Report::new(command.name(), input, &cfg);
    match command {
        Command::Prolong => prolong(&mut r, spec)?,
        Command::MuProlong => mu_prolong_cmd(&mut r, spec, &o)?,
        Command::LambdaOfSection => lambda_cmd(&mut r, spec, &o)?,
        Command::McCheck => mc_cmd(&mut r, spec, &o)?,
        Command::DiagramCheck => diagram_cmd(&mut r, spec, &o)?,
        Command::CompleteInvariant => complete_cmd(&mut r, spec, &o)?,
        Command::InvarianceCheck => invariance_cmd(&mut r, spec, &o)?,
        Command::ReconstructK => reconstruct_cmd(&mut r, spec, &o)?,
        Command::VerifyK => verify_cmd(&mut r, spec, &o)?,
        Command::Lift => lift_cmd(&mut r, spec, &o)?,
        Command::MusymCheck => musym_cmd(&mut r, spec, &o)?,
        Command::Example => unreachable!("handled by run"),
    }
    Ok(r)
}

fn prolong(r: &mut Report, spec: &ProblemSpec) -> ProblemResult<()> {
    let f = spec.evo_field()?;
    let y = std_prolong(&f, spec.field()?.order).map_err(in_block("field"))?;
    r.value("field", &f);
    r.table("prolonged", &y);
    Ok(())
}

/// Records the Maurer-Cartan verdict; returns whether it holds.
fn mc_verdict(r: &mut Report, mu: &MuForm, o: &Oracle) -> ProblemResult<bool> {
    let mc = maurer_cartan_check(mu, o).map_err(in_block("mu"))?;
    match &mc.failure {
        None => r.check("maurer-cartan", true, None),
        Some((i, j, v)) => {
            let names = spec_names(mu);
            r.verdict("maurer-cartan", v);
            r.note(format!("maurer-cartan fails for the directions ({}, {})", names[*i - 1], names[*j - 1]));
        }
    }
    if mc.is_vacuous() {
        r.note("maurer-cartan: vacuous (single independent variable)");
    } else {
        r.meta("mc-pairs", mc.pairs_checked);
    }
    Ok(mc.holds())
}

fn spec_names(mu: &MuForm) -> Vec<String> {
    mu.ctx().independent_names().to_vec()
}

fn lambdas(r: &mut Report, mu: &MuForm) {
    for (i, l) in mu.lambdas().iter().enumerate() {
        r.value(&format!("Lambda_{}", mu.ctx().independent_names()[i]), l);
    }
}

fn mu_prolong_cmd(r: &mut Report, spec: &ProblemSpec, o: &Oracle) -> ProblemResult<()> {
    let mu = spec.mu_form()?;
    let field = spec.field()?;
    lambdas(r, mu);
    let mc = mc_verdict(r, mu, o)?;
    let has_field = field.q.is_some() || field.theta.is_some() || field.xi.is_some() || field.phi.is_some();
    if has_field && mc {
        let f = spec.evo_field()?;
        let y = mu_prolong_with(&f.without_p(), mu, field.order, o, false).map_err(in_block("field"))?;
        r.value("field", &f);
        r.table("mu-prolonged", &y);
        if let Some(t) = &field.table {
            if t.order() <= y.order() {
                let trimmed = jetgauge_core::prolong::ProlongedField::from_table(
                    &spec.ctx,
                    t.order(),
                    y.ordered_rows().into_iter().filter(|(j, _)| j.order() <= t.order()).map(|(j, row)| (j, row.to_vec())).collect(),
                    Vec::new(),
                )
                .map_err(in_block("field"))?;
                match trimmed.compare(&t.without_p(), o) {
                    None => r.check("table-matches-field", true, None),
                    Some(m) => {
                        r.verdict("table-matches-field", &m.verdict);
                        r.note(format!("table-matches-field: first difference in component {} at `eta_{}`", m.field + 1, spec.ctx.suffix(&m.jet)));
                    }
                }
            } else {
                r.note("the eta table is longer than the requested order; compared only through the recursion");
            }
        }
    }
    if let Some(t) = &field.table {
        r.table("given", t);
        match is_mu_prolongation(t, mu, o).map_err(in_block("field"))? {
            None => r.check("table-recursion", true, None),
            Some(f) => {
                r.verdict("table-recursion", &f.verdict);
                r.note(format!(
                    "table-recursion: component {} of eta_{} differs from D_{} of the row below plus Lambda times it",
                    f.field + 1,
                    spec.ctx.suffix(&f.jet),
                    spec.ctx.independent_names()[f.direction]
                ));
            }
        }
    }
    Ok(())
}

fn section_form(spec: &ProblemSpec) -> ProblemResult<MuForm> {
    lambda_of_section(spec.rep()?, spec.section()?).map_err(in_block("section"))
}

fn lambda_cmd(r: &mut Report, spec: &ProblemSpec, o: &Oracle) -> ProblemResult<()> {
    let (rep, g) = (spec.rep()?, spec.section()?);
    let k = k_gamma(rep, g).map_err(in_block("section"))?;
    r.value("K_gamma", &k);
    let mu = section_form(spec)?;
    lambdas(r, &mu);
    let rs = r_matrices(&spec.ctx, &k, o).map_err(in_block("section"))?;
    let consistent = rs.iter().zip(mu.lambdas()).all(|(ri, li)| ri.neg().equal(li, o).holds());
    r.check("lambda-equals-minus-r", consistent, None);
    mc_verdict(r, &mu, o)?;
    if let Some(given) = &spec.mu.form {
        for (i, (a, b)) in mu.lambdas().iter().zip(given.lambdas()).enumerate() {
            r.verdict(&format!("Lambda_{}-matches", spec.ctx.independent_names()[i]), &a.equal(b, o));
        }
    }
    Ok(())
}

fn mc_cmd(r: &mut Report, spec: &ProblemSpec, o: &Oracle) -> ProblemResult<()> {
    let mu = match &spec.mu.form {
        Some(mu) => mu.clone(),
        None if spec.rep.is_some() && spec.section.is_some() => section_form(spec)?,
        None => return Err(ProblemError::new("mc-check needs a [mu] block, or [representation] and [section]")),
    };
    lambdas(r, &mu);
    mc_verdict(r, &mu, o)?;
    Ok(())
}

fn diagram_cmd(r: &mut Report, spec: &ProblemSpec, o: &Oracle) -> ProblemResult<()> {
    let d = diagram_check(spec.theta()?, spec.rep()?, spec.section()?, spec.field()?.order, o).map_err(in_block("field"))?;
    r.value("X", &d.field);
    r.value("W", &d.projected);
    lambdas(r, &d.lambda);
    r.table("route-a", &d.route_a);
    r.table("route-b", &d.route_b);
    for e in &d.edges {
        r.verdict(&format!("edge.{}", e.name), &e.verdict);
        if !e.verdict.holds() {
            r.note(format!("edge.{}: {}", e.name, e.detail));
        }
    }
    Ok(())
}

fn complete_cmd(r: &mut Report, spec: &ProblemSpec, o: &Oracle) -> ProblemResult<()> {
    let g = spec.section()?;
    let x = complete_invariant(&spec.evo_field()?.without_p(), g).map_err(in_block("field"))?;
    r.value("X", &x);
    r.verdict("invariance", &invariance_check(&x, g, o).map_err(in_block("field"))?);
    Ok(())
}

fn invariance_cmd(r: &mut Report, spec: &ProblemSpec, o: &Oracle) -> ProblemResult<()> {
    let x = spec.evo_field()?;
    if x.p().is_empty() && spec.ctx.num_gauge() > 0 {
        return Err(ProblemError::in_block_key("field", "p", "invariance-check needs the gauge components `p`"));
    }
    r.value("X", &x);
    r.verdict("invariance", &invariance_check(&x, spec.section()?, o).map_err(in_block("field"))?);
    Ok(())
}

fn reconstruct_cmd(r: &mut Report, spec: &ProblemSpec, o: &Oracle) -> ProblemResult<()> {
    let mu = spec.mu_form()?;
    lambdas(r, mu);
    let k = reconstruct_k_abelian(mu, o).map_err(in_block("mu"))?;
    r.value("K_gamma", &k);
    r.verdict("verify-k", &verify_k(mu, &k, o).map_err(in_block("mu"))?);
    Ok(())
}

fn candidate_k(spec: &ProblemSpec) -> ProblemResult<MatrixExpr> {
    match (&spec.mu.k_gamma, &spec.rep, &spec.section) {
        (Some(k), _, _) => Ok(k.clone()),
        (None, Some(rep), Some(g)) => k_gamma(rep, g).map_err(in_block("section")),
        _ => Err(ProblemError::in_block_key("mu", "k_gamma", "needs a candidate k_gamma, or [representation] and [section]")),
    }
}

fn verify_cmd(r: &mut Report, spec: &ProblemSpec, o: &Oracle) -> ProblemResult<()> {
    let mu = spec.mu_form()?;
    let k = candidate_k(spec)?;
    lambdas(r, mu);
    r.value("K_gamma", &k);
    r.verdict("verify-k", &verify_k(mu, &k, o).map_err(in_block("mu"))?);
    Ok(())
}

fn lift_cmd(r: &mut Report, spec: &ProblemSpec, o: &Oracle) -> ProblemResult<()> {
    let (rep, g) = (spec.rep()?, spec.section()?);
    let mu = match &spec.mu.form {
        Some(mu) => mu.clone(),
        None => section_form(spec)?,
    };
    let k = candidate_k(spec)?;
    let w = spec.evo_field()?.without_p();
    lambdas(r, &mu);
    r.value("K_gamma", &k);
    r.value("W", &w);
    let vk = verify_k(&mu, &k, o).map_err(in_block("mu"))?;
    r.verdict("verify-k", &vk);
    let from_section = k.equal(&k_gamma(rep, g).map_err(in_block("section"))?, o);
    r.verdict("k-gamma-from-section", &from_section);
    if !(vk.holds() && from_section.holds()) {
        r.note("lift skipped: K_gamma must solve D_i K = -Lambda_i K and be the representation on the section");
        return Ok(());
    }
    let lift = theorem2_lift(&w, &mu, &k, rep, g, spec.field()?.order, o).map_err(in_block("field"))?;
    r.value("X", &lift.field);
    r.table("prolonged", &lift.prolonged);
    r.table("expected", &lift.expected);
    match &lift.mismatch {
        None => r.check("lift", true, None),
        Some(m) => {
            r.verdict("lift", &m.verdict);
            r.note(format!("lift: first difference in component {} at `eta_{}`", m.field + 1, spec.ctx.suffix(&m.jet)));
        }
    }
    Ok(())
}

fn musym_cmd(r: &mut Report, spec: &ProblemSpec, o: &Oracle) -> ProblemResult<()> {
    let eq = spec.equation()?;
    let w = spec.evo_field()?;
    r.value("field", &w);
    let rep = match &spec.mu.form {
        Some(mu) => {
            lambdas(r, mu);
            if !mc_verdict(r, mu, o)? {
                return Ok(());
            }
            mu_symmetry_check(eq, &w, mu, eq.order(), o)
        }
        None => {
            r.note("no [mu] block: classical symmetry check (Lambda = 0)");
            symmetry_check(eq, &w, eq.order(), o)
        }
    }
    .map_err(in_block("equation"))?;
    for ((s, _), (res, v)) in eq.lines().iter().zip(rep.residuals.iter().zip(&rep.verdicts)) {
        r.value(&format!("residual.{}", s.name()), res);
        r.verdict(&format!("determining.{}", s.name()), v);
    }
    Ok(())
}
