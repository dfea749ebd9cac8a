//! Problem files.
//!
//! A problem file is UTF-8 text made of `[block]` headers followed by
//! `key = value` entries. `#` starts a comment. Expressions use the
//! expression grammar of the core crate; vectors are comma separated with
//! optional surrounding parentheses; matrices are row-major `[[a, b], [c, d]]`.
//!
//! ```text
//! [context]
//! independent = x
//! dependent = u, v
//! gauge = a
//! order = 3
//!
//! [representation]
//! family = nilpotent-2
//!
//! [section]
//! a = u
//!
//! [field]
//! theta = (2*u, v)
//! order = 2
//! ```
//!
//! Blocks: `context` (required), `representation`, `section`, `field`, `mu`,
//! `equation` and `oracle`. Which of the optional blocks are needed depends on
//! the command.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use jetgauge_core::gauge::GaugeSection;
use jetgauge_core::musym::Equation;
use jetgauge_core::prolong::{evolutionary, EvoField, MuForm, ProlongedField};
use jetgauge_core::{Expr, Interval, JetContext, LieRepresentation, MatrixExpr, MultiIndex, OracleConfig};

/// Input error naming the block, key and line it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemError {
    pub line: Option<usize>,
    pub block: Option<String>,
    pub key: Option<String>,
    pub message: String,
}

impl ProblemError {
    pub fn new(message: impl Into<String>) -> Self {
        ProblemError { line: None, block: None, key: None, message: message.into() }
    }

    fn at(line: usize, block: &str, key: Option<&str>, message: impl Into<String>) -> Self {
        ProblemError { line: Some(line), block: Some(block.to_string()), key: key.map(str::to_string), message: message.into() }
    }

    pub fn in_block_key(block: &str, key: &str, message: impl Into<String>) -> Self {
        ProblemError { line: None, block: Some(block.to_string()), key: Some(key.to_string()), message: message.into() }
    }

    pub fn in_block(block: &str, message: impl Into<String>) -> Self {
        ProblemError { line: None, block: Some(block.to_string()), key: None, message: message.into() }
    }
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = self.line {
            write!(f, "line {l}: ")?;
        }
        match (&self.block, &self.key) {
            (Some(b), Some(k)) => write!(f, "[{b}] {k}: ")?,
            (Some(b), None) => write!(f, "[{b}]: ")?,
            _ => {}
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ProblemError {}

pub type ProblemResult<T> = std::result::Result<T, ProblemError>;

#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    key: String,
    value: String,
}

#[derive(Debug, Clone)]
struct RawBlock {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

const BLOCKS: [&str; 7] = ["context", "representation", "section", "field", "mu", "equation", "oracle"];

fn split_blocks(text: &str) -> ProblemResult<Vec<RawBlock>> {
    let mut blocks: Vec<RawBlock> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            if !content.starts_with("[[") {
                let name = rest.strip_suffix(']').ok_or_else(|| ProblemError { line: Some(line), block: None, key: None, message: "unterminated block header".into() })?.trim();
                if !BLOCKS.contains(&name) {
                    return Err(ProblemError { line: Some(line), block: Some(name.to_string()), key: None, message: format!("unknown block; expected one of {}", BLOCKS.join(", ")) });
                }
                if blocks.iter().any(|b| b.name == name) {
                    return Err(ProblemError::at(line, name, None, "block appears twice"));
                }
                blocks.push(RawBlock { name: name.to_string(), line, entries: Vec::new() });
                continue;
            }
        }
        let block = blocks.last_mut().ok_or_else(|| ProblemError { line: Some(line), block: None, key: None, message: "entry before any block header".into() })?;
        let (key, value) = content.split_once('=').ok_or_else(|| ProblemError::at(line, &block.name, None, "expected `key = value`"))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ProblemError::at(line, &block.name, None, "empty key"));
        }
        block.entries.push(Entry { line, key: key.to_string(), value: value.trim().to_string() });
    }
    Ok(blocks)
}

/// Splits at commas outside any brackets.
pub fn split_top_level(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() || !parts.is_empty() {
        parts.push(cur.trim().to_string());
    }
    parts
}

/// Removes one pair of parentheses when they enclose the whole string.
fn strip_outer_parens(s: &str) -> &str {
    let t = s.trim();
    if !(t.starts_with('(') && t.ends_with(')')) {
        return t;
    }
    let mut depth = 0i32;
    for (i, c) in t.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i + 1 < t.len() {
                    return t;
                }
            }
            _ => {}
        }
    }
    &t[1..t.len() - 1]
}

fn names(e: &Entry, block: &str) -> ProblemResult<Vec<String>> {
    let v: Vec<String> = e.value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    if v.is_empty() && !e.value.trim().is_empty() {
        return Err(ProblemError::at(e.line, block, Some(&e.key), "expected a comma separated list of names"));
    }
    Ok(v)
}

fn parse_usize(e: &Entry, block: &str) -> ProblemResult<usize> {
    e.value.parse().map_err(|_| ProblemError::at(e.line, block, Some(&e.key), format!("expected a non-negative integer, found `{}`", e.value)))
}

fn parse_bool(e: &Entry, block: &str) -> ProblemResult<bool> {
    match e.value.as_str() {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        _ => Err(ProblemError::at(e.line, block, Some(&e.key), "expected true or false")),
    }
}

/// Parses a decimal or 0x-prefixed hexadecimal seed.
pub fn parse_seed(s: &str) -> Option<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16).ok(),
        None => s.parse().ok(),
    }
}

/// The field block as written.
#[derive(Debug, Clone, Default)]
pub struct FieldSpec {
    pub theta: Option<Vec<Expr>>,
    pub q: Option<Vec<Expr>>,
    pub p: Option<Vec<Expr>>,
    pub xi: Option<Vec<Expr>>,
    pub phi: Option<Vec<Expr>>,
    pub table: Option<ProlongedField>,
    pub order: usize,
}

/// The mu block: Λ matrices and an optional candidate K_γ.
#[derive(Debug, Clone, Default)]
pub struct MuSpec {
    pub form: Option<MuForm>,
    pub k_gamma: Option<MatrixExpr>,
}

#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub ctx: JetContext,
    pub rep: Option<LieRepresentation>,
    pub section: Option<GaugeSection>,
    pub field: Option<FieldSpec>,
    pub mu: MuSpec,
    pub equation: Option<Equation>,
    pub oracle: OracleConfig,
}

struct Parser<'a> {
    ctx: &'a JetContext,
}

impl Parser<'_> {
    fn expr(&self, e: &Entry, block: &str, text: &str) -> ProblemResult<Expr> {
        self.ctx.parse(text).map_err(|err| ProblemError::at(e.line, block, Some(&e.key), format!("`{text}`: {err}")))
    }

    fn vector(&self, e: &Entry, block: &str) -> ProblemResult<Vec<Expr>> {
        split_top_level(strip_outer_parens(&e.value)).iter().map(|s| self.expr(e, block, s)).collect()
    }

    fn matrix(&self, e: &Entry, block: &str) -> ProblemResult<MatrixExpr> {
        MatrixExpr::parse(&e.value, self.ctx).map_err(|err| ProblemError::at(e.line, block, Some(&e.key), err.to_string()))
    }

    fn number(&self, e: &Entry, block: &str, text: &str) -> ProblemResult<f64> {
        if let Ok(v) = text.trim().parse::<f64>() {
            return Ok(v);
        }
        self.expr(e, block, text)?
            .to_f64()
            .ok_or_else(|| ProblemError::at(e.line, block, Some(&e.key), format!("`{text}` is not a constant")))
    }

    fn interval(&self, e: &Entry, block: &str) -> ProblemResult<Interval> {
        let v = e.value.trim();
        let (kind, rest) = v.split_once('(').ok_or_else(|| ProblemError::at(e.line, block, Some(&e.key), "expected uniform(lo, hi) or band(lo, hi)"))?;
        let inner = rest.strip_suffix(')').ok_or_else(|| ProblemError::at(e.line, block, Some(&e.key), "missing `)`"))?;
        let bounds = split_top_level(inner);
        if bounds.len() != 2 {
            return Err(ProblemError::at(e.line, block, Some(&e.key), "an interval has two bounds"));
        }
        let lo = self.number(e, block, &bounds[0])?;
        let hi = self.number(e, block, &bounds[1])?;
        if !(lo <= hi) {
            return Err(ProblemError::at(e.line, block, Some(&e.key), "lower bound exceeds upper bound"));
        }
        match kind.trim() {
            "uniform" => Ok(Interval::Uniform { lo, hi }),
            "band" if lo >= 0.0 => Ok(Interval::Band { lo, hi }),
            "band" => Err(ProblemError::at(e.line, block, Some(&e.key), "band bounds are magnitudes and must be non-negative")),
            other => Err(ProblemError::at(e.line, block, Some(&e.key), format!("unknown interval kind `{other}`"))),
        }
    }
}

fn parse_context(b: &RawBlock) -> ProblemResult<JetContext> {
    let (mut indep, mut dep, mut gauge) = (None, None, Vec::new());
    let mut order = None;
    let mut augmented = false;
    for e in &b.entries {
        match e.key.as_str() {
            "independent" => indep = Some(names(e, "context")?),
            "dependent" => dep = Some(names(e, "context")?),
            "gauge" => gauge = names(e, "context")?,
            "order" => order = Some(parse_usize(e, "context")?),
            "augmented" => augmented = parse_bool(e, "context")?,
            _ => return Err(ProblemError::at(e.line, "context", Some(&e.key), "unknown key")),
        }
    }
    let indep = indep.ok_or_else(|| ProblemError::at(b.line, "context", None, "missing `independent`"))?;
    let dep = dep.ok_or_else(|| ProblemError::at(b.line, "context", None, "missing `dependent`"))?;
    let order = order.ok_or_else(|| ProblemError::at(b.line, "context", None, "missing `order`"))?;
    fn r(v: &[String]) -> Vec<&str> {
        v.iter().map(String::as_str).collect()
    }
    let built = if augmented {
        JetContext::augmented(&r(&indep), &r(&dep), &r(&gauge), order)
    } else {
        JetContext::new(&r(&indep), &r(&dep), &r(&gauge), order)
    };
    built.map_err(|err| ProblemError::at(b.line, "context", None, err.to_string()))
}

fn parse_representation(p: &Parser, b: &RawBlock) -> ProblemResult<LieRepresentation> {
    let mut family = None;
    let mut name = None;
    let mut generators = Vec::new();
    let mut exp = None;
    for e in &b.entries {
        match e.key.as_str() {
            "family" => family = Some(e),
            "name" => name = Some(e.value.clone()),
            "generator" => generators.push(p.matrix(e, "representation")?),
            "exp" => exp = Some(p.matrix(e, "representation")?),
            _ => return Err(ProblemError::at(e.line, "representation", Some(&e.key), "unknown key")),
        }
    }
    let fam = family.ok_or_else(|| ProblemError::at(b.line, "representation", None, "missing `family`"))?;
    let err = |m: String| ProblemError::at(fam.line, "representation", Some("family"), m);
    let rep = match fam.value.as_str() {
        "nilpotent" => LieRepresentation::nilpotent(name.as_deref().unwrap_or("nilpotent"), generators).map_err(|e| err(e.to_string()))?,
        "custom" => {
            let k = exp.ok_or_else(|| err("a custom family needs `exp`, written in the gauge variables".into()))?;
            let params = (0..p.ctx.num_gauge()).map(|m| p.ctx.alpha_symbol(m).clone()).collect();
            LieRepresentation::custom_closed_form(name.as_deref().unwrap_or("custom"), generators, params, k).map_err(|e| err(e.to_string()))?
        }
        tag => {
            if !generators.is_empty() || exp.is_some() {
                return Err(err(format!("built-in family `{tag}` takes no generators")));
            }
            LieRepresentation::from_tag(tag).map_err(|_| err(format!("unknown family `{tag}`; built-in families are {}, or use nilpotent or custom", LieRepresentation::builtin_tags().join(", "))))?
        }
    };
    if rep.rank() != p.ctx.num_gauge() {
        return Err(err(format!("family has {} generators but the context declares {} gauge variables", rep.rank(), p.ctx.num_gauge())));
    }
    if rep.dim() != p.ctx.num_dependent() {
        return Err(err(format!("family acts on dimension {} but the context declares {} dependent variables", rep.dim(), p.ctx.num_dependent())));
    }
    Ok(rep)
}

fn parse_section(p: &Parser, b: &RawBlock) -> ProblemResult<GaugeSection> {
    let mut comps: Vec<Option<Expr>> = vec![None; p.ctx.num_gauge()];
    for e in &b.entries {
        let m = p.ctx.gauge_names().iter().position(|g| *g == e.key).ok_or_else(|| ProblemError::at(e.line, "section", Some(&e.key), "not a gauge variable"))?;
        comps[m] = Some(p.expr(e, "section", &e.value)?);
    }
    let mut a = Vec::new();
    for (m, c) in comps.into_iter().enumerate() {
        a.push(c.ok_or_else(|| ProblemError::at(b.line, "section", None, format!("missing gauge variable `{}`", p.ctx.gauge_names()[m])))?);
    }
    GaugeSection::new(p.ctx, a).map_err(|err| ProblemError::at(b.line, "section", None, err.to_string()))
}

fn jet_index(ctx: &JetContext, suffix: &str, max: usize) -> Option<MultiIndex> {
    MultiIndex::up_to(ctx.num_independent(), max).into_iter().find(|j| ctx.suffix(j) == suffix)
}

fn parse_field(p: &Parser, b: &RawBlock) -> ProblemResult<FieldSpec> {
    let mut f = FieldSpec { order: 2, ..FieldSpec::default() };
    let mut rows: Vec<(&Entry, MultiIndex, Vec<Expr>)> = Vec::new();
    for e in &b.entries {
        match e.key.as_str() {
            "theta" => f.theta = Some(p.vector(e, "field")?),
            "q" => f.q = Some(p.vector(e, "field")?),
            "p" => f.p = Some(p.vector(e, "field")?),
            "xi" => f.xi = Some(p.vector(e, "field")?),
            "phi" => f.phi = Some(p.vector(e, "field")?),
            "order" => f.order = parse_usize(e, "field")?,
            k if k == "eta" || k.starts_with("eta_") => {
                let suffix = k.strip_prefix("eta_").unwrap_or("");
                let j = jet_index(p.ctx, suffix, p.ctx.order())
                    .ok_or_else(|| ProblemError::at(e.line, "field", Some(k), "not a jet index of the context"))?;
                if rows.iter().any(|(_, o, _)| *o == j) {
                    return Err(ProblemError::at(e.line, "field", Some(k), "row given twice"));
                }
                rows.push((e, j, p.vector(e, "field")?));
            }
            _ => return Err(ProblemError::at(e.line, "field", Some(&e.key), "unknown key")),
        }
    }
    if !rows.is_empty() {
        let order = rows.iter().map(|(_, j, _)| j.order()).max().unwrap_or(0);
        let table: BTreeMap<MultiIndex, Vec<Expr>> = rows.iter().map(|(_, j, v)| (j.clone(), v.clone())).collect();
        let built = ProlongedField::from_table(p.ctx, order, table, f.p.clone().unwrap_or_default());
        f.table = Some(built.map_err(|err| ProblemError::at(rows[0].0.line, "field", Some("eta"), err.to_string()))?);
    }
    if f.theta.is_none() && f.q.is_none() && f.xi.is_none() && f.phi.is_none() && f.table.is_none() {
        return Err(ProblemError::at(b.line, "field", None, "expected one of theta, q, xi/phi or an eta table"));
    }
    Ok(f)
}

fn parse_mu(p: &Parser, b: &RawBlock) -> ProblemResult<MuSpec> {
    let m = p.ctx.num_independent();
    let mut lambdas: Vec<Option<MatrixExpr>> = vec![None; m];
    let mut spec = MuSpec::default();
    let mut first_line = None;
    for e in &b.entries {
        if e.key == "k_gamma" {
            spec.k_gamma = Some(p.matrix(e, "mu")?);
            continue;
        }
        let var = e.key.strip_prefix("lambda_").ok_or_else(|| ProblemError::at(e.line, "mu", Some(&e.key), "expected lambda_<variable> or k_gamma"))?;
        let i = p.ctx.independent_names().iter().position(|n| n == var).ok_or_else(|| ProblemError::at(e.line, "mu", Some(&e.key), "not an independent variable"))?;
        let mat = p.matrix(e, "mu")?;
        if mat.dim() != p.ctx.num_dependent() {
            return Err(ProblemError::at(e.line, "mu", Some(&e.key), format!("expected a {0}x{0} matrix", p.ctx.num_dependent())));
        }
        lambdas[i] = Some(mat);
        first_line.get_or_insert(e.line);
    }
    if let Some(line) = first_line {
        let n = p.ctx.num_dependent();
        let full = lambdas.into_iter().map(|l| l.unwrap_or_else(|| MatrixExpr::zeros(n))).collect();
        spec.form = Some(MuForm::new(p.ctx, full).map_err(|err| ProblemError::at(line, "mu", None, err.to_string()))?);
    }
    Ok(spec)
}

fn parse_equation(p: &Parser, b: &RawBlock) -> ProblemResult<Equation> {
    let mut lines = Vec::new();
    for e in &b.entries {
        let lhs = p.ctx.lookup(&e.key).map(Expr::sym).ok_or_else(|| ProblemError::at(e.line, "equation", Some(&e.key), "left side must be a jet coordinate"))?;
        lines.push((lhs, p.expr(e, "equation", &e.value)?));
    }
    if lines.is_empty() {
        return Err(ProblemError::at(b.line, "equation", None, "no equation lines"));
    }
    Equation::new(p.ctx, lines).map_err(|err| ProblemError::at(b.line, "equation", None, err.to_string()))
}

fn parse_oracle(p: &Parser, b: &RawBlock) -> ProblemResult<OracleConfig> {
    let mut cfg = OracleConfig::default();
    for e in &b.entries {
        match e.key.as_str() {
            "seed" => cfg.seed = parse_seed(&e.value).ok_or_else(|| ProblemError::at(e.line, "oracle", Some("seed"), "expected an integer"))?,
            "samples" => cfg.samples = parse_usize(e, "oracle")?,
            "tol" => cfg.tol = p.number(e, "oracle", &e.value)?,
            "default" => cfg.domain.default = p.interval(e, "oracle")?,
            name => {
                if p.ctx.lookup(name).is_none() {
                    return Err(ProblemError::at(e.line, "oracle", Some(name), "not a coordinate of the context"));
                }
                let iv = p.interval(e, "oracle")?;
                cfg.domain = std::mem::take(&mut cfg.domain).with(name, iv);
            }
        }
    }
    if cfg.samples == 0 {
        return Err(ProblemError::in_block("oracle", "samples must be positive"));
    }
    Ok(cfg)
}

impl ProblemSpec {
    pub fn parse(text: &str) -> ProblemResult<Self> {
        let blocks = split_blocks(text)?;
        let find = |n: &str| blocks.iter().find(|b| b.name == n);
        let ctx = parse_context(find("context").ok_or_else(|| ProblemError::new("missing [context] block"))?)?;
        let p = Parser { ctx: &ctx };
        let rep = find("representation").map(|b| parse_representation(&p, b)).transpose()?;
        let section = find("section").map(|b| parse_section(&p, b)).transpose()?;
        let field = find("field").map(|b| parse_field(&p, b)).transpose()?;
        let mu = find("mu").map(|b| parse_mu(&p, b)).transpose()?.unwrap_or_default();
        let equation = find("equation").map(|b| parse_equation(&p, b)).transpose()?;
        let oracle = find("oracle").map(|b| parse_oracle(&p, b)).transpose()?.unwrap_or_default();
        Ok(ProblemSpec { ctx: ctx.clone(), rep, section, field, mu, equation, oracle })
    }

    pub fn load(path: &Path) -> ProblemResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ProblemError::new(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn rep(&self) -> ProblemResult<&LieRepresentation> {
        self.rep.as_ref().ok_or_else(|| ProblemError::new("this command needs a [representation] block"))
    }

    pub fn section(&self) -> ProblemResult<&GaugeSection> {
        self.section.as_ref().ok_or_else(|| ProblemError::new("this command needs a [section] block"))
    }

    pub fn field(&self) -> ProblemResult<&FieldSpec> {
        self.field.as_ref().ok_or_else(|| ProblemError::new("this command needs a [field] block"))
    }

    pub fn mu_form(&self) -> ProblemResult<&MuForm> {
        self.mu.form.as_ref().ok_or_else(|| ProblemError::in_block("mu", "this command needs lambda_<variable> entries"))
    }

    pub fn equation(&self) -> ProblemResult<&Equation> {
        self.equation.as_ref().ok_or_else(|| ProblemError::new("this command needs an [equation] block"))
    }

    /// The field as an evolutionary vector field: `q` (with `p`), then `xi`/`phi`, then `theta`.
    pub fn evo_field(&self) -> ProblemResult<EvoField> {
        let f = self.field()?;
        let err = |e: jetgauge_core::Error| ProblemError::in_block("field", e.to_string());
        if let Some(q) = &f.q {
            return EvoField::new(&self.ctx, q.clone(), f.p.clone().unwrap_or_default()).map_err(err);
        }
        if f.xi.is_some() || f.phi.is_some() {
            let xi = f.xi.clone().unwrap_or_else(|| vec![Expr::zero(); self.ctx.num_independent()]);
            let phi = f.phi.clone().unwrap_or_else(|| vec![Expr::zero(); self.ctx.num_dependent()]);
            return evolutionary(&xi, &phi, &self.ctx).map_err(err);
        }
        if let Some(t) = &f.theta {
            return EvoField::new(&self.ctx, t.clone(), f.p.clone().unwrap_or_default()).map_err(err);
        }
        Err(ProblemError::in_block("field", "expected q, xi/phi or theta"))
    }

    pub fn theta(&self) -> ProblemResult<&[Expr]> {
        self.field()?.theta.as_deref().ok_or_else(|| ProblemError::in_block("field", "this command needs `theta`"))
    }
}
