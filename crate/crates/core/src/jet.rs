//! Jet-space bookkeeping: coordinate contexts, multi-indices and the total
//! derivative operators.
//!
//! `D_i = ∂/∂x^i + Σ u^a_{J,i} ∂/∂u^a_J` acts on dependent jets only; gauge
//! coordinates are treated as inert. The augmented operator additionally
//! differentiates gauge jets α^m_J, which requires a context built with
//! [`JetContext::augmented`].

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{parse_expr, CoordKind, Expr, Resolver, Symbol, RESERVED};

/// Derivative counts (j_1, ..., j_m), one per independent variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        MultiIndex(counts)
    }

    /// The index with a single derivative in direction `i`.
    pub fn unit(m: usize, i: usize) -> Self {
        MultiIndex::zero(m).append(i)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(|&j| j as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.order() == 0
    }

    /// J + e_i.
    pub fn append(&self, i: usize) -> Self {
        let mut c = self.0.clone();
        c[i] += 1;
        MultiIndex(c)
    }

    /// J − e_i, if j_i > 0.
    pub fn remove(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut c = self.0.clone();
        c[i] -= 1;
        Some(MultiIndex(c))
    }

    /// Last direction in the normalized derivative order D_1 … D_m.
    pub fn last_direction(&self) -> Option<usize> {
        (0..self.0.len()).rev().find(|&i| self.0[i] > 0)
    }

    /// All multi-indices in `m` variables of exactly order `k`, in a fixed order.
    pub fn of_order(m: usize, k: usize) -> Vec<MultiIndex> {
        fn rec(m: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == m {
                prefix.push(left);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for j in (0..=left).rev() {
                prefix.push(j);
                rec(m, left - j, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, k as u32, &mut Vec::new(), &mut out);
        out
    }

    /// All multi-indices with order at most `k`, by increasing order.
    pub fn up_to(m: usize, k: usize) -> Vec<MultiIndex> {
        (0..=k).flat_map(|o| MultiIndex::of_order(m, o)).collect()
    }
}

#[derive(Debug)]
struct ContextData {
    independent: Vec<String>,
    dependent: Vec<String>,
    gauge: Vec<String>,
    order: usize,
    gauge_jets: bool,
    by_name: HashMap<String, Symbol>,
    x: Vec<Symbol>,
    u: HashMap<(usize, MultiIndex), Symbol>,
    alpha: HashMap<(usize, MultiIndex), Symbol>,
}

/// Declared coordinates of a jet space of fixed maximal order.
#[derive(Clone)]
pub struct JetContext(Arc<ContextData>);

impl fmt::Debug for JetContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "JetContext(x={:?}, u={:?}, alpha={:?}, order={})",
            self.0.independent, self.0.dependent, self.0.gauge, self.0.order
        )
    }
}

fn check_name(name: &str) -> Result<()> {
    let bad = |reason: &str| Err(Error::InvalidName { name: name.to_string(), reason: reason.to_string() });
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return bad("must start with a letter"),
    }
    if !chars.all(|c| c.is_ascii_alphanumeric()) {
        return bad("only letters and digits are allowed");
    }
    if RESERVED.contains(&name) {
        return bad("reserved word");
    }
    Ok(())
}

impl JetContext {
    /// Context with inert gauge variables (no gauge jets).
    pub fn new(independent: &[&str], dependent: &[&str], gauge: &[&str], order: usize) -> Result<Self> {
        Self::build(independent, dependent, gauge, order, false)
    }

    /// Context whose gauge variables carry jets α^m_J up to the same order.
    pub fn augmented(independent: &[&str], dependent: &[&str], gauge: &[&str], order: usize) -> Result<Self> {
        Self::build(independent, dependent, gauge, order, true)
    }

    fn build(independent: &[&str], dependent: &[&str], gauge: &[&str], order: usize, gauge_jets: bool) -> Result<Self> {
        if independent.is_empty() {
            return Err(Error::Invalid("at least one independent variable is required".into()));
        }
        if dependent.is_empty() {
            return Err(Error::Invalid("at least one dependent variable is required".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for n in independent.iter().chain(dependent).chain(gauge) {
            check_name(n)?;
            if !seen.insert(*n) {
                return Err(Error::InvalidName { name: n.to_string(), reason: "declared twice".into() });
            }
        }
        let m = independent.len();
        let suffix = |j: &MultiIndex| -> String {
            let mut s = String::new();
            for (i, &c) in j.counts().iter().enumerate() {
                for _ in 0..c {
                    s.push_str(independent[i]);
                }
            }
            s
        };
        let jet_name = |base: &str, j: &MultiIndex| if j.is_empty() { base.to_string() } else { format!("{base}_{}", suffix(j)) };
        let mut by_name = HashMap::new();
        let x: Vec<Symbol> = independent.iter().enumerate().map(|(i, n)| Symbol::new(*n, CoordKind::Independent(i))).collect();
        for s in &x {
            by_name.insert(s.name().to_string(), s.clone());
        }
        let jets = MultiIndex::up_to(m, order);
        let mut u = HashMap::new();
        for (a, base) in dependent.iter().enumerate() {
            for j in &jets {
                let s = Symbol::new(jet_name(base, j), CoordKind::Dependent { field: a, jet: j.clone() });
                by_name.insert(s.name().to_string(), s.clone());
                u.insert((a, j.clone()), s);
            }
        }
        let gauge_orders = if gauge_jets { jets.clone() } else { vec![MultiIndex::zero(m)] };
        let mut alpha = HashMap::new();
        for (k, base) in gauge.iter().enumerate() {
            for j in &gauge_orders {
                let s = Symbol::new(jet_name(base, j), CoordKind::Gauge { index: k, jet: j.clone() });
                by_name.insert(s.name().to_string(), s.clone());
                alpha.insert((k, j.clone()), s);
            }
        }
        Ok(JetContext(Arc::new(ContextData {
            independent: independent.iter().map(|s| s.to_string()).collect(),
            dependent: dependent.iter().map(|s| s.to_string()).collect(),
            gauge: gauge.iter().map(|s| s.to_string()).collect(),
            order,
            gauge_jets,
            by_name,
            x,
            u,
            alpha,
        })))
    }

    pub fn num_independent(&self) -> usize {
        self.0.independent.len()
    }

    pub fn num_dependent(&self) -> usize {
        self.0.dependent.len()
    }

    pub fn num_gauge(&self) -> usize {
        self.0.gauge.len()
    }

    pub fn order(&self) -> usize {
        self.0.order
    }

    pub fn has_gauge_jets(&self) -> bool {
        self.0.gauge_jets
    }

    pub fn independent_names(&self) -> &[String] {
        &self.0.independent
    }

    pub fn dependent_names(&self) -> &[String] {
        &self.0.dependent
    }

    pub fn gauge_names(&self) -> &[String] {
        &self.0.gauge
    }

    pub fn x_symbol(&self, i: usize) -> &Symbol {
        &self.0.x[i]
    }

    pub fn x(&self, i: usize) -> Expr {
        Expr::sym(&self.0.x[i])
    }

    pub fn u_symbol(&self, a: usize, j: &MultiIndex) -> Result<&Symbol> {
        self.0.u.get(&(a, j.clone())).ok_or_else(|| Error::OrderOverflow {
            symbol: self.0.dependent.get(a).cloned().unwrap_or_default(),
            var: self.suffix(j),
            max: self.0.order,
        })
    }

    /// The jet coordinate u^a_J.
    pub fn u_jet(&self, a: usize, j: &MultiIndex) -> Result<Expr> {
        Ok(Expr::sym(self.u_symbol(a, j)?))
    }

    /// The field value u^a.
    pub fn u(&self, a: usize) -> Expr {
        Expr::sym(&self.0.u[&(a, MultiIndex::zero(self.num_independent()))])
    }

    pub fn alpha_symbol(&self, m: usize) -> &Symbol {
        &self.0.alpha[&(m, MultiIndex::zero(self.num_independent()))]
    }

    pub fn alpha(&self, m: usize) -> Expr {
        Expr::sym(self.alpha_symbol(m))
    }

    pub fn alphas(&self) -> Vec<Expr> {
        (0..self.num_gauge()).map(|m| self.alpha(m)).collect()
    }

    pub fn alpha_jet(&self, m: usize, j: &MultiIndex) -> Result<Expr> {
        self.0.alpha.get(&(m, j.clone())).map(Expr::sym).ok_or_else(|| Error::OrderOverflow {
            symbol: self.0.gauge.get(m).cloned().unwrap_or_default(),
            var: self.suffix(j),
            max: if self.0.gauge_jets { self.0.order } else { 0 },
        })
    }

    /// Letters naming a multi-index, e.g. "xy" for (1,1).
    pub fn suffix(&self, j: &MultiIndex) -> String {
        let mut s = String::new();
        for (i, &c) in j.counts().iter().enumerate() {
            for _ in 0..c {
                s.push_str(&self.0.independent[i]);
            }
        }
        s
    }

    pub fn lookup(&self, name: &str) -> Option<&Symbol> {
        self.0.by_name.get(name)
    }

    pub fn parse(&self, text: &str) -> Result<Expr> {
        parse_expr(text, self)
    }

    /// Splits a jet suffix into independent-variable indices, longest name first.
    fn split_suffix(&self, s: &str) -> Option<Vec<usize>> {
        let mut names: Vec<(usize, &String)> = self.0.independent.iter().enumerate().collect();
        names.sort_by_key(|(_, n)| std::cmp::Reverse(n.len()));
        let mut out = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let (i, n) = names.iter().find(|(_, n)| rest.starts_with(n.as_str()))?;
            out.push(*i);
            rest = &rest[n.len()..];
        }
        Some(out)
    }

    /// Whether a gauge-free expression uses only jets of order ≤ `k`.
    pub fn max_jet_order(e: &Expr) -> usize {
        e.symbols().iter().filter(|s| s.is_dependent()).map(|s| s.order()).max().unwrap_or(0)
    }
}

impl Resolver for JetContext {
    fn resolve(&self, name: &str) -> Result<Symbol> {
        if let Some(s) = self.0.by_name.get(name) {
            return Ok(s.clone());
        }
        if let Some((base, suffix)) = name.split_once('_') {
            let known = self.0.dependent.iter().chain(&self.0.gauge).any(|b| b == base);
            if known {
                let bad = |reason: String| Err(Error::InvalidName { name: name.to_string(), reason });
                let Some(dirs) = self.split_suffix(suffix) else {
                    return bad(format!("`{suffix}` is not a sequence of independent variable names"));
                };
                if dirs.windows(2).any(|w| w[0] > w[1]) {
                    return bad("derivative letters must follow the declaration order of independent variables".into());
                }
                if self.0.gauge.iter().any(|b| b == base) && !self.0.gauge_jets {
                    return bad("gauge variables carry no jets in this context".into());
                }
                return bad(format!("jet order {} exceeds the context order {}", dirs.len(), self.0.order));
            }
        }
        Err(Error::UnknownIdentifier(name.to_string()))
    }
}

/// D_i e; gauge coordinates contribute nothing.
pub fn total_derivative(ctx: &JetContext, i: usize, e: &Expr) -> Result<Expr> {
    let xi = ctx.x_symbol(i);
    let mut terms = vec![e.pdiff(xi)];
    for s in e.symbols() {
        if let CoordKind::Dependent { field, jet } = s.kind() {
            let next = ctx.u_symbol(*field, &jet.append(i)).map_err(|_| Error::OrderOverflow {
                symbol: s.name().to_string(),
                var: ctx.independent_names()[i].clone(),
                max: ctx.order(),
            })?;
            terms.push(Expr::sym(next) * e.pdiff(&s));
        }
    }
    Ok(Expr::add(terms))
}

/// D_J e, applying D_1 first, then D_2, and so on.
pub fn total_derivative_multi(ctx: &JetContext, j: &MultiIndex, e: &Expr) -> Result<Expr> {
    let mut acc = e.clone();
    for (i, &c) in j.counts().iter().enumerate() {
        for _ in 0..c {
            acc = total_derivative(ctx, i, &acc)?;
        }
    }
    Ok(acc)
}

/// 𝒟_i e = D_i e + Σ α^m_{J,i} ∂e/∂α^m_J.
pub fn augmented_total_derivative(ctx: &JetContext, i: usize, e: &Expr) -> Result<Expr> {
    let mut terms = vec![total_derivative(ctx, i, e)?];
    for s in e.symbols() {
        if let CoordKind::Gauge { index, jet } = s.kind() {
            let next = ctx.alpha_jet(*index, &jet.append(i)).map_err(|_| Error::OrderOverflow {
                symbol: s.name().to_string(),
                var: ctx.independent_names()[i].clone(),
                max: if ctx.has_gauge_jets() { ctx.order() } else { 0 },
            })?;
            terms.push(next * e.pdiff(&s));
        }
    }
    Ok(Expr::add(terms))
}
