//! Symmetry and μ-symmetry determining checks for equations in solved form
//! u^a_J = F_a, where no right side contains a leading jet.
//!
//! The residual of an equation is η^a_J − Σ (∂F_a/∂u^b_L) η^b_L. It is
//! evaluated on solutions by replacing each leading jet with its right side
//! and each first derivative of a leading jet with the total derivative of
//! that right side.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::expr::oracle::{Oracle, Verdict};
use crate::expr::{CoordKind, Expr, Symbol};
use crate::jet::{total_derivative, JetContext};
use crate::prolong::{mu_prolong_with, EvoField, MuForm};

#[derive(Debug, Clone)]
pub struct Equation {
    ctx: JetContext,
    order: usize,
    lines: Vec<(Symbol, Expr)>,
}

impl Equation {
    pub fn new(ctx: &JetContext, lines: Vec<(Expr, Expr)>) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::Invalid("an equation needs at least one line".into()));
        }
        let mut out: Vec<(Symbol, Expr)> = Vec::new();
        for (lhs, rhs) in lines {
            let s = lhs
                .as_symbol()
                .filter(|s| s.is_dependent())
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("left side `{lhs}` must be a single jet coordinate")))?;
            if out.iter().any(|(t, _)| t == &s) {
                return Err(Error::Invalid(format!("leading jet `{}` appears twice", s.name())));
            }
            out.push((s, rhs));
        }
        let order = out[0].0.order();
        if let Some((s, _)) = out.iter().find(|(s, _)| s.order() != order) {
            return Err(Error::Invalid(format!("leading jet `{}` does not have order {order}", s.name())));
        }
        for (s, rhs) in &out {
            if let Some(t) = rhs.symbols().into_iter().find(|t| out.iter().any(|(l, _)| l == t)) {
                return Err(Error::Invalid(format!("right side of `{}` contains the leading jet `{}`", s.name(), t.name())));
            }
            if let Some(t) = rhs.symbols().into_iter().find(|t| t.is_gauge() || (t.is_dependent() && t.order() > order)) {
                return Err(Error::Invalid(format!("right side of `{}` may not contain `{}`", s.name(), t.name())));
            }
        }
        Ok(Equation { ctx: ctx.clone(), order, lines: out })
    }

    /// Parses lines of the form `u_xx = u*u_x`.
    pub fn parse(ctx: &JetContext, lines: &[&str]) -> Result<Self> {
        let mut parsed = Vec::new();
        for l in lines {
            let (lhs, rhs) = l.split_once('=').ok_or_else(|| Error::Invalid(format!("equation line `{l}` has no `=`")))?;
            parsed.push((ctx.parse(lhs.trim())?, ctx.parse(rhs.trim())?));
        }
        Equation::new(ctx, parsed)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn lines(&self) -> &[(Symbol, Expr)] {
        &self.lines
    }

    /// Substitution restricting to the solution manifold and its first prolongation.
    fn on_solutions(&self) -> Result<HashMap<Symbol, Expr>> {
        let ctx = &self.ctx;
        let mut b: HashMap<Symbol, Expr> = self.lines.iter().cloned().collect();
        let mut derived = Vec::new();
        for (s, rhs) in &self.lines {
            let CoordKind::Dependent { field, jet } = s.kind() else { unreachable!() };
            for i in 0..ctx.num_independent() {
                let Ok(next) = ctx.u_symbol(*field, &jet.append(i)) else { continue };
                if b.contains_key(next) || derived.iter().any(|(t, _)| t == next) {
                    continue;
                }
                if let Ok(d) = total_derivative(ctx, i, rhs) {
                    derived.push((next.clone(), d));
                }
            }
        }
        let first = b.clone();
        for (s, d) in derived {
            b.insert(s, d.substitute(&first));
        }
        Ok(b)
    }
}

/// Residuals restricted to solutions, one per equation line.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub residuals: Vec<Expr>,
    pub verdicts: Vec<Verdict>,
}

impl SymmetryReport {
    pub fn holds(&self) -> bool {
        self.verdicts.iter().all(Verdict::holds)
    }
}

/// Determining check for W under the μ-prolongation of order k.
pub fn mu_symmetry_check(eq: &Equation, w: &EvoField, mu: &MuForm, k: usize, oracle: &Oracle) -> Result<SymmetryReport> {
    if eq.order() != k {
        return Err(Error::Invalid(format!("equation has order {}, check requested at order {k}", eq.order())));
    }
    if w.q().iter().flat_map(|e| e.symbols()).any(|s| s.is_gauge()) {
        return Err(Error::Invalid("the field must be gauge-free".into()));
    }
    let y = mu_prolong_with(&w.without_p(), mu, k, oracle, true)?;
    let sub = eq.on_solutions()?;
    let mut residuals = Vec::new();
    let mut verdicts = Vec::new();
    for (s, rhs) in eq.lines() {
        let CoordKind::Dependent { field, jet } = s.kind() else { unreachable!() };
        let mut terms = vec![y.get(*field, jet).clone()];
        for t in rhs.symbols() {
            if let CoordKind::Dependent { field: b, jet: l } = t.kind() {
                terms.push(-(rhs.pdiff(&t) * y.get(*b, l)));
            }
        }
        let r = Expr::add(terms).substitute(&sub);
        verdicts.push(oracle.is_zero(&r));
        residuals.push(r);
    }
    Ok(SymmetryReport { residuals, verdicts })
}

/// Classical Lie symmetry check: the μ = 0 case.
pub fn symmetry_check(eq: &Equation, w: &EvoField, k: usize, oracle: &Oracle) -> Result<SymmetryReport> {
    mu_symmetry_check(eq, w, &MuForm::zero(w.ctx()), k, oracle)
}
