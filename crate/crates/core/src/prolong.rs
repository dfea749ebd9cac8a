//! Evolutionary vector fields and their standard and μ-prolongations.
//!
//! A prolongation is stored as a table η^a_J over all multi-indices of order
//! at most k. The standard recursion is η_{J,i} = D_i η_J; the μ-prolongation
//! adds Λ_i η_J.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::oracle::{Oracle, Verdict};
use crate::expr::Expr;
use crate::jet::{total_derivative, JetContext, MultiIndex};
use crate::matlie::MatrixExpr;

fn check_order(ctx: &JetContext, what: &str, items: &[Expr], max: usize) -> Result<()> {
    for e in items {
        if let Some(s) = e.symbols().into_iter().find(|s| s.is_dependent() && s.order() > max) {
            return Err(Error::Invalid(format!(
                "{what} may depend on jets of order at most {max}; found `{}` in context {:?}",
                s.name(),
                ctx.independent_names()
            )));
        }
    }
    Ok(())
}

/// X = Q^a ∂/∂u^a + P^m ∂/∂α^m.
#[derive(Debug, Clone)]
pub struct EvoField {
    ctx: JetContext,
    q: Vec<Expr>,
    p: Vec<Expr>,
}

impl EvoField {
    /// Q may depend on x, u, u_x and α; P is empty or has one entry per gauge variable.
    pub fn new(ctx: &JetContext, q: Vec<Expr>, p: Vec<Expr>) -> Result<Self> {
        if q.len() != ctx.num_dependent() {
            return Err(Error::Dimension(format!("{} components for {} dependent variables", q.len(), ctx.num_dependent())));
        }
        if !p.is_empty() && p.len() != ctx.num_gauge() {
            return Err(Error::Dimension(format!("{} gauge components for {} gauge variables", p.len(), ctx.num_gauge())));
        }
        check_order(ctx, "field components", &q, 1)?;
        check_order(ctx, "gauge components", &p, 1)?;
        Ok(EvoField { ctx: ctx.clone(), q, p })
    }

    pub fn vertical(ctx: &JetContext, q: Vec<Expr>) -> Result<Self> {
        EvoField::new(ctx, q, Vec::new())
    }

    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    pub fn q(&self) -> &[Expr] {
        &self.q
    }

    pub fn p(&self) -> &[Expr] {
        &self.p
    }

    pub fn without_p(&self) -> EvoField {
        EvoField { ctx: self.ctx.clone(), q: self.q.clone(), p: Vec::new() }
    }

    pub fn with_p(&self, p: Vec<Expr>) -> Result<EvoField> {
        EvoField::new(&self.ctx, self.q.clone(), p)
    }

    /// Applies `f` to every component.
    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> EvoField {
        EvoField { ctx: self.ctx.clone(), q: self.q.iter().map(&f).collect(), p: self.p.iter().map(&f).collect() }
    }

    pub fn add(&self, o: &EvoField) -> Result<EvoField> {
        if self.q.len() != o.q.len() || self.p.len() != o.p.len() {
            return Err(Error::Dimension("fields have different shapes".into()));
        }
        let sum = |a: &[Expr], b: &[Expr]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(EvoField { ctx: self.ctx.clone(), q: sum(&self.q, &o.q), p: sum(&self.p, &o.p) })
    }
}

impl fmt::Display for EvoField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (e, n) in self.q.iter().zip(self.ctx.dependent_names()) {
            if !e.is_zero() {
                parts.push(format!("({e})*d/d{n}"));
            }
        }
        for (e, n) in self.p.iter().zip(self.ctx.gauge_names()) {
            if !e.is_zero() {
                parts.push(format!("({e})*d/d{n}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Q^a = φ^a − Σ_i u^a_i ξ^i for the field ξ^i ∂_{x^i} + φ^a ∂_{u^a}.
pub fn evolutionary(xi: &[Expr], phi: &[Expr], ctx: &JetContext) -> Result<EvoField> {
    let m = ctx.num_independent();
    if xi.len() != m {
        return Err(Error::Dimension(format!("{} coefficients for {m} independent variables", xi.len())));
    }
    check_order(ctx, "point-field coefficients", xi, 0)?;
    check_order(ctx, "point-field coefficients", phi, 0)?;
    let mut q = Vec::with_capacity(phi.len());
    for (a, f) in phi.iter().enumerate() {
        let mut terms = vec![f.clone()];
        for (i, x) in xi.iter().enumerate() {
            terms.push(-(ctx.u_jet(a, &MultiIndex::unit(m, i))? * x));
        }
        q.push(Expr::add(terms));
    }
    EvoField::vertical(ctx, q)
}

/// Matrix-valued horizontal one-form μ = Λ_i dx^i.
#[derive(Debug, Clone)]
pub struct MuForm {
    ctx: JetContext,
    lambdas: Vec<MatrixExpr>,
}

impl MuForm {
    pub fn new(ctx: &JetContext, lambdas: Vec<MatrixExpr>) -> Result<Self> {
        if lambdas.len() != ctx.num_independent() {
            return Err(Error::Dimension(format!(
                "{} matrices for {} independent variables",
                lambdas.len(),
                ctx.num_independent()
            )));
        }
        let n = ctx.num_dependent();
        if let Some(l) = lambdas.iter().find(|l| l.dim() != n) {
            return Err(Error::Dimension(format!("{}x{} matrix for {n} dependent variables", l.dim(), l.dim())));
        }
        Ok(MuForm { ctx: ctx.clone(), lambdas })
    }

    pub fn zero(ctx: &JetContext) -> Self {
        let z = MatrixExpr::zeros(ctx.num_dependent());
        MuForm { ctx: ctx.clone(), lambdas: vec![z; ctx.num_independent()] }
    }

    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    pub fn lambda(&self, i: usize) -> &MatrixExpr {
        &self.lambdas[i]
    }

    pub fn lambdas(&self) -> &[MatrixExpr] {
        &self.lambdas
    }

    pub fn is_zero(&self) -> bool {
        self.lambdas.iter().all(MatrixExpr::is_zero)
    }

    pub fn map(&self, f: impl Fn(&MatrixExpr) -> MatrixExpr) -> MuForm {
        MuForm { ctx: self.ctx.clone(), lambdas: self.lambdas.iter().map(f).collect() }
    }
}

/// Location of the first disagreement between two coefficient tables.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub field: usize,
    pub jet: MultiIndex,
    pub verdict: Verdict,
}

/// Coefficients η^a_J for |J| ≤ k together with the carried gauge components.
#[derive(Debug, Clone)]
pub struct ProlongedField {
    ctx: JetContext,
    order: usize,
    table: BTreeMap<MultiIndex, Vec<Expr>>,
    p: Vec<Expr>,
}

impl ProlongedField {
    /// Builds a table, requiring every (a, J) with |J| ≤ k exactly once.
    pub fn from_table(ctx: &JetContext, order: usize, table: BTreeMap<MultiIndex, Vec<Expr>>, p: Vec<Expr>) -> Result<Self> {
        let n = ctx.num_dependent();
        let expected = MultiIndex::up_to(ctx.num_independent(), order);
        if table.len() != expected.len() {
            return Err(Error::Invalid(format!("table has {} entries, expected {}", table.len(), expected.len())));
        }
        for j in &expected {
            match table.get(j) {
                Some(v) if v.len() == n => {}
                Some(_) => return Err(Error::Dimension(format!("row {} has the wrong length", ctx.suffix(j)))),
                None => return Err(Error::Invalid(format!("missing row for index `{}`", ctx.suffix(j)))),
            }
        }
        Ok(ProlongedField { ctx: ctx.clone(), order, table, p })
    }

    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn p(&self) -> &[Expr] {
        &self.p
    }

    /// η_J as a vector over the dependent variables.
    pub fn row(&self, j: &MultiIndex) -> &[Expr] {
        &self.table[j]
    }

    pub fn get(&self, a: usize, j: &MultiIndex) -> &Expr {
        &self.table[j][a]
    }

    /// Rows ordered by increasing |J|, then as produced by `MultiIndex::up_to`.
    pub fn ordered_rows(&self) -> Vec<(MultiIndex, &[Expr])> {
        MultiIndex::up_to(self.ctx.num_independent(), self.order)
            .into_iter()
            .map(|j| {
                let r = self.table[&j].as_slice();
                (j, r)
            })
            .collect()
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> ProlongedField {
        ProlongedField {
            ctx: self.ctx.clone(),
            order: self.order,
            table: self.table.iter().map(|(j, v)| (j.clone(), v.iter().map(&f).collect())).collect(),
            p: self.p.iter().map(&f).collect(),
        }
    }

    pub fn without_p(&self) -> ProlongedField {
        ProlongedField { p: Vec::new(), ..self.clone() }
    }

    /// Compares η tables coefficientwise with the oracle, ignoring P.
    pub fn compare(&self, o: &ProlongedField, oracle: &Oracle) -> Option<Mismatch> {
        if self.order != o.order {
            return Some(Mismatch {
                field: 0,
                jet: MultiIndex::zero(self.ctx.num_independent()),
                verdict: Verdict::Unsampleable { attempts: 0, reason: "orders differ".into() },
            });
        }
        for (j, row) in self.ordered_rows() {
            for (a, (x, y)) in row.iter().zip(o.row(&j)).enumerate() {
                let v = oracle.equal(x, y);
                if !v.holds() {
                    return Some(Mismatch { field: a, jet: j, verdict: v });
                }
            }
        }
        None
    }

    /// Structural equality of the η tables.
    pub fn same_table(&self, o: &ProlongedField) -> bool {
        self.order == o.order && self.table == o.table
    }
}

impl fmt::Display for ProlongedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, row) in self.ordered_rows() {
            let label = if j.is_empty() { "eta".to_string() } else { format!("eta_{}", self.ctx.suffix(&j)) };
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "{label} = ({})", cells.join(", "))?;
        }
        if !self.p.is_empty() {
            let cells: Vec<String> = self.p.iter().map(|e| e.to_string()).collect();
            writeln!(f, "P = ({})", cells.join(", "))?;
        }
        Ok(())
    }
}

fn step(ctx: &JetContext, i: usize, prev: &[Expr], mu: Option<&MuForm>) -> Result<Vec<Expr>> {
    let mut next = prev.iter().map(|e| total_derivative(ctx, i, e)).collect::<Result<Vec<_>>>()?;
    if let Some(mu) = mu {
        let l = mu.lambda(i);
        if !l.is_zero() {
            for (n, t) in next.iter_mut().zip(l.apply(prev)?) {
                *n = &*n + &t;
            }
        }
    }
    Ok(next)
}

fn recurse(f: &EvoField, mu: Option<&MuForm>, k: usize) -> Result<BTreeMap<MultiIndex, Vec<Expr>>> {
    let ctx = f.ctx();
    if k > ctx.order() {
        return Err(Error::Invalid(format!("prolongation order {k} exceeds the context order {}", ctx.order())));
    }
    let m = ctx.num_independent();
    let mut table = BTreeMap::new();
    table.insert(MultiIndex::zero(m), f.q().to_vec());
    for j in MultiIndex::up_to(m, k).into_iter().skip(1) {
        let i = j.last_direction().expect("nonempty index");
        let parent = j.remove(i).expect("direction present");
        let row = step(ctx, i, &table[&parent], mu)?;
        table.insert(j, row);
    }
    Ok(table)
}

/// Standard prolongation η_{J,i} = D_i η_J; P is carried verbatim.
pub fn std_prolong(f: &EvoField, k: usize) -> Result<ProlongedField> {
    let table = recurse(f, None, k)?;
    ProlongedField::from_table(f.ctx(), k, table, f.p().to_vec())
}

/// Outcome of the horizontal Maurer-Cartan check.
#[derive(Debug, Clone, PartialEq)]
pub struct McReport {
    pub pairs_checked: usize,
    /// First failing pair (1-based) with the failing entry's verdict.
    pub failure: Option<(usize, usize, Verdict)>,
}

impl McReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }

    pub fn is_vacuous(&self) -> bool {
        self.pairs_checked == 0
    }
}

/// Checks D_iΛ_j − D_jΛ_i + [Λ_i, Λ_j] = 0 for all i < j.
pub fn maurer_cartan_check(mu: &MuForm, oracle: &Oracle) -> Result<McReport> {
    let ctx = mu.ctx();
    let m = ctx.num_independent();
    let mut pairs = 0;
    for i in 0..m {
        for j in i + 1..m {
            pairs += 1;
            let (li, lj) = (mu.lambda(i), mu.lambda(j));
            let lhs = lj.total_derivative(ctx, i)?.sub(&li.total_derivative(ctx, j)?)?.add(&li.commutator(lj)?)?;
            let v = lhs.equal(&MatrixExpr::zeros(lhs.dim()), oracle);
            if !v.holds() {
                return Ok(McReport { pairs_checked: pairs, failure: Some((i + 1, j + 1, v)) });
            }
        }
    }
    Ok(McReport { pairs_checked: pairs, failure: None })
}

/// μ-prolongation with the Maurer-Cartan precondition enforced for m ≥ 2.
pub fn mu_prolong(f: &EvoField, mu: &MuForm, k: usize) -> Result<ProlongedField> {
    mu_prolong_with(f, mu, k, &Oracle::default(), true)
}

/// μ-prolongation without the Maurer-Cartan precondition.
pub fn mu_prolong_unchecked(f: &EvoField, mu: &MuForm, k: usize) -> Result<ProlongedField> {
    mu_prolong_with(f, mu, k, &Oracle::default(), false)
}

/// η_{J,i} = D_i η_J + Λ_i η_J. With `check` set and m ≥ 2, the Maurer-Cartan
/// equation is verified first and path independence is spot-checked on one
/// mixed index per order.
pub fn mu_prolong_with(f: &EvoField, mu: &MuForm, k: usize, oracle: &Oracle, check: bool) -> Result<ProlongedField> {
    if !f.p().is_empty() {
        return Err(Error::Invalid("μ-prolongation takes a field without gauge components".into()));
    }
    if mu.lambdas().first().map(MatrixExpr::dim) != Some(f.q().len()) {
        return Err(Error::Dimension("μ and the field act on different numbers of components".into()));
    }
    let ctx = f.ctx();
    let m = ctx.num_independent();
    if check && m >= 2 {
        if let Some((i, j, _)) = maurer_cartan_check(mu, oracle)?.failure {
            return Err(Error::MaurerCartan { i, j });
        }
    }
    let table = recurse(f, Some(mu), k)?;
    if check && m >= 2 {
        for s in 2..=k {
            let Some(j) = MultiIndex::of_order(m, s).into_iter().find(|j| j.counts().iter().filter(|&&c| c > 0).count() >= 2) else {
                continue;
            };
            let first = (0..m).find(|&i| j.counts()[i] > 0).expect("mixed index");
            let alt = step(ctx, first, &table[&j.remove(first).expect("direction present")], Some(mu))?;
            for (a, (x, y)) in table[&j].iter().zip(&alt).enumerate() {
                if !oracle.equal(x, y).holds() {
                    return Err(Error::Invalid(format!(
                        "μ-prolongation is path dependent at component {} of index `{}`",
                        a + 1,
                        ctx.suffix(&j)
                    )));
                }
            }
        }
    }
    ProlongedField::from_table(ctx, k, table, Vec::new())
}

/// First recursion equation that fails in [`is_mu_prolongation`].
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionFailure {
    pub field: usize,
    pub jet: MultiIndex,
    pub direction: usize,
    pub verdict: Verdict,
}

/// Checks η_{J,i} = D_iη_J + Λ_iη_J for every |J| < k and every direction i.
pub fn is_mu_prolongation(y: &ProlongedField, mu: &MuForm, oracle: &Oracle) -> Result<Option<RecursionFailure>> {
    let ctx = y.ctx();
    let m = ctx.num_independent();
    for j in MultiIndex::up_to(m, y.order().saturating_sub(1)) {
        if j.order() >= y.order() {
            continue;
        }
        for i in 0..m {
            let expected = step(ctx, i, y.row(&j), Some(mu))?;
            let child = j.append(i);
            for (a, (got, want)) in y.row(&child).iter().zip(&expected).enumerate() {
                let v = oracle.equal(got, want);
                if !v.holds() {
                    return Ok(Some(RecursionFailure { field: a, jet: child, direction: i, verdict: v }));
                }
            }
        }
    }
    Ok(None)
}
