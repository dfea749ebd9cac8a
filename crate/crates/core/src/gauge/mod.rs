//! Gauge sections α = A(x, u) and the constructions built on them.

mod appendix;
mod diagram;
mod poly;
mod reconstruct;
pub mod su2;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::expr::oracle::{Oracle, Verdict};
use crate::expr::{Expr, Symbol};
use crate::jet::{total_derivative, total_derivative_multi, JetContext, MultiIndex};
use crate::matlie::{LieRepresentation, MatrixExpr};
use crate::prolong::{EvoField, MuForm, ProlongedField};

pub use crate::prolong::{maurer_cartan_check, McReport};
pub use appendix::{appendix_a1_check, z_matrix_check, AppendixReport};
pub use diagram::{diagram_check, DiagramReport, EdgeVerdict};
pub use reconstruct::{reconstruct_k_abelian, theorem2_lift, verify_k, Lift};

/// A gauge section α^m = A^m(x, u).
#[derive(Debug, Clone)]
pub struct GaugeSection {
    ctx: JetContext,
    a: Vec<Expr>,
}

impl GaugeSection {
    pub fn new(ctx: &JetContext, a: Vec<Expr>) -> Result<Self> {
        if a.len() != ctx.num_gauge() {
            return Err(Error::Dimension(format!("{} section components for {} gauge variables", a.len(), ctx.num_gauge())));
        }
        for e in &a {
            for s in e.symbols() {
                if s.is_gauge() {
                    return Err(Error::Invalid(format!("section components may not contain gauge variable `{}`", s.name())));
                }
                if s.is_dependent() && s.order() > 0 {
                    return Err(Error::Invalid(format!("section components may not contain jet `{}`", s.name())));
                }
            }
        }
        Ok(GaugeSection { ctx: ctx.clone(), a })
    }

    /// The reference section α = 0.
    pub fn trivial(ctx: &JetContext) -> Self {
        GaugeSection { ctx: ctx.clone(), a: vec![Expr::zero(); ctx.num_gauge()] }
    }

    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    pub fn components(&self) -> &[Expr] {
        &self.a
    }

    /// α^m → A^m and, in contexts with gauge jets, α^m_J → D_J A^m.
    pub fn bindings(&self) -> Result<HashMap<Symbol, Expr>> {
        let ctx = &self.ctx;
        let mut b = HashMap::new();
        let jets = if ctx.has_gauge_jets() {
            MultiIndex::up_to(ctx.num_independent(), ctx.order())
        } else {
            vec![MultiIndex::zero(ctx.num_independent())]
        };
        for (m, a) in self.a.iter().enumerate() {
            for j in &jets {
                let s = ctx.alpha_jet(m, j)?.as_symbol().cloned().expect("gauge jets are symbols");
                b.insert(s, total_derivative_multi(ctx, j, a)?);
            }
        }
        Ok(b)
    }

    fn subst(&self) -> HashMap<Symbol, Expr> {
        self.bindings().expect("section jets stay within the context order")
    }
}

/// Objects on which the gauge can be fixed by substituting the section.
pub trait Restrict: Sized {
    fn restricted(&self, gamma: &GaugeSection) -> Self;
}

impl Restrict for Expr {
    fn restricted(&self, gamma: &GaugeSection) -> Self {
        self.substitute(&gamma.subst())
    }
}

impl Restrict for Vec<Expr> {
    fn restricted(&self, gamma: &GaugeSection) -> Self {
        let b = gamma.subst();
        self.iter().map(|e| e.substitute(&b)).collect()
    }
}

impl Restrict for MatrixExpr {
    fn restricted(&self, gamma: &GaugeSection) -> Self {
        self.substitute(&gamma.subst())
    }
}

impl Restrict for EvoField {
    fn restricted(&self, gamma: &GaugeSection) -> Self {
        let b = gamma.subst();
        self.map(|e| e.substitute(&b))
    }
}

/// Substitutes α only; coefficients are never re-derived.
impl Restrict for ProlongedField {
    fn restricted(&self, gamma: &GaugeSection) -> Self {
        let b = gamma.subst();
        self.map(|e| e.substitute(&b))
    }
}

impl Restrict for MuForm {
    fn restricted(&self, gamma: &GaugeSection) -> Self {
        let b = gamma.subst();
        self.map(|l| l.substitute(&b))
    }
}

pub fn restrict<T: Restrict>(gamma: &GaugeSection, obj: &T) -> T {
    obj.restricted(gamma)
}

fn first_gauge_symbol<'a>(items: impl IntoIterator<Item = &'a Expr>) -> Option<String> {
    items.into_iter().flat_map(|e| e.symbols()).find(|s| s.is_gauge()).map(|s| s.name().to_string())
}

/// Objects that can be pushed down from the augmented bundle by dropping P.
pub trait Project: Sized {
    fn projected(&self) -> Result<Self>;
}

impl Project for EvoField {
    fn projected(&self) -> Result<Self> {
        if let Some(s) = first_gauge_symbol(self.q()) {
            return Err(Error::ResidualGauge(s));
        }
        Ok(self.without_p())
    }
}

impl Project for ProlongedField {
    fn projected(&self) -> Result<Self> {
        let rows = self.ordered_rows();
        if let Some(s) = first_gauge_symbol(rows.iter().flat_map(|(_, r)| r.iter())) {
            return Err(Error::ResidualGauge(s));
        }
        Ok(self.without_p())
    }
}

pub fn project<T: Project>(obj: &T) -> Result<T> {
    obj.projected()
}

fn check_rep(rep: &LieRepresentation, gamma: &GaugeSection) -> Result<()> {
    let ctx = gamma.ctx();
    if rep.rank() != ctx.num_gauge() {
        return Err(Error::Dimension(format!("rank-{} algebra with {} gauge variables", rep.rank(), ctx.num_gauge())));
    }
    if rep.dim() != ctx.num_dependent() {
        return Err(Error::Dimension(format!("{}x{} representation on {} dependent variables", rep.dim(), rep.dim(), ctx.num_dependent())));
    }
    Ok(())
}

/// K_γ = K(α) on α = A(x, u).
pub fn k_gamma(rep: &LieRepresentation, gamma: &GaugeSection) -> Result<MatrixExpr> {
    check_rep(rep, gamma)?;
    Ok(rep.exp_rep(&gamma.ctx().alphas())?.restricted(gamma))
}

/// K_γ⁻¹ = K(−α) on α = A(x, u).
pub fn k_gamma_inverse(rep: &LieRepresentation, gamma: &GaugeSection) -> Result<MatrixExpr> {
    check_rep(rep, gamma)?;
    let neg: Vec<Expr> = gamma.ctx().alphas().iter().map(|a| -a).collect();
    Ok(rep.exp_rep(&neg)?.restricted(gamma))
}

fn r_from(ctx: &JetContext, k: &MatrixExpr, k_inv: &MatrixExpr) -> Result<Vec<MatrixExpr>> {
    (0..ctx.num_independent()).map(|i| k.total_derivative(ctx, i)?.mul(k_inv)).collect()
}

/// R_i = (D_i K_γ)·K_γ⁻¹ with the inverse computed symbolically and certified.
pub fn r_matrices(ctx: &JetContext, k: &MatrixExpr, oracle: &Oracle) -> Result<Vec<MatrixExpr>> {
    if let Some(s) = first_gauge_symbol(k.entries()) {
        return Err(Error::ResidualGauge(s));
    }
    let inv = k.inverse_checked(oracle)?;
    r_from(ctx, k, &inv)
}

/// R-matrices of a section, using K(−A) as the inverse of K(A).
pub fn section_r_matrices(rep: &LieRepresentation, gamma: &GaugeSection) -> Result<Vec<MatrixExpr>> {
    r_from(gamma.ctx(), &k_gamma(rep, gamma)?, &k_gamma_inverse(rep, gamma)?)
}

/// Λ_i = −R_i.
pub fn lambda_of_section(rep: &LieRepresentation, gamma: &GaugeSection) -> Result<MuForm> {
    let r = section_r_matrices(rep, gamma)?;
    MuForm::new(gamma.ctx(), r.iter().map(MatrixExpr::neg).collect())
}

/// ∇_i V = D_i V − R_i V.
pub fn nabla(ctx: &JetContext, r: &[MatrixExpr], i: usize, v: &[Expr]) -> Result<Vec<Expr>> {
    let ri = r.get(i).ok_or_else(|| Error::Dimension(format!("no R-matrix for direction {}", i + 1)))?;
    let rv = ri.apply(v)?;
    v.iter().zip(rv).map(|(e, t)| Ok(total_derivative(ctx, i, e)? - t)).collect()
}

/// η_J = ∇_J Q_W, recursing through the twisted derivatives.
pub fn twisted_prolong(w: &EvoField, gamma: &GaugeSection, rep: &LieRepresentation, k: usize) -> Result<ProlongedField> {
    if let Some(s) = first_gauge_symbol(w.q().iter().chain(w.p())) {
        return Err(Error::ResidualGauge(s));
    }
    let ctx = w.ctx();
    if k > ctx.order() {
        return Err(Error::Invalid(format!("prolongation order {k} exceeds the context order {}", ctx.order())));
    }
    let r = section_r_matrices(rep, gamma)?;
    let m = ctx.num_independent();
    let mut table = BTreeMap::new();
    table.insert(MultiIndex::zero(m), w.q().to_vec());
    for j in MultiIndex::up_to(m, k).into_iter().skip(1) {
        let i = j.last_direction().expect("nonempty index");
        let row = nabla(ctx, &r, i, &table[&j.remove(i).expect("direction present")])?;
        table.insert(j, row);
    }
    ProlongedField::from_table(ctx, k, table, Vec::new())
}

/// P^m = Σ_a Q^a ∂A^m/∂u^a, without restricting Q.
pub fn complete_invariant(x0: &EvoField, gamma: &GaugeSection) -> Result<EvoField> {
    let ctx = x0.ctx();
    let us: Vec<Symbol> = (0..ctx.num_dependent())
        .map(|a| ctx.u_symbol(a, &MultiIndex::zero(ctx.num_independent())).cloned())
        .collect::<Result<_>>()?;
    let p = gamma
        .components()
        .iter()
        .map(|a| Expr::add(x0.q().iter().zip(&us).map(|(q, u)| q * a.pdiff(u)).collect()))
        .collect();
    x0.with_p(p)
}

/// Checks δ_γ P^m = Σ_a (∂A^m/∂u^a) δ_γ Q^a; a missing P counts as zero.
pub fn invariance_check(x: &EvoField, gamma: &GaugeSection, oracle: &Oracle) -> Result<Verdict> {
    let ctx = x.ctx();
    let expected = complete_invariant(&x.restricted(gamma).without_p(), gamma)?;
    let p: Vec<Expr> = if x.p().is_empty() { vec![Expr::zero(); ctx.num_gauge()] } else { x.p().to_vec().restricted(gamma) };
    let pairs: Vec<(Expr, Expr)> = p.into_iter().zip(expected.p().iter().cloned()).collect();
    Ok(oracle.all_equal(&pairs))
}
