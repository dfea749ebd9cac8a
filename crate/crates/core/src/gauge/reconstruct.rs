use num_rational::BigRational;

use super::poly::Poly;
use super::{complete_invariant, k_gamma, k_gamma_inverse, project, GaugeSection, Restrict};
use crate::error::{Error, Result};
use crate::expr::oracle::{Oracle, Verdict};
use crate::expr::{CoordKind, Expr};
use crate::jet::{total_derivative, JetContext, MultiIndex};
use crate::matlie::{LieRepresentation, MatrixExpr};
use crate::prolong::{mu_prolong_with, std_prolong, EvoField, Mismatch, MuForm, ProlongedField};

/// Checks D_i K_γ = −Λ_i K_γ for every direction, on shared sample points.
pub fn verify_k(mu: &MuForm, k: &MatrixExpr, oracle: &Oracle) -> Result<Verdict> {
    let ctx = mu.ctx();
    if k.dim() != mu.lambda(0).dim() {
        return Err(Error::Dimension(format!("{}x{} candidate for a {}-dimensional form", k.dim(), k.dim(), mu.lambda(0).dim())));
    }
    let mut pairs = Vec::new();
    for i in 0..ctx.num_independent() {
        let lhs = k.total_derivative(ctx, i)?;
        let rhs = mu.lambda(i).mul(k)?.neg();
        pairs.extend(lhs.entries().iter().cloned().zip(rhs.entries().iter().cloned()));
    }
    Ok(oracle.all_equal(&pairs))
}

/// F with D_x F = e, for e polynomial and linear in first jets, via the
/// radial homotopy operator on the closed one-form c_0 dx + Σ c_a du^a.
fn antiderivative(ctx: &JetContext, e: &Expr, oracle: &Oracle) -> Result<Expr> {
    if e.is_zero() {
        return Ok(Expr::zero());
    }
    let unsupported = || Error::Unsupported(format!("no polynomial antiderivative for `{e}`"));
    let poly = Poly::from_expr(e).ok_or_else(unsupported)?;
    let zero = MultiIndex::zero(1);
    let mut terms = Vec::new();
    for (mono, c) in &poly.0 {
        let mut jet = None;
        let mut rest = Vec::new();
        let mut degree = 0u32;
        for (s, &p) in mono {
            match s.kind() {
                CoordKind::Dependent { field, jet: j } if j.order() == 1 => {
                    if p != 1 || jet.is_some() {
                        return Err(unsupported());
                    }
                    jet = Some(*field);
                }
                CoordKind::Dependent { jet: j, .. } if j.order() > 1 => return Err(unsupported()),
                CoordKind::Gauge { .. } => return Err(unsupported()),
                _ => {
                    degree += p;
                    rest.push(Expr::sym(s).powi(p as i64));
                }
            }
        }
        let along = match jet {
            Some(a) => ctx.u_jet(a, &zero)?,
            None => ctx.x(0),
        };
        rest.push(along);
        rest.push(Expr::rational(c / BigRational::from_integer((degree as i64 + 1).into())));
        terms.push(Expr::mul(rest));
    }
    let f = Expr::add(terms);
    if !oracle.equal(&total_derivative(ctx, 0, &f)?, e).holds() {
        return Err(Error::Unsupported(format!("`{e}` is not a total x-derivative")));
    }
    Ok(f)
}

/// A square root of `c` (up to sign) read off from the entries of P.
fn root_from_entries(p: &MatrixExpr, c: &Expr, oracle: &Oracle) -> Expr {
    p.entries()
        .iter()
        .filter(|e| !e.is_zero())
        .find(|e| oracle.equal(&e.powi(2), c).holds())
        .cloned()
        .unwrap_or_else(|| c.sqrt())
}

/// exp(−P) when P² = 0 or P² is a scalar multiple of I.
fn exp_neg(p: &MatrixExpr, oracle: &Oracle) -> Result<MatrixExpr> {
    let n = p.dim();
    let id = MatrixExpr::identity(n);
    let p2 = p.mul(p)?;
    if p2.is_zero() {
        return id.sub(p);
    }
    let c = p2.get(0, 0).clone();
    let scalar = (0..n).all(|i| (0..n).all(|j| if i == j { p2.get(i, j) == &c } else { p2.get(i, j).is_zero() }));
    if !scalar {
        return Err(Error::Unsupported("exp(-P) needs P^2 to be scalar".into()));
    }
    if c.is_negative_form() {
        let w = root_from_entries(p, &-&c, oracle);
        id.scale(&w.cos()).sub(&p.scale(&(w.sin() / &w)))
    } else {
        let w = root_from_entries(p, &c, oracle);
        let (ep, em) = (w.exp(), (-&w).exp());
        id.scale(&((&ep + &em) / 2)).sub(&p.scale(&((&ep - &em) / (Expr::int(2) * &w))))
    }
}

/// K_γ = exp(−P) with D_x P = Λ, for one independent variable and Λ
/// commuting with P.
pub fn reconstruct_k_abelian(mu: &MuForm, oracle: &Oracle) -> Result<MatrixExpr> {
    let ctx = mu.ctx();
    if ctx.num_independent() != 1 {
        return Err(Error::Unsupported("reconstruction needs a single independent variable".into()));
    }
    let lambda = mu.lambda(0);
    let p = lambda.try_map(|e| antiderivative(ctx, e, oracle))?;
    if !lambda.commutator(&p)?.equal(&MatrixExpr::zeros(p.dim()), oracle).holds() {
        return Err(Error::Unsupported("Λ does not commute with its antiderivative; only candidate verification is available".into()));
    }
    let k = exp_neg(&p, oracle)?;
    if !verify_k(mu, &k, oracle)?.holds() {
        return Err(Error::Unsupported("reconstructed K_gamma fails D K = -Λ K".into()));
    }
    Ok(k)
}

/// Augmented field X with Q = K(α)K_γ⁻¹Q_W and invariant P, with its standard
/// prolongation pushed back down for comparison with the μ-prolongation of W.
#[derive(Debug, Clone)]
pub struct Lift {
    pub field: EvoField,
    pub prolonged: ProlongedField,
    pub routed: ProlongedField,
    pub expected: ProlongedField,
    pub mismatch: Option<Mismatch>,
}

impl Lift {
    pub fn holds(&self) -> bool {
        self.mismatch.is_none()
    }
}

pub fn theorem2_lift(
    w: &EvoField,
    mu: &MuForm,
    k_g: &MatrixExpr,
    rep: &LieRepresentation,
    gamma: &GaugeSection,
    k: usize,
    oracle: &Oracle,
) -> Result<Lift> {
    if !verify_k(mu, k_g, oracle)?.holds() {
        return Err(Error::Invalid("K_gamma does not satisfy D_i K = -Λ_i K".into()));
    }
    if !k_g.equal(&k_gamma(rep, gamma)?, oracle).holds() {
        return Err(Error::Invalid("K_gamma is not the representation evaluated on the section".into()));
    }
    let ctx = w.ctx();
    let q = rep.exp_rep(&ctx.alphas())?.mul(&k_gamma_inverse(rep, gamma)?)?.apply(w.q())?;
    let field = complete_invariant(&EvoField::vertical(ctx, q)?, gamma)?;
    let prolonged = std_prolong(&field, k)?;
    let routed = project(&prolonged.restricted(gamma))?;
    let expected = mu_prolong_with(&w.without_p(), mu, k, oracle, true)?;
    let mismatch = routed.compare(&expected, oracle);
    Ok(Lift { field, prolonged, routed, expected, mismatch })
}
