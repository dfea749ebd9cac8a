use super::{section_r_matrices, GaugeSection, Restrict};
use crate::error::{Error, Result};
use crate::expr::oracle::{Oracle, Verdict};
use crate::expr::Expr;
use crate::jet::{augmented_total_derivative, total_derivative, JetContext};
use crate::matlie::{LieRepresentation, MatrixExpr};

/// Verdicts for gauge fixing against the augmented total derivative 𝒟_i = D_i + Z_i.
#[derive(Debug, Clone, PartialEq)]
pub struct AppendixReport {
    /// δ_γ(𝒟_i F) = D_i(δ_γ F), one verdict per direction.
    pub commutes: Vec<Verdict>,
    /// δ_γ(D_i F) = D_i(δ_γ F) − δ_γ(Z_i F), one verdict per direction.
    pub defect: Vec<Verdict>,
}

impl AppendixReport {
    pub fn holds(&self) -> bool {
        self.commutes.iter().chain(&self.defect).all(Verdict::holds)
    }
}

fn require_gauge_jets(ctx: &JetContext) -> Result<()> {
    if !ctx.has_gauge_jets() {
        return Err(Error::Invalid("the check needs a context whose gauge variables carry jets".into()));
    }
    Ok(())
}

fn z(ctx: &JetContext, i: usize, f: &Expr) -> Result<Expr> {
    Ok(augmented_total_derivative(ctx, i, f)? - total_derivative(ctx, i, f)?)
}

pub fn appendix_a1_check(f: &Expr, gamma: &GaugeSection, oracle: &Oracle) -> Result<AppendixReport> {
    let ctx = gamma.ctx();
    require_gauge_jets(ctx)?;
    let fixed = f.restricted(gamma);
    let mut commutes = Vec::new();
    let mut defect = Vec::new();
    for i in 0..ctx.num_independent() {
        let d_fixed = total_derivative(ctx, i, &fixed)?;
        commutes.push(oracle.equal(&augmented_total_derivative(ctx, i, f)?.restricted(gamma), &d_fixed));
        let rhs = d_fixed - z(ctx, i, f)?.restricted(gamma);
        defect.push(oracle.equal(&total_derivative(ctx, i, f)?.restricted(gamma), &rhs));
    }
    Ok(AppendixReport { commutes, defect })
}

/// δ_γ[(Z_i K)K⁻¹] = R_i for K = K(α), one verdict per direction.
pub fn z_matrix_check(rep: &LieRepresentation, gamma: &GaugeSection, oracle: &Oracle) -> Result<Vec<Verdict>> {
    let ctx = gamma.ctx();
    require_gauge_jets(ctx)?;
    let alphas = ctx.alphas();
    let k = rep.exp_rep(&alphas)?;
    let k_inv = rep.exp_rep(&alphas.iter().map(|a| -a).collect::<Vec<_>>())?;
    let r = section_r_matrices(rep, gamma)?;
    (0..ctx.num_independent())
        .map(|i| {
            let zk = k.try_map(|e| z(ctx, i, e))?;
            let lhs: MatrixExpr = zk.mul(&k_inv)?.restricted(gamma);
            Ok(lhs.equal(&r[i], oracle))
        })
        .collect()
}
