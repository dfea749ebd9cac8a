//! Closed-form Λ for the real four-dimensional su(2) representation.
//!
//! With ω = |A|, Λ_i = cos²ω M₁ + sin²ω M₂ + sinω cosω M₃ where
//! M₁ = ω⁻¹D_iω 𝓛, M₂ = ω⁻²𝓜 + ω⁻¹D_iω 𝓛 and M₃ = −ω⁻²D_iω 𝓛 + ω⁻¹D_i𝓛.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{total_derivative, JetContext};
use crate::matlie::MatrixExpr;

fn check(a: &[Expr]) -> Result<()> {
    if a.len() != 3 {
        return Err(Error::Dimension(format!("su(2) sections have 3 components, got {}", a.len())));
    }
    Ok(())
}

/// 𝓛(A), linear in the section components.
pub fn script_l(a: &[Expr]) -> Result<MatrixExpr> {
    check(a)?;
    let (a1, a2, a3) = (&a[0], &a[1], &a[2]);
    let z = Expr::zero();
    MatrixExpr::from_rows(vec![
        vec![z.clone(), -a1, -a3, -a2],
        vec![a1.clone(), z.clone(), -a2, a3.clone()],
        vec![a3.clone(), a2.clone(), z.clone(), -a1],
        vec![a2.clone(), -a3, a1.clone(), z],
    ])
}

/// Skew matrix 𝓜 built from the products A_p D_i A_q.
pub fn script_m(ctx: &JetContext, i: usize, a: &[Expr]) -> Result<MatrixExpr> {
    check(a)?;
    let d = a.iter().map(|e| total_derivative(ctx, i, e)).collect::<Result<Vec<_>>>()?;
    let w = |p: usize, q: usize| &a[p] * &d[q] - &a[q] * &d[p];
    let upper = [
        (0, 1, w(2, 1)),
        (0, 2, w(1, 0)),
        (0, 3, w(0, 2)),
        (1, 2, w(0, 2)),
        (1, 3, w(0, 1)),
        (2, 3, w(2, 1)),
    ];
    let mut m = MatrixExpr::zeros(4);
    for (r, c, e) in upper {
        m.set(c, r, -&e);
        m.set(r, c, e);
    }
    Ok(m)
}

/// Λ_i from the decomposition above.
pub fn lambda_decomposition(ctx: &JetContext, i: usize, a: &[Expr]) -> Result<MatrixExpr> {
    let l = script_l(a)?;
    let mm = script_m(ctx, i, a)?;
    let w2 = Expr::add(a.iter().map(|e| e.powi(2)).collect());
    let w = w2.sqrt();
    let dw = total_derivative(ctx, i, &w)?;
    let dl = l.total_derivative(ctx, i)?;
    let m1 = l.scale(&(&dw / &w));
    let m2 = mm.scale(&w2.recip()).add(&m1)?;
    let m3 = l.scale(&-(&dw / &w2)).add(&dl.scale(&w.recip()))?;
    let (c, s) = (w.cos(), w.sin());
    m1.scale(&c.powi(2)).add(&m2.scale(&s.powi(2)))?.add(&m3.scale(&(s * c)))
}
