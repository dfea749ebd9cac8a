use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::MatrixExpr;
use crate::error::{Error, Result};
use crate::expr::{CoordKind, Env, Expr, Symbol};
use crate::jet::MultiIndex;

/// User-supplied closed form for exp(Σ α_m L_m).
pub type ExpFn = Arc<dyn Fn(&[Expr]) -> Result<MatrixExpr> + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Nilpotent2,
    LowerNilpotent2,
    So2,
    Su2Real4,
    So3,
    /// Generators with L_i L_j = 0 for all i, j.
    Nilpotent(String),
    Custom(String),
}

impl Family {
    pub fn tag(&self) -> &str {
        match self {
            Family::Nilpotent2 => "nilpotent-2",
            Family::LowerNilpotent2 => "lower-nilpotent-2",
            Family::So2 => "so2",
            Family::Su2Real4 => "su2-real-4",
            Family::So3 => "so3",
            Family::Nilpotent(_) => "nilpotent",
            Family::Custom(_) => "custom",
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, Family::Nilpotent2 | Family::LowerNilpotent2 | Family::So2 | Family::Nilpotent(_))
    }
}

/// A matrix Lie algebra given by generators, with its exponential map.
#[derive(Clone)]
pub struct LieRepresentation {
    family: Family,
    generators: Vec<MatrixExpr>,
    exp: Option<ExpFn>,
}

impl fmt::Debug for LieRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LieRepresentation")
            .field("family", &self.family)
            .field("generators", &self.generators)
            .finish()
    }
}

impl LieRepresentation {
    fn builtin(family: Family, generators: Vec<MatrixExpr>) -> Self {
        LieRepresentation { family, generators, exp: None }
    }

    pub fn nilpotent2() -> Self {
        Self::builtin(Family::Nilpotent2, vec![MatrixExpr::from_ints(&[&[0, 1], &[0, 0]])])
    }

    pub fn lower_nilpotent2() -> Self {
        Self::builtin(Family::LowerNilpotent2, vec![MatrixExpr::from_ints(&[&[0, 0], &[1, 0]])])
    }

    pub fn so2() -> Self {
        Self::builtin(Family::So2, vec![MatrixExpr::from_ints(&[&[0, -1], &[1, 0]])])
    }

    pub fn su2_real4() -> Self {
        Self::builtin(
            Family::Su2Real4,
            vec![
                MatrixExpr::from_ints(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]),
                MatrixExpr::from_ints(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[-1, 0, 0, 0]]),
                MatrixExpr::from_ints(&[&[0, 0, 1, 0], &[0, 0, 0, -1], &[-1, 0, 0, 0], &[0, 1, 0, 0]]),
            ],
        )
    }

    pub fn so3() -> Self {
        Self::builtin(
            Family::So3,
            vec![
                MatrixExpr::from_ints(&[&[0, 0, 0], &[0, 0, -1], &[0, 1, 0]]),
                MatrixExpr::from_ints(&[&[0, 0, 1], &[0, 0, 0], &[-1, 0, 0]]),
                MatrixExpr::from_ints(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]]),
            ],
        )
    }

    /// Built-in family by tag.
    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "nilpotent-2" => Ok(Self::nilpotent2()),
            "lower-nilpotent-2" => Ok(Self::lower_nilpotent2()),
            "so2" => Ok(Self::so2()),
            "su2-real-4" => Ok(Self::su2_real4()),
            "so3" => Ok(Self::so3()),
            _ => Err(Error::Invalid(format!("unknown representation `{tag}`"))),
        }
    }

    pub fn builtin_tags() -> &'static [&'static str] {
        &["nilpotent-2", "lower-nilpotent-2", "so2", "su2-real-4", "so3"]
    }

    fn check_generators(generators: &[MatrixExpr]) -> Result<usize> {
        let d = generators.first().ok_or_else(|| Error::Invalid("no generators".into()))?.dim();
        if generators.iter().any(|g| g.dim() != d) {
            return Err(Error::Dimension("generators differ in size".into()));
        }
        if generators.iter().flat_map(|g| g.entries()).any(|e| !e.is_constant()) {
            return Err(Error::Invalid("generators must be constant matrices".into()));
        }
        Ok(d)
    }

    /// Nilpotent family; every product L_i L_j must vanish so exp is I + Σ α L.
    pub fn nilpotent(name: &str, generators: Vec<MatrixExpr>) -> Result<Self> {
        Self::check_generators(&generators)?;
        for a in &generators {
            for b in &generators {
                if !a.mul(b)?.is_zero() {
                    return Err(Error::Invalid("generators are not jointly square-zero".into()));
                }
            }
        }
        Ok(Self::builtin(Family::Nilpotent(name.to_string()), generators))
    }

    /// Arbitrary generators with a caller-supplied exponential.
    pub fn custom(name: &str, generators: Vec<MatrixExpr>, exp: ExpFn) -> Result<Self> {
        Self::check_generators(&generators)?;
        Ok(LieRepresentation { family: Family::Custom(name.to_string()), generators, exp: Some(exp) })
    }

    /// Custom family whose exponential is a matrix written in `params`.
    pub fn custom_closed_form(name: &str, generators: Vec<MatrixExpr>, params: Vec<Symbol>, k: MatrixExpr) -> Result<Self> {
        let d = Self::check_generators(&generators)?;
        if params.len() != generators.len() {
            return Err(Error::Dimension(format!("{} parameters for {} generators", params.len(), generators.len())));
        }
        if k.dim() != d {
            return Err(Error::Dimension("exponential has the wrong size".into()));
        }
        let exp: ExpFn = Arc::new(move |alpha: &[Expr]| {
            let b: HashMap<Symbol, Expr> = params.iter().cloned().zip(alpha.iter().cloned()).collect();
            Ok(k.substitute(&b))
        });
        Self::custom(name, generators, exp)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn tag(&self) -> &str {
        self.family.tag()
    }

    /// Matrix size d.
    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    /// Number of generators r.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[MatrixExpr] {
        &self.generators
    }

    fn check_alpha(&self, n: usize) -> Result<()> {
        if n != self.rank() {
            return Err(Error::Dimension(format!("{n} gauge parameters for a rank-{} algebra", self.rank())));
        }
        Ok(())
    }

    /// Σ α_m L_m.
    pub fn generic(&self, alpha: &[Expr]) -> Result<MatrixExpr> {
        self.check_alpha(alpha.len())?;
        let mut acc = MatrixExpr::zeros(self.dim());
        for (a, g) in alpha.iter().zip(&self.generators) {
            acc = acc.add(&g.scale(a))?;
        }
        Ok(acc)
    }

    /// Closed-form K(α) = exp(Σ α_m L_m).
    pub fn exp_rep(&self, alpha: &[Expr]) -> Result<MatrixExpr> {
        self.check_alpha(alpha.len())?;
        let d = self.dim();
        if let Some(f) = &self.exp {
            return f(alpha);
        }
        if alpha.iter().all(Expr::is_zero) {
            return Ok(MatrixExpr::identity(d));
        }
        let l = self.generic(alpha)?;
        match self.family {
            Family::Nilpotent2 | Family::LowerNilpotent2 | Family::Nilpotent(_) => MatrixExpr::identity(d).add(&l),
            Family::So2 => {
                let (c, s) = (alpha[0].cos(), alpha[0].sin());
                MatrixExpr::from_rows(vec![vec![c.clone(), -&s], vec![s, c]])
            }
            Family::Su2Real4 => {
                let w = norm(alpha);
                Ok(MatrixExpr::identity(d).scale(&w.cos()).add(&l.scale(&(w.sin() / &w)))?)
            }
            Family::So3 => {
                let w2 = Expr::add(alpha.iter().map(|a| a.powi(2)).collect());
                let w = w2.sqrt();
                let l2 = l.mul(&l)?;
                MatrixExpr::identity(d)
                    .add(&l.scale(&(w.sin() / &w)))?
                    .add(&l2.scale(&((Expr::one() - w.cos()) / &w2)))
            }
            Family::Custom(_) => unreachable!("custom families carry an exponential"),
        }
    }

    /// Numeric K(α); falls back to the power series near α = 0 where the
    /// closed forms divide by |α|.
    pub fn exp_numeric(&self, alpha: &[f64]) -> Result<DMatrix<f64>> {
        self.check_alpha(alpha.len())?;
        let small = alpha.iter().map(|a| a * a).sum::<f64>().sqrt() < 1e-8;
        if small && !matches!(self.family, Family::Custom(_)) {
            return exp_series_oracle(self, alpha, 30);
        }
        let params: Vec<Symbol> = (0..alpha.len())
            .map(|m| Symbol::new(format!("a{m}"), CoordKind::Gauge { index: m, jet: MultiIndex::zero(1) }))
            .collect();
        let k = self.exp_rep(&params.iter().map(Expr::sym).collect::<Vec<_>>())?;
        let env: Env = params.into_iter().zip(alpha.iter().copied()).collect();
        to_numeric(&k, &env)
    }
}

/// sqrt(Σ α_m²).
fn norm(alpha: &[Expr]) -> Expr {
    Expr::add(alpha.iter().map(|a| a.powi(2)).collect()).sqrt()
}

pub(crate) fn to_numeric(m: &MatrixExpr, env: &Env) -> Result<DMatrix<f64>> {
    let n = m.dim();
    let vals = m.entries().iter().map(|e| e.eval(env)).collect::<Result<Vec<_>>>()?;
    Ok(DMatrix::from_row_slice(n, n, &vals))
}

/// Σ_{k<terms} (Σ α_m L_m)^k / k!, evaluated in floating point.
pub fn exp_series_oracle(rep: &LieRepresentation, alpha: &[f64], terms: usize) -> Result<DMatrix<f64>> {
    rep.check_alpha(alpha.len())?;
    let d = rep.dim();
    let env = Env::new();
    let mut l = DMatrix::<f64>::zeros(d, d);
    for (a, g) in alpha.iter().zip(rep.generators()) {
        l += to_numeric(g, &env)? * *a;
    }
    let mut term = DMatrix::<f64>::identity(d, d);
    let mut sum = term.clone();
    for k in 1..terms {
        term = &term * &l / k as f64;
        sum += &term;
    }
    Ok(sum)
}

/// The gauged vector field components K(α)·Θ.
pub fn gauged_field_formula(rep: &LieRepresentation, theta: &[Expr], alpha: &[Expr]) -> Result<Vec<Expr>> {
    rep.exp_rep(alpha)?.apply(theta)
}
