use super::{complete_invariant, invariance_check, k_gamma, lambda_of_section, project, twisted_prolong, GaugeSection, Restrict};
use crate::error::{Error, Result};
use crate::expr::oracle::{Oracle, Verdict};
use crate::expr::Expr;
use crate::jet::{total_derivative_multi, MultiIndex};
use crate::matlie::{gauged_field_formula, LieRepresentation};
use crate::prolong::{mu_prolong_with, std_prolong, EvoField, Mismatch, MuForm, ProlongedField};

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeVerdict {
    pub name: String,
    /// Identity checked, with the failing coefficient when it fails.
    pub detail: String,
    pub verdict: Verdict,
}

/// Both routes around the restriction/prolongation square with per-edge verdicts.
#[derive(Debug, Clone)]
pub struct DiagramReport {
    pub edges: Vec<EdgeVerdict>,
    pub field: EvoField,
    pub projected: EvoField,
    pub lambda: MuForm,
    pub route_a: ProlongedField,
    pub route_b: ProlongedField,
}

impl DiagramReport {
    pub fn overall(&self) -> bool {
        self.edges.iter().all(|e| e.verdict.holds())
    }

    pub fn first_failure(&self) -> Option<&EdgeVerdict> {
        self.edges.iter().find(|e| !e.verdict.holds())
    }
}

fn table_edge(name: &str, what: &str, a: &ProlongedField, b: &ProlongedField, oracle: &Oracle) -> EdgeVerdict {
    match a.compare(b, oracle) {
        None => EdgeVerdict { name: name.into(), detail: what.into(), verdict: Verdict::Equal },
        Some(Mismatch { field, jet, verdict }) => EdgeVerdict {
            name: name.into(),
            detail: format!("{what}: component {} at index `{}`", field + 1, a.ctx().suffix(&jet)),
            verdict,
        },
    }
}

/// Builds X = K(α)Θ with invariant gauge components and compares
/// route A = project(restrict(std_prolong X)) with
/// route B = mu_prolong(project(restrict X), Λ(γ)).
pub fn diagram_check(theta: &[Expr], rep: &LieRepresentation, gamma: &GaugeSection, k: usize, oracle: &Oracle) -> Result<DiagramReport> {
    let ctx = gamma.ctx();
    if theta.iter().flat_map(|e| e.symbols()).any(|s| s.is_gauge()) {
        return Err(Error::Invalid("Θ must not depend on gauge variables".into()));
    }
    let q = gauged_field_formula(rep, theta, &ctx.alphas())?;
    let x = complete_invariant(&EvoField::vertical(ctx, q)?, gamma)?;
    let mut edges = Vec::new();

    edges.push(EdgeVerdict {
        name: "invariance".into(),
        detail: "P restricted equals dA/du applied to Q restricted".into(),
        verdict: invariance_check(&x, gamma, oracle)?,
    });

    let x_gamma = x.restricted(gamma);
    let k_g = k_gamma(rep, gamma)?;
    let expected_q = k_g.apply(theta)?;
    let pairs: Vec<(Expr, Expr)> = x_gamma.q().iter().cloned().zip(expected_q).collect();
    edges.push(EdgeVerdict {
        name: "restrict".into(),
        detail: "Q restricted equals K_gamma Theta".into(),
        verdict: oracle.all_equal(&pairs),
    });

    let w = project(&x_gamma)?;
    let lambda = lambda_of_section(rep, gamma)?;
    let route_a = project(&std_prolong(&x, k)?.restricted(gamma))?;
    let route_b = mu_prolong_with(&w, &lambda, k, oracle, true)?;

    let mut gauged_rows = std::collections::BTreeMap::new();
    for j in MultiIndex::up_to(ctx.num_independent(), k) {
        let dtheta = theta.iter().map(|t| total_derivative_multi(ctx, &j, t)).collect::<Result<Vec<_>>>()?;
        gauged_rows.insert(j, k_g.apply(&dtheta)?);
    }
    let gauged = ProlongedField::from_table(ctx, k, gauged_rows, Vec::new())?;
    edges.push(table_edge("project", "restricted prolongation equals K_gamma D_J Theta", &route_a, &gauged, oracle));
    edges.push(table_edge("prolong", "route A equals route B", &route_a, &route_b, oracle));
    let twisted = twisted_prolong(&w, gamma, rep, k)?;
    edges.push(table_edge("twisted", "nabla recursion equals mu-prolongation", &twisted, &route_b, oracle));

    Ok(DiagramReport { edges, field: x, projected: w, lambda, route_a, route_b })
}
