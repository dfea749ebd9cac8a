//! Seeded random instances for property checks: polynomials, smooth
//! expressions and gauge sections.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::expr::Expr;
use crate::gauge::GaugeSection;
use crate::jet::JetContext;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Integer in [lo, hi].
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Nonzero integer in [−k, k].
    pub fn nonzero(&mut self, k: i64) -> i64 {
        loop {
            let c = self.int(-k, k);
            if c != 0 {
                return c;
            }
        }
    }

    /// Small rational p/q with q ∈ {1, 2, 3}.
    pub fn rational(&mut self) -> Expr {
        let q = self.int(1, 3);
        Expr::frac(self.int(-3, 3), q)
    }

    fn combine(&mut self, monos: &[Expr]) -> Expr {
        loop {
            let mut terms = Vec::new();
            for m in monos {
                if self.rng.gen_bool(0.6) {
                    terms.push(Expr::int(self.nonzero(3)) * m);
                }
            }
            let p = Expr::add(terms);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// Polynomial of total degree ≤ `degree` in `vars` with small integer
    /// coefficients; never identically zero.
    pub fn polynomial(&mut self, vars: &[Expr], degree: u32) -> Expr {
        self.combine(&monomials(vars, degree))
    }

    /// Like [`Sampler::polynomial`] without a constant term.
    pub fn polynomial_without_constant(&mut self, vars: &[Expr], degree: u32) -> Expr {
        self.combine(&monomials(vars, degree)[1..])
    }

    /// Smooth expression, finite on the default sampling band.
    pub fn smooth(&mut self, vars: &[Expr], depth: u32) -> Expr {
        let v = vars.choose(&mut self.rng).expect("at least one variable").clone();
        if depth == 0 {
            return match self.int(0, 2) {
                0 => v,
                1 => Expr::int(self.nonzero(3)) * v,
                _ => self.rational() + v,
            };
        }
        let a = self.smooth(vars, depth - 1);
        match self.int(0, 8) {
            0 | 1 => a + self.smooth(vars, depth - 1),
            2 | 3 => a * self.smooth(vars, depth - 1),
            4 => a.sin(),
            5 => a.cos(),
            6 => (Expr::int(1) + a.powi(2)).sqrt(),
            7 => a / (Expr::int(2) + self.smooth(vars, depth - 1).cos()),
            _ => (a / 2).exp(),
        }
    }

    /// Section with polynomial components of degree ≤ `degree` in the
    /// dependent variables (always involving the first one).
    pub fn polynomial_section(&mut self, ctx: &JetContext, degree: u32) -> Result<GaugeSection> {
        let us: Vec<Expr> = (0..ctx.num_dependent()).map(|a| ctx.u(a)).collect();
        let lead = vec![us[0].clone()];
        let mut comps = Vec::new();
        for m in 0..ctx.num_gauge() {
            let base = if m == 0 { &lead } else { &us };
            comps.push(self.polynomial(base, degree));
        }
        GaugeSection::new(ctx, comps)
    }
}

/// Monomials of total degree ≤ `degree`, including 1.
pub fn monomials(vars: &[Expr], degree: u32) -> Vec<Expr> {
    let mut out = vec![Expr::one()];
    let mut frontier = vec![(Expr::one(), 0usize)];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (i, v) in vars.iter().enumerate().skip(*start) {
                let t = m * v;
                out.push(t.clone());
                next.push((t, i));
            }
        }
        frontier = next;
    }
    out
}
