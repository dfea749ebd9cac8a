//! Sparse multivariate polynomials with rational coefficients.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::expr::{Expr, Kind, Symbol};

pub(crate) type Mono = BTreeMap<Symbol, u32>;

#[derive(Debug, Clone, Default, PartialEq)]
pub(crate) struct Poly(pub BTreeMap<Mono, BigRational>);

impl Poly {
    fn constant(c: BigRational) -> Poly {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Mono::new(), c);
        }
        Poly(m)
    }

    fn add(mut self, o: &Poly) -> Poly {
        for (k, v) in &o.0 {
            let e = self.0.entry(k.clone()).or_insert_with(BigRational::zero);
            *e += v;
            if e.is_zero() {
                self.0.remove(k);
            }
        }
        self
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ka, va) in &self.0 {
            for (kb, vb) in &o.0 {
                let mut k = ka.clone();
                for (s, e) in kb {
                    *k.entry(s.clone()).or_insert(0) += e;
                }
                out = out.add(&Poly([(k, va * vb)].into_iter().collect()));
            }
        }
        out
    }

    /// Converts polynomial expressions; anything else yields `None`.
    pub fn from_expr(e: &Expr) -> Option<Poly> {
        match e.kind() {
            Kind::Num(r) => Some(Poly::constant(r.clone())),
            Kind::Sym(s) => Some(Poly([([(s.clone(), 1)].into_iter().collect(), BigRational::from_integer(1.into()))].into_iter().collect())),
            Kind::Add(ts) => ts.iter().try_fold(Poly::default(), |acc, t| Some(acc.add(&Poly::from_expr(t)?))),
            Kind::Mul(fs) => fs.iter().try_fold(Poly::constant(BigRational::from_integer(1.into())), |acc, f| Some(acc.mul(&Poly::from_expr(f)?))),
            Kind::Pow(b, q) if q.is_integer() && q.numer() > &0.into() => {
                let n = q.to_integer().to_u32()?;
                let base = Poly::from_expr(b)?;
                let mut acc = Poly::constant(BigRational::from_integer(1.into()));
                for _ in 0..n {
                    acc = acc.mul(&base);
                }
                Some(acc)
            }
            _ => None,
        }
    }
}
