use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::One;

use super::{Expr, Func, Kind, Symbol};

impl Expr {
    /// Exact partial derivative treating every other coordinate as independent.
    pub fn pdiff(&self, s: &Symbol) -> Expr {
        let mut memo = HashMap::new();
        diff(self, s, &mut memo)
    }

    /// Simultaneous substitution of symbols by expressions.
    pub fn substitute(&self, bindings: &HashMap<Symbol, Expr>) -> Expr {
        if bindings.is_empty() {
            return self.clone();
        }
        let mask = bindings.keys().fold(0u64, |m, s| m | s.bit());
        let mut memo = HashMap::new();
        subst(self, bindings, mask, &mut memo)
    }

    pub fn substitute_one(&self, s: &Symbol, by: &Expr) -> Expr {
        let mut m = HashMap::new();
        m.insert(s.clone(), by.clone());
        self.substitute(&m)
    }
}

fn diff(e: &Expr, s: &Symbol, memo: &mut HashMap<usize, Expr>) -> Expr {
    if !e.may_contain(s) {
        return Expr::zero();
    }
    if let Some(r) = memo.get(&e.ptr()) {
        return r.clone();
    }
    let r = match e.kind() {
        Kind::Num(_) | Kind::Pi => Expr::zero(),
        Kind::Sym(t) => {
            if t == s {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Kind::Add(v) => Expr::add(v.iter().map(|t| diff(t, s, memo)).collect()),
        Kind::Mul(v) => {
            let mut terms = Vec::new();
            for (i, f) in v.iter().enumerate() {
                if !f.may_contain(s) {
                    continue;
                }
                let df = diff(f, s, memo);
                if df.is_zero() {
                    continue;
                }
                let mut fs: Vec<Expr> = v.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
                fs.push(df);
                terms.push(Expr::mul(fs));
            }
            Expr::add(terms)
        }
        Kind::Pow(b, q) => {
            let db = diff(b, s, memo);
            Expr::mul(vec![Expr::rational(q.clone()), b.pow(q - BigRational::one()), db])
        }
        Kind::Func(f, a) => {
            let da = diff(a, s, memo);
            let outer = match f {
                Func::Sin => a.cos(),
                Func::Cos => -a.sin(),
                Func::Exp => e.clone(),
                Func::Log => a.recip(),
            };
            outer * da
        }
    };
    memo.insert(e.ptr(), r.clone());
    r
}

fn subst(e: &Expr, b: &HashMap<Symbol, Expr>, mask: u64, memo: &mut HashMap<usize, Expr>) -> Expr {
    if e.mask() & mask == 0 {
        return e.clone();
    }
    if let Some(r) = memo.get(&e.ptr()) {
        return r.clone();
    }
    let r = match e.kind() {
        Kind::Num(_) | Kind::Pi => e.clone(),
        Kind::Sym(s) => b.get(s).cloned().unwrap_or_else(|| e.clone()),
        Kind::Add(v) => Expr::add(v.iter().map(|t| subst(t, b, mask, memo)).collect()),
        Kind::Mul(v) => Expr::mul(v.iter().map(|t| subst(t, b, mask, memo)).collect()),
        Kind::Pow(base, q) => subst(base, b, mask, memo).pow(q.clone()),
        Kind::Func(f, a) => Expr::apply(*f, &subst(a, b, mask, memo)),
    };
    memo.insert(e.ptr(), r.clone());
    r
}
