//! Immutable symbolic expressions over exact rationals.
//!
//! Every constructor returns a canonical tree: sums and products are
//! flattened, sorted by a fixed total order and constant-folded, like terms
//! and like bases are merged, and numeric radicals are normalized. Two
//! expressions that canonicalize to the same tree compare and hash equal.

mod build;
mod calculus;
mod eval;
pub mod oracle;
mod parse;
mod print;
mod symbol;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use eval::Env;
pub use parse::{parse_expr, Resolver, RESERVED};
pub use symbol::{CoordKind, Symbol};

/// Elementary functions with a canonical node. `sqrt` is stored as a power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }
}

#[derive(Debug)]
pub enum Kind {
    Num(BigRational),
    Pi,
    Sym(Symbol),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, BigRational),
    Func(Func, Expr),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    hash: u64,
    mask: u64,
}

/// Shared handle to a canonical expression node.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

fn mix(h: u64, v: u64) -> u64 {
    (h ^ v).wrapping_mul(0x100_0000_01b3).rotate_left(29) ^ (v >> 7)
}

impl Expr {
    fn from_kind(kind: Kind) -> Expr {
        let (hash, mask) = match &kind {
            Kind::Num(r) => {
                let mut h = std::collections::hash_map::DefaultHasher::new();
                r.hash(&mut h);
                (mix(1, h.finish()), 0)
            }
            Kind::Pi => (0x9e37_79b9_7f4a_7c15, 0),
            Kind::Sym(s) => {
                let mut h = std::collections::hash_map::DefaultHasher::new();
                s.name().hash(&mut h);
                (mix(3, h.finish()), s.bit())
            }
            Kind::Add(v) => v.iter().fold((5, 0), |(h, m), e| (mix(h, e.0.hash), m | e.0.mask)),
            Kind::Mul(v) => v.iter().fold((7, 0), |(h, m), e| (mix(h, e.0.hash), m | e.0.mask)),
            Kind::Pow(b, q) => {
                let mut h = std::collections::hash_map::DefaultHasher::new();
                q.hash(&mut h);
                (mix(mix(11, b.0.hash), h.finish()), b.0.mask)
            }
            Kind::Func(f, a) => (mix(mix(13, *f as u64 + 17), a.0.hash), a.0.mask),
        };
        Expr(Arc::new(Node { kind, hash, mask }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub(crate) fn mask(&self) -> u64 {
        self.0.mask
    }

    pub(crate) fn ptr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn ptr_eq(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn rational(r: BigRational) -> Expr {
        Expr::from_kind(Kind::Num(r))
    }

    pub fn int(i: i64) -> Expr {
        Expr::rational(BigRational::from_integer(BigInt::from(i)))
    }

    pub fn frac(p: i64, q: i64) -> Expr {
        Expr::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn pi() -> Expr {
        Expr::from_kind(Kind::Pi)
    }

    pub fn sym(s: &Symbol) -> Expr {
        Expr::from_kind(Kind::Sym(s.clone()))
    }

    pub fn add(terms: Vec<Expr>) -> Expr {
        build::add(terms)
    }

    pub fn mul(factors: Vec<Expr>) -> Expr {
        build::mul(factors)
    }

    pub fn pow(&self, q: BigRational) -> Expr {
        build::pow(self, &q)
    }

    pub fn powi(&self, n: i64) -> Expr {
        build::pow(self, &BigRational::from_integer(BigInt::from(n)))
    }

    pub fn powq(&self, p: i64, q: i64) -> Expr {
        build::pow(self, &BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn sqrt(&self) -> Expr {
        self.powq(1, 2)
    }

    pub fn recip(&self) -> Expr {
        self.powi(-1)
    }

    pub fn apply(f: Func, arg: &Expr) -> Expr {
        build::func(f, arg)
    }

    pub fn sin(&self) -> Expr {
        build::func(Func::Sin, self)
    }

    pub fn cos(&self) -> Expr {
        build::func(Func::Cos, self)
    }

    pub fn exp(&self) -> Expr {
        build::func(Func::Exp, self)
    }

    pub fn log(&self) -> Expr {
        build::func(Func::Log, self)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self.kind() {
            Kind::Num(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self.kind() {
            Kind::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// True when the tree contains no coordinate symbol.
    pub fn is_constant(&self) -> bool {
        self.symbols().is_empty()
    }

    /// Numeric value of a coordinate-free expression.
    pub fn to_f64(&self) -> Option<f64> {
        if let Some(r) = self.as_rational() {
            return Some(r.numer().to_f64()? / r.denom().to_f64()?);
        }
        if !self.is_constant() {
            return None;
        }
        self.eval(&Env::new()).ok()
    }

    /// Every coordinate symbol occurring in the tree, in canonical order.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        let mut seen = HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if e.mask() == 0 || !seen.insert(e.ptr()) {
                continue;
            }
            match e.kind() {
                Kind::Sym(s) => {
                    out.insert(s.clone());
                }
                Kind::Add(v) | Kind::Mul(v) => stack.extend(v.iter().cloned()),
                Kind::Pow(b, _) => stack.push(b.clone()),
                Kind::Func(_, a) => stack.push(a.clone()),
                Kind::Num(_) | Kind::Pi => {}
            }
        }
        out
    }

    /// Could `s` occur in this tree? False means it certainly does not.
    pub fn may_contain(&self, s: &Symbol) -> bool {
        self.mask() & s.bit() != 0
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.may_contain(s) && self.symbols().contains(s)
    }

    /// Number of distinct nodes in the shared tree.
    pub fn size(&self) -> usize {
        let mut seen = HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.ptr()) {
                continue;
            }
            match e.kind() {
                Kind::Add(v) | Kind::Mul(v) => stack.extend(v.iter().cloned()),
                Kind::Pow(b, _) => stack.push(b.clone()),
                Kind::Func(_, a) => stack.push(a.clone()),
                _ => {}
            }
        }
        seen.len()
    }

    /// Rebuild through the smart constructors. Idempotent on canonical trees.
    pub fn canon(&self) -> Expr {
        match self.kind() {
            Kind::Num(_) | Kind::Pi | Kind::Sym(_) => self.clone(),
            Kind::Add(v) => Expr::add(v.iter().map(Expr::canon).collect()),
            Kind::Mul(v) => Expr::mul(v.iter().map(Expr::canon).collect()),
            Kind::Pow(b, q) => b.canon().pow(q.clone()),
            Kind::Func(f, a) => Expr::apply(*f, &a.canon()),
        }
    }

    /// Split into a rational coefficient and a coefficient-free remainder.
    pub fn split_coeff(&self) -> (BigRational, Expr) {
        match self.kind() {
            Kind::Num(r) => (r.clone(), Expr::one()),
            Kind::Mul(v) => match v[0].kind() {
                Kind::Num(r) => {
                    let rest = if v.len() == 2 { v[1].clone() } else { Expr::from_kind(Kind::Mul(v[1..].to_vec())) };
                    (r.clone(), rest)
                }
                _ => (BigRational::one(), self.clone()),
            },
            _ => (BigRational::one(), self.clone()),
        }
    }

    /// Has a negative leading coefficient in canonical form.
    pub fn is_negative_form(&self) -> bool {
        match self.kind() {
            Kind::Num(r) => r.is_negative(),
            Kind::Mul(v) => matches!(v[0].kind(), Kind::Num(r) if r.is_negative()),
            Kind::Add(v) => v.iter().find(|t| !matches!(t.kind(), Kind::Num(_))).is_some_and(Expr::is_negative_form),
            _ => false,
        }
    }
}

fn rank(k: &Kind) -> u8 {
    match k {
        Kind::Num(_) => 0,
        Kind::Pi => 1,
        Kind::Sym(_) => 2,
        Kind::Func(..) => 3,
        Kind::Pow(..) => 4,
        Kind::Add(_) => 5,
        Kind::Mul(_) => 6,
    }
}

fn cmp_slices(a: &[Expr], b: &[Expr]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.ptr_eq(other) {
            return Ordering::Equal;
        }
        match (self.kind(), other.kind()) {
            (Kind::Num(a), Kind::Num(b)) => a.cmp(b),
            (Kind::Pi, Kind::Pi) => Ordering::Equal,
            (Kind::Sym(a), Kind::Sym(b)) => a.cmp(b),
            (Kind::Func(f, a), Kind::Func(g, b)) => f.cmp(g).then_with(|| a.cmp(b)),
            (Kind::Pow(a, p), Kind::Pow(b, q)) => a.cmp(b).then_with(|| p.cmp(q)),
            (Kind::Add(a), Kind::Add(b)) | (Kind::Mul(a), Kind::Mul(b)) => cmp_slices(a, b),
            (a, b) => rank(a).cmp(&rank(b)),
        }
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || (self.0.hash == other.0.hash && self.cmp(other) == Ordering::Equal)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::render(self))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", print::render(self))
    }
}

impl From<i64> for Expr {
    fn from(i: i64) -> Expr {
        Expr::int(i)
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Expr {
        Expr::sym(s)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                $body(&self, &rhs)
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                $body(&self, rhs)
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                $body(self, &rhs)
            }
        }
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                $body(self, rhs)
            }
        }
        impl ops::$tr<i64> for Expr {
            type Output = Expr;
            fn $m(self, rhs: i64) -> Expr {
                $body(&self, &Expr::int(rhs))
            }
        }
        impl ops::$tr<i64> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: i64) -> Expr {
                $body(self, &Expr::int(rhs))
            }
        }
    };
}

binop!(Add, add, |a: &Expr, b: &Expr| Expr::add(vec![a.clone(), b.clone()]));
binop!(Sub, sub, |a: &Expr, b: &Expr| Expr::add(vec![a.clone(), -b]));
binop!(Mul, mul, |a: &Expr, b: &Expr| Expr::mul(vec![a.clone(), b.clone()]));
binop!(Div, div, |a: &Expr, b: &Expr| Expr::mul(vec![a.clone(), b.recip()]));

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul(vec![Expr::int(-1), self])
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul(vec![Expr::int(-1), self.clone()])
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::add(iter.collect())
    }
}

impl std::iter::Product for Expr {
    fn product<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::mul(iter.collect())
    }
}
