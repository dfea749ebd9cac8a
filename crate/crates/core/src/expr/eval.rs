use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::{Expr, Func, Kind, Symbol};
use crate::error::{Error, Result};

/// Numeric values for coordinates.
pub type Env = HashMap<Symbol, f64>;

fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn checked(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(domain(format!("non-finite value in {what}")))
    }
}

impl Expr {
    /// Binary floating-point evaluation; poles and real-domain violations are errors.
    pub fn eval(&self, env: &Env) -> Result<f64> {
        let mut memo = HashMap::new();
        eval(self, env, &mut memo)
    }
}

fn rational_f64(r: &num_rational::BigRational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

fn eval(e: &Expr, env: &Env, memo: &mut HashMap<usize, f64>) -> Result<f64> {
    if let Some(v) = memo.get(&e.ptr()) {
        return Ok(*v);
    }
    let v = match e.kind() {
        Kind::Num(r) => rational_f64(r),
        Kind::Pi => std::f64::consts::PI,
        Kind::Sym(s) => *env.get(s).ok_or_else(|| domain(format!("no value for `{}`", s.name())))?,
        Kind::Add(v) => {
            let mut acc = 0.0;
            for t in v {
                acc += eval(t, env, memo)?;
            }
            checked(acc, "sum")?
        }
        Kind::Mul(v) => {
            let mut acc = 1.0;
            for t in v {
                acc *= eval(t, env, memo)?;
            }
            checked(acc, "product")?
        }
        Kind::Pow(b, q) => {
            let x = eval(b, env, memo)?;
            let (p, d) = (q.numer(), q.denom());
            if x == 0.0 && q.is_negative() {
                return Err(domain("division by zero"));
            }
            let r = if d == &num_bigint::BigInt::from(1) {
                match p.to_i32() {
                    Some(n) => x.powi(n),
                    None => x.powf(rational_f64(q)),
                }
            } else if x < 0.0 {
                if d.is_even() {
                    return Err(domain("even root of a negative number"));
                }
                let m = (-x).powf(rational_f64(q));
                if p.is_odd() {
                    -m
                } else {
                    m
                }
            } else if *q == num_rational::BigRational::new(1.into(), 2.into()) {
                x.sqrt()
            } else {
                x.powf(rational_f64(q))
            };
            checked(r, "power")?
        }
        Kind::Func(f, a) => {
            let x = eval(a, env, memo)?;
            let r = match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Exp => x.exp(),
                Func::Log => {
                    if x <= 0.0 {
                        return Err(domain("logarithm of a non-positive number"));
                    }
                    x.ln()
                }
            };
            checked(r, f.name())?
        }
    };
    memo.insert(e.ptr(), v);
    Ok(v)
}
