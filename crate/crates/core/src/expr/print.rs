//! Renders expressions in the input grammar, so printing then parsing
//! reproduces the same canonical tree.

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Expr, Kind};

pub(super) fn render(e: &Expr) -> String {
    match e.kind() {
        Kind::Num(r) => rational(r),
        Kind::Pi => "pi".to_string(),
        Kind::Sym(s) => s.name().to_string(),
        Kind::Func(f, a) => format!("{}({})", f.name(), render(a)),
        Kind::Add(v) => {
            let mut out = String::new();
            for (i, t) in v.iter().enumerate() {
                if i == 0 {
                    out.push_str(&render(t));
                } else if t.is_negative_form() {
                    out.push_str(" - ");
                    out.push_str(&render(&-t));
                } else {
                    out.push_str(" + ");
                    out.push_str(&render(t));
                }
            }
            out
        }
        Kind::Mul(_) | Kind::Pow(..) => product(e),
    }
}

fn rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn exponent(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("({}/{})", q.numer(), q.denom())
    }
}

fn atom(b: &Expr) -> String {
    match b.kind() {
        Kind::Sym(_) | Kind::Pi | Kind::Func(..) => render(b),
        Kind::Num(r) if r.is_integer() && !r.is_negative() => render(b),
        Kind::Pow(_, q) if *q == BigRational::new(1.into(), 2.into()) => render(b),
        _ => format!("({})", render(b)),
    }
}

fn power(b: &Expr, q: &BigRational) -> String {
    if q.is_one() {
        atom(b)
    } else if *q == BigRational::new(1.into(), 2.into()) {
        format!("sqrt({})", render(b))
    } else {
        format!("{}^{}", atom(b), exponent(q))
    }
}

fn product(e: &Expr) -> String {
    let (coeff, factors) = match e.kind() {
        Kind::Mul(v) => match v[0].kind() {
            Kind::Num(r) => (r.clone(), &v[1..]),
            _ => (BigRational::one(), &v[..]),
        },
        _ => (BigRational::one(), std::slice::from_ref(e)),
    };
    let mut num = Vec::new();
    let mut den = Vec::new();
    // Sum bases are divided out one at a time: a product of sums inside one
    // pair of parentheses would be expanded again when parsed.
    let mut den_sums = Vec::new();
    for f in factors {
        let (b, q) = match f.kind() {
            Kind::Pow(b, q) => (b.clone(), q.clone()),
            _ => (f.clone(), BigRational::one()),
        };
        if q.is_negative() && matches!(b.kind(), Kind::Add(_)) {
            den_sums.push(power(&b, &-q));
        } else if q.is_negative() {
            den.push(power(&b, &-q));
        } else {
            num.push(power(&b, &q));
        }
    }
    let p = coeff.numer().abs();
    if !p.is_one() || num.is_empty() {
        num.insert(0, p.to_string());
    }
    if !coeff.denom().is_one() {
        den.insert(0, coeff.denom().to_string());
    }
    let mut out = String::new();
    if coeff.is_negative() {
        out.push('-');
    }
    out.push_str(&num.join("*"));
    if !den.is_empty() {
        out.push('/');
        if den.len() > 1 {
            out.push('(');
            out.push_str(&den.join("*"));
            out.push(')');
        } else {
            out.push_str(&den[0]);
        }
    }
    for d in den_sums {
        out.push('/');
        out.push_str(&d);
    }
    out
}
