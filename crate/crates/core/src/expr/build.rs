//! Smart constructors. Each one assumes canonical children and returns a
//! canonical tree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Expr, Func, Kind};

type Q = BigRational;

/// Products of sums are multiplied out only while the number of resulting
/// terms stays at or below this bound.
pub const EXPAND_LIMIT: usize = 64;

fn qint(i: i64) -> Q {
    Q::from_integer(BigInt::from(i))
}

fn node_pow(b: &Expr, q: &Q) -> Expr {
    Expr::from_kind(Kind::Pow(b.clone(), q.clone()))
}

fn radical(r: BigInt, deg: u32) -> Expr {
    node_pow(&Expr::rational(Q::from_integer(r)), &Q::new(BigInt::one(), BigInt::from(deg)))
}

// ---------------------------------------------------------------- numbers

enum NumPow {
    Exact(Q, Option<(BigInt, u32)>),
    Opaque,
}

fn is_opaque(c: &Q, q: &Q) -> bool {
    (c.is_negative() && !q.is_integer() && q.denom().is_even()) || (c.is_zero() && q.is_negative())
}

fn rat_powi(c: &Q, n: &BigInt) -> Q {
    let e = n.abs().to_u32().expect("exponent too large");
    let p = num_traits::pow(c.clone(), e as usize);
    if n.is_negative() {
        p.recip()
    } else {
        p
    }
}

fn factorize(mut n: BigInt) -> Vec<(BigInt, u32)> {
    let mut out = Vec::new();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(100_000u32);
    while &p * &p <= n && p <= limit {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Splits a positive integer as k^deg · r^(deg'/deg) with r reduced to the
/// smallest root degree; returns (k, r, degree of the remaining radical).
fn extract_root(n: &BigInt, deg: u32) -> (BigInt, BigInt, u32) {
    let mut k = BigInt::one();
    let mut rest = Vec::new();
    for (p, e) in factorize(n.clone()) {
        k *= num_traits::pow(p.clone(), (e / deg) as usize);
        if e % deg != 0 {
            rest.push((p, e % deg));
        }
    }
    let g = rest.iter().fold(deg, |g, (_, e)| g.gcd(e));
    let r = rest.iter().fold(BigInt::one(), |r, (p, e)| r * num_traits::pow(p.clone(), (e / g) as usize));
    (k, r, deg / g)
}

fn num_pow(c: &Q, q: &Q) -> NumPow {
    if is_opaque(c, q) {
        return NumPow::Opaque;
    }
    if q.is_integer() {
        return NumPow::Exact(rat_powi(c, q.numer()), None);
    }
    if c.is_zero() {
        return NumPow::Exact(Q::zero(), None);
    }
    let sign = if c.is_negative() && q.numer().is_odd() { -Q::one() } else { Q::one() };
    let c = c.abs();
    let n = q.floor();
    let f = q - &n;
    let a = f.numer().to_u32().expect("exponent numerator too large");
    let b = f.denom().to_u32().expect("exponent denominator too large");
    let whole = rat_powi(&c, n.numer());
    let big = num_traits::pow(c.numer().clone(), a as usize) * num_traits::pow(c.denom().clone(), (b - a) as usize);
    let (k, r, deg) = extract_root(&big, b);
    let coeff = sign * whole * Q::new(k, c.denom().clone());
    let rad = if r.is_one() { None } else { Some((r, deg)) };
    NumPow::Exact(coeff, rad)
}

/// Multiplies radicals of equal degree together and re-extracts roots until
/// every degree appears at most once.
fn normalize_radicals(coeff: &mut Q, mut pending: BTreeMap<u32, BigInt>) -> Vec<Expr> {
    let mut done: BTreeMap<u32, BigInt> = BTreeMap::new();
    while let Some((deg, r)) = pending.pop_last() {
        let r = match done.remove(&deg) {
            Some(prev) => prev * r,
            None => r,
        };
        let (k, r2, d2) = extract_root(&r, deg);
        *coeff *= Q::from_integer(k);
        if r2.is_one() {
            continue;
        }
        if d2 == deg {
            done.insert(deg, r2);
        } else {
            *pending.entry(d2).or_insert_with(BigInt::one) *= r2;
        }
    }
    done.into_iter().map(|(d, r)| radical(r, d)).collect()
}

fn numeric_power(c: &Q, q: &Q) -> Expr {
    match num_pow(c, q) {
        NumPow::Opaque => node_pow(&Expr::rational(c.clone()), q),
        NumPow::Exact(k, None) => Expr::rational(k),
        NumPow::Exact(k, Some((r, d))) => build_mul_node(k, vec![radical(r, d)]),
    }
}

// ---------------------------------------------------------------- products

fn build_mul_node(coeff: Q, factors: Vec<Expr>) -> Expr {
    if coeff.is_zero() {
        return Expr::zero();
    }
    if factors.is_empty() {
        return Expr::rational(coeff);
    }
    if coeff.is_one() && factors.len() == 1 {
        return factors.into_iter().next().unwrap();
    }
    let mut v = Vec::with_capacity(factors.len() + 1);
    if !coeff.is_one() {
        v.push(Expr::rational(coeff));
    }
    v.extend(factors);
    Expr::from_kind(Kind::Mul(v))
}

/// (base, exponent) view of a non-numeric factor.
fn factor_view(e: &Expr) -> (Expr, Q) {
    match e.kind() {
        Kind::Pow(b, q) => (b.clone(), q.clone()),
        _ => (e.clone(), Q::one()),
    }
}

fn needs_reflatten(f: &Expr, base: &Expr) -> bool {
    match f.kind() {
        Kind::Num(_) | Kind::Mul(_) => true,
        Kind::Pow(b, q) => match b.kind() {
            Kind::Num(c) => !is_opaque(c, q),
            _ => b != base,
        },
        _ => f != base,
    }
}

fn terms_of(e: &Expr) -> Vec<Expr> {
    match e.kind() {
        Kind::Add(v) => v.clone(),
        _ => vec![e.clone()],
    }
}

pub(super) fn mul(args: Vec<Expr>) -> Expr {
    let mut work = args;
    let mut round = 0;
    loop {
        round += 1;
        let mut coeff = Q::one();
        let mut rads: BTreeMap<u32, BigInt> = BTreeMap::new();
        let mut gens: Vec<(Expr, Q, Expr)> = Vec::new();
        let mut stack = work;
        while let Some(e) = stack.pop() {
            match e.kind() {
                Kind::Num(c) => coeff *= c,
                Kind::Mul(v) => stack.extend(v.iter().cloned()),
                Kind::Pow(b, q) => match b.kind() {
                    Kind::Num(c) if !is_opaque(c, q) => match num_pow(c, q) {
                        NumPow::Exact(k, rad) => {
                            coeff *= k;
                            if let Some((r, d)) = rad {
                                *rads.entry(d).or_insert_with(BigInt::one) *= r;
                            }
                        }
                        NumPow::Opaque => unreachable!(),
                    },
                    _ => gens.push((b.clone(), q.clone(), e.clone())),
                },
                _ => gens.push((e.clone(), Q::one(), e.clone())),
            }
        }
        if coeff.is_zero() {
            return Expr::zero();
        }
        let radf = normalize_radicals(&mut coeff, rads);

        gens.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        let mut merged: Vec<Expr> = Vec::with_capacity(gens.len());
        let mut restart = false;
        let mut i = 0;
        while i < gens.len() {
            let mut j = i + 1;
            let mut e = gens[i].1.clone();
            while j < gens.len() && gens[j].0 == gens[i].0 {
                e += &gens[j].1;
                j += 1;
            }
            if j == i + 1 {
                merged.push(gens[i].2.clone());
            } else if !e.is_zero() {
                let f = pow(&gens[i].0, &e);
                if needs_reflatten(&f, &gens[i].0) {
                    restart = true;
                }
                merged.push(f);
            }
            i = j;
        }
        if restart && round < 16 {
            work = Vec::with_capacity(merged.len() + radf.len() + 1);
            work.push(Expr::rational(coeff));
            work.extend(radf);
            work.extend(merged);
            continue;
        }
        if restart {
            merged.sort_by(|a, b| {
                let (ba, ea) = factor_view(a);
                let (bb, eb) = factor_view(b);
                ba.cmp(&bb).then(ea.cmp(&eb))
            });
        }

        let n_add = merged.iter().filter(|f| matches!(f.kind(), Kind::Add(_))).count();
        if n_add > 0 {
            let (adds, others): (Vec<Expr>, Vec<Expr>) =
                merged.into_iter().partition(|f| matches!(f.kind(), Kind::Add(_)));
            let mut mono_factors = radf;
            mono_factors.extend(others);
            let total: usize = adds.iter().map(|a| terms_of(a).len()).product();
            if adds.len() == 1 || total <= EXPAND_LIMIT {
                let mono = build_mul_node(coeff, mono_factors);
                let mut partial = vec![mono];
                for a in &adds {
                    let ts = terms_of(a);
                    let mut next = Vec::with_capacity(partial.len() * ts.len());
                    for p in &partial {
                        for t in &ts {
                            next.push(mul(vec![p.clone(), t.clone()]));
                        }
                    }
                    partial = next;
                }
                return add(partial);
            }
            let mut all = mono_factors;
            all.extend(adds);
            let (nums, mut rest): (Vec<Expr>, Vec<Expr>) = all
                .into_iter()
                .partition(|f| matches!(f.kind(), Kind::Pow(b, q) if matches!(b.kind(), Kind::Num(c) if !is_opaque(c, q))));
            rest.sort_by(|a, b| {
                let (ba, ea) = factor_view(a);
                let (bb, eb) = factor_view(b);
                ba.cmp(&bb).then(ea.cmp(&eb))
            });
            let mut fs = nums;
            fs.extend(rest);
            return build_mul_node(coeff, fs);
        }
        let mut fs = radf;
        fs.extend(merged);
        return build_mul_node(coeff, fs);
    }
}

// ---------------------------------------------------------------- sums

fn term_expr(c: &Q, rest: &Expr) -> Expr {
    if c.is_one() {
        return rest.clone();
    }
    match rest.kind() {
        Kind::Mul(v) => {
            let mut w = Vec::with_capacity(v.len() + 1);
            w.push(Expr::rational(c.clone()));
            w.extend(v.iter().cloned());
            Expr::from_kind(Kind::Mul(w))
        }
        _ => Expr::from_kind(Kind::Mul(vec![Expr::rational(c.clone()), rest.clone()])),
    }
}

fn factors_of(e: &Expr) -> Vec<Expr> {
    match e.kind() {
        Kind::Mul(v) => v.clone(),
        _ => vec![e.clone()],
    }
}

fn square_of(e: &Expr, f: Func) -> Option<Expr> {
    if let Kind::Pow(b, q) = e.kind() {
        if *q == qint(2) {
            if let Kind::Func(g, a) = b.kind() {
                if *g == f {
                    return Some(a.clone());
                }
            }
        }
    }
    None
}

/// Finds i, j with terms c·m·sin²a and c·m·cos²a; returns them with m.
fn find_pythagorean(terms: &[(Expr, Q)]) -> Option<(usize, usize, Expr)> {
    for (i, (rest, c)) in terms.iter().enumerate() {
        let fs = factors_of(rest);
        for (k, f) in fs.iter().enumerate() {
            if let Some(a) = square_of(f, Func::Sin) {
                let others: Vec<Expr> = fs.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, g)| g.clone()).collect();
                let m = mul(others.clone());
                let mut with_cos = others;
                with_cos.push(pow(&func(Func::Cos, &a), &qint(2)));
                let partner = mul(with_cos);
                if let Ok(j) = terms.binary_search_by(|(r, _)| r.cmp(&partner)) {
                    if terms[j].1 == *c {
                        return Some((i, j, m));
                    }
                }
            }
        }
    }
    None
}

pub(super) fn add(args: Vec<Expr>) -> Expr {
    let mut constant = Q::zero();
    let mut raw: Vec<(Expr, Q)> = Vec::new();
    let mut stack = args;
    while let Some(e) = stack.pop() {
        match e.kind() {
            Kind::Num(c) => constant += c,
            Kind::Add(v) => stack.extend(v.iter().cloned()),
            _ => {
                let (c, r) = e.split_coeff();
                raw.push((r, c));
            }
        }
    }
    let terms = loop {
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<(Expr, Q)> = Vec::with_capacity(raw.len());
        for (r, c) in raw.drain(..) {
            match terms.last_mut() {
                Some((lr, lc)) if *lr == r => *lc += c,
                _ => terms.push((r, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        match find_pythagorean(&terms) {
            Some((i, j, m)) => {
                let c = terms[i].1.clone();
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                terms.remove(hi);
                terms.remove(lo);
                raw = terms;
                let t = mul(vec![Expr::rational(c), m]);
                let mut extra = vec![t];
                while let Some(e) = extra.pop() {
                    match e.kind() {
                        Kind::Num(k) => constant += k,
                        Kind::Add(v) => extra.extend(v.iter().cloned()),
                        _ => {
                            let (k, r) = e.split_coeff();
                            raw.push((r, k));
                        }
                    }
                }
            }
            None => break terms,
        }
    };
    let mut out = Vec::with_capacity(terms.len() + 1);
    if !constant.is_zero() {
        out.push(Expr::rational(constant));
    }
    out.extend(terms.iter().map(|(r, c)| term_expr(c, r)));
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::from_kind(Kind::Add(out)),
    }
}

// ---------------------------------------------------------------- powers

fn is_positive_factor(f: &Expr) -> bool {
    match f.kind() {
        Kind::Pi => true,
        Kind::Func(Func::Exp, _) => true,
        Kind::Pow(b, _) => matches!(b.kind(), Kind::Pi | Kind::Func(Func::Exp, _))
            || matches!(b.kind(), Kind::Num(c) if c.is_positive()),
        _ => false,
    }
}

fn binomial_bound(n: usize, k: usize) -> usize {
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n + k - 1 - i) / (i + 1);
    }
    r
}

pub(super) fn pow(b: &Expr, q: &Q) -> Expr {
    if q.is_zero() {
        return Expr::one();
    }
    if q.is_one() {
        return b.clone();
    }
    match b.kind() {
        Kind::Num(c) => numeric_power(c, q),
        Kind::Pow(inner, a) => {
            let positive = matches!(inner.kind(), Kind::Pi | Kind::Func(Func::Exp, _));
            if q.is_integer() || a.numer().is_odd() || positive {
                pow(inner, &(a * q))
            } else {
                node_pow(b, q)
            }
        }
        Kind::Mul(v) => {
            if q.is_integer() {
                return mul(v.iter().map(|f| pow(f, q)).collect());
            }
            let mut outside = Vec::new();
            let mut inside = Vec::new();
            for f in v {
                match f.kind() {
                    Kind::Num(c) if c.is_negative() => {
                        if *c != -Q::one() {
                            outside.push(numeric_power(&-c, q));
                        }
                        inside.push(Expr::int(-1));
                    }
                    Kind::Num(c) => outside.push(numeric_power(c, q)),
                    _ if is_positive_factor(f) => outside.push(pow(f, q)),
                    _ => inside.push(f.clone()),
                }
            }
            if outside.is_empty() {
                return node_pow(b, q);
            }
            let inner = mul(inside);
            outside.push(pow(&inner, q));
            mul(outside)
        }
        Kind::Add(v) => {
            let expandable = |n: &Q| {
                n.is_integer()
                    && n.is_positive()
                    && n.to_integer() <= BigInt::from(16)
                    && binomial_bound(v.len(), n.to_integer().to_usize().unwrap()) <= EXPAND_LIMIT
            };
            if q.is_integer() && q.is_negative() && !(-q).is_one() && expandable(&-q) {
                return pow(&pow(b, &-q), &-Q::one());
            }
            let small = expandable(q);
            if !small {
                return match add_content(v, q) {
                    Some(c) => mul(vec![numeric_power(&c, q), pow(&mul(vec![b.clone(), Expr::rational(c.recip())]), q)]),
                    None => node_pow(b, q),
                };
            }
            let n = q.to_integer().to_usize().unwrap();
            let mut acc = v.clone();
            for _ in 1..n {
                let mut next = Vec::with_capacity(acc.len() * v.len());
                for x in &acc {
                    for y in v {
                        next.push(mul(vec![x.clone(), y.clone()]));
                    }
                }
                acc = terms_of(&add(next));
            }
            add(acc)
        }
        _ => node_pow(b, q),
    }
}

/// Rational content of a sum, signed so the first non-constant term of the
/// primitive part is positive when `q` has an odd denominator. `None` if 1.
fn add_content(terms: &[Expr], q: &Q) -> Option<Q> {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    let mut lead_negative = None;
    for t in terms {
        let (c, rest) = t.split_coeff();
        if lead_negative.is_none() && !rest.is_one() {
            lead_negative = Some(c.is_negative());
        }
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    let mut c = Q::new(num, den);
    if lead_negative == Some(true) && q.denom().is_odd() {
        c = -c;
    }
    (!c.is_one() && !c.is_zero()).then_some(c)
}

// ---------------------------------------------------------------- functions

/// Recognizes q·π (including 0 and π itself).
fn pi_multiple(a: &Expr) -> Option<Q> {
    match a.kind() {
        Kind::Num(c) if c.is_zero() => Some(Q::zero()),
        Kind::Pi => Some(Q::one()),
        Kind::Mul(v) if v.len() == 2 => match (v[0].kind(), v[1].kind()) {
            (Kind::Num(c), Kind::Pi) => Some(c.clone()),
            _ => None,
        },
        _ => None,
    }
}

/// sin(tπ) for t with denominator 1, 2, 3, 4 or 6.
fn sin_pi(t: &Q) -> Option<Expr> {
    if ![1, 2, 3, 4, 6].contains(&t.denom().to_i64()?) {
        return None;
    }
    let two = qint(2);
    let mut r = t - (t / &two).floor() * &two;
    let mut sign = 1;
    if r >= Q::one() {
        r -= Q::one();
        sign = -1;
    }
    let half = Q::new(BigInt::one(), BigInt::from(2));
    if r > half {
        r = Q::one() - r;
    }
    let v = match (r.numer().to_i64()?, r.denom().to_i64()?) {
        (0, _) => Expr::zero(),
        (1, 6) => Expr::frac(1, 2),
        (1, 4) => mul(vec![Expr::frac(1, 2), numeric_power(&two, &half)]),
        (1, 3) => mul(vec![Expr::frac(1, 2), numeric_power(&qint(3), &half)]),
        (1, 2) => Expr::one(),
        _ => return None,
    };
    Some(if sign < 0 { mul(vec![Expr::int(-1), v]) } else { v })
}

pub(super) fn func(f: Func, a: &Expr) -> Expr {
    let node = |arg: &Expr| Expr::from_kind(Kind::Func(f, arg.clone()));
    match f {
        Func::Sin | Func::Cos => {
            if let Some(t) = pi_multiple(a) {
                let t = if f == Func::Cos { t + Q::new(BigInt::one(), BigInt::from(2)) } else { t };
                if let Some(v) = sin_pi(&t) {
                    return v;
                }
            }
            if a.is_negative_form() {
                let na = mul(vec![Expr::int(-1), a.clone()]);
                return if f == Func::Sin { mul(vec![Expr::int(-1), node(&na)]) } else { node(&na) };
            }
            node(a)
        }
        Func::Exp => {
            if a.is_zero() {
                return Expr::one();
            }
            if let Kind::Func(Func::Log, x) = a.kind() {
                return x.clone();
            }
            node(a)
        }
        Func::Log => {
            if a.is_one() {
                return Expr::zero();
            }
            if let Kind::Func(Func::Exp, x) = a.kind() {
                return x.clone();
            }
            node(a)
        }
    }
}
