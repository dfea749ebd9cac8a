//! Dense square matrices of expressions and the Lie-representation families.

mod rep;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::oracle::{Oracle, Verdict};
use crate::expr::{parse_expr, Expr, Resolver, Symbol};
use crate::jet::{total_derivative, JetContext};

pub use rep::{exp_series_oracle, gauged_field_formula, ExpFn, Family, LieRepresentation};

/// Row-major d×d matrix of canonical expressions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixExpr {
    n: usize,
    data: Vec<Expr>,
}

fn mismatch(what: &str, a: usize, b: usize) -> Error {
    Error::Dimension(format!("{what}: {a} vs {b}"))
}

impl MatrixExpr {
    pub fn new(n: usize, data: Vec<Expr>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", data.len())));
        }
        Ok(MatrixExpr { n, data })
    }

    pub fn from_rows(rows: Vec<Vec<Expr>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("matrix must be square".into()));
        }
        MatrixExpr::new(n, rows.into_iter().flatten().collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let v = rows.iter().map(|r| r.iter().map(|&x| Expr::int(x)).collect()).collect();
        MatrixExpr::from_rows(v).expect("square integer matrix")
    }

    pub fn zeros(n: usize) -> Self {
        MatrixExpr { n, data: vec![Expr::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatrixExpr::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Expr::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: Expr) {
        self.data[i * self.n + j] = e;
    }

    pub fn entries(&self) -> &[Expr] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Expr>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Expr::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        MatrixExpr { n: self.n, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&Expr) -> Result<Expr>) -> Result<Self> {
        Ok(MatrixExpr { n: self.n, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn add(&self, o: &MatrixExpr) -> Result<Self> {
        if self.n != o.n {
            return Err(mismatch("add", self.n, o.n));
        }
        Ok(MatrixExpr { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, o: &MatrixExpr) -> Result<Self> {
        if self.n != o.n {
            return Err(mismatch("sub", self.n, o.n));
        }
        Ok(MatrixExpr { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() })
    }

    pub fn neg(&self) -> Self {
        self.map(|e| -e)
    }

    pub fn scale(&self, c: &Expr) -> Self {
        self.map(|e| c * e)
    }

    pub fn mul(&self, o: &MatrixExpr) -> Result<Self> {
        if self.n != o.n {
            return Err(mismatch("mul", self.n, o.n));
        }
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(Expr::add((0..n).map(|k| self.get(i, k) * o.get(k, j)).collect()));
            }
        }
        Ok(MatrixExpr { n, data })
    }

    /// [M, N] = MN − NM.
    pub fn commutator(&self, o: &MatrixExpr) -> Result<Self> {
        self.mul(o)?.sub(&o.mul(self)?)
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        MatrixExpr { n, data: (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect() }
    }

    /// M·v.
    pub fn apply(&self, v: &[Expr]) -> Result<Vec<Expr>> {
        if v.len() != self.n {
            return Err(mismatch("matrix-vector product", self.n, v.len()));
        }
        Ok((0..self.n).map(|i| Expr::add((0..self.n).map(|k| self.get(i, k) * &v[k]).collect())).collect())
    }

    fn minor(&self, r: usize, c: usize) -> MatrixExpr {
        let n = self.n;
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != r) {
            for j in (0..n).filter(|&j| j != c) {
                data.push(self.get(i, j).clone());
            }
        }
        MatrixExpr { n: n - 1, data }
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Expr {
        match self.n {
            0 => Expr::one(),
            1 => self.data[0].clone(),
            2 => self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0),
            n => Expr::add(
                (0..n)
                    .filter(|&j| !self.get(0, j).is_zero())
                    .map(|j| {
                        let s = if j % 2 == 0 { Expr::one() } else { Expr::int(-1) };
                        s * self.get(0, j) * self.minor(0, j).det()
                    })
                    .collect(),
            ),
        }
    }

    /// Adjugate over determinant; supported up to dimension 4.
    pub fn inverse(&self) -> Result<Self> {
        if self.n > 4 {
            return Err(Error::Unsupported(format!("symbolic inverse of a {}x{} matrix", self.n, self.n)));
        }
        let det = self.det();
        if det.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv_det = det.recip();
        let n = self.n;
        if n == 1 {
            return Ok(MatrixExpr { n, data: vec![inv_det] });
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let s = if (i + j) % 2 == 0 { Expr::one() } else { Expr::int(-1) };
                data.push(s * self.minor(j, i).det() * &inv_det);
            }
        }
        Ok(MatrixExpr { n, data })
    }

    /// Inverse, refusing matrices whose determinant vanishes at every sample
    /// point and certifying M·M⁻¹ = I with the oracle.
    pub fn inverse_checked(&self, oracle: &Oracle) -> Result<Self> {
        let det = self.det();
        if oracle.is_zero(&det).holds() {
            return Err(Error::NotInvertible);
        }
        let inv = self.inverse()?;
        match self.mul(&inv)?.equal(&MatrixExpr::identity(self.n), oracle) {
            Verdict::Equal => Ok(inv),
            _ => Err(Error::NotInvertible),
        }
    }

    /// Entrywise oracle comparison.
    pub fn equal(&self, o: &MatrixExpr, oracle: &Oracle) -> Verdict {
        if self.n != o.n {
            return Verdict::Unsampleable { attempts: 0, reason: "dimension mismatch".into() };
        }
        let pairs: Vec<(Expr, Expr)> = self.data.iter().cloned().zip(o.data.iter().cloned()).collect();
        oracle.all_equal(&pairs)
    }

    pub fn substitute(&self, b: &HashMap<Symbol, Expr>) -> Self {
        self.map(|e| e.substitute(b))
    }

    /// Entrywise total derivative D_i.
    pub fn total_derivative(&self, ctx: &JetContext, i: usize) -> Result<Self> {
        self.try_map(|e| total_derivative(ctx, i, e))
    }

    /// Parses `[[e, e], [e, e]]`.
    pub fn parse(text: &str, resolver: &dyn Resolver) -> Result<Self> {
        let rows = split_brackets(text.trim()).map_err(|msg| Error::Syntax { pos: 0, msg })?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let cells = split_brackets(r.trim()).map_err(|msg| Error::Syntax { pos: 0, msg })?;
            out.push(cells.iter().map(|c| parse_expr(c, resolver)).collect::<Result<Vec<_>>>()?);
        }
        MatrixExpr::from_rows(out)
    }
}

/// Splits "[a, b, c]" into top-level items, respecting nested brackets.
pub(crate) fn split_brackets(s: &str) -> std::result::Result<Vec<String>, String> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| format!("expected a bracketed list, found `{s}`"))?;
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in inner.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c == ',' && depth == 0 {
            items.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
        if depth < 0 {
            return Err("unbalanced brackets".into());
        }
    }
    if depth != 0 {
        return Err("unbalanced brackets".into());
    }
    if !cur.trim().is_empty() || !items.is_empty() {
        items.push(cur);
    }
    Ok(items.into_iter().map(|t| t.trim().to_string()).collect())
}

impl fmt::Display for MatrixExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl fmt::Debug for MatrixExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
