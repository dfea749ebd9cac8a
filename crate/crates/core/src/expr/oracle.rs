//! Seeded random-evaluation equality test.
//!
//! Two expressions are declared equal when they agree at every sampled point
//! to within `tol · max(1, |lhs|, |rhs|)`. Points where either side leaves its
//! real domain are redrawn a bounded number of times.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Env, Expr, Symbol};

pub const DEFAULT_SEED: u64 = 0x6A65_7467;
pub const DEFAULT_SAMPLES: usize = 20;
pub const DEFAULT_TOL: f64 = 1e-9;

/// Where a coordinate is sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    /// Uniform on [lo, hi].
    Uniform { lo: f64, hi: f64 },
    /// |value| uniform on [lo, hi], random sign.
    Band { lo: f64, hi: f64 },
}

impl Interval {
    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            Interval::Uniform { lo, hi } => lo + (hi - lo) * rng.gen::<f64>(),
            Interval::Band { lo, hi } => {
                let m = lo + (hi - lo) * rng.gen::<f64>();
                if rng.gen::<bool>() {
                    m
                } else {
                    -m
                }
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Uniform { lo, hi } => write!(f, "[{lo}, {hi}]"),
            Interval::Band { lo, hi } => write!(f, "+-[{lo}, {hi}]"),
        }
    }
}

/// Per-coordinate sampling intervals with a shared default.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleDomain {
    pub default: Interval,
    pub per_symbol: BTreeMap<String, Interval>,
}

impl Default for SampleDomain {
    fn default() -> Self {
        SampleDomain { default: Interval::Band { lo: 0.1, hi: 0.9 }, per_symbol: BTreeMap::new() }
    }
}

impl SampleDomain {
    pub fn with(mut self, name: &str, iv: Interval) -> Self {
        self.per_symbol.insert(name.to_string(), iv);
        self
    }

    pub fn interval(&self, name: &str) -> Interval {
        self.per_symbol.get(name).copied().unwrap_or(self.default)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub domain: SampleDomain,
    /// Give up after `samples * retry_factor` draws.
    pub retry_factor: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            tol: DEFAULT_TOL,
            domain: SampleDomain::default(),
            retry_factor: 10,
        }
    }
}

/// First point where two sides disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Index of the failing pair in a batch check.
    pub index: usize,
    pub point: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: f64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.point.iter().map(|(n, v)| format!("{n}={v:.12e}")).collect();
        write!(f, "{}", pts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Equal,
    Different(Witness),
    Unsampleable { attempts: usize, reason: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Equal)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Different(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Oracle {
    pub config: OracleConfig,
}

impl Oracle {
    pub fn new(config: OracleConfig) -> Self {
        Oracle { config }
    }

    pub fn with_domain(domain: SampleDomain) -> Self {
        Oracle { config: OracleConfig { domain, ..OracleConfig::default() } }
    }

    pub fn equal(&self, a: &Expr, b: &Expr) -> Verdict {
        self.all_equal(&[(a.clone(), b.clone())])
    }

    pub fn is_zero(&self, e: &Expr) -> Verdict {
        self.equal(e, &Expr::zero())
    }

    /// Checks every pair at the same sample points.
    pub fn all_equal(&self, pairs: &[(Expr, Expr)]) -> Verdict {
        let open: Vec<usize> = (0..pairs.len()).filter(|&i| pairs[i].0 != pairs[i].1).collect();
        if open.is_empty() {
            return Verdict::Equal;
        }
        let mut syms: BTreeSet<Symbol> = BTreeSet::new();
        for &i in &open {
            syms.extend(pairs[i].0.symbols());
            syms.extend(pairs[i].1.symbols());
        }
        let syms: Vec<Symbol> = syms.into_iter().collect();
        let intervals: Vec<Interval> = syms.iter().map(|s| self.config.domain.interval(s.name())).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        let budget = self.config.samples.max(1) * self.config.retry_factor.max(1);
        let mut good = 0;
        let mut attempts = 0;
        let mut reason = String::new();
        let tol = self.config.tol;
        while good < self.config.samples {
            if attempts >= budget {
                return Verdict::Unsampleable { attempts, reason };
            }
            attempts += 1;
            let mut env = Env::with_capacity(syms.len());
            for (s, iv) in syms.iter().zip(&intervals) {
                env.insert(s.clone(), iv.sample(&mut rng));
            }
            let mut values = Vec::with_capacity(open.len());
            let mut ok = true;
            for &i in &open {
                match (pairs[i].0.eval(&env), pairs[i].1.eval(&env)) {
                    (Ok(a), Ok(b)) => values.push((i, a, b)),
                    (Err(e), _) | (_, Err(e)) => {
                        reason = e.to_string();
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            good += 1;
            for (i, a, b) in values {
                if (a - b).abs() > tol * 1f64.max(a.abs()).max(b.abs()) {
                    let point = syms.iter().map(|s| (s.name().to_string(), env[s])).collect();
                    return Verdict::Different(Witness { index: i, point, lhs: a, rhs: b });
                }
            }
        }
        Verdict::Equal
    }
}

/// One-shot equality check with the default seed.
pub fn equal_oracle(e1: &Expr, e2: &Expr, domain: &SampleDomain, samples: usize, tol: f64) -> Verdict {
    Oracle::new(OracleConfig { samples, tol, domain: domain.clone(), ..OracleConfig::default() }).equal(e1, e2)
}
