use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::jet::MultiIndex;

/// What a coordinate symbol stands for in a jet space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoordKind {
    /// Independent variable x^i.
    Independent(usize),
    /// Dependent field u^a differentiated by `jet` (empty jet = u^a itself).
    Dependent { field: usize, jet: MultiIndex },
    /// Gauge variable α^m, with its own jet in augmented contexts.
    Gauge { index: usize, jet: MultiIndex },
}

impl CoordKind {
    fn class(&self) -> u8 {
        match self {
            CoordKind::Independent(_) => 0,
            CoordKind::Dependent { .. } => 1,
            CoordKind::Gauge { .. } => 2,
        }
    }

    fn index(&self) -> usize {
        match self {
            CoordKind::Independent(i) => *i,
            CoordKind::Dependent { field, .. } => *field,
            CoordKind::Gauge { index, .. } => *index,
        }
    }

    fn jet(&self) -> Option<&MultiIndex> {
        match self {
            CoordKind::Independent(_) => None,
            CoordKind::Dependent { jet, .. } | CoordKind::Gauge { jet, .. } => Some(jet),
        }
    }
}

#[derive(Debug)]
struct SymbolData {
    name: String,
    kind: CoordKind,
    bit: u64,
}

/// A named coordinate. Cheap to clone; compares by name and kind.
#[derive(Clone)]
pub struct Symbol(Arc<SymbolData>);

impl Symbol {
    pub fn new(name: impl Into<String>, kind: CoordKind) -> Symbol {
        let name = name.into();
        let mut h = std::collections::hash_map::DefaultHasher::new();
        name.hash(&mut h);
        let bit = 1u64 << (h.finish() % 64);
        Symbol(Arc::new(SymbolData { name, kind, bit }))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn kind(&self) -> &CoordKind {
        &self.0.kind
    }

    /// Bloom bit used to skip subtrees that cannot contain this symbol.
    pub(crate) fn bit(&self) -> u64 {
        self.0.bit
    }

    pub fn is_independent(&self) -> bool {
        matches!(self.0.kind, CoordKind::Independent(_))
    }

    pub fn is_dependent(&self) -> bool {
        matches!(self.0.kind, CoordKind::Dependent { .. })
    }

    pub fn is_gauge(&self) -> bool {
        matches!(self.0.kind, CoordKind::Gauge { .. })
    }

    /// Jet order |J| of a dependent or gauge symbol; 0 for independents.
    pub fn order(&self) -> usize {
        self.0.kind.jet().map_or(0, |j| j.order())
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.name == other.0.name && self.0.kind == other.0.kind)
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.name.hash(state);
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let (a, b) = (&self.0.kind, &other.0.kind);
        a.class()
            .cmp(&b.class())
            .then(a.index().cmp(&b.index()))
            .then_with(|| match (a.jet(), b.jet()) {
                (Some(ja), Some(jb)) => ja.order().cmp(&jb.order()).then_with(|| jb.counts().cmp(ja.counts())),
                _ => Ordering::Equal,
            })
            .then_with(|| self.0.name.cmp(&other.0.name))
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name)
    }
}
