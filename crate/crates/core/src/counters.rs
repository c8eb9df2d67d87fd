//! Block-level operation counters.

use std::collections::BTreeMap;

/// Which term of the cost model an operation belongs to.
///
/// `Big` operations produce blocks of the first column group of `H^T`
/// (width `n - t`); `Small` operations produce blocks of the other groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpRole {
    Big,
    Small,
}

/// Shape of one counted block operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpShape {
    /// Product of an `a x b` block by a `b x c` block.
    Mul { a: usize, b: usize, c: usize },
    /// Sum of two `a x b` blocks.
    Add { a: usize, b: usize },
}

impl OpShape {
    /// Scalar cost: `a*b*c` multiply-adds for a product, `a*b` additions for a sum.
    pub fn scalar_cost(&self) -> u64 {
        match *self {
            OpShape::Mul { a, b, c } => (a * b * c) as u64,
            OpShape::Add { a, b } => (a * b) as u64,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub big_mults: u64,
    pub big_adds: u64,
    pub small_mults: u64,
    pub small_adds: u64,
    pub histogram: BTreeMap<OpShape, u64>,
}

impl OpCounters {
    pub fn record_mul(&mut self, role: OpRole, left: (usize, usize), right_cols: usize) {
        match role {
            OpRole::Big => self.big_mults += 1,
            OpRole::Small => self.small_mults += 1,
        }
        let shape = OpShape::Mul {
            a: left.0,
            b: left.1,
            c: right_cols,
        };
        *self.histogram.entry(shape).or_default() += 1;
    }

    pub fn record_add(&mut self, role: OpRole, shape: (usize, usize)) {
        match role {
            OpRole::Big => self.big_adds += 1,
            OpRole::Small => self.small_adds += 1,
        }
        let shape = OpShape::Add {
            a: shape.0,
            b: shape.1,
        };
        *self.histogram.entry(shape).or_default() += 1;
    }

    pub fn merge(&mut self, other: &OpCounters) {
        self.big_mults += other.big_mults;
        self.big_adds += other.big_adds;
        self.small_mults += other.small_mults;
        self.small_adds += other.small_adds;
        for (shape, count) in &other.histogram {
            *self.histogram.entry(*shape).or_default() += count;
        }
    }

    pub fn total_mults(&self) -> u64 {
        self.big_mults + self.small_mults
    }

    pub fn total_adds(&self) -> u64 {
        self.big_adds + self.small_adds
    }

    /// Multiply-add pairs `(big, small)`, or `None` when products and sums
    /// are unbalanced for some role.
    pub fn pairs(&self) -> Option<(u64, u64)> {
        (self.big_mults == self.big_adds && self.small_mults == self.small_adds)
            .then_some((self.big_mults, self.small_mults))
    }

    /// Total scalar work over all recorded block operations.
    pub fn scalar_cost(&self) -> u64 {
        self.histogram
            .iter()
            .map(|(shape, count)| shape.scalar_cost() * count)
            .sum()
    }
}
