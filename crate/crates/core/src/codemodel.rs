//! Code-level semantics: enumeration, cardinality, membership and equality.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{BlockLayout, Matrix};
use crate::stdform::{standard_form, StandardForm};
use crate::zring::RingSpec;

/// Largest code [`enumerate`] will list.
pub const ENUMERATION_BUDGET_LOG2: u32 = 20;

/// An additive code given by generators, with its standard form computed
/// eagerly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    generators: Matrix,
    std: StandardForm,
}

impl CodeSpec {
    pub fn new(generators: Matrix) -> Self {
        let std = standard_form(&generators);
        CodeSpec { generators, std }
    }

    pub fn from_standard_form(std: StandardForm) -> Self {
        CodeSpec {
            generators: std.original_generators(),
            std,
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.generators.ring()
    }

    pub fn n(&self) -> usize {
        self.generators.ncols()
    }

    pub fn generators(&self) -> &Matrix {
        &self.generators
    }

    pub fn standard_form(&self) -> &StandardForm {
        &self.std
    }

    pub fn layout(&self) -> &BlockLayout {
        self.std.layout()
    }

    pub fn cardinality(&self) -> Cardinality {
        cardinality(self.ring(), self.layout())
    }
}

/// A code size `base^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cardinality {
    pub base: u64,
    pub exponent: u64,
}

impl Cardinality {
    /// Exact value when it fits.
    pub fn value(&self) -> Option<u128> {
        let e = u32::try_from(self.exponent).ok()?;
        (self.base as u128).checked_pow(e)
    }

    /// Product of two cardinalities over the same base.
    pub fn times(&self, other: &Cardinality) -> Option<Cardinality> {
        (self.base == other.base).then(|| Cardinality {
            base: self.base,
            exponent: self.exponent + other.exponent,
        })
    }

    /// Decimal expansion of `base^exponent`.
    pub fn to_decimal(&self) -> String {
        // little-endian base-10^9 limbs
        const LIMB: u128 = 1_000_000_000;
        let mut limbs: Vec<u128> = vec![1];
        for _ in 0..self.exponent {
            let mut carry = 0u128;
            for limb in limbs.iter_mut() {
                let x = *limb * self.base as u128 + carry;
                *limb = x % LIMB;
                carry = x / LIMB;
            }
            while carry > 0 {
                limbs.push(carry % LIMB);
                carry /= LIMB;
            }
        }
        let mut out = limbs.last().unwrap().to_string();
        for limb in limbs.iter().rev().skip(1) {
            out.push_str(&format!("{limb:09}"));
        }
        out
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.base, self.exponent)
    }
}

/// `p^(s t_1 + (s-1) t_2 + ... + t_s)`.
pub fn cardinality(ring: RingSpec, layout: &BlockLayout) -> Cardinality {
    let s = layout.s() as u64;
    let exponent = layout
        .types()
        .iter()
        .enumerate()
        .map(|(k, &t)| (s - k as u64) * t as u64)
        .sum();
    Cardinality {
        base: ring.p(),
        exponent,
    }
}

/// All codewords, each written once as `Σ λ_r u_r` over the standard-form
/// rows (in the caller's coordinates) with `λ_r ∈ Z_{p^(s-i+1)}` for a row in
/// group `i`. Lexicographic in the coefficient vector.
pub fn enumerate(code: &CodeSpec) -> Result<Vec<Vec<u64>>> {
    let size = code
        .cardinality()
        .value()
        .filter(|&v| v <= 1 << ENUMERATION_BUDGET_LOG2)
        .ok_or(Error::BudgetExceeded {
            what: "the code",
            budget_log2: ENUMERATION_BUDGET_LOG2,
        })? as usize;
    let ring = code.ring();
    let rows = code.std.original_generators();
    let layout = code.layout();
    let s = layout.s();
    let ranges: Vec<u64> = (1..=s)
        .flat_map(|i| std::iter::repeat_n(ring.pow_p((s - i + 1) as u32), layout.t(i)))
        .collect();

    let mut out = Vec::with_capacity(size);
    let mut lambda = vec![0u64; ranges.len()];
    let mut word = vec![0u64; code.n()];
    loop {
        out.push(word.clone());
        let mut r = ranges.len();
        loop {
            if r == 0 {
                return Ok(out);
            }
            r -= 1;
            lambda[r] += 1;
            let wrapped = lambda[r] == ranges[r];
            // wrapping subtracts (range - 1) copies; otherwise add one copy
            let k = if wrapped {
                ring.neg(ring.reduce(ranges[r] - 1))
            } else {
                1
            };
            for (w, &g) in word.iter_mut().zip(rows.row(r)) {
                *w = ring.mul_add(*w, k, g);
            }
            if !wrapped {
                break;
            }
            lambda[r] = 0;
        }
    }
}

/// Membership by reduction against the standard-form pivots.
///
/// In standard-form coordinates, row `r` of group `i` is zero before column
/// `r` and has `p^(i-1)` there, so the coefficient of that row is forced:
/// `v_r / p^(i-1)`, which must divide exactly.
pub fn is_member(code: &CodeSpec, v: &[u64]) -> Result<bool> {
    let ring = code.ring();
    if v.len() != code.n() {
        return Err(Error::ShapeMismatch {
            op: "membership",
            left: (1, v.len()),
            right: code.generators.shape(),
        });
    }
    if let Some(&bad) = v.iter().find(|&&x| !ring.contains(x)) {
        return Err(Error::OutOfRange {
            value: bad,
            modulus: ring.modulus(),
        });
    }
    let perm = code.std.permutation();
    let g = code.std.matrix();
    let layout = code.layout();
    let mut w: Vec<u64> = (0..v.len()).map(|j| v[perm.apply(j)]).collect();
    for i in 1..=layout.s() {
        let pivot = ring.pow_p(i as u32 - 1);
        for r in layout.offset(i)..layout.offset(i) + layout.t(i) {
            let c = w[r];
            if c == 0 {
                continue;
            }
            if !c.is_multiple_of(pivot) {
                return Ok(false);
            }
            let lambda = ring.neg(c / pivot);
            for (x, &y) in w[r..].iter_mut().zip(&g.row(r)[r..]) {
                *x = ring.mul_add(*x, lambda, y);
            }
        }
    }
    Ok(w.iter().all(|&x| x == 0))
}

/// Set equality: same type and every generator of each code lies in the other.
pub fn codes_equal(a: &CodeSpec, b: &CodeSpec) -> Result<bool> {
    if a.ring() != b.ring() {
        return Err(Error::RingMismatch {
            left: a.ring().modulus(),
            right: b.ring().modulus(),
        });
    }
    if a.n() != b.n() {
        return Err(Error::ShapeMismatch {
            op: "code equality",
            left: a.generators.shape(),
            right: b.generators.shape(),
        });
    }
    if a.layout().types() != b.layout().types() {
        return Ok(false);
    }
    for (x, y) in [(a, b), (b, a)] {
        for row in x.generators.rows() {
            if !is_member(y, row)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
