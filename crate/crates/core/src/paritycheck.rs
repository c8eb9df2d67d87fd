//! Parity-check matrices from standard-form generator matrices.
//!
//! Both constructions assemble the same block matrix `H^T` (rows indexed by
//! the code coordinates, split as `t_1, ..., t_s, n - t`):
//!
//! ```text
//!            group 1     group 2         ...   group s
//! t_1      [ H_{1,1}     p H_{1,2}       ...   p^(s-1) H_{1,s}  ]
//! t_2      [ H_{2,1}     p H_{2,2}       ...   p^(s-1) Id       ]
//! ...
//! t_s      [ H_{s,1}     p Id            ...   0                ]
//! n - t    [ Id          0               ...   0                ]
//! ```
//!
//! Group 1 has width `n - t`, group `j >= 2` has width `t_{s+2-j}`. The block
//! `H_{i,j}` is `(-1)^(s+2-i-j) O^i_{s+2-i-j}` in the minors construction and
//! is obtained column group by column group, bottom-up, in the iterative one.
//! Groups of width zero are skipped.

use std::fmt;

use crate::counters::{OpCounters, OpRole};
use crate::error::{Error, Result};
use crate::matrix::{BlockLayout, Matrix};
use crate::minors::BlockMinorTable;
use crate::stdform::{BlockMap, StandardForm};
use crate::zring::RingSpec;

/// Largest ambient space `p^(s n)` that brute-force enumeration will visit.
pub const BRUTE_FORCE_BUDGET_LOG2: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Minors,
    Iterative,
    BruteForce,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Minors => "minors",
            Method::Iterative => "iterative",
            Method::BruteForce => "bruteforce",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckResult {
    /// Parity-check matrix of the standard-form (column-permuted) code.
    pub h: Matrix,
    /// Parity-check matrix of the input code, in its own coordinates.
    pub h_original: Matrix,
    pub method: Method,
    pub counters: OpCounters,
    /// Type of the dual code, `(n; n-t, t_s, ..., t_2)`.
    pub dual_layout: BlockLayout,
}

/// Width of column group `j` of `H^T`.
fn h_group_width(layout: &BlockLayout, j: usize) -> usize {
    let s = layout.s();
    if j == 1 {
        layout.redundancy()
    } else {
        layout.t(s + 2 - j)
    }
}

/// Builds `H^T` from a per-group block producer, then transposes it.
///
/// `blocks_for_group(j)` returns `H_{1,j}, ..., H_{s+1-j,j}` unscaled; scaling
/// by `p^(j-1)` happens at insertion.
fn assemble(
    sf: &StandardForm,
    method: Method,
    counters: OpCounters,
    mut blocks_for_group: impl FnMut(usize) -> Vec<Matrix>,
) -> ParityCheckResult {
    let ring = sf.ring();
    let layout = sf.layout();
    let s = layout.s();
    let n = layout.n();
    let dual = dual_type(layout);
    let mut ht = Matrix::zeros(ring, n, dual.total());

    let mut col = 0;
    for j in 1..=s {
        let width = h_group_width(layout, j);
        if width == 0 {
            continue;
        }
        let scale = ring.pow_p(j as u32 - 1);
        for (idx, block) in blocks_for_group(j).into_iter().enumerate() {
            let i = idx + 1;
            debug_assert_eq!(block.shape(), (layout.t(i), width));
            ht.place_block(layout.offset(i), col, &block.scale(scale))
                .expect("H_{i,j} fits in its block position");
        }
        ht.place_block(
            layout.offset(s + 2 - j),
            col,
            &Matrix::scalar_identity(ring, width, scale),
        )
        .expect("identity fits in its block position");
        col += width;
    }
    debug_assert_eq!(col, dual.total());

    let h = ht.transpose();
    let h_original = h
        .apply_col_permutation(&sf.permutation().inverse())
        .expect("permutation degree equals code length");
    ParityCheckResult {
        h,
        h_original,
        method,
        counters,
        dual_layout: dual,
    }
}

/// Every `H_{i,j} = (-1)^(s+2-i-j) O^i_{s+2-i-j}` computed independently
/// through the block-minor recursion (no memoization).
pub fn parity_check_minors(sf: &StandardForm) -> ParityCheckResult {
    let blocks = sf.blocks();
    let s = blocks.s();
    let mut table = BlockMinorTable::new(&blocks);
    let mut computed: Vec<Vec<Matrix>> = Vec::with_capacity(s);
    for j in 1..=s {
        if h_group_width(sf.layout(), j) == 0 {
            computed.push(Vec::new());
            continue;
        }
        let group = (1..=s + 1 - j)
            .map(|i| {
                let order = s + 2 - i - j;
                let minor = table
                    .minor_rec(i, order)
                    .expect("minor indices are in range");
                if order.is_multiple_of(2) {
                    minor
                } else {
                    minor.neg()
                }
            })
            .collect();
        computed.push(group);
    }
    let counters = table.into_counters();
    assemble(sf, Method::Minors, counters, |j| {
        std::mem::take(&mut computed[j - 1])
    })
}

/// `H_{s-j+1,j} = -A_{s-j+1,s-j+2}` and, for `i = s-j, ..., 1`,
/// `H_{i,j} = -(A_{i,s-j+2} + Σ_{k=i+1}^{s-j+1} A_{i,k} H_{k,j})`.
pub fn parity_check_iterative(sf: &StandardForm) -> ParityCheckResult {
    let blocks = sf.blocks();
    let s = blocks.s();
    let mut counters = OpCounters::default();
    let mut computed: Vec<Vec<Matrix>> = Vec::with_capacity(s);
    for j in 1..=s {
        if h_group_width(sf.layout(), j) == 0 {
            computed.push(Vec::new());
            continue;
        }
        computed.push(iterative_group(&blocks, j, &mut counters));
    }
    assemble(sf, Method::Iterative, counters, |j| {
        std::mem::take(&mut computed[j - 1])
    })
}

fn iterative_group(blocks: &BlockMap, j: usize, counters: &mut OpCounters) -> Vec<Matrix> {
    let s = blocks.s();
    let role = if j == 1 { OpRole::Big } else { OpRole::Small };
    let top = s + 1 - j;
    let target = s + 2 - j;
    // group[i-1] = H_{i,j}
    let mut group: Vec<Option<Matrix>> = vec![None; top];
    group[top - 1] = Some(blocks.get(top, target).neg());
    for i in (1..top).rev() {
        let mut acc = blocks.get(i, target).clone();
        for k in i + 1..=top {
            let a = blocks.get(i, k);
            let hk = group[k - 1].as_ref().expect("H_{k,j} computed for k > i");
            let product = a.mul(hk).expect("A_{i,k} H_{k,j} is conformable");
            counters.record_mul(role, a.shape(), hk.ncols());
            acc = acc
                .add(&product)
                .expect("summands share the shape of H_{i,j}");
            counters.record_add(role, acc.shape());
        }
        group[i - 1] = Some(acc.neg());
    }
    group
        .into_iter()
        .map(|h| h.expect("all blocks filled"))
        .collect()
}

/// `(n; n-t, t_s, t_{s-1}, ..., t_2)`.
pub fn dual_type(layout: &BlockLayout) -> BlockLayout {
    let s = layout.s();
    let mut t = Vec::with_capacity(s);
    t.push(layout.redundancy());
    t.extend((2..=s).rev().map(|i| layout.t(i)));
    BlockLayout::new(layout.n(), t).expect("dual type sums to n - t_1")
}

/// Checks that the rows of `h` come in groups of sizes given by `dual` and
/// that every row of group `k` has additive order `p^(s-k+1)`.
pub fn has_row_structure(h: &Matrix, dual: &BlockLayout) -> bool {
    let ring = h.ring();
    let s = ring.s();
    if h.nrows() != dual.total() || h.ncols() != dual.n() || dual.s() != s as usize {
        return false;
    }
    let mut row = 0;
    for (k, &count) in dual.types().iter().enumerate() {
        let order = ring.pow_p(s - k as u32);
        for _ in 0..count {
            if ring.vector_order(h.row(row)) != order {
                return false;
            }
            row += 1;
        }
    }
    true
}

/// 1-based position and value of a nonzero entry of `G H^T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certificate {
    pub row: usize,
    pub col: usize,
    pub value: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    /// First nonzero entry of `G H^T` in row-major order, when there is one.
    pub certificate: Option<Certificate>,
}

/// Checks `G H^T = 0`.
pub fn verify_parity(g: &Matrix, h: &Matrix) -> Result<Verdict> {
    if g.ring() != h.ring() {
        return Err(Error::RingMismatch {
            left: g.ring().modulus(),
            right: h.ring().modulus(),
        });
    }
    if g.ncols() != h.ncols() {
        return Err(Error::ShapeMismatch {
            op: "verify",
            left: g.shape(),
            right: h.shape(),
        });
    }
    // H is mostly identity and zero blocks, so multiply with it on the left.
    let product = h.mul(&g.transpose())?.transpose();
    let certificate = product
        .first_nonzero()
        .map(|(row, col, value)| Certificate {
            row: row + 1,
            col: col + 1,
            value,
        });
    Ok(Verdict {
        holds: certificate.is_none(),
        certificate,
    })
}

fn check_budget(ring: RingSpec, n: usize, what: &'static str) -> Result<()> {
    let over = Error::BudgetExceeded {
        what,
        budget_log2: BRUTE_FORCE_BUDGET_LOG2,
    };
    let n = u32::try_from(n).map_err(|_| over.clone())?;
    match ring.modulus().checked_pow(n) {
        Some(size) if size <= 1 << BRUTE_FORCE_BUDGET_LOG2 => Ok(()),
        _ => Err(over),
    }
}

/// Visits every `v` in `Z_{p^s}^n` with `G v^T = 0`, in lexicographic order.
///
/// The syndrome `G v^T` is updated incrementally: bumping coordinate `c`
/// adds column `c` of `G`, and wrapping it from `p^s - 1` to `0` adds the
/// column once more, which is the same as subtracting `(p^s - 1)` times it.
pub fn for_each_dual_vector(g: &Matrix, mut visit: impl FnMut(&[u64])) -> Result<()> {
    let ring = g.ring();
    let n = g.ncols();
    check_budget(ring, n, "the ambient space")?;
    let m = ring.modulus();
    let columns: Vec<Vec<u64>> = (0..n)
        .map(|c| (0..g.nrows()).map(|r| g.get(r, c)).collect())
        .collect();
    let mut v = vec![0u64; n];
    let mut syndrome = vec![0u64; g.nrows()];
    loop {
        if syndrome.iter().all(|&x| x == 0) {
            visit(&v);
        }
        let mut c = n;
        loop {
            if c == 0 {
                return Ok(());
            }
            c -= 1;
            v[c] += 1;
            for (x, &y) in syndrome.iter_mut().zip(&columns[c]) {
                *x = ring.add(*x, y);
            }
            if v[c] < m {
                break;
            }
            v[c] = 0;
        }
    }
}

/// The whole dual code, one codeword per row, found by exhaustive search.
pub fn parity_check_bruteforce(g: &Matrix) -> Result<Matrix> {
    let mut data = Vec::new();
    let mut rows = 0;
    for_each_dual_vector(g, |v| {
        data.extend_from_slice(v);
        rows += 1;
    })?;
    Matrix::from_vec(g.ring(), rows, g.ncols(), data)
}

/// The classical `Z_4` parity-check matrix
/// `[[-(S + R T)^T, T^T, Id], [2 R^T, 2 Id, 0]]` with `R = A_{1,2}`,
/// `S = A_{1,3}`, `T = A_{2,3}`, in standard-form coordinates.
pub fn z4_parity_check(sf: &StandardForm) -> Result<Matrix> {
    let ring = sf.ring();
    if ring != RingSpec::z4() {
        return Err(Error::WrongRing {
            p: ring.p(),
            s: ring.s(),
        });
    }
    let blocks = sf.blocks();
    let layout = sf.layout();
    let (t1, t2, r) = (layout.t(1), layout.t(2), layout.redundancy());
    let big_r = blocks.get(1, 2);
    let big_s = blocks.get(1, 3);
    let big_t = blocks.get(2, 3);

    let top_left = big_s.add(&big_r.mul(big_t)?)?.neg().transpose();
    let mut h = Matrix::zeros(ring, r + t2, layout.n());
    h.place_block(0, 0, &top_left)?;
    h.place_block(0, t1, &big_t.transpose())?;
    h.place_block(0, t1 + t2, &Matrix::identity(ring, r))?;
    h.place_block(r, 0, &big_r.transpose().scale(2))?;
    h.place_block(r, t1, &Matrix::scalar_identity(ring, t2, 2))?;
    Ok(h)
}
