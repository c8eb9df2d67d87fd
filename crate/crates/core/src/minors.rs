//! Restricted permutations, determinants of unit-subdiagonal Hessenberg
//! matrices, and block-minors of the reduced associated matrix.
//!
//! All indices in this module's public API are 1-based where they name a
//! block or a minor (`O_j^i`), matching the usual notation; permutation images
//! are 0-based like everywhere else in the crate.

use std::collections::HashMap;

use crate::counters::{OpCounters, OpRole};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Permutation};
use crate::stdform::BlockMap;
use crate::zring::{Residue, RingSpec};

/// A permutation `σ` of `{1, ..., n}` with `σ(h) >= h - 1` for every `h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RestrictedPermutation(Permutation);

impl RestrictedPermutation {
    pub fn new(perm: Permutation) -> Result<Self> {
        if Self::admits(perm.images()) {
            Ok(RestrictedPermutation(perm))
        } else {
            Err(Error::InvalidPermutation(format!(
                "{:?} maps some h below h - 1",
                perm.one_based()
            )))
        }
    }

    fn admits(images: &[usize]) -> bool {
        images.iter().enumerate().all(|(h, &x)| x + 1 >= h)
    }

    pub fn permutation(&self) -> &Permutation {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.degree()
    }

    pub fn images(&self) -> &[usize] {
        self.0.images()
    }

    pub fn sign(&self) -> i8 {
        self.0.sign()
    }

    /// `J_σ = {h : σ(h) >= h}` in increasing order (0-based positions).
    /// Never empty, since `σ(1) >= 1`.
    pub fn j_set(&self) -> Vec<usize> {
        self.images()
            .iter()
            .enumerate()
            .filter(|&(h, &x)| x >= h)
            .map(|(h, _)| h)
            .collect()
    }

    /// `J_σ` with 1-based positions.
    pub fn j_set_one_based(&self) -> Vec<usize> {
        self.j_set().into_iter().map(|h| h + 1).collect()
    }
}

/// All members of `Ŝ_n`, in lexicographic order of their image arrays.
///
/// Backtracking assigns `σ(1), σ(2), ...` in increasing order; a branch is cut
/// as soon as some value below `h - 1` is still unused at position `h`, since
/// no later position may take it.
pub fn enumerate_hat_s(n: usize) -> Result<Vec<RestrictedPermutation>> {
    if n == 0 {
        return Err(Error::InvalidPermutation("Ŝ_n needs n >= 1".into()));
    }
    fn extend(
        h: usize,
        n: usize,
        images: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<RestrictedPermutation>,
    ) {
        if h == n {
            let perm =
                Permutation::from_images(images.clone()).expect("backtracking yields bijections");
            out.push(RestrictedPermutation(perm));
            return;
        }
        let lo = h.saturating_sub(1);
        if used[..lo].iter().any(|&u| !u) {
            return;
        }
        for x in lo..n {
            if used[x] {
                continue;
            }
            used[x] = true;
            images.push(x);
            extend(h + 1, n, images, used, out);
            images.pop();
            used[x] = false;
        }
    }
    let mut out = Vec::with_capacity(1 << (n - 1).min(20));
    extend(
        0,
        n,
        &mut Vec::with_capacity(n),
        &mut vec![false; n],
        &mut out,
    );
    Ok(out)
}

fn check_structured(a: &Matrix) -> Result<()> {
    let (r, c) = a.shape();
    if r != c || r == 0 {
        return Err(Error::NotStructured(format!(
            "shape {r}x{c} is not square and nonempty"
        )));
    }
    for i in 1..r {
        for j in 0..i {
            let expected = u64::from(j + 1 == i);
            if a.get(i, j) != expected {
                return Err(Error::NotStructured(format!(
                    "entry ({}, {}) is {}, expected {expected}",
                    i + 1,
                    j + 1,
                    a.get(i, j)
                )));
            }
        }
    }
    Ok(())
}

fn signed(ring: RingSpec, sign: i8, x: u64) -> u64 {
    if sign < 0 {
        ring.neg(x)
    } else {
        x
    }
}

/// Determinant of a matrix with ones on the first subdiagonal and zeros below,
/// as a signed sum over `Ŝ_n` of products over `J_σ`.
pub fn det_structured_sum(a: &Matrix) -> Result<Residue> {
    check_structured(a)?;
    let ring = a.ring();
    let mut det = 0;
    for sigma in enumerate_hat_s(a.nrows())? {
        let term = sigma
            .j_set()
            .into_iter()
            .fold(1, |acc, h| ring.mul(acc, a.get(h, sigma.images()[h])));
        det = ring.add(det, signed(ring, sigma.sign(), term));
    }
    ring.element(det)
}

/// Same determinant through the first-row expansion into diagonal minors.
pub fn det_structured_laplace(a: &Matrix) -> Result<Residue> {
    check_structured(a)?;
    let n = a.nrows();
    let ring = a.ring();
    ring.element(diagonal_minor(a, 1, n)?)
}

/// `O_j^i`, the determinant of the order-`j` diagonal submatrix starting at
/// row `i` (1-based), of a structured matrix. `O_0^i = 1`.
///
/// `O_j^i = Σ_{k=i}^{i+j-1} (-1)^(k-i) a_{i,k} O_{i+j-1-k}^{k+1}`, evaluated
/// bottom-up so each minor is computed once.
pub fn diagonal_minor(a: &Matrix, i: usize, j: usize) -> Result<u64> {
    check_structured(a)?;
    let n = a.nrows();
    if i == 0 || i + j > n + 1 {
        return Err(Error::MinorIndex { i, j, s: n });
    }
    let ring = a.ring();
    let end = i + j; // every minor needed ends at row/column end-1
                     // minor[r] = O_{end-r}^r for r in i..=end
    let mut minor = vec![0u64; end + 1];
    minor[end] = 1;
    for r in (i..end).rev() {
        let mut acc = 0;
        for k in r..end {
            let term = ring.mul(a.get(r - 1, k - 1), minor[k + 1]);
            acc = ring.add(
                acc,
                signed(ring, if (k - r) % 2 == 0 { 1 } else { -1 }, term),
            );
        }
        minor[r] = acc;
    }
    Ok(minor[i])
}

/// Block-minors `O_j^i` of the reduced associated matrix of a standard form.
///
/// `O_j^i` has shape `t_i x w_{i+j}` where `w_k` is the width of column group
/// `k`; `O_0^i = Id_{t_i}` and `O_1^i = A_{i,i+1}`. Products and sums performed
/// by [`BlockMinorTable::minor_rec`] are recorded in the table's counters; a
/// minor whose last block column is the final group `s+1` is counted as
/// [`OpRole::Big`], every other one as [`OpRole::Small`].
pub struct BlockMinorTable<'a> {
    blocks: &'a BlockMap,
    memo: Option<HashMap<(usize, usize), Matrix>>,
    counters: OpCounters,
}

impl<'a> BlockMinorTable<'a> {
    /// A table that recomputes every minor on request.
    pub fn new(blocks: &'a BlockMap) -> Self {
        BlockMinorTable {
            blocks,
            memo: None,
            counters: OpCounters::default(),
        }
    }

    /// A table that caches minors computed by [`BlockMinorTable::minor_rec`].
    pub fn memoized(blocks: &'a BlockMap) -> Self {
        BlockMinorTable {
            blocks,
            memo: Some(HashMap::new()),
            counters: OpCounters::default(),
        }
    }

    pub fn counters(&self) -> &OpCounters {
        &self.counters
    }

    pub fn into_counters(self) -> OpCounters {
        self.counters
    }

    fn check_index(&self, i: usize, j: usize) -> Result<()> {
        let s = self.blocks.s();
        if i == 0 || i > s + 1 || i + j > s + 1 {
            return Err(Error::MinorIndex { i, j, s });
        }
        if j == 0 && i > s {
            // O_0^{s+1} is only used as an implicit identity factor.
            return Err(Error::MinorIndex { i, j, s });
        }
        Ok(())
    }

    fn identity(&self, i: usize) -> Matrix {
        Matrix::identity(self.blocks.ring(), self.blocks.layout().t(i))
    }

    /// `O_j^i` from the signed sum over `Ŝ_j`, factors chained in increasing
    /// order of `h ∈ J_σ`. Not counted.
    pub fn minor_sum(&self, i: usize, j: usize) -> Result<Matrix> {
        self.check_index(i, j)?;
        if j == 0 {
            return Ok(self.identity(i));
        }
        let ring = self.blocks.ring();
        let layout = self.blocks.layout();
        let mut acc = Matrix::zeros(ring, layout.t(i), layout.width(i + j));
        for sigma in enumerate_hat_s(j)? {
            let mut product: Option<Matrix> = None;
            for h in sigma.j_set() {
                // 1-based: A_{i+h-1, i+σ(h)}; 0-based h and image shift both by one.
                let factor = self.blocks.get(i + h, i + sigma.images()[h] + 1);
                product = Some(match product {
                    None => factor.clone(),
                    Some(p) => p
                        .mul(factor)
                        .expect("consecutive J_σ factors are conformable"),
                });
            }
            let product = product.expect("J_σ is never empty");
            acc = if sigma.sign() > 0 {
                acc.add(&product)
            } else {
                acc.sub(&product)
            }
            .expect("every term has the shape of O_j^i");
        }
        Ok(acc)
    }

    /// `O_j^i = Σ_{k=i}^{i+j-1} (-1)^(k-i) A_{i,k+1} O_{i+j-1-k}^{k+1}`.
    ///
    /// The `k = i+j-1` term multiplies by `O_0 = Id` and is taken as
    /// `±A_{i,i+j}` without a product, so each call performs `j - 1` counted
    /// products and `j - 1` counted additions on top of its sub-minors.
    pub fn minor_rec(&mut self, i: usize, j: usize) -> Result<Matrix> {
        self.check_index(i, j)?;
        if j == 0 {
            return Ok(self.identity(i));
        }
        if let Some(hit) = self.memo.as_ref().and_then(|m| m.get(&(i, j))) {
            return Ok(hit.clone());
        }
        let blocks = self.blocks;
        let role = if i + j == blocks.s() + 1 {
            OpRole::Big
        } else {
            OpRole::Small
        };
        let last = blocks.get(i, i + j);
        let mut acc = if (j - 1).is_multiple_of(2) {
            last.clone()
        } else {
            last.neg()
        };
        for k in i..i + j - 1 {
            let sub = self.minor_rec(k + 1, i + j - 1 - k)?;
            let a = blocks.get(i, k + 1);
            let product = a.mul(&sub).expect("A_{i,k+1} and O^{k+1} are conformable");
            self.counters.record_mul(role, a.shape(), sub.ncols());
            acc = if (k - i).is_multiple_of(2) {
                acc.add(&product)
            } else {
                acc.sub(&product)
            }
            .expect("every term has the shape of O_j^i");
            self.counters.record_add(role, acc.shape());
        }
        if let Some(memo) = self.memo.as_mut() {
            memo.insert((i, j), acc.clone());
        }
        Ok(acc)
    }
}
