//! Dense matrices over `Z_{p^s}`, block layouts and coordinate permutations.

use std::fmt;

use crate::error::{Error, Result};
use crate::zring::{Residue, RingSpec};

/// Dense row-major matrix over `Z_{p^s}`. Zero-dimension shapes are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: RingSpec,
    nrows: usize,
    ncols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(ring: RingSpec, nrows: usize, ncols: usize) -> Self {
        Matrix {
            ring,
            nrows,
            ncols,
            data: vec![0; nrows * ncols],
        }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        Self::scalar_identity(ring, n, 1)
    }

    /// `c * Id_n`.
    pub fn scalar_identity(ring: RingSpec, n: usize, c: u64) -> Self {
        let mut m = Self::zeros(ring, n, n);
        let c = ring.reduce(c);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    /// Builds a matrix from row-major data, rejecting entries outside `[0, p^s)`.
    pub fn from_vec(ring: RingSpec, nrows: usize, ncols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(Error::ShapeMismatch {
                op: "from_vec",
                left: (nrows, ncols),
                right: (data.len(), 1),
            });
        }
        if let Some(&bad) = data.iter().find(|&&x| !ring.contains(x)) {
            return Err(Error::OutOfRange {
                value: bad,
                modulus: ring.modulus(),
            });
        }
        Ok(Matrix {
            ring,
            nrows,
            ncols,
            data,
        })
    }

    /// Builds a matrix from rows. An empty row list yields a `0 x 0` matrix;
    /// use [`Matrix::from_vec`] for `0 x k`.
    pub fn from_rows<R: AsRef<[u64]>>(ring: RingSpec, rows: &[R]) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * ncols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(Error::ShapeMismatch {
                    op: "from_rows",
                    left: (0, ncols),
                    right: (i, row.len()),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(ring, rows.len(), ncols, data)
    }

    /// Builds a matrix by reducing arbitrary integers into the ring.
    pub fn from_fn(
        ring: RingSpec,
        nrows: usize,
        ncols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                data.push(ring.reduce(f(i, j)));
            }
        }
        Matrix {
            ring,
            nrows,
            ncols,
            data,
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.ncols + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Residue {
        self.ring
            .element(self.get(i, j))
            .expect("entries are kept reduced")
    }

    /// Sets an entry, reducing it modulo `p^s`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.data[i * self.ncols + j] = self.ring.reduce(value);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        (0..self.nrows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn check_ring(&self, other: &Matrix) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.ring.modulus(),
                right: other.ring.modulus(),
            })
        }
    }

    fn check_same_shape(&self, other: &Matrix, op: &'static str) -> Result<()> {
        self.check_ring(other)?;
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other, "add")?;
        let r = self.ring;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| r.add(a, b))
            .collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other, "sub")?;
        let r = self.ring;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| r.sub(a, b))
            .collect();
        Ok(self.with_data(data))
    }

    pub fn neg(&self) -> Matrix {
        let r = self.ring;
        self.with_data(self.data.iter().map(|&a| r.neg(a)).collect())
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let r = self.ring;
        let c = r.reduce(c);
        self.with_data(self.data.iter().map(|&a| r.mul(c, a)).collect())
    }

    /// Scalar multiple by a ring-tagged residue.
    pub fn scalar_mul(&self, c: &Residue) -> Result<Matrix> {
        if c.ring() != self.ring {
            return Err(Error::RingMismatch {
                left: c.ring().modulus(),
                right: self.ring.modulus(),
            });
        }
        Ok(self.scale(c.value()))
    }

    fn with_data(&self, data: Vec<u64>) -> Matrix {
        debug_assert_eq!(data.len(), self.data.len());
        Matrix {
            ring: self.ring,
            nrows: self.nrows,
            ncols: self.ncols,
            data,
        }
    }

    /// Classical product. Zero entries of `self` are skipped, which makes
    /// products with sparse left factors cheap.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_ring(other)?;
        if self.ncols != other.nrows {
            return Err(Error::ShapeMismatch {
                op: "mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let r = self.ring;
        let mut out = Matrix::zeros(r, self.nrows, other.ncols);
        for i in 0..self.nrows {
            let out_row = &mut out.data[i * other.ncols..(i + 1) * other.ncols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o = r.mul_add(*o, a, b);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.ring, self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.data[j * self.nrows + i] = self.data[i * self.ncols + j];
            }
        }
        out
    }

    /// Copies the `h x w` submatrix at `(r, c)`.
    pub fn submatrix(&self, r: usize, c: usize, h: usize, w: usize) -> Result<Matrix> {
        if r + h > self.nrows || c + w > self.ncols {
            return Err(Error::BlockOutOfBounds {
                row: r,
                col: c,
                block: (h, w),
                target: self.shape(),
            });
        }
        let mut out = Matrix::zeros(self.ring, h, w);
        for i in 0..h {
            out.row_mut(i).copy_from_slice(&self.row(r + i)[c..c + w]);
        }
        Ok(out)
    }

    /// Overwrites the submatrix at `(r, c)` with `block`.
    pub fn place_block(&mut self, r: usize, c: usize, block: &Matrix) -> Result<()> {
        self.check_ring(block)?;
        if r + block.nrows > self.nrows || c + block.ncols > self.ncols {
            return Err(Error::BlockOutOfBounds {
                row: r,
                col: c,
                block: block.shape(),
                target: self.shape(),
            });
        }
        for i in 0..block.nrows {
            self.row_mut(r + i)[c..c + block.ncols].copy_from_slice(block.row(i));
        }
        Ok(())
    }

    /// Returns a copy of `self` with `block` inserted at `(r, c)`.
    pub fn insert_block(&self, r: usize, c: usize, block: &Matrix) -> Result<Matrix> {
        let mut out = self.clone();
        out.place_block(r, c, block)?;
        Ok(out)
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn apply_col_permutation(&self, perm: &Permutation) -> Result<Matrix> {
        if perm.degree() != self.ncols {
            return Err(Error::DegreeMismatch {
                degree: perm.degree(),
                len: self.ncols,
            });
        }
        let mut out = Matrix::zeros(self.ring, self.nrows, self.ncols);
        for i in 0..self.nrows {
            let src = self.row(i);
            for (o, &from) in out.row_mut(i).iter_mut().zip(perm.images()) {
                *o = src[from];
            }
        }
        Ok(out)
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.nrows {
            self.data.swap(i * self.ncols + a, i * self.ncols + b);
        }
    }

    /// Stacks matrices with equal column counts.
    pub fn vstack(ring: RingSpec, ncols: usize, parts: &[&Matrix]) -> Result<Matrix> {
        let mut data = Vec::new();
        let mut nrows = 0;
        for part in parts {
            if part.ring != ring {
                return Err(Error::RingMismatch {
                    left: ring.modulus(),
                    right: part.ring.modulus(),
                });
            }
            if part.ncols != ncols {
                return Err(Error::ShapeMismatch {
                    op: "vstack",
                    left: (nrows, ncols),
                    right: part.shape(),
                });
            }
            nrows += part.nrows;
            data.extend_from_slice(&part.data);
        }
        Ok(Matrix {
            ring,
            nrows,
            ncols,
            data,
        })
    }

    /// Position and value of the first nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, u64)> {
        self.data
            .iter()
            .position(|&x| x != 0)
            .map(|k| (k / self.ncols, k % self.ncols, self.data[k]))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix over {} ({}x{}) [",
            self.ring, self.nrows, self.ncols
        )?;
        for row in self.rows() {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// Code length and type vector `(t_1, ..., t_s)`.
///
/// Column groups of a standard-form generator matrix are indexed `1..=s+1`:
/// group `j <= s` has width `t_j`, group `s+1` has width `n - t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockLayout {
    n: usize,
    t: Vec<usize>,
}

impl BlockLayout {
    pub fn new(n: usize, t: Vec<usize>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::InvalidLayout(
                "type vector must have s >= 1 entries".into(),
            ));
        }
        let total: usize = t.iter().sum();
        if total > n {
            return Err(Error::InvalidLayout(format!(
                "sum of type entries {total} exceeds length {n}"
            )));
        }
        Ok(BlockLayout { n, t })
    }

    /// Checks the layout against a ring (`t` must have exactly `s` entries).
    pub fn for_ring(ring: RingSpec, n: usize, t: Vec<usize>) -> Result<Self> {
        if t.len() != ring.s() as usize {
            return Err(Error::InvalidLayout(format!(
                "type vector has {} entries, ring has s = {}",
                t.len(),
                ring.s()
            )));
        }
        Self::new(n, t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.t.len()
    }

    pub fn types(&self) -> &[usize] {
        &self.t
    }

    /// `t_i` with 1-based `i`.
    pub fn t(&self, i: usize) -> usize {
        self.t[i - 1]
    }

    pub fn total(&self) -> usize {
        self.t.iter().sum()
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.total()
    }

    /// Width of column group `j` in `1..=s+1`.
    pub fn width(&self, j: usize) -> usize {
        if j == self.s() + 1 {
            self.redundancy()
        } else {
            self.t(j)
        }
    }

    /// First column (0-based) of column group `j`; also the first row of row group `j`.
    pub fn offset(&self, j: usize) -> usize {
        self.t[..j - 1].iter().sum()
    }
}

impl fmt::Display for BlockLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.n)?;
        for (k, t) in self.t.iter().enumerate() {
            write!(f, "{}{}", if k == 0 { " " } else { ", " }, t)?;
        }
        write!(f, ")")
    }
}

/// A bijection of `{0, ..., n-1}`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
        }
        Ok(Permutation { images })
    }

    /// Parses 1-based images, as written in the `perm:` line of the text format.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(format!("{images:?}")));
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                degree: self.degree(),
                len: other.degree(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    pub(crate) fn swap_images(&mut self, a: usize, b: usize) {
        self.images.swap(a, b);
    }

    /// Sign computed from the cycle decomposition.
    pub fn sign(&self) -> i8 {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
            }
        }
        if (n - cycles).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Builds a permutation from 1-based disjoint cycles, e.g. `[[1, 3, 2]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Permutation> {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (k, &from) in cycle.iter().enumerate() {
                let to = cycle[(k + 1) % cycle.len()];
                if from == 0 || from > n || to == 0 || to > n {
                    return Err(Error::InvalidPermutation(format!("{cycles:?}")));
                }
                images[from - 1] = to - 1;
            }
        }
        Self::from_images(images)
    }
}
