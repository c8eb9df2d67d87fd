//! Reduction of generator matrices to standard form.
//!
//! A standard-form generator matrix of a code of type `(n; t_1, ..., t_s)` is
//! block upper triangular: row group `i` reads
//! `p^(i-1) * (0 ... 0 | Id_{t_i} | A_{i,i+1} | ... | A_{i,s+1})`.
//! The reduction here produces a canonical representative: entries of
//! `A_{i,j}` lie in `[0, p^(j-i))` for `j <= s` and in `[0, p^(s-i+1))` for
//! the last column group.

use crate::error::{Error, Result};
use crate::matrix::{BlockLayout, Matrix, Permutation};
use crate::zring::RingSpec;

/// A standard-form generator matrix together with its type and the column
/// permutation relating it to the input code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardForm {
    g: Matrix,
    layout: BlockLayout,
    perm: Permutation,
}

impl StandardForm {
    pub fn matrix(&self) -> &Matrix {
        &self.g
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    /// Column `j` of the standard form comes from column `perm[j]` of the input.
    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn ring(&self) -> RingSpec {
        self.g.ring()
    }

    /// The standard-form rows expressed in the input's coordinates.
    pub fn original_generators(&self) -> Matrix {
        self.g
            .apply_col_permutation(&self.perm.inverse())
            .expect("permutation degree equals code length")
    }

    pub fn blocks(&self) -> BlockMap {
        extract_blocks(self)
    }

    /// Assembles a standard form from its `A_{i,j}` blocks, reducing the block
    /// entries into their canonical ranges. The permutation is the identity.
    pub fn from_blocks(blocks: &BlockMap) -> StandardForm {
        let ring = blocks.ring;
        let layout = blocks.layout.clone();
        let s = layout.s();
        let mut g = Matrix::zeros(ring, layout.total(), layout.n());
        for i in 1..=s {
            let scale = ring.pow_p(i as u32 - 1);
            let row0 = layout.offset(i);
            for d in 0..layout.t(i) {
                g.set(row0 + d, row0 + d, scale);
            }
            for j in i + 1..=s + 1 {
                let a = blocks.get(i, j);
                let range = canonical_range(ring, s, i, j);
                let col0 = layout.offset(j);
                for r in 0..a.nrows() {
                    for c in 0..a.ncols() {
                        g.set(row0 + r, col0 + c, ring.mul(a.get(r, c) % range, scale));
                    }
                }
            }
        }
        let perm = Permutation::identity(layout.n());
        StandardForm { g, layout, perm }
    }
}

/// Exclusive upper bound of the canonical entries of `A_{i,j}`.
pub fn canonical_range(ring: RingSpec, s: usize, i: usize, j: usize) -> u64 {
    if j <= s {
        ring.pow_p((j - i) as u32)
    } else {
        ring.pow_p((s - i + 1) as u32)
    }
}

/// Reduces the rows of `input` to standard form.
///
/// Pivots are taken in order of increasing valuation. Within one valuation the
/// pivot is the first matching entry scanning columns left to right and, within
/// a column, unused rows top-down. The pivot column is swapped into the next
/// pivot position, its row normalized to `p^v`, and every other row reduced
/// against it (exactly below, modulo `p^v` above). Zero and redundant rows
/// disappear.
pub fn standard_form(input: &Matrix) -> StandardForm {
    let ring = input.ring();
    let s = ring.s();
    let (m, n) = input.shape();
    let mut work = input.clone();
    let mut perm = Permutation::identity(n);
    let mut used = vec![false; m];
    let mut pivot_rows = Vec::new();
    let mut types = vec![0usize; s as usize];

    for v in 0..s {
        let pv = ring.pow_p(v);
        loop {
            let k = pivot_rows.len();
            let found = (k..n).find_map(|c| {
                (0..m)
                    .find(|&r| {
                        !used[r] && work.get(r, c) != 0 && ring.valuation(work.get(r, c)) == v
                    })
                    .map(|r| (r, c))
            });
            let Some((r, c)) = found else { break };

            work.swap_cols(c, k);
            perm.swap_images(c, k);

            let unit = work.get(r, k) / pv;
            let inv = ring.inverse(unit).expect("pivot unit part is invertible");
            for x in work.row_mut(r) {
                *x = ring.mul(*x, inv);
            }
            debug_assert_eq!(work.get(r, k), pv);

            let pivot: Vec<u64> = work.row(r).to_vec();
            for other in 0..m {
                if other == r {
                    continue;
                }
                let q = work.get(other, k) / pv;
                if q == 0 {
                    continue;
                }
                let neg_q = ring.neg(ring.reduce(q));
                for (x, &y) in work.row_mut(other).iter_mut().zip(&pivot) {
                    *x = ring.mul_add(*x, neg_q, y);
                }
            }

            used[r] = true;
            pivot_rows.push(r);
            types[v as usize] += 1;
        }
    }
    debug_assert!((0..m).all(|r| used[r] || work.row(r).iter().all(|&x| x == 0)));

    let rows: Vec<&[u64]> = pivot_rows.iter().map(|&r| work.row(r)).collect();
    let mut g = Matrix::zeros(ring, rows.len(), n);
    for (i, row) in rows.iter().enumerate() {
        g.row_mut(i).copy_from_slice(row);
    }
    let layout = BlockLayout::new(n, types).expect("pivot count never exceeds length");
    StandardForm { g, layout, perm }
}

/// The blocks `A_{i,j}`, `1 <= i <= s`, `i < j <= s+1`, of a standard form,
/// with the `p^(i-1)` scaling stripped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMap {
    ring: RingSpec,
    layout: BlockLayout,
    // blocks[i-1][j-i-1] = A_{i,j}
    blocks: Vec<Vec<Matrix>>,
}

impl BlockMap {
    /// Builds a block map from a closure producing `A_{i,j}`; shapes are checked.
    pub fn from_fn(
        ring: RingSpec,
        layout: BlockLayout,
        mut f: impl FnMut(usize, usize) -> Matrix,
    ) -> Result<BlockMap> {
        if layout.s() != ring.s() as usize {
            return Err(Error::InvalidLayout(format!(
                "layout has s = {}, ring has s = {}",
                layout.s(),
                ring.s()
            )));
        }
        let s = layout.s();
        let mut blocks = Vec::with_capacity(s);
        for i in 1..=s {
            let mut row = Vec::with_capacity(s + 1 - i);
            for j in i + 1..=s + 1 {
                let a = f(i, j);
                let expected = (layout.t(i), layout.width(j));
                if a.shape() != expected || a.ring() != ring {
                    return Err(Error::ShapeMismatch {
                        op: "block map",
                        left: expected,
                        right: a.shape(),
                    });
                }
                row.push(a);
            }
            blocks.push(row);
        }
        Ok(BlockMap {
            ring,
            layout,
            blocks,
        })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn s(&self) -> usize {
        self.layout.s()
    }

    /// `A_{i,j}` with 1-based indices.
    pub fn get(&self, i: usize, j: usize) -> &Matrix {
        assert!(
            i >= 1 && i < j && j <= self.s() + 1,
            "A_{{{i},{j}}} is not a block of a standard form with s = {}",
            self.s()
        );
        &self.blocks[i - 1][j - i - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &Matrix)> {
        self.blocks.iter().enumerate().flat_map(|(i0, row)| {
            row.iter()
                .enumerate()
                .map(move |(d, a)| ((i0 + 1, i0 + d + 2), a))
        })
    }
}

pub fn extract_blocks(sf: &StandardForm) -> BlockMap {
    let ring = sf.ring();
    let layout = sf.layout.clone();
    let g = &sf.g;
    BlockMap::from_fn(ring, layout.clone(), |i, j| {
        let scale = ring.pow_p(i as u32 - 1);
        let block = g
            .submatrix(
                layout.offset(i),
                layout.offset(j),
                layout.t(i),
                layout.width(j),
            )
            .expect("blocks lie inside G");
        Matrix::from_fn(ring, block.nrows(), block.ncols(), |r, c| {
            block.get(r, c) / scale
        })
    })
    .expect("extracted blocks match the layout")
}

/// The reduced associated matrix: block rows `1..=s`, block columns `2..=s+1`,
/// with `A_{i,j}` above the block diagonal, `Id_{t_i}` on it (rows `i >= 2`)
/// and zeros below.
pub fn reduced_associated(sf: &StandardForm) -> Matrix {
    let blocks = extract_blocks(sf);
    let ring = sf.ring();
    let layout = sf.layout();
    let s = layout.s();
    let first_col = layout.t(1);
    let mut out = Matrix::zeros(ring, layout.total(), layout.n() - first_col);
    for i in 1..=s {
        let row0 = layout.offset(i);
        if i >= 2 {
            let c0 = layout.offset(i) - first_col;
            out.place_block(row0, c0, &Matrix::identity(ring, layout.t(i)))
                .expect("identity block fits");
        }
        for j in i + 1..=s + 1 {
            let c0 = layout.offset(j) - first_col;
            out.place_block(row0, c0, blocks.get(i, j))
                .expect("A block fits");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// All integer combinations of the rows; independent of the reduction.
    fn span(m: &Matrix) -> HashSet<Vec<u64>> {
        let ring = m.ring();
        let mut set = HashSet::new();
        set.insert(vec![0; m.ncols()]);
        for row in m.rows() {
            let mut next = HashSet::new();
            for v in &set {
                let mut w = v.clone();
                for _ in 0..ring.modulus() {
                    next.insert(w.clone());
                    for (x, &y) in w.iter_mut().zip(row) {
                        *x = ring.add(*x, y);
                    }
                }
            }
            set = next;
        }
        set
    }

    fn z4() -> RingSpec {
        RingSpec::z4()
    }

    #[test]
    fn already_standard() {
        let g = Matrix::from_rows(z4(), &[[1, 0, 1, 3], [0, 2, 0, 2]]).unwrap();
        let sf = standard_form(&g);
        assert_eq!(sf.matrix(), &g);
        assert!(sf.permutation().is_identity());
        assert_eq!(sf.layout().types(), &[1, 1]);
    }

    #[test]
    fn reduces_two_row_example() {
        let input = Matrix::from_rows(z4(), &[[2, 2], [1, 0]]).unwrap();
        let sf = standard_form(&input);
        assert_eq!(sf.matrix().to_rows(), vec![vec![1, 0], vec![0, 2]]);
        assert_eq!(sf.layout(), &BlockLayout::new(2, vec![1, 1]).unwrap());
        assert!(sf.permutation().is_identity());
        assert_eq!(span(&input), span(sf.matrix()));
        assert_eq!(span(&input).len(), 8);
    }

    #[test]
    fn moves_unit_into_pivot_position() {
        let input = Matrix::from_rows(z4(), &[[2, 1]]).unwrap();
        let sf = standard_form(&input);
        assert_eq!(sf.permutation().images(), &[1, 0]);
        assert_eq!(sf.matrix().to_rows(), vec![vec![1, 2]]);
        assert_eq!(sf.layout().types(), &[1, 0]);
        let permuted = input.apply_col_permutation(sf.permutation()).unwrap();
        assert_eq!(span(&permuted), span(sf.matrix()));
    }

    #[test]
    fn empty_and_zero_inputs() {
        let ring = RingSpec::new(2, 3).unwrap();
        let sf = standard_form(&Matrix::zeros(ring, 0, 4));
        assert_eq!(sf.layout().types(), &[0, 0, 0]);
        assert_eq!(sf.matrix().shape(), (0, 4));
        let sf = standard_form(&Matrix::zeros(ring, 3, 4));
        assert_eq!(sf.layout().total(), 0);
    }

    #[test]
    fn blocks_of_s2_example() {
        let g = Matrix::from_rows(z4(), &[[1, 1, 2], [0, 2, 2]]).unwrap();
        let sf = standard_form(&g);
        assert_eq!(&sf, &StandardForm::from_blocks(&sf.blocks()));
        let b = sf.blocks();
        let names: Vec<_> = b.iter().map(|(ij, _)| ij).collect();
        assert_eq!(names, vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(b.get(1, 2).to_rows(), vec![vec![1]]);
        assert_eq!(b.get(1, 3).to_rows(), vec![vec![2]]);
        assert_eq!(b.get(2, 3).to_rows(), vec![vec![1]]);
        assert_eq!(
            reduced_associated(&sf).to_rows(),
            vec![vec![1, 2], vec![1, 1]]
        );
    }

    #[test]
    fn zero_type_groups_give_empty_blocks() {
        let ring = RingSpec::new(3, 3).unwrap();
        let g = Matrix::from_rows(ring, &[[1, 0, 5, 7], [0, 1, 2, 0], [0, 0, 9, 18]]).unwrap();
        let sf = standard_form(&g);
        assert_eq!(sf.layout().types(), &[2, 0, 1]);
        let b = sf.blocks();
        assert_eq!(b.get(2, 3).shape(), (0, 1));
        assert_eq!(b.get(2, 4).shape(), (0, 1));
        assert_eq!(b.get(1, 2).shape(), (2, 0));
        assert_eq!(&StandardForm::from_blocks(&b), &sf);
    }

    #[test]
    fn reduced_associated_s3() {
        let ring = RingSpec::new(2, 3).unwrap();
        let layout = BlockLayout::new(5, vec![1, 1, 1]).unwrap();
        let values = [
            ((1, 2), 1),
            ((1, 3), 3),
            ((1, 4), 5),
            ((2, 3), 1),
            ((2, 4), 3),
            ((3, 4), 1),
        ];
        let blocks = BlockMap::from_fn(ring, layout, |i, j| {
            let v = values.iter().find(|(ij, _)| *ij == (i, j)).unwrap().1;
            let w = if j == 4 { 2 } else { 1 };
            Matrix::from_fn(ring, 1, w, |_, c| v + c as u64)
        })
        .unwrap();
        let sf = StandardForm::from_blocks(&blocks);
        assert_eq!(
            sf.matrix().to_rows(),
            vec![
                vec![1, 1, 3, 5, 6],
                vec![0, 2, 2, 6, 0],
                vec![0, 0, 4, 4, 0]
            ]
        );
        // [[A12, A13, A14], [Id, A23, A24], [0, Id, A34]] with canonical entries.
        assert_eq!(
            reduced_associated(&sf).to_rows(),
            vec![vec![1, 3, 5, 6], vec![1, 1, 3, 0], vec![0, 1, 1, 0]]
        );
    }

    #[test]
    fn s1_reduced_associated_is_single_block() {
        let ring = RingSpec::new(5, 1).unwrap();
        let g = Matrix::from_rows(ring, &[[1, 0, 3, 4], [0, 1, 2, 2]]).unwrap();
        let sf = standard_form(&g);
        assert_eq!(reduced_associated(&sf), sf.blocks().get(1, 2).clone());
        assert_eq!(
            reduced_associated(&sf).to_rows(),
            vec![vec![3, 4], vec![2, 2]]
        );
    }

    fn random_input(rng: &mut ChaCha8Rng) -> Matrix {
        let (p, s) = [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1)][rng.random_range(0..5)];
        let ring = RingSpec::new(p, s).unwrap();
        let rows = rng.random_range(0..4);
        let cols = rng.random_range(1..5);
        Matrix::from_fn(ring, rows, cols, |_, _| {
            // bias towards non-units so that higher type groups show up
            let x = rng.random_range(0..ring.modulus());
            if rng.random_bool(0.5) {
                ring.mul(x, p)
            } else {
                x
            }
        })
    }

    #[test]
    fn span_type_and_idempotence_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..300 {
            let input = random_input(&mut rng);
            let ring = input.ring();
            let sf = standard_form(&input);
            let permuted = input.apply_col_permutation(sf.permutation()).unwrap();
            let code = span(&permuted);
            assert_eq!(code, span(sf.matrix()), "{input:?}");
            assert_eq!(span(&input), span(&sf.original_generators()));

            let exponent: usize = sf
                .layout()
                .types()
                .iter()
                .enumerate()
                .map(|(k, t)| (ring.s() as usize - k) * t)
                .sum();
            assert_eq!(code.len() as u64, ring.p().pow(exponent as u32));

            let again = standard_form(sf.matrix());
            assert_eq!(again.matrix(), sf.matrix());
            assert_eq!(again.layout(), sf.layout());
            assert!(again.permutation().is_identity());

            // shape of the standard form
            let layout = sf.layout();
            for i in 1..=layout.s() {
                for d in 0..layout.t(i) {
                    let r = layout.offset(i) + d;
                    for c in 0..layout.offset(i) {
                        assert_eq!(sf.matrix().get(r, c), 0);
                    }
                    for c in layout.offset(i)..layout.offset(i) + layout.t(i) {
                        let expect = if c == r { ring.pow_p(i as u32 - 1) } else { 0 };
                        assert_eq!(sf.matrix().get(r, c), expect);
                    }
                }
            }
            for ((i, j), a) in sf.blocks().iter() {
                let bound = canonical_range(ring, layout.s(), i, j);
                assert!(a.as_slice().iter().all(|&x| x < bound));
            }
        }
    }
}
