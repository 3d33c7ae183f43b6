//! Compressed sparse row matrices with deterministic assembly.

use std::io::Write;

use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

use crate::{Error, Result};

/// Row-compressed sparse matrix. Column ids are sorted and unique in each row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

/// Collects `(row, col, value)` contributions. Duplicates are summed in
/// insertion order, so the result depends only on the order of `push` calls.
#[derive(Clone, Debug, Default)]
pub struct TripletBuilder {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, entries: Vec::new() }
    }

    pub fn with_capacity(nrows: usize, ncols: usize, cap: usize) -> Self {
        Self { nrows, ncols, entries: Vec::with_capacity(cap) }
    }

    pub fn push(&mut self, row: usize, col: usize, val: f64) {
        debug_assert!(row < self.nrows && col < self.ncols, "({row}, {col}) out of bounds");
        self.entries.push((row, col, val));
    }

    pub fn build(self) -> CsrMatrix {
        let mut counts = vec![0usize; self.nrows + 1];
        for &(r, _, _) in &self.entries {
            counts[r + 1] += 1;
        }
        for r in 0..self.nrows {
            counts[r + 1] += counts[r];
        }
        let mut fill = counts.clone();
        let mut by_row = vec![(0usize, 0.0f64); self.entries.len()];
        for &(r, c, v) in &self.entries {
            by_row[fill[r]] = (c, v);
            fill[r] += 1;
        }
        let mut offsets = Vec::with_capacity(self.nrows + 1);
        let mut cols = Vec::with_capacity(by_row.len());
        let mut vals = Vec::with_capacity(by_row.len());
        offsets.push(0);
        for r in 0..self.nrows {
            let row = &mut by_row[counts[r]..counts[r + 1]];
            row.sort_by_key(|e| e.0);
            for &(c, v) in row.iter() {
                if cols.len() > *offsets.last().unwrap() && *cols.last().unwrap() == c {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                }
            }
            offsets.push(cols.len());
        }
        CsrMatrix { nrows: self.nrows, ncols: self.ncols, offsets, cols, vals }
    }
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, offsets: vec![0; nrows + 1], cols: Vec::new(), vals: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self {
            nrows: d.len(),
            ncols: d.len(),
            offsets: (0..=d.len()).collect(),
            cols: (0..d.len()).collect(),
            vals: d.to_vec(),
        }
    }

    /// Copies a dense matrix, keeping entries with `|a_ij| > drop_tol`.
    pub fn from_dense(m: faer::MatRef<'_, f64>, drop_tol: f64) -> Self {
        let mut b = TripletBuilder::new(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if v.abs() > drop_tol {
                    b.push(i, j, v);
                }
            }
        }
        b.build()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }
    pub fn col_indices(&self) -> &[usize] {
        &self.cols
    }
    pub fn values(&self) -> &[f64] {
        &self.vals
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.offsets[i]..self.offsets[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).map_or(0.0, |k| vals[k])
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols, "matvec: dimension mismatch");
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).map(|(c, v)| v * x[*c]).sum();
        }
    }

    /// `xᵀ A x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.matvec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut b = TripletBuilder::with_capacity(self.ncols, self.nrows, self.nnz());
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                b.push(*c, i, *v);
            }
        }
        b.build()
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.vals.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if (self.nrows, self.ncols) != (other.nrows, other.ncols) {
            return Err(Error::InvalidArgument(format!(
                "cannot add {}x{} and {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut t = TripletBuilder::with_capacity(self.nrows, self.ncols, self.nnz() + other.nnz());
        for i in 0..self.nrows {
            for (m, s) in [(self, a), (other, b)] {
                let (cols, vals) = m.row(i);
                for (c, v) in cols.iter().zip(vals) {
                    t.push(i, *c, s * v);
                }
            }
        }
        Ok(t.build())
    }

    /// Sparse product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut t = TripletBuilder::new(self.nrows, other.ncols);
        let mut acc = vec![0.0; other.ncols];
        let mut touched = Vec::new();
        let mut mark = vec![false; other.ncols];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (k, a) in cols.iter().zip(vals) {
                let (ocols, ovals) = other.row(*k);
                for (j, b) in ocols.iter().zip(ovals) {
                    if !mark[*j] {
                        mark[*j] = true;
                        touched.push(*j);
                    }
                    acc[*j] += a * b;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                t.push(i, j, acc[j]);
                acc[j] = 0.0;
                mark[j] = false;
            }
            touched.clear();
        }
        Ok(t.build())
    }

    /// Keeps only the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_map = vec![usize::MAX; self.ncols];
        for (new, old) in cols.iter().enumerate() {
            col_map[*old] = new;
        }
        let mut t = TripletBuilder::new(rows.len(), cols.len());
        for (new_r, old_r) in rows.iter().enumerate() {
            let (cs, vs) = self.row(*old_r);
            for (c, v) in cs.iter().zip(vs) {
                if col_map[*c] != usize::MAX {
                    t.push(new_r, col_map[*c], *v);
                }
            }
        }
        t.build()
    }

    /// `max |A − Aᵀ| / max |A|`, zero for the zero matrix.
    pub fn symmetry_defect(&self) -> f64 {
        if self.nrows != self.ncols {
            return f64::INFINITY;
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let diff = self.lin_comb(1.0, &self.transpose(), -1.0).expect("square");
        diff.max_abs() / scale
    }

    pub fn to_dense(&self) -> Mat<f64> {
        let mut m = Mat::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                m[(i, *c)] = *v;
            }
        }
        m
    }

    pub fn to_faer(&self) -> Result<SparseColMat<usize, f64>> {
        let mut triplets = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            triplets.extend(cols.iter().zip(vals).map(|(c, v)| Triplet::new(i, *c, *v)));
        }
        SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &triplets)
            .map_err(|e| Error::Backend(format!("sparse conversion failed: {e:?}")))
    }

    /// Assembles a block matrix. `blocks[i][j]` must be `row_dims[i] × col_dims[j]`
    /// when present; absent blocks are zero.
    pub fn from_blocks(blocks: &[Vec<Option<&CsrMatrix>>], row_dims: &[usize], col_dims: &[usize]) -> Result<Self> {
        let row_off: Vec<usize> = offsets_of(row_dims);
        let col_off: Vec<usize> = offsets_of(col_dims);
        let mut t = TripletBuilder::new(row_off[row_dims.len()], col_off[col_dims.len()]);
        for (bi, brow) in blocks.iter().enumerate() {
            // Rows are emitted in global order so that the build is a pure merge.
            for local in 0..row_dims[bi] {
                for (bj, block) in brow.iter().enumerate() {
                    let Some(m) = block else { continue };
                    if (m.nrows, m.ncols) != (row_dims[bi], col_dims[bj]) {
                        return Err(Error::InvalidArgument(format!(
                            "block ({bi}, {bj}) is {}x{}, expected {}x{}",
                            m.nrows, m.ncols, row_dims[bi], col_dims[bj]
                        )));
                    }
                    let (cols, vals) = m.row(local);
                    for (c, v) in cols.iter().zip(vals) {
                        t.push(row_off[bi] + local, col_off[bj] + c, *v);
                    }
                }
            }
        }
        Ok(t.build())
    }

    /// MatrixMarket coordinate export. With `symmetric`, only the lower
    /// triangle is written under the `symmetric` qualifier.
    pub fn write_matrix_market<W: Write>(&self, mut out: W, symmetric: bool) -> std::io::Result<()> {
        let keep = |i: usize, j: usize| !symmetric || j <= i;
        let count = (0..self.nrows).map(|i| self.row(i).0.iter().filter(|&&j| keep(i, j)).count()).sum::<usize>();
        let qualifier = if symmetric { "symmetric" } else { "general" };
        writeln!(out, "%%MatrixMarket matrix coordinate real {qualifier}")?;
        writeln!(out, "{} {} {}", self.nrows, self.ncols, count)?;
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (j, v) in cols.iter().zip(vals) {
                if keep(i, *j) {
                    writeln!(out, "{} {} {:.17e}", i + 1, j + 1, v)?;
                }
            }
        }
        Ok(())
    }
}

pub fn offsets_of(dims: &[usize]) -> Vec<usize> {
    let mut off = Vec::with_capacity(dims.len() + 1);
    off.push(0);
    for d in dims {
        off.push(off.last().unwrap() + d);
    }
    off
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CsrMatrix {
        let mut b = TripletBuilder::new(3, 3);
        b.push(0, 0, 1.0);
        b.push(2, 1, 4.0);
        b.push(0, 2, 2.0);
        b.push(0, 0, 0.5);
        b.push(1, 1, 3.0);
        b.build()
    }

    #[test]
    fn duplicates_are_summed_and_rows_sorted() {
        let m = sample();
        assert_eq!(m.nnz(), 4);
        assert_eq!(m.get(0, 0), 1.5);
        assert_eq!(m.row(0).0, &[0, 2]);
        assert_eq!(m.matvec(&[1.0, 1.0, 1.0]), vec![3.5, 3.0, 4.0]);
    }

    #[test]
    fn transpose_and_product_agree_with_dense() {
        let m = sample();
        let p = m.matmul(&m.transpose()).unwrap();
        let d = m.to_dense();
        let want = &d * d.transpose();
        assert!((p.to_dense() - want).norm_max() < 1e-15);
        assert_eq!(p.symmetry_defect(), 0.0);
    }

    #[test]
    fn blocks_are_placed_at_offsets() {
        let a = CsrMatrix::identity(2);
        let b = CsrMatrix::diagonal(&[5.0]);
        let m = CsrMatrix::from_blocks(&[vec![Some(&a), None], vec![None, Some(&b)]], &[2, 1], &[2, 1]).unwrap();
        assert_eq!(m.get(2, 2), 5.0);
        assert_eq!(m.nnz(), 3);
        assert!(CsrMatrix::from_blocks(&[vec![Some(&b)]], &[2], &[2]).is_err());
    }

    #[test]
    fn matrix_market_symmetric_writes_lower_triangle() {
        let mut b = TripletBuilder::new(2, 2);
        b.push(0, 1, 1.0);
        b.push(1, 0, 1.0);
        b.push(1, 1, 2.0);
        let mut buf = Vec::new();
        b.build().write_matrix_market(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap() == "2 2 2");
    }
}
