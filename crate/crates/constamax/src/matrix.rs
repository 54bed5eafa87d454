//! Dense matrices over a single GF(q) context, with the exact linear algebra
//! the certification pipeline needs: rank, RREF, null spaces, and a
//! deterministic "keep original pivot rows" reduction.

use std::sync::Arc;

use crate::field::{FieldCtx, FieldElement};

/// Row-major matrix over one field context. Entries are stored as raw
/// encodings; the context is checked once at the boundary.
#[derive(Clone)]
pub struct MatrixQ {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl std::fmt::Debug for MatrixQ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "MatrixQ {}x{} over {:?}", self.rows, self.cols, self.ctx)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl PartialEq for MatrixQ {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_field(&other.ctx)
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl MatrixQ {
    pub fn zeros(ctx: Arc<FieldCtx>, rows: usize, cols: usize) -> MatrixQ {
        MatrixQ { ctx, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ctx: Arc<FieldCtx>, n: usize) -> MatrixQ {
        let mut m = MatrixQ::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from rows of raw encodings; all rows must share one length.
    pub fn from_enc_rows(ctx: Arc<FieldCtx>, rows: Vec<Vec<u32>>) -> MatrixQ {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        for r in &rows {
            for &v in r {
                assert!((v as u64) < ctx.size(), "encoding out of range");
            }
        }
        let data = rows.into_iter().flatten().collect();
        MatrixQ { ctx, rows: 0, cols, data }.with_rows_recount(cols)
    }

    fn with_rows_recount(mut self, cols: usize) -> MatrixQ {
        self.rows = if cols == 0 { 0 } else { self.data.len() / cols };
        self
    }

    pub fn from_elements(ctx: Arc<FieldCtx>, rows: Vec<Vec<FieldElement>>) -> MatrixQ {
        let enc = rows
            .into_iter()
            .map(|r| r.into_iter().map(|e| e.enc()).collect())
            .collect();
        MatrixQ::from_enc_rows(ctx, enc)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn fe(&self, i: usize, j: usize) -> FieldElement {
        self.ctx.el(self.at(i, j))
    }
    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }
    pub fn enc_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn vstack(parts: &[&MatrixQ]) -> MatrixQ {
        assert!(!parts.is_empty());
        let ctx = parts[0].ctx.clone();
        let cols = parts[0].cols;
        let mut data = Vec::new();
        for p in parts {
            assert!(p.ctx.same_field(&ctx) && p.cols == cols, "incompatible stack");
            data.extend_from_slice(&p.data);
        }
        MatrixQ { ctx, rows: 0, cols, data }.with_rows_recount(cols)
    }

    pub fn submatrix_rows(&self, start: usize, count: usize) -> MatrixQ {
        assert!(start + count <= self.rows);
        MatrixQ {
            ctx: self.ctx.clone(),
            rows: count,
            cols: self.cols,
            data: self.data[start * self.cols..(start + count) * self.cols].to_vec(),
        }
    }

    pub fn transpose(&self) -> MatrixQ {
        let mut out = MatrixQ::zeros(self.ctx.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    pub fn mul(&self, other: &MatrixQ) -> MatrixQ {
        assert!(self.ctx.same_field(&other.ctx) && self.cols == other.rows);
        let ctx = &self.ctx;
        let mut out = MatrixQ::zeros(self.ctx.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let t = ctx.mul_enc(a, other.at(k, j));
                    out.set(i, j, ctx.add_enc(out.at(i, j), t));
                }
            }
        }
        out
    }

    /// self * v^T for a length-cols vector.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let ctx = &self.ctx;
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u32;
                let row = self.row(i);
                for (a, &b) in row.iter().zip(v) {
                    acc = ctx.add_enc(acc, ctx.mul_enc(*a, b));
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Reduced row echelon form plus the pivot column list. Deterministic:
    /// pivots are the first nonzero entries scanning columns left to right.
    pub fn rref(&self) -> (MatrixQ, Vec<usize>) {
        let ctx = self.ctx.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.at(r, col) != 0) else { continue };
            if pr != row {
                for j in 0..m.cols {
                    let t = m.at(pr, j);
                    m.set(pr, j, m.at(row, j));
                    m.set(row, j, t);
                }
            }
            let inv = ctx.inv_enc(m.at(row, col));
            for j in col..m.cols {
                m.set(row, j, ctx.mul_enc(m.at(row, j), inv));
            }
            for r in 0..m.rows {
                if r == row || m.at(r, col) == 0 {
                    continue;
                }
                let f = m.at(r, col);
                for j in col..m.cols {
                    let t = ctx.mul_enc(f, m.at(row, j));
                    m.set(r, j, ctx.sub_enc(m.at(r, j), t));
                }
            }
            pivots.push(col);
            row += 1;
        }
        // drop zero rows
        let kept: Vec<Vec<u32>> = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
        (MatrixQ::from_enc_rows(ctx, kept), pivots)
    }

    /// A basis of { v : self . v^T = 0 }, one row per free column, in the
    /// standard form induced by the RREF (deterministic).
    pub fn null_space(&self) -> MatrixQ {
        let ctx = self.ctx.clone();
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u32; self.cols];
            v[fc] = 1;
            for (pi, &pc) in pivots.iter().enumerate() {
                // pivot variable = -sum(free coefficients)
                v[pc] = ctx.neg_enc(r.at(pi, fc));
            }
            rows.push(v);
        }
        if rows.is_empty() {
            MatrixQ::zeros(ctx, 0, self.cols)
        } else {
            MatrixQ::from_enc_rows(ctx, rows)
        }
    }

    /// Top-down Gaussian elimination that discards dependent rows but keeps
    /// the surviving rows' original contents and order.
    pub fn reduce_keep_pivot_rows(&self) -> MatrixQ {
        let ctx = self.ctx.clone();
        let mut pivots: Vec<(usize, Vec<u32>)> = Vec::new(); // (pivot col, normalized reduced row)
        let mut kept: Vec<Vec<u32>> = Vec::new();
        for i in 0..self.rows {
            let mut work = self.row(i).to_vec();
            for (pc, pv) in &pivots {
                let f = work[*pc];
                if f != 0 {
                    for (w, p) in work.iter_mut().zip(pv) {
                        *w = ctx.sub_enc(*w, ctx.mul_enc(f, *p));
                    }
                }
            }
            if let Some(pc) = work.iter().position(|&v| v != 0) {
                let inv = ctx.inv_enc(work[pc]);
                for w in work.iter_mut() {
                    *w = ctx.mul_enc(*w, inv);
                }
                pivots.push((pc, work));
                kept.push(self.row(i).to_vec());
            }
        }
        if kept.is_empty() {
            MatrixQ::zeros(ctx, 0, self.cols)
        } else {
            MatrixQ::from_enc_rows(ctx, kept)
        }
    }

    /// Row-space membership oracle (precomputed RREF).
    pub fn row_space(&self) -> RowSpace {
        let (r, pivots) = self.rref();
        RowSpace { rref: r, pivots }
    }
}

/// Membership oracle for the row space of a matrix.
pub struct RowSpace {
    rref: MatrixQ,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.rref.cols());
        let ctx = self.rref.ctx();
        let mut work = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let f = work[pc];
            if f != 0 {
                let row = self.rref.row(i);
                for (w, p) in work.iter_mut().zip(row) {
                    *w = ctx.sub_enc(*w, ctx.mul_enc(f, *p));
                }
            }
        }
        work.iter().all(|&x| x == 0)
    }

    pub fn contains_all_rows(&self, m: &MatrixQ) -> bool {
        (0..m.rows()).all(|i| self.contains(m.row(i)))
    }
}
