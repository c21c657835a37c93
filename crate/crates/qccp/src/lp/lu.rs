//! Sparse LU factorization of the simplex basis.
//!
//! Left-looking factorization with partial pivoting by magnitude; columns
//! are processed in ascending fill order (fewest nonzeros first). Solves
//! use a dense work vector, so a full FTRAN or BTRAN costs O(size + nnz of
//! the factors). Between refactorizations the basis is updated in product
//! form (eta vectors), handled by the caller.

/// Row-permuted LU factors of one basis matrix.
///
/// `L` has an implicit unit diagonal and is stored column-wise as
/// multipliers on not-yet-pivotal rows; `U` is stored column-wise against
/// factor steps, diagonal separate.
pub(crate) struct LuFactors {
    size: usize,
    l_cols: Vec<Vec<(usize, f64)>>,
    /// Off-diagonal U entries (earlier factor step, value).
    u_cols: Vec<Vec<(usize, f64)>>,
    u_diag: Vec<f64>,
    /// factor step -> original row index
    pivot_row: Vec<usize>,
    /// factor step -> basis position of the column it eliminated
    col_of_step: Vec<usize>,
}

const PIVOT_MIN: f64 = 1e-11;
const DROP: f64 = 1e-14;

impl LuFactors {
    /// Factors the matrix whose `columns[j]` is the sparse column at basis
    /// position `j`. Returns `None` when the matrix is numerically
    /// singular.
    pub fn factor(columns: &[Vec<(usize, f64)>]) -> Option<LuFactors> {
        let size = columns.len();
        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by_key(|&j| columns[j].len());

        let mut l_cols: Vec<Vec<(usize, f64)>> = Vec::with_capacity(size);
        let mut u_cols: Vec<Vec<(usize, f64)>> = Vec::with_capacity(size);
        let mut u_diag: Vec<f64> = Vec::with_capacity(size);
        let mut pivot_row: Vec<usize> = Vec::with_capacity(size);
        let mut is_pivotal = vec![false; size];
        let mut work = vec![0.0f64; size];
        let mut touched = Vec::new();

        for &j in &order {
            for &(row, val) in &columns[j] {
                work[row] = val;
                touched.push(row);
            }
            // apply previous eliminations in factor order
            for t in 0..pivot_row.len() {
                let val = work[pivot_row[t]];
                if val == 0.0 {
                    continue;
                }
                for &(row, mult) in &l_cols[t] {
                    if work[row] == 0.0 {
                        touched.push(row);
                    }
                    work[row] -= mult * val;
                }
            }
            // U entries sit at pivot rows of earlier steps
            let mut ucol = Vec::new();
            for t in 0..pivot_row.len() {
                let val = work[pivot_row[t]];
                if val.abs() > DROP {
                    ucol.push((t, val));
                }
            }
            // pivot: largest remaining magnitude
            let mut piv = usize::MAX;
            let mut piv_abs = PIVOT_MIN;
            for &row in &touched {
                if !is_pivotal[row] && work[row].abs() > piv_abs {
                    piv = row;
                    piv_abs = work[row].abs();
                }
            }
            if piv == usize::MAX {
                return None;
            }
            let piv_val = work[piv];
            let mut lcol = Vec::new();
            for &row in &touched {
                if !is_pivotal[row] && row != piv && work[row].abs() > DROP {
                    lcol.push((row, work[row] / piv_val));
                }
            }
            lcol.sort_unstable_by_key(|&(row, _)| row);
            lcol.dedup_by_key(|&mut (row, _)| row);
            is_pivotal[piv] = true;
            l_cols.push(lcol);
            u_cols.push(ucol);
            u_diag.push(piv_val);
            pivot_row.push(piv);
            for &row in &touched {
                work[row] = 0.0;
            }
            touched.clear();
        }

        Some(LuFactors {
            size,
            l_cols,
            u_cols,
            u_diag,
            pivot_row,
            col_of_step: order,
        })
    }

    /// Solves `B z = rhs`. `rhs` is indexed by row; the result is indexed
    /// by basis position.
    pub fn ftran(&self, rhs: &mut [f64], out: &mut [f64]) {
        debug_assert_eq!(rhs.len(), self.size);
        for t in 0..self.size {
            let val = rhs[self.pivot_row[t]];
            if val == 0.0 {
                continue;
            }
            for &(row, mult) in &self.l_cols[t] {
                rhs[row] -= mult * val;
            }
        }
        for slot in out.iter_mut() {
            *slot = 0.0;
        }
        for t in (0..self.size).rev() {
            let v = rhs[self.pivot_row[t]];
            if v == 0.0 {
                continue;
            }
            let z = v / self.u_diag[t];
            for &(t2, val) in &self.u_cols[t] {
                rhs[self.pivot_row[t2]] -= val * z;
            }
            out[self.col_of_step[t]] = z;
        }
    }

    /// Solves `Bᵀ y = c`. `c` is indexed by basis position; the result is
    /// indexed by row.
    pub fn btran(&self, c: &[f64], y: &mut [f64]) {
        debug_assert_eq!(c.len(), self.size);
        let mut u = vec![0.0f64; self.size];
        for t in 0..self.size {
            let mut v = c[self.col_of_step[t]];
            for &(t2, val) in &self.u_cols[t] {
                v -= val * u[t2];
            }
            u[t] = v / self.u_diag[t];
        }
        for t in (0..self.size).rev() {
            let mut v = u[t];
            for &(row, mult) in &self.l_cols[t] {
                v -= mult * y[row];
            }
            y[self.pivot_row[t]] = v;
        }
    }
}
