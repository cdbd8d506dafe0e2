//! Dense integer matrices and Smith normal form.
//!
//! The decomposition returned by [`smith_normal_form`] satisfies
//! `U * M * V = D` with `U`, `V` unimodular and `D` diagonal with
//! non-negative entries forming a divisibility chain `d1 | d2 | ...`.
//! Everything here works at desk scale (entries and dimensions small);
//! arithmetic is plain `i64`.

use alloc::vec;
use alloc::vec::Vec;

/// A dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Square matrix with the given diagonal.
    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = IntMat::zero(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// Build a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMat::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.set(i, j, out.get(i, j) + a * rhs.get(k, j));
                }
            }
        }
        out
    }

    /// The diagonal entries, up to `min(rows, cols)`.
    pub fn diagonal_entries(&self) -> Vec<i64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let t = self.get(a, j);
            self.set(a, j, self.get(b, j));
            self.set(b, j, t);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let t = self.get(i, a);
            self.set(i, a, self.get(i, b));
            self.set(i, b, t);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: i64) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + k * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: i64) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + k * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self.set(r, j, -self.get(r, j));
        }
    }
}

/// The result of [`smith_normal_form`]: `u * m * v = d`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

/// Entry of minimal non-zero absolute value in the submatrix starting at
/// `(t, t)`, scanning row-major so ties resolve deterministically.
fn find_pivot(d: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i64)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let v = d.get(i, j).abs();
            if v != 0 && best.map_or(true, |(_, _, b)| v < b) {
                best = Some((i, j, v));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Smith normal form with tracked unimodular transforms.
///
/// Every row operation applied to the working matrix is mirrored on `u` and
/// every column operation on `v`, so `u * m * v = d` holds throughout.
pub fn smith_normal_form(m: &IntMat) -> SmithDecomposition {
    let mut d = m.clone();
    let mut u = IntMat::identity(m.rows());
    let mut v = IntMat::identity(m.cols());
    let steps = m.rows().min(m.cols());

    let mut t = 0;
    while t < steps {
        let Some((pi, pj)) = find_pivot(&d, t) else {
            break; // remaining submatrix is zero
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        'reduce: loop {
            let pivot = d.get(t, t);
            debug_assert_ne!(pivot, 0);

            // Clear the pivot column. A non-zero remainder shrinks the
            // minimal entry, so re-pick the pivot and start over.
            for i in t + 1..d.rows() {
                let a = d.get(i, t);
                if a == 0 {
                    continue;
                }
                let q = a.div_euclid(pivot);
                if q != 0 {
                    d.add_row_multiple(i, t, -q);
                    u.add_row_multiple(i, t, -q);
                }
                if d.get(i, t) != 0 {
                    let (pi, pj) = find_pivot(&d, t).expect("non-zero entry remains");
                    d.swap_rows(t, pi);
                    u.swap_rows(t, pi);
                    d.swap_cols(t, pj);
                    v.swap_cols(t, pj);
                    continue 'reduce;
                }
            }
            // Clear the pivot row the same way.
            for j in t + 1..d.cols() {
                let a = d.get(t, j);
                if a == 0 {
                    continue;
                }
                let q = a.div_euclid(pivot);
                if q != 0 {
                    d.add_col_multiple(j, t, -q);
                    v.add_col_multiple(j, t, -q);
                }
                if d.get(t, j) != 0 {
                    let (pi, pj) = find_pivot(&d, t).expect("non-zero entry remains");
                    d.swap_rows(t, pi);
                    u.swap_rows(t, pi);
                    d.swap_cols(t, pj);
                    v.swap_cols(t, pj);
                    continue 'reduce;
                }
            }

            // Pivot row and column are clean. Make sure the pivot divides
            // the rest of the submatrix; if not, fold the offending row into
            // row t and reduce again.
            for i in t + 1..d.rows() {
                for j in t + 1..d.cols() {
                    if d.get(i, j) % pivot != 0 {
                        d.add_row_multiple(t, i, 1);
                        u.add_row_multiple(t, i, 1);
                        continue 'reduce;
                    }
                }
            }
            break;
        }

        if d.get(t, t) < 0 {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    SmithDecomposition { u, d, v }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Determinant by cofactor expansion; fine for the small sizes used here.
    fn det(m: &IntMat) -> i64 {
        assert_eq!(m.rows(), m.cols());
        let n = m.rows();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return m.get(0, 0);
        }
        let mut acc = 0i64;
        for j in 0..n {
            let a = m.get(0, j);
            if a == 0 {
                continue;
            }
            let mut minor = IntMat::zero(n - 1, n - 1);
            for i in 1..n {
                let mut cj = 0;
                for k in 0..n {
                    if k == j {
                        continue;
                    }
                    minor.set(i - 1, cj, m.get(i, k));
                    cj += 1;
                }
            }
            let sign = if j % 2 == 0 { 1 } else { -1 };
            acc += sign * a * det(&minor);
        }
        acc
    }

    fn assert_valid_snf(m: &IntMat, s: &SmithDecomposition) {
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "u*m*v != d");
        assert_eq!(det(&s.u).abs(), 1, "u not unimodular");
        assert_eq!(det(&s.v).abs(), 1, "v not unimodular");
        // diagonal, non-negative, divisibility chain
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert_eq!(s.d.get(i, j), 0, "off-diagonal entry");
                }
            }
        }
        let diag = s.d.diagonal_entries();
        for w in diag.windows(2) {
            assert!(w[0] >= 0);
            if w[0] != 0 {
                assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {diag:?}");
            } else {
                assert_eq!(w[1], 0, "non-zero after zero: {diag:?}");
            }
        }
    }

    #[test]
    fn diag_4_6_normalizes_to_2_12() {
        let m = IntMat::diagonal(&[4, 6]);
        let s = smith_normal_form(&m);
        assert_valid_snf(&m, &s);
        // gcd of entries is 2; gcd of 2x2 minors is 24, so the chain is 2, 12.
        assert_eq!(s.d.diagonal_entries(), vec![2, 12]);
    }

    #[test]
    fn zero_matrix_is_fixed() {
        let m = IntMat::zero(1, 1);
        let s = smith_normal_form(&m);
        assert_valid_snf(&m, &s);
        assert_eq!(s.d, IntMat::zero(1, 1));
        assert_eq!(s.u, IntMat::identity(1));
        assert_eq!(s.v, IntMat::identity(1));
    }

    #[test]
    fn identity_is_fixed() {
        let m = IntMat::identity(3);
        let s = smith_normal_form(&m);
        assert_valid_snf(&m, &s);
        assert_eq!(s.d, IntMat::identity(3));
    }

    #[test]
    fn rectangular_shapes() {
        let wide = IntMat::from_rows(&[&[2, 4, 4]]);
        let s = smith_normal_form(&wide);
        assert_valid_snf(&wide, &s);
        assert_eq!(s.d.diagonal_entries(), vec![2]);

        let tall = IntMat::from_rows(&[&[2], &[4]]);
        let s = smith_normal_form(&tall);
        assert_valid_snf(&tall, &s);
        assert_eq!(s.d.diagonal_entries(), vec![2]);
        assert_eq!(s.d.get(1, 0), 0);
    }

    #[test]
    fn negative_entries_normalize() {
        let m = IntMat::from_rows(&[&[-4, 0], &[0, 6]]);
        let s = smith_normal_form(&m);
        assert_valid_snf(&m, &s);
        assert_eq!(s.d.diagonal_entries(), vec![2, 12]);
    }

    #[test]
    fn mixed_example_matches_determinantal_divisors() {
        // gcd of entries = 2; gcd of 2x2 minors = 12; |det| = 144.
        // Invariant factors: 2, 12/2 = 6, 144/12 = 12.
        let m = IntMat::from_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&m);
        assert_valid_snf(&m, &s);
        assert_eq!(det(&m).abs(), 144);
        assert_eq!(s.d.diagonal_entries(), vec![2, 6, 12]);
    }
}
