//! Dense row-major matrices over Z_D.

use std::fmt;

use crate::modring::{Modulus, Residue};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZdMatrix {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<Residue>,
}

impl ZdMatrix {
    pub fn zeros(modulus: Modulus, rows: usize, cols: usize) -> Self {
        ZdMatrix {
            modulus,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(modulus: Modulus, size: usize) -> Self {
        let mut m = Self::zeros(modulus, size, size);
        for i in 0..size {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows, reducing every entry mod D.
    ///
    /// Panics if the rows have different lengths.
    pub fn from_rows<R: AsRef<[Residue]>>(modulus: Modulus, cols: usize, rows: &[R]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().map(|&v| modulus.reduce(v)));
        }
        ZdMatrix {
            modulus,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn row(&self, i: usize) -> &[Residue] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Residue] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Residue> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Residue>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Copies the block with top-left corner `(r0, c0)` and the given shape.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut s = Self::zeros(self.modulus, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                s[(i, j)] = self[(r0 + i, c0 + j)];
            }
        }
        s
    }

    pub fn mul(&self, other: &ZdMatrix) -> ZdMatrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not chain");
        let m = self.modulus;
        let mut out = Self::zeros(m, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = m.add(out[(i, j)], m.mul(a, other[(l, j)]));
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Residue]) -> Vec<Residue> {
        assert_eq!(v.len(), self.rows);
        let m = self.modulus;
        let mut out = vec![0; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = m.add(*o, m.mul(a, self[(i, j)]));
            }
        }
        out
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    pub fn scale_row(&mut self, i: usize, q: Residue) {
        let m = self.modulus;
        for v in self.row_mut(i) {
            *v = m.mul(*v, q);
        }
    }

    pub fn scale_col(&mut self, j: usize, q: Residue) {
        let m = self.modulus;
        for r in 0..self.rows {
            let v = m.mul(self[(r, j)], q);
            self[(r, j)] = v;
        }
    }

    /// `row[target] += mult * row[source]`
    pub fn add_row(&mut self, target: usize, source: usize, mult: Residue) {
        let m = self.modulus;
        for c in 0..self.cols {
            let v = m.add(self[(target, c)], m.mul(mult, self[(source, c)]));
            self[(target, c)] = v;
        }
    }

    /// `col[target] += mult * col[source]`
    pub fn add_col(&mut self, target: usize, source: usize, mult: Residue) {
        let m = self.modulus;
        for r in 0..self.rows {
            let v = m.add(self[(r, target)], m.mul(mult, self[(r, source)]));
            self[(r, target)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for ZdMatrix {
    type Output = Residue;

    fn index(&self, (i, j): (usize, usize)) -> &Residue {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ZdMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Residue {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for ZdMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .data
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Determinant mod D, computed with Euclidean row reduction on integer
/// representatives. Only unimodular steps are used, so the result is exact
/// in Z_D even when D is composite.
pub fn determinant(a: &ZdMatrix) -> Residue {
    assert_eq!(a.rows(), a.cols(), "determinant of a non-square matrix");
    let m = a.modulus();
    let size = a.rows();
    let mut w = a.clone();
    let mut det: Residue = 1;
    for c in 0..size {
        // Euclid down column c until a single nonzero remains at or below row c.
        loop {
            let nonzero: Vec<usize> = (c..size).filter(|&r| w[(r, c)] != 0).collect();
            if nonzero.is_empty() {
                return 0;
            }
            let pivot = *nonzero.iter().min_by_key(|&&r| w[(r, c)]).unwrap();
            if pivot != c {
                w.swap_rows(pivot, c);
                det = m.neg(det);
            }
            if nonzero.len() == 1 {
                break;
            }
            let p = w[(c, c)];
            for r in c + 1..size {
                let q = w[(r, c)] / p;
                if q != 0 {
                    w.add_row(r, c, m.neg(q % m.get()));
                }
            }
        }
        det = m.mul(det, w[(c, c)]);
    }
    det
}
