//! Smith normal form over Z_D built from elementary operations only.
//!
//! Every step is one of: swap two rows/columns, scale a row/column by a unit,
//! or add a multiple of one row/column to a different one. Column steps are
//! exactly the moves that Clifford gates can realize on a parity-check
//! matrix, which is why the log is kept step by step.

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::matrix::{determinant, ZdMatrix};
use crate::modring::{Modulus, Residue};
use crate::Verdict;

/// One elementary row or column operation. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ElementaryOp {
    SwapRows { a: usize, b: usize },
    SwapCols { a: usize, b: usize },
    /// Multiply row `index` by the unit `factor`.
    ScaleRow { index: usize, factor: Residue },
    ScaleCol { index: usize, factor: Residue },
    /// `row[target] += mult * row[source]`
    AddRows { target: usize, source: usize, mult: Residue },
    /// `col[target] += mult * col[source]`
    AddCols { target: usize, source: usize, mult: Residue },
}

impl ElementaryOp {
    pub fn is_row_op(&self) -> bool {
        matches!(
            self,
            ElementaryOp::SwapRows { .. } | ElementaryOp::ScaleRow { .. } | ElementaryOp::AddRows { .. }
        )
    }

    pub fn is_col_op(&self) -> bool {
        !self.is_row_op()
    }

    /// Applies the operation to `m` in place.
    pub fn apply(&self, m: &mut ZdMatrix) {
        match *self {
            ElementaryOp::SwapRows { a, b } => m.swap_rows(a, b),
            ElementaryOp::SwapCols { a, b } => m.swap_cols(a, b),
            ElementaryOp::ScaleRow { index, factor } => m.scale_row(index, factor),
            ElementaryOp::ScaleCol { index, factor } => m.scale_col(index, factor),
            ElementaryOp::AddRows { target, source, mult } => m.add_row(target, source, mult),
            ElementaryOp::AddCols { target, source, mult } => m.add_col(target, source, mult),
        }
    }

    /// Shifts row indices by `rows` and column indices by `cols`.
    pub fn offset(&self, rows: usize, cols: usize) -> ElementaryOp {
        match *self {
            ElementaryOp::SwapRows { a, b } => ElementaryOp::SwapRows { a: a + rows, b: b + rows },
            ElementaryOp::SwapCols { a, b } => ElementaryOp::SwapCols { a: a + cols, b: b + cols },
            ElementaryOp::ScaleRow { index, factor } => ElementaryOp::ScaleRow { index: index + rows, factor },
            ElementaryOp::ScaleCol { index, factor } => ElementaryOp::ScaleCol { index: index + cols, factor },
            ElementaryOp::AddRows { target, source, mult } => ElementaryOp::AddRows {
                target: target + rows,
                source: source + rows,
                mult,
            },
            ElementaryOp::AddCols { target, source, mult } => ElementaryOp::AddCols {
                target: target + cols,
                source: source + cols,
                mult,
            },
        }
    }
}

impl fmt::Display for ElementaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ElementaryOp::SwapRows { a, b } => write!(f, "swap rows {} and {}", a + 1, b + 1),
            ElementaryOp::SwapCols { a, b } => write!(f, "swap columns {} and {}", a + 1, b + 1),
            ElementaryOp::ScaleRow { index, factor } => write!(f, "multiply row {} by {}", index + 1, factor),
            ElementaryOp::ScaleCol { index, factor } => {
                write!(f, "multiply column {} by {}", index + 1, factor)
            }
            ElementaryOp::AddRows { target, source, mult } => {
                write!(f, "add {} x row {} to row {}", mult, source + 1, target + 1)
            }
            ElementaryOp::AddCols { target, source, mult } => {
                write!(f, "add {} x column {} to column {}", mult, source + 1, target + 1)
            }
        }
    }
}

/// `V · A · W = diag` over Z_D, with the operations that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub v: ZdMatrix,
    pub w: ZdMatrix,
    pub diag: ZdMatrix,
    /// Every operation in execution order; row operations build `v`, column
    /// operations build `w`.
    pub ops: Vec<ElementaryOp>,
}

impl SnfDecomposition {
    pub fn row_log(&self) -> impl Iterator<Item = &ElementaryOp> {
        self.ops.iter().filter(|op| op.is_row_op())
    }

    pub fn col_log(&self) -> impl Iterator<Item = &ElementaryOp> {
        self.ops.iter().filter(|op| op.is_col_op())
    }

    /// Diagonal entries `d_1, ..., d_min(k,m)`, each 0 or a divisor of D.
    pub fn diagonal(&self) -> Vec<Residue> {
        let (k, m) = self.diag.shape();
        (0..k.min(m)).map(|i| self.diag[(i, i)]).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&d| d != 0).count()
    }

    /// Size of the row span of the original matrix: `prod D / gcd(d_i, D)`.
    pub fn row_span_order(&self) -> BigUint {
        let m = self.diag.modulus();
        self.diagonal()
            .iter()
            .fold(BigUint::from(1u32), |acc, &d| acc * (m.get() / m.ideal(d)))
    }
}

struct Reducer {
    a: ZdMatrix,
    v: ZdMatrix,
    w: ZdMatrix,
    ops: Vec<ElementaryOp>,
}

impl Reducer {
    fn apply(&mut self, op: ElementaryOp) {
        op.apply(&mut self.a);
        if op.is_row_op() {
            op.apply(&mut self.v);
        } else {
            op.apply(&mut self.w);
        }
        self.ops.push(op);
    }

    fn modulus(&self) -> Modulus {
        self.a.modulus()
    }

    /// Rescales row `t` so that the pivot equals gcd(pivot, D).
    fn normalize_pivot(&mut self, t: usize) {
        let m = self.modulus();
        let u = m.unit_part(self.a[(t, t)]);
        if u != 1 {
            let factor = m.inverse(u).expect("unit_part returns a unit");
            self.apply(ElementaryOp::ScaleRow { index: t, factor });
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let m = self.modulus();
        let (k, cols) = self.a.shape();
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..k {
            for j in t..cols {
                let v = self.a[(i, j)];
                if v == 0 {
                    continue;
                }
                let g = m.ideal(v);
                if best.is_none_or(|(bg, _, _)| g < bg) {
                    best = Some((g, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Absorbs row/column entries of step `t` that the pivot does not
    /// divide. Returns true if anything changed.
    fn absorb(&mut self, t: usize) -> bool {
        let m = self.modulus();
        let (k, cols) = self.a.shape();
        for j in t + 1..cols {
            let g = self.a[(t, t)];
            let e = self.a[(t, j)];
            if !m.divides(g, e) {
                let c = m.stab_coeff(g, e);
                self.apply(ElementaryOp::AddCols { target: t, source: j, mult: c });
                self.normalize_pivot(t);
                return true;
            }
        }
        for i in t + 1..k {
            let g = self.a[(t, t)];
            let e = self.a[(i, t)];
            if !m.divides(g, e) {
                let c = m.stab_coeff(g, e);
                self.apply(ElementaryOp::AddRows { target: t, source: i, mult: c });
                self.normalize_pivot(t);
                return true;
            }
        }
        false
    }

    fn clear(&mut self, t: usize) {
        let m = self.modulus();
        let (k, cols) = self.a.shape();
        let g = self.a[(t, t)];
        for j in t + 1..cols {
            let q = self.a[(t, j)] / g;
            if q != 0 {
                self.apply(ElementaryOp::AddCols { target: j, source: t, mult: m.neg(q) });
            }
        }
        for i in t + 1..k {
            let q = self.a[(i, t)] / g;
            if q != 0 {
                self.apply(ElementaryOp::AddRows { target: i, source: t, mult: m.neg(q) });
            }
        }
    }

    /// A row of the trailing block holding an entry the pivot does not divide.
    fn undivided_row(&self, t: usize) -> Option<usize> {
        let m = self.modulus();
        let (k, cols) = self.a.shape();
        let g = self.a[(t, t)];
        (t + 1..k).find(|&i| (t + 1..cols).any(|j| !m.divides(g, self.a[(i, j)])))
    }

    fn run(&mut self) {
        let (k, cols) = self.a.shape();
        for t in 0..k.min(cols) {
            let Some((pi, pj)) = self.find_pivot(t) else { break };
            if pi != t {
                self.apply(ElementaryOp::SwapRows { a: t, b: pi });
            }
            if pj != t {
                self.apply(ElementaryOp::SwapCols { a: t, b: pj });
            }
            self.normalize_pivot(t);
            loop {
                if self.absorb(t) {
                    continue;
                }
                self.clear(t);
                match self.undivided_row(t) {
                    Some(i) => self.apply(ElementaryOp::AddRows { target: t, source: i, mult: 1 }),
                    None => break,
                }
            }
        }
    }
}

/// Reduces `a` to Smith normal form over Z_D.
///
/// Pivot rule: among nonzero entries of the trailing block, the one whose
/// ideal gcd(entry, D) is smallest, ties broken by lowest (row, column).
/// Diagonal entries come out as divisors of D (or 0) forming a divisibility
/// chain where 0 counts as D.
pub fn smith_normal_form(a: &ZdMatrix) -> SnfDecomposition {
    let m = a.modulus();
    let (k, cols) = a.shape();
    let mut r = Reducer {
        a: a.clone(),
        v: ZdMatrix::identity(m, k),
        w: ZdMatrix::identity(m, cols),
        ops: Vec::new(),
    };
    r.run();
    SnfDecomposition {
        v: r.v,
        w: r.w,
        diag: r.a,
        ops: r.ops,
    }
}

/// Re-checks a decomposition from scratch.
pub fn verify_snf(a: &ZdMatrix, dec: &SnfDecomposition) -> Verdict {
    let mut verdict = Verdict::default();
    let m = a.modulus();
    let (k, cols) = a.shape();
    if dec.v.shape() != (k, k) || dec.w.shape() != (cols, cols) || dec.diag.shape() != (k, cols) {
        verdict.fail("shape mismatch between matrix and decomposition");
        return verdict;
    }
    if dec.v.mul(a).mul(&dec.w) != dec.diag {
        verdict.fail("V·A·W does not equal the diagonal form");
    }
    for i in 0..k {
        for j in 0..cols {
            if i != j && dec.diag[(i, j)] != 0 {
                verdict.fail(format!("off-diagonal entry ({}, {}) is nonzero", i + 1, j + 1));
            }
        }
    }
    let diag = dec.diagonal();
    for (i, &d) in diag.iter().enumerate() {
        if d != 0 && m.get() % d != 0 {
            verdict.fail(format!("diagonal entry {} = {d} does not divide {m}", i + 1));
        }
    }
    for (i, pair) in diag.windows(2).enumerate() {
        let (lo, hi) = (pair[0], pair[1]);
        if !m.divides(lo, hi) || (lo == 0 && hi != 0) {
            verdict.fail(format!("divisibility chain broken at position {}", i + 1));
        }
    }
    if !m.is_unit(determinant(&dec.v)) {
        verdict.fail("row transform is not invertible");
    }
    if !m.is_unit(determinant(&dec.w)) {
        verdict.fail("column transform is not invertible");
    }
    let mut v = ZdMatrix::identity(m, k);
    let mut w = ZdMatrix::identity(m, cols);
    for op in &dec.ops {
        match *op {
            ElementaryOp::ScaleRow { factor, .. } | ElementaryOp::ScaleCol { factor, .. }
                if !m.is_unit(factor) =>
            {
                verdict.fail(format!("scaling by non-unit in '{op}'"))
            }
            ElementaryOp::AddRows { target, source, .. } | ElementaryOp::AddCols { target, source, .. }
                if target == source =>
            {
                verdict.fail(format!("addition onto itself in '{op}'"))
            }
            _ => {}
        }
        if op.is_row_op() {
            op.apply(&mut v);
        } else {
            op.apply(&mut w);
        }
    }
    if v != dec.v {
        verdict.fail("replaying the row log does not reproduce V");
    }
    if w != dec.w {
        verdict.fail("replaying the column log does not reproduce W");
    }
    verdict
}

/// All solutions of `a · A ≡ b (mod D)` for the row vector `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    /// One solution, or `None` when the system is inconsistent.
    pub particular: Option<Vec<Residue>>,
    /// Generators of the solution module of the homogeneous system.
    pub kernel: Vec<Vec<Residue>>,
}

/// Solves `a · A ≡ b (mod D)` where `A` is k×m, `b` has length m and the
/// unknown `a` has length k.
pub fn solve_linear(a: &ZdMatrix, b: &[Residue]) -> LinearSolution {
    let dec = smith_normal_form(a);
    solve_with(&dec, b)
}

/// Like [`solve_linear`] but reuses an existing decomposition of `A`.
pub fn solve_with(dec: &SnfDecomposition, b: &[Residue]) -> LinearSolution {
    let m = dec.diag.modulus();
    let (k, cols) = dec.diag.shape();
    assert_eq!(b.len(), cols, "right-hand side has the wrong length");
    // a = y·V turns the system into y·diag = b·W.
    let c = dec.w.transpose().mul(&ZdMatrix::from_rows(m, 1, &b.iter().map(|&x| [x]).collect::<Vec<_>>()));
    let c: Vec<Residue> = (0..cols).map(|j| c[(j, 0)]).collect();

    let mut y = vec![0; k];
    let mut kernel_y: Vec<Vec<Residue>> = Vec::new();
    let mut solvable = (k..cols).all(|j| c[j] == 0);
    for i in 0..k {
        let mut unit = vec![0; k];
        if i < cols {
            let d = dec.diag[(i, i)];
            if d == 0 {
                solvable &= c[i] == 0;
                unit[i] = 1;
                kernel_y.push(unit);
            } else {
                if c[i] % d == 0 {
                    y[i] = c[i] / d;
                } else {
                    solvable = false;
                }
                if d != 1 {
                    unit[i] = m.get() / d;
                    kernel_y.push(unit);
                }
            }
        } else {
            unit[i] = 1;
            kernel_y.push(unit);
        }
    }
    LinearSolution {
        particular: solvable.then(|| dec.v.vec_mul(&y)),
        kernel: kernel_y.iter().map(|ky| dec.v.vec_mul(ky)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn md(d: u64) -> Modulus {
        Modulus::new(d).unwrap()
    }

    fn span_size(a: &ZdMatrix) -> usize {
        let m = a.modulus();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut frontier = vec![vec![0; a.cols()]];
        seen.insert(frontier[0].clone());
        while let Some(v) = frontier.pop() {
            for i in 0..a.rows() {
                let next: Vec<u64> = v.iter().zip(a.row(i)).map(|(&x, &y)| m.add(x, y)).collect();
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn zero_matrix() {
        let a = ZdMatrix::zeros(md(6), 3, 4);
        let dec = smith_normal_form(&a);
        assert!(dec.diag.is_zero());
        assert_eq!(dec.v, ZdMatrix::identity(md(6), 3));
        assert_eq!(dec.w, ZdMatrix::identity(md(6), 4));
        assert!(verify_snf(&a, &dec).is_ok());
    }

    #[test]
    fn identity_matrix() {
        let a = ZdMatrix::identity(md(12), 4);
        let dec = smith_normal_form(&a);
        assert_eq!(dec.diag, a);
        assert!(dec.ops.is_empty());
    }

    #[test]
    fn diag_two_three_mod_six() {
        let a = ZdMatrix::from_rows(md(6), 2, &[[2, 0], [0, 3]]);
        assert_eq!(span_size(&a), 6);
        let dec = smith_normal_form(&a);
        assert_eq!(dec.diagonal(), vec![1, 0]);
        assert_eq!(dec.row_span_order(), BigUint::from(6u32));
        assert!(verify_snf(&a, &dec).is_ok());
    }

    #[test]
    fn tampered_diagonal_is_rejected() {
        let a = ZdMatrix::from_rows(md(12), 3, &[[4, 6, 0], [2, 2, 8]]);
        let mut dec = smith_normal_form(&a);
        assert!(verify_snf(&a, &dec).is_ok());
        dec.diag[(0, 0)] = m_bump(dec.diag[(0, 0)]);
        assert!(!verify_snf(&a, &dec).is_ok());
    }

    fn m_bump(v: u64) -> u64 {
        (v + 1) % 12
    }

    #[test]
    fn replaying_col_log_reproduces_w() {
        let m = md(12);
        let a = ZdMatrix::from_rows(m, 3, &[[4, 6, 9], [2, 10, 8], [3, 3, 3]]);
        let dec = smith_normal_form(&a);
        // Fold of elementary matrices: W = E_1 E_2 ... E_t.
        let mut w = ZdMatrix::identity(m, 3);
        for op in dec.col_log() {
            let mut e = ZdMatrix::identity(m, 3);
            op.apply(&mut e);
            w = w.mul(&e);
        }
        assert_eq!(w, dec.w);
        let mut v = ZdMatrix::identity(m, 2 + 1);
        for op in dec.row_log() {
            let mut e = ZdMatrix::identity(m, 3);
            op.apply(&mut e);
            v = e.mul(&v);
        }
        assert_eq!(v, dec.v);
    }

    #[test]
    fn solve_examples() {
        let m4 = md(4);
        let a = ZdMatrix::from_rows(m4, 1, &[[2]]);
        assert_eq!(solve_linear(&a, &[1]).particular, None);

        let sol = solve_linear(&a, &[2]);
        // Exhaustive check over Z_4: solutions of 2a = 2 are {1, 3}.
        let brute: Vec<u64> = (0..4).filter(|x| (2 * x) % 4 == 2).collect();
        assert_eq!(brute, vec![1, 3]);
        assert_eq!(sol.particular, Some(vec![1]));
        assert_eq!(sol.kernel, vec![vec![2]]);

        let zero = solve_linear(&a, &[0]);
        assert_eq!(zero.particular, Some(vec![0]));
    }

    #[test]
    fn solve_inconsistent_extra_columns() {
        let m = md(5);
        let a = ZdMatrix::from_rows(m, 2, &[[1, 0]]);
        assert_eq!(solve_linear(&a, &[3, 1]).particular, None);
        assert_eq!(solve_linear(&a, &[3, 0]).particular, Some(vec![3]));
    }

    #[test]
    fn pivot_rule_is_deterministic() {
        let a = ZdMatrix::from_rows(md(12), 3, &[[4, 6, 9], [2, 10, 8]]);
        assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
    }
}
