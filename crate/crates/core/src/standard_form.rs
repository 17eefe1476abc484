//! Reduction of a stabilizer presentation to block standard form
//!
//! ```text
//!            r      n-r     r     n-r
//!   r   (    M       0   |  Z1    Z3  )
//!   k-r (    0       0   |  Z2    Z4  )
//! ```
//!
//! with `M = diag(m_1..m_r)` nonzero divisors of D, `Z4` rectangular
//! diagonal with divisor entries, `Z1 M = M Z1^T` and `Z2 M = 0` (mod D).
//!
//! Phase one brings the X-block to Smith form: its column operations become
//! Clifford gates, its row operations become generator products. Phase two
//! does the same for `Z4` using gates on the last n-r qudits and the last
//! k-r generators only; both touch nothing but zeros of the X-block.
//!
//! An all-zero X-block gives `r = 0`.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::checkmatrix::{RawPresentation, StabilizerPresentation};
use crate::clifford::{self, GateOp};
use crate::error::{Error, Result};
use crate::matrix::ZdMatrix;
use crate::modring::Residue;
use crate::snf::{self, ElementaryOp};
use crate::Verdict;

/// One executed step of the reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    /// A row operation on the generators.
    Row { phase: u8, op: ElementaryOp },
    /// A gate together with the paired column operations it performs.
    Gate {
        phase: u8,
        gate: GateOp,
        columns: [ElementaryOp; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardForm {
    pub original: StabilizerPresentation,
    pub r: usize,
    /// Diagonal of `M`.
    pub m: Vec<Residue>,
    pub z1: ZdMatrix,
    pub z2: ZdMatrix,
    pub z3: ZdMatrix,
    pub z4: ZdMatrix,
    pub gates: Vec<GateOp>,
    pub row_ops: Vec<ElementaryOp>,
    /// Gates and row operations in execution order.
    pub steps: Vec<Step>,
    pub result: StabilizerPresentation,
}

struct Pipeline {
    cur: StabilizerPresentation,
    gates: Vec<GateOp>,
    row_ops: Vec<ElementaryOp>,
    steps: Vec<Step>,
}

impl Pipeline {
    fn apply(&mut self, phase: u8, op: ElementaryOp) -> Result<()> {
        let (m, n) = (self.cur.modulus(), self.cur.num_qudits());
        if op.is_row_op() {
            self.cur = self.cur.apply_row_op(&op)?;
            self.row_ops.push(op);
            self.steps.push(Step::Row { phase, op });
        } else {
            let columns = [op, clifford::partner_op(&op, n, m)?];
            let gate = clifford::column_op_to_gate(&columns, n, m)?;
            self.cur = clifford::conjugate_presentation(&[gate], &self.cur)?;
            self.gates.push(gate);
            self.steps.push(Step::Gate { phase, gate, columns });
        }
        Ok(())
    }
}

/// Brings a valid presentation to standard form.
pub fn standardize(s: &StabilizerPresentation) -> Result<StandardForm> {
    s.require_valid()?;
    let (n, k) = (s.num_qudits(), s.num_generators());
    let mut pipe = Pipeline {
        cur: s.clone(),
        gates: Vec::new(),
        row_ops: Vec::new(),
        steps: Vec::new(),
    };

    let xdec = snf::smith_normal_form(&s.x_block());
    for &op in &xdec.ops {
        pipe.apply(1, op)?;
    }
    let m: Vec<Residue> = xdec.diagonal().into_iter().take_while(|&d| d != 0).collect();
    let r = m.len();

    if r < k && r < n {
        let z4 = pipe.cur.matrix().submatrix(r, n + r, k - r, n - r);
        let zdec = snf::smith_normal_form(&z4);
        for op in &zdec.ops {
            pipe.apply(2, op.offset(r, n + r))?;
        }
    }

    let result = pipe.cur;
    let mat = result.matrix();
    let sf = StandardForm {
        original: s.clone(),
        r,
        m,
        z1: mat.submatrix(0, n, r, r),
        z2: mat.submatrix(r, n, k - r, r),
        z3: mat.submatrix(0, n + r, r, n - r),
        z4: mat.submatrix(r, n + r, k - r, n - r),
        gates: pipe.gates,
        row_ops: pipe.row_ops,
        steps: pipe.steps,
        result,
    };

    let verdict = check_standard_invariants(&sf);
    if !verdict.is_ok() {
        return Err(Error::Internal(format!("standard form invariants failed: {verdict}")));
    }
    if sf.result.group_order()? != s.group_order()? {
        return Err(Error::Internal("standardization changed the group order".into()));
    }
    Ok(sf)
}

/// Re-verifies the block layout and commutation constraints from the raw
/// result matrix.
pub fn check_standard_invariants(sf: &StandardForm) -> Verdict {
    let mut v = Verdict::default();
    let res = &sf.result;
    let md = res.modulus();
    let (n, k, r) = (res.num_qudits(), res.num_generators(), sf.r);
    let mat = res.matrix();
    if r > n.min(k) || sf.m.len() != r {
        v.fail(format!("r = {r} is inconsistent with k = {k}, n = {n}"));
        return v;
    }
    for i in 0..k {
        for j in 0..n {
            let expected = if i == j && i < r { sf.m[i] } else { 0 };
            if mat[(i, j)] != expected {
                v.fail(format!("X-block entry ({}, {}) is {}, expected {expected}", i + 1, j + 1, mat[(i, j)]));
            }
        }
    }
    for (i, &mi) in sf.m.iter().enumerate() {
        if mi == 0 || md.get() % mi != 0 {
            v.fail(format!("M entry {} = {mi} is not a nonzero divisor of {md}", i + 1));
        }
    }
    let blocks = [
        ("Z1", &sf.z1, 0, n, r, r),
        ("Z2", &sf.z2, r, n, k - r, r),
        ("Z3", &sf.z3, 0, n + r, r, n - r),
        ("Z4", &sf.z4, r, n + r, k - r, n - r),
    ];
    for (name, block, r0, c0, rows, cols) in blocks {
        if block.shape() != (rows, cols) || &mat.submatrix(r0, c0, rows, cols) != block {
            v.fail(format!("{name} does not match the result matrix"));
        }
    }
    let z4 = &sf.z4;
    for i in 0..z4.rows() {
        for j in 0..z4.cols() {
            let e = z4[(i, j)];
            if i != j && e != 0 {
                v.fail(format!("Z4 off-diagonal entry ({}, {}) is nonzero", i + 1, j + 1));
            }
            if i == j && e != 0 && md.get() % e != 0 {
                v.fail(format!("Z4 diagonal entry {} = {e} does not divide {md}", i + 1));
            }
        }
    }
    let mut mmat = ZdMatrix::zeros(md, r, r);
    for (i, &mi) in sf.m.iter().enumerate() {
        mmat[(i, i)] = mi;
    }
    if sf.z1.shape() == (r, r) && sf.z1.mul(&mmat) != mmat.mul(&sf.z1.transpose()) {
        v.fail("Z1·M != M·Z1^T (mod D)");
    }
    if sf.z2.shape() == (k - r, r) && !sf.z2.mul(&mmat).is_zero() {
        v.fail("Z2·M != 0 (mod D)");
    }
    v
}

impl StandardForm {
    pub fn is_already_standard(&self) -> bool {
        self.gates.is_empty()
    }

    /// Applies the recorded gates to the original generators, then the
    /// recorded row operations.
    pub fn replay(&self) -> Result<StabilizerPresentation> {
        replay(&self.original, &self.gates, &self.row_ops)
    }

    pub fn record(&self) -> StandardFormRecord {
        let md = self.original.modulus();
        StandardFormRecord {
            format: 1,
            d: md.get(),
            n: self.original.num_qudits(),
            k: self.original.num_generators(),
            r: self.r,
            m: self.m.clone(),
            z1: self.z1.to_rows(),
            z2: self.z2.to_rows(),
            z3: self.z3.to_rows(),
            z4: self.z4.to_rows(),
            gates: self.gates.clone(),
            row_ops: self.row_ops.clone(),
            steps: self.steps.clone(),
            input: self.original.clone().into(),
            result: self.result.clone().into(),
            group_order: self.result.group_order().map(|o| o.to_string()).unwrap_or_default(),
            code_dimension: self.result.code_dimension().map(|o| o.to_string()).unwrap_or_default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.record()).expect("standard form record serializes")
    }
}

/// Conjugates by `gates` in order, then applies `row_ops` in order.
pub fn replay(
    original: &StabilizerPresentation,
    gates: &[GateOp],
    row_ops: &[ElementaryOp],
) -> Result<StabilizerPresentation> {
    let mut cur = clifford::conjugate_presentation(gates, original)?;
    for op in row_ops {
        cur = cur.apply_row_op(op)?;
    }
    Ok(cur)
}

/// JSON form of a [`StandardForm`] (`format: 1`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StandardFormRecord {
    pub format: u32,
    #[serde(rename = "D")]
    pub d: u64,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    #[serde(rename = "M")]
    pub m: Vec<u64>,
    #[serde(rename = "Z1")]
    pub z1: Vec<Vec<u64>>,
    #[serde(rename = "Z2")]
    pub z2: Vec<Vec<u64>>,
    #[serde(rename = "Z3")]
    pub z3: Vec<Vec<u64>>,
    #[serde(rename = "Z4")]
    pub z4: Vec<Vec<u64>>,
    pub gates: Vec<GateOp>,
    pub row_ops: Vec<ElementaryOp>,
    pub steps: Vec<Step>,
    pub input: RawPresentation,
    pub result: RawPresentation,
    pub group_order: String,
    pub code_dimension: String,
}

impl StandardFormRecord {
    /// Replays the recorded gates and row operations on the recorded input.
    pub fn replay(&self) -> Result<StabilizerPresentation> {
        let input = StabilizerPresentation::try_from(self.input.clone())?;
        replay(&input, &self.gates, &self.row_ops)
    }

    pub fn result_presentation(&self) -> Result<StabilizerPresentation> {
        StabilizerPresentation::try_from(self.result.clone())
    }
}

fn write_matrix_with_phases(out: &mut String, s: &StabilizerPresentation, split: usize) {
    let n = s.num_qudits();
    let mat = s.matrix();
    let width = mat.to_rows().iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1);
    for i in 0..s.num_generators() {
        let cells = |range: std::ops::Range<usize>| {
            range
                .map(|j| format!("{:>width$}", mat[(i, j)]))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let x = cells(0..n);
        let z = cells(n..2 * n);
        let sep = if i == split && i > 0 { "  --\n" } else { "" };
        let _ = writeln!(out, "{sep}  [{x} | {z}]  phase {}", s.phases()[i]);
    }
}

fn fmt_block(m: &ZdMatrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return format!("({}x{}, empty)", m.rows(), m.cols());
    }
    m.to_rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn counted(count: usize, one: &str, many: &str) -> String {
    format!("{count} {}", if count == 1 { one } else { many })
}

/// Human-readable derivation. The `result:` section is a stabilizer file
/// that parses back to `sf.result`.
pub fn transcript(sf: &StandardForm) -> String {
    let s = &sf.original;
    let md = s.modulus();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "standard form over Z_{md}: n = {}, k = {}",
        s.num_qudits(),
        s.num_generators()
    );
    let _ = writeln!(out, "input generators:");
    for g in s.to_generators() {
        let _ = writeln!(out, "  {g}");
    }
    let _ = writeln!(out, "input parity-check matrix (X | Z) with phase vector:");
    write_matrix_with_phases(&mut out, s, 0);

    let mut last_phase = 0;
    for step in &sf.steps {
        let phase = match step {
            Step::Row { phase, .. } | Step::Gate { phase, .. } => *phase,
        };
        if phase != last_phase {
            let title = if phase == 1 {
                "phase 1: Smith normal form of the X-block".to_string()
            } else {
                format!(
                    "phase 2: Smith normal form of Z4 (generators {}..{}, qudits {}..{})",
                    sf.r + 1,
                    s.num_generators(),
                    sf.r + 1,
                    s.num_qudits()
                )
            };
            let _ = writeln!(out, "{title}");
            last_phase = phase;
        }
        match step {
            Step::Row { op, .. } => {
                let _ = writeln!(out, "  row   {op}");
            }
            Step::Gate { gate, columns, .. } => {
                let _ = writeln!(out, "  gate  {gate:<14} {}; {}", columns[0], columns[1]);
            }
        }
    }

    let _ = writeln!(out, "blocks: r = {}", sf.r);
    let m_str = sf.m.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
    let _ = writeln!(out, "  M  = diag({m_str})");
    let _ = writeln!(out, "  Z1 = {}", fmt_block(&sf.z1));
    let _ = writeln!(out, "  Z2 = {}", fmt_block(&sf.z2));
    let _ = writeln!(out, "  Z3 = {}", fmt_block(&sf.z3));
    let _ = writeln!(out, "  Z4 = {}", fmt_block(&sf.z4));

    let verdict = check_standard_invariants(sf);
    let _ = writeln!(out, "checks:");
    let _ = writeln!(out, "  block layout, Z1·M = M·Z1^T, Z2·M = 0 (mod {md}): {verdict}");
    let order = |p: &StabilizerPresentation| p.group_order().map(|o| o.to_string()).unwrap_or_else(|e| e.to_string());
    let _ = writeln!(out, "  group order: input {}, result {}", order(s), order(&sf.result));
    let _ = writeln!(
        out,
        "  code dimension: {}",
        sf.result
            .code_dimension()
            .map(|k: BigUint| k.to_string())
            .unwrap_or_else(|e| e.to_string())
    );
    let _ = writeln!(out, "  phases are tracked exactly through every step");

    let _ = writeln!(out, "result:");
    out.push_str(&crate::textfmt::format_stabilizer_file(&sf.result));
    let _ = writeln!(out, "result parity-check matrix (X | Z) with phase vector:");
    write_matrix_with_phases(&mut out, &sf.result, sf.r);
    if sf.is_already_standard() {
        let _ = writeln!(out, "already standard: no gates needed ({} row operations)", sf.row_ops.len());
    } else {
        let _ = writeln!(
            out,
            "standard form reached with {} and {}",
            counted(sf.gates.len(), "gate", "gates"),
            counted(sf.row_ops.len(), "row operation", "row operations")
        );
    }
    out
}

/// Extracts the `result:` stabilizer file from a transcript.
pub fn transcript_result(text: &str) -> Option<&str> {
    let start = text.find("\nresult:\n")? + "\nresult:\n".len();
    let rest = &text[start..];
    let end = rest.find("result parity-check matrix").unwrap_or(rest.len());
    Some(&rest[..end])
}
