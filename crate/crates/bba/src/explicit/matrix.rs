//! Enumerable matrix groups GL, SL, and PGL over small explicit fields.

use std::collections::HashMap;

use super::field::{ExplicitField, FieldSpec};
use super::{ExplicitOps, ExplicitStructure};
use crate::blackbox::{Op, Signature};
use crate::error::{Error, Result};
use crate::ENUMERATION_CAP;

const CANDIDATE_CAP: u64 = 2_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatrixFamily {
    Gl,
    Sl,
    Pgl,
}

impl MatrixFamily {
    fn label(self) -> &'static str {
        match self {
            MatrixFamily::Gl => "GL",
            MatrixFamily::Sl => "SL",
            MatrixFamily::Pgl => "PGL",
        }
    }
}

/// Row-major matrix of field element indices.
type Matrix = Vec<u64>;

/// An enumerated matrix group; PGL elements are scalar-normalized so that
/// the first nonzero entry is 1, making coset representatives unique.
#[derive(Clone)]
pub struct MatrixGroup {
    family: MatrixFamily,
    dim: usize,
    field: ExplicitField,
    elements: Vec<Matrix>,
    index: HashMap<Matrix, u64>,
    generators: Vec<u64>,
}

fn group_order(family: MatrixFamily, dim: usize, q: u64) -> Option<u64> {
    // |GL_d(q)| = prod_{i<d} (q^d - q^i); SL and PGL divide out q-1
    let qd = q.checked_pow(dim as u32)?;
    let mut order: u64 = 1;
    let mut qi = 1u64;
    for _ in 0..dim {
        order = order.checked_mul(qd.checked_sub(qi)?)?;
        qi = qi.checked_mul(q)?;
    }
    match family {
        MatrixFamily::Gl => Some(order),
        MatrixFamily::Sl | MatrixFamily::Pgl => Some(order / (q - 1)),
    }
}

impl MatrixGroup {
    pub fn new(family: MatrixFamily, dim: usize, spec: &FieldSpec) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be >= 1".into()));
        }
        let field = ExplicitField::new(spec.clone())?;
        let q = spec.order();
        let order = group_order(family, dim, q)
            .ok_or_else(|| Error::CapExceeded { cap: ENUMERATION_CAP, partial: Vec::new() })?;
        if order > ENUMERATION_CAP {
            return Err(Error::CapExceeded { cap: ENUMERATION_CAP, partial: Vec::new() });
        }
        let cells = dim * dim;
        let candidates = q.checked_pow(cells as u32).filter(|&c| c <= CANDIDATE_CAP).ok_or_else(
            || Error::CapExceeded { cap: CANDIDATE_CAP, partial: Vec::new() },
        )?;

        let mut elements: Vec<Matrix> = Vec::with_capacity(order as usize);
        let mut index: HashMap<Matrix, u64> = HashMap::with_capacity(order as usize);
        for raw in 0..candidates {
            let mut m = Vec::with_capacity(cells);
            let mut k = raw;
            for _ in 0..cells {
                m.push(k % q);
                k /= q;
            }
            let det = determinant(&field, &m, dim);
            let keep = match family {
                MatrixFamily::Gl => det != 0,
                MatrixFamily::Sl => det == 1,
                MatrixFamily::Pgl => det != 0,
            };
            if !keep {
                continue;
            }
            let canonical = match family {
                MatrixFamily::Pgl => normalize(&field, &m),
                _ => m,
            };
            if !index.contains_key(&canonical) {
                index.insert(canonical.clone(), elements.len() as u64);
                elements.push(canonical);
            }
        }
        if elements.len() as u64 != order {
            return Err(Error::ContractViolation(format!(
                "enumerated {} elements of {}{}({}), expected {order}",
                elements.len(),
                family.label(),
                dim,
                field.name(),
            )));
        }
        let mut group = MatrixGroup { family, dim, field, elements, index, generators: Vec::new() };
        group.generators = super::two_generators(&group);
        Ok(group)
    }

    pub fn matrix(&self, index: u64) -> &Matrix {
        &self.elements[index as usize]
    }

    pub fn matrix_index(&self, m: &Matrix) -> Option<u64> {
        let canonical = match self.family {
            MatrixFamily::Pgl => normalize(&self.field, m),
            _ => m.clone(),
        };
        self.index.get(&canonical).copied()
    }

    fn multiply(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let d = self.dim;
        let f = &self.field;
        let mut out = vec![0u64; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0u64;
                for k in 0..d {
                    let prod = f.apply(Op::Mul, &[a[i * d + k], b[k * d + j]]).expect("mul");
                    acc = f.apply(Op::Add, &[acc, prod]).expect("add");
                }
                out[i * d + j] = acc;
            }
        }
        out
    }

    fn inverse(&self, a: &Matrix) -> Matrix {
        // Gauss-Jordan over the field on an augmented [A | I] tableau
        let d = self.dim;
        let f = &self.field;
        let mut left: Vec<u64> = a.clone();
        let mut right: Vec<u64> = (0..d * d)
            .map(|c| if c / d == c % d { 1 } else { 0 })
            .collect();
        for col in 0..d {
            let pivot_row = (col..d)
                .find(|&r| left[r * d + col] != 0)
                .expect("invertible matrix has a pivot");
            for c in 0..d {
                left.swap(col * d + c, pivot_row * d + c);
                right.swap(col * d + c, pivot_row * d + c);
            }
            let pivot_inv = f.apply(Op::Inv, &[left[col * d + col]]).expect("pivot");
            for c in 0..d {
                left[col * d + c] = f.apply(Op::Mul, &[left[col * d + c], pivot_inv]).expect("mul");
                right[col * d + c] =
                    f.apply(Op::Mul, &[right[col * d + c], pivot_inv]).expect("mul");
            }
            for r in 0..d {
                if r == col || left[r * d + col] == 0 {
                    continue;
                }
                let factor = left[r * d + col];
                for c in 0..d {
                    let l = f.apply(Op::Mul, &[factor, left[col * d + c]]).expect("mul");
                    let nl = f.apply(Op::Neg, &[l]).expect("neg");
                    left[r * d + c] = f.apply(Op::Add, &[left[r * d + c], nl]).expect("add");
                    let rr = f.apply(Op::Mul, &[factor, right[col * d + c]]).expect("mul");
                    let nr = f.apply(Op::Neg, &[rr]).expect("neg");
                    right[r * d + c] = f.apply(Op::Add, &[right[r * d + c], nr]).expect("add");
                }
            }
        }
        right
    }
}

fn determinant(field: &ExplicitField, m: &Matrix, dim: usize) -> u64 {
    // Gaussian elimination with row swaps; O(d^3) field ops
    let mut a = m.clone();
    let mut det = 1u64;
    let mut negate = false;
    for col in 0..dim {
        let Some(pivot_row) = (col..dim).find(|&r| a[r * dim + col] != 0) else {
            return 0;
        };
        if pivot_row != col {
            for c in 0..dim {
                a.swap(col * dim + c, pivot_row * dim + c);
            }
            negate = !negate;
        }
        let pivot = a[col * dim + col];
        det = field.apply(Op::Mul, &[det, pivot]).expect("mul");
        let pivot_inv = field.apply(Op::Inv, &[pivot]).expect("inv");
        for r in (col + 1)..dim {
            if a[r * dim + col] == 0 {
                continue;
            }
            let factor = field.apply(Op::Mul, &[a[r * dim + col], pivot_inv]).expect("mul");
            for c in col..dim {
                let sub = field.apply(Op::Mul, &[factor, a[col * dim + c]]).expect("mul");
                let nsub = field.apply(Op::Neg, &[sub]).expect("neg");
                a[r * dim + c] = field.apply(Op::Add, &[a[r * dim + c], nsub]).expect("add");
            }
        }
    }
    if negate {
        det = field.apply(Op::Neg, &[det]).expect("neg");
    }
    det
}

/// Scales a matrix so its first nonzero entry (row-major) is 1.
fn normalize(field: &ExplicitField, m: &Matrix) -> Matrix {
    let first = m.iter().position(|&c| c != 0).expect("nonzero matrix");
    let inv = field.apply(Op::Inv, &[m[first]]).expect("inv");
    m.iter().map(|&c| field.apply(Op::Mul, &[c, inv]).expect("mul")).collect()
}

impl ExplicitOps for MatrixGroup {
    fn signature(&self) -> Signature {
        Signature::GROUP
    }
    fn order(&self) -> u64 {
        self.elements.len() as u64
    }
    fn apply(&self, op: Op, args: &[u64]) -> Result<u64> {
        let d = self.dim;
        let result: Matrix = match op {
            Op::Product => {
                self.multiply(&self.elements[args[0] as usize], &self.elements[args[1] as usize])
            }
            Op::Inverse => self.inverse(&self.elements[args[0] as usize]),
            Op::Identity => (0..d * d).map(|c| if c / d == c % d { 1 } else { 0 }).collect(),
            _ => return Err(Error::MissingOperation(op)),
        };
        let canonical = match self.family {
            MatrixFamily::Pgl => normalize(&self.field, &result),
            _ => result,
        };
        self.index
            .get(&canonical)
            .copied()
            .ok_or_else(|| Error::ContractViolation("product left the group".into()))
    }
    fn describe_element(&self, index: u64) -> String {
        let d = self.dim;
        let m = &self.elements[index as usize];
        let rows: Vec<String> = (0..d)
            .map(|r| {
                let cells: Vec<String> = (0..d)
                    .map(|c| self.field.describe_element(m[r * d + c]))
                    .collect();
                cells.join(",")
            })
            .collect();
        format!("[{}]", rows.join(";"))
    }
    fn name(&self) -> String {
        format!("{}{}({})", self.family.label(), self.dim, self.field.name())
    }
    fn generators(&self) -> Vec<u64> {
        self.generators.clone()
    }
}

/// Enumerated matrix group over the given field; errors when the order
/// exceeds the desk-scale enumeration cap.
pub fn make_matrix_group(
    family: MatrixFamily,
    dim: usize,
    spec: &FieldSpec,
) -> Result<ExplicitStructure> {
    Ok(ExplicitStructure::new(MatrixGroup::new(family, dim, spec)?))
}
