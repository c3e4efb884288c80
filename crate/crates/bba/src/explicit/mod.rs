//! Concrete, fully enumerable finite structures used as ground truth.
//!
//! An explicit structure knows its order, applies its operations on
//! canonical element indices `0..order`, and can describe elements for
//! reports. These are the plaintext sides of encryption wrappers and the
//! targets of recognition.

mod field;
mod matrix;
mod perm;

pub use field::{make_field, ExplicitField, FieldSpec};
pub use matrix::{make_matrix_group, MatrixFamily, MatrixGroup};
pub use perm::{
    make_alternating_group, make_dihedral_group, make_symmetric_group, PermutationGroup,
};

use std::collections::HashMap;
use std::sync::Arc;

use crate::blackbox::{Kind, Op, Signature};
use crate::error::{Error, Result};
use crate::ENUMERATION_CAP;

/// Operations of an explicit structure on element indices `0..order`.
pub trait ExplicitOps: Send + Sync {
    fn signature(&self) -> Signature;
    fn order(&self) -> u64;
    fn apply(&self, op: Op, args: &[u64]) -> Result<u64>;
    fn describe_element(&self, index: u64) -> String;
    fn name(&self) -> String;

    /// A generating set (group structures only; empty otherwise).
    fn generators(&self) -> Vec<u64> {
        Vec::new()
    }

    /// `Some(n)` when the structure is the cyclic group of order `n`.
    fn cyclic_order(&self) -> Option<u64> {
        None
    }
}

/// A shareable handle to an explicit structure.
#[derive(Clone)]
pub struct ExplicitStructure {
    inner: Arc<dyn ExplicitOps>,
}

impl std::fmt::Debug for ExplicitStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ExplicitStructure({}, order {})", self.name(), self.order())
    }
}

impl ExplicitStructure {
    pub fn new<T: ExplicitOps + 'static>(ops: T) -> Self {
        ExplicitStructure { inner: Arc::new(ops) }
    }

    pub fn signature(&self) -> Signature {
        self.inner.signature()
    }

    pub fn kind(&self) -> Kind {
        self.inner.signature().kind
    }

    pub fn order(&self) -> u64 {
        self.inner.order()
    }

    pub fn name(&self) -> String {
        self.inner.name()
    }

    pub fn apply(&self, op: Op, args: &[u64]) -> Result<u64> {
        for &a in args {
            if a >= self.order() {
                return Err(Error::ForeignElement);
            }
        }
        if !self.signature().declares(op) {
            return Err(Error::MissingOperation(op));
        }
        if args.len() != op.arity() {
            return Err(Error::Arity { op, expected: op.arity(), got: args.len() });
        }
        self.inner.apply(op, args)
    }

    pub fn describe(&self, index: u64) -> String {
        self.inner.describe_element(index)
    }

    pub fn generators(&self) -> Vec<u64> {
        self.inner.generators()
    }

    pub fn cyclic_order(&self) -> Option<u64> {
        self.inner.cyclic_order()
    }

    /// Index of the element whose description matches `label` exactly.
    pub fn index_of_label(&self, label: &str) -> Option<u64> {
        (0..self.order()).find(|&i| self.describe(i) == label)
    }

    pub fn compose(&self, a: u64, b: u64) -> Result<u64> {
        let (mul, _, _) = self.signature().composition_ops()?;
        self.apply(mul, &[a, b])
    }

    pub fn invert(&self, a: u64) -> Result<u64> {
        let (_, inv, _) = self.signature().composition_ops()?;
        self.apply(inv, &[a])
    }

    pub fn identity_index(&self) -> Result<u64> {
        let (_, _, id) = self.signature().composition_ops()?;
        self.apply(id, &[])
    }

    /// Order of an element under the main composition.
    pub fn element_order(&self, a: u64) -> Result<u64> {
        let id = self.identity_index()?;
        let mut x = a;
        let mut k = 1u64;
        while x != id {
            x = self.compose(x, a)?;
            k += 1;
            if k > self.order() {
                return Err(Error::ContractViolation(
                    "element order exceeds structure order".into(),
                ));
            }
        }
        Ok(k)
    }

    /// Index-level closure of `gens` under composition and inverse.
    pub fn closure(&self, gens: &[u64]) -> Result<Vec<u64>> {
        let id = self.identity_index()?;
        let mut seen = vec![false; self.order() as usize];
        let mut out = vec![id];
        seen[id as usize] = true;
        let mut step = Vec::with_capacity(gens.len() * 2);
        for &g in gens {
            step.push(g);
            step.push(self.invert(g)?);
        }
        let mut frontier = vec![id];
        while let Some(e) = frontier.pop() {
            for &g in &step {
                let next = self.compose(e, g)?;
                if !seen[next as usize] {
                    seen[next as usize] = true;
                    out.push(next);
                    frontier.push(next);
                }
            }
        }
        Ok(out)
    }

    /// Exhaustive law check: identity and inverse laws over every element,
    /// associativity (and field axioms) over every triple for small orders,
    /// over index-striped triples for larger ones.
    pub fn check_laws_exhaustive(&self) -> Result<()> {
        let n = self.order();
        if n > ENUMERATION_CAP {
            return Err(Error::InvalidArgument("structure too large to check".into()));
        }
        match self.kind() {
            Kind::Group => self.check_group_laws(),
            Kind::Field => self.check_field_laws(),
            Kind::Ring => Err(Error::SignatureMismatch("no ring structures exist".into())),
        }
    }

    fn triples(&self) -> Vec<(u64, u64, u64)> {
        let n = self.order();
        if n <= 128 {
            let mut v = Vec::with_capacity((n * n * n) as usize);
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        v.push((a, b, c));
                    }
                }
            }
            v
        } else {
            // deterministic stripe keeps larger structures affordable
            let mut v = Vec::new();
            let stride = (n * n * n / 2_000_000).max(1);
            let mut t = 0u64;
            while t < n * n * n {
                v.push((t / (n * n), (t / n) % n, t % n));
                t += stride;
            }
            v
        }
    }

    fn check_group_laws(&self) -> Result<()> {
        let n = self.order();
        let id = self.identity_index()?;
        for a in 0..n {
            if self.compose(id, a)? != a || self.compose(a, id)? != a {
                return Err(Error::ContractViolation(format!("identity law fails at {a}")));
            }
            let inv = self.invert(a)?;
            if self.compose(a, inv)? != id || self.compose(inv, a)? != id {
                return Err(Error::ContractViolation(format!("inverse law fails at {a}")));
            }
        }
        for (a, b, c) in self.triples() {
            let ab_c = self.compose(self.compose(a, b)?, c)?;
            let a_bc = self.compose(a, self.compose(b, c)?)?;
            if ab_c != a_bc {
                return Err(Error::ContractViolation(format!(
                    "associativity fails at ({a},{b},{c})"
                )));
            }
        }
        Ok(())
    }

    fn check_field_laws(&self) -> Result<()> {
        let n = self.order();
        let zero = self.apply(Op::Zero, &[])?;
        let one = self.apply(Op::One, &[])?;
        for a in 0..n {
            if self.apply(Op::Add, &[zero, a])? != a || self.apply(Op::Mul, &[one, a])? != a {
                return Err(Error::ContractViolation(format!("unit laws fail at {a}")));
            }
            let neg = self.apply(Op::Neg, &[a])?;
            if self.apply(Op::Add, &[a, neg])? != zero {
                return Err(Error::ContractViolation(format!("negation fails at {a}")));
            }
            if a != zero {
                let inv = self.apply(Op::Inv, &[a])?;
                if self.apply(Op::Mul, &[a, inv])? != one {
                    return Err(Error::ContractViolation(format!("inverse fails at {a}")));
                }
            }
        }
        for (a, b, c) in self.triples() {
            let add_assoc = self.apply(Op::Add, &[self.apply(Op::Add, &[a, b])?, c])?
                == self.apply(Op::Add, &[a, self.apply(Op::Add, &[b, c])?])?;
            let mul_assoc = self.apply(Op::Mul, &[self.apply(Op::Mul, &[a, b])?, c])?
                == self.apply(Op::Mul, &[a, self.apply(Op::Mul, &[b, c])?])?;
            let distributive = self.apply(Op::Mul, &[a, self.apply(Op::Add, &[b, c])?])?
                == self.apply(
                    Op::Add,
                    &[self.apply(Op::Mul, &[a, b])?, self.apply(Op::Mul, &[a, c])?],
                )?;
            if !(add_assoc && mul_assoc && distributive) {
                return Err(Error::ContractViolation(format!(
                    "ring axioms fail at ({a},{b},{c})"
                )));
            }
        }
        for a in 0..n.min(512) {
            for b in 0..n.min(512) {
                if self.apply(Op::Add, &[a, b])? != self.apply(Op::Add, &[b, a])?
                    || self.apply(Op::Mul, &[a, b])? != self.apply(Op::Mul, &[b, a])?
                {
                    return Err(Error::ContractViolation(format!(
                        "commutativity fails at ({a},{b})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The cyclic group of order `n` written additively: index arithmetic mod `n`.
#[derive(Clone, Debug)]
pub struct CyclicGroup {
    n: u64,
}

impl CyclicGroup {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cyclic group needs order >= 1".into()));
        }
        Ok(CyclicGroup { n })
    }
}

impl ExplicitOps for CyclicGroup {
    fn signature(&self) -> Signature {
        Signature::GROUP
    }
    fn order(&self) -> u64 {
        self.n
    }
    fn apply(&self, op: Op, args: &[u64]) -> Result<u64> {
        Ok(match op {
            Op::Product => (args[0] + args[1]) % self.n,
            Op::Inverse => (self.n - args[0]) % self.n,
            Op::Identity => 0,
            _ => return Err(Error::MissingOperation(op)),
        })
    }
    fn describe_element(&self, index: u64) -> String {
        index.to_string()
    }
    fn name(&self) -> String {
        format!("Z{}", self.n)
    }
    fn generators(&self) -> Vec<u64> {
        if self.n > 1 {
            vec![1]
        } else {
            vec![0]
        }
    }
    fn cyclic_order(&self) -> Option<u64> {
        Some(self.n)
    }
}

/// Group of units modulo `n` under multiplication; order phi(n).
#[derive(Clone, Debug)]
pub struct UnitGroup {
    n: u64,
    elements: Vec<u64>,
    index: HashMap<u64, u64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl UnitGroup {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("unit group needs modulus >= 2".into()));
        }
        if n > ENUMERATION_CAP {
            return Err(Error::CapExceeded { cap: ENUMERATION_CAP, partial: Vec::new() });
        }
        let elements: Vec<u64> = (1..n).filter(|&a| gcd(a, n) == 1).collect();
        let index = elements.iter().enumerate().map(|(i, &r)| (r, i as u64)).collect();
        Ok(UnitGroup { n, elements, index })
    }

    pub fn residue(&self, index: u64) -> u64 {
        self.elements[index as usize]
    }

    pub fn index_of_residue(&self, residue: u64) -> Option<u64> {
        self.index.get(&(residue % self.n)).copied()
    }
}

impl ExplicitOps for UnitGroup {
    fn signature(&self) -> Signature {
        Signature::GROUP
    }
    fn order(&self) -> u64 {
        self.elements.len() as u64
    }
    fn apply(&self, op: Op, args: &[u64]) -> Result<u64> {
        match op {
            Op::Product => {
                let a = self.elements[args[0] as usize] as u128;
                let b = self.elements[args[1] as usize] as u128;
                let r = (a * b % self.n as u128) as u64;
                Ok(self.index[&r])
            }
            Op::Inverse => {
                // a^(phi-1) = a^{-1}; exponentiate by repeated squaring
                let phi = self.elements.len() as u64;
                let mut acc = 1u128;
                let mut base = self.elements[args[0] as usize] as u128;
                let mut e = phi - 1;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % self.n as u128;
                    }
                    base = base * base % self.n as u128;
                    e >>= 1;
                }
                Ok(self.index[&(acc as u64)])
            }
            Op::Identity => Ok(self.index[&1]),
            _ => Err(Error::MissingOperation(op)),
        }
    }
    fn describe_element(&self, index: u64) -> String {
        self.elements[index as usize].to_string()
    }
    fn name(&self) -> String {
        format!("U{}", self.n)
    }
    fn generators(&self) -> Vec<u64> {
        greedy_generators_fallback(self)
    }
}

// Greedy generator search implemented directly over ExplicitOps to avoid
// wrapper juggling; closure is index-level BFS.
pub(crate) fn greedy_generators_fallback(s: &dyn ExplicitOps) -> Vec<u64> {
    let order = s.order();
    let (mul, inv, ident) = match s.signature().composition_ops() {
        Ok(t) => t,
        Err(_) => return Vec::new(),
    };
    let id = s.apply(ident, &[]).expect("identity");
    let closure = |gens: &[u64]| -> Vec<bool> {
        let mut seen = vec![false; order as usize];
        seen[id as usize] = true;
        let mut step = Vec::new();
        for &g in gens {
            step.push(g);
            step.push(s.apply(inv, &[g]).expect("inverse"));
        }
        let mut frontier = vec![id];
        while let Some(e) = frontier.pop() {
            for &g in &step {
                let next = s.apply(mul, &[e, g]).expect("product");
                if !seen[next as usize] {
                    seen[next as usize] = true;
                    frontier.push(next);
                }
            }
        }
        seen
    };
    let mut gens: Vec<u64> = Vec::new();
    let mut seen = closure(&gens);
    while seen.iter().filter(|&&b| b).count() < order as usize {
        let next = (0..order).find(|&i| !seen[i as usize]).expect("incomplete closure");
        gens.push(next);
        seen = closure(&gens);
    }
    gens
}

/// Searches for a two-element generating set in canonical index order.
/// Falls back to the greedy set when no pair generates.
pub(crate) fn two_generators(s: &dyn ExplicitOps) -> Vec<u64> {
    let order = s.order();
    if order <= 2 {
        return greedy_generators_fallback(s);
    }
    let count = |seen: &[bool]| seen.iter().filter(|&&b| b).count() as u64;
    let closure_of = |gens: &[u64]| -> Vec<bool> {
        let (mul, inv, ident) = s.signature().composition_ops().expect("group");
        let id = s.apply(ident, &[]).expect("identity");
        let mut seen = vec![false; order as usize];
        seen[id as usize] = true;
        let mut step = Vec::new();
        for &g in gens {
            step.push(g);
            step.push(s.apply(inv, &[g]).expect("inverse"));
        }
        let mut frontier = vec![id];
        while let Some(e) = frontier.pop() {
            for &g in &step {
                let next = s.apply(mul, &[e, g]).expect("product");
                if !seen[next as usize] {
                    seen[next as usize] = true;
                    frontier.push(next);
                }
            }
        }
        seen
    };
    for a in 1..order {
        if count(&closure_of(&[a])) == order {
            return vec![a];
        }
        for b in (a + 1)..order {
            if count(&closure_of(&[a, b])) == order {
                return vec![a, b];
            }
        }
    }
    greedy_generators_fallback(s)
}

/// Direct product of two explicit group structures; index `i*|B| + j`.
#[derive(Clone)]
pub struct ProductStructure {
    a: ExplicitStructure,
    b: ExplicitStructure,
}

impl ProductStructure {
    pub fn new(a: ExplicitStructure, b: ExplicitStructure) -> Result<Self> {
        if a.kind() != Kind::Group || b.kind() != Kind::Group {
            return Err(Error::SignatureMismatch(
                "explicit products are defined for groups".into(),
            ));
        }
        if a.order().checked_mul(b.order()).is_none_or(|o| o > ENUMERATION_CAP) {
            return Err(Error::CapExceeded { cap: ENUMERATION_CAP, partial: Vec::new() });
        }
        Ok(ProductStructure { a, b })
    }
}

impl ExplicitOps for ProductStructure {
    fn signature(&self) -> Signature {
        Signature::GROUP
    }
    fn order(&self) -> u64 {
        self.a.order() * self.b.order()
    }
    fn apply(&self, op: Op, args: &[u64]) -> Result<u64> {
        let nb = self.b.order();
        let parts: Vec<(u64, u64)> = args.iter().map(|&x| (x / nb, x % nb)).collect();
        let left: Vec<u64> = parts.iter().map(|p| p.0).collect();
        let right: Vec<u64> = parts.iter().map(|p| p.1).collect();
        let la = self.a.apply(op, &left)?;
        let lb = self.b.apply(op, &right)?;
        Ok(la * nb + lb)
    }
    fn describe_element(&self, index: u64) -> String {
        let nb = self.b.order();
        format!("({}, {})", self.a.describe(index / nb), self.b.describe(index % nb))
    }
    fn name(&self) -> String {
        format!("{}x{}", self.a.name(), self.b.name())
    }
    fn generators(&self) -> Vec<u64> {
        let nb = self.b.order();
        let mut gens: Vec<u64> = self.a.generators().iter().map(|&g| g * nb).collect();
        gens.extend(self.b.generators());
        gens
    }
}

/// Cyclic group `Z_n` under addition mod `n`.
pub fn make_cyclic_group(n: u64) -> Result<ExplicitStructure> {
    Ok(ExplicitStructure::new(CyclicGroup::new(n)?))
}

/// Multiplicative group of units mod `n`.
pub fn make_unit_group(n: u64) -> Result<ExplicitStructure> {
    Ok(ExplicitStructure::new(UnitGroup::new(n)?))
}

/// Direct product of two explicit groups.
pub fn make_product(a: &ExplicitStructure, b: &ExplicitStructure) -> Result<ExplicitStructure> {
    Ok(ExplicitStructure::new(ProductStructure::new(a.clone(), b.clone())?))
}

/// Parses a structure descriptor: `z:n`, `units:n`, `s:n`, `d:n`, `a:n`,
/// `f:p^n[/modulus]`, `gl2-q`, `sl2-q`, `pgl2-q` (`:` and `-` separators
/// are interchangeable).
pub fn parse_structure(descriptor: &str) -> Result<ExplicitStructure> {
    let d = descriptor.trim();
    let lower = d.to_ascii_lowercase();
    let split = |s: &str| -> Option<(String, String)> {
        let idx = s.find([':', '-'])?;
        Some((s[..idx].to_string(), s[idx + 1..].to_string()))
    };
    let Some((head, tail)) = split(&lower) else {
        return Err(descriptor_error(d));
    };
    let parse_num = |s: &str| -> Result<u64> {
        s.parse::<u64>().map_err(|_| descriptor_error(d))
    };
    match head.as_str() {
        "z" => make_cyclic_group(parse_num(&tail)?),
        "units" | "u" => make_unit_group(parse_num(&tail)?),
        "s" => make_symmetric_group(parse_num(&tail)? as usize),
        "d" => make_dihedral_group(parse_num(&tail)? as usize),
        "a" => make_alternating_group(parse_num(&tail)? as usize),
        "f" => {
            let spec = FieldSpec::parse(&tail)?;
            make_field(&spec)
        }
        _ => {
            if let Some(rest) = head.strip_prefix("pgl") {
                return matrix_from_descriptor(MatrixFamily::Pgl, rest, &tail, d);
            }
            if let Some(rest) = head.strip_prefix("sl") {
                return matrix_from_descriptor(MatrixFamily::Sl, rest, &tail, d);
            }
            if let Some(rest) = head.strip_prefix("gl") {
                return matrix_from_descriptor(MatrixFamily::Gl, rest, &tail, d);
            }
            Err(descriptor_error(d))
        }
    }
}

fn matrix_from_descriptor(
    family: MatrixFamily,
    dim: &str,
    q: &str,
    original: &str,
) -> Result<ExplicitStructure> {
    let dim: usize = dim.parse().map_err(|_| descriptor_error(original))?;
    let q: u64 = q.parse().map_err(|_| descriptor_error(original))?;
    let spec = FieldSpec::from_order(q)?;
    make_matrix_group(family, dim, &spec)
}

fn descriptor_error(d: &str) -> Error {
    let mut msg = format!(
        "unknown structure descriptor `{d}`; expected one of z:n, units:n, s:n, d:n, a:n, \
         f:p^n[/modulus], gl2-q, sl2-q, pgl2-q"
    );
    let hints: [(&str, &str); 6] = [
        ("un", "units:n"),
        ("zn", "z:n"),
        ("sym", "s:n"),
        ("fp", "f:p^n"),
        ("sl", "sl2-q"),
        ("pg", "pgl2-q"),
    ];
    let lower = d.to_ascii_lowercase();
    for (prefix, suggestion) in hints {
        if lower.starts_with(&prefix[..1]) {
            msg.push_str(&format!("; did you mean `{suggestion}`?"));
            break;
        }
    }
    Error::InvalidArgument(msg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_arithmetic() {
        let z6 = make_cyclic_group(6).unwrap();
        assert_eq!(z6.compose(2, 5).unwrap(), 1);
        assert_eq!(z6.element_order(4).unwrap(), 3);
        let z1 = make_cyclic_group(1).unwrap();
        assert_eq!(z1.order(), 1);
        z6.check_laws_exhaustive().unwrap();
    }

    #[test]
    fn unit_group_orders_match_euler_phi() {
        // brute-force phi as the independent check
        let phi = |n: u64| (1..n).filter(|&a| gcd(a, n) == 1).count() as u64;
        for n in [7u64, 561, 2] {
            let u = make_unit_group(n).unwrap();
            assert_eq!(u.order(), phi(n), "phi({n})");
        }
        assert_eq!(make_unit_group(2).unwrap().order(), 1);
        make_unit_group(15).unwrap().check_laws_exhaustive().unwrap();
    }

    #[test]
    fn product_structure_composes_componentwise() {
        let z4 = make_cyclic_group(4).unwrap();
        let z2 = make_cyclic_group(2).unwrap();
        let p = make_product(&z4, &z2).unwrap();
        assert_eq!(p.order(), 8);
        // no element of order 8
        let max_order = (0..8).map(|i| p.element_order(i).unwrap()).max().unwrap();
        assert_eq!(max_order, 4);
        p.check_laws_exhaustive().unwrap();
    }

    #[test]
    fn greedy_generators_generate() {
        let u = make_unit_group(561).unwrap();
        let gens = u.generators();
        assert!(!gens.is_empty());
        assert_eq!(u.closure(&gens).unwrap().len() as u64, u.order());
    }

    #[test]
    fn descriptors_parse() {
        assert_eq!(parse_structure("z:15").unwrap().order(), 15);
        assert_eq!(parse_structure("units-561").unwrap().order(), 320);
        assert_eq!(parse_structure("s:4").unwrap().order(), 24);
        assert_eq!(parse_structure("sl2-3").unwrap().order(), 24);
        assert_eq!(parse_structure("pgl2:3").unwrap().order(), 24);
        assert_eq!(parse_structure("f:3^2").unwrap().order(), 9);
        let err = parse_structure("unitz:5").unwrap_err();
        assert!(err.to_string().contains("did you mean"));
    }
}
