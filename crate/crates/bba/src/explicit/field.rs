//! Explicit finite fields `F_{p^n}` in polynomial-basis representation.
//!
//! Elements are indexed by their coefficient vectors read as base-`p`
//! digits (little-endian, constant term first), so index 0 is zero and
//! index 1 is one for every field.

use serde::Serialize;

use super::{ExplicitOps, ExplicitStructure};
use crate::blackbox::{Op, Signature};
use crate::error::{Error, Result};
use crate::ENUMERATION_CAP;

/// Parameters of an explicit field: characteristic, extension degree, and a
/// monic irreducible modulus of that degree (coefficient list, little-endian,
/// including the leading 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldSpec {
    pub p: u64,
    pub n: u32,
    pub modulus: Vec<u64>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// --- polynomial arithmetic over F_p (little-endian coefficient vectors) ---

fn poly_trim(c: &mut Vec<u64>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inverse(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let coeff = r[dr] * lead_inv % p;
        let shift = dr - dm;
        for i in 0..=dm {
            let sub = coeff * m[i] % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn mod_pow(base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = base as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        e >>= 1;
    }
    acc as u64
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    mod_pow(a % p, p - 2, p)
}

/// Exhaustive factor search: irreducible iff no monic divisor of degree
/// at most half the modulus degree divides it.
fn poly_is_irreducible(modulus: &[u64], p: u64) -> bool {
    let deg = modulus.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // enumerate monic polynomials of degree d by base-p counting
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut k = idx;
            for _ in 0..d {
                g.push(k % p);
                k /= p;
            }
            g.push(1);
            if poly_rem(modulus, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds and validates a spec; when no modulus is given, the
    /// lexicographically smallest monic irreducible of degree `n` is chosen.
    pub fn new(p: u64, n: u32, modulus: Option<Vec<u64>>) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::Validation(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::Validation("extension degree must be >= 1".into()));
        }
        let order = (p as u128).checked_pow(n).ok_or_else(|| {
            Error::Validation("field order overflows".into())
        })?;
        if order > ENUMERATION_CAP as u128 {
            return Err(Error::CapExceeded { cap: ENUMERATION_CAP, partial: Vec::new() });
        }
        let modulus = match modulus {
            Some(m) => {
                let mut m = m.iter().map(|&c| c % p).collect::<Vec<_>>();
                poly_trim(&mut m);
                if m.len() != n as usize + 1 {
                    return Err(Error::Validation(format!(
                        "modulus degree {} does not match extension degree {n}",
                        m.len().saturating_sub(1)
                    )));
                }
                if m[n as usize] != 1 {
                    return Err(Error::Validation("modulus must be monic".into()));
                }
                if n > 1 && !poly_is_irreducible(&m, p) {
                    return Err(Error::Validation("modulus is reducible".into()));
                }
                m
            }
            None => Self::canonical_modulus(p, n),
        };
        Ok(FieldSpec { p, n, modulus })
    }

    fn canonical_modulus(p: u64, n: u32) -> Vec<u64> {
        if n == 1 {
            return vec![0, 1];
        }
        let count = p.pow(n);
        for idx in 0..count {
            let mut m = Vec::with_capacity(n as usize + 1);
            let mut k = idx;
            for _ in 0..n {
                m.push(k % p);
                k /= p;
            }
            m.push(1);
            if poly_is_irreducible(&m, p) {
                return m;
            }
        }
        unreachable!("an irreducible of every degree exists over F_p")
    }

    /// Spec for the field of the given prime-power order with the canonical
    /// modulus.
    pub fn from_order(q: u64) -> Result<FieldSpec> {
        if q < 2 {
            return Err(Error::Validation("field order must be >= 2".into()));
        }
        let mut p = q;
        let mut smallest = q;
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                smallest = d;
                break;
            }
            d += 1;
        }
        p = smallest;
        let mut n = 0u32;
        let mut rest = q;
        while rest > 1 {
            if !rest.is_multiple_of(p) {
                return Err(Error::Validation(format!("{q} is not a prime power")));
            }
            rest /= p;
            n += 1;
        }
        FieldSpec::new(p, n, None)
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.n)
    }

    /// Parses `p^n[/modulus]`, e.g. `3^4/x^4+x+2` or just `7`; an `f:`
    /// prefix is accepted and ignored.
    pub fn parse(s: &str) -> Result<FieldSpec> {
        let s = s.trim().strip_prefix("f:").unwrap_or(s.trim());
        let (order_part, modulus_part) = match s.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let (p, n) = match order_part.split_once('^') {
            Some((p, n)) => (
                p.trim().parse::<u64>().map_err(|_| bad_field(s))?,
                n.trim().parse::<u32>().map_err(|_| bad_field(s))?,
            ),
            None => (order_part.trim().parse::<u64>().map_err(|_| bad_field(s))?, 1),
        };
        let modulus = match modulus_part {
            Some(m) => Some(parse_polynomial(m, p)?),
            None => None,
        };
        FieldSpec::new(p, n, modulus)
    }

    pub fn modulus_string(&self) -> String {
        format_polynomial(&self.modulus)
    }
}

fn bad_field(s: &str) -> Error {
    Error::InvalidArgument(format!("cannot parse field spec `{s}`; expected p^n[/modulus]"))
}

/// Parses `x^4+x+2` style polynomials (terms joined by `+`, coefficients
/// reduced mod `p`).
pub fn parse_polynomial(s: &str, p: u64) -> Result<Vec<u64>> {
    let mut coeffs: Vec<u64> = Vec::new();
    for raw in s.split('+') {
        let term = raw.trim().replace([' ', '*'], "");
        if term.is_empty() {
            return Err(Error::InvalidArgument(format!("empty term in polynomial `{s}`")));
        }
        let (coeff, degree) = if let Some(rest) = term.split_once('x') {
            let c = if rest.0.is_empty() {
                1
            } else {
                rest.0.parse::<u64>().map_err(|_| {
                    Error::InvalidArgument(format!("bad coefficient in `{term}`"))
                })?
            };
            let d = if rest.1.is_empty() {
                1
            } else {
                let e = rest.1.strip_prefix('^').ok_or_else(|| {
                    Error::InvalidArgument(format!("bad exponent in `{term}`"))
                })?;
                e.parse::<usize>().map_err(|_| {
                    Error::InvalidArgument(format!("bad exponent in `{term}`"))
                })?
            };
            (c, d)
        } else {
            let c = term.parse::<u64>().map_err(|_| {
                Error::InvalidArgument(format!("bad constant term `{term}`"))
            })?;
            (c, 0)
        };
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, 0);
        }
        coeffs[degree] = (coeffs[degree] + coeff) % p;
    }
    Ok(coeffs)
}

pub fn format_polynomial(coeffs: &[u64]) -> String {
    let mut terms: Vec<String> = Vec::new();
    for (d, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (d, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".into(),
            (1, c) => format!("{c}x"),
            (d, 1) => format!("x^{d}"),
            (d, c) => format!("{c}x^{d}"),
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// `F_{p^n}` as polynomials over `F_p` modulo the spec's modulus.
#[derive(Clone, Debug)]
pub struct ExplicitField {
    spec: FieldSpec,
    /// x^k reduced mod the modulus, for k in n..=2n-2.
    reductions: Vec<Vec<u64>>,
}

impl ExplicitField {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let n = spec.n as usize;
        let mut reductions = Vec::new();
        if n > 1 {
            for k in n..=2 * n - 2 {
                let mut xk = vec![0u64; k + 1];
                xk[k] = 1;
                reductions.push(poly_rem(&xk, &spec.modulus, spec.p));
            }
        }
        Ok(ExplicitField { spec, reductions })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn digits(&self, index: u64) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.spec.n as usize);
        let mut k = index;
        for _ in 0..self.spec.n {
            d.push(k % self.spec.p);
            k /= self.spec.p;
        }
        d
    }

    pub fn index(&self, digits: &[u64]) -> u64 {
        let mut idx = 0u64;
        for &d in digits.iter().rev() {
            idx = idx * self.spec.p + (d % self.spec.p);
        }
        idx
    }

    fn mul_indices(&self, a: u64, b: u64) -> u64 {
        let p = self.spec.p;
        let n = self.spec.n as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let prod = poly_mul(&da, &db, p);
        let mut out = vec![0u64; n];
        for (k, &c) in prod.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if k < n {
                out[k] = (out[k] + c) % p;
            } else {
                for (i, &r) in self.reductions[k - n].iter().enumerate() {
                    out[i] = (out[i] + c * r) % p;
                }
            }
        }
        self.index(&out)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64; // index of one
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_indices(acc, base);
            }
            base = self.mul_indices(base, base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius power: `a^(p^k)`.
    pub fn frobenius(&self, a: u64, k: u32) -> u64 {
        let mut out = a;
        for _ in 0..(k % self.spec.n) {
            out = self.pow(out, self.spec.p);
        }
        out
    }

    /// Canonical multiplicative generator: the smallest index of order q-1.
    pub fn primitive_element(&self) -> u64 {
        let q = self.spec.order();
        if q == 2 {
            return 1;
        }
        let group = q - 1;
        let mut factors = Vec::new();
        let mut rest = group;
        let mut d = 2u64;
        while d * d <= rest {
            if rest.is_multiple_of(d) {
                factors.push(d);
                while rest.is_multiple_of(d) {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 {
            factors.push(rest);
        }
        'candidates: for e in 2..q {
            for &f in &factors {
                if self.pow(e, group / f) == 1 {
                    continue 'candidates;
                }
            }
            return e;
        }
        unreachable!("every finite field has a primitive element")
    }
}

impl ExplicitOps for ExplicitField {
    fn signature(&self) -> Signature {
        Signature::FIELD
    }
    fn order(&self) -> u64 {
        self.spec.order()
    }
    fn apply(&self, op: Op, args: &[u64]) -> Result<u64> {
        let p = self.spec.p;
        Ok(match op {
            Op::Add => {
                let a = self.digits(args[0]);
                let b = self.digits(args[1]);
                let sum: Vec<u64> = a.iter().zip(&b).map(|(&x, &y)| (x + y) % p).collect();
                self.index(&sum)
            }
            Op::Neg => {
                let a = self.digits(args[0]);
                let neg: Vec<u64> = a.iter().map(|&x| (p - x) % p).collect();
                self.index(&neg)
            }
            Op::Zero => 0,
            Op::One => 1,
            Op::Mul => self.mul_indices(args[0], args[1]),
            Op::Inv => {
                if args[0] == 0 {
                    return Err(Error::UndefinedInverse);
                }
                self.pow(args[0], self.spec.order() - 2)
            }
            _ => return Err(Error::MissingOperation(op)),
        })
    }
    fn describe_element(&self, index: u64) -> String {
        format_polynomial(&self.digits(index))
    }
    fn name(&self) -> String {
        if self.spec.n == 1 {
            format!("F{}", self.spec.p)
        } else {
            format!("F{}^{}", self.spec.p, self.spec.n)
        }
    }
}

/// Explicit field for a validated spec.
pub fn make_field(spec: &FieldSpec) -> Result<ExplicitStructure> {
    Ok(ExplicitStructure::new(ExplicitField::new(spec.clone())?))
}
