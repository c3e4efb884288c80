//! The oracle contract of a black-box algebraic structure.
//!
//! A box supplies three capabilities over opaque fixed-length codewords:
//! a sampler producing (almost) uniformly distributed elements, application
//! of the declared operations, and an equality decision. Everything else in
//! the crate is built against this contract, and every call is tallied so
//! that query costs can be reported.

use serde::Serialize;

use crate::element::CryptoElement;
use crate::error::{Error, Result};

/// Kind of algebraic structure behind a box. The ring slot is reserved;
/// nothing in this crate constructs a ring box.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Group,
    Ring,
    Field,
}

/// Named operations a box may declare.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Op {
    // group signature
    Product,
    Inverse,
    Identity,
    // field signature
    Add,
    Neg,
    Zero,
    Mul,
    Inv,
    One,
}

impl Op {
    pub fn arity(self) -> usize {
        match self {
            Op::Product | Op::Add | Op::Mul => 2,
            Op::Inverse | Op::Neg | Op::Inv => 1,
            Op::Identity | Op::Zero | Op::One => 0,
        }
    }
}

/// One entry of a signature's operation list.
#[derive(Clone, Copy, Debug)]
pub struct OpSpec {
    pub op: Op,
    pub arity: usize,
    /// Declared partial points exist (field inverse at zero).
    pub partial: bool,
}

const GROUP_OPS: &[OpSpec] = &[
    OpSpec { op: Op::Product, arity: 2, partial: false },
    OpSpec { op: Op::Inverse, arity: 1, partial: false },
    OpSpec { op: Op::Identity, arity: 0, partial: false },
];

const FIELD_OPS: &[OpSpec] = &[
    OpSpec { op: Op::Add, arity: 2, partial: false },
    OpSpec { op: Op::Neg, arity: 1, partial: false },
    OpSpec { op: Op::Zero, arity: 0, partial: false },
    OpSpec { op: Op::Mul, arity: 2, partial: false },
    OpSpec { op: Op::Inv, arity: 1, partial: true },
    OpSpec { op: Op::One, arity: 0, partial: false },
];

/// The operation list a box of a given kind exposes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Signature {
    pub kind: Kind,
}

impl Signature {
    pub const GROUP: Signature = Signature { kind: Kind::Group };
    pub const FIELD: Signature = Signature { kind: Kind::Field };

    pub fn operations(&self) -> &'static [OpSpec] {
        match self.kind {
            Kind::Group => GROUP_OPS,
            Kind::Field => FIELD_OPS,
            Kind::Ring => &[],
        }
    }

    pub fn declares(&self, op: Op) -> bool {
        self.operations().iter().any(|s| s.op == op)
    }

    /// The (composition, inverse, identity) triple of the box's main
    /// composition: group product for groups, multiplication for fields.
    pub fn composition_ops(&self) -> Result<(Op, Op, Op)> {
        match self.kind {
            Kind::Group => Ok((Op::Product, Op::Inverse, Op::Identity)),
            Kind::Field => Ok((Op::Mul, Op::Inv, Op::One)),
            Kind::Ring => Err(Error::SignatureMismatch(
                "ring signature carries no composition triple".into(),
            )),
        }
    }
}

/// Per-oracle query tallies. Monotone under every oracle call.
#[derive(Clone, Copy, Default, Debug, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub sample_calls: u64,
    pub apply_calls: u64,
    pub equal_calls: u64,
}

impl Counters {
    pub fn total(&self) -> u64 {
        self.sample_calls + self.apply_calls + self.equal_calls
    }

    pub fn since(&self, earlier: &Counters) -> Counters {
        Counters {
            sample_calls: self.sample_calls - earlier.sample_calls,
            apply_calls: self.apply_calls - earlier.apply_calls,
            equal_calls: self.equal_calls - earlier.equal_calls,
        }
    }
}

/// Query-cost summary attached to reports.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct QueryBudgetReport {
    pub sample_calls: u64,
    pub apply_calls: u64,
    pub equal_calls: u64,
    pub wall_time_s: f64,
}

impl QueryBudgetReport {
    pub fn from_counters(counters: Counters, wall_time_s: f64) -> Self {
        QueryBudgetReport {
            sample_calls: counters.sample_calls,
            apply_calls: counters.apply_calls,
            equal_calls: counters.equal_calls,
            wall_time_s,
        }
    }
}

/// Backend of a black box. Implementations supply the three oracles; the
/// [`BlackBox`] wrapper adds validation and query counting.
///
/// A box instance is owned by a single execution thread. Clones carry the
/// full sampler state; use [`BlackBox::fork`] to obtain an independently
/// seeded clone for parallel work.
pub trait BoxOracle: Send {
    fn signature(&self) -> Signature;

    /// Declared codeword length in bits (byte-aligned in this crate).
    fn string_len_bits(&self) -> usize;

    /// Draws a codeword of an (almost) uniformly distributed element.
    fn sample(&mut self) -> Result<CryptoElement>;

    /// Applies a declared operation. Arity and membership of the operation
    /// in the signature are checked by the wrapper before delegation.
    fn apply(&mut self, op: Op, args: &[&CryptoElement]) -> Result<CryptoElement>;

    /// Decides whether two codewords name the same hidden element.
    fn equal(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool>;

    fn boxed_clone(&self) -> Box<dyn BoxOracle>;

    /// Re-seeds the sampler (and any internal random state) in place.
    fn reseed(&mut self, seed: u64);

    /// Human-readable description of where the sampler's distribution
    /// comes from, recorded in lieu of a quantitative uniformity bound.
    fn sampler_provenance(&self) -> String {
        "unspecified".into()
    }
}

/// A black-box algebraic structure: an oracle bundle plus query counters.
pub struct BlackBox {
    oracle: Box<dyn BoxOracle>,
    counters: Counters,
}

impl Clone for BlackBox {
    fn clone(&self) -> Self {
        BlackBox {
            oracle: self.oracle.boxed_clone(),
            counters: self.counters,
        }
    }
}

impl std::fmt::Debug for BlackBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BlackBox")
            .field("kind", &self.signature().kind)
            .field("string_len_bits", &self.string_len_bits())
            .field("counters", &self.counters)
            .finish()
    }
}

impl BlackBox {
    pub fn new(oracle: Box<dyn BoxOracle>) -> Self {
        BlackBox { oracle, counters: Counters::default() }
    }

    pub fn from_oracle<T: BoxOracle + 'static>(oracle: T) -> Self {
        Self::new(Box::new(oracle))
    }

    pub fn signature(&self) -> Signature {
        self.oracle.signature()
    }

    pub fn kind(&self) -> Kind {
        self.oracle.signature().kind
    }

    pub fn string_len_bits(&self) -> usize {
        self.oracle.string_len_bits()
    }

    pub fn string_len_bytes(&self) -> usize {
        self.oracle.string_len_bits().div_ceil(8)
    }

    /// The equality oracle in this crate is exact; the field exists so that
    /// probabilistic deciders can be reported once they appear.
    pub fn equality_error_probability(&self) -> f64 {
        0.0
    }

    pub fn sampler_provenance(&self) -> String {
        self.oracle.sampler_provenance()
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn reset_counters(&mut self) {
        self.counters = Counters::default();
    }

    /// Clone with an independently re-seeded sampler and fresh counters.
    pub fn fork(&self, seed: u64) -> BlackBox {
        let mut oracle = self.oracle.boxed_clone();
        oracle.reseed(seed);
        BlackBox { oracle, counters: Counters::default() }
    }

    pub fn sample(&mut self) -> Result<CryptoElement> {
        self.counters.sample_calls += 1;
        self.oracle.sample()
    }

    pub fn apply(&mut self, op: Op, args: &[&CryptoElement]) -> Result<CryptoElement> {
        let signature = self.oracle.signature();
        if !signature.declares(op) {
            return Err(Error::MissingOperation(op));
        }
        if args.len() != op.arity() {
            return Err(Error::Arity { op, expected: op.arity(), got: args.len() });
        }
        self.counters.apply_calls += 1;
        self.oracle.apply(op, args)
    }

    pub fn equal(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool> {
        let bits = self.oracle.string_len_bits();
        if a.bit_len() != bits || b.bit_len() != bits {
            return Err(Error::ForeignElement);
        }
        self.counters.equal_calls += 1;
        self.oracle.equal(a, b)
    }

    // Convenience wrappers over `apply` for the ops used pervasively.

    /// The box's main composition: group product, field multiplication.
    pub fn compose(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<CryptoElement> {
        let (mul, _, _) = self.signature().composition_ops()?;
        self.apply(mul, &[a, b])
    }

    /// Inverse under the main composition.
    pub fn invert(&mut self, a: &CryptoElement) -> Result<CryptoElement> {
        let (_, inv, _) = self.signature().composition_ops()?;
        self.apply(inv, &[a])
    }

    /// Identity of the main composition (group identity, field one).
    pub fn identity(&mut self) -> Result<CryptoElement> {
        let (_, _, id) = self.signature().composition_ops()?;
        self.apply(id, &[])
    }

    pub fn add(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<CryptoElement> {
        self.apply(Op::Add, &[a, b])
    }

    pub fn neg(&mut self, a: &CryptoElement) -> Result<CryptoElement> {
        self.apply(Op::Neg, &[a])
    }

    pub fn zero(&mut self) -> Result<CryptoElement> {
        self.apply(Op::Zero, &[])
    }

    pub fn one(&mut self) -> Result<CryptoElement> {
        self.apply(Op::One, &[])
    }

    pub fn mul(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<CryptoElement> {
        self.apply(Op::Mul, &[a, b])
    }
}

// A wrapped box is itself an oracle, so boxes can be nested; the outer
// layer sees delegated calls reflected in the inner box's counters.
impl BoxOracle for BlackBox {
    fn signature(&self) -> Signature {
        BlackBox::signature(self)
    }
    fn string_len_bits(&self) -> usize {
        BlackBox::string_len_bits(self)
    }
    fn sample(&mut self) -> Result<CryptoElement> {
        BlackBox::sample(self)
    }
    fn apply(&mut self, op: Op, args: &[&CryptoElement]) -> Result<CryptoElement> {
        BlackBox::apply(self, op, args)
    }
    fn equal(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool> {
        BlackBox::equal(self, a, b)
    }
    fn boxed_clone(&self) -> Box<dyn BoxOracle> {
        Box::new(self.clone())
    }
    fn reseed(&mut self, seed: u64) {
        self.oracle.reseed(seed);
    }
    fn sampler_provenance(&self) -> String {
        self.oracle.sampler_provenance()
    }
}

/// Identity element of the box's main composition.
///
/// Errors when the signature declares no nullary constant for it.
pub fn identity_element(bb: &mut BlackBox) -> Result<CryptoElement> {
    bb.identity()
}

fn repeated_op(
    bb: &mut BlackBox,
    ops: (Op, Op, Op),
    x: &CryptoElement,
    n: i64,
) -> Result<CryptoElement> {
    let (mul, inv, id) = ops;
    if n == 0 {
        return bb.apply(id, &[]);
    }
    let base = if n < 0 { bb.apply(inv, &[x])? } else { x.clone() };
    let mut m = n.unsigned_abs();
    // double-and-add: O(log |n|) applications
    let mut acc: Option<CryptoElement> = None;
    let mut pow = base;
    loop {
        if m & 1 == 1 {
            acc = Some(match acc {
                None => pow.clone(),
                Some(a) => bb.apply(mul, &[&a, &pow])?,
            });
        }
        m >>= 1;
        if m == 0 {
            break;
        }
        pow = bb.apply(mul, &[&pow, &pow])?;
    }
    Ok(acc.expect("nonzero exponent"))
}

/// `x` composed with itself `n` times under the box's main composition,
/// by the classical double-and-add method. Negative `n` uses the inverse,
/// which is partial at a field's zero.
pub fn power(bb: &mut BlackBox, x: &CryptoElement, n: i64) -> Result<CryptoElement> {
    let ops = bb.signature().composition_ops()?;
    repeated_op(bb, ops, x, n)
}

/// `n · x` in a field box's additive group, by double-and-add.
pub fn scalar_mul(bb: &mut BlackBox, x: &CryptoElement, n: i64) -> Result<CryptoElement> {
    if bb.kind() != Kind::Field {
        return Err(Error::SignatureMismatch(
            "scalar multiple needs a field box".into(),
        ));
    }
    repeated_op(bb, (Op::Add, Op::Neg, Op::Zero), x, n)
}

fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// Smallest `m >= 1` with `x^m` the identity, given `bound >= m`.
///
/// When `x^bound` is the identity the order divides `bound` and is found by
/// descending through the prime factorization (O(log² bound) power calls);
/// otherwise a linear scan runs up to `bound`.
pub fn element_order(bb: &mut BlackBox, x: &CryptoElement, bound: u64) -> Result<u64> {
    if bound == 0 {
        return Err(Error::InvalidArgument("order bound must be positive".into()));
    }
    let id = bb.identity()?;
    if bb.equal(x, &id)? {
        return Ok(1);
    }
    let at_bound = power(bb, x, bound as i64)?;
    if bb.equal(&at_bound, &id)? {
        let mut m = bound;
        for (p, _) in trial_division(bound) {
            while m.is_multiple_of(p) {
                let candidate = m / p;
                let y = power(bb, x, candidate as i64)?;
                if bb.equal(&y, &id)? {
                    m = candidate;
                } else {
                    break;
                }
            }
        }
        return Ok(m);
    }
    // order does not divide the bound; scan
    let mut y = x.clone();
    let mut k = 1u64;
    while k <= bound {
        if bb.equal(&y, &id)? {
            return Ok(k);
        }
        y = bb.compose(&y, x)?;
        k += 1;
    }
    Err(Error::OrderBoundExceeded(bound))
}

/// Whether `x` equals some member of `list` under the box's equality oracle.
pub fn member(bb: &mut BlackBox, list: &[CryptoElement], x: &CryptoElement) -> Result<bool> {
    for e in list {
        if bb.equal(e, x)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Breadth-first closure of `gens` under the main composition and inverse,
/// deduplicated through the equality oracle. Errors with the partial list
/// once more than `cap` distinct elements have been collected.
pub fn enumerate_closure(
    bb: &mut BlackBox,
    gens: &[CryptoElement],
    cap: u64,
) -> Result<Vec<CryptoElement>> {
    let id = bb.identity()?;
    let mut found = vec![id];
    let mut step: Vec<CryptoElement> = Vec::with_capacity(gens.len() * 2);
    for g in gens {
        step.push(g.clone());
        step.push(bb.invert(g)?);
    }
    let mut frontier: Vec<CryptoElement> = Vec::new();
    for g in &step {
        if !member(bb, &found, g)? {
            found.push(g.clone());
            frontier.push(g.clone());
        }
    }
    while let Some(e) = frontier.pop() {
        for g in &step {
            let next = bb.compose(&e, g)?;
            if !member(bb, &found, &next)? {
                if found.len() as u64 >= cap {
                    return Err(Error::CapExceeded { cap, partial: found });
                }
                found.push(next.clone());
                frontier.push(next);
            }
        }
    }
    Ok(found)
}
