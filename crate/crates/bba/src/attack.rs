//! The end-to-end known-plaintext attack: constructive recognition of the
//! black box, resolution of the residual automorphism from known
//! plaintexts, and recovery of both the decryption and encryption maps.
//! Also the black-box Miller-Rabin primality demo.
//!
//! Recognition alone yields maps `alpha: X -> A` and `beta: A -> X` with
//! `alpha ∘ beta = id`, but the attacker reads plaintexts only up to the
//! unknown automorphism `delta = alpha ∘ E`. Fitting `delta` against a few
//! known pairs finishes the job: `E⁻¹ = delta⁻¹ ∘ alpha` and
//! `E = beta ∘ delta`.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;

use crate::blackbox::{power, BlackBox, Counters, Kind, QueryBudgetReport};
use crate::constructions::enumerate_box_expecting;
use crate::element::CryptoElement;
use crate::encrypt::{encrypt, transparent_box, transparent_codeword, EncryptionOracle};
use crate::error::{Error, Result};
use crate::explicit::{
    make_field, make_unit_group, ExplicitField, ExplicitStructure, FieldSpec, UnitGroup,
};
use crate::recognition::{recognize_field, RecognitionMethod};
use crate::util::derive_seed;

// ------------------------------------------------------- table machinery

/// A finite group captured as a multiplication table with derived data.
struct TableGroup {
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    element_orders: Vec<usize>,
    generators: Vec<usize>,
}

impl TableGroup {
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    fn from_fn(order: usize, f: &dyn Fn(usize, usize) -> usize) -> Result<TableGroup> {
        let mut mul = vec![0usize; order * order];
        for a in 0..order {
            for b in 0..order {
                let v = f(a, b);
                if v >= order {
                    return Err(Error::ContractViolation("product left the table".into()));
                }
                mul[a * order + b] = v;
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] == x && mul[x * order + e] == x))
            .ok_or_else(|| Error::ContractViolation("no identity in table".into()))?;
        let mut element_orders = vec![0usize; order];
        for x in 0..order {
            let mut acc = x;
            let mut k = 1usize;
            while acc != identity {
                acc = mul[acc * order + x];
                k += 1;
                if k > order {
                    return Err(Error::ContractViolation("element order overflow".into()));
                }
            }
            element_orders[x] = k;
        }
        // greedy generating set; closure under products suffices in a
        // finite group since powers reach inverses
        let closure = |gens: &[usize]| -> Vec<bool> {
            let mut seen = vec![false; order];
            seen[identity] = true;
            let mut frontier = vec![identity];
            while let Some(e) = frontier.pop() {
                for &g in gens {
                    let next = mul[e * order + g];
                    if !seen[next] {
                        seen[next] = true;
                        frontier.push(next);
                    }
                }
            }
            seen
        };
        let mut generators: Vec<usize> = Vec::new();
        let mut seen = closure(&generators);
        while seen.iter().filter(|&&b| b).count() < order {
            let next = (0..order).find(|&i| !seen[i]).expect("closure incomplete");
            generators.push(next);
            seen = closure(&generators);
        }
        Ok(TableGroup { order, mul, identity, element_orders, generators })
    }
}

/// Extends generator images to a full isomorphism candidate: breadth-first
/// definition over the generated subgroup with conflict and injectivity
/// checks on every edge. `None` when the images are inconsistent.
fn extend_images(
    a: &TableGroup,
    b: &TableGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<Option<usize>>> {
    let mut map: Vec<Option<usize>> = vec![None; a.order];
    let mut used = vec![false; b.order];
    map[a.identity] = Some(b.identity);
    used[b.identity] = true;
    let mut frontier = vec![a.identity];
    while let Some(x) = frontier.pop() {
        let fx = map[x].expect("frontier elements are mapped");
        for (&g, &h) in gens.iter().zip(images) {
            let xg = a.mul(x, g);
            let fxh = b.mul(fx, h);
            match map[xg] {
                Some(existing) => {
                    if existing != fxh {
                        return None;
                    }
                }
                None => {
                    if used[fxh] {
                        return None;
                    }
                    map[xg] = Some(fxh);
                    used[fxh] = true;
                    frontier.push(xg);
                }
            }
        }
    }
    Some(map)
}

/// All isomorphisms A -> B extending order-compatible generator images and
/// satisfying the given point constraints, up to `limit` of them.
fn isomorphisms_between(
    a: &TableGroup,
    b: &TableGroup,
    constraints: &[(usize, usize)],
    limit: usize,
) -> Vec<Vec<usize>> {
    let mut found: Vec<Vec<usize>> = Vec::new();
    if a.order != b.order {
        return found;
    }
    let mut order_profile_a: Vec<usize> = a.element_orders.clone();
    let mut order_profile_b: Vec<usize> = b.element_orders.clone();
    order_profile_a.sort_unstable();
    order_profile_b.sort_unstable();
    if order_profile_a != order_profile_b {
        return found;
    }
    let gens = &a.generators;
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            (0..b.order)
                .filter(|&h| b.element_orders[h] == a.element_orders[g])
                .collect()
        })
        .collect();
    let mut images: Vec<usize> = Vec::with_capacity(gens.len());
    search(a, b, gens, &candidates, &mut images, constraints, limit, &mut found);
    found
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &TableGroup,
    b: &TableGroup,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
    constraints: &[(usize, usize)],
    limit: usize,
    found: &mut Vec<Vec<usize>>,
) {
    if found.len() >= limit {
        return;
    }
    let stage = images.len();
    if stage == gens.len() {
        if let Some(map) = extend_images(a, b, gens, images) {
            if map.iter().all(|m| m.is_some()) {
                let map: Vec<usize> = map.into_iter().map(|m| m.unwrap()).collect();
                if constraints.iter().all(|&(x, y)| map[x] == y) {
                    found.push(map);
                }
            }
        }
        return;
    }
    for &candidate in &candidates[stage] {
        images.push(candidate);
        // prune: the partial images must extend consistently on the
        // subgroup generated so far
        if extend_images(a, b, &gens[..=stage], images).is_some() {
            search(a, b, gens, candidates, images, constraints, limit, found);
        }
        images.pop();
        if found.len() >= limit {
            return;
        }
    }
}

/// First isomorphism between two groups given as multiplication closures
/// over `0..order`, as a mapping table. `None` when they are not
/// isomorphic.
pub fn isomorphism_by_tables(
    mul_a: &dyn Fn(usize, usize) -> usize,
    order: usize,
    mul_b: &dyn Fn(usize, usize) -> usize,
) -> Option<Vec<usize>> {
    let a = TableGroup::from_fn(order, mul_a).ok()?;
    let b = TableGroup::from_fn(order, mul_b).ok()?;
    isomorphisms_between(&a, &b, &[], 1).into_iter().next()
}

// ------------------------------------------------------ box enumeration

/// Enumerated box with its multiplication captured as a table.
struct BoxTable {
    elements: Vec<CryptoElement>,
    lookup: HashMap<CryptoElement, usize>,
    table: TableGroup,
}

impl BoxTable {
    fn build(bb: &mut BlackBox, expected_order: u64, seed: u64) -> Result<BoxTable> {
        let mut probe = bb.fork(derive_seed(seed, "box-table"));
        let elements = enumerate_box_expecting(&mut probe, expected_order)?;
        let lookup: HashMap<CryptoElement, usize> =
            elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let order = elements.len();
        let mut mul = vec![0usize; order * order];
        for i in 0..order {
            for j in 0..order {
                let prod = probe.compose(&elements[i], &elements[j])?;
                let pos = position_of(&mut probe, &lookup, &elements, &prod)?;
                mul[i * order + j] = pos;
            }
        }
        let table = TableGroup::from_fn(order, &|i, j| mul[i * order + j])?;
        Ok(BoxTable { elements, lookup, table })
    }

    fn position(&self, bb: &mut BlackBox, e: &CryptoElement) -> Result<usize> {
        position_of(bb, &self.lookup, &self.elements, e)
    }
}

fn position_of(
    bb: &mut BlackBox,
    lookup: &HashMap<CryptoElement, usize>,
    elements: &[CryptoElement],
    e: &CryptoElement,
) -> Result<usize> {
    if let Some(&i) = lookup.get(e) {
        return Ok(i);
    }
    for (i, x) in elements.iter().enumerate() {
        if bb.equal(x, e)? {
            return Ok(i);
        }
    }
    Err(Error::ForeignElement)
}

// ----------------------------------------------------------- attack core

/// A fitted automorphism hypothesis on the plaintext structure.
#[derive(Clone, Debug)]
pub enum AutomorphismHypothesis {
    /// `a -> a^(p^k)` on a field.
    Frobenius { k: u32, n: u32 },
    /// An explicit permutation of the structure, with its inverse.
    Permutation { forward: Vec<u64>, inverse: Vec<u64>, label: String },
}

impl AutomorphismHypothesis {
    pub fn describe(&self) -> String {
        match self {
            AutomorphismHypothesis::Frobenius { k, .. } => format!("frobenius^{k}"),
            AutomorphismHypothesis::Permutation { label, .. } => label.clone(),
        }
    }
}

/// The recovered encryption and decryption maps, as total tables over the
/// plaintext structure (deterministic encryption makes codeword identity
/// the right key).
pub struct RecoveredMaps {
    encrypt_table: Vec<CryptoElement>,
    decrypt_index: HashMap<CryptoElement, u64>,
    pub delta: AutomorphismHypothesis,
}

impl RecoveredMaps {
    /// Recovered E.
    pub fn encrypt(&self, index: u64) -> Result<CryptoElement> {
        self.encrypt_table
            .get(index as usize)
            .cloned()
            .ok_or(Error::ForeignElement)
    }

    /// Recovered E⁻¹.
    pub fn decrypt(&self, c: &CryptoElement) -> Result<u64> {
        self.decrypt_index.get(c).copied().ok_or(Error::ForeignElement)
    }
}

/// Counts of checks and mismatches from the verification phase.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct VerificationSummary {
    pub checked: u64,
    pub mismatches: u64,
}

/// Outcome summary of one attack run.
#[derive(Clone, Debug, Serialize)]
pub struct AttackReport {
    pub success: bool,
    pub structure: String,
    pub delta: Option<String>,
    pub known_pairs_used: usize,
    pub query_budget: QueryBudgetReport,
    pub verification: VerificationSummary,
    /// Hidden-inverse queries observed while the attack ran; the oracle
    /// hygiene contract requires 0.
    pub hidden_queries_during_attack: u64,
}

/// Attacks a field box: recognition followed by Frobenius fitting.
/// The automorphism group of `F_{p^n}` is cyclic of order n, so a handful
/// of known pairs (one, on a generator) pins delta down by inspection.
pub fn attack_field(
    x: &mut BlackBox,
    spec: &FieldSpec,
    known: &[(u64, CryptoElement)],
    method: RecognitionMethod,
) -> Result<RecoveredMaps> {
    let recognition = recognize_field(x, spec, method)?;
    let field = ExplicitField::new(spec.clone())?;
    let n = spec.n;
    let mut survivors: Vec<u32> = Vec::new();
    for k in 0..n {
        let mut fits = true;
        for (a, c) in known {
            let read = recognition.alpha(c)?;
            if read != field.frobenius(*a, k) {
                fits = false;
                break;
            }
        }
        if fits {
            survivors.push(k);
        }
    }
    match survivors.as_slice() {
        [] => Err(Error::RecognitionInconsistency),
        [k] => {
            let k = *k;
            let order = spec.order();
            let mut encrypt_table = Vec::with_capacity(order as usize);
            let mut decrypt_index = HashMap::with_capacity(order as usize);
            for a in 0..order {
                let image = field.frobenius(a, k);
                let c = recognition.beta(image)?;
                decrypt_index.insert(c.clone(), a);
                encrypt_table.push(c);
            }
            Ok(RecoveredMaps {
                encrypt_table,
                decrypt_index,
                delta: AutomorphismHypothesis::Frobenius { k, n },
            })
        }
        many => Err(Error::InsufficientPlaintext {
            survivors: many.iter().map(|k| format!("frobenius^{k}")).collect(),
        }),
    }
}

/// Attacks a group box by brute-force constructive recognition: enumerate
/// the box, search an isomorphism from the known structure by mapping a
/// generating tuple onto order-compatible candidates with backtracking,
/// then fit the residual automorphism against the known pairs.
pub fn attack_group_small(
    x: &mut BlackBox,
    a: &ExplicitStructure,
    known: &[(u64, CryptoElement)],
    seed: u64,
) -> Result<RecoveredMaps> {
    if a.kind() != Kind::Group {
        return Err(Error::SignatureMismatch("group attack needs a group structure".into()));
    }
    let order = a.order();
    if order > 10_000 {
        return Err(Error::CapExceeded { cap: 10_000, partial: Vec::new() });
    }
    let box_side = BoxTable::build(x, order, seed)?;
    let a_table = TableGroup::from_fn(order as usize, &|i, j| {
        a.compose(i as u64, j as u64).expect("structure composition") as usize
    })?;

    // beta: structure index -> box position
    let beta = isomorphisms_between(&a_table, &box_side.table, &[], 1)
        .into_iter()
        .next()
        .ok_or_else(|| {
            Error::WrongStructure(format!("the box does not encrypt {}", a.name()))
        })?;
    let mut alpha = vec![0u64; order as usize];
    for (idx, &pos) in beta.iter().enumerate() {
        alpha[pos] = idx as u64;
    }

    // constraints: delta(a) = alpha(E(a)) for each known pair
    let mut constraints: Vec<(usize, usize)> = Vec::with_capacity(known.len());
    let mut probe = x.fork(derive_seed(seed, "known-pairs"));
    for (plain, c) in known {
        let pos = box_side.position(&mut probe, c)?;
        constraints.push((*plain as usize, alpha[pos] as usize));
    }
    let fitted = isomorphisms_between(&a_table, &a_table, &constraints, 64);
    match fitted.len() {
        0 => Err(Error::RecognitionInconsistency),
        1 => {
            let delta = &fitted[0];
            let mut inverse = vec![0u64; order as usize];
            for (i, &d) in delta.iter().enumerate() {
                inverse[d] = i as u64;
            }
            let label = a_table
                .generators
                .iter()
                .map(|&g| format!("{}→{}", a.describe(g as u64), a.describe(delta[g] as u64)))
                .collect::<Vec<_>>()
                .join(", ");
            let mut encrypt_table = Vec::with_capacity(order as usize);
            let mut decrypt_index = HashMap::with_capacity(order as usize);
            for (idx, &image) in delta.iter().enumerate() {
                let c = box_side.elements[beta[image]].clone();
                decrypt_index.insert(c.clone(), idx as u64);
                encrypt_table.push(c);
            }
            Ok(RecoveredMaps {
                encrypt_table,
                decrypt_index,
                delta: AutomorphismHypothesis::Permutation {
                    forward: delta.iter().map(|&d| d as u64).collect(),
                    inverse,
                    label,
                },
            })
        }
        _ => Err(Error::InsufficientPlaintext {
            survivors: fitted
                .iter()
                .map(|map| {
                    a_table
                        .generators
                        .iter()
                        .map(|&g| {
                            format!("{}→{}", a.describe(g as u64), a.describe(map[g] as u64))
                        })
                        .collect::<Vec<_>>()
                        .join(", ")
                })
                .collect(),
        }),
    }
}

/// Decides whether a box encrypts the given structure. For enumerable
/// boxes the answer is exact (isomorphism search); for larger cyclic
/// targets a Monte-Carlo exponent test runs `confidence` rounds. A `false`
/// answer is always certain.
pub fn verify_encrypts(
    x: &mut BlackBox,
    a: &ExplicitStructure,
    confidence: u32,
    seed: u64,
) -> Result<bool> {
    let order = a.order();
    if order <= 10_000 {
        let box_side = match BoxTable::build(x, order, seed) {
            Ok(t) => t,
            Err(Error::WrongStructure(_)) => return Ok(false),
            Err(e) => return Err(e),
        };
        let a_table = TableGroup::from_fn(order as usize, &|i, j| {
            a.compose(i as u64, j as u64).expect("structure composition") as usize
        })?;
        Ok(!isomorphisms_between(&a_table, &box_side.table, &[], 1).is_empty())
    } else if let Some(m) = a.cyclic_order() {
        let mut probe = x.fork(derive_seed(seed, "verify-cyclic"));
        let id = probe.identity()?;
        for _ in 0..confidence {
            let s = probe.sample()?;
            let powered = power(&mut probe, &s, m as i64)?;
            if !probe.equal(&powered, &id)? {
                return Ok(false);
            }
        }
        Ok(true)
    } else {
        Err(Error::InvalidArgument(
            "structure too large for exact comparison and not cyclic".into(),
        ))
    }
}

// ------------------------------------------------------- miller-rabin

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MrVerdict {
    Composite,
    ProbablyPrime,
}

/// Black-box Miller-Rabin: treats the multiplicative group mod `n` as a
/// black box and tests whether it behaves like the cyclic group of order
/// n-1. Any witness that violates the cyclic order profile (a Fermat
/// failure or a square root of 1 other than ±1) proves n composite; after
/// `rounds` clean rounds the verdict is probably-prime with error at most
/// 4^-rounds.
pub fn miller_rabin_bb(n: u64, rounds: u32, seed: u64) -> Result<(MrVerdict, Counters)> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument("the test needs an odd n >= 3".into()));
    }
    if n == 3 {
        // no witnesses exist strictly between 1 and n-1
        return Ok((MrVerdict::ProbablyPrime, Counters::default()));
    }
    let units = UnitGroup::new(n)?;
    let structure = make_unit_group(n)?;
    let mut bb = transparent_box(&structure, derive_seed(seed, "mr-box"));
    let one = transparent_codeword(
        &structure,
        units.index_of_residue(1).expect("1 is a unit"),
    )?;
    let minus_one = transparent_codeword(
        &structure,
        units.index_of_residue(n - 1).expect("n-1 is a unit"),
    )?;
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'rounds: for _ in 0..rounds {
        // draw a witness other than ±1 through the box sampler
        let mut witness = None;
        for _ in 0..256 {
            let w = bb.sample()?;
            if !bb.equal(&w, &one)? && !bb.equal(&w, &minus_one)? {
                witness = Some(w);
                break;
            }
        }
        let Some(w) = witness else {
            // the unit group is exhausted by ±1; nothing left to test
            break 'rounds;
        };
        let mut y = power(&mut bb, &w, d as i64)?;
        if bb.equal(&y, &one)? || bb.equal(&y, &minus_one)? {
            continue 'rounds;
        }
        for _ in 1..s {
            y = bb.compose(&y, &y)?;
            if bb.equal(&y, &minus_one)? {
                continue 'rounds;
            }
            if bb.equal(&y, &one)? {
                // nontrivial square root of 1
                return Ok((MrVerdict::Composite, bb.counters()));
            }
        }
        return Ok((MrVerdict::Composite, bb.counters()));
    }
    Ok((MrVerdict::ProbablyPrime, bb.counters()))
}

// ----------------------------------------------------------- harnesses

/// Attack outcome category, mirrored in CLI exit codes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Success,
    InsufficientPlaintext,
    WrongStructure,
}

/// A finished attack run: outcome, report, and surviving hypotheses when
/// the known plaintexts were not enough.
pub struct AttackRun {
    pub outcome: Outcome,
    pub report: AttackReport,
    pub survivors: Vec<String>,
    /// Diagnostic detail for wrong-structure outcomes.
    pub failure_detail: Option<String>,
    pub maps: Option<RecoveredMaps>,
}

/// Plain indices the harness suggests as known plaintexts for a field:
/// a multiplicative generator first (a single pair on a generator is
/// enough to separate the Frobenius powers), then successive elements.
pub fn suggested_field_plaintexts(spec: &FieldSpec, count: usize) -> Result<Vec<u64>> {
    let field = ExplicitField::new(spec.clone())?;
    let order = spec.order();
    let mut indices = Vec::with_capacity(count);
    if count == 0 {
        return Ok(indices);
    }
    indices.push(field.primitive_element());
    let mut next = 2u64;
    while indices.len() < count && next < order {
        if !indices.contains(&next) {
            indices.push(next);
        }
        next += 1;
    }
    Ok(indices)
}

/// Runs the field attack end to end: encrypt the field under a hidden
/// bijection, hand the attacker the box plus `known_count` pairs, attack,
/// then verify the recovered maps against the hidden table. The hidden
/// inverse stays untouched until verification and its access counter is
/// recorded in the report.
pub fn run_field_attack(
    spec: &FieldSpec,
    seed: u64,
    known_count: usize,
    method: RecognitionMethod,
) -> Result<AttackRun> {
    let started = Instant::now();
    let plain = make_field(spec)?;
    let (mut bb, oracle) = encrypt(&plain, derive_seed(seed, "alice-field"))?;
    let indices = suggested_field_plaintexts(spec, known_count)?;
    let known = oracle.known_pairs(&indices)?;
    let structure = plain.name();
    let attack = attack_field(&mut bb, spec, &known, method);
    finish_run(attack, structure, known.len(), &oracle, &bb, started)
}

/// Runs the group attack end to end; known pairs are taken on the
/// structure's generators (images of a generating set pin the residual
/// automorphism down exactly).
pub fn run_group_attack(
    a: &ExplicitStructure,
    seed: u64,
    known_count: usize,
) -> Result<AttackRun> {
    let started = Instant::now();
    let (mut bb, oracle) = encrypt(a, derive_seed(seed, "alice-group"))?;
    let gens = a.generators();
    let indices: Vec<u64> = gens.into_iter().take(known_count).collect();
    let known = oracle.known_pairs(&indices)?;
    let structure = a.name();
    let attack = attack_group_small(&mut bb, a, &known, derive_seed(seed, "bob-group"));
    finish_run(attack, structure, known.len(), &oracle, &bb, started)
}

fn finish_run(
    attack: Result<RecoveredMaps>,
    structure: String,
    known_pairs_used: usize,
    oracle: &EncryptionOracle,
    bb: &BlackBox,
    started: Instant,
) -> Result<AttackRun> {
    let hidden_during_attack = oracle.hidden_query_count();
    let budget = QueryBudgetReport::from_counters(bb.counters(), started.elapsed().as_secs_f64());
    match attack {
        Ok(maps) => {
            let verification = verify_attack(oracle, &maps)?;
            let success = verification.mismatches == 0 && hidden_during_attack == 0;
            Ok(AttackRun {
                outcome: Outcome::Success,
                report: AttackReport {
                    success,
                    structure,
                    delta: Some(maps.delta.describe()),
                    known_pairs_used,
                    query_budget: QueryBudgetReport {
                        wall_time_s: started.elapsed().as_secs_f64(),
                        ..budget
                    },
                    verification,
                    hidden_queries_during_attack: hidden_during_attack,
                },
                survivors: Vec::new(),
                failure_detail: None,
                maps: Some(maps),
            })
        }
        Err(Error::InsufficientPlaintext { survivors }) => Ok(AttackRun {
            outcome: Outcome::InsufficientPlaintext,
            report: AttackReport {
                success: false,
                structure,
                delta: None,
                known_pairs_used,
                query_budget: budget,
                verification: VerificationSummary::default(),
                hidden_queries_during_attack: hidden_during_attack,
            },
            survivors,
            failure_detail: None,
            maps: None,
        }),
        Err(Error::WrongStructure(detail)) => Ok(AttackRun {
            outcome: Outcome::WrongStructure,
            report: AttackReport {
                success: false,
                structure,
                delta: None,
                known_pairs_used,
                query_budget: budget,
                verification: VerificationSummary::default(),
                hidden_queries_during_attack: hidden_during_attack,
            },
            survivors: Vec::new(),
            failure_detail: Some(detail),
            maps: None,
        }),
        Err(e) => Err(e),
    }
}

/// Verification phase: the only place the hidden inverse is consulted.
/// Checks, over every element: the recovered decryption inverts the hidden
/// encryption, the recovered encryption forges the exact codewords, and
/// the hidden inverse agrees with the recovered one.
pub fn verify_attack(
    oracle: &EncryptionOracle,
    maps: &RecoveredMaps,
) -> Result<VerificationSummary> {
    let order = oracle.plain().order();
    let mut mismatches = 0u64;
    for a in 0..order {
        let hidden_cipher = oracle.encrypt_element(a)?;
        let decrypted = maps.decrypt(&hidden_cipher);
        let forged = maps.encrypt(a);
        let hidden_view = oracle.hidden_decrypt(&hidden_cipher)?;
        let ok = matches!(decrypted, Ok(d) if d == a)
            && matches!(forged, Ok(ref c) if *c == hidden_cipher)
            && hidden_view == a;
        if !ok {
            mismatches += 1;
        }
    }
    Ok(VerificationSummary { checked: order, mismatches })
}
