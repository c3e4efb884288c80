//! Constructive recognition of black-box fields: characteristic discovery,
//! prime-subfield embedding, discrete-logarithm inversion, and desk-scale
//! two-way isomorphisms with an explicit field.

use std::collections::HashMap;
use std::time::Instant;

use serde::Serialize;

use crate::blackbox::{power, BlackBox, Kind, Op, QueryBudgetReport};
use crate::element::CryptoElement;
use crate::error::{Error, Result};
use crate::explicit::{ExplicitField, ExplicitOps, FieldSpec};

/// How elements of the prime subfield are mapped back to integers.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecognitionMethod {
    /// Full additive-log table of size p.
    Table,
    /// Baby-step giant-step discrete logarithm on the multiplicative group.
    Bsgs,
}

/// The characteristic of a field box: the additive order of its unit,
/// found by incremental addition of 1.
pub fn find_characteristic(k: &mut BlackBox, cap: u64) -> Result<u64> {
    if k.kind() != Kind::Field {
        return Err(Error::SignatureMismatch("characteristic needs a field box".into()));
    }
    let zero = k.zero()?;
    let one = k.one()?;
    let mut acc = one.clone();
    let mut count = 1u64;
    while !k.equal(&acc, &zero)? {
        acc = k.add(&acc, &one)?;
        count += 1;
        if count > cap {
            return Err(Error::OrderBoundExceeded(cap));
        }
    }
    Ok(count)
}

/// The embedding `m -> m·1` of the prime field into a field box, with its
/// inverse (the additive discrete log) realized as a table of size `p`.
pub struct PrimeEmbedding {
    p: u64,
    images: Vec<CryptoElement>,
    inverse: HashMap<CryptoElement, u64>,
    /// Smallest primitive root of p on the explicit side, and its image.
    generator: Option<(u64, CryptoElement)>,
}

impl PrimeEmbedding {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `m·1` as a codeword, `m` reduced mod p.
    pub fn image(&self, m: u64) -> &CryptoElement {
        &self.images[(m % self.p) as usize]
    }

    /// Recognizes an element of the prime subfield as an integer, by table
    /// lookup or by discrete logarithm against the embedded primitive root.
    pub fn recognize(
        &self,
        k: &mut BlackBox,
        c: &CryptoElement,
        method: RecognitionMethod,
    ) -> Result<u64> {
        match method {
            RecognitionMethod::Table => self.lookup(k, c),
            RecognitionMethod::Bsgs => {
                if k.equal(c, &self.images[0])? {
                    return Ok(0);
                }
                let (root, root_image) = self
                    .generator
                    .clone()
                    .ok_or_else(|| Error::InvalidArgument("p = 2 has no generator table".into()))?;
                let exponent = discrete_log(k, self, &root_image, c)?;
                let mut value = 1u64;
                for _ in 0..exponent {
                    value = value * root % self.p;
                }
                Ok(value)
            }
        }
    }

    fn lookup(&self, k: &mut BlackBox, c: &CryptoElement) -> Result<u64> {
        if let Some(&m) = self.inverse.get(c) {
            return Ok(m);
        }
        // non-canonical codeword: fall back to the equality oracle
        for (m, image) in self.images.iter().enumerate() {
            if k.equal(image, c)? {
                return Ok(m as u64);
            }
        }
        Err(Error::ForeignElement)
    }
}

/// Builds the prime embedding, validating that `p·1 = 0`.
///
/// A single image is computable in O(log m) additions by double-and-add;
/// the full inverse table costs p additions, the desk-scale price of total
/// inversion on the prime subfield.
pub fn embed_prime_field(k: &mut BlackBox, p: u64) -> Result<PrimeEmbedding> {
    if k.kind() != Kind::Field {
        return Err(Error::SignatureMismatch("embedding needs a field box".into()));
    }
    let zero = k.zero()?;
    let one = k.one()?;
    let mut images = Vec::with_capacity(p as usize);
    images.push(zero.clone());
    let mut acc = zero.clone();
    for _ in 1..p {
        acc = k.add(&acc, &one)?;
        images.push(acc.clone());
    }
    let wrap = k.add(&acc, &one)?;
    if !k.equal(&wrap, &zero)? {
        return Err(Error::CharacteristicMismatch(p));
    }
    let inverse: HashMap<CryptoElement, u64> = images
        .iter()
        .enumerate()
        .map(|(m, c)| (c.clone(), m as u64))
        .collect();
    let generator = if p > 2 {
        let root = smallest_primitive_root(p);
        Some((root, images[root as usize].clone()))
    } else {
        None
    };
    Ok(PrimeEmbedding { p, images, inverse, generator })
}

fn smallest_primitive_root(p: u64) -> u64 {
    let group = p - 1;
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
    let pow = |b: u64, mut e: u64| -> u64 {
        let mut acc = 1u128;
        let mut base = b as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u128;
            }
            base = base * base % p as u128;
            e >>= 1;
        }
        acc as u64
    };
    'candidates: for g in 2..p {
        for &f in &factors {
            if pow(g, group / f) == 1 {
                continue 'candidates;
            }
        }
        return g;
    }
    unreachable!("prime fields have primitive roots")
}

/// `m·1` computed by double-and-add; cross-checks the embedding table.
pub fn scalar_image(k: &mut BlackBox, m: u64) -> Result<CryptoElement> {
    let one = k.one()?;
    crate::blackbox::scalar_mul(k, &one, m as i64)
}

/// Baby-step giant-step discrete logarithm in the multiplicative group of
/// the prime subfield: finds `e` with `g^e = x` in O(√p) multiplications
/// and equality tests.
pub fn discrete_log(
    k: &mut BlackBox,
    embedding: &PrimeEmbedding,
    g: &CryptoElement,
    x: &CryptoElement,
) -> Result<u64> {
    let zero = k.zero()?;
    if k.equal(x, &zero)? {
        return Err(Error::DiscreteLogOfZero);
    }
    let group = embedding.p() - 1;
    if group == 0 {
        return Ok(0);
    }
    let m = (group as f64).sqrt().ceil() as u64;
    let one = k.one()?;
    let mut baby: Vec<CryptoElement> = Vec::with_capacity(m as usize);
    let mut baby_index: HashMap<CryptoElement, u64> = HashMap::with_capacity(m as usize);
    let mut acc = one.clone();
    for j in 0..m {
        baby.push(acc.clone());
        baby_index.entry(acc.clone()).or_insert(j);
        acc = k.mul(&acc, g)?;
    }
    let giant = power(k, g, -(m as i64))?;
    let mut gamma = x.clone();
    for i in 0..=m {
        let hit = if let Some(&j) = baby_index.get(&gamma) {
            Some(j)
        } else {
            let mut found = None;
            for (j, b) in baby.iter().enumerate() {
                if k.equal(b, &gamma)? {
                    found = Some(j as u64);
                    break;
                }
            }
            found
        };
        if let Some(j) = hit {
            return Ok((i * m + j) % group);
        }
        gamma = k.mul(&gamma, &giant)?;
    }
    Err(Error::NoDiscreteLog)
}

/// Construction metadata carried on a recognition result.
#[derive(Clone, Debug, Serialize)]
pub struct RecognitionDetails {
    pub p: u64,
    pub n: u32,
    /// Minimal polynomial of the sampled degree-n element.
    pub minimal_polynomial: Vec<u64>,
    /// Samples spent before an element of full degree appeared.
    pub retries: u32,
}

/// Mutually inverse maps between an explicit field and a field box:
/// `beta` sends explicit indices to codewords, `alpha` reads them back.
/// `alpha ∘ beta` is the identity, verified exhaustively at construction.
pub struct RecognitionResult {
    beta_table: Vec<CryptoElement>,
    alpha_index: HashMap<CryptoElement, u64>,
    pub method: RecognitionMethod,
    pub cost: QueryBudgetReport,
    pub details: RecognitionDetails,
}

impl RecognitionResult {
    pub fn order(&self) -> u64 {
        self.beta_table.len() as u64
    }

    /// β: explicit index → codeword.
    pub fn beta(&self, index: u64) -> Result<CryptoElement> {
        self.beta_table
            .get(index as usize)
            .cloned()
            .ok_or(Error::ForeignElement)
    }

    /// α: codeword → explicit index, total on the box's codeword set
    /// because deterministic encryption gives each element one codeword.
    pub fn alpha(&self, c: &CryptoElement) -> Result<u64> {
        self.alpha_index.get(c).copied().ok_or(Error::ForeignElement)
    }
}

/// Recognizes a black-box field against an explicit field of the same
/// order.
///
/// Steps: embed the prime subfield; sample an element θ of full degree and
/// read off its minimal polynomial by eliminating through the accumulated
/// span of its powers; present the explicit field by that polynomial and
/// carry the target field over through a root of the target modulus. β is
/// assembled from θ-powers through box operations; α is the lookup table
/// over all elements. The pair is verified before it is returned.
pub fn recognize_field(
    k: &mut BlackBox,
    spec: &FieldSpec,
    method: RecognitionMethod,
) -> Result<RecognitionResult> {
    let started = Instant::now();
    let counters_before = k.counters();
    if k.kind() != Kind::Field {
        return Err(Error::SignatureMismatch("recognition needs a field box".into()));
    }
    let order = spec.order();
    if order > crate::ENUMERATION_CAP {
        return Err(Error::CapExceeded { cap: crate::ENUMERATION_CAP, partial: Vec::new() });
    }
    let p = match find_characteristic(k, spec.p + 1) {
        Ok(p) => p,
        Err(Error::OrderBoundExceeded(_)) => {
            return Err(Error::WrongStructure(format!(
                "characteristic exceeds the expected {}",
                spec.p
            )))
        }
        Err(e) => return Err(e),
    };
    if p != spec.p {
        return Err(Error::WrongStructure(format!(
            "characteristic {p} instead of {}",
            spec.p
        )));
    }
    let embedding = embed_prime_field(k, p)?;
    let n = spec.n;

    let (theta_powers, minimal_polynomial, retries) = if n == 1 {
        (vec![k.one()?], vec![0, 1], 0)
    } else {
        sample_full_degree_element(k, &embedding, n)?
    };

    // explicit field presented by the discovered minimal polynomial
    let found_field = ExplicitField::new(FieldSpec::new(p, n, Some(minimal_polynomial.clone()))?)?;

    // a root of the target modulus inside that presentation gives the
    // deterministic explicit-side isomorphism
    let target_field = ExplicitField::new(spec.clone())?;
    let root = find_root(&found_field, &spec.modulus)?;
    let mut root_powers = Vec::with_capacity(n as usize);
    let mut acc = 1u64;
    for _ in 0..n {
        root_powers.push(acc);
        acc = found_field.apply(Op::Mul, &[acc, root])?;
    }

    let mut beta_table: Vec<CryptoElement> = Vec::with_capacity(order as usize);
    let mut alpha_index: HashMap<CryptoElement, u64> = HashMap::with_capacity(order as usize);
    for e in 0..order {
        let digits = target_field.digits(e);
        let mut transported = 0u64;
        for (i, &d) in digits.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let term = found_field.apply(Op::Mul, &[root_powers[i], d])?;
            transported = found_field.apply(Op::Add, &[transported, term])?;
        }
        let codeword =
            combine_powers(k, &embedding, &theta_powers, &found_field.digits(transported))?;
        if let Some(&existing) = alpha_index.get(&codeword) {
            return Err(Error::ContractViolation(format!(
                "beta collides: indices {existing} and {e} share a codeword"
            )));
        }
        alpha_index.insert(codeword.clone(), e);
        beta_table.push(codeword);
    }

    let result = RecognitionResult {
        beta_table,
        alpha_index,
        method,
        cost: QueryBudgetReport::from_counters(
            k.counters().since(&counters_before),
            started.elapsed().as_secs_f64(),
        ),
        details: RecognitionDetails { p, n, minimal_polynomial, retries },
    };
    for e in 0..order {
        let c = result.beta(e)?;
        if result.alpha(&c)? != e {
            return Err(Error::ContractViolation(format!(
                "alpha(beta({e})) differs from {e}"
            )));
        }
    }
    Ok(result)
}

/// Σ digits[i] · θ^i through the box.
fn combine_powers(
    k: &mut BlackBox,
    embedding: &PrimeEmbedding,
    theta_powers: &[CryptoElement],
    digits: &[u64],
) -> Result<CryptoElement> {
    let mut acc = k.zero()?;
    for (i, &d) in digits.iter().enumerate() {
        if d == 0 {
            continue;
        }
        let coefficient = embedding.image(d).clone();
        let term = if i == 0 {
            coefficient
        } else {
            k.mul(&coefficient, &theta_powers[i])?
        };
        acc = k.add(&acc, &term)?;
    }
    Ok(acc)
}

/// Samples elements until one has degree `n` over the prime subfield.
/// Non-generating elements are rare, so failure within the budget points
/// at a broken sampler and is surfaced rather than retried forever.
fn sample_full_degree_element(
    k: &mut BlackBox,
    embedding: &PrimeEmbedding,
    n: u32,
) -> Result<(Vec<CryptoElement>, Vec<u64>, u32)> {
    let budget = 8 * n;
    for attempt in 0..budget {
        let theta = k.sample()?;
        if let Some((powers, min_poly)) = minimal_polynomial(k, embedding, &theta, n)? {
            return Ok((powers, min_poly, attempt));
        }
    }
    Err(Error::DegenerateSampler { degree: n, attempts: budget })
}

type SpanEntry = (CryptoElement, Vec<u64>);

/// Returns θ's powers `1..θ^(n-1)` and its minimal polynomial when θ has
/// degree exactly `n`; `None` when the degree is smaller and the sample
/// must be retried.
///
/// The span of `1, θ, …, θ^(d-1)` is accumulated inside the box with each
/// entry carrying its coefficient vector; the first power landing in the
/// span yields the linear dependence, which is the minimal polynomial.
fn minimal_polynomial(
    k: &mut BlackBox,
    embedding: &PrimeEmbedding,
    theta: &CryptoElement,
    n: u32,
) -> Result<Option<(Vec<CryptoElement>, Vec<u64>)>> {
    let p = embedding.p();
    let mut span: Vec<SpanEntry> = Vec::with_capacity(p as usize);
    let mut span_lookup: HashMap<CryptoElement, usize> = HashMap::new();
    for m in 0..p {
        let c = embedding.image(m).clone();
        span_lookup.insert(c.clone(), span.len());
        span.push((c, vec![m]));
    }
    let mut powers = vec![k.one()?];
    let mut current = theta.clone();
    for d in 1..=n {
        let hit = if let Some(&i) = span_lookup.get(&current) {
            Some(i)
        } else {
            let mut found = None;
            for (i, (c, _)) in span.iter().enumerate() {
                if k.equal(c, &current)? {
                    found = Some(i);
                    break;
                }
            }
            found
        };
        if let Some(i) = hit {
            if d < n {
                return Ok(None);
            }
            let coeffs = &span[i].1;
            // x^n - Σ coeffs[j] x^j, little-endian, monic
            let mut min_poly = vec![0u64; n as usize + 1];
            for (j, &c) in coeffs.iter().enumerate() {
                min_poly[j] = (p - c % p) % p;
            }
            min_poly[n as usize] = 1;
            return Ok(Some((powers, min_poly)));
        }
        if d == n {
            // the span holds all p^n elements by now, so θ^n must be in it
            return Err(Error::ContractViolation(
                "power climb escaped the field span".into(),
            ));
        }
        powers.push(current.clone());
        // grow the span by θ^d
        let mut multiples: Vec<CryptoElement> = Vec::with_capacity(p as usize);
        let mut m_acc = k.zero()?;
        for _ in 0..p {
            multiples.push(m_acc.clone());
            m_acc = k.add(&m_acc, &current)?;
        }
        let previous = std::mem::take(&mut span);
        span_lookup.clear();
        for (c, coeffs) in previous {
            for (m, multiple) in multiples.iter().enumerate() {
                let combined = if m == 0 { c.clone() } else { k.add(&c, multiple)? };
                let mut extended = coeffs.clone();
                extended.resize(d as usize + 1, 0);
                extended[d as usize] = m as u64;
                span_lookup.insert(combined.clone(), span.len());
                span.push((combined, extended));
            }
        }
        current = k.mul(&current, theta)?;
    }
    unreachable!("loop returns at or before d = n")
}

/// First root of the modulus inside the given field, in index order.
fn find_root(field: &ExplicitField, modulus: &[u64]) -> Result<u64> {
    let p = field.spec().p;
    for e in 0..field.spec().order() {
        let mut acc = 0u64;
        let mut power = 1u64;
        for &c in modulus {
            if c % p != 0 {
                let term = field.apply(Op::Mul, &[power, c % p])?;
                acc = field.apply(Op::Add, &[acc, term])?;
            }
            power = field.apply(Op::Mul, &[power, e])?;
        }
        if acc == 0 {
            return Ok(e);
        }
    }
    Err(Error::ContractViolation(
        "target modulus has no root in the discovered field".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encrypt::encrypt;
    use crate::explicit::make_field;

    fn field_box(
        p: u64,
        n: u32,
        seed: u64,
    ) -> (BlackBox, crate::encrypt::EncryptionOracle, FieldSpec) {
        let spec = FieldSpec::new(p, n, None).unwrap();
        let f = make_field(&spec).unwrap();
        let (bb, oracle) = encrypt(&f, seed).unwrap();
        (bb, oracle, spec)
    }

    #[test]
    fn characteristic_is_found() {
        for (p, n) in [(3u64, 2u32), (5, 1), (7, 2)] {
            let (mut bb, _, _) = field_box(p, n, 3);
            assert_eq!(find_characteristic(&mut bb, 100).unwrap(), p);
        }
    }

    #[test]
    fn embedding_maps_constants_correctly() {
        let (mut bb, oracle, _) = field_box(7, 1, 5);
        let emb = embed_prime_field(&mut bb, 7).unwrap();
        // 0 maps to the zero codeword; 3 equals 1+1+1 through the box
        let zero_cw = oracle.encrypt_element(0).unwrap();
        assert!(bb.equal(emb.image(0), &zero_cw).unwrap());
        let one = bb.one().unwrap();
        let two = bb.add(&one, &one).unwrap();
        let three = bb.add(&two, &one).unwrap();
        assert!(bb.equal(emb.image(3), &three).unwrap());
        // homomorphism spot check: 3·4 = 12 = 5 mod 7
        let prod = bb.mul(emb.image(3), emb.image(4)).unwrap();
        assert!(bb.equal(&prod, emb.image(5)).unwrap());
        // double-and-add agrees with the table
        let scaled = scalar_image(&mut bb, 6).unwrap();
        assert!(bb.equal(&scaled, emb.image(6)).unwrap());
    }

    #[test]
    fn wrong_characteristic_is_rejected() {
        let (mut bb, _, _) = field_box(5, 1, 6);
        match embed_prime_field(&mut bb, 3) {
            Err(Error::CharacteristicMismatch(3)) => {}
            other => panic!("expected mismatch, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn characteristic_scan_respects_the_cap() {
        let (mut bb, _, _) = field_box(13, 1, 21);
        match find_characteristic(&mut bb, 5) {
            Err(Error::OrderBoundExceeded(5)) => {}
            other => panic!("expected bound error, got {other:?}"),
        }
    }

    #[test]
    fn recognition_rejects_a_mismatched_spec() {
        // a box encrypting F_9 recognized against F_25 or F_4
        let spec9 = FieldSpec::new(3, 2, None).unwrap();
        let f9 = make_field(&spec9).unwrap();
        let (bb, _) = encrypt(&f9, 22).unwrap();
        for wrong in [FieldSpec::new(5, 2, None).unwrap(), FieldSpec::new(2, 2, None).unwrap()] {
            let mut probe = bb.clone();
            match recognize_field(&mut probe, &wrong, RecognitionMethod::Table) {
                Err(Error::WrongStructure(_)) => {}
                other => panic!("expected wrong structure, got {:?}", other.map(|_| ())),
            }
        }
    }

    #[test]
    fn discrete_log_in_f5() {
        // independent: powers of 2 mod 5 are 2, 4, 3, 1
        let (mut bb, _, _) = field_box(5, 1, 7);
        let emb = embed_prime_field(&mut bb, 5).unwrap();
        let g = emb.image(2).clone();
        let x = emb.image(3).clone();
        assert_eq!(discrete_log(&mut bb, &emb, &g, &x).unwrap(), 3);
        assert_eq!(discrete_log(&mut bb, &emb, &g, &g).unwrap(), 1);
        let one = bb.one().unwrap();
        assert_eq!(discrete_log(&mut bb, &emb, &g, &one).unwrap(), 0);
        let zero = bb.zero().unwrap();
        assert!(matches!(
            discrete_log(&mut bb, &emb, &g, &zero),
            Err(Error::DiscreteLogOfZero)
        ));
    }

    #[test]
    fn discrete_log_inverts_exponentiation_exhaustively() {
        for p in [5u64, 13, 97] {
            let (mut bb, _, _) = field_box(p, 1, 11);
            let emb = embed_prime_field(&mut bb, p).unwrap();
            let root = smallest_primitive_root(p);
            let g = emb.image(root).clone();
            for x in 1..p {
                let e = discrete_log(&mut bb, &emb, &g, emb.image(x)).unwrap();
                let back = power(&mut bb, &g, e as i64).unwrap();
                assert!(bb.equal(&back, emb.image(x)).unwrap(), "p={p}, x={x}");
            }
        }
    }

    #[test]
    fn non_generator_base_is_reported() {
        // 4 has order 2 mod 5: logs of 2 and 3 do not exist
        let (mut bb, _, _) = field_box(5, 1, 8);
        let emb = embed_prime_field(&mut bb, 5).unwrap();
        let g = emb.image(4).clone();
        match discrete_log(&mut bb, &emb, &g, emb.image(2)) {
            Err(Error::NoDiscreteLog) => {}
            other => panic!("expected no-solution, got {other:?}"),
        }
    }

    #[test]
    fn bsgs_recognition_matches_table() {
        let (mut bb, _, _) = field_box(13, 1, 9);
        let emb = embed_prime_field(&mut bb, 13).unwrap();
        for m in 0..13 {
            let c = emb.image(m).clone();
            let via_table = emb.recognize(&mut bb, &c, RecognitionMethod::Table).unwrap();
            let via_bsgs = emb.recognize(&mut bb, &c, RecognitionMethod::Bsgs).unwrap();
            assert_eq!(via_table, m);
            assert_eq!(via_bsgs, m);
        }
    }

    #[test]
    fn recognize_prime_field() {
        let (mut bb, oracle, spec) = field_box(3, 1, 10);
        let r = recognize_field(&mut bb, &spec, RecognitionMethod::Table).unwrap();
        for e in 0..3 {
            assert_eq!(r.alpha(&r.beta(e).unwrap()).unwrap(), e);
            // n = 1: the only field automorphism is the identity, so beta
            // must agree with the hidden map itself
            let hidden = oracle.encrypt_element(e).unwrap();
            assert!(bb.equal(&r.beta(e).unwrap(), &hidden).unwrap());
        }
    }

    #[test]
    fn recognize_f9_respects_the_modulus() {
        // x² = -1 for the modulus x²+1 of F_9
        let spec = FieldSpec::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        let f = make_field(&spec).unwrap();
        let (mut bb, _) = encrypt(&f, 11).unwrap();
        let r = recognize_field(&mut bb, &spec, RecognitionMethod::Table).unwrap();
        let field = ExplicitField::new(spec).unwrap();
        let x_index = field.index(&[0, 1]);
        let beta_x = r.beta(x_index).unwrap();
        let sq = bb.mul(&beta_x, &beta_x).unwrap();
        let beta_two = r.beta(2).unwrap();
        assert!(bb.equal(&sq, &beta_two).unwrap());
    }

    #[test]
    fn recognize_f81_exhaustively() {
        let (mut bb, _, spec) = field_box(3, 4, 12);
        let r = recognize_field(&mut bb, &spec, RecognitionMethod::Table).unwrap();
        let field = ExplicitField::new(spec).unwrap();
        for a in 0..81 {
            assert_eq!(r.alpha(&r.beta(a).unwrap()).unwrap(), a);
            for b in 0..81 {
                let sum = field.apply(Op::Add, &[a, b]).unwrap();
                let prod = field.apply(Op::Mul, &[a, b]).unwrap();
                let beta_a = r.beta(a).unwrap();
                let beta_b = r.beta(b).unwrap();
                let box_sum = bb.add(&beta_a, &beta_b).unwrap();
                let box_prod = bb.mul(&beta_a, &beta_b).unwrap();
                assert!(bb.equal(&box_sum, &r.beta(sum).unwrap()).unwrap());
                assert!(bb.equal(&box_prod, &r.beta(prod).unwrap()).unwrap());
            }
        }
        assert!(r.cost.apply_calls > 0);
    }

    #[test]
    fn degenerate_sampler_is_reported() {
        // a field box whose sampler always returns zero never exhibits an
        // element of degree 2
        struct ZeroSampler(BlackBox, CryptoElement);
        impl crate::blackbox::BoxOracle for ZeroSampler {
            fn signature(&self) -> crate::blackbox::Signature {
                self.0.signature()
            }
            fn string_len_bits(&self) -> usize {
                self.0.string_len_bits()
            }
            fn sample(&mut self) -> Result<CryptoElement> {
                Ok(self.1.clone())
            }
            fn apply(&mut self, op: Op, args: &[&CryptoElement]) -> Result<CryptoElement> {
                self.0.apply(op, args)
            }
            fn equal(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool> {
                self.0.equal(a, b)
            }
            fn boxed_clone(&self) -> Box<dyn crate::blackbox::BoxOracle> {
                Box::new(ZeroSampler(self.0.clone(), self.1.clone()))
            }
            fn reseed(&mut self, seed: u64) {
                self.0 = self.0.fork(seed);
            }
        }
        let (bb, oracle, spec) = field_box(3, 2, 13);
        let zero = oracle.encrypt_element(0).unwrap();
        let mut rigged = BlackBox::from_oracle(ZeroSampler(bb, zero));
        match recognize_field(&mut rigged, &spec, RecognitionMethod::Table) {
            Err(Error::DegenerateSampler { degree: 2, .. }) => {}
            other => panic!("expected degenerate sampler, got {:?}", other.map(|_| ())),
        }
    }
}
