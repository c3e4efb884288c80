//! Deterministic encryption wrapper: turns an explicit structure into a
//! black box hiding a secret bijection between elements and codewords.
//!
//! The box applies each operation by decrypting the arguments, computing on
//! the plain side, and re-encrypting, so the hidden map is a homomorphism
//! by construction and its graph is closed under all operations.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blackbox::{BlackBox, BoxOracle, Op, Signature};
use crate::element::{self, CryptoElement};
use crate::error::{Error, Result};
use crate::explicit::ExplicitStructure;
use crate::util::derive_seed;
use crate::ENUMERATION_CAP;

/// Holds the secret bijection of an encrypted box.
///
/// The forward direction models ciphertexts legitimately produced for the
/// attacker (known plaintexts). The inverse exists for test assertions only:
/// every access is tallied so harnesses can prove the attack phase never
/// touched it.
pub struct EncryptionOracle {
    plain: ExplicitStructure,
    codewords: Arc<Vec<CryptoElement>>,
    inverse: Arc<HashMap<CryptoElement, u64>>,
    hidden_queries: AtomicU64,
    seed: u64,
}

impl EncryptionOracle {
    pub fn plain(&self) -> &ExplicitStructure {
        &self.plain
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// E(a): the codeword of a plain element index.
    pub fn encrypt_element(&self, index: u64) -> Result<CryptoElement> {
        self.codewords
            .get(index as usize)
            .cloned()
            .ok_or(Error::ForeignElement)
    }

    /// E⁻¹(c). Quarantined: intended for verification phases only, and
    /// counted so tests can assert the attack phase made zero calls.
    pub fn hidden_decrypt(&self, codeword: &CryptoElement) -> Result<u64> {
        self.hidden_queries.fetch_add(1, Ordering::Relaxed);
        self.inverse.get(codeword).copied().ok_or(Error::ForeignElement)
    }

    /// Number of times the hidden inverse has been consulted.
    pub fn hidden_query_count(&self) -> u64 {
        self.hidden_queries.load(Ordering::Relaxed)
    }

    /// Known-plaintext pairs (a, E(a)) for the given plain indices.
    pub fn known_pairs(&self, indices: &[u64]) -> Result<Vec<(u64, CryptoElement)>> {
        indices
            .iter()
            .map(|&i| Ok((i, self.encrypt_element(i)?)))
            .collect()
    }
}

struct EncryptedBox {
    plain: ExplicitStructure,
    codewords: Arc<Vec<CryptoElement>>,
    inverse: Arc<HashMap<CryptoElement, u64>>,
    len_bytes: usize,
    rng: ChaCha8Rng,
}

impl EncryptedBox {
    fn decode(&self, e: &CryptoElement) -> Result<u64> {
        self.inverse.get(e).copied().ok_or(Error::ForeignElement)
    }
}

impl BoxOracle for EncryptedBox {
    fn signature(&self) -> Signature {
        self.plain.signature()
    }
    fn string_len_bits(&self) -> usize {
        self.len_bytes * 8
    }
    fn sample(&mut self) -> Result<CryptoElement> {
        let idx = self.rng.gen_range(0..self.plain.order());
        Ok(self.codewords[idx as usize].clone())
    }
    fn apply(&mut self, op: Op, args: &[&CryptoElement]) -> Result<CryptoElement> {
        let plain_args: Vec<u64> =
            args.iter().map(|e| self.decode(e)).collect::<Result<_>>()?;
        let out = self.plain.apply(op, &plain_args)?;
        Ok(self.codewords[out as usize].clone())
    }
    fn equal(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool> {
        Ok(a == b)
    }
    fn boxed_clone(&self) -> Box<dyn BoxOracle> {
        Box::new(EncryptedBox {
            plain: self.plain.clone(),
            codewords: self.codewords.clone(),
            inverse: self.inverse.clone(),
            len_bytes: self.len_bytes,
            rng: self.rng.clone(),
        })
    }
    fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "encrypted-box"));
    }
    fn sampler_provenance(&self) -> String {
        "uniform over the codeword table".into()
    }
}

/// Encrypts an explicit structure under a fresh secret bijection derived
/// from `seed`. Codewords are random distinct strings of twice the index
/// width, so raw bits carry no usable structure. Distinct seeds give
/// distinct tables with overwhelming probability.
pub fn encrypt(
    plain: &ExplicitStructure,
    seed: u64,
) -> Result<(BlackBox, EncryptionOracle)> {
    let order = plain.order();
    if order > ENUMERATION_CAP {
        return Err(Error::CapExceeded { cap: ENUMERATION_CAP, partial: Vec::new() });
    }
    let len_bytes = element::masked_len_bytes(order);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "codeword-mask"));
    let mut seen: HashMap<CryptoElement, u64> = HashMap::with_capacity(order as usize);
    let mut codewords = Vec::with_capacity(order as usize);
    for index in 0..order {
        loop {
            let mut bytes = vec![0u8; len_bytes];
            rng.fill(&mut bytes[..]);
            let candidate = CryptoElement::from_bytes(bytes);
            if !seen.contains_key(&candidate) {
                seen.insert(candidate.clone(), index);
                codewords.push(candidate);
                break;
            }
        }
    }
    let codewords = Arc::new(codewords);
    let inverse = Arc::new(seen);
    let bb = BlackBox::from_oracle(EncryptedBox {
        plain: plain.clone(),
        codewords: codewords.clone(),
        inverse: inverse.clone(),
        len_bytes,
        rng: ChaCha8Rng::seed_from_u64(derive_seed(seed, "encrypted-box")),
    });
    let oracle = EncryptionOracle {
        plain: plain.clone(),
        codewords,
        inverse,
        hidden_queries: AtomicU64::new(0),
        seed,
    };
    Ok((bb, oracle))
}

struct TransparentBox {
    plain: ExplicitStructure,
    len_bytes: usize,
    rng: ChaCha8Rng,
}

impl TransparentBox {
    fn decode(&self, e: &CryptoElement) -> Result<u64> {
        let v = element::decode_index(e);
        if v >= self.plain.order() {
            return Err(Error::ForeignElement);
        }
        Ok(v)
    }
}

impl BoxOracle for TransparentBox {
    fn signature(&self) -> Signature {
        self.plain.signature()
    }
    fn string_len_bits(&self) -> usize {
        self.len_bytes * 8
    }
    fn sample(&mut self) -> Result<CryptoElement> {
        let idx = self.rng.gen_range(0..self.plain.order());
        Ok(element::encode_index(idx, self.len_bytes))
    }
    fn apply(&mut self, op: Op, args: &[&CryptoElement]) -> Result<CryptoElement> {
        let plain_args: Vec<u64> =
            args.iter().map(|e| self.decode(e)).collect::<Result<_>>()?;
        let out = self.plain.apply(op, &plain_args)?;
        Ok(element::encode_index(out, self.len_bytes))
    }
    fn equal(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool> {
        Ok(a == b)
    }
    fn boxed_clone(&self) -> Box<dyn BoxOracle> {
        Box::new(TransparentBox {
            plain: self.plain.clone(),
            len_bytes: self.len_bytes,
            rng: self.rng.clone(),
        })
    }
    fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "transparent-box"));
    }
    fn sampler_provenance(&self) -> String {
        "uniform over plain indices".into()
    }
}

/// A box over an explicit structure whose codewords are the plain indices
/// themselves. Used where the structure is public (for example a unit group
/// being probed) but the oracle discipline and query counting still apply.
pub fn transparent_box(plain: &ExplicitStructure, seed: u64) -> BlackBox {
    let len_bytes = element::index_len_bytes(plain.order());
    BlackBox::from_oracle(TransparentBox {
        plain: plain.clone(),
        len_bytes,
        rng: ChaCha8Rng::seed_from_u64(derive_seed(seed, "transparent-box")),
    })
}

/// Codeword of a plain index in a transparent box of the given structure.
pub fn transparent_codeword(plain: &ExplicitStructure, index: u64) -> Result<CryptoElement> {
    if index >= plain.order() {
        return Err(Error::ForeignElement);
    }
    Ok(element::encode_index(index, element::index_len_bytes(plain.order())))
}
