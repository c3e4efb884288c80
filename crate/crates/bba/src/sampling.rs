//! Random element generation for generated black-box subgroups via the
//! product replacement algorithm, with statistical quality diagnostics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::blackbox::{enumerate_closure, BlackBox};
use crate::element::CryptoElement;
use crate::error::{Error, Result};
use crate::util::derive_seed;

pub const DEFAULT_BURN_IN: u64 = 100;

/// Replacement-walk state over a generating tuple.
///
/// Every slot stays inside the generated subgroup: each step replaces one
/// slot by its product with another slot or that slot's inverse, on either
/// side. Draws return a uniformly chosen slot after a step.
pub struct PrState {
    bb: BlackBox,
    slots: Vec<CryptoElement>,
    rng: ChaCha8Rng,
    burn_in: u64,
    steps_per_draw: u64,
    step_count: u64,
    seed: u64,
    frozen: bool,
}

/// Slot count used when the caller does not override it.
pub fn default_slots(generator_count: usize) -> usize {
    10.max(generator_count + 5)
}

/// Initializes a replacement walk: slots are the generators repeated
/// cyclically, and `burn_in` steps are applied before the state is returned.
pub fn pr_init(
    bb: &BlackBox,
    gens: &[CryptoElement],
    slots: usize,
    burn_in: u64,
    seed: u64,
) -> Result<PrState> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let slots = slots.max(gens.len());
    let slot_vec: Vec<CryptoElement> =
        (0..slots).map(|i| gens[i % gens.len()].clone()).collect();
    let mut state = PrState {
        bb: bb.fork(derive_seed(seed, "pr-box")),
        slots: slot_vec,
        rng: ChaCha8Rng::seed_from_u64(derive_seed(seed, "pr-walk")),
        burn_in,
        steps_per_draw: slots as u64,
        step_count: 0,
        seed,
        frozen: false,
    };
    for _ in 0..burn_in {
        state.step()?;
    }
    Ok(state)
}

/// A deliberately broken walk: no steps, every draw returns slot 0.
/// Exists so the statistical gate can be shown to reject a bad sampler.
pub fn pr_init_frozen(bb: &BlackBox, gens: &[CryptoElement], seed: u64) -> Result<PrState> {
    let mut state = pr_init(bb, gens, default_slots(gens.len()), 0, seed)?;
    state.frozen = true;
    Ok(state)
}

impl PrState {
    fn step(&mut self) -> Result<usize> {
        let s = self.slots.len();
        if s < 2 {
            self.step_count += 1;
            return Ok(0);
        }
        let i = self.rng.gen_range(0..s);
        let j = {
            let v = self.rng.gen_range(0..s - 1);
            if v >= i {
                v + 1
            } else {
                v
            }
        };
        let multiply_left: bool = self.rng.gen();
        let use_inverse: bool = self.rng.gen();
        let other = if use_inverse {
            self.bb.invert(&self.slots[j])?
        } else {
            self.slots[j].clone()
        };
        self.slots[i] = if multiply_left {
            self.bb.compose(&other, &self.slots[i])?
        } else {
            self.bb.compose(&self.slots[i], &other)?
        };
        self.step_count += 1;
        Ok(i)
    }

    /// Advances the walk and returns the slot replaced last. One
    /// replacement step per draw leaves consecutive draws visibly
    /// correlated (a chi-square gate on the frequencies rejects), so a
    /// draw performs `steps_per_draw` steps; the default, one sweep of
    /// the slot vector, restores approximate independence.
    pub fn sample(&mut self) -> Result<CryptoElement> {
        if self.frozen {
            return Ok(self.slots[0].clone());
        }
        let mut last = 0;
        for _ in 0..self.steps_per_draw.max(1) {
            last = self.step()?;
        }
        Ok(self.slots[last].clone())
    }

    /// Overrides how many replacement steps each draw performs.
    pub fn set_steps_per_draw(&mut self, steps: u64) {
        self.steps_per_draw = steps.max(1);
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    pub fn burn_in(&self) -> u64 {
        self.burn_in
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn slots(&self) -> &[CryptoElement] {
        &self.slots
    }

    pub(crate) fn reseed(&mut self, seed: u64) {
        self.seed = seed;
        self.rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, "pr-walk"));
        let bb = self.bb.fork(derive_seed(seed, "pr-box"));
        self.bb = bb;
    }

    pub(crate) fn clone_state(&self) -> PrState {
        PrState {
            bb: self.bb.clone(),
            slots: self.slots.clone(),
            rng: self.rng.clone(),
            burn_in: self.burn_in,
            steps_per_draw: self.steps_per_draw,
            step_count: self.step_count,
            seed: self.seed,
            frozen: self.frozen,
        }
    }
}

/// Chi-square goodness-of-fit summary of a sampler against the uniform
/// distribution over the enumerated closure of the generators.
#[derive(Clone, Debug, Serialize)]
pub struct UniformityReport {
    pub closure_size: usize,
    pub samples: u64,
    pub chi_square: f64,
    pub p_value: f64,
    pub degrees_of_freedom: u64,
    pub counts: Vec<u64>,
}

/// Draws `samples` elements from a replacement walk over `gens` and tests
/// their frequencies against uniformity on the enumerated closure.
pub fn uniformity_report(
    bb: &BlackBox,
    gens: &[CryptoElement],
    samples: u64,
    burn_in: u64,
    seed: u64,
    cap: u64,
) -> Result<UniformityReport> {
    let mut state = pr_init(bb, gens, default_slots(gens.len()), burn_in, seed)?;
    uniformity_of_state(&mut state, gens, samples, cap)
}

/// Same gate run against the frozen (deliberately degenerate) sampler.
pub fn uniformity_report_frozen(
    bb: &BlackBox,
    gens: &[CryptoElement],
    samples: u64,
    seed: u64,
    cap: u64,
) -> Result<UniformityReport> {
    let mut state = pr_init_frozen(bb, gens, seed)?;
    uniformity_of_state(&mut state, gens, samples, cap)
}

fn uniformity_of_state(
    state: &mut PrState,
    gens: &[CryptoElement],
    samples: u64,
    cap: u64,
) -> Result<UniformityReport> {
    let mut counting_box = state.bb.fork(derive_seed(state.seed, "uniformity-count"));
    let closure = enumerate_closure(&mut counting_box, gens, cap)?;
    let k = closure.len();
    let mut counts = vec![0u64; k];
    'draws: for _ in 0..samples {
        let x = state.sample()?;
        for (i, e) in closure.iter().enumerate() {
            if counting_box.equal(e, &x)? {
                counts[i] += 1;
                continue 'draws;
            }
        }
        return Err(Error::ContractViolation(
            "sample fell outside the generated subgroup".into(),
        ));
    }
    let expected = samples as f64 / k as f64;
    let chi_square: f64 = counts
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    let degrees_of_freedom = (k - 1) as u64;
    let p_value = if degrees_of_freedom == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(degrees_of_freedom as f64)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        1.0 - dist.cdf(chi_square)
    };
    Ok(UniformityReport {
        closure_size: k,
        samples,
        chi_square,
        p_value,
        degrees_of_freedom,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encrypt::{encrypt, transparent_box, transparent_codeword};
    use crate::explicit::{make_cyclic_group, make_symmetric_group};

    #[test]
    fn trivial_generators_sample_identity() {
        let z5 = make_cyclic_group(5).unwrap();
        let (mut bb, oracle) = encrypt(&z5, 3).unwrap();
        let id = oracle.encrypt_element(0).unwrap();
        let mut state = pr_init(&bb, &[id.clone()], 10, 50, 1).unwrap();
        for _ in 0..100 {
            let x = state.sample().unwrap();
            assert!(bb.equal(&x, &id).unwrap());
        }
    }

    #[test]
    fn empty_generators_are_rejected() {
        let z5 = make_cyclic_group(5).unwrap();
        let (bb, _) = encrypt(&z5, 2).unwrap();
        assert!(matches!(pr_init(&bb, &[], 10, 10, 1), Err(crate::Error::EmptyGenerators)));
    }

    #[test]
    fn cyclic_group_is_covered() {
        let z5 = make_cyclic_group(5).unwrap();
        let (mut bb, oracle) = encrypt(&z5, 9).unwrap();
        let g = oracle.encrypt_element(1).unwrap();
        let mut state = pr_init(&bb, &[g], 10, DEFAULT_BURN_IN, 4).unwrap();
        let mut seen = vec![false; 5];
        for _ in 0..10_000 {
            let x = state.sample().unwrap();
            for i in 0..5 {
                let e = oracle.encrypt_element(i).unwrap();
                if bb.equal(&x, &e).unwrap() {
                    seen[i as usize] = true;
                }
            }
        }
        assert!(seen.iter().all(|&b| b), "not all of Z5 observed: {seen:?}");
    }

    #[test]
    fn identical_seeds_reproduce_the_stream() {
        let s3 = make_symmetric_group(3).unwrap();
        let bb = transparent_box(&s3, 0);
        let gens: Vec<_> = s3
            .generators()
            .iter()
            .map(|&g| transparent_codeword(&s3, g).unwrap())
            .collect();
        let mut a = pr_init(&bb, &gens, 10, 25, 42).unwrap();
        let mut b = pr_init(&bb, &gens, 10, 25, 42).unwrap();
        for _ in 0..200 {
            assert_eq!(a.sample().unwrap(), b.sample().unwrap());
        }
    }

    #[test]
    fn slots_stay_inside_the_subgroup() {
        let s3 = make_symmetric_group(3).unwrap();
        let mut bb = transparent_box(&s3, 0);
        // subgroup generated by (1 2): order 2
        let t = transparent_codeword(&s3, s3.index_of_label("(1 2)").unwrap()).unwrap();
        let closure = enumerate_closure(&mut bb, &[t.clone()], 10).unwrap();
        assert_eq!(closure.len(), 2);
        let mut state = pr_init(&bb, &[t], 10, 200, 5).unwrap();
        for _ in 0..50 {
            let _ = state.sample().unwrap();
        }
        for slot in state.slots().to_vec() {
            assert!(crate::blackbox::member(&mut bb, &closure, &slot).unwrap());
        }
    }

    #[test]
    fn s3_frequencies_are_near_uniform() {
        let s3 = make_symmetric_group(3).unwrap();
        let (bb, oracle) = encrypt(&s3, 17).unwrap();
        let gens: Vec<_> = s3
            .generators()
            .iter()
            .map(|&g| oracle.encrypt_element(g).unwrap())
            .collect();
        let samples = 10_000u64;
        let report = uniformity_report(&bb, &gens, samples, DEFAULT_BURN_IN, 11, 10).unwrap();
        assert_eq!(report.closure_size, 6);
        // each count within 5 sigma of samples/6
        let expected = samples as f64 / 6.0;
        let sigma = (expected * (1.0 - 1.0 / 6.0)).sqrt();
        for &c in &report.counts {
            assert!((c as f64 - expected).abs() < 5.0 * sigma, "count {c} vs {expected}");
        }
    }

    #[test]
    fn frozen_sampler_fails_the_gate() {
        let z5 = make_cyclic_group(5).unwrap();
        let (bb, oracle) = encrypt(&z5, 23).unwrap();
        let g = oracle.encrypt_element(1).unwrap();
        let report = uniformity_report_frozen(&bb, &[g], 10_000, 3, 10).unwrap();
        assert!(report.p_value < 1e-6, "p = {}", report.p_value);
    }

    #[test]
    fn trivial_group_has_zero_statistic() {
        let z1 = make_cyclic_group(1).unwrap();
        let (bb, oracle) = encrypt(&z1, 1).unwrap();
        let id = oracle.encrypt_element(0).unwrap();
        let report = uniformity_report(&bb, &[id], 500, 10, 2, 5).unwrap();
        assert_eq!(report.chi_square, 0.0);
        assert_eq!(report.p_value, 1.0);
    }
}
