//! Builders of new black boxes from old ones.
//!
//! Direct products pair codewords and work componentwise; homomorphic
//! images keep a box's strings and operations but redefine equality by a
//! congruence; generated subgroups sample through a product replacement
//! walk. The morphism-graph machinery lives in [`morphisms`].

mod morphisms;

pub use morphisms::{
    amalgamate, augment, check_function, conjugation_graph, graph_subgroup, reify,
    ConjugationGraph, Direction, FunctionCheck, GraphSubgroup, ProtoInvolution,
};
pub(crate) use morphisms::enumerate_box_expecting;

use crate::blackbox::{BlackBox, BoxOracle, Kind, Op, Signature};
use crate::element::CryptoElement;
use crate::error::{Error, Result};
use crate::sampling::{self, PrState};
use crate::util::derive_seed;

/// Joins two component codewords into a pair codeword.
pub fn join_pair(a: &CryptoElement, b: &CryptoElement) -> CryptoElement {
    a.concat(b)
}

/// Splits a pair codeword at the first component's byte width.
pub fn split_pair(e: &CryptoElement, first_bytes: usize) -> (CryptoElement, CryptoElement) {
    e.split_at_byte(first_bytes)
}

// ---------------------------------------------------------------- products

struct ProductBox {
    x: BlackBox,
    y: BlackBox,
    x_bytes: usize,
}

impl ProductBox {
    fn split_args(
        &self,
        args: &[&CryptoElement],
    ) -> (Vec<CryptoElement>, Vec<CryptoElement>) {
        let mut left = Vec::with_capacity(args.len());
        let mut right = Vec::with_capacity(args.len());
        for e in args {
            let (a, b) = split_pair(e, self.x_bytes);
            left.push(a);
            right.push(b);
        }
        (left, right)
    }
}

impl BoxOracle for ProductBox {
    fn signature(&self) -> Signature {
        self.x.signature()
    }
    fn string_len_bits(&self) -> usize {
        self.x.string_len_bits() + self.y.string_len_bits()
    }
    fn sample(&mut self) -> Result<CryptoElement> {
        let a = self.x.sample()?;
        let b = self.y.sample()?;
        Ok(join_pair(&a, &b))
    }
    fn apply(&mut self, op: Op, args: &[&CryptoElement]) -> Result<CryptoElement> {
        let (left, right) = self.split_args(args);
        let left_refs: Vec<&CryptoElement> = left.iter().collect();
        let right_refs: Vec<&CryptoElement> = right.iter().collect();
        let a = self.x.apply(op, &left_refs)?;
        let b = self.y.apply(op, &right_refs)?;
        Ok(join_pair(&a, &b))
    }
    fn equal(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool> {
        let (ax, ay) = split_pair(a, self.x_bytes);
        let (bx, by) = split_pair(b, self.x_bytes);
        Ok(self.x.equal(&ax, &bx)? && self.y.equal(&ay, &by)?)
    }
    fn boxed_clone(&self) -> Box<dyn BoxOracle> {
        Box::new(ProductBox { x: self.x.clone(), y: self.y.clone(), x_bytes: self.x_bytes })
    }
    fn reseed(&mut self, seed: u64) {
        self.x = self.x.fork(derive_seed(seed, "product-left"));
        self.y = self.y.fork(derive_seed(seed, "product-right"));
    }
    fn sampler_provenance(&self) -> String {
        format!("independent pair ({}; {})", self.x.sampler_provenance(), self.y.sampler_provenance())
    }
}

/// Direct product of two boxes of the same kind: codewords are pairs,
/// sampling is independent, operations and equality are componentwise.
pub fn direct_product(x: BlackBox, y: BlackBox) -> Result<BlackBox> {
    if x.kind() != y.kind() {
        return Err(Error::SignatureMismatch(format!(
            "cannot pair a {:?} box with a {:?} box",
            x.kind(),
            y.kind()
        )));
    }
    let x_bytes = x.string_len_bytes();
    Ok(BlackBox::from_oracle(ProductBox { x, y, x_bytes }))
}

// ------------------------------------------------------------------ images

/// A redefined equality relation. Implementations must be congruences:
/// equivalences compatible with every declared operation. The image
/// constructor validates this on samples and callers remain responsible
/// for the rest.
pub trait Congruence: Send {
    fn eval(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool>;
    fn boxed_clone(&self) -> Box<dyn Congruence>;
    fn describe(&self) -> String {
        "congruence".into()
    }
}

/// The identity congruence: delegates to a box's own equality oracle.
pub struct DelegatedEquality(pub BlackBox);

impl Congruence for DelegatedEquality {
    fn eval(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool> {
        self.0.equal(a, b)
    }
    fn boxed_clone(&self) -> Box<dyn Congruence> {
        Box::new(DelegatedEquality(self.0.clone()))
    }
    fn describe(&self) -> String {
        "delegated equality".into()
    }
}

/// Collapses everything: the image is the trivial structure.
pub struct AlwaysEqual;

impl Congruence for AlwaysEqual {
    fn eval(&mut self, _a: &CryptoElement, _b: &CryptoElement) -> Result<bool> {
        Ok(true)
    }
    fn boxed_clone(&self) -> Box<dyn Congruence> {
        Box::new(AlwaysEqual)
    }
    fn describe(&self) -> String {
        "always equal".into()
    }
}

/// Equality modulo a (normal) subgroup given by representatives of its
/// element set: `a ~ b` iff `a·b⁻¹` lies in the subgroup.
pub struct CosetCongruence {
    bb: BlackBox,
    subgroup: Vec<CryptoElement>,
}

impl CosetCongruence {
    pub fn new(bb: BlackBox, subgroup: Vec<CryptoElement>) -> Self {
        CosetCongruence { bb, subgroup }
    }
}

impl Congruence for CosetCongruence {
    fn eval(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool> {
        let b_inv = self.bb.invert(b)?;
        let quotient = self.bb.compose(a, &b_inv)?;
        crate::blackbox::member(&mut self.bb, &self.subgroup, &quotient)
    }
    fn boxed_clone(&self) -> Box<dyn Congruence> {
        Box::new(CosetCongruence { bb: self.bb.clone(), subgroup: self.subgroup.clone() })
    }
    fn describe(&self) -> String {
        format!("modulo a subgroup of {} elements", self.subgroup.len())
    }
}

struct ImageBox {
    inner: BlackBox,
    eq: Box<dyn Congruence>,
}

impl BoxOracle for ImageBox {
    fn signature(&self) -> Signature {
        self.inner.signature()
    }
    fn string_len_bits(&self) -> usize {
        self.inner.string_len_bits()
    }
    fn sample(&mut self) -> Result<CryptoElement> {
        self.inner.sample()
    }
    fn apply(&mut self, op: Op, args: &[&CryptoElement]) -> Result<CryptoElement> {
        self.inner.apply(op, args)
    }
    fn equal(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool> {
        self.eq.eval(a, b)
    }
    fn boxed_clone(&self) -> Box<dyn BoxOracle> {
        Box::new(ImageBox { inner: self.inner.clone(), eq: self.eq.boxed_clone() })
    }
    fn reseed(&mut self, seed: u64) {
        self.inner = self.inner.fork(derive_seed(seed, "image-inner"));
    }
    fn sampler_provenance(&self) -> String {
        self.inner.sampler_provenance()
    }
}

/// Homomorphic image of `x`: same strings and operations, equality replaced
/// by `eq`. The congruence property is validated on `validation_samples`
/// random triples; a sampled violation is an error.
pub fn homomorphic_image(
    x: BlackBox,
    eq: Box<dyn Congruence>,
    validation_samples: usize,
) -> Result<BlackBox> {
    let mut image = BlackBox::from_oracle(ImageBox { inner: x, eq });
    validate_congruence(&mut image, validation_samples)?;
    Ok(image)
}

fn validate_congruence(image: &mut BlackBox, samples: usize) -> Result<()> {
    let binary_ops: Vec<Op> = image
        .signature()
        .operations()
        .iter()
        .filter(|s| s.arity == 2)
        .map(|s| s.op)
        .collect();
    for _ in 0..samples {
        let x = image.sample()?;
        let x2 = image.sample()?;
        let y = image.sample()?;
        if !image.equal(&x, &x)? {
            return Err(Error::CongruenceViolation("relation is not reflexive".into()));
        }
        let fwd = image.equal(&x, &x2)?;
        let bwd = image.equal(&x2, &x)?;
        if fwd != bwd {
            return Err(Error::CongruenceViolation("relation is not symmetric".into()));
        }
        if !fwd {
            continue;
        }
        for &op in &binary_ops {
            let a = image.apply(op, &[&x, &y])?;
            let b = image.apply(op, &[&x2, &y])?;
            let c = image.apply(op, &[&y, &x])?;
            let d = image.apply(op, &[&y, &x2])?;
            if !image.equal(&a, &b)? || !image.equal(&c, &d)? {
                return Err(Error::CongruenceViolation(format!(
                    "{op:?} separates an identified pair"
                )));
            }
        }
    }
    Ok(())
}

// -------------------------------------------------------------- subgroups

struct GeneratedSubgroupBox {
    parent: BlackBox,
    walk: PrState,
    gens: Vec<CryptoElement>,
}

impl BoxOracle for GeneratedSubgroupBox {
    fn signature(&self) -> Signature {
        self.parent.signature()
    }
    fn string_len_bits(&self) -> usize {
        self.parent.string_len_bits()
    }
    fn sample(&mut self) -> Result<CryptoElement> {
        self.walk.sample()
    }
    fn apply(&mut self, op: Op, args: &[&CryptoElement]) -> Result<CryptoElement> {
        self.parent.apply(op, args)
    }
    fn equal(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool> {
        self.parent.equal(a, b)
    }
    fn boxed_clone(&self) -> Box<dyn BoxOracle> {
        Box::new(GeneratedSubgroupBox {
            parent: self.parent.clone(),
            walk: self.walk.clone_state(),
            gens: self.gens.clone(),
        })
    }
    fn reseed(&mut self, seed: u64) {
        self.parent = self.parent.fork(derive_seed(seed, "subgroup-parent"));
        self.walk.reseed(derive_seed(seed, "subgroup-walk"));
    }
    fn sampler_provenance(&self) -> String {
        format!(
            "product replacement over {} generators (burn-in {})",
            self.gens.len(),
            self.walk.burn_in()
        )
    }
}

/// The subgroup of `x` generated by `gens`: operations and equality are
/// the parent's, sampling runs a product replacement walk on the
/// generators.
pub fn generated_subgroup(
    x: &BlackBox,
    gens: &[CryptoElement],
    seed: u64,
) -> Result<BlackBox> {
    let walk = sampling::pr_init(
        x,
        gens,
        sampling::default_slots(gens.len()),
        sampling::DEFAULT_BURN_IN,
        derive_seed(seed, "generated-subgroup"),
    )?;
    Ok(BlackBox::from_oracle(GeneratedSubgroupBox {
        parent: x.clone(),
        walk,
        gens: gens.to_vec(),
    }))
}

// ------------------------------------------------------------- semidirect

/// An action of one box on another by automorphisms: `(x, y) -> x^y`.
pub trait GroupAction: Send {
    fn act(&mut self, x: &CryptoElement, y: &CryptoElement) -> Result<CryptoElement>;
    fn boxed_clone(&self) -> Box<dyn GroupAction>;
    fn describe(&self) -> String {
        "action".into()
    }
}

/// Every element of Y acts as the identity.
pub struct TrivialAction;

impl GroupAction for TrivialAction {
    fn act(&mut self, x: &CryptoElement, _y: &CryptoElement) -> Result<CryptoElement> {
        Ok(x.clone())
    }
    fn boxed_clone(&self) -> Box<dyn GroupAction> {
        Box::new(TrivialAction)
    }
    fn describe(&self) -> String {
        "trivial".into()
    }
}

/// The nontrivial element of a 2-element group acts by inversion.
/// An automorphism exactly when the acted-on group is abelian.
pub struct InversionAction {
    x: BlackBox,
    y: BlackBox,
    y_identity: CryptoElement,
}

impl InversionAction {
    pub fn new(x: &BlackBox, y: &mut BlackBox) -> Result<Self> {
        let y_identity = y.identity()?;
        Ok(InversionAction { x: x.clone(), y: y.clone(), y_identity })
    }
}

impl GroupAction for InversionAction {
    fn act(&mut self, x: &CryptoElement, y: &CryptoElement) -> Result<CryptoElement> {
        if self.y.equal(y, &self.y_identity)? {
            Ok(x.clone())
        } else {
            self.x.invert(x)
        }
    }
    fn boxed_clone(&self) -> Box<dyn GroupAction> {
        Box::new(InversionAction {
            x: self.x.clone(),
            y: self.y.clone(),
            y_identity: self.y_identity.clone(),
        })
    }
    fn describe(&self) -> String {
        "inversion".into()
    }
}

struct SemidirectBox {
    x: BlackBox,
    y: BlackBox,
    action: Box<dyn GroupAction>,
    x_bytes: usize,
}

impl BoxOracle for SemidirectBox {
    fn signature(&self) -> Signature {
        Signature::GROUP
    }
    fn string_len_bits(&self) -> usize {
        self.x.string_len_bits() + self.y.string_len_bits()
    }
    fn sample(&mut self) -> Result<CryptoElement> {
        let a = self.x.sample()?;
        let b = self.y.sample()?;
        Ok(join_pair(&a, &b))
    }
    fn apply(&mut self, op: Op, args: &[&CryptoElement]) -> Result<CryptoElement> {
        match op {
            Op::Product => {
                let (x1, y1) = split_pair(args[0], self.x_bytes);
                let (x2, y2) = split_pair(args[1], self.x_bytes);
                // (x1, y1)(x2, y2) = (x1 · x2^(y1⁻¹), y1·y2)
                let y1_inv = self.y.invert(&y1)?;
                let moved = self.action.act(&x2, &y1_inv)?;
                let left = self.x.compose(&x1, &moved)?;
                let right = self.y.compose(&y1, &y2)?;
                Ok(join_pair(&left, &right))
            }
            Op::Inverse => {
                let (a, b) = split_pair(args[0], self.x_bytes);
                let a_inv = self.x.invert(&a)?;
                let left = self.action.act(&a_inv, &b)?;
                let right = self.y.invert(&b)?;
                Ok(join_pair(&left, &right))
            }
            Op::Identity => {
                let e_x = self.x.identity()?;
                let e_y = self.y.identity()?;
                Ok(join_pair(&e_x, &e_y))
            }
            _ => Err(Error::MissingOperation(op)),
        }
    }
    fn equal(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool> {
        let (ax, ay) = split_pair(a, self.x_bytes);
        let (bx, by) = split_pair(b, self.x_bytes);
        Ok(self.x.equal(&ax, &bx)? && self.y.equal(&ay, &by)?)
    }
    fn boxed_clone(&self) -> Box<dyn BoxOracle> {
        Box::new(SemidirectBox {
            x: self.x.clone(),
            y: self.y.clone(),
            action: self.action.boxed_clone(),
            x_bytes: self.x_bytes,
        })
    }
    fn reseed(&mut self, seed: u64) {
        self.x = self.x.fork(derive_seed(seed, "semidirect-left"));
        self.y = self.y.fork(derive_seed(seed, "semidirect-right"));
    }
    fn sampler_provenance(&self) -> String {
        format!("independent pair ({}; {})", self.x.sampler_provenance(), self.y.sampler_provenance())
    }
}

/// Semidirect product of two group boxes under an action of `y` on `x`.
/// The action is validated on samples: it must preserve products and the
/// identity of `y` must act trivially.
pub fn semidirect_product(
    x: BlackBox,
    y: BlackBox,
    action: Box<dyn GroupAction>,
    validation_samples: usize,
) -> Result<BlackBox> {
    if x.kind() != Kind::Group || y.kind() != Kind::Group {
        return Err(Error::SignatureMismatch("semidirect products need group boxes".into()));
    }
    let mut x = x;
    let mut y = y;
    let mut action = action;
    let e_y = y.identity()?;
    for _ in 0..validation_samples {
        let a = x.sample()?;
        let b = x.sample()?;
        let c = y.sample()?;
        let ab = x.compose(&a, &b)?;
        let moved_ab = action.act(&ab, &c)?;
        let moved_a = action.act(&a, &c)?;
        let moved_b = action.act(&b, &c)?;
        let product = x.compose(&moved_a, &moved_b)?;
        if !x.equal(&moved_ab, &product)? {
            return Err(Error::ActionViolation(format!(
                "{} does not preserve products",
                action.describe()
            )));
        }
        let fixed = action.act(&a, &e_y)?;
        if !x.equal(&fixed, &a)? {
            return Err(Error::ActionViolation(
                "the identity must act trivially".into(),
            ));
        }
    }
    let x_bytes = x.string_len_bytes();
    Ok(BlackBox::from_oracle(SemidirectBox { x, y, action, x_bytes }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackbox::{element_order, enumerate_closure, identity_element, member, power};
    use crate::encrypt::encrypt;
    use crate::explicit::{make_cyclic_group, make_symmetric_group};

    #[test]
    fn product_of_z2_and_z3_encrypts_z6() {
        let z2 = make_cyclic_group(2).unwrap();
        let z3 = make_cyclic_group(3).unwrap();
        let (b2, o2) = encrypt(&z2, 1).unwrap();
        let (b3, o3) = encrypt(&z3, 2).unwrap();
        let mut prod = direct_product(b2, b3).unwrap();
        let g = join_pair(
            &o2.encrypt_element(1).unwrap(),
            &o3.encrypt_element(1).unwrap(),
        );
        // (1,1) has order lcm(2,3) = 6, matching the chinese remainder view
        assert_eq!(element_order(&mut prod, &g, 6).unwrap(), 6);
        let id = identity_element(&mut prod).unwrap();
        let expected = join_pair(
            &o2.encrypt_element(0).unwrap(),
            &o3.encrypt_element(0).unwrap(),
        );
        assert!(prod.equal(&id, &expected).unwrap());
        let closure = enumerate_closure(&mut prod, &[g], 10).unwrap();
        assert_eq!(closure.len(), 6);
    }

    #[test]
    fn product_marginals_cover_parents() {
        let z4 = make_cyclic_group(4).unwrap();
        let z5 = make_cyclic_group(5).unwrap();
        let (b4, o4) = encrypt(&z4, 3).unwrap();
        let (b5, o5) = encrypt(&z5, 4).unwrap();
        let x_bytes = b4.string_len_bytes();
        let mut prod = direct_product(b4.clone(), b5).unwrap();
        let mut left_seen = vec![0u64; 4];
        let mut right_seen = vec![0u64; 5];
        let mut probe = b4.fork(77);
        for _ in 0..2000 {
            let s = prod.sample().unwrap();
            let (a, b) = split_pair(&s, x_bytes);
            for i in 0..4 {
                if probe.equal(&a, &o4.encrypt_element(i).unwrap()).unwrap() {
                    left_seen[i as usize] += 1;
                }
            }
            for i in 0..5 {
                if b == o5.encrypt_element(i).unwrap() {
                    right_seen[i as usize] += 1;
                }
            }
        }
        // loose coverage bounds; the chi-square gate lives in sampling
        assert!(left_seen.iter().all(|&c| c > 350), "{left_seen:?}");
        assert!(right_seen.iter().all(|&c| c > 250), "{right_seen:?}");
    }

    #[test]
    fn signature_mismatch_is_rejected() {
        let z2 = make_cyclic_group(2).unwrap();
        let f3 = crate::explicit::make_field(&crate::FieldSpec::new(3, 1, None).unwrap()).unwrap();
        let (bg, _) = encrypt(&z2, 1).unwrap();
        let (bf, _) = encrypt(&f3, 1).unwrap();
        assert!(matches!(direct_product(bg, bf), Err(Error::SignatureMismatch(_))));
    }

    #[test]
    fn identity_congruence_preserves_behavior() {
        let z6 = make_cyclic_group(6).unwrap();
        let (bb, oracle) = encrypt(&z6, 5).unwrap();
        let eq = Box::new(DelegatedEquality(bb.clone()));
        let mut image = homomorphic_image(bb, eq, 64).unwrap();
        let a = oracle.encrypt_element(2).unwrap();
        let b = oracle.encrypt_element(3).unwrap();
        let sum = image.compose(&a, &b).unwrap();
        assert!(image.equal(&sum, &oracle.encrypt_element(5).unwrap()).unwrap());
        assert!(!image.equal(&a, &b).unwrap());
    }

    #[test]
    fn quotient_of_z6_by_z2_has_three_classes() {
        // independent view: classes of Z6 mod {0,3} are {0,3},{1,4},{2,5}
        let z6 = make_cyclic_group(6).unwrap();
        let (bb, oracle) = encrypt(&z6, 6).unwrap();
        let subgroup = vec![
            oracle.encrypt_element(0).unwrap(),
            oracle.encrypt_element(3).unwrap(),
        ];
        let eq = Box::new(CosetCongruence::new(bb.clone(), subgroup));
        let mut image = homomorphic_image(bb, eq, 200).unwrap();
        let mut classes: Vec<CryptoElement> = Vec::new();
        for i in 0..6 {
            let e = oracle.encrypt_element(i).unwrap();
            if !member(&mut image, &classes, &e).unwrap() {
                classes.push(e);
            }
        }
        assert_eq!(classes.len(), 3);
        for (a, b) in [(0u64, 3u64), (1, 4), (2, 5)] {
            let ea = oracle.encrypt_element(a).unwrap();
            let eb = oracle.encrypt_element(b).unwrap();
            assert!(image.equal(&ea, &eb).unwrap());
        }
        crate::laws::check_congruence(&mut image, 1000).unwrap();
    }

    #[test]
    fn always_true_congruence_collapses_everything() {
        let z6 = make_cyclic_group(6).unwrap();
        let (bb, oracle) = encrypt(&z6, 7).unwrap();
        let mut image = homomorphic_image(bb, Box::new(AlwaysEqual), 32).unwrap();
        let a = oracle.encrypt_element(1).unwrap();
        let b = oracle.encrypt_element(4).unwrap();
        assert!(image.equal(&a, &b).unwrap());
    }

    #[test]
    fn non_congruence_is_caught_by_validation() {
        // identify {0,1} on Z_5 and nothing else: not compatible with +1
        struct Lumpy {
            bb: BlackBox,
            zero: CryptoElement,
            one: CryptoElement,
        }
        impl Congruence for Lumpy {
            fn eval(&mut self, a: &CryptoElement, b: &CryptoElement) -> Result<bool> {
                if self.bb.equal(a, b)? {
                    return Ok(true);
                }
                let a_small = self.bb.equal(a, &self.zero)? || self.bb.equal(a, &self.one)?;
                let b_small = self.bb.equal(b, &self.zero)? || self.bb.equal(b, &self.one)?;
                Ok(a_small && b_small)
            }
            fn boxed_clone(&self) -> Box<dyn Congruence> {
                Box::new(Lumpy {
                    bb: self.bb.clone(),
                    zero: self.zero.clone(),
                    one: self.one.clone(),
                })
            }
        }
        let z5 = make_cyclic_group(5).unwrap();
        let (bb, oracle) = encrypt(&z5, 8).unwrap();
        let eq = Box::new(Lumpy {
            bb: bb.clone(),
            zero: oracle.encrypt_element(0).unwrap(),
            one: oracle.encrypt_element(1).unwrap(),
        });
        match homomorphic_image(bb, eq, 500) {
            Err(Error::CongruenceViolation(_)) => {}
            other => panic!("expected congruence violation, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn generated_subgroup_of_s4_by_two_transpositions() {
        let s4 = make_symmetric_group(4).unwrap();
        let (bb, oracle) = encrypt(&s4, 9).unwrap();
        let t12 = oracle.encrypt_element(s4.index_of_label("(1 2)").unwrap()).unwrap();
        let t34 = oracle.encrypt_element(s4.index_of_label("(3 4)").unwrap()).unwrap();
        let mut sub = generated_subgroup(&bb, &[t12.clone(), t34.clone()], 1).unwrap();
        let closure = enumerate_closure(&mut sub, &[t12, t34], 100).unwrap();
        assert_eq!(closure.len(), 4);
        // samples stay inside the subgroup
        for _ in 0..200 {
            let s = sub.sample().unwrap();
            assert!(member(&mut sub, &closure, &s).unwrap());
        }
    }

    #[test]
    fn generated_subgroup_of_identity_is_trivial() {
        let s4 = make_symmetric_group(4).unwrap();
        let (mut bb, _) = encrypt(&s4, 10).unwrap();
        let id = identity_element(&mut bb).unwrap();
        let mut sub = generated_subgroup(&bb, &[id.clone()], 2).unwrap();
        for _ in 0..20 {
            let s = sub.sample().unwrap();
            assert!(sub.equal(&s, &id).unwrap());
        }
    }

    #[test]
    fn full_generator_set_recovers_the_whole_box() {
        let s4 = make_symmetric_group(4).unwrap();
        let (mut bb, oracle) = encrypt(&s4, 11).unwrap();
        let gens: Vec<CryptoElement> = s4
            .generators()
            .iter()
            .map(|&g| oracle.encrypt_element(g).unwrap())
            .collect();
        let closure = enumerate_closure(&mut bb, &gens, 100).unwrap();
        assert_eq!(closure.len(), 24);
    }

    #[test]
    fn trivial_action_gives_the_direct_product() {
        let z3 = make_cyclic_group(3).unwrap();
        let z2 = make_cyclic_group(2).unwrap();
        let (b3, o3) = encrypt(&z3, 12).unwrap();
        let (b2, o2) = encrypt(&z2, 13).unwrap();
        let mut semi =
            semidirect_product(b3.clone(), b2.clone(), Box::new(TrivialAction), 32).unwrap();
        let mut prod = direct_product(b3, b2).unwrap();
        for a in 0..3u64 {
            for s in 0..2u64 {
                for b in 0..3u64 {
                    for t in 0..2u64 {
                        let p = join_pair(
                            &o3.encrypt_element(a).unwrap(),
                            &o2.encrypt_element(s).unwrap(),
                        );
                        let q = join_pair(
                            &o3.encrypt_element(b).unwrap(),
                            &o2.encrypt_element(t).unwrap(),
                        );
                        let via_semi = semi.compose(&p, &q).unwrap();
                        let via_prod = prod.compose(&p, &q).unwrap();
                        assert!(prod.equal(&via_semi, &via_prod).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn identity_is_neutral_in_semidirect_products() {
        let z3 = make_cyclic_group(3).unwrap();
        let z2 = make_cyclic_group(2).unwrap();
        let (b3, _) = encrypt(&z3, 14).unwrap();
        let (mut b2, _) = encrypt(&z2, 15).unwrap();
        let action = Box::new(InversionAction::new(&b3, &mut b2).unwrap());
        let mut semi = semidirect_product(b3, b2, action, 64).unwrap();
        let e = identity_element(&mut semi).unwrap();
        for _ in 0..20 {
            let x = semi.sample().unwrap();
            let ex = semi.compose(&e, &x).unwrap();
            let xe = semi.compose(&x, &e).unwrap();
            assert!(semi.equal(&ex, &x).unwrap());
            assert!(semi.equal(&xe, &x).unwrap());
            let xi = semi.invert(&x).unwrap();
            let prod = semi.compose(&x, &xi).unwrap();
            assert!(semi.equal(&prod, &e).unwrap());
            let prod2 = semi.compose(&xi, &x).unwrap();
            assert!(semi.equal(&prod2, &e).unwrap());
        }
    }

    #[test]
    fn inversion_on_a_nonabelian_group_is_rejected() {
        // inversion is an automorphism only of abelian groups
        let s3 = make_symmetric_group(3).unwrap();
        let z2 = make_cyclic_group(2).unwrap();
        let (bs, _) = encrypt(&s3, 28).unwrap();
        let (mut b2, _) = encrypt(&z2, 29).unwrap();
        let action = Box::new(InversionAction::new(&bs, &mut b2).unwrap());
        match semidirect_product(bs, b2, action, 200) {
            Err(Error::ActionViolation(_)) => {}
            other => panic!("expected action violation, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn z3_by_z2_with_inversion_is_the_symmetric_group() {
        let z3 = make_cyclic_group(3).unwrap();
        let z2 = make_cyclic_group(2).unwrap();
        let (b3, o3) = encrypt(&z3, 16).unwrap();
        let (mut b2, o2) = encrypt(&z2, 17).unwrap();
        let action = Box::new(InversionAction::new(&b3, &mut b2).unwrap());
        let mut semi = semidirect_product(b3, b2, action, 64).unwrap();

        let elements: Vec<CryptoElement> = (0..3)
            .flat_map(|a| {
                (0..2).map(move |b| (a, b))
            })
            .map(|(a, b)| {
                join_pair(
                    &o3.encrypt_element(a).unwrap(),
                    &o2.encrypt_element(b).unwrap(),
                )
            })
            .collect();
        assert_eq!(elements.len(), 6);

        // nonabelian of order 6: isomorphic to S3 by multiplication table
        let mut abelian = true;
        let mut table = vec![vec![0usize; 6]; 6];
        for (i, p) in elements.iter().enumerate() {
            for (j, q) in elements.iter().enumerate() {
                let r = semi.compose(p, q).unwrap();
                let k = elements
                    .iter()
                    .position(|e| semi.equal(e, &r).unwrap())
                    .expect("closed");
                table[i][j] = k;
                if table.len() == 6 {
                    let rq = semi.compose(q, p).unwrap();
                    if !semi.equal(&r, &rq).unwrap() {
                        abelian = false;
                    }
                }
            }
        }
        assert!(!abelian);

        let s3 = make_symmetric_group(3).unwrap();
        let iso = crate::attack::isomorphism_by_tables(
            &|i, j| table[i][j],
            6,
            &|i, j| s3.compose(i as u64, j as u64).unwrap() as usize,
        );
        assert!(iso.is_some(), "no isomorphism with S3 found");
    }

    #[test]
    fn order_powers_respect_semidirect_structure() {
        // ((e,e) swapped-in generator)^2 behaves like the identity
        let z3 = make_cyclic_group(3).unwrap();
        let z2 = make_cyclic_group(2).unwrap();
        let (b3, o3) = encrypt(&z3, 18).unwrap();
        let (mut b2, o2) = encrypt(&z2, 19).unwrap();
        let action = Box::new(InversionAction::new(&b3, &mut b2).unwrap());
        let mut semi = semidirect_product(b3, b2, action, 32).unwrap();
        let flip = join_pair(
            &o3.encrypt_element(0).unwrap(),
            &o2.encrypt_element(1).unwrap(),
        );
        let sq = power(&mut semi, &flip, 2).unwrap();
        let e = identity_element(&mut semi).unwrap();
        assert!(semi.equal(&sq, &e).unwrap());
    }
}
