//! Morphism graphs as black-box subgroups of direct products, and the
//! machinery built on them: proto-involutions, amalgamation, reification,
//! and augmentation.
//!
//! The graph of a map between groups is a subgroup of their direct product
//! exactly when the map is a homomorphism, so a generated subgroup of
//! `X×Y` built from consistent pairs *is* the encrypted homomorphism:
//! sampling it returns elements with their images already attached.

use super::{direct_product, generated_subgroup, join_pair, semidirect_product, split_pair, GroupAction};
use crate::blackbox::{enumerate_closure, BlackBox};
use crate::element::CryptoElement;
use crate::error::{Error, Result};
use crate::explicit::make_cyclic_group;
use crate::encrypt::transparent_box;
use crate::util::derive_seed;

/// Asserted direction of the encoded homomorphism. Building a graph does
/// not fix one; callers assert it after checking function-ness.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    /// First component determines the second.
    Forward,
    /// Second component determines the first.
    Backward,
}

/// Outcome of a function-ness check on a graph subgroup.
#[derive(Clone, Copy, Debug)]
pub struct FunctionCheck {
    pub forward: bool,
    pub backward: bool,
    /// Whether every member pair was inspected; otherwise `trials` sampled
    /// pairs were. Failures are certain either way; a sampled pass holds
    /// with confidence growing in the trial count.
    pub exhaustive: bool,
    pub trials: u64,
}

/// A generated black-box subgroup of `X×Y` built from generating pairs,
/// encrypting the graph of a homomorphism when the pairs are consistent.
pub struct GraphSubgroup {
    subgroup: BlackBox,
    x: BlackBox,
    y: BlackBox,
    x_bytes: usize,
    pairs: Vec<(CryptoElement, CryptoElement)>,
    direction: Option<Direction>,
}

impl GraphSubgroup {
    pub fn generating_pairs(&self) -> &[(CryptoElement, CryptoElement)] {
        &self.pairs
    }

    pub fn direction(&self) -> Option<Direction> {
        self.direction
    }

    pub fn set_direction(&mut self, direction: Direction) {
        self.direction = Some(direction);
    }

    /// The underlying box over `X×Y`.
    pub fn as_box_mut(&mut self) -> &mut BlackBox {
        &mut self.subgroup
    }

    pub fn x_bytes(&self) -> usize {
        self.x_bytes
    }

    /// Draws a member, split into an element and its attached image.
    pub fn sample_pair(&mut self) -> Result<(CryptoElement, CryptoElement)> {
        let s = self.subgroup.sample()?;
        Ok(split_pair(&s, self.x_bytes))
    }

    /// Enumerates all members (within `cap`), split into pairs.
    pub fn enumerate(&mut self, cap: u64) -> Result<Vec<(CryptoElement, CryptoElement)>> {
        let gens: Vec<CryptoElement> =
            self.pairs.iter().map(|(a, b)| join_pair(a, b)).collect();
        let members = enumerate_closure(&mut self.subgroup, &gens, cap)?;
        Ok(members.iter().map(|m| split_pair(m, self.x_bytes)).collect())
    }

    /// Whether the joined pair is a member (enumeration-based, desk scale).
    pub fn contains(&mut self, a: &CryptoElement, b: &CryptoElement, cap: u64) -> Result<bool> {
        let members = self.enumerate(cap)?;
        for (x, y) in &members {
            if self.x.equal(x, a)? && self.y.equal(y, b)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn clone_parts(&self) -> GraphSubgroup {
        GraphSubgroup {
            subgroup: self.subgroup.clone(),
            x: self.x.clone(),
            y: self.y.clone(),
            x_bytes: self.x_bytes,
            pairs: self.pairs.clone(),
            direction: self.direction,
        }
    }
}

/// Builds the generated subgroup of `X×Y` from generating pairs.
pub fn graph_subgroup(
    x: &BlackBox,
    y: &BlackBox,
    pairs: &[(CryptoElement, CryptoElement)],
    seed: u64,
) -> Result<GraphSubgroup> {
    if pairs.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let x_bytes = x.string_len_bytes();
    let product = direct_product(
        x.fork(derive_seed(seed, "graph-x")),
        y.fork(derive_seed(seed, "graph-y")),
    )?;
    let joined: Vec<CryptoElement> = pairs.iter().map(|(a, b)| join_pair(a, b)).collect();
    let subgroup = generated_subgroup(&product, &joined, derive_seed(seed, "graph-walk"))?;
    Ok(GraphSubgroup {
        subgroup,
        x: x.fork(derive_seed(seed, "graph-x-probe")),
        y: y.fork(derive_seed(seed, "graph-y-probe")),
        x_bytes,
        pairs: pairs.to_vec(),
        direction: None,
    })
}

/// Checks whether the graph is the graph of a function, in each direction.
///
/// Exhaustive over all member pairs when the subgroup enumerates within
/// `cap`; otherwise Monte-Carlo over `trials` sampled pairs.
pub fn check_function(g: &mut GraphSubgroup, trials: u64, cap: u64) -> Result<FunctionCheck> {
    match g.enumerate(cap) {
        Ok(members) => {
            let mut forward = true;
            let mut backward = true;
            for (i, (xi, yi)) in members.iter().enumerate() {
                for (xj, yj) in members.iter().skip(i + 1) {
                    if g.x.equal(xi, xj)? && !g.y.equal(yi, yj)? {
                        forward = false;
                    }
                    if g.y.equal(yi, yj)? && !g.x.equal(xi, xj)? {
                        backward = false;
                    }
                }
            }
            Ok(FunctionCheck { forward, backward, exhaustive: true, trials: 0 })
        }
        Err(Error::CapExceeded { .. }) => {
            let mut forward = true;
            let mut backward = true;
            let mut drawn: Vec<(CryptoElement, CryptoElement)> = Vec::new();
            for _ in 0..trials {
                let (x, y) = g.sample_pair()?;
                for (px, py) in &drawn {
                    if g.x.equal(&x, px)? && !g.y.equal(&y, py)? {
                        forward = false;
                    }
                    if g.y.equal(&y, py)? && !g.x.equal(&x, px)? {
                        backward = false;
                    }
                }
                drawn.push((x, y));
            }
            Ok(FunctionCheck { forward, backward, exhaustive: false, trials })
        }
        Err(e) => Err(e),
    }
}

/// A graph subgroup of `X×X` encoding an involutive automorphism:
/// membership is symmetric, so the encoded map composed with itself is the
/// identity wherever it is a function.
pub struct ProtoInvolution {
    graph: GraphSubgroup,
}

impl ProtoInvolution {
    /// Validates a graph as a proto-involution. Exhaustive when the
    /// subgroup enumerates within `cap`: function-ness plus membership
    /// symmetry. Otherwise `samples` member draws are cross-checked for
    /// symmetry among themselves.
    pub fn validate(mut graph: GraphSubgroup, samples: u64, cap: u64) -> Result<Self> {
        if graph.x.string_len_bits() != graph.y.string_len_bits()
            || graph.x.kind() != graph.y.kind()
        {
            return Err(Error::SignatureMismatch(
                "a proto-involution lives on a single box".into(),
            ));
        }
        match graph.enumerate(cap) {
            Ok(members) => {
                let check = check_function(&mut graph, 0, cap)?;
                if !check.forward {
                    return Err(Error::ContractViolation(
                        "graph is not the graph of a function".into(),
                    ));
                }
                for (a, b) in &members {
                    let mut mirrored = false;
                    for (c, d) in &members {
                        if graph.x.equal(c, b)? && graph.y.equal(d, a)? {
                            mirrored = true;
                            break;
                        }
                    }
                    if !mirrored {
                        return Err(Error::ContractViolation(
                            "membership is not symmetric; encoded map is not involutive".into(),
                        ));
                    }
                }
            }
            Err(Error::CapExceeded { .. }) => {
                let mut drawn: Vec<(CryptoElement, CryptoElement)> = Vec::new();
                for _ in 0..samples {
                    let (x, y) = graph.sample_pair()?;
                    for (px, py) in &drawn {
                        let first_matches = graph.x.equal(&x, py)?;
                        if first_matches && !graph.y.equal(&y, px)? {
                            return Err(Error::ContractViolation(
                                "sampled members contradict involutivity".into(),
                            ));
                        }
                        if graph.x.equal(&x, px)? && !graph.y.equal(&y, py)? {
                            return Err(Error::ContractViolation(
                                "sampled members contradict function-ness".into(),
                            ));
                        }
                    }
                    drawn.push((x, y));
                }
            }
            Err(e) => return Err(e),
        }
        Ok(ProtoInvolution { graph })
    }

    pub fn graph(&self) -> &GraphSubgroup {
        &self.graph
    }

    pub fn graph_mut(&mut self) -> &mut GraphSubgroup {
        &mut self.graph
    }

    pub fn generating_pairs(&self) -> &[(CryptoElement, CryptoElement)] {
        self.graph.generating_pairs()
    }

    /// Whether every generating pair is fixed (the encoded map is the
    /// identity on its span).
    pub fn is_diagonal(&mut self) -> Result<bool> {
        let pairs = self.graph.pairs.clone();
        for (a, b) in &pairs {
            if !self.graph.x.equal(a, b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn clone_parts(&self) -> ProtoInvolution {
        ProtoInvolution { graph: self.graph.clone_parts() }
    }
}

/// Conjugation graph of `t` over the given generators, flagged as a
/// proto-involution when `t²` is central (checked on samples).
pub enum ConjugationGraph {
    Involutive(ProtoInvolution),
    General(GraphSubgroup),
}

impl ConjugationGraph {
    pub fn into_graph(self) -> GraphSubgroup {
        match self {
            ConjugationGraph::Involutive(p) => p.graph,
            ConjugationGraph::General(g) => g,
        }
    }
}

/// Builds the graph `{(g, t⁻¹gt)}` over the generators of `x`.
pub fn conjugation_graph(
    x: &BlackBox,
    t: &CryptoElement,
    gens: &[CryptoElement],
    seed: u64,
) -> Result<ConjugationGraph> {
    let mut probe = x.fork(derive_seed(seed, "conjugation-probe"));
    let t_inv = probe.invert(t)?;
    let mut pairs = Vec::with_capacity(gens.len());
    for g in gens {
        let tg = probe.compose(&t_inv, g)?;
        let image = probe.compose(&tg, t)?;
        pairs.push((g.clone(), image));
    }
    let graph = graph_subgroup(x, x, &pairs, seed)?;
    // t² central <=> conjugation by t is involutive
    let t_sq = probe.compose(t, t)?;
    let mut central = true;
    for _ in 0..64 {
        let y = probe.sample()?;
        let left = probe.compose(&t_sq, &y)?;
        let right = probe.compose(&y, &t_sq)?;
        if !probe.equal(&left, &right)? {
            central = false;
            break;
        }
    }
    if central {
        Ok(ConjugationGraph::Involutive(ProtoInvolution::validate(
            graph,
            200,
            crate::ENUMERATION_CAP,
        )?))
    } else {
        Ok(ConjugationGraph::General(graph))
    }
}

/// Amalgamates proto-involutions on subgroups of a common box into one
/// proto-involution generated by the union of their generating pairs.
///
/// Consistency of the system is the caller's assertion; it is checked
/// after the fact, and a function-ness failure reports the system as
/// inconsistent.
pub fn amalgamate(
    x: &BlackBox,
    parts: &[ProtoInvolution],
    seed: u64,
    cap: u64,
) -> Result<ProtoInvolution> {
    if parts.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let mut pairs: Vec<(CryptoElement, CryptoElement)> = Vec::new();
    for part in parts {
        pairs.extend(part.generating_pairs().iter().cloned());
    }
    let mut graph = graph_subgroup(x, x, &pairs, seed)?;
    let check = check_function(&mut graph, 2000, cap)?;
    if !check.forward {
        return Err(Error::InconsistentSystem);
    }
    ProtoInvolution::validate(graph, 200, cap).map_err(|e| match e {
        Error::ContractViolation(_) => Error::InconsistentSystem,
        other => other,
    })
}

/// Converts a proto-involution encoding an inner automorphism into an
/// actual element: searches the enumerated box for an involution whose
/// conjugation matches the encoded images on every generating pair.
///
/// Prefers an element of order exactly 2; falls back to the identity when
/// only the identity matches (the diagonal case). Errors with `NotInner`
/// when no element of order dividing 2 induces the map.
pub fn reify(
    x: &BlackBox,
    f: &ProtoInvolution,
    cap: u64,
    seed: u64,
) -> Result<CryptoElement> {
    let mut bb = x.fork(derive_seed(seed, "reify"));
    let elements = enumerate_box(&mut bb, cap)?;
    let id = bb.identity()?;
    let pairs = f.generating_pairs().to_vec();
    let mut identity_matches = false;
    let mut involution: Option<CryptoElement> = None;
    'candidates: for e in &elements {
        let e_sq = bb.compose(e, e)?;
        if !bb.equal(&e_sq, &id)? {
            continue;
        }
        let e_inv = bb.invert(e)?;
        for (g, image) in &pairs {
            let half = bb.compose(&e_inv, g)?;
            let conj = bb.compose(&half, e)?;
            if !bb.equal(&conj, image)? {
                continue 'candidates;
            }
        }
        if bb.equal(e, &id)? {
            identity_matches = true;
        } else if involution.is_none() {
            involution = Some(e.clone());
        }
    }
    if let Some(t) = involution {
        return Ok(t);
    }
    if identity_matches {
        return Ok(id);
    }
    Err(Error::NotInner)
}

/// Enumerates a box by sampling elements and closing over them until the
/// closure is stable for 16 consecutive draws. Monte-Carlo: a proper
/// subgroup has index at least 2, so under a near-uniform sampler it
/// survives all 16 extra draws with probability at most 2^-16.
pub(crate) fn enumerate_box(bb: &mut BlackBox, cap: u64) -> Result<Vec<CryptoElement>> {
    let id = bb.identity()?;
    let mut gens: Vec<CryptoElement> = Vec::new();
    let mut closure = vec![id];
    let mut stable = 0u32;
    while stable < 16 {
        let s = bb.sample()?;
        if crate::blackbox::member(bb, &closure, &s)? {
            stable += 1;
            continue;
        }
        gens.push(s);
        closure = enumerate_closure(bb, &gens, cap)?;
        stable = 0;
    }
    Ok(closure)
}

/// Enumerates a box that is expected to hold exactly `expected` elements.
/// Samples feed the closure until it reaches the target; 64 consecutive
/// draws without growth (chance at most 2^-64 against a proper subgroup)
/// or a closure overshoot settle the answer as a structure mismatch.
pub(crate) fn enumerate_box_expecting(
    bb: &mut BlackBox,
    expected: u64,
) -> Result<Vec<CryptoElement>> {
    let id = bb.identity()?;
    let mut gens: Vec<CryptoElement> = Vec::new();
    let mut closure = vec![id];
    let mut misses = 0u32;
    while (closure.len() as u64) < expected {
        if misses >= 64 {
            return Err(Error::WrongStructure(format!(
                "the box stabilized at {} elements, expected {expected}",
                closure.len()
            )));
        }
        let s = bb.sample()?;
        if crate::blackbox::member(bb, &closure, &s)? {
            misses += 1;
            continue;
        }
        gens.push(s);
        closure = match enumerate_closure(bb, &gens, expected) {
            Ok(c) => c,
            Err(Error::CapExceeded { .. }) => {
                return Err(Error::WrongStructure(format!(
                    "the box holds more than {expected} elements"
                )))
            }
            Err(e) => return Err(e),
        };
        misses = 0;
    }
    Ok(closure)
}

struct SwapAction {
    x_half: usize,
    y: BlackBox,
    y_identity: CryptoElement,
}

impl GroupAction for SwapAction {
    fn act(&mut self, x: &CryptoElement, y: &CryptoElement) -> Result<CryptoElement> {
        if self.y.equal(y, &self.y_identity)? {
            Ok(x.clone())
        } else {
            let (a, b) = split_pair(x, self.x_half);
            Ok(join_pair(&b, &a))
        }
    }
    fn boxed_clone(&self) -> Box<dyn GroupAction> {
        Box::new(SwapAction {
            x_half: self.x_half,
            y: self.y.clone(),
            y_identity: self.y_identity.clone(),
        })
    }
    fn describe(&self) -> String {
        "swap the two components".into()
    }
}

/// Augments a proto-involution into a box encrypting the underlying group
/// extended by the encoded automorphism: the semidirect product of the
/// graph subgroup with a 2-element group acting by the component swap
/// `(x, x') -> (x', x)`.
pub fn augment(f: &ProtoInvolution, seed: u64) -> Result<BlackBox> {
    let graph_box = f.graph.subgroup.fork(derive_seed(seed, "augment-graph"));
    let z2 = make_cyclic_group(2)?;
    let mut flip = transparent_box(&z2, derive_seed(seed, "augment-flip"));
    let y_identity = flip.identity()?;
    let action = Box::new(SwapAction {
        x_half: f.graph.x_bytes,
        y: flip.clone(),
        y_identity,
    });
    semidirect_product(graph_box, flip, action, 64)
}
