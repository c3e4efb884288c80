//! Symmetric, alternating, and dihedral groups as permutation tables.

use std::collections::HashMap;

use super::{ExplicitOps, ExplicitStructure};
use crate::blackbox::{Op, Signature};
use crate::error::{Error, Result};
use crate::ENUMERATION_CAP;

type Perm = Vec<u8>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // (a·b)(i) = a(b(i))
    b.iter().map(|&i| a[i as usize]).collect()
}

fn invert(a: &Perm) -> Perm {
    let mut out = vec![0u8; a.len()];
    for (i, &img) in a.iter().enumerate() {
        out[img as usize] = i as u8;
    }
    out
}

fn identity(n: usize) -> Perm {
    (0..n as u8).collect()
}

fn parity(a: &Perm) -> bool {
    // true = even
    let mut seen = vec![false; a.len()];
    let mut transpositions = 0usize;
    for start in 0..a.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = a[i] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions.is_multiple_of(2)
}

fn cycle_string(a: &Perm) -> String {
    let mut seen = vec![false; a.len()];
    let mut out = String::new();
    for start in 0..a.len() {
        if seen[start] || a[start] as usize == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push(i + 1);
            i = a[i] as usize;
        }
        out.push('(');
        out.push_str(
            &cycle.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
        );
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

fn all_permutations(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut current = identity(n);
    loop {
        out.push(current.clone());
        // next permutation in lexicographic order
        let mut i = n.saturating_sub(1);
        while i > 0 && current[i - 1] >= current[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while current[j] <= current[i - 1] {
            j -= 1;
        }
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// A permutation group held as a sorted element table.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    points: usize,
    label: String,
    elements: Vec<Perm>,
    index: HashMap<Perm, u64>,
    generators: Vec<u64>,
}

impl PermutationGroup {
    fn from_elements(points: usize, label: String, mut elements: Vec<Perm>) -> Self {
        elements.sort();
        let index: HashMap<Perm, u64> =
            elements.iter().enumerate().map(|(i, p)| (p.clone(), i as u64)).collect();
        let mut group = PermutationGroup {
            points,
            label,
            elements,
            index,
            generators: Vec::new(),
        };
        group.generators = super::two_generators(&group);
        group
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("symmetric group needs n >= 1".into()));
        }
        let order: u64 = (1..=n as u64).product();
        if order > ENUMERATION_CAP {
            return Err(Error::CapExceeded { cap: ENUMERATION_CAP, partial: Vec::new() });
        }
        Ok(Self::from_elements(n, format!("S{n}"), all_permutations(n)))
    }

    pub fn alternating(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("alternating group needs n >= 1".into()));
        }
        let order: u64 = (1..=n as u64).product::<u64>() / if n >= 2 { 2 } else { 1 };
        if order > ENUMERATION_CAP {
            return Err(Error::CapExceeded { cap: ENUMERATION_CAP, partial: Vec::new() });
        }
        let elements = all_permutations(n).into_iter().filter(parity).collect();
        Ok(Self::from_elements(n, format!("A{n}"), elements))
    }

    /// Dihedral group of the regular `n`-gon, order `2n`, as permutations
    /// of the vertices.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument("dihedral group needs n >= 3".into()));
        }
        if n > 255 {
            return Err(Error::InvalidArgument("dihedral group capped at 255 vertices".into()));
        }
        let rotation: Perm = (0..n).map(|i| ((i + 1) % n) as u8).collect();
        let reflection: Perm = (0..n).map(|i| ((n - i) % n) as u8).collect();
        let mut seen: std::collections::HashSet<Perm> = std::collections::HashSet::new();
        seen.insert(identity(n));
        let mut frontier = vec![identity(n)];
        while let Some(e) = frontier.pop() {
            for g in [&rotation, &reflection] {
                let next = compose(&e, g);
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        Ok(Self::from_elements(n, format!("D{n}"), seen.into_iter().collect()))
    }

    pub fn perm_index(&self, perm: &[u8]) -> Option<u64> {
        self.index.get(perm).copied()
    }

    pub fn perm(&self, index: u64) -> &Perm {
        &self.elements[index as usize]
    }
}

impl ExplicitOps for PermutationGroup {
    fn signature(&self) -> Signature {
        Signature::GROUP
    }
    fn order(&self) -> u64 {
        self.elements.len() as u64
    }
    fn apply(&self, op: Op, args: &[u64]) -> Result<u64> {
        let get = |i: u64| &self.elements[i as usize];
        let result = match op {
            Op::Product => compose(get(args[0]), get(args[1])),
            Op::Inverse => invert(get(args[0])),
            Op::Identity => identity(self.points),
            _ => return Err(Error::MissingOperation(op)),
        };
        self.index
            .get(&result)
            .copied()
            .ok_or_else(|| Error::ContractViolation("product left the group".into()))
    }
    fn describe_element(&self, index: u64) -> String {
        cycle_string(&self.elements[index as usize])
    }
    fn name(&self) -> String {
        self.label.clone()
    }
    fn generators(&self) -> Vec<u64> {
        self.generators.clone()
    }
}

pub fn make_symmetric_group(n: usize) -> Result<ExplicitStructure> {
    Ok(ExplicitStructure::new(PermutationGroup::symmetric(n)?))
}

pub fn make_alternating_group(n: usize) -> Result<ExplicitStructure> {
    Ok(ExplicitStructure::new(PermutationGroup::alternating(n)?))
}

pub fn make_dihedral_group(n: usize) -> Result<ExplicitStructure> {
    Ok(ExplicitStructure::new(PermutationGroup::dihedral(n)?))
}
