//! Permutations and explicit permutation groups.

mod affine;
mod subgroup;

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use affine::{
    affine_group, affine_semilinear_group, gamma_group, is_ring_automorphism, semilinear_decomposition,
    AffineSemilinearMap,
};
pub use subgroup::{
    enumerate_abelian_subgroups, enumerate_unit_subgroups, SubgroupSpec, UnitSubgroup,
    DEFAULT_SUBGROUP_CAP,
};

/// Largest group stored as an explicit element list.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// A permutation of `0..n`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm {
    images: Vec<u32>,
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl fmt::Display for Perm {
    /// Cycle notation, fixed points omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::invalid("image array is not a permutation"));
            }
            seen[x] = true;
        }
        Ok(Self::from_images_unchecked(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        Perm {
            images: images.into_iter().map(|x| x as u32).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn raw_images(&self) -> &[u32] {
        &self.images
    }

    /// First `self`, then `other`: `x ↦ other(self(x))`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Perm { images }
    }

    /// `self^{-1} · g · self` with the `then` convention: `x ↦ self(g(self⁻¹(x)))`.
    pub fn conjugate(&self, g: &Perm) -> Perm {
        self.inverse().then(g).then(self)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            out.push(c);
        }
        out
    }

    /// Restriction to an invariant subset, relabelled by position in `points`.
    pub fn restrict(&self, points: &[usize]) -> Option<Perm> {
        let mut index = vec![usize::MAX; self.degree()];
        for (i, &p) in points.iter().enumerate() {
            index[p] = i;
        }
        let images: Option<Vec<usize>> = points
            .iter()
            .map(|&p| Some(index[self.apply(p)]).filter(|&i| i != usize::MAX))
            .collect();
        images.map(Perm::from_images_unchecked)
    }
}

/// A permutation group stored as its sorted list of elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Perm>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            elements: vec![Perm::identity(degree)],
        }
    }

    /// The group generated by `gens`, by breadth-first closure.
    pub fn generate(degree: usize, gens: &[Perm], cap: usize) -> Result<Self> {
        if gens.iter().any(|g| g.degree() != degree) {
            return Err(Error::invalid("generator degree mismatch"));
        }
        let id = Perm::identity(degree);
        let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = x.then(g);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::cap("permutation group order", format!("> {cap}"), cap));
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_iter().collect();
        elements.sort_unstable();
        Ok(PermGroup { degree, elements })
    }

    /// Wrap a list that is known to be closed; the identity must be present.
    pub fn from_closed_elements(degree: usize, mut elements: Vec<Perm>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|g| g.degree() != degree) {
            return Err(Error::invalid("element degree mismatch"));
        }
        if elements.binary_search(&Perm::identity(degree)).is_err() {
            return Err(Error::internal("group element list lacks the identity"));
        }
        Ok(PermGroup { degree, elements })
    }

    /// Like [`from_closed_elements`](Self::from_closed_elements) but checks
    /// closure under composition (quadratic in the order).
    pub fn from_elements(degree: usize, elements: Vec<Perm>) -> Result<Self> {
        let g = Self::from_closed_elements(degree, elements)?;
        for a in &g.elements {
            for b in &g.elements {
                if !g.contains(&a.then(b)) {
                    return Err(Error::invalid("element list is not closed under composition"));
                }
            }
        }
        Ok(g)
    }

    /// `Sym(n)` when `n!` fits under `cap`.
    pub fn symmetric(n: usize, cap: usize) -> Result<Self> {
        let order = (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k).filter(|&v| v <= cap));
        if order.is_none() {
            return Err(Error::cap("symmetric group order", format!("{n}!"), cap));
        }
        if n < 2 {
            return Ok(Self::trivial(n));
        }
        let mut transposition: Vec<usize> = (0..n).collect();
        transposition.swap(0, 1);
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        Self::generate(
            n,
            &[
                Perm::from_images_unchecked(transposition),
                Perm::from_images_unchecked(cycle),
            ],
            cap,
        )
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// `small ⊆ self`, elementwise.
    pub fn contains_group(&self, small: &PermGroup) -> Result<bool> {
        if self.degree != small.degree {
            return Err(Error::invalid("degree mismatch"));
        }
        Ok(small.order() <= self.order() && small.elements.iter().all(|p| self.contains(p)))
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.elements.iter().map(|g| g.apply(point)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Orbits as class ids per point, numbered by smallest member.
    pub fn orbits(&self) -> Vec<usize> {
        let mut class = vec![usize::MAX; self.degree];
        let mut next = 0;
        for x in 0..self.degree {
            if class[x] == usize::MAX {
                for y in self.orbit(x) {
                    class[y] = next;
                }
                next += 1;
            }
        }
        class
    }

    /// Orbits on ordered pairs, as a row-major `n × n` matrix of class ids
    /// numbered by first occurrence.
    pub fn two_orbits(&self) -> Vec<u32> {
        let n = self.degree;
        let mut class = vec![u32::MAX; n * n];
        let mut next = 0u32;
        for x in 0..n {
            for y in 0..n {
                if class[x * n + y] != u32::MAX {
                    continue;
                }
                for g in &self.elements {
                    class[g.apply(x) * n + g.apply(y)] = next;
                }
                next += 1;
            }
        }
        class
    }

    /// Pointwise stabilizer of `points`.
    pub fn stabilizer(&self, points: &[usize]) -> PermGroup {
        PermGroup {
            degree: self.degree,
            elements: self
                .elements
                .iter()
                .filter(|g| points.iter().all(|&p| g.apply(p) == p))
                .cloned()
                .collect(),
        }
    }

    /// `g⁻¹ H g = H` for every `g` in `self`.
    pub fn normalizes(&self, h: &PermGroup) -> bool {
        self.elements
            .iter()
            .all(|g| h.elements.iter().all(|x| h.contains(&g.conjugate(x))))
    }
}
