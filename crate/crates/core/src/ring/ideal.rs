//! Ideals, their enumeration and quotient rings.

use std::collections::{BTreeSet, HashSet, VecDeque};

use super::{Elem, FiniteRing, RingSpec};
use crate::{Error, Result};

/// Default cap on the number of ideals produced by [`enumerate_ideals`].
pub const DEFAULT_IDEAL_LIMIT: usize = 100_000;

/// An ideal, as a sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    elements: Vec<Elem>,
}

impl Ideal {
    /// Validate that `elements` is an ideal of `ring`.
    pub fn new(ring: &FiniteRing, elements: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let mut elements: Vec<Elem> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        let ideal = Ideal { elements };
        if !ideal.is_ideal_of(ring) {
            return Err(Error::invalid("set is not an ideal"));
        }
        Ok(ideal)
    }

    pub fn zero(ring: &FiniteRing) -> Self {
        Ideal {
            elements: vec![ring.zero()],
        }
    }

    pub fn whole(ring: &FiniteRing) -> Self {
        Ideal {
            elements: ring.elements().collect(),
        }
    }

    /// The principal ideal `R x`.
    pub fn principal(ring: &FiniteRing, x: Elem) -> Self {
        let mut elements: Vec<Elem> = ring.elements().map(|r| ring.mul(r, x)).collect();
        elements.sort_unstable();
        elements.dedup();
        Ideal { elements }
    }

    /// Smallest ideal containing `generators`.
    pub fn generated(ring: &FiniteRing, generators: &[Elem]) -> Self {
        let mut acc = Ideal::zero(ring);
        for &g in generators {
            if !acc.contains(g) {
                acc = acc.sum(ring, &Ideal::principal(ring, g));
            }
        }
        acc
    }

    /// `I + J`.
    pub fn sum(&self, ring: &FiniteRing, other: &Ideal) -> Ideal {
        let mut seen = vec![false; ring.size()];
        for &a in &self.elements {
            for &b in &other.elements {
                seen[ring.add(a, b)] = true;
            }
        }
        Ideal {
            elements: (0..ring.size()).filter(|&x| seen[x]).collect(),
        }
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_zero(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    fn is_ideal_of(&self, ring: &FiniteRing) -> bool {
        if self.elements.iter().any(|&x| x >= ring.size()) || !self.contains(ring.zero()) {
            return false;
        }
        let closed_add = self
            .elements
            .iter()
            .all(|&a| self.elements.iter().all(|&b| self.contains(ring.add(a, b))));
        let absorbs = self
            .elements
            .iter()
            .all(|&a| ring.elements().all(|r| self.contains(ring.mul(r, a))));
        closed_add && absorbs
    }
}

/// All ideals of `ring`, sorted by (size, elements). Errors once more than
/// `limit` distinct ideals have been found.
pub fn enumerate_ideals(ring: &FiniteRing, limit: usize) -> Result<Vec<Ideal>> {
    let principal: Vec<Ideal> = ring.elements().map(|x| Ideal::principal(ring, x)).collect();
    let mut seen: HashSet<Ideal> = HashSet::new();
    let mut queue = VecDeque::new();
    let zero = Ideal::zero(ring);
    seen.insert(zero.clone());
    queue.push_back(zero);
    while let Some(ideal) = queue.pop_front() {
        let mut tried = BTreeSet::new();
        for x in ring.elements() {
            if ideal.contains(x) || !tried.insert(principal[x].elements.clone()) {
                continue;
            }
            let next = ideal.sum(ring, &principal[x]);
            if seen.insert(next.clone()) {
                if seen.len() > limit {
                    return Err(Error::cap("ideal count", seen.len(), limit));
                }
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<Ideal> = seen.into_iter().collect();
    out.sort_by(|a, b| (a.len(), &a.elements).cmp(&(b.len(), &b.elements)));
    Ok(out)
}

/// Minimal nonzero ideals. Every minimal ideal is principal, so only the
/// ideals `R x` are inspected.
pub fn minimal_ideals(ring: &FiniteRing) -> Vec<Ideal> {
    let mut principal: Vec<Ideal> = ring
        .elements()
        .filter(|&x| x != ring.zero())
        .map(|x| Ideal::principal(ring, x))
        .collect();
    principal.sort_by(|a, b| (a.len(), &a.elements).cmp(&(b.len(), &b.elements)));
    principal.dedup();
    principal
        .iter()
        .filter(|i| {
            !principal
                .iter()
                .any(|j| j.len() < i.len() && j.is_subset_of(i))
        })
        .cloned()
        .collect()
}

/// The natural map `R → R/I`.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub ideal: Ideal,
    pub target: FiniteRing,
    /// `projection[x]` is the coset of `x`; cosets are numbered by their
    /// smallest representative.
    pub projection: Vec<Elem>,
    /// Smallest representative of each coset.
    pub representatives: Vec<Elem>,
}

impl QuotientMap {
    pub fn project(&self, x: Elem) -> Elem {
        self.projection[x]
    }

    /// Image of a set, sorted.
    pub fn project_set(&self, xs: &[Elem]) -> Vec<Elem> {
        let mut v: Vec<Elem> = xs.iter().map(|&x| self.projection[x]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

pub fn quotient_ring(ring: &FiniteRing, ideal: &Ideal) -> Result<QuotientMap> {
    if ideal.len() == ring.size() {
        return Err(Error::invalid("quotient by the whole ring"));
    }
    let n = ring.size();
    let mut projection = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    for x in 0..n {
        if projection[x] != usize::MAX {
            continue;
        }
        let c = representatives.len();
        representatives.push(x);
        for &i in ideal.elements() {
            projection[ring.add(x, i)] = c;
        }
    }
    let m = representatives.len();
    let mut add = vec![0; m * m];
    let mut mul = vec![0; m * m];
    for (a, &ra) in representatives.iter().enumerate() {
        for (b, &rb) in representatives.iter().enumerate() {
            add[a * m + b] = projection[ring.add(ra, rb)];
            mul[a * m + b] = projection[ring.mul(ra, rb)];
        }
    }
    let labels = if ideal.is_zero() {
        ring.labels().to_vec()
    } else {
        representatives
            .iter()
            .map(|&r| format!("{}+I", ring.label(r)))
            .collect()
    };
    let spec = if ideal.is_zero() {
        ring.spec().clone()
    } else {
        RingSpec::Derived(format!("{}/I{}", ring.spec(), ideal.len()))
    };
    let target = FiniteRing::from_tables(
        spec,
        labels,
        add,
        mul,
        projection[ring.zero()],
        projection[ring.one()],
    )?;
    Ok(QuotientMap {
        ideal: ideal.clone(),
        target,
        projection,
        representatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingStructure;

    fn sets(ideals: &[Ideal]) -> Vec<Vec<Elem>> {
        ideals.iter().map(|i| i.elements().to_vec()).collect()
    }

    #[test]
    fn z9_ideals() {
        let r = FiniteRing::galois_ring(3, 2, 1).unwrap();
        let all = enumerate_ideals(&r, DEFAULT_IDEAL_LIMIT).unwrap();
        assert_eq!(sets(&all), vec![vec![0], vec![0, 3, 6], (0..9).collect()]);
        assert_eq!(sets(&minimal_ideals(&r)), vec![vec![0, 3, 6]]);
    }

    #[test]
    fn field_ideals() {
        let r = FiniteRing::field(5).unwrap();
        assert_eq!(enumerate_ideals(&r, DEFAULT_IDEAL_LIMIT).unwrap().len(), 2);
        assert_eq!(sets(&minimal_ideals(&r)), vec![(0..5).collect::<Vec<_>>()]);
    }

    #[test]
    fn truncated_chain() {
        let r = FiniteRing::truncated_poly(2, 4).unwrap();
        let all = enumerate_ideals(&r, DEFAULT_IDEAL_LIMIT).unwrap();
        assert_eq!(all.iter().map(Ideal::len).collect::<Vec<_>>(), vec![1, 2, 4, 8, 16]);
        let s = RingStructure::new(&r).unwrap();
        assert_eq!(sets(&minimal_ideals(&r)), vec![s.socle.clone()]);
    }

    #[test]
    fn limit_is_enforced() {
        let r = FiniteRing::truncated_poly(2, 4).unwrap();
        assert!(matches!(enumerate_ideals(&r, 2), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn ideal_validation() {
        let r = FiniteRing::zmod(9).unwrap();
        assert!(Ideal::new(&r, [0, 3, 6]).is_ok());
        assert!(Ideal::new(&r, [0, 3]).is_err());
        assert!(Ideal::new(&r, [0, 1]).is_err());
        assert_eq!(Ideal::generated(&r, &[6]).elements(), &[0, 3, 6]);
    }

    #[test]
    fn quotients() {
        let r = FiniteRing::galois_ring(3, 2, 1).unwrap();
        let q = quotient_ring(&r, &Ideal::principal(&r, 3)).unwrap();
        assert_eq!(q.target.size(), 3);
        assert!(q.target.same_tables(&FiniteRing::field(3).unwrap()));
        assert_eq!((q.project(1), q.project(4), q.project(7)), (1, 1, 1));

        let r27 = FiniteRing::galois_ring(3, 3, 1).unwrap();
        let q = quotient_ring(&r27, &Ideal::principal(&r27, 9)).unwrap();
        assert!(q.target.same_tables(&FiniteRing::zmod(9).unwrap()));

        let id = quotient_ring(&r, &Ideal::zero(&r)).unwrap();
        assert!(id.target.same_tables(&r));
        assert!(quotient_ring(&r, &Ideal::whole(&r)).is_err());
    }

    #[test]
    fn residue_field_and_unit_surjectivity() {
        let r = FiniteRing::galois_ring(3, 2, 2).unwrap();
        let s = RingStructure::new(&r).unwrap();
        let rad = Ideal::new(&r, s.radical.clone()).unwrap();
        let q = quotient_ring(&r, &rad).unwrap();
        assert!(q.target.is_field());
        assert_eq!(q.target.size(), 9);
        assert_eq!(q.project_set(&s.units), q.target.units());
    }
}
