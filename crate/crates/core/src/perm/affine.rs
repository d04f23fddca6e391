//! Affine and semilinear maps `x ↦ a·σ(x) + b` over a finite ring.

use super::{Perm, PermGroup, DEFAULT_GROUP_CAP};
use crate::ring::{Elem, FiniteRing, RingStructure};
use crate::{Error, Result};

/// The map `x ↦ a · σ(x) + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSemilinearMap {
    pub a: Elem,
    pub b: Elem,
    pub sigma: Perm,
}

impl AffineSemilinearMap {
    /// `γ_{a,b}`: `x ↦ a x + b`.
    pub fn affine(ring: &FiniteRing, a: Elem, b: Elem) -> Self {
        AffineSemilinearMap {
            a,
            b,
            sigma: Perm::identity(ring.size()),
        }
    }

    pub fn apply(&self, ring: &FiniteRing, x: Elem) -> Elem {
        ring.add(ring.mul(self.a, self.sigma.apply(x)), self.b)
    }

    pub fn to_perm(&self, ring: &FiniteRing) -> Result<Perm> {
        Perm::from_images(ring.elements().map(|x| self.apply(ring, x)).collect())
    }

    pub fn is_affine(&self) -> bool {
        self.sigma.is_identity()
    }
}

/// True iff `f` (an image array) is a ring automorphism.
pub fn is_ring_automorphism(ring: &FiniteRing, f: &[Elem]) -> bool {
    if f.len() != ring.size() || f[ring.one()] != ring.one() {
        return false;
    }
    let mut seen = vec![false; ring.size()];
    for &y in f {
        if y >= ring.size() || std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    ring.elements().all(|a| {
        ring.elements().all(|b| {
            f[ring.add(a, b)] == ring.add(f[a], f[b]) && f[ring.mul(a, b)] == ring.mul(f[a], f[b])
        })
    })
}

/// Write `f` as `x ↦ a σ(x) + b` if possible. The only candidates are
/// `b = f(0)`, `a = f(1) − b`, `σ(x) = a⁻¹ (f(x) − b)`.
pub fn semilinear_decomposition(
    ring: &FiniteRing,
    structure: &RingStructure,
    f: &Perm,
) -> Option<AffineSemilinearMap> {
    if f.degree() != ring.size() {
        return None;
    }
    let b = f.apply(ring.zero());
    let a = ring.sub(f.apply(ring.one()), b);
    let a_inv = structure.inverse(a)?;
    let sigma: Vec<Elem> = ring
        .elements()
        .map(|x| ring.mul(a_inv, ring.sub(f.apply(x), b)))
        .collect();
    let is_identity = sigma.iter().enumerate().all(|(i, &x)| i == x);
    if !is_identity && !is_ring_automorphism(ring, &sigma) {
        return None;
    }
    Some(AffineSemilinearMap {
        a,
        b,
        sigma: Perm::from_images_unchecked(sigma),
    })
}

fn check_size(count: u128, cap: usize, what: &'static str) -> Result<()> {
    if count > cap as u128 {
        return Err(Error::cap(what, count, cap));
    }
    Ok(())
}

/// `Γ(A, B) = {x ↦ a x + b : a ∈ A, b ∈ B}`; requires `A B ⊆ B`.
pub fn gamma_group(ring: &FiniteRing, multipliers: &[Elem], translations: &[Elem]) -> Result<PermGroup> {
    let mut b_sorted = translations.to_vec();
    b_sorted.sort_unstable();
    b_sorted.dedup();
    let in_b = |x: Elem| b_sorted.binary_search(&x).is_ok();
    if !in_b(ring.zero()) || !b_sorted.iter().all(|&x| b_sorted.iter().all(|&y| in_b(ring.add(x, y)))) {
        return Err(Error::invalid("translation set is not an additive subgroup"));
    }
    if !multipliers.iter().all(|&a| b_sorted.iter().all(|&x| in_b(ring.mul(a, x)))) {
        return Err(Error::precondition("translation subgroup is not invariant under the multipliers"));
    }
    check_size(
        multipliers.len() as u128 * b_sorted.len() as u128,
        DEFAULT_GROUP_CAP,
        "Γ(A, B) order",
    )?;
    let mut elements = Vec::with_capacity(multipliers.len() * b_sorted.len());
    for &a in multipliers {
        for &b in &b_sorted {
            elements.push(AffineSemilinearMap::affine(ring, a, b).to_perm(ring)?);
        }
    }
    PermGroup::from_closed_elements(ring.size(), elements)
}

/// `AGL₁(R)`.
pub fn affine_group(ring: &FiniteRing, structure: &RingStructure) -> Result<PermGroup> {
    let all: Vec<Elem> = ring.elements().collect();
    gamma_group(ring, &structure.units, &all)
}

/// `AΓL₁(R)` given the ring automorphism group.
pub fn affine_semilinear_group(
    ring: &FiniteRing,
    structure: &RingStructure,
    automorphisms: &PermGroup,
) -> Result<PermGroup> {
    check_size(
        ring.size() as u128 * structure.units.len() as u128 * automorphisms.order() as u128,
        DEFAULT_GROUP_CAP,
        "AΓL₁ order",
    )?;
    let mut elements = Vec::new();
    for sigma in automorphisms.elements() {
        for &a in &structure.units {
            for b in ring.elements() {
                let m = AffineSemilinearMap {
                    a,
                    b,
                    sigma: sigma.clone(),
                };
                elements.push(m.to_perm(ring)?);
            }
        }
    }
    PermGroup::from_closed_elements(ring.size(), elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ring_automorphisms;

    fn setup(r: FiniteRing) -> (FiniteRing, RingStructure) {
        let s = RingStructure::new(&r).unwrap();
        (r, s)
    }

    #[test]
    fn gamma_orders() {
        let (r, _) = setup(FiniteRing::zmod(9).unwrap());
        let all: Vec<Elem> = r.elements().collect();
        assert_eq!(gamma_group(&r, &[1], &all).unwrap().order(), 9);
        let g = gamma_group(&r, &[1, 8], &all).unwrap();
        assert_eq!(g.order(), 18);
        assert!(PermGroup::from_elements(9, g.elements().to_vec()).is_ok());
        // {0,3,6} is invariant under units, {0,1} is not a subgroup
        assert_eq!(gamma_group(&r, &[1, 2, 4, 5, 7, 8], &[0, 3, 6]).unwrap().order(), 18);
        assert!(gamma_group(&r, &[1], &[0, 1]).is_err());
        let (f5, s5) = setup(FiniteRing::field(5).unwrap());
        assert_eq!(affine_group(&f5, &s5).unwrap().order(), 20);
    }

    #[test]
    fn semilinear_orders() {
        for (ring, expected) in [
            (FiniteRing::zmod(9).unwrap(), 54),
            (FiniteRing::galois_ring(3, 2, 2).unwrap(), 81 * 72 * 2),
            (FiniteRing::field(4).unwrap(), 24),
        ] {
            let (r, s) = setup(ring);
            let aut = ring_automorphisms(&r).unwrap();
            let g = affine_semilinear_group(&r, &s, &aut).unwrap();
            assert_eq!(g.order(), expected);
            assert!(g.contains_group(&affine_group(&r, &s).unwrap()).unwrap());
        }
    }

    #[test]
    fn decomposition_agrees_with_membership() {
        let (r, s) = setup(FiniteRing::field(9).unwrap());
        let aut = ring_automorphisms(&r).unwrap();
        let agaml = affine_semilinear_group(&r, &s, &aut).unwrap();
        for g in agaml.elements() {
            let m = semilinear_decomposition(&r, &s, g).unwrap();
            assert_eq!(&m.to_perm(&r).unwrap(), g);
        }
        let mut swap: Vec<Elem> = r.elements().collect();
        swap.swap(3, 4);
        assert!(semilinear_decomposition(&r, &s, &Perm::from_images(swap).unwrap()).is_none());
    }

    #[test]
    fn involution_swaps_zero_and_one() {
        let (r, _) = setup(FiniteRing::zmod(9).unwrap());
        let s = AffineSemilinearMap::affine(&r, r.neg(r.one()), r.one()).to_perm(&r).unwrap();
        assert!(s.then(&s).is_identity());
        assert_eq!((s.apply(0), s.apply(1)), (1, 0));
    }
}
