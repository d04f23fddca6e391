//! Purity and strong purity of unit subgroups of a local ring.

use serde::{Deserialize, Serialize};

use crate::perm::UnitSubgroup;
use crate::ring::{enumerate_ideals, quotient_ring, FiniteRing, Ideal, RingStructure, DEFAULT_IDEAL_LIMIT};
use crate::{Error, Result};

/// One level of the `R → R/I₀` chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PurityStep {
    pub ring_size: usize,
    pub pure: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurityReport {
    pub is_pure: bool,
    /// A nonzero ideal `I` with `1 + I ⊆ K` when `K` is not pure.
    pub witness_ideal: Option<Ideal>,
    pub is_strongly_pure: bool,
    pub chain: Vec<PurityStep>,
}

fn contains_one_plus(ring: &FiniteRing, k: &UnitSubgroup, ideal: &Ideal) -> bool {
    ideal.elements().iter().all(|&i| k.contains(ring.add(ring.one(), i)))
}

/// A nonzero ideal `I` with `1 + I ⊆ K`, if any. Such an ideal contains a
/// minimal one, and minimal ideals of a local ring are the `Rx` with `x`
/// a nonzero socle element, so only those are tried.
pub fn impurity_witness(ring: &FiniteRing, structure: &RingStructure, k: &UnitSubgroup) -> Result<Option<Ideal>> {
    if !structure.is_local {
        return Err(Error::precondition("purity is defined for local rings"));
    }
    Ok(structure
        .socle
        .iter()
        .filter(|&&x| x != ring.zero())
        .map(|&x| Ideal::principal(ring, x))
        .find(|ideal| contains_one_plus(ring, k, ideal)))
}

/// Purity by running over every ideal of the ring.
pub fn is_pure_exhaustive(ring: &FiniteRing, k: &UnitSubgroup) -> Result<bool> {
    Ok(!enumerate_ideals(ring, DEFAULT_IDEAL_LIMIT)?
        .iter()
        .any(|ideal| !ideal.is_zero() && contains_one_plus(ring, k, ideal)))
}

/// Purity of `K`, and strong purity by descending along `R → R/I₀` until a
/// field or an impure image is reached.
pub fn purity(ring: &FiniteRing, structure: &RingStructure, k: &UnitSubgroup) -> Result<PurityReport> {
    let witness_ideal = impurity_witness(ring, structure, k)?;
    if let Some(w) = &witness_ideal {
        if w.is_zero() || !contains_one_plus(ring, k, w) {
            return Err(Error::internal("invalid impurity witness"));
        }
    }
    let is_pure = witness_ideal.is_none();
    let mut chain = vec![PurityStep {
        ring_size: ring.size(),
        pure: is_pure,
    }];
    let mut is_strongly_pure = is_pure;
    if is_pure && !structure.is_field() {
        let mut current = (ring.clone(), structure.clone(), k.clone());
        loop {
            let (r, s, sub) = &current;
            if s.is_field() {
                break;
            }
            let socle = Ideal::new(r, s.socle.iter().copied())?;
            let q = quotient_ring(r, &socle)?;
            let target = q.target.clone();
            let ts = RingStructure::new(&target)?;
            let image = UnitSubgroup::new(&target, q.project_set(sub.elements()))?;
            let pure = impurity_witness(&target, &ts, &image)?.is_none();
            chain.push(PurityStep {
                ring_size: target.size(),
                pure,
            });
            if !pure {
                is_strongly_pure = false;
                break;
            }
            current = (target, ts, image);
        }
    }
    Ok(PurityReport {
        is_pure,
        witness_ideal,
        is_strongly_pure,
        chain,
    })
}
