//! Units, radical, socle and the Teichmüller / principal-unit split.

use super::{Elem, FiniteRing};
use crate::Result;

/// Derived structure of a finite commutative ring. All sets are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingStructure {
    pub units: Vec<Elem>,
    /// Nilpotent elements.
    pub radical: Vec<Elem>,
    /// `{x ∈ rad : x · rad = 0}`.
    pub socle: Vec<Elem>,
    /// Units of order dividing `q − 1` (componentwise for non-local rings).
    pub teichmuller: Vec<Elem>,
    /// `1 + rad`.
    pub principal_units: Vec<Elem>,
    /// `1 + socle`.
    pub socle_units: Vec<Elem>,
    pub is_local: bool,
    /// `|R / rad|` for local rings.
    pub residue_field_size: Option<u64>,
    pub characteristic: u64,
    inverse: Vec<Option<Elem>>,
}

fn sorted(mut v: Vec<Elem>) -> Vec<Elem> {
    v.sort_unstable();
    v.dedup();
    v
}

impl RingStructure {
    pub fn new(ring: &FiniteRing) -> Result<Self> {
        let n = ring.size();
        let mut inverse = vec![None; n];
        for a in 0..n {
            if inverse[a].is_some() {
                continue;
            }
            if let Some(b) = (0..n).find(|&b| ring.mul(a, b) == ring.one()) {
                inverse[a] = Some(b);
                inverse[b] = Some(a);
            }
        }
        let units: Vec<Elem> = (0..n).filter(|&a| inverse[a].is_some()).collect();
        let radical: Vec<Elem> = (0..n).filter(|&a| ring.nilpotency_index(a).is_some()).collect();
        let socle: Vec<Elem> = radical
            .iter()
            .copied()
            .filter(|&x| radical.iter().all(|&y| ring.mul(x, y) == ring.zero()))
            .collect();
        let principal_units = sorted(radical.iter().map(|&x| ring.add(ring.one(), x)).collect());
        let socle_units = sorted(socle.iter().map(|&x| ring.add(ring.one(), x)).collect());
        let is_local = units.len() + radical.len() == n;
        let residue_field_size = is_local.then(|| (n / radical.len()) as u64);

        let teichmuller = if let Some(q) = residue_field_size {
            units
                .iter()
                .copied()
                .filter(|&x| ring.pow(x, q - 1) == ring.one())
                .collect()
        } else {
            let factors = ring.crt_decompose()?;
            let mut acc = vec![ring.one()];
            for f in &factors {
                let local = RingStructure::new(&f.ring)?;
                let part: Vec<Elem> = local
                    .teichmuller
                    .iter()
                    .map(|&t| f.unit_embedding(ring, t))
                    .collect();
                acc = acc
                    .iter()
                    .flat_map(|&a| part.iter().map(move |&b| (a, b)))
                    .map(|(a, b)| ring.mul(a, b))
                    .collect();
            }
            sorted(acc)
        };

        Ok(RingStructure {
            units,
            radical,
            socle,
            teichmuller,
            principal_units,
            socle_units,
            is_local,
            residue_field_size,
            characteristic: ring.characteristic() as u64,
            inverse,
        })
    }

    pub fn inverse(&self, x: Elem) -> Option<Elem> {
        self.inverse[x]
    }

    pub fn is_unit(&self, x: Elem) -> bool {
        self.inverse[x].is_some()
    }

    pub fn is_field(&self) -> bool {
        self.is_local && self.radical.len() == 1
    }

    /// Characteristic of the residue field of a local ring.
    pub fn residue_characteristic(&self) -> Option<u64> {
        self.residue_field_size
            .and_then(|q| super::prime_power(q).map(|(p, _)| p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn structure(r: &FiniteRing) -> RingStructure {
        RingStructure::new(r).unwrap()
    }

    #[test]
    fn z9() {
        let r = FiniteRing::galois_ring(3, 2, 1).unwrap();
        let s = structure(&r);
        assert_eq!(s.units, vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(s.radical, vec![0, 3, 6]);
        assert_eq!(s.socle, vec![0, 3, 6]);
        assert_eq!(s.teichmuller, vec![1, 8]);
        assert_eq!(s.principal_units, vec![1, 4, 7]);
        assert_eq!(s.residue_field_size, Some(3));
        assert_eq!(s.characteristic, 9);
    }

    #[test]
    fn galois_81() {
        let r = FiniteRing::galois_ring(3, 2, 2).unwrap();
        let s = structure(&r);
        assert_eq!(s.units.len(), 72);
        assert_eq!(s.teichmuller.len(), 8);
        assert_eq!(s.principal_units.len(), 9);
        assert_eq!(s.residue_field_size, Some(9));
    }

    #[test]
    fn field_and_truncated() {
        let f5 = FiniteRing::field(5).unwrap();
        let s = structure(&f5);
        assert_eq!(s.teichmuller, vec![1, 2, 3, 4]);
        assert_eq!(s.principal_units, vec![1]);
        assert_eq!(s.radical, vec![0]);
        assert!(s.is_field());

        let r = FiniteRing::truncated_poly(2, 4).unwrap();
        let s = structure(&r);
        assert_eq!(s.teichmuller, vec![r.one()]);
        assert_eq!(s.principal_units.len(), 8);
        assert_eq!(s.radical.len(), 8);
        let x3 = r.parse_element("[0,0,0,1]").unwrap();
        assert_eq!(s.socle, vec![0, x3]);

        let r = FiniteRing::truncated_poly(3, 2).unwrap();
        let s = structure(&r);
        assert_eq!(s.socle, s.radical);
    }

    #[test]
    fn non_local_product() {
        let r = FiniteRing::zmod(45).unwrap();
        let s = structure(&r);
        assert!(!s.is_local);
        assert_eq!(s.units.len(), 24);
        // 𝒯 ≅ C_2 × C_4
        assert_eq!(s.teichmuller.len(), 8);
        assert!(s.teichmuller.iter().all(|&t| r.pow(t, 4) == 1));
        assert_eq!(s.radical, vec![0, 15, 30]);
    }
}
