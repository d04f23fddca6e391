//! Cyclotomic schemes `Cyc(K, R)`: the scheme on `R` whose basis relations
//! are `{(x, y) : y − x ∈ rK}` for the orbits `rK` of a unit subgroup `K`.
//!
//! Besides the construction this module holds the multiplication S-ring,
//! purity, the normality classifier and brute-force oracle, and the named
//! property suites.

mod classify;
mod purity;
mod suites;

use std::sync::Arc;

use num_bigint::BigUint;

pub use classify::{
    classify, classify_normality_theorem, sweep, BruteForceVerdict, ClassifyOptions, NormalityVerdict,
    TheoremVerdict, ODD_GALOIS_SWEEP,
};
pub use purity::{impurity_witness, is_pure_exhaustive, purity, PurityReport, PurityStep};
pub use suites::{
    invariant_closure_aut_check, run_suites, CheckResult, Outcome, Suite, SuiteReport, EXTRA_SUITE_RINGS,
    PRODUCT_SUITE_RINGS,
};

use crate::exec::Execution;
use crate::perm::{
    is_ring_automorphism, semilinear_decomposition, Perm, PermGroup, UnitSubgroup,
};
use crate::ring::{ring_automorphisms, Elem, FiniteRing, Ideal, RingStructure};
use crate::scheme::{
    automorphism_group, point_extension, quotient, restriction, invariant_closure, AutSearchOptions,
    AutomorphismGroup, CoherentConfiguration, EquivalenceRelation,
};
use crate::sring::{AbelianGroup, SRing};
use crate::{Error, Result};

/// `Cyc(K, R)` with its orbit data.
#[derive(Clone, Debug)]
pub struct CyclotomicScheme {
    ring: Arc<FiniteRing>,
    structure: Arc<RingStructure>,
    subgroup: UnitSubgroup,
    scheme: CoherentConfiguration,
    orbits: Vec<Vec<Elem>>,
    orbit_of: Vec<u32>,
}

impl CyclotomicScheme {
    /// Build and verify `Cyc(K, R)`: the scheme axioms and invariance under
    /// `Γ(K, R)` are both checked.
    pub fn new(ring: Arc<FiniteRing>, structure: Arc<RingStructure>, subgroup: UnitSubgroup) -> Result<Self> {
        if subgroup.elements().iter().any(|&k| !structure.is_unit(k)) {
            return Err(Error::invalid("K must consist of units"));
        }
        let n = ring.size();
        let mut orbit_of = vec![u32::MAX; n];
        let mut orbits = Vec::new();
        for x in ring.elements() {
            if orbit_of[x] != u32::MAX {
                continue;
            }
            let mut orbit: Vec<Elem> = subgroup.elements().iter().map(|&k| ring.mul(x, k)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                orbit_of[y] = orbits.len() as u32;
            }
            orbits.push(orbit);
        }
        let colors: Vec<u32> = (0..n * n)
            .map(|i| orbit_of[ring.sub(i % n, i / n)])
            .collect();
        let scheme = CoherentConfiguration::from_colors(n, &colors)?;
        let c = CyclotomicScheme {
            ring,
            structure,
            subgroup,
            scheme,
            orbits,
            orbit_of,
        };
        if let Some(g) = c.gamma_generators().into_iter().find(|g| !c.scheme.is_automorphism(g)) {
            return Err(Error::internal(format!("Γ(K, R) element {g} is not an automorphism")));
        }
        Ok(c)
    }

    /// Convenience constructor computing the ring structure.
    pub fn build(ring: &Arc<FiniteRing>, subgroup: UnitSubgroup) -> Result<Self> {
        let structure = Arc::new(RingStructure::new(ring)?);
        Self::new(ring.clone(), structure, subgroup)
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn structure(&self) -> &Arc<RingStructure> {
        &self.structure
    }

    pub fn subgroup(&self) -> &UnitSubgroup {
        &self.subgroup
    }

    pub fn scheme(&self) -> &CoherentConfiguration {
        &self.scheme
    }

    pub fn rank(&self) -> usize {
        self.scheme.rank()
    }

    /// The `K`-orbits on `R`, each sorted, ordered by smallest element.
    pub fn orbits(&self) -> &[Vec<Elem>] {
        &self.orbits
    }

    pub fn orbit_of(&self, x: Elem) -> &[Elem] {
        &self.orbits[self.orbit_of[x] as usize]
    }

    /// Color of the basis relation attached to the orbit of `r`.
    pub fn basis_index(&self, r: Elem) -> u32 {
        self.scheme.color(self.ring.zero(), r)
    }

    /// Generators of `Γ(K, R)`: multiplications by `K` and all translations.
    pub fn gamma_generators(&self) -> Vec<Perm> {
        let ring = &self.ring;
        let mut gens: Vec<Perm> = self
            .subgroup
            .elements()
            .iter()
            .map(|&a| Perm::from_images_unchecked(ring.elements().map(|x| ring.mul(a, x)).collect()))
            .collect();
        gens.extend(
            ring.elements()
                .map(|b| Perm::from_images_unchecked(ring.elements().map(|x| ring.add(x, b)).collect())),
        );
        gens
    }

    /// `|Γ(K, R)| = |R| · |K|`.
    pub fn gamma_order(&self) -> usize {
        self.ring.size() * self.subgroup.order()
    }
}

/// Class label of `x` modulo the ideal: the smallest element of `x + I`.
fn coset_labels(ring: &FiniteRing, ideal: &Ideal) -> Vec<usize> {
    ring.elements()
        .map(|x| ideal.elements().iter().map(|&i| ring.add(x, i)).min().unwrap())
        .collect()
}

/// `E(I)`: the partition of `R` into cosets of `I`, checked to be a
/// relation of the scheme.
pub fn ideal_equivalence(c: &CyclotomicScheme, ideal: &Ideal) -> Result<EquivalenceRelation> {
    let e = EquivalenceRelation::from_labels(&coset_labels(&c.ring, ideal));
    if !c.scheme.is_union_of_colors(|x, y| e.related(x, y)) {
        return Err(Error::internal("E(I) is not a relation of the scheme"));
    }
    Ok(e)
}

/// The scheme joined with the diagonal of every class of `e`.
pub fn class_extension(c: &CoherentConfiguration, e: &EquivalenceRelation, exec: Execution) -> CoherentConfiguration {
    let n = c.degree();
    let mut initial: Vec<u32> = c.colors().to_vec();
    let k = c.rank() as u32;
    for x in 0..n {
        initial[x * n + x] = k + e.class_of(x) as u32;
    }
    crate::scheme::wl_refine(n, &initial, exec)
}

/// Compare the factor scheme `Cyc(K, R)_{R/E(I)}` with `Cyc(π_I(K), R/I)`.
pub fn factor_check(c: &CyclotomicScheme, ideal: &Ideal) -> Result<bool> {
    let ring = &c.ring;
    if !c.structure.is_local {
        return Err(Error::precondition("factor schemes are compared over local rings only"));
    }
    if !ideal.elements().iter().all(|x| c.structure.radical.binary_search(x).is_ok()) {
        return Err(Error::precondition("ideal is not inside the radical"));
    }
    let e = ideal_equivalence(c, ideal)?;
    let factor = quotient(&c.scheme, &e)?;
    let q = crate::ring::quotient_ring(ring, ideal)?;
    let target = Arc::new(q.target.clone());
    let projected = UnitSubgroup::new(&target, q.project_set(c.subgroup.elements()))?;
    let reduced = CyclotomicScheme::build(&target, projected)?;
    // relabel classes by the quotient element they stand for
    let m = e.class_count();
    let mut element_of_class = vec![0; m];
    for x in ring.elements() {
        element_of_class[e.class_of(x)] = q.project(x);
    }
    let mut colors = vec![0u32; m * m];
    for a in 0..m {
        for b in 0..m {
            colors[element_of_class[a] * m + element_of_class[b]] = factor.color(a, b);
        }
    }
    Ok(CoherentConfiguration::from_colors_unchecked(m, &colors) == *reduced.scheme())
}

/// Indices in the unit group of a set of units (in the sorted order used by
/// [`AbelianGroup::multiplicative`]).
fn unit_indices(group: &AbelianGroup, elements: impl IntoIterator<Item = Elem>) -> Vec<usize> {
    let mut v: Vec<usize> = elements
        .into_iter()
        .filter_map(|x| group.points().binary_search(&x).ok())
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Both coset families that the multiplication S-ring must contain: `rK`
/// for units `r`, and `(1 + rK) ∩ R^×` for all `r`. Returns the first
/// set that is not a union of basic sets.
pub fn missing_coset(c: &CyclotomicScheme, a: &SRing) -> Option<Vec<Elem>> {
    let ring = &c.ring;
    let k = c.subgroup.elements();
    let group = a.group();
    for &r in &c.structure.units {
        let set: Vec<Elem> = k.iter().map(|&x| ring.mul(r, x)).collect();
        if !a.is_union_of_basic_sets(&unit_indices(group, set.iter().copied())) {
            return Some(set);
        }
    }
    for r in ring.elements() {
        let set: Vec<Elem> = k
            .iter()
            .map(|&x| ring.add(ring.one(), ring.mul(r, x)))
            .filter(|&y| c.structure.is_unit(y))
            .collect();
        if !a.is_union_of_basic_sets(&unit_indices(group, set.iter().copied())) {
            return Some(set);
        }
    }
    None
}

/// `A(K, R)`: extend `Cyc(K, R)` at `0`, restrict to `R^×`, close under
/// right multiplications and read off the S-ring over `R^×`.
pub fn multiplication_sring(c: &CyclotomicScheme, exec: Execution) -> Result<SRing> {
    let ring = &c.ring;
    let mut units = c.structure.units.clone();
    units.sort_unstable();
    let extended = point_extension(&c.scheme, &[ring.zero()], exec)?;
    let restricted = restriction(&extended, &units)
        .map_err(|e| Error::internal(format!("unit group is not a union of fibers: {e}")))?;
    let group = Arc::new(AbelianGroup::multiplicative(ring, &units)?);
    let right: Vec<Perm> = (0..group.order()).map(|g| group.right_multiplication(g)).collect();
    let closed = invariant_closure(&restricted, &right)?;
    let a = SRing::from_cayley(&closed, group)?;
    if let Some(set) = missing_coset(c, &a) {
        return Err(Error::internal(format!(
            "multiplication S-ring misses the coset {:?}",
            set.iter().map(|&x| ring.label(x)).collect::<Vec<_>>()
        )));
    }
    Ok(a)
}

/// Brute-force normality data.
#[derive(Clone, Debug)]
pub struct BruteForceNormality {
    pub normal: bool,
    /// `Aut(C)` with base starting at `0, 1`.
    pub aut: AutomorphismGroup,
    pub aut_order: BigUint,
    pub agammal_order: BigUint,
    /// An automorphism outside `AΓL₁(R)` when not normal.
    pub witness: Option<Perm>,
    /// `Aut(C)_{0,1} ≤ Aut(R)`, computed independently of `normal`.
    pub stabilizer_in_ring_aut: bool,
}

/// `Aut(C) ≤ AΓL₁(R)`, decided generator by generator.
pub fn is_normal_bruteforce(c: &CyclotomicScheme, options: &AutSearchOptions) -> Result<BruteForceNormality> {
    let ring = &c.ring;
    let mut opts = options.clone();
    opts.base_prefix = vec![ring.zero(), ring.one()];
    let aut = automorphism_group(&c.scheme, &opts)?;
    let ring_aut = ring_automorphisms(ring)?;
    let outside = aut
        .generators()
        .iter()
        .find(|g| semilinear_decomposition(ring, &c.structure, g).is_none())
        .cloned();
    let normal = outside.is_none();
    let witness = if normal {
        None
    } else {
        preferred_fk_witness(c).or(outside)
    };
    let stabilizer = aut
        .pointwise_stabilizer(&[ring.zero(), ring.one()])
        .ok_or_else(|| Error::internal("stabilizer of 0 and 1 is not on the base"))?;
    let stabilizer_in_ring_aut = stabilizer
        .generators()
        .iter()
        .all(|g| is_ring_automorphism(ring, &g.images()));
    let agammal_order =
        BigUint::from(ring.size()) * BigUint::from(c.structure.units.len()) * BigUint::from(ring_aut.order());
    Ok(BruteForceNormality {
        normal,
        aut_order: aut.order(),
        aut,
        agammal_order,
        witness,
        stabilizer_in_ring_aut,
    })
}

/// An `f_k` outside `AΓL₁(R)`, when `K + I = K` for a minimal ideal `I`.
fn preferred_fk_witness(c: &CyclotomicScheme) -> Option<Perm> {
    if !c.structure.is_local {
        return None;
    }
    let ideal = impurity_witness(&c.ring, &c.structure, &c.subgroup).ok()??;
    let ring = &c.ring;
    ideal
        .elements()
        .iter()
        .map(|&i| ring.add(ring.one(), i))
        .filter(|&k| k != ring.one())
        .filter_map(|k| fk_witness(c, &ideal, k).ok())
        .find(|w| !w.in_agammal)
        .map(|w| w.perm)
}

/// `f_k` together with its `AΓL₁` membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FkWitness {
    pub perm: Perm,
    pub in_agammal: bool,
}

/// `f_k`: multiply the principal units by `k` and fix everything else.
/// Requires `K + I = K` and `k ∈ 1 + I`; the result is checked to be an
/// automorphism of the scheme.
pub fn fk_witness(c: &CyclotomicScheme, ideal: &Ideal, k: Elem) -> Result<FkWitness> {
    let ring = &c.ring;
    let s = &c.structure;
    if !s.is_local {
        return Err(Error::precondition("f_k needs a local ring"));
    }
    if !ideal.elements().iter().all(|&i| c.subgroup.contains(ring.add(ring.one(), i))) {
        return Err(Error::precondition("1 + I is not contained in K"));
    }
    if !ideal.contains(ring.sub(k, ring.one())) {
        return Err(Error::precondition("k is not in 1 + I"));
    }
    let images: Vec<Elem> = ring
        .elements()
        .map(|x| {
            if s.principal_units.binary_search(&x).is_ok() {
                ring.mul(k, x)
            } else {
                x
            }
        })
        .collect();
    let perm = Perm::from_images(images)?;
    if !c.scheme.is_automorphism(&perm) {
        return Err(Error::internal(format!("f_{} is not an automorphism", ring.label(k))));
    }
    let in_agammal = semilinear_decomposition(ring, s, &perm).is_some();
    Ok(FkWitness { perm, in_agammal })
}

/// Outcome of comparing `Aut(C)_{0,1}` with the product of the component
/// stabilizers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductCheck {
    pub stabilizer_order: BigUint,
    pub product_order: BigUint,
    /// Every lifted component generator lies in `Aut(C)_{0,1}`.
    pub components_contained: bool,
    pub normal: bool,
    pub components_normal: Vec<bool>,
}

impl ProductCheck {
    pub fn holds(&self) -> bool {
        self.components_contained
            && self.stabilizer_order == self.product_order
            && self.normal == self.components_normal.iter().all(|&x| x)
    }
}

/// Two-point stabilizer of `Cyc(K, R)` against the product of the
/// stabilizers of `Cyc(K_i, R_i)`, where `φ_i(K_i) = K ∩ φ_i(R_i^×)`.
pub fn stabilizer_product_check(
    ring: &Arc<FiniteRing>,
    subgroup: &UnitSubgroup,
    options: &AutSearchOptions,
) -> Result<ProductCheck> {
    let factors = ring.crt_decompose()?;
    if factors.len() < 2 {
        return Err(Error::precondition("the ring has a single local factor"));
    }
    let c = CyclotomicScheme::build(ring, subgroup.clone())?;
    let whole = is_normal_bruteforce(&c, options)?;
    let stabilizer = whole
        .aut
        .pointwise_stabilizer(&[ring.zero(), ring.one()])
        .ok_or_else(|| Error::internal("stabilizer of 0 and 1 is not on the base"))?;

    let mut product_order = BigUint::from(1u32);
    let mut contained = true;
    let mut components_normal = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        let fs = RingStructure::new(&f.ring)?;
        let ki = UnitSubgroup::new(
            &f.ring,
            fs.units
                .iter()
                .copied()
                .filter(|&x| subgroup.contains(f.unit_embedding(ring, x))),
        )?;
        let ci = CyclotomicScheme::new(f.ring.clone(), Arc::new(fs), ki)?;
        let part = is_normal_bruteforce(&ci, options)?;
        components_normal.push(part.normal);
        let part_stab = part
            .aut
            .pointwise_stabilizer(&[f.ring.zero(), f.ring.one()])
            .ok_or_else(|| Error::internal("component stabilizer is not on the base"))?;
        product_order *= part_stab.order();
        for g in part_stab.generators() {
            let images: Vec<Elem> = ring
                .elements()
                .map(|x| {
                    factors.iter().enumerate().fold(ring.zero(), |acc, (j, fj)| {
                        let coord = fj.projection[x];
                        let coord = if j == i { g.apply(coord) } else { coord };
                        ring.add(acc, fj.embedding[coord])
                    })
                })
                .collect();
            let lifted = Perm::from_images(images)?;
            contained &= stabilizer.contains(&lifted);
        }
    }
    Ok(ProductCheck {
        stabilizer_order: stabilizer.order(),
        product_order,
        components_contained: contained,
        normal: whole.normal,
        components_normal,
    })
}

/// The ring automorphisms that are also automorphisms of the scheme.
pub fn scheme_ring_automorphisms(c: &CyclotomicScheme) -> Result<PermGroup> {
    let all = ring_automorphisms(&c.ring)?;
    let kept: Vec<Perm> = all
        .elements()
        .iter()
        .filter(|g| c.scheme.is_automorphism(g))
        .cloned()
        .collect();
    PermGroup::from_closed_elements(c.ring.size(), kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::enumerate_unit_subgroups;

    pub(crate) fn cyc(spec: &str, k: &[&str]) -> CyclotomicScheme {
        let ring = Arc::new(spec.parse::<crate::ring::RingSpec>().unwrap().build().unwrap());
        let elems: Vec<Elem> = k.iter().map(|s| ring.parse_element(s).unwrap()).collect();
        let subgroup = UnitSubgroup::new(&ring, elems).unwrap();
        CyclotomicScheme::build(&ring, subgroup).unwrap()
    }

    fn orbit_labels(c: &CyclotomicScheme) -> Vec<Vec<String>> {
        c.orbits()
            .iter()
            .map(|o| o.iter().map(|&x| c.ring().label(x).to_string()).collect())
            .collect()
    }

    #[test]
    fn orbit_structure() {
        let c = cyc("Z/9", &["1", "8"]);
        assert_eq!(c.rank(), 5);
        assert_eq!(
            orbit_labels(&c),
            [vec!["0"], vec!["1", "8"], vec!["2", "7"], vec!["3", "6"], vec!["4", "5"]]
        );
        let c = cyc("Z/9", &["1", "4", "7"]);
        assert_eq!(c.rank(), 5);
        assert_eq!(
            orbit_labels(&c),
            [vec!["0"], vec!["1", "4", "7"], vec!["2", "5", "8"], vec!["3"], vec!["6"]]
        );
        assert_eq!(cyc("GF(5)", &["1", "2", "3", "4"]).rank(), 2);
    }

    #[test]
    fn unit_multiplications_are_isomorphisms() {
        let c = cyc("Z/9", &["1", "8"]);
        let ring = c.ring().clone();
        for &u in &c.structure().units {
            let g = Perm::from_images(ring.elements().map(|x| ring.mul(u, x)).collect()).unwrap();
            assert!(c.scheme().induced_color_map(&g).is_some());
        }
    }

    #[test]
    fn ideal_equivalences() {
        let c = cyc("Z/9", &["1", "8"]);
        let ring = c.ring().clone();
        let three = Ideal::principal(&ring, 3);
        assert_eq!(ideal_equivalence(&c, &three).unwrap().classes(), vec![vec![0, 3, 6], vec![1, 4, 7], vec![2, 5, 8]]);
        assert_eq!(ideal_equivalence(&c, &Ideal::zero(&ring)).unwrap().class_count(), 9);
        assert_eq!(ideal_equivalence(&c, &Ideal::whole(&ring)).unwrap().class_count(), 1);
    }

    #[test]
    fn factor_schemes() {
        for k in [&["1", "8"][..], &["1", "4", "7"]] {
            let c = cyc("Z/9", k);
            let ring = c.ring().clone();
            assert!(factor_check(&c, &Ideal::principal(&ring, 3)).unwrap());
            assert!(factor_check(&c, &Ideal::zero(&ring)).unwrap());
        }
        let c = cyc("Z/9", &["1", "4", "7"]);
        let e = ideal_equivalence(&c, &Ideal::principal(c.ring(), 3)).unwrap();
        assert_eq!(quotient(c.scheme(), &e).unwrap().rank(), 3);
        let c = cyc("GF(3)*GF(3)", &["(1,1)"]);
        assert!(factor_check(&c, &Ideal::zero(c.ring())).is_err());
    }

    #[test]
    fn multiplication_srings() {
        let c = cyc("Z/9", &["1", "8"]);
        let a = multiplication_sring(&c, Execution::Sequential).unwrap();
        let g = a.group().clone();
        let t = unit_indices(&g, [1, 8]);
        let u = unit_indices(&g, [1, 4, 7]);
        assert!(a.is_subgroup_in(&t) && a.is_subgroup_in(&u));
        assert!(a.restriction(&t).unwrap().is_trivial());

        let f5 = cyc("GF(5)", &["1", "2", "3", "4"]);
        let a = multiplication_sring(&f5, Execution::Parallel).unwrap();
        assert_eq!(a.rank(), 2);
        assert!(a.is_basic_set(&(1..4).collect::<Vec<_>>()));

        let plain = cyc("Z/9", &["1"]);
        assert!(multiplication_sring(&plain, Execution::Parallel).unwrap().is_trivial());
    }

    #[test]
    fn brute_force_named_instances() {
        let opts = AutSearchOptions::default();
        let b = is_normal_bruteforce(&cyc("Z/9", &["1", "8"]), &opts).unwrap();
        assert!(b.normal && b.stabilizer_in_ring_aut);
        assert_eq!(b.aut_order, BigUint::from(18u32));
        assert_eq!(b.agammal_order, BigUint::from(54u32));

        let c = cyc("Z/9", &["1", "4", "7"]);
        let b = is_normal_bruteforce(&c, &opts).unwrap();
        assert!(!b.normal && !b.stabilizer_in_ring_aut);
        assert_eq!(b.aut_order, BigUint::from(81u32));
        let w = b.witness.unwrap();
        assert!(c.scheme().is_automorphism(&w));
        assert_eq!(w.images(), vec![0, 4, 2, 3, 7, 5, 6, 1, 8]);

        let b = is_normal_bruteforce(&cyc("GF(5)", &["1", "2", "3", "4"]), &opts).unwrap();
        assert!(!b.normal);
        assert_eq!((b.aut_order, b.agammal_order), (BigUint::from(120u32), BigUint::from(20u32)));
    }

    #[test]
    fn fk_witnesses() {
        let c = cyc("Z/9", &["1", "4", "7"]);
        let ideal = Ideal::principal(c.ring(), 3);
        let f4 = fk_witness(&c, &ideal, 4).unwrap();
        assert_eq!(f4.perm.cycles(), vec![vec![1, 4, 7]]);
        assert!(!f4.in_agammal);
        assert!(fk_witness(&c, &ideal, 1).unwrap().perm.is_identity());
        assert_eq!(fk_witness(&c, &ideal, 7).unwrap().perm.cycles(), vec![vec![1, 7, 4]]);
        assert!(fk_witness(&c, &ideal, 2).is_err());
        let pure = cyc("Z/9", &["1", "8"]);
        assert!(fk_witness(&pure, &ideal, 4).is_err());
    }

    #[test]
    fn product_stabilizers() {
        let opts = AutSearchOptions::default();
        for (spec, k) in [
            ("Z/9*GF(3)", vec!["(1,1)", "(1,2)", "(8,1)", "(8,2)"]),
            ("GF(3)*GF(3)", vec!["(1,1)", "(2,2)"]),
            ("Z/9*GF(3)", vec!["(1,1)"]),
        ] {
            let c = cyc(spec, &k);
            let check = stabilizer_product_check(c.ring(), c.subgroup(), &opts).unwrap();
            assert!(check.holds(), "{spec} {k:?}: {check:?}");
        }
        let z9 = cyc("Z/9", &["1"]);
        assert!(stabilizer_product_check(z9.ring(), z9.subgroup(), &opts).is_err());
    }

    #[test]
    fn gamma_inside_aut_for_all_subgroups() {
        let ring = Arc::new(FiniteRing::galois_ring(3, 2, 2).unwrap());
        let s = Arc::new(RingStructure::new(&ring).unwrap());
        for k in enumerate_unit_subgroups(&ring, &s, 256).unwrap() {
            let c = CyclotomicScheme::new(ring.clone(), s.clone(), k).unwrap();
            let aut = automorphism_group(c.scheme(), &AutSearchOptions::default()).unwrap();
            assert!(c.gamma_generators().iter().all(|g| aut.contains(g)));
            assert!(aut.order() >= BigUint::from(c.gamma_order()));
        }
    }
}
