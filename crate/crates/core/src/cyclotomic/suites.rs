//! Named property suites. Each suite checks one structural statement about
//! cyclotomic schemes on every unit subgroup of a ring, reporting `pass`,
//! `fail` with a diagnostic, or `not_applicable` when the hypotheses fail.

use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{
    class_extension, classify_normality_theorem, coset_labels, factor_check, ideal_equivalence, is_normal_bruteforce,
    missing_coset, multiplication_sring, purity, scheme_ring_automorphisms, stabilizer_product_check,
    BruteForceNormality, ClassifyOptions, CyclotomicScheme, PurityReport, TheoremVerdict,
};
use crate::perm::{enumerate_unit_subgroups, semilinear_decomposition, Perm, PermGroup, UnitSubgroup};
use crate::ring::{
    enumerate_ideals, is_prime, quotient_ring, Elem, FiniteRing, Ideal, RingSpec, RingStructure, DEFAULT_IDEAL_LIMIT,
};
use crate::scheme::{
    automorphism_group, invariant_closure, point_extension, restriction, AutSearchOptions, CoherentConfiguration,
    EquivalenceRelation,
};
use crate::sring::{AbelianGroup, SRing};
use crate::{Error, Result};

/// Local rings of even characteristic and non-Galois local rings used next
/// to the odd Galois sweep.
pub const EXTRA_SUITE_RINGS: &[&str] = &[
    "Z/4", "Z/8", "Z/16", "GR(2^2,2)", "POLY(2,2)", "POLY(2,3)", "POLY(2,4)", "POLY(3,2)", "POLY(4,2)", "POLY(5,2)",
    "POLY(3,3)",
];

/// Products of two local rings.
pub const PRODUCT_SUITE_RINGS: &[&str] = &["Z/9*GF(3)", "GF(3)*GF(3)", "Z/9*GF(5)"];

macro_rules! suites {
    ($($variant:ident => $name:literal, $alias:literal, $about:literal;)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Suite {
            $($variant,)*
        }

        impl Suite {
            pub const ALL: &'static [Suite] = &[$(Suite::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Suite::$variant => $name,)*
                }
            }

            /// Short alternative name accepted on input.
            pub fn alias(self) -> &'static str {
                match self {
                    $(Suite::$variant => $alias,)*
                }
            }

            pub fn description(self) -> &'static str {
                match self {
                    $(Suite::$variant => $about,)*
                }
            }
        }
    };
}

suites! {
    SocleExtensionRefines => "socle-extension-refines", "f300805a",
        "pure K: C joined with the I0-coset diagonals refines Cyc(K ∩ U0, R)";
    SocleCosetIntersection => "socle-coset-intersection", "f290705c",
        "pure K: xU0 is the intersection of (x−t)U0 + tU0 over t in T, x in rad(R)";
    UnitCosetDecomposition => "unit-coset-decomposition", "f230805c",
        "K = T(1+H), H ≤ I0: multiplicative decomposition of (1 + rK) ∩ R^×";
    MultSringContainsCosets => "mult-sring-contains-cosets", "f2130406c",
        "A(K,R) contains rK and (1 + rK) ∩ R^×";
    MultSringTeichmullerPrincipal => "mult-sring-teichmuller-principal", "f230805a",
        "pure K ≤ TU0: T and U are A-subgroups; A trivial when A_T or A_U is";
    MultSringCosetJoinTrivial => "mult-sring-coset-join-trivial", "f230805b",
        "pure K ≤ TU0: joining A with the cosets of T or of U gives the trivial S-ring";
    TrivialMultSringGamma => "trivial-mult-sring-gamma", "f050406b",
        "A(K,R) trivial: C_{0,1} is discrete and Aut(C) = Γ(K,R)";
    StabilizerRestrictionHom => "stabilizer-restriction-hom", "f130406a",
        "restriction to R^× maps Aut(C)_{0,1} into Aut(A), bijectively over fields";
    SocleReductionInjective => "socle-reduction-injective", "f050805b",
        "pure K: Aut_C(R) → Aut_C(R/I0) is injective";
    StronglyPureNormal => "strongly-pure-normal", "f050406a",
        "strongly pure K over a non-field local ring: C is normal and Aut_C(R) → Aut_C(F) is injective";
    PureSmallKNormal => "pure-small-k-normal", "f100406a",
        "pure K ≤ TU0 over a non-field local ring: C is normal";
    AffineSufficient => "affine-sufficient", "290506a",
        "K ≤ T, or K strongly pure with K ≤ U or prime residue field: Aut(C) ≤ AGL1(R)";
    FieldRankNormal => "field-rank-normal", "f080805b",
        "fields: rank > 2 implies normal";
    NormalIdealNecessary => "normal-ideal-necessary", "f090405b",
        "normal C with K + I = K, I ≠ 0: q = 2 and I ⊆ I0";
    GaloisPureStrong => "galois-pure-strong", "f060206a",
        "odd Galois rings: pure iff strongly pure";
    InvariantClosureAut => "invariant-closure-aut", "f210406b",
        "Γ regular on fibers: Aut(C^Γ) = Γ·Aut(C)";
    ExtensionNormalSubgroup => "e-extension-normal-subgroup", "f030805d",
        "E(I) ∈ E(C): Aut(C_E) is normal in Aut(C)";
    CayleyAutProduct => "cayley-aut-product", "eoags",
        "Cayley schemes: Aut(C) = Aut(A)·G_right";
    SchurMultipliers => "schur-multipliers", "schur",
        "multiplier closure of the multiplication and addition S-rings";
    CosetJoinNormalizer => "coset-join-normalizer", "f180406a",
        "Aut(A) normalizes ⟨Aut(A'), H'⟩ for every A-subgroup H";
    ProductStabilizer => "product-stabilizer", "f090405a",
        "product rings: Aut(C)_{0,1} is the product of the component stabilizers";
    FactorScheme => "factor-scheme", "250706f",
        "local R, I ⊆ rad(R): Cyc(K,R)/E(I) = Cyc(π(K), R/I)";
    GaloisClassification => "galois-classification", "250706a",
        "odd Galois rings: classification agrees with brute force";
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name().eq_ignore_ascii_case(s) || x.alias().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail(String),
    NotApplicable(String),
}

impl Outcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, Outcome::Fail(_))
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    #[serde(rename = "K")]
    pub subgroup: Vec<Elem>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub ring: String,
    pub results: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.results.iter().any(|r| r.outcome.is_fail())
    }

    pub fn pass_count(&self) -> usize {
        self.results.iter().filter(|r| r.outcome.is_pass()).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| r.outcome.is_fail())
    }
}

fn na(why: &str) -> Result<Outcome> {
    Ok(Outcome::NotApplicable(why.to_string()))
}

fn verdict(ok: bool, why: impl FnOnce() -> String) -> Result<Outcome> {
    Ok(if ok { Outcome::Pass } else { Outcome::Fail(why()) })
}

/// Ring-level data shared by all subgroups.
struct RingContext {
    ring: Arc<FiniteRing>,
    s: Arc<RingStructure>,
    ideals: Vec<Ideal>,
    /// `T·U0`, sorted.
    small_units: Vec<Elem>,
}

/// One `(R, K)` pair with lazily computed expensive pieces.
struct Instance<'a> {
    ctx: &'a RingContext,
    cyc: CyclotomicScheme,
    options: &'a ClassifyOptions,
    purity: OnceLock<Option<PurityReport>>,
    brute: OnceLock<Result<BruteForceNormality>>,
    mult: OnceLock<Result<SRing>>,
}

impl Instance<'_> {
    fn ring(&self) -> &FiniteRing {
        &self.ctx.ring
    }

    fn s(&self) -> &RingStructure {
        &self.ctx.s
    }

    fn k(&self) -> &UnitSubgroup {
        self.cyc.subgroup()
    }

    fn purity(&self) -> Option<&PurityReport> {
        self.purity
            .get_or_init(|| {
                self.s()
                    .is_local
                    .then(|| purity(self.ring(), self.s(), self.k()).expect("purity of a local ring"))
            })
            .as_ref()
    }

    fn pure(&self) -> bool {
        self.purity().is_some_and(|p| p.is_pure)
    }

    fn strongly_pure(&self) -> bool {
        self.purity().is_some_and(|p| p.is_strongly_pure)
    }

    fn brute(&self) -> Result<&BruteForceNormality> {
        self.brute
            .get_or_init(|| is_normal_bruteforce(&self.cyc, &self.options.aut))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn mult(&self) -> Result<&SRing> {
        self.mult
            .get_or_init(|| multiplication_sring(&self.cyc, self.options.exec))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn k_in(&self, set: &[Elem]) -> bool {
        self.k().elements().iter().all(|x| set.binary_search(x).is_ok())
    }

    fn local_non_field(&self) -> bool {
        self.s().is_local && !self.s().is_field()
    }

    fn socle_ideal(&self) -> Result<Ideal> {
        Ideal::new(self.ring(), self.s().socle.iter().copied())
    }

    /// `K ∩ U0` as a subgroup.
    fn socle_part(&self) -> Result<UnitSubgroup> {
        UnitSubgroup::new(
            self.ring(),
            self.k().elements().iter().copied().filter(|x| self.s().socle_units.binary_search(x).is_ok()),
        )
    }
}

fn unit_index_set(a: &SRing, elements: &[Elem]) -> Vec<usize> {
    let mut v: Vec<usize> = elements
        .iter()
        .filter_map(|x| a.group().points().binary_search(x).ok())
        .collect();
    v.sort_unstable();
    v
}

fn cosets_of(group: &AbelianGroup, h: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; group.order()];
    let mut out = Vec::new();
    for g in 0..group.order() {
        if seen[g] {
            continue;
        }
        let mut coset: Vec<usize> = h.iter().map(|&x| group.op(g, x)).collect();
        coset.sort_unstable();
        coset.iter().for_each(|&x| seen[x] = true);
        out.push(coset);
    }
    out
}

fn socle_extension_refines(i: &Instance) -> Result<Outcome> {
    if !i.s().is_local || !i.pure() {
        return na("needs a pure subgroup of a local ring");
    }
    let e = EquivalenceRelation::from_labels(&coset_labels(i.ring(), &i.socle_ideal()?));
    let extended = class_extension(i.cyc.scheme(), &e, i.options.exec);
    let target = CyclotomicScheme::new(i.ctx.ring.clone(), i.ctx.s.clone(), i.socle_part()?)?;
    verdict(extended.refines(target.scheme()), || {
        format!("rank {} extension does not refine Cyc(U0, R)", extended.rank())
    })
}

fn sorted(mut v: Vec<Elem>) -> Vec<Elem> {
    v.sort_unstable();
    v.dedup();
    v
}

fn socle_coset_intersection(i: &Instance) -> Result<Outcome> {
    if !i.s().is_local || !i.pure() {
        return na("needs a pure subgroup of a local ring");
    }
    let ring = i.ring();
    let u0 = i.socle_part()?;
    let u0 = u0.elements();
    for &x in &i.s().radical {
        let lhs = sorted(u0.iter().map(|&u| ring.mul(x, u)).collect());
        let mut rhs: Option<Vec<Elem>> = None;
        for &t in &i.s().teichmuller {
            let xt = ring.sub(x, t);
            let set = sorted(
                u0.iter()
                    .flat_map(|&u| u0.iter().map(move |&v| (u, v)))
                    .map(|(u, v)| ring.add(ring.mul(xt, u), ring.mul(t, v)))
                    .collect(),
            );
            rhs = Some(match rhs {
                None => set,
                Some(prev) => prev.into_iter().filter(|y| set.binary_search(y).is_ok()).collect(),
            });
        }
        let rhs = rhs.unwrap_or_default();
        if lhs != rhs {
            return verdict(false, || format!("x = {}: {lhs:?} ≠ {rhs:?}", ring.label(x)));
        }
    }
    Ok(Outcome::Pass)
}

fn unit_coset_decomposition(i: &Instance) -> Result<Outcome> {
    let s = i.s();
    if !s.is_local || !i.k_in(&i.ctx.small_units) || !s.teichmuller.iter().all(|&t| i.k().contains(t)) {
        return na("needs K = T(1 + H) with H ≤ I0 over a local ring");
    }
    let ring = i.ring();
    let one = ring.one();
    let h: Vec<Elem> = i
        .k()
        .elements()
        .iter()
        .filter(|x| s.principal_units.binary_search(x).is_ok())
        .map(|&x| ring.sub(x, one))
        .collect();
    // y_t ∈ rad(R) with 1 − t⁻¹ + y_t ∈ T, required to be unique
    let mut y_of = Vec::new();
    for &t in s.teichmuller.iter().filter(|&&t| t != one) {
        let t_inv = s.inverse(t).unwrap();
        let base = ring.sub(one, t_inv);
        let ys: Vec<Elem> = s
            .radical
            .iter()
            .copied()
            .filter(|&y| s.teichmuller.binary_search(&ring.add(base, y)).is_ok())
            .collect();
        if ys.len() != 1 {
            return verdict(false, || {
                format!("t = {}: {} candidates for y_t", ring.label(t), ys.len())
            });
        }
        y_of.push((t, t_inv, ys[0]));
    }
    for &x in &s.radical {
        let r = ring.add(one, x);
        let lhs = sorted(
            i.k()
                .elements()
                .iter()
                .map(|&k| ring.add(one, ring.mul(r, k)))
                .filter(|&y| s.is_unit(y))
                .collect(),
        );
        let mut rhs = Vec::new();
        for &(t, t_inv, y) in &y_of {
            let z = ring.mul(y, r);
            let coef = ring.mul(ring.sub(t, one), t_inv);
            for &hh in &h {
                let inner = ring.add(ring.add(one, z), ring.mul(coef, ring.add(hh, x)));
                rhs.push(ring.mul(t, inner));
            }
        }
        let rhs = sorted(rhs);
        if lhs != rhs {
            return verdict(false, || format!("r = {}: {lhs:?} ≠ {rhs:?}", ring.label(r)));
        }
    }
    Ok(Outcome::Pass)
}

fn mult_sring_contains_cosets(i: &Instance) -> Result<Outcome> {
    let a = i.mult()?;
    let missing = missing_coset(&i.cyc, a);
    verdict(missing.is_none(), || format!("missing {missing:?}"))
}

/// Shared hypothesis of the two Teichmüller/principal-unit statements.
fn small_pure(i: &Instance) -> bool {
    i.s().is_local && i.pure() && i.k_in(&i.ctx.small_units)
}

fn teichmuller_and_principal(i: &Instance, a: &SRing) -> (Vec<usize>, Vec<usize>) {
    (
        unit_index_set(a, &i.s().teichmuller),
        unit_index_set(a, &i.s().principal_units),
    )
}

fn mult_sring_teichmuller_principal(i: &Instance) -> Result<Outcome> {
    if !small_pure(i) {
        return na("needs a pure K ≤ TU0 over a local ring");
    }
    let a = i.mult()?;
    let (t, u) = teichmuller_and_principal(i, a);
    if !a.is_subgroup_in(&t) || !a.is_subgroup_in(&u) {
        return verdict(false, || "T or U is not an A-subgroup".into());
    }
    if i.s().is_field() {
        return Ok(Outcome::Pass);
    }
    let part_trivial = a.restriction(&t)?.is_trivial() || a.restriction(&u)?.is_trivial();
    verdict(!part_trivial || a.is_trivial(), || {
        format!("A_T or A_U is trivial but A has rank {}", a.rank())
    })
}

fn mult_sring_coset_join_trivial(i: &Instance) -> Result<Outcome> {
    if !small_pure(i) {
        return na("needs a pure K ≤ TU0 over a local ring");
    }
    let a = i.mult()?;
    let (t, u) = teichmuller_and_principal(i, a);
    if !a.is_subgroup_in(&t) || !a.is_subgroup_in(&u) {
        return verdict(false, || "T or U is not an A-subgroup".into());
    }
    if i.s().is_field() {
        return Ok(Outcome::Pass);
    }
    for (name, h) in [("T", &t), ("U", &u)] {
        let joined = a.join(&cosets_of(a.group(), h), i.options.exec)?;
        if !joined.is_trivial() {
            return verdict(false, || format!("join with the cosets of {name} has rank {}", joined.rank()));
        }
    }
    Ok(Outcome::Pass)
}

fn trivial_mult_sring_gamma(i: &Instance) -> Result<Outcome> {
    if !i.s().is_local {
        return na("needs a local ring");
    }
    if !i.mult()?.is_trivial() {
        return na("A(K,R) is not trivial");
    }
    let n = i.ring().size();
    let ext = point_extension(i.cyc.scheme(), &[i.ring().zero(), i.ring().one()], i.options.exec)?;
    let order = &i.brute()?.aut_order;
    verdict(ext.rank() == n * n && *order == BigUint::from(i.cyc.gamma_order()), || {
        format!("C_(0,1) rank {}, |Aut(C)| = {order}, |Γ| = {}", ext.rank(), i.cyc.gamma_order())
    })
}

fn stabilizer_restriction_hom(i: &Instance) -> Result<Outcome> {
    let ring = i.ring();
    let a = i.mult()?;
    let stab = i
        .brute()?
        .aut
        .pointwise_stabilizer(&[ring.zero(), ring.one()])
        .ok_or_else(|| Error::internal("stabilizer not on the base"))?;
    let cayley = a.to_cayley();
    let identity = a.group().identity();
    for g in stab.generators() {
        let restricted = g
            .restrict(a.group().points())
            .ok_or_else(|| Error::internal("R^× is not invariant"))?;
        if restricted.apply(identity) != identity || !cayley.is_automorphism(&restricted) {
            return verdict(false, || format!("restriction of {g} is not in Aut(A)"));
        }
    }
    if i.s().is_field() {
        let aut_a = a.automorphisms()?;
        return verdict(aut_a.order() == stab.order(), || {
            format!("|Aut(C)_(0,1)| = {} but |Aut(A)| = {}", stab.order(), aut_a.order())
        });
    }
    Ok(Outcome::Pass)
}

/// Ring automorphisms of `C` that become the identity modulo `ideal`, and
/// whether every reduction is an automorphism of the reduced scheme.
fn reduction_kernel(i: &Instance, ideal: &Ideal) -> Result<(usize, bool)> {
    let ring = i.ring();
    let q = quotient_ring(ring, ideal)?;
    let target = Arc::new(q.target.clone());
    let reduced = CyclotomicScheme::build(&target, UnitSubgroup::new(&target, q.project_set(i.k().elements()))?)?;
    let mut kernel = 0;
    let mut images_ok = true;
    for sigma in scheme_ring_automorphisms(&i.cyc)?.elements() {
        let mut image = vec![usize::MAX; target.size()];
        for x in ring.elements() {
            let (px, py) = (q.project(x), q.project(sigma.apply(x)));
            if image[px] != usize::MAX && image[px] != py {
                return Err(Error::internal("ring automorphism does not preserve the ideal"));
            }
            image[px] = py;
        }
        let reduced_sigma = Perm::from_images(image)?;
        images_ok &= reduced.scheme().is_automorphism(&reduced_sigma);
        if reduced_sigma.is_identity() && !sigma.is_identity() {
            kernel += 1;
        }
    }
    Ok((kernel, images_ok))
}

fn socle_reduction_injective(i: &Instance) -> Result<Outcome> {
    if !i.s().is_local || !i.pure() {
        return na("needs a pure subgroup of a local ring");
    }
    let (kernel, images_ok) = reduction_kernel(i, &i.socle_ideal()?)?;
    verdict(kernel == 0 && images_ok, || {
        format!("{kernel} nontrivial kernel elements; images preserved: {images_ok}")
    })
}

fn strongly_pure_normal(i: &Instance) -> Result<Outcome> {
    if !i.local_non_field() || !i.strongly_pure() {
        return na("needs a strongly pure subgroup of a non-field local ring");
    }
    if !i.brute()?.normal {
        return verdict(false, || "brute force finds the scheme not normal".into());
    }
    let radical = Ideal::new(i.ring(), i.s().radical.iter().copied())?;
    let (kernel, images_ok) = reduction_kernel(i, &radical)?;
    verdict(kernel == 0 && images_ok, || {
        format!("reduction to the residue field: {kernel} kernel elements; images preserved: {images_ok}")
    })
}

fn pure_small_k_normal(i: &Instance) -> Result<Outcome> {
    if !i.local_non_field() || !small_pure(i) {
        return na("needs a pure K ≤ TU0 over a non-field local ring");
    }
    verdict(i.brute()?.normal, || "brute force finds the scheme not normal".into())
}

fn affine_sufficient(i: &Instance) -> Result<Outcome> {
    if !i.local_non_field() {
        return na("needs a non-field local ring");
    }
    let s = i.s();
    let prime_residue = s.residue_field_size.is_some_and(is_prime);
    let applies = i.k_in(&s.teichmuller)
        || (i.strongly_pure() && (i.k_in(&s.principal_units) || prime_residue));
    if !applies {
        return na("none of the three conditions holds");
    }
    let brute = i.brute()?;
    let outside = brute
        .aut
        .generators()
        .iter()
        .find(|g| !semilinear_decomposition(i.ring(), s, g).is_some_and(|m| m.is_affine()));
    verdict(outside.is_none(), || format!("{} is not affine", outside.unwrap()))
}

fn field_rank_normal(i: &Instance) -> Result<Outcome> {
    if !i.s().is_field() || i.cyc.rank() <= 2 {
        return na("needs a field and rank > 2");
    }
    verdict(i.brute()?.normal, || "brute force finds the scheme not normal".into())
}

fn normal_ideal_necessary(i: &Instance) -> Result<Outcome> {
    if !i.s().is_local || !i.brute()?.normal {
        return na("needs a normal scheme over a local ring");
    }
    let ring = i.ring();
    let q = i.s().residue_field_size;
    for ideal in i.ctx.ideals.iter().filter(|x| !x.is_zero()) {
        if ideal.elements().iter().all(|&x| i.k().contains(ring.add(ring.one(), x))) {
            let in_socle = ideal.elements().iter().all(|x| i.s().socle.binary_search(x).is_ok());
            if q != Some(2) || !in_socle {
                return verdict(false, || format!("K + I = K for I = {:?}", ideal.elements()));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn galois_pure_strong(i: &Instance) -> Result<Outcome> {
    match i.ring().spec().galois_parameters() {
        Some((p, _, _)) if p > 2 => {}
        _ => return na("needs a Galois ring of odd characteristic"),
    }
    verdict(i.pure() == i.strongly_pure(), || {
        format!("pure = {}, strongly pure = {}", i.pure(), i.strongly_pure())
    })
}

/// For `Γ ≤ Iso(C)` acting regularly on the fibers of `C`, compare
/// `Aut(C^Γ)` with `Γ·Aut(C)`. `None` when `Γ` is not regular on fibers.
pub fn invariant_closure_aut_check(
    c: &CoherentConfiguration,
    gamma: &PermGroup,
    options: &AutSearchOptions,
) -> Result<Option<bool>> {
    let n = c.degree();
    let mut fiber_colors: Vec<u32> = (0..n).map(|x| c.color(x, x)).collect();
    fiber_colors.sort_unstable();
    fiber_colors.dedup();
    let first = c.color(0, 0);
    let mut reached = Vec::new();
    for g in gamma.elements() {
        let map = c
            .induced_color_map(g)
            .ok_or_else(|| Error::precondition("Γ is not a group of isomorphisms"))?;
        reached.push(map[first as usize]);
    }
    reached.sort_unstable();
    // transitive with trivial fiber stabilizers, i.e. every fiber hit once
    if reached != fiber_colors {
        return Ok(None);
    }
    let closed = invariant_closure(c, gamma.elements())?;
    let aut = automorphism_group(c, options)?;
    let aut_closed = automorphism_group(&closed, options)?;
    let shared = gamma.elements().iter().filter(|g| aut.contains(g)).count();
    let expected = BigUint::from(gamma.order()) * aut.order() / BigUint::from(shared);
    Ok(Some(
        aut_closed.order() == expected
            && gamma.elements().iter().all(|g| aut_closed.contains(g))
            && aut.generators().iter().all(|g| aut_closed.contains(g)),
    ))
}

fn invariant_closure_aut(i: &Instance) -> Result<Outcome> {
    let ring = i.ring();
    let units = &i.s().units;
    let extended = point_extension(i.cyc.scheme(), &[ring.zero()], i.options.exec)?;
    let restricted = restriction(&extended, units)?;
    let group = AbelianGroup::multiplicative(ring, units)?;
    let right: Vec<Perm> = (0..group.order()).map(|g| group.right_multiplication(g)).collect();
    let gamma = PermGroup::from_closed_elements(units.len(), right)?;
    match invariant_closure_aut_check(&restricted, &gamma, &i.options.aut)? {
        None => na("R^× is not regular on the fibers"),
        Some(ok) => verdict(ok, || "Aut(C^Γ) ≠ Γ·Aut(C)".into()),
    }
}

fn extension_normal_subgroup(i: &Instance) -> Result<Outcome> {
    let aut = &i.brute()?.aut;
    for ideal in &i.ctx.ideals {
        let e = ideal_equivalence(&i.cyc, ideal)?;
        let extended = class_extension(i.cyc.scheme(), &e, i.options.exec);
        let aut_e = automorphism_group(&extended, &i.options.aut)?;
        let inside = aut_e.generators().iter().all(|h| aut.contains(h));
        let normal = aut
            .generators()
            .iter()
            .all(|g| aut_e.generators().iter().all(|h| aut_e.contains(&g.conjugate(h))));
        if !inside || !normal {
            return verdict(false, || {
                format!("I = {:?}: contained {inside}, normalized {normal}", ideal.elements())
            });
        }
    }
    Ok(Outcome::Pass)
}

fn additive_sring(i: &Instance) -> Result<SRing> {
    SRing::from_cayley(i.cyc.scheme(), Arc::new(AbelianGroup::additive(i.ring())))
}

/// `|Aut(C)| = |Aut(C)_e| · |G|` with `G_right ≤ Aut(C)`.
fn cayley_product_holds(a: &SRing, options: &AutSearchOptions) -> Result<bool> {
    let e = a.group().identity();
    let mut opts = options.clone();
    opts.base_prefix = vec![e];
    let aut = automorphism_group(&a.to_cayley(), &opts)?;
    let stab = aut
        .pointwise_stabilizer(&[e])
        .ok_or_else(|| Error::internal("identity stabilizer not on the base"))?;
    Ok(a.right_translations().iter().all(|g| aut.contains(g))
        && aut.order() == stab.order() * BigUint::from(a.group().order()))
}

fn cayley_aut_product(i: &Instance) -> Result<Outcome> {
    let mult = cayley_product_holds(i.mult()?, &i.options.aut)?;
    let add = cayley_product_holds(&additive_sring(i)?, &i.options.aut)?;
    verdict(mult && add, || format!("multiplication S-ring {mult}, addition S-ring {add}"))
}

fn schur_multipliers(i: &Instance) -> Result<Outcome> {
    i.mult()?.verify_schur_multipliers()?;
    additive_sring(i)?.verify_schur_multipliers()?;
    Ok(Outcome::Pass)
}

fn coset_join_normalizer(i: &Instance) -> Result<Outcome> {
    let a = i.mult()?;
    let group = a.group();
    let aut_a = a.automorphisms()?;
    for h in a.a_subgroups() {
        let cosets = cosets_of(group, &h);
        let joined = a.join(&cosets, i.options.exec)?;
        let aut_joined = joined.automorphisms()?;
        let h_right: Vec<Perm> = h.iter().map(|&x| group.right_multiplication(x)).collect();
        // ⟨Aut(A'), H'⟩ is identified with Aut(C'_E) by containment and order
        let mut labels = vec![0; group.order()];
        for (ci, coset) in cosets.iter().enumerate() {
            coset.iter().for_each(|&x| labels[x] = ci);
        }
        let e = EquivalenceRelation::from_labels(&labels);
        let candidate = automorphism_group(&class_extension(&joined.to_cayley(), &e, i.options.exec), &i.options.aut)?;
        let generators: Vec<&Perm> = aut_joined.generators().iter().chain(&h_right).collect();
        let identified = generators.iter().all(|g| candidate.contains(g))
            && candidate.order() == aut_joined.order() * BigUint::from(h.len());
        if !identified {
            return verdict(false, || format!("H = {h:?}: could not identify ⟨Aut(A'), H'⟩"));
        }
        let normalized = aut_a
            .generators()
            .iter()
            .all(|g| generators.iter().all(|x| candidate.contains(&g.conjugate(x))));
        if !normalized {
            return verdict(false, || format!("H = {h:?}: Aut(A) does not normalize ⟨Aut(A'), H'⟩"));
        }
    }
    Ok(Outcome::Pass)
}

fn product_stabilizer(i: &Instance) -> Result<Outcome> {
    if i.ring().crt_decompose()?.len() < 2 {
        return na("needs a product of at least two local rings");
    }
    let check = stabilizer_product_check(&i.ctx.ring, i.k(), &i.options.aut)?;
    verdict(check.holds(), || format!("{check:?}"))
}

fn factor_scheme(i: &Instance) -> Result<Outcome> {
    if !i.s().is_local {
        return na("needs a local ring");
    }
    for ideal in &i.ctx.ideals {
        if ideal.elements().iter().all(|x| i.s().radical.binary_search(x).is_ok()) && !factor_check(&i.cyc, ideal)? {
            return verdict(false, || format!("I = {:?}", ideal.elements()));
        }
    }
    Ok(Outcome::Pass)
}

fn galois_classification(i: &Instance) -> Result<Outcome> {
    let theorem = classify_normality_theorem(i.ring(), i.s(), i.k());
    if theorem == TheoremVerdict::NotApplicable {
        return na("needs a Galois ring of odd characteristic");
    }
    let normal = i.brute()?.normal;
    verdict((theorem == TheoremVerdict::Normal) == normal, || {
        format!("classification {}, brute force normal = {normal}", theorem.as_str())
    })
}

fn run_one(suite: Suite, i: &Instance) -> Outcome {
    let result = match suite {
        Suite::SocleExtensionRefines => socle_extension_refines(i),
        Suite::SocleCosetIntersection => socle_coset_intersection(i),
        Suite::UnitCosetDecomposition => unit_coset_decomposition(i),
        Suite::MultSringContainsCosets => mult_sring_contains_cosets(i),
        Suite::MultSringTeichmullerPrincipal => mult_sring_teichmuller_principal(i),
        Suite::MultSringCosetJoinTrivial => mult_sring_coset_join_trivial(i),
        Suite::TrivialMultSringGamma => trivial_mult_sring_gamma(i),
        Suite::StabilizerRestrictionHom => stabilizer_restriction_hom(i),
        Suite::SocleReductionInjective => socle_reduction_injective(i),
        Suite::StronglyPureNormal => strongly_pure_normal(i),
        Suite::PureSmallKNormal => pure_small_k_normal(i),
        Suite::AffineSufficient => affine_sufficient(i),
        Suite::FieldRankNormal => field_rank_normal(i),
        Suite::NormalIdealNecessary => normal_ideal_necessary(i),
        Suite::GaloisPureStrong => galois_pure_strong(i),
        Suite::InvariantClosureAut => invariant_closure_aut(i),
        Suite::ExtensionNormalSubgroup => extension_normal_subgroup(i),
        Suite::CayleyAutProduct => cayley_aut_product(i),
        Suite::SchurMultipliers => schur_multipliers(i),
        Suite::CosetJoinNormalizer => coset_join_normalizer(i),
        Suite::ProductStabilizer => product_stabilizer(i),
        Suite::FactorScheme => factor_scheme(i),
        Suite::GaloisClassification => galois_classification(i),
    };
    match result {
        Ok(o) => o,
        Err(Error::CapExceeded { what, value, cap }) => {
            Outcome::NotApplicable(format!("{what} = {value} exceeds the cap {cap}"))
        }
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

/// Run the given suites on every subgroup of `R^×` (or on the listed ones).
/// Subgroups are processed in parallel; reports come back per suite in the
/// order given, results sorted by subgroup.
pub fn run_suites(
    suites: &[Suite],
    spec: &RingSpec,
    subgroups: Option<Vec<UnitSubgroup>>,
    options: &ClassifyOptions,
) -> Result<Vec<SuiteReport>> {
    let ring = Arc::new(spec.build()?);
    let s = Arc::new(RingStructure::new(&ring)?);
    let mut subgroups = match subgroups {
        Some(list) => list,
        None => enumerate_unit_subgroups(&ring, &s, options.subgroup_cap)?,
    };
    subgroups.sort();
    let small_units = sorted(
        s.teichmuller
            .iter()
            .flat_map(|&t| s.socle_units.iter().map(move |&u| (t, u)))
            .map(|(t, u)| ring.mul(t, u))
            .collect(),
    );
    let ctx = RingContext {
        ideals: enumerate_ideals(&ring, DEFAULT_IDEAL_LIMIT)?,
        ring,
        s,
        small_units,
    };
    let per_subgroup: Vec<Vec<Outcome>> = options
        .exec
        .map_slice(&subgroups, |k| {
            match CyclotomicScheme::new(ctx.ring.clone(), ctx.s.clone(), k.clone()) {
                Ok(cyc) => {
                    let instance = Instance {
                        ctx: &ctx,
                        cyc,
                        options,
                        purity: OnceLock::new(),
                        brute: OnceLock::new(),
                        mult: OnceLock::new(),
                    };
                    suites.iter().map(|&suite| run_one(suite, &instance)).collect()
                }
                Err(e) => vec![Outcome::Fail(e.to_string()); suites.len()],
            }
        });
    Ok(suites
        .iter()
        .enumerate()
        .map(|(si, suite)| SuiteReport {
            suite: suite.name().to_string(),
            ring: spec.to_string(),
            results: subgroups
                .iter()
                .zip(&per_subgroup)
                .map(|(k, outcomes)| CheckResult {
                    subgroup: k.elements().to_vec(),
                    outcome: outcomes[si].clone(),
                })
                .collect(),
        })
        .collect())
}
