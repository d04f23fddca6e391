//! Finite commutative rings with identity, stored as dense operation tables.

mod automorphism;
mod construct;
mod ideal;
mod spec;
mod structure;

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

pub use automorphism::{find_ring_isomorphism, ring_automorphisms, ring_generators};
pub use construct::{is_prime, prime_power, DEFAULT_RING_CAP};
pub use ideal::{enumerate_ideals, minimal_ideals, quotient_ring, Ideal, QuotientMap, DEFAULT_IDEAL_LIMIT};
pub use spec::RingSpec;
pub use structure::RingStructure;

/// Index of a ring element, `0..ring.size()`.
pub type Elem = usize;

/// Largest ring that can be represented with the `u16` tables.
const TABLE_LIMIT: usize = 1 << 16;

/// Exhaustive axiom checks up to this size, sampled above.
const EXHAUSTIVE_AXIOM_LIMIT: usize = 256;
const SAMPLED_AXIOM_TRIPLES: usize = 200_000;

/// A finite commutative ring with identity.
///
/// Elements are the indices `0..n`; addition and multiplication are looked up
/// in `n × n` tables. Structured constructors keep a printable label per
/// element and, for products, the decomposition into local factors.
#[derive(Clone)]
pub struct FiniteRing {
    size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    zero: Elem,
    one: Elem,
    spec: RingSpec,
    labels: Vec<String>,
    factors: Option<Vec<LocalFactor>>,
}

/// One local factor `R_i` of `R = ∏ R_i` together with the coordinate maps.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub ring: Arc<FiniteRing>,
    /// `R → R_i`, the i-th coordinate.
    pub projection: Vec<Elem>,
    /// `R_i → R`, the element with coordinate `x` at `i` and zero elsewhere.
    pub embedding: Vec<Elem>,
}

impl LocalFactor {
    /// The idempotent of `R` that is the identity of this factor.
    pub fn idempotent(&self) -> Elem {
        self.embedding[self.ring.one()]
    }

    /// `φ_i(x)`: coordinate `x` at this factor and `1` everywhere else.
    pub fn unit_embedding(&self, parent: &FiniteRing, x: Elem) -> Elem {
        let e = self.idempotent();
        let complement = parent.sub(parent.one(), e);
        parent.add(self.embedding[x], complement)
    }
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("spec", &self.spec.to_string())
            .field("size", &self.size)
            .finish()
    }
}

impl FiniteRing {
    /// Build a ring from raw tables. The ring axioms are verified (exhaustively
    /// up to 256 elements, on a seeded sample above).
    pub fn from_tables(
        spec: RingSpec,
        labels: Vec<String>,
        add: Vec<Elem>,
        mul: Vec<Elem>,
        zero: Elem,
        one: Elem,
    ) -> Result<Self> {
        let ring = Self::from_tables_unchecked(spec, labels, add, mul, zero, one)?;
        ring.verify_axioms()?;
        Ok(ring)
    }

    pub(crate) fn from_tables_unchecked(
        spec: RingSpec,
        labels: Vec<String>,
        add: Vec<Elem>,
        mul: Vec<Elem>,
        zero: Elem,
        one: Elem,
    ) -> Result<Self> {
        let n = labels.len();
        if n < 2 {
            return Err(Error::invalid("a ring needs at least two elements (zero ≠ one)"));
        }
        if n > TABLE_LIMIT {
            return Err(Error::cap("ring size", n, TABLE_LIMIT));
        }
        if add.len() != n * n || mul.len() != n * n {
            return Err(Error::invalid("operation tables must be n × n"));
        }
        if zero >= n || one >= n || zero == one {
            return Err(Error::invalid("zero and one must be distinct elements"));
        }
        if add.iter().chain(mul.iter()).any(|&x| x >= n) {
            return Err(Error::invalid("table entry out of range"));
        }
        let add: Vec<u16> = add.into_iter().map(|x| x as u16).collect();
        let mul: Vec<u16> = mul.into_iter().map(|x| x as u16).collect();
        let mut neg = vec![u16::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if add[a * n + b] as usize == zero {
                    neg[a] = b as u16;
                    break;
                }
            }
            if neg[a] == u16::MAX {
                return Err(Error::invalid(format!("element {a} has no additive inverse")));
            }
        }
        Ok(FiniteRing {
            size: n,
            add,
            mul,
            neg,
            zero,
            one,
            spec,
            labels,
            factors: None,
        })
    }

    pub(crate) fn with_factors(mut self, factors: Vec<LocalFactor>) -> Self {
        self.factors = Some(factors);
        self
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        self.zero
    }

    #[inline]
    pub fn one(&self) -> Elem {
        self.one
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a * self.size + b] as Elem
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.size + b] as Elem
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a] as Elem
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn label(&self, x: Elem) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Look up an element by its printed form or by its decimal index.
    pub fn parse_element(&self, text: &str) -> Option<Elem> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(i) = self.labels.iter().position(|l| *l == t) {
            return Some(i);
        }
        if t.contains(['(', '[']) {
            // one-coefficient tuples may be written bare: "(1,2)" for "([1],[2])"
            let short = strip_singletons(&t);
            return self.labels.iter().position(|l| strip_singletons(l) == short);
        }
        t.parse::<usize>().ok().filter(|&i| i < self.size)
    }

    /// `a^e` with `a^0 = 1`.
    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `m · a` (repeated addition), `m` may be negative.
    pub fn scalar(&self, m: i64, a: Elem) -> Elem {
        let mut acc = self.zero;
        let mut base = if m < 0 { self.neg(a) } else { a };
        let mut e = m.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            e >>= 1;
        }
        acc
    }

    /// The image of the integer `m` in the ring.
    pub fn integer(&self, m: i64) -> Elem {
        self.scalar(m, self.one)
    }

    pub fn inverse(&self, a: Elem) -> Option<Elem> {
        (0..self.size).find(|&b| self.mul(a, b) == self.one)
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.inverse(a).is_some()
    }

    /// Additive order of `a`.
    pub fn additive_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.zero {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    /// Multiplicative order of a unit, `None` for non-units.
    pub fn multiplicative_order(&self, a: Elem) -> Option<usize> {
        if !self.is_unit(a) {
            return None;
        }
        let mut x = a;
        let mut k = 1;
        while x != self.one {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }

    /// Smallest `k ≥ 1` with `a^k = 0`, `None` if `a` is not nilpotent.
    pub fn nilpotency_index(&self, a: Elem) -> Option<usize> {
        let mut x = a;
        for k in 1..=self.size {
            if x == self.zero {
                return Some(k);
            }
            x = self.mul(x, a);
        }
        None
    }

    pub fn characteristic(&self) -> usize {
        self.additive_order(self.one)
    }

    /// Stored local factors, if the ring was built as a product.
    pub fn stored_factors(&self) -> Option<&[LocalFactor]> {
        self.factors.as_deref()
    }

    /// Check every ring axiom on all triples (`n ≤ 256`) or on a seeded sample.
    pub fn verify_axioms(&self) -> Result<()> {
        let n = self.size;
        let check = |a: Elem, b: Elem, c: Elem| -> Result<()> {
            if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                return Err(Error::invalid(format!("addition not associative at ({a},{b},{c})")));
            }
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::invalid(format!(
                    "multiplication not associative at ({a},{b},{c})"
                )));
            }
            if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                return Err(Error::invalid(format!("distributivity fails at ({a},{b},{c})")));
            }
            Ok(())
        };
        for a in 0..n {
            if self.add(a, self.zero) != a || self.mul(a, self.one) != a {
                return Err(Error::invalid(format!("identity law fails at {a}")));
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::invalid(format!("not commutative at ({a},{b})")));
                }
            }
        }
        if n <= EXHAUSTIVE_AXIOM_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001 ^ n as u64);
            for _ in 0..SAMPLED_AXIOM_TRIPLES {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    /// True iff the two rings have identical tables and distinguished elements.
    pub fn same_tables(&self, other: &FiniteRing) -> bool {
        self.size == other.size
            && self.zero == other.zero
            && self.one == other.one
            && self.add == other.add
            && self.mul == other.mul
    }

    /// Sorted list of the units.
    pub fn units(&self) -> Vec<Elem> {
        (0..self.size).filter(|&a| self.is_unit(a)).collect()
    }

    /// Local means the non-units form an ideal.
    pub fn is_local(&self) -> bool {
        let non_units: Vec<Elem> = (0..self.size).filter(|&a| !self.is_unit(a)).collect();
        non_units
            .iter()
            .all(|&a| non_units.iter().all(|&b| !self.is_unit(self.add(a, b))))
    }

    pub fn is_field(&self) -> bool {
        (0..self.size).all(|a| a == self.zero || self.is_unit(a))
    }
}

fn strip_singletons(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    let mut rest = label;
    while let Some(start) = rest.find('[') {
        out.push_str(&rest[..start]);
        let end = start + rest[start..].find(']').unwrap_or(rest.len() - start - 1);
        let inner = &rest[start + 1..end];
        if inner.contains(',') {
            out.push_str(&rest[start..=end]);
        } else {
            out.push_str(inner);
        }
        rest = &rest[(end + 1).min(rest.len())..];
    }
    out.push_str(rest);
    out
}
