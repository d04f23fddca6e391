//! Ring constructors: `Z/n`, Galois rings, finite fields, truncated
//! polynomial rings and direct products, plus the local decomposition.

use std::sync::Arc;

use super::{Elem, FiniteRing, LocalFactor, RingSpec};
use crate::{Error, Result};

/// Default size cap for ring construction.
pub const DEFAULT_RING_CAP: usize = 2048;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `q = p^r` with `p` prime, `r ≥ 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut m = q;
    let mut r = 0;
    while m.is_multiple_of(p) {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn checked_size(base: u64, exp: u32, cap: usize) -> Result<usize> {
    let size = (base as u128).checked_pow(exp).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::cap("ring size", size, cap));
    }
    Ok(size as usize)
}

/// Polynomials over `Z/m`, coefficient vectors from low to high degree.
fn poly_rem_mod_p(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    // b monic
    let db = b.len() - 1;
    while a.len() > db {
        let lead = *a.last().unwrap() % p;
        let shift = a.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p * p - (lead * c) % p) % p;
            }
        }
        a.pop();
    }
    a
}

fn is_irreducible_mod_p(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for v in 0..count {
            let mut g: Vec<u64> = (0..d).map(|i| (v / p.pow(i as u32)) % p).collect();
            g.push(1);
            if poly_rem_mod_p(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Monic irreducible polynomial of degree `r` over `F_p` whose lower
/// coefficients `(c_0, …, c_{r-1})`, read as the base-`p` number
/// `Σ c_i p^i`, are smallest.
pub(crate) fn smallest_irreducible(p: u64, r: u32) -> Vec<u64> {
    let count = p.pow(r);
    for v in 0..count {
        let mut f: Vec<u64> = (0..r).map(|i| (v / p.pow(i)) % p).collect();
        f.push(1);
        if is_irreducible_mod_p(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn tuple_label(parts: impl IntoIterator<Item = String>) -> String {
    let v: Vec<String> = parts.into_iter().collect();
    format!("[{}]", v.join(","))
}

impl FiniteRing {
    /// `Z/n`. Composite moduli keep their prime-power decomposition.
    pub fn zmod(n: u64) -> Result<Self> {
        Self::zmod_with_cap(n, DEFAULT_RING_CAP)
    }

    pub fn zmod_with_cap(n: u64, cap: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("Z/n needs n ≥ 2"));
        }
        let size = checked_size(n, 1, cap)?;
        let add = (0..size * size).map(|i| (i / size + i % size) % size).collect();
        let mul = (0..size * size)
            .map(|i| ((i / size) * (i % size)) % size)
            .collect();
        let labels = (0..size).map(|i| i.to_string()).collect();
        let ring = FiniteRing::from_tables(RingSpec::Zmod(n), labels, add, mul, 0, 1)?;
        let parts = factorize(n);
        if parts.len() < 2 {
            return Ok(ring);
        }
        let mut factors = Vec::new();
        for &(p, e) in &parts {
            let pe = p.pow(e) as usize;
            let local = Arc::new(Self::galois_ring_with_cap(p, e, 1, cap)?);
            let projection = (0..size).map(|x| x % pe).collect();
            // CRT: the element ≡ y (mod p^e) and ≡ 0 modulo the cofactor.
            let embedding = (0..pe)
                .map(|y| {
                    (0..size)
                        .find(|&x| x % pe == y && parts.iter().all(|&(q, f)| q == p || x % q.pow(f) as usize == 0))
                        .expect("CRT lift exists")
                })
                .collect();
            factors.push(LocalFactor {
                ring: local,
                projection,
                embedding,
            });
        }
        Ok(ring.with_factors(factors))
    }

    /// The Galois ring `GR(p^d, r) = Z_{p^d}[X]/(f)` for the smallest basic
    /// irreducible `f` of degree `r`; elements are coefficient vectors read in
    /// radix `p^d`.
    pub fn galois_ring(p: u64, d: u32, r: u32) -> Result<Self> {
        Self::galois_ring_with_cap(p, d, r, DEFAULT_RING_CAP)
    }

    pub fn galois_ring_with_cap(p: u64, d: u32, r: u32, cap: usize) -> Result<Self> {
        Self::galois_like(p, d, r, cap, RingSpec::Galois { p, d, r })
    }

    /// `GF(q)`, realized as `GR(p, r)`.
    pub fn field(q: u64) -> Result<Self> {
        Self::field_with_cap(q, DEFAULT_RING_CAP)
    }

    pub fn field_with_cap(q: u64, cap: usize) -> Result<Self> {
        let (p, r) = prime_power(q).ok_or_else(|| Error::invalid(format!("{q} is not a prime power")))?;
        Self::galois_like(p, 1, r, cap, RingSpec::Field(q))
    }

    fn galois_like(p: u64, d: u32, r: u32, cap: usize, spec: RingSpec) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if d == 0 || r == 0 {
            return Err(Error::invalid("GR(p^d, r) needs d ≥ 1 and r ≥ 1"));
        }
        let m = checked_size(p, d, cap)? as u64;
        let size = checked_size(m, r, cap)?;
        let r = r as usize;
        let f = smallest_irreducible(p, r as u32);
        let coeffs: Vec<Vec<u64>> = (0..size)
            .map(|x| (0..r).map(|i| (x as u64 / m.pow(i as u32)) % m).collect())
            .collect();
        let encode = |c: &[u64]| -> Elem {
            c.iter().rev().fold(0u64, |acc, &ci| acc * m + ci) as Elem
        };
        let mut add = vec![0; size * size];
        let mut mul = vec![0; size * size];
        let mut buf = vec![0u64; 2 * r];
        for a in 0..size {
            for b in 0..size {
                let s: Vec<u64> = (0..r).map(|i| (coeffs[a][i] + coeffs[b][i]) % m).collect();
                add[a * size + b] = encode(&s);
                buf.iter_mut().for_each(|x| *x = 0);
                for i in 0..r {
                    for j in 0..r {
                        buf[i + j] = (buf[i + j] + coeffs[a][i] * coeffs[b][j]) % m;
                    }
                }
                // X^r = -Σ f_i X^i
                for k in (r..2 * r - 1).rev() {
                    let c = buf[k];
                    if c == 0 {
                        continue;
                    }
                    buf[k] = 0;
                    for i in 0..r {
                        buf[k - r + i] = (buf[k - r + i] + m * m - (c * f[i]) % m) % m;
                    }
                }
                mul[a * size + b] = encode(&buf[..r]);
            }
        }
        let labels = coeffs
            .iter()
            .map(|c| tuple_label(c.iter().map(|x| x.to_string())))
            .collect();
        FiniteRing::from_tables(spec, labels, add, mul, 0, 1)
    }

    /// `F_q[X]/(X^n)`.
    pub fn truncated_poly(q: u64, n: u32) -> Result<Self> {
        Self::truncated_poly_with_cap(q, n, DEFAULT_RING_CAP)
    }

    pub fn truncated_poly_with_cap(q: u64, n: u32, cap: usize) -> Result<Self> {
        if prime_power(q).is_none() {
            return Err(Error::invalid(format!("{q} is not a prime power")));
        }
        if n == 0 {
            return Err(Error::invalid("POLY(q, n) needs n ≥ 1"));
        }
        let size = checked_size(q, n, cap)?;
        let base = Self::field_with_cap(q, cap)?;
        let qs = q as usize;
        let n = n as usize;
        let coeffs: Vec<Vec<Elem>> = (0..size)
            .map(|x| (0..n).map(|i| (x / qs.pow(i as u32)) % qs).collect())
            .collect();
        let encode = |c: &[Elem]| -> Elem { c.iter().rev().fold(0, |acc, &ci| acc * qs + ci) };
        let mut add = vec![0; size * size];
        let mut mul = vec![0; size * size];
        let mut buf = vec![0; n];
        for a in 0..size {
            for b in 0..size {
                let s: Vec<Elem> = (0..n).map(|i| base.add(coeffs[a][i], coeffs[b][i])).collect();
                add[a * size + b] = encode(&s);
                buf.iter_mut().for_each(|x| *x = base.zero());
                for i in 0..n {
                    for j in 0..n - i {
                        let t = base.mul(coeffs[a][i], coeffs[b][j]);
                        buf[i + j] = base.add(buf[i + j], t);
                    }
                }
                mul[a * size + b] = encode(&buf);
            }
        }
        let prime_base = is_prime(q);
        let labels = coeffs
            .iter()
            .map(|c| {
                tuple_label(c.iter().map(|&x| {
                    if prime_base {
                        x.to_string()
                    } else {
                        base.label(x).to_string()
                    }
                }))
            })
            .collect();
        FiniteRing::from_tables(RingSpec::TruncatedPoly { q, n: n as u32 }, labels, add, mul, 0, 1)
    }

    /// Direct product; elements are tuples in mixed radix, first factor most
    /// significant.
    pub fn direct_product(rings: &[Arc<FiniteRing>]) -> Result<Self> {
        Self::direct_product_with_cap(rings, DEFAULT_RING_CAP)
    }

    pub fn direct_product_with_cap(rings: &[Arc<FiniteRing>], cap: usize) -> Result<Self> {
        if rings.is_empty() {
            return Err(Error::invalid("direct product of no rings"));
        }
        if rings.len() == 1 {
            return Ok((*rings[0]).clone());
        }
        let size = rings
            .iter()
            .try_fold(1u128, |acc, r| acc.checked_mul(r.size() as u128))
            .unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(Error::cap("ring size", size, cap));
        }
        let size = size as usize;
        let k = rings.len();
        let mut strides = vec![1usize; k];
        for i in (0..k - 1).rev() {
            strides[i] = strides[i + 1] * rings[i + 1].size();
        }
        let coord = |x: Elem, i: usize| (x / strides[i]) % rings[i].size();
        let encode = |f: &dyn Fn(usize) -> Elem| (0..k).map(|i| f(i) * strides[i]).sum::<Elem>();
        let mut add = vec![0; size * size];
        let mut mul = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                add[a * size + b] = encode(&|i| rings[i].add(coord(a, i), coord(b, i)));
                mul[a * size + b] = encode(&|i| rings[i].mul(coord(a, i), coord(b, i)));
            }
        }
        let labels = (0..size)
            .map(|x| {
                let parts: Vec<&str> = (0..k).map(|i| rings[i].label(coord(x, i))).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let zero = encode(&|i| rings[i].zero());
        let one = encode(&|i| rings[i].one());
        let spec = RingSpec::Product(rings.iter().map(|r| r.spec().clone()).collect());
        let ring = FiniteRing::from_tables(spec, labels, add, mul, zero, one)?;

        let mut factors = Vec::new();
        for (i, component) in rings.iter().enumerate() {
            for local in component.crt_decompose()? {
                let projection = (0..size).map(|x| local.projection[coord(x, i)]).collect();
                let embedding = local
                    .embedding
                    .iter()
                    .map(|&y| {
                        encode(&|j| if j == i { y } else { rings[j].zero() })
                    })
                    .collect();
                factors.push(LocalFactor {
                    ring: local.ring.clone(),
                    projection,
                    embedding,
                });
            }
        }
        Ok(ring.with_factors(factors))
    }

    /// Decompose into local rings. Uses the stored factorization when the
    /// ring was built by a product constructor, primitive idempotents
    /// otherwise. A local ring decomposes as itself.
    pub fn crt_decompose(&self) -> Result<Vec<LocalFactor>> {
        if let Some(f) = &self.factors {
            return Ok(f.clone());
        }
        let n = self.size();
        let idempotents: Vec<Elem> = (0..n)
            .filter(|&e| e != self.zero() && self.mul(e, e) == e)
            .collect();
        // primitive: no smaller nonzero idempotent below it
        let primitive: Vec<Elem> = idempotents
            .iter()
            .copied()
            .filter(|&e| {
                idempotents
                    .iter()
                    .all(|&f| f == e || self.mul(f, e) != f)
            })
            .collect();
        if primitive.len() == 1 {
            let id: Vec<Elem> = (0..n).collect();
            return Ok(vec![LocalFactor {
                ring: Arc::new(self.clone()),
                projection: id.clone(),
                embedding: id,
            }]);
        }
        let mut out = Vec::new();
        for (i, &e) in primitive.iter().enumerate() {
            let mut elems: Vec<Elem> = (0..n).map(|x| self.mul(e, x)).collect();
            elems.sort_unstable();
            elems.dedup();
            let index_of = |x: Elem| elems.binary_search(&x).expect("closed under the factor");
            let m = elems.len();
            let mut add = vec![0; m * m];
            let mut mul = vec![0; m * m];
            for a in 0..m {
                for b in 0..m {
                    add[a * m + b] = index_of(self.add(elems[a], elems[b]));
                    mul[a * m + b] = index_of(self.mul(elems[a], elems[b]));
                }
            }
            let labels = elems.iter().map(|&x| self.label(x).to_string()).collect();
            let spec = RingSpec::Derived(format!("{}[factor {}]", self.spec(), i));
            let ring = FiniteRing::from_tables(spec, labels, add, mul, index_of(self.zero()), index_of(e))?;
            out.push(LocalFactor {
                ring: Arc::new(ring),
                projection: (0..n).map(|x| index_of(self.mul(e, x))).collect(),
                embedding: elems,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_prime_powers() {
        assert!(is_prime(2) && is_prime(3) && is_prime(81_173));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible(5, 2), vec![2, 0, 1]);
        assert_eq!(smallest_irreducible(3, 3), vec![1, 2, 0, 1]);
        assert_eq!(smallest_irreducible(7, 1), vec![0, 1]);
    }

    #[test]
    fn constructor_errors() {
        assert!(FiniteRing::galois_ring(4, 1, 1).is_err());
        assert!(FiniteRing::galois_ring(3, 0, 1).is_err());
        assert!(FiniteRing::galois_ring(3, 1, 0).is_err());
        assert!(matches!(
            FiniteRing::galois_ring(3, 4, 2),
            Err(Error::CapExceeded { .. })
        ));
        assert!(FiniteRing::truncated_poly(6, 2).is_err());
        assert!(matches!(
            FiniteRing::truncated_poly(2, 12),
            Err(Error::CapExceeded { .. })
        ));
        assert!(FiniteRing::zmod(1).is_err());
        assert!(FiniteRing::field(10).is_err());
    }

    #[test]
    fn galois_ring_small_cases() {
        let z9 = FiniteRing::galois_ring(3, 2, 1).unwrap();
        assert_eq!(z9.size(), 9);
        assert_eq!(z9.mul(4, 7), 1);
        assert_eq!(z9.label(5), "[5]");
        let f9 = FiniteRing::galois_ring(3, 1, 2).unwrap();
        assert!(f9.is_field());
        // X^2 = -1 in F_3[X]/(X^2+1); X is index 3
        assert_eq!(f9.mul(3, 3), 2);
    }

    #[test]
    fn truncated_poly_labels_and_nilpotents() {
        let r = FiniteRing::truncated_poly(2, 4).unwrap();
        assert_eq!(r.size(), 16);
        assert_eq!(r.label(2), "[0,1,0,0]");
        assert_eq!(r.nilpotency_index(2), Some(4));
        let r4 = FiniteRing::truncated_poly(4, 2).unwrap();
        assert_eq!(r4.label(4), "[[0,0],[1,0]]");
    }

    #[test]
    fn idempotent_decomposition_matches_stored() {
        let z45 = FiniteRing::zmod(45).unwrap();
        let stored = z45.crt_decompose().unwrap();
        assert_eq!(stored.iter().map(|f| f.ring.size()).collect::<Vec<_>>(), vec![9, 5]);
        let mut bare = z45.clone();
        bare.factors = None;
        let derived = bare.crt_decompose().unwrap();
        let mut sizes: Vec<_> = derived.iter().map(|f| f.ring.size()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![5, 9]);
        for f in &derived {
            for y in f.ring.elements() {
                assert_eq!(f.projection[f.embedding[y]], y);
            }
        }
    }
}
