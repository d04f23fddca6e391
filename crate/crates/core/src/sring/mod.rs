//! Schur rings over finite abelian groups and their Cayley schemes.

use std::sync::Arc;

use crate::exec::Execution;
use crate::perm::{enumerate_abelian_subgroups, Perm};
use crate::ring::{Elem, FiniteRing};
use crate::scheme::{
    automorphism_group, scheme_join, AutSearchOptions, AutomorphismGroup, CoherentConfiguration,
};
use crate::{Error, Result};

/// A finite abelian group on `0..m`, usually realized inside a ring:
/// `points[i]` is the ring element behind index `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    op: Vec<u32>,
    inverse: Vec<u32>,
    identity: usize,
    points: Vec<Elem>,
}

impl AbelianGroup {
    /// Validate an operation table.
    pub fn from_table(op: Vec<usize>, identity: usize, points: Vec<Elem>) -> Result<Self> {
        let m = points.len();
        if op.len() != m * m || identity >= m || op.iter().any(|&x| x >= m) {
            return Err(Error::invalid("malformed group table"));
        }
        let f = |a: usize, b: usize| op[a * m + b];
        let mut inverse = vec![u32::MAX; m];
        for a in 0..m {
            if f(a, identity) != a {
                return Err(Error::invalid("identity law fails"));
            }
            for b in 0..m {
                if f(a, b) != f(b, a) {
                    return Err(Error::invalid("group is not abelian"));
                }
                if f(a, b) == identity {
                    inverse[a] = b as u32;
                }
                for c in 0..m {
                    if f(f(a, b), c) != f(a, f(b, c)) {
                        return Err(Error::invalid("operation is not associative"));
                    }
                }
            }
            if inverse[a] == u32::MAX {
                return Err(Error::invalid("element without inverse"));
            }
        }
        Ok(AbelianGroup {
            op: op.into_iter().map(|x| x as u32).collect(),
            inverse,
            identity,
            points,
        })
    }

    fn from_table_unchecked(op: Vec<usize>, identity: usize, points: Vec<Elem>) -> Self {
        let m = points.len();
        let mut inverse = vec![0u32; m];
        for a in 0..m {
            inverse[a] = (0..m).find(|&b| op[a * m + b] == identity).unwrap() as u32;
        }
        AbelianGroup {
            op: op.into_iter().map(|x| x as u32).collect(),
            inverse,
            identity,
            points,
        }
    }

    /// `R⁺`; indices coincide with ring elements.
    pub fn additive(ring: &FiniteRing) -> Self {
        let n = ring.size();
        let op = (0..n * n).map(|i| ring.add(i / n, i % n)).collect();
        Self::from_table_unchecked(op, ring.zero(), ring.elements().collect())
    }

    /// A multiplicative group of units given as a sorted list; index `i`
    /// stands for `units[i]`.
    pub fn multiplicative(ring: &FiniteRing, units: &[Elem]) -> Result<Self> {
        let m = units.len();
        let index = |x: Elem| units.binary_search(&x).ok();
        let mut op = Vec::with_capacity(m * m);
        for &a in units {
            for &b in units {
                op.push(index(ring.mul(a, b)).ok_or_else(|| Error::invalid("unit set not closed"))?);
            }
        }
        let identity = index(ring.one()).ok_or_else(|| Error::invalid("unit set lacks 1"))?;
        Ok(Self::from_table_unchecked(op, identity, units.to_vec()))
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.op[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn pow(&self, a: usize, m: u64) -> usize {
        (0..m).fold(self.identity, |acc, _| self.op(acc, a))
    }

    pub fn points(&self) -> &[Elem] {
        &self.points
    }

    /// Index of a ring element, if it belongs to the group.
    pub fn index_of(&self, point: Elem) -> Option<usize> {
        self.points.iter().position(|&p| p == point)
    }

    /// Right multiplication by `g` as a permutation of the group.
    pub fn right_multiplication(&self, g: usize) -> Perm {
        Perm::from_images((0..self.order()).map(|x| self.op(x, g)).collect()).expect("group translation")
    }

    /// The subgroup on `elements` (sorted indices), relabelled; `points`
    /// are inherited.
    pub fn subgroup(&self, elements: &[usize]) -> Result<AbelianGroup> {
        let m = elements.len();
        let index = |x: usize| elements.binary_search(&x).ok();
        let mut op = Vec::with_capacity(m * m);
        for &a in elements {
            for &b in elements {
                op.push(index(self.op(a, b)).ok_or_else(|| Error::invalid("not a subgroup"))?);
            }
        }
        let identity = index(self.identity).ok_or_else(|| Error::invalid("not a subgroup"))?;
        Ok(Self::from_table_unchecked(
            op,
            identity,
            elements.iter().map(|&i| self.points[i]).collect(),
        ))
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        s.binary_search(&self.identity).is_ok()
            && s.iter().all(|&a| s.iter().all(|&b| s.binary_search(&self.op(a, b)).is_ok()))
    }

    /// Smallest subgroup containing `set`.
    pub fn generated(&self, set: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order()];
        member[self.identity] = true;
        let mut elems = vec![self.identity];
        let mut i = 0;
        while i < elems.len() {
            for &g in set {
                let y = self.op(elems[i], g);
                if !member[y] {
                    member[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }

    pub fn all_subgroups(&self) -> Result<Vec<Vec<usize>>> {
        let all: Vec<usize> = (0..self.order()).collect();
        enumerate_abelian_subgroups(&all, self.identity, |a, b| self.op(a, b))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A Schur ring: a partition of the group into basic sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SRing {
    group: Arc<AbelianGroup>,
    /// Sorted sets, sorted lexicographically.
    basic_sets: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl SRing {
    /// Validate a partition: `{e}` is a basic set, basic sets are closed
    /// under inversion, and the Cayley scheme is coherent.
    pub fn from_partition(group: Arc<AbelianGroup>, sets: Vec<Vec<usize>>) -> Result<Self> {
        let s = Self::from_partition_unchecked(group, sets)?;
        let e = s.group.identity();
        if s.basic_set_of(e) != [e] {
            return Err(Error::invalid("{e} is not a basic set"));
        }
        for x in &s.basic_sets {
            let mut inv: Vec<usize> = x.iter().map(|&a| s.group.inv(a)).collect();
            inv.sort_unstable();
            if !s.is_basic_set(&inv) {
                return Err(Error::invalid("basic sets are not closed under inversion"));
            }
        }
        s.to_cayley().verify().map_err(Error::NotAScheme)?;
        Ok(s)
    }

    fn from_partition_unchecked(group: Arc<AbelianGroup>, sets: Vec<Vec<usize>>) -> Result<Self> {
        let m = group.order();
        let mut class_of = vec![usize::MAX; m];
        let mut basic_sets: Vec<Vec<usize>> = sets
            .into_iter()
            .map(|mut x| {
                x.sort_unstable();
                x
            })
            .collect();
        basic_sets.sort();
        for (i, x) in basic_sets.iter().enumerate() {
            if x.is_empty() {
                return Err(Error::invalid("empty basic set"));
            }
            for &a in x {
                if a >= m || class_of[a] != usize::MAX {
                    return Err(Error::invalid("basic sets do not partition the group"));
                }
                class_of[a] = i;
            }
        }
        if class_of.contains(&usize::MAX) {
            return Err(Error::invalid("basic sets do not cover the group"));
        }
        Ok(SRing {
            group,
            basic_sets,
            class_of,
        })
    }

    /// All singletons.
    pub fn trivial(group: Arc<AbelianGroup>) -> Self {
        let sets = (0..group.order()).map(|x| vec![x]).collect();
        Self::from_partition_unchecked(group, sets).expect("singletons partition the group")
    }

    /// `{e}` and the rest.
    pub fn rank_two(group: Arc<AbelianGroup>) -> Self {
        let e = group.identity();
        let rest: Vec<usize> = (0..group.order()).filter(|&x| x != e).collect();
        let sets = if rest.is_empty() { vec![vec![e]] } else { vec![vec![e], rest] };
        Self::from_partition_unchecked(group, sets).expect("valid partition")
    }

    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn basic_sets(&self) -> &[Vec<usize>] {
        &self.basic_sets
    }

    pub fn rank(&self) -> usize {
        self.basic_sets.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank() == self.group.order()
    }

    pub fn basic_set_of(&self, x: usize) -> &[usize] {
        &self.basic_sets[self.class_of[x]]
    }

    pub fn is_basic_set(&self, set: &[usize]) -> bool {
        !set.is_empty() && self.basic_set_of(set[0]) == set
    }

    /// Membership in `S*`: a union of basic sets, the empty union included.
    pub fn is_union_of_basic_sets(&self, set: &[usize]) -> bool {
        let mut s = set.to_vec();
        s.sort_unstable();
        s.dedup();
        s.iter()
            .all(|&x| self.basic_set_of(x).iter().all(|y| s.binary_search(y).is_ok()))
    }

    pub fn is_subgroup_in(&self, set: &[usize]) -> bool {
        self.group.is_subgroup(set) && self.is_union_of_basic_sets(set)
    }

    /// The Cayley scheme: `(g, x g)` has the color of the basic set of `x`.
    pub fn to_cayley(&self) -> CoherentConfiguration {
        let m = self.group.order();
        let colors: Vec<u32> = (0..m * m)
            .map(|i| {
                let (g, h) = (i / m, i % m);
                self.class_of[self.group.op(h, self.group.inv(g))] as u32
            })
            .collect();
        CoherentConfiguration::from_colors_unchecked(m, &colors)
    }

    /// Inverse of [`to_cayley`](Self::to_cayley); the scheme must be
    /// invariant under right translations.
    pub fn from_cayley(c: &CoherentConfiguration, group: Arc<AbelianGroup>) -> Result<Self> {
        let m = group.order();
        if c.degree() != m {
            return Err(Error::invalid("degree mismatch"));
        }
        let mut color_of_diff = vec![u32::MAX; m];
        for g in 0..m {
            for h in 0..m {
                let d = group.op(h, group.inv(g));
                let col = c.color(g, h);
                if color_of_diff[d] == u32::MAX {
                    color_of_diff[d] = col;
                } else if color_of_diff[d] != col {
                    return Err(Error::precondition("scheme is not invariant under right translations"));
                }
            }
        }
        let mut sets: Vec<Vec<usize>> = vec![Vec::new(); c.rank()];
        for (d, &col) in color_of_diff.iter().enumerate() {
            sets[col as usize].push(d);
        }
        sets.retain(|s| !s.is_empty());
        Self::from_partition_unchecked(group, sets)
    }

    /// `ℋ(A)`: the subgroups that are unions of basic sets, sorted by
    /// (order, elements).
    pub fn a_subgroups(&self) -> Vec<Vec<usize>> {
        let e = self.group.identity();
        let close = |start: Vec<usize>| -> Vec<usize> {
            let mut cur = start;
            loop {
                let gen = self.group.generated(&cur);
                let mut widened: Vec<usize> = gen.iter().flat_map(|&x| self.basic_set_of(x).to_vec()).collect();
                widened.sort_unstable();
                widened.dedup();
                if widened == gen {
                    return gen;
                }
                cur = widened;
            }
        };
        let mut seen = std::collections::HashSet::new();
        let start = vec![e];
        seen.insert(start.clone());
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for x in &self.basic_sets {
                if s.binary_search(&x[0]).is_ok() {
                    continue;
                }
                let mut u = s.clone();
                u.extend_from_slice(x);
                let h = close(u);
                if seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    /// `X^{(m)} = {x^m : x ∈ X}`, for `m` coprime to the group order.
    pub fn schur_power_coprime(&self, set: &[usize], m: u64) -> Result<Vec<usize>> {
        if gcd(m, self.group.order() as u64) != 1 {
            return Err(Error::precondition(format!("{m} is not coprime to the group order")));
        }
        let mut v: Vec<usize> = set.iter().map(|&x| self.group.pow(x, m)).collect();
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }

    /// `X^{[p]} = {x^p : x ∈ X, |xH ∩ X| ≢ 0 mod p}` with `H` the elements
    /// of order dividing `p`.
    pub fn schur_power_p(&self, set: &[usize], p: u64) -> Result<Vec<usize>> {
        let order = self.group.order() as u64;
        if !crate::ring::is_prime(p) || !order.is_multiple_of(p) {
            return Err(Error::precondition(format!("{p} is not a prime divisor of the group order")));
        }
        let g = &self.group;
        let torsion: Vec<usize> = (0..g.order()).filter(|&h| g.pow(h, p) == g.identity()).collect();
        let mut in_set = vec![false; g.order()];
        set.iter().for_each(|&x| in_set[x] = true);
        let mut v: Vec<usize> = set
            .iter()
            .filter(|&&x| !(torsion.iter().filter(|&&h| in_set[g.op(x, h)]).count() as u64).is_multiple_of(p))
            .map(|&x| g.pow(x, p))
            .collect();
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }

    /// Check both multiplier statements on every basic set: `X^{(m)}` is a
    /// basic set for all `m` coprime to the order, and `X^{[p]}` is in `S*`
    /// for every prime divisor `p`.
    pub fn verify_schur_multipliers(&self) -> Result<()> {
        let order = self.group.order() as u64;
        let primes: Vec<u64> = (2..=order).filter(|&p| order.is_multiple_of(p) && crate::ring::is_prime(p)).collect();
        for x in &self.basic_sets {
            for m in (1..order.max(2)).filter(|&m| gcd(m, order) == 1) {
                let y = self.schur_power_coprime(x, m)?;
                if !self.is_basic_set(&y) {
                    return Err(Error::internal(format!("X^({m}) of {x:?} is not a basic set")));
                }
            }
            for &p in &primes {
                let y = self.schur_power_p(x, p)?;
                if !self.is_union_of_basic_sets(&y) {
                    return Err(Error::internal(format!("X^[{p}] of {x:?} is not in S*")));
                }
            }
        }
        Ok(())
    }

    /// `A_H`, over the subgroup `H` relabelled by position.
    pub fn restriction(&self, subgroup: &[usize]) -> Result<SRing> {
        let mut h = subgroup.to_vec();
        h.sort_unstable();
        h.dedup();
        if !self.is_subgroup_in(&h) {
            return Err(Error::precondition("not an A-subgroup"));
        }
        let group = Arc::new(self.group.subgroup(&h)?);
        let sets = self
            .basic_sets
            .iter()
            .filter(|x| h.binary_search(&x[0]).is_ok())
            .map(|x| x.iter().map(|a| h.binary_search(a).unwrap()).collect())
            .collect();
        Self::from_partition_unchecked(group, sets)
    }

    /// The smallest S-ring containing `A` and the given subsets.
    pub fn join(&self, extra: &[Vec<usize>], exec: Execution) -> Result<SRing> {
        let m = self.group.order();
        let relations: Vec<Vec<bool>> = extra
            .iter()
            .map(|x| {
                let mut in_x = vec![false; m];
                x.iter().for_each(|&a| in_x[a] = true);
                (0..m * m)
                    .map(|i| in_x[self.group.op(i % m, self.group.inv(i / m))])
                    .collect()
            })
            .collect();
        let joined = scheme_join(&self.to_cayley(), &relations, exec);
        Self::from_cayley(&joined, self.group.clone())
    }

    /// `Aut(A) = Aut(C)_e` for the Cayley scheme `C`.
    pub fn automorphisms(&self) -> Result<AutomorphismGroup> {
        let e = self.group.identity();
        let g = automorphism_group(&self.to_cayley(), &AutSearchOptions::with_base_prefix(&[e]))?;
        g.pointwise_stabilizer(&[e])
            .ok_or_else(|| Error::internal("stabilizer of the identity not on the base"))
    }

    /// Right translations `G_right` as permutations.
    pub fn right_translations(&self) -> Vec<Perm> {
        (0..self.group.order()).map(|g| self.group.right_multiplication(g)).collect()
    }

    /// One line per basic set, element indices sorted, sets sorted.
    pub fn dump(&self) -> String {
        self.basic_sets
            .iter()
            .map(|x| x.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ") + "\n")
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::PermGroup;
    use crate::scheme::automorphism_group;

    fn z9_group() -> Arc<AbelianGroup> {
        Arc::new(AbelianGroup::additive(&FiniteRing::zmod(9).unwrap()))
    }

    fn z9_plus_minus() -> SRing {
        SRing::from_partition(z9_group(), vec![vec![0], vec![1, 8], vec![2, 7], vec![3, 6], vec![4, 5]]).unwrap()
    }

    #[test]
    fn cayley_round_trip() {
        let a = z9_plus_minus();
        let c = a.to_cayley();
        assert_eq!(c.rank(), 5);
        assert!(c.verify().is_ok());
        assert_eq!(SRing::from_cayley(&c, z9_group()).unwrap(), a);
        let t = SRing::trivial(z9_group());
        assert_eq!(t.to_cayley().rank(), 9);
        assert_eq!(SRing::rank_two(z9_group()).to_cayley().rank(), 2);
        assert!(SRing::from_cayley(&crate::scheme::CoherentConfiguration::discrete(9), z9_group()).is_err());
    }

    #[test]
    fn rejects_bad_partitions() {
        let g = z9_group();
        assert!(SRing::from_partition(g.clone(), vec![vec![0, 1], (2..9).collect()]).is_err());
        assert!(SRing::from_partition(g.clone(), vec![vec![0], vec![1], (2..9).collect()]).is_err());
        // {1,8},{2,7,3,6,4,5} fails the coherence check
        assert!(SRing::from_partition(g, vec![vec![0], vec![1, 8], vec![2, 3, 4, 5, 6, 7]]).is_err());
    }

    #[test]
    fn a_subgroups_cover_ideals() {
        let a = z9_plus_minus();
        assert_eq!(a.a_subgroups(), vec![vec![0], vec![0, 3, 6], (0..9).collect()]);
        let t = SRing::trivial(z9_group());
        assert_eq!(t.a_subgroups(), z9_group().all_subgroups().unwrap());
    }

    #[test]
    fn schur_multipliers() {
        let a = z9_plus_minus();
        assert_eq!(a.schur_power_coprime(&[1, 8], 2).unwrap(), vec![2, 7]);
        assert_eq!(a.schur_power_coprime(&[0], 5).unwrap(), vec![0]);
        assert!(a.schur_power_coprime(&[1, 8], 3).is_err());
        a.verify_schur_multipliers().unwrap();
        let b = SRing::from_partition(
            z9_group(),
            vec![vec![0], vec![3], vec![6], vec![1, 4, 7], vec![2, 5, 8]],
        )
        .unwrap();
        assert!(b.schur_power_p(&[1, 4, 7], 3).unwrap().is_empty());
        assert!(b.schur_power_p(&[1], 2).is_err());
        b.verify_schur_multipliers().unwrap();
    }

    #[test]
    fn restriction_and_join() {
        let a = z9_plus_minus();
        let r = a.restriction(&[0, 3, 6]).unwrap();
        assert_eq!(r.basic_sets(), &[vec![0], vec![1, 2]]);
        assert!(a.restriction(&[0, 1]).is_err());
        let singletons: Vec<Vec<usize>> = (0..9).map(|x| vec![x]).collect();
        assert!(a.join(&singletons, Execution::Sequential).unwrap().is_trivial());
        let j = a.join(&[vec![1]], Execution::Parallel).unwrap();
        assert!(j.is_trivial());
    }

    #[test]
    fn automorphisms_times_translations() {
        let a = z9_plus_minus();
        let aut_a = a.automorphisms().unwrap();
        assert_eq!(aut_a.order_u128(), Some(2));
        let c = automorphism_group(&a.to_cayley(), &AutSearchOptions::default()).unwrap();
        let right = PermGroup::generate(9, &a.right_translations(), 100).unwrap();
        assert_eq!(c.order_u128(), Some(2 * right.order() as u128));
    }
}
