//! Point extensions, restrictions, quotients, joins and invariant closures.

use std::collections::HashMap;

use super::{wl_refine, CoherentConfiguration, EquivalenceRelation};
use crate::exec::Execution;
use crate::perm::Perm;
use crate::{Error, Result};

/// `C_{v_1,…,v_s}`: the closure of `C` with each `Δ({v_i})` added.
pub fn point_extension(c: &CoherentConfiguration, points: &[usize], exec: Execution) -> Result<CoherentConfiguration> {
    let n = c.degree();
    if let Some(&p) = points.iter().find(|&&p| p >= n) {
        return Err(Error::invalid(format!("point {p} out of range")));
    }
    if points.is_empty() {
        return Ok(c.clone());
    }
    let k = c.rank() as u32;
    let mut initial = c.colors().to_vec();
    for (i, &p) in points.iter().enumerate() {
        initial[p * n + p] = k + i as u32;
    }
    Ok(wl_refine(n, &initial, exec))
}

/// Closure of `C` together with extra relations, each given as a membership
/// predicate on ordered pairs.
pub fn scheme_join(c: &CoherentConfiguration, extra: &[Vec<bool>], exec: Execution) -> CoherentConfiguration {
    let n = c.degree();
    let mut pattern: HashMap<(u32, Vec<bool>), u32> = HashMap::new();
    let initial: Vec<u32> = (0..n * n)
        .map(|i| {
            let key = (c.colors()[i], extra.iter().map(|r| r[i]).collect());
            let next = pattern.len() as u32;
            *pattern.entry(key).or_insert(next)
        })
        .collect();
    wl_refine(n, &initial, exec)
}

/// `C_U`: the scheme induced on `points`, which must form a union of fibers.
/// Points are relabelled by their position in the sorted list.
pub fn restriction(c: &CoherentConfiguration, points: &[usize]) -> Result<CoherentConfiguration> {
    let n = c.degree();
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() || sorted.iter().any(|&p| p >= n) {
        return Err(Error::invalid("restriction needs a nonempty set of valid points"));
    }
    let mut inside = vec![false; n];
    sorted.iter().for_each(|&p| inside[p] = true);
    let mut fiber_state: HashMap<u32, bool> = HashMap::new();
    for x in 0..n {
        let state = fiber_state.entry(c.color(x, x)).or_insert(inside[x]);
        if *state != inside[x] {
            return Err(Error::precondition("the diagonal of the subset is not a relation of the scheme"));
        }
    }
    let m = sorted.len();
    let colors: Vec<u32> = (0..m * m).map(|i| c.color(sorted[i / m], sorted[i % m])).collect();
    Ok(CoherentConfiguration::from_colors_unchecked(m, &colors))
}

/// `C_{V/E}`: the color of `(X, Y)` is the set of colors meeting `X × Y`.
/// Classes are numbered as in `E`.
pub fn quotient(c: &CoherentConfiguration, e: &EquivalenceRelation) -> Result<CoherentConfiguration> {
    let n = c.degree();
    if e.degree() != n {
        return Err(Error::invalid("equivalence degree mismatch"));
    }
    if !c.is_union_of_colors(|x, y| e.related(x, y)) {
        return Err(Error::precondition("equivalence relation is not a relation of the scheme"));
    }
    let m = e.class_count();
    let mut sets: Vec<Vec<u32>> = vec![Vec::new(); m * m];
    for x in 0..n {
        for y in 0..n {
            sets[e.class_of(x) * m + e.class_of(y)].push(c.color(x, y));
        }
    }
    let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let colors: Vec<u32> = sets
        .into_iter()
        .map(|mut s| {
            s.sort_unstable();
            s.dedup();
            let next = ids.len() as u32;
            *ids.entry(s).or_insert(next)
        })
        .collect();
    Ok(CoherentConfiguration::from_colors_unchecked(m, &colors))
}

/// `C^G`: merge the colors of `C` along the orbits of `G` (given by
/// generators) on colors. Every generator must be an isomorphism of `C`.
pub fn invariant_closure(c: &CoherentConfiguration, generators: &[Perm]) -> Result<CoherentConfiguration> {
    let k = c.rank();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in generators {
        let map = c
            .induced_color_map(g)
            .ok_or_else(|| Error::precondition("group element is not an isomorphism of the scheme"))?;
        for (from, &to) in map.iter().enumerate() {
            let a = find(&mut parent, from);
            let b = find(&mut parent, to as usize);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<u32> = (0..k).map(|x| find(&mut parent, x) as u32).collect();
    let colors: Vec<u32> = c.colors().iter().map(|&x| roots[x as usize]).collect();
    Ok(CoherentConfiguration::from_colors_unchecked(c.degree(), &colors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::PermGroup;
    use crate::scheme::wl_closure;

    fn z9_cyc(orbit_of: impl Fn(usize) -> u32) -> CoherentConfiguration {
        let colors: Vec<u32> = (0..81).map(|i| orbit_of((i % 9 + 9 - i / 9) % 9)).collect();
        CoherentConfiguration::from_colors(9, &colors).unwrap()
    }

    fn plus_minus() -> CoherentConfiguration {
        z9_cyc(|d| [0, 1, 2, 3, 4, 4, 3, 2, 1][d])
    }

    #[test]
    fn extension_of_rank_two() {
        let c = CoherentConfiguration::trivial(4);
        let e = point_extension(&c, &[2], Execution::Sequential).unwrap();
        assert_eq!(e.rank(), 5);
        assert_eq!(point_extension(&c, &[], Execution::Sequential).unwrap(), c);
        assert!(point_extension(&c, &[4], Execution::Sequential).is_err());
    }

    #[test]
    fn quotient_by_ideal_classes() {
        let e = EquivalenceRelation::from_labels(&(0..9).map(|x| x % 3).collect::<Vec<_>>());
        let q = quotient(&plus_minus(), &e).unwrap();
        // Cyc({1,2}, Z_3): the residues of ±1 fill F_3^×
        assert_eq!((q.degree(), q.rank()), (3, 2));
        assert!(q.verify().is_ok());
        let bad = EquivalenceRelation::from_labels(&[0, 0, 1, 1, 2, 2, 3, 3, 4]);
        assert!(quotient(&plus_minus(), &bad).is_err());
    }

    #[test]
    fn restriction_cases() {
        let c = plus_minus();
        let all: Vec<usize> = (0..9).collect();
        assert_eq!(restriction(&c, &all).unwrap(), c);
        assert!(restriction(&c, &[0, 1]).is_err());
        let c0 = point_extension(&c, &[0], Execution::Sequential).unwrap();
        let r = restriction(&c0, &[1, 2, 4, 5, 7, 8]).unwrap();
        assert_eq!(r.degree(), 6);
        assert!(r.verify().is_ok());
    }

    #[test]
    fn invariant_closure_of_discrete_is_two_orbits() {
        let rot = Perm::from_images((0..9).map(|x| (x + 1) % 9).collect()).unwrap();
        let neg = Perm::from_images((0..9).map(|x| (9 - x) % 9).collect()).unwrap();
        let g = PermGroup::generate(9, &[rot.clone(), neg.clone()], 100).unwrap();
        let closed = invariant_closure(&CoherentConfiguration::discrete(9), &[rot, neg]).unwrap();
        assert_eq!(closed, CoherentConfiguration::from_colors_unchecked(9, &g.two_orbits()));
        assert_eq!(closed, plus_minus());
        assert_eq!(invariant_closure(&plus_minus(), &[]).unwrap(), plus_minus());
        let swap = Perm::from_images(vec![1, 0, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert!(invariant_closure(&plus_minus(), &[swap]).is_err());
    }

    #[test]
    fn join_refines_both() {
        let c = plus_minus();
        let extra: Vec<bool> = (0..81).map(|i| (i / 9 + 1) % 9 == i % 9).collect();
        let j = scheme_join(&c, std::slice::from_ref(&extra), Execution::Sequential);
        assert!(j.refines(&c));
        assert_eq!(j, wl_closure(9, &[extra], Execution::Sequential));
    }
}
