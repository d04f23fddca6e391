//! Subgroups of the unit group and of finite abelian groups in general.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::ring::{Elem, FiniteRing, RingStructure};
use crate::{Error, Result};

/// Largest unit group whose subgroup lattice is enumerated.
pub const DEFAULT_SUBGROUP_CAP: usize = 256;

/// Cap on the number of subgroups found by a single enumeration.
const SUBGROUP_COUNT_LIMIT: usize = 200_000;

/// Every subgroup of the abelian group on `elements` with operation `op`,
/// sorted by (order, elements). `⟨S, g⟩ = S·⟨g⟩` since the group is abelian.
pub fn enumerate_abelian_subgroups(
    elements: &[usize],
    identity: usize,
    op: impl Fn(usize, usize) -> usize,
) -> Result<Vec<Vec<usize>>> {
    let cyclic = |g: usize| {
        let mut c = vec![identity];
        let mut x = g;
        while x != identity {
            c.push(x);
            x = op(x, g);
        }
        c
    };
    let cyclics: Vec<Vec<usize>> = elements.iter().map(|&g| cyclic(g)).collect();
    let join = |s: &[usize], c: &[usize]| {
        let mut v: Vec<usize> = s.iter().flat_map(|&a| c.iter().map(move |&b| (a, b))).map(|(a, b)| op(a, b)).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let start = vec![identity];
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for (i, &g) in elements.iter().enumerate() {
            if s.binary_search(&g).is_ok() {
                continue;
            }
            let t = join(&s, &cyclics[i]);
            if !seen.contains(&t) {
                if seen.len() >= SUBGROUP_COUNT_LIMIT {
                    return Err(Error::cap("subgroup count", seen.len() + 1, SUBGROUP_COUNT_LIMIT));
                }
                seen.insert(t.clone());
                queue.push_back(t);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out)
}

/// A subgroup `K ≤ R^×`, as a sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitSubgroup {
    elements: Vec<Elem>,
}

impl UnitSubgroup {
    /// Validate closure of an explicit element set.
    pub fn new(ring: &FiniteRing, elements: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let mut elements: Vec<Elem> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        let k = UnitSubgroup { elements };
        if k.elements.iter().any(|&x| x >= ring.size()) {
            return Err(Error::invalid("element index out of range"));
        }
        if !k.contains(ring.one()) {
            return Err(Error::invalid("subgroup must contain 1"));
        }
        for &a in &k.elements {
            for &b in &k.elements {
                if !k.contains(ring.mul(a, b)) {
                    return Err(Error::invalid(format!(
                        "set is not multiplicatively closed: {} · {} = {}",
                        ring.label(a),
                        ring.label(b),
                        ring.label(ring.mul(a, b))
                    )));
                }
            }
        }
        // a finite closed set of units containing 1 is a group
        if k.elements.iter().any(|&a| !ring.is_unit(a)) {
            return Err(Error::invalid("subgroup elements must be units"));
        }
        Ok(k)
    }

    /// The subgroup generated by the given units.
    pub fn generated(ring: &FiniteRing, gens: &[Elem]) -> Result<Self> {
        if let Some(&g) = gens.iter().find(|&&g| g >= ring.size() || !ring.is_unit(g)) {
            return Err(Error::invalid(format!("generator {g} is not a unit")));
        }
        let mut elements = vec![ring.one()];
        let mut i = 0;
        while i < elements.len() {
            for &g in gens {
                let y = ring.mul(elements[i], g);
                if !elements.contains(&y) {
                    elements.push(y);
                }
            }
            i += 1;
        }
        Self::new(ring, elements)
    }

    pub fn trivial(ring: &FiniteRing) -> Self {
        UnitSubgroup {
            elements: vec![ring.one()],
        }
    }

    pub fn all_units(structure: &RingStructure) -> Self {
        UnitSubgroup {
            elements: structure.units.clone(),
        }
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<Elem>) -> Self {
        UnitSubgroup { elements }
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, set: &[Elem]) -> bool {
        self.elements.iter().all(|x| set.binary_search(x).is_ok())
    }

    pub fn intersection(&self, other: &UnitSubgroup) -> UnitSubgroup {
        UnitSubgroup {
            elements: self.elements.iter().copied().filter(|&x| other.contains(x)).collect(),
        }
    }
}

/// All subgroups of `R^×`, sorted by (order, elements).
pub fn enumerate_unit_subgroups(ring: &FiniteRing, structure: &RingStructure, cap: usize) -> Result<Vec<UnitSubgroup>> {
    if structure.units.len() > cap {
        return Err(Error::cap("unit group order", structure.units.len(), cap));
    }
    Ok(
        enumerate_abelian_subgroups(&structure.units, ring.one(), |a, b| ring.mul(a, b))?
            .into_iter()
            .map(UnitSubgroup::from_sorted_unchecked)
            .collect(),
    )
}

/// Textual subgroup description: `all`, `1`, `gens:<e>,...`, `elems:<e>,...`,
/// optionally prefixed with `K=`. Elements are printed forms or indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupSpec {
    All,
    Trivial,
    Gens(Vec<String>),
    Elems(Vec<String>),
}

/// Split on commas that are not nested inside brackets or parentheses.
fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur.trim().to_string());
    out.retain(|t| !t.is_empty());
    out
}

impl FromStr for SubgroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut body = s.trim();
        let mut offset = s.len() - s.trim_start().len();
        if let Some(rest) = body.strip_prefix("K=") {
            body = rest;
            offset += 2;
        }
        let parse_list = |rest: &str, at: usize| -> Result<Vec<String>> {
            let items = split_top_level(rest);
            if items.is_empty() {
                return Err(Error::Parse {
                    position: at,
                    message: "empty element list".into(),
                });
            }
            Ok(items)
        };
        match body {
            "all" => Ok(SubgroupSpec::All),
            "1" => Ok(SubgroupSpec::Trivial),
            _ => {
                if let Some(rest) = body.strip_prefix("gens:") {
                    Ok(SubgroupSpec::Gens(parse_list(rest, offset + 5)?))
                } else if let Some(rest) = body.strip_prefix("elems:") {
                    Ok(SubgroupSpec::Elems(parse_list(rest, offset + 6)?))
                } else {
                    Err(Error::Parse {
                        position: offset,
                        message: "expected all, 1, gens:... or elems:...".into(),
                    })
                }
            }
        }
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupSpec::All => f.write_str("all"),
            SubgroupSpec::Trivial => f.write_str("1"),
            SubgroupSpec::Gens(v) => write!(f, "gens:{}", v.join(",")),
            SubgroupSpec::Elems(v) => write!(f, "elems:{}", v.join(",")),
        }
    }
}

impl SubgroupSpec {
    pub fn resolve(&self, ring: &FiniteRing, structure: &RingStructure) -> Result<UnitSubgroup> {
        let lookup = |items: &[String]| -> Result<Vec<Elem>> {
            items
                .iter()
                .map(|t| {
                    ring.parse_element(t)
                        .ok_or_else(|| Error::invalid(format!("unknown element '{t}'")))
                })
                .collect()
        };
        match self {
            SubgroupSpec::All => Ok(UnitSubgroup::all_units(structure)),
            SubgroupSpec::Trivial => Ok(UnitSubgroup::trivial(ring)),
            SubgroupSpec::Gens(items) => UnitSubgroup::generated(ring, &lookup(items)?),
            SubgroupSpec::Elems(items) => UnitSubgroup::new(ring, lookup(items)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn units(r: &FiniteRing) -> RingStructure {
        RingStructure::new(r).unwrap()
    }

    /// Independent oracle: every subset closed under the operation.
    fn subset_oracle(elements: &[usize], identity: usize, op: impl Fn(usize, usize) -> usize) -> usize {
        let n = elements.len();
        (0u32..1 << n)
            .filter(|mask| {
                let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| elements[i]).collect();
                set.contains(&identity) && set.iter().all(|&a| set.iter().all(|&b| set.contains(&op(a, b))))
            })
            .count()
    }

    #[test]
    fn subgroup_counts() {
        let f5 = FiniteRing::field(5).unwrap();
        let subs = enumerate_unit_subgroups(&f5, &units(&f5), 256).unwrap();
        let sets: Vec<&[Elem]> = subs.iter().map(|k| k.elements()).collect();
        assert_eq!(sets, vec![&[1][..], &[1, 4][..], &[1, 2, 3, 4][..]]);

        let z9 = FiniteRing::zmod(9).unwrap();
        assert_eq!(enumerate_unit_subgroups(&z9, &units(&z9), 256).unwrap().len(), 4);

        let p = FiniteRing::truncated_poly(2, 4).unwrap();
        let s = units(&p);
        let subs = enumerate_unit_subgroups(&p, &s, 256).unwrap();
        assert_eq!(subs.len(), 8);
        assert_eq!(subs.len(), subset_oracle(&s.units, p.one(), |a, b| p.mul(a, b)));
    }

    #[test]
    fn closed_under_intersection() {
        let r = FiniteRing::galois_ring(3, 2, 2).unwrap();
        let subs = enumerate_unit_subgroups(&r, &units(&r), 256).unwrap();
        for a in &subs {
            for b in &subs {
                assert!(subs.contains(&a.intersection(b)));
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let r = FiniteRing::field(27).unwrap();
        assert!(enumerate_unit_subgroups(&r, &units(&r), 10).is_err());
    }

    #[test]
    fn spec_parsing() {
        let r = FiniteRing::zmod(9).unwrap();
        let s = units(&r);
        let k = |t: &str| t.parse::<SubgroupSpec>().unwrap().resolve(&r, &s).unwrap();
        assert_eq!(k("K=gens:8").elements(), &[1, 8]);
        assert_eq!(k("elems:1,4,7").elements(), &[1, 4, 7]);
        assert_eq!(k("all").order(), 6);
        assert_eq!(k("1").elements(), &[1]);
        assert!("elems:1,4".parse::<SubgroupSpec>().unwrap().resolve(&r, &s).is_err());
        assert!("gens:3".parse::<SubgroupSpec>().unwrap().resolve(&r, &s).is_err());
        assert!("nope".parse::<SubgroupSpec>().is_err());
        assert!("gens:".parse::<SubgroupSpec>().is_err());

        let p = FiniteRing::truncated_poly(3, 2).unwrap();
        let sp = units(&p);
        let spec: SubgroupSpec = "gens:[1,1]".parse().unwrap();
        assert_eq!(spec, SubgroupSpec::Gens(vec!["[1,1]".into()]));
        assert_eq!(spec.resolve(&p, &sp).unwrap().order(), 3);
    }
}
