//! Coherent configurations (schemes) on `0..n`, stored as a color matrix.

mod aut;
mod ops;
mod wl;

use std::fmt;

use crate::exec::Execution;
use crate::perm::Perm;
use crate::{Error, Result};

pub use aut::{automorphism_group, AutSearchOptions, AutomorphismGroup, DEFAULT_AUT_DEGREE_CAP};
pub use ops::{invariant_closure, point_extension, quotient, restriction, scheme_join};
pub use wl::{wl_closure, wl_refine};

/// A color matrix on `V × V`. When built through the checked constructors it
/// is a coherent configuration; raw matrices are representable so that
/// [`verify_scheme_axioms`] can report what is wrong with them.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoherentConfiguration {
    degree: usize,
    colors: Vec<u32>,
    rank: usize,
}

impl fmt::Debug for CoherentConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoherentConfiguration(n={}, rank={})", self.degree, self.rank)
    }
}

/// The first scheme axiom found to fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeViolation {
    Malformed(String),
    UnusedColor(u32),
    /// A color meets both the diagonal and its complement.
    MixedDiagonal { color: u32 },
    /// The transpose of color `color` is not a single color.
    Transpose { color: u32, pair: (usize, usize) },
    /// `|{v : c(u,v) = r, c(v,w) = s}|` differs between two pairs of color `t`.
    IntersectionNumber {
        colors: (u32, u32, u32),
        pair: (usize, usize),
        reference: (usize, usize),
        found: usize,
        expected: usize,
    },
}

impl fmt::Display for SchemeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeViolation::Malformed(m) => write!(f, "malformed color matrix: {m}"),
            SchemeViolation::UnusedColor(c) => write!(f, "color {c} is never used"),
            SchemeViolation::MixedDiagonal { color } => {
                write!(f, "color {color} meets the diagonal and its complement")
            }
            SchemeViolation::Transpose { color, pair } => {
                write!(f, "transpose of color {color} is not a color (at {pair:?})")
            }
            SchemeViolation::IntersectionNumber {
                colors,
                pair,
                reference,
                found,
                expected,
            } => write!(
                f,
                "intersection number for colors {colors:?} is {found} at {pair:?} but {expected} at {reference:?}"
            ),
        }
    }
}

/// Renumber colors canonically: diagonal colors first, each group ordered by
/// first occurrence in row-major order. Returns the new matrix and rank.
pub(crate) fn canonicalize(n: usize, raw: &[u32]) -> (Vec<u32>, usize) {
    let max = raw.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut map = vec![u32::MAX; max];
    let mut next = 0u32;
    for x in 0..n {
        let c = raw[x * n + x] as usize;
        if map[c] == u32::MAX {
            map[c] = next;
            next += 1;
        }
    }
    for &c in raw {
        if map[c as usize] == u32::MAX {
            map[c as usize] = next;
            next += 1;
        }
    }
    (raw.iter().map(|&c| map[c as usize]).collect(), next as usize)
}

/// Check the scheme axioms on a raw color matrix with colors `0..k`.
pub fn verify_scheme_axioms(n: usize, colors: &[u32], exec: Execution) -> Result<(), SchemeViolation> {
    if n == 0 {
        return Err(SchemeViolation::Malformed("empty point set".into()));
    }
    if colors.len() != n * n {
        return Err(SchemeViolation::Malformed(format!(
            "expected {} entries, found {}",
            n * n,
            colors.len()
        )));
    }
    let k = colors.iter().copied().max().unwrap() as usize + 1;
    let mut used = vec![false; k];
    let mut on_diag = vec![false; k];
    let mut off_diag = vec![false; k];
    for x in 0..n {
        for y in 0..n {
            let c = colors[x * n + y] as usize;
            used[c] = true;
            if x == y {
                on_diag[c] = true;
            } else {
                off_diag[c] = true;
            }
        }
    }
    if let Some(c) = used.iter().position(|&u| !u) {
        return Err(SchemeViolation::UnusedColor(c as u32));
    }
    if let Some(c) = (0..k).find(|&c| on_diag[c] && off_diag[c]) {
        return Err(SchemeViolation::MixedDiagonal { color: c as u32 });
    }
    let mut transpose = vec![u32::MAX; k];
    for x in 0..n {
        for y in 0..n {
            let c = colors[x * n + y] as usize;
            let t = colors[y * n + x];
            if transpose[c] == u32::MAX {
                transpose[c] = t;
            } else if transpose[c] != t {
                return Err(SchemeViolation::Transpose {
                    color: c as u32,
                    pair: (x, y),
                });
            }
        }
    }

    // For each color, the sorted list of (c(u,v), c(v,w)) over v must not
    // depend on the chosen pair (u,w).
    let mut reference = vec![usize::MAX; k];
    for (i, &c) in colors.iter().enumerate() {
        if reference[c as usize] == usize::MAX {
            reference[c as usize] = i;
        }
    }
    let profile = |u: usize, w: usize| -> Vec<u64> {
        let mut v: Vec<u64> = (0..n)
            .map(|v| (colors[u * n + v] as u64) << 32 | colors[v * n + w] as u64)
            .collect();
        v.sort_unstable();
        v
    };
    let reference_profiles: Vec<Vec<u64>> = reference.iter().map(|&i| profile(i / n, i % n)).collect();
    let failures = exec.map_range(n, |u| {
        for w in 0..n {
            let c = colors[u * n + w] as usize;
            let p = profile(u, w);
            if p != reference_profiles[c] {
                return Some((u, w, p));
            }
        }
        None
    });
    if let Some((u, w, p)) = failures.into_iter().flatten().next() {
        let c = colors[u * n + w];
        let r = reference[c as usize];
        let q = &reference_profiles[c as usize];
        let count = |v: &[u64], key: u64| v.iter().filter(|&&x| x == key).count();
        let key = p
            .iter()
            .chain(q.iter())
            .copied()
            .find(|&key| count(&p, key) != count(q, key))
            .expect("profiles differ");
        return Err(SchemeViolation::IntersectionNumber {
            colors: ((key >> 32) as u32, key as u32, c),
            pair: (u, w),
            reference: (r / n, r % n),
            found: count(&p, key),
            expected: count(q, key),
        });
    }
    Ok(())
}

impl CoherentConfiguration {
    /// Canonicalize and verify a raw color matrix.
    pub fn from_colors(n: usize, colors: &[u32]) -> Result<Self> {
        if colors.len() != n * n || n == 0 {
            return Err(Error::NotAScheme(SchemeViolation::Malformed("matrix must be n × n, n ≥ 1".into())));
        }
        let c = Self::from_colors_unchecked(n, colors);
        verify_scheme_axioms(n, &c.colors, Execution::default()).map_err(Error::NotAScheme)?;
        Ok(c)
    }

    /// Canonicalize without verifying the axioms.
    pub fn from_colors_unchecked(n: usize, colors: &[u32]) -> Self {
        let (colors, rank) = canonicalize(n, colors);
        CoherentConfiguration {
            degree: n,
            colors,
            rank,
        }
    }

    /// The rank-2 (or rank-1 on one point) scheme.
    pub fn trivial(n: usize) -> Self {
        let colors: Vec<u32> = (0..n * n).map(|i| u32::from(i / n != i % n)).collect();
        Self::from_colors_unchecked(n, &colors)
    }

    /// Every ordered pair in its own class.
    pub fn discrete(n: usize) -> Self {
        let colors: Vec<u32> = (0..(n * n) as u32).collect();
        Self::from_colors_unchecked(n, &colors)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn color(&self, x: usize, y: usize) -> u32 {
        self.colors[x * self.degree + y]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn verify(&self) -> Result<(), SchemeViolation> {
        verify_scheme_axioms(self.degree, &self.colors, Execution::default())
    }

    /// Number of diagonal colors.
    pub fn fiber_count(&self) -> usize {
        let mut v: Vec<u32> = (0..self.degree).map(|x| self.color(x, x)).collect();
        v.sort_unstable();
        v.dedup();
        v.len()
    }

    /// Points `y` with `c(x, y) = color`.
    pub fn neighbors(&self, x: usize, color: u32) -> Vec<usize> {
        (0..self.degree).filter(|&y| self.color(x, y) == color).collect()
    }

    /// `true` iff `g` maps every color onto itself.
    pub fn is_automorphism(&self, g: &Perm) -> bool {
        let n = self.degree;
        g.degree() == n
            && (0..n).all(|x| (0..n).all(|y| self.color(g.apply(x), g.apply(y)) == self.color(x, y)))
    }

    /// The color permutation induced by `g`, if `g` is an isomorphism of the
    /// scheme onto itself (possibly permuting colors).
    pub fn induced_color_map(&self, g: &Perm) -> Option<Vec<u32>> {
        let n = self.degree;
        if g.degree() != n {
            return None;
        }
        let mut map = vec![u32::MAX; self.rank];
        for x in 0..n {
            for y in 0..n {
                let c = self.color(x, y) as usize;
                let d = self.color(g.apply(x), g.apply(y));
                if map[c] == u32::MAX {
                    map[c] = d;
                } else if map[c] != d {
                    return None;
                }
            }
        }
        let mut seen = vec![false; self.rank];
        for &d in &map {
            if std::mem::replace(&mut seen[d as usize], true) {
                return None;
            }
        }
        Some(map)
    }

    /// Every color of `self` lies inside a color of `coarser`.
    pub fn refines(&self, coarser: &CoherentConfiguration) -> bool {
        if self.degree != coarser.degree {
            return false;
        }
        let mut map = vec![u32::MAX; self.rank];
        self.colors.iter().zip(&coarser.colors).all(|(&a, &b)| {
            let slot = &mut map[a as usize];
            if *slot == u32::MAX {
                *slot = b;
            }
            *slot == b
        })
    }

    /// `true` iff the set of pairs is a union of colors.
    pub fn is_union_of_colors(&self, member: impl Fn(usize, usize) -> bool) -> bool {
        let n = self.degree;
        let mut state = vec![0u8; self.rank];
        for x in 0..n {
            for y in 0..n {
                let c = self.color(x, y) as usize;
                let m = if member(x, y) { 1 } else { 2 };
                if state[c] == 0 {
                    state[c] = m;
                } else if state[c] != m {
                    return false;
                }
            }
        }
        true
    }

    /// Dump as `n k` followed by `n` rows of color ids.
    pub fn dump(&self) -> String {
        let mut s = format!("{} {}\n", self.degree, self.rank);
        for x in 0..self.degree {
            let row: Vec<String> = (0..self.degree).map(|y| self.color(x, y).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parse the [`dump`](Self::dump) format; the matrix is canonicalized and
    /// verified.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace().enumerate();
        let mut next = |what: &str| -> Result<usize> {
            let (i, t) = tokens.next().ok_or_else(|| Error::Parse {
                position: 0,
                message: format!("missing {what}"),
            })?;
            t.parse().map_err(|_| Error::Parse {
                position: i,
                message: format!("bad {what} '{t}'"),
            })
        };
        let n = next("degree")?;
        let k = next("rank")?;
        let mut colors = Vec::with_capacity(n * n);
        for _ in 0..n * n {
            let c = next("color")?;
            if c >= k {
                return Err(Error::Parse {
                    position: colors.len() + 2,
                    message: format!("color {c} out of range 0..{k}"),
                });
            }
            colors.push(c as u32);
        }
        Self::from_colors(n, &colors)
    }
}

/// An equivalence relation on `0..n` as a class id per point, classes
/// numbered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceRelation {
    class: Vec<usize>,
    count: usize,
}

impl EquivalenceRelation {
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let class: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        EquivalenceRelation {
            count: map.len(),
            class,
        }
    }

    pub fn degree(&self) -> usize {
        self.class.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class[x]
    }

    pub fn class_count(&self) -> usize {
        self.count
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.class[x] == self.class[y]
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (x, &c) in self.class.iter().enumerate() {
            out[c].push(x);
        }
        out
    }
}
