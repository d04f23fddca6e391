//! Automorphism groups of schemes by individualization and refinement.
//!
//! The search fixes a base along the first path of the search tree, then
//! works from the deepest level up: at each level the orbit of the base
//! point under the generators found so far is extended by searching, for
//! every remaining candidate, for one automorphism that maps the base point
//! there. The result is a base with strong generators and transversals,
//! which is enough to test membership, count and enumerate the group.

use std::collections::VecDeque;

use num_bigint::BigUint;

use super::CoherentConfiguration;
use crate::perm::{Perm, PermGroup};
use crate::{Error, Result};

/// Default degree cap for the automorphism search.
pub const DEFAULT_AUT_DEGREE_CAP: usize = 128;

const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug)]
pub struct AutSearchOptions {
    /// Points to use as the first base points, in order (skipped when
    /// already fixed by refinement).
    pub base_prefix: Vec<usize>,
    pub degree_cap: usize,
    /// Maximum number of search-tree nodes before giving up.
    pub node_budget: u64,
}

impl Default for AutSearchOptions {
    fn default() -> Self {
        AutSearchOptions {
            base_prefix: Vec::new(),
            degree_cap: DEFAULT_AUT_DEGREE_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

impl AutSearchOptions {
    pub fn with_base_prefix(prefix: &[usize]) -> Self {
        AutSearchOptions {
            base_prefix: prefix.to_vec(),
            ..Default::default()
        }
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x0000_0100_0000_01b3).rotate_left(23) ^ (h >> 7)
}

/// Ordered partition of the points; a cell is named by its start position.
#[derive(Clone)]
struct Partition {
    order: Vec<u32>,
    pos: Vec<u32>,
    cell_of: Vec<u32>,
    /// `end[s]` is the end of the cell starting at `s`.
    end: Vec<u32>,
}

impl Partition {
    fn by_diagonal(c: &CoherentConfiguration) -> (Partition, Vec<u32>) {
        let n = c.degree();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by_key(|&v| (c.color(v as usize, v as usize), v));
        let mut p = Partition {
            pos: vec![0; n],
            cell_of: vec![0; n],
            end: vec![0; n],
            order,
        };
        let mut starts = Vec::new();
        let mut s = 0;
        while s < n {
            let col = c.color(p.order[s] as usize, p.order[s] as usize);
            let mut e = s;
            while e < n && c.color(p.order[e] as usize, p.order[e] as usize) == col {
                e += 1;
            }
            for i in s..e {
                let v = p.order[i] as usize;
                p.pos[v] = i as u32;
                p.cell_of[v] = s as u32;
            }
            p.end[s] = e as u32;
            starts.push(s as u32);
            s = e;
        }
        (p, starts)
    }

    fn cell(&self, start: u32) -> &[u32] {
        &self.order[start as usize..self.end[start as usize] as usize]
    }

    fn is_discrete(&self) -> bool {
        (0..self.order.len()).all(|s| self.end[self.cell_of[self.order[s] as usize] as usize] as usize == self.cell_of[self.order[s] as usize] as usize + 1)
    }

    fn is_singleton(&self, v: usize) -> bool {
        let s = self.cell_of[v];
        self.end[s as usize] == s + 1
    }

    /// Largest non-singleton cell, lowest start on ties.
    fn target_cell(&self) -> Option<u32> {
        let n = self.order.len();
        let mut best: Option<(u32, u32)> = None;
        let mut s = 0;
        while s < n {
            let e = self.end[s];
            let len = e - s as u32;
            if len > 1 && best.is_none_or(|(_, l)| len > l) {
                best = Some((s as u32, len));
            }
            s = e as usize;
        }
        best.map(|(s, _)| s)
    }

    /// Split `v` off the front of its cell and refine.
    fn individualize(&mut self, c: &CoherentConfiguration, v: usize) -> u64 {
        let s = self.cell_of[v] as usize;
        let e = self.end[s] as usize;
        let other = self.order[s];
        let pv = self.pos[v] as usize;
        self.order.swap(s, pv);
        self.pos[other as usize] = pv as u32;
        self.pos[v] = s as u32;
        self.end[s] = s as u32 + 1;
        self.end[s + 1] = e as u32;
        for i in s + 1..e {
            self.cell_of[self.order[i] as usize] = s as u32 + 1;
        }
        let trace = mix(s as u64, e as u64);
        self.refine(c, vec![s as u32], trace)
    }

    /// Equitable refinement driven by a queue of splitter cells. Returns a
    /// trace hash that is invariant under color-preserving relabelling.
    fn refine(&mut self, c: &CoherentConfiguration, initial: Vec<u32>, mut trace: u64) -> u64 {
        let n = self.order.len();
        let k = c.rank() as u64;
        let mut in_queue = vec![false; n];
        let mut queue = VecDeque::new();
        for s in initial {
            in_queue[s as usize] = true;
            queue.push_back(s);
        }
        let mut keyed: Vec<(Vec<u64>, u32)> = Vec::new();
        while let Some(w) = queue.pop_front() {
            in_queue[w as usize] = false;
            let splitter: Vec<u32> = self.cell(w).to_vec();
            let mut s = 0usize;
            while s < n {
                let e = self.end[s] as usize;
                if e - s == 1 {
                    s = e;
                    continue;
                }
                keyed.clear();
                for i in s..e {
                    let v = self.order[i] as usize;
                    let mut key: Vec<u64> = splitter
                        .iter()
                        .map(|&u| c.color(v, u as usize) as u64 * k + c.color(u as usize, v) as u64)
                        .collect();
                    key.sort_unstable();
                    keyed.push((key, v as u32));
                }
                if keyed.iter().all(|(key, _)| *key == keyed[0].0) {
                    s = e;
                    continue;
                }
                keyed.sort_unstable();
                let was_queued = in_queue[s];
                let mut fragments: Vec<(usize, usize)> = Vec::new();
                let mut i = 0;
                while i < keyed.len() {
                    let mut j = i;
                    while j < keyed.len() && keyed[j].0 == keyed[i].0 {
                        j += 1;
                    }
                    fragments.push((s + i, s + j));
                    trace = mix(trace, w as u64);
                    trace = mix(trace, (s + i) as u64);
                    trace = mix(trace, (j - i) as u64);
                    for &x in &keyed[i].0 {
                        trace = mix(trace, x);
                    }
                    i = j;
                }
                for (idx, (_, v)) in keyed.iter().enumerate() {
                    self.order[s + idx] = *v;
                    self.pos[*v as usize] = (s + idx) as u32;
                }
                for &(fs, fe) in &fragments {
                    self.end[fs] = fe as u32;
                    for idx in fs..fe {
                        self.cell_of[self.order[idx] as usize] = fs as u32;
                    }
                }
                let largest = fragments
                    .iter()
                    .enumerate()
                    .max_by_key(|(idx, (a, b))| (b - a, std::cmp::Reverse(*idx)))
                    .map(|(idx, _)| idx)
                    .unwrap();
                for (idx, &(fs, _)) in fragments.iter().enumerate() {
                    if in_queue[fs] {
                        continue;
                    }
                    if was_queued || idx != largest {
                        in_queue[fs] = true;
                        queue.push_back(fs as u32);
                    }
                }
                s = e;
            }
        }
        trace
    }
}

struct Level {
    /// Partition before individualizing the base point.
    partition: Partition,
    cell: u32,
    point: usize,
    /// Trace after individualizing and refining.
    trace: u64,
}

struct Searcher<'a> {
    c: &'a CoherentConfiguration,
    path: Vec<Level>,
    leaf: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl Searcher<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::cap("automorphism search nodes", self.nodes, self.budget));
        }
        Ok(())
    }

    /// An automorphism fixing the base points before `level` and mapping the
    /// base point at `level` to `v`.
    fn find(&mut self, level: usize, v: usize) -> Result<Option<Perm>> {
        let mut p = self.path[level].partition.clone();
        self.tick()?;
        if p.individualize(self.c, v) != self.path[level].trace {
            return Ok(None);
        }
        self.descend(level + 1, p)
    }

    fn descend(&mut self, level: usize, p: Partition) -> Result<Option<Perm>> {
        if level == self.path.len() {
            let n = self.leaf.len();
            let mut images = vec![0usize; n];
            for i in 0..n {
                images[self.leaf[i] as usize] = p.order[i] as usize;
            }
            let g = Perm::from_images(images).map_err(|_| Error::internal("leaf map is not a bijection"))?;
            return Ok(self.c.is_automorphism(&g).then_some(g));
        }
        let cell = self.path[level].cell;
        let candidates: Vec<u32> = p.cell(cell).to_vec();
        if candidates.len() != self.path[level].partition.cell(cell).len() {
            return Ok(None);
        }
        let mut sorted = candidates;
        sorted.sort_unstable();
        for u in sorted {
            self.tick()?;
            let mut q = p.clone();
            if q.individualize(self.c, u as usize) != self.path[level].trace {
                continue;
            }
            if let Some(g) = self.descend(level + 1, q)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

/// `Aut(C)` as a base with strong generators.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    degree: usize,
    base: Vec<usize>,
    generators: Vec<Perm>,
    /// Level at which each generator was found; it fixes `base[..level]`.
    generator_levels: Vec<usize>,
    /// Per level: orbit points with a transversal element mapping the base
    /// point there.
    transversals: Vec<Vec<(usize, Perm)>>,
    /// Per level: points that are singletons of the path partition, i.e.
    /// fixed by every automorphism fixing `base[..level]`.
    fixed: Vec<Vec<bool>>,
    nodes: u64,
}

fn transversal(degree: usize, point: usize, gens: &[&Perm]) -> Vec<(usize, Perm)> {
    let mut rep: Vec<Option<Perm>> = vec![None; degree];
    rep[point] = Some(Perm::identity(degree));
    let mut queue = VecDeque::from([point]);
    while let Some(w) = queue.pop_front() {
        for g in gens {
            let x = g.apply(w);
            if rep[x].is_none() {
                rep[x] = Some(rep[w].as_ref().unwrap().then(g));
                queue.push_back(x);
            }
        }
    }
    rep.into_iter()
        .enumerate()
        .filter_map(|(x, r)| r.map(|r| (x, r)))
        .collect()
}

/// Compute `Aut(C)`, the color-preserving permutations of the points.
pub fn automorphism_group(c: &CoherentConfiguration, options: &AutSearchOptions) -> Result<AutomorphismGroup> {
    let n = c.degree();
    if n > options.degree_cap {
        return Err(Error::cap("automorphism search degree", n, options.degree_cap));
    }
    if let Some(&p) = options.base_prefix.iter().find(|&&p| p >= n) {
        return Err(Error::invalid(format!("base point {p} out of range")));
    }
    let (mut p, starts) = Partition::by_diagonal(c);
    let root_trace = p.refine(c, starts, 0);
    let _ = root_trace;

    let mut path = Vec::new();
    let mut fixed = Vec::new();
    let mut prefix = options.base_prefix.iter().copied().peekable();
    loop {
        fixed.push((0..n).map(|v| p.is_singleton(v)).collect::<Vec<bool>>());
        while prefix.peek().is_some_and(|&v| p.is_singleton(v)) {
            prefix.next();
        }
        let (cell, point) = match prefix.next() {
            Some(v) => (p.cell_of[v], v),
            None => match p.target_cell() {
                Some(cell) => (cell, *p.cell(cell).iter().min().unwrap() as usize),
                None => break,
            },
        };
        let before = p.clone();
        let trace = p.individualize(c, point);
        path.push(Level {
            partition: before,
            cell,
            point,
            trace,
        });
    }
    debug_assert!(p.is_discrete());
    let leaf_perm_check = p.order.clone();

    let mut searcher = Searcher {
        c,
        path,
        leaf: leaf_perm_check,
        nodes: 0,
        budget: options.node_budget,
    };
    let m = searcher.path.len();
    let mut generators: Vec<Perm> = Vec::new();
    let mut generator_levels: Vec<usize> = Vec::new();
    let mut transversals = vec![Vec::new(); m];
    for level in (0..m).rev() {
        let point = searcher.path[level].point;
        let cell = searcher.path[level].cell;
        let mut candidates: Vec<u32> = searcher.path[level].partition.cell(cell).to_vec();
        candidates.sort_unstable();
        let current = |generators: &[Perm], levels: &[usize]| -> Vec<Perm> {
            generators
                .iter()
                .zip(levels)
                .filter(|(_, &l)| l >= level)
                .map(|(g, _)| g.clone())
                .collect()
        };
        let gens = current(&generators, &generator_levels);
        let mut orbit = transversal(n, point, &gens.iter().collect::<Vec<_>>());
        for v in candidates {
            let v = v as usize;
            if orbit.iter().any(|(x, _)| *x == v) {
                continue;
            }
            if let Some(g) = searcher.find(level, v)? {
                generators.push(g);
                generator_levels.push(level);
                let gens = current(&generators, &generator_levels);
                orbit = transversal(n, point, &gens.iter().collect::<Vec<_>>());
            }
        }
        transversals[level] = orbit;
    }
    let base = searcher.path.iter().map(|l| l.point).collect();
    Ok(AutomorphismGroup {
        degree: n,
        base,
        generators,
        generator_levels,
        transversals,
        fixed,
        nodes: searcher.nodes,
    })
}

impl AutomorphismGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn search_nodes(&self) -> u64 {
        self.nodes
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.transversals.iter().map(Vec::len).collect()
    }

    pub fn order(&self) -> BigUint {
        self.transversals
            .iter()
            .fold(BigUint::from(1u32), |acc, t| acc * BigUint::from(t.len()))
    }

    /// The order if it fits in a `u128`.
    pub fn order_u128(&self) -> Option<u128> {
        self.transversals
            .iter()
            .try_fold(1u128, |acc, t| acc.checked_mul(t.len() as u128))
    }

    /// Membership by sifting through the transversals.
    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let mut h = g.clone();
        for (level, &b) in self.base.iter().enumerate() {
            let image = h.apply(b);
            match self.transversals[level].iter().find(|(x, _)| *x == image) {
                Some((_, u)) => h = h.then(&u.inverse()),
                None => return false,
            }
        }
        h.is_identity()
    }

    /// Every generator preserves every color.
    pub fn verify(&self, c: &CoherentConfiguration) -> bool {
        self.generators.iter().all(|g| c.is_automorphism(g))
            && self
                .transversals
                .iter()
                .flatten()
                .all(|(_, u)| c.is_automorphism(u))
    }

    /// Pointwise stabilizer of `points`, when it is a stabilizer of a base
    /// prefix (always the case for points passed as the base prefix).
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Option<AutomorphismGroup> {
        let k = (0..=self.base.len()).find(|&k| {
            self.base[..k].iter().all(|b| points.contains(b)) && points.iter().all(|&p| self.fixed[k][p])
        })?;
        let keep: Vec<bool> = self.generator_levels.iter().map(|&l| l >= k).collect();
        Some(AutomorphismGroup {
            degree: self.degree,
            base: self.base[k..].to_vec(),
            generators: self
                .generators
                .iter()
                .zip(&keep)
                .filter(|(_, &x)| x)
                .map(|(g, _)| g.clone())
                .collect(),
            generator_levels: self
                .generator_levels
                .iter()
                .filter(|&&l| l >= k)
                .map(|&l| l - k)
                .collect(),
            transversals: self.transversals[k..].to_vec(),
            fixed: self.fixed[k..].to_vec(),
            nodes: 0,
        })
    }

    /// Explicit element list, refused above `cap` elements.
    pub fn to_perm_group(&self, cap: usize) -> Result<PermGroup> {
        match self.order_u128() {
            Some(o) if o <= cap as u128 => {}
            _ => return Err(Error::cap("automorphism group order", self.order(), cap)),
        }
        let mut elements = vec![Perm::identity(self.degree)];
        for t in self.transversals.iter().rev() {
            let mut next = Vec::with_capacity(elements.len() * t.len());
            for h in &elements {
                for (_, u) in t {
                    next.push(h.then(u));
                }
            }
            elements = next;
        }
        PermGroup::from_closed_elements(self.degree, elements)
    }
}
