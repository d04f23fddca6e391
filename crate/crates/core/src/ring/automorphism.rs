//! Ring automorphisms and isomorphisms by backtracking over the images of a
//! generating set.

use super::{Elem, FiniteRing, RingStructure};
use crate::perm::{Perm, PermGroup};
use crate::Result;

/// Isomorphism invariant of a single element: additive order and the
/// tail length / period of its power sequence.
fn element_invariant(ring: &FiniteRing, x: Elem) -> (usize, usize, usize) {
    let mut first_seen = vec![usize::MAX; ring.size()];
    let mut y = x;
    let mut k = 1;
    loop {
        if first_seen[y] != usize::MAX {
            let tail = first_seen[y];
            return (ring.additive_order(x), tail, k - tail);
        }
        first_seen[y] = k;
        y = ring.mul(y, x);
        k += 1;
    }
}

/// Greedy ring generating set: a generator of the Teichmüller group (or the
/// largest-order unit when the ring is not local), then radical elements,
/// then whatever is still missing.
pub fn ring_generators(ring: &FiniteRing) -> Vec<Elem> {
    let structure = RingStructure::new(ring).ok();
    let mut candidates: Vec<Elem> = Vec::new();
    if let Some(s) = &structure {
        let pool = if s.is_local { &s.teichmuller } else { &s.units };
        if let Some(&g) = pool
            .iter()
            .max_by_key(|&&t| (ring.multiplicative_order(t).unwrap_or(0), std::cmp::Reverse(t)))
        {
            candidates.push(g);
        }
        candidates.extend(s.radical.iter().copied());
    }
    candidates.extend(ring.elements());

    let mut gens = Vec::new();
    let mut span = Derivation::new(ring, &gens);
    for c in candidates {
        if span.len() == ring.size() {
            break;
        }
        if !span.contains(c) {
            gens.push(c);
            span = Derivation::new(ring, &gens);
        }
    }
    gens
}

/// How each element of a subring arises from `0`, `1` and the generators.
struct Derivation {
    /// Elements in discovery order with their recipe.
    steps: Vec<(Elem, Step)>,
    known: Vec<bool>,
}

#[derive(Clone, Copy)]
enum Step {
    Zero,
    One,
    Generator(usize),
    Add(usize, usize),
    Mul(usize, usize),
}

impl Derivation {
    fn new(ring: &FiniteRing, gens: &[Elem]) -> Self {
        let mut d = Derivation {
            steps: Vec::new(),
            known: vec![false; ring.size()],
        };
        d.push(ring.zero(), Step::Zero);
        d.push(ring.one(), Step::One);
        for (i, &g) in gens.iter().enumerate() {
            d.push(g, Step::Generator(i));
        }
        let mut i = 0;
        while i < d.steps.len() {
            let a = d.steps[i].0;
            for j in 0..=i {
                let b = d.steps[j].0;
                d.push(ring.add(a, b), Step::Add(i, j));
                d.push(ring.mul(a, b), Step::Mul(i, j));
            }
            i += 1;
        }
        d
    }

    fn push(&mut self, x: Elem, step: Step) {
        if !self.known[x] {
            self.known[x] = true;
            self.steps.push((x, step));
        }
    }

    fn contains(&self, x: Elem) -> bool {
        self.known[x]
    }

    fn len(&self) -> usize {
        self.steps.len()
    }

    /// Extend generator images to a map on the whole ring; `None` if the
    /// result is not injective.
    fn extend(&self, target: &FiniteRing, images: &[Elem]) -> Option<Vec<Elem>> {
        let mut f = vec![usize::MAX; self.steps.len()];
        let mut out = vec![usize::MAX; target.size()];
        let mut used = vec![false; target.size()];
        for (k, &(x, step)) in self.steps.iter().enumerate() {
            let y = match step {
                Step::Zero => target.zero(),
                Step::One => target.one(),
                Step::Generator(i) => images[i],
                Step::Add(i, j) => target.add(f[i], f[j]),
                Step::Mul(i, j) => target.mul(f[i], f[j]),
            };
            if used[y] {
                return None;
            }
            used[y] = true;
            f[k] = y;
            out[x] = y;
        }
        Some(out)
    }
}

fn is_homomorphism(source: &FiniteRing, target: &FiniteRing, f: &[Elem]) -> bool {
    f[source.one()] == target.one()
        && source.elements().all(|a| {
            source.elements().all(|b| {
                f[source.add(a, b)] == target.add(f[a], f[b])
                    && f[source.mul(a, b)] == target.mul(f[a], f[b])
            })
        })
}

fn search(
    source: &FiniteRing,
    target: &FiniteRing,
    mut on_found: impl FnMut(Vec<Elem>) -> bool,
) {
    if source.size() != target.size() {
        return;
    }
    let gens = ring_generators(source);
    let derivation = Derivation::new(source, &gens);
    let target_inv: Vec<_> = target.elements().map(|y| element_invariant(target, y)).collect();
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&g| {
            let inv = element_invariant(source, g);
            target.elements().filter(|&y| target_inv[y] == inv).collect()
        })
        .collect();
    let mut images = vec![0; gens.len()];
    fn rec(
        level: usize,
        candidates: &[Vec<Elem>],
        images: &mut Vec<Elem>,
        visit: &mut dyn FnMut(&[Elem]) -> bool,
    ) -> bool {
        if level == candidates.len() {
            return visit(images);
        }
        for &c in &candidates[level] {
            if images[..level].contains(&c) {
                continue;
            }
            images[level] = c;
            if !rec(level + 1, candidates, images, visit) {
                return false;
            }
        }
        true
    }
    let mut visit = |images: &[Elem]| -> bool {
        match derivation.extend(target, images) {
            Some(f) if is_homomorphism(source, target, &f) => on_found(f),
            _ => true,
        }
    };
    rec(0, &candidates, &mut images, &mut visit);
}

/// All ring automorphisms as a permutation group on the elements.
pub fn ring_automorphisms(ring: &FiniteRing) -> Result<PermGroup> {
    let mut found = Vec::new();
    search(ring, ring, |f| {
        found.push(Perm::from_images_unchecked(f));
        true
    });
    PermGroup::from_closed_elements(ring.size(), found)
}

/// Some ring isomorphism `a → b`, as the image array.
pub fn find_ring_isomorphism(a: &FiniteRing, b: &FiniteRing) -> Option<Vec<Elem>> {
    let mut result = None;
    search(a, b, |f| {
        result = Some(f);
        false
    });
    result
}
