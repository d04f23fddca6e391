//! Two-dimensional Weisfeiler–Leman refinement to the coherent closure.

use std::collections::HashMap;

use super::CoherentConfiguration;
use crate::exec::Execution;

/// Distinct signatures get ids by sorted order, so the numbering depends
/// only on the signatures themselves.
fn renumber(n: usize, rows: Vec<(Vec<Vec<u64>>, Vec<u32>)>) -> (Vec<u32>, usize) {
    let mut all: Vec<&Vec<u64>> = rows.iter().flat_map(|(sigs, _)| sigs.iter()).collect();
    all.sort_unstable();
    all.dedup();
    let ids: HashMap<&Vec<u64>, u32> = all.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
    let mut out = Vec::with_capacity(n * n);
    for (sigs, local) in &rows {
        let map: Vec<u32> = sigs.iter().map(|s| ids[s]).collect();
        out.extend(local.iter().map(|&l| map[l as usize]));
    }
    (out, all.len())
}

/// Per-row signatures, deduplicated within the row.
fn row_signatures(n: usize, mut row: impl FnMut(usize) -> Vec<u64>) -> (Vec<Vec<u64>>, Vec<u32>) {
    let mut local: HashMap<Vec<u64>, u32> = HashMap::new();
    let mut sigs = Vec::new();
    let mut ids = Vec::with_capacity(n);
    for y in 0..n {
        let s = row(y);
        let id = *local.entry(s.clone()).or_insert_with(|| {
            sigs.push(s);
            (sigs.len() - 1) as u32
        });
        ids.push(id);
    }
    (sigs, ids)
}

/// Refine an arbitrary coloring of `V × V` to the coarsest coherent
/// configuration below it.
pub fn wl_refine(n: usize, initial: &[u32], exec: Execution) -> CoherentConfiguration {
    assert_eq!(initial.len(), n * n, "coloring must be n × n");
    // first pass: (c(x,y), c(y,x), x = y)
    let rows = exec.map_range(n, |x| {
        row_signatures(n, |y| {
            vec![
                initial[x * n + y] as u64,
                initial[y * n + x] as u64,
                u64::from(x == y),
            ]
        })
    });
    let (mut colors, mut rank) = renumber(n, rows);

    loop {
        let k = rank as u64;
        let current = &colors;
        let rows = exec.map_range(n, |x| {
            let mut buf = Vec::with_capacity(n);
            row_signatures(n, |y| {
                buf.clear();
                buf.extend((0..n).map(|z| current[x * n + z] as u64 * k + current[z * n + y] as u64));
                buf.sort_unstable();
                let mut sig = vec![current[x * n + y] as u64];
                let mut i = 0;
                while i < buf.len() {
                    let mut j = i;
                    while j < buf.len() && buf[j] == buf[i] {
                        j += 1;
                    }
                    sig.push(buf[i]);
                    sig.push((j - i) as u64);
                    i = j;
                }
                sig
            })
        });
        let (next, next_rank) = renumber(n, rows);
        colors = next;
        if next_rank == rank {
            break;
        }
        rank = next_rank;
    }
    CoherentConfiguration::from_colors_unchecked(n, &colors)
}

/// The smallest scheme on `0..n` in which each input relation (given as a
/// membership predicate per ordered pair) is a union of basis relations.
pub fn wl_closure(n: usize, relations: &[Vec<bool>], exec: Execution) -> CoherentConfiguration {
    let mut pattern: HashMap<Vec<bool>, u32> = HashMap::new();
    let mut initial = Vec::with_capacity(n * n);
    for i in 0..n * n {
        let key: Vec<bool> = relations.iter().map(|r| r[i]).collect();
        let next = pattern.len() as u32;
        initial.push(*pattern.entry(key).or_insert(next));
    }
    wl_refine(n, &initial, exec)
}
