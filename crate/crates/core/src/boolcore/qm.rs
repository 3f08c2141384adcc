use std::collections::BTreeSet;

use super::implicant::Implicant;

/// Prime implicants of the function whose on∪dc set is `points`, by
/// Quine–McCluskey merging. Result is sorted in canonical order.
pub(crate) fn primes_of(n: usize, points: &[u32]) -> Vec<Implicant> {
    let mut level: BTreeSet<(u16, u16)> = points.iter().map(|&v| (v as u16, 0u16)).collect();
    let mut primes = Vec::new();
    while !level.is_empty() {
        let cubes: Vec<(u16, u16)> = level.iter().copied().collect();
        let mut merged = vec![false; cubes.len()];
        let mut next = BTreeSet::new();
        // Cubes can only merge with an equal don't-care mask, so bucket by it.
        let mut by_mask: Vec<(u16, Vec<usize>)> = Vec::new();
        for (i, &(_, mask)) in cubes.iter().enumerate() {
            match by_mask.iter_mut().find(|(m, _)| *m == mask) {
                Some((_, idx)) => idx.push(i),
                None => by_mask.push((mask, vec![i])),
            }
        }
        for (mask, idx) in &by_mask {
            for (a_pos, &a) in idx.iter().enumerate() {
                for &b in &idx[a_pos + 1..] {
                    let diff = cubes[a].0 ^ cubes[b].0;
                    if diff.count_ones() == 1 {
                        merged[a] = true;
                        merged[b] = true;
                        next.insert((cubes[a].0 & !diff, mask | diff));
                    }
                }
            }
        }
        for (i, &(value, mask)) in cubes.iter().enumerate() {
            if !merged[i] {
                primes.push(Implicant::from_raw(n, value, mask));
            }
        }
        level = next;
    }
    primes.sort();
    primes.dedup();
    primes
}
