//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use rpdim::SquareMatrix;

/// GARP by brute force: a violation is a cycle of distinct observations
/// whose edges are all weak, at least one strict.
pub fn brute_force_violation(e: &SquareMatrix, tol: f64) -> bool {
    fn walk(e: &SquareMatrix, tol: f64, path: &mut Vec<usize>, strict: bool) -> bool {
        let last = *path.last().unwrap();
        if path.len() >= 2 {
            let v = e.get(last, path[0]);
            if v <= 1.0 + tol && (strict || v < 1.0 - tol) {
                return true;
            }
        }
        for next in 0..e.n() {
            if path.contains(&next) {
                continue;
            }
            let v = e.get(last, next);
            if v <= 1.0 + tol {
                path.push(next);
                let found = walk(e, tol, path, strict || v < 1.0 - tol);
                path.pop();
                if found {
                    return true;
                }
            }
        }
        false
    }
    (0..e.n()).any(|s| walk(e, tol, &mut vec![s], false))
}

/// Directed cycles on distinct vertices of the complete digraph, counted by
/// walking from each cycle's smallest vertex.
pub fn brute_force_cycle_count(t: usize) -> u64 {
    fn extend(t: usize, start: usize, used: &mut Vec<bool>, len: usize) -> u64 {
        let mut count = if len >= 2 { 1 } else { 0 };
        for v in start + 1..t {
            if !used[v] {
                used[v] = true;
                count += extend(t, start, used, len + 1);
                used[v] = false;
            }
        }
        count
    }
    (0..t)
        .map(|s| {
            let mut used = vec![false; t];
            used[s] = true;
            extend(t, s, &mut used, 1)
        })
        .sum()
}
