//! Bellman–Ford potentials for difference constraints `u_j ≤ u_i + d(i, j)`
//! on the complete digraph over `n` vertices.

/// Either feasible potentials or a negative cycle `(v₀, …, v_L, v₀)`.
pub(crate) type Potentials = std::result::Result<Vec<f64>, Vec<usize>>;

/// Shortest-path potentials from `source`, or from a virtual source joined to
/// every vertex by a zero edge when `source` is `None`.
///
/// Relaxation runs for `n − 1` rounds, enough for paths on distinct vertices;
/// an improving edge in one extra round exposes a negative cycle.
pub(crate) fn bellman_ford(n: usize, source: Option<usize>, d: impl Fn(usize, usize) -> f64) -> Potentials {
    let mut dist = match source {
        Some(s) => {
            let mut v = vec![f64::INFINITY; n];
            v[s] = 0.0;
            v
        }
        None => vec![0.0; n],
    };
    let mut pred = vec![usize::MAX; n];
    let rounds = n.saturating_sub(1);
    for _ in 0..rounds {
        let mut changed = false;
        for i in 0..n {
            if dist[i] == f64::INFINITY {
                continue;
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let cand = dist[i] + d(i, j);
                if cand < dist[j] {
                    dist[j] = cand;
                    pred[j] = i;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(dist);
        }
    }
    // Keep relaxing until the predecessor graph closes a cycle; any such cycle
    // has negative weight.
    for _ in 0..4 * n.max(1) {
        let mut changed = false;
        for i in 0..n {
            if dist[i] == f64::INFINITY {
                continue;
            }
            for j in 0..n {
                if i != j && dist[i] + d(i, j) < dist[j] {
                    dist[j] = dist[i] + d(i, j);
                    pred[j] = i;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(dist);
        }
        if let Some(cycle) = predecessor_cycle(&pred) {
            return Err(cycle);
        }
    }
    unreachable!("persistent relaxation without a predecessor cycle")
}

fn predecessor_cycle(pred: &[usize]) -> Option<Vec<usize>> {
    let n = pred.len();
    // 0 = unvisited, 1 = on current walk, 2 = finished
    let mut state = vec![0u8; n];
    for start in 0..n {
        let mut walk = Vec::new();
        let mut v = start;
        while v != usize::MAX && state[v] == 0 {
            state[v] = 1;
            walk.push(v);
            v = pred[v];
        }
        if v != usize::MAX && state[v] == 1 {
            let pos = walk.iter().position(|&u| u == v).expect("on current walk");
            // walk follows predecessors, so reverse it for forward edges
            let mut cycle: Vec<usize> = walk[pos..].iter().rev().copied().collect();
            cycle.push(cycle[0]);
            return Some(cycle);
        }
        for u in walk {
            state[u] = 2;
        }
    }
    None
}

/// Sum of `d` along a closed vertex sequence.
pub(crate) fn cycle_weight(cycle: &[usize], d: impl Fn(usize, usize) -> f64) -> f64 {
    cycle.windows(2).map(|w| d(w[0], w[1])).sum()
}
