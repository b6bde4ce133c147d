//! Exhaustive enumeration of small graphs up to isomorphism.
//!
//! Graphs on `n` vertices are encoded as edge bitmasks over the pairs
//! `(i, j)`, `i < j`, with bit index `j*(j-1)/2 + i`. Canonical
//! representatives are the minimal masks over all vertex permutations,
//! which is affordable for the `n <= 6` sweeps this crate runs.

use crate::graph::{CyclicOrder, DefiningGraph};

/// Bit index of the edge `{i, j}`, `i < j`.
pub fn edge_bit(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    permute(&mut items, 0, &mut out);
    out.sort();
    out
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

fn remap_mask(n: usize, mask: u32, perm: &[usize]) -> u32 {
    let mut out = 0u32;
    for j in 1..n {
        for i in 0..j {
            if mask & (1 << edge_bit(i, j)) != 0 {
                let (a, b) = (perm[i], perm[j]);
                let bit = if a < b { edge_bit(a, b) } else { edge_bit(b, a) };
                out |= 1 << bit;
            }
        }
    }
    out
}

pub fn is_connected_mask(n: usize, mask: u32) -> bool {
    if n == 0 {
        return true;
    }
    let mut reached = 1u32;
    loop {
        let mut grew = false;
        for j in 1..n {
            for i in 0..j {
                if mask & (1 << edge_bit(i, j)) != 0 {
                    let (bi, bj) = (1u32 << i, 1u32 << j);
                    if reached & bi != 0 && reached & bj == 0 {
                        reached |= bj;
                        grew = true;
                    }
                    if reached & bj != 0 && reached & bi == 0 {
                        reached |= bi;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    reached.count_ones() as usize == n
}

/// Canonical masks of all isomorphism classes of graphs on exactly `n`
/// vertices, sorted; `connected_only` filters to connected graphs.
pub fn graph_classes(n: usize, connected_only: bool) -> Vec<u32> {
    assert!(n <= 7, "exhaustive enumeration is meant for small n");
    let perms = permutations(n);
    let bits = n * (n - 1) / 2;
    let mut out = Vec::new();
    for mask in 0..(1u32 << bits) {
        if connected_only && !is_connected_mask(n, mask) {
            continue;
        }
        let canonical = perms
            .iter()
            .map(|p| remap_mask(n, mask, p))
            .min()
            .unwrap_or(mask);
        if canonical == mask {
            out.push(mask);
        }
    }
    out
}

/// All connected isomorphism classes with between 1 and `max_n` vertices,
/// as `(n, mask)` pairs in deterministic order.
pub fn connected_classes_up_to(max_n: usize) -> Vec<(usize, u32)> {
    (1..=max_n)
        .flat_map(|n| graph_classes(n, true).into_iter().map(move |m| (n, m)))
        .collect()
}

/// All isomorphism classes (connected or not) with 1..=`max_n` vertices.
pub fn all_classes_up_to(max_n: usize) -> Vec<(usize, u32)> {
    (1..=max_n)
        .flat_map(|n| graph_classes(n, false).into_iter().map(move |m| (n, m)))
        .collect()
}

/// Materializes a mask as a defining graph with vertices `v1..vn` and the
/// given orders.
pub fn graph_from_mask(n: usize, mask: u32, orders: &[CyclicOrder]) -> DefiningGraph {
    assert_eq!(orders.len(), n);
    let vertices: Vec<(String, CyclicOrder)> = (0..n)
        .map(|i| (format!("v{}", i + 1), orders[i]))
        .collect();
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if mask & (1 << edge_bit(i, j)) != 0 {
                edges.push((format!("v{}", i + 1), format!("v{}", j + 1)));
            }
        }
    }
    DefiningGraph::new(vertices, &edges).expect("mask graphs are valid")
}

/// Vertex permutations preserving the mask (the automorphism group of the
/// labeled graph).
pub fn mask_automorphisms(n: usize, mask: u32) -> Vec<Vec<usize>> {
    permutations(n)
        .into_iter()
        .filter(|p| remap_mask(n, mask, p) == mask)
        .collect()
}

/// All assignments of `palette` orders to the vertices of `mask`, one
/// representative per orbit of the graph's automorphism group.
pub fn order_assignments_up_to_aut(
    n: usize,
    mask: u32,
    palette: &[CyclicOrder],
) -> Vec<Vec<CyclicOrder>> {
    let auts = mask_automorphisms(n, mask);
    let mut out = Vec::new();
    let mut assignment = vec![0usize; n];
    loop {
        let orders: Vec<CyclicOrder> = assignment.iter().map(|&i| palette[i]).collect();
        let canonical = auts
            .iter()
            .map(|p| {
                // Orders seen at position i after relabeling by p.
                let mut permuted = vec![palette[0]; n];
                for (i, &pi) in p.iter().enumerate() {
                    permuted[pi] = orders[i];
                }
                permuted
            })
            .min()
            .unwrap();
        if canonical == orders {
            out.push(orders);
        }
        // Increment the mixed-radix counter.
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            assignment[i] += 1;
            if assignment[i] < palette.len() {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}
