//! The catalog of irreducible spherical and affine diagrams and a matcher
//! that names a system when its labelled graph is isomorphic to a catalog
//! member.

use super::{fin, system_from_edges, CoxeterSystem, Label, INF};

/// Path with consecutive edge labels.
fn path(labels: &[Label]) -> CoxeterSystem {
    let edges: Vec<(usize, usize, Label)> =
        labels.iter().enumerate().map(|(i, &m)| (i, i + 1, m)).collect();
    system_from_edges(labels.len() + 1, &edges)
}

/// Simply-laced path of `n` nodes.
fn a_path(n: usize) -> CoxeterSystem {
    path(&vec![fin(3); n - 1])
}

/// Star with three simply-laced legs of the given lengths (edge counts) out
/// of a central node.
fn tripod(legs: [usize; 3]) -> CoxeterSystem {
    let n = 1 + legs[0] + legs[1] + legs[2];
    let mut edges = Vec::new();
    let mut next = 1;
    for &len in &legs {
        let mut prev = 0; // center
        for _ in 0..len {
            edges.push((prev, next, fin(3)));
            prev = next;
            next += 1;
        }
    }
    system_from_edges(n, &edges)
}

/// Cycle of `n` nodes, all labels 3.
fn cycle(n: usize) -> CoxeterSystem {
    let mut edges: Vec<(usize, usize, Label)> = (0..n - 1).map(|i| (i, i + 1, fin(3))).collect();
    edges.push((n - 1, 0, fin(3)));
    system_from_edges(n, &edges)
}

/// The irreducible spherical diagrams of rank ≤ `max_rank`, with their names.
///
/// `I_2(p)` is included for p up to `max_i2`.
pub fn spherical_catalog(max_rank: usize, max_i2: u32) -> Vec<(String, CoxeterSystem)> {
    let mut out = Vec::new();
    for n in 1..=max_rank {
        out.push((format!("A_{n}"), a_path(n)));
    }
    for n in 2..=max_rank {
        let mut labels = vec![fin(4)];
        labels.extend(vec![fin(3); n - 2]);
        out.push((format!("B_{n}"), path(&labels)));
    }
    for n in 4..=max_rank {
        out.push((format!("D_{n}"), tripod([1, 1, n - 3])));
    }
    for p in 5..=max_i2 {
        out.push((format!("I_2({p})"), system_from_edges(2, &[(0, 1, fin(p))])));
    }
    if max_rank >= 3 {
        out.push(("H_3".into(), path(&[fin(5), fin(3)])));
    }
    if max_rank >= 4 {
        out.push(("H_4".into(), path(&[fin(5), fin(3), fin(3)])));
        out.push(("F_4".into(), path(&[fin(3), fin(4), fin(3)])));
    }
    if max_rank >= 6 {
        out.push(("E_6".into(), tripod([1, 2, 2])));
    }
    if max_rank >= 7 {
        out.push(("E_7".into(), tripod([1, 2, 3])));
    }
    if max_rank >= 8 {
        out.push(("E_8".into(), tripod([1, 2, 4])));
    }
    out
}

/// The irreducible affine diagrams of rank ≤ `max_rank` (rank = node count),
/// with their names. The subscript is the rank of the underlying finite
/// diagram, one less than the node count.
pub fn affine_catalog(max_rank: usize) -> Vec<(String, CoxeterSystem)> {
    let mut out = Vec::new();
    if max_rank >= 2 {
        out.push(("~A_1".into(), system_from_edges(2, &[(0, 1, INF)])));
    }
    for nodes in 3..=max_rank {
        out.push((format!("~A_{}", nodes - 1), cycle(nodes)));
    }
    if max_rank >= 3 {
        out.push(("~B_2".into(), path(&[fin(4), fin(4)])));
        out.push(("~G_2".into(), path(&[fin(6), fin(3)])));
    }
    // ~B_n: terminal 4, fork at the far end; n+1 nodes, n ≥ 3.
    for nodes in 4..=max_rank {
        let n = nodes - 1;
        let mut edges: Vec<(usize, usize, Label)> = vec![(0, 1, fin(4))];
        for i in 1..n - 2 {
            edges.push((i, i + 1, fin(3)));
        }
        edges.push((n - 2, n - 1, fin(3)));
        edges.push((n - 2, n, fin(3)));
        out.push((format!("~B_{n}"), system_from_edges(nodes, &edges)));
    }
    // ~C_n: 4 at both ends; n+1 nodes, n ≥ 3 (n = 2 is ~B_2 above).
    for nodes in 4..=max_rank {
        let n = nodes - 1;
        let mut labels = vec![fin(4)];
        labels.extend(vec![fin(3); n - 2]);
        labels.push(fin(4));
        out.push((format!("~C_{n}"), path(&labels)));
    }
    // ~D_n: forks at both ends; n+1 nodes, n ≥ 4.
    for nodes in 5..=max_rank {
        let n = nodes - 1;
        let mut edges: Vec<(usize, usize, Label)> = vec![(0, 2, fin(3)), (1, 2, fin(3))];
        for i in 2..n - 2 {
            edges.push((i, i + 1, fin(3)));
        }
        edges.push((n - 2, n - 1, fin(3)));
        edges.push((n - 2, n, fin(3)));
        out.push((format!("~D_{n}"), system_from_edges(nodes, &edges)));
    }
    if max_rank >= 5 {
        out.push(("~F_4".into(), path(&[fin(3), fin(4), fin(3), fin(3)])));
    }
    if max_rank >= 7 {
        out.push(("~E_6".into(), tripod([2, 2, 2])));
    }
    if max_rank >= 8 {
        out.push(("~E_7".into(), tripod([1, 3, 3])));
    }
    if max_rank >= 9 {
        out.push(("~E_8".into(), tripod([1, 2, 5])));
    }
    out
}

/// Labelled-graph isomorphism by backtracking. Ranks here are ≤ 10, so a
/// degree/label-profile pruned search is plenty.
fn isomorphic(a: &CoxeterSystem, b: &CoxeterSystem) -> bool {
    let n = a.rank();
    if n != b.rank() {
        return false;
    }
    let profile = |sys: &CoxeterSystem, i: usize| {
        let mut row: Vec<Label> = (0..n).filter(|&j| j != i).map(|j| sys.label(i, j)).collect();
        row.sort_unstable();
        row
    };
    let pa: Vec<_> = (0..n).map(|i| profile(a, i)).collect();
    let pb: Vec<_> = (0..n).map(|i| profile(b, i)).collect();
    {
        let mut sa = pa.clone();
        let mut sb = pb.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return false;
        }
    }
    // map[i] = image of a's node i in b
    fn extend(
        a: &CoxeterSystem,
        b: &CoxeterSystem,
        pa: &[Vec<Label>],
        pb: &[Vec<Label>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let i = map.len();
        if i == a.rank() {
            return true;
        }
        for cand in 0..b.rank() {
            if used[cand] || pa[i] != pb[cand] {
                continue;
            }
            if (0..i).all(|k| a.label(i, k) == b.label(cand, map[k])) {
                map.push(cand);
                used[cand] = true;
                if extend(a, b, pa, pb, map, used) {
                    return true;
                }
                map.pop();
                used[cand] = false;
            }
        }
        false
    }
    extend(a, b, &pa, &pb, &mut Vec::new(), &mut vec![false; n])
}

/// Name of the catalog diagram isomorphic to `sys`, when there is one.
pub fn catalog_name(sys: &CoxeterSystem) -> Option<String> {
    let n = sys.rank();
    if n == 1 {
        return Some("A_1".into());
    }
    if n == 2 {
        // Rank 2 is fully described by the single label.
        return match sys.label(0, 1) {
            Label::Finite(2) => None, // reducible
            Label::Finite(3) => Some("A_2".into()),
            Label::Finite(4) => Some("B_2".into()),
            Label::Finite(p) => Some(format!("I_2({p})")),
            Label::Infinite => Some("~A_1".into()),
        };
    }
    let max_i2 = 0; // rank-2 handled above
    for (name, member) in spherical_catalog(n, max_i2)
        .into_iter()
        .chain(affine_catalog(n))
    {
        if member.rank() == n && isomorphic(sys, &member) {
            return Some(name);
        }
    }
    None
}
