//! Brute-force reference implementations. They share nothing with the
//! library beyond the `Lattice` tables they read.

#![allow(dead_code)]

use std::collections::BTreeSet;

use conlat::{Congruence, Lattice};

/// Calls `visit` with every set partition of `0..n` as a restricted growth
/// string.
pub fn for_each_partition(n: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(i: usize, next: usize, rgs: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if i == rgs.len() {
            visit(rgs);
            return;
        }
        for b in 0..=next {
            rgs[i] = b;
            go(i + 1, if b == next { next + 1 } else { next }, rgs, visit);
        }
    }
    let mut rgs = vec![0; n];
    go(0, 0, &mut rgs, visit);
}

/// Every partition compatible with meet and join, as sorted block lists.
pub fn brute_force_congruences(l: &Lattice) -> BTreeSet<Vec<Vec<usize>>> {
    let n = l.len();
    let mut out = BTreeSet::new();
    for_each_partition(n, &mut |rgs| {
        let compatible = (0..n).all(|x| {
            (x + 1..n).all(|y| {
                rgs[x] != rgs[y]
                    || (0..n).all(|c| rgs[l.meet(x, c)] == rgs[l.meet(y, c)] && rgs[l.join(x, c)] == rgs[l.join(y, c)])
            })
        });
        if compatible {
            out.insert(blocks_of(rgs));
        }
    });
    out
}

pub fn blocks_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); count];
    for (x, &b) in labels.iter().enumerate() {
        blocks[b].push(x);
    }
    blocks.retain(|b| !b.is_empty());
    blocks.sort();
    blocks
}

pub fn library_congruences(l: &Lattice) -> BTreeSet<Vec<Vec<usize>>> {
    conlat::all_congruences(l).iter().map(Congruence::blocks).collect()
}

/// Heap's algorithm over all permutations of `items`.
pub fn for_each_permutation(items: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
    fn go(k: usize, items: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
        if k <= 1 {
            visit(items);
            return;
        }
        for i in 0..k {
            go(k - 1, items, visit);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    let k = items.len();
    go(k, items, visit);
}

/// Tries every bijection `l → m` that preserves the order both ways.
pub fn brute_isomorphic(l: &Lattice, m: &Lattice) -> bool {
    if l.len() != m.len() {
        return false;
    }
    let n = l.len();
    let mut found = false;
    let mut perm: Vec<usize> = (0..n).collect();
    for_each_permutation(&mut perm, &mut |p| {
        if !found && (0..n).all(|x| (0..n).all(|y| l.leq(x, y) == m.leq(p[x], p[y]))) {
            found = true;
        }
    });
    found
}

/// Number of `n`-element lattices up to isomorphism, counted without the
/// library's enumerator or canonical codes.
///
/// Every lattice with `n >= 2` is a bounded poset; its interior is an
/// arbitrary poset on `n - 2` points. Interiors are generated as transitive
/// relations compatible with the natural order of the labels, closed off with
/// a bottom and a top, tested for the lattice property directly, and reduced
/// to a canonical form by minimizing the order matrix over all relabelings of
/// the interior.
pub fn poset_filter_lattice_count(n: usize) -> usize {
    if n <= 2 {
        return 1;
    }
    let m = n - 2;
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let mut seen: BTreeSet<Vec<bool>> = BTreeSet::new();
    for mask in 0u64..1 << pairs.len() {
        let mut lt = vec![vec![false; m]; m];
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                lt[i][j] = true;
            }
        }
        let transitive = (0..m).all(|i| (0..m).all(|j| !lt[i][j] || (0..m).all(|k| !lt[j][k] || lt[i][k])));
        if !transitive {
            continue;
        }
        // 0 is the new bottom, interior point i becomes i + 1, n - 1 the top
        let leq = |x: usize, y: usize| -> bool {
            x == y || x == 0 || y == n - 1 || (x != n - 1 && y != 0 && lt[x - 1][y - 1])
        };
        if !is_lattice_order(n, &leq) {
            continue;
        }
        let mut best: Option<Vec<bool>> = None;
        let mut interior: Vec<usize> = (0..m).collect();
        for_each_permutation(&mut interior, &mut |p| {
            let mut key = Vec::with_capacity(m * m);
            for i in 0..m {
                for j in 0..m {
                    key.push(lt[p[i]][p[j]]);
                }
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        });
        seen.insert(best.expect("at least one permutation"));
    }
    seen.len()
}

/// Every pair has a least upper bound and a greatest lower bound.
pub fn is_lattice_order(n: usize, leq: &dyn Fn(usize, usize) -> bool) -> bool {
    (0..n).all(|x| {
        (0..n).all(|y| {
            let uppers: Vec<usize> = (0..n).filter(|&z| leq(x, z) && leq(y, z)).collect();
            let lowers: Vec<usize> = (0..n).filter(|&z| leq(z, x) && leq(z, y)).collect();
            uppers.iter().any(|&u| uppers.iter().all(|&v| leq(u, v)))
                && lowers.iter().any(|&u| lowers.iter().all(|&v| leq(v, u)))
        })
    })
}
