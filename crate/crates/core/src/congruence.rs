//! Congruences of finite lattices: principal congruences by union-find
//! closure, the full congruence lattice, atoms and quotients.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Op, Result};
use crate::lattice::Lattice;

static JOIN_REPAIRS: AtomicUsize = AtomicUsize::new(0);

/// Number of times [`congruence_join`] had to run the compatibility closure
/// after merging two congruences. Transitive closure of the union of two
/// congruences is already a congruence, so this should stay at zero.
pub fn join_repairs() -> usize {
    JOIN_REPAIRS.load(Ordering::Relaxed)
}

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; false if they were already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// An equivalence on the elements of a lattice, stored as a normalized block
/// map: block ids are numbered in order of each block's least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    block_of: Vec<usize>,
}

impl Congruence {
    /// The identity relation Δ.
    pub fn identity(n: usize) -> Congruence {
        Congruence { block_of: (0..n).collect() }
    }

    /// The full relation ∇.
    pub fn full(n: usize) -> Congruence {
        Congruence { block_of: vec![0; n] }
    }

    fn from_union_find(uf: &mut UnionFind, n: usize) -> Congruence {
        let mut root_block = vec![usize::MAX; n];
        let mut next = 0;
        let block_of = (0..n)
            .map(|x| {
                let r = uf.find(x);
                if root_block[r] == usize::MAX {
                    root_block[r] = next;
                    next += 1;
                }
                root_block[r]
            })
            .collect();
        Congruence { block_of }
    }

    pub fn lattice_size(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn block_map(&self) -> &[usize] {
        &self.block_of
    }

    pub fn num_blocks(&self) -> usize {
        self.block_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    /// Blocks as sorted element lists, in block-id order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.num_blocks() == self.block_of.len()
    }

    pub fn is_full(&self) -> bool {
        self.num_blocks() <= 1
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Congruence) -> bool {
        let mut image = vec![usize::MAX; self.num_blocks()];
        self.block_of.iter().zip(&other.block_of).all(|(&b, &o)| {
            if image[b] == usize::MAX {
                image[b] = o;
            }
            image[b] == o
        })
    }

    /// Least element of each block.
    fn block_minima(&self) -> Vec<usize> {
        let mut minima = vec![usize::MAX; self.num_blocks()];
        for (x, &b) in self.block_of.iter().enumerate() {
            minima[b] = minima[b].min(x);
        }
        minima
    }

    /// Block list, e.g. `[[0,1],[2],[3,4]]`.
    pub fn to_json_blocks(&self) -> Vec<Vec<usize>> {
        self.blocks()
    }

    /// Blocks written with the lattice's element names, e.g. `{0,a}{b,c,1}`.
    pub fn display_with(&self, l: &Lattice) -> String {
        self.blocks()
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|&x| l.name(x)).collect::<Vec<_>>().join(",")))
            .collect()
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "[{}]", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))?;
        }
        f.write_str("]")
    }
}

impl Serialize for Congruence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Congruence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        partition_to_congruence(&blocks).map_err(serde::de::Error::custom)
    }
}

/// Equivalence from a block list, without any compatibility check.
fn partition_to_congruence(blocks: &[Vec<usize>]) -> Result<Congruence> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut uf = UnionFind::new(n);
    let mut seen = vec![false; n];
    for block in blocks {
        if block.is_empty() {
            return Err(Error::BadPartition { n, msg: "empty block".into() });
        }
        for &x in block {
            if x >= n {
                return Err(Error::BadPartition { n, msg: format!("element {x} out of range") });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::BadPartition { n, msg: format!("element {x} appears twice") });
            }
            uf.union(block[0], x);
        }
    }
    Ok(Congruence::from_union_find(&mut uf, n))
}

/// First violation of compatibility, comparing every element with the least
/// element of its block.
fn find_violation(l: &Lattice, theta: &Congruence) -> Option<(usize, usize, usize, Op)> {
    let minima = theta.block_minima();
    for x in l.elements() {
        let m = minima[theta.block_of(x)];
        if m == x {
            continue;
        }
        for c in l.elements() {
            if !theta.related(l.meet(m, c), l.meet(x, c)) {
                return Some((m, x, c, Op::Meet));
            }
            if !theta.related(l.join(m, c), l.join(x, c)) {
                return Some((m, x, c, Op::Join));
            }
        }
    }
    None
}

pub fn is_congruence(l: &Lattice, theta: &Congruence) -> bool {
    theta.lattice_size() == l.len() && find_violation(l, theta).is_none()
}

/// `eq(π)` for a partition `π` of the elements, if it is compatible with meet
/// and join.
pub fn make_congruence(l: &Lattice, partition: &[Vec<usize>]) -> Result<Congruence> {
    let theta = partition_to_congruence(partition)?;
    if theta.lattice_size() != l.len() {
        return Err(Error::BadPartition {
            n: l.len(),
            msg: format!("partition covers {} elements", theta.lattice_size()),
        });
    }
    match find_violation(l, &theta) {
        None => Ok(theta),
        Some((x, y, c, op)) => Err(Error::NotCompatible { x, y, c, op }),
    }
}

/// Closes `uf` under meet and join translations, starting from the pairs in
/// `queue` (which must already be merged in `uf`).
fn close(l: &Lattice, uf: &mut UnionFind, mut queue: VecDeque<(usize, usize)>) {
    while let Some((x, y)) = queue.pop_front() {
        for c in l.elements() {
            for (u, v) in [(l.meet(x, c), l.meet(y, c)), (l.join(x, c), l.join(y, c))] {
                if uf.union(u, v) {
                    queue.push_back((u, v));
                }
            }
        }
    }
}

/// `con(a, b)`: the least congruence identifying `a` and `b`.
pub fn principal_congruence(l: &Lattice, a: usize, b: usize) -> Congruence {
    let mut uf = UnionFind::new(l.len());
    let mut queue = VecDeque::new();
    if uf.union(a, b) {
        queue.push_back((a, b));
    }
    close(l, &mut uf, queue);
    Congruence::from_union_find(&mut uf, l.len())
}

fn check_size(l: &Lattice, theta: &Congruence) -> Result<()> {
    if theta.lattice_size() != l.len() {
        return Err(Error::SizeMismatch { expected: l.len(), found: theta.lattice_size() });
    }
    Ok(())
}

/// Join in Con(L): merge both partitions, then close under the operations.
pub fn congruence_join(l: &Lattice, a: &Congruence, b: &Congruence) -> Result<Congruence> {
    check_size(l, a)?;
    check_size(l, b)?;
    let n = l.len();
    let mut uf = UnionFind::new(n);
    let mut first_in_block = vec![usize::MAX; n];
    for theta in [a, b] {
        first_in_block.fill(usize::MAX);
        for x in 0..n {
            let blk = theta.block_of(x);
            if first_in_block[blk] == usize::MAX {
                first_in_block[blk] = x;
            } else {
                uf.union(first_in_block[blk], x);
            }
        }
    }
    let merged = Congruence::from_union_find(&mut uf, n);
    if find_violation(l, &merged).is_none() {
        return Ok(merged);
    }
    JOIN_REPAIRS.fetch_add(1, Ordering::Relaxed);
    let queue = (0..n).map(|x| (uf.find(x), x)).filter(|(r, x)| r != x).collect();
    close(l, &mut uf, queue);
    Ok(Congruence::from_union_find(&mut uf, n))
}

/// Meet in Con(L): blockwise intersection.
pub fn congruence_meet(l: &Lattice, a: &Congruence, b: &Congruence) -> Result<Congruence> {
    check_size(l, a)?;
    check_size(l, b)?;
    let n = l.len();
    let mut uf = UnionFind::new(n);
    let mut first = std::collections::HashMap::new();
    for x in 0..n {
        let key = (a.block_of(x), b.block_of(x));
        let rep = *first.entry(key).or_insert(x);
        uf.union(rep, x);
    }
    Ok(Congruence::from_union_find(&mut uf, n))
}

fn fast_join(n: usize, a: &Congruence, b: &Congruence) -> Congruence {
    let mut uf = UnionFind::new(n);
    let mut first_in_block = vec![usize::MAX; n];
    for theta in [a, b] {
        first_in_block.fill(usize::MAX);
        for x in 0..n {
            let blk = theta.block_of(x);
            if first_in_block[blk] == usize::MAX {
                first_in_block[blk] = x;
            } else {
                uf.union(first_in_block[blk], x);
            }
        }
    }
    Congruence::from_union_find(&mut uf, n)
}

/// Principal congruences of all cover pairs, deduplicated, in cover order.
pub fn cover_congruences(l: &Lattice) -> Vec<Congruence> {
    let mut seen = HashSet::new();
    l.covers().iter().map(|&(a, b)| principal_congruence(l, a, b)).filter(|t| seen.insert(t.clone())).collect()
}

/// Every congruence of `l`, sorted from Δ upward: by decreasing block count,
/// then by block map.
///
/// Any congruence is the join of the principal congruences of the cover pairs
/// it collapses, so closing `{Δ}` under joins with those generators reaches
/// all of Con(L).
pub fn all_congruences(l: &Lattice) -> Vec<Congruence> {
    let n = l.len();
    let generators = cover_congruences(l);
    let start = Congruence::identity(n);
    let mut seen: HashSet<Congruence> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(theta) = queue.pop_front() {
        for g in &generators {
            if g.refines(&theta) {
                continue;
            }
            let joined = fast_join(n, &theta, g);
            if !seen.contains(&joined) {
                seen.insert(joined.clone());
                queue.push_back(joined);
            }
        }
    }
    let mut out: Vec<Congruence> = seen.into_iter().collect();
    sort_congruences(&mut out);
    out
}

fn sort_congruences(list: &mut [Congruence]) {
    list.sort_by(|a, b| b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.cmp(b)));
}

/// Con(L) ordered by inclusion, as a lattice whose names are the block lists.
pub fn congruence_lattice(l: &Lattice) -> Lattice {
    congruence_lattice_with_elements(l).0
}

/// Con(L) as a lattice together with the congruence at each of its elements.
pub fn congruence_lattice_with_elements(l: &Lattice) -> (Lattice, Vec<Congruence>) {
    let cons = all_congruences(l);
    let names = cons.iter().map(|t| t.display_with(l)).collect();
    let (lattice, map) = Lattice::from_relation(cons.len(), |i, j| cons[i].refines(&cons[j]), names)
        .expect("congruences of a lattice form a lattice");
    let mut at = vec![Congruence::identity(0); cons.len()];
    for (theta, &i) in cons.into_iter().zip(&map) {
        at[i] = theta;
    }
    (lattice, at)
}

/// Minimal congruences other than Δ.
pub fn congruence_atoms(l: &Lattice) -> Result<Vec<Congruence>> {
    if l.len() < 2 {
        return Err(Error::TrivialLattice);
    }
    let nontrivial: Vec<Congruence> = all_congruences(l).into_iter().filter(|t| !t.is_identity()).collect();
    Ok(nontrivial.iter().filter(|t| !nontrivial.iter().any(|s| s != *t && s.refines(t))).cloned().collect())
}

/// `L/θ` with the map from elements of `l` to elements of the quotient.
///
/// `x/θ ≤ y/θ` iff `x ∨ y ∈ y/θ`.
pub fn quotient(l: &Lattice, theta: &Congruence) -> Result<(Lattice, Vec<usize>)> {
    check_size(l, theta)?;
    let minima = theta.block_minima();
    let k = minima.len();
    let names = theta
        .blocks()
        .iter()
        .map(|b| {
            if b.len() == 1 {
                l.name(b[0]).to_string()
            } else {
                format!("{{{}}}", b.iter().map(|&x| l.name(x)).collect::<Vec<_>>().join(","))
            }
        })
        .collect();
    let (q, map) = Lattice::from_relation(k, |i, j| theta.block_of(l.join(minima[i], minima[j])) == j, names)?;
    let elem_map = l.elements().map(|x| map[theta.block_of(x)]).collect();
    Ok((q, elem_map))
}
