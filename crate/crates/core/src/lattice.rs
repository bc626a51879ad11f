//! Validated finite lattices.
//!
//! Elements are the integers `0..n`, numbered along a linear extension of the
//! order: `x <= y` implies `x <= y` as integers, `0` is the bottom and `n - 1`
//! the top. Every constructor in the crate re-indexes to this convention.

use std::fmt;

use crate::error::{Bound, Error, Result};

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD).max(1)
}

#[inline]
fn test_bit(row: &[u64], i: usize) -> bool {
    row[i / WORD] >> (i % WORD) & 1 == 1
}

#[inline]
fn set_bit(row: &mut [u64], i: usize) {
    row[i / WORD] |= 1 << (i % WORD);
}

fn lowest_bit(row: &[u64]) -> Option<usize> {
    row.iter().enumerate().find(|(_, w)| **w != 0).map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
}

fn highest_bit(row: &[u64]) -> Option<usize> {
    row.iter()
        .enumerate()
        .rev()
        .find(|(_, w)| **w != 0)
        .map(|(k, w)| k * WORD + (WORD - 1 - w.leading_zeros() as usize))
}

fn bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(k * WORD + t)
        })
    })
}

/// A finite lattice with precomputed order matrix, covers and operation tables.
#[derive(Clone)]
pub struct Lattice {
    n: usize,
    words: usize,
    /// Row `x` holds the up-set of `x`.
    up: Vec<u64>,
    /// Row `x` holds the down-set of `x`.
    down: Vec<u64>,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    meet: Vec<u32>,
    join: Vec<u32>,
    names: Vec<String>,
}

impl PartialEq for Lattice {
    /// Labeled equality: same size and same cover list. Names are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.covers == other.covers
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice").field("n", &self.n).field("covers", &self.covers).finish()
    }
}

/// Checks a cover list and builds the lattice it generates.
///
/// The reflexive-transitive closure of `covers` must be a partial order whose
/// integer labels form a linear extension, and every pair of elements must
/// have a meet and a join. Redundant pairs in `covers` are allowed; the stored
/// cover list is recomputed as the transitive reduction.
pub fn validate_lattice(n: usize, covers: &[(usize, usize)]) -> Result<Lattice> {
    if n == 0 {
        return Err(Error::Empty);
    }
    for &(a, b) in covers {
        for element in [a, b] {
            if element >= n {
                return Err(Error::OutOfRange { element, n });
            }
        }
    }
    let words = words_for(n);
    let mut up = vec![0u64; n * words];
    for x in 0..n {
        set_bit(&mut up[x * words..(x + 1) * words], x);
    }
    for &(a, b) in covers {
        set_bit(&mut up[a * words..(a + 1) * words], b);
    }
    transitive_closure(n, words, &mut up);
    check_antisymmetric(n, words, &up)?;
    for x in 0..n {
        if let Some(y) = bits(&up[x * words..(x + 1) * words]).find(|&y| y < x) {
            return Err(Error::BadIndexing { lo: x, hi: y });
        }
    }
    Lattice::from_up_rows(n, up, default_names(n))
}

pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn transitive_closure(n: usize, words: usize, up: &mut [u64]) {
    // Warshall over bitset rows.
    for k in 0..n {
        let row_k: Vec<u64> = up[k * words..(k + 1) * words].to_vec();
        for x in 0..n {
            if x != k && test_bit(&up[x * words..(x + 1) * words], k) {
                for (w, kw) in up[x * words..(x + 1) * words].iter_mut().zip(&row_k) {
                    *w |= kw;
                }
            }
        }
    }
}

fn check_antisymmetric(n: usize, words: usize, up: &[u64]) -> Result<()> {
    for a in 0..n {
        for b in bits(&up[a * words..(a + 1) * words]) {
            if b != a && test_bit(&up[b * words..(b + 1) * words], a) {
                return Err(Error::NotAPoset { a: a.min(b), b: a.max(b) });
            }
        }
    }
    Ok(())
}

impl Lattice {
    /// Builds a lattice from an arbitrary partial order on `0..n`, re-indexing
    /// to the linear-extension convention.
    ///
    /// Returns the lattice and the map from input index to new index. The
    /// relation is closed reflexively and transitively before use.
    pub fn from_relation<F>(n: usize, leq: F, names: Vec<String>) -> Result<(Lattice, Vec<usize>)>
    where
        F: Fn(usize, usize) -> bool,
    {
        if n == 0 {
            return Err(Error::Empty);
        }
        let words = words_for(n);
        let mut raw = vec![0u64; n * words];
        for x in 0..n {
            let row = &mut raw[x * words..(x + 1) * words];
            set_bit(row, x);
            for y in 0..n {
                if leq(x, y) {
                    set_bit(row, y);
                }
            }
        }
        transitive_closure(n, words, &mut raw);
        check_antisymmetric(n, words, &raw)?;

        // Down-set sizes strictly increase along the order.
        let mut down_size = vec![0usize; n];
        for x in 0..n {
            for y in bits(&raw[x * words..(x + 1) * words]) {
                down_size[y] += 1;
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (down_size[x], x));
        let mut new_index = vec![0usize; n];
        for (i, &x) in order.iter().enumerate() {
            new_index[x] = i;
        }
        let mut up = vec![0u64; n * words];
        for x in 0..n {
            let nx = new_index[x];
            for y in bits(&raw[x * words..(x + 1) * words]) {
                set_bit(&mut up[nx * words..(nx + 1) * words], new_index[y]);
            }
        }
        let mut new_names = vec![String::new(); n];
        for (x, name) in names.into_iter().enumerate().take(n) {
            new_names[new_index[x]] = name;
        }
        for (i, name) in new_names.iter_mut().enumerate() {
            if name.is_empty() {
                *name = i.to_string();
            }
        }
        let lattice = Lattice::from_up_rows(n, up, new_names)?;
        Ok((lattice, new_index))
    }

    /// Up-set rows already closed and indexed by a linear extension.
    fn from_up_rows(n: usize, up: Vec<u64>, names: Vec<String>) -> Result<Lattice> {
        let words = words_for(n);
        let mut down = vec![0u64; n * words];
        for x in 0..n {
            for y in bits(&up[x * words..(x + 1) * words]) {
                set_bit(&mut down[y * words..(y + 1) * words], x);
            }
        }

        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        let mut common = vec![0u64; words];
        for x in 0..n {
            for y in x..n {
                let (dx, dy) = (&down[x * words..(x + 1) * words], &down[y * words..(y + 1) * words]);
                for (c, (a, b)) in common.iter_mut().zip(dx.iter().zip(dy)) {
                    *c = a & b;
                }
                let m = highest_bit(&common)
                    .filter(|&m| {
                        let dm = &down[m * words..(m + 1) * words];
                        common.iter().zip(dm).all(|(c, d)| c & !d == 0)
                    })
                    .ok_or(Error::NotALattice { x, y, bound: Bound::Meet })?;

                let (ux, uy) = (&up[x * words..(x + 1) * words], &up[y * words..(y + 1) * words]);
                for (c, (a, b)) in common.iter_mut().zip(ux.iter().zip(uy)) {
                    *c = a & b;
                }
                let j = lowest_bit(&common)
                    .filter(|&j| {
                        let uj = &up[j * words..(j + 1) * words];
                        common.iter().zip(uj).all(|(c, u)| c & !u == 0)
                    })
                    .ok_or(Error::NotALattice { x, y, bound: Bound::Join })?;

                meet[x * n + y] = m as u32;
                meet[y * n + x] = m as u32;
                join[x * n + y] = j as u32;
                join[y * n + x] = j as u32;
            }
        }

        // Transitive reduction: b covers a iff [a, b] = {a, b}.
        let mut covers = Vec::new();
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for a in 0..n {
            let ua = &up[a * words..(a + 1) * words];
            for b in bits(ua) {
                if b == a {
                    continue;
                }
                let db = &down[b * words..(b + 1) * words];
                let between = ua.iter().zip(db).map(|(u, d)| (u & d).count_ones()).sum::<u32>();
                if between == 2 {
                    covers.push((a, b));
                    upper[a].push(b);
                    lower[b].push(a);
                }
            }
        }

        Ok(Lattice { n, words, up, down, covers, upper, lower, meet, join, names })
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.n - 1
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        test_bit(&self.up[x * self.words..(x + 1) * self.words], y)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// True iff `y` covers `x`.
    pub fn covers_pair(&self, x: usize, y: usize) -> bool {
        self.upper[x].contains(&y)
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n + y] as usize
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y] as usize
    }

    /// Cover pairs `(a, b)` with `a ≺ b`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn up_set(&self, x: usize) -> Vec<usize> {
        bits(&self.up[x * self.words..(x + 1) * self.words]).collect()
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        bits(&self.down[x * self.words..(x + 1) * self.words]).collect()
    }

    pub fn up_set_len(&self, x: usize) -> usize {
        self.up[x * self.words..(x + 1) * self.words].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn down_set_len(&self, x: usize) -> usize {
        self.down[x * self.words..(x + 1) * self.words].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    /// Replaces the display labels. Panics if the count is wrong.
    pub fn with_names(mut self, names: Vec<String>) -> Lattice {
        assert_eq!(names.len(), self.n, "one name per element");
        self.names = names;
        self
    }

    /// Meet-irreducible: exactly one upper cover. The top is not.
    pub fn is_meet_irreducible(&self, x: usize) -> bool {
        self.upper[x].len() == 1
    }

    /// Join-irreducible: exactly one lower cover. The bottom is not.
    pub fn is_join_irreducible(&self, x: usize) -> bool {
        self.lower[x].len() == 1
    }

    /// `[a, b]` is a narrows: `b` is the only upper cover of `a` and `a` the
    /// only lower cover of `b`.
    pub fn is_narrows(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.upper[a] == [b] && self.lower[b] == [a]
    }

    /// Upper covers of the bottom.
    pub fn atoms(&self) -> Vec<usize> {
        self.upper[0].clone()
    }

    /// Lower covers of the top.
    pub fn coatoms(&self) -> Vec<usize> {
        self.lower[self.n - 1].clone()
    }

    /// Length of the longest chain from the bottom to each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.n];
        for x in 0..self.n {
            h[x] = self.lower[x].iter().map(|&y| h[y] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Length of the longest chain from each element to the top.
    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.n];
        for x in (0..self.n).rev() {
            d[x] = self.upper[x].iter().map(|&y| d[y] + 1).max().unwrap_or(0);
        }
        d
    }

    pub fn is_chain(&self) -> bool {
        self.covers.len() + 1 == self.n && self.upper.iter().all(|u| u.len() <= 1)
    }

    pub fn is_distributive(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                self.elements().all(|z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z)))
            })
        })
    }

    /// Boolean lattice: distributive with `2^atoms` elements.
    pub fn is_boolean(&self) -> bool {
        let atoms = self.upper[0].len();
        if self.n == 1 {
            return true;
        }
        atoms < usize::BITS as usize && self.n == 1 << atoms && self.is_distributive()
    }

    /// The order-dual lattice, with index `i` mapped to `n - 1 - i`.
    pub fn dual(&self) -> Lattice {
        let n = self.n;
        let words = self.words;
        let mut up = vec![0u64; n * words];
        for x in 0..n {
            let nx = n - 1 - x;
            for y in bits(&self.down[x * words..(x + 1) * words]) {
                set_bit(&mut up[nx * words..(nx + 1) * words], n - 1 - y);
            }
        }
        let names = self.names.iter().rev().cloned().collect();
        Lattice::from_up_rows(n, up, names).expect("dual of a lattice is a lattice")
    }

    /// The interval `[a, b]` as a lattice, with the map from its indices to
    /// elements of `self`.
    pub fn interval(&self, a: usize, b: usize) -> Result<(Lattice, Vec<usize>)> {
        for element in [a, b] {
            if element >= self.n {
                return Err(Error::OutOfRange { element, n: self.n });
            }
        }
        if !self.leq(a, b) {
            return Err(Error::EmptyInterval { a, b });
        }
        let members: Vec<usize> = self.elements().filter(|&x| self.leq(a, x) && self.leq(x, b)).collect();
        let m = members.len();
        let words = words_for(m);
        let mut up = vec![0u64; m * words];
        for (i, &x) in members.iter().enumerate() {
            for (j, &y) in members.iter().enumerate() {
                if self.leq(x, y) {
                    set_bit(&mut up[i * words..(i + 1) * words], j);
                }
            }
        }
        let names = members.iter().map(|&x| self.names[x].clone()).collect();
        let lattice = Lattice::from_up_rows(m, up, names).expect("intervals are sublattices");
        Ok((lattice, members))
    }

    /// All filters: nonempty up-closed subsets closed under meets.
    pub fn filters(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut chosen = vec![false; self.n];
        self.filters_from(self.n, &mut chosen, &mut out);
        out.retain(|f| !f.is_empty());
        out.sort();
        out
    }

    /// All ideals: nonempty down-closed subsets closed under joins.
    pub fn ideals(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut out: Vec<Vec<usize>> = self
            .dual()
            .filters()
            .into_iter()
            .map(|f| {
                let mut ideal: Vec<usize> = f.into_iter().map(|x| n - 1 - x).collect();
                ideal.sort_unstable();
                ideal
            })
            .collect();
        out.sort();
        out
    }

    /// Meet-closed up-sets, deciding elements from the top down. An element
    /// may be left out only if it is not the meet of two chosen ones, so
    /// every branch extends to a filter.
    fn filters_from(&self, remaining: usize, chosen: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push((0..self.n).filter(|&x| chosen[x]).collect());
            return;
        }
        let x = remaining - 1;
        let above: Vec<usize> = (x + 1..self.n).filter(|&y| chosen[y]).collect();
        let is_meet = above.iter().any(|&y| above.iter().any(|&z| self.meet(y, z) == x));
        if !is_meet {
            self.filters_from(x, chosen, out);
        }
        if self.upper[x].iter().all(|&u| chosen[u]) {
            chosen[x] = true;
            self.filters_from(x, chosen, out);
            chosen[x] = false;
        }
    }
}

/// Element-wise lookups mirroring the free functions used throughout the docs.
pub fn meet(l: &Lattice, x: usize, y: usize) -> usize {
    l.meet(x, y)
}

pub fn join(l: &Lattice, x: usize, y: usize) -> usize {
    l.join(x, y)
}
