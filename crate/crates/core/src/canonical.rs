//! Canonical codes and isomorphism tests for small lattices.
//!
//! Elements are first split into classes by an invariant (height, depth, cover
//! degrees, up/down-set sizes) refined by the classes of their covers. A
//! canonical labeling is any labeling that lists the classes in sorted order;
//! among those, the one with the lexicographically least cover bitstring wins.
//! Interchangeable elements (same lower and upper covers) are tried once.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Largest lattice accepted by [`canonical_code`].
pub const CANONICAL_BOUND: usize = 16;

/// Isomorphism-invariant code: equal iff the lattices are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(text: &str) -> Option<CanonicalCode> {
        if !text.len().is_multiple_of(2) {
            return None;
        }
        (0..text.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(text.get(i..i + 2)?, 16).ok())
            .collect::<Option<Vec<u8>>>()
            .map(CanonicalCode)
    }

    /// Element count recorded in the code.
    pub fn size(&self) -> usize {
        self.0[0] as usize
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Isomorphism-invariant class of every element, refined to a fixpoint.
/// Class ids sort by height first, so listing classes in order yields a
/// linear extension.
pub fn element_classes(l: &Lattice) -> Vec<usize> {
    let heights = l.heights();
    let depths = l.depths();
    let initial: Vec<Vec<usize>> = l
        .elements()
        .map(|x| {
            vec![
                heights[x],
                usize::MAX - depths[x],
                l.lower_covers(x).len(),
                l.upper_covers(x).len(),
                l.down_set_len(x),
                l.up_set_len(x),
            ]
        })
        .collect();
    let mut classes = rank(&initial);
    let mut count = distinct(&classes);
    loop {
        let signatures: Vec<Vec<usize>> = l
            .elements()
            .map(|x| {
                let mut lo: Vec<usize> = l.lower_covers(x).iter().map(|&y| classes[y]).collect();
                let mut hi: Vec<usize> = l.upper_covers(x).iter().map(|&y| classes[y]).collect();
                lo.sort_unstable();
                hi.sort_unstable();
                let mut sig = vec![classes[x], lo.len()];
                sig.extend(lo);
                sig.push(usize::MAX);
                sig.extend(hi);
                sig
            })
            .collect();
        let refined = rank(&signatures);
        let refined_count = distinct(&refined);
        classes = refined;
        if refined_count == count {
            return classes;
        }
        count = refined_count;
    }
}

/// Replaces each key by its rank among the distinct keys.
fn rank(keys: &[Vec<usize>]) -> Vec<usize> {
    let mut sorted: Vec<&Vec<usize>> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(&k).unwrap()).collect()
}

fn distinct(classes: &[usize]) -> usize {
    classes.iter().max().map_or(0, |m| m + 1)
}

/// For each element, the previous element with identical lower and upper
/// covers (or itself). Swapping two such twins is an automorphism, so twins
/// only need to be placed in index order.
fn previous_twin(l: &Lattice) -> Vec<usize> {
    l.elements()
        .map(|x| {
            (0..x)
                .rev()
                .find(|&y| l.lower_covers(y) == l.lower_covers(x) && l.upper_covers(y) == l.upper_covers(x))
                .unwrap_or(x)
        })
        .collect()
}

struct Search<'a> {
    l: &'a Lattice,
    slot_class: Vec<usize>,
    classes: Vec<usize>,
    twin: Vec<usize>,
    used: Vec<bool>,
    current: Vec<usize>,
    /// Column bits of the best labeling so far, one column per position.
    best: Option<(Vec<u64>, Vec<usize>)>,
    columns: Vec<u64>,
}

impl Search<'_> {
    fn column(&self, x: usize) -> u64 {
        // bit i set iff the element at position i is covered by x
        self.current.iter().enumerate().fold(
            0u64,
            |acc, (i, &y)| {
                if self.l.covers_pair(y, x) {
                    acc | 1 << i
                } else {
                    acc
                }
            },
        )
    }

    fn run(&mut self) {
        let pos = self.current.len();
        if pos == self.l.len() {
            let better = match &self.best {
                None => true,
                Some((best, _)) => compare_columns(&self.columns, best) == std::cmp::Ordering::Less,
            };
            if better {
                self.best = Some((self.columns.clone(), self.current.clone()));
            }
            return;
        }
        let want = self.slot_class[pos];
        for x in self.l.elements() {
            if self.used[x] || self.classes[x] != want {
                continue;
            }
            let t = self.twin[x];
            if t != x && !self.used[t] {
                continue;
            }
            let col = self.column(x);
            self.columns.push(col);
            let worse = match &self.best {
                Some((best, _)) => compare_columns(&self.columns, &best[..=pos]) == std::cmp::Ordering::Greater,
                None => false,
            };
            if !worse {
                self.used[x] = true;
                self.current.push(x);
                self.run();
                self.current.pop();
                self.used[x] = false;
            }
            self.columns.pop();
        }
    }
}

fn compare_columns(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (&x, &y))| cmp_column(x, y, i))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Lexicographic comparison of the first `len` bits, bit 0 first.
fn cmp_column(a: u64, b: u64, len: usize) -> std::cmp::Ordering {
    if a == b {
        return std::cmp::Ordering::Equal;
    }
    let diff = (a ^ b) & if len >= 64 { u64::MAX } else { (1u64 << len) - 1 };
    if diff == 0 {
        return std::cmp::Ordering::Equal;
    }
    let first = diff.trailing_zeros();
    if a >> first & 1 == 1 {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Less
    }
}

/// Canonical code and the canonical labeling (`order[i]` is the element at
/// position `i`).
pub fn canonical_form(l: &Lattice) -> Result<(CanonicalCode, Vec<usize>)> {
    let n = l.len();
    if n > CANONICAL_BOUND {
        return Err(Error::SizeBound { n, bound: CANONICAL_BOUND });
    }
    let classes = element_classes(l);
    let mut slot_class = classes.clone();
    slot_class.sort_unstable();
    let mut search = Search {
        l,
        slot_class,
        classes,
        twin: previous_twin(l),
        used: vec![false; n],
        current: Vec::with_capacity(n),
        best: None,
        columns: Vec::with_capacity(n),
    };
    search.run();
    let (columns, order) = search.best.expect("at least one labeling");

    let mut bytes = vec![n as u8];
    let mut acc = 0u8;
    let mut filled = 0;
    for (j, col) in columns.iter().enumerate() {
        for i in 0..j {
            acc = acc << 1 | (col >> i & 1) as u8;
            filled += 1;
            if filled == 8 {
                bytes.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        bytes.push(acc << (8 - filled));
    }
    Ok((CanonicalCode(bytes), order))
}

pub fn canonical_code(l: &Lattice) -> Result<CanonicalCode> {
    Ok(canonical_form(l)?.0)
}

/// An isomorphism `l → m` as an element map, if one exists.
///
/// Backtracks over class-respecting assignments in linear-extension order,
/// checking covers against already placed elements. Works for lattices well
/// beyond [`CANONICAL_BOUND`].
pub fn is_isomorphic(l: &Lattice, m: &Lattice) -> Option<Vec<usize>> {
    if l.len() != m.len() || l.covers().len() != m.covers().len() {
        return None;
    }
    let cl = element_classes(l);
    let cm = element_classes(m);
    let mut sl = cl.clone();
    let mut sm = cm.clone();
    sl.sort_unstable();
    sm.sort_unstable();
    if sl != sm {
        return None;
    }
    let mut order: Vec<usize> = l.elements().collect();
    order.sort_by_key(|&x| (cl[x], x));
    let mut map = vec![usize::MAX; l.len()];
    let mut used = vec![false; m.len()];
    let twin = previous_twin(m);
    if extend(l, m, &cl, &cm, &twin, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    l: &Lattice,
    m: &Lattice,
    cl: &[usize],
    cm: &[usize],
    twin: &[usize],
    order: &[usize],
    pos: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if pos == order.len() {
        return true;
    }
    let x = order[pos];
    for y in m.elements() {
        if used[y] || cm[y] != cl[x] {
            continue;
        }
        if twin[y] != y && !used[twin[y]] {
            continue;
        }
        let lower_ok = l.lower_covers(x).len() == m.lower_covers(y).len()
            && l.lower_covers(x).iter().all(|&w| map[w] != usize::MAX && m.covers_pair(map[w], y));
        if !lower_ok {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if extend(l, m, cl, cm, twin, order, pos + 1, map, used) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}
