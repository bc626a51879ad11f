//! All `n`-element lattices up to isomorphism.
//!
//! Removing a maximal join-irreducible element from a lattice leaves a
//! lattice (the rest is still closed under joins and has a bottom). So every
//! `(n+1)`-element lattice arises from an `n`-element one by adding a new
//! element `j` with a chosen lower cover `c` and up-set `U`, such that `j` is a
//! maximal join-irreducible of the result. Candidates are deduplicated by
//! canonical code.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_code, CanonicalCode};
use crate::error::{Error, Result};
use crate::lattice::{default_names, Lattice};

/// Largest `n` the enumerator accepts.
pub const ENUMERATION_BOUND: usize = 11;

/// Effective bound: [`ENUMERATION_BOUND`], lowered by `CONLAT_MAX_N` when set.
pub fn enumeration_bound() -> usize {
    std::env::var("CONLAT_MAX_N")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map_or(ENUMERATION_BOUND, |v| v.min(ENUMERATION_BOUND))
}

/// A lattice from the enumeration together with its canonical code.
#[derive(Debug, Clone)]
pub struct EnumeratedLattice {
    pub lattice: Lattice,
    pub code: CanonicalCode,
}

/// One line of the JSONL enumeration output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationRecord {
    pub format: u32,
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
    pub code: String,
}

impl From<&EnumeratedLattice> for EnumerationRecord {
    fn from(e: &EnumeratedLattice) -> Self {
        EnumerationRecord {
            format: 1,
            n: e.lattice.len(),
            covers: e.lattice.covers().iter().map(|&(a, b)| [a, b]).collect(),
            code: e.code.to_hex(),
        }
    }
}

fn cache() -> &'static Mutex<BTreeMap<usize, Arc<Vec<EnumeratedLattice>>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<Vec<EnumeratedLattice>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn check_bound(n: usize) -> Result<()> {
    let bound = enumeration_bound();
    if n == 0 || n > bound {
        return Err(Error::SizeBound { n, bound });
    }
    Ok(())
}

/// Every `n`-element lattice exactly once up to isomorphism, sorted by
/// canonical code. Results are memoized per `n`.
pub fn enumerate_lattices(n: usize) -> Result<Arc<Vec<EnumeratedLattice>>> {
    check_bound(n)?;
    if let Some(hit) = cache().lock().unwrap().get(&n) {
        return Ok(hit.clone());
    }
    let level = if n == 1 {
        let l = Lattice::from_relation(1, |_, _| true, default_names(1))?.0;
        let code = canonical_code(&l)?;
        vec![EnumeratedLattice { lattice: l, code }]
    } else {
        let smaller = enumerate_lattices(n - 1)?;
        extend_level(&smaller)
    };
    let level = Arc::new(level);
    cache().lock().unwrap().insert(n, level.clone());
    Ok(level)
}

pub fn count_lattices(n: usize) -> Result<usize> {
    Ok(enumerate_lattices(n)?.len())
}

fn extend_level(smaller: &[EnumeratedLattice]) -> Vec<EnumeratedLattice> {
    let found: HashMap<CanonicalCode, Lattice> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            smaller.par_iter().map(|k| one_point_extensions(&k.lattice)).reduce(HashMap::new, |mut a, b| {
                for (code, l) in b {
                    a.entry(code).or_insert(l);
                }
                a
            })
        }
        #[cfg(not(feature = "parallel"))]
        {
            let mut all = HashMap::new();
            for k in smaller {
                for (code, l) in one_point_extensions(&k.lattice) {
                    all.entry(code).or_insert(l);
                }
            }
            all
        }
    };
    let mut out: Vec<EnumeratedLattice> = found
        .into_iter()
        .map(|(code, l)| {
            let n = l.len();
            EnumeratedLattice { lattice: l.with_names(default_names(n)), code }
        })
        .collect();
    out.sort_by(|a, b| a.code.cmp(&b.code));
    out
}

/// Up-closed subsets of `elements` (given in increasing index order).
fn up_sets_within(k: &Lattice, elements: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut chosen = vec![false; k.len()];
    fn go(k: &Lattice, elements: &[usize], i: usize, chosen: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if i == 0 {
            out.push(elements.iter().copied().filter(|&x| chosen[x]).collect());
            return;
        }
        let x = elements[i - 1];
        go(k, elements, i - 1, chosen, out);
        // every upper cover of x lies in the same up-set, so membership is
        // already decided for it
        if k.upper_covers(x).iter().all(|&u| chosen[u]) {
            chosen[x] = true;
            go(k, elements, i - 1, chosen, out);
            chosen[x] = false;
        }
    }
    go(k, elements, elements.len(), &mut chosen, &mut out);
    out
}

/// All lattices `K ∪ {j}` where `j` is a maximal join-irreducible, keyed by
/// canonical code.
fn one_point_extensions(k: &Lattice) -> HashMap<CanonicalCode, Lattice> {
    let m = k.len();
    let mut out = HashMap::new();
    for c in k.elements() {
        let above: Vec<usize> = k.elements().filter(|&u| k.lt(c, u)).collect();
        for upset in up_sets_within(k, &above) {
            if upset.is_empty() && c != k.top() {
                continue;
            }
            let mut in_u = vec![false; m];
            for &u in &upset {
                in_u[u] = true;
            }
            // j ∨ x must exist for every x not below c
            let joins_exist = upset.is_empty()
                || k.elements().filter(|&x| !k.leq(x, c)).all(|x| {
                    let bounds: Vec<usize> = upset.iter().copied().filter(|&u| k.leq(x, u)).collect();
                    bounds.first().is_some_and(|&least| bounds.iter().all(|&u| k.leq(least, u)))
                });
            if !joins_exist {
                continue;
            }
            let j = m;
            let leq = |x: usize, y: usize| match (x == j, y == j) {
                (false, false) => k.leq(x, y),
                (false, true) => k.leq(x, c),
                (true, false) => in_u[y],
                (true, true) => true,
            };
            let Ok((l, map)) = Lattice::from_relation(m + 1, leq, default_names(m + 1)) else {
                continue;
            };
            let new_j = map[j];
            let maximal =
                l.is_join_irreducible(new_j) && l.elements().all(|y| !(l.lt(new_j, y) && l.is_join_irreducible(y)));
            if !maximal {
                continue;
            }
            let code = canonical_code(&l).expect("within canonical bound");
            out.entry(code).or_insert(l);
        }
    }
    out
}

/// Splits an enumeration into `parts` groups by a stable key derived from
/// each canonical code. Group membership does not depend on thread count or
/// run.
pub fn partition(lattices: &[EnumeratedLattice], parts: usize) -> Vec<Vec<&EnumeratedLattice>> {
    let parts = parts.max(1);
    let mut out = vec![Vec::new(); parts];
    for e in lattices {
        // FNV-1a over the code bytes
        let key = e
            .code
            .as_bytes()
            .iter()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
        out[(key % parts as u64) as usize].push(e);
    }
    out
}
