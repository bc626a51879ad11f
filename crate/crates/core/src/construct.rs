//! Chains, ordinal sums, horizontal sums, direct products and the named small
//! lattices.
//!
//! Composite lattices label each element with where it came from: `i.x` is
//! element `x` of operand `i`, product elements are tuples.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// The `k`-element chain.
pub fn chain(k: usize) -> Result<Lattice> {
    if k == 0 {
        return Err(Error::EmptyChain);
    }
    let covers: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
    crate::lattice::validate_lattice(k, &covers)
}

/// `l ∔ m`: `m` stacked on `l`, with the top of `l` identified with the bottom of `m`.
pub fn ordinal_sum(l: &Lattice, m: &Lattice) -> Lattice {
    ordinal_sum_all(&[l, m]).expect("two operands")
}

/// Ordinal sum of a nonempty list, left to right.
pub fn ordinal_sum_all(parts: &[&Lattice]) -> Result<Lattice> {
    if parts.is_empty() {
        return Err(Error::EmptyOperands);
    }
    // Part i occupies indices offset[i] .. offset[i] + |part| - 1, sharing its
    // bottom with the previous part's top.
    let mut offsets = Vec::with_capacity(parts.len());
    let mut total = 1;
    for p in parts {
        offsets.push(total - 1);
        total += p.len() - 1;
    }
    let mut owner = vec![(0usize, 0usize); total];
    let mut names = vec![String::new(); total];
    for (i, p) in parts.iter().enumerate().rev() {
        for x in p.elements() {
            owner[offsets[i] + x] = (i, x);
            names[offsets[i] + x] = format!("{i}.{}", p.name(x));
        }
    }
    let leq = |x: usize, y: usize| {
        let ((i, a), (j, b)) = (owner[x], owner[y]);
        if i == j {
            parts[i].leq(a, b)
        } else {
            x <= y
        }
    };
    let (lattice, _) = Lattice::from_relation(total, leq, names)?;
    Ok(lattice)
}

/// `⊞` of at least two lattices, each with more than two elements: bottoms and
/// tops identified, interiors pairwise incomparable.
pub fn horizontal_sum(summands: &[&Lattice]) -> Result<Lattice> {
    if summands.len() < 2 {
        return Err(Error::TooFewSummands(summands.len()));
    }
    if let Some((index, s)) = summands.iter().enumerate().find(|(_, s)| s.len() <= 2) {
        return Err(Error::SummandTooSmall { index, size: s.len() });
    }
    let total = summands.iter().map(|s| s.len() - 2).sum::<usize>() + 2;
    let top = total - 1;
    // owner of an interior index: (summand, element)
    let mut owner = vec![(usize::MAX, 0usize); total];
    let mut names = vec![String::new(); total];
    names[0] = "0".to_string();
    names[top] = "1".to_string();
    let mut next = 1;
    for (i, s) in summands.iter().enumerate() {
        for x in 1..s.len() - 1 {
            owner[next] = (i, x);
            names[next] = format!("{i}.{}", s.name(x));
            next += 1;
        }
    }
    let leq = |x: usize, y: usize| {
        if x == 0 || y == top || x == y {
            return true;
        }
        if y == 0 || x == top {
            return false;
        }
        let ((i, a), (j, b)) = (owner[x], owner[y]);
        i == j && summands[i].leq(a, b)
    };
    let (lattice, _) = Lattice::from_relation(total, leq, names)?;
    Ok(lattice)
}

/// Direct product with the componentwise order.
pub fn direct_product(factors: &[&Lattice]) -> Result<Lattice> {
    if factors.is_empty() {
        return Err(Error::EmptyOperands);
    }
    let total: usize = factors.iter().map(|f| f.len()).product();
    let decode = |mut idx: usize| -> Vec<usize> {
        let mut coords = vec![0; factors.len()];
        for (k, f) in factors.iter().enumerate().rev() {
            coords[k] = idx % f.len();
            idx /= f.len();
        }
        coords
    };
    let coords: Vec<Vec<usize>> = (0..total).map(decode).collect();
    let names = if factors.len() == 1 {
        factors[0].names().to_vec()
    } else {
        coords
            .iter()
            .map(|c| {
                let parts: Vec<&str> = c.iter().zip(factors).map(|(&x, f)| f.name(x)).collect();
                format!("({})", parts.join(","))
            })
            .collect()
    };
    let leq = |x: usize, y: usize| coords[x].iter().zip(&coords[y]).zip(factors).all(|((&a, &b), f)| f.leq(a, b));
    let (lattice, _) = Lattice::from_relation(total, leq, names)?;
    Ok(lattice)
}

/// The small lattices that have names in the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Named {
    /// Diamond.
    M3,
    /// Pentagon.
    N5,
    /// Rhombus, the four-element Boolean lattice.
    B2,
    /// The six-element grid `L₂ × L₃`.
    L2xL3,
    /// Pentagon-rhombus gluing: the edge from 0 to the lone atom below the
    /// square is subdivided.
    G,
    /// Pentagon-rhombus gluing: the edge below the doubly covered atom is subdivided.
    H,
    /// Pentagon-rhombus gluing: the edge from the lone atom up to the square's top is subdivided.
    K,
    Gp,
    Hp,
    Kp,
}

impl Named {
    pub const ALL: [Named; 10] =
        [Named::M3, Named::N5, Named::B2, Named::L2xL3, Named::G, Named::H, Named::K, Named::Gp, Named::Hp, Named::Kp];

    pub fn as_str(self) -> &'static str {
        match self {
            Named::M3 => "M3",
            Named::N5 => "N5",
            Named::B2 => "B2",
            Named::L2xL3 => "L2xL3",
            Named::G => "G",
            Named::H => "H",
            Named::K => "K",
            Named::Gp => "Gp",
            Named::Hp => "Hp",
            Named::Kp => "Kp",
        }
    }

    /// Element labels and cover pairs, as drawn.
    ///
    /// The six-element base of G, H, K and their duals is `L₂ × L₃` drawn as
    /// `0 ≺ p, q`; `p, q ≺ r`; `q ≺ s`; `r, s ≺ 1`. Each adds one element that
    /// subdivides a single edge; `a ≺ b` is that subdivided edge.
    pub fn diagram(self) -> (&'static [&'static str], &'static [(&'static str, &'static str)]) {
        match self {
            Named::M3 => {
                (&["0", "a", "b", "c", "1"], &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")])
            }
            Named::N5 => (&["0", "a", "b", "c", "1"], &[("0", "a"), ("0", "b"), ("b", "c"), ("a", "1"), ("c", "1")]),
            Named::B2 => (&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]),
            Named::L2xL3 => (
                &["0", "p", "q", "r", "s", "1"],
                &[("0", "p"), ("0", "q"), ("p", "r"), ("q", "r"), ("q", "s"), ("r", "1"), ("s", "1")],
            ),
            Named::G => (
                &["0", "a", "b", "q", "r", "s", "1"],
                &[("0", "a"), ("a", "b"), ("0", "q"), ("b", "r"), ("q", "r"), ("q", "s"), ("r", "1"), ("s", "1")],
            ),
            Named::H => (
                &["0", "p", "a", "b", "r", "s", "1"],
                &[("0", "p"), ("0", "a"), ("a", "b"), ("p", "r"), ("b", "r"), ("b", "s"), ("r", "1"), ("s", "1")],
            ),
            Named::K => (
                &["0", "a", "q", "b", "r", "s", "1"],
                &[("0", "a"), ("a", "b"), ("b", "r"), ("0", "q"), ("q", "r"), ("q", "s"), ("r", "1"), ("s", "1")],
            ),
            Named::Gp => (
                &["0", "p", "q", "r", "a", "b", "1"],
                &[("0", "p"), ("0", "q"), ("p", "r"), ("q", "r"), ("q", "a"), ("r", "1"), ("a", "b"), ("b", "1")],
            ),
            Named::Hp => (
                &["0", "p", "q", "a", "s", "b", "1"],
                &[("0", "p"), ("0", "q"), ("p", "a"), ("q", "a"), ("q", "s"), ("a", "b"), ("b", "1"), ("s", "1")],
            ),
            Named::Kp => (
                &["0", "p", "q", "r", "a", "b", "1"],
                &[("0", "p"), ("0", "q"), ("p", "r"), ("q", "r"), ("q", "a"), ("a", "b"), ("r", "1"), ("b", "1")],
            ),
        }
    }

    pub fn lattice(self) -> Lattice {
        let (labels, edges) = self.diagram();
        let index = |name: &str| labels.iter().position(|l| *l == name).expect("label in diagram");
        let pairs: Vec<(usize, usize)> = edges.iter().map(|(a, b)| (index(a), index(b))).collect();
        let n = labels.len();
        let mut rel = vec![false; n * n];
        for &(a, b) in &pairs {
            rel[a * n + b] = true;
        }
        let names = labels.iter().map(|s| s.to_string()).collect();
        Lattice::from_relation(n, |x, y| x == y || rel[x * n + y], names).expect("named diagrams are lattices").0
    }
}

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Named {
    type Err = Error;

    fn from_str(s: &str) -> Result<Named> {
        Named::ALL.iter().copied().find(|n| n.as_str() == s).ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Looks up a named lattice.
pub fn named(id: &str) -> Result<Lattice> {
    Ok(id.parse::<Named>()?.lattice())
}
