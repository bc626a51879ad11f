//! Congruence counts of all small lattices, the extremal counts read off from
//! them, representability witnesses, and a verification suite that checks
//! the known results about the largest congruence counts.
//!
//! `NCL(n)` is the set of values `|Con(L)|` over `n`-element lattices `L`,
//! `Gncl(p, n)` its `p`-th largest member and `Lnc(p, n)` the lattices
//! attaining it. A triple `(k, n, n)` is representable when some `n`-element
//! lattice has exactly `k` congruences; its filters and ideals then number
//! `n` each.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_code, is_isomorphic, CanonicalCode};
use crate::congruence::{all_congruences, congruence_lattice};
use crate::construct::{chain, direct_product, named, ordinal_sum};
use crate::enumerate::{count_lattices, enumerate_lattices, enumeration_bound, partition};
use crate::error::{Error, Result};
use crate::expr::{build, random_expr, LatticeExpr};
use crate::lattice::Lattice;

pub const DEFAULT_WITNESS_CAP: usize = 64;

/// Number of lattices on `n` unlabeled elements, `n = 1, 2, ...`.
pub const LATTICE_COUNTS: [usize; 11] = [1, 1, 1, 2, 5, 15, 53, 222, 1078, 5994, 37622];

/// Histogram of `|Con(L)|` over all `n`-element lattices up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub n: usize,
    /// `|Con(L)|` → number of isomorphism classes.
    pub histogram: BTreeMap<usize, usize>,
    /// `|Con(L)|` → smallest canonical codes (hex) attaining it, capped.
    pub witnesses: BTreeMap<usize, Vec<String>>,
}

impl CensusRecord {
    fn empty(n: usize) -> CensusRecord {
        CensusRecord { n, histogram: BTreeMap::new(), witnesses: BTreeMap::new() }
    }

    /// Pointwise sum of histograms; witness lists are merged and re-capped.
    pub fn merge(mut self, other: CensusRecord, cap: usize) -> CensusRecord {
        for (k, m) in other.histogram {
            *self.histogram.entry(k).or_default() += m;
        }
        for (k, codes) in other.witnesses {
            let list = self.witnesses.entry(k).or_default();
            list.extend(codes);
            list.sort();
            list.dedup();
            list.truncate(cap);
        }
        self
    }

    pub fn total(&self) -> usize {
        self.histogram.values().sum()
    }

    /// `NCL(n)` in increasing order.
    pub fn ncl(&self) -> Vec<usize> {
        self.histogram.keys().copied().collect()
    }

    /// The `p`-th largest value of `NCL(n)`, `p ≥ 1`.
    pub fn gncl(&self, p: usize) -> Option<usize> {
        if p == 0 {
            return None;
        }
        self.histogram.keys().rev().nth(p - 1).copied()
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Report<'a> {
            format: u32,
            n: usize,
            histogram: &'a BTreeMap<usize, usize>,
            ncl: Vec<usize>,
            gncl: BTreeMap<usize, usize>,
            witnesses: &'a BTreeMap<usize, Vec<String>>,
        }
        let ncl = self.ncl();
        let gncl = (1..=ncl.len()).map(|p| (p, self.gncl(p).expect("p within range"))).collect();
        serde_json::to_string_pretty(&Report {
            format: 1,
            n: self.n,
            histogram: &self.histogram,
            ncl,
            gncl,
            witnesses: &self.witnesses,
        })
        .expect("plain data serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,con_count,multiplicity\n");
        for (k, m) in &self.histogram {
            out.push_str(&format!("{},{},{}\n", self.n, k, m));
        }
        out
    }
}

type CountCache = Mutex<BTreeMap<usize, Arc<Vec<usize>>>>;

fn count_cache() -> &'static CountCache {
    static CACHE: OnceLock<CountCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `|Con(L)|` for every lattice of [`enumerate_lattices`]`(n)`, in the same
/// order. Memoized per `n`.
pub fn congruence_counts(n: usize) -> Result<Arc<Vec<usize>>> {
    if let Some(hit) = count_cache().lock().unwrap().get(&n) {
        return Ok(hit.clone());
    }
    let lattices = enumerate_lattices(n)?;
    #[cfg(feature = "parallel")]
    let counts: Vec<usize> = {
        use rayon::prelude::*;
        lattices.par_iter().map(|e| all_congruences(&e.lattice).len()).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let counts: Vec<usize> = lattices.iter().map(|e| all_congruences(&e.lattice).len()).collect();
    let counts = Arc::new(counts);
    count_cache().lock().unwrap().insert(n, counts.clone());
    Ok(counts)
}

/// Census with the default witness cap.
pub fn census(n: usize) -> Result<CensusRecord> {
    census_with_cap(n, DEFAULT_WITNESS_CAP)
}

/// Census keeping at most `cap` witness codes per congruence count. The
/// multiplicities are always exact.
pub fn census_with_cap(n: usize, cap: usize) -> Result<CensusRecord> {
    let lattices = enumerate_lattices(n)?;
    let counts = congruence_counts(n)?;
    let count_of: BTreeMap<&CanonicalCode, usize> =
        lattices.iter().zip(counts.iter()).map(|(e, &c)| (&e.code, c)).collect();
    let parts = partition(&lattices, 16);
    let tally = |part: &Vec<&crate::enumerate::EnumeratedLattice>| {
        let mut record = CensusRecord::empty(n);
        for e in part {
            let k = count_of[&e.code];
            *record.histogram.entry(k).or_default() += 1;
            record.witnesses.entry(k).or_default().push(e.code.to_hex());
        }
        for list in record.witnesses.values_mut() {
            list.sort();
            list.truncate(cap);
        }
        record
    };
    #[cfg(feature = "parallel")]
    let partials: Vec<CensusRecord> = {
        use rayon::prelude::*;
        parts.par_iter().map(tally).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<CensusRecord> = parts.iter().map(tally).collect();
    Ok(partials.into_iter().fold(CensusRecord::empty(n), |acc, r| acc.merge(r, cap)))
}

/// `Gncl(p, n)`, or `None` when `NCL(n)` has fewer than `p` values.
pub fn gncl(p: usize, n: usize) -> Result<Option<usize>> {
    Ok(census(n)?.gncl(p))
}

/// `Lnc(p, n)`: every `n`-element lattice with `Gncl(p, n)` congruences, one
/// per isomorphism class, sorted by canonical code.
pub fn lnc(p: usize, n: usize) -> Result<Vec<Lattice>> {
    let Some(target) = gncl(p, n)? else {
        return Ok(Vec::new());
    };
    with_congruence_count(target, n)
}

fn with_congruence_count(k: usize, n: usize) -> Result<Vec<Lattice>> {
    let lattices = enumerate_lattices(n)?;
    let counts = congruence_counts(n)?;
    Ok(lattices.iter().zip(counts.iter()).filter(|(_, &c)| c == k).map(|(e, _)| e.lattice.clone()).collect())
}

/// A triple `(k, n, n)`: `k` congruences on `n` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CfiTriple {
    pub k: usize,
    pub n: usize,
}

impl CfiTriple {
    pub fn new(k: usize, n: usize) -> CfiTriple {
        CfiTriple { k, n }
    }

    /// Necessary conditions: `k ≥ 1`, `n ≥ 1`, and `k = 1` exactly when `n = 1`.
    pub fn is_admissible(&self) -> bool {
        self.k >= 1 && self.n >= 1 && (self.k == 1) == (self.n == 1)
    }
}

impl fmt::Display for CfiTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.k, self.n, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CfiMode {
    Exhaustive,
    Construct,
}

/// A lattice with its measured congruence, filter and ideal counts.
#[derive(Debug, Clone)]
pub struct CfiWitness {
    pub lattice: Lattice,
    /// The expression it was built from, in construction mode.
    pub recipe: Option<String>,
    pub congruences: usize,
    pub filters: usize,
    pub ideals: usize,
}

impl CfiWitness {
    pub fn measure(lattice: Lattice, recipe: Option<String>) -> CfiWitness {
        let congruences = all_congruences(&lattice).len();
        let filters = lattice.filters().len();
        let ideals = lattice.ideals().len();
        CfiWitness { lattice, recipe, congruences, filters, ideals }
    }

    /// `(|Con|, |Filt|, |Id|)`.
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.congruences, self.filters, self.ideals)
    }

    pub fn represents(&self, t: CfiTriple) -> bool {
        self.triple() == (t.k, t.n, t.n) && self.lattice.len() == t.n
    }
}

/// Explicit witnesses `(k, n, expression)` for the representability of
/// `(k, n, n)` with `n ∈ {7, 9, 11}`.
pub const CONSTRUCTION_TABLE: &[(usize, usize, &str)] = &[
    (2, 7, "C(3) # C(3) # C(3) # C(3) # C(3)"),
    (4, 7, "(C(3) # C(3) # C(3) # C(3)) + C(2)"),
    (8, 7, "M3 + C(3)"),
    (16, 7, "B2 + B2"),
    (32, 7, "B2 + C(4)"),
    (64, 7, "C(7)"),
    (7, 7, "C(3) # (C(2) + B2 + C(2))"),
    (7, 9, "C(3) # (C(2) + M3 + C(3))"),
    (8, 9, "(C(3) # C(3) # C(3) # C(3)) + B2"),
    (9, 9, "(C(2) + B2 + C(3)) # C(3) # C(3)"),
    (10, 9, "C(3) # (C(2) + (C(4) # C(4)) + C(2))"),
    (7, 11, "(C(2) + (C(2) + (C(4) # C(3) # C(3))) + C(2)) # C(3) # C(3)"),
    (8, 11, "(C(2) + (C(3) # (C(2) + B2 + C(2))) + C(2)) # C(3) # C(3)"),
    (9, 11, "(C(2) + M3 + C(3) + C(2)) # C(3) # C(3)"),
    (10, 11, "(C(3) # C(3) # C(3) # C(3) # C(3)) + N5"),
    (11, 11, "C(3) # (C(2) + (C(3) # (C(2) + N5 + C(2))) + C(2))"),
    (12, 11, "(C(4) # C(3) # C(3)) + M3 + C(2)"),
];

fn parsed(text: &str) -> LatticeExpr {
    crate::expr::parse_expr(text).expect("built-in expressions parse")
}

fn horizontal_of(first: LatticeExpr, copies_of_c3: usize) -> LatticeExpr {
    let mut parts = vec![first];
    parts.extend(std::iter::repeat_n(LatticeExpr::Chain(3), copies_of_c3));
    LatticeExpr::horizontal(parts)
}

/// An expression for an `n`-element lattice with exactly `k` congruences,
/// when one of the known constructions applies.
pub fn construction_recipe(k: usize, n: usize) -> Option<LatticeExpr> {
    if k == 0 || n == 0 {
        return None;
    }
    if k == 1 {
        return (n == 1).then_some(LatticeExpr::Chain(1));
    }
    if let Some(&(_, _, text)) = CONSTRUCTION_TABLE.iter().find(|&&(tk, tn, _)| tk == k && tn == n) {
        return Some(parsed(text));
    }
    if n >= 2 && k == 1 << (n - 1).min(63) {
        return Some(LatticeExpr::Chain(n));
    }
    // ⊞ of at least three copies of C(3) is simple
    if k == 2 && n >= 5 {
        return Some(LatticeExpr::horizontal(vec![LatticeExpr::Chain(3); n - 2]));
    }
    if k == 3 && n >= 6 {
        return Some(horizontal_of(LatticeExpr::Chain(4), n - 4));
    }
    if k == 4 && n >= 6 {
        return Some(LatticeExpr::ordinal(vec![
            LatticeExpr::Chain(2),
            LatticeExpr::horizontal(vec![LatticeExpr::Chain(3); n - 3]),
        ]));
    }
    if k == 5 && n >= 7 {
        return Some(LatticeExpr::horizontal(
            [LatticeExpr::Chain(4), LatticeExpr::Chain(4)]
                .into_iter()
                .chain(std::iter::repeat_n(LatticeExpr::Chain(3), n - 6))
                .collect(),
        ));
    }
    if k == 6 && n >= 7 {
        return Some(LatticeExpr::ordinal(vec![LatticeExpr::Chain(2), horizontal_of(LatticeExpr::Chain(4), n - 5)]));
    }
    // extremal families
    if n >= 4 && k == 1 << (n - 2) {
        return Some(parsed(&format!("B2 + C({})", n - 3)));
    }
    if n >= 5 && k == 5 << (n - 5) {
        return Some(parsed(&format!("N5 + C({})", n - 4)));
    }
    if n >= 6 && k == 1 << (n - 3) {
        return Some(parsed(&format!("(C(2) * C(3)) + C({})", n - 5)));
    }
    if n >= 6 && k == 7 << (n - 6) {
        return Some(parsed(&format!("(C(3) # C(5)) + C({})", n - 5)));
    }
    // doubling by an ordinal summand C(2)
    if k.is_power_of_two() && n >= 8 {
        if let Some(x) = construction_recipe(k / 2, n - 1) {
            return Some(LatticeExpr::ordinal(vec![x, LatticeExpr::Chain(2)]));
        }
    }
    // C(3) ⊞ (C(2) ∔ X ∔ C(2)) has three more congruences and elements than X
    if n >= 10 && n != 11 && k >= 7 && k <= n + 1 {
        if let Some(x) = construction_recipe(k - 3, n - 3) {
            return Some(LatticeExpr::horizontal(vec![
                LatticeExpr::Chain(3),
                LatticeExpr::ordinal(vec![LatticeExpr::Chain(2), x, LatticeExpr::Chain(2)]),
            ]));
        }
    }
    None
}

/// Lattices witnessing `(k, n, n)`.
///
/// Exhaustive mode returns every witness up to isomorphism (bounded by the
/// enumerator); construction mode returns the known construction, if any,
/// after checking its counts.
pub fn cfi_check(k: usize, n: usize, mode: CfiMode) -> Result<Vec<CfiWitness>> {
    match mode {
        CfiMode::Exhaustive => {
            let bound = enumeration_bound();
            if n == 0 || n > bound {
                return Err(Error::SizeBound { n, bound });
            }
            Ok(with_congruence_count(k, n)?.into_iter().map(|l| CfiWitness::measure(l, None)).collect())
        }
        CfiMode::Construct => {
            let Some(expr) = construction_recipe(k, n) else {
                return Ok(Vec::new());
            };
            let witness = CfiWitness::measure(expr.build()?, Some(expr.to_string()));
            Ok(if witness.represents(CfiTriple::new(k, n)) { vec![witness] } else { Vec::new() })
        }
    }
}

/// The structural families known (or, for rank 5, conjectured) to make up
/// `Lnc(p, n)`, as labeled expressions.
pub fn rank_family(p: usize, n: usize) -> Vec<String> {
    let mut out = Vec::new();
    match p {
        1 if n >= 1 => out.push(format!("C({n})")),
        2 if n >= 4 => {
            for k in 1..=n - 3 {
                out.push(format!("C({k}) + B2 + C({})", n - k - 2));
            }
        }
        3 if n >= 5 => {
            for k in 1..=n - 4 {
                out.push(format!("C({k}) + N5 + C({})", n - k - 3));
            }
        }
        4 if n >= 6 => {
            for k in 1..=n - 5 {
                out.push(format!("C({k}) + (C(2) * C(3)) + C({})", n - k - 4));
            }
            for k in 1..=n - 5 {
                for m in 1..=n - 5 - k {
                    out.push(format!("C({k}) + B2 + C({m}) + B2 + C({})", n - k - m - 4));
                }
            }
        }
        5 if n >= 6 => {
            for inner in ["C(3) # C(5)", "C(4) # C(4)"] {
                for k in 1..=n - 5 {
                    out.push(format!("C({k}) + ({inner}) + C({})", n - k - 4));
                }
            }
        }
        _ => {}
    }
    out
}

/// The value `Gncl(p, n)` takes on the families of [`rank_family`].
pub fn rank_formula(p: usize, n: usize) -> Option<usize> {
    match p {
        1 if n >= 1 => Some(1 << (n - 1)),
        2 if n >= 4 => Some(1 << (n - 2)),
        3 if n >= 5 => Some(5 << (n - 5)),
        4 if n >= 6 => Some(1 << (n - 3)),
        5 if n >= 6 => Some(7 << (n - 6)),
        _ => None,
    }
}

/// The lattice `Con(L)` is expected to be isomorphic to for `L ∈ Lnc(p, n)`.
pub fn expected_congruence_lattice(p: usize, n: usize) -> Option<Lattice> {
    let boolean = |m: usize| -> Lattice {
        let c2 = chain(2).expect("nonempty");
        let factors: Vec<&Lattice> = std::iter::repeat_n(&c2, m).collect();
        if m == 0 {
            chain(1).expect("nonempty")
        } else {
            direct_product(&factors).expect("nonempty")
        }
    };
    match p {
        1 if n >= 1 => Some(boolean(n - 1)),
        2 if n >= 4 => Some(boolean(n - 2)),
        3 if n >= 5 => {
            let tail = build("C(2) + B2").expect("valid");
            Some(if n == 5 { tail } else { direct_product(&[&boolean(n - 5), &tail]).expect("nonempty") })
        }
        4 if n >= 6 => Some(boolean(n - 3)),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Nothing within the requested size range to check.
    Skipped,
    ConjectureAgrees,
    ConjectureDisagrees,
}

impl CheckStatus {
    pub fn is_failure(self) -> bool {
        self == CheckStatus::Fail
    }

    pub fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
            CheckStatus::ConjectureAgrees => "CONJECTURE agrees",
            CheckStatus::ConjectureDisagrees => "CONJECTURE disagrees",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub claim: String,
    pub status: CheckStatus,
    pub evidence: Vec<String>,
    /// Wall time of the check; left out of the JSON when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub format: u32,
    pub max_n: usize,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    /// True when no check failed. Conjecture checks never fail.
    pub fn passed(&self) -> bool {
        !self.checks.iter().any(|c| c.status.is_failure())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// The same report with runtimes dropped, for reproducible output.
    pub fn without_timings(mut self) -> VerificationReport {
        for c in &mut self.checks {
            c.runtime_ms = None;
        }
        self
    }

    /// Human-readable report. Runtimes are omitted so that the text is
    /// reproducible.
    pub fn to_text(&self) -> String {
        let mut out = format!("verification up to n = {}\n", self.max_n);
        for c in &self.checks {
            out.push_str(&format!("[{}] {}: {}\n", c.status.label(), c.name, c.claim));
            for line in &c.evidence {
                out.push_str(&format!("    {line}\n"));
            }
        }
        let failed = self.checks.iter().filter(|c| c.status.is_failure()).count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

/// Outcome of one check body: pass/fail plus evidence lines.
struct Outcome {
    ok: bool,
    skipped: bool,
    evidence: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { ok: true, skipped: true, evidence: Vec::new() }
    }

    fn record(&mut self, ok: bool, line: String) {
        self.skipped = false;
        self.ok &= ok;
        self.evidence.push(if ok { line } else { format!("MISMATCH {line}") });
    }
}

fn run_check(name: &str, claim: &str, conjecture: bool, body: impl FnOnce(&mut Outcome) -> Result<()>) -> Check {
    let start = Instant::now();
    let mut outcome = Outcome::new();
    if let Err(e) = body(&mut outcome) {
        outcome.record(false, format!("error: {e}"));
    }
    let status = match (conjecture, outcome.skipped, outcome.ok) {
        (_, true, _) => CheckStatus::Skipped,
        (true, false, true) => CheckStatus::ConjectureAgrees,
        (true, false, false) => CheckStatus::ConjectureDisagrees,
        (false, false, true) => CheckStatus::Pass,
        (false, false, false) => CheckStatus::Fail,
    };
    Check {
        name: name.to_string(),
        claim: claim.to_string(),
        status,
        evidence: outcome.evidence,
        runtime_ms: Some(start.elapsed().as_secs_f64() * 1000.0),
    }
}

fn codes_of(lattices: &[Lattice]) -> Result<BTreeSet<CanonicalCode>> {
    lattices.iter().map(canonical_code).collect()
}

fn family_codes(p: usize, n: usize) -> Result<BTreeMap<CanonicalCode, Vec<String>>> {
    let mut out: BTreeMap<CanonicalCode, Vec<String>> = BTreeMap::new();
    for text in rank_family(p, n) {
        out.entry(canonical_code(&build(&text)?)?).or_default().push(text);
    }
    Ok(out)
}

/// Compares `Lnc(p, n)` with the family of [`rank_family`].
fn compare_family(o: &mut Outcome, p: usize, n: usize) -> Result<()> {
    let value = gncl(p, n)?;
    let expected = rank_formula(p, n);
    o.record(value == expected, format!("n={n}: Gncl({p},n) = {value:?}, formula gives {expected:?}"));
    let found = codes_of(&lnc(p, n)?)?;
    let family = family_codes(p, n)?;
    let family_set: BTreeSet<CanonicalCode> = family.keys().cloned().collect();
    let params: Vec<String> = family.values().map(|v| v.join(" = ")).collect();
    o.record(
        found == family_set,
        format!(
            "n={n}: |Lnc({p},n)| = {}, family has {} classes: {}",
            found.len(),
            family_set.len(),
            params.join("; ")
        ),
    );
    Ok(())
}

/// Runs every registered check on lattices of up to `max_n` elements.
/// `max_n` is clamped to the enumeration bound.
pub fn verify_claims(max_n: usize) -> VerificationReport {
    let max_n = max_n.min(enumeration_bound());
    let sizes = || 1..=max_n;
    let mut checks = Vec::new();

    checks.push(run_check(
        "lattice-counts",
        "the numbers of n-element lattices up to isomorphism are 1, 1, 1, 2, 5, 15, 53, 222, 1078, 5994, 37622",
        false,
        |o| {
            for n in sizes() {
                let c = count_lattices(n)?;
                o.record(c == LATTICE_COUNTS[n - 1], format!("n={n}: {c} lattices"));
            }
            Ok(())
        },
    ));

    checks.push(run_check(
        "census-totals",
        "the census histogram sums to the number of lattices, and 2^(n-1) is attained exactly once",
        false,
        |o| {
            for n in sizes() {
                let r = census(n)?;
                let top = r.histogram.iter().next_back().map(|(&k, &m)| (k, m));
                o.record(
                    r.total() == count_lattices(n)? && top == Some((1 << (n - 1), 1)),
                    format!("n={n}: total {}, largest count {:?}", r.total(), top),
                );
            }
            Ok(())
        },
    ));

    checks.push(run_check(
        "five-element-census",
        "the five-element lattices M3, N5, L2+B2, B2+L2, L5 have 2, 5, 8, 8, 16 congruences",
        false,
        |o| {
            if max_n < 5 {
                return Ok(());
            }
            let r = census(5)?;
            let expected = BTreeMap::from([(2, 1), (5, 1), (8, 2), (16, 1)]);
            o.record(r.histogram == expected, format!("histogram {:?}", r.histogram));
            for (text, k) in [("M3", 2), ("N5", 5), ("C(2) + B2", 8), ("B2 + C(2)", 8), ("C(5)", 16)] {
                let code = canonical_code(&build(text)?)?.to_hex();
                let listed = r.witnesses.get(&k).is_some_and(|w| w.contains(&code));
                o.record(listed, format!("{text}: {k} congruences"));
            }
            Ok(())
        },
    ));

    checks.push(run_check(
        "six-element-census",
        "the six-element congruence counts are 2,3,4,4,6,6,7,7,8,10,10,16,16,16,32",
        false,
        |o| {
            if max_n < 6 {
                return Ok(());
            }
            let r = census(6)?;
            let mut multiset: Vec<usize> = Vec::new();
            for (&k, &m) in &r.histogram {
                multiset.extend(std::iter::repeat_n(k, m));
            }
            o.record(multiset == [2, 3, 4, 4, 6, 6, 7, 7, 8, 10, 10, 16, 16, 16, 32], format!("counts {multiset:?}"));
            for text in ["C(3) # (B2 + C(2))", "C(3) # (C(2) + B2)"] {
                let k = all_congruences(&build(text)?).len();
                o.record(k == 6, format!("{text}: {k} congruences, expected 6"));
            }
            Ok(())
        },
    ));

    checks.push(run_check(
        "six-element-extremes",
        "the third, fourth and fifth largest congruence counts of six-element lattices are 10, 8 and 7",
        false,
        |o| {
            if max_n < 6 {
                return Ok(());
            }
            let r = census(6)?;
            let g: Vec<Option<usize>> = (3..=5).map(|p| r.gncl(p)).collect();
            o.record(g == [Some(10), Some(8), Some(7)], format!("Gncl(3..5, 6) = {g:?}"));
            Ok(())
        },
    ));

    checks.push(run_check(
        "gluing-congruences",
        "the pentagon-rhombus gluings G, H, K and their duals have 9 congruences each",
        false,
        |o| {
            for id in ["G", "H", "K", "Gp", "Hp", "Kp"] {
                let k = all_congruences(&named(id)?).len();
                o.record(k == 9, format!("{id}: {k} congruences, expected 9"));
            }
            Ok(())
        },
    ));

    let ranks: [(usize, &str, &str, usize); 4] = [
        (1, "largest-count", "|Con(L)| <= 2^(n-1), with equality iff L is the chain L_n", 1),
        (
            2,
            "second-largest-count",
            "for n >= 4 the next value is 2^(n-2), attained iff L = L_k + B2 + L_(n-k-2)",
            4,
        ),
        (
            3,
            "third-largest-count",
            "for n >= 5 the next value is 5*2^(n-5), attained iff L = L_k + N5 + L_(n-k-3), giving n-4 classes",
            5,
        ),
        (
            4,
            "fourth-largest-count",
            "for n >= 6 the next value is 2^(n-3), attained iff L = L_k + (L2 x L3) + L_(n-k-4) or (n >= 7) L = L_k + B2 + L_m + B2 + L_(n-k-m-4)",
            6,
        ),
    ];
    for (p, name, claim, from) in ranks {
        checks.push(run_check(name, claim, false, |o| {
            for n in sizes().filter(|&n| n >= from) {
                compare_family(o, p, n)?;
                if p == 3 {
                    let size = lnc(3, n)?.len();
                    o.record(size == n - 4, format!("n={n}: {size} witnesses, n-4 = {}", n - 4));
                }
            }
            Ok(())
        }));
    }

    checks.push(run_check("fifth-largest-count", "for n >= 6 the fifth largest value is 7*2^(n-6)", false, |o| {
        for n in sizes().filter(|&n| n >= 6) {
            let value = gncl(5, n)?;
            o.record(value == rank_formula(5, n), format!("n={n}: Gncl(5,n) = {value:?}"));
        }
        Ok(())
    }));

    checks.push(run_check(
        "congruence-lattice-structure",
        "Con(L) is L2^(n-1), L2^(n-2), L2^(n-5) x (L2 + B2), L2^(n-3) for L attaining the four largest counts",
        false,
        |o| {
            for n in sizes() {
                for p in 1..=4 {
                    let Some(expected) = expected_congruence_lattice(p, n) else { continue };
                    for l in lnc(p, n)? {
                        let con = congruence_lattice(&l);
                        let ok = is_isomorphic(&con, &expected).is_some();
                        let boolean = con.is_boolean();
                        o.record(ok, format!("n={n} rank {p}: |Con| = {}, Boolean: {boolean}", con.len()));
                    }
                }
            }
            Ok(())
        },
    ));

    checks.push(run_check(
        "powers-of-two-representable",
        "for n >= 7 and 1 <= j <= n-1, some n-element lattice has exactly 2^j congruences",
        false,
        |o| {
            for n in 7..=12 {
                let missing: Vec<usize> = (1..n)
                    .filter(|&j| cfi_check(1 << j, n, CfiMode::Construct).map_or(true, |w| w.is_empty()))
                    .collect();
                o.record(missing.is_empty(), format!("n={n}: constructions for 2^1..2^{}, missing {missing:?}", n - 1));
            }
            if max_n >= 7 {
                let ncl = census(7)?.ncl();
                let missing: Vec<usize> = (1..7).map(|j| 1 << j).filter(|k| !ncl.contains(k)).collect();
                o.record(missing.is_empty(), format!("n=7 exhaustive: NCL(7) = {ncl:?}"));
            }
            Ok(())
        },
    ));

    checks.push(run_check(
        "small-counts-representable",
        "for n >= 7, n != 8 and 2 <= k <= n+1, some n-element lattice has exactly k congruences",
        false,
        |o| {
            for n in [7, 9, 10, 11, 12, 13, 14] {
                let missing: Vec<usize> = (2..=n + 1)
                    .filter(|&k| cfi_check(k, n, CfiMode::Construct).map_or(true, |w| w.is_empty()))
                    .collect();
                o.record(missing.is_empty(), format!("n={n}: constructions for 2..{}, missing {missing:?}", n + 1));
            }
            if max_n >= 7 {
                let ncl = census(7)?.ncl();
                let missing: Vec<usize> = (2..=8).filter(|k| !ncl.contains(k)).collect();
                o.record(missing.is_empty(), format!("n=7 exhaustive: missing {missing:?}"));
            }
            Ok(())
        },
    ));

    checks.push(run_check(
        "construction-table",
        "each listed construction has the stated numbers of congruences, filters and ideals",
        false,
        |o| {
            for &(k, n, text) in CONSTRUCTION_TABLE {
                let w = CfiWitness::measure(build(text)?, Some(text.to_string()));
                o.record(
                    w.represents(CfiTriple::new(k, n)),
                    format!("{text}: {:?}, expected ({k}, {n}, {n})", w.triple()),
                );
            }
            Ok(())
        },
    ));

    checks.push(run_check("ordinal-sum-doubling", "|Con(L + L2)| = 2|Con(L)| for any lattice L", false, |o| {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let c2 = chain(2)?;
        let mut bad = Vec::new();
        for _ in 0..200 {
            let e = random_expr(&mut rng, 10);
            let l = e.build()?;
            let before = all_congruences(&l).len();
            let after = all_congruences(&ordinal_sum(&l, &c2)).len();
            if after != 2 * before {
                bad.push(format!("{e}: {before} -> {after}"));
            }
        }
        o.record(bad.is_empty(), format!("200 random expressions, violations {bad:?}"));
        Ok(())
    }));

    checks.push(run_check(
        "power-triples",
        "if an m-element lattice has k congruences, the s-fold ordinal sum of it has k^s congruences on sm-s+1 elements",
        false,
        |o| {
            for k in 2..=8 {
                let x = construction_recipe(k, 7).ok_or(Error::UnknownName(format!("recipe ({k}, 7)")))?;
                let square = LatticeExpr::ordinal(vec![x.clone(), x.clone()]);
                let w = CfiWitness::measure(square.build()?, Some(square.to_string()));
                o.record(w.represents(CfiTriple::new(k * k, 13)), format!("{square}: {:?}", w.triple()));
                if k <= 3 {
                    let cube = LatticeExpr::ordinal(vec![x.clone(), x.clone(), x]);
                    let w = CfiWitness::measure(cube.build()?, Some(cube.to_string()));
                    o.record(w.represents(CfiTriple::new(k * k * k, 19)), format!("{cube}: {:?}", w.triple()));
                }
            }
            Ok(())
        },
    ));

    checks.push(run_check(
        "fifth-largest-witnesses",
        "conjecture: for n >= 6, |Con(L)| = 7*2^(n-6) iff L = L_k + (L3 # L5) + L_(n-k-4) or L = L_k + (L4 # L4) + L_(n-k-4)",
        true,
        |o| {
            for n in (6..=8).filter(|&n| n <= max_n) {
                compare_family(o, 5, n)?;
            }
            Ok(())
        },
    ));

    VerificationReport { format: 1, max_n, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_censuses() {
        assert_eq!(census(1).unwrap().histogram, BTreeMap::from([(1, 1)]));
        assert_eq!(census(5).unwrap().histogram, BTreeMap::from([(2, 1), (5, 1), (8, 2), (16, 1)]));
        let six = census(6).unwrap();
        assert_eq!(six.total(), 15);
        assert_eq!((six.gncl(3), six.gncl(4), six.gncl(5)), (Some(10), Some(8), Some(7)));
        assert_eq!(six.gncl(0), None);
        assert_eq!(census(2).unwrap().gncl(2), None);
        assert_eq!(census(5).unwrap().gncl(4), Some(2));
    }

    #[test]
    fn witness_cap_keeps_multiplicities() {
        let capped = census_with_cap(6, 1).unwrap();
        let full = census(6).unwrap();
        assert_eq!(capped.histogram, full.histogram);
        assert!(capped.witnesses.values().all(|w| w.len() == 1));
        for (k, w) in &capped.witnesses {
            assert_eq!(w[0], full.witnesses[k][0]);
        }
    }

    #[test]
    fn report_formats() {
        let r = census(4).unwrap();
        assert_eq!(r.to_csv(), "n,con_count,multiplicity\n4,4,1\n4,8,1\n");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["format"], 1);
        assert_eq!(v["histogram"]["8"], 1);
        assert_eq!(v["gncl"]["2"], 4);
        assert_eq!(v["ncl"], serde_json::json!([4, 8]));
    }

    #[test]
    fn lnc_of_seven() {
        let third = codes_of(&lnc(3, 7).unwrap()).unwrap();
        let expected = codes_of(&["N5 + C(3)", "C(3) + N5", "C(2) + N5 + C(2)"].map(|t| build(t).unwrap())).unwrap();
        assert_eq!(third, expected);
    }

    #[test]
    fn triples() {
        assert!(CfiTriple::new(1, 1).is_admissible());
        assert!(!CfiTriple::new(1, 5).is_admissible());
        assert!(!CfiTriple::new(3, 1).is_admissible());
        assert_eq!(CfiTriple::new(7, 7).to_string(), "(7, 7, 7)");
    }

    #[test]
    fn exhaustive_and_constructed_witnesses() {
        assert!(cfi_check(1, 5, CfiMode::Exhaustive).unwrap().is_empty());
        assert!(cfi_check(1, 5, CfiMode::Construct).unwrap().is_empty());
        assert_eq!(cfi_check(1, 1, CfiMode::Exhaustive).unwrap().len(), 1);
        let seven = cfi_check(7, 7, CfiMode::Construct).unwrap();
        assert_eq!(seven.len(), 1);
        assert_eq!(seven[0].triple(), (7, 7, 7));
        let exhaustive = cfi_check(7, 7, CfiMode::Exhaustive).unwrap();
        let target = canonical_code(&seven[0].lattice).unwrap();
        assert!(exhaustive.iter().any(|w| canonical_code(&w.lattice).unwrap() == target));
        assert!(matches!(cfi_check(2, 40, CfiMode::Exhaustive), Err(Error::SizeBound { .. })));
        assert_eq!(cfi_check(12, 11, CfiMode::Construct).unwrap()[0].triple(), (12, 11, 11));
    }

    #[test]
    fn general_recipes() {
        for n in [7, 9, 10, 12, 13] {
            for k in 2..=n + 1 {
                let w = cfi_check(k, n, CfiMode::Construct).unwrap();
                assert_eq!(w.len(), 1, "({k}, {n}) from {:?}", construction_recipe(k, n).map(|e| e.to_string()));
            }
        }
        for n in 7..=12 {
            for j in 1..n {
                assert_eq!(cfi_check(1 << j, n, CfiMode::Construct).unwrap().len(), 1, "(2^{j}, {n})");
            }
        }
    }

    #[test]
    fn families_have_the_stated_sizes() {
        for n in 1..=12 {
            for p in 1..=5 {
                for text in rank_family(p, n) {
                    assert_eq!(build(&text).unwrap().len(), n, "{text}");
                }
            }
        }
        assert_eq!(rank_family(4, 8).len(), 3 + 3);
    }
}
