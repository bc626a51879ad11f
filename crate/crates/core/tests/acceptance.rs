//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Failure details follow the criterion line.

mod common;

use std::time::{Duration, Instant};

use common::{brute_force_congruences, library_congruences, poset_filter_lattice_count};
use conlat::census::{
    census, expected_congruence_lattice, gncl, lnc, rank_family, verify_claims, CfiTriple, CfiWitness,
    CONSTRUCTION_TABLE,
};
use conlat::congruence::congruence_atoms;
use conlat::expr::random_expr;
use conlat::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Criterion = (&'static str, fn(&mut Outcome));

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { failures: Vec::new(), notes: Vec::new() }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn within(&mut self, elapsed: Duration, limit: Duration) {
        self.require(elapsed <= limit, format!("took {elapsed:.2?}, limit {limit:.0?}"));
    }
}

fn lattice(text: &str) -> Lattice {
    build(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn con_count(l: &Lattice) -> usize {
    all_congruences(l).len()
}

/// True when `found` and `expected` contain the same isomorphism classes, each
/// exactly once.
fn same_classes(found: &[Lattice], expected: &[Lattice]) -> bool {
    found.len() == expected.len()
        && found.iter().all(|f| expected.iter().filter(|e| is_isomorphic(f, e).is_some()).count() == 1)
        && expected.iter().all(|e| found.iter().filter(|f| is_isomorphic(f, e).is_some()).count() == 1)
}

fn sorted_counts(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = enumerate_lattices(n).unwrap().iter().map(|e| con_count(&e.lattice)).collect();
    out.sort();
    out
}

fn five_element_census(o: &mut Outcome) {
    let start = Instant::now();
    let five = enumerate_lattices(5).unwrap();
    o.require(five.len() == 5, format!("{} classes", five.len()));
    let counts = sorted_counts(5);
    o.require(counts == [2, 5, 8, 8, 16], format!("multiset {counts:?}"));
    let found: Vec<Lattice> = five.iter().map(|e| e.lattice.clone()).collect();
    let expected: Vec<Lattice> = ["M3", "N5", "C(2) + B2", "B2 + C(2)", "C(5)"].map(lattice).into();
    o.require(same_classes(&found, &expected), "witnesses differ from M3, N5, C(2)+B2, B2+C(2), C(5)");
    o.within(start.elapsed(), Duration::from_secs(1));
}

fn six_element_census(o: &mut Outcome) {
    let start = Instant::now();
    let six = enumerate_lattices(6).unwrap();
    o.require(six.len() == 15, format!("{} classes", six.len()));
    let counts = sorted_counts(6);
    let claimed = [2, 3, 4, 4, 6, 6, 7, 7, 8, 10, 10, 16, 16, 16, 32];
    o.require(counts == claimed, format!("multiset {counts:?}, claimed {claimed:?}"));
    for text in ["C(3) # (B2 + C(2))", "C(3) # (C(2) + B2)"] {
        let l = lattice(text);
        o.notes.push(format!("|Con({text})| = {}", con_count(&l)));
    }
    for (p, want) in [(3, 10), (4, 8), (5, 7)] {
        let got = gncl(p, 6).unwrap();
        o.require(got == Some(want), format!("gncl({p},6) = {got:?}, want {want}"));
    }
    o.within(start.elapsed(), Duration::from_secs(5));
}

fn seven_element_extremes(o: &mut Outcome) {
    let start = Instant::now();
    let cases: [(usize, usize, Vec<&str>); 3] = [
        (3, 20, vec!["N5 + C(3)", "C(3) + N5", "C(2) + N5 + C(2)"]),
        (4, 16, vec!["(C(2) * C(3)) + C(2)", "C(2) + (C(2) * C(3))", "B2 + B2"]),
        (5, 14, vec!["C(3) # C(5) + C(2)", "C(2) + (C(3) # C(5))", "C(4) # C(4) + C(2)", "C(2) + (C(4) # C(4))"]),
    ];
    for (p, want, witnesses) in cases {
        let got = gncl(p, 7).unwrap();
        o.require(got == Some(want), format!("gncl({p},7) = {got:?}, want {want}"));
        let found = lnc(p, 7).unwrap();
        let expected: Vec<Lattice> = witnesses.iter().map(|t| lattice(&format!("({t})"))).collect();
        o.require(
            same_classes(&found, &expected),
            format!("Lnc({p},7) has {} members, expected {witnesses:?}", found.len()),
        );
    }
    o.within(start.elapsed(), Duration::from_secs(120));
}

fn eight_element_formulas(o: &mut Outcome) {
    let start = Instant::now();
    let record = census(8).unwrap();
    let got: Vec<Option<usize>> = (1..=5).map(|p| record.gncl(p)).collect();
    let want = [128, 64, 40, 32, 28].map(Some);
    o.require(got == want, format!("gncl(1..5,8) = {got:?}"));
    for p in 1..=4 {
        let found = lnc(p, 8).unwrap();
        let expected: Vec<Lattice> = rank_family(p, 8).iter().map(|t| lattice(t)).collect();
        o.require(
            same_classes(&found, &expected),
            format!("Lnc({p},8): {} found, {} in the family", found.len(), expected.len()),
        );
    }
    o.within(start.elapsed(), Duration::from_secs(600));
}

fn congruence_lattice_structures(o: &mut Outcome) {
    let mut checked = 0;
    for n in 6..=8 {
        for p in 1..=4 {
            let Some(want) = expected_congruence_lattice(p, n) else { continue };
            for l in lnc(p, n).unwrap() {
                checked += 1;
                o.require(
                    is_isomorphic(&congruence_lattice(&l), &want).is_some(),
                    format!("rank {p}, n = {n}: Con(L) has the wrong shape for covers {:?}", l.covers()),
                );
            }
        }
    }
    o.notes.push(format!("{checked} witnesses checked"));
}

fn construction_table(o: &mut Outcome) {
    let start = Instant::now();
    for &(k, n, recipe) in CONSTRUCTION_TABLE {
        let w = CfiWitness::measure(lattice(recipe), Some(recipe.to_string()));
        o.require(
            w.represents(CfiTriple::new(k, n)),
            format!("{recipe} gives {:?}, claimed ({k}, {n}, {n})", w.triple()),
        );
    }
    o.notes.push(format!("{} recipes", CONSTRUCTION_TABLE.len()));
    o.within(start.elapsed(), Duration::from_secs(5));
}

/// The four parts of the lemma on atoms and covers, for one lattice.
fn check_cover_lemma(l: &Lattice, o: &mut Outcome) {
    if l.len() < 2 {
        return;
    }
    let n = l.len();
    let total = con_count(l);
    let atoms = congruence_atoms(l).unwrap();
    o.require(!atoms.is_empty(), format!("no atoms in Con(L) for {:?}", l.covers()));
    for theta in &atoms {
        let from_cover = l.covers().iter().any(|&(a, b)| principal_congruence(l, a, b) == *theta);
        o.require(from_cover, format!("atom {:?} is not a cover congruence of {:?}", theta.blocks(), l.covers()));
        let (q, _) = quotient(l, theta).unwrap();
        o.require(2 * con_count(&q) >= total, format!("|Con(L/θ)| < |Con(L)|/2 for {:?}", l.covers()));
    }
    for &(a, b) in l.covers() {
        let theta = principal_congruence(l, a, b);
        let size = theta.num_blocks();
        o.require(l.is_narrows(a, b) == (size == n - 1), format!("narrows mismatch at ({a},{b}) in {:?}", l.covers()));
        if size != n - 2 {
            continue;
        }
        let blocks = theta.blocks();
        let is_blocks = |pairs: [[usize; 2]; 2]| {
            let mut want: Vec<Vec<usize>> = pairs
                .iter()
                .map(|p| {
                    let mut p = p.to_vec();
                    p.sort();
                    p
                })
                .collect();
            want.extend(l.elements().filter(|x| !pairs.iter().flatten().any(|y| y == x)).map(|x| vec![x]));
            want.sort();
            want == blocks
        };
        let upward = l.upper_covers(a).iter().filter(|&&c| c != b).any(|&c| {
            let d = l.join(b, c);
            l.covers_pair(b, d) && l.covers_pair(c, d) && is_blocks([[a, b], [c, d]])
        });
        let downward = l.lower_covers(b).iter().filter(|&&c| c != a).any(|&c| {
            let d = l.meet(a, c);
            l.covers_pair(d, a) && l.covers_pair(d, c) && is_blocks([[a, b], [d, c]])
        });
        o.require(upward || downward, format!("no square around ({a},{b}) in {:?}", l.covers()));
    }
}

fn cover_lemma_suite(o: &mut Outcome) {
    let start = Instant::now();
    let mut small = 0;
    for n in 1..=7 {
        for e in enumerate_lattices(n).unwrap().iter() {
            small += 1;
            check_cover_lemma(&e.lattice, o);
        }
    }
    let mut rng = StdRng::seed_from_u64(0x1e44a);
    for _ in 0..500 {
        check_cover_lemma(&random_expr(&mut rng, 12).build().unwrap(), o);
    }
    o.notes.push(format!("{small} classes with n ≤ 7 and 500 random lattices"));
    o.within(start.elapsed(), Duration::from_secs(300));
}

fn filters_and_ideals(l: &Lattice) -> (usize, usize) {
    (l.filters().len(), l.ideals().len())
}

fn construction_formulas(o: &mut Outcome) {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let c2 = chain(2).unwrap();
    let c3 = chain(3).unwrap();
    let boxed = |l: &Lattice| ordinal_sum_all(&[&c2, l, &c2]).unwrap();
    let mut counterexamples = Vec::new();
    for _ in 0..200 {
        let (ea, eb) = (random_expr(&mut rng, 6), random_expr(&mut rng, 6));
        let (a, b) = (ea.build().unwrap(), eb.build().unwrap());
        let (ka, kb) = (con_count(&a), con_count(&b));
        let (fa, ia) = filters_and_ideals(&a);
        let (fb, ib) = filters_and_ideals(&b);

        let p = direct_product(&[&a, &b]).unwrap();
        let (fp, ip) = filters_and_ideals(&p);
        o.require((con_count(&p), fp, ip) == (ka * kb, fa * fb, ia * ib), format!("product of {ea} and {eb}"));

        let s = ordinal_sum(&a, &b);
        let (fs, is) = filters_and_ideals(&s);
        o.require(
            (con_count(&s), fs, is) == (ka * kb, fa + fb - 1, ia + ib - 1),
            format!("ordinal sum of {ea} and {eb}"),
        );

        let two = horizontal_sum(&[&boxed(&a), &boxed(&b)]).unwrap();
        o.require(con_count(&two) == ka * kb + 3, format!("two boxed summands {ea}, {eb}"));
        let three = horizontal_sum(&[&boxed(&a), &boxed(&b), &boxed(&a)]).unwrap();
        o.require(con_count(&three) == 1 + ka * kb * ka, format!("three boxed summands {ea}, {eb}, {ea}"));

        // M needs a meet-reducible bottom; A itself when it has one
        let m = if a.upper_covers(a.bottom()).len() >= 2 {
            a.clone()
        } else if rng.gen_bool(0.5) && a.len() >= 2 {
            direct_product(&[&a, &c2]).unwrap()
        } else {
            horizontal_sum(&[&c3, &ordinal_sum(&c3, &a)]).unwrap()
        };
        let l = horizontal_sum(&[&c3, &ordinal_sum(&m, &c2)]).unwrap();
        let (got, claimed) = (con_count(&l), con_count(&m) + 2);
        if got != claimed {
            counterexamples.push(format!("M with covers {:?}: |Con(L)| = {got}, claimed {claimed}", m.covers()));
        }
    }
    o.require(
        counterexamples.is_empty(),
        format!("C(3) # (M + C(2)): {} of 200 pairs disagree", counterexamples.len()),
    );
    o.failures.extend(counterexamples.into_iter().take(5));
    o.within(start.elapsed(), Duration::from_secs(60));
}

fn oracle_equivalence(o: &mut Outcome) {
    for n in 1..=6 {
        for e in enumerate_lattices(n).unwrap().iter() {
            o.require(
                library_congruences(&e.lattice) == brute_force_congruences(&e.lattice),
                format!("congruences differ on {:?}", e.lattice.covers()),
            );
        }
    }
    let oracle: Vec<usize> = (1..=7).map(poset_filter_lattice_count).collect();
    let ours: Vec<usize> = (1..=7).map(|n| count_lattices(n).unwrap()).collect();
    o.require(oracle == ours && ours == [1, 1, 1, 2, 5, 15, 53], format!("oracle {oracle:?}, enumeration {ours:?}"));
}

fn conjecture_report(o: &mut Outcome) {
    let report = verify_claims(8);
    match report.check("fifth-largest-witnesses") {
        Some(check) => {
            o.notes.push(format!("[{}] {}", check.status.label(), check.claim));
            o.notes.extend(check.evidence.iter().cloned());
            o.require(!check.status.is_failure(), "a conjecture entry counted as a failure");
        }
        None => o.require(false, "no conjecture entry in the report"),
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("five-element census", five_element_census),
        ("six-element census", six_element_census),
        ("seven-element extremes", seven_element_extremes),
        ("eight-element formulas", eight_element_formulas),
        ("congruence lattices of the extremal lattices", congruence_lattice_structures),
        ("construction table", construction_table),
        ("cover lemma suite", cover_lemma_suite),
        ("construction formulas", construction_formulas),
        ("oracle equivalence", oracle_equivalence),
        ("fifth-largest conjecture", conjecture_report),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut o = Outcome::new();
        let start = Instant::now();
        run(&mut o);
        let verdict = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {:>2}: {verdict} {name} ({:.2?})", i + 1, start.elapsed());
        for note in &o.notes {
            println!("    {note}");
        }
        for f in &o.failures {
            println!("    failed: {f}");
        }
        failed += usize::from(!o.failures.is_empty());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
