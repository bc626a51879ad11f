//! `conlat`: batch commands over finite lattices and their congruences.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conlat::census::{census, cfi_check, construction_recipe, verify_claims, CfiMode, CfiTriple, CfiWitness};
use conlat::enumerate::{enumerate_lattices, EnumerationRecord};
use conlat::io::{lattice_from_json, lattice_to_json, to_dot};
use conlat::{all_congruences, build, congruence_lattice, Lattice};
use serde_json::json;

#[derive(Parser)]
#[command(name = "conlat", version, about = "Finite lattices, their congruences and congruence-count censuses")]
struct Cli {
    /// Worker threads for enumeration and censuses (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// Where a lattice comes from: an expression or a JSON cover-list file.
#[derive(Args)]
struct Source {
    /// Lattice expression, e.g. "C(3) # C(4)" or "C(2) + N5 + C(2)".
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    expr: Option<String>,
    /// Read the lattice from a JSON file of the form {"n": .., "covers": [[a,b], ..]}.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

impl Source {
    fn lattice(&self) -> Result<Lattice, Failure> {
        match (&self.expr, &self.file) {
            (Some(text), _) => Ok(build(text)?),
            (None, Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
                Ok(lattice_from_json(&text)?)
            }
            (None, None) => Err(Failure::input("no lattice given")),
        }
    }
}

#[derive(Args)]
#[group(multiple = false)]
struct Rendering {
    /// Graphviz DOT of the Hasse diagram.
    #[arg(long)]
    dot: bool,
    /// JSON cover list.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a lattice and print its size and covers.
    Eval {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        render: Rendering,
    },
    /// Congruences of a lattice.
    Con {
        #[command(flatten)]
        source: Source,
        /// Print |Con(L)| (the default).
        #[arg(long, group = "what")]
        count: bool,
        /// Print every congruence as a block list.
        #[arg(long, group = "what")]
        list: bool,
        /// Print Con(L) itself as a lattice.
        #[arg(long, group = "what")]
        lattice: bool,
        #[command(flatten)]
        render: Rendering,
    },
    /// All n-element lattices up to isomorphism, one JSON object per line.
    Enumerate {
        n: usize,
        /// Write to this file instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Histogram of congruence counts over all n-element lattices.
    Census {
        n: usize,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Run the verification checks; exits 1 if any check fails.
    Verify {
        /// Largest lattice size searched exhaustively.
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        #[arg(long)]
        json: bool,
        /// Keep per-check runtimes in the JSON output.
        #[arg(long, requires = "json")]
        timings: bool,
    },
    /// Is (k, n, n) the (congruences, filters, ideals) count of some n-element lattice?
    Cfi {
        k: usize,
        n: usize,
        /// Search every n-element lattice (the default when n is small enough).
        #[arg(long, conflicts_with = "construct")]
        exhaustive: bool,
        /// Use the known constructions only.
        #[arg(long)]
        construct: bool,
    },
}

/// Error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }
}

impl From<conlat::Error> for Failure {
    fn from(e: conlat::Error) -> Failure {
        Failure::input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::input(e.to_string())
    }
}

fn render(l: &Lattice, how: &Rendering, title: &str) -> String {
    if how.dot {
        return to_dot(l, title);
    }
    if how.json {
        return lattice_to_json(l) + "\n";
    }
    let noun = if l.len() == 1 { "element" } else { "elements" };
    let mut out = format!("{} {noun}\n", l.len());
    out.push_str(&format!("elements: {}\n", l.names().join(" ")));
    let covers: Vec<String> = l.covers().iter().map(|&(a, b)| format!("{}<{}", l.name(a), l.name(b))).collect();
    out.push_str(&format!("covers: {}\n", covers.join(" ")));
    out
}

fn run(command: Command, stdout: &mut impl Write) -> Result<u8, Failure> {
    match command {
        Command::Eval { source, render: how } => {
            let l = source.lattice()?;
            write!(stdout, "{}", render(&l, &how, source.expr.as_deref().unwrap_or("L")))?;
        }
        Command::Con { source, list, lattice, render: how, .. } => {
            let l = source.lattice()?;
            if lattice {
                let con = congruence_lattice(&l);
                write!(stdout, "{}", render(&con, &how, "Con"))?;
            } else if list {
                let all = all_congruences(&l);
                if how.json {
                    let blocks: Vec<Vec<Vec<usize>>> = all.iter().map(|c| c.to_json_blocks()).collect();
                    let out = json!({ "format": 1, "n": l.len(), "count": all.len(), "congruences": blocks });
                    writeln!(stdout, "{out}")?;
                } else {
                    for c in &all {
                        writeln!(stdout, "{}", c.display_with(&l))?;
                    }
                }
            } else {
                let count = all_congruences(&l).len();
                if how.json {
                    writeln!(stdout, "{}", json!({ "format": 1, "n": l.len(), "count": count }))?;
                } else {
                    writeln!(stdout, "{count}")?;
                }
            }
        }
        Command::Enumerate { n, out } => {
            let all = enumerate_lattices(n)?;
            let mut sink: Box<dyn Write> = match &out {
                Some(path) => Box::new(BufWriter::new(fs::File::create(path)?)),
                None => Box::new(&mut *stdout),
            };
            for e in all.iter() {
                let line = serde_json::to_string(&EnumerationRecord::from(e)).expect("plain data serializes");
                writeln!(sink, "{line}")?;
            }
            sink.flush()?;
            if out.is_some() {
                eprintln!("{} lattices with {n} elements", all.len());
            }
        }
        Command::Census { n, json, csv } => {
            let record = census(n)?;
            if json {
                writeln!(stdout, "{}", record.to_json())?;
            } else if csv {
                write!(stdout, "{}", record.to_csv())?;
            } else {
                writeln!(stdout, "{} lattices with {n} elements", record.total())?;
                writeln!(stdout, "|Con|  lattices")?;
                for (k, m) in &record.histogram {
                    writeln!(stdout, "{k:>5}  {m}")?;
                }
            }
        }
        Command::Verify { max_n, json, timings } => {
            let report = verify_claims(max_n);
            let passed = report.passed();
            if json {
                let report = if timings { report } else { report.without_timings() };
                writeln!(stdout, "{}", report.to_json())?;
            } else {
                write!(stdout, "{}", report.to_text())?;
            }
            return Ok(if passed { 0 } else { 1 });
        }
        Command::Cfi { k, n, exhaustive, construct } => {
            let triple = CfiTriple::new(k, n);
            if !triple.is_admissible() {
                writeln!(stdout, "{triple}: not representable")?;
                return Ok(0);
            }
            let small = n <= conlat::enumerate::enumeration_bound();
            let mode = if construct || (!exhaustive && !small) { CfiMode::Construct } else { CfiMode::Exhaustive };
            let witnesses = cfi_check(k, n, mode)?;
            match (mode, witnesses.first()) {
                (_, Some(w)) => {
                    writeln!(stdout, "{triple}: representable")?;
                    if let CfiMode::Exhaustive = mode {
                        writeln!(stdout, "{} lattices up to isomorphism", witnesses.len())?;
                    }
                    describe_witness(w, stdout)?;
                }
                (CfiMode::Exhaustive, None) => writeln!(stdout, "{triple}: not representable")?,
                (CfiMode::Construct, None) => {
                    let tried = construction_recipe(k, n).map(|e| e.to_string());
                    match tried {
                        Some(e) => writeln!(stdout, "{triple}: construction {e} does not verify")?,
                        None => writeln!(stdout, "{triple}: no known construction")?,
                    }
                }
            }
        }
    }
    Ok(0)
}

fn describe_witness(w: &CfiWitness, out: &mut impl Write) -> io::Result<()> {
    if let Some(recipe) = &w.recipe {
        writeln!(out, "witness: {recipe}")?;
    }
    let covers: Vec<String> = w.lattice.covers().iter().map(|&(a, b)| format!("{a}<{b}")).collect();
    writeln!(out, "covers: {}", covers.join(" "))?;
    writeln!(out, "congruences {}, filters {}, ideals {}", w.congruences, w.filters, w.ideals)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("conlat: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli.command, &mut lock) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let _ = lock.flush();
            eprintln!("conlat: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
