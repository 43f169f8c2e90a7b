use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use latcount_core::data::reference_table;
use latcount_core::*;

/// Generate, classify and count graded vertically indecomposable lattices.
#[derive(Parser)]
#[command(name = "latcount", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate lattices up to an element budget as a digraph6 listing.
    Generate(GenerateArgs),
    /// Count the lattices of a listing by symmetry class.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report zero counts up to this size (default: from the manifest,
        /// else the largest lattice seen).
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Complete a piece-count table with compositions and totals.
    Count {
        #[arg(long)]
        pieces: PathBuf,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Consistency checks.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Check an exponential lower bound certificate, or print the Steiner
    /// bound for semimodular lattices.
    Bounds {
        #[arg(long, required_unless_present = "steiner", conflicts_with = "steiner")]
        cert: Option<PathBuf>,
        /// Piece counts to use (default: the bundled table of the family).
        #[arg(long)]
        pieces: Option<PathBuf>,
        /// Print the Steiner bound for this many elements.
        #[arg(long)]
        steiner: Option<usize>,
    },
    /// Successive growth ratios of a count table.
    Ratios {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    max_n: usize,
    #[arg(long, default_value = "pieces")]
    mode: Mode,
    /// Elements added below the top before the search is split.
    #[arg(long)]
    checkpoint_depth: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Turn off the meet-irreducible length bound (distributive only).
    #[arg(long)]
    no_length_bound: bool,
    /// Write the checkpoint states to this directory instead of searching.
    #[arg(long, conflicts_with_all = ["resume", "out"])]
    save_states: Option<PathBuf>,
    /// Exhaust one saved state.
    #[arg(long)]
    resume: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Dual-pair parity of a listing of pieces and specials, per size.
    Duality {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Direct generation against the composition recurrence.
    Crosscheck {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        max_n: usize,
    },
    /// Compare a count table with an expected one.
    Tables {
        #[arg(long)]
        table: PathBuf,
        /// Expected table (default: the bundled table of `--family`).
        #[arg(long, required_unless_present = "family")]
        expected: Option<PathBuf>,
        #[arg(long)]
        family: Option<Family>,
    },
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    Failed,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn read_table(path: &Path) -> Result<CountTable> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    CountTable::read_csv(f).with_context(|| format!("reading {}", path.display()))
}

fn manifest_path(listing: &Path) -> PathBuf {
    let mut s = listing.as_os_str().to_owned();
    s.push(".manifest");
    PathBuf::from(s)
}

fn verdict(v: &Verdict) -> Status {
    println!("{v}");
    if v.passed() {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn generate_cmd(a: GenerateArgs) -> Result<Status> {
    let mut cfg = GenConfig::new(a.family, a.max_n, a.mode);
    if a.no_length_bound {
        cfg.length_bound_pruning = false;
    }
    cfg.checkpoint_depth = a
        .checkpoint_depth
        .unwrap_or(if a.workers > 1 { 6 } else { 0 });

    if let Some(dir) = &a.save_states {
        fs::create_dir_all(dir)?;
        let states = split_checkpoints(&cfg)?;
        for (i, st) in states.iter().enumerate() {
            fs::write(dir.join(format!("state-{i:06}.txt")), st.to_text())?;
        }
        eprintln!("{} states written to {}", states.len(), dir.display());
        return Ok(Status::Ok);
    }

    let (records, summary) = if let Some(p) = &a.resume {
        let st = SearchState::parse(&fs::read_to_string(p)?)?;
        let mut recs = Vec::new();
        let s = resume(&cfg, &st, |l| recs.push(encode_digraph6(l)))?;
        (recs, s)
    } else if a.workers > 1 {
        generate_parallel(&cfg, a.workers, encode_digraph6)?
    } else {
        let mut recs = Vec::new();
        let s = generate(&cfg, |l| recs.push(encode_digraph6(l)))?;
        (recs, s)
    };
    let records = sort_records(records).map_err(|e| match e {
        Digraph6Error::DuplicateRecord(r) => GenError::DuplicateAcrossWorkers(r).into(),
        e => anyhow::Error::from(e),
    })?;

    let mut bytes = Vec::new();
    let mut manifest = write_listing(records, &mut bytes)?;
    manifest.info.insert("family".into(), a.family.to_string());
    manifest.info.insert("mode".into(), a.mode.to_string());
    manifest.info.insert("max_n".into(), a.max_n.to_string());
    match &a.out {
        Some(p) => {
            fs::write(p, &bytes).with_context(|| format!("writing {}", p.display()))?;
            fs::write(manifest_path(p), manifest.to_text())?;
        }
        None => io::stdout().lock().write_all(&bytes)?,
    }
    for n in 1..=a.max_n {
        eprintln!("n={n:<3} {}", summary.per_n[n]);
    }
    eprintln!("total {}  nodes {}", summary.total(), summary.nodes);
    Ok(Status::Ok)
}

fn classify_cmd(input: &Path, out: &Option<PathBuf>, max_n: Option<usize>) -> Result<Status> {
    let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
    let mpath = manifest_path(input);
    let manifest = match fs::read_to_string(&mpath) {
        Ok(text) => {
            let m = Manifest::parse(&text)?;
            if let Err(e) = m.check(&bytes) {
                eprintln!("{}: {e}", mpath.display());
                return Ok(Status::Failed);
            }
            Some(m)
        }
        Err(_) => None,
    };
    let lattices = read_listing(BufReader::new(&bytes[..]))?;
    let mut table = CountTable::new(0);
    let mut any_composition = false;
    for l in &lattices {
        let c = classify(l).with_context(|| format!("classifying {}", encode_digraph6(l)))?;
        any_composition |= matches!(c, SymmetryClass::Composition(_));
        table.add_class(l.n(), c);
    }
    let info = |k: &str| manifest.as_ref().and_then(|m| m.info.get(k).cloned());
    let max_n = max_n
        .or_else(|| info("max_n").and_then(|s| s.parse().ok()))
        .unwrap_or(table.max_n());
    let full = any_composition || info("mode").as_deref() == Some(Mode::AllViLattices.name());
    table.fill_classes(max_n, full);
    table.resized(max_n).write_csv(output(out)?)?;
    Ok(Status::Ok)
}

fn count_cmd(pieces: &Path, max_n: Option<usize>, out: &Option<PathBuf>) -> Result<Status> {
    let t = read_table(pieces)?;
    let max_n = max_n.unwrap_or(t.max_n());
    let mut cols = Column::PIECES.to_vec();
    cols.push(Column::Special);
    let t = t.project(&cols).resized(max_n);
    for n in 1..=max_n {
        if let Some(c) = cols.iter().find(|&&c| t.get(n, c).is_none()) {
            bail!("{}: no {} count for n={n}", pieces.display(), c.name());
        }
    }
    complete_table(&t)?.write_csv(output(out)?)?;
    Ok(Status::Ok)
}

fn verify_cmd(what: VerifyCommand) -> Result<Status> {
    match what {
        VerifyCommand::Duality { input } => {
            let f = File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let mut by_n: BTreeMap<usize, DualityLedger> = BTreeMap::new();
            for l in read_listing(BufReader::new(f))? {
                by_n.entry(l.n()).or_default().add_lattice(&l)?;
            }
            for (n, ledger) in &by_n {
                if let Some(m) = ledger.first_mismatch() {
                    println!("FAIL: n={n}: {m}");
                    return Ok(Status::Failed);
                }
            }
            println!("PASS ({} sizes)", by_n.len());
            Ok(Status::Ok)
        }
        VerifyCommand::Crosscheck { family, max_n } => Ok(verdict(&cross_check(family, max_n)?)),
        VerifyCommand::Tables {
            table,
            expected,
            family,
        } => {
            let actual = read_table(&table)?;
            let expected = match (expected, family) {
                (Some(p), _) => read_table(&p)?,
                (None, Some(f)) => match reference_table(f) {
                    Some(t) => t.resized(actual.max_n().min(t.max_n())),
                    None => bail!("no bundled table for {f} lattices"),
                },
                (None, None) => unreachable!("clap requires one of them"),
            };
            Ok(verdict(&compare_tables(&actual, &expected)))
        }
    }
}

fn bounds_cmd(
    cert: Option<PathBuf>,
    pieces: Option<PathBuf>,
    steiner: Option<usize>,
) -> Result<Status> {
    if let Some(n) = steiner {
        let s = steiner_bound(n)?;
        println!(
            "n={n} ln(count) >= {:.6} (Steiner triple system order {})",
            s.log_bound, s.k
        );
        return Ok(Status::Ok);
    }
    let cert_path = cert.expect("clap requires --cert");
    let cert: Certificate = fs::read_to_string(&cert_path)
        .with_context(|| format!("reading {}", cert_path.display()))?
        .parse()?;
    let family = match &cert {
        Certificate::Classes(c) => c.family,
        Certificate::Total(c) => c.family,
    };
    let table = match pieces {
        Some(p) => read_table(&p)?,
        None => match reference_table(family) {
            Some(t) => t,
            None => bail!("no bundled table for {family} lattices; pass --pieces"),
        },
    };
    let report = match &cert {
        Certificate::Classes(c) => verify_lower_bound(c, &table)?,
        Certificate::Total(c) => verify_total_bound(c, &table)?,
    };
    let (n0, n1) = report.base_window;
    println!("base window {n0}..={n1}");
    for t in &report.induction {
        println!(
            "induction {}: {} >= {} {}",
            t.label,
            bounds::approx(&t.lhs),
            bounds::approx(&t.rhs),
            if t.holds() { "ok" } else { "fails" }
        );
    }
    Ok(verdict(&report.verdict))
}

fn ratios_cmd(table: &Path, out: &Option<PathBuf>) -> Result<Status> {
    let t = read_table(table)?;
    write_ratios_csv(&growth_ratios(&t), output(out)?)?;
    Ok(Status::Ok)
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Generate(a) => generate_cmd(a),
        Command::Classify { input, out, max_n } => classify_cmd(&input, &out, max_n),
        Command::Count { pieces, max_n, out } => count_cmd(&pieces, max_n, &out),
        Command::Verify { what } => verify_cmd(what),
        Command::Bounds {
            cert,
            pieces,
            steiner,
        } => bounds_cmd(cert, pieces, steiner),
        Command::Ratios { table, out } => ratios_cmd(&table, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
