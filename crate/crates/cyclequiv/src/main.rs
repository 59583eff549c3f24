use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cyclequiv::codes::{min_distance, DistanceBudget, GeneratorMatrix, QcCodeSpec};
use cyclequiv::cosets::CosetTable;
use cyclequiv::equivalence::{verdict, Mode, VerdictStatus};
use cyclequiv::field::Field;
use cyclequiv::manifest::{verify_manifest, Manifest};
use cyclequiv::partition::{partition_cyclic, DEFAULT_PARTITION_BUDGET};
use cyclequiv::search::{
    asr_search, cyclic_sweep, field_from_order, BklcTable, ForcedTrial, SearchConfig,
};
use cyclequiv::text;

#[derive(Parser)]
#[command(name = "cyclequiv", version, about = "cyclic code equivalence, partitioning, and search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Strict,
    Literal,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Literal => Mode::PaperLiteral,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the length split, cyclotomic cosets, and their irreducible factors
    Cosets(CosetsArgs),
    /// Test two cyclic codes for affine equivalence on their coset multisets
    Equiv(EquivArgs),
    /// Partition all cyclic codes of a length into equivalence classes
    Partition(PartitionArgs),
    /// Certify the minimum distance of a cyclic or quasi-cyclic code
    Mindist(MindistArgs),
    /// Equivalence-aware cyclic or quasi-cyclic code search
    Search(SearchArgs),
    /// Re-check every entry of a manifest of expected code parameters
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CosetsArgs {
    /// field order (a prime power)
    #[arg(long)]
    q: u64,
    /// code length
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct EquivArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: u64,
    /// first code: multiset grammar or generator polynomial
    #[arg(long)]
    a: String,
    /// second code: multiset grammar or generator polynomial
    #[arg(long)]
    b: String,
    #[arg(long, value_enum, default_value = "strict")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value = "strict")]
    mode: ModeArg,
    /// write the partition record here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// refuse enumerations larger than this
    #[arg(long, default_value_t = DEFAULT_PARTITION_BUDGET)]
    budget: u128,
}

#[derive(Args)]
struct MindistArgs {
    #[arg(long)]
    q: u64,
    /// code length (block length m times index for QC codes)
    #[arg(long)]
    n: usize,
    /// generator polynomial
    #[arg(long)]
    gen: String,
    /// quasi-cyclic shape as `m,ell`
    #[arg(long)]
    qc: Option<String>,
    #[arg(long)]
    f2: Option<String>,
    #[arg(long)]
    f3: Option<String>,
    /// enumeration work budget
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long, default_value_t = 0xC0DE)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    q: u64,
    /// block length (the code length for --ell 1 cyclic sweeps)
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    #[arg(long, default_value_t = 0)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    kmin: usize,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    budget: Option<u128>,
    /// best-known-distance snapshot (`q n k d` lines)
    #[arg(long)]
    bklc: Option<PathBuf>,
    /// file of forced trials: lines `g=[...] f2=[...] f3=[...]`
    #[arg(long)]
    force: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "strict")]
    mode: ModeArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// re-encoding iterations for upper-bound entries
    #[arg(long, default_value_t = 20000)]
    ub_iterations: u64,
    /// enumeration work budget for exact entries
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("CYCLEQUIV_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn field_of(q: u64) -> cyclequiv::Result<Arc<Field>> {
    field_from_order(q)
}

fn run(cli: Cli) -> cyclequiv::Result<ExitCode> {
    match cli.command {
        Command::Cosets(args) => cmd_cosets(args),
        Command::Equiv(args) => cmd_equiv(args),
        Command::Partition(args) => cmd_partition(args),
        Command::Mindist(args) => cmd_mindist(args),
        Command::Search(args) => cmd_search(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn cmd_cosets(args: CosetsArgs) -> cyclequiv::Result<ExitCode> {
    let field = field_of(args.q)?;
    let table = CosetTable::new(&field, args.n)?;
    let split = table.split();
    match args.format {
        Format::Text => {
            println!(
                "q={} n={} n_q={} multiplicity={}",
                args.q, args.n, split.coprime, split.multiplicity
            );
            for (i, coset) in table.cosets().iter().enumerate() {
                let members: Vec<String> = coset.iter().map(u64::to_string).collect();
                println!(
                    "{{{}}}\t{}",
                    members.join(","),
                    text::format_poly(table.factor(i)?)
                );
            }
        }
        Format::Json => {
            let mut cosets: Vec<serde_json::Value> = Vec::new();
            for (i, c) in table.cosets().iter().enumerate() {
                cosets.push(serde_json::json!({
                    "members": c,
                    "factor": text::format_poly(table.factor(i)?),
                }));
            }
            println!(
                "{}",
                serde_json::json!({
                    "q": args.q,
                    "n": args.n,
                    "n_coprime": split.coprime,
                    "multiplicity": split.multiplicity,
                    "cosets": cosets,
                })
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_equiv(args: EquivArgs) -> cyclequiv::Result<ExitCode> {
    let field = field_of(args.q)?;
    let table = CosetTable::new(&field, args.n)?;
    let a = text::parse_multiset_or_poly(&table, &args.a)?;
    let b = text::parse_multiset_or_poly(&table, &args.b)?;
    let v = verdict(&a, &b, args.mode.into())?;
    let (word, witness, code) = match &v.status {
        VerdictStatus::Equivalent(w) => ("equivalent", Some(*w), 0u8),
        VerdictStatus::Unknown => ("unknown", None, 1),
        VerdictStatus::Inequivalent => ("inequivalent", None, 2),
    };
    match args.format {
        Format::Text => match witness {
            Some(w) => println!("{word} {w}"),
            None => println!("{word} none"),
        },
        Format::Json => {
            let mut obj = serde_json::json!({
                "status": word,
                "mode": Mode::from(args.mode).token(),
            });
            if let Some(w) = witness {
                obj["e"] = w.e.into();
                obj["b"] = w.b.into();
            }
            println!("{obj}");
        }
    }
    Ok(ExitCode::from(code))
}

fn cmd_partition(args: PartitionArgs) -> cyclequiv::Result<ExitCode> {
    let field = field_of(args.q)?;
    eprintln!("partitioning cyclic codes of length {} over GF({})", args.n, args.q);
    let record = partition_cyclic(&field, args.n, args.mode.into(), args.budget)?;
    eprintln!(
        "{} classes among {} multisets",
        record.representatives.len(),
        record.total_enumerated
    );
    match args.out {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            record.write_to(std::io::BufWriter::new(file))?;
        }
        None => {
            record.write_to(std::io::stdout().lock())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn budget_with(args_budget: Option<u128>, seed: u64, ub_iterations: Option<u64>) -> DistanceBudget {
    let mut budget = DistanceBudget {
        seed,
        ..DistanceBudget::default()
    };
    if let Some(w) = args_budget {
        budget.max_work = w;
    }
    if let Some(it) = ub_iterations {
        budget.ub_iterations = it;
    }
    budget
}

fn cmd_mindist(args: MindistArgs) -> cyclequiv::Result<ExitCode> {
    let field = field_of(args.q)?;
    let g = text::parse_poly(&field, &args.gen)?;
    let matrix = match &args.qc {
        None => GeneratorMatrix::circulant(&g, args.n)?,
        Some(shape) => {
            let (m_str, ell_str) = shape.split_once(',').ok_or_else(|| {
                cyclequiv::Error::Invalid {
                    what: "qc shape",
                    detail: "expected m,ell".into(),
                }
            })?;
            let m: usize = m_str.trim().parse().map_err(|_| cyclequiv::Error::Invalid {
                what: "qc shape",
                detail: shape.clone(),
            })?;
            let ell: usize = ell_str.trim().parse().map_err(|_| cyclequiv::Error::Invalid {
                what: "qc shape",
                detail: shape.clone(),
            })?;
            let mut fs = Vec::new();
            for f in [&args.f2, &args.f3].into_iter().flatten() {
                fs.push(text::parse_poly(&field, f)?);
            }
            if fs.len() + 1 != ell {
                return Err(cyclequiv::Error::Invalid {
                    what: "qc shape",
                    detail: format!("index {ell} needs {} multiplier(s)", ell - 1),
                });
            }
            let spec = QcCodeSpec::new(&field, m, &g, fs)?;
            if spec.length() != args.n {
                return Err(cyclequiv::Error::Invalid {
                    what: "qc shape",
                    detail: format!("m*ell = {} but n = {}", spec.length(), args.n),
                });
            }
            spec.matrix()?
        }
    };
    let budget = budget_with(args.budget, args.seed, None);
    eprintln!(
        "certifying distance of a [{}, {}] code over GF({})",
        matrix.cols(),
        matrix.rows(),
        args.q
    );
    let result = min_distance(&matrix, &budget)?;
    let cert = if result.exact {
        "exact".to_string()
    } else {
        format!("bounds lb={} ub={}", result.lower, result.upper)
    };
    match args.format {
        Format::Text => {
            println!(
                "[{},{},{}] cert={} witness={}",
                matrix.cols(),
                matrix.rows(),
                result.upper,
                cert,
                witness_string(&field, &result.witness)
            );
        }
        Format::Json => {
            println!(
                "{}",
                serde_json::json!({
                    "n": matrix.cols(),
                    "k": matrix.rows(),
                    "d": result.upper,
                    "exact": result.exact,
                    "lower": result.lower,
                    "upper": result.upper,
                    "witness": witness_string(&field, &result.witness),
                })
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// The witness is a coordinate vector, so print every position rather than
/// trimming trailing zeros as the polynomial grammar would.
fn witness_string(field: &Arc<Field>, witness: &[u8]) -> String {
    if field.is_prime_field() {
        let digits: String = witness.iter().map(|x| x.to_string()).collect();
        format!("[{digits}]")
    } else {
        let tokens: Vec<String> = witness
            .iter()
            .map(|&x| text::format_element(field, field.element(x as u64)))
            .collect();
        format!("[{}]", tokens.join(","))
    }
}

fn cmd_search(args: SearchArgs) -> cyclequiv::Result<ExitCode> {
    let field = field_of(args.q)?;
    let mut cfg = SearchConfig::new(field.clone(), args.m, args.ell);
    cfg.kmin = args.kmin;
    cfg.kmax = args.kmax.unwrap_or(args.m);
    cfg.trials = args.trials;
    cfg.seed = args.seed;
    cfg.mode = args.mode.into();
    cfg.budget = budget_with(args.budget, args.seed, None);
    if let Some(path) = &args.force {
        let textsrc = std::fs::read_to_string(path)?;
        for line in textsrc.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut g = None;
            let mut fs = Vec::new();
            for tok in line.split_whitespace() {
                if let Some(v) = tok.strip_prefix("g=") {
                    g = Some(text::parse_poly(&field, v)?);
                } else if tok.starts_with('f') && tok.contains('=') {
                    fs.push(text::parse_poly(&field, tok.split_once('=').unwrap().1)?);
                }
            }
            cfg.forced.push(ForcedTrial {
                g: g.ok_or_else(|| cyclequiv::Error::Invalid {
                    what: "forced trial",
                    detail: format!("missing g= in {line:?}"),
                })?,
                fs,
            });
        }
    }
    let bklc = match &args.bklc {
        Some(path) => BklcTable::load(path)?,
        None => BklcTable::empty(),
    };
    eprintln!(
        "searching q={} m={} ell={} trials={} seed={} forced={}",
        args.q,
        args.m,
        args.ell,
        args.trials,
        args.seed,
        cfg.forced.len()
    );
    let records = if args.ell <= 1 {
        cyclic_sweep(&cfg, &bklc)?
    } else {
        asr_search(&cfg, &bklc)?
    };
    eprintln!("{} records", records.len());
    let summary = format!(
        "q={} m={} ell={} trials={} seed={} kmin={} kmax={} mode={}",
        args.q, args.m, args.ell, args.trials, args.seed, cfg.kmin, cfg.kmax, cfg.mode.token()
    );
    let mut file = std::io::BufWriter::new(std::fs::File::create(&args.out)?);
    cyclequiv::search::write_records(&mut file, &summary, &records)?;
    file.flush()?;
    for r in records.iter().filter(|r| r.bklc == cyclequiv::codes::BklcFlag::New) {
        println!(
            "new: [{},{},{}] {}",
            r.n, r.k, r.claim.value, r.construction
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> cyclequiv::Result<ExitCode> {
    let textsrc = std::fs::read_to_string(&args.manifest)?;
    let manifest = Manifest::parse(&textsrc)?;
    let budget = budget_with(args.budget, 0xC0DE, Some(args.ub_iterations));
    let json = matches!(args.format, Format::Json);
    let reports = verify_manifest(&manifest, &budget, |report| {
        eprintln!(
            "checked {}: {}",
            report.label,
            if report.pass { "pass" } else { "FAIL" }
        );
    })?;
    let mut failures = 0;
    if json {
        println!("{}", serde_json::to_string_pretty(&reports).expect("reports serialize"));
        failures = reports.iter().filter(|r| !r.pass).count();
    } else {
        for r in &reports {
            let status = if r.pass { "pass" } else { "FAIL" };
            println!("{:<14} {}  {}", r.label, status, r.detail);
            if !r.pass {
                failures += 1;
            }
        }
        println!(
            "{} of {} entries verified",
            reports.len() - failures,
            reports.len()
        );
    }
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
