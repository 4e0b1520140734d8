use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qtcodes::algebra::{binomial_factor, Fe, Field};
use qtcodes::codec::{parse_coeffs, parse_list, render_coeffs, render_list};
use qtcodes::constacyclic::{enumerate, ConstacyclicCode};
use qtcodes::distance::{min_distance, DistanceOptions, Status};
use qtcodes::equivalence::{partition, PartitionMode};
use qtcodes::error::Error;
use qtcodes::linearcode::{DistanceStatus, Matrix};
use qtcodes::qt::{qt_assemble, QtCode, QtForm, QtGeneratorSpec};
use qtcodes::search::{
    classify, classify_distance, run_campaign_with, CampaignIo, Ledger, SearchConfig, TargetTable,
};
use qtcodes::tables::{golden, parse_golden, verify_row, Tier, VerifyOptions, WitnessStore};

#[derive(Parser)]
#[command(name = "qtcodes", version, about = "Quasi-twisted codes over small finite fields")]
struct Cli {
    /// Field size q [default: 2].
    #[arg(long, global = true)]
    field: Option<u32>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Candidate-codeword budget for distance computations.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// quick, full or auto.
    #[arg(long, global = true)]
    tier: Option<Tier>,
    #[arg(long, global = true)]
    ledger: Option<PathBuf>,
    #[arg(long, global = true)]
    targets: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CcArgs {
    #[arg(long)]
    m: usize,
    /// Shift constant in the field alphabet.
    #[arg(long, default_value = "1")]
    a: String,
    /// Keep only codes of this dimension.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args, Clone)]
struct CodeArgs {
    /// Golden table row label such as [39,24,6]_2; overrides the other options.
    #[arg(long)]
    row: Option<String>,
    #[arg(long, default_value = "two_gen_p1")]
    form: QtForm,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value = "1")]
    a: String,
    #[arg(long, default_value = "1")]
    g: String,
    /// Second generator factor p (g_2 for the identity form).
    #[arg(long, alias = "g2", default_value = "1")]
    p: String,
    /// Comma-separated f polynomials of the first row.
    #[arg(long)]
    f1: Option<String>,
    #[arg(long)]
    f2: Option<String>,
    /// File of generator rows, one coefficient string per row.
    #[arg(long, conflicts_with_all = ["row", "m", "f1"])]
    matrix: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Factor x^m - a into monic irreducibles.
    Factor(CcArgs),
    /// List constacyclic codes of length m.
    CcList {
        #[command(flatten)]
        cc: CcArgs,
        /// Also compute minimum distances.
        #[arg(long)]
        distance: bool,
    },
    /// Group constacyclic codes into equivalence classes.
    Partition {
        #[command(flatten)]
        cc: CcArgs,
        #[arg(long, default_value = "multiplier")]
        mode: PartitionMode,
    },
    /// Build a quasi-twisted code and print its generator matrix.
    Assemble {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        print_matrix: bool,
    },
    /// Minimum distance of a code.
    Mindist(CodeArgs),
    /// Duality and reversibility properties of a code.
    Props(CodeArgs),
    /// Parity-extend a code and compute the distance of the extension.
    Extend(CodeArgs),
    /// Run a search campaign from a JSON config.
    Search {
        #[arg(long)]
        config: PathBuf,
        /// Cursor file for resuming.
        #[arg(long)]
        cursor: Option<PathBuf>,
    },
    /// Verify the golden tables.
    VerifyTables {
        /// Alternative golden file.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Extra witness file.
        #[arg(long)]
        witnesses: Option<PathBuf>,
        /// Only rows with this label.
        #[arg(long)]
        row: Option<String>,
        /// Check n, k and properties only.
        #[arg(long)]
        skip_distance: bool,
    },
    /// Classify ledger records, or given parameters, against the targets.
    Classify {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::DimensionDefect { .. } | Error::ZeroCode | Error::NotACodeword | Error::MixedInput => {
                Failure::Verification(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl Cli {
    fn q(&self) -> u32 {
        self.field.unwrap_or(2)
    }
}

type CliResult = std::result::Result<(), Failure>;

fn shift(field: Field, a: &str) -> Result<Fe, Error> {
    let mut it = a.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => field
            .parse_char(c)
            .filter(|x| !x.is_zero())
            .ok_or(Error::InvalidShiftConstant),
        _ => Err(Error::InvalidShiftConstant),
    }
}

fn distance_options(cli: &Cli) -> DistanceOptions {
    let mut o = DistanceOptions::default();
    if let Some(b) = cli.budget {
        o.budget = b;
    }
    o.threads = cli.threads;
    o
}

/// A code given on the command line: either a spec or a raw matrix.
enum Input {
    Qt(QtCode),
    Raw(Matrix),
}

impl Input {
    fn matrix(&self) -> &Matrix {
        match self {
            Input::Qt(c) => &c.matrix,
            Input::Raw(m) => m,
        }
    }
}

fn load_code(cli: &Cli, args: &CodeArgs) -> Result<Input, Failure> {
    if let Some(label) = &args.row {
        let row = golden()
            .rows
            .into_iter()
            .find(|r| &r.label() == label)
            .ok_or_else(|| Failure::Usage(format!("no golden row {label}")))?;
        return Ok(Input::Qt(row.assemble()?));
    }
    let field = Field::new(cli.q())?;
    if let Some(path) = &args.matrix {
        let text = std::fs::read_to_string(path).map_err(Error::from)?;
        let mut rows = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let row: Option<Vec<Fe>> = line.chars().map(|c| field.parse_char(c)).collect();
            rows.push(row.ok_or_else(|| Failure::Usage(format!("bad matrix row {line:?}")))?);
        }
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Failure::Usage("matrix rows differ in length".into()));
        }
        return Ok(Input::Raw(Matrix::new(field, n, rows)));
    }
    let m = args.m.ok_or_else(|| Failure::Usage("--m is required".into()))?;
    let a = shift(field, &args.a)?;
    let f1 = parse_list(
        args.f1.as_deref().ok_or_else(|| Failure::Usage("--f1 is required".into()))?,
        field,
    )?;
    let f2 = match &args.f2 {
        Some(s) => parse_list(s, field)?,
        None => Vec::new(),
    };
    let g = parse_coeffs(&args.g, field)?;
    let p = parse_coeffs(&args.p, field)?;
    let spec = match args.form {
        QtForm::OneGen => QtGeneratorSpec::one_gen(field, m, a, g, f1),
        QtForm::TwoGenShifted => QtGeneratorSpec::shifted(field, m, a, g, f1),
        QtForm::TwoGenP1 => QtGeneratorSpec::p1(field, m, a, g, f1, f2),
        QtForm::TwoGenIdentityG1 => QtGeneratorSpec::identity_g1(field, m, a, p, f1, f2),
        QtForm::TwoGenGeneral => QtGeneratorSpec::two_gen(field, m, a, g, p, f1, f2),
    };
    Ok(Input::Qt(qt_assemble(&spec)?))
}

fn digits(field: Field, word: &[Fe]) -> String {
    word.iter().map(|&x| field.name(x)).collect()
}

fn cmd_factor(cli: &Cli, cc: &CcArgs) -> CliResult {
    let field = Field::new(cli.q())?;
    let a = shift(field, &cc.a)?;
    let fac = binomial_factor(field, cc.m, a)?;
    println!("x^{} - {} over GF({})", cc.m, field.name(a), field.q());
    for (f, e) in &fac.factors {
        println!("{} ^{e}", render_coeffs(f));
    }
    println!("divisors {}", fac.divisor_count());
    Ok(())
}

fn cmd_cc_list(cli: &Cli, cc: &CcArgs, with_d: bool) -> CliResult {
    let field = Field::new(cli.q())?;
    let a = shift(field, &cc.a)?;
    for code in enumerate(field, cc.m, a, cc.k)? {
        if with_d {
            let s = code.min_distance(&distance_options(cli))?;
            println!("{} {}", render_coeffs(code.g()), s);
        } else {
            println!("{} k={}", render_coeffs(code.g()), code.k());
        }
    }
    Ok(())
}

fn cmd_partition(cli: &Cli, cc: &CcArgs, mode: PartitionMode) -> CliResult {
    let field = Field::new(cli.q())?;
    let a = shift(field, &cc.a)?;
    let codes: Vec<ConstacyclicCode> = enumerate(field, cc.m, a, cc.k)?;
    for class in partition(&codes, mode)? {
        let members: Vec<String> = class.members.iter().map(render_coeffs).collect();
        let k = cc.m - class.representative.deg0();
        match &class.invariant_key {
            Some(key) => println!(
                "k={k} d={} rep={} members={}",
                key.d.map_or("?".into(), |d| d.to_string()),
                render_coeffs(&class.representative),
                members.join(",")
            ),
            None => println!("k={k} rep={} members={}", render_coeffs(&class.representative), members.join(",")),
        }
    }
    Ok(())
}

fn describe(input: &Input) {
    match input {
        Input::Qt(c) => {
            let s = &c.spec;
            println!(
                "form {} m={} ell={} a={} g={} p={} f1={} f2={}",
                s.form.name(),
                s.m,
                s.ell,
                s.field.name(s.a),
                render_coeffs(&s.g),
                render_coeffs(&s.p),
                render_list(&s.f1),
                render_list(&s.f2)
            );
            println!("n={} k={} (k1={} k2={}) floor={}", c.n(), c.k(), c.k1, c.k2, c.distance_floor);
        }
        Input::Raw(m) => println!("n={} k={}", m.n(), m.rank()),
    }
}

fn report_distance(cli: &Cli, g: &Matrix, floor: usize) -> Result<DistanceStatus, Failure> {
    let r = min_distance(g, &distance_options(cli))?;
    let lower = r.lower.max(floor).min(r.upper);
    let status = DistanceStatus::bounded(lower, r.upper).unwrap_or(DistanceStatus::Unknown);
    println!("d={status} work={}", r.work);
    if let Some(w) = &r.witness {
        println!("witness {}", digits(g.field(), w));
    }
    if r.status != Status::Exact && lower < r.upper {
        return Err(Failure::Budget(format!("distance only bounded: {lower}..{}", r.upper)));
    }
    Ok(status)
}

fn floor_of(input: &Input) -> usize {
    match input {
        Input::Qt(c) => c.distance_floor,
        Input::Raw(_) => 1,
    }
}

fn cmd_mindist(cli: &Cli, args: &CodeArgs) -> CliResult {
    let input = load_code(cli, args)?;
    describe(&input);
    report_distance(cli, input.matrix(), floor_of(&input)).map(|_| ())
}

fn cmd_props(cli: &Cli, args: &CodeArgs) -> CliResult {
    let input = load_code(cli, args)?;
    describe(&input);
    let p = input.matrix().properties();
    println!(
        "lcd={} dual_containing={} self_orthogonal={} reversible={}",
        p.lcd, p.dual_containing, p.self_orthogonal, p.reversible
    );
    Ok(())
}

fn cmd_extend(cli: &Cli, args: &CodeArgs) -> CliResult {
    let input = load_code(cli, args)?;
    let ext = input.matrix().extend();
    println!("n={} k={}", ext.n(), ext.rank());
    report_distance(cli, &ext, floor_of(&input)).map(|_| ())
}

fn cmd_search(cli: &Cli, config: &PathBuf, cursor: &Option<PathBuf>) -> CliResult {
    let text = std::fs::read_to_string(config).map_err(Error::from)?;
    let mut cfg = SearchConfig::from_json(&text)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(b) = cli.budget {
        cfg.budget = b;
    }
    if cli.threads.is_some() {
        cfg.threads = cli.threads;
    }
    if cli.targets.is_some() {
        cfg.targets = cli.targets.clone();
    }
    if cli.field.is_some_and(|q| q != cfg.q) {
        return Err(Failure::Usage(format!("--field {} contradicts config q={}", cli.q(), cfg.q)));
    }
    let io = CampaignIo {
        ledger: cli.ledger.clone(),
        cursor: cursor.clone(),
    };
    let c = run_campaign_with(&cfg, &io)?;
    if cli.ledger.is_none() {
        print!("{}", c.ledger.to_jsonl());
    }
    let s = c.stats;
    println!(
        "config {} items={} candidates={} invalid={} dimension_defects={} pruned={} evaluated={} emitted={}",
        cfg.hash(),
        s.items,
        s.candidates,
        s.invalid,
        s.dimension_defects,
        s.pruned,
        s.evaluated,
        s.emitted
    );
    Ok(())
}

fn cmd_verify(
    cli: &Cli,
    file: &Option<PathBuf>,
    witnesses: &Option<PathBuf>,
    row: &Option<String>,
    skip_distance: bool,
) -> CliResult {
    let table = match file {
        Some(p) => parse_golden(&std::fs::read_to_string(p).map_err(Error::from)?)?,
        None => golden(),
    };
    let mut store = WitnessStore::bundled();
    if let Some(p) = witnesses {
        let extra = WitnessStore::parse(&std::fs::read_to_string(p).map_err(Error::from)?)?;
        for r in &table.rows {
            if let Ok(c) = r.assemble() {
                let fp = qtcodes::distance::code_fingerprint(&c.matrix);
                if let Some(w) = extra.get(&fp) {
                    store.insert(fp, w.to_vec());
                }
            }
        }
    }
    let mut opts = VerifyOptions {
        tier: cli.tier.unwrap_or(Tier::Auto),
        threads: cli.threads,
        skip_distance,
        ..Default::default()
    };
    if let Some(b) = cli.budget {
        opts.quick_budget = b;
        opts.full_budget = b;
    }
    let (mut passed, mut failed) = (0, 0);
    for r in table.rows.iter().filter(|r| row.as_ref().is_none_or(|l| &r.label() == l)) {
        let rep = verify_row(r, &opts, &store);
        println!("{rep}");
        if rep.passed() {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    for q in &table.quarantined {
        println!("SKIP quarantined {q}");
    }
    println!("{passed} passed, {failed} failed, {} quarantined", table.quarantined.len());
    if failed > 0 {
        return Err(Failure::Verification(format!("{failed} rows failed")));
    }
    Ok(())
}

fn cmd_classify(cli: &Cli, n: Option<usize>, k: Option<usize>, d: Option<usize>) -> CliResult {
    let path = cli
        .targets
        .as_ref()
        .ok_or_else(|| Failure::Usage("--targets is required".into()))?;
    let targets = TargetTable::load(path)?;
    match (n, k, d) {
        (Some(n), Some(k), Some(d)) => {
            let c = classify_distance(DistanceStatus::Exact { d }, targets.get(cli.q(), n, k));
            println!("[{n},{k},{d}]_{} {}", cli.q(), c.name());
            Ok(())
        }
        (None, None, None) => {
            let lp = cli
                .ledger
                .as_ref()
                .ok_or_else(|| Failure::Usage("give --n --k --d or --ledger".into()))?;
            for r in Ledger::load(lp)?.records() {
                println!("[{},{},{}]_{} {} {}", r.n, r.k, r.d, r.q, r.g, classify(r, &targets).name());
            }
            Ok(())
        }
        _ => Err(Failure::Usage("--n, --k and --d go together".into())),
    }
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Factor(cc) => cmd_factor(cli, cc),
        Command::CcList { cc, distance } => cmd_cc_list(cli, cc, *distance),
        Command::Partition { cc, mode } => cmd_partition(cli, cc, *mode),
        Command::Assemble { code, print_matrix } => {
            let input = load_code(cli, code)?;
            describe(&input);
            if *print_matrix {
                let g = input.matrix();
                for r in g.rows() {
                    println!("{}", digits(g.field(), r));
                }
            }
            Ok(())
        }
        Command::Mindist(a) => cmd_mindist(cli, a),
        Command::Props(a) => cmd_props(cli, a),
        Command::Extend(a) => cmd_extend(cli, a),
        Command::Search { config, cursor } => cmd_search(cli, config, cursor),
        Command::VerifyTables {
            file,
            witnesses,
            row,
            skip_distance,
        } => cmd_verify(cli, file, witnesses, row, *skip_distance),
        Command::Classify { n, k, d } => cmd_classify(cli, *n, *k, *d),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("budget exhausted: {m}");
            ExitCode::from(3)
        }
    }
}
