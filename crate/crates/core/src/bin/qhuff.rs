use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qhuff::bench::{run_bench, to_csv, BenchMode};
use qhuff::codec::{compress_bytes, compress_uniform, decompress, read_symbols, Alphabet, UniformEncoder};
use qhuff::direct::{code_params, direct_codebook, MAX_CODEBOOK_ALPHABET};
use qhuff::qstate::{build_state, densify, SparseZeroOneMatrix};
use qhuff::verify::verify;
use qhuff::{entropy, expected_length, huffman_codebook, parse_frequency_table, Error};

/// Largest register side that `state --dense` will print.
const MAX_DENSE_SIDE: u64 = 4096;

#[derive(Parser)]
#[command(name = "qhuff", version, about = "Uniform-alphabet and Huffman prefix coders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form code of every symbol of an n-symbol alphabet.
    Table {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Print lower, upper and diff for an n-symbol alphabet as JSON.
    Params {
        #[arg(long)]
        n: u64,
    },
    /// Compress a file into a container.
    Encode(CodecArgs),
    /// Restore the original file from a container.
    Decode(CodecArgs),
    /// Print the encoder registers for an n-symbol alphabet.
    State {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        dense: bool,
    },
    /// Check every consistency property for n = 2..=max-n.
    Verify {
        #[arg(long = "max-n")]
        max_n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Count operations of each encoder and check them against their bounds.
    Bench {
        #[arg(long = "n-list", value_delimiter = ',', required = true)]
        n_list: Vec<u64>,
        #[arg(long, value_enum, default_value_t = BenchSelect::All)]
        mode: BenchSelect,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Entropy, Huffman expected length and redundancy of a frequency file.
    Entropy {
        #[arg(long)]
        freq: PathBuf,
    },
}

#[derive(clap::Args)]
struct CodecArgs {
    #[arg(long, value_enum)]
    mode: Option<CodecMode>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    #[arg(long = "sym-width")]
    sym_width: Option<u8>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CodecMode {
    Direct,
    Tree,
    Qstate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchSelect {
    All,
    Tree,
    Direct,
    Qstate,
}

/// A failure with its machine-readable tag and exit status.
struct Failure {
    tag: String,
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { tag: "usage".into(), message: message.into(), code: 2 }
    }

    fn new(tag: &str, message: impl Into<String>) -> Self {
        Self { tag: tag.into(), message: message.into(), code: 1 }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self { tag: e.kind().into(), message: e.to_string(), code: 1 }
    }
}

fn io_failure(path: &std::path::Path, e: std::io::Error) -> Failure {
    Failure::new("io", format!("{}: {e}", path.display()))
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Table { n, json } => cmd_table(n, json),
        Command::Params { n } => cmd_params(n),
        Command::Encode(args) => cmd_encode(&args),
        Command::Decode(args) => cmd_decode(&args),
        Command::State { n, dense } => cmd_state(n, dense),
        Command::Verify { max_n, json } => cmd_verify(max_n, json),
        Command::Bench { n_list, mode, csv } => cmd_bench(&n_list, mode, csv),
        Command::Entropy { freq } => cmd_entropy(&freq),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error[{}]: {}", f.tag, f.message);
            ExitCode::from(f.code)
        }
    }
}

fn check_alphabet(n: u64, max: u64) -> CmdResult {
    if (2..=max).contains(&n) {
        Ok(())
    } else {
        Err(Failure::usage(format!("--n must be in [2, {max}], got {n}")))
    }
}

#[derive(Serialize)]
struct TableJson {
    n: u64,
    lower: u32,
    upper: u32,
    diff: u64,
    codes: Vec<String>,
}

fn cmd_table(n: u64, json: bool) -> CmdResult {
    check_alphabet(n, MAX_CODEBOOK_ALPHABET)?;
    let p = code_params(n)?;
    let book = direct_codebook(n)?;
    let mut out = String::new();
    if json {
        let t = TableJson {
            n,
            lower: p.lower,
            upper: p.upper,
            diff: p.diff,
            codes: book.codes().map(ToString::to_string).collect(),
        };
        out.push_str(&serde_json::to_string(&t).expect("serializable"));
        out.push('\n');
    } else {
        writeln!(out, "# n={n}\tlower={}\tupper={}\tdiff={}", p.lower, p.upper, p.diff).unwrap();
        for (s, code) in book.iter() {
            writeln!(out, "{s}\t{code}").unwrap();
        }
    }
    print!("{out}");
    Ok(())
}

fn cmd_params(n: u64) -> CmdResult {
    let p = code_params(n).map_err(|e| Failure::usage(e.to_string()))?;
    println!("{}", serde_json::to_string(&p).expect("serializable"));
    Ok(())
}

fn default_width(n: u64) -> u8 {
    match n {
        0..=256 => 1,
        257..=65536 => 2,
        _ => 4,
    }
}

fn cmd_encode(args: &CodecArgs) -> CmdResult {
    let mode = args.mode.ok_or_else(|| Failure::usage("encode requires --mode"))?;
    let raw = fs::read(&args.input).map_err(|e| io_failure(&args.input, e))?;
    let (container, symbols) = match mode {
        CodecMode::Tree => {
            if args.n.is_some() || args.sym_width.is_some() {
                return Err(Failure::usage("--mode tree codes raw bytes and takes neither --n nor --sym-width"));
            }
            (compress_bytes(&raw)?, raw.len())
        }
        CodecMode::Direct | CodecMode::Qstate => {
            let n = args.n.ok_or_else(|| Failure::usage("--mode direct/qstate requires --n"))?;
            check_alphabet(n, u32::MAX as u64)?;
            let width = args.sym_width.unwrap_or_else(|| default_width(n));
            if !matches!(width, 1 | 2 | 4) {
                return Err(Failure::usage(format!("--sym-width must be 1, 2 or 4, got {width}")));
            }
            if n > 1u64 << (8 * width as u32) {
                return Err(Failure::usage(format!("n = {n} does not fit {width}-byte symbols")));
            }
            let symbols = read_symbols(&raw, width)?;
            let encoder = if mode == CodecMode::Direct { UniformEncoder::Direct } else { UniformEncoder::QState };
            (compress_uniform(n, width, &symbols, encoder)?, symbols.len())
        }
    };
    fs::write(&args.output, &container).map_err(|e| io_failure(&args.output, e))?;
    print_summary(raw.len(), container.len(), symbols, container.len() as f64 * 8.0);
    Ok(())
}

fn cmd_decode(args: &CodecArgs) -> CmdResult {
    let bytes = fs::read(&args.input).map_err(|e| io_failure(&args.input, e))?;
    let decoded = decompress(&bytes)?;
    match (args.mode, &decoded.header.alphabet) {
        (Some(CodecMode::Tree), Alphabet::Uniform { .. }) => {
            return Err(Failure::new("format", "container holds a uniform-mode stream, not a byte Huffman stream"));
        }
        (Some(CodecMode::Direct | CodecMode::Qstate), Alphabet::Bytes { .. }) => {
            return Err(Failure::new("format", "container holds a byte Huffman stream, not a uniform-mode stream"));
        }
        _ => {}
    }
    if let (Some(n), Alphabet::Uniform { n: stored, .. }) = (args.n, &decoded.header.alphabet) {
        if n != *stored as u64 {
            return Err(Failure::new("format", format!("container alphabet is {stored}, --n says {n}")));
        }
    }
    let out = decoded.to_file_bytes();
    fs::write(&args.output, &out).map_err(|e| io_failure(&args.output, e))?;
    print_summary(bytes.len(), out.len(), decoded.symbols.len(), bytes.len() as f64 * 8.0);
    Ok(())
}

fn print_summary(input: usize, output: usize, symbols: usize, container_bits: f64) {
    let bps = if symbols == 0 { 0.0 } else { container_bits / symbols as f64 };
    println!("input_bytes={input}\toutput_bytes={output}\tsymbols={symbols}\tbits_per_symbol={bps:.6}");
}

fn format_ones(m: &SparseZeroOneMatrix) -> String {
    m.ones().map(|(r, c)| format!("({r},{c})")).collect::<Vec<_>>().join(" ")
}

fn cmd_state(n: u64, dense: bool) -> CmdResult {
    let p = code_params(n).map_err(|e| Failure::usage(e.to_string()))?;
    if dense && (1u64 << p.upper) > MAX_DENSE_SIDE {
        return Err(Failure::new("too-large", format!("--dense needs 2^upper <= {MAX_DENSE_SIDE}, got 2^{}", p.upper)));
    }
    let s = build_state(n)?;
    let mut out = String::new();
    writeln!(out, "n={n}\tlower={}\tupper={}\tdiff={}", p.lower, p.upper, p.diff).unwrap();
    let mut registers = vec![s.state1()];
    if !p.is_power_of_two() {
        registers.push(s.state2());
    }
    for (i, reg) in registers.into_iter().enumerate() {
        writeln!(out, "register{} {}x{}: {}", i + 1, reg.rows(), reg.cols(), format_ones(reg)).unwrap();
        if dense {
            out.push_str(&densify(reg)?.to_string());
        }
    }
    print!("{out}");
    Ok(())
}

fn cmd_verify(max_n: u64, json: bool) -> CmdResult {
    check_alphabet(max_n, MAX_CODEBOOK_ALPHABET).map_err(|_| Failure::usage(format!("--max-n must be in [2, {MAX_CODEBOOK_ALPHABET}], got {max_n}")))?;
    let report = verify(max_n)?;
    if json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        for (n, what) in &report.failures {
            println!("FAIL\t{n}\t{what}");
        }
        println!(
            "checked n={}..={}\tproperties={}\tfailures={}",
            report.n_range.0,
            report.n_range.1,
            report.checked_properties.join(","),
            report.failures.len()
        );
    }
    if report.success() {
        Ok(())
    } else {
        Err(Failure::new("verify", format!("{} property failures", report.failures.len())))
    }
}

fn cmd_bench(n_list: &[u64], select: BenchSelect, csv: Option<PathBuf>) -> CmdResult {
    if let Some(&bad) = n_list.iter().find(|&&n| n < 2) {
        return Err(Failure::usage(format!("every n must be >= 2, got {bad}")));
    }
    let modes: Vec<BenchMode> = match select {
        BenchSelect::All => BenchMode::ALL.to_vec(),
        BenchSelect::Tree => vec![BenchMode::Tree],
        BenchSelect::Direct => vec![BenchMode::Direct],
        BenchSelect::Qstate => vec![BenchMode::QState],
    };
    let rows = run_bench(n_list, &modes)?;

    let mut out = String::from("n\tmode");
    for name in qhuff::OpCounters::NAMES {
        write!(out, "\t{name}").unwrap();
    }
    out.push_str("\tnanos\n");
    for r in &rows {
        write!(out, "{}\t{}", r.n, r.mode).unwrap();
        for (_, v) in r.counters.entries() {
            write!(out, "\t{v}").unwrap();
        }
        writeln!(out, "\t{}", r.nanos).unwrap();
    }
    print!("{out}");

    if let Some(path) = csv {
        fs::write(&path, to_csv(&rows)).map_err(|e| io_failure(&path, e))?;
    }
    let violations: Vec<String> = rows
        .iter()
        .flat_map(|r| r.violations.iter().map(move |v| format!("n={} mode={}: {v}", r.n, r.mode)))
        .collect();
    match violations.first() {
        None => Ok(()),
        Some(first) => Err(Failure::new("bound", format!("{first} ({} violations)", violations.len()))),
    }
}

fn cmd_entropy(path: &std::path::Path) -> CmdResult {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let dist = parse_frequency_table(&text)?;
    let h = entropy(&dist);
    let l = expected_length(&dist, &huffman_codebook(&dist)?)?;
    println!("entropy\t{h:.6}");
    println!("expected_length\t{l:.6}");
    println!("redundancy\t{:.6}", l - h);
    Ok(())
}
