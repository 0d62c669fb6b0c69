//! Command-line surface: construct, analyze, encode, channel, decode,
//! realize/codeify, and an end-to-end simulate command. Reports are
//! line-oriented `key=value` text; exit codes are 0 (success), 1 (domain
//! failure), 2 (usage error).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use convcodes::channel::{erase_channel, qsc_channel, stream_from_polys, ErasureMode};
use convcodes::code::ConvolutionalCode;
use convcodes::galois::Field;
use convcodes::metrics::{self, FdMethod};
use convcodes::poly::Poly;
use convcodes::{constructions, decoders, io as fmt_io, sysrep, Error, Result};

/// Fixed default seed so unseeded runs are reproducible.
const DEFAULT_SEED: u64 = 0xC0DE;

#[derive(Parser)]
#[command(name = "convcodes", version, about = "Workbench for convolutional codes over finite fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ConstructArgs {
    /// Recipe: justesen | gll | smith | mdp-superregular | anp-mdp |
    /// complete-mdp-binomial | complete-mdp-alpha | mds-system
    recipe: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    delta: usize,
    /// Field characteristic
    #[arg(long)]
    p: Option<u64>,
    /// Field extension degree
    #[arg(long = "N", default_value_t = 1)]
    ext: usize,
    /// `smith` recipe: primitive root a of Z_p
    #[arg(long)]
    a: Option<usize>,
    /// `smith` recipe: cyclic phase r
    #[arg(long)]
    r: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    code: PathBuf,
    #[arg(long)]
    free_distance: bool,
    /// Report d_0^c .. d_J^c
    #[arg(long, value_name = "J")]
    column_distances: Option<usize>,
    #[arg(long)]
    mds: bool,
    #[arg(long)]
    mdp: bool,
    #[arg(long)]
    reverse_mdp: bool,
    #[arg(long)]
    complete_mdp: bool,
}

#[derive(Subcommand)]
enum ChannelCmd {
    /// Erasure channel (iid, explicit pattern, or burst)
    Erase {
        code: PathBuf,
        stream: PathBuf,
        #[arg(long)]
        rate: Option<f64>,
        /// Erased coordinates as `t,pos` pairs
        #[arg(long, value_name = "T,POS", num_args = 1..)]
        pattern: Option<Vec<String>>,
        /// Full-step burst as `start,len`
        #[arg(long, value_name = "START,LEN")]
        burst: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// q-ary symmetric channel
    Qsc {
        code: PathBuf,
        stream: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a code from a named construction and write it as `.ccode`
    Construct(ConstructArgs),
    /// Report parameters, bounds, distances, and optimality predicates
    Analyze(AnalyzeArgs),
    /// Encode a message stream (one step of k symbols per line)
    Encode {
        code: PathBuf,
        message: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Pass a stream through a channel model
    Channel {
        #[command(subcommand)]
        cmd: ChannelCmd,
    },
    /// Recover erasures by sliding-window decoding
    DecodeErasure {
        code: PathBuf,
        stream: PathBuf,
        #[arg(long)]
        bidirectional: bool,
        /// Write the window-by-window report here
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Maximum-likelihood decoding of a noisy stream
    DecodeViterbi {
        code: PathBuf,
        stream: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Minimal input-state-output realization of a code (`.iso`)
    Realize {
        code: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Code generated by the trajectories of an `.iso` system
    Codeify {
        iso: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// construct-free end-to-end run: encode, erase, decode, score
    Simulate {
        code: PathBuf,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 0.1)]
        rate: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        bidirectional: bool,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_code(path: &PathBuf) -> Result<ConvolutionalCode> {
    fmt_io::parse_ccode(&read(path)?)
}

fn parse_pair(s: &str, what: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() == 2 {
        if let (Ok(a), Ok(b)) = (parts[0].trim().parse(), parts[1].trim().parse()) {
            return Ok((a, b));
        }
    }
    Err(Error::Parse(format!("{what}: expected `a,b`, got `{s}`")))
}

fn construct(args: &ConstructArgs) -> Result<()> {
    let field = |p: Option<u64>| -> Result<Arc<Field>> {
        let p = p.ok_or_else(|| Error::InvalidParameters("--p is required".into()))?;
        Field::new(p, args.ext)
    };
    let built = match args.recipe.as_str() {
        "justesen" => constructions::justesen_mds(args.n, &field(args.p)?)?,
        "gll" => constructions::gll_mds(args.n, args.delta, &field(args.p)?)?,
        "smith" => {
            let a = args.a.ok_or_else(|| Error::InvalidParameters("--a is required".into()))?;
            let r = args.r.ok_or_else(|| Error::InvalidParameters("--r is required".into()))?;
            let p = args.p.ok_or_else(|| Error::InvalidParameters("--p is required".into()))?;
            constructions::smith_mds(args.n, args.k, args.delta, a, p, r)?
        }
        "mdp-superregular" => {
            let l = args.delta / args.k + args.delta / (args.n - args.k);
            let b = (l + 1) * (2 * args.n - args.k - 1);
            let t = match args.p {
                Some(p) => constructions::binomial_toeplitz(b, &Field::new(p, 1)?)?,
                None => constructions::binomial_superregular(b)?.0,
            };
            constructions::mdp_from_superregular(args.n, args.k, args.delta, &t)?
        }
        "anp-mdp" => constructions::anp_mdp(args.n, args.k, args.delta, &field(args.p)?)?,
        "complete-mdp-binomial" => {
            let p = args.p.ok_or_else(|| Error::InvalidParameters("--p is required".into()))?;
            constructions::complete_mdp_binomial(args.n, args.k, args.delta, p)?
        }
        "complete-mdp-alpha" => {
            let p = args.p.ok_or_else(|| Error::InvalidParameters("--p is required".into()))?;
            constructions::complete_mdp_alpha(args.n, args.k, args.delta, p, args.ext)?
        }
        "mds-system" => {
            let code = sysrep::mds_from_system(args.n, args.delta, &field(args.p)?)?;
            constructions::Built {
                code,
                name: "mds_system",
                verified: true,
                notes: vec!["pole placement with distinct spectra".into()],
            }
        }
        other => {
            return Err(Error::InvalidParameters(format!("unknown recipe `{other}`")));
        }
    };
    let mut header = vec![
        format!("construction: {}", built.name),
        format!(
            "parameters: n={} k={} delta={}",
            built.code.n, built.code.k, built.code.delta
        ),
        format!("verified: {}", built.verified),
    ];
    header.extend(built.notes.iter().cloned());
    emit(&args.output, &fmt_io::ccode_text(&built.code, &header))
}

fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let c = load_code(&args.code)?;
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "n={}", c.n);
    let _ = writeln!(w, "k={}", c.k);
    let _ = writeln!(w, "delta={}", c.delta);
    let _ = writeln!(w, "field={}", c.field.q());
    let _ = writeln!(w, "memory={}", c.memory());
    let _ = writeln!(w, "L={}", c.l_bound());
    let _ = writeln!(w, "M={}", c.m_bound());
    let degs: Vec<String> = c.row_degrees().iter().map(usize::to_string).collect();
    let _ = writeln!(w, "row_degrees={}", degs.join(","));
    let _ = writeln!(w, "row_reduced={}", c.generator.is_row_reduced());
    let _ = writeln!(w, "left_prime={}", c.generator.is_left_prime()?);
    let _ = writeln!(w, "noncatastrophic={}", c.noncatastrophic);
    let _ = writeln!(w, "singleton_bound={}", metrics::singleton_bound(c.n, c.k, c.delta));
    let fd = |c: &ConvolutionalCode| {
        if c.noncatastrophic {
            metrics::free_distance(c, FdMethod::Stategraph)
        } else {
            metrics::free_distance(c, FdMethod::Bruteforce { cap: c.delta + 3 })
        }
    };
    if args.free_distance {
        let r = fd(&c)?;
        let _ = writeln!(w, "free_distance={}", r.value);
        let _ = writeln!(w, "free_distance_certified={}", r.certified);
    }
    if let Some(jm) = args.column_distances {
        for j in 0..=jm {
            let _ = writeln!(w, "column_distance_{j}={}", metrics::column_distance(&c, j)?);
            let _ = writeln!(w, "column_bound_{j}={}", metrics::column_bound(c.n, c.k, j));
        }
    }
    if args.mds {
        let _ = writeln!(w, "mds={}", metrics::is_mds(&c)?);
    }
    let minors = |w: &mut String, key: &str, rep: metrics::MinorReport| {
        let _ = writeln!(w, "{key}={}", rep.ok);
        let _ = writeln!(w, "{key}_minors_checked={}", rep.checked);
        if let Some(cols) = rep.witness {
            let cols: Vec<String> = cols.iter().map(usize::to_string).collect();
            let _ = writeln!(w, "{key}_witness_columns={}", cols.join(","));
        }
    };
    if args.mdp {
        minors(w, "mdp", metrics::mdp_minor_report(&c)?);
    }
    if args.reverse_mdp {
        minors(w, "reverse_mdp", metrics::reverse_mdp_minor_report(&c)?);
    }
    if args.complete_mdp {
        minors(w, "complete_mdp", metrics::complete_mdp_minor_report(&c)?);
    }
    print!("{out}");
    Ok(())
}

/// Message file: one step per line, k symbols; columns become the k input
/// polynomials.
fn parse_message(c: &ConvolutionalCode, text: &str) -> Result<Vec<Poly>> {
    let e = fmt_io::parse_stream(&c.field, c.k, text)?;
    if !e.erased.is_empty() {
        return Err(Error::Parse("message streams cannot contain erasures".into()));
    }
    Ok((0..c.k)
        .map(|i| {
            Poly::new(c.field.clone(), e.stream.steps.iter().map(|s| s[i]).collect())
        })
        .collect())
}

fn encode(code: &PathBuf, message: &PathBuf, output: &Option<PathBuf>) -> Result<()> {
    let c = load_code(code)?;
    let text = read(message)?;
    let msg = parse_message(&c, &text)?;
    let msg_len = msg
        .iter()
        .filter_map(|p| p.degree())
        .map(|d| d + 1)
        .max()
        .unwrap_or(0);
    let cw = c.encode(&msg)?;
    let s = stream_from_polys(c.field.clone(), &cw, msg_len + c.memory());
    emit(output, &fmt_io::stream_text(&s))
}

fn channel(cmd: &ChannelCmd) -> Result<()> {
    match cmd {
        ChannelCmd::Erase { code, stream, rate, pattern, burst, seed, output } => {
            let c = load_code(code)?;
            let e = fmt_io::parse_stream(&c.field, c.n, &read(stream)?)?;
            if !e.erased.is_empty() {
                return Err(Error::Parse("channel input already contains erasures".into()));
            }
            let mode = match (rate, pattern, burst) {
                (Some(r), None, None) => ErasureMode::Iid { rate: *r },
                (None, Some(pat), None) => ErasureMode::Pattern(
                    pat.iter()
                        .map(|s| parse_pair(s, "--pattern"))
                        .collect::<Result<_>>()?,
                ),
                (None, None, Some(b)) => {
                    let (start, len) = parse_pair(b, "--burst")?;
                    ErasureMode::Burst { start, len }
                }
                _ => {
                    return Err(Error::InvalidParameters(
                        "give exactly one of --rate, --pattern, --burst".into(),
                    ))
                }
            };
            let out = erase_channel(&e.stream, &mode, *seed)?;
            emit(output, &fmt_io::erasure_stream_text(&out))
        }
        ChannelCmd::Qsc { code, stream, eps, seed, output } => {
            let c = load_code(code)?;
            let e = fmt_io::parse_stream(&c.field, c.n, &read(stream)?)?;
            if !e.erased.is_empty() {
                return Err(Error::Parse("channel input already contains erasures".into()));
            }
            let out = qsc_channel(&e.stream, *eps, *seed)?;
            emit(output, &fmt_io::stream_text(&out))
        }
    }
}

fn decode_report_text(rep: &decoders::DecodeReport) -> String {
    let mut out = String::new();
    let status = match rep.status {
        decoders::DecodeStatus::Complete => "complete",
        decoders::DecodeStatus::Partial => "partial",
        decoders::DecodeStatus::Failed => "failed",
    };
    let _ = writeln!(out, "status={status}");
    let _ = writeln!(out, "unrecovered={}", rep.unrecovered.len());
    for &(t, p) in &rep.unrecovered {
        let _ = writeln!(out, "unrecovered_at={t},{p}");
    }
    for tr in &rep.trace {
        let _ = writeln!(
            out,
            "window t={} j={} erased={} solvable={} backward={}",
            tr.t, tr.j, tr.erased, tr.solvable, tr.backward
        );
    }
    out
}

fn decode_erasure(
    code: &PathBuf,
    stream: &PathBuf,
    bidirectional: bool,
    report: &Option<PathBuf>,
    output: &Option<PathBuf>,
) -> Result<bool> {
    let c = load_code(code)?;
    let w = fmt_io::parse_stream(&c.field, c.n, &read(stream)?)?;
    let rep = if bidirectional {
        decoders::erasure_decode_bidirectional(&c, &w)?
    } else {
        decoders::erasure_decode_forward(&c, &w)?
    };
    let rtext = decode_report_text(&rep);
    match report {
        Some(p) => std::fs::write(p, &rtext)?,
        None => print!("{rtext}"),
    }
    emit(output, &fmt_io::stream_text(&rep.recovered))?;
    Ok(rep.status == decoders::DecodeStatus::Complete)
}

fn decode_viterbi(code: &PathBuf, stream: &PathBuf, output: &Option<PathBuf>) -> Result<()> {
    let c = load_code(code)?;
    let e = fmt_io::parse_stream(&c.field, c.n, &read(stream)?)?;
    if !e.erased.is_empty() {
        return Err(Error::Parse("viterbi input cannot contain erasures".into()));
    }
    let r = decoders::viterbi_decode(&c, &e.stream)?;
    println!("distance={}", r.distance);
    let msg: Vec<String> = r
        .message
        .iter()
        .map(|s| s.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
        .collect();
    for m in &msg {
        println!("message={m}");
    }
    let cw = convcodes::channel::SymbolStream::new(c.field.clone(), c.n, r.codeword)?;
    emit(output, &fmt_io::stream_text(&cw))
}

fn realize(code: &PathBuf, output: &Option<PathBuf>) -> Result<()> {
    let c = load_code(code)?;
    let (sigma, perm) = sysrep::iso_from_code(&c)?;
    let perm: Vec<String> = perm.iter().map(usize::to_string).collect();
    let header = vec![
        format!("minimal realization, state dimension {}", sigma.dim()),
        format!("codeword coordinate order [y u]: permutation {}", perm.join(" ")),
    ];
    emit(output, &fmt_io::iso_text(&sigma, &header))
}

fn codeify(iso: &PathBuf, output: &Option<PathBuf>) -> Result<()> {
    let sigma = fmt_io::parse_iso(&read(iso)?)?;
    let c = sysrep::code_from_iso(&sigma)?;
    let header = vec!["code generated by the system's finite-weight trajectories".into()];
    emit(output, &fmt_io::ccode_text(&c, &header))
}

fn simulate(code: &PathBuf, steps: usize, rate: f64, seed: u64, bidir: bool) -> Result<()> {
    let c = load_code(code)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let msg: Vec<Poly> = (0..c.k)
        .map(|_| {
            Poly::new(
                c.field.clone(),
                (0..steps).map(|_| rng.gen_range(0..c.field.q())).collect(),
            )
        })
        .collect();
    let cw = c.encode(&msg)?;
    let s = stream_from_polys(c.field.clone(), &cw, steps + c.memory());
    let w = erase_channel(&s, &ErasureMode::Iid { rate }, seed.wrapping_add(1))?;
    let rep = if bidir {
        decoders::erasure_decode_bidirectional(&c, &w)?
    } else {
        decoders::erasure_decode_forward(&c, &w)?
    };
    let errors: usize = (0..s.len())
        .map(|t| {
            (0..s.n)
                .filter(|&p| rep.recovered.steps[t][p] != s.steps[t][p])
                .count()
        })
        .sum();
    println!("seed={seed}");
    println!("steps={}", s.len());
    println!("rate={rate}");
    println!("erasures={}", w.erased.len());
    print!("{}", decode_report_text(&rep));
    println!("symbol_errors={errors}");
    println!("ok={}", errors == 0 && rep.unrecovered.is_empty());
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    match &cli.cmd {
        Cmd::Construct(a) => construct(a).map(|_| true),
        Cmd::Analyze(a) => analyze(a).map(|_| true),
        Cmd::Encode { code, message, output } => encode(code, message, output).map(|_| true),
        Cmd::Channel { cmd } => channel(cmd).map(|_| true),
        Cmd::DecodeErasure { code, stream, bidirectional, report, output } => {
            decode_erasure(code, stream, *bidirectional, report, output)
        }
        Cmd::DecodeViterbi { code, stream, output } => {
            decode_viterbi(code, stream, output).map(|_| true)
        }
        Cmd::Realize { code, output } => realize(code, output).map(|_| true),
        Cmd::Codeify { iso, output } => codeify(iso, output).map(|_| true),
        Cmd::Simulate { code, steps, rate, seed, bidirectional } => {
            simulate(code, *steps, *rate, *seed, *bidirectional).map(|_| true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
