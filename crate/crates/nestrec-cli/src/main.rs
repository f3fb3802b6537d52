//! `nestrec` — command-line laboratory for the nested recurrence
//! `q(n) = q(n - q(n-1)) + f(n)`.
//!
//! Every library module is exposed as a subcommand; outputs are CSV rows on
//! stdout (headerless unless `--header`), DOT or JSON where a structure
//! needs it, and identical argv + seed always produce byte-identical output.
//!
//! Exit codes: 0 success, 1 domain failure (a death where survival was
//! asserted, a violated invariant), 2 usage error.  Commands that *measure*
//! — `bound`, `fit`, `hofstadter`, `counterexample` — exit 0 even when the
//! measured object dies, because reporting the death is their job; commands
//! that *assert* — `member`, `family`, `strip --q`, `envelope --hypotheses`,
//! `negext --verify-bound`, `bound --sandwich`, `certify --strict` — exit 1
//! when the assertion fails.

mod emit;
mod parse;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num::rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use nestrec::bounding::{self, ConeSpec};
use nestrec::counterexamples;
use nestrec::enumeration;
use nestrec::exact::ratio_to_f64;
use nestrec::families::{self, FamilySpec, YSeq};
use nestrec::hofstadter;
use nestrec::negext;
use nestrec::seqcore::{f_from_q, q_from_f, qprime, DeathKind, FSeq, QSeq};
use nestrec::theoremlab;

use emit::{join_i64, Sink};

#[derive(Parser)]
#[command(
    name = "nestrec",
    version,
    about = "Laboratory for the nested recurrence q(n) = q(n - q(n-1)) + f(n)",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Write output to FILE instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Prepend a header row to CSV output
    #[arg(long, global = true)]
    header: bool,

    /// Worker threads for parallel scans (0 = all cores)
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    jobs: usize,

    /// RNG seed for sampled output
    #[arg(long, global = true, default_value_t = 0, value_name = "S")]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the recurrence over a driver f and print the value sequence q
    Generate {
        /// Comma-separated driver terms, f(1) = 0 first
        f: String,
        /// Horizon (defaults to the driver length)
        #[arg(long, value_name = "N")]
        n: Option<usize>,
    },
    /// Recover the driver f from a value sequence q
    Invert {
        /// Comma-separated values with 1 <= q(n) <= n
        q: String,
    },
    /// Check whether a driver survives to its own length
    Member {
        /// Comma-separated driver terms
        f: String,
    },
    /// Enumerate the survivor set F_n, or count it
    Enumerate {
        /// Sequence length
        #[arg(long, value_name = "N")]
        n: Option<usize>,
        /// Print only `n,count`
        #[arg(long)]
        count_only: bool,
        /// Check the generate/invert round trip over every member
        #[arg(long)]
        verify: bool,
        /// Round-trip lengths up to 7 and counts up to N (default 8)
        #[arg(long)]
        suite: bool,
        /// Print the pointwise-admissible count phi(n) instead
        #[arg(long)]
        potential: bool,
        /// Print the all-negative-tail count (n-3)! instead
        #[arg(long)]
        negative_tails: bool,
    },
    /// Export the survivor choice tree (JSON, or DOT with --dot)
    Tree {
        /// Tree depth
        #[arg(long, value_name = "N")]
        n: usize,
        /// Emit Graphviz DOT instead of JSON
        #[arg(long)]
        dot: bool,
    },
    /// Sample survivor families and check the runs, or print count formulas
    Family {
        /// slow-alpha | delta-step | powtwo | strip012 | ladder | ydriven |
        /// lower-witness | upper-witness
        #[arg(long, value_name = "NAME")]
        name: Option<String>,
        /// Gradient for slow-alpha, in [1/2, 1)
        #[arg(long, value_name = "P/Q")]
        alpha: Option<String>,
        /// Flat width for delta-step
        #[arg(long, value_name = "D")]
        delta: Option<u64>,
        /// Rung for ladder (>= 3)
        #[arg(long, value_name = "L")]
        ell: Option<usize>,
        /// Mask period for ydriven (>= 2)
        #[arg(long, value_name = "M")]
        period: Option<usize>,
        /// Number of samples
        #[arg(long, default_value_t = 1, value_name = "K")]
        samples: usize,
        /// Sample length
        #[arg(long, value_name = "N")]
        n: Option<usize>,
        /// Print the member-count formula instead of sampling
        #[arg(long)]
        count: bool,
        /// Run the cross-family check suite (all six parametric families)
        #[arg(long)]
        suite: bool,
    },
    /// Steered killers, strip jumps, and other dying drivers
    Counterexample {
        /// Even segment width d >= 2: report the steered run
        #[arg(long, value_name = "D")]
        d: Option<u64>,
        /// With --d: print the full n,f,q trace
        #[arg(long)]
        trace: bool,
        /// Tabulate kill indices for even d up to --max-d
        #[arg(long)]
        table: bool,
        /// Upper limit for --table
        #[arg(long, default_value_t = 20, value_name = "D")]
        max_d: u64,
        /// Bound-hugging witnesses for sizes A..B: each dies at size + 2
        #[arg(long, value_name = "A..B")]
        cone1: Option<String>,
        /// Slow prefixes of length 4m-1 killed by one in-strip jump, m in A..B
        #[arg(long, value_name = "A..B")]
        jump: Option<String>,
    },
    /// Exhaustive negative-extension search over all prefixes of length n0
    Negext {
        /// Prefix length, or an inclusive range like 4..10
        #[arg(long, value_name = "N0")]
        n0: String,
        /// Also print the prefixes achieving the latest death
        #[arg(long)]
        examples: bool,
        /// Check every member's -1-extension death against the a-priori bound
        #[arg(long)]
        verify_bound: bool,
    },
    /// Interval / set bounds over a cone of drivers
    Bound {
        /// Inline cone: linear:A,B | sqrt:A,B | affine-sqrt:P,R,P',R' |
        /// table:L1,../U1,..
        #[arg(long, value_name = "SPEC")]
        cone: Option<String>,
        /// JSON cone config file
        #[arg(long, value_name = "FILE")]
        cone_file: Option<PathBuf>,
        /// Horizon
        #[arg(long, value_name = "N")]
        n: usize,
        /// Print per-index rows n,L,U instead of the summary
        #[arg(long)]
        trace: bool,
        /// Print the set-valued bounds, one space-joined set per row
        #[arg(long)]
        sets: bool,
        /// Print the actual reachable sets, one space-joined set per row
        #[arg(long)]
        actual: bool,
        /// Check actual ⊆ set-bound ⊆ interval-bound on K seeded random cones
        #[arg(long, value_name = "K")]
        sandwich: Option<usize>,
        /// Raise the horizon cap for --sets / --actual
        #[arg(long, value_name = "C")]
        cap: Option<usize>,
    },
    /// Least-squares power-law fit of an interval bound
    Fit {
        /// Inline cone (same syntax as bound --cone)
        #[arg(long, value_name = "SPEC")]
        cone: Option<String>,
        /// JSON cone config file
        #[arg(long, value_name = "FILE")]
        cone_file: Option<PathBuf>,
        /// Horizon
        #[arg(long, value_name = "N")]
        n: usize,
        /// lower | upper
        #[arg(long, value_name = "SIDE")]
        side: String,
        /// First index of the fit range (default 1)
        #[arg(long, value_name = "A")]
        from: Option<usize>,
        /// Last index of the fit range (default: last alive index)
        #[arg(long, value_name = "B")]
        to: Option<usize>,
    },
    /// Build the square-root cone startup certificate and print it as JSON
    Certify {
        /// Exit 1 unless the certificate comes out fully certified
        #[arg(long)]
        strict: bool,
    },
    /// Linear-strip constants and the prefix corridor check
    Strip {
        /// Strip intercept a > 1/4
        #[arg(long, value_name = "P/Q")]
        a: String,
        /// Strip intercept b > 0
        #[arg(long, value_name = "P/Q")]
        b: String,
        /// Corridor margin
        #[arg(long, value_name = "P/Q")]
        epsilon: Option<String>,
        /// Handoff index
        #[arg(long, value_name = "N")]
        n0: Option<usize>,
        /// Prefix to check: comma-separated q values, or `staircase`
        #[arg(long, value_name = "Q")]
        q: Option<String>,
    },
    /// Cone-envelope constants, contraction coefficients, and hypotheses
    Envelope {
        /// Contraction constant C0 with 0 < C0 < sqrt(2/3)
        #[arg(long, value_name = "P/Q")]
        c0: Option<String>,
        /// Power-envelope exponent in (0, 1)
        #[arg(long, value_name = "P/Q")]
        alpha: Option<String>,
        /// Envelope scale
        #[arg(long, value_name = "P/Q")]
        mu: Option<String>,
        /// Use the logarithmic envelope mu*ln(n) instead of mu*n^alpha
        #[arg(long)]
        log: bool,
        /// Print the handoff threshold for the envelope
        #[arg(long)]
        threshold: bool,
        /// Check the four startup hypotheses at --n0
        #[arg(long)]
        hypotheses: bool,
        /// Handoff index for --hypotheses
        #[arg(long, value_name = "N")]
        n0: Option<usize>,
        /// Slow-growth horizon for --hypotheses
        #[arg(long, default_value_t = 1 << 20, value_name = "N")]
        horizon: usize,
        /// Print the largest exponent whose contraction stays subcritical
        #[arg(long)]
        alpha_limit: bool,
    },
    /// The two-term recurrence and its mod-M dilution
    Hofstadter {
        /// Horizon
        #[arg(long, value_name = "N")]
        n: usize,
        /// Dilution modulus (>= 3); omit for the classic sequence
        #[arg(long, value_name = "M")]
        m: Option<i64>,
        /// Scan moduli A..B (inclusive), one verdict row each
        #[arg(long, value_name = "A..B")]
        scan: Option<String>,
        /// Print the value sequence instead of the verdict row
        #[arg(long)]
        terms: bool,
    },
}

struct UsageError {
    reason: String,
    synopsis: &'static str,
}

fn usage(reason: impl Into<String>, synopsis: &'static str) -> UsageError {
    UsageError {
        reason: reason.into(),
        synopsis,
    }
}

/// Maps a library error: bad or over-budget requests are usage errors; an
/// overflow is a run outcome and handled where it occurs.
fn lib_usage(e: nestrec::Error, synopsis: &'static str) -> UsageError {
    let reason = match &e {
        nestrec::Error::Limit(_) => {
            format!("{e} (or set NESTREC_LIMIT_OVERRIDE=N)")
        }
        _ => e.to_string(),
    };
    usage(reason, synopsis)
}

fn limit_override_usize(synopsis: &'static str) -> Result<Option<usize>, UsageError> {
    match std::env::var("NESTREC_LIMIT_OVERRIDE") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| usage(format!("NESTREC_LIMIT_OVERRIDE=`{s}` is not an integer"), synopsis)),
        Err(_) => Ok(None),
    }
}

/// Quotes a CSV field when it contains a delimiter.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn kind_str(kind: DeathKind) -> &'static str {
    match kind {
        DeathKind::BelowOne => "below-one",
        DeathKind::AboveIndex => "above-index",
    }
}

fn main() {
    let cli = Cli::parse();
    let threads = cli.jobs;
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };
    let mut sink = Sink::new(cli.out.clone(), cli.header);
    let outcome = pool.install(|| dispatch(&cli, &mut sink));
    let code = match outcome {
        Ok(code) => {
            if let Err(e) = sink.flush() {
                eprintln!("error: cannot write output: {e}");
                std::process::exit(1);
            }
            code
        }
        Err(u) => {
            eprintln!("error: {}", u.reason);
            eprintln!("usage: nestrec {}", u.synopsis);
            2
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: &Cli, sink: &mut Sink) -> Result<i32, UsageError> {
    match &cli.cmd {
        Cmd::Generate { f, n } => cmd_generate(sink, f, *n),
        Cmd::Invert { q } => cmd_invert(sink, q),
        Cmd::Member { f } => cmd_member(sink, f),
        Cmd::Enumerate {
            n,
            count_only,
            verify,
            suite,
            potential,
            negative_tails,
        } => cmd_enumerate(sink, *n, *count_only, *verify, *suite, *potential, *negative_tails),
        Cmd::Tree { n, dot } => cmd_tree(sink, *n, *dot),
        Cmd::Family {
            name,
            alpha,
            delta,
            ell,
            period,
            samples,
            n,
            count,
            suite,
        } => cmd_family(
            sink, cli.seed, name, alpha, *delta, *ell, *period, *samples, *n, *count, *suite,
        ),
        Cmd::Counterexample {
            d,
            trace,
            table,
            max_d,
            cone1,
            jump,
        } => cmd_counterexample(sink, *d, *trace, *table, *max_d, cone1, jump),
        Cmd::Negext {
            n0,
            examples,
            verify_bound,
        } => cmd_negext(sink, n0, *examples, *verify_bound),
        Cmd::Bound {
            cone,
            cone_file,
            n,
            trace,
            sets,
            actual,
            sandwich,
            cap,
        } => cmd_bound(sink, cli.seed, cone, cone_file, *n, *trace, *sets, *actual, *sandwich, *cap),
        Cmd::Fit {
            cone,
            cone_file,
            n,
            side,
            from,
            to,
        } => cmd_fit(sink, cone, cone_file, *n, side, *from, *to),
        Cmd::Certify { strict } => cmd_certify(sink, *strict),
        Cmd::Strip {
            a,
            b,
            epsilon,
            n0,
            q,
        } => cmd_strip(sink, a, b, epsilon, *n0, q),
        Cmd::Envelope {
            c0,
            alpha,
            mu,
            log,
            threshold,
            hypotheses,
            n0,
            horizon,
            alpha_limit,
        } => cmd_envelope(sink, c0, alpha, mu, *log, *threshold, *hypotheses, *n0, *horizon, *alpha_limit),
        Cmd::Hofstadter { n, m, scan, terms } => cmd_hofstadter(sink, *n, *m, scan, *terms),
    }
}

// ---------------------------------------------------------------- seqcore

const GENERATE_SYNOPSIS: &str = "generate <F> [--n N]";

fn cmd_generate(sink: &mut Sink, f_text: &str, n: Option<usize>) -> Result<i32, UsageError> {
    let terms = parse::parse_int_list(f_text).map_err(|e| usage(e, GENERATE_SYNOPSIS))?;
    let f = FSeq::new(terms).map_err(|e| lib_usage(e, GENERATE_SYNOPSIS))?;
    let n = n.unwrap_or(f.len());
    let out = match q_from_f(&f, n) {
        Ok(out) => out,
        Err(nestrec::Error::Overflow { index }) => {
            eprintln!("overflow while computing term {index}");
            return Ok(1);
        }
        Err(e) => return Err(lib_usage(e, GENERATE_SYNOPSIS)),
    };
    sink.header("q(1..)");
    if !out.prefix.is_empty() {
        sink.row(&join_i64(out.prefix.terms()));
    }
    match out.death {
        None => Ok(0),
        Some(d) => {
            eprintln!(
                "dies at {} ({}, candidate {})",
                d.index,
                kind_str(d.kind),
                d.candidate
            );
            Ok(1)
        }
    }
}

const INVERT_SYNOPSIS: &str = "invert <Q>";

fn cmd_invert(sink: &mut Sink, q_text: &str) -> Result<i32, UsageError> {
    let terms = parse::parse_int_list(q_text).map_err(|e| usage(e, INVERT_SYNOPSIS))?;
    let q = QSeq::new(terms).map_err(|e| lib_usage(e, INVERT_SYNOPSIS))?;
    let f = f_from_q(&q);
    sink.header("f(1..)");
    sink.row(&join_i64(f.terms()));
    Ok(0)
}

const MEMBER_SYNOPSIS: &str = "member <F>";

fn cmd_member(sink: &mut Sink, f_text: &str) -> Result<i32, UsageError> {
    let terms = parse::parse_int_list(f_text).map_err(|e| usage(e, MEMBER_SYNOPSIS))?;
    let f = FSeq::new(terms).map_err(|e| lib_usage(e, MEMBER_SYNOPSIS))?;
    let n = f.len();
    let out = match q_from_f(&f, n) {
        Ok(out) => out,
        Err(nestrec::Error::Overflow { index }) => {
            sink.row(&format!("dies at {index}"));
            return Ok(1);
        }
        Err(e) => return Err(lib_usage(e, MEMBER_SYNOPSIS)),
    };
    match out.death {
        None => {
            sink.row(&format!("survives to {n}"));
            Ok(0)
        }
        Some(d) => {
            sink.row(&format!("dies at {}", d.index));
            Ok(1)
        }
    }
}

// ------------------------------------------------------------ enumeration

const ENUM_SYNOPSIS: &str =
    "enumerate --n N [--count-only | --verify | --suite | --potential | --negative-tails]";

fn cmd_enumerate(
    sink: &mut Sink,
    n: Option<usize>,
    count_only: bool,
    verify: bool,
    suite: bool,
    potential: bool,
    negative_tails: bool,
) -> Result<i32, UsageError> {
    let limit = limit_override_usize(ENUM_SYNOPSIS)?;
    if suite {
        let n = n.unwrap_or(8);
        sink.header("n,count,ok");
        let mut all_ok = true;
        for k in 1..=n {
            let (count, ok) =
                verify_members(k, limit, k <= 7).map_err(|e| lib_usage(e, ENUM_SYNOPSIS))?;
            let expect: u128 = (1..=k as u128).product();
            let ok = ok && count == expect;
            all_ok &= ok;
            sink.row(&format!("{k},{count},{}", if ok { "ok" } else { "FAIL" }));
        }
        return Ok(if all_ok { 0 } else { 1 });
    }
    let n = n.ok_or_else(|| usage("--n is required", ENUM_SYNOPSIS))?;
    if potential {
        let c = enumeration::potential_count(n).map_err(|e| lib_usage(e, ENUM_SYNOPSIS))?;
        sink.header("n,potential");
        sink.row(&format!("{n},{c}"));
        return Ok(0);
    }
    if negative_tails {
        let c = enumeration::negative_tail_count(n).map_err(|e| lib_usage(e, ENUM_SYNOPSIS))?;
        sink.header("n,negative_tails");
        sink.row(&format!("{n},{c}"));
        return Ok(0);
    }
    if count_only || verify {
        let (count, ok) =
            verify_members(n, limit, verify).map_err(|e| lib_usage(e, ENUM_SYNOPSIS))?;
        if verify {
            sink.header("n,count,ok");
            sink.row(&format!("{n},{count},{}", if ok { "ok" } else { "FAIL" }));
            return Ok(if ok { 0 } else { 1 });
        }
        sink.header("n,count");
        sink.row(&format!("{n},{count}"));
        return Ok(0);
    }
    sink.header(
        &(1..=n)
            .map(|i| format!("f{i}"))
            .collect::<Vec<_>>()
            .join(","),
    );
    for f in enumeration::enumerate_f(n, limit).map_err(|e| lib_usage(e, ENUM_SYNOPSIS))? {
        sink.row(&join_i64(f.terms()));
    }
    Ok(0)
}

/// Counts members of `F_n`; with `check`, also verifies that each driver
/// regenerates itself through the recurrence and back.
fn verify_members(n: usize, limit: Option<usize>, check: bool) -> nestrec::Result<(u128, bool)> {
    let mut count: u128 = 0;
    let mut ok = true;
    for f in enumeration::enumerate_f(n, limit)? {
        count += 1;
        if !check {
            continue;
        }
        match q_from_f(&f, n) {
            Ok(out) if out.survived() => {
                if f_from_q(out.q().unwrap()) != f {
                    ok = false;
                }
            }
            _ => ok = false,
        }
    }
    Ok((count, ok))
}

const TREE_SYNOPSIS: &str = "tree --n N [--dot]";

fn cmd_tree(sink: &mut Sink, n: usize, dot: bool) -> Result<i32, UsageError> {
    let limit = limit_override_usize(TREE_SYNOPSIS)?;
    if dot {
        let text = enumeration::export_tree_dot(n, limit).map_err(|e| lib_usage(e, TREE_SYNOPSIS))?;
        sink.block(&text);
        return Ok(0);
    }
    let tree = enumeration::build_tree(n, limit).map_err(|e| lib_usage(e, TREE_SYNOPSIS))?;
    let doc = serde_json::json!({
        "schema": "nestrec-tree/v1",
        "n": n,
        "root": tree,
    });
    sink.block(&serde_json::to_string_pretty(&doc).expect("tree serializes"));
    Ok(0)
}

// --------------------------------------------------------------- families

const FAMILY_SYNOPSIS: &str =
    "family --name NAME [--alpha P/Q] [--delta D] [--ell L] [--period M] \
     [--samples K] [--n N] [--count] | family --suite [--samples K] [--n N]";

#[allow(clippy::too_many_arguments)]
fn cmd_family(
    sink: &mut Sink,
    seed: u64,
    name: &Option<String>,
    alpha: &Option<String>,
    delta: Option<u64>,
    ell: Option<usize>,
    period: Option<usize>,
    samples: usize,
    n: Option<usize>,
    count: bool,
    suite: bool,
) -> Result<i32, UsageError> {
    if suite {
        return family_suite(sink, seed, samples.max(1), n.unwrap_or(10_000));
    }
    let name = name
        .as_deref()
        .ok_or_else(|| usage("--name is required (or use --suite)", FAMILY_SYNOPSIS))?;
    let n = n.ok_or_else(|| usage("--n is required", FAMILY_SYNOPSIS))?;
    if count {
        let c = match name {
            "powtwo" => families::powtwo_count(n),
            "strip012" => families::strip012_count(n),
            "ladder" => {
                let l = ell.ok_or_else(|| usage("ladder needs --ell", FAMILY_SYNOPSIS))?;
                families::ladder_count(l, n)
            }
            "ydriven" => {
                let m = period.ok_or_else(|| usage("ydriven needs --period", FAMILY_SYNOPSIS))?;
                let y = YSeq::periodic(m, n).map_err(|e| lib_usage(e, FAMILY_SYNOPSIS))?;
                families::ydriven_count(&y, n).map_err(|e| lib_usage(e, FAMILY_SYNOPSIS))?
            }
            other => {
                return Err(usage(
                    format!("no count formula for `{other}`"),
                    FAMILY_SYNOPSIS,
                ))
            }
        };
        sink.header("n,count");
        sink.row(&format!("{n},{c}"));
        return Ok(0);
    }
    let spec = match name {
        "slow-alpha" => {
            let a = alpha
                .as_deref()
                .ok_or_else(|| usage("slow-alpha needs --alpha", FAMILY_SYNOPSIS))?;
            FamilySpec::SlowAlpha {
                alpha: parse::parse_ratio(a).map_err(|e| usage(e, FAMILY_SYNOPSIS))?,
            }
        }
        "delta-step" => FamilySpec::DeltaStep {
            delta: delta.ok_or_else(|| usage("delta-step needs --delta", FAMILY_SYNOPSIS))?,
        },
        "powtwo" => FamilySpec::PowTwo,
        "strip012" => FamilySpec::Strip012,
        "ladder" => FamilySpec::Ladder {
            l: ell.ok_or_else(|| usage("ladder needs --ell", FAMILY_SYNOPSIS))?,
        },
        "ydriven" => {
            let m = period.ok_or_else(|| usage("ydriven needs --period", FAMILY_SYNOPSIS))?;
            FamilySpec::YDriven {
                y: YSeq::periodic(m, n).map_err(|e| lib_usage(e, FAMILY_SYNOPSIS))?,
            }
        }
        "lower-witness" => FamilySpec::LowerWitness,
        "upper-witness" => FamilySpec::UpperWitness,
        other => return Err(usage(format!("unknown family `{other}`"), FAMILY_SYNOPSIS)),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fs = Vec::with_capacity(samples);
    for _ in 0..samples {
        fs.push(spec.sample(&mut rng, n).map_err(|e| lib_usage(e, FAMILY_SYNOPSIS))?);
    }
    let runs: Vec<Option<usize>> = fs
        .par_iter()
        .map(|f| match q_from_f(f, n) {
            Ok(out) => out.death.map(|d| d.index),
            Err(_) => Some(0),
        })
        .collect();
    sink.header("sample,survived,death_index");
    let mut all_ok = true;
    for (i, death) in runs.iter().enumerate() {
        match death {
            None => sink.row(&format!("{i},true,")),
            Some(d) => {
                all_ok = false;
                sink.row(&format!("{i},false,{d}"));
            }
        }
    }
    Ok(if all_ok { 0 } else { 1 })
}

/// Samples every parametric family and checks the structural invariants the
/// families promise: survival always, inner sequence 1 for mask-driven
/// drivers, inner sequence 2 beyond the rung for ladder drivers, and the
/// period-2 count formula.
fn family_suite(sink: &mut Sink, seed: u64, samples: usize, n: usize) -> Result<i32, UsageError> {
    sink.header("family,samples,ok,detail");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all_ok = true;

    let names = ["slow-alpha", "delta-step", "powtwo", "strip012", "ladder", "ydriven"];
    for name in names {
        let mut fs: Vec<FSeq> = Vec::with_capacity(samples);
        for _ in 0..samples {
            let f = match name {
                "slow-alpha" => {
                    let den = rng.gen_range(2..=40i64);
                    let num = rng.gen_range((den + 1) / 2..den);
                    families::slow_alpha_f(Ratio::new(num, den), n)
                }
                "delta-step" => families::delta_step_f(rng.gen_range(1..=64), n),
                "powtwo" => families::random_powtwo_f(&mut rng, n),
                "strip012" => families::random_strip012_f(&mut rng, n),
                "ladder" => {
                    let l = rng.gen_range(3..=8);
                    families::random_ladder_f(&mut rng, l, n)
                }
                "ydriven" => {
                    let m = rng.gen_range(2..=6);
                    let y = YSeq::periodic(m, n).expect("m >= 2");
                    families::random_ydriven_f(&mut rng, &y, n)
                }
                _ => unreachable!(),
            }
            .map_err(|e| lib_usage(e, FAMILY_SYNOPSIS))?;
            fs.push(f);
        }
        let verdicts: Vec<Result<String, String>> = fs
            .par_iter()
            .map(|f| {
                let out = q_from_f(f, n).map_err(|e| e.to_string())?;
                if let Some(d) = out.death {
                    return Err(format!("dies at {}", d.index));
                }
                let q = out.q().unwrap();
                match name {
                    "ydriven" => {
                        let qp = qprime(q);
                        if qp.iter().any(|&v| v != 1) {
                            return Err("inner sequence left 1".into());
                        }
                    }
                    "ladder" => {
                        let qp = qprime(q);
                        if qp.iter().skip(3).any(|&v| v != 2) {
                            return Err("inner sequence left 2".into());
                        }
                    }
                    _ => {}
                }
                Ok("survives".into())
            })
            .collect();
        let bad = verdicts.iter().filter(|v| v.is_err()).count();
        let ok = bad == 0;
        all_ok &= ok;
        let detail = if ok {
            "all runs clean".to_string()
        } else {
            format!("{bad} samples failed")
        };
        sink.row(&format!(
            "{name},{samples},{},{}",
            if ok { "ok" } else { "FAIL" },
            csv_field(&detail)
        ));
    }

    // Period-2 mask count: (floor((n + 2) / 2))! for every n here.
    let y = YSeq::periodic(2, 20).expect("period 2");
    let mut count_ok = true;
    for k in 2..=20usize {
        let c = families::ydriven_count(&y, k).expect("length suffices");
        let expect: num::BigUint = (1u64..=(k as u64 + 2) / 2).product();
        if c != expect {
            count_ok = false;
        }
    }
    all_ok &= count_ok;
    sink.row(&format!(
        "ydriven-count,19,{},period-2 counts vs half-length factorial",
        if count_ok { "ok" } else { "FAIL" }
    ));
    Ok(if all_ok { 0 } else { 1 })
}

// -------------------------------------------------------- counterexamples

const COUNTER_SYNOPSIS: &str =
    "counterexample (--d D [--trace] | --table [--max-d D] | --cone1 A..B | --jump A..B)";

fn cmd_counterexample(
    sink: &mut Sink,
    d: Option<u64>,
    trace: bool,
    table: bool,
    max_d: u64,
    cone1: &Option<String>,
    jump: &Option<String>,
) -> Result<i32, UsageError> {
    let modes = [d.is_some(), table, cone1.is_some(), jump.is_some()];
    if modes.iter().filter(|&&m| m).count() != 1 {
        return Err(usage(
            "pick exactly one of --d, --table, --cone1, --jump",
            COUNTER_SYNOPSIS,
        ));
    }
    if let Some(d) = d {
        let run = counterexamples::steered_run(d).map_err(|e| lib_usage(e, COUNTER_SYNOPSIS))?;
        if trace {
            sink.header("n,f,q");
            for i in 1..=run.f.len() {
                let q_cell = if i <= run.q_prefix.len() {
                    run.q_prefix.term(i).to_string()
                } else {
                    String::new()
                };
                sink.row(&format!("{i},{},{q_cell}", run.f.term(i)));
            }
            eprintln!(
                "dies at {} ({}, candidate {})",
                run.death.index,
                kind_str(run.death.kind),
                run.death.candidate
            );
        } else {
            sink.header("d,kill_index,ceil_dx");
            let cdx = counterexamples::ceil_dx(d).map_err(|e| lib_usage(e, COUNTER_SYNOPSIS))?;
            sink.row(&format!("{d},{},{cdx}", run.death.index));
        }
        return Ok(0);
    }
    if table {
        sink.header("d,kill_index,ceil_dx");
        let mut dd = 2;
        while dd <= max_d {
            let k = counterexamples::kill_index(dd).map_err(|e| lib_usage(e, COUNTER_SYNOPSIS))?;
            let cdx = counterexamples::ceil_dx(dd).map_err(|e| lib_usage(e, COUNTER_SYNOPSIS))?;
            sink.row(&format!("{dd},{k},{cdx}"));
            dd += 2;
        }
        return Ok(0);
    }
    if let Some(spec) = cone1 {
        let (lo, hi) = parse::parse_range(spec).map_err(|e| usage(e, COUNTER_SYNOPSIS))?;
        sink.header("size,death_index");
        for big in lo..=hi {
            let f = counterexamples::cone1_witness(big as usize)
                .map_err(|e| lib_usage(e, COUNTER_SYNOPSIS))?;
            let out = q_from_f(&f, f.len()).map_err(|e| lib_usage(e, COUNTER_SYNOPSIS))?;
            match out.death {
                Some(death) => sink.row(&format!("{big},{}", death.index)),
                None => sink.row(&format!("{big},")),
            }
        }
        return Ok(0);
    }
    let spec = jump.as_deref().expect("mode checked");
    let (lo, hi) = parse::parse_range(spec).map_err(|e| usage(e, COUNTER_SYNOPSIS))?;
    sink.header("m,death_index");
    for m in lo..=hi {
        let f = counterexamples::jump_counterexample(m).map_err(|e| lib_usage(e, COUNTER_SYNOPSIS))?;
        let out = q_from_f(&f, f.len()).map_err(|e| lib_usage(e, COUNTER_SYNOPSIS))?;
        match out.death {
            Some(death) => sink.row(&format!("{m},{}", death.index)),
            None => sink.row(&format!("{m},")),
        }
    }
    Ok(0)
}

// ----------------------------------------------------------------- negext

const NEGEXT_SYNOPSIS: &str = "negext --n0 N0[..N0'] [--examples] [--verify-bound]";

fn cmd_negext(
    sink: &mut Sink,
    n0_spec: &str,
    examples: bool,
    verify_bound: bool,
) -> Result<i32, UsageError> {
    let (lo, hi) = parse::parse_range(n0_spec).map_err(|e| usage(e, NEGEXT_SYNOPSIS))?;
    let limit = limit_override_usize(NEGEXT_SYNOPSIS)?.map(|v| v as u32);
    if verify_bound {
        if lo != hi {
            return Err(usage("--verify-bound takes a single n0", NEGEXT_SYNOPSIS));
        }
        let n0 = lo as usize;
        let enum_limit = limit.map(|v| v as usize);
        let mut members: u64 = 0;
        let mut max_death: usize = 0;
        let mut ok = true;
        for f in
            enumeration::enumerate_f(n0, enum_limit).map_err(|e| lib_usage(e, NEGEXT_SYNOPSIS))?
        {
            members += 1;
            let out = q_from_f(&f, n0).map_err(|e| lib_usage(e, NEGEXT_SYNOPSIS))?;
            let q = out.q().expect("enumerated drivers survive");
            let b = q.max_value() as u64;
            let death = negext::negative_extension_death(q)
                .map_err(|e| lib_usage(e, NEGEXT_SYNOPSIS))?;
            let bound =
                negext::death_bound(n0 as u64, b).map_err(|e| lib_usage(e, NEGEXT_SYNOPSIS))?;
            max_death = max_death.max(death);
            if death as u64 > bound {
                ok = false;
            }
        }
        sink.header("n0,members,max_death,ok");
        sink.row(&format!(
            "{n0},{members},{max_death},{}",
            if ok { "ok" } else { "FAIL" }
        ));
        return Ok(if ok { 0 } else { 1 });
    }
    sink.header("n0,b_comp,d_comp,d_bound,n_d");
    let mut example_rows = Vec::new();
    for n0 in lo..=hi {
        let report = negext::exhaustive_negext(n0 as u32, limit)
            .map_err(|e| lib_usage(e, NEGEXT_SYNOPSIS))?;
        sink.row(&format!(
            "{},{},{},{},{}",
            report.n0, report.b_comp, report.d_comp, report.d_formula, report.n_d
        ));
        if examples {
            let mut sorted = report.examples.clone();
            sorted.sort();
            for prefix in sorted {
                example_rows.push(format!("example,{},{}", report.n0, csv_field(&join_i64(&prefix))));
            }
        }
    }
    for row in example_rows {
        sink.row(&row);
    }
    Ok(0)
}

// --------------------------------------------------------------- bounding

const BOUND_SYNOPSIS: &str =
    "bound (--cone SPEC | --cone-file FILE) --n N [--trace | --sets | --actual] \
     [--cap C] | bound --sandwich K --n N";

fn resolve_cone(
    cone: &Option<String>,
    cone_file: &Option<PathBuf>,
    synopsis: &'static str,
) -> Result<ConeSpec, UsageError> {
    match (cone, cone_file) {
        (Some(_), Some(_)) => Err(usage("give --cone or --cone-file, not both", synopsis)),
        (Some(spec), None) => parse::parse_cone(spec).map_err(|e| usage(e, synopsis)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display()), synopsis))?;
            parse::cone_from_json(&text).map_err(|e| usage(e, synopsis))
        }
        (None, None) => Err(usage("a cone is required", synopsis)),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bound(
    sink: &mut Sink,
    seed: u64,
    cone: &Option<String>,
    cone_file: &Option<PathBuf>,
    n: usize,
    trace: bool,
    sets: bool,
    actual: bool,
    sandwich: Option<usize>,
    cap: Option<usize>,
) -> Result<i32, UsageError> {
    if let Some(k) = sandwich {
        return bound_sandwich(sink, seed, k, n);
    }
    let cone = resolve_cone(cone, cone_file, BOUND_SYNOPSIS)?;
    if sets || actual {
        if sets && actual {
            return Err(usage("give --sets or --actual, not both", BOUND_SYNOPSIS));
        }
        let rows: Vec<Vec<i64>> = if sets {
            bounding::bound_sets(&cone, n, cap)
                .map_err(|e| lib_usage(e, BOUND_SYNOPSIS))?
                .sets
        } else {
            bounding::actual_sets(&cone, n, cap).map_err(|e| lib_usage(e, BOUND_SYNOPSIS))?
        };
        sink.header("n,values");
        for (i, set) in rows.iter().enumerate() {
            let joined = set
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            sink.row(&format!("{},{joined}", i + 1));
        }
        return Ok(0);
    }
    let tr = bounding::bound_interval(&cone, n).map_err(|e| lib_usage(e, BOUND_SYNOPSIS))?;
    if trace {
        sink.header("n,lower,upper");
        for i in 1..=tr.alive_len() {
            sink.row(&format!("{i},{},{}", tr.l(i), tr.u(i)));
        }
        if let Some(d) = tr.death {
            eprintln!(
                "dies at {} ({}, candidate {})",
                d.index,
                kind_str(d.kind),
                d.candidate
            );
        }
        return Ok(0);
    }
    sink.header("name,horizon,alive_len,survived,death_index,death_kind,death_candidate");
    let death_cells = match &tr.death {
        None => ",,".to_string(),
        Some(d) => format!("{},{},{}", d.index, kind_str(d.kind), d.candidate),
    };
    sink.row(&format!(
        "{},{n},{},{},{death_cells}",
        csv_field(&tr.name),
        tr.alive_len(),
        tr.survived(),
    ));
    Ok(0)
}

/// Draws `k` random table cones and checks the sandwich
/// `actual ⊆ set-bound ⊆ interval-bound` at every index all three reach.
fn bound_sandwich(sink: &mut Sink, seed: u64, k: usize, n: usize) -> Result<i32, UsageError> {
    let max_len = n.clamp(4, 12);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sink.header("cone,len,checked,ok");
    let mut all_ok = true;
    for i in 0..k {
        let cone = parse::random_table_cone(&mut rng, i, max_len, 3);
        let len = cone.max_len().expect("table cones are finite");
        let tr = bounding::bound_interval(&cone, len).map_err(|e| lib_usage(e, BOUND_SYNOPSIS))?;
        let so = bounding::bound_sets(&cone, len, Some(len))
            .map_err(|e| lib_usage(e, BOUND_SYNOPSIS))?;
        let act = bounding::actual_sets(&cone, len, Some(len))
            .map_err(|e| lib_usage(e, BOUND_SYNOPSIS))?;
        let checked = tr.alive_len().min(so.sets.len()).min(act.len());
        let mut ok = true;
        for idx in 1..=checked {
            let set = &so.sets[idx - 1];
            for v in &act[idx - 1] {
                if !set.contains(v) {
                    ok = false;
                }
            }
            for v in set {
                if *v < tr.l(idx) || *v > tr.u(idx) {
                    ok = false;
                }
            }
        }
        all_ok &= ok;
        sink.row(&format!(
            "{i},{len},{checked},{}",
            if ok { "ok" } else { "FAIL" }
        ));
    }
    Ok(if all_ok { 0 } else { 1 })
}

const FIT_SYNOPSIS: &str =
    "fit (--cone SPEC | --cone-file FILE) --n N --side lower|upper [--from A --to B]";

fn cmd_fit(
    sink: &mut Sink,
    cone: &Option<String>,
    cone_file: &Option<PathBuf>,
    n: usize,
    side: &str,
    from: Option<usize>,
    to: Option<usize>,
) -> Result<i32, UsageError> {
    let cone = resolve_cone(cone, cone_file, FIT_SYNOPSIS)?;
    let tr = bounding::bound_interval(&cone, n).map_err(|e| lib_usage(e, FIT_SYNOPSIS))?;
    let values = match side {
        "lower" => &tr.lower,
        "upper" => &tr.upper,
        other => {
            return Err(usage(
                format!("--side must be lower or upper, got `{other}`"),
                FIT_SYNOPSIS,
            ))
        }
    };
    let from = from.unwrap_or(1);
    let to = to.unwrap_or(tr.alive_len());
    let fit = bounding::fit_power_law(values, (from, to)).map_err(|e| lib_usage(e, FIT_SYNOPSIS))?;
    sink.header("side,coefficient,exponent,rms_residual,from,to");
    sink.row(&format!(
        "{side},{:.6},{:.6},{:.6},{},{}",
        fit.coefficient, fit.exponent, fit.rms_residual, fit.fit_range.0, fit.fit_range.1
    ));
    Ok(0)
}

// -------------------------------------------------------------- theoremlab

const CERTIFY_SYNOPSIS: &str = "certify [--strict]";

fn cmd_certify(sink: &mut Sink, strict: bool) -> Result<i32, UsageError> {
    let cert = theoremlab::certify_sqrt_cone().map_err(|e| lib_usage(e, CERTIFY_SYNOPSIS))?;
    let certified = cert.certified;
    let doc = serde_json::json!({
        "schema": "nestrec-certificate/v1",
        "certificate": cert,
    });
    sink.block(&serde_json::to_string_pretty(&doc).expect("certificate serializes"));
    if strict && !certified {
        eprintln!("certificate did not come out clean (startup corridor fails)");
        return Ok(1);
    }
    Ok(0)
}

const STRIP_SYNOPSIS: &str =
    "strip --a P/Q --b P/Q [--epsilon P/Q --n0 N [--q Q1,Q2,..|staircase]]";

fn cmd_strip(
    sink: &mut Sink,
    a_text: &str,
    b_text: &str,
    epsilon: &Option<String>,
    n0: Option<usize>,
    q: &Option<String>,
) -> Result<i32, UsageError> {
    let a = parse::parse_ratio(a_text).map_err(|e| usage(e, STRIP_SYNOPSIS))?;
    let b = parse::parse_ratio(b_text).map_err(|e| usage(e, STRIP_SYNOPSIS))?;
    let (c, d) = theoremlab::strip_constants(a, b).map_err(|e| lib_usage(e, STRIP_SYNOPSIS))?;
    sink.header("c,d");
    sink.row(&format!("{},{}", parse::fmt_ratio(c), parse::fmt_ratio(d)));
    let (epsilon, n0) = match (epsilon, n0) {
        (Some(e), Some(n0)) => (
            parse::parse_ratio(e).map_err(|e| usage(e, STRIP_SYNOPSIS))?,
            n0,
        ),
        (None, None) => return Ok(0),
        _ => return Err(usage("--epsilon and --n0 go together", STRIP_SYNOPSIS)),
    };
    let params = theoremlab::StripParams::new(a, b, epsilon, n0)
        .map_err(|e| lib_usage(e, STRIP_SYNOPSIS))?;
    sink.row(&format!("params,{},{n0},ok", parse::fmt_ratio(epsilon)));
    let Some(q_text) = q else { return Ok(0) };
    let q0 = if q_text == "staircase" {
        let vals = families::slow_alpha_q(Ratio::new(1, 2), n0)
            .map_err(|e| lib_usage(e, STRIP_SYNOPSIS))?;
        QSeq::new(vals).expect("staircase values are admissible")
    } else {
        let vals = parse::parse_int_list(q_text).map_err(|e| usage(e, STRIP_SYNOPSIS))?;
        QSeq::new(vals).map_err(|e| lib_usage(e, STRIP_SYNOPSIS))?
    };
    let check = theoremlab::check_strip_prefix(&q0, &params)
        .map_err(|e| lib_usage(e, STRIP_SYNOPSIS))?;
    if check.ok {
        sink.row("corridor,ok");
        Ok(0)
    } else {
        for fail in &check.failures {
            let side = match fail.side {
                bounding::WindowSide::Lower => "lower",
                bounding::WindowSide::Upper => "upper",
            };
            sink.row(&format!("corridor-failure,{},{side},{}", fail.k, fail.value));
        }
        Ok(1)
    }
}

const ENVELOPE_SYNOPSIS: &str =
    "envelope [--c0 P/Q] [--alpha P/Q] [--alpha-limit] \
     [--threshold --mu P/Q --alpha P/Q --c0 P/Q] \
     [--hypotheses --c0 P/Q --mu P/Q (--alpha P/Q | --log) --n0 N [--horizon H]]";

#[allow(clippy::too_many_arguments)]
fn cmd_envelope(
    sink: &mut Sink,
    c0: &Option<String>,
    alpha: &Option<String>,
    mu: &Option<String>,
    log: bool,
    threshold: bool,
    hypotheses: bool,
    n0: Option<usize>,
    horizon: usize,
    alpha_limit: bool,
) -> Result<i32, UsageError> {
    let c0_ratio = c0
        .as_deref()
        .map(parse::parse_ratio)
        .transpose()
        .map_err(|e| usage(e, ENVELOPE_SYNOPSIS))?;
    let alpha_f64 = alpha
        .as_deref()
        .map(parse::parse_ratio)
        .transpose()
        .map_err(|e| usage(e, ENVELOPE_SYNOPSIS))?
        .map(ratio_to_f64);
    let mu_f64 = mu
        .as_deref()
        .map(parse::parse_ratio)
        .transpose()
        .map_err(|e| usage(e, ENVELOPE_SYNOPSIS))?
        .map(ratio_to_f64);
    let mut emitted = false;

    if alpha_limit {
        sink.row(&format!("alpha-limit,{:.10}", theoremlab::power_alpha_limit()));
        emitted = true;
    }
    if let Some(c0) = c0_ratio {
        let (big_a, big_b) =
            theoremlab::cone_constants(c0).map_err(|e| lib_usage(e, ENVELOPE_SYNOPSIS))?;
        sink.row(&format!(
            "constants,{},{}",
            parse::fmt_ratio(big_a),
            parse::fmt_ratio(big_b)
        ));
        emitted = true;
    }
    if let Some(alpha) = alpha_f64 {
        if !threshold && !hypotheses {
            let (c0, warn) = theoremlab::contraction_for_power(alpha)
                .map_err(|e| lib_usage(e, ENVELOPE_SYNOPSIS))?;
            sink.row(&format!("contraction,{alpha:.10},{c0:.10},{warn}"));
            emitted = true;
        }
    }
    if threshold {
        let c0 = c0_ratio.ok_or_else(|| usage("--threshold needs --c0", ENVELOPE_SYNOPSIS))?;
        let mu = mu_f64.ok_or_else(|| usage("--threshold needs --mu", ENVELOPE_SYNOPSIS))?;
        let alpha =
            alpha_f64.ok_or_else(|| usage("--threshold needs --alpha", ENVELOPE_SYNOPSIS))?;
        let (big_a, big_b) = theoremlab::cone_constants_f64(ratio_to_f64(c0))
            .map_err(|e| lib_usage(e, ENVELOPE_SYNOPSIS))?;
        let t = theoremlab::envelope_n0_threshold(mu, alpha, big_a, big_b);
        sink.row(&format!("threshold,{t:.6e}"));
        emitted = true;
    }
    if hypotheses {
        let c0 = c0_ratio.ok_or_else(|| usage("--hypotheses needs --c0", ENVELOPE_SYNOPSIS))?;
        let mu = mu_f64.ok_or_else(|| usage("--hypotheses needs --mu", ENVELOPE_SYNOPSIS))?;
        let n0 = n0.ok_or_else(|| usage("--hypotheses needs --n0", ENVELOPE_SYNOPSIS))?;
        let envelope = match (alpha_f64, log) {
            (Some(_), true) => {
                return Err(usage("give --alpha or --log, not both", ENVELOPE_SYNOPSIS))
            }
            (Some(alpha), false) => theoremlab::EnvelopeSpec::Power { mu, alpha },
            (None, true) => theoremlab::EnvelopeSpec::Log { mu },
            (None, false) => {
                return Err(usage("--hypotheses needs --alpha or --log", ENVELOPE_SYNOPSIS))
            }
        };
        let c0f = ratio_to_f64(c0);
        let (big_a, big_b) =
            theoremlab::cone_constants_f64(c0f).map_err(|e| lib_usage(e, ENVELOPE_SYNOPSIS))?;
        let params = theoremlab::EnvelopeParams::new(c0f, big_a, big_b, envelope)
            .map_err(|e| lib_usage(e, ENVELOPE_SYNOPSIS))?;
        let report = theoremlab::check_envelope_hypotheses(&params, n0, horizon)
            .map_err(|e| lib_usage(e, ENVELOPE_SYNOPSIS))?;
        for cond in &report.conditions {
            sink.row(&format!(
                "condition,{},{},{},{}",
                cond.condition,
                if cond.passed { "ok" } else { "FAIL" },
                cond.sampled,
                csv_field(&cond.detail)
            ));
        }
        sink.row(&format!("hypotheses,{}", if report.ok { "ok" } else { "FAIL" }));
        return Ok(if report.ok { 0 } else { 1 });
    }
    if !emitted {
        return Err(usage(
            "nothing to do: give --c0, --alpha, --alpha-limit, --threshold, or --hypotheses",
            ENVELOPE_SYNOPSIS,
        ));
    }
    Ok(0)
}

// -------------------------------------------------------------- hofstadter

const HOF_SYNOPSIS: &str = "hofstadter --n N [--m M | --scan A..B] [--terms]";

fn cmd_hofstadter(
    sink: &mut Sink,
    n: usize,
    m: Option<i64>,
    scan: &Option<String>,
    terms: bool,
) -> Result<i32, UsageError> {
    if let Some(spec) = scan {
        if terms || m.is_some() {
            return Err(usage("--scan excludes --m and --terms", HOF_SYNOPSIS));
        }
        let (lo, hi) = parse::parse_range(spec).map_err(|e| usage(e, HOF_SYNOPSIS))?;
        let ms: Vec<i64> = (lo..=hi).map(|v| v as i64).collect();
        let runs = hofstadter::mod_m_scan(&ms, n).map_err(|e| lib_usage(e, HOF_SYNOPSIS))?;
        sink.header("m,horizon,survived,death_index");
        for run in runs {
            let death = run.death.map(|d| d.index.to_string()).unwrap_or_default();
            sink.row(&format!(
                "{},{},{},{death}",
                run.m.expect("scan runs are diluted"),
                run.horizon,
                run.survived
            ));
        }
        return Ok(0);
    }
    let out = match m {
        Some(m) => hofstadter::mod_m_q(m, n),
        None => hofstadter::hofstadter_q(n),
    }
    .map_err(|e| lib_usage(e, HOF_SYNOPSIS))?;
    if terms {
        sink.header("q(1..)");
        sink.row(&join_i64(out.prefix.terms()));
        return match out.death {
            None => Ok(0),
            Some(d) => {
                eprintln!(
                    "dies at {} ({}, candidate {})",
                    d.index,
                    kind_str(d.kind),
                    d.candidate
                );
                Ok(1)
            }
        };
    }
    sink.header("m,horizon,survived,death_index");
    let m_cell = m.map(|v| v.to_string()).unwrap_or_else(|| "inf".into());
    let death = out.death.map(|d| d.index.to_string()).unwrap_or_default();
    sink.row(&format!("{m_cell},{n},{},{death}", out.death.is_none()));
    Ok(0)
}
