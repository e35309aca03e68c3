//! `gfib`: generalized Fibonacci sequences modulo primes.

mod render;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gfib::census::{self, CensusMode};
use gfib::completeness::{is_complete_fast, is_complete_scan};
use gfib::periods::{self, DEFAULT_MATRIX_CAP};
use gfib::sequence::{classify, iterate_terms};
use gfib::witness::{self, DEFAULT_PRIME_BUDGET};
use gfib::Error;
use serde::Serialize;
use serde_json::json;

use render::{Format, Output, Table};

#[derive(Parser, Debug)]
#[command(
    name = "gfib",
    version,
    about = "Generalized Fibonacci sequences [P,Q] modulo primes"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads for census and witness scans.
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Coefs {
    /// Coefficient P.
    #[arg(short = 'P', allow_negative_numbers = true)]
    p_coef: i64,

    /// Coefficient Q.
    #[arg(short = 'Q', allow_negative_numbers = true)]
    q_coef: i64,
}

#[derive(Args, Debug, Clone, Copy)]
struct Triple {
    #[command(flatten)]
    coefs: Coefs,

    /// Odd prime modulus below 2^31.
    #[arg(short = 'p')]
    modulus: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print F_1, ..., F_n.
    Seq {
        #[command(flatten)]
        t: Triple,
        /// Number of terms.
        #[arg(short = 'n', default_value_t = 20, conflicts_with = "full_period")]
        count: u64,
        /// Print the full period F_1, ..., F_π.
        #[arg(long)]
        full_period: bool,
    },
    /// Rank of apparition, Pisano period and ord_p(Q).
    Period {
        #[command(flatten)]
        t: Triple,
        /// Include the full-period residue histogram.
        #[arg(long)]
        histogram: bool,
    },
    /// The (π/ρ) × ρ period matrix.
    Matrix {
        #[command(flatten)]
        t: Triple,
        /// Refuse periods with more entries than this.
        #[arg(long, default_value_t = DEFAULT_MATRIX_CAP)]
        cap: u64,
    },
    /// Decide whether [P,Q] attains every residue mod p.
    Complete {
        #[command(flatten)]
        t: Triple,
        #[arg(long, value_enum, default_value_t = CompleteMode::Fast)]
        mode: CompleteMode,
    },
    /// Count complete pairs (P,Q) in {1..p-1}².
    Census {
        #[arg(short = 'p')]
        modulus: u64,
        /// Run a ratio series over every prime in [p, to].
        #[arg(long)]
        to: Option<u64>,
        /// Defaults to `both` for p ≤ 101 and `fast` above.
        #[arg(long, value_enum)]
        mode: Option<CensusModeArg>,
    },
    /// Primes in [lo, hi] modulo which [P,Q] is complete.
    Witness {
        #[command(flatten)]
        coefs: Coefs,
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
    },
    /// Progression of primes forcing completeness when Q = m².
    Progression {
        #[command(flatten)]
        coefs: Coefs,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Progression terms examined before giving up.
        #[arg(long, default_value_t = DEFAULT_PRIME_BUDGET)]
        budget: u64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum CompleteMode {
    Fast,
    Scan,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum CensusModeArg {
    Fast,
    Oracle,
    Both,
}

impl From<CensusModeArg> for CensusMode {
    fn from(m: CensusModeArg) -> Self {
        match m {
            CensusModeArg::Fast => CensusMode::Fast,
            CensusModeArg::Oracle => CensusMode::Oracle,
            CensusModeArg::Both => CensusMode::Both,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidModulus(_) | Error::Precondition(_) | Error::WrongCase { .. } => 2,
        Error::MatrixTooLarge { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut records = Vec::new();
    if let Err(e) = run(&cli, &mut records) {
        eprintln!("gfib: {e}");
        return ExitCode::from(exit_code(&e));
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut last_header = None;
    let written = records.iter().try_for_each(|r| {
        let fresh = r.header().is_none() || r.header() != last_header;
        last_header = r.header();
        r.write(cli.format, fresh, &mut out)
    });
    match written.and_then(|_| out.flush()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gfib: {e}");
            ExitCode::from(1)
        }
    }
}

fn triple_params(t: &Triple) -> serde_json::Value {
    json!({"P": t.coefs.p_coef, "Q": t.coefs.q_coef, "p": t.modulus})
}

fn run(cli: &Cli, records: &mut Vec<Output>) -> gfib::Result<()> {
    match &cli.command {
        Command::Seq {
            t,
            count,
            full_period,
        } => {
            let params = classify(t.coefs.p_coef, t.coefs.q_coef, t.modulus)?;
            let (n, pi) = if *full_period {
                let pi = periods::period_summary(&params)?.pi;
                (pi, Some(pi))
            } else {
                (*count, None)
            };
            let terms: Vec<u64> = iterate_terms(&params, n).map(|f| f.value()).collect();
            let mut text = render::join(&terms);
            if let Some(pi) = pi {
                text.push_str(&format!("\npi {pi}"));
            }
            let table = Table::new(["n", "F_n"]).rows(
                terms
                    .iter()
                    .enumerate()
                    .map(|(i, f)| vec![(i + 1).to_string(), f.to_string()]),
            );
            let mut p = triple_params(t);
            p["n"] = json!(n);
            p["full_period"] = json!(full_period);
            records.push(Output::new(
                "seq",
                p,
                json!({"count": n, "terms": terms, "pi": pi}),
                text,
                table,
            ));
        }
        Command::Period { t, histogram } => {
            let params = classify(t.coefs.p_coef, t.coefs.q_coef, t.modulus)?;
            let profile = if *histogram {
                periods::pisano_period(&params)?
            } else {
                periods::period_summary(&params)?
            };
            let mut text = format!(
                "rho {}\npi {}\nord_q {}\nu {}\ncase {:?}",
                profile.rho, profile.pi, profile.ord_q, profile.u, profile.case
            );
            if let Some(h) = &profile.histogram {
                for (r, c) in h.iter() {
                    text.push_str(&format!("\ncount[{r}] {c}"));
                }
            }
            let table = Table::new(["modulus", "rho", "pi", "ord_q", "u"]).row(vec![
                profile.modulus.to_string(),
                profile.rho.to_string(),
                profile.pi.to_string(),
                profile.ord_q.to_string(),
                profile.u.to_string(),
            ]);
            let mut p = triple_params(t);
            p["histogram"] = json!(histogram);
            records.push(Output::new("period", p, to_value(&profile), text, table));
        }
        Command::Matrix { t, cap } => {
            let params = classify(t.coefs.p_coef, t.coefs.q_coef, t.modulus)?;
            let m = periods::period_matrix(&params, *cap)?;
            let rows: Vec<Vec<u64>> = m
                .rows_iter()
                .map(|r| r.iter().map(|x| x.value()).collect())
                .collect();
            let text = rows
                .iter()
                .map(|r| render::join(r))
                .collect::<Vec<_>>()
                .join("\n");
            let table =
                Table::headless(rows.iter().map(|r| r.iter().map(u64::to_string).collect()));
            let mut p = triple_params(t);
            p["cap"] = json!(cap);
            records.push(Output::new(
                "matrix",
                p,
                json!({"rows": m.rows, "cols": m.cols, "u": m.u, "rank_one": m.is_rank_one(), "entries": rows}),
                text,
                table,
            ));
        }
        Command::Complete { t, mode } => {
            let params = classify(t.coefs.p_coef, t.coefs.q_coef, t.modulus)?;
            let payload = match mode {
                CompleteMode::Fast => to_value(&is_complete_fast(&params)),
                CompleteMode::Scan => to_value(&is_complete_scan(&params)),
                CompleteMode::Both => {
                    let fast = is_complete_fast(&params);
                    let scan = is_complete_scan(&params);
                    if fast.complete != scan.complete {
                        return Err(Error::Disagreement {
                            p_coef: params.p_coef,
                            q_coef: params.q_coef,
                            modulus: params.modulus,
                            fast: fast.complete,
                            scan: scan.complete,
                        });
                    }
                    json!({
                        "complete": fast.complete,
                        "decided_by": fast.decided_by,
                        "scan": scan.scan,
                        "agree": true,
                    })
                }
            };
            let complete = payload["complete"].as_bool().unwrap_or(false);
            let decided_by = payload["decided_by"].as_str().unwrap_or("").to_string();
            let text = format!("complete {complete}\ndecided_by {decided_by}");
            let table =
                Table::new(["complete", "decided_by"]).row(vec![complete.to_string(), decided_by]);
            let mut p = triple_params(t);
            p["mode"] = json!(mode);
            records.push(Output::new("complete", p, payload, text, table));
        }
        Command::Census { modulus, to, mode } => {
            let mode = mode.map(CensusMode::from);
            match to {
                None => {
                    let m = mode.unwrap_or_else(|| CensusMode::default_for(*modulus));
                    let r = census::census(*modulus, m, cli.jobs)?;
                    let text = format!(
                        "p {}\nmode {:?}\nlambda {}\nratio {} ({:.6})\nA {}\nB {}\nX {}\nY {}\nbound_violation {}",
                        r.p, r.mode, r.lambda_count, r.ratio, r.ratio_decimal, r.a_count,
                        r.b_count, r.x_count, r.y_count, r.bound_violation
                    );
                    let table = census_table().row(census_row(&r));
                    records.push(Output::new(
                        "census",
                        json!({"p": modulus, "mode": m, "jobs": cli.jobs}),
                        to_value(&r),
                        text,
                        table,
                    ));
                }
                Some(hi) => {
                    if *hi < *modulus {
                        return Err(Error::Precondition(format!(
                            "--to {hi} is below -p {modulus}"
                        )));
                    }
                    let primes = gfib::arith::primes_in_range((*modulus).max(3), *hi);
                    for row in census::ratio_series(&primes, mode, cli.jobs) {
                        let text = match (&row.ratio, row.ratio_decimal, &row.error) {
                            (Some(r), Some(d), _) => format!(
                                "{} {} {:.6}{}",
                                row.p,
                                r,
                                d,
                                if row.safe_prime { " safe" } else { "" }
                            ),
                            (_, _, e) => format!("{} error: {}", row.p, e.as_deref().unwrap_or("")),
                        };
                        let table = Table::new([
                            "p",
                            "lambda_count",
                            "ratio",
                            "ratio_decimal",
                            "safe_prime",
                            "error",
                        ])
                        .row(vec![
                            row.p.to_string(),
                            opt(row.lambda_count),
                            row.ratio.clone().unwrap_or_default(),
                            opt(row.ratio_decimal),
                            row.safe_prime.to_string(),
                            row.error.clone().unwrap_or_default(),
                        ]);
                        records.push(Output::new(
                            "census",
                            json!({"p": row.p, "mode": mode, "jobs": cli.jobs}),
                            to_value(&row),
                            text,
                            table,
                        ));
                    }
                }
            }
        }
        Command::Witness { coefs, lo, hi } => {
            let scan = witness::scan_primes(coefs.p_coef, coefs.q_coef, *lo, *hi, cli.jobs)?;
            let unconfirmed = witness::reverify_hits(&scan);
            if !unconfirmed.is_empty() {
                return Err(Error::Invariant(format!(
                    "hits not confirmed by the scan oracle: {unconfirmed:?}"
                )));
            }
            let text = format!(
                "class {}\npredicts_infinitely_many {}\nprimes_scanned {}\nhits {}",
                to_value(&scan.dichotomy_class).as_str().unwrap_or(""),
                scan.predicts_infinitely_many,
                scan.primes_scanned,
                render::join(&scan.hits)
            );
            let table = Table::new(["p"]).rows(scan.hits.iter().map(|h| vec![h.to_string()]));
            records.push(Output::new(
                "witness",
                json!({"P": coefs.p_coef, "Q": coefs.q_coef, "lo": lo, "hi": hi, "jobs": cli.jobs}),
                to_value(&scan),
                text,
                table,
            ));
        }
        Command::Progression {
            coefs,
            count,
            budget,
        } => {
            let spec = witness::build_progression(coefs.p_coef, coefs.q_coef)?;
            let scan = witness::scan_progression(&spec, *count, *budget);
            let text = format!(
                "progression {} mod {}\nm {}\nprimes {}{}",
                spec.residue,
                spec.modulus,
                spec.m,
                render::join(&scan.primes),
                if scan.exhausted {
                    "\nexhausted true"
                } else {
                    ""
                }
            );
            let table = Table::new(["p"]).rows(scan.primes.iter().map(|h| vec![h.to_string()]));
            records.push(Output::new(
                "progression",
                json!({"P": coefs.p_coef, "Q": coefs.q_coef, "count": count, "budget": budget}),
                json!({"spec": spec, "scan": scan}),
                text,
                table,
            ));
        }
    }
    Ok(())
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("payload types serialize to JSON")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn census_table() -> Table {
    Table::new([
        "p",
        "lambda_count",
        "ratio",
        "ratio_decimal",
        "a_count",
        "b_count",
        "x_count",
        "y_count",
        "bound_violation",
    ])
}

fn census_row(r: &census::CensusReport) -> Vec<String> {
    vec![
        r.p.to_string(),
        r.lambda_count.to_string(),
        r.ratio.clone(),
        r.ratio_decimal.to_string(),
        r.a_count.to_string(),
        r.b_count.to_string(),
        r.x_count.to_string(),
        r.y_count.to_string(),
        r.bound_violation.to_string(),
    ]
}
