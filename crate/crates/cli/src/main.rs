//! Command line front end for the exact q-series engine.
//!
//! - construction commands (`euler`, `eta`, `theta`, `jtp`, `hecke`,
//!   `string`, `appell`, `false-theta`) print a series as JSON with a
//!   `scale` denominator, a truncation `order`, and exact `terms`;
//! - `cases`, `check`, and `suite` expose the identity catalogue, exiting
//!   with code one when a comparison fails;
//! - `kp-scan` searches admissible string functions against an eta
//!   quotient target;
//! - `modular` runs the floating-point transformation-law checks and
//!   reports the observed residual.

use clap::{Parser, Subcommand};
use qseries::appell::appell_m;
use qseries::decomp::false_theta;
use qseries::hecke::{hecke_double_sum, string_c, string_numerator, HeckeParams, StringSpec};
use qseries::modular;
use qseries::qpower::{QPower, Sign};
use qseries::registry;
use qseries::series::PuiseuxSeries;
use qseries::theta::{eta_series, euler_infinite, jacobi_j, j_ab, j_bar_ab};
use qseries::{Rat, Result};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "qseries", version, about = "Exact q-series constructions and identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the infinite product (q^k; q^k) as a series.
    Euler {
        /// Modulus exponent k.
        #[arg(long, default_value = "1")]
        k: String,
        /// Inclusive truncation order, an integer or fraction.
        #[arg(long)]
        order: String,
    },
    /// Print the eta-type series q^(k/24) (q^k; q^k).
    Eta {
        /// Modulus k.
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long)]
        order: String,
    },
    /// Print the two-parameter theta J_{a,b}, or its bar variant.
    Theta {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        /// Use the bar variant with positive argument sign.
        #[arg(long)]
        bar: bool,
        #[arg(long)]
        order: String,
    },
    /// Print the triple-product theta j(x; q^rho).
    Jtp {
        /// Argument, e.g. "q^2", "-q^12", or "q^1/2".
        #[arg(long)]
        x: String,
        /// Modulus exponent rho, an integer or fraction.
        #[arg(long)]
        rho: String,
        #[arg(long)]
        order: String,
    },
    /// Print the indefinite double sum f_{a,b,c}(x, y).
    Hecke {
        #[arg(long)]
        a: i64,
        #[arg(long)]
        b: i64,
        #[arg(long)]
        c: i64,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        order: String,
    },
    /// Print an admissible-level string function, or its numerator form.
    String {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        pp: i64,
        #[arg(long)]
        ell: i64,
        #[arg(long)]
        m: i64,
        /// Print the numerator: the string function times the cubed Euler product.
        #[arg(long)]
        numerator: bool,
        #[arg(long)]
        order: String,
    },
    /// Print the Appell-type sum m(x, z; q^rho).
    Appell {
        #[arg(long)]
        x: String,
        #[arg(long)]
        z: String,
        #[arg(long)]
        rho: String,
        #[arg(long)]
        order: String,
    },
    /// Print a one-sided false theta sum over the argument power.
    FalseTheta {
        /// Base power, e.g. "q^3" or "-q^1/2".
        #[arg(long)]
        base: String,
        /// Quadratic growth exponent, must be positive.
        #[arg(long)]
        kappa: String,
        #[arg(long)]
        order: String,
    },
    /// List catalogue case names, optionally filtered by substring.
    Cases {
        #[arg(long)]
        filter: Option<std::string::String>,
    },
    /// Run a single catalogue case; exits with one on mismatch.
    Check {
        #[arg(long)]
        name: std::string::String,
        /// Override the default comparison order.
        #[arg(long)]
        order: Option<std::string::String>,
    },
    /// Run the catalogue; exits with one if any case fails.
    Suite {
        /// Keep only cases whose name contains this substring.
        #[arg(long)]
        filter: Option<std::string::String>,
        #[arg(long)]
        order: Option<std::string::String>,
        /// Print the full report as JSON instead of per-case lines.
        #[arg(long)]
        json: bool,
    },
    /// Search string functions at a level against an eta quotient target.
    KpScan {
        /// Level of the string functions to scan.
        #[arg(long)]
        level: i64,
        /// Eta quotient, comma-separated "modulus:exponent" pairs, e.g. "1:-2,2:1".
        #[arg(long)]
        target: std::string::String,
        /// Scan differences of two string functions instead of single ones.
        #[arg(long)]
        diff: bool,
        #[arg(long)]
        order: String,
    },
    /// Run a floating-point transformation check; exits with one if the
    /// residual exceeds the tolerance.
    Modular {
        /// One of: t-law, s-law, r-examples, mordell, completion,
        /// hol-dictionary, companion-t-law, companion-s-law,
        /// companion-dictionary, all.
        #[arg(long)]
        check: std::string::String,
        /// Override the truncation order used for exact-series inputs.
        #[arg(long)]
        order: Option<i64>,
        /// Override the pass tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn parse_rat(s: &str) -> std::result::Result<Rat, String> {
    let parse_int = |p: &str| {
        num_bigint(p).ok_or_else(|| format!("expected an integer, found {p:?}"))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let n = parse_int(num.trim())?;
            let d = parse_int(den.trim())?;
            if d == 0 {
                return Err("zero denominator".into());
            }
            Ok(qseries::rat(n, d))
        }
        None => Ok(qseries::rint(parse_int(s.trim())?)),
    }
}

fn num_bigint(s: &str) -> Option<i64> {
    i64::from_str(s).ok()
}

fn parse_qpower(s: &str) -> std::result::Result<QPower, String> {
    let trimmed = s.trim();
    let (sign, rest) = match trimmed.strip_prefix('-') {
        Some(r) => (Sign::Minus, r),
        None => (Sign::Plus, trimmed.strip_prefix('+').unwrap_or(trimmed)),
    };
    let rest = rest.trim();
    if rest == "1" {
        return Ok(QPower::new(sign, qseries::rint(0)));
    }
    let expo = match rest.strip_prefix("q^") {
        Some(e) => parse_rat(e)?,
        None if rest == "q" => qseries::rint(1),
        None => return Err(format!("expected q^<exp>, q, or 1, found {trimmed:?}")),
    };
    Ok(QPower::new(sign, expo))
}

fn emit_series(series: &PuiseuxSeries) {
    println!(
        "{}",
        serde_json::to_string_pretty(&series.to_json()).expect("series JSON serialises")
    );
}

fn run_construction(command: &Command) -> Result<PuiseuxSeries> {
    let bad = |msg: String| qseries::Error::InvalidParameter(msg);
    match command {
        Command::Euler { k, order } => {
            let t = parse_rat(order).map_err(bad)?;
            euler_infinite(&parse_rat(k).map_err(bad)?, &t)
        }
        Command::Eta { k, order } => {
            let t = parse_rat(order).map_err(bad)?;
            eta_series(*k, &t)
        }
        Command::Theta { a, b, bar, order } => {
            let t = parse_rat(order).map_err(bad)?;
            if *bar {
                j_bar_ab(*a, *b, &t)
            } else {
                j_ab(*a, *b, &t)
            }
        }
        Command::Jtp { x, rho, order } => {
            let t = parse_rat(order).map_err(bad)?;
            jacobi_j(&parse_qpower(x).map_err(bad)?, &parse_rat(rho).map_err(bad)?, &t)
        }
        Command::Hecke {
            a,
            b,
            c,
            x,
            y,
            order,
        } => {
            let t = parse_rat(order).map_err(bad)?;
            let params = HeckeParams::new(*a, *b, *c)?;
            hecke_double_sum(
                &params,
                &parse_qpower(x).map_err(bad)?,
                &parse_qpower(y).map_err(bad)?,
                &t,
            )
        }
        Command::String {
            p,
            pp,
            ell,
            m,
            numerator,
            order,
        } => {
            let t = parse_rat(order).map_err(bad)?;
            let spec = StringSpec::new(*p, *pp, *ell, *m)?;
            if *numerator {
                string_numerator(&spec, &t)
            } else {
                string_c(&spec, &t)
            }
        }
        Command::Appell { x, z, rho, order } => {
            let t = parse_rat(order).map_err(bad)?;
            appell_m(
                &parse_qpower(x).map_err(bad)?,
                &parse_qpower(z).map_err(bad)?,
                &parse_rat(rho).map_err(bad)?,
                &t,
            )
        }
        Command::FalseTheta { base, kappa, order } => {
            let t = parse_rat(order).map_err(bad)?;
            false_theta(
                &parse_qpower(base).map_err(bad)?,
                &parse_rat(kappa).map_err(bad)?,
                &t,
            )
        }
        _ => unreachable!("not a construction command"),
    }
}

fn modular_checks() -> Vec<(&'static str, i64, f64)> {
    vec![
        ("t-law", 300, 1e-8),
        ("s-law", 300, 1e-5),
        ("r-examples", 0, 1e-10),
        ("mordell", 0, 1e-9),
        ("completion", 400, 1e-6),
        ("hol-dictionary", 400, 1e-6),
        ("companion-t-law", 0, 1e-8),
        ("companion-s-law", 0, 1e-5),
        ("companion-dictionary", 200, 1e-6),
    ]
}

fn run_modular(name: &str, order: i64) -> Result<f64> {
    match name {
        "t-law" => modular::check_t_law(order),
        "s-law" => modular::check_s_law(order),
        "r-examples" => modular::check_r_examples(),
        "mordell" => modular::check_mordell_two_route(),
        "completion" => modular::check_theta_completion(order),
        "hol-dictionary" => modular::check_hol_dictionary(order),
        "companion-t-law" => modular::check_companion_t_law(),
        "companion-s-law" => modular::check_companion_s_law(),
        "companion-dictionary" => modular::check_companion_hol_dictionary(order),
        other => Err(qseries::Error::InvalidParameter(format!(
            "unknown modular check {other:?}"
        ))),
    }
}

fn modular_command(check: &str, order: Option<i64>, tol: Option<f64>) -> Result<bool> {
    let registry = modular_checks();
    let selected: Vec<_> = if check == "all" {
        registry
    } else {
        registry.into_iter().filter(|(n, _, _)| *n == check).collect()
    };
    if selected.is_empty() {
        return Err(qseries::Error::InvalidParameter(format!(
            "unknown modular check {check:?}"
        )));
    }
    let mut all_pass = true;
    for (name, default_order, default_tol) in selected {
        let residual = run_modular(name, order.unwrap_or(default_order))?;
        let threshold = tol.unwrap_or(default_tol);
        let pass = residual <= threshold;
        all_pass &= pass;
        println!(
            "modular {name}: residual {residual:.3e} (tolerance {threshold:.1e}) {}",
            if pass { "pass" } else { "FAIL" }
        );
    }
    Ok(all_pass)
}

fn execute(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Cases { filter } => {
            for name in registry::case_names() {
                if filter.as_deref().map_or(true, |f| name.contains(f)) {
                    println!("{name}");
                }
            }
            Ok(true)
        }
        Command::Check { name, order } => {
            let parsed = match order {
                Some(o) => Some(parse_rat(o).map_err(qseries::Error::InvalidParameter)?),
                None => None,
            };
            let report = registry::run_case(name, parsed.as_ref())?;
            let verdict = if report.passed { "pass" } else { "FAIL" };
            print!(
                "{} (order {}, {} ms) {verdict}",
                report.name, report.order, report.millis
            );
            match &report.detail {
                Some(d) => println!(": {d}"),
                None => println!(),
            }
            Ok(report.passed)
        }
        Command::Suite {
            filter,
            order,
            json,
        } => {
            let parsed = match order {
                Some(o) => Some(parse_rat(o).map_err(qseries::Error::InvalidParameter)?),
                None => None,
            };
            let report = registry::run_suite(filter.as_deref(), parsed.as_ref())?;
            if *json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&report).expect("report serialises")
                );
            } else {
                for case in &report.cases {
                    let verdict = if case.passed { "pass" } else { "FAIL" };
                    println!("{} (order {}, {} ms) {verdict}", case.name, case.order, case.millis);
                    if let Some(d) = &case.detail {
                        println!("    {d}");
                    }
                }
                println!("suite: {} of {} passed", report.passed, report.total);
            }
            Ok(report.failed == 0)
        }
        Command::KpScan {
            level,
            target,
            diff,
            order,
        } => {
            let t = parse_rat(order).map_err(qseries::Error::InvalidParameter)?;
            let mut factors = Vec::new();
            for part in target.split(',') {
                let (k, e) = part
                    .split_once(':')
                    .ok_or_else(|| {
                        qseries::Error::InvalidParameter(format!(
                            "expected modulus:exponent, found {part:?}"
                        ))
                    })?;
                let k = num_bigint(k.trim()).ok_or_else(|| {
                    qseries::Error::InvalidParameter(format!("bad modulus {k:?}"))
                })?;
                let e = e.trim().parse::<i32>().map_err(|_| {
                    qseries::Error::InvalidParameter(format!("bad exponent {e:?}"))
                })?;
                factors.push((k, e));
            }
            let matches = registry::kp_scan(*level, &factors, *diff, &t)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&matches).expect("matches serialise")
            );
            Ok(true)
        }
        Command::Modular { check, order, tol } => modular_command(check, *order, *tol),
        construction => {
            let series = run_construction(construction)?;
            emit_series(&series);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
