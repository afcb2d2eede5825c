//! `minres` - minimal residual polynomials, convergence factors and bounds
//! on unions of real intervals.
//!
//! Sets are given inline as semicolon-separated interval pairs
//! (`"-2,-1;1,3"`) or as `@file.json` holding `{"intervals": [[a,b],...]}`.
//! Polynomials are given as JSON (`{"basis":"monomial","coeffs":[...]}`,
//! optionally `@file.json`). All numeric output is printed with 17
//! significant digits, so repeated runs are byte-identical.
//!
//! Exit status: 0 on success, 2 on invalid input or numeric failure, 3 when
//! a solver result is returned but not certified (the result still prints).

mod out;

use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use minrespoly::bounds::{bw_check, bw_refined_bound, compare_report, BoundReport};
use minrespoly::green::kappa;
use minrespoly::invimage::{check_admissible, green_closed_form, inverse_image, Admissibility};
use minrespoly::minres::{minres_exchange, minres_grid_oracle, MinResResult};
use minrespoly::{Basis, IntervalUnion, RealPolynomial};
use minrespoly::DEFAULT_EQUALITY_TOL;

use out::{fmt_f64, intervals_json, Obj};

#[derive(Parser)]
#[command(name = "minres", version, about = "Minimal residual polynomials on interval unions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Estimated asymptotic convergence factor kappa(S) = exp(-g(0))
    Kappa {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, default_value_t = 1e-12, env = "MINRES_QUAD_TOL")]
        quad_tol: f64,
    },
    /// Minimal residual polynomial and minimum deviation L_n(S)
    Minres {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        /// Grid density per interval for an independent bracket of L_n
        #[arg(long)]
        grid: Option<usize>,
    },
    /// L_n against the classic and sharpened lower bounds at one degree
    Bound {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-12, env = "MINRES_QUAD_TOL")]
        quad_tol: f64,
    },
    /// Inverse image of [-1,1] under an admissible polynomial, with its
    /// exact minimum deviation
    Invimage {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Refined Bernstein-Walsh bound cosh(n g(x)) at a real point
    Bw {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        /// Polynomial to check against the bound
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// Degree for the bound (or for --random)
        #[arg(long)]
        n: Option<usize>,
        /// Check a seeded random polynomial of degree --n
        #[arg(long, default_value_t = false)]
        random: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-12, env = "MINRES_QUAD_TOL")]
        quad_tol: f64,
    },
    /// Per-degree table of L_n, bounds and equality classification
    Report {
        #[arg(long, allow_hyphen_values = true)]
        set: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-12, env = "MINRES_QUAD_TOL")]
        quad_tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((output, certified)) => {
            println!("{output}");
            if certified {
                ExitCode::SUCCESS
            } else {
                eprintln!("warning: result not certified");
                ExitCode::from(3)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(String, bool), String> {
    match cli.command {
        Command::Kappa { set, quad_tol } => {
            let s = parse_set(&set)?;
            let k = kappa(&s, quad_tol).map_err(|e| e.to_string())?;
            let obj = Obj::new()
                .num("kappa", k)
                .num("green_at_zero", -k.ln())
                .num("quad_tol", quad_tol)
                .build();
            Ok((obj, true))
        }
        Command::Minres { set, n, tol, max_iter, grid } => {
            let s = parse_set(&set)?;
            let res = minres_exchange(&s, n, tol, max_iter).map_err(|e| e.to_string())?;
            let mut obj = minres_json(n, &res);
            if let Some(grid) = grid {
                let bracket =
                    minres_grid_oracle(&s, n, grid, None).map_err(|e| e.to_string())?;
                obj = obj
                    .num("oracle_lower", bracket.lower)
                    .num("oracle_upper", bracket.upper);
            }
            Ok((obj.build(), res.certified))
        }
        Command::Bound { set, n, tol, max_iter, quad_tol } => {
            let s = parse_set(&set)?;
            let rows = compare_report(&s, n, quad_tol, tol, max_iter, DEFAULT_EQUALITY_TOL)
                .map_err(|e| e.to_string())?;
            let row = rows.last().expect("n-th row requested");
            Ok((bound_row_json(row).build(), row.certified))
        }
        Command::Invimage { poly } => {
            let p = parse_poly(&poly)?;
            let adm = match check_admissible(&p, 1e-10).map_err(|e| e.to_string())? {
                Admissibility::Admissible(a) => a,
                Admissibility::Rejected(r) => return Err(format!("not admissible: {r:?}")),
            };
            let image = inverse_image(&adm).map_err(|e| e.to_string())?;
            if image.contains(0.0) {
                return Err("0 lies in the inverse image".into());
            }
            let n = adm.degree();
            let l = 1.0 / adm.poly().eval(0.0).abs();
            let kappa_pow_n = (-(n as f64) * green_closed_form(&adm, 0.0)).exp();
            let obj = Obj::new()
                .raw("intervals", intervals_json(image.intervals()))
                .nums("endpoints", image.endpoints())
                .int("n", n)
                .int("ell", image.ell())
                .num("L_n", l)
                .num("kappa_pow_n", kappa_pow_n)
                .build();
            Ok((obj, true))
        }
        Command::Bw { set, x, poly, n, random, seed, quad_tol } => {
            let s = parse_set(&set)?;
            let q = match (poly, random) {
                (Some(spec), _) => Some(parse_poly(&spec)?),
                (None, true) => {
                    let deg = n.ok_or("--random needs --n")?;
                    Some(random_poly(deg, seed))
                }
                (None, false) => None,
            };
            match q {
                Some(q) => {
                    let c = bw_check(&s, &q, x, quad_tol, 1e-9).map_err(|e| e.to_string())?;
                    let obj = Obj::new()
                        .num("lhs", c.lhs)
                        .num("rhs", c.rhs)
                        .num("classic_rhs", c.classic_rhs)
                        .bool("pass", c.pass)
                        .bool("refinement_strict", c.refinement_strict)
                        .int("n", q.degree())
                        .build();
                    Ok((obj, c.pass))
                }
                None => {
                    let deg = n.ok_or("bw needs --poly, or --n for the bare bound")?;
                    let rhs = bw_refined_bound(&s, x, deg, quad_tol).map_err(|e| e.to_string())?;
                    let g = if s.contains(x) {
                        0.0
                    } else {
                        minrespoly::green::green_value(&s, x, quad_tol)
                            .map_err(|e| e.to_string())?
                            .value
                    };
                    let obj = Obj::new()
                        .num("rhs", rhs)
                        .num("classic_rhs", (deg as f64 * g).exp())
                        .num("green", g)
                        .int("n", deg)
                        .build();
                    Ok((obj, true))
                }
            }
        }
        Command::Report { set, n_max, tol, max_iter, quad_tol, format } => {
            let s = parse_set(&set)?;
            let rows = compare_report(&s, n_max, quad_tol, tol, max_iter, DEFAULT_EQUALITY_TOL)
                .map_err(|e| e.to_string())?;
            let all_certified = rows.iter().all(|r| r.certified);
            let text = match format {
                Format::Csv => render_csv(&rows),
                Format::Json => {
                    let body = rows
                        .iter()
                        .map(|r| bound_row_json(r).build())
                        .collect::<Vec<_>>()
                        .join(",");
                    Obj::new()
                        .num("kappa", rows[0].kappa)
                        .raw("rows", format!("[{body}]"))
                        .build()
                }
            };
            Ok((text, all_certified))
        }
    }
}

fn minres_json(n: usize, res: &MinResResult) -> Obj {
    let mut obj = Obj::new().int("n", n).num("L", res.deviation);
    match res.polynomial.basis() {
        Basis::Monomial => {
            obj = obj.str("basis", "monomial");
        }
        Basis::Chebyshev { lo, hi } => {
            obj = obj
                .str("basis", "chebyshev")
                .raw("interval", format!("[{},{}]", fmt_f64(lo), fmt_f64(hi)));
        }
    }
    obj.nums("coeffs", res.polynomial.coeffs())
        .nums("reference", &res.reference.points)
        .ints("deltas", res.reference.deltas.iter())
        .int("effective_degree", res.effective_degree)
        .bool("certified", res.certified)
}

fn bound_row_json(r: &BoundReport) -> Obj {
    let mut obj = Obj::new()
        .int("n", r.n)
        .num("L", r.l_n)
        .num("kappa", r.kappa)
        .num("classic", r.classic)
        .num("sharp", r.sharp)
        .num("ratio", r.ratio)
        .str("equality", r.equality.label());
    if let Some(v) = r.ln_next_equal {
        obj = obj.bool("ln_next_equal", v);
    }
    obj.bool("certified", r.certified)
}

fn render_csv(rows: &[BoundReport]) -> String {
    let mut text = String::from("n,L,classic,sharp,ratio,equality,certified");
    for r in rows {
        text.push_str(&format!(
            "\n{},{},{},{},{},{},{}",
            r.n,
            fmt_f64(r.l_n),
            fmt_f64(r.classic),
            fmt_f64(r.sharp),
            fmt_f64(r.ratio),
            r.equality.label(),
            r.certified
        ));
    }
    text
}

/// Inline `"a1,a2;a3,a4"` pairs or `@file.json`.
fn parse_set(spec: &str) -> Result<IntervalUnion, String> {
    if spec.is_empty() {
        return Err("empty set specification".into());
    }
    if let Some(path) = spec.strip_prefix('@') {
        let data = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        return serde_json::from_str(&data).map_err(|e| format!("{path}: {e}"));
    }
    let mut endpoints = Vec::new();
    for pair in spec.split(';') {
        for part in pair.split(',') {
            let v: f64 = part
                .trim()
                .parse()
                .map_err(|_| format!("cannot parse endpoint {part:?}"))?;
            endpoints.push(v);
        }
    }
    IntervalUnion::from_endpoints(&endpoints).map_err(|e| e.to_string())
}

fn parse_poly(spec: &str) -> Result<RealPolynomial, String> {
    let data = match spec.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?,
        None => spec.to_string(),
    };
    serde_json::from_str(&data).map_err(|e| e.to_string())
}

fn random_poly(degree: usize, seed: u64) -> RealPolynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
    // keep the declared degree honest
    if coeffs[degree].abs() < 0.1 {
        coeffs[degree] = coeffs[degree].signum().max(0.5) * 0.5;
    }
    RealPolynomial::monomial(coeffs).expect("finite coefficients")
}
