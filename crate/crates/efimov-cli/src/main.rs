use std::collections::BTreeMap;
use std::io::{self, Write};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use efimov::eigenfunctions::{big_psi, psi, EigenfunctionSpec, HyperPoint};
use efimov::spectrum::{efimov_spectrum_with, solve_s0};
use efimov::ModelGeometry;
use efimov_cli::checks::{criteria_for, Suite, Tolerances};
use efimov_cli::output::{criterion_record, csv_num, num, text_report, Header, RunManifest, SCHEMA};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "efimov", version, about = "Efimov trimers with a hard core: constants, spectra, eigenfunctions, checks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Specfun,
    Kernels,
    Eigenfunctions,
    Forms,
    Gamma,
    Potential,
    All,
}

#[derive(Subcommand)]
enum Cmd {
    /// s₀, θ = arg Γ(1+is₀) and the energy ratio e^{−2π/s₀}.
    Constants {
        #[arg(long, default_value_t = 1e-12, value_parser = positive, allow_hyphen_values = true)]
        tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The lowest trimer levels for hard-core radius a.
    Spectrum {
        #[arg(long, default_value_t = 1.0, value_parser = positive)]
        a: f64,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        levels: u32,
        #[arg(long, default_value_t = 1e-12, value_parser = positive, allow_hyphen_values = true)]
        tol: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run a verification suite; exit code 0 iff every check passes.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Stop at the first failing criterion.
        #[arg(long)]
        fail_fast: bool,
        /// Override a check bound, NAME=VALUE; repeatable.
        #[arg(long = "tol", value_parser = tol_override)]
        tols: Vec<(String, f64)>,
    },
    /// Tabulate ψ_n(r, ρ) on a grid, or Ψ_n at seeded points in six dimensions.
    Eigenfunction {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, default_value_t = 1.0, value_parser = positive)]
        a: f64,
        #[arg(long, default_value_t = 5.0, value_parser = positive)]
        rmax: f64,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
        steps: u32,
        /// Sample Ψ_n at `steps` seeded points with a ≤ |X| ≤ rmax instead.
        #[arg(long)]
        big_psi: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

fn tol_override(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s}"))?;
    let v: f64 = v.parse().map_err(|e| format!("{e}"))?;
    Ok((k.to_string(), v))
}

struct Run {
    command: String,
    started: Instant,
    started_unix_s: u64,
    parameters: BTreeMap<String, String>,
    tolerances: BTreeMap<String, String>,
    timings: BTreeMap<String, String>,
}

impl Run {
    fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            started: Instant::now(),
            started_unix_s: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            parameters: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            timings: BTreeMap::new(),
        }
    }

    fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.parameters.insert(k.into(), v.to_string());
        self
    }

    fn tol(mut self, k: &str, v: f64) -> Self {
        self.tolerances.insert(k.into(), num(v));
        self
    }

    fn finish(self, data: serde_json::Value) -> RunManifest {
        RunManifest {
            header: Header {
                schema: SCHEMA.into(),
                command: self.command,
                version: env!("CARGO_PKG_VERSION").into(),
                started_unix_s: self.started_unix_s,
                wall_clock_s: num(self.started.elapsed().as_secs_f64()),
                timings: self.timings,
            },
            parameters: self.parameters,
            tolerances: self.tolerances,
            data,
        }
    }
}

fn cmd_constants(tol: f64, format: Format) -> anyhow::Result<u8> {
    let c = solve_s0(tol)?;
    let out = io::stdout();
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out.lock());
            w.write_record(["s0", "theta", "ratio"])?;
            w.write_record([csv_num(c.s0), csv_num(c.theta), csv_num(c.geometric_ratio)])?;
            w.flush()?;
        }
        Format::Text => {
            let mut w = out.lock();
            writeln!(w, "s0     {}", num(c.s0))?;
            writeln!(w, "theta  {}", num(c.theta))?;
            writeln!(w, "ratio  {}", num(c.geometric_ratio))?;
            writeln!(w, "F(s0)  {}", num(c.f_residual))?;
        }
        Format::Json => {
            let data = json!({
                "s0": num(c.s0),
                "theta": num(c.theta),
                "ratio": num(c.geometric_ratio),
                "length_ratio": num(c.length_ratio()),
                "f_residual": num(c.f_residual),
                "bracket": [num(c.bracket.0), num(c.bracket.1)],
            });
            Run::new("constants").tol("tol", tol).finish(data).write(out.lock())?;
        }
    }
    Ok(0)
}

fn cmd_spectrum(a: f64, levels: u32, tol: f64, format: Format) -> anyhow::Result<u8> {
    let c = solve_s0(1e-12)?;
    let g = ModelGeometry::unitary(a)?;
    let lv = efimov_spectrum_with(&c, &g, levels as usize, tol)?;
    let ratio = |i: usize| (i > 0).then(|| lv[i].e_n / lv[i - 1].e_n);
    let out = io::stdout();
    match format {
        Format::Csv | Format::Text => {
            let mut w = csv::Writer::from_writer(out.lock());
            w.write_record(["n", "t_n", "E_n", "ratio", "epsilon_n"])?;
            for (i, l) in lv.iter().enumerate() {
                w.write_record([
                    l.n.to_string(),
                    csv_num(l.t_n),
                    csv_num(l.e_n),
                    ratio(i).map(csv_num).unwrap_or_default(),
                    csv_num(l.epsilon_n),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let rows: Vec<_> = lv
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    json!({
                        "n": l.n,
                        "t_n": num(l.t_n),
                        "mu_n": num(l.mu_n),
                        "E_n": num(l.e_n),
                        "ratio": ratio(i).map(num),
                        "epsilon_n": num(l.epsilon_n),
                        "k_at_root": num(l.k_at_root),
                        "bracket": [num(l.bracket.0), num(l.bracket.1)],
                    })
                })
                .collect();
            let data = json!({ "s0": num(c.s0), "levels": rows });
            Run::new("spectrum")
                .param("a", num(a))
                .param("levels", levels)
                .tol("tol", tol)
                .finish(data)
                .write(out.lock())?;
        }
    }
    Ok(0)
}

fn cmd_verify(suite: SuiteArg, format: Format, fail_fast: bool, tols: Vec<(String, f64)>) -> anyhow::Result<u8> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::Specfun => vec![Suite::Specfun],
        SuiteArg::Kernels => vec![Suite::Kernels],
        SuiteArg::Eigenfunctions => vec![Suite::Eigenfunctions],
        SuiteArg::Forms => vec![Suite::Forms],
        SuiteArg::Gamma => vec![Suite::Gamma],
        SuiteArg::Potential => vec![Suite::Potential],
        SuiteArg::All => vec![
            Suite::Specfun,
            Suite::Kernels,
            Suite::Eigenfunctions,
            Suite::Forms,
            Suite::Gamma,
            Suite::Potential,
        ],
    };
    let tol = Tolerances(tols.into_iter().collect());
    let mut run = Run::new("verify").param("suite", format!("{suite:?}").to_lowercase());
    for (k, v) in &tol.0 {
        run = run.tol(k, *v);
    }
    let mut outcomes = Vec::new();
    for c in criteria_for(&suites) {
        let o = c.run(&tol);
        run.timings.insert(format!("criterion_{:02}", o.id), num(o.elapsed_s));
        let failed = !o.passed();
        outcomes.push(o);
        if failed && fail_fast {
            break;
        }
    }
    let out = io::stdout();
    match format {
        Format::Json => {
            let records: Vec<_> = outcomes.iter().map(criterion_record).collect();
            let passed = outcomes.iter().all(|o| o.passed());
            let data = json!({ "passed": passed, "criteria": records });
            run.finish(data).write(out.lock())?;
        }
        Format::Text | Format::Csv => text_report(&outcomes, out.lock())?,
    }
    let code = if outcomes.iter().any(|o| o.error.is_none() && !o.passed()) {
        EXIT_CHECK_FAILED
    } else if outcomes.iter().any(|o| o.numerical_error) {
        EXIT_NUMERICAL
    } else if outcomes.iter().any(|o| o.error.is_some()) {
        EXIT_USAGE
    } else {
        0
    };
    Ok(code)
}

fn cmd_eigenfunction(n: u32, a: f64, rmax: f64, steps: u32, big: bool, seed: u64) -> anyhow::Result<u8> {
    let spec = EigenfunctionSpec::compute(n as usize, a)?;
    let out = io::stdout();
    let mut w = csv::Writer::from_writer(out.lock());
    if big {
        if rmax <= a {
            return Err(efimov::Error::Domain(format!("rmax = {rmax} does not exceed a = {a}")).into());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        w.write_record(["x1", "x2", "x3", "y1", "y2", "y3", "psi"])?;
        let mut done = 0;
        while done < steps {
            let u: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 0.1 {
                continue;
            }
            let r = rng.gen_range(a..rmax) / norm;
            let p = HyperPoint::new([u[0] * r, u[1] * r, u[2] * r], [u[3] * r, u[4] * r, u[5] * r]);
            let v = big_psi(&spec, &p)?;
            let mut rec: Vec<String> = p.x.iter().chain(p.y.iter()).map(|&c| csv_num(c)).collect();
            rec.push(csv_num(v));
            w.write_record(&rec)?;
            done += 1;
        }
    } else {
        w.write_record(["r", "rho", "psi"])?;
        let h = rmax / steps as f64;
        for i in 1..=steps {
            for j in 1..=steps {
                let (r, rho) = (i as f64 * h, j as f64 * h);
                // ψ is extended by zero into the hard core
                let v = if r.hypot(rho) < a * (1.0 - 1e-12) { 0.0 } else { psi(&spec, r, rho)? };
                w.write_record([csv_num(r), csv_num(rho), csv_num(v)])?;
            }
        }
    }
    w.flush().context("writing CSV")?;
    Ok(0)
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<efimov::Error>() {
        Some(efimov::Error::Domain(_)) => EXIT_USAGE,
        Some(_) => EXIT_NUMERICAL,
        None => EXIT_CHECK_FAILED,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let r = match cli.cmd {
        Cmd::Constants { tol, format } => cmd_constants(tol, format),
        Cmd::Spectrum { a, levels, tol, format } => cmd_spectrum(a, levels, tol, format),
        Cmd::Verify {
            suite,
            format,
            fail_fast,
            tols,
        } => cmd_verify(suite, format, fail_fast, tols),
        Cmd::Eigenfunction {
            n,
            a,
            rmax,
            steps,
            big_psi,
            seed,
        } => cmd_eigenfunction(n, a, rmax, steps, big_psi, seed),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
