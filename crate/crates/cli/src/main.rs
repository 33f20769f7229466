// Copyright 2026 The ecp-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! `ecp`: curve data, Monte Carlo reports and LOCC transcripts.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ecp_core::ecp::{comparison_curves, ghz_state, round_statevector};
use ecp_core::locc::{run_protocol, ProtocolConfig};
use ecp_core::montecarlo::{estimate_success_with, trial_rng, TrajectoryConfig};
use ecp_core::{entanglement, total_success_probability, ProbeModel, SchmidtCoefficients};
use serde_json::json;

/// Largest |a² + b² − 1| accepted for `--alpha`/`--beta` before renormalizing.
const INPUT_TOLERANCE: f64 = 1e-9;
/// Reports with |z| above this exit with status 2.
const Z_LIMIT: f64 = 4.0;

#[derive(Debug, Parser)]
#[command(name = "ecp", version, about = "Entanglement concentration curves, ensembles and transcripts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Success probability P_n against entanglement, one column per n.
    Curve {
        #[command(flatten)]
        grid: GridArgs,
        /// Iteration counts to tabulate.
        #[arg(short = 'n', long = "rounds", value_delimiter = ',', default_values_t = [1usize, 2, 3, 6])]
        rounds: Vec<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// This protocol against the Schmidt-projection and collective baselines.
    Compare {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(short = 'n', long, default_value_t = 6)]
        rounds: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monte Carlo estimate of P_n with a z-score against the recursion.
    Simulate {
        #[command(flatten)]
        coefficients: CoefficientArgs,
        #[arg(short = 'n', long, default_value_t = 2)]
        rounds: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Photons in the GHZ-class state.
        #[arg(long, default_value_t = 2)]
        photons: usize,
        #[command(flatten)]
        probe: ProbeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Multi-party run over a simulated channel, written as JSON lines.
    Locc {
        /// Number of parties, Alice included.
        #[arg(short = 'N', long, default_value_t = 3)]
        parties: usize,
        #[command(flatten)]
        coefficients: CoefficientArgs,
        #[arg(short = 'n', long, default_value_t = 6)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also broadcast parity and ancilla readings.
        #[arg(long)]
        announce: bool,
        #[command(flatten)]
        probe: ProbeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// One state-vector round, reported as JSON.
    Round {
        #[command(flatten)]
        coefficients: CoefficientArgs,
        #[arg(long, default_value_t = 2)]
        photons: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        probe: ProbeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Entanglement values in (0, 1]; defaults to 0.01, 0.02, ..., 0.99.
    #[arg(short = 'e', long = "entanglement", value_delimiter = ',')]
    entanglement: Vec<f64>,
}

impl GridArgs {
    fn resolve(&self) -> Result<Vec<SchmidtCoefficients>> {
        let values = if self.entanglement.is_empty() {
            (1..=99).map(|k| k as f64 / 100.0).collect()
        } else {
            self.entanglement.clone()
        };
        values
            .into_iter()
            .map(|e| {
                if !(e > 0.0 && e <= 1.0) {
                    bail!("entanglement {e} outside (0, 1]");
                }
                Ok(SchmidtCoefficients::from_entanglement(e)?)
            })
            .collect()
    }
}

#[derive(Debug, Args)]
struct CoefficientArgs {
    /// Amplitude on |H...H>.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["alpha_sq", "state_entanglement"])]
    alpha: Option<f64>,
    /// Amplitude on |V...V>; defaults to +sqrt(1 - alpha^2).
    #[arg(long, allow_hyphen_values = true, requires = "alpha")]
    beta: Option<f64>,
    /// Weight a^2 on |H...H>.
    #[arg(long = "alpha-sq", conflicts_with = "state_entanglement")]
    alpha_sq: Option<f64>,
    /// Entanglement E, mapped to a = sqrt(E/2) <= b.
    #[arg(long = "entanglement", id = "state_entanglement")]
    entanglement: Option<f64>,
}

impl CoefficientArgs {
    fn resolve(&self) -> Result<SchmidtCoefficients> {
        let c = match (self.alpha, self.beta, self.alpha_sq, self.entanglement) {
            (Some(a), beta, None, None) => {
                let b = match beta {
                    Some(b) => b,
                    None if a.abs() <= 1.0 => (1.0 - a * a).sqrt(),
                    None => bail!("|alpha| = {} exceeds 1", a.abs()),
                };
                let deviation = (a * a + b * b - 1.0).abs();
                if deviation.is_nan() || deviation > INPUT_TOLERANCE {
                    bail!("a² + b² deviates from 1 by {deviation:e}");
                }
                SchmidtCoefficients::normalized(a, b)?
            }
            (None, None, Some(p), None) => SchmidtCoefficients::from_alpha_squared(p)?,
            (None, None, None, Some(e)) => SchmidtCoefficients::from_entanglement(e)?,
            _ => bail!("give the state as --alpha [--beta], --alpha-sq or --entanglement"),
        };
        Ok(c)
    }
}

#[derive(Debug, Args)]
struct ProbeArgs {
    /// Cross-Kerr phase shift in radians.
    #[arg(long, default_value_t = 0.1)]
    theta: f64,
    /// Probability that the detector reports the wrong parity.
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
}

impl ProbeArgs {
    fn model(&self) -> Result<ProbeModel> {
        Ok(ProbeModel::new(self.theta, self.epsilon)?)
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn open(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => {
                let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                Box::new(BufWriter::new(file))
            }
            None => Box::new(io::stdout().lock()),
        })
    }
}

/// `%.12g`: twelve significant digits, trailing zeros dropped.
fn format_number(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exponent) = sci.split_once('e').expect("exponent form");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if !(-5..12).contains(&exponent) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exponent}");
    }
    let decimals = (11 - exponent) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn write_table(output: &OutputArgs, header: Vec<String>, rows: Vec<Vec<f64>>) -> Result<()> {
    let mut writer = csv::Writer::from_writer(output.open()?);
    writer.write_record(&header)?;
    for row in rows {
        writer.write_record(row.into_iter().map(format_number))?;
    }
    writer.flush()?;
    Ok(())
}

fn write_json(output: &OutputArgs, value: &serde_json::Value) -> Result<()> {
    let mut out = output.open()?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Curve { grid, rounds, output } => {
            if rounds.is_empty() {
                bail!("no iteration counts given");
            }
            let header = std::iter::once("E".to_string()).chain(rounds.iter().map(|n| format!("P_{n}"))).collect();
            let rows = grid
                .resolve()?
                .into_iter()
                .map(|c| {
                    std::iter::once(entanglement(c))
                        .chain(rounds.iter().map(|&n| total_success_probability(c, n)))
                        .collect()
                })
                .collect();
            write_table(&output, header, rows)?;
        }
        Command::Compare { grid, rounds, output } => {
            let header = ["E", "P_O", "P_Z", "P_S", "P_B"].map(String::from).to_vec();
            let rows = grid
                .resolve()?
                .into_iter()
                .map(|c| {
                    let p = comparison_curves(c, rounds);
                    vec![p.entanglement, p.p_o, p.p_z, p.p_s, p.p_b]
                })
                .collect();
            write_table(&output, header, rows)?;
        }
        Command::Simulate { coefficients, rounds, trials, seed, photons, probe, output } => {
            let c = coefficients.resolve()?;
            let config = TrajectoryConfig { n_photons: photons, model: probe.model()? };
            let stats = estimate_success_with(&config, c, rounds, trials, seed)?;
            let analytic = total_success_probability(c, rounds);
            let z = stats.z_score(analytic);
            write_json(
                &output,
                &json!({
                    "coefficients": c,
                    "rounds": rounds,
                    "photons": photons,
                    "theta": probe.theta,
                    "epsilon": probe.epsilon,
                    "stats": stats,
                    "analytic": analytic,
                    "z": z,
                }),
            )?;
            if z.is_nan() || z.abs() > Z_LIMIT {
                eprintln!("estimate is {z:.2} standard errors from the analytic value");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Locc { parties, coefficients, rounds, seed, announce, probe, output } => {
            let mut config = ProtocolConfig::new(parties, coefficients.resolve()?, rounds, seed);
            config.model = probe.model()?;
            config.announce_measurements = announce;
            let transcript = run_protocol(&config)?;
            let mut out = output.open()?;
            transcript.write_json_lines(&mut out)?;
            out.flush()?;
            if !transcript.verdicts_agree() {
                eprintln!("parties reached different verdicts");
                return Ok(ExitCode::from(2));
            }
        }
        Command::Round { coefficients, photons, seed, probe, output } => {
            let c = coefficients.resolve()?;
            let state = ghz_state(photons, c)?;
            let mut rng = trial_rng(seed, 0);
            let result = round_statevector(&state, 0, c, &probe.model()?, &mut rng)?;
            write_json(&output, &json!({ "photons": photons, "seed": seed, "record": result.record }))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
