use std::fmt::Write as _;

use landau_kratzer::heun::{generate_coefficients, HeunParams};
use landau_kratzer::model::PhysicalConfig;
use landau_kratzer::oracle::{verify_line, OracleReport, RadialGrid};
use landau_kratzer::spectrum::{allowed_frequencies, Branch, BranchSelection, SpectrumLine};
use landau_kratzer::wavefunction::{norm_squared, radial_wavefunction};
use landau_kratzer::{ChannelParams, Error};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{CoeffsArgs, Format, Ranges, SpectrumArgs, VerifyArgs, WavefunctionArgs};
use crate::error::CliError;
use crate::output::{load_config, num, to_json, RunManifest};

/// Rendered output and whether every verified level passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, passed: true }
    }
}

const NORM_R_MAX: f64 = 12.0;
const NORM_INTERVALS: usize = 1000;

#[derive(Debug, Clone, Serialize)]
struct Absent {
    n: u32,
    l: i64,
    reason: String,
}

fn channels(ranges: &Ranges) -> Result<Vec<(u32, i64)>, CliError> {
    if ranges.n_min == 0 {
        return Err(CliError::Usage("--n-min must be >= 1".into()));
    }
    if ranges.n_min > ranges.n_max {
        return Err(CliError::Usage(format!("empty n range {}..{}", ranges.n_min, ranges.n_max)));
    }
    if ranges.l_min > ranges.l_max {
        return Err(CliError::Usage(format!("empty l range {}..{}", ranges.l_min, ranges.l_max)));
    }
    Ok((ranges.n_min..=ranges.n_max)
        .flat_map(|n| (ranges.l_min..=ranges.l_max).map(move |l| (n, l)))
        .collect())
}

fn range_params(manifest: RunManifest, ranges: &Ranges) -> RunManifest {
    manifest
        .param("n", format!("{}..{}", ranges.n_min, ranges.n_max))
        .param("l", format!("{}..{}", ranges.l_min, ranges.l_max))
}

/// Lines for every channel, in channel order; channels without an admissible
/// root are returned separately.
fn sweep(
    config: &PhysicalConfig<f64>,
    channels: &[(u32, i64)],
    branch: BranchSelection,
) -> Result<(Vec<SpectrumLine<f64>>, Vec<Absent>), CliError> {
    let results: Vec<_> = channels.par_iter().map(|&(n, l)| (n, l, allowed_frequencies(n, l, config))).collect();
    let mut lines = Vec::new();
    let mut absent = Vec::new();
    for (n, l, result) in results {
        match result {
            Ok(mut found) => {
                found.retain(|line| branch.includes(line.omega_branch));
                found.sort_by_key(|line| line.omega_branch);
                lines.extend(found);
            }
            Err(e @ Error::NoAdmissibleRoot { .. }) => absent.push(Absent { n, l, reason: e.to_string() }),
            Err(e) => return Err(e.into()),
        }
    }
    Ok((lines, absent))
}

pub fn spectrum(args: &SpectrumArgs) -> Result<Outcome, CliError> {
    let channels = channels(&args.ranges)?;
    let (file, digest) = load_config(&args.config)?;
    let config = file.into_config()?;
    let selection: BranchSelection = args.branch.into();
    let (lines, absent) = sweep(&config, &channels, selection)?;
    let manifest =
        range_params(RunManifest::new("spectrum", Some(digest), args.format), &args.ranges).param("branch", branch_name(selection));

    let text = match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                manifest: &'a RunManifest,
                rows: &'a [SpectrumLine<f64>],
                absent: &'a [Absent],
            }
            to_json(&Doc { manifest: &manifest, rows: &lines, absent: &absent })
        }
        Format::Csv => {
            let mut out = manifest.header_line();
            out.push_str("n,l,branch,theta,varpi,omega,energy,terminated\n");
            let mut rows: Vec<(u32, i64, String)> = lines
                .iter()
                .map(|line| {
                    let row = format!(
                        "{},{},{},{},{},{},{},{}\n",
                        line.n,
                        line.l,
                        line.omega_branch,
                        num(line.theta_root),
                        num(line.varpi),
                        num(line.omega),
                        num(line.energy),
                        line.terminated
                    );
                    (line.n, line.l, row)
                })
                .collect();
            rows.extend(absent.iter().map(|a| (a.n, a.l, format!("{},{},,,,,,absent\n", a.n, a.l))));
            rows.sort_by_key(|(n, l, _)| (*n, *l));
            rows.into_iter().for_each(|(_, _, row)| out.push_str(&row));
            out
        }
    };
    Ok(Outcome::ok(text))
}

fn branch_name(selection: BranchSelection) -> &'static str {
    match selection {
        BranchSelection::Plus => "plus",
        BranchSelection::Minus => "minus",
        BranchSelection::Both => "both",
    }
}

#[derive(Serialize)]
struct ChannelHeader {
    /// Meaning of the sampled coordinate.
    convention: &'static str,
    #[serde(flatten)]
    channel: ChannelParams<f64>,
    n: u32,
    branch: Branch,
    energy: f64,
    /// `int_0^12 |f|^2 r dr` with `a_0 = 1`, absent when it does not converge.
    norm_squared: Option<f64>,
}

const CONVENTION: &str = "r = sqrt(m varpi) rho";

pub fn wavefunction(args: &WavefunctionArgs) -> Result<Outcome, CliError> {
    if !(args.r_max > 0.0) || !args.r_max.is_finite() {
        return Err(CliError::Usage("--r-max must be finite and > 0".into()));
    }
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be >= 1".into()));
    }
    if args.n == 0 {
        return Err(CliError::Usage("--n must be >= 1".into()));
    }
    let (file, digest) = load_config(&args.config)?;
    let config = file.into_config()?;
    let branch: Branch = args.branch.into();
    let lines: Vec<_> =
        allowed_frequencies(args.n, args.l, &config)?.into_iter().filter(|line| line.omega_branch == branch).collect();
    let line = lines.get(args.root).ok_or_else(|| {
        CliError::Usage(format!("--root {} out of range: channel has {} positive root(s)", args.root, lines.len()))
    })?;
    let profile = radial_wavefunction(line, &config)?;
    let samples = profile.sample(args.r_max, args.samples)?;
    let header = ChannelHeader {
        convention: CONVENTION,
        channel: line.channel(&config)?,
        n: line.n,
        branch,
        energy: line.energy,
        norm_squared: norm_squared(&profile, NORM_R_MAX, NORM_INTERVALS).ok(),
    };
    let manifest = RunManifest::new("wavefunction", Some(digest), args.format)
        .param("n", args.n)
        .param("l", args.l)
        .param("branch", branch)
        .param("root", args.root)
        .param("samples", args.samples)
        .param("r_max", num(args.r_max));

    let text = match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Sample {
                r: f64,
                f: f64,
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                manifest: &'a RunManifest,
                channel: &'a ChannelHeader,
                rows: Vec<Sample>,
            }
            let rows = samples.iter().map(|&(r, f)| Sample { r, f }).collect();
            to_json(&Doc { manifest: &manifest, channel: &header, rows })
        }
        Format::Csv => {
            let ch = &header.channel;
            let mut out = manifest.header_line();
            let _ = writeln!(
                out,
                "# {CONVENTION} m={} omega={} Omega={} l={} gamma={} mu={} tau2={} varpi={} theta={} energy={} norm_squared={}",
                num(ch.m),
                num(ch.omega),
                num(ch.rotation),
                ch.l,
                num(ch.gamma),
                num(ch.mu),
                num(ch.tau2),
                num(ch.varpi),
                num(ch.theta),
                num(header.energy),
                header.norm_squared.map(num).unwrap_or_else(|| "none".into())
            );
            out.push_str("r,f\n");
            for (r, f) in samples {
                let _ = writeln!(out, "{},{}", num(r), num(f));
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let channels = channels(&args.ranges)?;
    let grid = RadialGrid::new(args.r_max, args.grid_n).map_err(|e| CliError::Usage(e.to_string()))?;
    if let Some(omega) = args.omega_override {
        if !omega.is_finite() {
            return Err(CliError::Usage("--omega-override must be finite".into()));
        }
    }
    let (file, digest) = load_config(&args.config)?;
    let config = file.into_config()?;
    let (lines, absent) = sweep(&config, &channels, BranchSelection::Plus)?;
    let reports = lines
        .par_iter()
        .map(|line| verify_line(line, &config, &grid, args.omega_override))
        .collect::<Result<Vec<OracleReport<f64>>, _>>()?;
    let passed = reports.iter().all(|r| r.passed);

    let mut manifest = range_params(RunManifest::new("verify", Some(digest), args.format), &args.ranges)
        .param("grid_n", args.grid_n)
        .param("r_max", num(args.r_max));
    if let Some(omega) = args.omega_override {
        manifest = manifest.param("omega_override", num(omega));
    }

    let text = match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                manifest: &'a RunManifest,
                rows: &'a [OracleReport<f64>],
                absent: &'a [Absent],
                passed: bool,
            }
            to_json(&Doc { manifest: &manifest, rows: &reports, absent: &absent, passed })
        }
        Format::Csv => {
            let mut out = manifest.header_line();
            out.push_str("n,l,theta,lambda_analytic,lambda_numeric,gap,nodes,passed\n");
            let mut rows: Vec<(u32, i64, String)> = reports
                .iter()
                .map(|r| {
                    let row = format!(
                        "{},{},{},{},{},{},{},{}\n",
                        r.n,
                        r.l,
                        num(r.theta),
                        num(r.lambda_analytic),
                        num(r.lambda_numeric),
                        num(r.abs_gap),
                        r.node_count_numeric,
                        r.passed
                    );
                    (r.n, r.l, row)
                })
                .collect();
            rows.extend(absent.iter().map(|a| (a.n, a.l, format!("{},{},,,,,,absent\n", a.n, a.l))));
            rows.sort_by_key(|(n, l, _)| (*n, *l));
            rows.into_iter().for_each(|(_, _, row)| out.push_str(&row));
            out
        }
    };
    Ok(Outcome { text, passed })
}

pub fn coeffs(args: &CoeffsArgs) -> Result<Outcome, CliError> {
    if args.k == 0 {
        return Err(CliError::Usage("--k must be >= 1".into()));
    }
    if !(1.0 + 2.0 * args.gamma > 0.0) {
        return Err(CliError::Usage("--gamma must satisfy 1 + 2 gamma > 0".into()));
    }
    let params = HeunParams::new(args.gamma, args.theta, args.nu).map_err(|e| CliError::Usage(e.to_string()))?;
    let series = generate_coefficients(&params, args.k)?;
    let manifest = RunManifest::new("coeffs", None, args.format)
        .param("gamma", num(args.gamma))
        .param("theta", num(args.theta))
        .param("nu", num(args.nu))
        .param("k", args.k);

    let text = match args.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                k: usize,
                a_k: f64,
            }
            #[derive(Serialize)]
            struct Doc<'a> {
                manifest: &'a RunManifest,
                rows: Vec<Row>,
            }
            let rows = series.coeffs.iter().enumerate().map(|(k, &a_k)| Row { k, a_k }).collect();
            to_json(&Doc { manifest: &manifest, rows })
        }
        Format::Csv => {
            let mut out = manifest.header_line();
            out.push_str("k,a_k\n");
            for (k, a) in series.coeffs.iter().enumerate() {
                let _ = writeln!(out, "{k},{}", num(*a));
            }
            out
        }
    };
    Ok(Outcome::ok(text))
}
