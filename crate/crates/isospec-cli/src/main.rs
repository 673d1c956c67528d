//! Command-line surface over the exact isospectrality toolkit.
//!
//! Exit codes: 0 on success (all scenario verdicts confirmed, possibly with
//! caveats), 1 on usage errors, 2 when `compare` finds a spectral
//! difference, 3 when a scenario is refuted or a certificate hypothesis
//! fails.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use isospec::descriptor::{
    parse_cutoff, parse_space, segment_to_csv, segment_to_json, segment_to_markdown,
    SpaceDescriptor,
};
use isospec::eigenvalue::Eigenvalue;
use isospec::flat::{
    displacement_length_spectrum, fixed_set, quotient_p_spectrum, torus_p_spectrum, FlatQuotient,
    Parity,
};
use isospec::heat::{truncated_heat_trace, volume_term, HeatSpace};
use isospec::rational::{format_rational, parse_rational, rational_int, rational_to_f64};
use isospec::scenario::{
    certificate_corollary_1_4, list_scenarios, run_scenario, CertificateSubject, ScenarioError,
    ScenarioOptions, Verdict,
};
use isospec::segment::{compare_segments, ComparisonOutcome, SpectrumSegment};
use isospec::sphere::{
    quotient_middle_spectrum, shortest_closed_geodesic, sphere_p_spectrum,
    sphere_singular_set_dimension, GeodesicSpace, QuotientKind, SphericalQuotient,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "isospec",
    about = "Exact Hodge spectra of flat and spherical quotients, comparison certificates, \
             and scenario reports",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a complete spectrum segment of a space descriptor.
    Spectrum(SpectrumArgs),
    /// Compare two spaces degree by degree and report the first difference.
    Compare(CompareArgs),
    /// Displacement length spectrum (flat) or shortest closed geodesic
    /// (sphere, projective space).
    Lengths(LengthsArgs),
    /// Fixed-point set of the involution of a quotient descriptor.
    FixedSet(FixedSetArgs),
    /// Heat-expansion data and truncated heat traces.
    Heat(HeatArgs),
    /// Scenario registry.
    #[command(subcommand)]
    Scenario(ScenarioCommand),
    /// Check the halving-theorem hypotheses for two involutions of one space.
    Certify(CertifyArgs),
    /// Dump the pants-surface gluing graph in DOT format.
    SurfaceDot(SurfaceDotArgs),
}

#[derive(Args)]
struct SurfaceDotArgs {
    /// Pants parameter: the surface has genus 2t+1.
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[arg(long, default_value_t = 0.8)]
    alpha: f64,
    #[arg(long, default_value_t = 0.7)]
    gamma: f64,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Space descriptor file (JSON).
    #[arg(long)]
    space: PathBuf,
    /// Form degree.
    #[arg(long)]
    p: usize,
    /// Cutoff: RAT (plain) or RATxPI2 (multiple of 4 pi^2), e.g. 60 or 50xPI2.
    #[arg(long)]
    cutoff: String,
    /// Output format.
    #[arg(long, default_value = "json")]
    format: String,
    /// Parity sector for flat quotients.
    #[arg(long, default_value = "invariant")]
    parity: String,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Form degree.
    #[arg(long)]
    p: usize,
    /// Cutoff; defaults to 50xPI2 for two flat spaces and 60 for two spheres.
    #[arg(long)]
    cutoff: Option<String>,
    /// Ignore the zero eigenvalue on both sides.
    #[arg(long)]
    exclude_zero: bool,
}

#[derive(Args)]
struct LengthsArgs {
    #[arg(long)]
    space: PathBuf,
    /// Length cutoff (rational) for displacement spectra.
    #[arg(long, default_value = "8")]
    max: String,
}

#[derive(Args)]
struct FixedSetArgs {
    #[arg(long)]
    space: PathBuf,
}

#[derive(Args)]
struct HeatArgs {
    #[arg(long)]
    space: PathBuf,
    /// Form degree.
    #[arg(long)]
    p: usize,
    /// Times for the truncated heat trace (CSV rows `t,value`).
    #[arg(long = "t", num_args = 1..)]
    times: Vec<f64>,
    /// Cutoff for the spectrum behind the trace.
    #[arg(long)]
    cutoff: Option<String>,
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// List the registered scenario ids.
    List,
    /// Run one scenario and print its report.
    Run(ScenarioRunArgs),
}

#[derive(Args)]
struct ScenarioRunArgs {
    id: String,
    #[arg(long)]
    cutoff: Option<String>,
    #[arg(long)]
    exclude_zero: bool,
    /// Pants parameter (also the hole count for the chain surface).
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value = "md")]
    format: String,
}

#[derive(Args)]
struct CertifyArgs {
    /// Base space descriptor (flat torus or sphere).
    #[arg(long)]
    m: PathBuf,
    /// Descriptor of the same space with the first involution.
    #[arg(long)]
    tau1: PathBuf,
    /// Descriptor of the same space with the second involution.
    #[arg(long)]
    tau2: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            // Help and version are successful exits; anything else is usage.
            use clap::error::ErrorKind;
            let _ = error.print();
            return match error.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Spectrum(args) => spectrum(args),
        Command::Compare(args) => compare(args),
        Command::Lengths(args) => lengths(args),
        Command::FixedSet(args) => fixed_set_command(args),
        Command::Heat(args) => heat(args),
        Command::Scenario(ScenarioCommand::List) => {
            for id in list_scenarios() {
                println!("{id}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scenario(ScenarioCommand::Run(args)) => scenario_run(args),
        Command::Certify(args) => certify(args),
        Command::SurfaceDot(args) => {
            let surface = isospec::hyperbolic::build_surface(args.t, args.alpha, args.gamma)?;
            print!("{}", surface.to_dot());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_space(path: &PathBuf) -> Result<SpaceDescriptor> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading descriptor {}", path.display()))?;
    parse_space(&text).with_context(|| format!("parsing descriptor {}", path.display()))
}

fn segment_of(
    space: &SpaceDescriptor,
    p: usize,
    cutoff: &Eigenvalue,
    parity: Parity,
) -> Result<SpectrumSegment> {
    match space {
        SpaceDescriptor::Flat(quotient) => match quotient.involution() {
            None => Ok(torus_p_spectrum(quotient.lattice(), p, cutoff)?),
            Some(_) => Ok(quotient_p_spectrum(quotient, p, cutoff, parity)?),
        },
        SpaceDescriptor::Sphere(quotient) => match quotient.involution() {
            None => Ok(sphere_p_spectrum(quotient.sphere(), p, cutoff)?),
            Some(_) => {
                let n = quotient.sphere().dim();
                if p != n / 2 || n % 2 != 0 {
                    bail!(
                        "spherical quotient spectra are exposed in the middle degree {} only",
                        n / 2
                    );
                }
                Ok(quotient_middle_spectrum(quotient, cutoff)?)
            }
        },
    }
}

fn spectrum(args: SpectrumArgs) -> Result<ExitCode> {
    let space = load_space(&args.space)?;
    let cutoff = parse_cutoff(&args.cutoff)?;
    let parity = parse_parity(&args.parity)?;
    let segment = segment_of(&space, args.p, &cutoff, parity)?;
    let rendered = match args.format.as_str() {
        "json" => segment_to_json(&segment),
        "csv" => segment_to_csv(&segment),
        "md" => segment_to_markdown(&segment),
        other => bail!("unknown format {other:?}; expected json, csv, or md"),
    };
    print!("{rendered}");
    Ok(ExitCode::SUCCESS)
}

fn parse_parity(text: &str) -> Result<Parity> {
    match text {
        "invariant" => Ok(Parity::Invariant),
        "anti" | "anti-invariant" | "anti_invariant" => Ok(Parity::AntiInvariant),
        other => bail!("unknown parity {other:?}; expected invariant or anti"),
    }
}

fn compare(args: CompareArgs) -> Result<ExitCode> {
    let a = load_space(&args.a)?;
    let b = load_space(&args.b)?;
    let cutoff = match &args.cutoff {
        Some(text) => parse_cutoff(text)?,
        None => match (&a, &b) {
            (SpaceDescriptor::Flat(_), SpaceDescriptor::Flat(_)) => Eigenvalue::from_pi2_int(50),
            (SpaceDescriptor::Sphere(_), SpaceDescriptor::Sphere(_)) => {
                Eigenvalue::from_plain(rational_int(60)).expect("positive")
            }
            _ => bail!("mixed space kinds require an explicit --cutoff"),
        },
    };
    let sa = segment_of(&a, args.p, &cutoff, Parity::Invariant)?;
    let sb = segment_of(&b, args.p, &cutoff, Parity::Invariant)?;
    let outcome = compare_segments(&sa, &sb, args.exclude_zero)?;
    println!("{outcome}");
    match outcome {
        ComparisonOutcome::Equal { .. } => Ok(ExitCode::SUCCESS),
        ComparisonOutcome::FirstDifference { .. } => Ok(ExitCode::from(2)),
    }
}

fn lengths(args: LengthsArgs) -> Result<ExitCode> {
    let space = load_space(&args.space)?;
    match space {
        SpaceDescriptor::Flat(quotient) => {
            let max = parse_rational(&args.max).map_err(|e| anyhow!("bad --max: {e}"))?;
            let spectrum = displacement_length_spectrum(&quotient, &max)?;
            println!("length_squared,count,length_approx");
            for (value, count) in spectrum {
                println!(
                    "{},{},{:.9}",
                    format_rational(&value),
                    count,
                    rational_to_f64(&value).sqrt()
                );
            }
        }
        SpaceDescriptor::Sphere(quotient) => {
            let rho = quotient.sphere().radius_squared();
            let length = match quotient.kind() {
                QuotientKind::Sphere => shortest_closed_geodesic(GeodesicSpace::Sphere, rho),
                QuotientKind::Projective => {
                    shortest_closed_geodesic(GeodesicSpace::Projective, rho)
                }
                other => bail!(
                    "shortest closed geodesics are exposed for spheres and projective \
                     spaces only, not {other:?}"
                ),
            };
            println!("shortest closed geodesic: {length} = {:.9}", length.approx());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn fixed_set_command(args: FixedSetArgs) -> Result<ExitCode> {
    let space = load_space(&args.space)?;
    match space {
        SpaceDescriptor::Flat(quotient) => {
            let summary = fixed_set(&quotient)?;
            let volume = summary
                .total_volume_squared
                .as_ref()
                .map(format_rational)
                .unwrap_or_else(|| "0/1".to_owned());
            println!(
                "{}",
                serde_json::json!({
                    "dimension": summary.dimension,
                    "component_count": summary.component_count,
                    "isolated_point_count": summary.isolated_point_count,
                    "total_volume_squared": volume,
                })
            );
        }
        SpaceDescriptor::Sphere(quotient) => {
            let dimension = sphere_singular_set_dimension(&quotient)?;
            println!(
                "{}",
                serde_json::json!({
                    "kind": format!("{:?}", quotient.kind()),
                    "singular_set_dimension": dimension,
                })
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn heat(args: HeatArgs) -> Result<ExitCode> {
    let space = load_space(&args.space)?;
    let heat_space = match &space {
        SpaceDescriptor::Flat(quotient) => HeatSpace::Flat(quotient),
        SpaceDescriptor::Sphere(quotient) => HeatSpace::Sphere(quotient),
    };
    let term = volume_term(&heat_space, args.p)?;
    println!(
        "# a0 = {} (volume {}), c({}) = {}{}",
        term.a0,
        term.volume,
        args.p,
        term.c_coefficient,
        term.boundary_volume
            .as_ref()
            .map(|b| format!(", boundary volume {b}"))
            .unwrap_or_default()
    );
    if !args.times.is_empty() {
        let cutoff = match &args.cutoff {
            Some(text) => parse_cutoff(text)?,
            None => match &space {
                SpaceDescriptor::Flat(_) => Eigenvalue::from_pi2_int(50),
                SpaceDescriptor::Sphere(_) => {
                    Eigenvalue::from_plain(rational_int(60)).expect("positive")
                }
            },
        };
        let segment = segment_of(&space, args.p, &cutoff, Parity::Invariant)?;
        println!("t,partial_trace");
        for &t in &args.times {
            let (value, _) = truncated_heat_trace(&segment, t)?;
            println!("{t},{value:.12}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn scenario_run(args: ScenarioRunArgs) -> Result<ExitCode> {
    let options = ScenarioOptions {
        cutoff: args.cutoff.as_deref().map(parse_cutoff).transpose()?,
        exclude_zero: args.exclude_zero,
        t: args.t,
        alpha: args.alpha,
        gamma: args.gamma,
    };
    let report = match run_scenario(&args.id, &options) {
        Ok(report) => report,
        Err(ScenarioError::UnknownScenario(id)) => {
            eprintln!("unknown scenario {id:?}; try `isospec scenario list`");
            return Ok(ExitCode::from(1));
        }
        Err(other) => return Err(other.into()),
    };
    match args.format.as_str() {
        "json" => println!("{}", report.to_json()),
        "md" => print!("{}", report.to_markdown()),
        other => bail!("unknown format {other:?}; expected json or md"),
    }
    match report.verdict {
        Verdict::Confirmed | Verdict::ConfirmedWithCaveat(_) => Ok(ExitCode::SUCCESS),
        Verdict::Refuted(_) => Ok(ExitCode::from(3)),
    }
}

fn certify(args: CertifyArgs) -> Result<ExitCode> {
    let base = load_space(&args.m)?;
    let first = load_space(&args.tau1)?;
    let second = load_space(&args.tau2)?;
    let result = match (&base, &first, &second) {
        (
            SpaceDescriptor::Flat(base),
            SpaceDescriptor::Flat(first),
            SpaceDescriptor::Flat(second),
        ) => {
            check_same_flat_base(base, first)?;
            check_same_flat_base(base, second)?;
            let tau1 = first
                .involution()
                .ok_or_else(|| anyhow!("--tau1 descriptor carries no involution"))?;
            let tau2 = second
                .involution()
                .ok_or_else(|| anyhow!("--tau2 descriptor carries no involution"))?;
            certificate_corollary_1_4(&CertificateSubject::Flat {
                lattice: base.lattice(),
                tau1,
                tau2,
            })
        }
        (
            SpaceDescriptor::Sphere(base),
            SpaceDescriptor::Sphere(first),
            SpaceDescriptor::Sphere(second),
        ) => {
            check_same_sphere_base(base, first)?;
            check_same_sphere_base(base, second)?;
            let tau1 = first
                .involution()
                .ok_or_else(|| anyhow!("--tau1 descriptor carries no involution"))?;
            let tau2 = second
                .involution()
                .ok_or_else(|| anyhow!("--tau2 descriptor carries no involution"))?;
            certificate_corollary_1_4(&CertificateSubject::Sphere {
                sphere: base.sphere(),
                tau1,
                tau2,
            })
        }
        _ => bail!("--m, --tau1, --tau2 must all be flat or all be spherical"),
    };
    match result {
        Ok(certificate) => {
            println!("{}", serde_json::to_string_pretty(&certificate)?);
            Ok(ExitCode::SUCCESS)
        }
        Err(ScenarioError::HypothesisFailed(message)) => {
            eprintln!("hypothesis failed: {message}");
            Ok(ExitCode::from(3))
        }
        Err(other) => Err(other.into()),
    }
}

fn check_same_flat_base(base: &FlatQuotient, other: &FlatQuotient) -> Result<()> {
    if base.lattice() != other.lattice() {
        bail!("involution descriptors must share the base lattice of --m");
    }
    Ok(())
}

fn check_same_sphere_base(base: &SphericalQuotient, other: &SphericalQuotient) -> Result<()> {
    if base.sphere() != other.sphere() {
        bail!("involution descriptors must share the base sphere of --m");
    }
    Ok(())
}
