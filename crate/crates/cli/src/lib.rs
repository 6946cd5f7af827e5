//! Command-line pipelines over the parkspace library.
//!
//! One binary, subcommands per pipeline, JSON (or flat table) reports with a
//! fixed schema version. All randomness flows from `--seed`, so identical
//! argv produce byte-identical reports. Exit codes: 0 success/verified, 1
//! operational error, 2 a verification ran and found a mismatch, 64 usage.

use clap::{Args, Parser, Subcommand, ValueEnum};
use parkspace::characters;
use parkspace::group::{GroupSpec, ReflectionGroup};
use parkspace::group::element::to_wire;
use parkspace::hsop;
use parkspace::locus::{self, SolveOutcome, TrackConfig};
use parkspace::noncrossing::Noncrossing;
use parkspace::parkfn::{LabeledPark, ParkSet};
use parkspace::poly::{PolyMap, PolyMapWire};
use parkspace::report::{ExitCode, Report, Status};
use parkspace::sieve::{self, BijectionOutcome, LocusGSet};
use std::path::PathBuf;
use std::sync::OnceLock;

#[derive(Parser, Debug)]
#[command(name = "parkspace", version, about = "Noncrossing parking spaces and parking loci for reflection groups")]
pub struct Cli {
    /// Group spec: A<n> (letters), B<n>, D<n>, I2:<m>
    #[arg(long, global = true)]
    pub group: Option<String>,

    /// Fuss parameter
    #[arg(long, global = true, default_value_t = 1)]
    pub k: usize,

    /// Seed for every random choice in the run
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (default: all cores); results are identical either way
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Homotopy tracking tolerance override
    #[arg(long = "tol-track", global = true)]
    pub tol_track: Option<f64>,

    /// Point matching tolerance override
    #[arg(long = "tol-match", global = true)]
    pub tol_match: Option<f64>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group data and descriptors
    Group {
        #[command(subcommand)]
        sub: GroupCmd,
    },
    /// Noncrossing multichains
    Nc {
        #[command(subcommand)]
        sub: NcCmd,
    },
    /// Noncrossing parking functions
    Park {
        #[command(subcommand)]
        sub: ParkCmd,
    },
    /// Conjecture and numerology checks
    Verify {
        #[command(subcommand)]
        sub: VerifyCmd,
    },
    /// Equivariant map spaces
    Hsop {
        #[command(subcommand)]
        sub: HsopCmd,
    },
    /// Parking loci
    Locus {
        #[command(subcommand)]
        sub: LocusCmd,
    },
    /// Stabilizer sieve
    Sieve {
        #[command(subcommand)]
        sub: SieveCmd,
    },
    /// End-to-end conjecture pipelines
    Conjecture {
        #[command(subcommand)]
        sub: ConjectureCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Print the versioned descriptor
    Info,
}

#[derive(Subcommand, Debug)]
pub enum NcCmd {
    /// Enumerate k-multichains of NC(W)
    Enumerate,
}

#[derive(Subcommand, Debug)]
pub enum ParkCmd {
    /// Enumerate the noncrossing parking functions
    Enumerate,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Character identity for the parking action
    Weak,
    /// Cyclic sieving of multichains under rotation
    Csp,
    /// Noncrossing vs nonnesting flats per orbit (crystallographic, k = 1)
    Kreweras,
}

#[derive(Subcommand, Debug)]
pub enum HsopCmd {
    /// Dimension formula of the equivariant map space
    Dim,
    /// Brute-force basis (checked against the formula)
    Basis,
    /// Sample a random element of the space
    Sample,
}

#[derive(Subcommand, Debug)]
pub enum LocusCmd {
    /// Solve theta(x) = x and certify the locus
    Solve(LocusSolveArgs),
    /// Follow the locus along a segment between two maps
    Transport(TransportArgs),
}

#[derive(Args, Debug)]
pub struct LocusSolveArgs {
    /// Polynomial map file (JSON)
    #[arg(long)]
    pub theta: Option<PathBuf>,
    /// Use the diagonal coordinate-power map
    #[arg(long, default_value_t = false)]
    pub diagonal: bool,
}

#[derive(Args, Debug)]
pub struct TransportArgs {
    #[arg(long)]
    pub from: PathBuf,
    #[arg(long)]
    pub to: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Optional binary sidecar with per-step path coordinates
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum SieveCmd {
    /// Build an equivariant bijection between two models
    Bijection(BijectionArgs),
}

#[derive(Args, Debug)]
pub struct BijectionArgs {
    #[arg(long, value_enum)]
    pub source: Model,
    #[arg(long, value_enum)]
    pub target: Model,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
pub enum Model {
    Park,
    Labeled,
    Locus,
}

#[derive(Subcommand, Debug)]
pub enum ConjectureCmd {
    /// sample theta -> solve -> certify -> sieve against Park
    Intermediate,
}

fn log(msg: &str) {
    if std::env::var_os("PARK_LOG").is_some() {
        eprintln!("[parkspace] {msg}");
    }
}

static POOL: OnceLock<()> = OnceLock::new();

fn init_threads(n: Option<usize>) {
    POOL.get_or_init(|| parkspace::init_thread_pool(n));
}

fn require_group(cli: &Cli) -> parkspace::Result<ReflectionGroup> {
    let spec = cli
        .group
        .as_deref()
        .ok_or_else(|| parkspace::Error::config("--group is required"))?;
    ReflectionGroup::build(GroupSpec::parse(spec)?)
}

fn track_config(cli: &Cli) -> TrackConfig {
    let mut c = TrackConfig { seed: cli.seed, ..Default::default() };
    if let Some(t) = cli.tol_track {
        c.track_tol = t;
    }
    if let Some(t) = cli.tol_match {
        c.match_tol = t;
    }
    c
}

fn load_theta(path: &PathBuf) -> parkspace::Result<PolyMap> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let wire_value = if value.get("coords").is_some() {
        value
    } else if let Some(t) = value.pointer("/payload/theta") {
        t.clone()
    } else {
        return Err(parkspace::Error::invalid("file holds no polynomial map"));
    };
    let wire: PolyMapWire = serde_json::from_value(wire_value)?;
    if wire.coords.len() != wire.nvars
        || wire.coords.iter().flatten().any(|t| t.e.len() != wire.nvars)
    {
        return Err(parkspace::Error::invalid("malformed polynomial map: exponent shape"));
    }
    Ok(PolyMap::from_wire(&wire))
}

/// Run a parsed command; returns the exit code and the rendered report.
pub fn run(cli: &Cli) -> (ExitCode, String) {
    init_threads(cli.threads);
    match dispatch(cli) {
        Ok((code, report)) => {
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Table => report.to_table(),
            };
            (code, text)
        }
        Err(e) => (ExitCode::Operational, format!("error: {e}")),
    }
}

/// Entry point used by the binary: handles --out and returns the process
/// exit code.
pub fn run_to_completion(cli: &Cli) -> i32 {
    let (code, text) = run(cli);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text.as_bytes()) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::Operational.code();
            }
        }
        None => println!("{text}"),
    }
    code.code()
}

fn dispatch(cli: &Cli) -> parkspace::Result<(ExitCode, Report)> {
    match &cli.command {
        Command::Group { sub: GroupCmd::Info } => {
            let g = require_group(cli)?;
            let payload = serde_json::to_value(g.descriptor())?;
            let report =
                Report::new("group info", Status::Info, payload).with_group(&g.spec.to_string());
            Ok((ExitCode::Success, report))
        }
        Command::Nc { sub: NcCmd::Enumerate } => {
            let g = require_group(cli)?;
            log(&format!("enumerating NC^{}({})", cli.k, g.spec));
            let nc = Noncrossing::new(&g);
            let chains = nc.multichains(cli.k);
            let formula = characters::fuss_catalan(&g, cli.k)?;
            let wires: Vec<Vec<_>> = chains
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|&i| to_wire(g.elem(nc.elements[i as usize]), g.is_type_a()))
                        .collect()
                })
                .collect();
            let matches = chains.len() as u64 == formula;
            let payload = serde_json::json!({
                "count": chains.len(),
                "fuss_catalan": formula,
                "count_matches_formula": matches,
                "chains": wires,
            });
            let status = if matches { Status::Pass } else { Status::Mismatch };
            let code = if matches { ExitCode::Success } else { ExitCode::ConjectureMismatch };
            let report = Report::new("nc enumerate", status, payload)
                .with_group(&g.spec.to_string())
                .with_k(cli.k);
            Ok((code, report))
        }
        Command::Park { sub: ParkCmd::Enumerate } => {
            let g = require_group(cli)?;
            log(&format!("enumerating Park({}, k={})", g.spec, cli.k));
            let park = ParkSet::new(&g, cli.k)?;
            let expected = ((park.kh + 1) as u64).pow(g.rank as u32);
            let classes: Vec<serde_json::Value> = park
                .elements
                .iter()
                .map(|&(rep, ci)| {
                    let chain = &park.chains[ci as usize];
                    serde_json::json!({
                        "rep": to_wire(g.elem(rep), g.is_type_a()),
                        "chain": chain
                            .iter()
                            .map(|&i| g.flat(park.nc.flat_of[i as usize]).key.wire())
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            let matches = park.len() as u64 == expected;
            // the labeled model rides along for the symmetric groups while
            // its enumeration stays desk-cheap
            let labeled = if g.is_type_a() && cli.k * g.spec.n <= 9 {
                let lp = LabeledPark::new(&g, cli.k)?;
                let items: Vec<_> = (0..lp.len() as u32).map(|x| lp.wire(x)).collect();
                serde_json::json!({ "count": lp.len(), "elements": items })
            } else {
                serde_json::Value::Null
            };
            let payload = serde_json::json!({
                "count": park.len(),
                "expected": expected,
                "count_matches_formula": matches,
                "classes": classes,
                "labeled_model": labeled,
            });
            let status = if matches { Status::Pass } else { Status::Mismatch };
            let code = if matches { ExitCode::Success } else { ExitCode::ConjectureMismatch };
            let report = Report::new("park enumerate", status, payload)
                .with_group(&g.spec.to_string())
                .with_k(cli.k);
            Ok((code, report))
        }
        Command::Verify { sub } => {
            let g = require_group(cli)?;
            let (name, pass, payload) = match sub {
                VerifyCmd::Weak => {
                    log("verifying the character identity");
                    let rep = characters::verify_weak(&g, cli.k)?;
                    ("verify weak", rep.pass, serde_json::to_value(&rep)?)
                }
                VerifyCmd::Csp => {
                    let rep = characters::verify_csp(&g, cli.k)?;
                    ("verify csp", rep.pass, serde_json::to_value(&rep)?)
                }
                VerifyCmd::Kreweras => {
                    let rep = characters::verify_kreweras(&g)?;
                    ("verify kreweras", rep.pass, serde_json::to_value(&rep)?)
                }
            };
            let status = if pass { Status::Pass } else { Status::Mismatch };
            let code = if pass { ExitCode::Success } else { ExitCode::ConjectureMismatch };
            let report =
                Report::new(name, status, payload).with_group(&g.spec.to_string()).with_k(cli.k);
            Ok((code, report))
        }
        Command::Hsop { sub } => {
            let g = require_group(cli)?;
            match sub {
                HsopCmd::Dim => {
                    let dim = hsop::hom_dim_formula(&g, cli.k);
                    let payload = serde_json::json!({ "dim": dim });
                    let report = Report::new("hsop dim", Status::Info, payload)
                        .with_group(&g.spec.to_string())
                        .with_k(cli.k);
                    Ok((ExitCode::Success, report))
                }
                HsopCmd::Basis => {
                    let space = hsop::hom_basis(&g, cli.k)?;
                    let payload = serde_json::json!({
                        "dim": space.dim,
                        "formula": hsop::hom_dim_formula(&g, cli.k),
                        "degree": space.degree,
                        "basis": space.basis.iter().map(|b| b.to_wire()).collect::<Vec<_>>(),
                    });
                    let report = Report::new("hsop basis", Status::Pass, payload)
                        .with_group(&g.spec.to_string())
                        .with_k(cli.k);
                    Ok((ExitCode::Success, report))
                }
                HsopCmd::Sample => {
                    let space = hsop::hom_basis(&g, cli.k)?;
                    let theta = hsop::sample_theta(&space, cli.seed);
                    let resid = hsop::equivariance_residual(&g, &theta, 32, cli.seed ^ 1);
                    let payload = serde_json::json!({
                        "dim": space.dim,
                        "equivariance_residual": resid,
                        "theta": theta.to_wire(),
                    });
                    let report = Report::new("hsop sample", Status::Info, payload)
                        .with_group(&g.spec.to_string())
                        .with_k(cli.k)
                        .with_seed(cli.seed);
                    Ok((ExitCode::Success, report))
                }
            }
        }
        Command::Locus { sub } => {
            let g = require_group(cli)?;
            let config = track_config(cli);
            match sub {
                LocusCmd::Solve(args) => {
                    let outcome = if args.diagonal {
                        locus::solve_diagonal(&g, cli.k, &config)?
                    } else if let Some(path) = &args.theta {
                        let theta = load_theta(path)?;
                        locus::solve_homotopy(&g, &theta, cli.k, &config)?
                    } else {
                        log("no theta given; sampling from the equivariant space");
                        let space = hsop::hom_basis(&g, cli.k)?;
                        let theta = hsop::sample_theta(&space, cli.seed);
                        locus::solve_homotopy(&g, &theta, cli.k, &config)?
                    };
                    let (status, code, payload) = match outcome {
                        SolveOutcome::Certified(sol) => {
                            (Status::Pass, ExitCode::Success, serde_json::to_value(&sol)?)
                        }
                        SolveOutcome::Failed(f) => {
                            (Status::Mismatch, ExitCode::ConjectureMismatch, serde_json::to_value(&f)?)
                        }
                    };
                    let report = Report::new("locus solve", status, payload)
                        .with_group(&g.spec.to_string())
                        .with_k(cli.k)
                        .with_seed(cli.seed);
                    Ok((code, report))
                }
                LocusCmd::Transport(args) => {
                    let theta0 = load_theta(&args.from)?;
                    let theta1 = load_theta(&args.to)?;
                    let space = hsop::hom_basis(&g, cli.k)?;
                    let s0 = locus::solve_homotopy(&g, &theta0, cli.k, &config)?;
                    let s1 = locus::solve_homotopy(&g, &theta1, cli.k, &config)?;
                    let (SolveOutcome::Certified(s0), SolveOutcome::Certified(s1)) = (s0, s1)
                    else {
                        let report = Report::new(
                            "locus transport",
                            Status::Mismatch,
                            serde_json::json!({"reason": "an endpoint locus failed certification"}),
                        )
                        .with_group(&g.spec.to_string())
                        .with_k(cli.k)
                        .with_seed(cli.seed);
                        return Ok((ExitCode::ConjectureMismatch, report));
                    };
                    let out = locus::transport_action(
                        &g, &theta0, &s0, &theta1, &s1, args.steps, &space, &config,
                    )?;
                    if let Some(path) = &args.trace_out {
                        locus::write_trace_sidecar(path, &out.traces)?;
                    }
                    let status = if out.pass { Status::Pass } else { Status::Mismatch };
                    let code =
                        if out.pass { ExitCode::Success } else { ExitCode::ConjectureMismatch };
                    let payload = serde_json::to_value(&out)?;
                    let report = Report::new("locus transport", status, payload)
                        .with_group(&g.spec.to_string())
                        .with_k(cli.k)
                        .with_seed(cli.seed);
                    Ok((code, report))
                }
            }
        }
        Command::Sieve { sub: SieveCmd::Bijection(args) } => {
            let g = require_group(cli)?;
            let config = track_config(cli);
            log(&format!("sieve bijection {:?} -> {:?}", args.source, args.target));
            // build each side; the locus side samples theta from the seed
            let locus_sol = if args.source == Model::Locus || args.target == Model::Locus {
                let space = hsop::hom_basis(&g, cli.k)?;
                let theta = hsop::sample_theta(&space, cli.seed);
                match locus::solve_homotopy(&g, &theta, cli.k, &config)? {
                    SolveOutcome::Certified(s) => Some(s),
                    SolveOutcome::Failed(f) => {
                        let report = Report::new(
                            "sieve bijection",
                            Status::Mismatch,
                            serde_json::to_value(&f)?,
                        )
                        .with_group(&g.spec.to_string())
                        .with_k(cli.k)
                        .with_seed(cli.seed);
                        return Ok((ExitCode::ConjectureMismatch, report));
                    }
                }
            } else {
                None
            };
            enum Side<'g> {
                Park(ParkSet<'g>),
                Labeled(LabeledPark<'g>),
                Locus(LocusGSet<'g>),
            }
            impl<'g> Side<'g> {
                fn as_wz(&self) -> &dyn sieve::WzSet {
                    match self {
                        Side::Park(s) => s,
                        Side::Labeled(s) => s,
                        Side::Locus(s) => s,
                    }
                }
            }
            let make = |m: Model| -> parkspace::Result<Side> {
                Ok(match m {
                    Model::Park => Side::Park(ParkSet::new(&g, cli.k)?),
                    Model::Labeled => Side::Labeled(LabeledPark::new(&g, cli.k)?),
                    Model::Locus => Side::Locus(LocusGSet {
                        group: &g,
                        sol: locus_sol.as_ref().expect("locus solution built above"),
                    }),
                })
            };
            let source = make(args.source)?;
            let target = make(args.target)?;
            let outcome = sieve::build_equivariant_bijection(source.as_wz(), target.as_wz())?;
            let (status, code, pass) = match &outcome {
                BijectionOutcome::Built(b) if b.verified => {
                    (Status::Pass, ExitCode::Success, true)
                }
                _ => (Status::Mismatch, ExitCode::ConjectureMismatch, false),
            };
            let payload = serde_json::json!({
                "source": format!("{:?}", args.source),
                "target": format!("{:?}", args.target),
                "pass": pass,
                "result": serde_json::to_value(&outcome)?,
            });
            let report = Report::new("sieve bijection", status, payload)
                .with_group(&g.spec.to_string())
                .with_k(cli.k)
                .with_seed(cli.seed);
            Ok((code, report))
        }
        Command::Conjecture { sub: ConjectureCmd::Intermediate } => {
            let g = require_group(cli)?;
            let config = track_config(cli);
            log("sampling theta and solving the locus");
            let space = hsop::hom_basis(&g, cli.k)?;
            let theta = hsop::sample_theta(&space, cli.seed);
            let sol = match locus::solve_homotopy(&g, &theta, cli.k, &config)? {
                SolveOutcome::Certified(s) => s,
                SolveOutcome::Failed(f) => {
                    let report = Report::new(
                        "conjecture intermediate",
                        Status::Mismatch,
                        serde_json::json!({
                            "stage": "locus certification",
                            "failure": serde_json::to_value(&f)?,
                        }),
                    )
                    .with_group(&g.spec.to_string())
                    .with_k(cli.k)
                    .with_seed(cli.seed);
                    return Ok((ExitCode::ConjectureMismatch, report));
                }
            };
            log("running the stabilizer sieve against Park");
            let park = ParkSet::new(&g, cli.k)?;
            let lset = LocusGSet { group: &g, sol: &sol };
            let outcome = sieve::build_equivariant_bijection(&park, &lset)?;
            let (status, code, pass) = match &outcome {
                BijectionOutcome::Built(b) if b.verified => {
                    (Status::Pass, ExitCode::Success, true)
                }
                _ => (Status::Mismatch, ExitCode::ConjectureMismatch, false),
            };
            let payload = serde_json::json!({
                "theta_ref": sol.theta_ref,
                "hom_space_dim": space.dim,
                "locus": {
                    "points": sol.points.len(),
                    "min_separation": sol.min_separation,
                    "worst_residual": sol.points.iter().map(|p| p.newton_residual).fold(0.0, f64::max),
                    "worst_jacobian_sv": sol.points.iter().map(|p| p.jacobian_min_sv).fold(f64::INFINITY, f64::min),
                },
                "park_size": park.len(),
                "pass": pass,
                "bijection": serde_json::to_value(&outcome)?,
            });
            let report = Report::new("conjecture intermediate", status, payload)
                .with_group(&g.spec.to_string())
                .with_k(cli.k)
                .with_seed(cli.seed);
            Ok((code, report))
        }
    }
}

