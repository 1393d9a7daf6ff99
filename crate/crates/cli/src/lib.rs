//! Batch front end: `encode`, `verify`, `depth`, `simulate` and `sweep`.
//!
//! Every command returns a [`Report`]: the text for stdout plus named files
//! for `--out`. Nothing depends on wall-clock time or hash order, so the same
//! arguments always produce the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use auxferm::circuit::{full_depth_report, DepthParams, DepthReport};
use auxferm::encoder::{encode_hamiltonian, encode_model, physical_layer_sums, EncodedHamiltonian};
use auxferm::format::sig12;
use auxferm::models::{parse_model, FermionModel, GeneratorSpec};
use auxferm::sim::{
    apply_aux_with_signs, commutator_lambda, commutator_lambda_encoded, embed_physical,
    equivalence_check, fit_loglog_slope, prepare_aux_measured, prepare_aux_oracle,
    stabilizer_expectations, trotter_error_curve, CheckLine, EquivalenceOptions, SignRecord,
    StateVector, EXP_CAP, JOINT_CAP, LAMBDA_CAP,
};
use auxferm::{Edge, LayerAssignment, ModeLayout, PauliSum};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Tolerance for stabilizer eigenvalues and evolution fidelities.
pub const FIDELITY_TOL: f64 = 1e-10;
/// Tolerance for drift, trace distance and commutator-norm differences.
pub const INVARIANCE_TOL: f64 = 1e-8;
/// Total time of the Trotter-scaling check.
pub const SCALING_TIME: f64 = 1.0;
/// Step counts of the Trotter-scaling check.
pub const SCALING_STEPS: [usize; 5] = [4, 8, 16, 32, 64];
pub const SLOPE_TOL: f64 = 0.2;
/// Below this the product formula is exact and no slope is fitted.
const EXACT_TROTTER: f64 = 1e-12;
/// Budget `2 N + joint qubits` for the code-space commutator norm.
const LAMBDA_BUDGET: usize = 28;

#[derive(Debug, Parser)]
#[command(name = "auxferm", version, about = "Encode, verify and cost sparse fermion models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a model: summary, weight audit and Pauli dump.
    Encode(EncodeArgs),
    /// Run the statevector checks and exit non-zero on any failure.
    Verify(VerifyArgs),
    /// Depth and ancilla report for preparation plus M Trotter steps.
    Depth(DepthArgs),
    /// Step-by-step encoded evolution against the physical evolution.
    Simulate(SimArgs),
    /// Depth report across sizes for one generator.
    Sweep(SweepArgs),
}

/// Exactly one model source.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// Model file.
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
    /// Generator, e.g. `fh:N=8,d=3,seed=1,t=1,V=2`.
    #[arg(long, value_name = "KIND:N=..,d=..,seed=..")]
    pub gen: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, default_value_t = 0.1)]
    pub tau: f64,
    #[arg(long, default_value_t = 5)]
    pub steps: usize,
    /// Seed of the random physical state and the measured preparation.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = JOINT_CAP)]
    pub cap_qubits: usize,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    /// Flip the sign of one stabilizer in the Hamiltonian only, e.g. `1,2`.
    #[arg(long, value_name = "I,J")]
    pub corrupt_sign: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct DepthArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, default_value_t = 5)]
    pub steps: usize,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_name = "KIND:N=..,d=..,seed=..")]
    pub gen: String,
    #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub steps: usize,
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] auxferm::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

impl CliError {
    /// 2 for unreadable or malformed input, 3 for infeasible instances,
    /// 4 for size caps, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        use auxferm::Error as E;
        match self {
            CliError::Read { .. } => 2,
            CliError::Write { .. } => 1,
            CliError::Core(e) => match e {
                E::Parse { .. }
                | E::InvalidArgument(_)
                | E::InvalidEdge(..)
                | E::InvalidHyperedge(_)
                | E::SiteOutOfRange { .. } => 2,
                E::Infeasible(_)
                | E::RejectionBudget(_)
                | E::MissingStabilizer(_)
                | E::TooFewRegisters { .. } => 3,
                E::CapExceeded { .. } => 4,
                _ => 1,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Output of one command.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub stdout: String,
    /// File name to contents, written under `--out`.
    pub files: BTreeMap<String, String>,
    pub passed: bool,
}

impl Report {
    fn new() -> Self {
        Report {
            passed: true,
            ..Report::default()
        }
    }

    /// Writes every file into `dir`, creating it if needed.
    pub fn write_files(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.to_path_buf(),
            source,
        })?;
        for (name, body) in &self.files {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|source| CliError::Write { path, source })?;
        }
        Ok(())
    }
}

impl Command {
    pub fn out_dir(&self) -> Option<&Path> {
        match self {
            Command::Encode(a) => a.out.as_deref(),
            Command::Verify(a) => a.sim.out.as_deref(),
            Command::Depth(a) => a.out.as_deref(),
            Command::Simulate(a) => a.out.as_deref(),
            Command::Sweep(a) => a.out.as_deref(),
        }
    }
}

/// Runs a command without touching the file system beyond reading input.
pub fn run(command: &Command) -> Result<Report> {
    match command {
        Command::Encode(a) => cmd_encode(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Depth(a) => cmd_depth(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

pub fn load_model(input: &Input) -> Result<FermionModel> {
    match (&input.model, &input.gen) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Read {
                path: path.clone(),
                source,
            })?;
            Ok(parse_model(&text)?)
        }
        (None, Some(spec)) => Ok(spec.parse::<GeneratorSpec>()?.generate()?),
        _ => Err(invalid("exactly one of --model and --gen is required")),
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Core(auxferm::Error::InvalidArgument(msg.into()))
}

/// `chi=.. nu=.. max_w_<kind>=..` in term-kind order.
pub fn summary_line(assignment: &LayerAssignment, encoded: &EncodedHamiltonian) -> String {
    let mut s = format!("chi={} nu={}", assignment.chi(), assignment.nu());
    for (kind, w) in encoded.max_weight_by_kind() {
        write!(s, " max_w_{}={w}", kind.tag()).expect("write to String");
    }
    s
}

pub fn cmd_encode(args: &EncodeArgs) -> Result<Report> {
    let model = load_model(&args.input)?;
    let (layout, assignment, encoded) = encode_model(&model)?;
    let summary = format!(
        "{}\nsites={} qubits={} terms={} layers={}\n",
        summary_line(&assignment, &encoded),
        layout.n_sites,
        layout.n_qubits(),
        encoded.terms.len(),
        encoded.n_layers()
    );
    let audit = encoded.audit_table();
    let dump = encoded.dump();
    let mut r = Report::new();
    r.stdout = format!("{summary}\n{audit}\n{dump}");
    r.files.insert("summary.txt".into(), summary);
    r.files.insert("audit.txt".into(), audit);
    r.files.insert("encoded.txt".into(), dump);
    Ok(r)
}

/// Encoded instance with its prepared reference signs.
struct Prepared {
    model: FermionModel,
    layout: ModeLayout,
    assignment: LayerAssignment,
    record: SignRecord,
    encoded: EncodedHamiltonian,
    psi_phys: StateVector,
}

impl Prepared {
    fn new(args: &SimArgs) -> Result<Self> {
        if args.cap_qubits > JOINT_CAP {
            return Err(invalid(format!(
                "--cap-qubits {} exceeds the engine limit {JOINT_CAP}",
                args.cap_qubits
            )));
        }
        if !args.tau.is_finite() {
            return Err(invalid(format!("--tau {}", args.tau)));
        }
        let model = load_model(&args.input)?;
        let (layout, assignment, _) = encode_model(&model)?;
        let qubits = layout.n_qubits();
        if qubits > args.cap_qubits {
            return Err(auxferm::Error::CapExceeded {
                qubits,
                cap: args.cap_qubits,
            }
            .into());
        }
        let (_, record) = prepare_aux_oracle(&layout, &assignment)?;
        let encoded = encode_hamiltonian(&model, &layout, &record.apply_to(&assignment)?)?;
        let psi_phys = StateVector::random(layout.n_sites, &mut ChaCha8Rng::seed_from_u64(args.seed))?;
        Ok(Prepared {
            model,
            layout,
            assignment,
            record,
            encoded,
            psi_phys,
        })
    }

    fn encode_state(&self, phys: &StateVector) -> Result<StateVector> {
        Ok(apply_aux_with_signs(
            &embed_physical(phys, &self.layout)?,
            &self.layout,
            &self.assignment,
            &self.record.signs,
        )?)
    }

    fn signed(&self) -> Result<LayerAssignment> {
        Ok(self.record.apply_to(&self.assignment)?)
    }

    fn physical_ops(&self) -> Result<Vec<PauliSum>> {
        let phys = ModeLayout::new(self.layout.n_sites, 0);
        Ok(self
            .model
            .terms
            .iter()
            .map(|t| t.physical_operator(&phys))
            .collect::<auxferm::Result<_>>()?)
    }
}

fn min_expectation(values: &[(Edge, f64)]) -> f64 {
    values.iter().map(|v| v.1).fold(1.0, f64::min)
}

fn parse_edge(s: &str) -> Result<Edge> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| invalid(format!("edge {s:?}: expected I,J")))?;
    let int = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| invalid(format!("edge {s:?}: {t:?} is not a site")))
    };
    Ok(Edge::new(int(a)?, int(b)?)?)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Report> {
    let p = Prepared::new(&args.sim)?;
    let corrupt_sign = args.corrupt_sign.as_deref().map(parse_edge).transpose()?;
    if let Some(e) = corrupt_sign {
        if !p.assignment.edges().any(|x| x == e) {
            return Err(invalid(format!("--corrupt-sign {e} is not an interaction edge")));
        }
    }
    let mut lines: Vec<String> = Vec::new();
    let mut checks: Vec<CheckLine> = Vec::new();

    let (oracle, record) = prepare_aux_oracle(&p.layout, &p.assignment)?;
    let signed = record.apply_to(&p.assignment)?;
    checks.push(CheckLine::at_least(
        "stabilizer_eigenvalue_oracle",
        min_expectation(&stabilizer_expectations(&oracle, &p.layout, &signed)?),
        1.0 - FIDELITY_TOL,
    ));
    let (measured, record) = prepare_aux_measured(&p.layout, &p.assignment, args.sim.seed)?;
    checks.push(CheckLine::at_least(
        "stabilizer_eigenvalue_measured",
        min_expectation(&stabilizer_expectations(
            &measured,
            &p.layout,
            &record.apply_to(&p.assignment)?,
        )?),
        1.0 - FIDELITY_TOL,
    ));

    let options = EquivalenceOptions {
        tau: args.sim.tau,
        steps: args.sim.steps,
        corrupt_sign,
        fidelity_tol: FIDELITY_TOL,
        invariance_tol: INVARIANCE_TOL,
    };
    let eq = equivalence_check(&p.model, &p.layout, &p.assignment, &p.psi_phys, &options)?;
    checks.extend(eq.lines());
    let mut per_term = String::from("term,kind,fidelity\n");
    for (i, kind, f) in &eq.per_term {
        writeln!(per_term, "{i},{kind},{}", sig12(*f)).expect("write to String");
    }

    let n = p.layout.n_sites;
    let q = p.layout.n_qubits();
    let phys_layers = physical_layer_sums(&p.model.terms, &p.encoded, &ModeLayout::new(n, 0))?;
    if n <= LAMBDA_CAP && 2 * n + q <= LAMBDA_BUDGET {
        let physical = commutator_lambda(&phys_layers, n)?;
        let encoded =
            commutator_lambda_encoded(&p.encoded.layer_sums(), &p.layout, &p.assignment, &p.record.signs)?;
        lines.push(format!(
            "INFO lambda physical={} encoded={}",
            sig12(physical),
            sig12(encoded)
        ));
        checks.push(CheckLine::at_most(
            "lambda_difference",
            (physical - encoded).abs(),
            INVARIANCE_TOL,
        ));
    } else {
        lines.push(format!("SKIP lambda_difference sites={n} qubits={q}"));
    }

    let mut curve_csv = String::from("M,tau,error\n");
    if q <= EXP_CAP {
        let psi = p.encode_state(&p.psi_phys)?;
        let curve = trotter_error_curve(&p.encoded.layer_sums(), SCALING_TIME, &SCALING_STEPS, &psi)?;
        for (m, tau, err) in &curve {
            writeln!(curve_csv, "{m},{},{}", sig12(*tau), sig12(*err)).expect("write to String");
        }
        let worst = curve.iter().map(|c| c.2).fold(0.0, f64::max);
        if worst < EXACT_TROTTER {
            checks.push(CheckLine::at_most("trotter_error_commuting", worst, FIDELITY_TOL));
        } else {
            let points: Vec<(f64, f64)> = curve.iter().map(|&(m, _, e)| (m as f64, e)).collect();
            let slope = fit_loglog_slope(&points)?;
            lines.push(format!("INFO trotter_slope {}", sig12(slope)));
            checks.push(CheckLine::at_most("trotter_slope_deviation", (slope + 1.0).abs(), SLOPE_TOL));
        }
    } else {
        lines.push(format!("SKIP trotter_slope_deviation qubits={q}"));
    }

    let mut r = Report::new();
    r.passed = checks.iter().all(|c| c.pass);
    let mut text = String::new();
    for c in &checks {
        writeln!(text, "{c}").expect("write to String");
    }
    for l in &lines {
        writeln!(text, "{l}").expect("write to String");
    }
    writeln!(text, "RESULT {}", if r.passed { "PASS" } else { "FAIL" }).expect("write to String");
    r.stdout = text.clone();
    r.files.insert("report.txt".into(), text);
    r.files.insert("per_term.csv".into(), per_term);
    r.files.insert("trotter_error.csv".into(), curve_csv);
    Ok(r)
}

pub fn cmd_simulate(args: &SimArgs) -> Result<Report> {
    let p = Prepared::new(args)?;
    let signed = p.signed()?;
    let physical_ops = p.physical_ops()?;
    let total = p.encoded.total();
    let mut joint = p.encode_state(&p.psi_phys)?;
    let mut phys = p.psi_phys.clone();
    let mut csv = String::from("step,time,fidelity,min_stabilizer,energy\n");
    let mut row = |step: usize, joint: &StateVector, phys: &StateVector| -> Result<()> {
        let fidelity = joint.fidelity(&p.encode_state(phys)?)?;
        let stab = min_expectation(&stabilizer_expectations(joint, &p.layout, &signed)?);
        let energy = joint.inner(&joint.apply_pauli_sum(&total)?)?.re;
        writeln!(
            csv,
            "{step},{},{},{},{}",
            sig12(step as f64 * args.tau),
            sig12(fidelity),
            sig12(stab),
            sig12(energy)
        )
        .expect("write to String");
        Ok(())
    };
    row(0, &joint, &phys)?;
    for step in 1..=args.steps {
        for layer in p.encoded.layer_ids() {
            for t in p.encoded.layer_terms(layer) {
                joint.apply_exp_sum(&t.operator, args.tau)?;
                phys.apply_exp_sum(&physical_ops[t.index], args.tau)?;
            }
        }
        row(step, &joint, &phys)?;
    }
    let mut r = Report::new();
    r.stdout = csv.clone();
    r.files.insert("trajectory.csv".into(), csv);
    Ok(r)
}

pub fn cmd_depth(args: &DepthArgs) -> Result<Report> {
    let model = load_model(&args.input)?;
    let (_, assignment, encoded) = encode_model(&model)?;
    let report = full_depth_report(&encoded, &assignment, args.steps, DepthParams::default())?;
    let mut r = Report::new();
    r.stdout = report.render_table();
    r.files.insert("depth_table.txt".into(), r.stdout.clone());
    r.files.insert("depth.csv".into(), report.render_csv());
    Ok(r)
}

/// Least-squares `(intercept, slope)` of `y` against `x`.
fn affine_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    (my - slope * mx, slope)
}

/// Summary lines for a sweep: per-step spread and the prep fit in `log2 N`.
pub fn sweep_fit(reports: &[DepthReport]) -> String {
    let mut s = String::new();
    let steps: Vec<usize> = reports.iter().map(|r| r.per_step_depth).collect();
    let (lo, hi) = (
        steps.iter().copied().min().unwrap_or(0),
        steps.iter().copied().max().unwrap_or(0),
    );
    if lo == hi {
        writeln!(s, "fit per_step_depth constant={lo}").expect("write to String");
    } else {
        writeln!(s, "fit per_step_depth varies min={lo} max={hi}").expect("write to String");
    }
    let points: Vec<(f64, f64)> = reports
        .iter()
        .map(|r| ((r.n_sites as f64).log2(), r.prep_depth as f64))
        .collect();
    let (a, b) = affine_fit(&points);
    let residual = points
        .iter()
        .map(|&(x, y)| (y - a - b * x).abs())
        .fold(0.0, f64::max);
    writeln!(
        s,
        "fit prep_depth intercept={} per_log2N={} max_residual={}",
        sig12(a),
        sig12(b),
        sig12(residual)
    )
    .expect("write to String");
    s
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Report> {
    let spec: GeneratorSpec = args.gen.parse()?;
    let mut sizes = args.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.is_empty() {
        return Err(invalid("--sizes is empty"));
    }
    let mut reports = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let model = spec.with_n(n).generate()?;
        let (_, assignment, encoded) = encode_model(&model)?;
        reports.push(full_depth_report(&encoded, &assignment, args.steps, DepthParams::default())?);
    }
    let mut csv = String::from("N,nu,prep_depth,per_step_depth,ancillas,M,total_depth\n");
    for r in &reports {
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            r.n_sites,
            r.nu,
            r.prep_depth,
            r.per_step_depth,
            r.ancilla_total,
            r.steps,
            r.total_depth(r.steps)
        )
        .expect("write to String");
    }
    let fit = sweep_fit(&reports);
    let mut out = Report::new();
    out.stdout = format!("{csv}\n{fit}");
    for r in &reports {
        let table = r.render_table();
        write!(out.stdout, "\n{table}").expect("write to String");
        out.files.insert(format!("table_N{}.txt", r.n_sites), table);
    }
    out.files.insert("sweep.csv".into(), csv);
    out.files.insert("fit.txt".into(), fit);
    Ok(out)
}
