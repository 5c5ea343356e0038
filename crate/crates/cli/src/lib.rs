//! `gptw`: every workbench analysis as a subcommand printing JSON.
//!
//! Exact quantities are printed as `"n/d"` strings. Floating-point outputs
//! (Bloch and quantum CHSH) carry `"inexact": true`. Input errors exit with
//! status 2 and a JSON object `{"error": {"kind", "message"}}`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use gpt_workbench::boxworld::{
    chsh_max, classify_vertex, make_boxworld2, canonical_pr_box, quantum_chsh_table, ChshVariant, ProbabilityTable,
    VertexClass,
};
use gpt_workbench::gpt_core::bloch::{complex_to_pairs, BlochState, Complex2x2, Complex64};
use gpt_workbench::gpt_core::{
    bloch_density, decompose_state, decompose_state_limited, make_ball3, make_classical, make_gbit, unitary_to_rotation,
    StateSpace,
};
use gpt_workbench::postulates::{
    check_disturbance, check_joint_readout, check_no_simultaneous_encoding, check_tomographic_locality,
    registered_space, run_report, EncodingVerdict, ReportConfig,
};
use gpt_workbench::ratgeo::rational::{format_rational, half, parse_vector_list, rat};
use gpt_workbench::ratgeo::{solve_lp, vertex_adjacency, HRep, Sense, VRep};
use gpt_workbench::symmetry::{
    affine_automorphisms, check_continuous_reversibility, orbits, RotationPath,
};
use gpt_workbench::Error;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Workbench(#[from] Error),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Workbench(e) => match e {
                Error::Input(_) => "input",
                Error::DimensionMismatch { .. } => "dimension_mismatch",
                Error::Unbounded { .. } => "unbounded",
                Error::Empty => "empty",
                Error::TriviallyInfeasible { .. } => "trivially_infeasible",
                Error::NotAVertex(_) => "not_a_vertex",
                Error::Signalling(_) => "signalling",
                Error::Unsupported(_) => "unsupported",
                Error::Parse(_) => "parse",
            },
            CliError::Io { .. } => "io",
            CliError::Schema { .. } => "schema",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "gptw", version, about = "Exact analyses of generalized probabilistic theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON result to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Both descriptions of a state space.
    Build {
        #[arg(long)]
        space: String,
    },
    /// Vertices (pure states) of a polytopal space.
    Vertices {
        #[arg(long)]
        space: String,
    },
    /// Edge graph of a polytopal space.
    Adjacency {
        #[arg(long)]
        space: String,
        /// Degree breakdown by local/PR class (two-gbit table spaces only).
        #[arg(long)]
        summary: bool,
    },
    /// Local-deterministic or PR-box class of a table, or of every vertex.
    #[command(group(ArgGroup::new("input").required(true).args(["space", "table"])))]
    Classify {
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Affine symmetry group.
    Symmetries {
        #[arg(long)]
        space: String,
        /// Omit the element list.
        #[arg(long)]
        summary: bool,
    },
    /// Vertex orbits under the symmetry group.
    Orbits {
        #[arg(long)]
        space: String,
    },
    /// Maximum CHSH value of a table, or of singlet statistics at given angles.
    #[command(group(ArgGroup::new("input").required(true).args(["table", "angles"])))]
    Chsh {
        #[arg(long)]
        table: Option<PathBuf>,
        /// `θA0,θA1,θB0,θB1` in radians.
        #[arg(long, allow_hyphen_values = true)]
        angles: Option<String>,
    },
    /// Decompositions of a state into affinely independent pure states.
    Decompose {
        #[arg(long)]
        space: String,
        /// Comma-separated rationals, e.g. `1/2,1/2`.
        #[arg(long)]
        state: String,
        /// Stop after this many decompositions.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Density matrix of a Bloch vector and/or rotation of a unitary.
    #[command(group(ArgGroup::new("input").required(true).multiple(true).args(["vector", "unitary"])))]
    Bloch {
        /// `a1,a2,a3`.
        #[arg(long, allow_hyphen_values = true)]
        vector: Option<String>,
        /// Row-major `re,im` pairs: `u00re,u00im,u01re,u01im,u10re,u10im,u11re,u11im`.
        #[arg(long, allow_hyphen_values = true)]
        unitary: Option<String>,
    },
    /// Postulate report for a registered unit system and optional composite.
    Postulates {
        #[arg(long)]
        space: String,
        #[arg(long)]
        composite: Option<String>,
    },
    /// Every reproduction computation in one document.
    Report,
}

/// Parses `argv` (including the program name), runs the command, and
/// returns the exit status and the text for standard output.
pub fn run<I, T>(argv: I) -> (u8, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            // clap's message runs up to the first blank line; usage hints follow
            let text = e.to_string();
            let msg = text
                .lines()
                .take_while(|l| !l.trim().is_empty())
                .map(str::trim)
                .collect::<Vec<_>>()
                .join(" ")
                .trim_start_matches("error: ")
                .to_string();
            return (2, render(&CliError::Usage(msg).to_json()));
        }
    };
    let Format::Json = cli.format;
    let outcome = execute(cli.command).and_then(|value| {
        let text = render(&value);
        match &cli.out {
            Some(path) => std::fs::write(path, &text)
                .map(|_| String::new())
                .map_err(|e| CliError::Io { path: path.clone(), message: e.to_string() }),
            None => Ok(text),
        }
    });
    match outcome {
        Ok(text) => (0, text),
        Err(e) => (2, render(&e.to_json())),
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("workbench types serialize to JSON")
}

fn execute(command: Command) -> CliResult<Value> {
    match command {
        Command::Build { space } => build(&load_space(&space)?),
        Command::Vertices { space } => vertices(&load_space(&space)?),
        Command::Adjacency { space, summary } => adjacency(&load_space(&space)?, summary),
        Command::Classify { space, table } => match (space, table) {
            (_, Some(path)) => Ok(to_value(&classify_vertex(read_table(&path)?.entries())?)),
            (Some(space), None) => classify_space(&load_space(&space)?),
            (None, None) => unreachable!("clap requires one input"),
        },
        Command::Symmetries { space, summary } => symmetries(&load_space(&space)?, summary),
        Command::Orbits { space } => {
            let space = load_space(&space)?;
            let g = affine_automorphisms(&space)?;
            let o = orbits(&g, &space)?;
            Ok(json!({ "label": space.label(), "order": g.order(), "classes": o.classes }))
        }
        Command::Chsh { table, angles } => match (table, angles) {
            (Some(path), _) => Ok(json!({ "chsh_max": format_rational(&chsh_max(&read_table(&path)?)) })),
            (None, Some(angles)) => {
                let t = parse_floats(&angles, 4, "--angles")?;
                let q = quantum_chsh_table([t[0], t[1]], [t[2], t[3]]);
                Ok(json!({ "chsh_max": q.chsh_max(), "inexact": true, "p": q.p_float.to_vec() }))
            }
            (None, None) => unreachable!("clap requires one input"),
        },
        Command::Decompose { space, state, limit } => {
            let space = load_space(&space)?;
            let s = parse_vector_list(&state)?;
            let d = decompose_state_limited(&s, &space, limit)?;
            Ok(json!({ "label": space.label(), "state": state_strings(&s), "decompositions": d }))
        }
        Command::Bloch { vector, unitary } => bloch(vector.as_deref(), unitary.as_deref()),
        Command::Postulates { space, composite } => {
            Ok(to_value(&run_report(&ReportConfig::new(space, composite.as_deref()))?))
        }
        Command::Report => report(),
    }
}

fn state_strings(s: &[gpt_workbench::ratgeo::Rational]) -> Vec<String> {
    s.iter().map(format_rational).collect()
}

/// A registered label, or a JSON file holding a V- or H-representation.
fn load_space(arg: &str) -> CliResult<StateSpace> {
    match registered_space(arg) {
        Ok(space) => return Ok(space),
        Err(_) if !Path::new(arg).exists() => {
            return Err(CliError::Workbench(Error::Input(format!(
                "unknown state space {arg:?} and no file of that name"
            ))));
        }
        Err(_) => {}
    }
    let path = Path::new(arg);
    let value = read_json(path)?;
    let label = path.file_stem().map_or_else(|| arg.to_string(), |s| s.to_string_lossy().into_owned());
    let schema = |message: String| CliError::Schema { path: path.to_path_buf(), message };
    if value.get("vertices").is_some() {
        let v: VRep = serde_json::from_value(value).map_err(|e| schema(e.to_string()))?;
        Ok(StateSpace::from_vrep(label, v)?)
    } else if value.get("ineqs").is_some() {
        let h: HRep = serde_json::from_value(value).map_err(|e| schema(e.to_string()))?;
        Ok(StateSpace::from_hrep(label, h)?)
    } else {
        Err(schema("expected {\"dim\", \"vertices\"} or {\"dim\", \"ineqs\", \"eqs\"}".into()))
    }
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.to_path_buf(), message: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema { path: path.to_path_buf(), message: e.to_string() })
}

fn read_table(path: &Path) -> CliResult<ProbabilityTable> {
    let value = read_json(path)?;
    serde_json::from_value(value).map_err(|e| {
        // table validation errors surface through serde as custom messages
        CliError::Schema { path: path.to_path_buf(), message: e.to_string() }
    })
}

fn parse_floats(s: &str, n: usize, flag: &str) -> CliResult<Vec<f64>> {
    let parsed: std::result::Result<Vec<f64>, _> = s.split(',').map(|x| x.trim().parse::<f64>()).collect();
    match parsed {
        Ok(v) if v.len() == n && v.iter().all(|x| x.is_finite()) => Ok(v),
        Ok(v) if v.len() != n => Err(CliError::Usage(format!("{flag} expects {n} numbers, got {}", v.len()))),
        _ => Err(CliError::Workbench(Error::Parse(format!("{flag}: {s:?} is not a list of finite numbers")))),
    }
}

fn build(space: &StateSpace) -> CliResult<Value> {
    if !space.is_polytopal() {
        return Ok(json!({
            "label": space.label(),
            "kind": "ball3",
            "ambient_dim": space.ambient_dim(),
            "affine_dimension": space.affine_dimension(),
            "linear_dimension": space.linear_dimension(),
        }));
    }
    let (v, h) = space.polytope()?;
    Ok(json!({
        "label": space.label(),
        "kind": "polytope",
        "parts": space.parts(),
        "ambient_dim": space.ambient_dim(),
        "affine_dimension": space.affine_dimension(),
        "linear_dimension": space.linear_dimension(),
        "vertex_count": v.len(),
        "facet_count": h.inequalities().len(),
        "hrep": h,
        "vrep": v,
    }))
}

fn vertices(space: &StateSpace) -> CliResult<Value> {
    let v = space.vrep()?;
    let mut out = to_value(v);
    out["label"] = json!(space.label());
    out["count"] = json!(v.len());
    Ok(out)
}

fn adjacency(space: &StateSpace, summary: bool) -> CliResult<Value> {
    let (v, h) = space.polytope()?;
    let g = vertex_adjacency(v, h)?;
    if !summary {
        let degrees: Vec<usize> = (0..v.len()).map(|i| g.degree(i)).collect();
        return Ok(json!({ "label": space.label(), "vertex_count": v.len(), "edges": g.edges(), "degrees": degrees }));
    }
    let local = local_flags(space)?;
    let uniform = |values: Vec<usize>, what: &str| -> CliResult<usize> {
        match values.split_first() {
            Some((first, rest)) if rest.iter().all(|x| x == first) => Ok(*first),
            _ => Err(CliError::Workbench(Error::Input(format!("{what} is not the same for every vertex")))),
        }
    };
    let locals: Vec<usize> = (0..v.len()).filter(|&i| local[i]).collect();
    let prs: Vec<usize> = (0..v.len()).filter(|&i| !local[i]).collect();
    let count_local = |i: usize| g.neighbors(i).iter().filter(|&&j| local[j]).count();
    Ok(json!({
        "local_degree": uniform(locals.iter().map(|&i| g.degree(i)).collect(), "local degree")?,
        "local_to_local": uniform(locals.iter().map(|&i| count_local(i)).collect(), "local-local degree")?,
        "local_to_pr": uniform(locals.iter().map(|&i| g.degree(i) - count_local(i)).collect(), "local-PR degree")?,
        "pr_degree": uniform(prs.iter().map(|&i| g.degree(i)).collect(), "PR degree")?,
    }))
}

fn local_flags(space: &StateSpace) -> CliResult<Vec<bool>> {
    let v = space.vrep()?;
    if v.ambient_dim() != 16 {
        return Err(CliError::Workbench(Error::Input(format!(
            "{} is not a space of two-gbit probability tables",
            space.label()
        ))));
    }
    v.vertices().iter().map(|t| Ok(classify_vertex(t)?.is_local())).collect()
}

fn classify_space(space: &StateSpace) -> CliResult<Value> {
    local_flags(space)?;
    let classes: Vec<VertexClass> =
        space.vrep()?.vertices().iter().map(|t| classify_vertex(t)).collect::<gpt_workbench::Result<_>>()?;
    let local = classes.iter().filter(|c| c.is_local()).count();
    Ok(json!({ "label": space.label(), "local": local, "pr": classes.len() - local, "classes": classes }))
}

fn symmetries(space: &StateSpace, summary: bool) -> CliResult<Value> {
    let g = affine_automorphisms(space)?;
    let mut out = json!({ "label": space.label(), "order": g.order(), "generators": g.generators() });
    if !summary {
        out["elements"] = to_value(&g);
    }
    Ok(out)
}

fn bloch(vector: Option<&str>, unitary: Option<&str>) -> CliResult<Value> {
    let mut out = json!({ "inexact": true });
    if let Some(s) = vector {
        let a = parse_floats(s, 3, "--vector")?;
        let state = BlochState::new([a[0], a[1], a[2]])?;
        out["vector"] = json!(a);
        // adding 0.0 turns -0.0 into 0.0
        let density: Vec<[f64; 2]> =
            complex_to_pairs(&bloch_density(&state)).into_iter().map(|[re, im]| [re + 0.0, im + 0.0]).collect();
        out["density"] = json!(density);
        out["eigenvalues"] = json!(state.eigenvalues());
    }
    if let Some(s) = unitary {
        let u = parse_floats(s, 8, "--unitary")?;
        let c = |k: usize| Complex64::new(u[2 * k], u[2 * k + 1]);
        let m: Complex2x2 = [[c(0), c(1)], [c(2), c(3)]];
        out["rotation"] = json!(unitary_to_rotation(&m)?);
    }
    Ok(out)
}

fn report() -> CliResult<Value> {
    let bw = make_boxworld2();
    let (v, h) = bw.polytope()?;
    let local = local_flags(&bw)?;
    let n_local = local.iter().filter(|&&l| l).count();
    let census = json!({
        "vertices": v.len(),
        "local": n_local,
        "pr": v.len() - n_local,
        "affine_dimension": bw.affine_dimension(),
    });

    let bw_group = affine_automorphisms(&bw)?;
    let gbit = make_gbit();
    let gbit_group = affine_automorphisms(&gbit)?;
    let symmetry = json!({
        "boxworld2": { "order": bw_group.order(), "orbits": orbits(&bw_group, &bw)?.classes },
        "gbit": { "order": gbit_group.order(), "orbits": orbits(&gbit_group, &gbit)?.classes },
    });

    let ball = make_ball3();
    let (from, to) = (BlochState::new([0.0, 0.0, 1.0])?, BlochState::new([1.0, 0.0, 0.0])?);
    let path = RotationPath::between(&from, &to)?;
    let continuity = json!({
        "gbit": check_continuous_reversibility(&gbit)?,
        "ball3": check_continuous_reversibility(&ball)?,
        "ball3_sample": { "inexact": true, "path": path, "check": path.check(&from, &to, 100) },
    });

    let tables: Vec<ProbabilityTable> =
        v.vertices().iter().map(|t| ProbabilityTable::new(t.clone())).collect::<gpt_workbench::Result<_>>()?;
    let max_over = |want_local: bool| {
        tables.iter().zip(&local).filter(|(_, &l)| l == want_local).map(|(t, _)| chsh_max(t)).max()
    };
    let mut lp = Vec::new();
    for variant in ChshVariant::all() {
        let r = solve_lp(&variant.functional(), Sense::Max, h)?;
        lp.push(json!({ "signs": variant.signs(), "max": r.optimum().map(format_rational) }));
    }
    let pi = std::f64::consts::PI;
    let quantum = quantum_chsh_table([0.0, pi / 2.0], [pi / 4.0, -pi / 4.0]);
    let chsh = json!({
        "canonical_pr_box": format_rational(&chsh_max(&canonical_pr_box())),
        "pr_vertices_max": max_over(false).as_ref().map(format_rational),
        "local_vertices_max": max_over(true).as_ref().map(format_rational),
        "lp_over_ns_polytope": lp,
        "quantum": { "chsh_max": quantum.chsh_max(), "inexact": true },
    });

    let encoding = match check_no_simultaneous_encoding(&gbit)? {
        EncodingVerdict::Fail { witness } => json!({
            "joint_readout": check_joint_readout(&witness, &gbit)?,
            "disturbance": check_disturbance(&gbit, &witness)?,
            "witness": witness,
        }),
        pass => to_value(&pass),
    };

    let c2 = make_classical(2)?;
    let c4 = make_classical(4)?;
    let tomography = json!({
        "gbit": check_tomographic_locality(&gbit, &gbit, &bw)?,
        "classical-2": check_tomographic_locality(&c2, &c2, &c4)?,
    });

    let interior = [rat(1, 10), rat(2, 10), rat(3, 10), rat(4, 10)];
    let decomposition = json!({
        "gbit_centre": decompose_state(&[half(), half()], &gbit)?,
        "simplex_interior": { "state": state_strings(&interior), "decompositions": decompose_state(&interior, &c4)? },
    });

    let postulates = [("gbit", Some("boxworld2")), ("classical-2", Some("classical-4")), ("ball3", None)]
        .iter()
        .map(|(unit, comp)| run_report(&ReportConfig::new(*unit, *comp)).map(|r| to_value(&r)))
        .collect::<gpt_workbench::Result<Vec<Value>>>()?;

    Ok(json!({
        "census": census,
        "adjacency": adjacency(&bw, true)?,
        "symmetry": symmetry,
        "continuity": continuity,
        "chsh": chsh,
        "encoding": encoding,
        "tomographic_locality": tomography,
        "decomposition": decomposition,
        "postulates": postulates,
    }))
}
