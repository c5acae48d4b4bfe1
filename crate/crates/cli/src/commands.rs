use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use gpdef::algebra::{parse_algebra_with, Algebra};
use gpdef::biserial::{analyze, classify_gproj_gentle, critical_cycles, Violation};
use gpdef::deform::{syzygy_compare, versal_report, Ring, SyzygyComparison, VersalReport, DEFAULT_LEVEL_BOUND};
use gpdef::homalg::{
    ext, gorenstein_data, hom_basis, strip_projective_summands, syzygy, GorensteinData, DEFAULT_GORENSTEIN_BOUND,
};
use gpdef::rep::ModuleSpec;
use gpdef::{Field, Rep};
use serde::{Deserialize, Serialize};

use crate::{Cli, Command, GlobalOpts};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] gpdef::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use gpdef::Error as E;
        match self {
            CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                E::Parse(_)
                | E::InvalidSpec(_)
                | E::Json(_)
                | E::InvalidField(_)
                | E::UnknownVertex(_)
                | E::UnknownArrow(_)
                | E::InvalidString(_)
                | E::BandsUnsupported
                | E::ShapeMismatch(_)
                | E::EndpointMismatch(_)
                | E::DimensionMismatch(_)
                | E::ZeroModule => 2,
                E::NotAdmissible(_) | E::CapExceeded(_) => 3,
                E::NotGentle(_) => 4,
                _ => 1,
            },
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Common header of every JSON report.
#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct Envelope<T> {
    pub command: String,
    pub version: String,
    pub field: String,
    pub seed: u64,
    pub membership: String,
    pub result: T,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct CheckReport {
    pub vertices: usize,
    pub arrows: usize,
    pub dim: usize,
    pub nilpotency: usize,
    pub special_biserial: bool,
    pub gentle: bool,
    pub violations: Vec<Violation>,
    pub gorenstein: Option<GorensteinData>,
    pub gorenstein_error: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ClassifiedModule {
    pub label: String,
    pub dims: Vec<usize>,
    pub iso: Option<String>,
    pub stable_end_dim: usize,
    pub ring: Ring,
    pub universal: bool,
    pub justification: String,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ClassifyReport {
    pub critical_cycles: Vec<Vec<String>>,
    pub modules: Vec<ClassifiedModule>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct HomReport {
    pub source: String,
    pub target: String,
    pub dim: usize,
    /// Per basis element, one matrix per vertex, entries as strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<Vec<Vec<String>>>>>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct ExtReport {
    pub source: String,
    pub target: String,
    pub degree: usize,
    pub dim: usize,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct SyzygyReport {
    pub module: String,
    pub power: usize,
    pub dims: Vec<usize>,
    pub stripped: bool,
    /// Vertices of the projective summands removed.
    pub removed: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identified: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
#[serde(untagged)]
pub enum DeformReport {
    Compare(SyzygyComparison),
    Single(VersalReport),
}

#[derive(Deserialize)]
struct Candidate {
    label: String,
    module: ModuleSpec,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn field_override(g: &GlobalOpts) -> Result<Option<Field>> {
    Ok(match &g.field {
        Some(s) => Some(s.parse::<Field>()?),
        None => None,
    })
}

fn load_algebra(path: &Path, g: &GlobalOpts) -> Result<Arc<Algebra>> {
    let spec = parse_algebra_with(&read(path)?, field_override(g)?)?;
    Ok(Algebra::build(spec)?)
}

/// A module argument is either a path to a JSON file or inline JSON.
fn load_module(alg: &Arc<Algebra>, arg: &str) -> Result<(String, Rep)> {
    let text = if arg.trim_start().starts_with('{') { arg.to_string() } else { read(Path::new(arg))? };
    let spec: ModuleSpec = serde_json::from_str(&text).map_err(gpdef::Error::from)?;
    let m = spec.build(alg)?;
    Ok((spec.label(alg.spec()), m))
}

fn render<T: Serialize>(cli: &Cli, command: &str, field: Field, result: T, text: String) -> Result<String> {
    if !cli.global.json {
        return Ok(text);
    }
    let env = Envelope {
        command: command.to_string(),
        version: gpdef::VERSION.to_string(),
        field: field.to_string(),
        seed: cli.global.seed,
        membership: format!("{:?}", cli.global.membership).to_lowercase(),
        result,
    };
    Ok(serde_json::to_string_pretty(&env).map_err(gpdef::Error::from)?)
}

pub fn run(cli: &Cli) -> Result<String> {
    let g = &cli.global;
    match &cli.command {
        Command::Check { algebra } => {
            let alg = load_algebra(algebra, g)?;
            let r = check(&alg, g);
            let text = check_text(&r, alg.field());
            render(cli, "check", alg.field(), r, text)
        }
        Command::Classify { algebra } => {
            let alg = load_algebra(algebra, g)?;
            let r = classify(&alg, g.seed)?;
            let text = classify_text(&r);
            render(cli, "classify", alg.field(), r, text)
        }
        Command::Hom { algebra, m, n, basis } => {
            let alg = load_algebra(algebra, g)?;
            let (ml, mm) = load_module(&alg, m)?;
            let (nl, nn) = load_module(&alg, n)?;
            let hb = hom_basis(&mm, &nn);
            let basis = basis.then(|| {
                hb.basis
                    .iter()
                    .map(|f| {
                        f.maps
                            .iter()
                            .map(|mat| {
                                (0..mat.rows()).map(|i| mat.row(i).iter().map(|s| s.to_string()).collect()).collect()
                            })
                            .collect()
                    })
                    .collect()
            });
            let r = HomReport { source: ml, target: nl, dim: hb.dim(), basis };
            let mut text = format!("dim Hom({}, {}) = {}", r.source, r.target, r.dim);
            if r.basis.is_some() {
                for (k, f) in hb.basis.iter().enumerate() {
                    let _ = write!(text, "\nbasis element {k}:");
                    for (v, mat) in f.maps.iter().enumerate() {
                        let _ = write!(text, "\n  vertex {}: {mat}", alg.spec().vertices[v]);
                    }
                }
            }
            render(cli, "hom", alg.field(), r, text)
        }
        Command::Ext { algebra, m, n, degree } => {
            let alg = load_algebra(algebra, g)?;
            let (ml, mm) = load_module(&alg, m)?;
            let (nl, nn) = load_module(&alg, n)?;
            let e = ext(&mm, &nn, *degree);
            let r = ExtReport { source: ml, target: nl, degree: *degree, dim: e.dim };
            let text = format!("dim Ext^{}({}, {}) = {}", r.degree, r.source, r.target, r.dim);
            render(cli, "ext", alg.field(), r, text)
        }
        Command::Syzygy { algebra, m, power, identify, no_strip } => {
            let alg = load_algebra(algebra, g)?;
            let (label, mm) = load_module(&alg, m)?;
            let raw = syzygy(&mm, *power)?;
            let (omega, removed) = if *no_strip { (raw, Vec::new()) } else { strip_projective_summands(&raw) };
            let identified = match identify {
                Some(path) => identify_in(&alg, &omega, path, g.seed)?,
                None => None,
            };
            let r = SyzygyReport {
                module: label,
                power: *power,
                dims: omega.dims().to_vec(),
                stripped: !*no_strip,
                removed: removed.iter().map(|&v| alg.spec().vertices[v].clone()).collect(),
                identified,
            };
            let mut text = format!("Ω^{} {}: dims {:?}", r.power, r.module, r.dims);
            if !r.removed.is_empty() {
                let _ = write!(text, ", removed projective summands at {:?}", r.removed);
            }
            if let Some(id) = &r.identified {
                let _ = write!(text, "\nidentified: {id}");
            } else if identify.is_some() {
                text.push_str("\nidentified: none");
            }
            render(cli, "syzygy", alg.field(), r, text)
        }
        Command::Deform { algebra, m, level_bound, compare_syzygy } => {
            let alg = load_algebra(algebra, g)?;
            let (label, mm) = load_module(&alg, m)?;
            let r = if *compare_syzygy {
                let mut c = syzygy_compare(&mm, *level_bound, g.seed)?;
                c.module.module = label.clone();
                c.syzygy.module = format!("Ω {label}");
                DeformReport::Compare(c)
            } else {
                DeformReport::Single(versal_report(&mm, *level_bound, g.seed)?.with_module(label))
            };
            let text = deform_text(&r);
            render(cli, "deform", alg.field(), r, text)
        }
    }
}

fn check(alg: &Arc<Algebra>, g: &GlobalOpts) -> CheckReport {
    let b = analyze(alg, g.membership.into());
    let (gorenstein, gorenstein_error) = match gorenstein_data(alg, DEFAULT_GORENSTEIN_BOUND) {
        Ok(d) => (Some(d), None),
        Err(e) => (None, Some(e.to_string())),
    };
    CheckReport {
        vertices: alg.num_vertices(),
        arrows: alg.spec().num_arrows(),
        dim: alg.dim(),
        nilpotency: alg.nilpotency(),
        special_biserial: b.special_biserial,
        gentle: b.gentle,
        violations: b.violations,
        gorenstein,
        gorenstein_error,
    }
}

fn check_text(r: &CheckReport, field: Field) -> String {
    let mut t = format!(
        "field: {field}\nvertices: {}\narrows: {}\ndim: {}\nnilpotency: {}\nspecial biserial: {}\ngentle: {}",
        r.vertices, r.arrows, r.dim, r.nilpotency, r.special_biserial, r.gentle
    );
    for v in &r.violations {
        let _ = write!(t, "\n  violates ({}): {}", v.condition, v.witness);
    }
    match (&r.gorenstein, &r.gorenstein_error) {
        (Some(d), _) => {
            let _ = write!(t, "\ninjdim: left {}, right {}", d.left_injdim, d.right_injdim);
        }
        (None, Some(e)) => {
            let _ = write!(t, "\ninjdim: {e}");
        }
        (None, None) => {}
    }
    t
}

fn classify(alg: &Arc<Algebra>, seed: u64) -> Result<ClassifyReport> {
    let entries = classify_gproj_gentle(alg)?;
    let spec = alg.spec();
    let critical_cycles = critical_cycles(alg)?
        .iter()
        .map(|c| c.iter().map(|&a| spec.arrows[a].name.clone()).collect())
        .collect();
    let mut modules = Vec::with_capacity(entries.len());
    for e in entries {
        let v = versal_report(&e.module, DEFAULT_LEVEL_BOUND, seed)?;
        modules.push(ClassifiedModule {
            label: e.label,
            dims: e.module.dims().to_vec(),
            iso: e.iso,
            stable_end_dim: e.stable_end_dim,
            ring: v.ring,
            universal: v.universal,
            justification: v.justification,
        });
    }
    Ok(ClassifyReport { critical_cycles, modules })
}

fn classify_text(r: &ClassifyReport) -> String {
    let cycles: Vec<String> = r.critical_cycles.iter().map(|c| format!("{{{}}}", c.join(" "))).collect();
    let mut t = format!("critical cycles: {}\nGorenstein-projective indecomposables: {}", cycles.join(", "), r.modules.len());
    for m in &r.modules {
        let iso = m.iso.as_ref().map(|s| format!(" ≅ {s}")).unwrap_or_default();
        let _ = write!(
            t,
            "\n  {}{iso}: dims {:?}, stable End dim {}, universal {} ({})",
            m.label, m.dims, m.stable_end_dim, m.universal, m.justification
        );
    }
    t
}

fn identify_in(alg: &Arc<Algebra>, m: &Rep, path: &Path, seed: u64) -> Result<Option<String>> {
    let list: Vec<Candidate> = serde_json::from_str(&read(path)?).map_err(gpdef::Error::from)?;
    for c in list {
        let cand = c.module.build(alg)?;
        if cand.dims() == m.dims() && cand.is_isomorphic(m, seed).is_yes() {
            return Ok(Some(c.label));
        }
    }
    Ok(None)
}

fn report_text(r: &VersalReport) -> String {
    let gp = match r.gp {
        Some(b) => b.to_string(),
        None => "unknown".into(),
    };
    let mut t = format!(
        "module: {}\ndims: {:?}\nGorenstein-projective: {gp}\nprojective: {}\ndim End: {}\ndim stable End: {}\ndim Ext^1: {}\nring: {}\nuniversal: {} ({})\nfield: {}\nseed: {}\nlevel bound: {}",
        r.module,
        r.dims,
        r.projective,
        r.end_dim,
        r.stable_end_dim,
        r.ext1_dim,
        r.ring,
        r.universal,
        r.justification,
        r.field,
        r.seed,
        r.level_bound
    );
    if let Ring::Truncated { n } = r.ring {
        let _ = write!(t, "\nN: {n}");
    }
    for l in &r.obstruction_log {
        let e = &l.rank_evidence;
        let _ = write!(
            t,
            "\n  level {}: {} (operator rank {}, augmented rank {}, unknowns {})",
            l.level, l.status, e.operator_rank, e.augmented_rank, e.unknowns
        );
    }
    t
}

fn deform_text(r: &DeformReport) -> String {
    match r {
        DeformReport::Single(v) => report_text(v),
        DeformReport::Compare(c) => {
            let mut t = report_text(&c.module);
            t.push_str("\n\n");
            t.push_str(&report_text(&c.syzygy));
            if !c.stripped.is_empty() {
                let _ = write!(t, "\nremoved projective summands of Ω at {:?}", c.stripped);
            }
            let _ = write!(t, "\nrings match: {}", c.rings_match);
            t
        }
    }
}
