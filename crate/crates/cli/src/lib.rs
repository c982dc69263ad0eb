//! Runs the three threshold computations on one branch and compares them.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use curvelct_core::newton::{howald_lct, monom_ideal, newton_polygon, NewtonPolygon};
use curvelct_core::poly::{intersection_multiplicity, parse_poly};
use curvelct_core::resolution::{farey_multiplicity_probe, resolution_lct, resolve_curve_with, ResolutionTree, DEFAULT_MAX_BLOWUPS};
use curvelct_core::skp::{skp_valuation, SkpRecord, ValuationDescriptor};
use curvelct_core::valtree::lct_formula;
use curvelct_core::{BivarPoly, ExtRat, Field, Rat};

pub const MAX_BLOWUPS_ENV: &str = "CURVELCT_MAX_BLOWUPS";
pub const SEED_ENV: &str = "CURVELCT_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] curvelct_core::Error),
    #[error("{source} (input {input:?})")]
    Input { input: String, source: curvelct_core::Error },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Attach the offending input to a core error.
    fn at(self, input: &str) -> CliError {
        match self {
            CliError::Core(source) => CliError::Input { input: input.to_string(), source },
            other => other,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parse `q` or `fp:<p>`.
pub fn parse_field(s: &str) -> CliResult<Field> {
    Ok(s.parse()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Formula,
    Howald,
    Resolution,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Formula, Method::Howald, Method::Resolution];

    /// Parse a method name; `all` expands to every method.
    pub fn parse_list(s: &str) -> CliResult<Vec<Method>> {
        match s.trim().to_ascii_lowercase().as_str() {
            "all" => Ok(Method::ALL.to_vec()),
            "formula" => Ok(vec![Method::Formula]),
            "howald" => Ok(vec![Method::Howald]),
            "resolution" => Ok(vec![Method::Resolution]),
            other => Err(CliError::Config(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Dot,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub field: Field,
    pub poly: String,
    pub methods: Vec<Method>,
    pub allow_smooth: bool,
    /// Extra blow-ups explored when probing Farey multiplicities; 0 skips the probe.
    pub probe_depth: u32,
    pub max_blowups: usize,
    pub output: OutputFormat,
    /// Seed for a randomized spot check of the key polynomials against
    /// intersection multiplicities.
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn new(field: Field, poly: impl Into<String>) -> RunConfig {
        RunConfig {
            field,
            poly: poly.into(),
            methods: Method::ALL.to_vec(),
            allow_smooth: false,
            probe_depth: 0,
            max_blowups: DEFAULT_MAX_BLOWUPS,
            output: OutputFormat::Text,
            seed: None,
        }
    }

    pub fn with_methods(mut self, methods: Vec<Method>) -> RunConfig {
        self.methods = methods;
        self
    }

    pub fn allow_smooth(mut self, allow: bool) -> RunConfig {
        self.allow_smooth = allow;
        self
    }

    /// Apply `CURVELCT_MAX_BLOWUPS` and `CURVELCT_SEED` when set.
    pub fn with_env(mut self) -> CliResult<RunConfig> {
        if let Ok(v) = std::env::var(MAX_BLOWUPS_ENV) {
            self.max_blowups = v.trim().parse().map_err(|_| CliError::Config(format!("{MAX_BLOWUPS_ENV}={v:?}")))?;
        }
        if self.seed.is_none() {
            if let Ok(v) = std::env::var(SEED_ENV) {
                self.seed = Some(v.trim().parse().map_err(|_| CliError::Config(format!("{SEED_ENV}={v:?}")))?);
            }
        }
        Ok(self)
    }

    fn validate(&self) -> CliResult<()> {
        if self.methods.is_empty() {
            return Err(CliError::Config("no method selected".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "AGREE")]
    Agree,
    #[serde(rename = "DISAGREE")]
    Disagree,
    /// Smooth branch evaluated on purpose: the formula is outside its hypotheses.
    #[serde(rename = "DISAGREE-BY-DESIGN")]
    DisagreeByDesign,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Agree | Verdict::DisagreeByDesign => 0,
            Verdict::Disagree => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Agree => "AGREE",
            Verdict::Disagree => "DISAGREE",
            Verdict::DisagreeByDesign => "DISAGREE-BY-DESIGN",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FormulaReport {
    pub lct: Rat,
    pub vfx: ExtRat,
    pub vfy: ExtRat,
    pub normal_form: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct HowaldReport {
    pub lct: ExtRat,
    pub polygon: NewtonPolygon,
}

#[derive(Clone, Debug, Serialize)]
pub struct NodeSummary {
    pub id: usize,
    pub a: u64,
    pub b: u64,
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub farey_multiplicity: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResolutionReport {
    /// Threshold including the strict transform, so at most 1.
    pub lct: Rat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exceptional: Option<Rat>,
    pub nodes: Vec<NodeSummary>,
    pub tree: ResolutionTree,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpotCheck {
    pub seed: u64,
    pub samples: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Timing {
    pub formula_us: Option<u128>,
    pub howald_us: Option<u128>,
    pub resolution_us: Option<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub input: String,
    pub field: String,
    pub methods: Vec<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<FormulaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub howald: Option<HowaldReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skp: Option<SkpRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub coordinates: Vec<curvelct_core::poly::CoordinateChange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spot_check: Option<SpotCheck>,
    pub verdict: Verdict,
    pub timing: Timing,
}

impl Report {
    /// The values computed by the requested methods, in method order.
    pub fn values(&self) -> Vec<(Method, ExtRat)> {
        let mut out = Vec::new();
        if let Some(f) = &self.formula {
            out.push((Method::Formula, ExtRat::of(f.lct.clone())));
        }
        if let Some(h) = &self.howald {
            out.push((Method::Howald, h.lct.clone()));
        }
        if let Some(r) = &self.resolution {
            out.push((Method::Resolution, ExtRat::of(r.lct.clone())));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (m, v) in self.values() {
            let name = serde_json::to_value(m).expect("plain enum");
            out.push_str(&format!("{:<11} {v}\n", name.as_str().expect("string")));
        }
        if let Some(w) = &self.warning {
            out.push_str(&format!("warning     {w}\n"));
        }
        out.push_str(&format!("verdict     {}\n", self.verdict));
        out
    }

    /// One-line summary for batch output.
    pub fn summary(&self) -> String {
        let vals: Vec<String> = self
            .values()
            .into_iter()
            .map(|(m, v)| format!("{}={v}", serde_json::to_value(m).expect("plain enum").as_str().expect("string")))
            .collect();
        format!("{} [{}] {} {}", self.verdict, self.field, self.input, vals.join(" "))
    }
}

fn micros(start: Instant) -> Option<u128> {
    Some(start.elapsed().as_micros())
}

/// Run the requested methods on one input.
pub fn run(config: &RunConfig) -> CliResult<Report> {
    config.validate()?;
    let f = parse_poly(&config.poly, config.field).map_err(|e| CliError::from(e).at(&config.poly))?;
    run_poly(config, &f).map_err(|e| e.at(&config.poly))
}

fn run_poly(config: &RunConfig, f: &BivarPoly) -> CliResult<Report> {
    let wants = |m: Method| config.methods.contains(&m);
    let mut timing = Timing::default();
    let mut report = Report {
        input: config.poly.clone(),
        field: config.field.to_string(),
        methods: config.methods.clone(),
        formula: None,
        howald: None,
        resolution: None,
        skp: None,
        coordinates: Vec::new(),
        warning: None,
        spot_check: None,
        verdict: Verdict::Agree,
        timing: Timing::default(),
    };

    if wants(Method::Formula) || wants(Method::Howald) {
        let start = Instant::now();
        let fl = lct_formula(f, config.allow_smooth)?;
        let last = fl.skp.keys().last().expect("nonempty").clone();
        if wants(Method::Formula) {
            timing.formula_us = micros(start);
            report.formula = Some(FormulaReport { lct: fl.lct.clone(), vfx: fl.vfx, vfy: fl.vfy, normal_form: last.to_string() });
        }
        if wants(Method::Howald) {
            let start = Instant::now();
            let polygon = newton_polygon(&monom_ideal(&last)?);
            report.howald = Some(HowaldReport { lct: howald_lct(&polygon), polygon });
            timing.howald_us = micros(start);
        }
        if let Some(seed) = config.seed {
            report.spot_check = Some(spot_check(&last, &fl.skp, seed)?);
        }
        report.skp = Some(fl.skp.record());
        report.coordinates = fl.coordinates;
        report.warning = fl.warning;
    }

    if wants(Method::Resolution) {
        let start = Instant::now();
        let tree = resolve_curve_with(f, config.max_blowups)?;
        let lct = resolution_lct(&tree)?;
        let mut nodes = Vec::new();
        for n in tree.nodes() {
            let farey_multiplicity =
                if config.probe_depth > 0 { Some(farey_multiplicity_probe(&tree, n.id, config.probe_depth)?) } else { None };
            nodes.push(NodeSummary { id: n.id, a: n.weight.a, b: n.weight.b, n: n.n.unwrap_or(0), farey_multiplicity });
        }
        report.resolution = Some(ResolutionReport { lct: lct.capped, exceptional: lct.exceptional, nodes, tree });
        timing.resolution_us = micros(start);
    }

    report.timing = timing;
    let values = report.values();
    let agree = values.windows(2).all(|w| w[0].1 == w[1].1);
    report.verdict = match (agree, &report.warning) {
        (true, _) => Verdict::Agree,
        (false, Some(_)) => Verdict::DisagreeByDesign,
        (false, None) => Verdict::Disagree,
    };
    Ok(report)
}

/// Compare the key-polynomial valuation with intersection multiplicities on
/// pseudo-random test curves derived from `seed`.
fn spot_check(f: &BivarPoly, skp: &curvelct_core::skp::Skp, seed: u64) -> CliResult<SpotCheck> {
    const SAMPLES: usize = 8;
    let field = f.field();
    let v = ValuationDescriptor::new(skp.clone());
    let inv_deg = Rat::new(1, i64::from(f.deg_y().unwrap_or(1).max(1)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLES {
        let terms: Vec<(i64, u32, u32)> =
            (0..3).map(|_| (rng.gen_range(-3..=3), rng.gen_range(0..5), rng.gen_range(0..4))).collect();
        let g = BivarPoly::from_ints(field, &terms);
        if g.is_zero() {
            continue;
        }
        let by_keys = skp_valuation(&v, &g)?;
        let by_intersection = intersection_multiplicity(f, &g)?.scale(&inv_deg);
        if by_keys != by_intersection {
            return Err(CliError::Config(format!(
                "spot check failed on {g}: key polynomials give {by_keys}, intersection gives {by_intersection}"
            )));
        }
    }
    Ok(SpotCheck { seed, samples: SAMPLES })
}

/// One parsed batch line: `<field> <polynomial>`.
pub fn parse_batch_line(line: &str) -> CliResult<RunConfig> {
    let line = line.trim();
    let (field, poly) = line
        .split_once(char::is_whitespace)
        .ok_or_else(|| CliError::Config(format!("expected `<field> <polynomial>`, got {line:?}")))?;
    Ok(RunConfig::new(parse_field(field)?, poly.trim()))
}

/// Outcome of one batch line.
#[derive(Debug)]
pub struct BatchItem {
    pub line: usize,
    pub result: CliResult<Report>,
}

/// Run every non-blank, non-comment line independently, in parallel, and
/// return the results in input order.
pub fn batch(text: &str, template: &RunConfig) -> Vec<BatchItem> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    lines
        .into_par_iter()
        .map(|(line, l)| {
            let result = parse_batch_line(l).and_then(|c| {
                let config = RunConfig { field: c.field, poly: c.poly, ..template.clone() };
                run(&config)
            });
            BatchItem { line, result }
        })
        .collect()
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<OutputFormat> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "dot" => Ok(OutputFormat::Dot),
            other => Err(CliError::Config(format!("unknown output format {other:?}"))),
        }
    }
}
