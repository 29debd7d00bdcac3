//! Command-line driver: argument model, runners for each mode, and the report schema.

use std::fmt::Write as _;
use std::str::FromStr;

use annsss::differentials::{differential_entries, shift, shift_allowed, shift_allowed_single, total_differential, Terms};
use annsss::invariants::{
    braid_like, check_size, marked_complex, report, right_slope, right_veering_certificate, s_profile, s_rt, InvariantReport,
    MarkedComplex, PLProfile, RationalParams, Q,
};
use annsss::{parse_braid, BraidWord, ClosureDiagram, ComputeError, Cube, Orientation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "annsss", version, about = "Annular s_{r,t} invariants of braid closures")]
pub struct Cli {
    #[command(subcommand)]
    pub mode: Mode,
}

#[derive(Subcommand, Debug)]
pub enum Mode {
    /// s_{r,t} at one parameter point.
    Value(PointArgs),
    /// The certified piecewise-linear profile t -> s_{r,t} at fixed r.
    Profile(ProfileArgs),
    /// s_{r,t} with writhe, self-linking, κ, band-rank bound and Bennequin check.
    Report(PointArgs),
    /// Self-checks of the complex: d^2 = 0, tridegree ledger, invariance pairs.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Braid word, e.g. "n=3; 1 -2 1".
    #[arg(long)]
    pub braid: String,
    /// `braidlike`, or a comma-separated list of components to reverse.
    #[arg(long, default_value = "braidlike")]
    pub orientation: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct PointArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "0")]
    pub r: String,
    #[arg(long, default_value = "0")]
    pub t: String,
    /// Grid density of the profile included in reports.
    #[arg(long, default_value_t = annsss::invariants::DEFAULT_GRID)]
    pub grid: u32,
}

#[derive(Args, Debug, Clone)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "0")]
    pub r: String,
    #[arg(long, default_value_t = annsss::invariants::DEFAULT_GRID)]
    pub grid: u32,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Largest configuration index included in the ledger sweep.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Also compare s_{r,t} against conjugated and R2-extended diagrams.
    #[arg(long)]
    pub pairs: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Cap(String),
    Compute(String),
    VerifyFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Compute(_) | CliError::VerifyFailed(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Cap(m) | CliError::Compute(m) | CliError::VerifyFailed(m) => m,
        }
    }
}

impl From<ComputeError> for CliError {
    fn from(e: ComputeError) -> Self {
        match e {
            ComputeError::SizeCap { .. } => CliError::Cap(e.to_string()),
            ComputeError::Orientation(_) | ComputeError::Parameter(_) => CliError::Parse(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Q, CliError> {
    Q::from_str(s.trim()).map_err(|_| CliError::Parse(format!("not a rational `p/q`: `{s}`")))
}

fn params(r: &str, t: &str) -> Result<RationalParams, CliError> {
    Ok(RationalParams::new(parse_rational(r)?, parse_rational(t)?)?)
}

pub fn parse_orientation(text: &str, word: &BraidWord) -> Result<Orientation, CliError> {
    let components = word.component_of_strand().0;
    let text = text.trim();
    if text.eq_ignore_ascii_case("braidlike") {
        return Ok(Orientation::braid_like(components));
    }
    let list = text
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| CliError::Parse(format!("bad component index `{x}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Orientation::reversing(components, &list)?)
}

struct Input {
    word: BraidWord,
    orientation: Orientation,
    cube: Cube,
}

fn load(c: &Common) -> Result<Input, CliError> {
    let word = parse_braid(&c.braid).map_err(|e| CliError::Parse(e.to_string()))?;
    let orientation = parse_orientation(&c.orientation, &word)?;
    let diagram = ClosureDiagram::from_braid(&word);
    check_size(&diagram)?;
    let cube = Cube::new(&diagram);
    Ok(Input { word, orientation, cube })
}

fn marked(input: &Input) -> Result<MarkedComplex, CliError> {
    Ok(marked_complex(&input.cube, &input.orientation, Terms::ALL)?)
}

/// Serialized form of [`InvariantReport`]; rationals are `"p/q"` strings.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ReportJson {
    pub s: String,
    pub r: String,
    pub t: String,
    pub n: usize,
    pub writhe: i64,
    pub sl: i64,
    /// An integer, `"inf"`, or null when not computed.
    pub kappa: Option<serde_json::Value>,
    pub band_rank_lb: Option<String>,
    pub bennequin_ok: bool,
    pub profile: Option<ProfileJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ProfileJson {
    pub r: String,
    pub bound: usize,
    pub points: Vec<ProfileRow>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ProfileRow {
    pub t: String,
    pub value: String,
    pub right_slope: Option<String>,
}

impl From<&PLProfile> for ProfileJson {
    fn from(p: &PLProfile) -> Self {
        let mut points: Vec<ProfileRow> = p
            .points
            .iter()
            .zip(&p.slopes)
            .map(|((t, v), s)| ProfileRow { t: t.to_string(), value: v.to_string(), right_slope: Some(s.to_string()) })
            .collect();
        let (t, v) = p.points.last().expect("profile has endpoints");
        points.push(ProfileRow { t: t.to_string(), value: v.to_string(), right_slope: None });
        Self { r: p.r.to_string(), bound: p.bound, points }
    }
}

impl ProfileJson {
    pub fn to_profile(&self) -> Result<PLProfile, CliError> {
        let points = self
            .points
            .iter()
            .map(|row| Ok((parse_rational(&row.t)?, parse_rational(&row.value)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let slopes = self
            .points
            .iter()
            .filter_map(|row| row.right_slope.as_deref())
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PLProfile { r: parse_rational(&self.r)?, bound: self.bound, points, slopes })
    }
}

impl From<&InvariantReport> for ReportJson {
    fn from(r: &InvariantReport) -> Self {
        Self {
            s: r.s.to_string(),
            r: r.r.to_string(),
            t: r.t.to_string(),
            n: r.n,
            writhe: r.writhe,
            sl: r.sl,
            kappa: r.kappa.map(|k| match k {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from("inf"),
            }),
            band_rank_lb: r.band_rank_lb.map(|b| b.to_string()),
            bennequin_ok: r.bennequin_ok,
            profile: r.profile.as_ref().map(ProfileJson::from),
        }
    }
}

impl ReportJson {
    pub fn to_report(&self) -> Result<InvariantReport, CliError> {
        let kappa = match &self.kappa {
            None => None,
            Some(serde_json::Value::String(s)) if s == "inf" => Some(None),
            Some(v) => Some(Some(v.as_i64().ok_or_else(|| CliError::Parse(format!("bad kappa {v}")))?)),
        };
        Ok(InvariantReport {
            s: parse_rational(&self.s)?,
            r: parse_rational(&self.r)?,
            t: parse_rational(&self.t)?,
            n: self.n,
            writhe: self.writhe,
            sl: self.sl,
            kappa,
            band_rank_lb: self.band_rank_lb.as_deref().map(parse_rational).transpose()?,
            bennequin_ok: self.bennequin_ok,
            profile: self.profile.as_ref().map(|p| p.to_profile()).transpose()?,
        })
    }
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.mode {
        Mode::Value(a) => run_value(a),
        Mode::Profile(a) => run_profile(a),
        Mode::Report(a) => run_report(a),
        Mode::Verify(a) => run_verify(a),
    }
}

fn run_value(a: &PointArgs) -> Result<String, CliError> {
    let p = params(&a.r, &a.t)?;
    let input = load(&a.common)?;
    let s = s_rt(&marked(&input)?, &p).ok_or(ComputeError::Boundary)?;
    Ok(match a.common.format {
        Format::Text => format!("{s}\n"),
        Format::Csv => format!("r,t,s\n{},{},{s}\n", p.r, p.t),
        Format::Json => format!("{}\n", serde_json::json!({ "s": s.to_string(), "r": p.r.to_string(), "t": p.t.to_string() })),
    })
}

fn run_profile(a: &ProfileArgs) -> Result<String, CliError> {
    let r = parse_rational(&a.r)?;
    RationalParams::new(r, Q::from(0))?;
    let input = load(&a.common)?;
    let profile = s_profile(&marked(&input)?, r, a.grid)?;
    let rows = ProfileJson::from(&profile);
    Ok(match a.common.format {
        Format::Json => format!("{}\n", serde_json::to_string(&rows).expect("serializable")),
        Format::Csv => {
            let mut out = String::from("t,value,right_slope\n");
            for row in &rows.points {
                writeln!(out, "{},{},{}", row.t, row.value, row.right_slope.as_deref().unwrap_or("")).unwrap();
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for row in &rows.points {
                match &row.right_slope {
                    Some(s) => writeln!(out, "t = {}: {} (slope {s})", row.t, row.value).unwrap(),
                    None => writeln!(out, "t = {}: {}", row.t, row.value).unwrap(),
                }
            }
            writeln!(out, "right-veering certificate: {}", right_veering_certificate(&profile)).unwrap();
            out
        }
    })
}

pub fn build_report(a: &PointArgs) -> Result<InvariantReport, CliError> {
    let p = params(&a.r, &a.t)?;
    let input = load(&a.common)?;
    Ok(report(&input.word, &input.orientation, &p, true, Some(a.grid))?)
}

fn run_report(a: &PointArgs) -> Result<String, CliError> {
    let report = build_report(a)?;
    let json = ReportJson::from(&report);
    Ok(match a.common.format {
        Format::Json => format!("{}\n", serde_json::to_string(&json).expect("serializable")),
        Format::Csv => format!(
            "s,r,t,n,writhe,sl,kappa,band_rank_lb,bennequin_ok\n{},{},{},{},{},{},{},{},{}\n",
            json.s,
            json.r,
            json.t,
            json.n,
            json.writhe,
            json.sl,
            kappa_text(&report),
            json.band_rank_lb.as_deref().unwrap_or(""),
            json.bennequin_ok
        ),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "s_{{{},{}}} = {}", json.r, json.t, json.s).unwrap();
            writeln!(out, "n = {}, writhe = {}, sl = {}", json.n, json.writhe, json.sl).unwrap();
            writeln!(out, "kappa = {}", kappa_text(&report)).unwrap();
            if let Some(b) = &json.band_rank_lb {
                writeln!(out, "band rank >= {b}").unwrap();
            }
            writeln!(out, "bennequin sl <= s_{{0,0}}: {}", json.bennequin_ok).unwrap();
            if let Some(p) = &report.profile {
                writeln!(out, "right-veering certificate: {}", right_veering_certificate(p)).unwrap();
                let slope = right_slope(p, Q::from(0))?;
                writeln!(out, "right slope at t = 0: {slope}").unwrap();
            }
            out
        }
    })
}

fn kappa_text(r: &InvariantReport) -> String {
    match r.kappa {
        None => String::new(),
        Some(None) => "inf".into(),
        Some(Some(k)) => k.to_string(),
    }
}

fn grid_points() -> Vec<RationalParams> {
    let mut v = Vec::new();
    for a in 0..=4 {
        for c in 0..=4 {
            v.push(RationalParams::new(Q::new(a, 4), Q::new(c, 4)).expect("in range"));
        }
    }
    v
}

fn s_on_grid(word: &BraidWord) -> Result<Vec<Q>, CliError> {
    let diagram = ClosureDiagram::from_braid(word);
    check_size(&diagram)?;
    let m = marked_complex(&Cube::new(&diagram), &braid_like(word), Terms::ALL)?;
    grid_points().iter().map(|p| s_rt(&m, p).ok_or(CliError::from(ComputeError::Boundary))).collect()
}

fn run_verify(a: &VerifyArgs) -> Result<String, CliError> {
    let input = load(&a.common)?;
    let cube = &input.cube;
    let mut out = String::new();
    let mut failures = Vec::new();

    let square_zero = total_differential(cube, Terms::ALL).squares_to_zero();
    writeln!(out, "d^2 = 0: {}", ok(square_zero)).unwrap();
    if !square_zero {
        failures.push("d^2 != 0");
    }

    let depth = a.depth.unwrap_or(usize::MAX);
    let entries = differential_entries(cube, Terms::ALL.up_to(depth));
    let bad = entries.iter().filter(|e| !shift_allowed(shift(cube, e), e)).count();
    let multi = entries.iter().filter(|e| !shift_allowed_single(shift(cube, e), e.index, e.kind)).count();
    writeln!(out, "tridegree ledger: {} ({} entries, {} violations)", ok(bad == 0), entries.len(), bad).unwrap();
    writeln!(out, "entries beyond the single-tree k bound: {multi}").unwrap();
    if bad > 0 {
        failures.push("tridegree ledger");
    }

    let m = marked(&input)?;
    let cycle_ok = s_rt(&m, &RationalParams::new(Q::from(0), Q::from(0))?).is_some();
    writeln!(out, "canonical cycle nonzero in homology: {}", ok(cycle_ok)).unwrap();
    if !cycle_ok {
        failures.push("canonical cycle");
    }

    if a.pairs {
        let word = &input.word;
        let base = s_on_grid(word)?;
        let mut variants = vec![("conjugate", word.rotated())];
        if word.strands() > 1 {
            let mut l = word.letters().to_vec();
            l.extend([1, -1]);
            variants.push(("R2", BraidWord::new(word.strands(), l).expect("valid letters")));
            let mut l = vec![1];
            l.extend(word.letters());
            l.push(-1);
            variants.push(("conjugate by 1", BraidWord::new(word.strands(), l).expect("valid letters")));
        }
        for (name, v) in variants {
            match s_on_grid(&v) {
                Ok(s) => {
                    let same = s == base;
                    writeln!(out, "invariance ({name}, {v}): {}", ok(same)).unwrap();
                    if !same {
                        failures.push("invariance");
                    }
                }
                Err(CliError::Cap(_)) => writeln!(out, "invariance ({name}): skipped, above the size cap").unwrap(),
                Err(e) => return Err(e),
            }
        }
    }

    if failures.is_empty() {
        Ok(out)
    } else {
        Err(CliError::VerifyFailed(format!("{out}failed: {}", failures.join(", "))))
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}
