//! Command implementations behind the `relent` binary. Each returns the text to
//! emit and the process exit code (0 ok, 2 inconclusive verdict); failures are
//! errors and map to exit code 1.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;

use crate::classify::{classify_embedding, ClassifyError, Verdict};
use crate::conjugacy::{apply_homeo, entropy_transfer_check, ConjugacyError};
use crate::gallery::{gallery_entry, GalleryEntry, GalleryError, Params, NAMES};
use crate::homeo::Homeomorphism;
use crate::mahavier::{entropy_sequence, resolution_sweep, EntropyError};
use crate::orbits::{orbit_census, OrbitError};
use crate::plot::{prefix_svg, relation_svg, PlotError, PlotOptions};
use crate::relation::{Body, Relation, RelationError};
use crate::scalar::{Scalar, ScalarError};
use crate::wellaligned::{certify_search, WellAlignedError};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("bad --param {0:?}: expected a=<scalar> or b=<scalar>")]
    BadParam(String),
    #[error("--format {format} is not available for `{command}`")]
    BadFormat { command: &'static str, format: &'static str },
    #[error("--d {requested} conflicts with the relation's field ℚ(√{actual})")]
    FieldConflict { requested: u32, actual: u32 },
    #[error("--param only applies to gallery relations")]
    ParamsWithoutGallery,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Gallery(#[from] GalleryError),
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Orbits(#[from] OrbitError),
    #[error(transparent)]
    Alignment(#[from] WellAlignedError),
    #[error(transparent)]
    Conjugacy(#[from] ConjugacyError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Plot(#[from] PlotError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub text: String,
    pub exit_code: i32,
}

impl CommandOutput {
    fn ok(text: String) -> Self {
        CommandOutput { text, exit_code: 0 }
    }
}

/// Options shared by the relation-consuming commands.
#[derive(Clone, Debug)]
pub struct Common {
    /// A relation file path or `gallery:<name>`.
    pub relation: String,
    pub grid: usize,
    pub max_m: usize,
    pub max_period: usize,
    pub format: Option<Format>,
    pub d: Option<u32>,
    pub params: Params,
    pub hints: Vec<Scalar>,
}

impl Common {
    pub fn new(relation: impl Into<String>) -> Self {
        Common {
            relation: relation.into(),
            grid: 64,
            max_m: 10,
            max_period: 12,
            format: None,
            d: None,
            params: Params::default(),
            hints: Vec::new(),
        }
    }

    fn format_or(&self, command: &'static str, default: Format, allowed: &[Format]) -> Result<Format, CommandError> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(CommandError::BadFormat { command, format: f.name() })
        }
    }
}

/// Parses `a=<scalar>` / `b=<scalar>` assignments.
pub fn parse_params<S: AsRef<str>>(items: &[S]) -> Result<Params, CommandError> {
    let mut p = Params::default();
    for item in items {
        let item = item.as_ref();
        let (k, v) = item.split_once('=').ok_or_else(|| CommandError::BadParam(item.into()))?;
        let v: Scalar = v.trim().parse()?;
        match k.trim() {
            "a" => p.a = Some(v),
            "b" => p.b = Some(v),
            _ => return Err(CommandError::BadParam(item.into())),
        }
    }
    Ok(p)
}

/// A loaded relation together with its gallery entry, when it came from one.
pub struct Loaded {
    pub relation: Relation,
    pub entry: Option<GalleryEntry>,
}

impl Loaded {
    fn hints(&self, extra: &[Scalar]) -> Vec<Scalar> {
        let mut h = extra.to_vec();
        if let Some(e) = &self.entry {
            h.extend(e.hints.iter().cloned());
        }
        h
    }

    fn witnesses(&self) -> &[Relation] {
        self.entry.as_ref().map_or(&[], |e| &e.witnesses)
    }

    fn name(&self) -> Option<&'static str> {
        self.entry.as_ref().map(|e| e.name)
    }
}

fn read(path: &Path) -> Result<String, CommandError> {
    fs::read_to_string(path).map_err(|source| CommandError::Io { path: path.to_path_buf(), source })
}

/// Re-homes a relation in ℚ(√d); fails if it already uses a different root.
fn in_field(g: Relation, d: u32) -> Result<Relation, CommandError> {
    if g.d() == d {
        return Ok(g);
    }
    let amb = g.ambient().clone();
    let conflict = |_| CommandError::FieldConflict { requested: d, actual: g.d() };
    Ok(match g.body() {
        Body::Points(p) => Relation::points_in(amb, d, p.clone()).map_err(conflict)?,
        Body::Segments(s) => Relation::segments_in(amb, d, s.clone()).map_err(conflict)?,
        Body::Grid(_) => g,
    })
}

pub fn load_relation(source: &str, params: &Params, d: Option<u32>) -> Result<Loaded, CommandError> {
    let (relation, entry) = match source.strip_prefix("gallery:") {
        Some(name) => {
            let e = gallery_entry(name, params)?;
            (e.relation.clone(), Some(e))
        }
        None => {
            if *params != Params::default() {
                return Err(CommandError::ParamsWithoutGallery);
            }
            (Relation::from_json(&read(Path::new(source))?)?, None)
        }
    };
    let relation = match d {
        Some(d) => in_field(relation, d)?,
        None => relation,
    };
    Ok(Loaded { relation, entry })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn raw(s: &str) -> Value {
    serde_json::from_str(s).expect("library json is valid")
}

pub fn cmd_entropy(c: &Common) -> Result<CommandOutput, CommandError> {
    let fmt = c.format_or("entropy", Format::Json, &[Format::Json, Format::Csv])?;
    let loaded = load_relation(&c.relation, &c.params, c.d)?;
    let report = entropy_sequence(&loaded.relation, c.grid, c.max_m)?;
    Ok(CommandOutput::ok(match fmt {
        Format::Csv => report.to_csv(),
        _ => pretty(&raw(&report.to_json())),
    }))
}

/// Spectral estimates over a list of grid resolutions.
pub fn cmd_sweep(c: &Common, ns: &[usize]) -> Result<CommandOutput, CommandError> {
    let fmt = c.format_or("entropy", Format::Json, &[Format::Json, Format::Csv])?;
    let loaded = load_relation(&c.relation, &c.params, c.d)?;
    let sweep = resolution_sweep(&loaded.relation, ns)?;
    Ok(CommandOutput::ok(match fmt {
        Format::Csv => {
            let mut out = String::from("n,spectral,lower,upper\n");
            for (n, e) in &sweep {
                out.push_str(&format!("{n},{:.12},{:.12},{:.12}\n", e.value, e.lower, e.upper));
            }
            out
        }
        _ => pretty(&json!(sweep.iter().map(|(n, e)| json!({"n": n, "spectral": e})).collect::<Vec<_>>())),
    }))
}

pub fn cmd_orbits(c: &Common) -> Result<CommandOutput, CommandError> {
    c.format_or("orbits", Format::Json, &[Format::Json])?;
    let loaded = load_relation(&c.relation, &c.params, c.d)?;
    let census = orbit_census(&loaded.relation, c.max_period)?;
    Ok(CommandOutput::ok(pretty(&raw(&census.to_json()))))
}

pub fn cmd_certify(c: &Common) -> Result<CommandOutput, CommandError> {
    c.format_or("certify", Format::Json, &[Format::Json])?;
    let loaded = load_relation(&c.relation, &c.params, c.d)?;
    let search = certify_search(&loaded.relation, &loaded.hints(&c.hints))?;
    Ok(CommandOutput::ok(match search.certificate {
        Some(cert) => pretty(&cert.to_json_value()),
        None if search.exhaustive => "none (exhaustive)\n".into(),
        None => format!("none ({} levels tried; search is not exhaustive)\n", search.levels_tried),
    }))
}

pub fn cmd_conjugate(c: &Common, homeo: &Path) -> Result<CommandOutput, CommandError> {
    c.format_or("conjugate", Format::Json, &[Format::Json])?;
    let loaded = load_relation(&c.relation, &c.params, c.d)?;
    let phi = Homeomorphism::from_json(&read(homeo)?)?;
    let h = apply_homeo(&loaded.relation, &phi)?;
    let transfer = entropy_transfer_check(&loaded.relation, &h, &phi, c.grid, c.max_m)?;
    Ok(CommandOutput::ok(pretty(&json!({
        "relation": raw(&h.to_json()),
        "transfer": transfer,
    }))))
}

/// `prefix_m` switches to the Mahavier-prefix scatter (finite relations only).
pub fn cmd_plot(c: &Common, prefix_m: Option<usize>) -> Result<CommandOutput, CommandError> {
    c.format_or("plot", Format::Svg, &[Format::Svg])?;
    let loaded = load_relation(&c.relation, &c.params, c.d)?;
    let opts = PlotOptions { title: loaded.name().map(String::from), ..PlotOptions::default() };
    Ok(CommandOutput::ok(match prefix_m {
        Some(m) => prefix_svg(&loaded.relation, m, &opts)?,
        None => relation_svg(&loaded.relation, &opts),
    }))
}

pub fn cmd_report(c: &Common) -> Result<CommandOutput, CommandError> {
    c.format_or("report", Format::Json, &[Format::Json])?;
    let loaded = load_relation(&c.relation, &c.params, c.d)?;
    let g = &loaded.relation;
    let cls = classify_embedding(g, loaded.witnesses(), &loaded.hints(&c.hints), c.max_period, c.grid)?;
    let mut v = raw(&cls.to_json());
    v["relation"] = json!(c.relation);
    if g.as_grid().is_none() {
        v["usc_graph"] = json!(g.is_usc_graph()?);
    }
    if let Some(e) = &loaded.entry {
        v["parameters"] = json!({ "a": e.a, "b": e.b });
        v["expected"] = json!(e.expected);
    }
    let exit_code = if cls.verdict == Verdict::Inconclusive { 2 } else { 0 };
    Ok(CommandOutput { text: pretty(&v), exit_code })
}

/// Lists the gallery, or emits one entry's relation file.
pub fn cmd_gallery(name: Option<&str>, params: &Params) -> Result<CommandOutput, CommandError> {
    match name {
        Some(name) => Ok(CommandOutput::ok(gallery_entry(name.trim_start_matches("gallery:"), params)?.relation.to_json() + "\n")),
        None => {
            let list: Vec<Value> = NAMES
                .iter()
                .map(|n| {
                    let e = gallery_entry(n, &Params::default()).expect("defaults are valid");
                    json!({
                        "name": e.name,
                        "description": e.description,
                        "a": e.a,
                        "b": e.b,
                        "kind": e.relation.kind(),
                        "expected": e.expected,
                    })
                })
                .collect();
            Ok(CommandOutput::ok(pretty(&Value::Array(list))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common(rel: &str) -> Common {
        Common::new(rel)
    }

    #[test]
    fn params_parse() {
        let p = parse_params(&["a=1+sqrt(2)", "b=1/3"]).unwrap();
        assert_eq!(p.b, Some(Scalar::rational(1, 3)));
        assert!(matches!(parse_params(&["c=1"]), Err(CommandError::BadParam(_))));
        assert!(parse_params(&["a"]).is_err());
    }

    #[test]
    fn orbits_on_h_thm2() {
        let out = cmd_orbits(&common("gallery:H_thm2")).unwrap();
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["proof_level"], "proven");
        assert_eq!(v["orbits"].as_array().unwrap().len(), 1);
        assert_eq!(v["orbits"][0]["points"][0], "0/1");
    }

    #[test]
    fn certify_counterexample_is_none() {
        let out = cmd_certify(&common("gallery:counterexample")).unwrap();
        assert_eq!(out.text, "none (exhaustive)\n");
    }

    #[test]
    fn entropy_csv_and_format_guard() {
        let mut c = common("gallery:full_shift");
        c.format = Some(Format::Csv);
        c.max_m = 3;
        let out = cmd_entropy(&c).unwrap();
        assert!(out.text.starts_with("m,N_m,a_m_over_m\n1,"));
        c.format = Some(Format::Svg);
        assert!(matches!(cmd_entropy(&c), Err(CommandError::BadFormat { .. })));
    }

    #[test]
    fn field_override() {
        assert_eq!(load_relation("gallery:tent", &Params::default(), Some(5)).unwrap().relation.d(), 5);
        assert!(matches!(load_relation("gallery:H_ab", &Params::default(), Some(5)), Err(CommandError::FieldConflict { .. })));
    }

    #[test]
    fn report_exit_codes() {
        let mut c = common("gallery:taletoti");
        c.max_period = 8;
        let out = cmd_report(&c).unwrap();
        assert_eq!(out.exit_code, 0);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["verdict"], "i_embedded");
        assert_eq!(v["usc_graph"], "surjective_graph");
    }

    #[test]
    fn gallery_listing_and_entry() {
        let list: Value = serde_json::from_str(&cmd_gallery(None, &Params::default()).unwrap().text).unwrap();
        assert_eq!(list.as_array().unwrap().len(), NAMES.len());
        let one = cmd_gallery(Some("counterexample"), &Params::default()).unwrap();
        assert_eq!(Relation::from_json(&one.text).unwrap(), gallery_entry("counterexample", &Params::default()).unwrap().relation);
    }
}
