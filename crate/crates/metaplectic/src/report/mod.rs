//! Verification suite: runs the registered checks, collects one report per check and
//! serializes the result deterministically.

mod checks;
pub mod tables;

use std::collections::BTreeMap;
use std::io;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

use crate::error::{Error, Result};
use checks::{Check, Ctx, Param, CHECKS};

/// Environment variable naming a JSON configuration file.
pub const CONFIG_ENV: &str = "METAPLECTIC_CONFIG";

pub const SUITE_NAME: &str = "metaplectic";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Ranks to run; each check uses the ones it is defined for.
    pub r_values: Vec<usize>,
    /// Truncation degree D.
    pub degree: u32,
    /// Gauss–Hermite order per dimension, keyed by r.
    pub quad_orders: BTreeMap<usize, usize>,
    /// Tolerance overrides keyed by check name or by family (the part before the dot).
    pub tolerances: BTreeMap<String, f64>,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
    pub seed: u64,
    /// Include runtime_ms in reports. Off by default so output is byte-stable.
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            r_values: vec![1, 2, 3, 4, 5],
            degree: 12,
            quad_orders: [(1, 40), (2, 24)].into_iter().collect(),
            tolerances: BTreeMap::new(),
            tol_scale: 1.0,
            seed: 0,
            timings: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.r_values.is_empty() || self.r_values.contains(&0) {
            return bad("r_values must be a non-empty list of positive ranks");
        }
        if self.degree < 4 {
            return bad("degree must be at least 4");
        }
        if self.quad_orders.iter().any(|(&r, &o)| r == 0 || o == 0) {
            return bad("quadrature orders must be positive");
        }
        if !(self.tol_scale.is_finite() && self.tol_scale > 0.0) {
            return bad("tol_scale must be positive");
        }
        if let Some((k, _)) = self.tolerances.iter().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidConfig(format!("tolerance for {k} must be non-negative")));
        }
        Ok(())
    }

    /// Order for r, falling back to 40 for r = 1 and 24 otherwise.
    pub fn quad_order(&self, r: usize) -> usize {
        self.quad_orders.get(&r).copied().unwrap_or(if r == 1 { 40 } else { 24 })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The file named by [`CONFIG_ENV`] if set, otherwise the defaults.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    fn tolerance(&self, check: &Check) -> f64 {
        let family = check.name.split('.').next().unwrap_or("");
        let base = self
            .tolerances
            .get(check.name)
            .or_else(|| self.tolerances.get(family))
            .copied()
            .unwrap_or(check.tolerance);
        base * self.tol_scale
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    /// Infinite when the check errored; serialized as null.
    pub max_residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,status,max_residual,tolerance\n");
        for c in &self.checks {
            out += &format!(
                "{},{},{},{}\n",
                c.name,
                status_str(c.status),
                fmt_f64(c.max_residual),
                fmt_f64(c.tolerance)
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4);
        let mut out = String::new();
        for c in &self.checks {
            out += &format!(
                "{:<width$}  {}  {}  (tol {})",
                c.name,
                status_str(c.status),
                fmt_f64(c.max_residual),
                fmt_f64(c.tolerance)
            );
            if let Some(ms) = c.runtime_ms {
                out += &format!("  {ms} ms");
            }
            if let Some(e) = &c.error {
                out += &format!("  error: {e}");
            }
            out.push('\n');
        }
        let failed = self.checks.iter().filter(|c| c.status == Status::Fail).count();
        out += &format!("{} checks, {} failed\n", self.checks.len(), failed);
        out
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Complex numbers as "re+imi".
pub fn fmt_complex(z: num_complex::Complex64) -> String {
    let im = fmt_f64(z.im);
    if im.starts_with('-') {
        format!("{}{}i", fmt_f64(z.re), im)
    } else {
        format!("{}+{}i", fmt_f64(z.re), im)
    }
}

/// Pretty JSON whose floats carry 17 significant digits.
struct SciFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SciFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes with [`fmt_f64`] floats, two-space indentation and a trailing newline.
pub fn to_json_string<T: Serialize>(v: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter(PrettyFormatter::new()));
    v.serialize(&mut ser).expect("in-memory serialization");
    let mut s = String::from_utf8(buf).expect("serde_json writes UTF-8");
    s.push('\n');
    s
}

/// Names of all registered checks, sorted.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

fn is_glob(s: &str) -> bool {
    s.contains(['*', '?', '['])
}

/// Checks selected by `filter`. Without a filter every check except the negative
/// controls runs; those only run when the filter names them explicitly.
fn select(filter: Option<&str>) -> Result<Vec<&'static Check>> {
    let Some(f) = filter else {
        return Ok(CHECKS.iter().filter(|c| !c.name.starts_with("negative.")).collect());
    };
    let pattern = glob::Pattern::new(f).map_err(|e| Error::InvalidConfig(format!("bad filter {f:?}: {e}")))?;
    let explicit_negative = f.starts_with("negative");
    let chosen: Vec<&Check> = CHECKS
        .iter()
        .filter(|c| pattern.matches(c.name))
        .filter(|c| explicit_negative || !c.name.starts_with("negative."))
        .collect();
    if chosen.is_empty() && !is_glob(f) {
        return Err(Error::UnknownCheck(f.to_string()));
    }
    Ok(chosen)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn run_one(cfg: &SuiteConfig, check: &Check) -> Option<CheckReport> {
    let ranks: Vec<usize> = if check.ranks.is_empty() {
        Vec::new()
    } else {
        let rs: Vec<usize> = cfg.r_values.iter().copied().filter(|r| check.ranks.contains(r)).collect();
        if rs.is_empty() {
            return None;
        }
        rs
    };
    let mut params = BTreeMap::new();
    if !ranks.is_empty() {
        params.insert("r".to_string(), Value::from(ranks.clone()));
    }
    for p in check.params {
        match p {
            Param::Degree => {
                params.insert("D".to_string(), Value::from(cfg.degree));
            }
            Param::QuadOrder => {
                let orders: BTreeMap<String, Value> =
                    ranks.iter().map(|&r| (r.to_string(), Value::from(cfg.quad_order(r)))).collect();
                params.insert("quad_order".to_string(), Value::from(serde_json::Map::from_iter(orders)));
            }
            Param::Seed => {
                params.insert("seed".to_string(), Value::from(cfg.seed));
            }
        }
    }
    let ctx = Ctx {
        cfg,
        ranks,
        salt: fnv1a(check.name),
    };
    let tolerance = cfg.tolerance(check);
    let start = Instant::now();
    let outcome = (check.run)(&ctx);
    let elapsed = start.elapsed().as_millis() as u64;
    let (max_residual, error) = match outcome {
        Ok(v) => (v, None),
        Err(e) => (f64::INFINITY, Some(e.to_string())),
    };
    let status = if error.is_none() && max_residual <= tolerance {
        Status::Pass
    } else {
        Status::Fail
    };
    Some(CheckReport {
        name: check.name.to_string(),
        params,
        status,
        max_residual,
        tolerance,
        runtime_ms: cfg.timings.then_some(elapsed),
        error,
    })
}

/// Runs the selected checks in parallel and returns their reports sorted by name.
pub fn run_suite(cfg: &SuiteConfig, filter: Option<&str>) -> Result<SuiteReport> {
    cfg.validate()?;
    let selected = select(filter)?;
    let mut checks: Vec<CheckReport> = selected.par_iter().filter_map(|c| run_one(cfg, c)).collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(SuiteReport {
        suite: SUITE_NAME.to_string(),
        config: cfg.clone(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_and_complex_formatting() {
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_complex(num_complex::Complex64::new(1.0, -2.0)), "1.0000000000000000e0-2.0000000000000000e0i");
        assert_eq!(fmt_complex(num_complex::Complex64::new(0.0, 0.25)), "0.0000000000000000e0+2.5000000000000000e-1i");
    }

    #[test]
    fn json_floats_are_scientific() {
        let s = to_json_string(&serde_json::json!({"x": 0.1, "n": 3, "bad": f64::NAN}));
        assert!(s.contains("\"x\": 1.0000000000000001e-1"));
        assert!(s.contains("\"n\": 3"));
        assert!(s.contains("\"bad\": null"));
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["x"], 0.1);
    }

    #[test]
    fn selection_rules() {
        assert!(select(Some("lie.sl2_triple")).unwrap().len() == 1);
        assert!(select(Some("nothing.*")).unwrap().is_empty());
        assert!(matches!(select(Some("lie.bogus")), Err(Error::UnknownCheck(_))));
        assert!(select(None).unwrap().iter().all(|c| !c.name.starts_with("negative")));
        assert!(select(Some("*")).unwrap().iter().all(|c| !c.name.starts_with("negative")));
        assert_eq!(select(Some("negative.*")).unwrap().len(), 1);
    }

    #[test]
    fn config_round_trip_and_validation() {
        let cfg = SuiteConfig::default();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(SuiteConfig::from_json(&text).unwrap(), cfg);
        assert!(SuiteConfig::from_json(r#"{"degree": 12}"#).is_ok());
        assert!(matches!(SuiteConfig::from_json(r#"{"r_values": []}"#), Err(Error::InvalidConfig(_))));
        assert!(matches!(SuiteConfig::from_json(r#"{"bogus": 1}"#), Err(Error::InvalidConfig(_))));
        assert!(matches!(SuiteConfig::from_json(r#"{"tol_scale": 0}"#), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn tolerance_overrides() {
        let mut cfg = SuiteConfig::default();
        let check = CHECKS.iter().find(|c| c.name == "fock.adjoint").unwrap();
        assert_eq!(cfg.tolerance(check), 1e-12);
        cfg.tolerances.insert("fock".into(), 1e-6);
        assert_eq!(cfg.tolerance(check), 1e-6);
        cfg.tolerances.insert("fock.adjoint".into(), 1e-3);
        cfg.tol_scale = 2.0;
        assert_eq!(cfg.tolerance(check), 2e-3);
    }
}
