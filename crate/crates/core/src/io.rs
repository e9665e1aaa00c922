//! JSON configuration documents.
//!
//! ```json
//! {"model": {"kind": "hyperbolic", "kappa": 1.0, "A": 2.0, "B": 5.0},
//!  "constants": {"hbar": 1.0, "mass": 0.5},
//!  "d_min": 1.0,
//!  "centers": [{"x": 0.0, "y": 0.0, "mu": 1.0}]}
//! ```
//!
//! Unknown keys are rejected. Floats are written in shortest round-trip
//! form, so a written configuration parses back bit-identical.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Center, Configuration, GenericBounds, ManifoldModel, Point};
use crate::units::PhysicalConstants;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kappa: Option<f64>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    b: Option<f64>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n_star: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CenterDoc {
    x: f64,
    y: f64,
    mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    model: ModelDoc,
    #[serde(default)]
    constants: PhysicalConstants,
    d_min: f64,
    #[serde(default)]
    centers: Vec<CenterDoc>,
}

/// Parsed configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDocument {
    pub model: ManifoldModel,
    pub constants: PhysicalConstants,
    pub d_min: f64,
    /// Gaussian heat-kernel constants, when given.
    pub const_a: Option<f64>,
    pub const_b: Option<f64>,
    /// Largest `mu` among the listed centers.
    pub mu_star: Option<f64>,
    /// The validated configuration; `None` for generic-bound documents,
    /// which describe a manifold only through its bound constants.
    pub configuration: Option<Configuration>,
}

fn require(value: Option<f64>, key: &str, kind: &str) -> Result<f64> {
    value.ok_or_else(|| Error::Parse(format!("model kind `{kind}` requires `{key}`")))
}

fn build_model(doc: &ModelDoc) -> Result<ManifoldModel> {
    match doc.kind.as_str() {
        "flat" => {
            if doc.kappa.is_some_and(|k| k != 0.0) {
                return Err(Error::Parse("flat model must not set a nonzero `kappa`".into()));
            }
            Ok(ManifoldModel::Flat)
        }
        "hyperbolic" => ManifoldModel::hyperbolic(require(doc.kappa, "kappa", "hyperbolic")?),
        "generic" => {
            let n_star = doc.n_star.ok_or_else(|| Error::Parse("model kind `generic` requires `n_star`".into()))?;
            ManifoldModel::generic(GenericBounds {
                kappa: doc.kappa.unwrap_or(0.0),
                const_c: require(doc.c, "C", "generic")?,
                const_d: require(doc.d, "D", "generic")?,
                rho: require(doc.rho, "rho", "generic")?,
                lambda_gap: doc.lambda_gap.unwrap_or(0.0),
                n_star,
                const_a: require(doc.a, "A", "generic")?,
                const_b: require(doc.b, "B", "generic")?,
            })
        }
        other => Err(Error::Parse(format!("unknown model kind `{other}` (expected flat, hyperbolic or generic)"))),
    }
}

/// 1-based line on which the `index`-th object of the `centers` array opens.
fn center_line(text: &str, index: usize) -> Option<usize> {
    let start = text.find("\"centers\"")?;
    let mut line = 1 + text[..start].matches('\n').count();
    let mut depth = 0i32;
    let mut seen = 0usize;
    let mut in_string = false;
    let mut escaped = false;
    for ch in text[start..].chars() {
        if ch == '\n' {
            line += 1;
        }
        if in_string {
            match (escaped, ch) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_string = false,
                _ => {}
            }
            continue;
        }
        match ch {
            '"' => in_string = true,
            '[' | '{' => {
                depth += 1;
                if ch == '{' && depth == 2 {
                    if seen == index {
                        return Some(line);
                    }
                    seen += 1;
                }
            }
            ']' | '}' => {
                depth -= 1;
                if depth <= 0 {
                    return None;
                }
            }
            _ => {}
        }
    }
    None
}

/// Index of the first center named in an error message `center {i}...`.
/// For a pair `centers {i} and {j}` the later center `j` is reported.
fn center_index(msg: &str) -> Option<usize> {
    let rest = msg.split("center").nth(1)?;
    let numbers: Vec<usize> = rest
        .split(|c: char| !c.is_ascii_digit())
        .filter(|s| !s.is_empty())
        .take(if rest.starts_with('s') { 2 } else { 1 })
        .filter_map(|s| s.parse().ok())
        .collect();
    numbers.last().copied()
}

fn with_line_context(err: Error, text: &str) -> Error {
    let attach = |msg: String| match center_index(&msg).and_then(|i| center_line(text, i)) {
        Some(line) => format!("{msg} (line {line})"),
        None => msg,
    };
    match err {
        Error::InvalidConfiguration(msg) => Error::InvalidConfiguration(attach(msg)),
        Error::Domain(msg) => Error::Domain(attach(msg)),
        other => other,
    }
}

/// Parses and validates a configuration document.
pub fn parse_config_str(text: &str) -> Result<InputDocument> {
    let doc: ConfigDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let model = build_model(&doc.model)?;
    let constants = PhysicalConstants::new(doc.constants.hbar, doc.constants.mass)?;
    let mu_star = doc.centers.iter().map(|c| c.mu).reduce(f64::max);
    let configuration = match model {
        ManifoldModel::GenericBounds(_) => {
            if !(doc.d_min > 0.0 && doc.d_min.is_finite()) {
                return Err(Error::InvalidConfiguration(format!("d_min must be positive, got {}", doc.d_min)));
            }
            None
        }
        _ => {
            let centers = doc.centers.iter().map(|c| Center::new(Point::new(c.x, c.y), c.mu)).collect();
            Some(Configuration::new(model, constants, doc.d_min, centers).map_err(|e| with_line_context(e, text))?)
        }
    };
    Ok(InputDocument {
        model,
        constants,
        d_min: doc.d_min,
        const_a: doc.model.a,
        const_b: doc.model.b,
        mu_star,
        configuration,
    })
}

pub fn parse_config_file(path: impl AsRef<Path>) -> Result<InputDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_config_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn model_doc(model: &ManifoldModel, const_a: Option<f64>, const_b: Option<f64>) -> ModelDoc {
    match *model {
        ManifoldModel::Flat => ModelDoc { kind: "flat".into(), a: const_a, b: const_b, ..Default::default() },
        ManifoldModel::Hyperbolic { kappa } => {
            ModelDoc { kind: "hyperbolic".into(), kappa: Some(kappa), a: const_a, b: const_b, ..Default::default() }
        }
        ManifoldModel::GenericBounds(g) => ModelDoc {
            kind: "generic".into(),
            kappa: Some(g.kappa),
            a: Some(g.const_a),
            b: Some(g.const_b),
            c: Some(g.const_c),
            d: Some(g.const_d),
            rho: Some(g.rho),
            n_star: Some(g.n_star),
            lambda_gap: Some(g.lambda_gap),
        },
    }
}

/// Serializes a configuration, optionally recording Gaussian-bound constants.
pub fn config_to_json(config: &Configuration, const_a: Option<f64>, const_b: Option<f64>) -> Result<String> {
    let doc = ConfigDoc {
        model: model_doc(config.model(), const_a, const_b),
        constants: *config.constants(),
        d_min: config.d_min(),
        centers: config.centers().iter().map(|c| CenterDoc { x: c.point.x, y: c.point.y, mu: c.mu }).collect(),
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))
}

pub fn write_config_file(
    path: impl AsRef<Path>,
    config: &Configuration,
    const_a: Option<f64>,
    const_b: Option<f64>,
) -> Result<()> {
    let mut text = config_to_json(config, const_a, const_b)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
