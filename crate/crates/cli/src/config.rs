//! Flat key-value experiment configuration with dotted sections.
//!
//! The format is one `key = value` pair per line, `#` comment lines, and
//! dotted section prefixes (`model.*`, `data.*`, `run.*`, `probe.*`,
//! `output.*`). Lists are comma separated; probe vectors are semicolon
//! separated specs. Every value has a canonical echo so a report can
//! reproduce the effective configuration, defaults included.

use finsec_core::{
    find_builtin, Classification, CoeffRule, CoeffVector, Complex64, EigenvalueRule, PowerTail,
    Probe, ProbeSet, RunConfig, SpectralModel, SuiteKind, ToleranceContext,
};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("invalid config: {field}: {problem}")]
pub struct ConfigError {
    pub field: String,
    pub problem: String,
}

fn bad(field: &str, problem: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        problem: problem.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    pub fn name(&self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// Fully validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub model_name: Option<String>,
    pub model: SpectralModel,
    pub data: CoeffVector,
    pub run: RunConfig,
    pub probes: ProbeSet,
    pub probe_specs: Vec<String>,
    pub perturbation_scale: f64,
    pub diagnostics: Vec<SuiteKind>,
    pub output_path: PathBuf,
    pub output_format: ReportFormat,
    /// Cap applied from the environment, recorded for the report.
    pub schedule_cap: Option<usize>,
}

pub const SCHEDULE_MAX_ENV: &str = "FINSEC_SCHEDULE_MAX";

const KNOWN_KEYS: &[&str] = &[
    "model.name",
    "model.kind",
    "model.rule",
    "model.prefix",
    "model.tail",
    "model.diag",
    "model.diag-tail",
    "model.offdiag",
    "model.offdiag-tail",
    "model.classification",
    "data.coeffs",
    "data.tail-scale",
    "data.tail-exponent",
    "run.schedule",
    "run.divergence-threshold",
    "run.plateau-ratio",
    "run.residual-tol",
    "run.rank-rel-tol",
    "run.exact-rank",
    "run.diagnostics",
    "probe.vectors",
    "probe.lambdas",
    "probe.perturbation-scale",
    "output.path",
    "output.format",
];

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut pairs: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(bad(
                &format!("line {}", lineno + 1),
                format!("expected `key = value`, got {line:?}"),
            ));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(bad(&key, "unknown key"));
        }
        if pairs.insert(key.clone(), value).is_some() {
            return Err(bad(&key, "duplicate key"));
        }
    }
    build_config(&pairs)
}

fn build_config(pairs: &BTreeMap<String, String>) -> Result<ExperimentConfig, ConfigError> {
    let get = |key: &str| pairs.get(key).map(|s| s.as_str());

    let (model_name, model) = parse_model(pairs)?;
    let data = parse_data(pairs)?;

    let schedule = match get("run.schedule") {
        Some(raw) => parse_usize_list("run.schedule", raw)?,
        None => finsec_core::default_schedule(),
    };
    let run = RunConfig {
        schedule,
        divergence_threshold: parse_f64_or("run.divergence-threshold", get("run.divergence-threshold"), 1e8)?,
        plateau_ratio: parse_f64_or("run.plateau-ratio", get("run.plateau-ratio"), 1.5)?,
        residual_tol: parse_f64_or("run.residual-tol", get("run.residual-tol"), 1e-8)?,
        tolerance: ToleranceContext {
            rank_rel_tol: match get("run.rank-rel-tol") {
                Some(raw) => Some(parse_f64("run.rank-rel-tol", raw)?),
                None => None,
            },
            exact_rank: match get("run.exact-rank") {
                Some(raw) => Some(
                    raw.parse::<usize>()
                        .map_err(|_| bad("run.exact-rank", "expected a non-negative integer"))?,
                ),
                None => None,
            },
        },
    };
    run.validate()
        .map_err(|e| bad("run.schedule", e.to_string()))?;

    let diagnostics = match get("run.diagnostics") {
        Some(raw) => raw
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| parse_suite(name).ok_or_else(|| bad("run.diagnostics", format!("unknown suite {name:?}"))))
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };

    let probe_specs: Vec<String> = match get("probe.vectors") {
        Some(raw) => raw
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect(),
        None => default_probe_specs(),
    };
    let mut probes = Vec::new();
    for spec in &probe_specs {
        probes.push(Probe::new(spec.clone(), parse_probe_vector(spec)?));
    }
    let lambdas = match get("probe.lambdas") {
        Some(raw) => raw
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse_complex("probe.lambdas", s))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(1.0, 1.0),
        ],
    };
    let probes = ProbeSet::new(probes, lambdas)
        .map_err(|e| bad("probe.lambdas", e.to_string()))?;

    let perturbation_scale = parse_f64_or("probe.perturbation-scale", get("probe.perturbation-scale"), 1.0)?;
    if !(perturbation_scale >= 0.0) || !perturbation_scale.is_finite() {
        return Err(bad(
            "probe.perturbation-scale",
            "must be a finite non-negative value",
        ));
    }

    let output_path = PathBuf::from(get("output.path").unwrap_or("report.csv"));
    let output_format = match get("output.format") {
        Some(raw) => raw
            .parse::<ReportFormat>()
            .map_err(|e| bad("output.format", e))?,
        None => ReportFormat::Csv,
    };

    Ok(ExperimentConfig {
        model_name,
        model,
        data,
        run,
        probes,
        probe_specs,
        perturbation_scale,
        diagnostics,
        output_path,
        output_format,
        schedule_cap: None,
    })
}

fn parse_model(
    pairs: &BTreeMap<String, String>,
) -> Result<(Option<String>, SpectralModel), ConfigError> {
    let get = |key: &str| pairs.get(key).map(|s| s.as_str());
    if let Some(name) = get("model.name") {
        if get("model.kind").is_some() {
            return Err(bad("model.kind", "cannot be combined with model.name"));
        }
        let entry = find_builtin(name)
            .ok_or_else(|| bad("model.name", format!("unknown built-in model {name:?}")))?;
        return Ok((Some(name.to_string()), entry.model));
    }
    let kind = get("model.kind").ok_or_else(|| bad("model.kind", "missing (or set model.name)"))?;
    let classification = match get("model.classification") {
        Some(raw) => parse_classification(raw)
            .ok_or_else(|| bad("model.classification", format!("unknown label {raw:?}")))?,
        None => Classification::Unknown,
    };
    let model = match kind {
        "diagonal" => {
            let rule = match get("model.rule")
                .ok_or_else(|| bad("model.rule", "missing for diagonal model"))?
            {
                "linear" => EigenvalueRule::Linear,
                "harmonic" => EigenvalueRule::Harmonic,
                "kernel-gap" => EigenvalueRule::KernelGap,
                "custom" => {
                    let prefix = match get("model.prefix") {
                        Some(raw) => parse_f64_list("model.prefix", raw)?,
                        None => Vec::new(),
                    };
                    let tail = parse_f64(
                        "model.tail",
                        get("model.tail")
                            .ok_or_else(|| bad("model.tail", "missing for custom rule"))?,
                    )?;
                    EigenvalueRule::Custom { prefix, tail }
                }
                other => return Err(bad("model.rule", format!("unknown rule {other:?}"))),
            };
            SpectralModel::diagonal(rule).with_classification(classification)
        }
        "jacobi" => {
            let diag = parse_coeff_rule("model.diag", "model.diag-tail", pairs)?;
            let offdiag = parse_coeff_rule("model.offdiag", "model.offdiag-tail", pairs)?;
            SpectralModel::jacobi(diag, offdiag).with_classification(classification)
        }
        other => return Err(bad("model.kind", format!("unknown kind {other:?}"))),
    };
    Ok((None, model))
}

fn parse_coeff_rule(
    key: &str,
    tail_key: &str,
    pairs: &BTreeMap<String, String>,
) -> Result<CoeffRule, ConfigError> {
    let raw = pairs
        .get(key)
        .ok_or_else(|| bad(key, "missing for jacobi model"))?;
    let values = parse_f64_list(key, raw)?;
    if values.is_empty() {
        return Err(bad(key, "expected at least one value"));
    }
    if values.len() == 1 && !pairs.contains_key(tail_key) {
        return Ok(CoeffRule::Constant(values[0]));
    }
    let tail = match pairs.get(tail_key) {
        Some(raw) => parse_f64(tail_key, raw)?,
        None => return Err(bad(tail_key, "required when the prefix is a list")),
    };
    Ok(CoeffRule::Listed {
        prefix: values,
        tail,
    })
}

fn parse_data(pairs: &BTreeMap<String, String>) -> Result<CoeffVector, ConfigError> {
    let get = |key: &str| pairs.get(key).map(|s| s.as_str());
    let coeffs = match get("data.coeffs") {
        Some(raw) => parse_f64_list("data.coeffs", raw)?,
        None => Vec::new(),
    };
    match (get("data.tail-scale"), get("data.tail-exponent")) {
        (None, None) => {
            CoeffVector::from_coeffs(coeffs).map_err(|e| bad("data.coeffs", e.to_string()))
        }
        (Some(scale), Some(exponent)) => CoeffVector::with_tail(
            coeffs,
            PowerTail {
                scale: parse_f64("data.tail-scale", scale)?,
                exponent: parse_f64("data.tail-exponent", exponent)?,
            },
        )
        .map_err(|e| bad("data.tail-exponent", e.to_string())),
        _ => Err(bad(
            "data.tail-scale",
            "tail-scale and tail-exponent must be set together",
        )),
    }
}

pub fn parse_suite(name: &str) -> Option<SuiteKind> {
    match name {
        "resolvent" => Some(SuiteKind::Resolvent),
        "graph" => Some(SuiteKind::Graph),
        "projection" => Some(SuiteKind::Projection),
        "moving-target" => Some(SuiteKind::MovingTarget),
        "mp-identities" => Some(SuiteKind::MpIdentities),
        _ => None,
    }
}

fn parse_classification(raw: &str) -> Option<Classification> {
    match raw {
        "stable" => Some(Classification::Stable),
        "unstable" => Some(Classification::Unstable),
        "stable-with-kernel" => Some(Classification::StableWithKernel),
        "unknown" => Some(Classification::Unknown),
        _ => None,
    }
}

fn default_probe_specs() -> Vec<String> {
    vec![
        "e1".into(),
        "e2".into(),
        "e3".into(),
        "decay:2:64".into(),
        "decay:1.5:64".into(),
    ]
}

/// Probe vector literal: `e<k>`, `coeffs:<list>`, or `decay:<p>:<m>` for the
/// finitely truncated vector `x_k = k^-p`, `k <= m`.
pub fn parse_probe_vector(spec: &str) -> Result<CoeffVector, ConfigError> {
    if let Some(index) = spec.strip_prefix('e') {
        if let Ok(k) = index.parse::<usize>() {
            if k >= 1 {
                return Ok(CoeffVector::basis(k));
            }
        }
    }
    if let Some(rest) = spec.strip_prefix("coeffs:") {
        let coeffs = parse_f64_list("probe.vectors", rest)?;
        return CoeffVector::from_coeffs(coeffs).map_err(|e| bad("probe.vectors", e.to_string()));
    }
    if let Some(rest) = spec.strip_prefix("decay:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() == 2 {
            let p = parse_f64("probe.vectors", parts[0])?;
            let m = parts[1]
                .parse::<usize>()
                .map_err(|_| bad("probe.vectors", "decay length must be an integer"))?;
            if p > 0.0 && m >= 1 {
                let coeffs: Vec<f64> = (1..=m).map(|k| (k as f64).powf(-p)).collect();
                return CoeffVector::from_coeffs(coeffs)
                    .map_err(|e| bad("probe.vectors", e.to_string()));
            }
        }
    }
    Err(bad(
        "probe.vectors",
        format!("unrecognized probe spec {spec:?} (expected e<k>, coeffs:<list>, decay:<p>:<m>)"),
    ))
}

/// Complex literal in `a+bi` form: `i`, `2i`, `1+1i`, `1-2i`, `-1+0.5i`, `1+i`.
pub fn parse_complex(field: &str, raw: &str) -> Result<Complex64, ConfigError> {
    let s = raw.trim();
    if s.is_empty() {
        return Err(bad(field, "empty complex literal"));
    }
    let parse_part = |part: &str, what: &str| -> Result<f64, ConfigError> {
        part.parse::<f64>()
            .map_err(|_| bad(field, format!("cannot parse {what} of {raw:?}")))
    };
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Find the split between real and imaginary parts: the last sign that
        // is not leading and not part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx] as char;
            if (c == '+' || c == '-')
                && !matches!(bytes[idx - 1] as char, 'e' | 'E')
            {
                split = Some(idx);
                break;
            }
        }
        let (re_part, im_part) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_part.is_empty() {
            0.0
        } else {
            parse_part(re_part, "real part")?
        };
        let im = match im_part {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => parse_part(other, "imaginary part")?,
        };
        if !re.is_finite() || !im.is_finite() {
            return Err(bad(field, format!("non-finite complex literal {raw:?}")));
        }
        Ok(Complex64::new(re, im))
    } else {
        let re = parse_part(s, "real part")?;
        Ok(Complex64::new(re, 0.0))
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}{}i", z.re, z.im)
    }
}

fn parse_f64(field: &str, raw: &str) -> Result<f64, ConfigError> {
    let v = raw
        .trim()
        .parse::<f64>()
        .map_err(|_| bad(field, format!("cannot parse {raw:?} as a number")))?;
    if !v.is_finite() {
        return Err(bad(field, "value must be finite"));
    }
    Ok(v)
}

fn parse_f64_or(field: &str, raw: Option<&str>, default: f64) -> Result<f64, ConfigError> {
    match raw {
        Some(raw) => parse_f64(field, raw),
        None => Ok(default),
    }
}

fn parse_f64_list(field: &str, raw: &str) -> Result<Vec<f64>, ConfigError> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_f64(field, s))
        .collect()
}

fn parse_usize_list(field: &str, raw: &str) -> Result<Vec<usize>, ConfigError> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| bad(field, format!("cannot parse {s:?} as an integer")))
        })
        .collect()
}

impl ExperimentConfig {
    /// Drops schedule entries above the cap; fails when nothing is left.
    pub fn apply_schedule_cap(&mut self, cap: usize) -> Result<(), ConfigError> {
        self.schedule_cap = Some(cap);
        self.run.schedule.retain(|&n| n <= cap);
        if self.run.schedule.is_empty() {
            return Err(bad(
                "run.schedule",
                format!("empty after applying {SCHEDULE_MAX_ENV}={cap}"),
            ));
        }
        Ok(())
    }

    /// Every effective configuration value, defaults included, in a fixed
    /// canonical key order.
    pub fn effective_metadata(&self) -> Vec<(String, String)> {
        let mut meta: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: String| meta.push((k.to_string(), v));

        if let Some(name) = &self.model_name {
            push("model.name", name.clone());
        }
        match &self.model {
            SpectralModel::Diagonal { rule, .. } => {
                push("model.kind", "diagonal".into());
                match rule {
                    EigenvalueRule::Linear => push("model.rule", "linear".into()),
                    EigenvalueRule::Harmonic => push("model.rule", "harmonic".into()),
                    EigenvalueRule::KernelGap => push("model.rule", "kernel-gap".into()),
                    EigenvalueRule::Custom { prefix, tail } => {
                        push("model.rule", "custom".into());
                        push("model.prefix", join_f64(prefix));
                        push("model.tail", format!("{tail}"));
                    }
                }
            }
            SpectralModel::Jacobi {
                diagonal,
                offdiagonal,
                ..
            } => {
                push("model.kind", "jacobi".into());
                let (d, dt) = describe_rule(diagonal);
                push("model.diag", d);
                if let Some(t) = dt {
                    push("model.diag-tail", t);
                }
                let (o, ot) = describe_rule(offdiagonal);
                push("model.offdiag", o);
                if let Some(t) = ot {
                    push("model.offdiag-tail", t);
                }
            }
        }
        push(
            "model.classification",
            match self.model.classification() {
                Classification::Stable => "stable".into(),
                Classification::Unstable => "unstable".into(),
                Classification::StableWithKernel => "stable-with-kernel".into(),
                Classification::Unknown => "unknown".into(),
            },
        );

        push("data.coeffs", join_f64(self.data.head()));
        match self.data.tail() {
            Some(t) => {
                push("data.tail-scale", format!("{}", t.scale));
                push("data.tail-exponent", format!("{}", t.exponent));
            }
            None => {
                push("data.tail-scale", "none".into());
                push("data.tail-exponent", "none".into());
            }
        }

        push(
            "run.schedule",
            self.run
                .schedule
                .iter()
                .map(|n| n.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        push(
            "run.divergence-threshold",
            format!("{}", self.run.divergence_threshold),
        );
        push("run.plateau-ratio", format!("{}", self.run.plateau_ratio));
        push("run.residual-tol", format!("{}", self.run.residual_tol));
        push(
            "run.rank-rel-tol",
            match self.run.tolerance.rank_rel_tol {
                Some(t) => format!("{t}"),
                None => "default:1e-12*dim".into(),
            },
        );
        push(
            "run.exact-rank",
            match self.run.tolerance.exact_rank {
                Some(r) => r.to_string(),
                None => "none".into(),
            },
        );
        push(
            "run.diagnostics",
            if self.diagnostics.is_empty() {
                "none".into()
            } else {
                self.diagnostics
                    .iter()
                    .map(|s| s.name())
                    .collect::<Vec<_>>()
                    .join(",")
            },
        );

        push("probe.vectors", self.probe_specs.join(";"));
        push(
            "probe.lambdas",
            self.probes
                .lambdas
                .iter()
                .map(|&z| format_complex(z))
                .collect::<Vec<_>>()
                .join(","),
        );
        push(
            "probe.perturbation-scale",
            format!("{}", self.perturbation_scale),
        );

        push("output.path", self.output_path.display().to_string());
        push("output.format", self.output_format.name().to_string());
        if let Some(cap) = self.schedule_cap {
            push("env.schedule-max", cap.to_string());
        }
        meta
    }
}

fn describe_rule(rule: &CoeffRule) -> (String, Option<String>) {
    match rule {
        CoeffRule::Constant(c) => (format!("{c}"), None),
        CoeffRule::Listed { prefix, tail } => (join_f64(prefix), Some(format!("{tail}"))),
    }
}

fn join_f64(values: &[f64]) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_builtin_reference() {
        let config = parse_config("model.name = harmonic\n").unwrap();
        assert_eq!(config.model_name.as_deref(), Some("harmonic"));
        assert_eq!(config.model.classification(), Classification::Unstable);
        assert_eq!(config.run.schedule, finsec_core::default_schedule());
        assert_eq!(config.output_format, ReportFormat::Csv);
    }

    #[test]
    fn parses_explicit_jacobi() {
        let text = "model.kind = jacobi\nmodel.diag = 3\nmodel.offdiag = 1\n";
        let config = parse_config(text).unwrap();
        match config.model {
            SpectralModel::Jacobi {
                diagonal: CoeffRule::Constant(a),
                offdiagonal: CoeffRule::Constant(b),
                ..
            } => {
                assert_eq!(a, 3.0);
                assert_eq!(b, 1.0);
            }
            other => panic!("unexpected model {other:?}"),
        }
    }

    #[test]
    fn rejects_non_increasing_schedule() {
        let text = "model.name = linear\nrun.schedule = 8,4\n";
        let err = parse_config(text).unwrap_err();
        assert_eq!(err.field, "run.schedule");
        assert!(err.problem.contains("strictly increasing"), "{}", err.problem);
    }

    #[test]
    fn rejects_unknown_key() {
        let err = parse_config("model.nmae = linear\n").unwrap_err();
        assert_eq!(err.field, "model.nmae");
    }

    #[test]
    fn complex_literals() {
        let cases = [
            ("i", (0.0, 1.0)),
            ("2i", (0.0, 2.0)),
            ("1+1i", (1.0, 1.0)),
            ("1+i", (1.0, 1.0)),
            ("1-2i", (1.0, -2.0)),
            ("-1+0.5i", (-1.0, 0.5)),
            ("2.5", (2.5, 0.0)),
            ("1e-3+2e2i", (0.001, 200.0)),
            ("-i", (0.0, -1.0)),
        ];
        for (raw, (re, im)) in cases {
            let z = parse_complex("probe.lambdas", raw).unwrap();
            assert_eq!((z.re, z.im), (re, im), "{raw}");
        }
        assert!(parse_complex("probe.lambdas", "chicken").is_err());
    }

    #[test]
    fn probe_vector_specs() {
        let e3 = parse_probe_vector("e3").unwrap();
        assert_eq!(e3.component(3), 1.0);
        let c = parse_probe_vector("coeffs:1,0,2").unwrap();
        assert_eq!(c.head(), &[1.0, 0.0, 2.0]);
        let d = parse_probe_vector("decay:2:4").unwrap();
        assert_eq!(d.head().len(), 4);
        assert_eq!(d.component(2), 0.25);
        assert!(parse_probe_vector("wat").is_err());
    }

    #[test]
    fn metadata_echoes_defaults() {
        let config = parse_config("model.name = linear\n").unwrap();
        let meta = config.effective_metadata();
        let lookup = |key: &str| {
            meta.iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(|| panic!("missing {key}"))
        };
        assert_eq!(lookup("run.plateau-ratio"), "1.5");
        assert_eq!(lookup("run.residual-tol"), "0.00000001");
        assert_eq!(lookup("run.rank-rel-tol"), "default:1e-12*dim");
        assert_eq!(lookup("probe.lambdas"), "0+1i,0+2i,1+1i");
        assert_eq!(lookup("output.format"), "csv");
    }

    #[test]
    fn schedule_cap_applies() {
        let mut config = parse_config("model.name = linear\n").unwrap();
        config.apply_schedule_cap(64).unwrap();
        assert_eq!(config.run.schedule, vec![2, 4, 8, 16, 32, 64]);
        let mut config = parse_config("model.name = linear\n").unwrap();
        assert!(config.apply_schedule_cap(1).is_err());
    }
}
