//! Machine-readable reports.
//!
//! Two formats share one structure: a sectioned CSV file (metadata as `#`
//! key-value preamble, one header row per section) and a single JSON object.
//! Numeric fields are printed with 17 significant digits so values
//! round-trip exactly, and the writers take no input besides the report
//! itself, so identical runs produce byte-identical files.

use finsec_core::{BestApproxRun, Complex64, ResidualTable};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct StabilityRow {
    pub n: usize,
    pub pinv_norm: f64,
    pub running_sup: f64,
}

#[derive(Debug, Clone)]
pub struct IterateRow {
    pub n: usize,
    pub cauchy_gap: f64,
    pub oracle_err: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct DiagnosticRow {
    pub suite: &'static str,
    pub n: usize,
    pub probe_id: String,
    pub lambda: Option<Complex64>,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub metadata: Vec<(String, String)>,
    pub stability: Vec<StabilityRow>,
    pub iterates: Vec<IterateRow>,
    pub diagnostics: Vec<DiagnosticRow>,
    pub verdict: String,
    pub verdict_reason: String,
}

impl Report {
    pub fn new(command: &str, metadata: Vec<(String, String)>) -> Self {
        Report {
            command: command.to_string(),
            metadata,
            stability: Vec::new(),
            iterates: Vec::new(),
            diagnostics: Vec::new(),
            verdict: String::new(),
            verdict_reason: String::new(),
        }
    }

    pub fn add_run(&mut self, run: &BestApproxRun) {
        for r in &run.trace.records {
            self.stability.push(StabilityRow {
                n: r.n,
                pinv_norm: r.pinv_norm,
                running_sup: r.running_sup,
            });
        }
        for it in &run.iterates {
            self.iterates.push(IterateRow {
                n: it.n,
                cauchy_gap: it.cauchy_gap,
                oracle_err: it.oracle_err,
            });
        }
        for (n, message) in &run.failures {
            self.metadata
                .push((format!("failure.n{n}"), message.clone()));
        }
    }

    pub fn add_table(&mut self, table: &ResidualTable) {
        for row in &table.rows {
            self.diagnostics.push(DiagnosticRow {
                suite: table.suite.name(),
                n: row.n,
                probe_id: row.probe_id.clone(),
                lambda: row.lambda,
                residual: row.residual,
            });
        }
    }

    /// Deterministic row order: by size, then probe id, then shift
    /// (lexicographic on the real/imaginary pair), then suite name.
    fn sorted_diagnostics(&self) -> Vec<&DiagnosticRow> {
        let mut rows: Vec<&DiagnosticRow> = self.diagnostics.iter().collect();
        rows.sort_by(|a, b| {
            let la = a.lambda.map(|z| (z.re, z.im));
            let lb = b.lambda.map(|z| (z.re, z.im));
            a.n.cmp(&b.n)
                .then_with(|| a.probe_id.cmp(&b.probe_id))
                .then_with(|| match (la, lb) {
                    (None, None) => std::cmp::Ordering::Equal,
                    (None, Some(_)) => std::cmp::Ordering::Less,
                    (Some(_), None) => std::cmp::Ordering::Greater,
                    (Some(x), Some(y)) => x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)),
                })
                .then_with(|| a.suite.cmp(b.suite))
        });
        rows
    }

    pub fn render(&self, format: crate::config::ReportFormat) -> String {
        match format {
            crate::config::ReportFormat::Csv => self.to_csv(),
            crate::config::ReportFormat::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("# finsec report\n");
        out.push_str(&format!("# version = {TOOL_VERSION}\n"));
        out.push_str(&format!("# command = {}\n", self.command));
        for (key, value) in &self.metadata {
            out.push_str(&format!("# {key} = {value}\n"));
        }
        out.push_str("[stability]\n");
        out.push_str("n,pinv_norm,running_sup\n");
        for row in &self.stability {
            out.push_str(&format!(
                "{},{},{}\n",
                row.n,
                fmt_f64(row.pinv_norm),
                fmt_f64(row.running_sup)
            ));
        }
        out.push_str("[iterates]\n");
        out.push_str("n,cauchy_gap,oracle_err\n");
        for row in &self.iterates {
            out.push_str(&format!(
                "{},{},{}\n",
                row.n,
                fmt_f64(row.cauchy_gap),
                row.oracle_err.map(fmt_f64).unwrap_or_default()
            ));
        }
        out.push_str("[diagnostics]\n");
        out.push_str("suite,n,probe_id,lambda_re,lambda_im,residual\n");
        for row in self.sorted_diagnostics() {
            let (re, im) = match row.lambda {
                Some(z) => (fmt_f64(z.re), fmt_f64(z.im)),
                None => (String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.suite,
                row.n,
                csv_quote(&row.probe_id),
                re,
                im,
                fmt_f64(row.residual)
            ));
        }
        out.push_str("[verdict]\n");
        out.push_str("verdict,reason\n");
        out.push_str(&format!(
            "{},{}\n",
            self.verdict,
            csv_quote(&self.verdict_reason)
        ));
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"tool\": {},\n", json_string("finsec")));
        out.push_str(&format!("  \"version\": {},\n", json_string(TOOL_VERSION)));
        out.push_str(&format!("  \"command\": {},\n", json_string(&self.command)));
        out.push_str("  \"metadata\": {\n");
        for (i, (key, value)) in self.metadata.iter().enumerate() {
            let comma = if i + 1 < self.metadata.len() { "," } else { "" };
            out.push_str(&format!(
                "    {}: {}{comma}\n",
                json_string(key),
                json_string(value)
            ));
        }
        out.push_str("  },\n");

        out.push_str("  \"stability\": [\n");
        for (i, row) in self.stability.iter().enumerate() {
            let comma = if i + 1 < self.stability.len() { "," } else { "" };
            out.push_str(&format!(
                "    {{\"n\": {}, \"pinv_norm\": {}, \"running_sup\": {}}}{comma}\n",
                row.n,
                fmt_f64(row.pinv_norm),
                fmt_f64(row.running_sup)
            ));
        }
        out.push_str("  ],\n");

        out.push_str("  \"iterates\": [\n");
        for (i, row) in self.iterates.iter().enumerate() {
            let comma = if i + 1 < self.iterates.len() { "," } else { "" };
            out.push_str(&format!(
                "    {{\"n\": {}, \"cauchy_gap\": {}, \"oracle_err\": {}}}{comma}\n",
                row.n,
                fmt_f64(row.cauchy_gap),
                row.oracle_err
                    .map(fmt_f64)
                    .unwrap_or_else(|| "null".to_string())
            ));
        }
        out.push_str("  ],\n");

        out.push_str("  \"diagnostics\": [\n");
        let rows = self.sorted_diagnostics();
        for (i, row) in rows.iter().enumerate() {
            let comma = if i + 1 < rows.len() { "," } else { "" };
            let (re, im) = match row.lambda {
                Some(z) => (fmt_f64(z.re), fmt_f64(z.im)),
                None => ("null".to_string(), "null".to_string()),
            };
            out.push_str(&format!(
                "    {{\"suite\": {}, \"n\": {}, \"probe_id\": {}, \"lambda_re\": {re}, \
                 \"lambda_im\": {im}, \"residual\": {}}}{comma}\n",
                json_string(row.suite),
                row.n,
                json_string(&row.probe_id),
                fmt_f64(row.residual)
            ));
        }
        out.push_str("  ],\n");

        out.push_str(&format!("  \"verdict\": {},\n", json_string(&self.verdict)));
        out.push_str(&format!(
            "  \"verdict_reason\": {}\n",
            json_string(&self.verdict_reason)
        ));
        out.push_str("}\n");
        out
    }
}

/// 17 significant digits in scientific notation; enough for exact f64
/// round-trips and valid as both a CSV field and a JSON number.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
