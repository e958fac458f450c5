//! Run reports and stable model digests.

use std::path::PathBuf;

use bsys_core::VerdictKind;

/// FNV-1a over the raw file bytes; stable across platforms.
pub fn digest(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x1000_0000_01b3);
    }
    format!("{hash:016x}")
}

pub fn verdict_label(kind: VerdictKind) -> &'static str {
    match kind {
        VerdictKind::Feasible => "FEASIBLE",
        VerdictKind::Infeasible => "INFEASIBLE",
        VerdictKind::Unknown => "UNKNOWN",
    }
}

pub fn exit_code(kind: VerdictKind) -> i32 {
    match kind {
        VerdictKind::Feasible => 0,
        VerdictKind::Infeasible => 1,
        VerdictKind::Unknown => 3,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
}

pub struct RunReport {
    pub command: String,
    pub model_path: String,
    pub digest: String,
    pub verdict: VerdictKind,
    pub artifact: Option<PathBuf>,
    pub windows_used: Vec<u32>,
    pub periods_used: Vec<u32>,
    pub elapsed_ms: u128,
}

impl RunReport {
    pub fn render(&self, format: OutputFormat) -> String {
        let schedule = |values: &[u32]| -> String {
            if values.is_empty() {
                "-".to_string()
            } else {
                values
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            }
        };
        match format {
            OutputFormat::Text => {
                let mut out = String::new();
                out.push_str(&format!("command: {}\n", self.command));
                out.push_str(&format!("model: {}\n", self.model_path));
                out.push_str(&format!("digest: {}\n", self.digest));
                out.push_str(&format!("verdict: {}\n", verdict_label(self.verdict)));
                if let Some(path) = &self.artifact {
                    out.push_str(&format!("artifact: {}\n", path.display()));
                }
                out.push_str(&format!("windows: {}\n", schedule(&self.windows_used)));
                out.push_str(&format!("periods: {}\n", schedule(&self.periods_used)));
                out.push_str(&format!("elapsed-ms: {}\n", self.elapsed_ms));
                out
            }
            OutputFormat::Csv => {
                let artifact = self
                    .artifact
                    .as_ref()
                    .map_or(String::new(), |p| p.display().to_string());
                format!(
                    "command,model,digest,verdict,artifact,windows,periods,elapsed_ms\n{},{},{},{},{},{},{},{}\n",
                    self.command,
                    self.model_path,
                    self.digest,
                    verdict_label(self.verdict),
                    artifact,
                    schedule(&self.windows_used).replace(',', ";"),
                    schedule(&self.periods_used).replace(',', ";"),
                    self.elapsed_ms
                )
            }
        }
    }
}
