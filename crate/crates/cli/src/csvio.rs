//! Trajectory, certificate, and initial-condition files.
//!
//! Trajectories serialize to CSV with one row per time index: the first
//! column is the index, the remaining columns the components. The extension
//! kind (and a quasi-constant part, when present) rides in a `#` comment
//! header, so every file round-trips to the exact trajectory it came from.

use anyhow::{anyhow, bail, Context, Result};
use bsys_core::rational::parse_rational;
use bsys_core::{Certificate, Extension, InitialConditions, Rational, Trajectory};

pub fn write_trajectory(trajectory: &Trajectory, names: Option<&[String]>) -> String {
    let mut out = String::new();
    match trajectory.extension() {
        Extension::FiniteSupport => out.push_str("# extension: finite-support\n"),
        Extension::QuasiConstant(constant) => {
            out.push_str("# extension: quasi-constant");
            for value in constant {
                out.push_str(&format!(" {value}"));
            }
            out.push('\n');
        }
        Extension::Periodic => out.push_str("# extension: periodic\n"),
    }
    out.push('k');
    for i in 0..trajectory.dim() {
        let name = names
            .and_then(|n| n.get(i).cloned())
            .unwrap_or_else(|| format!("w{}", i + 1));
        out.push(',');
        out.push_str(&name);
    }
    out.push('\n');
    let (lo, hi) = trajectory.window();
    for k in lo..=hi {
        out.push_str(&format!("{k}"));
        for value in trajectory.value_at(k) {
            out.push_str(&format!(",{value}"));
        }
        out.push('\n');
    }
    out
}

pub fn read_trajectory(text: &str) -> Result<Trajectory> {
    let mut extension: Option<Extension> = None;
    let mut rows: Vec<(i64, Vec<Rational>)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(rest) = comment.strip_prefix("extension:") {
                extension = Some(parse_extension(rest.trim())?);
            }
            continue;
        }
        let mut fields = line.split(',');
        let first = fields.next().unwrap().trim();
        let Ok(k) = first.parse::<i64>() else {
            // Header row (`k,w1,...`).
            continue;
        };
        let values = fields
            .map(|f| parse_rational(f).map_err(|e| anyhow!("line {line_no}: {e}")))
            .collect::<Result<Vec<_>>>()?;
        if values.is_empty() {
            bail!("line {line_no}: a data row needs at least one component");
        }
        rows.push((k, values));
    }
    if rows.is_empty() {
        bail!("no data rows in trajectory file");
    }
    rows.sort_by_key(|(k, _)| *k);
    let start = rows[0].0;
    for (offset, (k, _)) in rows.iter().enumerate() {
        if *k != start + offset as i64 {
            bail!("trajectory rows must cover a contiguous window, missing index {}", start + offset as i64);
        }
    }
    let dim = rows[0].1.len();
    if rows.iter().any(|(_, v)| v.len() != dim) {
        bail!("trajectory rows must all have the same number of components");
    }
    let values: Vec<Vec<Rational>> = rows.into_iter().map(|(_, v)| v).collect();
    let extension = extension.unwrap_or(Extension::FiniteSupport);
    if let Extension::QuasiConstant(constant) = &extension {
        if constant.len() != dim {
            bail!("quasi-constant part has {} components, rows have {dim}", constant.len());
        }
    }
    Trajectory::new(start, values, extension).map_err(|e| anyhow!("{e}"))
}

fn parse_extension(text: &str) -> Result<Extension> {
    if text == "finite-support" {
        return Ok(Extension::FiniteSupport);
    }
    if text == "periodic" {
        return Ok(Extension::Periodic);
    }
    if let Some(rest) = text.strip_prefix("quasi-constant") {
        let constant = rest
            .split_whitespace()
            .map(|f| parse_rational(f).map_err(|e| anyhow!("{e}")))
            .collect::<Result<Vec<_>>>()?;
        if constant.is_empty() {
            bail!("quasi-constant extension needs its constant vector");
        }
        return Ok(Extension::QuasiConstant(constant));
    }
    bail!("unknown extension `{text}`")
}

/// Certificates ship as one stacked trajectory CSV — equality-dual components
/// first — plus summary comments carrying the split and the exact objective.
pub fn write_certificate(certificate: &Certificate) -> String {
    let eq_dim = certificate.equality_dual.as_ref().map_or(0, Trajectory::dim);
    let ineq_dim = certificate
        .inequality_dual
        .as_ref()
        .map_or(0, Trajectory::dim);
    let mut out = String::new();
    out.push_str(&format!("# objective: {}\n", certificate.objective));
    out.push_str(&format!("# equality-dual-dim: {eq_dim}\n"));
    out.push_str(&format!("# inequality-dual-dim: {ineq_dim}\n"));
    let stacked = match (&certificate.equality_dual, &certificate.inequality_dual) {
        (Some(y), Some(z)) => Trajectory::stack(&[y, z]).expect("duals stack"),
        (Some(y), None) => y.clone(),
        (None, Some(z)) => z.clone(),
        (None, None) => unreachable!("certificates carry at least one dual"),
    };
    let names: Vec<String> = (1..=eq_dim)
        .map(|i| format!("y{i}"))
        .chain((1..=ineq_dim).map(|i| format!("z{i}")))
        .collect();
    out.push_str(&write_trajectory(&stacked, Some(&names)));
    out
}

pub fn read_certificate(text: &str) -> Result<Certificate> {
    let mut objective: Option<Rational> = None;
    let mut eq_dim: Option<usize> = None;
    let mut ineq_dim: Option<usize> = None;
    for raw in text.lines() {
        let line = raw.trim();
        let Some(comment) = line.strip_prefix('#') else {
            continue;
        };
        let comment = comment.trim();
        if let Some(rest) = comment.strip_prefix("objective:") {
            objective = Some(parse_rational(rest.trim()).map_err(|e| anyhow!("{e}"))?);
        } else if let Some(rest) = comment.strip_prefix("equality-dual-dim:") {
            eq_dim = Some(rest.trim().parse().context("equality dual dimension")?);
        } else if let Some(rest) = comment.strip_prefix("inequality-dual-dim:") {
            ineq_dim = Some(rest.trim().parse().context("inequality dual dimension")?);
        }
    }
    let objective = objective.ok_or_else(|| anyhow!("certificate file lacks an objective line"))?;
    let eq_dim = eq_dim.ok_or_else(|| anyhow!("certificate file lacks the equality dual dimension"))?;
    let ineq_dim =
        ineq_dim.ok_or_else(|| anyhow!("certificate file lacks the inequality dual dimension"))?;
    let stacked = read_trajectory(text)?;
    if stacked.dim() != eq_dim + ineq_dim {
        bail!(
            "certificate rows have {} components, expected {} + {}",
            stacked.dim(),
            eq_dim,
            ineq_dim
        );
    }
    let split = |lo: usize, width: usize| -> Result<Trajectory> {
        let (start, end) = stacked.window();
        let values: Vec<Vec<Rational>> = (start..=end)
            .map(|k| stacked.value_at(k)[lo..lo + width].to_vec())
            .collect();
        Trajectory::finite(start, values)
            .map(|t| t.trimmed())
            .map_err(|e| anyhow!("{e}"))
    };
    Ok(Certificate {
        equality_dual: (eq_dim > 0).then(|| split(0, eq_dim)).transpose()?,
        inequality_dual: (ineq_dim > 0).then(|| split(eq_dim, ineq_dim)).transpose()?,
        objective,
    })
}

/// Initial-condition files: `variable,time,value` per line, the variable
/// given by model name or 1-based index.
pub fn read_initials(text: &str, names: &[String]) -> Result<InitialConditions> {
    let mut initials = InitialConditions::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            bail!("line {line_no}: expected `variable,time,value`");
        }
        let var = match names.iter().position(|n| n == fields[0]) {
            Some(i) => i,
            None => {
                let index: usize = fields[0].parse().map_err(|_| {
                    anyhow!("line {line_no}: unknown variable `{}`", fields[0])
                })?;
                if index == 0 || index > names.len() {
                    bail!("line {line_no}: variable index {index} out of range");
                }
                index - 1
            }
        };
        let time: i64 = fields[1]
            .parse()
            .map_err(|_| anyhow!("line {line_no}: invalid time `{}`", fields[1]))?;
        let value = parse_rational(fields[2]).map_err(|e| anyhow!("line {line_no}: {e}"))?;
        initials.set(var, time, value);
    }
    Ok(initials)
}
