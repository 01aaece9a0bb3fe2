//! Deterministic file output: CSV with 17-significant-digit floats and LF
//! line endings, written atomically (temp file + rename), plus small readers
//! for the formats this tool emits.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use signdrift::grid::{DensityGrid, GridGeometry};
use signdrift::simulate::Histogram;

use crate::CliError;

/// 17 significant digits; round-trips f64 exactly and never depends on locale.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Writes `content` to `path` atomically.
pub fn write_atomic(path: &Path, content: &[u8]) -> Result<(), CliError> {
    let tmp = tmp_path(path);
    {
        let file = fs::File::create(&tmp)
            .map_err(|e| CliError::validation(format!("cannot create {tmp:?}: {e}")))?;
        let mut w = BufWriter::new(file);
        w.write_all(content)
            .and_then(|_| w.flush())
            .map_err(|e| CliError::validation(format!("cannot write {tmp:?}: {e}")))?;
    }
    fs::rename(&tmp, path)
        .map_err(|e| CliError::validation(format!("cannot rename {tmp:?} to {path:?}: {e}")))
}

/// Writes a header plus rows of already-formatted fields.
pub fn write_csv(
    path: &Path,
    header: &str,
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<(), CliError> {
    let mut content = String::new();
    content.push_str(header);
    content.push('\n');
    for row in rows {
        content.push_str(&row.join(","));
        content.push('\n');
    }
    write_atomic(path, content.as_bytes())
}

pub fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::validation(format!("cannot serialize json: {e}")))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Writes a density grid as density.csv columns x, f, log_f.
pub fn write_density_csv(path: &Path, f: &DensityGrid) -> Result<(), CliError> {
    write_csv(
        path,
        "x,f,log_f",
        (0..f.len()).map(|i| {
            let v = f.values()[i];
            vec![fmt_f64(f.node(i)), fmt_f64(v), fmt_f64(v.ln())]
        }),
    )
}

/// Reads a density.csv back into a grid, validating uniform symmetric nodes.
pub fn read_density_csv(path: &Path) -> Result<DensityGrid, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {path:?}: {e}")))?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if !line.starts_with("x,") {
                return Err(CliError::validation(format!(
                    "{path:?} does not look like a density csv"
                )));
            }
            continue;
        }
        let mut fields = line.split(',');
        let (Some(x), Some(f)) = (fields.next(), fields.next()) else {
            return Err(CliError::validation(format!("{path:?} line {}: too few fields", i + 1)));
        };
        xs.push(parse_f64(x, path, i)?);
        vs.push(parse_f64(f, path, i)?);
    }
    if xs.len() < 3 {
        return Err(CliError::validation(format!("{path:?}: too few rows")));
    }
    let dx = xs[1] - xs[0];
    let half_span = -xs[0];
    let geometry = GridGeometry::new(half_span, dx).map_err(CliError::from)?;
    DensityGrid::new(geometry, vs).map_err(CliError::from)
}

/// Writes a histogram as hist.csv columns bin_left, bin_right, count, density.
pub fn write_hist_csv(path: &Path, h: &Histogram) -> Result<(), CliError> {
    write_csv(
        path,
        "bin_left,bin_right,count,density",
        h.edges.windows(2).enumerate().map(|(i, e)| {
            vec![
                fmt_f64(e[0]),
                fmt_f64(e[1]),
                h.counts[i].to_string(),
                fmt_f64(h.density[i]),
            ]
        }),
    )
}

/// Reads a hist.csv; the sample count is reconstructed from the counts.
pub fn read_hist_csv(path: &Path) -> Result<Histogram, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {path:?}: {e}")))?;
    let mut edges: Vec<f64> = Vec::new();
    let mut counts = Vec::new();
    let mut density = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if !line.starts_with("bin_left,") {
                return Err(CliError::validation(format!(
                    "{path:?} does not look like a histogram csv"
                )));
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(CliError::validation(format!(
                "{path:?} line {}: expected 4 fields",
                i + 1
            )));
        }
        let left = parse_f64(fields[0], path, i)?;
        let right = parse_f64(fields[1], path, i)?;
        if edges.is_empty() {
            edges.push(left);
        }
        edges.push(right);
        counts.push(fields[2].parse::<u64>().map_err(|e| {
            CliError::validation(format!("{path:?} line {}: bad count: {e}", i + 1))
        })?);
        density.push(parse_f64(fields[3], path, i)?);
    }
    if counts.is_empty() {
        return Err(CliError::validation(format!("{path:?}: empty histogram")));
    }
    let samples = counts.iter().sum::<u64>() as usize;
    Ok(Histogram {
        edges,
        counts,
        density,
        samples,
    })
}

fn parse_f64(s: &str, path: &Path, line: usize) -> Result<f64, CliError> {
    s.parse::<f64>()
        .map_err(|e| CliError::validation(format!("{path:?} line {}: bad number {s:?}: {e}", line + 1)))
}
