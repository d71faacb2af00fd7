//! Constants files: CSV rows `kappa,i,lo,hi` and `M,i,j,lo,hi` with 1-based indices.
//!
//! The `estimate` command's own output (`kind,i,j,lo,hi`, with an empty `j` on
//! kappa rows) is accepted as well, so its report can be fed straight back in.
//! Only one triangle of M is required; the other is mirrored.

use std::path::Path;

use lipbound::{CurvatureBox, LipschitzBox, SquareMatrix};

use crate::error::{CliError, CliResult};

fn bad(path: &Path, line: u64, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{}:{line}: {msg}", path.display()))
}

fn index(path: &Path, line: u64, s: &str, n: usize) -> CliResult<usize> {
    match s.trim().parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
        _ => Err(bad(path, line, format!("index '{s}' outside 1..={n}"))),
    }
}

fn number(path: &Path, line: u64, s: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| bad(path, line, format!("malformed number '{s}'")))
}

fn put(slot: &mut Option<(f64, f64)>, v: (f64, f64), path: &Path, line: u64) -> CliResult<()> {
    match slot {
        Some(old) if *old != v => Err(bad(path, line, "conflicting duplicate entry")),
        _ => {
            *slot = Some(v);
            Ok(())
        }
    }
}

pub fn read_constants(path: &Path, n: usize) -> CliResult<(LipschitzBox, CurvatureBox)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("cannot read constants {}: {e}", path.display())))?;
    let mut kappa: Vec<Option<(f64, f64)>> = vec![None; n];
    let mut m: Vec<Option<(f64, f64)>> = vec![None; n * n];
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let line = rec.position().map_or(0, |p| p.line());
        let f: Vec<&str> = rec.iter().collect();
        match (f.first().copied(), f.len()) {
            (Some("kind"), _) => continue,
            (Some("kappa"), 4) | (Some("kappa"), 5) => {
                if f.len() == 5 && !f[2].is_empty() {
                    return Err(bad(path, line, "kappa rows take a single index"));
                }
                let i = index(path, line, f[1], n)?;
                let v = (number(path, line, f[f.len() - 2])?, number(path, line, f[f.len() - 1])?);
                put(&mut kappa[i], v, path, line)?;
            }
            (Some("M"), 5) => {
                let i = index(path, line, f[1], n)?;
                let j = index(path, line, f[2], n)?;
                let v = (number(path, line, f[3])?, number(path, line, f[4])?);
                put(&mut m[i * n + j], v, path, line)?;
                if i != j {
                    put(&mut m[j * n + i], v, path, line)?;
                }
            }
            _ => return Err(bad(path, line, "expected `kappa,i,lo,hi` or `M,i,j,lo,hi`")),
        }
    }
    let missing = |what: String| CliError::Usage(format!("{}: missing {what}", path.display()));
    let (klo, khi): (Vec<f64>, Vec<f64>) = kappa
        .iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| missing(format!("kappa row {}", i + 1))))
        .collect::<CliResult<Vec<_>>>()?
        .into_iter()
        .unzip();
    let mut mlo = SquareMatrix::zeros(n);
    let mut mhi = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let (lo, hi) = m[i * n + j].ok_or_else(|| missing(format!("M row {},{}", i + 1, j + 1)))?;
            mlo.set(i, j, lo);
            mhi.set(i, j, hi);
        }
    }
    Ok((
        LipschitzBox::new(klo, khi, false).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
        CurvatureBox::new(mlo, mhi, false).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
    ))
}
