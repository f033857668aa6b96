//! Matrix ingestion: MatrixMarket (coordinate or array, real, symmetric or
//! general) and plain one-value-per-line diagonal files.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use super::HermitianOperator;
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Reads a MatrixMarket file or, failing the banner, a diagonal file.
pub fn read_operator(path: impl AsRef<Path>) -> Result<HermitianOperator> {
    let text = fs::read_to_string(path)?;
    if text.trim_start().starts_with("%%MatrixMarket") {
        parse_matrix_market(&text)
    } else {
        parse_diagonal(&text)
    }
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<HermitianOperator> {
    parse_matrix_market(&fs::read_to_string(path)?)
}

pub fn read_diagonal(path: impl AsRef<Path>) -> Result<HermitianOperator> {
    parse_diagonal(&fs::read_to_string(path)?)
}

pub(crate) fn parse_diagonal(text: &str) -> Result<HermitianOperator> {
    let mut d = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        let x: f64 = t.parse().map_err(|_| parse_err(i + 1, format!("not a number: {t:?}")))?;
        d.push(x);
    }
    HermitianOperator::diagonal(d)
}

pub(crate) fn parse_matrix_market(text: &str) -> Result<HermitianOperator> {
    let mut lines = text.lines().enumerate();
    let (_, banner) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let fields: Vec<String> = banner.split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err(1, "expected `%%MatrixMarket matrix <format> <field> <symmetry>`"));
    }
    let coordinate = match fields[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(parse_err(1, format!("unsupported format {other}"))),
    };
    if !matches!(fields[3].as_str(), "real" | "integer" | "double") {
        return Err(parse_err(1, format!("unsupported field {}", fields[3])));
    }
    let symmetric = match fields[4].as_str() {
        "symmetric" => true,
        "general" => false,
        other => return Err(parse_err(1, format!("unsupported symmetry {other}"))),
    };

    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = data.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| parse_err(size_line + 1, format!("bad size {s:?}"))))
        .collect::<Result<_>>()?;
    let (rows, cols) = match dims.as_slice() {
        [r, c, _] if coordinate => (*r, *c),
        [r, c] if !coordinate => (*r, *c),
        _ => return Err(parse_err(size_line + 1, "wrong number of size fields")),
    };
    if rows != cols || rows == 0 {
        return Err(parse_err(size_line + 1, format!("matrix must be square and nonempty, got {rows}x{cols}")));
    }
    let n = rows;
    let mut m = DMatrix::<f64>::zeros(n, n);
    if coordinate {
        for (ln, line) in data {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(parse_err(ln + 1, "expected `row col value`"));
            }
            let idx = |s: &str| -> Result<usize> {
                let v: usize = s.parse().map_err(|_| parse_err(ln + 1, format!("bad index {s:?}")))?;
                if v == 0 || v > n {
                    return Err(parse_err(ln + 1, format!("index {v} out of range")));
                }
                Ok(v - 1)
            };
            let (i, j) = (idx(parts[0])?, idx(parts[1])?);
            let x: f64 = parts[2].parse().map_err(|_| parse_err(ln + 1, format!("bad value {:?}", parts[2])))?;
            m[(i, j)] += x;
            if symmetric && i != j {
                m[(j, i)] += x;
            }
        }
    } else {
        let mut count = 0usize;
        for (ln, line) in data {
            for tok in line.split_whitespace() {
                let x: f64 = tok.parse().map_err(|_| parse_err(ln + 1, format!("bad value {tok:?}")))?;
                if symmetric {
                    // Lower triangle, column by column.
                    let (i, j) =
                        lower_triangle_position(count, n).ok_or_else(|| parse_err(ln + 1, "too many entries"))?;
                    m[(i, j)] = x;
                    m[(j, i)] = x;
                } else {
                    if count >= n * n {
                        return Err(parse_err(ln + 1, "too many entries"));
                    }
                    m[(count % n, count / n)] = x;
                }
                count += 1;
            }
        }
        let expected = if symmetric { n * (n + 1) / 2 } else { n * n };
        if count != expected {
            return Err(parse_err(0, format!("expected {expected} entries, found {count}")));
        }
    }
    classify(m)
}

/// Reads a rectangular MatrixMarket matrix (array or coordinate, general) as dense.
pub fn read_dense_matrix(path: impl AsRef<Path>) -> Result<DMatrix<f64>> {
    parse_dense(&fs::read_to_string(path)?)
}

pub(crate) fn parse_dense(text: &str) -> Result<DMatrix<f64>> {
    let mut lines = text.lines().enumerate();
    let (_, banner) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let fields: Vec<String> = banner.split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" || fields[4] != "general" {
        return Err(parse_err(1, "expected `%%MatrixMarket matrix <array|coordinate> real general`"));
    }
    let coordinate = match fields[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(parse_err(1, format!("unsupported format {other}"))),
    };
    if !matches!(fields[3].as_str(), "real" | "integer" | "double") {
        return Err(parse_err(1, format!("unsupported field {}", fields[3])));
    }
    let mut data = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = data.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|s| s.parse().map_err(|_| parse_err(size_line + 1, format!("bad size {s:?}"))))
        .collect::<Result<_>>()?;
    let (rows, cols) = match dims.as_slice() {
        [r, c, _] if coordinate => (*r, *c),
        [r, c] if !coordinate => (*r, *c),
        _ => return Err(parse_err(size_line + 1, "wrong number of size fields")),
    };
    if rows == 0 || cols == 0 {
        return Err(parse_err(size_line + 1, "matrix must be nonempty"));
    }
    let mut m = DMatrix::<f64>::zeros(rows, cols);
    if coordinate {
        for (ln, line) in data {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(parse_err(ln + 1, "expected `row col value`"));
            }
            let idx = |s: &str, hi: usize| -> Result<usize> {
                let v: usize = s.parse().map_err(|_| parse_err(ln + 1, format!("bad index {s:?}")))?;
                if v == 0 || v > hi {
                    return Err(parse_err(ln + 1, format!("index {v} out of range")));
                }
                Ok(v - 1)
            };
            let (i, j) = (idx(parts[0], rows)?, idx(parts[1], cols)?);
            let x: f64 = parts[2].parse().map_err(|_| parse_err(ln + 1, format!("bad value {:?}", parts[2])))?;
            m[(i, j)] += x;
        }
    } else {
        let mut count = 0usize;
        for (ln, line) in data {
            for tok in line.split_whitespace() {
                let x: f64 = tok.parse().map_err(|_| parse_err(ln + 1, format!("bad value {tok:?}")))?;
                if count >= rows * cols {
                    return Err(parse_err(ln + 1, "too many entries"));
                }
                m[(count % rows, count / rows)] = x;
                count += 1;
            }
        }
        if count != rows * cols {
            return Err(parse_err(0, format!("expected {} entries, found {count}", rows * cols)));
        }
    }
    Ok(m)
}

fn lower_triangle_position(mut k: usize, n: usize) -> Option<(usize, usize)> {
    for j in 0..n {
        let len = n - j;
        if k < len {
            return Some((j + k, j));
        }
        k -= len;
    }
    None
}

/// Picks the leanest layout that holds `m` exactly.
fn classify(m: DMatrix<f64>) -> Result<HermitianOperator> {
    let n = m.nrows();
    let mut bandwidth = 0;
    for j in 0..n {
        for i in 0..n {
            if m[(i, j)] != 0.0 {
                bandwidth = bandwidth.max(i.abs_diff(j));
            }
        }
    }
    let op = HermitianOperator::dense(m)?;
    let HermitianOperator::Dense(m) = &op else { unreachable!() };
    match bandwidth {
        0 => HermitianOperator::diagonal(m.diagonal().iter().copied().collect()),
        1 => HermitianOperator::tridiagonal(
            m.diagonal().iter().copied().collect(),
            (0..n - 1).map(|i| m[(i + 1, i)]).collect(),
        ),
        _ => Ok(op),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::OperatorKind;

    #[test]
    fn coordinate_symmetric_tridiagonal_detected() {
        let text =
            "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 5\n1 1 2\n2 1 -1\n2 2 2\n3 2 -1\n3 3 2\n";
        let op = parse_matrix_market(text).unwrap();
        assert_eq!(op.kind(), OperatorKind::Tridiagonal);
        assert_eq!(op.to_dense(), crate::operators::HermitianOperator::laplacian_1d(3, 1.0).unwrap().to_dense());
    }

    #[test]
    fn coordinate_general_dense() {
        let text = "%%MatrixMarket matrix coordinate real general\n3 3 5\n1 1 4\n1 3 1\n3 1 1\n2 2 4\n3 3 4\n";
        let op = parse_matrix_market(text).unwrap();
        assert_eq!(op.kind(), OperatorKind::Dense);
        assert_eq!(op.to_dense()[(0, 2)], 1.0);
    }

    #[test]
    fn array_formats() {
        let general = "%%MatrixMarket matrix array real general\n2 2\n2\n1\n1\n3\n";
        let op = parse_matrix_market(general).unwrap();
        assert_eq!(op.kind(), OperatorKind::Tridiagonal);
        assert_eq!(op.to_dense(), DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]));
        let sym = "%%MatrixMarket matrix array real symmetric\n3 3\n1\n0\n0\n2\n0\n3\n";
        let op = parse_matrix_market(sym).unwrap();
        assert_eq!(op.kind(), OperatorKind::Diagonal);
        assert_eq!(op.to_dense().diagonal().as_slice(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1\n").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n").is_err());
        assert!(parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 1\n").is_err());
        assert!(matches!(parse_diagonal("1\nx\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn rectangular_factors() {
        let m = parse_dense("%%MatrixMarket matrix array real general\n3 2\n1\n2\n3\n4\n5\n6\n").unwrap();
        assert_eq!(m, DMatrix::from_column_slice(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]));
        let c = parse_dense("%%MatrixMarket matrix coordinate real general\n3 1 1\n2 1 -1.5\n").unwrap();
        assert_eq!(c.as_slice(), &[0.0, -1.5, 0.0]);
        assert!(parse_dense("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n3\n").is_err());
        assert!(parse_dense("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n").is_err());
    }

    #[test]
    fn diagonal_file() {
        let op = parse_diagonal("# eigenvalues\n1.5\n\n2e1\n").unwrap();
        assert_eq!(op.kind(), OperatorKind::Diagonal);
        assert_eq!(op.to_dense().diagonal().as_slice(), &[1.5, 20.0]);
    }
}
