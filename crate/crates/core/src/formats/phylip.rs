use crate::error::FormatError;
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;

use super::validate_label;

/// Square PHYLIP: the item count, then one line per item with its label and
/// all `n` distances in fixed-point notation with six decimals.
pub fn write_phylip<T: Scalar>(matrix: &DistanceMatrix<T>) -> Result<String, FormatError> {
    let mut out = format!("{}\n", matrix.len());
    for (i, label) in matrix.labels().iter().enumerate() {
        validate_label(label)?;
        out.push_str(label);
        for j in 0..matrix.len() {
            out.push_str(&format!(" {:.6}", matrix.get(i, j).as_f64()));
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_phylip(text: &str) -> Result<DistanceMatrix<f64>, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (first_no, first) = lines.next().ok_or(FormatError::Parse {
        line: 1,
        message: "empty matrix file".into(),
    })?;
    let n: usize = first.trim().parse().map_err(|_| FormatError::Parse {
        line: first_no + 1,
        message: format!("expected the item count, found {:?}", first.trim()),
    })?;
    let mut labels = Vec::with_capacity(n);
    let mut rows = Vec::with_capacity(n);
    for (index, line) in lines {
        let line_no = index + 1;
        if labels.len() == n {
            return Err(FormatError::Parse {
                line: line_no,
                message: format!("more than {n} rows"),
            });
        }
        let mut fields = line.split_whitespace();
        let label = fields.next().unwrap_or_default().to_string();
        validate_label(&label)?;
        let row: Vec<f64> = fields
            .map(|f| {
                f.parse::<f64>().map_err(|_| FormatError::Parse {
                    line: line_no,
                    message: format!("invalid distance {f:?}"),
                })
            })
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(FormatError::Parse {
                line: line_no,
                message: format!("expected {n} distances, found {}", row.len()),
            });
        }
        labels.push(label);
        rows.push(row);
    }
    if labels.len() != n {
        return Err(FormatError::Parse {
            line: text.lines().count(),
            message: format!("expected {n} rows, found {}", labels.len()),
        });
    }
    Ok(DistanceMatrix::new(labels, rows)?)
}
