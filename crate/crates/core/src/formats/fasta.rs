use log::warn;

use crate::error::FormatError;
use crate::model::{normalize_symbols, InvalidSymbolPolicy, Read, ReadSet, SequenceRecord};

/// Parses FASTA sequences. Foreign symbols are errors naming the line.
pub fn parse_fasta(text: &str, policy: InvalidSymbolPolicy) -> Result<Vec<SequenceRecord>, FormatError> {
    let mut records: Vec<(String, Vec<u8>)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            let id = header.split_whitespace().next().unwrap_or("");
            if id.is_empty() {
                return Err(FormatError::Parse {
                    line: line_no,
                    message: "empty FASTA header".into(),
                });
            }
            records.push((id.to_string(), Vec::new()));
            continue;
        }
        let Some((_, sequence)) = records.last_mut() else {
            return Err(FormatError::Parse {
                line: line_no,
                message: "sequence data before the first '>' header".into(),
            });
        };
        let symbols = normalize_symbols(line.as_bytes(), policy)
            .map_err(|source| FormatError::Symbol { line: line_no, source })?;
        sequence.extend(symbols);
    }
    Ok(records
        .into_iter()
        .map(|(id, seq)| SequenceRecord::from_valid(id, seq))
        .collect())
}

/// Coverage and read length declared on `#` lines at the top of a read file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReadFileMetadata {
    pub coverage: Option<f64>,
    pub read_length: Option<usize>,
}

/// A parsed read file.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadFile {
    pub reads: ReadSet,
    pub metadata: ReadFileMetadata,
    /// Reads dropped for holding foreign symbols or being empty.
    pub skipped: usize,
}

fn parse_metadata(line: &str, line_no: usize, meta: &mut ReadFileMetadata) -> Result<(), FormatError> {
    for token in line.split('#').map(str::trim).filter(|t| !t.is_empty()) {
        let Some((key, value)) = token.split_once('=') else {
            continue;
        };
        let bad = |what: &str| FormatError::Parse {
            line: line_no,
            message: format!("invalid {what} {value:?}"),
        };
        match key.trim() {
            "coverage" => {
                let v: f64 = value.trim().parse().map_err(|_| bad("coverage"))?;
                if !(v.is_finite() && v > 0.0) {
                    return Err(bad("coverage"));
                }
                meta.coverage = Some(v);
            }
            "readlen" => {
                let v: usize = value.trim().parse().map_err(|_| bad("read length"))?;
                if v == 0 {
                    return Err(bad("read length"));
                }
                meta.read_length = Some(v);
            }
            _ => {}
        }
    }
    Ok(())
}

/// Parses a read set: FASTA, or plain text with one read per line.
///
/// Leading `#` lines may declare `#coverage=<α> #readlen=<l>`. Reads with
/// foreign symbols (after applying `policy`) are skipped with a warning.
pub fn parse_read_file(text: &str, label: &str, policy: InvalidSymbolPolicy) -> Result<ReadFile, FormatError> {
    let mut metadata = ReadFileMetadata::default();
    let mut body: Vec<(usize, &str)> = Vec::new();
    let mut in_header = true;
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if in_header && line.starts_with('#') {
            parse_metadata(line, index + 1, &mut metadata)?;
            continue;
        }
        in_header = false;
        body.push((index + 1, line));
    }

    let fasta = body.first().is_some_and(|(_, l)| l.starts_with('>'));
    // (first line number, raw sequence)
    let mut raw_reads: Vec<(usize, String)> = Vec::new();
    if fasta {
        for &(line_no, line) in &body {
            if line.starts_with('>') {
                raw_reads.push((line_no, String::new()));
            } else if line.starts_with(';') {
                continue;
            } else if let Some((_, seq)) = raw_reads.last_mut() {
                seq.push_str(line);
            }
        }
    } else {
        for &(line_no, line) in &body {
            if line.starts_with('>') {
                return Err(FormatError::Parse {
                    line: line_no,
                    message: "FASTA header in a plain read list".into(),
                });
            }
            raw_reads.push((line_no, line.to_string()));
        }
    }

    let mut reads = Vec::with_capacity(raw_reads.len());
    let mut skipped = 0;
    for (line_no, raw) in raw_reads {
        match Read::with_policy(raw.as_bytes(), policy) {
            Ok(read) if !read.is_empty() => reads.push(read),
            Ok(_) => {
                warn!("{label}: empty read at line {line_no} skipped");
                skipped += 1;
            }
            Err(e) => {
                warn!("{label}: read at line {line_no} skipped: {e}");
                skipped += 1;
            }
        }
    }
    let mut set = ReadSet::new(label, reads);
    set.declared_coverage = metadata.coverage;
    set.declared_read_length = metadata.read_length;
    Ok(ReadFile {
        reads: set,
        metadata,
        skipped,
    })
}

/// FASTA rendering of a read set, one line per read, preceded by its metadata line.
pub fn write_reads_fasta(set: &ReadSet) -> String {
    let mut out = String::new();
    let mut meta = Vec::new();
    if let Some(c) = set.declared_coverage {
        meta.push(format!("#coverage={c}"));
    }
    if let Some(l) = set.declared_read_length {
        meta.push(format!("#readlen={l}"));
    }
    if !meta.is_empty() {
        out.push_str(&meta.join(" "));
        out.push('\n');
    }
    for (i, read) in set.reads().iter().enumerate() {
        out.push_str(&format!(">{}_{}\n{}\n", set.label(), i + 1, read));
    }
    out
}
