//! Text formats: FASTA (sequences and reads), square PHYLIP matrices, Newick trees.

mod fasta;
mod newick;
mod phylip;

pub use fasta::{parse_fasta, parse_read_file, write_reads_fasta, ReadFile, ReadFileMetadata};
pub use newick::{parse_newick, write_newick};
pub use phylip::{parse_phylip, write_phylip};

use crate::error::FormatError;

/// Longest label accepted in matrix and tree files.
pub const MAX_LABEL_LEN: usize = 64;

/// Checks that a label can be written to PHYLIP and Newick unquoted.
pub fn validate_label(label: &str) -> Result<(), FormatError> {
    let ok = !label.is_empty()
        && label.chars().count() <= MAX_LABEL_LEN
        && !label
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | ',' | ':' | ';' | '\''));
    if ok {
        Ok(())
    } else {
        Err(FormatError::InvalidLabel(label.to_string()))
    }
}
