use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

use crate::CliResult;

#[derive(ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    /// Header row then one record per line
    Csv,
    /// One JSON object per line, keys as in the CSV header
    Json,
}

/// Writes `rows` as CSV or JSON lines, or calls `text` for the text form.
pub(crate) fn emit<R, F>(
    format: OutputFormat,
    out: &mut dyn Write,
    rows: &[R],
    text: F,
) -> CliResult
where
    R: Serialize,
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match format {
        OutputFormat::Text => text(out)?,
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            for row in rows {
                let line = serde_json::to_string(row).map_err(io::Error::from)?;
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(())
}

const GROUP: usize = 10;
const GROUPS_PER_LINE: usize = 5;

/// `"3.14159..."` as `3.` followed by groups of ten decimals, five groups
/// per line; continuation lines are indented to line up with the first.
pub(crate) fn group_digits(fixed: &str) -> String {
    let (int, frac) = fixed.split_once('.').unwrap_or((fixed, ""));
    let mut s = format!("{int}.");
    let indent = " ".repeat(int.len() + 1);
    let groups: Vec<&str> = frac
        .as_bytes()
        .chunks(GROUP)
        .map(|c| std::str::from_utf8(c).unwrap())
        .collect();
    for (i, line) in groups.chunks(GROUPS_PER_LINE).enumerate() {
        if i > 0 {
            s.push_str(&indent);
        }
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    if groups.is_empty() {
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouping() {
        assert_eq!(group_digits("3.1"), "3.1\n");
        assert_eq!(group_digits("3.14159265358"), "3.1415926535 8\n");
        let sixty: String = "3.".to_string() + &"0123456789".repeat(6);
        let g = group_digits(&sixty);
        let lines: Vec<&str> = g.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].split(' ').count(), 5);
        assert_eq!(lines[1], "  0123456789");
    }
}
