//! Reading observation files.
//!
//! Accepted layouts: integers separated by whitespace and newlines, or a
//! single-column CSV whose first line may be a header.

use std::fs;
use std::io::{self, Read};
use std::path::Path;

use gainlattice::Dataset;

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

pub fn read_source(path: &Path) -> io::Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path)
    }
}

fn looks_like_header(line: &str) -> bool {
    line.chars().any(|c| c.is_ascii_alphabetic() || c == '"')
}

pub fn parse_observations(text: &str) -> Result<Dataset, ParseError> {
    let mut samples = Vec::new();
    let mut seen_content = false;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim().trim_end_matches(',');
        if line.is_empty() {
            continue;
        }
        let first = !seen_content;
        seen_content = true;
        if first && looks_like_header(line) && !line.contains(char::is_whitespace) {
            continue;
        }
        for token in line.split_whitespace() {
            let value = token.parse::<u64>().map_err(|_| ParseError {
                line: i + 1,
                message: format!("expected a non-negative integer, found {token:?}"),
            })?;
            samples.push(value);
        }
    }
    if samples.is_empty() {
        return Err(ParseError {
            line: 0,
            message: "no observations".into(),
        });
    }
    Ok(Dataset::new(samples))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whitespace_and_newlines() {
        let d = parse_observations("1 2  3\n\n5\t6\r\n").unwrap();
        assert_eq!(d.samples, vec![1, 2, 3, 5, 6]);
    }

    #[test]
    fn csv_with_header() {
        let d = parse_observations("count\n4\n0\n4\n").unwrap();
        assert_eq!(d.samples, vec![4, 0, 4]);
        let d = parse_observations("7,\n8,\n").unwrap();
        assert_eq!(d.samples, vec![7, 8]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_observations("x\n1\n2\n-3\n").unwrap_err();
        assert_eq!(err.line, 4);
        let err = parse_observations("1\nabc\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse_observations("1,2\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn empty_input() {
        assert!(parse_observations("\n  \n").is_err());
        assert!(parse_observations("header\n").is_err());
    }
}
