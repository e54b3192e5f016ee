//! Plain-text state files.
//!
//! ```text
//! QSTATE 1
//! # kind: cat
//! 2
//! 2 2
//! 7.0710678118654746e-1 0.0000000000000000e0
//! ...
//! ```
//!
//! Line 1 is the header, then the party count, the dimensions and one
//! "re im" pair per amplitude in flat-index order. Lines starting with '#'
//! and blank lines may appear anywhere after the header. Values are written
//! with 17 significant digits so a write/read cycle is bit-exact.

use std::fs;
use std::path::Path;

use crate::error::{Result, SepError};
use crate::state::{Amplitude, DimensionProfile, PureState};
use crate::tolerance::ToleranceConfig;

pub const HEADER: &str = "QSTATE 1";

#[derive(Debug, Clone, PartialEq)]
pub struct StateFile {
    pub state: PureState,
    pub comments: Vec<String>,
    /// The amplitudes were slightly off unit norm and have been rescaled.
    pub rescaled: bool,
}

fn parse_err(line: usize, message: impl Into<String>) -> SepError {
    SepError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_state(text: &str, tol: &ToleranceConfig) -> Result<StateFile> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((no, other)) => {
            return Err(parse_err(
                no,
                format!("expected header '{HEADER}', found '{other}'"),
            ))
        }
        None => return Err(parse_err(1, "empty file")),
    }
    let mut comments = Vec::new();
    let mut body = Vec::new();
    for (no, line) in lines {
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
        } else if !line.is_empty() {
            body.push((no, line));
        }
    }
    let last_line = text.lines().count().max(1);
    let mut body = body.into_iter();

    let (no, line) = body
        .next()
        .ok_or_else(|| parse_err(last_line, "missing party count"))?;
    let n: usize = line
        .parse()
        .map_err(|_| parse_err(no, format!("invalid party count '{line}'")))?;

    let (no, line) = body
        .next()
        .ok_or_else(|| parse_err(last_line, "missing dimensions"))?;
    let dims = line
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(no, format!("invalid dimension '{t}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    if dims.len() != n {
        return Err(parse_err(
            no,
            format!("expected {n} dimensions, found {}", dims.len()),
        ));
    }
    let profile = DimensionProfile::new(&dims).map_err(|e| parse_err(no, e.to_string()))?;

    let expected = profile.total();
    let mut amplitudes = Vec::with_capacity(expected);
    for (no, line) in body {
        if amplitudes.len() == expected {
            return Err(parse_err(
                no,
                format!("expected {expected} amplitudes, found more"),
            ));
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [re, im] = parts.as_slice() else {
            return Err(parse_err(no, format!("expected 're im', found '{line}'")));
        };
        let value = |t: &str| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(no, format!("invalid number '{t}'")))
        };
        amplitudes.push(Amplitude::new(value(re)?, value(im)?));
    }
    if amplitudes.len() != expected {
        return Err(parse_err(
            last_line,
            format!("expected {expected} amplitudes, found {}", amplitudes.len()),
        ));
    }
    let (state, rescaled) = PureState::from_input(profile, amplitudes, tol)?;
    Ok(StateFile {
        state,
        comments,
        rescaled,
    })
}

pub fn format_state(state: &PureState, comments: &[String]) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&format!("{}\n", state.parties()));
    let dims: Vec<String> = state.dims().iter().map(|d| d.to_string()).collect();
    out.push_str(&dims.join(" "));
    out.push('\n');
    for a in state.amplitudes() {
        out.push_str(&format!("{:.16e} {:.16e}\n", a.re, a.im));
    }
    out
}

pub fn read_state(path: &Path, tol: &ToleranceConfig) -> Result<StateFile> {
    parse_state(&fs::read_to_string(path)?, tol)
}

pub fn write_state(path: &Path, state: &PureState, comments: &[String]) -> Result<()> {
    fs::write(path, format_state(state, comments))?;
    Ok(())
}
