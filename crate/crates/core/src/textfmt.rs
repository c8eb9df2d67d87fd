//! Plain-text matrix format used by the CLI.
//!
//! ```text
//! p s nrows ncols
//! a11 a12 ... a1n
//! ...
//! ```
//!
//! Entries are ASCII decimals in `[0, p^s)`. Blank lines and lines starting
//! with `#` are ignored. Standard-form output carries two extra lines,
//! `type: n t1 ... ts` and `perm: i1 ... in` (1-based images), which the
//! parser accepts anywhere in the document.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::{BlockLayout, Matrix, Permutation};
use crate::stdform::StandardForm;
use crate::zring::RingSpec;

/// A parsed document: the matrix plus any metadata lines it carried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub matrix: Matrix,
    pub layout: Option<BlockLayout>,
    pub perm: Option<Permutation>,
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

fn tokens(line: &str, line_no: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in line
        .char_indices()
        .chain(std::iter::once((line.len(), ' ')))
    {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(idx),
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..idx],
                    line: line_no,
                    column: s + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn parse_error(tok: &Token<'_>, message: impl Into<String>) -> Error {
    Error::Parse {
        line: tok.line,
        column: tok.column,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(tok: &Token<'_>, what: &str) -> Result<T> {
    tok.text
        .parse()
        .map_err(|_| parse_error(tok, format!("expected {what}, found `{}`", tok.text)))
}

fn numbers(toks: &[Token<'_>], what: &str) -> Result<Vec<usize>> {
    toks.iter().map(|t| number(t, what)).collect()
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    parse_document(text).map(|d| d.matrix)
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut header: Option<(RingSpec, usize, usize)> = None;
    let mut data = Vec::new();
    let mut rows_seen = 0;
    let mut type_line = None;
    let mut perm_line = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks = tokens(raw, line_no);
        let first = &toks[0];
        if let Some(key) = first.text.strip_suffix(':') {
            match key {
                "type" => {
                    type_line = Some((line_no, first.column, numbers(&toks[1..], "a type entry")?))
                }
                "perm" => {
                    perm_line = Some((
                        line_no,
                        first.column,
                        numbers(&toks[1..], "a permutation image")?,
                    ))
                }
                _ => return Err(parse_error(first, format!("unknown metadata key `{key}`"))),
            }
            continue;
        }
        match header {
            None => {
                if toks.len() != 4 {
                    return Err(parse_error(first, "header must be `p s nrows ncols`"));
                }
                let p: u64 = number(&toks[0], "prime p")?;
                let s: u32 = number(&toks[1], "exponent s")?;
                let nrows: usize = number(&toks[2], "row count")?;
                let ncols: usize = number(&toks[3], "column count")?;
                let ring = RingSpec::new(p, s).map_err(|e| parse_error(&toks[0], e.to_string()))?;
                header = Some((ring, nrows, ncols));
            }
            Some((ring, nrows, ncols)) => {
                if rows_seen == nrows {
                    return Err(parse_error(
                        first,
                        format!("expected {nrows} rows, found more"),
                    ));
                }
                if toks.len() != ncols {
                    let tok = toks.get(ncols).unwrap_or(&toks[toks.len() - 1]);
                    return Err(parse_error(
                        tok,
                        format!("expected {ncols} entries, found {}", toks.len()),
                    ));
                }
                for tok in &toks {
                    let v: u64 = number(tok, "an entry")?;
                    if !ring.contains(v) {
                        return Err(parse_error(
                            tok,
                            format!("entry {v} is not a residue modulo {}", ring.modulus()),
                        ));
                    }
                    data.push(v);
                }
                rows_seen += 1;
            }
        }
    }

    let (ring, nrows, ncols) = header.ok_or(Error::Parse {
        line: last_line.max(1),
        column: 1,
        message: "missing header `p s nrows ncols`".into(),
    })?;
    if rows_seen != nrows {
        return Err(Error::Parse {
            line: last_line + 1,
            column: 1,
            message: format!("expected {nrows} rows, found {rows_seen}"),
        });
    }
    let matrix = Matrix::from_vec(ring, nrows, ncols, data)?;

    let layout = match type_line {
        None => None,
        Some((line, column, v)) => {
            let mk_err = |message: String| Error::Parse {
                line,
                column,
                message,
            };
            let (&n, t) = v
                .split_first()
                .ok_or_else(|| mk_err("empty type line".into()))?;
            Some(BlockLayout::for_ring(ring, n, t.to_vec()).map_err(|e| mk_err(e.to_string()))?)
        }
    };
    let perm = match perm_line {
        None => None,
        Some((line, column, v)) => {
            Some(Permutation::from_one_based(&v).map_err(|e| Error::Parse {
                line,
                column,
                message: e.to_string(),
            })?)
        }
    };
    Ok(Document {
        matrix,
        layout,
        perm,
    })
}

pub fn format_matrix(m: &Matrix) -> String {
    let ring = m.ring();
    let mut out = format!("{} {} {} {}\n", ring.p(), ring.s(), m.nrows(), m.ncols());
    for row in m.rows() {
        let line: Vec<String> = row.iter().map(u64::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// `type:` and `perm:` lines followed by the standard-form matrix.
pub fn format_standard_form(sf: &StandardForm) -> String {
    let mut out = String::new();
    let layout = sf.layout();
    write!(out, "type: {}", layout.n()).unwrap();
    for t in layout.types() {
        write!(out, " {t}").unwrap();
    }
    out.push_str("\nperm:");
    for i in sf.permutation().one_based() {
        write!(out, " {i}").unwrap();
    }
    out.push('\n');
    out.push_str(&format_matrix(sf.matrix()));
    out
}
