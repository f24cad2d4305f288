//! Inline and file vector syntax: rows separated by `;` or newlines, entries by commas
//! or whitespace, each entry an integer or `p/q`. `#` starts a comment.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::CliError;

fn parse_error(line: usize, column: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, column, msg: msg.into() }
}

/// Parses one exact rational, `p` or `p/q`.
pub fn rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((p, q)) => {
            let (p, q) = (p.trim().parse::<BigInt>().ok()?, q.trim().parse::<BigInt>().ok()?);
            (!q.is_zero()).then(|| BigRational::new(p, q))
        }
    }
}

struct Token {
    text: String,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Vec<Vec<Token>> {
    let mut rows = Vec::new();
    for (li, l) in text.lines().enumerate() {
        let l = l.split('#').next().unwrap_or("");
        let mut row: Vec<Token> = Vec::new();
        let mut cur: Option<Token> = None;
        for (ci, c) in l.chars().enumerate() {
            if c == ',' || c == ';' || c.is_whitespace() {
                row.extend(cur.take());
                if c == ';' && !row.is_empty() {
                    rows.push(std::mem::take(&mut row));
                }
            } else {
                cur.get_or_insert_with(|| Token { text: String::new(), line: li + 1, col: ci + 1 }).text.push(c);
            }
        }
        row.extend(cur);
        if !row.is_empty() {
            rows.push(row);
        }
    }
    rows
}

/// Rows of exact rationals; errors carry the 1-based line and column of the bad entry.
pub fn rational_rows(text: &str) -> Result<Vec<Vec<BigRational>>, CliError> {
    let toks = tokenize(text);
    let Some(first) = toks.first() else { return Err(parse_error(1, 1, "no vectors given")) };
    let n = first.len();
    let mut rows = Vec::with_capacity(toks.len());
    for row in &toks {
        if row.len() != n {
            return Err(parse_error(row[0].line, row[0].col, format!("row has {} entries, expected {n}", row.len())));
        }
        rows.push(
            row.iter()
                .map(|t| rational(&t.text).ok_or_else(|| parse_error(t.line, t.col, format!("not a number: {:?}", t.text))))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(rows)
}

/// Rows of integers.
pub fn integer_rows(text: &str) -> Result<Vec<Vec<BigInt>>, CliError> {
    let rows = rational_rows(text)?;
    let toks = tokenize(text);
    rows.into_iter()
        .zip(&toks)
        .map(|(r, tr)| {
            r.into_iter()
                .zip(tr)
                .map(|(x, t)| {
                    if x.denom().is_one() {
                        Ok(x.to_integer())
                    } else {
                        Err(parse_error(t.line, t.col, format!("not an integer: {:?}", t.text)))
                    }
                })
                .collect()
        })
        .collect()
}

/// A single integer vector.
pub fn integer_vector(text: &str) -> Result<Vec<BigInt>, CliError> {
    let mut rows = integer_rows(text)?;
    if rows.len() != 1 {
        return Err(parse_error(1, 1, format!("expected one vector, got {}", rows.len())));
    }
    Ok(rows.remove(0))
}

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, col)
}
