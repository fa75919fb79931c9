//! Tokenizer shared by the word parsers.
//!
//! A word is a whitespace-separated product of tokens `base` or `base^k`,
//! where `base` may contain bracketed groups (`f[1,2,w_1 w_2]`) and `k` is a
//! signed integer. The single token `1` denotes the identity.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token<'a> {
    pub pos: usize,
    pub base: &'a str,
    pub exp: i64,
}

pub(crate) fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

pub(crate) fn tokenize(s: &str) -> Result<Vec<Token<'_>>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() || bytes[i] == b'*' {
            i += 1;
            continue;
        }
        let start = i;
        let mut depth = 0usize;
        while i < bytes.len() {
            match bytes[i] {
                b'[' => depth += 1,
                b']' => {
                    if depth == 0 {
                        return Err(parse_err(i, "unbalanced ']'"));
                    }
                    depth -= 1;
                }
                b'^' if depth == 0 => break,
                c if depth == 0 && (c.is_ascii_whitespace() || c == b'*') => break,
                _ => {}
            }
            i += 1;
        }
        if depth != 0 {
            return Err(parse_err(start, "unclosed '['"));
        }
        let base = &s[start..i];
        let mut exp = 1i64;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let estart = i;
            if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
                i += 1;
            }
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            exp = s[estart..i]
                .parse()
                .map_err(|_| parse_err(estart, "expected integer exponent after '^'"))?;
        }
        if base.is_empty() {
            return Err(parse_err(start, "missing generator before '^'"));
        }
        out.push(Token { pos: start, base, exp });
    }
    // `1` alone (or as a factor) is the identity.
    out.retain(|t| t.base != "1");
    Ok(out)
}
