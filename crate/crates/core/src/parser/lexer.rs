use num_bigint::BigInt;

use super::{DiagnosticKind, ParseDiagnostic};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub offset: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseDiagnostic> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let single = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, offset: start });
            i += 1;
            continue;
        }
        if b.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'.' || bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                return Err(ParseDiagnostic::new(
                    start,
                    DiagnosticKind::Lex,
                    format!("malformed numeric literal `{}`", literal_snippet(text, start)),
                ));
            }
            let n: BigInt = text[start..i].parse().expect("ascii digits");
            out.push(Token { tok: Tok::Int(n), offset: start });
            continue;
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(text[start..i].to_string()), offset: start });
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return Err(ParseDiagnostic::new(
            start,
            DiagnosticKind::Lex,
            format!("unexpected character `{}`", ch.escape_default()),
        ));
    }
    Ok(out)
}

fn literal_snippet(text: &str, start: usize) -> String {
    text[start..]
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric() || *c == '.' || *c == '_')
        .take(32)
        .collect()
}
