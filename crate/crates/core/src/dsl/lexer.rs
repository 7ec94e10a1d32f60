use num::BigInt;

use super::ast::Span;
use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(&'static str),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

const SYMBOLS: [&str; 16] = ["==", "[", "]", "(", ")", "{", "}", ",", ";", ":", "=", "+", "-", "*", "/", "^"];

pub(crate) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut k, mut line, mut col) = (0, 1, 1);
    let advance = |k: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *k += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while k < chars.len() {
        let c = chars[k];
        let span = Span { line, column: col };
        if c == '#' {
            while k < chars.len() && chars[k] != '\n' {
                let ch = chars[k];
                advance(&mut k, &mut line, &mut col, ch);
            }
        } else if c.is_whitespace() {
            advance(&mut k, &mut line, &mut col, c);
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                s.push(chars[k]);
                let ch = chars[k];
                advance(&mut k, &mut line, &mut col, ch);
            }
            out.push(Token { tok: Tok::Ident(s), span });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while k < chars.len() && chars[k].is_ascii_digit() {
                s.push(chars[k]);
                let ch = chars[k];
                advance(&mut k, &mut line, &mut col, ch);
            }
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), span });
        } else {
            let rest: String = chars[k..chars.len().min(k + 2)].iter().collect();
            let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
                return Err(ParseError::new(span, "a token", format!("'{c}'")));
            };
            for ch in sym.chars() {
                advance(&mut k, &mut line, &mut col, ch);
            }
            out.push(Token { tok: Tok::Sym(sym), span });
        }
    }
    out.push(Token { tok: Tok::Eof, span: Span { line, column: col } });
    Ok(out)
}
