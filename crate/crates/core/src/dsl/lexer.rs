use std::fmt;

use super::{ParseError, Pos};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Word(String),
    Str(String),
    Punct(&'static str),
    Newline,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Str(_) => f.write_str("string"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Newline => f.write_str("end of line"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// Longest match first.
const PUNCT: &[&str] = &[
    "->", "~=", "<=", "≈", "≤", "⊆", "⊂", "∈", "≅", "⊢", "~", "<", "=", "(", ")", "|", ";", ":", ",", "[", "]",
    "@", "!", "/",
];

pub fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-' | '+' | '*')
}

/// Splits `src` into tokens. Newlines inside brackets or parentheses are
/// dropped so long statements can wrap; `#` starts a comment.
pub fn tokenize(src: &str, origin: Pos) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let (mut line, mut col) = (origin.line, origin.col);
    let mut depth: i32 = 0;

    macro_rules! advance {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            if depth == 0 && !matches!(out.last(), None | Some(Token { tok: Tok::Newline, .. })) {
                out.push(Token { tok: Tok::Newline, pos });
            }
            advance!();
        } else if c.is_whitespace() {
            advance!();
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance!();
            }
        } else if c == '"' {
            advance!();
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(ParseError::new(pos, "unterminated string")),
                    Some('"') => {
                        advance!();
                        break;
                    }
                    Some('\\') => {
                        let esc = match chars.get(i + 1) {
                            Some('"') => '"',
                            Some('\\') => '\\',
                            Some('n') => '\n',
                            _ => return Err(ParseError::new(Pos { line, col }, "invalid escape in string")),
                        };
                        s.push(esc);
                        advance!();
                        advance!();
                    }
                    Some(&ch) => {
                        s.push(ch);
                        advance!();
                    }
                }
            }
            out.push(Token { tok: Tok::Str(s), pos });
        } else if is_word_char(c) && !(c == '-' && chars.get(i + 1) == Some(&'>')) {
            let mut w = String::new();
            while i < chars.len()
                && is_word_char(chars[i])
                && !(chars[i] == '-' && chars.get(i + 1) == Some(&'>'))
            {
                w.push(chars[i]);
                advance!();
            }
            out.push(Token { tok: Tok::Word(w), pos });
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let Some(p) = PUNCT.iter().find(|p| rest.starts_with(**p)) else {
                return Err(ParseError::new(pos, format!("unexpected character `{c}`")));
            };
            match *p {
                "(" | "[" => depth += 1,
                ")" | "]" => depth = (depth - 1).max(0),
                _ => {}
            }
            for _ in 0..p.chars().count() {
                advance!();
            }
            out.push(Token { tok: Tok::Punct(p), pos });
        }
    }
    if !matches!(out.last(), None | Some(Token { tok: Tok::Newline, .. })) {
        out.push(Token { tok: Tok::Newline, pos: Pos { line, col } });
    }
    Ok(out)
}
