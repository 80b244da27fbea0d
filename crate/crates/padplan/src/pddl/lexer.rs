//! Tokenizer for the s-expression syntax. Keywords are matched
//! case-insensitively by the parser; identifier spelling is preserved.

use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    LParen,
    RParen,
    /// Identifiers, keywords (`define`), section markers (`:init`), and
    /// operators (`<=`, `-`, `*`, ...).
    Symbol(String),
    /// `?name`, stored without the question mark.
    Variable(String),
    Number(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: u32,
    pub col: u32,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::LParen => "'('".to_string(),
            TokenKind::RParen => "')'".to_string(),
            TokenKind::Symbol(s) => format!("'{s}'"),
            TokenKind::Variable(v) => format!("'?{v}'"),
            TokenKind::Number(n) => format!("number {n}"),
        }
    }
}

fn is_symbol_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | ';' | '?')
}

/// Splits `text` into tokens, tracking 1-based line/column positions.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        ($c:expr) => {{
            if $c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }};
    }

    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        match c {
            ';' => {
                // Comment to end of line.
                while let Some(&c) = chars.peek() {
                    chars.next();
                    bump!(c);
                    if c == '\n' {
                        break;
                    }
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                bump!(c);
            }
            '(' => {
                chars.next();
                bump!(c);
                tokens.push(Token { kind: TokenKind::LParen, line: tline, col: tcol });
            }
            ')' => {
                chars.next();
                bump!(c);
                tokens.push(Token { kind: TokenKind::RParen, line: tline, col: tcol });
            }
            '?' => {
                chars.next();
                bump!(c);
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if is_symbol_char(c) {
                        name.push(c);
                        chars.next();
                        bump!(c);
                    } else {
                        break;
                    }
                }
                if name.is_empty() {
                    return Err(ParseError::Syntax {
                        line: tline,
                        col: tcol,
                        expected: "a variable name after '?'".to_string(),
                        found: "'?'".to_string(),
                    });
                }
                tokens.push(Token { kind: TokenKind::Variable(name), line: tline, col: tcol });
            }
            _ => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if is_symbol_char(c) {
                        word.push(c);
                        chars.next();
                        bump!(c);
                    } else {
                        break;
                    }
                }
                let kind = if looks_numeric(&word) {
                    match word.parse::<f64>() {
                        Ok(n) => TokenKind::Number(n),
                        Err(_) => {
                            return Err(ParseError::Syntax {
                                line: tline,
                                col: tcol,
                                expected: "a number".to_string(),
                                found: format!("'{word}'"),
                            })
                        }
                    }
                } else {
                    TokenKind::Symbol(word)
                };
                tokens.push(Token { kind, line: tline, col: tcol });
            }
        }
    }
    Ok(tokens)
}

/// A word is numeric when it starts with a digit, or with a sign/dot
/// immediately followed by a digit. A bare `-` stays a symbol (the typed-list
/// separator and the subtraction operator).
fn looks_numeric(word: &str) -> bool {
    let mut cs = word.chars();
    match cs.next() {
        Some(c) if c.is_ascii_digit() => true,
        Some('+' | '-') => matches!(cs.next(), Some(c) if c.is_ascii_digit() || c == '.'),
        Some('.') => matches!(cs.next(), Some(c) if c.is_ascii_digit()),
        _ => false,
    }
}
