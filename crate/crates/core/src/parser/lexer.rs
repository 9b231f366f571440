use crate::span::Position;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Word(String),
    Number(String),
    Str(String),
    Date(String),
    LBrace,
    RBrace,
    Equals,
    Colon,
    Comma,
    Cmp(&'static str),
    Eof,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::Number(n) => format!("number `{n}`"),
            TokenKind::Str(_) => "string".to_string(),
            TokenKind::Date(d) => format!("date `{d}`"),
            TokenKind::LBrace => "`{`".to_string(),
            TokenKind::RBrace => "`}`".to_string(),
            TokenKind::Equals => "`=`".to_string(),
            TokenKind::Colon => "`:`".to_string(),
            TokenKind::Comma => "`,`".to_string(),
            TokenKind::Cmp(c) => format!("`{c}`"),
            TokenKind::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub start: Position,
    /// One past the last character.
    pub end: Position,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    column: u32,
}

impl Cursor<'_> {
    fn pos(&self) -> Position {
        Position::new(self.line, self.column)
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat_while(&mut self, out: &mut String, pred: impl Fn(char) -> bool) {
        while let Some(c) = self.peek() {
            if !pred(c) {
                break;
            }
            out.push(c);
            self.bump();
        }
    }
}

fn is_date_shape(s: &str) -> bool {
    let b = s.as_bytes();
    b.len() == 10
        && b[4] == b'-'
        && b[7] == b'-'
        && b.iter().enumerate().all(|(i, c)| i == 4 || i == 7 || c.is_ascii_digit())
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor { chars: src.chars().peekable(), line: 1, column: 1 };
    let mut tokens = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c == '#' {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            } else if c.is_whitespace() {
                cur.bump();
            } else {
                break;
            }
        }
        let start = cur.pos();
        let Some(c) = cur.peek() else {
            tokens.push(Token { kind: TokenKind::Eof, start, end: start });
            return Ok(tokens);
        };
        let kind = match c {
            '{' | '}' | ':' | ',' => {
                cur.bump();
                match c {
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    ':' => TokenKind::Colon,
                    _ => TokenKind::Comma,
                }
            }
            '=' => {
                cur.bump();
                if cur.peek() == Some('=') {
                    cur.bump();
                    TokenKind::Cmp("==")
                } else {
                    TokenKind::Equals
                }
            }
            '<' | '>' => {
                cur.bump();
                if cur.peek() == Some('=') {
                    cur.bump();
                    TokenKind::Cmp(if c == '<' { "<=" } else { ">=" })
                } else {
                    TokenKind::Cmp(if c == '<' { "<" } else { ">" })
                }
            }
            '"' => {
                cur.bump();
                TokenKind::Str(lex_string(&mut cur, start)?)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                cur.eat_while(&mut word, |c| c.is_ascii_alphanumeric() || c == '_');
                TokenKind::Word(word)
            }
            c if c.is_ascii_digit() || c == '-' => {
                let mut text = String::new();
                if c == '-' {
                    text.push('-');
                    cur.bump();
                    if !cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(ParseError::at(cur.pos(), "expected a digit after `-`"));
                    }
                }
                cur.eat_while(&mut text, |c| c.is_ascii_digit());
                if cur.peek() == Some('-') && !text.starts_with('-') {
                    // possible YYYY-MM-DD
                    cur.eat_while(&mut text, |c| c.is_ascii_digit() || c == '-');
                    if !is_date_shape(&text) {
                        return Err(ParseError::at(start, format!("malformed date `{text}`, expected YYYY-MM-DD")));
                    }
                    TokenKind::Date(text)
                } else {
                    if cur.peek() == Some('.') {
                        text.push('.');
                        cur.bump();
                        let before = text.len();
                        cur.eat_while(&mut text, |c| c.is_ascii_digit());
                        if text.len() == before {
                            return Err(ParseError::at(cur.pos(), "expected a digit after `.`"));
                        }
                    }
                    if cur.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                        // units must be separated from the number: `5 Hz`, not `5Hz`
                        return Err(ParseError::at(cur.pos(), "expected whitespace after number"));
                    }
                    TokenKind::Number(text)
                }
            }
            other => {
                return Err(ParseError::at(start, format!("unexpected character `{}`", other.escape_debug())));
            }
        };
        tokens.push(Token { kind, start, end: cur.pos() });
    }
}

fn lex_string(cur: &mut Cursor<'_>, start: Position) -> Result<String, ParseError> {
    let mut out = String::new();
    loop {
        let pos = cur.pos();
        match cur.bump() {
            None => return Err(ParseError::at(start, "unterminated string")),
            Some('"') => return Ok(out),
            Some('\n') => return Err(ParseError::at(start, "unterminated string")),
            Some('\\') => match cur.bump() {
                Some('"') => out.push('"'),
                Some('\\') => out.push('\\'),
                Some('n') => out.push('\n'),
                Some('t') => out.push('\t'),
                Some('r') => out.push('\r'),
                Some('u') => {
                    if cur.bump() != Some('{') {
                        return Err(ParseError::at(pos, "expected `{` after `\\u`"));
                    }
                    let mut hex = String::new();
                    cur.eat_while(&mut hex, |c| c.is_ascii_hexdigit());
                    if cur.bump() != Some('}') {
                        return Err(ParseError::at(pos, "unterminated `\\u{...}` escape"));
                    }
                    let ch = u32::from_str_radix(&hex, 16)
                        .ok()
                        .filter(|_| hex.len() <= 6)
                        .and_then(char::from_u32)
                        .ok_or_else(|| ParseError::at(pos, format!("invalid unicode escape `\\u{{{hex}}}`")))?;
                    out.push(ch);
                }
                Some(other) => {
                    return Err(ParseError::at(pos, format!("invalid escape `\\{}`", other.escape_debug())));
                }
                None => return Err(ParseError::at(start, "unterminated string")),
            },
            Some(c) => out.push(c),
        }
    }
}

/// Quotes `s` so that the lexer reads it back unchanged.
pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() => out.push_str(&format!("\\u{{{:x}}}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
