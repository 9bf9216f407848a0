use super::ast::Span;
use super::diagnostic::{Diagnostic, DiagnosticCode};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Word(String),
    LBrace,
    RBrace,
    Semi,
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::Semi => "`;`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

fn is_word_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

/// Splits source text into words and punctuation. `//` comments run to end
/// of line. Identifiers may contain `-`, so `must-not-use` is one word.
pub fn tokenize(source: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut tokens = Vec::new();
    let mut chars = source.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);

    while let Some(&c) = chars.peek() {
        let start = Span::point(line, col);
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '/' {
            chars.next();
            if chars.peek() == Some(&'/') {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
                continue;
            }
            return Err(Diagnostic::error(DiagnosticCode::UnexpectedToken, start, "unexpected character `/`"));
        }
        let punct = match c {
            '{' => Some(TokenKind::LBrace),
            '}' => Some(TokenKind::RBrace),
            ';' => Some(TokenKind::Semi),
            _ => None,
        };
        if let Some(kind) = punct {
            chars.next();
            col += 1;
            tokens.push(Token { kind, span: Span { end_column: col, ..start } });
            continue;
        }
        if is_word_start(c) {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if !is_word_char(c) {
                    break;
                }
                word.push(c);
                chars.next();
                col += 1;
            }
            tokens.push(Token { kind: TokenKind::Word(word), span: Span { end_column: col, ..start } });
            continue;
        }
        return Err(Diagnostic::error(
            DiagnosticCode::UnexpectedToken,
            start,
            format!("unexpected character `{c}`"),
        ));
    }
    tokens.push(Token { kind: TokenKind::Eof, span: Span::point(line, col) });
    Ok(tokens)
}
