use super::{ParseError, ParseErrorKind, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Str(String),
    Semi,
    Colon,
    Comma,
    Eq,
    EqEq,
    Neq,
    Bang,
    AndAnd,
    OrOr,
    Lt,
    Gt,
    Plus,
    PlusPlus,
    Minus,
    Star,
    Arrow,
    Hash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{}`", s),
            Tok::Int(i) => format!("`{}`", i),
            Tok::Str(s) => format!("\"{}\"", s),
            other => {
                let s = match other {
                    Tok::Semi => ";",
                    Tok::Colon => ":",
                    Tok::Comma => ",",
                    Tok::Eq => "=",
                    Tok::EqEq => "==",
                    Tok::Neq => "!=",
                    Tok::Bang => "!",
                    Tok::AndAnd => "&&",
                    Tok::OrOr => "||",
                    Tok::Lt => "<",
                    Tok::Gt => ">",
                    Tok::Plus => "+",
                    Tok::PlusPlus => "++",
                    Tok::Minus => "-",
                    Tok::Star => "*",
                    Tok::Arrow => "->",
                    Tok::Hash => "#",
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBracket => "[",
                    Tok::RBracket => "]",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    _ => unreachable!(),
                };
                format!("`{}`", s)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Splits `text` into tokens. `//` and `/* */` comments are skipped and may
/// contain any Unicode; everything else must be ASCII.
pub fn lex(text: &str, file: Option<&str>) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let span = |line, start, end| SourceSpan { file: file.map(str::to_string), line, col_start: start, col_end: end };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let (sl, sc) = (line, col);
            i += 2;
            col += 2;
            loop {
                if i >= chars.len() {
                    return Err(ParseError::new(ParseErrorKind::Lexical("unterminated comment".into()), span(sl, sc, sc + 2)));
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    i += 2;
                    col += 2;
                    break;
                }
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
            continue;
        }
        let start = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), span: span(line, start, col) });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            let v = s.parse::<u64>().map_err(|_| {
                ParseError::new(ParseErrorKind::Lexical(format!("integer `{}` out of range", s)), span(line, start, col))
            })?;
            out.push(Token { tok: Tok::Int(v), span: span(line, start, col) });
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                match chars.get(i) {
                    None | Some('\n') => {
                        return Err(ParseError::new(
                            ParseErrorKind::Lexical("unterminated string".into()),
                            span(line, start, col),
                        ))
                    }
                    Some('"') => {
                        i += 1;
                        col += 1;
                        break;
                    }
                    Some(ch) => {
                        s.push(*ch);
                        i += 1;
                        col += 1;
                    }
                }
            }
            out.push(Token { tok: Tok::Str(s), span: span(line, start, col) });
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match (c, next) {
            ('+', Some('+')) => (Tok::PlusPlus, 2),
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('!', Some('=')) => (Tok::Neq, 2),
            ('=', Some('=')) => (Tok::EqEq, 2),
            ('&', Some('&')) => (Tok::AndAnd, 2),
            ('|', Some('|')) => (Tok::OrOr, 2),
            (';', _) => (Tok::Semi, 1),
            (':', _) => (Tok::Colon, 1),
            (',', _) => (Tok::Comma, 1),
            ('=', _) => (Tok::Eq, 1),
            ('!', _) => (Tok::Bang, 1),
            ('<', _) => (Tok::Lt, 1),
            ('>', _) => (Tok::Gt, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('#', _) => (Tok::Hash, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            ('{', _) => (Tok::LBrace, 1),
            ('}', _) => (Tok::RBrace, 1),
            _ => {
                return Err(ParseError::new(
                    ParseErrorKind::Lexical(format!("unexpected character `{}`", c)),
                    span(line, start, start + 1),
                ))
            }
        };
        i += len;
        col += len;
        out.push(Token { tok, span: span(line, start, col) });
    }
    Ok(out)
}
