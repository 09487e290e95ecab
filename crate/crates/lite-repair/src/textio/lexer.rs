use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Var(String),
    Number(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Subsumed,
    Not,
    Minus,
    Implied,
    Newline,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Var(s) => format!("`?{s}`"),
            Tok::Number(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Subsumed => "`<=`".into(),
            Tok::Not => "`!`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Implied => "`:-`".into(),
            Tok::Newline => "end of line".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits `text` into tokens; `%` starts a comment running to the end of the
/// line. Every line ends with a `Newline` token.
pub(crate) fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (l, raw) in text.lines().enumerate() {
        let line = l + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let mut push = |tok, len: usize| {
                out.push(Spanned { tok, line, column });
                len
            };
            if c == '%' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let ident = |start: usize| {
                let mut j = start;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                (chars[start..j].iter().collect::<String>(), j)
            };
            i += match c {
                '(' => push(Tok::LParen, 1),
                ')' => push(Tok::RParen, 1),
                '[' => push(Tok::LBracket, 1),
                ']' => push(Tok::RBracket, 1),
                ',' => push(Tok::Comma, 1),
                '!' => push(Tok::Not, 1),
                '-' => push(Tok::Minus, 1),
                '<' if chars.get(i + 1) == Some(&'=') => push(Tok::Subsumed, 2),
                ':' if chars.get(i + 1) == Some(&'-') => push(Tok::Implied, 2),
                '?' => {
                    if !chars.get(i + 1).copied().is_some_and(is_ident_start) {
                        return Err(ParseError::new(line, column, "expected a variable name after `?`"));
                    }
                    let (name, end) = ident(i + 1);
                    push(Tok::Var(name), end - i)
                }
                c if c.is_ascii_digit() => {
                    let mut j = i;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let digits: String = chars[i..j].iter().collect();
                    let n = digits
                        .parse()
                        .map_err(|_| ParseError::new(line, column, "number out of range"))?;
                    push(Tok::Number(n), j - i)
                }
                c if is_ident_start(c) => {
                    let (name, end) = ident(i);
                    push(Tok::Ident(name), end - i)
                }
                other => {
                    return Err(ParseError::new(line, column, format!("unexpected character `{other}`")));
                }
            };
        }
        out.push(Spanned {
            tok: Tok::Newline,
            line,
            column: chars.len() + 1,
        });
    }
    Ok(out)
}
