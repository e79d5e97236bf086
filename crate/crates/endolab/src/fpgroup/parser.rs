//! Hand-rolled lexer and recursive-descent parser for presentation text.

use std::fmt;

use super::{Factor, Presentation, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub(crate) fn at(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError { line, col, msg: msg.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(i64),
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eq,
    Colon,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex_statement(text: &str, line: usize, col0: usize) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i + 1;
        match c {
            ' ' | '\t' | '\r' => i += 1,
            '^' => {
                out.push(Spanned { tok: Tok::Caret, line, col });
                i += 1;
            }
            '(' => {
                out.push(Spanned { tok: Tok::LParen, line, col });
                i += 1;
            }
            ')' => {
                out.push(Spanned { tok: Tok::RParen, line, col });
                i += 1;
            }
            '[' => {
                out.push(Spanned { tok: Tok::LBracket, line, col });
                i += 1;
            }
            ']' => {
                out.push(Spanned { tok: Tok::RBracket, line, col });
                i += 1;
            }
            ',' => {
                out.push(Spanned { tok: Tok::Comma, line, col });
                i += 1;
            }
            '=' => {
                out.push(Spanned { tok: Tok::Eq, line, col });
                i += 1;
            }
            ':' => {
                out.push(Spanned { tok: Tok::Colon, line, col });
                i += 1;
            }
            '-' | '0'..='9' => {
                let start = i;
                if c == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v: i64 = s
                    .parse()
                    .map_err(|_| ParseError::at(line, col, format!("bad integer {s:?}")))?;
                out.push(Spanned { tok: Tok::Int(v), line, col });
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Name(s), line, col });
            }
            other => {
                return Err(ParseError::at(line, col, format!("unexpected character {other:?}")));
            }
        }
    }
    Ok(out)
}

struct WordParser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    gens: &'a [String],
    line: usize,
    end_col: usize,
}

impl<'a> WordParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or((self.line, self.end_col))
    }

    fn bump(&mut self) -> Option<&Spanned> {
        let s = self.toks.get(self.pos);
        if s.is_some() {
            self.pos += 1;
        }
        s
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::at(line, col, msg)
    }

    /// Parses factors until one of the stop tokens (or end of input).
    fn word(&mut self, stops: &[Tok]) -> Result<Word, ParseError> {
        let mut factors = Vec::new();
        loop {
            match self.peek() {
                None => break,
                Some(t) if stops.contains(t) => break,
                _ => factors.push(self.factor()?),
            }
        }
        if factors.is_empty() {
            return Err(self.err("expected a word"));
        }
        Ok(Word(factors))
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        match self.peek() {
            Some(Tok::Caret) => {
                self.bump();
                let (line, col) = self.here();
                match self.bump().map(|s| s.tok.clone()) {
                    Some(Tok::Int(v)) => {
                        if v == 0 {
                            Err(ParseError::at(line, col, "zero exponent is not allowed"))
                        } else {
                            Ok(v)
                        }
                    }
                    _ => Err(ParseError::at(line, col, "expected an integer after '^'")),
                }
            }
            _ => Ok(1),
        }
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let (line, col) = self.here();
        let tok = self.bump().map(|s| s.tok.clone());
        match tok {
            Some(Tok::Name(name)) => {
                let gen = self
                    .gens
                    .iter()
                    .position(|g| *g == name)
                    .ok_or_else(|| ParseError::at(line, col, format!("undeclared generator {name:?}")))?;
                let exp = self.exponent()?;
                Ok(Factor::Gen { gen, exp })
            }
            Some(Tok::Int(1)) => {
                if matches!(self.peek(), Some(Tok::Caret)) {
                    return Err(self.err("the identity literal cannot carry an exponent"));
                }
                Ok(Factor::One)
            }
            Some(Tok::Int(v)) => {
                Err(ParseError::at(line, col, format!("unexpected integer {v} (only the identity literal 1 may appear)")))
            }
            Some(Tok::LParen) => {
                let inner = self.word(&[Tok::RParen])?;
                match self.bump().map(|s| s.tok.clone()) {
                    Some(Tok::RParen) => {}
                    _ => return Err(ParseError::at(line, col, "unclosed '('")),
                }
                let exp = self.exponent()?;
                Ok(Factor::Grouped { word: inner, exp })
            }
            Some(Tok::LBracket) => {
                let left = self.word(&[Tok::Comma])?;
                match self.bump().map(|s| s.tok.clone()) {
                    Some(Tok::Comma) => {}
                    _ => return Err(ParseError::at(line, col, "expected ',' inside '[...]'")),
                }
                let right = self.word(&[Tok::RBracket])?;
                match self.bump().map(|s| s.tok.clone()) {
                    Some(Tok::RBracket) => {}
                    _ => return Err(ParseError::at(line, col, "unclosed '['")),
                }
                if matches!(self.peek(), Some(Tok::Caret)) {
                    let exp = self.exponent()?;
                    return Ok(Factor::Grouped {
                        word: Word(vec![Factor::Comm { left, right }]),
                        exp,
                    });
                }
                Ok(Factor::Comm { left, right })
            }
            Some(other) => Err(ParseError::at(line, col, format!("unexpected token {other:?}"))),
            None => Err(ParseError::at(line, col, "unexpected end of statement")),
        }
    }
}

pub(super) fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    // Statements: per physical line, strip '#' comments, then split on ';'.
    let mut statements: Vec<(usize, usize, String)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let stripped = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut col = 0usize;
        for piece in stripped.split(';') {
            if !piece.trim().is_empty() {
                statements.push((line_no, col, piece.to_string()));
            }
            col += piece.chars().count() + 1;
        }
    }

    let mut generators: Option<Vec<String>> = None;
    let mut relators: Vec<Word> = Vec::new();

    for (line, col0, stmt) in statements {
        let toks = lex_statement(&stmt, line, col0)?;
        let end_col = col0 + stmt.chars().count();
        let (head, rest) = match toks.split_first() {
            Some((h, r)) => (h, r),
            None => continue,
        };
        let keyword = match &head.tok {
            Tok::Name(n) => n.as_str(),
            _ => return Err(ParseError::at(head.line, head.col, "expected 'gens:' or 'rel:'")),
        };
        let rest = match rest.split_first() {
            Some((colon, r)) if colon.tok == Tok::Colon => r,
            _ => {
                return Err(ParseError::at(
                    head.line,
                    head.col,
                    format!("expected ':' after {keyword:?}"),
                ))
            }
        };
        match keyword {
            "gens" => {
                if generators.is_some() {
                    return Err(ParseError::at(head.line, head.col, "duplicate 'gens:' line"));
                }
                let mut names = Vec::new();
                for s in rest {
                    match &s.tok {
                        Tok::Name(n) => {
                            if names.contains(n) {
                                return Err(ParseError::at(
                                    s.line,
                                    s.col,
                                    format!("duplicate generator {n:?}"),
                                ));
                            }
                            names.push(n.clone());
                        }
                        _ => {
                            return Err(ParseError::at(s.line, s.col, "expected a generator name"))
                        }
                    }
                }
                if names.is_empty() {
                    return Err(ParseError::at(head.line, head.col, "no generators declared"));
                }
                generators = Some(names);
            }
            "rel" => {
                let gens = generators.as_ref().ok_or_else(|| {
                    ParseError::at(head.line, head.col, "'rel:' before 'gens:' line")
                })?;
                let mut parser =
                    WordParser { toks: rest, pos: 0, gens, line, end_col };
                let mut terms = vec![parser.word(&[Tok::Eq])?];
                while matches!(parser.peek(), Some(Tok::Eq)) {
                    parser.bump();
                    terms.push(parser.word(&[Tok::Eq])?);
                }
                if parser.peek().is_some() {
                    return Err(parser.err("trailing tokens after relation"));
                }
                relators.extend(split_equality_chain(terms).map_err(|msg| {
                    ParseError::at(head.line, head.col, msg)
                })?);
            }
            other => {
                return Err(ParseError::at(
                    head.line,
                    head.col,
                    format!("unknown statement {other:?} (expected 'gens' or 'rel')"),
                ));
            }
        }
    }

    let generators =
        generators.ok_or_else(|| ParseError::at(1, 1, "missing 'gens:' line"))?;
    Presentation::from_words(generators, relators)
}

/// Splits an equality chain into relator words. A chain containing the
/// identity literal turns each non-identity term into a relator; a chain
/// without it contributes `u_i u_j^-1` for every pair `i < j` (the extra
/// pairs are redundant but speed up coset enumeration).
fn split_equality_chain(terms: Vec<Word>) -> Result<Vec<Word>, String> {
    let has_identity = terms.iter().any(Word::is_identity);
    let mut out = Vec::new();
    if terms.len() == 1 {
        let w = terms.into_iter().next().unwrap();
        if w.is_identity() {
            return Err("relator reduces to the empty word".into());
        }
        out.push(w);
        return Ok(out);
    }
    if has_identity {
        for w in terms {
            if !w.is_identity() {
                out.push(w);
            }
        }
        if out.is_empty() {
            return Err("equality chain relates the identity to itself".into());
        }
    } else {
        for i in 0..terms.len() {
            for j in (i + 1)..terms.len() {
                let mut factors = terms[i].0.clone();
                factors.push(Factor::Grouped { word: terms[j].clone(), exp: -1 });
                out.push(Word(factors));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn klein_presentation_parses() {
        let p =
            Presentation::parse("gens: x y; rel: [x,y] = 1; rel: x^2 = 1; rel: y^2 = 1").unwrap();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relators().len(), 3);
        assert_eq!(p.flat_relators()[0], vec![(0, -1), (1, -1), (0, 1), (1, 1)]);
    }

    #[test]
    fn chained_equalities_split_to_seven_relators() {
        let text = "gens: x y z\nrel: x^4 = y^4 = [y,z] = 1\nrel: x^2 = z^2 = [x,y]\nrel: (x z)^2 = y^2";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.relators().len(), 7);
    }

    #[test]
    fn zero_exponent_is_a_syntax_error() {
        let err = Presentation::parse("gens: x; rel: x^0 = 1").unwrap_err();
        assert!(err.msg.contains("zero exponent"), "{err}");
        assert_eq!(err.line, 1);
    }

    #[test]
    fn undeclared_generator_reports_position() {
        let err = Presentation::parse("gens: x\nrel: x w = 1").unwrap_err();
        assert!(err.msg.contains("undeclared generator"), "{err}");
        assert_eq!(err.line, 2);
        assert!(err.col > 0);
    }

    #[test]
    fn comments_and_whitespace_are_ignored() {
        let text = "# header\n  gens:   x   y # trailing\n rel: x^2=1 ; rel: y^2 = 1 # two rels\nrel: [x , y] = 1";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relators().len(), 3);
    }

    #[test]
    fn display_reparses_to_the_same_presentation() {
        let text = "gens: x y z; rel: (x z)^2 = y^2; rel: [x^2, y z]; rel: x^-3 = 1";
        let p = Presentation::parse(text).unwrap();
        let printed = p.to_string();
        let q = Presentation::parse(&printed).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn bad_statements_are_rejected() {
        assert!(Presentation::parse("rel: x = 1").is_err());
        assert!(Presentation::parse("gens: x; foo: x").is_err());
        assert!(Presentation::parse("gens: x; rel: x 2").is_err());
        assert!(Presentation::parse("gens: x x").is_err());
        assert!(Presentation::parse("gens: x; rel: 1 = 1").is_err());
        assert!(Presentation::parse("gens: x; rel: (x").is_err());
        assert!(Presentation::parse("gens: x; rel: [x x]").is_err());
        assert!(Presentation::parse("gens: x; rel: 1^2").is_err());
    }
}
