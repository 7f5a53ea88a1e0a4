//! Knot-construction expressions.
//!
//! ```text
//! expr    := sum ;
//! sum     := plumb { "#" plumb } ;
//! plumb   := atom { "*" atom } ;
//! atom    := "unknot" | "torus" "(" int "," int ")" | "cable" "(" int "," int "," expr ")"
//!          | "mirror" "(" expr ")" | "reverse" "(" expr ")" | name | "(" expr ")" ;
//! name    := "LM" | "R1" | "R2" | "R3" ;
//! int     := ["-"] digit { digit } ;
//! ```
//!
//! `#` is connected sum and `*` is the direct Murasugi sum (plumbing); `#`
//! binds looser. Sums are flattened as they are built, so a [`KnotExpr::ConnSum`]
//! never has a `ConnSum` child and likewise for [`KnotExpr::Plumb`].

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum KnotExpr {
    Unknot,
    /// Torus knot of type `(m, n)`; negative `n` is the mirror image.
    Torus(i64, i64),
    /// `(m, n)`-cable: `m` times the companion's class, linking number `n`.
    Cable(i64, i64, Box<KnotExpr>),
    Mirror(Box<KnotExpr>),
    Reverse(Box<KnotExpr>),
    ConnSum(Vec<KnotExpr>),
    Plumb(Vec<KnotExpr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    Syntax,
    NotCoprime,
    BadMultiplicity,
    UnknownName,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind:?} at offset {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

/// Checks the cable/torus parameter constraints: `m >= 1` and
/// `gcd(m, |n|) = 1` (which forces `n != 0` unless `m = 1`).
pub fn check_parameters(m: i64, n: i64) -> Result<(), ParseErrorKind> {
    if m < 1 {
        return Err(ParseErrorKind::BadMultiplicity);
    }
    if m.gcd(&n.abs()) != 1 {
        return Err(ParseErrorKind::NotCoprime);
    }
    Ok(())
}

impl KnotExpr {
    pub fn torus(m: i64, n: i64) -> Self {
        KnotExpr::Torus(m, n)
    }

    pub fn cable(m: i64, n: i64, companion: KnotExpr) -> Self {
        KnotExpr::Cable(m, n, Box::new(companion))
    }

    pub fn mirror(e: KnotExpr) -> Self {
        KnotExpr::Mirror(Box::new(e))
    }

    pub fn reverse(e: KnotExpr) -> Self {
        KnotExpr::Reverse(Box::new(e))
    }

    /// Connected sum with nested sums spliced in. A single summand is
    /// returned unchanged.
    pub fn conn_sum(parts: Vec<KnotExpr>) -> Self {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                KnotExpr::ConnSum(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            KnotExpr::ConnSum(flat)
        }
    }

    pub fn plumb(parts: Vec<KnotExpr>) -> Self {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                KnotExpr::Plumb(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            KnotExpr::Plumb(flat)
        }
    }

    /// Checks every structural invariant: parameter constraints on each
    /// torus/cable node, sums of length at least two and flattened sums.
    pub fn validate(&self) -> Result<(), ParseErrorKind> {
        match self {
            KnotExpr::Unknot => Ok(()),
            KnotExpr::Torus(m, n) => check_parameters(*m, *n),
            KnotExpr::Cable(m, n, c) => {
                check_parameters(*m, *n)?;
                c.validate()
            }
            KnotExpr::Mirror(e) | KnotExpr::Reverse(e) => e.validate(),
            KnotExpr::ConnSum(parts) => {
                if parts.len() < 2 || parts.iter().any(|p| matches!(p, KnotExpr::ConnSum(_))) {
                    return Err(ParseErrorKind::Syntax);
                }
                parts.iter().try_for_each(|p| p.validate())
            }
            KnotExpr::Plumb(parts) => {
                if parts.len() < 2 || parts.iter().any(|p| matches!(p, KnotExpr::Plumb(_))) {
                    return Err(ParseErrorKind::Syntax);
                }
                parts.iter().try_for_each(|p| p.validate())
            }
        }
    }

    /// Number of nodes, counting sums once plus their children.
    pub fn node_count(&self) -> usize {
        1 + match self {
            KnotExpr::Unknot | KnotExpr::Torus(..) => 0,
            KnotExpr::Cable(_, _, c) | KnotExpr::Mirror(c) | KnotExpr::Reverse(c) => c.node_count(),
            KnotExpr::ConnSum(ps) | KnotExpr::Plumb(ps) => ps.iter().map(|p| p.node_count()).sum(),
        }
    }

    /// Every subexpression including `self`, pre-order.
    pub fn subexpressions(&self) -> Vec<&KnotExpr> {
        let mut out = vec![self];
        match self {
            KnotExpr::Unknot | KnotExpr::Torus(..) => {}
            KnotExpr::Cable(_, _, c) | KnotExpr::Mirror(c) | KnotExpr::Reverse(c) => out.extend(c.subexpressions()),
            KnotExpr::ConnSum(ps) | KnotExpr::Plumb(ps) => {
                for p in ps {
                    out.extend(p.subexpressions());
                }
            }
        }
        out
    }
}

/// Expansion of the named constants.
pub fn named(name: &str) -> Option<KnotExpr> {
    use KnotExpr as K;
    let t = K::torus;
    Some(match name {
        "LM" => K::ConnSum(vec![
            K::cable(2, 13, t(2, 3)),
            t(2, 15),
            K::cable(2, -15, t(2, -3)),
            t(2, -13),
        ]),
        "R1" => K::ConnSum(vec![K::cable(2, 1, t(2, 3)), K::cable(2, -1, t(2, -3))]),
        "R2" => K::ConnSum(vec![t(2, 13), t(2, -13)]),
        "R3" => K::ConnSum(vec![t(2, 15), t(2, -15)]),
        _ => return None,
    })
}

/// Rewrites to a canonical representative: flattens sums, drops trivial
/// cables and torus knots, cancels double mirrors and reversals.
/// Idempotent.
pub fn normalize(e: &KnotExpr) -> KnotExpr {
    match e {
        KnotExpr::Unknot => KnotExpr::Unknot,
        KnotExpr::Torus(m, n) => {
            if *m == 1 || n.abs() == 1 {
                KnotExpr::Unknot
            } else {
                KnotExpr::Torus(*m, *n)
            }
        }
        KnotExpr::Cable(m, n, c) => {
            let c = normalize(c);
            if *m == 1 {
                c
            } else {
                KnotExpr::Cable(*m, *n, Box::new(c))
            }
        }
        KnotExpr::Mirror(inner) => match normalize(inner) {
            KnotExpr::Mirror(x) => *x,
            x => KnotExpr::Mirror(Box::new(x)),
        },
        KnotExpr::Reverse(inner) => match normalize(inner) {
            KnotExpr::Reverse(x) => *x,
            x => KnotExpr::Reverse(Box::new(x)),
        },
        KnotExpr::ConnSum(ps) => KnotExpr::conn_sum(ps.iter().map(normalize).collect()),
        KnotExpr::Plumb(ps) => KnotExpr::plumb(ps.iter().map(normalize).collect()),
    }
}

/// Renders an expression in the DSL; `parse(&format(e)) == e` for every
/// valid, normalized `e`.
pub fn format(e: &KnotExpr) -> String {
    fn sum_level(e: &KnotExpr, out: &mut String) {
        match e {
            KnotExpr::ConnSum(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" # ");
                    }
                    plumb_level(p, out);
                }
            }
            other => plumb_level(other, out),
        }
    }
    fn plumb_level(e: &KnotExpr, out: &mut String) {
        match e {
            KnotExpr::Plumb(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" * ");
                    }
                    atom_level(p, out);
                }
            }
            other => atom_level(other, out),
        }
    }
    fn atom_level(e: &KnotExpr, out: &mut String) {
        match e {
            KnotExpr::Unknot => out.push_str("unknot"),
            KnotExpr::Torus(m, n) => out.push_str(&format!("torus({m},{n})")),
            KnotExpr::Cable(m, n, c) => {
                out.push_str(&format!("cable({m},{n},"));
                sum_level(c, out);
                out.push(')');
            }
            KnotExpr::Mirror(x) => {
                out.push_str("mirror(");
                sum_level(x, out);
                out.push(')');
            }
            KnotExpr::Reverse(x) => {
                out.push_str("reverse(");
                sum_level(x, out);
                out.push(')');
            }
            KnotExpr::ConnSum(_) | KnotExpr::Plumb(_) => {
                out.push('(');
                sum_level(e, out);
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    sum_level(e, &mut out);
    out
}

impl fmt::Display for KnotExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format(self))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Hash,
    Star,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, position: usize, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        ParseError {
            position: position.min(self.src.len()),
            kind,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        let single = match c {
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            b'#' => Some(Tok::Hash),
            b'*' => Some(Tok::Star),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((start, t));
        }
        if c == b'-' || c.is_ascii_digit() {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return text
                .parse::<i64>()
                .map(|v| (start, Tok::Int(v)))
                .map_err(|_| self.err(start, ParseErrorKind::Syntax, format!("bad integer `{text}`")));
        }
        if c.is_ascii_alphanumeric() || c == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return Ok((start, Tok::Ident(text.to_string())));
        }
        Err(self.err(
            start,
            ParseErrorKind::Syntax,
            format!("unexpected character `{}`", c as char),
        ))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<(usize, Tok)>,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<&(usize, Tok), ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next()?);
        }
        Ok(self.peeked.as_ref().unwrap())
    }

    fn bump(&mut self) -> Result<(usize, Tok), ParseError> {
        self.peek()?;
        Ok(self.peeked.take().unwrap())
    }

    fn expect(&mut self, want: Tok) -> Result<usize, ParseError> {
        let (pos, tok) = self.bump()?;
        if tok == want {
            Ok(pos)
        } else {
            Err(self
                .lexer
                .err(pos, ParseErrorKind::Syntax, format!("expected {want:?}, found {tok:?}")))
        }
    }

    fn int(&mut self) -> Result<(usize, i64), ParseError> {
        match self.bump()? {
            (pos, Tok::Int(v)) => Ok((pos, v)),
            (pos, tok) => Err(self
                .lexer
                .err(pos, ParseErrorKind::Syntax, format!("expected integer, found {tok:?}"))),
        }
    }

    fn sum(&mut self) -> Result<KnotExpr, ParseError> {
        let mut parts = vec![self.plumb()?];
        while self.peek()?.1 == Tok::Hash {
            self.bump()?;
            parts.push(self.plumb()?);
        }
        Ok(KnotExpr::conn_sum(parts))
    }

    fn plumb(&mut self) -> Result<KnotExpr, ParseError> {
        let mut parts = vec![self.atom()?];
        while self.peek()?.1 == Tok::Star {
            self.bump()?;
            parts.push(self.atom()?);
        }
        Ok(KnotExpr::plumb(parts))
    }

    fn params(&mut self, pos: usize) -> Result<(i64, i64), ParseError> {
        let (_, m) = self.int()?;
        self.expect(Tok::Comma)?;
        let (_, n) = self.int()?;
        check_parameters(m, n).map_err(|kind| self.lexer.err(pos, kind, format!("invalid parameters ({m},{n})")))?;
        Ok((m, n))
    }

    fn atom(&mut self) -> Result<KnotExpr, ParseError> {
        let (pos, tok) = self.bump()?;
        match tok {
            Tok::LParen => {
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "unknot" => Ok(KnotExpr::Unknot),
                "torus" => {
                    self.expect(Tok::LParen)?;
                    let (m, n) = self.params(pos)?;
                    self.expect(Tok::RParen)?;
                    Ok(KnotExpr::Torus(m, n))
                }
                "cable" => {
                    self.expect(Tok::LParen)?;
                    let (m, n) = self.params(pos)?;
                    self.expect(Tok::Comma)?;
                    let c = self.sum()?;
                    self.expect(Tok::RParen)?;
                    Ok(KnotExpr::cable(m, n, c))
                }
                "mirror" | "reverse" => {
                    self.expect(Tok::LParen)?;
                    let inner = self.sum()?;
                    self.expect(Tok::RParen)?;
                    Ok(if name == "mirror" {
                        KnotExpr::mirror(inner)
                    } else {
                        KnotExpr::reverse(inner)
                    })
                }
                other => named(other).ok_or_else(|| {
                    self.lexer
                        .err(pos, ParseErrorKind::UnknownName, format!("unknown name `{other}`"))
                }),
            },
            other => Err(self
                .lexer
                .err(pos, ParseErrorKind::Syntax, format!("unexpected {other:?}"))),
        }
    }
}

pub fn parse(text: &str) -> Result<KnotExpr, ParseError> {
    let mut p = Parser {
        lexer: Lexer {
            src: text.as_bytes(),
            pos: 0,
        },
        peeked: None,
    };
    if !text.is_ascii() {
        let pos = text.char_indices().find(|(_, c)| !c.is_ascii()).map_or(0, |(i, _)| i);
        return Err(p.lexer.err(pos, ParseErrorKind::Syntax, "input must be ASCII"));
    }
    let e = p.sum()?;
    let (pos, tok) = p.bump()?;
    if tok != Tok::End {
        return Err(p
            .lexer
            .err(pos, ParseErrorKind::Syntax, format!("trailing input {tok:?}")));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use KnotExpr as K;

    #[test]
    fn torus_atom() {
        assert_eq!(parse("torus(2,3)").unwrap(), K::Torus(2, 3));
        assert_eq!(parse("  torus ( 2 , -3 ) ").unwrap(), K::Torus(2, -3));
    }

    #[test]
    fn named_lm_expansion() {
        assert_eq!(
            parse("LM").unwrap(),
            K::ConnSum(vec![
                K::cable(2, 13, K::Torus(2, 3)),
                K::Torus(2, 15),
                K::cable(2, -15, K::Torus(2, -3)),
                K::Torus(2, -13),
            ])
        );
    }

    #[test]
    fn parameter_errors() {
        let e = parse("torus(4,2)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NotCoprime);
        assert_eq!(parse("torus(0,1)").unwrap_err().kind, ParseErrorKind::BadMultiplicity);
        assert_eq!(parse("torus(-2,3)").unwrap_err().kind, ParseErrorKind::BadMultiplicity);
        assert_eq!(parse("torus(2,0)").unwrap_err().kind, ParseErrorKind::NotCoprime);
        assert_eq!(parse("torus(1,0)").unwrap(), K::Torus(1, 0));
        assert_eq!(parse("cable(3,6,unknot)").unwrap_err().kind, ParseErrorKind::NotCoprime);
    }

    #[test]
    fn syntax_and_name_errors_carry_positions() {
        let e = parse("torus(2,3) # foo").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownName);
        assert_eq!(e.position, 13);
        let e = parse("torus(2,3").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!(e.position, 9);
        assert_eq!(parse("").unwrap_err().kind, ParseErrorKind::Syntax);
        assert_eq!(parse("unknot unknot").unwrap_err().kind, ParseErrorKind::Syntax);
        assert_eq!(
            parse("torus(2,99999999999999999999)").unwrap_err().kind,
            ParseErrorKind::Syntax
        );
        assert_eq!(parse("torus(2,3) é").unwrap_err().kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn precedence_and_flattening() {
        let e = parse("unknot # torus(2,3) * torus(2,5) # (torus(2,7) # torus(2,9))").unwrap();
        assert_eq!(
            e,
            K::ConnSum(vec![
                K::Unknot,
                K::Plumb(vec![K::Torus(2, 3), K::Torus(2, 5)]),
                K::Torus(2, 7),
                K::Torus(2, 9),
            ])
        );
        let p = parse("(R1 * R2) * R3").unwrap();
        match p {
            K::Plumb(parts) => assert_eq!(parts.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize(&K::cable(1, 7, K::Torus(2, 3))), K::Torus(2, 3));
        assert_eq!(normalize(&K::Torus(2, 1)), K::Unknot);
        assert_eq!(normalize(&K::Torus(5, -1)), K::Unknot);
        let a = K::Torus(2, 3);
        let b = K::Torus(2, 5);
        let c = K::Torus(3, 4);
        let nested = K::ConnSum(vec![K::ConnSum(vec![a.clone(), b.clone()]), c.clone()]);
        assert_eq!(normalize(&nested), K::ConnSum(vec![a.clone(), b, c]));
        assert_eq!(normalize(&K::mirror(K::mirror(a.clone()))), a);
        assert_eq!(normalize(&K::reverse(K::reverse(a.clone()))), a);
    }

    #[test]
    fn format_examples() {
        assert_eq!(format(&K::Torus(2, 3)), "torus(2,3)");
        assert_eq!(format(&K::mirror(K::Torus(2, 3))), "mirror(torus(2,3))");
        assert_eq!(
            format(&K::ConnSum(vec![K::Torus(2, 13), K::mirror(K::Torus(2, 13))])),
            "torus(2,13) # mirror(torus(2,13))"
        );
        let p = K::Plumb(vec![K::ConnSum(vec![K::Torus(2, 3), K::Unknot]), K::Torus(2, 5)]);
        assert_eq!(format(&p), "(torus(2,3) # unknot) * torus(2,5)");
        assert_eq!(parse(&format(&p)).unwrap(), p);
    }
}
