//! Text syntax for spaces, points, numbers and polynomials.
//!
//! ```text
//! space   := family [ '(' args ')' ] | 'product' '[' space (',' space)* ']'
//! family  := euclidean | discrete | indiscrete | continuous_line | wedge | axes_sub
//!          | lines_sub | half_line | orbit_quotient | irrational_torus | fine_vector
//!          | generated | wire | lasagna
//! set     := 'finite' '(' int ')' | 'real' '(' int ')'
//! point   := 'origin' | '(' expr (',' expr)* ')' | expr
//! expr    := ['+' | '-'] term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | atom ['^' int]
//! atom    := int | variable | 'sqrt' '(' int ')' | '(' expr ')'
//! ```
//!
//! `wire(n)` and `lasagna(n)` abbreviate `generated(n, 1)` and `generated(n, 2)`.
//! Every error carries the line, column and byte offset of the offending token.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::poly::default_var_names;
use crate::algebra::{Poly, QuadNumber};
use crate::bundle::BundlePlotCandidate;
use crate::error::{Error, Result};
use crate::space::{Family, PointSet, PolyPlot, Space};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: expected {}, found {}",
            self.line,
            self.column,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

const FAMILIES: &[&str] = &[
    "euclidean",
    "discrete",
    "indiscrete",
    "continuous_line",
    "wedge",
    "axes_sub",
    "lines_sub",
    "half_line",
    "orbit_quotient",
    "irrational_torus",
    "fine_vector",
    "generated",
    "wire",
    "lasagna",
    "product",
];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Punct(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Punct(c) => write!(f, "'{c}'"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    discriminant: Option<(u64, usize)>,
}

fn location(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn error_at(text: &str, offset: usize, expected: &[&str], found: String) -> Error {
    let (line, column) = location(text, offset);
    Error::Parse(ParseError {
        line,
        column,
        offset,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found,
    })
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("ascii digits");
            toks.push((Tok::Int(n), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            toks.push((Tok::Ident(text[start..i].to_string()), start));
        } else if "()[],+-*/^".contains(c) {
            toks.push((Tok::Punct(c), i));
            i += 1;
        } else {
            let ch = text[i..].chars().next().expect("in bounds");
            return Err(error_at(
                text,
                i,
                &["identifier", "number", "punctuation"],
                format!("'{ch}'"),
            ));
        }
    }
    toks.push((Tok::End, text.len()));
    Ok(toks)
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(error_at(text, 0, &["an expression"], "empty input".into()));
        }
        Ok(Self {
            text,
            toks: lex(text)?,
            pos: 0,
            discriminant: None,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        Err(error_at(self.text, self.offset(), expected, self.peek().to_string()))
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&[&format!("'{c}'")])
        }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.fail(&["end of input"])
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.fail(&["integer"]),
        }
    }

    fn count(&mut self) -> Result<usize> {
        let at = self.offset();
        let n = self.int()?;
        n.to_usize()
            .filter(|&k| k <= 1_000)
            .ok_or_else(|| error_at(self.text, at, &["integer at most 1000"], format!("'{n}'")))
    }

    fn ident(&mut self, expected: &[&str]) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail(expected),
        }
    }

    fn args_open(&mut self) -> Result<()> {
        self.expect('(')
    }

    fn optional_empty_args(&mut self) -> Result<()> {
        if self.eat('(') {
            self.expect(')')?;
        }
        Ok(())
    }

    fn space(&mut self) -> Result<Space> {
        let at = self.offset();
        let name = self.ident(&["family name"])?;
        let family = match name.as_str() {
            "product" => {
                self.expect('[')?;
                let mut factors = vec![self.space()?];
                while self.eat(',') {
                    factors.push(self.space()?);
                }
                self.expect(']')?;
                Family::Product(factors)
            }
            "half_line" => {
                self.optional_empty_args()?;
                Family::HalfLineSub
            }
            "continuous_line" => {
                self.optional_empty_args()?;
                Family::ContinuousLine
            }
            "discrete" | "indiscrete" => {
                self.args_open()?;
                let set = self.point_set()?;
                self.expect(')')?;
                if name == "discrete" {
                    Family::Discrete(set)
                } else {
                    Family::Indiscrete(set)
                }
            }
            "lines_sub" => {
                self.args_open()?;
                let mut dirs = vec![self.direction()?];
                while self.eat(',') {
                    dirs.push(self.direction()?);
                }
                self.expect(')')?;
                Family::LinesThroughOriginSub(dirs)
            }
            "irrational_torus" => {
                self.args_open()?;
                let theta = self.number()?;
                self.expect(')')?;
                Family::IrrationalTorus(theta)
            }
            "generated" => {
                self.args_open()?;
                let n = self.count()?;
                self.expect(',')?;
                let k = self.count()?;
                self.expect(')')?;
                Family::Generated { n, k }
            }
            "euclidean" | "wedge" | "axes_sub" | "orbit_quotient" | "fine_vector" | "wire"
            | "lasagna" => {
                self.args_open()?;
                let n = self.count()?;
                self.expect(')')?;
                match name.as_str() {
                    "euclidean" => Family::Euclidean(n),
                    "wedge" => Family::WedgeOfLines(n),
                    "axes_sub" => Family::AxesSub(n),
                    "orbit_quotient" => Family::OrbitQuotient(n),
                    "fine_vector" => Family::FineVector(n),
                    "wire" => Family::Generated { n, k: 1 },
                    _ => Family::Generated { n, k: 2 },
                }
            }
            _ => {
                return Err(error_at(self.text, at, FAMILIES, format!("'{name}'")));
            }
        };
        Space::new(family)
    }

    fn point_set(&mut self) -> Result<PointSet> {
        let name = self.ident(&["'finite'", "'real'"])?;
        self.args_open()?;
        let n = self.count()?;
        self.expect(')')?;
        match name.as_str() {
            "finite" => Ok(PointSet::Finite(n as u32)),
            "real" => Ok(PointSet::Real(n)),
            _ => {
                self.pos -= 4;
                self.fail(&["'finite'", "'real'"])
            }
        }
    }

    fn direction(&mut self) -> Result<[QuadNumber; 2]> {
        self.expect('(')?;
        let a = self.number()?;
        self.expect(',')?;
        let b = self.number()?;
        self.expect(')')?;
        Ok([a, b])
    }

    fn number(&mut self) -> Result<QuadNumber> {
        Ok(self.expr(&[])?.constant_term())
    }

    fn expr(&mut self, vars: &[&str]) -> Result<Poly> {
        let n = vars.len();
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term(vars)?;
        if negate {
            acc = -&acc;
        }
        loop {
            if self.eat('+') {
                acc = acc.checked_add(&self.term(vars)?)?;
            } else if self.eat('-') {
                acc = acc.checked_add(&-&self.term(vars)?)?;
            } else {
                break;
            }
        }
        debug_assert_eq!(acc.nvars(), n);
        Ok(acc)
    }

    fn term(&mut self, vars: &[&str]) -> Result<Poly> {
        let mut acc = self.unary(vars)?;
        loop {
            if self.eat('*') {
                acc = acc.checked_mul(&self.unary(vars)?)?;
            } else if *self.peek() == Tok::Punct('/') {
                let at = self.offset();
                self.pos += 1;
                let d = self.unary(vars)?;
                if !d.is_constant() {
                    return Err(error_at(self.text, at, &["a constant divisor"], "a polynomial".into()));
                }
                acc = acc.scale(&d.constant_term().inv()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn unary(&mut self, vars: &[&str]) -> Result<Poly> {
        if self.eat('-') {
            return Ok(-&self.unary(vars)?);
        }
        let base = self.atom(vars)?;
        if self.eat('^') {
            let k = self.count()?;
            return Ok(base.pow(k as u32));
        }
        Ok(base)
    }

    fn atom(&mut self, vars: &[&str]) -> Result<Poly> {
        let n = vars.len();
        let at = self.offset();
        match self.bump() {
            Tok::Int(k) => Ok(Poly::constant(
                n,
                QuadNumber::rational(num_rational::BigRational::from_integer(k)),
            )),
            Tok::Punct('(') => {
                let e = self.expr(vars)?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(s) if s == "sqrt" => {
                self.expect('(')?;
                let arg_at = self.offset();
                let d = self.int()?;
                let d = d.to_u64().filter(|&d| d <= 1_000_000).ok_or_else(|| {
                    error_at(self.text, arg_at, &["integer at most 1000000"], format!("'{d}'"))
                })?;
                self.expect(')')?;
                let r = QuadNumber::sqrt(d);
                let disc = r.discriminant();
                if disc != 0 {
                    match self.discriminant {
                        Some((other, _)) if other != disc => {
                            return Err(Error::MixedDiscriminants(other, disc));
                        }
                        _ => self.discriminant = Some((disc, at)),
                    }
                }
                Ok(Poly::constant(n, r))
            }
            Tok::Ident(s) => match vars.iter().position(|v| *v == s) {
                Some(i) => Ok(Poly::var(n, i)),
                None => {
                    let mut expected = vec!["number", "'sqrt'", "'('"];
                    expected.extend(vars.iter().copied());
                    Err(error_at(self.text, at, &expected, format!("'{s}'")))
                }
            },
            other => {
                self.pos = self.pos.saturating_sub(usize::from(other != Tok::End));
                let mut expected = vec!["number", "'sqrt'", "'('"];
                expected.extend(vars.iter().copied());
                Err(error_at(self.text, at, &expected, other.to_string()))
            }
        }
    }

    fn point(&mut self) -> Result<Vec<QuadNumber>> {
        if self.eat('(') {
            let mut coords = vec![self.number()?];
            while self.eat(',') {
                coords.push(self.number()?);
            }
            self.expect(')')?;
            Ok(coords)
        } else {
            Ok(vec![self.number()?])
        }
    }
}

pub fn parse_space(text: &str) -> Result<Space> {
    let mut p = Parser::new(text)?;
    let s = p.space()?;
    p.finish()?;
    Ok(s)
}

/// Renders a space in the syntax accepted by [`parse_space`].
pub fn render_space(space: &Space) -> String {
    space.to_string()
}

pub fn parse_number(text: &str) -> Result<QuadNumber> {
    let mut p = Parser::new(text)?;
    let x = p.number()?;
    p.finish()?;
    Ok(x)
}

/// A comma-separated list of numbers.
pub fn parse_numbers(text: &str) -> Result<Vec<QuadNumber>> {
    let mut p = Parser::new(text)?;
    let mut out = vec![p.number()?];
    while p.eat(',') {
        out.push(p.number()?);
    }
    p.finish()?;
    Ok(out)
}

/// A point in ambient coordinates; `origin` is accepted when `space` is given.
pub fn parse_point(text: &str, space: Option<&Space>) -> Result<Vec<QuadNumber>> {
    let mut p = Parser::new(text)?;
    if let (Tok::Ident(s), Some(space)) = (p.peek().clone(), space) {
        if s == "origin" {
            p.pos += 1;
            p.finish()?;
            return Ok(space.origin());
        }
    }
    let x = p.point()?;
    p.finish()?;
    Ok(x)
}

/// A polynomial in the named variables.
pub fn parse_poly(text: &str, vars: &[&str]) -> Result<Poly> {
    let mut p = Parser::new(text)?;
    let e = p.expr(vars)?;
    p.finish()?;
    Ok(e)
}

/// A parenthesized, comma-separated tuple of polynomials, or a single polynomial.
pub fn parse_poly_tuple(text: &str, vars: &[&str]) -> Result<Vec<Poly>> {
    let mut p = Parser::new(text)?;
    let save = p.pos;
    if p.eat('(') {
        let mut out = vec![p.expr(vars)?];
        if p.eat(',') {
            out.push(p.expr(vars)?);
            while p.eat(',') {
                out.push(p.expr(vars)?);
            }
            p.expect(')')?;
            p.finish()?;
            return Ok(out);
        }
        p.pos = save;
    }
    let e = p.expr(vars)?;
    p.finish()?;
    Ok(vec![e])
}

/// A tangent-bundle candidate written `BASE ; FIBRE`, both tuples of polynomials in
/// the default variable names for `src_dim` source coordinates (`t`, or `x, y`, ...).
pub fn parse_candidate(text: &str, src_dim: usize) -> Result<BundlePlotCandidate> {
    let Some(split) = text.find(';') else {
        return Err(error_at(text, text.len(), &["';'"], "end of input".into()));
    };
    let names = default_var_names(src_dim);
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();
    let base = parse_poly_tuple(&text[..split], &vars)?;
    let fibre = parse_poly_tuple(&text[split + 1..], &vars).map_err(|e| match e {
        Error::Parse(mut pe) => {
            pe.offset += split + 1;
            let (line, column) = location(text, pe.offset);
            pe.line = line;
            pe.column = column;
            Error::Parse(pe)
        }
        other => other,
    })?;
    Ok(BundlePlotCandidate::new(PolyPlot::new(src_dim, base)?, fibre))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_err(text: &str) -> ParseError {
        match parse_space(text) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected a parse error for {text:?}, got {other:?}"),
        }
    }

    #[test]
    fn families() {
        assert_eq!(parse_space("wedge(2)").unwrap(), Space::wedge(2).unwrap());
        assert_eq!(
            parse_space("irrational_torus(sqrt(2))").unwrap(),
            Space::irrational_torus(QuadNumber::sqrt(2)).unwrap()
        );
        assert_eq!(
            parse_space("product[half_line, euclidean(1)]").unwrap(),
            Space::product(vec![Space::half_line(), Space::euclidean(1).unwrap()]).unwrap()
        );
        assert_eq!(parse_space("wire(3)").unwrap(), Space::generated(3, 1).unwrap());
        assert_eq!(parse_space("lasagna(2)").unwrap(), Space::generated(2, 2).unwrap());
        assert_eq!(
            parse_space(" discrete( finite(3) ) ").unwrap(),
            Space::new(Family::Discrete(PointSet::Finite(3))).unwrap()
        );
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse_err("wedge(2");
        assert_eq!((e.line, e.column, e.offset), (1, 8, 7));
        assert_eq!(e.expected, vec!["')'"]);
        assert_eq!(e.found, "end of input");
        let e = parse_err("product[wedge(2),\n  cone(3)]");
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.expected.contains(&"euclidean".to_string()));
        let e = parse_err("euclidean(x)");
        assert_eq!(e.column, 11);
        assert!(matches!(parse_space(""), Err(Error::Parse(_))));
        assert!(matches!(parse_space("wedge(1)"), Err(Error::InvalidParameter(_))));
        assert!(matches!(parse_space("euclidean(2) x"), Err(Error::Parse(_))));
        assert_eq!(
            parse_space("product[irrational_torus(sqrt(2)), irrational_torus(sqrt(3))]"),
            Err(Error::MixedDiscriminants(2, 3))
        );
    }

    #[test]
    fn numbers_points_and_polynomials() {
        let x = parse_number("1/2 + 3/4*sqrt(8)").unwrap();
        assert_eq!(x.to_string(), "1/2+3/2*sqrt(2)");
        assert_eq!(parse_number(&x.to_string()).unwrap(), x);
        let w = Space::wedge(2).unwrap();
        assert_eq!(parse_point("origin", Some(&w)).unwrap(), w.origin());
        assert_eq!(
            parse_point("(0, -2)", None).unwrap(),
            vec![QuadNumber::zero(), QuadNumber::from_int(-2)]
        );
        let p = parse_poly("2*x^2 - x*y/3 + (1+sqrt(2))*y", &["x", "y"]).unwrap();
        assert_eq!(parse_poly(&p.to_string(), &["x", "y"]).unwrap(), p);
        assert_eq!(
            parse_poly_tuple("(t, t^2)", &["t"]).unwrap(),
            vec![Poly::var(1, 0), Poly::var(1, 0).pow(2)]
        );
        assert_eq!(parse_poly_tuple("(t+1)*t", &["t"]).unwrap().len(), 1);
        assert!(parse_poly("z", &["t"]).is_err());
    }

    #[test]
    fn candidates() {
        let c = parse_candidate("(0, 0); (t, 0)", 1).unwrap();
        assert_eq!(c.src_dim, 1);
        assert!(c.base.is_constant());
        assert_eq!(c.fibre, vec![Poly::var(1, 0), Poly::zero(1)]);
        let c = parse_candidate("(x, 0) ; (y, x*y)", 2).unwrap();
        assert_eq!(c.fibre[1], Poly::var(2, 0).checked_mul(&Poly::var(2, 1)).unwrap());
        match parse_candidate("(t, 0); (t, s)", 1) {
            Err(Error::Parse(e)) => assert_eq!(e.offset, 12),
            other => panic!("{other:?}"),
        }
        assert!(parse_candidate("(t, 0)", 1).is_err());
    }

    #[test]
    fn rendering_round_trips() {
        for text in [
            "euclidean(3)",
            "product[wedge(2), half_line, irrational_torus(1+sqrt(2))]",
            "lines_sub((1, 0), (0, 1), (1, 1))",
            "generated(2, 1)",
            "indiscrete(real(2))",
            "continuous_line",
        ] {
            let s = parse_space(text).unwrap();
            assert_eq!(parse_space(&render_space(&s)).unwrap(), s);
        }
    }
}
