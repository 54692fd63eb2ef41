//! Line-oriented `key: value` records. The first line is `<KIND> v1`;
//! fields follow in a fixed order, so a record has exactly one serialised
//! form and parsing rejects anything else.
//!
//! Value encodings:
//! - integers in decimal;
//! - integer lists `[a,b,c]` (no spaces, `[]` when empty);
//! - matrices `RxC [row-major entries]`;
//! - l-adic numbers `{ell=5,N=3,e=2,ph=<16 hex>}[c0,c1]`, the power-basis
//!   coordinates of an element of the ring identified by the tag;
//! - valuations `exact <m> e=<e>` or `atleast <m> e=<e>`, m in lambda-units.

use std::fmt::{Display, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;

use crate::arith::local_ring::{LocalRing, RingElement, Valuation, ValuationKind};
use crate::error::{Error, Result};
use crate::linalg::Mat;

pub struct Writer {
    out: String,
}

impl Writer {
    pub fn new(kind: &str) -> Self {
        Writer { out: format!("{kind} v1\n") }
    }

    pub fn field(&mut self, key: &str, value: impl Display) -> &mut Self {
        let _ = writeln!(self.out, "{key}: {value}");
        self
    }

    pub fn finish(&mut self) -> String {
        std::mem::take(&mut self.out)
    }
}

pub struct Reader<'a> {
    path: String,
    lines: Vec<(usize, &'a str, &'a str)>,
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(text: &'a str, kind: &str, path: &str) -> Result<Self> {
        let mut it = text.split_inclusive('\n').enumerate();
        let header = format!("{kind} v1\n");
        match it.next() {
            Some((_, l)) if l == header => {}
            _ => return Err(Error::parse(path, 1, format!("expected `{kind} v1`"))),
        }
        let mut lines = Vec::new();
        for (i, raw) in it {
            let line = raw.strip_suffix('\n').ok_or_else(|| Error::parse(path, i + 1, "missing final newline"))?;
            let (k, v) =
                line.split_once(": ").ok_or_else(|| Error::parse(path, i + 1, "expected `key: value`"))?;
            lines.push((i + 1, k, v));
        }
        Ok(Reader { path: path.to_string(), lines, pos: 0 })
    }

    fn line(&self) -> usize {
        self.lines.get(self.pos).map(|l| l.0).unwrap_or_else(|| self.lines.last().map(|l| l.0 + 1).unwrap_or(2))
    }

    pub fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(&self.path, self.line(), msg)
    }

    /// The value of the next field, which must be `key`.
    pub fn raw(&mut self, key: &str) -> Result<&'a str> {
        match self.lines.get(self.pos) {
            Some(&(_, k, v)) if k == key => {
                self.pos += 1;
                Ok(v)
            }
            Some(&(_, k, _)) => Err(self.err(format!("expected field `{key}`, found `{k}`"))),
            None => Err(self.err(format!("missing field `{key}`"))),
        }
    }

    pub fn get<T: FromStr>(&mut self, key: &str) -> Result<T> {
        self.with(key, |v| if canonical_number(v) { v.parse().ok() } else { None })
    }

    /// The next field if its key starts with `prefix`, with the suffix.
    pub fn prefixed(&mut self, prefix: &str) -> Option<(&'a str, &'a str)> {
        let &(_, k, v) = self.lines.get(self.pos)?;
        let rest = k.strip_prefix(prefix)?;
        self.pos += 1;
        Some((rest, v))
    }

    /// Parse a value with a custom decoder, attributing errors to its line.
    pub fn with<T>(&mut self, key: &str, decode: impl FnOnce(&str) -> Option<T>) -> Result<T> {
        let v = self.raw(key)?;
        let line = self.lines[self.pos - 1].0;
        decode(v).ok_or_else(|| Error::parse(&self.path, line, format!("invalid value for `{key}`")))
    }

    /// Decode the value of the field just consumed by [`Reader::prefixed`].
    pub fn decode_last<T>(&self, what: &str, v: Option<T>) -> Result<T> {
        let line = self.lines[self.pos - 1].0;
        v.ok_or_else(|| Error::parse(&self.path, line, format!("invalid value for `{what}`")))
    }

    pub fn finish(self) -> Result<()> {
        if self.pos < self.lines.len() {
            return Err(self.err(format!("unexpected field `{}`", self.lines[self.pos].1)));
        }
        Ok(())
    }
}

/// Decimal integers only: no sign on zero, no leading zeros or plus signs.
fn canonical_number(v: &str) -> bool {
    if v.starts_with('+') {
        return false;
    }
    let digits = v.strip_prefix('-').unwrap_or(v);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return true; // not a number; the FromStr impl decided
    }
    !(digits.len() > 1 && digits.starts_with('0')) && v != "-0"
}

pub fn list<T: Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

pub fn parse_list<T: FromStr>(s: &str) -> Option<Vec<T>> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|x| canonical_number(x).then(|| x.parse().ok()).flatten()).collect()
}

pub fn matrix(m: &Mat<BigInt>) -> String {
    format!("{}x{} {}", m.rows(), m.cols(), list(m.data()))
}

pub fn parse_matrix(s: &str) -> Option<Mat<BigInt>> {
    let (dims, data) = s.split_once(' ')?;
    let (r, c) = dims.split_once('x')?;
    let (r, c): (usize, usize) = (r.parse().ok()?, c.parse().ok()?);
    if format!("{r}x{c}") != dims {
        return None;
    }
    let data: Vec<BigInt> = parse_list(data)?;
    (data.len() == r * c).then(|| Mat::from_vec(r, c, data))
}

pub fn ring_tag(r: &LocalRing) -> String {
    format!("{{ell={},N={},e={},ph={}}}", r.ell(), r.precision(), r.e(), r.poly_hash())
}

pub fn padic(x: &RingElement) -> String {
    format!("{}{}", ring_tag(x.ring()), list(x.coords()))
}

/// An element of `ring`; the tag must name exactly that ring.
pub fn parse_padic(s: &str, ring: &LocalRing) -> Option<RingElement> {
    let tag = ring_tag(ring);
    let coords: Vec<BigInt> = parse_list(s.strip_prefix(tag.as_str())?)?;
    let x = (coords.len() == ring.degree()).then(|| ring.element(&coords))?;
    (x.coords() == coords.as_slice()).then_some(x)
}

pub fn valuation(v: &Valuation) -> String {
    let kind = if v.is_exact() { "exact" } else { "atleast" };
    format!("{kind} {} e={}", v.lambda, v.e)
}

pub fn parse_valuation(s: &str) -> Option<Valuation> {
    let mut parts = s.split(' ');
    let kind = match parts.next()? {
        "exact" => ValuationKind::Exact,
        "atleast" => ValuationKind::AtLeast,
        _ => return None,
    };
    let lambda: u64 = parts.next()?.parse().ok()?;
    let e: u32 = parts.next()?.strip_prefix("e=")?.parse().ok()?;
    let v = Valuation { kind, lambda, e };
    (parts.next().is_none() && e > 0 && valuation(&v) == s).then_some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_round_trip() {
        let v = Valuation::at_least(6, 2);
        assert_eq!(parse_valuation(&valuation(&v)), Some(v));
        assert_eq!(parse_valuation("exact 03 e=1"), None);
        let m = Mat::from_vec(2, 1, vec![BigInt::from(-3), BigInt::from(0)]);
        assert_eq!(parse_matrix(&matrix(&m)), Some(m));
        assert_eq!(parse_list::<i64>("[]"), Some(vec![]));
        assert_eq!(parse_list::<i64>("[1,01]"), None);
        let r = LocalRing::new(5, 3, &[BigInt::from(-5), BigInt::from(0), BigInt::from(1)], 2).unwrap();
        let x = r.element(&[BigInt::from(7), BigInt::from(1)]);
        let s = padic(&x);
        assert!(s.starts_with("{ell=5,N=3,e=2,ph="));
        assert_eq!(parse_padic(&s, &r), Some(x));
        let other = r.with_precision(2).unwrap();
        assert_eq!(parse_padic(&s, &other), None);
        assert_eq!(parse_padic(&s.replace("[7,1]", "[700,1]"), &r), None);
    }

    #[test]
    fn reader_is_strict() {
        let text = "X v1\na: 1\nb: [1,2]\n";
        let mut r = Reader::new(text, "X", "t").unwrap();
        assert_eq!(r.get::<u64>("a").unwrap(), 1);
        assert_eq!(r.with("b", parse_list::<u64>).unwrap(), vec![1, 2]);
        r.finish().unwrap();
        let mut r = Reader::new("X v1\na: 01\n", "X", "t").unwrap();
        assert!(matches!(r.get::<u64>("a"), Err(Error::Parse { line: 2, .. })));
        assert!(Reader::new("X v1\na: 1", "X", "t").is_err());
        let mut r = Reader::new("X v1\nb: 1\n", "X", "t").unwrap();
        assert!(matches!(r.get::<u64>("a"), Err(Error::Parse { line: 2, .. })));
        let r = Reader::new("X v1\na: 1\n", "X", "t").unwrap();
        assert!(r.finish().is_err());
    }
}
