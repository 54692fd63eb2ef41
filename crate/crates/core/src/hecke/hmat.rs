//! The HMAT v1 text format for Hecke matrices.
//!
//! ```text
//! HMAT v1
//! level <N>
//! weight <k>
//! dim <d>
//! bound <B>
//! provenance <free text>        (optional)
//! meta <key> <value>            (optional, repeatable)
//! T 1
//! <d lines of d integers>
//! T 2
//! ...
//! T <B>
//! <d lines of d integers>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored everywhere. Labels
//! must run 1..B in order; anything after the last matrix is an error.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;

use super::space::HeckeSpace;
use crate::error::{Error, Result};
use crate::linalg::Mat;

pub const MAGIC: &str = "HMAT v1";

struct Lines<'a> {
    path: &'a str,
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(path: &'a str, text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Lines { path, inner: it.peekable(), last: 0 }
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::parse(self.path, line, msg)
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(self.err(self.last + 1, format!("unexpected end of file, expected {what}"))),
        }
    }

    fn peek_keyword(&mut self) -> Option<&'a str> {
        self.inner.peek().and_then(|(_, l)| l.split_whitespace().next())
    }

    /// A `key value` line with a single numeric value.
    fn header<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (n, l) = self.next(key)?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(key) {
            return Err(self.err(n, format!("expected `{key} <value>`")));
        }
        let v = parts.next().ok_or_else(|| self.err(n, format!("missing value for {key}")))?;
        if parts.next().is_some() {
            return Err(self.err(n, "trailing data"));
        }
        v.parse().map_err(|_| self.err(n, format!("invalid value `{v}` for {key}")))
    }
}

pub fn parse(text: &str, path: &str) -> Result<HeckeSpace> {
    let mut lines = Lines::new(path, text);
    let (n, first) = lines.next("header")?;
    if first != MAGIC {
        return Err(lines.err(n, format!("expected `{MAGIC}`")));
    }
    let level: u64 = lines.header("level")?;
    let weight: u32 = lines.header("weight")?;
    let dim: usize = lines.header("dim")?;
    let bound: u64 = lines.header("bound")?;
    if dim == 0 || bound == 0 {
        return Err(lines.err(lines.last, "dim and bound must be positive"));
    }
    let mut provenance = None;
    let mut meta = BTreeMap::new();
    while let Some(kw) = lines.peek_keyword() {
        match kw {
            "provenance" => {
                let (n, l) = lines.next("provenance")?;
                if provenance.is_some() {
                    return Err(lines.err(n, "duplicate provenance"));
                }
                provenance = Some(l["provenance".len()..].trim().to_string());
            }
            "meta" => {
                let (n, l) = lines.next("meta")?;
                let mut parts = l.splitn(3, char::is_whitespace);
                parts.next();
                let key = parts.next().filter(|k| !k.is_empty()).ok_or_else(|| lines.err(n, "meta needs a key"))?;
                let value = parts.next().map(str::trim).unwrap_or("");
                if meta.insert(key.to_string(), value.to_string()).is_some() {
                    return Err(lines.err(n, format!("duplicate meta key `{key}`")));
                }
            }
            _ => break,
        }
    }
    let mut matrices = Vec::with_capacity(bound as usize);
    for label in 1..=bound {
        let (n, l) = lines.next(&format!("`T {label}`"))?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some("T") || parts.next() != Some(label.to_string().as_str()) || parts.next().is_some() {
            return Err(lines.err(n, format!("expected `T {label}`")));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for _ in 0..dim {
            let (n, row) = lines.next(&format!("a row of T {label}"))?;
            let entries: Vec<&str> = row.split_whitespace().collect();
            if entries.len() != dim {
                return Err(lines.err(n, format!("expected {dim} entries, found {}", entries.len())));
            }
            for e in entries {
                data.push(e.parse::<BigInt>().map_err(|_| lines.err(n, format!("invalid integer `{e}`")))?);
            }
        }
        matrices.push(Mat::from_vec(dim, dim, data));
    }
    if let Some((n, _)) = lines.inner.next() {
        return Err(lines.err(n, "trailing data after the last matrix"));
    }
    HeckeSpace::new(level, weight, dim, matrices, provenance, meta)
}

/// Canonical serialisation (no comments, meta keys sorted).
pub fn write(space: &HeckeSpace) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{MAGIC}");
    let _ = writeln!(s, "level {}", space.level);
    let _ = writeln!(s, "weight {}", space.weight);
    let _ = writeln!(s, "dim {}", space.dim());
    let _ = writeln!(s, "bound {}", space.bound());
    if let Some(p) = &space.provenance {
        let _ = writeln!(s, "provenance {}", p);
    }
    for (k, v) in &space.meta {
        let _ = writeln!(s, "meta {k} {v}");
    }
    for (i, m) in space.matrices().iter().enumerate() {
        let _ = writeln!(s, "T {}", i + 1);
        for r in 0..m.rows() {
            let row: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "HMAT v1\n# two blocks\nlevel 23\nweight 2\ndim 2\nbound 3\nprovenance hand made\nmeta newdim 2\n\nT 1\n1 0\n0 1\nT 2\n0 1\n1 -1\nT 3\n0 -1\n-1 1\n";

    #[test]
    fn parse_and_write_round_trip() {
        let s = parse(SAMPLE, "sample").unwrap();
        assert_eq!(s.level, 23);
        assert_eq!(s.bound(), 3);
        assert_eq!(s.meta.get("newdim").map(String::as_str), Some("2"));
        let text = write(&s);
        assert_eq!(parse(&text, "again").unwrap(), s);
        assert_eq!(write(&parse(&text, "again").unwrap()), text);
    }

    #[test]
    fn errors_name_the_line() {
        let bad = SAMPLE.replace("weight 2", "weight two");
        match parse(&bad, "bad") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        let trailing = format!("{SAMPLE}T 4\n");
        assert!(matches!(parse(&trailing, "t"), Err(Error::Parse { line: 19, .. })));
        let short_row = SAMPLE.replace("1 -1\n", "1\n");
        assert!(matches!(parse(&short_row, "s"), Err(Error::Parse { line: 15, .. })));
        let extra = SAMPLE.replace("dim 2", "dim 2 3");
        assert!(matches!(parse(&extra, "x"), Err(Error::Parse { line: 5, .. })));
    }

    #[test]
    fn non_commuting_input_is_rejected() {
        let bad = SAMPLE.replace("T 3\n0 -1\n-1 1", "T 3\n1 1\n0 1");
        assert!(matches!(parse(&bad, "nc"), Err(Error::NonCommuting(2, 3))));
    }
}
