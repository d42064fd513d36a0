//! The line-oriented text exchange format.
//!
//! ```text
//! ec: [1, 0, 3/2] tail 1
//! zseq: {-2:1, 0:5} left 0 right 1
//!
//! lmatrix window 1 1
//! 0 0 2
//! 0 1 1
//! 1 1 1
//! tail identity
//!
//! covermatrix window 1 2
//! 1 1 2
//! limits 1 1
//! tail block 2
//! 0 1
//! 0 1
//! col0 0 0
//!
//! gop one ec: [] tail 1
//! gop e 1 periodic: [1] repeat [0, 1]
//! gop e * trislot
//! ```
//!
//! `#` starts a comment; blank lines are skipped. See `FORMAT.md` for the
//! full grammar.

use std::collections::BTreeMap;
use std::fmt;

use crate::cover::CoverMatrix;
use crate::ecseq::EcSeq;
use crate::error::{Error, Result};
use crate::opmatrix::gop::{BoundedSeq, ColumnRule, GOperator};
use crate::opmatrix::lmatrix::LMatrix;
use crate::opmatrix::tail::Tail;
use crate::scalar::Scalar;
use crate::zseq::ZSeq;

fn join(vals: &[Scalar], sep: &str) -> String {
    vals.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for EcSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ec: [{}] tail {}", join(self.prefix(), ", "), self.tail())
    }
}

impl fmt::Display for ZSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let core: Vec<String> = self.core().iter().map(|(i, v)| format!("{i}:{v}")).collect();
        write!(
            f,
            "zseq: {{{}}} left {} right {}",
            core.join(", "),
            self.left_tail(),
            self.right_tail()
        )
    }
}

impl fmt::Display for BoundedSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundedSeq::EventuallyConstant { seq } => write!(f, "{seq}"),
            BoundedSeq::EventuallyPeriodic { prefix, period } => {
                write!(f, "periodic: [{}] repeat [{}]", join(prefix, ", "), join(period, ", "))
            }
            BoundedSeq::TriSlot { slot } => write!(f, "trislot {slot}"),
        }
    }
}

fn write_tail(f: &mut fmt::Formatter<'_>, prefix: &str, tail: &Tail) -> fmt::Result {
    match tail {
        Tail::Zero => writeln!(f, "{prefix}zero"),
        Tail::Identity => writeln!(f, "{prefix}identity"),
        Tail::Block { size, block } => {
            writeln!(f, "{prefix}block {size}")?;
            for row in block {
                writeln!(f, "{}", join(row, " "))?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for LMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lmatrix window {} {}", self.rows(), self.cols())?;
        for ((i, j), v) in self.explicit() {
            writeln!(f, "{i} {j} {v}")?;
        }
        write_tail(f, "tail ", self.tail())
    }
}

impl fmt::Display for CoverMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "covermatrix window {} {}", self.rows(), self.cols())?;
        for ((i, j), v) in self.explicit() {
            writeln!(f, "{i} {j} {v}")?;
        }
        for (j, v) in self.limits() {
            writeln!(f, "limits {j} {v}")?;
        }
        write_tail(f, "tail ", self.tail())?;
        writeln!(f, "col0 {}", join(self.col0_tail(), " "))
    }
}

impl fmt::Display for GOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "gop one {}", self.img_one)?;
        for (k, s) in self.img_e.iter().enumerate() {
            writeln!(f, "gop e {} {s}", k + 1)?;
        }
        match &self.rule {
            None => Ok(()),
            Some(ColumnRule::TriSlot) => writeln!(f, "gop e * trislot"),
            Some(ColumnRule::Block { first_row, tail }) => {
                writeln!(f, "gop e * block {first_row} {}", tail.period())?;
                for r in 0..tail.period() {
                    writeln!(f, "{}", join(&tail.block_row(r), " "))?;
                }
                Ok(())
            }
        }
    }
}

/// Meaningful lines with their 1-based numbers.
fn lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn scalar(tok: &str) -> Result<Scalar> {
    tok.parse()
}

fn uint(tok: &str, what: &str) -> Result<u64> {
    tok.parse()
        .map_err(|_| Error::syntax(format!("expected {what}, found {tok:?}")))
}

fn int(tok: &str, what: &str) -> Result<i64> {
    tok.parse()
        .map_err(|_| Error::syntax(format!("expected {what}, found {tok:?}")))
}

/// `[a, b, c]` at the start of `s`; returns the values and the rest.
fn bracket_list(s: &str) -> Result<(Vec<Scalar>, &str)> {
    let s = s.trim_start();
    let body = s
        .strip_prefix('[')
        .ok_or_else(|| Error::syntax("expected '['"))?;
    let end = body.find(']').ok_or_else(|| Error::syntax("missing ']'"))?;
    let inner = body[..end].trim();
    let vals = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|t| scalar(t.trim())).collect::<Result<_>>()?
    };
    Ok((vals, &body[end + 1..]))
}

/// `keyword value` at the start of `s`.
fn keyword_value<'a>(s: &'a str, keyword: &str) -> Result<(&'a str, &'a str)> {
    let s = s.trim_start();
    let rest = s
        .strip_prefix(keyword)
        .filter(|r| r.starts_with(char::is_whitespace))
        .ok_or_else(|| Error::syntax(format!("expected '{keyword}'")))?
        .trim_start();
    let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    Ok((&rest[..end], &rest[end..]))
}

fn expect_end(s: &str) -> Result<()> {
    if s.trim().is_empty() {
        Ok(())
    } else {
        Err(Error::syntax(format!("unexpected trailing text {:?}", s.trim())))
    }
}

pub fn parse_ec(s: &str) -> Result<EcSeq> {
    let rest = s
        .trim()
        .strip_prefix("ec:")
        .ok_or_else(|| Error::syntax("expected 'ec:'"))?;
    let (prefix, rest) = bracket_list(rest)?;
    let (tail, rest) = keyword_value(rest, "tail")?;
    expect_end(rest)?;
    Ok(EcSeq::new(prefix, scalar(tail)?))
}

pub fn parse_zseq(s: &str) -> Result<ZSeq> {
    let rest = s
        .trim()
        .strip_prefix("zseq:")
        .ok_or_else(|| Error::syntax("expected 'zseq:'"))?
        .trim_start();
    let body = rest
        .strip_prefix('{')
        .ok_or_else(|| Error::syntax("expected '{'"))?;
    let end = body.find('}').ok_or_else(|| Error::syntax("missing '}'"))?;
    let mut core = BTreeMap::new();
    for item in body[..end].split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (i, v) = item
            .split_once(':')
            .ok_or_else(|| Error::syntax(format!("expected 'index:value', found {item:?}")))?;
        let i = int(i.trim(), "an index")?;
        if core.insert(i, scalar(v.trim())?).is_some() {
            return Err(Error::syntax(format!("index {i} given twice")));
        }
    }
    let (left, rest) = keyword_value(&body[end + 1..], "left")?;
    let (right, rest) = keyword_value(rest, "right")?;
    expect_end(rest)?;
    let (left, right) = (scalar(left)?, scalar(right)?);
    if core.is_empty() && left != right {
        return Err(Error::syntax("a sequence with different tails needs a core entry"));
    }
    Ok(ZSeq::from_core(&core, left, right))
}

pub fn parse_bounded(s: &str) -> Result<BoundedSeq> {
    let t = s.trim();
    if t.starts_with("ec:") {
        return Ok(BoundedSeq::ec(parse_ec(t)?));
    }
    if let Some(rest) = t.strip_prefix("periodic:") {
        let (prefix, rest) = bracket_list(rest)?;
        let rest = rest
            .trim_start()
            .strip_prefix("repeat")
            .ok_or_else(|| Error::syntax("expected 'repeat'"))?;
        let (period, rest) = bracket_list(rest)?;
        expect_end(rest)?;
        return BoundedSeq::periodic(prefix, period).map_err(|e| Error::syntax(e.to_string()));
    }
    if let Some(rest) = t.strip_prefix("trislot") {
        let slot = uint(rest.trim(), "a slot index")?;
        if slot == 0 {
            return Err(Error::syntax("slots start at 1"));
        }
        return Ok(BoundedSeq::TriSlot { slot });
    }
    Err(Error::syntax(format!("unknown sequence {t:?}")))
}

type Lines<'a> = std::iter::Peekable<std::vec::IntoIter<(usize, &'a str)>>;

fn tokens(l: &str) -> Vec<&str> {
    l.split_whitespace().collect()
}

/// `p` rows of `p` scalars following a `block p` line.
fn block_rows(it: &mut Lines<'_>, p: usize, after: usize) -> Result<Tail> {
    if p == 0 {
        return Err(Error::syntax("block size must be positive").at_line(after));
    }
    let mut rows = Vec::with_capacity(p);
    for _ in 0..p {
        let (n, l) = it
            .next()
            .ok_or_else(|| Error::syntax(format!("expected {p} block rows")).at_line(after))?;
        let row: Vec<Scalar> = tokens(l)
            .into_iter()
            .map(scalar)
            .collect::<Result<_>>()
            .map_err(|e| e.at_line(n))?;
        if row.len() != p {
            return Err(Error::syntax(format!("block row needs {p} entries")).at_line(n));
        }
        rows.push(row);
    }
    Ok(Tail::Block { size: p, block: rows })
}

fn tail_line(args: &[&str], it: &mut Lines<'_>, n: usize) -> Result<Tail> {
    match args {
        ["zero"] => Ok(Tail::Zero),
        ["identity"] => Ok(Tail::Identity),
        ["block", p] => {
            let p = uint(p, "a block size").map_err(|e| e.at_line(n))?;
            block_rows(it, p as usize, n)
        }
        _ => Err(Error::syntax("expected 'tail zero', 'tail identity' or 'tail block p'").at_line(n)),
    }
}

fn window_header(it: &mut Lines<'_>, keyword: &str) -> Result<(u64, u64)> {
    let (n, l) = it
        .next()
        .ok_or_else(|| Error::syntax(format!("empty input, expected '{keyword} window R C'")))?;
    match tokens(l).as_slice() {
        [k, "window", r, c] if *k == keyword => {
            let r = uint(r, "a row count").map_err(|e| e.at_line(n))?;
            let c = uint(c, "a column count").map_err(|e| e.at_line(n))?;
            Ok((r, c))
        }
        [k, ..] if *k == keyword => Err(Error::syntax(format!("expected '{keyword} window R C'")).at_line(n)),
        _ => Err(Error::Format(format!("expected a {keyword} document, found {l:?}"))),
    }
}

fn triplet(toks: &[&str], n: usize) -> Result<((u64, u64), Scalar)> {
    let parsed = || -> Result<((u64, u64), Scalar)> {
        match toks {
            [i, j, v] => Ok(((uint(i, "a row index")?, uint(j, "a column index")?), scalar(v)?)),
            _ => Err(Error::syntax("expected 'i j value'")),
        }
    };
    parsed().map_err(|e| e.at_line(n))
}

pub fn parse_lmatrix(text: &str) -> Result<LMatrix> {
    let mut it: Lines<'_> = lines(text).into_iter().peekable();
    let (rows, cols) = window_header(&mut it, "lmatrix")?;
    let mut entries = Vec::new();
    let mut tail = None;
    let mut last = 1;
    while let Some((n, l)) = it.next() {
        last = n;
        let toks = tokens(l);
        if toks[0] == "tail" {
            if tail.is_some() {
                return Err(Error::syntax("second tail line").at_line(n));
            }
            tail = Some(tail_line(&toks[1..], &mut it, n)?);
        } else if tail.is_some() {
            return Err(Error::syntax("entries must precede the tail line").at_line(n));
        } else {
            entries.push((triplet(&toks, n)?, n));
        }
    }
    let tail = tail.ok_or_else(|| Error::syntax("missing tail line").at_line(last))?;
    check_unique(&entries)?;
    LMatrix::new(rows, cols, entries.into_iter().map(|(e, _)| e), tail)
        .map_err(|e| Error::syntax(e.to_string()))
}

fn check_unique(entries: &[(((u64, u64), Scalar), usize)]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for (((i, j), _), n) in entries {
        if !seen.insert((*i, *j)) {
            return Err(Error::syntax(format!("entry ({i},{j}) given twice")).at_line(*n));
        }
    }
    Ok(())
}

pub fn parse_covermatrix(text: &str) -> Result<CoverMatrix> {
    let mut it: Lines<'_> = lines(text).into_iter().peekable();
    let (rows, cols) = window_header(&mut it, "covermatrix")?;
    let mut entries = Vec::new();
    let mut limits = BTreeMap::new();
    let mut tail = None;
    let mut col0 = Vec::new();
    let mut last = 1;
    while let Some((n, l)) = it.next() {
        last = n;
        let toks = tokens(l);
        match toks[0] {
            "limits" => {
                let [_, j, v] = toks.as_slice() else {
                    return Err(Error::syntax("expected 'limits j value'").at_line(n));
                };
                let j = uint(j, "a column index").map_err(|e| e.at_line(n))?;
                if limits.insert(j, scalar(v).map_err(|e| e.at_line(n))?).is_some() {
                    return Err(Error::syntax(format!("limit of column {j} given twice")).at_line(n));
                }
            }
            "tail" => {
                if tail.is_some() {
                    return Err(Error::syntax("second tail line").at_line(n));
                }
                tail = Some(tail_line(&toks[1..], &mut it, n)?);
            }
            "col0" => {
                col0 = toks[1..]
                    .iter()
                    .map(|t| scalar(t))
                    .collect::<Result<_>>()
                    .map_err(|e| e.at_line(n))?;
                if col0.is_empty() {
                    return Err(Error::syntax("col0 needs at least one value").at_line(n));
                }
            }
            _ => entries.push((triplet(&toks, n)?, n)),
        }
    }
    let tail = tail.ok_or_else(|| Error::syntax("missing tail line").at_line(last))?;
    check_unique(&entries)?;
    CoverMatrix::new(rows, cols, entries.into_iter().map(|(e, _)| e), limits, tail, col0)
        .map_err(|e| Error::syntax(e.to_string()))
}

pub fn parse_gop(text: &str) -> Result<GOperator> {
    let mut it: Lines<'_> = lines(text).into_iter().peekable();
    let mut img_one = None;
    let mut img_e: BTreeMap<u64, BoundedSeq> = BTreeMap::new();
    let mut rule = None;
    if it.peek().is_none() {
        return Err(Error::syntax("empty input, expected 'gop' lines"));
    }
    while let Some((n, l)) = it.next() {
        let rest = l
            .strip_prefix("gop")
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| Error::Format(format!("expected a gop document, found {l:?}")))?
            .trim_start();
        if let Some(seq) = rest.strip_prefix("one") {
            if img_one.is_some() {
                return Err(Error::syntax("'gop one' given twice").at_line(n));
            }
            img_one = Some(parse_bounded(seq).map_err(|e| e.at_line(n))?);
        } else if let Some(rest) = rest.strip_prefix("e ") {
            let rest = rest.trim_start();
            if let Some(r) = rest.strip_prefix('*') {
                if rule.is_some() {
                    return Err(Error::syntax("second column rule").at_line(n));
                }
                rule = Some(match tokens(r).as_slice() {
                    ["trislot"] => ColumnRule::TriSlot,
                    ["block", first_row, p] => {
                        let first_row = uint(first_row, "a first row").map_err(|e| e.at_line(n))?;
                        if first_row == 0 {
                            return Err(Error::syntax("positions start at 1").at_line(n));
                        }
                        let p = uint(p, "a block size").map_err(|e| e.at_line(n))?;
                        ColumnRule::Block {
                            first_row,
                            tail: block_rows(&mut it, p as usize, n)?,
                        }
                    }
                    _ => {
                        return Err(
                            Error::syntax("expected 'gop e * trislot' or 'gop e * block r p'").at_line(n)
                        )
                    }
                });
            } else {
                let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
                let i = uint(&rest[..end], "a basis index").map_err(|e| e.at_line(n))?;
                if i == 0 {
                    return Err(Error::syntax("basis indices start at 1").at_line(n));
                }
                let seq = parse_bounded(&rest[end..]).map_err(|e| e.at_line(n))?;
                if img_e.insert(i, seq).is_some() {
                    return Err(Error::syntax(format!("image of e_{i} given twice")).at_line(n));
                }
            }
        } else {
            return Err(Error::syntax("expected 'gop one' or 'gop e'").at_line(n));
        }
    }
    let img_one = img_one.ok_or_else(|| Error::syntax("missing 'gop one' line"))?;
    let m = img_e.keys().next_back().copied().unwrap_or(0);
    let img_e = (1..=m)
        .map(|i| img_e.remove(&i).unwrap_or_else(|| BoundedSeq::ec(EcSeq::zero())))
        .collect();
    Ok(GOperator { img_one, img_e, rule })
}

/// One `zseq:` per line.
pub fn parse_family(text: &str) -> Result<Vec<ZSeq>> {
    let ls = lines(text);
    if ls.is_empty() {
        return Err(Error::syntax("empty family"));
    }
    ls.into_iter()
        .map(|(n, l)| {
            if !l.starts_with("zseq:") {
                return Err(Error::Format(format!("expected one zseq per line, found {l:?}")));
            }
            parse_zseq(l).map_err(|e| e.at_line(n))
        })
        .collect()
}

/// Family file text.
pub fn write_family(family: &[ZSeq]) -> String {
    family.iter().map(|z| format!("{z}\n")).collect()
}

/// Any exchange-format document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Ec(EcSeq),
    Z(ZSeq),
    LMatrix(LMatrix),
    CoverMatrix(CoverMatrix),
    GOperator(GOperator),
    Family(Vec<ZSeq>),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Ec(_) => "ec sequence",
            Document::Z(_) => "zseq",
            Document::LMatrix(_) => "lmatrix",
            Document::CoverMatrix(_) => "covermatrix",
            Document::GOperator(_) => "gop",
            Document::Family(_) => "zseq family",
        }
    }
}

/// Dispatches on the first meaningful line.
pub fn parse_document(text: &str) -> Result<Document> {
    let ls = lines(text);
    let Some(&(n, first)) = ls.first() else {
        return Err(Error::syntax("empty input").at_line(1));
    };
    let head = first.split_whitespace().next().unwrap_or("");
    match head {
        "lmatrix" => parse_lmatrix(text).map(Document::LMatrix),
        "covermatrix" => parse_covermatrix(text).map(Document::CoverMatrix),
        "gop" => parse_gop(text).map(Document::GOperator),
        "ec:" => {
            if ls.len() > 1 {
                return Err(Error::syntax("one ec sequence per document").at_line(ls[1].0));
            }
            parse_ec(first).map(Document::Ec).map_err(|e| e.at_line(n))
        }
        "zseq:" => {
            if ls.len() == 1 {
                parse_zseq(first).map(Document::Z).map_err(|e| e.at_line(n))
            } else {
                parse_family(text).map(Document::Family)
            }
        }
        _ => Err(Error::syntax(format!("unknown document type {head:?}")).at_line(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opmatrix::lmatrix::{paper_p, paper_q};

    #[test]
    fn sequences_round_trip() {
        for s in ["ec: [] tail 0", "ec: [1, -3/2] tail 2"] {
            assert_eq!(parse_ec(s).unwrap().to_string(), s);
        }
        for s in ["zseq: {} left 0 right 0", "zseq: {-3:2, -2:0, -1:0, 0:5/7} left 1 right 0", "zseq: {4:1} left 0 right 1"] {
            assert_eq!(parse_zseq(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn non_canonical_input_is_canonicalized() {
        assert_eq!(parse_ec("ec: [1, 2, 2] tail 2").unwrap().to_string(), "ec: [1] tail 2");
        assert_eq!(
            parse_zseq("zseq: {-1:0, 1:3, 2:0} left 0 right 0").unwrap().to_string(),
            "zseq: {1:3} left 0 right 0"
        );
    }

    #[test]
    fn rejects_floats() {
        assert!(parse_ec("ec: [0.5] tail 0").is_err());
    }

    #[test]
    fn matrices_round_trip() {
        for m in [paper_p(), paper_q(), LMatrix::zero()] {
            let text = m.to_string();
            let back = parse_lmatrix(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(back.to_string(), text);
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_lmatrix("lmatrix window 1 1\n# comment\n0 0 x\ntail zero\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: Some(3), .. }), "{err}");
        let err = parse_lmatrix("lmatrix window 1 1\n0 0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: Some(2), .. }), "{err}");
        let err = parse_document("").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn wrong_document_kind_is_a_format_error() {
        let err = parse_lmatrix("covermatrix window 0 0\ntail zero\n").unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn gop_round_trip() {
        let text = "gop one ec: [] tail 1\ngop e 1 periodic: [1] repeat [0, 1]\ngop e 2 trislot 3\ngop e * block 4 2\n0 1\n1 0\n";
        let g = parse_gop(text).unwrap();
        assert_eq!(g.to_string(), text);
        let t = crate::opmatrix::gop::build_t_example21();
        assert_eq!(parse_gop(&t.to_string()).unwrap(), t);
    }
}
