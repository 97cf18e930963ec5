//! Text formats for rings, matrices, transcripts, certificates and verdicts.
//!
//! All formats are line based. Blank lines and lines starting with `#`
//! are ignored. An entry is written as its coordinates: a bare integer
//! when the ring has one coordinate, `(c1 c2 ... cd)` otherwise.
//!
//! Ring file:
//!
//! ```text
//! name Z/6
//! orders 6
//! one 1
//! table
//! 1
//! ```
//!
//! `table` is followed by `d * d` lines, line `i * d + j` holding the
//! coordinates of `b_i b_j`.
//!
//! Matrix file:
//!
//! ```text
//! ring Z/6
//! rows 2
//! cols 2
//! 0 1
//! 5 0
//! ```
//!
//! Transcript lines read `row i j c` (`row_i += c row_j`) or `col i j c`
//! (`col_i += col_j c`) with 1-based indices.
//!
//! A certificate bundle stores the input, both transcripts and the
//! diagonal. Each operation line ends with the first 8 hex digits of the
//! SHA-256 of the matrix after that operation (left transcript first,
//! then right), and the last line is the SHA-256 of everything before it:
//!
//! ```text
//! gecert certificate 1
//! kind ge
//! ring Z/6
//! ring-id 9c0e8d1f7a2b3c4d
//! size 2
//! input
//! 0 1
//! 5 0
//! left 3
//! row 1 2 1 1c2d3e4f
//! ...
//! right 0
//! diagonal
//! 1 0
//! 0 1
//! inverses 1 1
//! digest 5f0a...
//! ```
//!
//! Bundles of kind `regular` omit the `inverses` line.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diagonalize::RegularDiagonalization;
use crate::matrix::{ElementaryOp, GeDecomposition, Mat, ReplayFailure, Side, Transcript};
use crate::oracle::{Property, Verdict};
use crate::ring::{Element, Ring, RingError, RingSpec};

pub const CERTIFICATE_HEADER: &str = "gecert certificate 1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("file is for ring `{found}` but ring `{expected}` was given")]
    RingMismatch { expected: String, found: String },
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Significant lines with their 1-based numbers.
struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
        );
        Lines { inner: it.peekable(), last: 0 }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str), FormatError> {
        match self.inner.next() {
            Some((n, l)) => {
                self.last = n;
                Ok((n, l))
            }
            None => Err(syntax(self.last + 1, format!("expected {what}, found end of file"))),
        }
    }

    /// The value after `key` on the next line.
    fn field(&mut self, key: &str) -> Result<(usize, &'a str), FormatError> {
        let (n, l) = self.next(key)?;
        match l.split_once(char::is_whitespace) {
            Some((k, v)) if k == key => Ok((n, v.trim())),
            _ if l == key => Ok((n, "")),
            _ => Err(syntax(n, format!("expected `{key}`"))),
        }
    }

    fn number(&mut self, key: &str) -> Result<(usize, usize), FormatError> {
        let (n, v) = self.field(key)?;
        v.parse().map(|x| (n, x)).map_err(|_| syntax(n, format!("`{key}` needs a nonnegative integer")))
    }

    fn end(&mut self) -> Result<(), FormatError> {
        match self.inner.next() {
            Some((n, _)) => Err(syntax(n, "unexpected trailing content")),
            None => Ok(()),
        }
    }
}

/// Split a line into tokens, keeping `( ... )` groups together.
fn tokens(line: usize, text: &str) -> Result<Vec<String>, FormatError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '(' {
            let mut group = String::new();
            for c in chars.by_ref() {
                group.push(c);
                if c == ')' {
                    break;
                }
            }
            if !group.ends_with(')') {
                return Err(syntax(line, "unclosed parenthesis"));
            }
            out.push(group);
        } else {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '(' {
                    break;
                }
                word.push(c);
                chars.next();
            }
            out.push(word);
        }
    }
    Ok(out)
}

fn integers(line: usize, text: &str) -> Result<Vec<i64>, FormatError> {
    text.split_whitespace()
        .map(|w| w.parse().map_err(|_| syntax(line, format!("`{w}` is not an integer"))))
        .collect()
}

/// Parse an entry. `strict` rejects coordinates outside `[0, m_i)`.
fn entry(ring: &Ring, line: usize, token: &str, strict: bool) -> Result<Element, FormatError> {
    let inner = token.strip_prefix('(').and_then(|t| t.strip_suffix(')'));
    let coords = integers(line, inner.unwrap_or(token))?;
    if coords.len() != ring.dim() || (inner.is_none() && ring.dim() != 1) {
        return Err(syntax(line, format!("entry `{token}` needs {} coordinates", ring.dim())));
    }
    if strict {
        let reduced = coords.iter().zip(ring.orders()).all(|(&c, &m)| c >= 0 && (c as u64) < m);
        if !reduced {
            return Err(syntax(line, format!("entry `{token}` is not reduced")));
        }
    }
    Ok(ring.element_reduced(&coords))
}

fn render_entries(ring: &Ring, xs: &[Element]) -> String {
    xs.iter().map(|&x| ring.render(x)).collect::<Vec<_>>().join(" ")
}

fn write_rows(out: &mut String, ring: &Ring, m: &Mat) {
    for i in 0..m.rows() {
        let _ = writeln!(out, "{}", render_entries(ring, m.row(i)));
    }
}

fn read_rows(lines: &mut Lines<'_>, ring: &Ring, rows: usize, cols: usize, strict: bool) -> Result<Mat, FormatError> {
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let (n, l) = lines.next("a matrix row")?;
        let toks = tokens(n, l)?;
        if toks.len() != cols {
            return Err(syntax(n, format!("row has {} entries, expected {cols}", toks.len())));
        }
        for t in toks {
            entries.push(entry(ring, n, &t, strict)?);
        }
    }
    Mat::new(ring, rows, cols, entries).map_err(|e| syntax(lines.last, e.to_string()))
}

pub fn write_ring_spec(spec: &RingSpec) -> String {
    let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let _ = writeln!(out, "name {}", spec.name);
    let _ = writeln!(out, "orders {}", join(&spec.orders));
    let _ = writeln!(out, "one {}", join(&spec.one));
    let _ = writeln!(out, "table");
    for entry in &spec.table {
        let _ = writeln!(out, "{}", join(entry));
    }
    out
}

/// Parse a ring file. Structural errors carry line numbers; the ring
/// axioms are checked when the result is loaded.
pub fn parse_ring_spec(text: &str) -> Result<RingSpec, FormatError> {
    let mut lines = Lines::new(text);
    let (_, name) = lines.field("name")?;
    let unsigned = |n: usize, v: &str| -> Result<Vec<u64>, FormatError> {
        v.split_whitespace()
            .map(|w| w.parse().map_err(|_| syntax(n, format!("`{w}` is not a nonnegative integer"))))
            .collect()
    };
    let (n, v) = lines.field("orders")?;
    let orders = unsigned(n, v)?;
    if orders.is_empty() || orders.iter().any(|&m| m < 2) {
        return Err(syntax(n, "orders must be integers at least 2"));
    }
    let d = orders.len();
    let (n, v) = lines.field("one")?;
    let one = unsigned(n, v)?;
    if one.len() != d {
        return Err(syntax(n, format!("`one` needs {d} coordinates")));
    }
    let (n, v) = lines.field("table")?;
    if !v.is_empty() {
        return Err(syntax(n, "`table` starts its own block"));
    }
    let mut table = Vec::with_capacity(d * d);
    for _ in 0..d * d {
        let (n, l) = lines.next("a table row")?;
        let row = unsigned(n, l)?;
        if row.len() != d {
            return Err(syntax(n, format!("table row needs {d} coordinates")));
        }
        table.push(row);
    }
    lines.end()?;
    Ok(RingSpec { name: name.to_string(), orders, table, one })
}

pub fn write_matrix(ring: &Ring, m: &Mat) -> String {
    let mut out = format!("ring {}\nrows {}\ncols {}\n", ring.name(), m.rows(), m.cols());
    write_rows(&mut out, ring, m);
    out
}

/// Value of `key` among the first lines of a header.
fn header_field(text: &str, key: &str) -> Result<String, FormatError> {
    let mut lines = Lines::new(text);
    for _ in 0..8 {
        let (_, l) = lines.next(&format!("a `{key}` line"))?;
        if let Some((k, v)) = l.split_once(char::is_whitespace) {
            if k == key {
                return Ok(v.trim().to_string());
            }
        }
    }
    Err(syntax(lines.last, format!("no `{key}` line in the header")))
}

/// The ring named in a matrix or certificate header.
pub fn header_ring_name(text: &str) -> Result<String, FormatError> {
    header_field(text, "ring")
}

/// Parse a matrix file whose header names `ring`. Coordinates are reduced.
pub fn parse_matrix(text: &str, ring: &Ring) -> Result<Mat, FormatError> {
    let mut lines = Lines::new(text);
    let (_, name) = lines.field("ring")?;
    if name != ring.name() {
        return Err(FormatError::RingMismatch { expected: ring.name().to_string(), found: name.to_string() });
    }
    let (n, rows) = lines.number("rows")?;
    let (_, cols) = lines.number("cols")?;
    if rows == 0 || cols == 0 {
        return Err(syntax(n, "matrix sides must be positive"));
    }
    let m = read_rows(&mut lines, ring, rows, cols, false)?;
    lines.end()?;
    Ok(m)
}

fn op_line(ring: &Ring, op: &ElementaryOp) -> String {
    let side = if op.side == Side::Row { "row" } else { "col" };
    format!("{side} {} {} {}", op.target + 1, op.source + 1, ring.render(op.coeff))
}

fn parse_op(ring: &Ring, n: usize, toks: &[String], size: (usize, usize)) -> Result<ElementaryOp, FormatError> {
    let side = match toks[0].as_str() {
        "row" => Side::Row,
        "col" => Side::Col,
        other => return Err(syntax(n, format!("unknown side `{other}`"))),
    };
    let index = |t: &str| -> Result<usize, FormatError> {
        t.parse::<usize>().ok().filter(|&i| i >= 1).ok_or_else(|| syntax(n, format!("bad index `{t}`")))
    };
    let (i, j) = (index(&toks[1])?, index(&toks[2])?);
    let limit = if side == Side::Row { size.0 } else { size.1 };
    if i > limit || j > limit || i == j {
        return Err(syntax(n, format!("indices {i}, {j} invalid for {limit} lines")));
    }
    let coeff = entry(ring, n, &toks[3], true)?;
    Ok(ElementaryOp { side, target: i - 1, source: j - 1, coeff })
}

pub fn write_transcript(ring: &Ring, t: &Transcript) -> String {
    let mut out = format!("transcript\nring {}\nrows {}\ncols {}\n", ring.name(), t.rows, t.cols);
    for op in &t.ops {
        let _ = writeln!(out, "{}", op_line(ring, op));
    }
    out
}

pub fn parse_transcript(text: &str, ring: &Ring) -> Result<Transcript, FormatError> {
    let mut lines = Lines::new(text);
    lines.field("transcript")?;
    let (_, name) = lines.field("ring")?;
    if name != ring.name() {
        return Err(FormatError::RingMismatch { expected: ring.name().to_string(), found: name.to_string() });
    }
    let (_, rows) = lines.number("rows")?;
    let (_, cols) = lines.number("cols")?;
    let mut t = Transcript::new(ring, rows, cols);
    for (n, l) in lines.inner.by_ref() {
        let toks = tokens(n, l)?;
        if toks.len() != 4 {
            return Err(syntax(n, "an operation has the form `side i j coeff`"));
        }
        t.push(parse_op(ring, n, &toks, (rows, cols))?);
    }
    Ok(t)
}

/// A diagonalization certificate of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Ge(GeDecomposition),
    Regular(RegularDiagonalization),
}

impl Certificate {
    pub fn input(&self) -> &Mat {
        match self {
            Certificate::Ge(d) => &d.input,
            Certificate::Regular(d) => &d.input,
        }
    }

    pub fn transcripts(&self) -> (&Transcript, &Transcript) {
        match self {
            Certificate::Ge(d) => (&d.left, &d.right),
            Certificate::Regular(d) => (&d.left, &d.right),
        }
    }

    pub fn diagonal(&self) -> &Mat {
        match self {
            Certificate::Ge(d) => &d.diagonal,
            Certificate::Regular(d) => &d.diagonal,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Certificate::Ge(_) => "ge",
            Certificate::Regular(_) => "regular",
        }
    }
}

fn checkpoint(ring: &Ring, m: &Mat) -> String {
    let mut body = String::new();
    write_rows(&mut body, ring, m);
    let digest = Sha256::digest(body.as_bytes());
    hex::encode(&digest[..4])
}

/// Serialize a certificate, replaying it to compute checkpoints.
pub fn write_certificate(ring: &Ring, cert: &Certificate) -> String {
    let mut out = String::new();
    let input = cert.input();
    let _ = writeln!(out, "{CERTIFICATE_HEADER}");
    let _ = writeln!(out, "kind {}", cert.kind());
    let _ = writeln!(out, "ring {}", ring.name());
    let _ = writeln!(out, "ring-id {}", ring.id());
    let _ = writeln!(out, "size {}", input.rows());
    let _ = writeln!(out, "input");
    write_rows(&mut out, ring, input);
    let mut m = input.clone();
    let (left, right) = cert.transcripts();
    for (label, t) in [("left", left), ("right", right)] {
        let _ = writeln!(out, "{label} {}", t.len());
        for op in &t.ops {
            // Certificates written here come from the library and replay.
            let _ = op.apply(ring, &mut m);
            let _ = writeln!(out, "{} {}", op_line(ring, op), checkpoint(ring, &m));
        }
    }
    let _ = writeln!(out, "diagonal");
    write_rows(&mut out, ring, cert.diagonal());
    if let Certificate::Ge(d) = cert {
        let _ = writeln!(out, "inverses {}", render_entries(ring, &d.inverses));
    }
    let digest = hex::encode(Sha256::digest(out.as_bytes()));
    let _ = writeln!(out, "digest {digest}");
    out
}

/// A certificate as read from text, before any replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedCertificate {
    pub ring_name: String,
    pub ring_id: String,
    pub certificate: Certificate,
    /// Checkpoints of the left then right operations.
    pub checkpoints: Vec<String>,
    pub recorded_digest: String,
    pub computed_digest: String,
}

/// Why a certificate is rejected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CertificateFailure {
    #[error("ring mismatch: certificate is for {found} (id {found_id}), checking against {expected} (id {expected_id})")]
    RingMismatch { expected: String, expected_id: String, found: String, found_id: String },
    #[error("{transcript} transcript op {index}: checkpoint mismatch")]
    Checkpoint { transcript: &'static str, index: usize },
    #[error("{0}")]
    Replay(String),
    #[error("digest mismatch")]
    Digest,
}

impl From<ReplayFailure> for CertificateFailure {
    fn from(f: ReplayFailure) -> Self {
        CertificateFailure::Replay(f.to_string())
    }
}

/// Parse a certificate bundle over `ring`. The ring id is not compared
/// here; see [`verify_certificate`].
pub fn parse_certificate(text: &str, ring: &Ring) -> Result<ParsedCertificate, FormatError> {
    let mut lines = Lines::new(text);
    let (n, header) = lines.next("the certificate header")?;
    if header != CERTIFICATE_HEADER {
        return Err(syntax(n, format!("expected `{CERTIFICATE_HEADER}`")));
    }
    let (n, kind) = lines.field("kind")?;
    if kind != "ge" && kind != "regular" {
        return Err(syntax(n, format!("unknown certificate kind `{kind}`")));
    }
    let (_, ring_name) = lines.field("ring")?;
    let (_, ring_id) = lines.field("ring-id")?;
    let (n, size) = lines.number("size")?;
    if size == 0 {
        return Err(syntax(n, "size must be positive"));
    }
    lines.field("input")?;
    let input = read_rows(&mut lines, ring, size, size, true)?;
    let mut checkpoints = Vec::new();
    let mut transcripts = Vec::new();
    for label in ["left", "right"] {
        let (_, count) = lines.number(label)?;
        let mut t = Transcript::new(ring, size, size);
        for _ in 0..count {
            let (n, l) = lines.next("an operation")?;
            let toks = tokens(n, l)?;
            if toks.len() != 5 {
                return Err(syntax(n, "an operation has the form `side i j coeff checkpoint`"));
            }
            t.push(parse_op(ring, n, &toks[..4], (size, size))?);
            checkpoints.push(toks[4].clone());
        }
        transcripts.push(t);
    }
    lines.field("diagonal")?;
    let diagonal = read_rows(&mut lines, ring, size, size, true)?;
    let right = transcripts.pop().expect("two transcripts");
    let left = transcripts.pop().expect("two transcripts");
    let certificate = if kind == "ge" {
        let (n, v) = lines.field("inverses")?;
        let toks = tokens(n, v)?;
        if toks.len() != size {
            return Err(syntax(n, format!("expected {size} inverses")));
        }
        let inverses = toks.iter().map(|t| entry(ring, n, t, true)).collect::<Result<_, _>>()?;
        Certificate::Ge(GeDecomposition { input, left, right, diagonal, inverses })
    } else {
        Certificate::Regular(RegularDiagonalization { input, left, right, diagonal })
    };
    let (n, recorded) = lines.field("digest")?;
    lines.end()?;
    // The digest covers every byte up to the start of the digest line.
    let body_end = text
        .lines()
        .take(n - 1)
        .map(|l| l.len() + 1)
        .sum::<usize>()
        .min(text.len());
    let computed = hex::encode(Sha256::digest(&text.as_bytes()[..body_end]));
    Ok(ParsedCertificate {
        ring_name: ring_name.to_string(),
        ring_id: ring_id.to_string(),
        certificate,
        checkpoints,
        recorded_digest: recorded.to_string(),
        computed_digest: computed,
    })
}

/// Replay a parsed certificate from its serialized data alone.
pub fn check_parsed(ring: &Ring, parsed: &ParsedCertificate) -> Result<(), CertificateFailure> {
    if parsed.ring_id != ring.id().to_string() {
        return Err(CertificateFailure::RingMismatch {
            expected: ring.name().to_string(),
            expected_id: ring.id().to_string(),
            found: parsed.ring_name.clone(),
            found_id: parsed.ring_id.clone(),
        });
    }
    let cert = &parsed.certificate;
    let (left, right) = cert.transcripts();
    let mut m = cert.input().clone();
    let mut marks = parsed.checkpoints.iter();
    for (label, t) in [("left", left), ("right", right)] {
        for (index, op) in t.ops.iter().enumerate() {
            let failure = CertificateFailure::Checkpoint { transcript: label, index: index + 1 };
            op.apply(ring, &mut m).map_err(|_| failure.clone())?;
            if marks.next() != Some(&checkpoint(ring, &m)) {
                return Err(failure);
            }
        }
    }
    match cert {
        Certificate::Ge(d) => {
            if let Some(f) = d.replay_check(ring).failure {
                return Err(f.into());
            }
        }
        Certificate::Regular(d) => {
            if !d.replays(ring) {
                return Err(CertificateFailure::Replay("transcripts do not reach the claimed diagonal".into()));
            }
        }
    }
    if parsed.recorded_digest != parsed.computed_digest {
        return Err(CertificateFailure::Digest);
    }
    Ok(())
}

/// Parse and check a certificate. Syntax errors are `Err`; a certificate
/// that parses but fails is `Ok(Err(..))`.
pub fn verify_certificate(
    text: &str,
    ring: &Ring,
) -> Result<Result<ParsedCertificate, CertificateFailure>, FormatError> {
    let found_id = header_field(text, "ring-id")?;
    if found_id != ring.id().to_string() {
        return Ok(Err(CertificateFailure::RingMismatch {
            expected: ring.name().to_string(),
            expected_id: ring.id().to_string(),
            found: header_ring_name(text)?,
            found_id,
        }));
    }
    let parsed = parse_certificate(text, ring)?;
    Ok(check_parsed(ring, &parsed).map(|()| parsed))
}

/// Verdicts as blank-line separated blocks.
pub fn write_verdicts(verdicts: &[Verdict]) -> String {
    verdicts.iter().map(|v| format!("{v}\n")).collect::<Vec<_>>().join("\n")
}

pub fn parse_verdicts(text: &str) -> Result<Vec<Verdict>, FormatError> {
    let mut lines = Lines::new(text);
    let mut out = Vec::new();
    while lines.inner.peek().is_some() {
        let (_, ring) = lines.field("ring")?;
        let (n, property) = lines.field("property")?;
        let property = Property::parse(property).ok_or_else(|| syntax(n, format!("unknown property `{property}`")))?;
        let (n, bound) = lines.field("bound")?;
        let bound = match bound {
            "-" => None,
            b => Some(b.parse().map_err(|_| syntax(n, "bad bound"))?),
        };
        let flag = |n: usize, v: &str, yes: &str, no: &str| match v {
            v if v == yes => Ok(true),
            v if v == no => Ok(false),
            _ => Err(syntax(n, format!("expected `{yes}` or `{no}`"))),
        };
        let (n, v) = lines.field("verdict")?;
        let holds = flag(n, v, "holds", "fails")?;
        let (n, v) = lines.field("exhaustive")?;
        let exhaustive = flag(n, v, "yes", "no")?;
        let (n, checked) = lines.field("checked")?;
        let checked = checked.parse().map_err(|_| syntax(n, "bad count"))?;
        let (_, w) = lines.field("witness")?;
        let witness = (w != "-").then(|| w.to_string());
        out.push(Verdict { ring: ring.to_string(), property, bound, holds, exhaustive, witness, checked });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagonalize::ge_diagonalize;

    #[test]
    fn ring_files_round_trip() {
        for name in ["Z/6", "F4", "Ex2.12(F2)"] {
            let r = Ring::preset(name).unwrap();
            let text = write_ring_spec(r.spec());
            let spec = parse_ring_spec(&text).unwrap();
            assert_eq!(&spec, r.spec());
            assert_eq!(Ring::load(spec).unwrap().id(), r.id());
        }
    }

    #[test]
    fn ring_file_errors_name_lines() {
        let err = parse_ring_spec("name R\norders 6\none 1\ntable\n1 2\n").unwrap_err();
        assert_eq!(err, syntax(5, "table row needs 1 coordinates"));
        let err = parse_ring_spec("name R\n# comment\norders x\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 3, .. }));
        // b1 b1 = b2 and b2 b1 = b1 but b1 b2 = 0.
        let corrupt = "name R\norders 2 2 2\none 1 0 0\ntable\n1 0 0\n0 1 0\n0 0 1\n0 1 0\n0 0 1\n0 0 0\n0 0 1\n0 1 0\n0 0 0\n";
        let spec = parse_ring_spec(corrupt).unwrap();
        assert_eq!(Ring::load(spec), Err(RingError::AssociativityViolation { i: 1, j: 1, k: 1 }));
    }

    #[test]
    fn matrices_round_trip() {
        let r = Ring::preset("Ex2.12(F2)").unwrap();
        let a = Mat::new(&r, 2, 2, (1..=4).map(|t| r.basis(t)).collect()).unwrap();
        let text = write_matrix(&r, &a);
        assert!(text.starts_with("ring Ex2.12(F2)\nrows 2\ncols 2\n(0 1 0 0 0) (0 0 1 0 0)\n"));
        assert_eq!(parse_matrix(&text, &r).unwrap(), a);
        let z6 = Ring::preset("Z/6").unwrap();
        let m = parse_matrix("ring Z/6\nrows 1\ncols 2\n-1 7\n", &z6).unwrap();
        assert_eq!(m, Mat::from_ints(&z6, 1, 2, &[5, 1]));
        assert!(matches!(parse_matrix(&text, &z6), Err(FormatError::RingMismatch { .. })));
        assert_eq!(
            parse_matrix("ring Z/6\nrows 2\ncols 2\n1 0\n", &z6).unwrap_err(),
            syntax(5, "expected a matrix row, found end of file")
        );
    }

    #[test]
    fn transcripts_round_trip() {
        let r = Ring::preset("F4").unwrap();
        let mut t = Transcript::new(&r, 3, 2);
        t.push(ElementaryOp::row(0, 2, r.basis(1)));
        t.push(ElementaryOp::col(1, 0, r.one()));
        let text = write_transcript(&r, &t);
        assert!(text.contains("row 1 3 (0 1)\ncol 2 1 (1 0)\n"));
        assert_eq!(parse_transcript(&text, &r).unwrap(), t);
        let bad = text.replace("row 1 3", "row 1 1");
        assert!(matches!(parse_transcript(&bad, &r), Err(FormatError::Syntax { line: 5, .. })));
    }

    #[test]
    fn certificates_round_trip_and_detect_changes() {
        let r = Ring::preset("Z/6").unwrap();
        let a = Mat::from_ints(&r, 2, 2, &[0, 1, 5, 0]);
        let cert = Certificate::Ge(ge_diagonalize(&r, &a).unwrap());
        let text = write_certificate(&r, &cert);
        let parsed = verify_certificate(&text, &r).unwrap().unwrap();
        assert_eq!(parsed.certificate, cert);
        assert_eq!(write_certificate(&r, &parsed.certificate), text);

        let z5 = Ring::preset("Z/5").unwrap();
        let rebased = text.replace("ring Z/6", "ring Z/5");
        assert!(matches!(
            verify_certificate(&rebased, &z5).unwrap(),
            Err(CertificateFailure::RingMismatch { .. })
        ));

        let line = text.lines().position(|l| l.starts_with("row ") || l.starts_with("col ")).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let mut toks: Vec<String> = lines[line].split(' ').map(String::from).collect();
        let c: u64 = toks[3].parse().unwrap();
        toks[3] = ((c + 1) % 6).to_string();
        let label = if toks[0] == "row" { "left" } else { "right" };
        lines[line] = toks.join(" ");
        let flipped = lines.join("\n") + "\n";
        assert_eq!(
            verify_certificate(&flipped, &r).unwrap(),
            Err(CertificateFailure::Checkpoint { transcript: label, index: 1 })
        );
        let annotated = text.replace("diagonal\n", "# edited\ndiagonal\n");
        assert_eq!(verify_certificate(&annotated, &r).unwrap().err(), Some(CertificateFailure::Digest));
    }

    #[test]
    fn verdicts_round_trip() {
        let r = Ring::preset("Z/6").unwrap();
        let verdicts = vec![
            Verdict::exchange(&r),
            Verdict {
                ring: "X".into(),
                property: Property::Separative,
                bound: Some(2),
                holds: false,
                exhaustive: false,
                witness: Some("A = [1]; B = [3]".into()),
                checked: 7,
            },
        ];
        let text = write_verdicts(&verdicts);
        assert_eq!(parse_verdicts(&text).unwrap(), verdicts);
    }
}
