//! Text formats for SDP, LP and game instances.
//!
//! SDP: a header `SDP m n r_p r_d`, a line `b v₁ … v_m`, then blocks `MAT i`
//! (i = 0 for C) of `row col value` triplets, 0-indexed, upper triangle.
//! LP: a header `LP m n r_p r_d`, rows `b …` and `c …`, then m dense rows of
//! A. Games: a CSV payoff matrix. Blank lines and `#` comments are skipped in
//! all formats.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use super::dual::DualCertificate;
use super::lp::LpInstance;
use super::sdp::SdpInstance;
use super::zsg::ZsgInstance;
use crate::error::{Error, Result};

struct Lines<'a> {
    path: String,
    inner: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
}

impl<'a> Lines<'a> {
    fn new(path: &Path, text: &'a str) -> Self {
        let inner = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        Lines {
            path: path.display().to_string(),
            inner: Box::new(inner),
        }
    }

    fn err(&self, line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            msg: msg.into(),
        }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        match self.inner.next() {
            Some((n, l)) => Ok((n, l.split_whitespace().collect())),
            None => Err(self.err(0, format!("unexpected end of file, expected {what}"))),
        }
    }

    fn num<T: std::str::FromStr>(&self, line: usize, tok: &str) -> Result<T> {
        tok.parse().map_err(|_| self.err(line, format!("bad number {tok:?}")))
    }

    fn nums(&self, line: usize, toks: &[&str], want: usize) -> Result<Vec<f64>> {
        if toks.len() != want {
            return Err(self.err(line, format!("expected {want} values, found {}", toks.len())));
        }
        toks.iter().map(|t| self.num(line, t)).collect()
    }

    fn header(&mut self, tag: &str) -> Result<(usize, usize, usize, f64, f64)> {
        let (n, toks) = self.next_line("header")?;
        if toks.len() != 5 || toks[0] != tag {
            return Err(self.err(n, format!("expected header `{tag} m n r_p r_d`")));
        }
        Ok((n, self.num(n, toks[1])?, self.num(n, toks[2])?, self.num(n, toks[3])?, self.num(n, toks[4])?))
    }

    /// A row of `want` values, optionally prefixed by `label`.
    fn labeled(&mut self, label: &str, want: usize) -> Result<Vec<f64>> {
        let (n, toks) = self.next_line(label)?;
        let body = if toks.first() == Some(&label) { &toks[1..] } else { &toks[..] };
        self.nums(n, body, want)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn with_context(path: &Path, line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } | Error::Io { .. } => e,
        other => Error::Parse {
            path: path.display().to_string(),
            line,
            msg: other.to_string(),
        },
    }
}

pub fn parse_sdp(path: &Path, text: &str) -> Result<SdpInstance> {
    let mut lines = Lines::new(path, text);
    let (hl, m, n, r_p, r_d) = lines.header("SDP")?;
    let b = lines.labeled("b", m)?;
    let mut mats = vec![DMatrix::<f64>::zeros(n, n); m + 1];
    let mut current: Option<usize> = None;
    while let Some((ln, l)) = lines.inner.next() {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks[0] == "MAT" {
            if toks.len() != 2 {
                return Err(lines.err(ln, "expected `MAT i`"));
            }
            let i: usize = lines.num(ln, toks[1])?;
            if i > m {
                return Err(lines.err(ln, format!("matrix index {i} exceeds m = {m}")));
            }
            current = Some(i);
            continue;
        }
        let i = current.ok_or_else(|| lines.err(ln, "entry before any `MAT` block"))?;
        if toks.len() != 3 {
            return Err(lines.err(ln, "expected `row col value`"));
        }
        let r: usize = lines.num(ln, toks[0])?;
        let c: usize = lines.num(ln, toks[1])?;
        let v: f64 = lines.num(ln, toks[2])?;
        if r >= n || c >= n {
            return Err(lines.err(ln, format!("entry ({r}, {c}) out of range for n = {n}")));
        }
        mats[i][(r, c)] = v;
        mats[i][(c, r)] = v;
    }
    let c = mats.remove(0);
    SdpInstance::new(mats, b, c, r_p, r_d).map_err(|e| with_context(path, hl, e))
}

pub fn format_sdp(inst: &SdpInstance) -> String {
    let mut out = format!("SDP {} {} {} {}\nb", inst.m, inst.n, inst.r_p, inst.r_d);
    for v in &inst.b {
        let _ = write!(out, " {v:e}");
    }
    out.push('\n');
    for (i, mat) in std::iter::once(&inst.c).chain(&inst.a).enumerate() {
        let _ = writeln!(out, "MAT {i}");
        for r in 0..inst.n {
            for c in r..inst.n {
                if mat[(r, c)] != 0.0 {
                    let _ = writeln!(out, "{r} {c} {:e}", mat[(r, c)]);
                }
            }
        }
    }
    out
}

pub fn parse_lp(path: &Path, text: &str) -> Result<LpInstance> {
    let mut lines = Lines::new(path, text);
    let (hl, m, n, r_p, r_d) = lines.header("LP")?;
    let b = lines.labeled("b", m)?;
    let c = lines.labeled("c", n)?;
    let mut a = DMatrix::zeros(m, n);
    for i in 0..m {
        let (ln, toks) = lines.next_line("a row of A")?;
        let row = lines.nums(ln, &toks, n)?;
        for (j, v) in row.into_iter().enumerate() {
            a[(i, j)] = v;
        }
    }
    if let Some((ln, _)) = lines.inner.next() {
        return Err(lines.err(ln, "trailing data after A"));
    }
    LpInstance::new(a, b, c, r_p, r_d).map_err(|e| with_context(path, hl, e))
}

pub fn format_lp(inst: &LpInstance) -> String {
    let row = |v: &mut dyn Iterator<Item = f64>| v.map(|x| format!("{x:e}")).collect::<Vec<_>>().join(" ");
    let mut out = format!("LP {} {} {} {}\n", inst.m, inst.n, inst.r_p, inst.r_d);
    let _ = writeln!(out, "b {}", row(&mut inst.b.iter().copied()));
    let _ = writeln!(out, "c {}", row(&mut inst.c.iter().copied()));
    for i in 0..inst.m {
        let _ = writeln!(out, "{}", row(&mut inst.a.row(i).iter().copied()));
    }
    out
}

pub fn parse_zsg(path: &Path, text: &str) -> Result<ZsgInstance> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let row = rec
            .iter()
            .map(|t| {
                t.parse::<f64>().map_err(|_| Error::Parse {
                    path: path.display().to_string(),
                    line,
                    msg: format!("bad number {t:?}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    ZsgInstance::from_rows(&rows).map_err(|e| with_context(path, 1, e))
}

pub fn format_zsg(inst: &ZsgInstance) -> String {
    let mut out = String::new();
    for i in 0..inst.a.nrows() {
        let row: Vec<String> = inst.a.row(i).iter().map(|v| format!("{v}")).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn load_sdp(path: &Path) -> Result<SdpInstance> {
    parse_sdp(path, &read(path)?)
}

pub fn load_lp(path: &Path) -> Result<LpInstance> {
    parse_lp(path, &read(path)?)
}

pub fn load_zsg(path: &Path) -> Result<ZsgInstance> {
    parse_zsg(path, &read(path)?)
}

pub fn save_sdp(path: &Path, inst: &SdpInstance) -> Result<()> {
    write(path, &format_sdp(inst))
}

pub fn save_lp(path: &Path, inst: &LpInstance) -> Result<()> {
    write(path, &format_lp(inst))
}

pub fn save_zsg(path: &Path, inst: &ZsgInstance) -> Result<()> {
    write(path, &format_zsg(inst))
}

pub fn save_certificate(path: &Path, cert: &DualCertificate) -> Result<()> {
    write(path, &cert.to_text())
}
