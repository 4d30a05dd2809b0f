//! Plain-text form files.
//!
//! ```text
//! latclif-form 1
//! n 2
//! h 1/2
//! coeff poly
//! blade minus=1 plus=1,2
//! mono 2,0 = 3/4
//! mono 0,1 = -1+1/2 i
//! end
//! ```
//!
//! Box coefficients replace the `mono` lines with
//!
//! ```text
//! support 0:4 0:4
//! validity 1:4 0:4
//! periodic false
//! value 1/3
//! ...
//! ```
//!
//! with one `value` line per support point in row-major order (last axis
//! fastest). Axes are one-based. Printing is canonical: blades and
//! monomials ascend, zero coefficients are omitted and scalars are exact.

use std::fmt::Write as _;

use latclif_core::forms::{Blade, Form, PolyForm};
use latclif_core::lattice::{IntBox, LatticeStep, Mesh, MultiIndex};
use latclif_core::scalar::parse_rational;
use latclif_core::{BoxFunction, Coefficient, ExactPolynomial, Scalar};
use thiserror::Error;

pub const MAGIC: &str = "latclif-form";
pub const VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyForm {
    Poly(PolyForm),
    Box(Form<BoxFunction>),
}

impl AnyForm {
    pub fn dim(&self) -> usize {
        match self {
            AnyForm::Poly(f) => f.dim(),
            AnyForm::Box(f) => f.dim(),
        }
    }
}

fn axes(list: &[usize]) -> String {
    list.iter().map(|a| (a + 1).to_string()).collect::<Vec<_>>().join(",")
}

fn header(out: &mut String, n: usize, mesh: &Mesh, kind: &str) {
    writeln!(out, "{MAGIC} {VERSION}").unwrap();
    writeln!(out, "n {n}").unwrap();
    writeln!(out, "h {}", mesh.value()).unwrap();
    writeln!(out, "coeff {kind}").unwrap();
}

fn blade_line(out: &mut String, b: &Blade) {
    writeln!(out, "blade minus={} plus={}", axes(&b.minus_axes()), axes(&b.plus_axes())).unwrap();
}

fn print_box(b: &IntBox) -> String {
    (0..b.dim())
        .map(|a| format!("{}:{}", b.lo[a], b.hi[a]))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn print_poly(f: &PolyForm) -> String {
    let mut out = String::new();
    header(&mut out, f.dim(), f.mesh(), "poly");
    for (b, c) in f.terms() {
        blade_line(&mut out, b);
        for (a, s) in c.terms() {
            let idx: Vec<String> = a.0.iter().map(|e| e.to_string()).collect();
            writeln!(out, "mono {} = {s}", idx.join(",")).unwrap();
        }
        out.push_str("end\n");
    }
    out
}

pub fn print_box_form(f: &Form<BoxFunction>) -> String {
    let mut out = String::new();
    header(&mut out, f.dim(), f.mesh(), "box");
    for (b, c) in f.terms() {
        blade_line(&mut out, b);
        writeln!(out, "support {}", print_box(c.support())).unwrap();
        writeln!(out, "validity {}", print_box(c.validity())).unwrap();
        writeln!(out, "periodic {}", c.is_periodic()).unwrap();
        for v in c.values() {
            writeln!(out, "value {v}").unwrap();
        }
        out.push_str("end\n");
    }
    out
}

pub fn print(f: &AnyForm) -> String {
    match f {
        AnyForm::Poly(p) => print_poly(p),
        AnyForm::Box(b) => print_box_form(b),
    }
}

struct Lines<'a> {
    it: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            it: text.lines().enumerate().peekable(),
            last: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.last,
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Option<&'a str> {
        loop {
            let (i, l) = self.it.next()?;
            self.last = i + 1;
            let l = l.trim();
            if !l.is_empty() && !l.starts_with('#') {
                return Some(l);
            }
        }
    }

    /// Next line, which must start with `key`; returns the rest.
    fn expect(&mut self, key: &str) -> Result<&'a str, ParseError> {
        let l = self.next().ok_or_else(|| self.err(format!("expected `{key}`, found end of file")))?;
        match l.strip_prefix(key) {
            Some(rest) if rest.is_empty() || rest.starts_with(' ') => Ok(rest.trim()),
            _ => Err(self.err(format!("expected `{key}`, found `{l}`"))),
        }
    }
}

fn parse_axes(lines: &Lines, s: &str, n: usize) -> Result<Vec<usize>, ParseError> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let a: usize = t.trim().parse().map_err(|_| lines.err(format!("bad axis `{t}`")))?;
            if a == 0 || a > n {
                return Err(lines.err(format!("axis {a} out of range 1..={n}")));
            }
            Ok(a - 1)
        })
        .collect()
}

fn parse_blade(lines: &Lines, rest: &str, n: usize) -> Result<Blade, ParseError> {
    let mut parts = rest.split_whitespace();
    let minus = parts
        .next()
        .and_then(|p| p.strip_prefix("minus="))
        .ok_or_else(|| lines.err("expected `minus=`"))?;
    let plus = parts
        .next()
        .and_then(|p| p.strip_prefix("plus="))
        .ok_or_else(|| lines.err("expected `plus=`"))?;
    if parts.next().is_some() {
        return Err(lines.err("trailing tokens after blade"));
    }
    let mut factors: Vec<LatticeStep> = parse_axes(lines, minus, n)?.into_iter().map(LatticeStep::minus).collect();
    factors.extend(parse_axes(lines, plus, n)?.into_iter().map(LatticeStep::plus));
    match Blade::from_factors(n, &factors) {
        Some((false, b)) => Ok(b),
        _ => Err(lines.err("blade axes must be distinct and ascending")),
    }
}

fn parse_scalar(lines: &Lines, s: &str) -> Result<Scalar, ParseError> {
    s.parse().map_err(|e| lines.err(format!("bad scalar `{s}`: {e}")))
}

fn parse_box(lines: &Lines, s: &str, n: usize) -> Result<IntBox, ParseError> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for t in s.split_whitespace() {
        let (a, b) = t.split_once(':').ok_or_else(|| lines.err(format!("bad range `{t}`")))?;
        lo.push(a.parse().map_err(|_| lines.err(format!("bad bound `{a}`")))?);
        hi.push(b.parse().map_err(|_| lines.err(format!("bad bound `{b}`")))?);
    }
    if lo.len() != n {
        return Err(lines.err(format!("expected {n} ranges")));
    }
    Ok(IntBox::new(lo, hi))
}

pub fn parse(text: &str) -> Result<AnyForm, ParseError> {
    let mut lines = Lines::new(text);
    let magic = lines.expect(MAGIC)?;
    let version: u32 = magic.parse().map_err(|_| lines.err("missing format version"))?;
    if version != VERSION {
        return Err(lines.err(format!("unsupported format version {version}")));
    }
    let n: usize = lines
        .expect("n")?
        .parse()
        .map_err(|_| lines.err("bad dimension"))?;
    if n == 0 || n > Blade::MAX_DIM {
        return Err(lines.err(format!("dimension {n} out of range")));
    }
    let h = parse_rational(lines.expect("h")?).map_err(|e| lines.err(e.to_string()))?;
    let mesh = Mesh::new(h).ok_or_else(|| lines.err("mesh width must be positive"))?;
    let kind = lines.expect("coeff")?;
    match kind {
        "poly" => {
            let mut form = Form::zero(n, mesh.clone());
            while let Some(l) = lines.next() {
                let rest = l.strip_prefix("blade ").ok_or_else(|| lines.err(format!("expected `blade`, found `{l}`")))?;
                let b = parse_blade(&lines, rest, n)?;
                let mut poly = ExactPolynomial::zero(n, mesh.clone());
                loop {
                    let l = lines.next().ok_or_else(|| lines.err("unterminated term"))?;
                    if l == "end" {
                        break;
                    }
                    let rest = l.strip_prefix("mono ").ok_or_else(|| lines.err(format!("expected `mono`, found `{l}`")))?;
                    let (idx, val) = rest.split_once('=').ok_or_else(|| lines.err("expected `=`"))?;
                    let alpha: Vec<u32> = idx
                        .trim()
                        .split(',')
                        .map(|t| t.trim().parse().map_err(|_| lines.err(format!("bad exponent `{t}`"))))
                        .collect::<Result<_, _>>()?;
                    if alpha.len() != n {
                        return Err(lines.err(format!("expected {n} exponents")));
                    }
                    let m = ExactPolynomial::monomial(n, mesh.clone(), MultiIndex(alpha), parse_scalar(&lines, val.trim())?);
                    poly = poly.add(&m).expect("same carrier");
                }
                form.push(b, poly, false).map_err(|e| lines.err(e.to_string()))?;
            }
            Ok(AnyForm::Poly(form))
        }
        "box" => {
            let mut form = Form::zero(n, mesh.clone());
            while let Some(l) = lines.next() {
                let rest = l.strip_prefix("blade ").ok_or_else(|| lines.err(format!("expected `blade`, found `{l}`")))?;
                let b = parse_blade(&lines, rest, n)?;
                let s = lines.expect("support")?;
                let support = parse_box(&lines, s, n)?;
                let v = lines.expect("validity")?;
                let validity = parse_box(&lines, v, n)?;
                let periodic = match lines.expect("periodic")? {
                    "true" => true,
                    "false" => false,
                    other => return Err(lines.err(format!("bad periodic flag `{other}`"))),
                };
                let mut values = Vec::with_capacity(support.len());
                loop {
                    let l = lines.next().ok_or_else(|| lines.err("unterminated term"))?;
                    if l == "end" {
                        break;
                    }
                    let v = l.strip_prefix("value ").ok_or_else(|| lines.err(format!("expected `value`, found `{l}`")))?;
                    values.push(parse_scalar(&lines, v)?);
                }
                let c = if periodic {
                    let period = support.extent(0) as i64;
                    if support != IntBox::cube(n, 0, period - 1) || validity != support {
                        return Err(lines.err("periodic support must be [0, N-1]^n with full validity"));
                    }
                    BoxFunction::periodic_from_values(n, mesh.clone(), period, values)
                } else {
                    BoxFunction::from_values(n, mesh.clone(), support, values).and_then(|c| {
                        if &validity == c.support() {
                            Some(c)
                        } else {
                            c.with_validity(validity)
                        }
                    })
                }
                .ok_or_else(|| lines.err("value count or validity box does not match the support"))?;
                if c.is_zero() {
                    return Err(lines.err("zero coefficients are not written"));
                }
                form.push(b, c, false).map_err(|e| lines.err(e.to_string()))?;
            }
            Ok(AnyForm::Box(form))
        }
        other => Err(lines.err(format!("unknown coefficient kind `{other}` (expected poly|box)"))),
    }
}

/// `parse ∘ print` reproduces `text` byte for byte.
pub fn round_trip_exact(text: &str) -> Result<bool, ParseError> {
    Ok(print(&parse(text)?) == text)
}
