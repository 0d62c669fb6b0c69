//! Text formats: field literals, `.ccode` code files, `.iso` system files,
//! and symbol streams (`?` marks an erasure).

use std::sync::Arc;

use crate::channel::{ErasureStream, SymbolStream};
use crate::code::ConvolutionalCode;
use crate::error::{Error, Result};
use crate::galois::Field;
use crate::matrix::ConstMatrix;
use crate::poly::Poly;
use crate::polymat::PolyMatrix;
use crate::sysrep::IsoRep;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Lines with content: comments (`#`) and blank lines stripped.
fn content_lines(text: &str) -> Vec<&str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

/// Parses `field p N [m_0 m_1 ... m_N]` (modulus ascending, optional for
/// N = 1).
pub fn parse_field(line: &str) -> Result<Arc<Field>> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() < 3 || toks[0] != "field" {
        return Err(parse_err(format!("expected `field p N ...`, got `{line}`")));
    }
    let p: u64 = toks[1].parse().map_err(|_| parse_err("bad prime"))?;
    let n: usize = toks[2].parse().map_err(|_| parse_err("bad extension degree"))?;
    if toks.len() == 3 {
        Field::new(p, n)
    } else {
        let modulus: Vec<u64> = toks[3..]
            .iter()
            .map(|t| t.parse().map_err(|_| parse_err("bad modulus coefficient")))
            .collect::<Result<_>>()?;
        if modulus.len() != n + 1 {
            return Err(parse_err("modulus needs N + 1 coefficients"));
        }
        Field::with_modulus(p, n, modulus)
    }
}

pub fn field_line(f: &Field) -> String {
    if f.extension_degree() == 1 {
        format!("field {} 1", f.p())
    } else {
        let mods: Vec<String> = f.modulus().iter().map(u64::to_string).collect();
        format!("field {} {} {}", f.p(), f.extension_degree(), mods.join(" "))
    }
}

/// Polynomial literal: space-separated ascending coefficients as canonical
/// field-element integers.
pub fn parse_poly(f: &Arc<Field>, s: &str) -> Result<Poly> {
    let coeffs: Vec<u64> = s
        .split_whitespace()
        .map(|t| {
            let v: u64 = t.parse().map_err(|_| parse_err(format!("bad coefficient `{t}`")))?;
            if v >= f.q() {
                return Err(parse_err(format!("coefficient {v} outside F_{}", f.q())));
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    if coeffs.is_empty() {
        return Err(parse_err("empty polynomial literal"));
    }
    Ok(Poly::new(f.clone(), coeffs))
}

pub fn poly_literal(p: &Poly) -> String {
    let coeffs = p.coeffs();
    if coeffs.is_empty() {
        "0".into()
    } else {
        coeffs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
    }
}

fn parse_poly_row(f: &Arc<Field>, line: &str, width: usize) -> Result<Vec<Poly>> {
    let row: Vec<Poly> =
        line.split(';').map(|cell| parse_poly(f, cell)).collect::<Result<_>>()?;
    if row.len() != width {
        return Err(parse_err(format!("expected {width} entries, got {}", row.len())));
    }
    Ok(row)
}

/// `.ccode`: field line, `params n k`, `generator` or `paritycheck`, then
/// k (resp. n-k) rows of `;`-separated polynomial literals.
pub fn parse_ccode(text: &str) -> Result<ConvolutionalCode> {
    let lines = content_lines(text);
    if lines.len() < 4 {
        return Err(parse_err("truncated .ccode file"));
    }
    let f = parse_field(lines[0])?;
    let ptoks: Vec<&str> = lines[1].split_whitespace().collect();
    if ptoks.len() != 3 || ptoks[0] != "params" {
        return Err(parse_err("expected `params n k`"));
    }
    let n: usize = ptoks[1].parse().map_err(|_| parse_err("bad n"))?;
    let k: usize = ptoks[2].parse().map_err(|_| parse_err("bad k"))?;
    let (kind, rows_expected) = match lines[2] {
        "generator" => ("generator", k),
        "paritycheck" => ("paritycheck", n - k),
        other => return Err(parse_err(format!("expected generator|paritycheck, got `{other}`"))),
    };
    if lines.len() != 3 + rows_expected {
        return Err(parse_err(format!(
            "expected {rows_expected} matrix rows, got {}",
            lines.len() - 3
        )));
    }
    let rows: Vec<Vec<Poly>> = lines[3..]
        .iter()
        .map(|l| parse_poly_row(&f, l, n))
        .collect::<Result<_>>()?;
    let m = PolyMatrix::from_rows(f, rows)?;
    if kind == "generator" {
        ConvolutionalCode::from_generator(&m)
    } else {
        ConvolutionalCode::from_parity_check(&m)
    }
}

pub fn ccode_text(c: &ConvolutionalCode, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        out.push_str(&format!("# {h}\n"));
    }
    out.push_str(&field_line(&c.field));
    out.push('\n');
    out.push_str(&format!("params {} {}\n", c.n, c.k));
    out.push_str("generator\n");
    for r in 0..c.generator.rows {
        let cells: Vec<String> =
            (0..c.n).map(|j| poly_literal(c.generator.get(r, j))).collect();
        out.push_str(&cells.join(" ; "));
        out.push('\n');
    }
    out
}

fn parse_const_rows(
    f: &Arc<Field>,
    lines: &[&str],
    rows: usize,
    cols: usize,
) -> Result<ConstMatrix> {
    let mut m = ConstMatrix::zeros(f.clone(), rows, cols);
    for r in 0..rows {
        let toks: Vec<&str> = lines[r].split_whitespace().collect();
        if toks.len() != cols {
            return Err(parse_err(format!("expected {cols} entries, got {}", toks.len())));
        }
        for (c, t) in toks.iter().enumerate() {
            let v: u64 = t.parse().map_err(|_| parse_err(format!("bad entry `{t}`")))?;
            if v >= f.q() {
                return Err(parse_err(format!("entry {v} outside F_{}", f.q())));
            }
            m.set(r, c, v);
        }
    }
    Ok(m)
}

/// `.iso`: field line, `dims s k n`, then the A (s x s), B (k x s),
/// C (s x (n-k)), D (k x (n-k)) matrices row-major.
pub fn parse_iso(text: &str) -> Result<IsoRep> {
    let lines = content_lines(text);
    if lines.len() < 2 {
        return Err(parse_err("truncated .iso file"));
    }
    let f = parse_field(lines[0])?;
    let dtoks: Vec<&str> = lines[1].split_whitespace().collect();
    if dtoks.len() != 4 || dtoks[0] != "dims" {
        return Err(parse_err("expected `dims s k n`"));
    }
    let s: usize = dtoks[1].parse().map_err(|_| parse_err("bad s"))?;
    let k: usize = dtoks[2].parse().map_err(|_| parse_err("bad k"))?;
    let n: usize = dtoks[3].parse().map_err(|_| parse_err("bad n"))?;
    if k >= n {
        return Err(parse_err("need k < n"));
    }
    let body = &lines[2..];
    if body.len() != 2 * s + 2 * k {
        return Err(parse_err(format!(
            "expected {} matrix rows, got {}",
            2 * s + 2 * k,
            body.len()
        )));
    }
    let a = parse_const_rows(&f, &body[..s], s, s)?;
    let b = parse_const_rows(&f, &body[s..s + k], k, s)?;
    let c = parse_const_rows(&f, &body[s + k..2 * s + k], s, n - k)?;
    let d = parse_const_rows(&f, &body[2 * s + k..], k, n - k)?;
    IsoRep::new(a, b, c, d)
}

fn const_rows(m: &ConstMatrix, out: &mut String) {
    for r in 0..m.rows {
        let cells: Vec<String> = (0..m.cols).map(|c| m.get(r, c).to_string()).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
}

pub fn iso_text(sigma: &IsoRep, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        out.push_str(&format!("# {h}\n"));
    }
    out.push_str(&field_line(&sigma.field));
    out.push('\n');
    out.push_str(&format!("dims {} {} {}\n", sigma.dim(), sigma.k(), sigma.n()));
    for m in [&sigma.a, &sigma.b, &sigma.c, &sigma.d] {
        const_rows(m, &mut out);
    }
    out
}

/// Stream file: one time step per line, n whitespace-separated tokens,
/// `?` marking an erasure. Erased values are stored as 0 in the carrier
/// stream and listed in the erasure set.
pub fn parse_stream(f: &Arc<Field>, n: usize, text: &str) -> Result<ErasureStream> {
    let mut steps = Vec::new();
    let mut erased = std::collections::BTreeSet::new();
    for (t, line) in content_lines(text).iter().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != n {
            return Err(parse_err(format!(
                "step {t}: expected {n} symbols, got {}",
                toks.len()
            )));
        }
        let mut step = Vec::with_capacity(n);
        for (p, tok) in toks.iter().enumerate() {
            if *tok == "?" {
                erased.insert((t, p));
                step.push(0);
            } else {
                let v: u64 = tok.parse().map_err(|_| parse_err(format!("bad symbol `{tok}`")))?;
                if v >= f.q() {
                    return Err(parse_err(format!("symbol {v} outside F_{}", f.q())));
                }
                step.push(v);
            }
        }
        steps.push(step);
    }
    Ok(ErasureStream { stream: SymbolStream::new(f.clone(), n, steps)?, erased })
}

pub fn stream_text(s: &SymbolStream) -> String {
    let mut out = String::new();
    for step in &s.steps {
        let cells: Vec<String> = step.iter().map(u64::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn erasure_stream_text(e: &ErasureStream) -> String {
    let mut out = String::new();
    for t in 0..e.stream.len() {
        let cells: Vec<String> = (0..e.stream.n)
            .map(|p| match e.received(t, p) {
                Some(v) => v.to_string(),
                None => "?".into(),
            })
            .collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}
