//! Versioned text format for binned grids. Every real is written as a hex
//! float literal, so a round trip reproduces each bit.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::extprec::ExtReal;

use super::grid::BinnedGrid;
use super::layout::BinLayout;

const MAGIC: &str = "barycheb-binned-grid";
pub const FORMAT_VERSION: u32 = 1;

const MANT_BITS: u32 = 52;
const MANT_MASK: u64 = (1 << MANT_BITS) - 1;

/// `x` as `[-]0x1.<13 hex digits>p<exp>` (or `0x0.` for subnormals).
pub fn to_hex_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let biased = ((bits >> MANT_BITS) & 0x7ff) as i32;
    let mant = bits & MANT_MASK;
    match (biased, mant) {
        (0, 0) => format!("{sign}0x0p+0"),
        (0, m) => format!("{sign}0x0.{m:013x}p-1022"),
        (e, m) => format!("{sign}0x1.{m:013x}p{:+}", e - 1023),
    }
}

/// Parses the literals produced by [`to_hex_float`]; fewer than 13 fraction
/// digits are allowed.
pub fn parse_hex_float(s: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("malformed hex float '{s}'"));
    match s {
        "nan" => return Ok(f64::NAN),
        "inf" => return Ok(f64::INFINITY),
        "-inf" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    let (neg, rest) = match s.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let rest = rest.strip_prefix("0x").ok_or_else(bad)?;
    let (mantissa, exp) = rest.split_once('p').ok_or_else(bad)?;
    let exp: i32 = exp.parse().map_err(|_| bad())?;
    let (lead, frac) = match mantissa.split_once('.') {
        Some((l, f)) => (l, f),
        None => (mantissa, ""),
    };
    if frac.len() > 13 || !frac.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(bad());
    }
    let frac_bits = if frac.is_empty() {
        0
    } else {
        u64::from_str_radix(frac, 16).map_err(|_| bad())? << (4 * (13 - frac.len()))
    };
    let bits = match lead {
        "1" => {
            let biased = exp + 1023;
            if !(1..=2046).contains(&biased) {
                return Err(bad());
            }
            ((biased as u64) << MANT_BITS) | frac_bits
        }
        "0" if frac_bits == 0 => 0,
        "0" if exp == -1022 => frac_bits,
        _ => return Err(bad()),
    };
    let v = f64::from_bits(bits);
    Ok(if neg { -v } else { v })
}

/// Serializes a binned grid (layout, bins, offsets, exact offsets).
pub fn write_binned_grid(grid: &BinnedGrid) -> String {
    let layout = grid.layout();
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} {FORMAT_VERSION}");
    let _ = writeln!(out, "bins {} center {}", layout.len(), layout.center());
    for l in 0..layout.len() {
        let (lo, hi) = layout.bounds(l);
        let _ = writeln!(
            out,
            "bin {l} {} {} {}",
            to_hex_float(lo),
            to_hex_float(hi),
            to_hex_float(layout.base(l))
        );
    }
    let _ = writeln!(out, "nodes {}", grid.len());
    for k in 0..grid.len() {
        let _ = write!(
            out,
            "{k} {} {}",
            grid.bin_of()[k],
            to_hex_float(grid.offsets()[k])
        );
        if let Some(e) = grid.offsets_ext() {
            let _ = write!(
                out,
                " {} {}",
                to_hex_float(e[k].hi()),
                to_hex_float(e[k].lo())
            );
        }
        out.push('\n');
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_fields(&mut self) -> Result<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Ok((i + 1, line.split_whitespace().collect()));
        }
        Err(Error::Parse("unexpected end of input".into()))
    }
}

fn field<T: std::str::FromStr>(fields: &[&str], i: usize, line: usize) -> Result<T> {
    fields
        .get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse(format!("line {line}: bad or missing field {i}")))
}

fn hex_field(fields: &[&str], i: usize, line: usize) -> Result<f64> {
    let s = fields
        .get(i)
        .ok_or_else(|| Error::Parse(format!("line {line}: missing field {i}")))?;
    parse_hex_float(s).map_err(|e| Error::Parse(format!("line {line}: {e}")))
}

/// Parses the output of [`write_binned_grid`]; the result is validated like
/// any freshly built grid.
pub fn read_binned_grid(text: &str) -> Result<BinnedGrid> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (ln, header) = lines.next_fields()?;
    if header.first() != Some(&MAGIC) {
        return Err(Error::Parse(format!("line {ln}: not a binned grid file")));
    }
    let version: u32 = field(&header, 1, ln)?;
    if version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported format version {version}"
        )));
    }

    let (ln, f) = lines.next_fields()?;
    if f.first() != Some(&"bins") || f.get(2) != Some(&"center") {
        return Err(Error::Parse(format!(
            "line {ln}: expected 'bins <count> center <index>'"
        )));
    }
    let nbins: usize = field(&f, 1, ln)?;
    let center: usize = field(&f, 3, ln)?;
    let mut boundaries = Vec::with_capacity(nbins + 1);
    let mut bases = Vec::with_capacity(nbins);
    for l in 0..nbins {
        let (ln, f) = lines.next_fields()?;
        if f.first() != Some(&"bin") || field::<usize>(&f, 1, ln)? != l {
            return Err(Error::Parse(format!("line {ln}: expected 'bin {l} ...'")));
        }
        let (lo, hi, b) = (
            hex_field(&f, 2, ln)?,
            hex_field(&f, 3, ln)?,
            hex_field(&f, 4, ln)?,
        );
        if let Some(&prev) = boundaries.last() {
            if prev != lo {
                return Err(Error::Parse(format!("line {ln}: bins are not contiguous")));
            }
        } else {
            boundaries.push(lo);
        }
        boundaries.push(hi);
        bases.push(b);
    }
    let layout = BinLayout::checked(boundaries, bases, center)?;

    let (ln, f) = lines.next_fields()?;
    if f.first() != Some(&"nodes") {
        return Err(Error::Parse(format!("line {ln}: expected 'nodes <count>'")));
    }
    let count: usize = field(&f, 1, ln)?;
    let mut bin_of = Vec::with_capacity(count);
    let mut u = Vec::with_capacity(count);
    let mut u_ext = Vec::with_capacity(count);
    let mut has_ext = None;
    for k in 0..count {
        let (ln, f) = lines.next_fields()?;
        if field::<usize>(&f, 0, ln)? != k {
            return Err(Error::Parse(format!("line {ln}: expected node {k}")));
        }
        bin_of.push(field(&f, 1, ln)?);
        u.push(hex_field(&f, 2, ln)?);
        let ext = f.len() == 5;
        if *has_ext.get_or_insert(ext) != ext {
            return Err(Error::Parse(format!(
                "line {ln}: inconsistent exact offsets"
            )));
        }
        if ext {
            u_ext.push(ExtReal::new(hex_field(&f, 3, ln)?, hex_field(&f, 4, ln)?));
        }
    }
    if let Ok((ln, _)) = lines.next_fields() {
        return Err(Error::Parse(format!("line {ln}: trailing content")));
    }
    let u_ext = (has_ext == Some(true)).then_some(u_ext);
    BinnedGrid::from_parts(layout, bin_of, u, u_ext)
}
