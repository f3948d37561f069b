//! Line-oriented text formats for datasets, witnesses and hypotheses.
//!
//! Floats are written in shortest round-trip scientific notation, so parsing
//! a serialized value always returns the same bits.

use std::fmt::Write as _;

use super::{Dataset, Halfspace, Hypothesis, Label, Layout, Mode, Row, Witness};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, UnitVector};

pub const DATASET_MAGIC: &str = "BIMODAL-HS v1";
pub const WITNESS_MAGIC: &str = "WITNESS v1";
pub const HYPOTHESIS_MAGIC: &str = "HYPOTHESIS v1";

fn push_floats(out: &mut String, vals: &[f64]) {
    for (i, v) in vals.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v:e}");
    }
}

pub fn serialize_dataset(d: &Dataset) -> String {
    let mut out = String::new();
    out.push_str(DATASET_MAGIC);
    out.push('\n');
    let _ = writeln!(
        out,
        "mode={} n={} ambient={} m={} seed={}",
        d.mode,
        d.n_base,
        d.ambient_dim,
        d.m(),
        d.seed
    );
    for r in &d.rows {
        push_floats(&mut out, &r.x);
        out.push_str(" | ");
        push_floats(&mut out, &r.y);
        let _ = writeln!(out, " | {}", r.z);
    }
    out
}

pub fn serialize_witness(w: &Witness) -> String {
    let mut out = String::new();
    out.push_str(WITNESS_MAGIC);
    out.push('\n');
    let _ = writeln!(out, "mode={} n={} k={}", w.mode, w.n_base, w.directions.len());
    write_halfspaces(&mut out, w.directions.iter().zip(&w.thresholds));
    out.push_str("Q:\n");
    for i in 0..w.q.rows() {
        push_floats(&mut out, w.q.row(i));
        out.push('\n');
    }
    out
}

pub fn serialize_hypothesis(h: &Hypothesis) -> String {
    let mut out = String::new();
    out.push_str(HYPOTHESIS_MAGIC);
    out.push('\n');
    let _ = writeln!(out, "dim={} k={}", h.dim(), h.k());
    write_halfspaces(&mut out, h.halfspaces().iter().map(|hs| (&hs.direction, &hs.threshold)));
    out
}

fn write_halfspaces<'a>(out: &mut String, items: impl Iterator<Item = (&'a UnitVector, &'a f64)>) {
    for (j, (r, c)) in items.enumerate() {
        let _ = write!(out, "r {}: ", j + 1);
        push_floats(out, r);
        out.push('\n');
        let _ = writeln!(out, "c {}: {c:e}", j + 1);
    }
}

/// Cursor over 1-based lines.
struct Lines<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines: Vec<&str> = text.split('\n').collect();
        if lines.last() == Some(&"") {
            lines.pop();
        }
        Self { lines, next: 0 }
    }

    /// Line number (1-based) of the next line to be read.
    fn line_no(&self) -> usize {
        self.next + 1
    }

    fn take(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let no = self.line_no();
        let line = self
            .lines
            .get(self.next)
            .ok_or_else(|| Error::parse(no, format!("unexpected end of file, expected {what}")))?;
        self.next += 1;
        Ok((no, line.strip_suffix('\r').unwrap_or(line)))
    }

    fn finish(&self) -> Result<()> {
        match self.lines.get(self.next) {
            None => Ok(()),
            Some(_) => Err(Error::parse(self.line_no(), "unexpected trailing content")),
        }
    }
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid number '{tok}'")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite number '{tok}'")));
    }
    Ok(v)
}

fn parse_floats(s: &str, expected: usize, line: usize, what: &str) -> Result<Vec<f64>> {
    let vals = s
        .split_whitespace()
        .map(|t| parse_f64(t, line))
        .collect::<Result<Vec<_>>>()?;
    if vals.len() != expected {
        return Err(Error::parse(
            line,
            format!("{what} has {} values, expected {expected}", vals.len()),
        ));
    }
    Ok(vals)
}

/// Parses `key=value` tokens, requiring exactly `keys` in that order.
fn parse_header<'a>(s: &'a str, keys: &[&str], line: usize) -> Result<Vec<&'a str>> {
    let toks: Vec<&str> = s.split(' ').collect();
    if toks.len() != keys.len() {
        return Err(Error::parse(line, format!("header must contain {}", keys.join(", "))));
    }
    toks.iter()
        .zip(keys)
        .map(|(t, k)| {
            t.strip_prefix(k)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| Error::parse(line, format!("expected '{k}=...', found '{t}'")))
        })
        .collect()
}

fn parse_usize(s: &str, line: usize, what: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} '{s}'")))
}

fn parse_mode(s: &str, line: usize) -> Result<Mode> {
    s.parse().map_err(|e: Error| Error::parse(line, e.to_string()))
}

fn expect_magic(lines: &mut Lines<'_>, magic: &str) -> Result<()> {
    let (no, l) = lines.take("format header")?;
    if l != magic {
        return Err(Error::parse(no, format!("expected '{magic}'")));
    }
    Ok(())
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let mut lines = Lines::new(text);
    expect_magic(&mut lines, DATASET_MAGIC)?;
    let (no, header) = lines.take("dataset header")?;
    let v = parse_header(header, &["mode", "n", "ambient", "m", "seed"], no)?;
    let mode = parse_mode(v[0], no)?;
    let n_base = parse_usize(v[1], no, "n")?;
    let ambient_dim = parse_usize(v[2], no, "ambient dimension")?;
    let m = parse_usize(v[3], no, "row count")?;
    let seed: u64 = v[4]
        .parse()
        .map_err(|_| Error::parse(no, format!("invalid seed '{}'", v[4])))?;
    let layout = Layout::new(mode, n_base).map_err(|e| Error::parse(no, e.to_string()))?;
    if layout.ambient != ambient_dim {
        return Err(Error::parse(
            no,
            format!(
                "{mode} mode with n = {n_base} has ambient {}, header says {ambient_dim}",
                layout.ambient
            ),
        ));
    }

    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let (no, line) = lines.take("data row")?;
        let parts: Vec<&str> = line.split('|').collect();
        if parts.len() != 3 {
            return Err(Error::parse(no, "row must have the form 'x | y | z'"));
        }
        let x = parse_floats(parts[0], ambient_dim, no, "x")?;
        let y = parse_floats(parts[1], ambient_dim, no, "y")?;
        let z = match parts[2].trim() {
            "+1" => Label::Pos,
            "-1" => Label::Neg,
            other => return Err(Error::parse(no, format!("label must be +1 or -1, found '{other}'"))),
        };
        rows.push(Row { x, y, z });
    }
    lines.finish()?;
    Ok(Dataset {
        mode,
        n_base,
        ambient_dim,
        seed,
        rows,
    })
}

fn parse_halfspaces(lines: &mut Lines<'_>, k: usize, dim: usize) -> Result<Vec<(UnitVector, f64)>> {
    (1..=k)
        .map(|j| {
            let (no, l) = lines.take("direction line")?;
            let prefix = format!("r {j}:");
            let rest = l
                .strip_prefix(&prefix)
                .ok_or_else(|| Error::parse(no, format!("expected '{prefix}'")))?;
            let r = parse_floats(rest, dim, no, "direction")?;
            let r = UnitVector::new(r).map_err(|e| Error::parse(no, e.to_string()))?;
            let (no, l) = lines.take("threshold line")?;
            let prefix = format!("c {j}:");
            let rest = l
                .strip_prefix(&prefix)
                .ok_or_else(|| Error::parse(no, format!("expected '{prefix}'")))?;
            let c = parse_floats(rest, 1, no, "threshold")?[0];
            Ok((r, c))
        })
        .collect()
}

pub fn parse_witness(text: &str) -> Result<Witness> {
    let mut lines = Lines::new(text);
    expect_magic(&mut lines, WITNESS_MAGIC)?;
    let (no, header) = lines.take("witness header")?;
    let v = parse_header(header, &["mode", "n", "k"], no)?;
    let mode = parse_mode(v[0], no)?;
    let n_base = parse_usize(v[1], no, "n")?;
    let k = parse_usize(v[2], no, "k")?;
    let layout = Layout::new(mode, n_base).map_err(|e| Error::parse(no, e.to_string()))?;
    if k != layout.k {
        return Err(Error::parse(no, format!("k must be {} for this mode and n", layout.k)));
    }
    let (directions, thresholds) = parse_halfspaces(&mut lines, k, layout.label_dim)?.into_iter().unzip();
    let (no, l) = lines.take("'Q:'")?;
    if l != "Q:" {
        return Err(Error::parse(no, "expected 'Q:'"));
    }
    let d = layout.ambient;
    let mut data = Vec::with_capacity(d * d);
    for _ in 0..d {
        let (no, l) = lines.take("matrix row")?;
        data.extend(parse_floats(l, d, no, "matrix row")?);
    }
    lines.finish()?;
    let q = Matrix::from_row_major(d, d, data).map_err(|e| Error::parse(lines.line_no(), e.to_string()))?;
    Ok(Witness {
        mode,
        n_base,
        directions,
        thresholds,
        q,
    })
}

pub fn parse_hypothesis(text: &str) -> Result<Hypothesis> {
    let mut lines = Lines::new(text);
    expect_magic(&mut lines, HYPOTHESIS_MAGIC)?;
    let (no, header) = lines.take("hypothesis header")?;
    let v = parse_header(header, &["dim", "k"], no)?;
    let dim = parse_usize(v[0], no, "dim")?;
    let k = parse_usize(v[1], no, "k")?;
    if dim == 0 || k == 0 {
        return Err(Error::parse(no, "dim and k must be positive"));
    }
    let hs = parse_halfspaces(&mut lines, k, dim)?;
    lines.finish()?;
    Hypothesis::new(hs.into_iter().map(|(r, c)| Halfspace::new(r, c)).collect())
        .map_err(|e| Error::parse(2, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate, InstanceParams};
    use proptest::prelude::*;

    fn sample(mode: Mode, n: usize, m: usize, seed: u64) -> (Dataset, Witness) {
        generate(&InstanceParams::planted(mode, n, 0.4, seed).unwrap(), m).unwrap()
    }

    #[test]
    fn empty_dataset_round_trips() {
        let d = Dataset {
            mode: Mode::Proper,
            n_base: 1,
            ambient_dim: 3,
            seed: 0,
            rows: vec![],
        };
        let text = serialize_dataset(&d);
        assert_eq!(text, "BIMODAL-HS v1\nmode=proper n=1 ambient=3 m=0 seed=0\n");
        assert_eq!(parse_dataset(&text).unwrap(), d);
    }

    #[test]
    fn golden_header_and_row_shape() {
        let (d, _) = sample(Mode::Proper, 2, 3, 9);
        let text = serialize_dataset(&d);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "BIMODAL-HS v1");
        assert_eq!(lines[1], "mode=proper n=2 ambient=6 m=3 seed=9");
        assert_eq!(lines.len(), 5);
        for l in &lines[2..] {
            let parts: Vec<&str> = l.split(" | ").collect();
            assert_eq!(parts.len(), 3);
            assert_eq!(parts[0].split(' ').count(), 6);
            assert_eq!(parts[1].split(' ').count(), 6);
            assert!(parts[2] == "+1" || parts[2] == "-1");
        }
        assert!(text.ends_with('\n'));
        assert_eq!(parse_dataset(&text).unwrap(), d);
    }

    #[test]
    fn missing_row_names_line() {
        let (d, _) = sample(Mode::Proper, 1, 5, 2);
        let text = serialize_dataset(&d);
        let truncated: String = text.lines().take(6).map(|l| format!("{l}\n")).collect();
        match parse_dataset(&truncated) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        let (d, _) = sample(Mode::Proper, 1, 2, 2);
        let text = serialize_dataset(&d);
        let bad_magic = text.replacen("BIMODAL-HS v1", "BIMODAL v1", 1);
        assert!(matches!(parse_dataset(&bad_magic), Err(Error::Parse { line: 1, .. })));
        let bad_ambient = text.replacen("ambient=3", "ambient=4", 1);
        assert!(matches!(parse_dataset(&bad_ambient), Err(Error::Parse { line: 2, .. })));
        let mut rows: Vec<String> = text.lines().map(String::from).collect();
        rows[2] = rows[2].replacen(' ', " NaN ", 1);
        let nan = rows.join("\n");
        assert!(matches!(parse_dataset(&nan), Err(Error::Parse { line: 3, .. })));
        let extra = format!("{text}junk\n");
        assert!(matches!(parse_dataset(&extra), Err(Error::Parse { line: 5, .. })));
        let bad_label = text.replace("| +1", "| +2").replace("| -1", "| +2");
        assert!(matches!(parse_dataset(&bad_label), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn witness_round_trip_and_layout() {
        let (_, w) = sample(Mode::Improper, 9, 10, 4);
        let text = serialize_witness(&w);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "WITNESS v1");
        assert_eq!(lines[1], "mode=improper n=9 k=2");
        assert!(lines[2].starts_with("r 1: "));
        assert!(lines[3].starts_with("c 1: "));
        assert_eq!(lines[6], "Q:");
        assert_eq!(lines.len(), 7 + 9);
        assert_eq!(parse_witness(&text).unwrap(), w);
        let short: String = text.lines().take(10).map(|l| format!("{l}\n")).collect();
        assert!(matches!(parse_witness(&short), Err(Error::Parse { line: 11, .. })));
    }

    #[test]
    fn hypothesis_round_trip() {
        let (_, w) = sample(Mode::Proper, 3, 10, 4);
        let h = w.planted_hypothesis().unwrap();
        let text = serialize_hypothesis(&h);
        assert!(text.starts_with("HYPOTHESIS v1\ndim=9 k=2\nr 1: "));
        assert_eq!(parse_hypothesis(&text).unwrap(), h);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn generated_files_round_trip(seed in any::<u64>(), n in 1usize..6, m in 1usize..30, improper in any::<bool>()) {
            let (mode, n) = if improper { (Mode::Improper, (n + 1) * (n + 1)) } else { (Mode::Proper, n) };
            let (d, w) = sample(mode, n, m, seed);
            prop_assert_eq!(parse_dataset(&serialize_dataset(&d)).unwrap(), d);
            prop_assert_eq!(parse_witness(&serialize_witness(&w)).unwrap(), w);
        }

        #[test]
        fn float_format_is_bit_exact(bits in any::<u64>()) {
            let v = f64::from_bits(bits);
            prop_assume!(v.is_finite());
            let s = format!("{v:e}");
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), bits);
        }
    }
}
