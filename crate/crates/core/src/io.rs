//! Text formats for instances, assignments and 2-AP matrices.
//!
//! Instance files start with `MAP <s> <n> <family> <seed>`. Optional lines
//! follow: `RANGE <lo> <hi>` for a non-default parameter range, then `DATA`
//! and whitespace-separated numbers:
//!
//! - Explicit: the `n^s` weights in lexicographic order (`DATA` optional).
//! - Clique, SquareRoot: one `n x n` matrix per dimension pair `(i, j)`,
//!   `i < j`, in lexicographic order, row-major.
//! - Product: `s` rows of `n` factors.
//! - Geometric: `s` rows of `x1 y1 x2 y2 ...`.
//! - Planted: the planted assignment as `s - 1` permutations.
//! - Random: no data.
//!
//! Generated families without `DATA` are regenerated from the seed, which
//! must then be `s + n + index` with `index >= 1`. Coordinates and
//! permutations are 1-based. Lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::ap2::SquareMatrix;
use crate::assignment::Assignment;
use crate::error::{MapError, Result};
use crate::generate::{default_range, generate, FamilySpec};
use crate::instance::{Combiner, Family, Instance, PairwiseData, WeightModel};

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| MapError::io(path, e))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| MapError::io(path, e))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn number(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| MapError::parse(format!("line {line}: `{tok}` is not a number")))
}

fn integer<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse::<T>()
        .map_err(|_| MapError::parse(format!("line {line}: bad {what} `{tok}`")))
}

/// Serialises an instance in the text format above.
pub fn write_instance(inst: &Instance) -> String {
    let (s, n) = (inst.s(), inst.n());
    let mut out = format!("MAP {s} {n} {} {}\n", inst.family(), inst.seed());
    let row = |out: &mut String, vals: &mut dyn Iterator<Item = String>| {
        let line: Vec<String> = vals.collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    };
    match inst.model() {
        WeightModel::ExplicitTensor { values } => {
            out.push_str("DATA\n");
            for chunk in values.chunks(n) {
                row(&mut out, &mut chunk.iter().map(|v| v.to_string()));
            }
        }
        WeightModel::LazyRandom { a, b } | WeightModel::Planted { a, b, .. } => {
            if (*a, *b) != default_range(inst.family()) {
                let _ = writeln!(out, "RANGE {a} {b}");
            }
            if let Some(p) = inst.planted() {
                out.push_str("DATA\n");
                for j in 1..s {
                    row(&mut out, &mut p.perm(j).into_iter().map(|c| (c + 1).to_string()));
                }
            }
        }
        WeightModel::Decomposable { pairwise, .. } => {
            out.push_str("DATA\n");
            let rows = match pairwise {
                PairwiseData::Matrices(m) => m.iter().flat_map(|x| x.chunks(n)).collect::<Vec<_>>(),
                PairwiseData::Factors(f) => f.iter().map(Vec::as_slice).collect(),
            };
            for r in rows {
                row(&mut out, &mut r.iter().map(|v| v.to_string()));
            }
        }
        WeightModel::GeometricPoints { points } => {
            out.push_str("DATA\n");
            for p in points {
                row(&mut out, &mut p.iter().flat_map(|(x, y)| [x.to_string(), y.to_string()]));
            }
        }
    }
    out
}

/// Parses the instance format above.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = content_lines(text).peekable();
    let (hline, header) = lines
        .next()
        .ok_or_else(|| MapError::parse("empty instance file"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 5 || h[0] != "MAP" {
        return Err(MapError::parse(format!(
            "line {hline}: expected `MAP <s> <n> <family> <seed>`"
        )));
    }
    let s: usize = integer(h[1], hline, "dimension count")?;
    let n: usize = integer(h[2], hline, "size")?;
    let family: Family = h[3].parse()?;
    let seed: u64 = integer(h[4], hline, "seed")?;
    if s < 3 {
        return Err(MapError::parse(format!("line {hline}: s must be >= 3, got {s}")));
    }
    if n < 1 {
        return Err(MapError::parse(format!("line {hline}: n must be >= 1")));
    }

    let mut range = default_range(family);
    let mut has_data = false;
    if let Some(&(l, line)) = lines.peek() {
        if let Some(rest) = line.strip_prefix("RANGE") {
            let t: Vec<&str> = rest.split_whitespace().collect();
            if t.len() != 2 {
                return Err(MapError::parse(format!("line {l}: expected `RANGE <lo> <hi>`")));
            }
            range = (integer(t[0], l, "range")?, integer(t[1], l, "range")?);
            lines.next();
        }
    }
    if let Some(&(_, "DATA")) = lines.peek() {
        has_data = true;
        lines.next();
    }
    let mut data = Vec::new();
    for (l, line) in lines {
        for tok in line.split_whitespace() {
            data.push((number(tok, l)?, l));
        }
    }
    let values: Vec<f64> = data.iter().map(|(v, _)| *v).collect();
    let expect = |count: usize| -> Result<()> {
        if values.len() != count {
            return Err(MapError::parse(format!(
                "{family} instance needs {count} data values, found {}",
                values.len()
            )));
        }
        Ok(())
    };

    let regenerate = || -> Result<Instance> {
        let index = seed
            .checked_sub((s + n) as u64)
            .filter(|&i| i >= 1 && i <= u32::MAX as u64)
            .ok_or_else(|| {
                MapError::parse(format!(
                    "{family} instance without DATA needs seed = s + n + index, got {seed}"
                ))
            })?;
        let spec = FamilySpec {
            family,
            s,
            n,
            index: index as u32,
            lo: range.0,
            hi: range.1,
        };
        generate(&spec)
    };

    if family == Family::Random {
        expect(0)?;
        let (a, b) = range;
        return Instance::new(s, n, family, seed, WeightModel::LazyRandom { a, b });
    }
    if family != Family::Explicit && !has_data && values.is_empty() {
        return regenerate();
    }
    let model = match family {
        Family::Explicit => {
            let count = n
                .checked_pow(s as u32)
                .ok_or_else(|| MapError::parse("n^s overflows"))?;
            expect(count)?;
            WeightModel::ExplicitTensor { values }
        }
        Family::Planted => {
            expect((s - 1) * n)?;
            let mut rest = Vec::with_capacity(s - 1);
            for chunk in values.chunks(n) {
                let mut p = Vec::with_capacity(n);
                for &v in chunk {
                    if v.fract() != 0.0 || v < 1.0 || v > n as f64 {
                        return Err(MapError::parse(format!("planted coordinate {v} out of range 1..={n}")));
                    }
                    p.push(v as usize - 1);
                }
                rest.push(p);
            }
            let (a, b) = range;
            WeightModel::Planted {
                a,
                b,
                planted: Assignment::from_tail_perms(n, &rest)?,
            }
        }
        Family::Clique | Family::SquareRoot => {
            let pairs = s * (s - 1) / 2;
            expect(pairs * n * n)?;
            let combiner = if family == Family::Clique {
                Combiner::CliqueSum
            } else {
                Combiner::SquareRootOfSquares
            };
            WeightModel::Decomposable {
                combiner,
                pairwise: PairwiseData::Matrices(values.chunks(n * n).map(<[f64]>::to_vec).collect()),
            }
        }
        Family::Product => {
            expect(s * n)?;
            WeightModel::Decomposable {
                combiner: Combiner::Product,
                pairwise: PairwiseData::Factors(values.chunks(n).map(<[f64]>::to_vec).collect()),
            }
        }
        Family::Geometric => {
            expect(s * n * 2)?;
            let points = values
                .chunks(2 * n)
                .map(|r| r.chunks(2).map(|p| (p[0], p[1])).collect())
                .collect();
            WeightModel::GeometricPoints { points }
        }
        Family::Random => unreachable!("handled above"),
    };
    Instance::new(s, n, family, seed, model)
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read_file(path)?).map_err(|e| match e {
        MapError::Parse(msg) => MapError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// `s - 1` lines, the 1-based permutations of dimensions `2..s`.
pub fn write_assignment(a: &Assignment) -> String {
    let mut out = String::new();
    for j in 1..a.s() {
        let line: Vec<String> = a.perm(j).iter().map(|c| (c + 1).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_assignment(text: &str, s: usize, n: usize) -> Result<Assignment> {
    let mut rest = Vec::with_capacity(s.saturating_sub(1));
    for (l, line) in content_lines(text) {
        let mut p = Vec::with_capacity(n);
        for tok in line.split_whitespace() {
            let c: usize = integer(tok, l, "coordinate")?;
            if c < 1 || c > n {
                return Err(MapError::parse(format!("line {l}: coordinate {c} out of range 1..={n}")));
            }
            p.push(c - 1);
        }
        if p.len() != n {
            return Err(MapError::parse(format!(
                "line {l}: expected {n} coordinates, found {}",
                p.len()
            )));
        }
        rest.push(p);
    }
    if rest.len() + 1 != s {
        return Err(MapError::parse(format!(
            "assignment needs {} permutation lines, found {}",
            s - 1,
            rest.len()
        )));
    }
    Assignment::from_tail_perms(n, &rest)
}

/// A square matrix as whitespace-separated rows.
pub fn parse_matrix(text: &str) -> Result<SquareMatrix> {
    let mut rows = Vec::new();
    for (l, line) in content_lines(text) {
        let row = line
            .split_whitespace()
            .map(|t| number(t, l))
            .collect::<Result<Vec<f64>>>()?;
        rows.push((l, row));
    }
    let n = rows.len();
    if let Some((l, r)) = rows.iter().find(|(_, r)| r.len() != n) {
        return Err(MapError::parse(format!(
            "line {l}: matrix with {n} rows needs {n} entries per row, found {}",
            r.len()
        )));
    }
    SquareMatrix::from_rows(&rows.into_iter().map(|(_, r)| r).collect::<Vec<_>>())
}
