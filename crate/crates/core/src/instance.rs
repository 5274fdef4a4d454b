//! Line-oriented instance files.
//!
//! ```text
//! kcolor-instance 1
//! k 2
//! n 4
//! seed 42
//! point 0 0
//! point 4 0
//! point 4 4
//! point 0 4
//! colors 1 1 2 1 1 1
//! matching 1 2 3 0
//! details 1:L:R 1:S:L 2:R:R 1:L:L
//! ```
//!
//! `colors` lists the `C(n,2)` pairs in lexicographic order. `seed`,
//! `matching` and `details` are optional; `details` requires `matching`.
//! Blank lines and text after `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::coloring::EdgeColoring;
use crate::doubling::{Details, FirstTarget, Matching, SecondTarget};
use crate::error::{Error, Result};
use crate::geom::{num_pairs, Point, PointSet};

pub const HEADER: &str = "kcolor-instance";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub k: u32,
    pub points: Vec<Point>,
    pub colors: Vec<u32>,
    pub matching: Option<Vec<usize>>,
    pub details: Option<Vec<Details>>,
    pub seed: Option<u64>,
}

/// An instance whose parts satisfy all structural invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub points: PointSet,
    pub coloring: EdgeColoring,
    pub matching: Option<Matching>,
    pub details: Option<Vec<Details>>,
    pub seed: Option<u64>,
}

impl Instance {
    pub fn n(&self) -> usize {
        self.points.points().len()
    }

    pub fn k(&self) -> u32 {
        self.coloring.k()
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            k: self.k(),
            points: self.points.points().to_vec(),
            colors: self.coloring.colors().to_vec(),
            matching: self.matching.as_ref().map(|m| m.targets().to_vec()),
            details: self.details.clone(),
            seed: self.seed,
        }
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| perr(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_details(tok: &str, line: usize) -> Result<Details> {
    let parts: Vec<&str> = tok.split(':').collect();
    let [c, f, s] = parts.as_slice() else {
        return Err(perr(line, format!("details `{tok}` must look like c:F:S")));
    };
    let sibling_color = parse_num(c, line, "sibling color")?;
    let first = match *f {
        "L" => FirstTarget::Left,
        "R" => FirstTarget::Right,
        "S" => FirstTarget::Sibling,
        _ => return Err(perr(line, format!("first target `{f}` must be L, R or S"))),
    };
    let second = match *s {
        "L" => SecondTarget::Left,
        "R" => SecondTarget::Right,
        _ => return Err(perr(line, format!("second target `{s}` must be L or R"))),
    };
    Ok(Details { sibling_color, first, second })
}

impl InstanceFile {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty instance file"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        match toks.as_slice() {
            [HEADER, v] if parse_num::<u32>(v, hl, "version")? == VERSION => {}
            [HEADER, v] => return Err(perr(hl, format!("unsupported version {v}"))),
            _ => return Err(perr(hl, format!("expected header `{HEADER} {VERSION}`"))),
        }

        let mut k: Option<(usize, u32)> = None;
        let mut n: Option<(usize, usize)> = None;
        let mut seed = None;
        let mut points = Vec::new();
        let mut colors: Option<(usize, Vec<u32>)> = None;
        let mut matching: Option<(usize, Vec<usize>)> = None;
        let mut details: Option<(usize, Vec<Details>)> = None;
        let mut last = hl;
        for (ln, line) in lines {
            last = ln;
            let mut it = line.split_whitespace();
            let key = it.next().unwrap();
            let rest: Vec<&str> = it.collect();
            let single = |what: &str| -> Result<&str> {
                match rest.as_slice() {
                    [v] => Ok(v),
                    _ => Err(perr(ln, format!("`{what}` takes exactly one value"))),
                }
            };
            let dup = |seen: bool| if seen { Err(perr(ln, format!("duplicate `{key}` line"))) } else { Ok(()) };
            match key {
                "k" => {
                    dup(k.is_some())?;
                    let v: u32 = parse_num(single("k")?, ln, "k")?;
                    if v == 0 {
                        return Err(perr(ln, "k must be at least 1"));
                    }
                    k = Some((ln, v));
                }
                "n" => {
                    dup(n.is_some())?;
                    n = Some((ln, parse_num(single("n")?, ln, "n")?));
                }
                "seed" => {
                    dup(seed.is_some())?;
                    seed = Some(parse_num(single("seed")?, ln, "seed")?);
                }
                "point" => {
                    let [x, y] = rest.as_slice() else {
                        return Err(perr(ln, "`point` takes two integer coordinates"));
                    };
                    points.push(Point::new(parse_num(x, ln, "coordinate")?, parse_num(y, ln, "coordinate")?));
                }
                "colors" => {
                    dup(colors.is_some())?;
                    let v = rest.iter().map(|t| parse_num(t, ln, "color")).collect::<Result<_>>()?;
                    colors = Some((ln, v));
                }
                "matching" => {
                    dup(matching.is_some())?;
                    let v = rest.iter().map(|t| parse_num(t, ln, "matching target")).collect::<Result<_>>()?;
                    matching = Some((ln, v));
                }
                "details" => {
                    dup(details.is_some())?;
                    let v = rest.iter().map(|t| parse_details(t, ln)).collect::<Result<_>>()?;
                    details = Some((ln, v));
                }
                _ => return Err(perr(ln, format!("unknown field `{key}`"))),
            }
        }
        let end = last + 1;
        let (_, k) = k.ok_or_else(|| perr(end, "missing `k` line"))?;
        let (nl, n) = n.ok_or_else(|| perr(end, "missing `n` line"))?;
        if points.len() != n {
            return Err(perr(nl, format!("n is {n} but {} points are listed", points.len())));
        }
        let (cl, colors) = colors.ok_or_else(|| perr(end, "missing `colors` line"))?;
        if colors.len() != num_pairs(n) {
            return Err(perr(cl, format!("expected {} colors for n = {n}, got {}", num_pairs(n), colors.len())));
        }
        if let Some(c) = colors.iter().find(|&&c| c == 0 || c > k) {
            return Err(perr(cl, format!("color {c} outside 1..={k}")));
        }
        if let Some((ml, m)) = &matching {
            if m.len() != n {
                return Err(perr(*ml, format!("expected {n} matching targets, got {}", m.len())));
            }
            if let Some(q) = m.iter().find(|&&q| q >= n) {
                return Err(perr(*ml, format!("matching target {q} outside 0..{n}")));
            }
        }
        if let Some((dl, d)) = &details {
            if matching.is_none() {
                return Err(perr(*dl, "`details` requires a `matching` line"));
            }
            if d.len() != n {
                return Err(perr(*dl, format!("expected {n} details, got {}", d.len())));
            }
            if let Some(bad) = d.iter().find(|d| d.sibling_color == 0 || d.sibling_color > k) {
                return Err(perr(*dl, format!("sibling color {} outside 1..={k}", bad.sibling_color)));
            }
        }
        Ok(InstanceFile {
            k,
            points,
            colors,
            matching: matching.map(|(_, m)| m),
            details: details.map(|(_, d)| d),
            seed,
        })
    }

    /// Canonical text form; `parse(serialize(x)) == x`.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{HEADER} {VERSION}");
        let _ = writeln!(s, "k {}", self.k);
        let _ = writeln!(s, "n {}", self.n());
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "seed {seed}");
        }
        for p in &self.points {
            let _ = writeln!(s, "point {} {}", p.x, p.y);
        }
        let join = |v: Vec<String>| v.join(" ");
        let _ = writeln!(s, "colors {}", join(self.colors.iter().map(u32::to_string).collect()));
        if let Some(m) = &self.matching {
            let _ = writeln!(s, "matching {}", join(m.iter().map(usize::to_string).collect()));
        }
        if let Some(d) = &self.details {
            let _ = writeln!(s, "details {}", join(d.iter().map(Details::to_string).collect()));
        }
        s
    }

    pub fn validate(&self) -> Result<Instance> {
        let points = PointSet::new(self.points.clone())?;
        let coloring = EdgeColoring::new(self.n(), self.k, self.colors.clone())?;
        let matching = self.matching.clone().map(Matching::new).transpose()?;
        Ok(Instance { points, coloring, matching, details: self.details.clone(), seed: self.seed })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.serialize().as_bytes())
    }
}

/// Writes to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} is not a file path", path.display())))?
        .to_string_lossy()
        .into_owned();
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    let result = (|| -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(Error::from)
}
