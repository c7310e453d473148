use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::{ensure, Error, Result};

/// A persistence interval `[birth, death)` in homological dimension `dim`.
/// `death` is `f64::INFINITY` for essential classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

impl Bar {
    pub fn new(dim: usize, birth: f64, death: f64) -> Self {
        Self { dim, birth, death }
    }

    pub fn is_finite(&self) -> bool {
        self.death.is_finite()
    }

    pub fn length(&self) -> f64 {
        self.death - self.birth
    }
}

/// Multiset of bars in canonical `(dim, birth, death)` order.
///
/// `zero_length` keeps the pairs with `birth == death` that were removed
/// from `bars`; they carry no homology and exist for debugging only.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Barcode {
    pub bars: Vec<Bar>,
    #[serde(default)]
    pub zero_length: Vec<Bar>,
}

fn bar_cmp(a: &Bar, b: &Bar) -> std::cmp::Ordering {
    a.dim
        .cmp(&b.dim)
        .then(a.birth.total_cmp(&b.birth))
        .then(a.death.total_cmp(&b.death))
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>) -> Self {
        bars.sort_by(bar_cmp);
        Self { bars, zero_length: Vec::new() }
    }

    pub fn bars_in_dim(&self, dim: usize) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(move |b| b.dim == dim)
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.bars.iter().map(|b| b.dim).max()
    }

    /// Sum of finite bar lengths in dimension `dim`.
    pub fn total_persistence(&self, dim: usize) -> f64 {
        self.bars_in_dim(dim).filter(|b| b.is_finite()).map(Bar::length).sum()
    }

    /// Writes `dim,birth,death` rows (header included); infinite deaths are `inf`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "dim,birth,death")?;
        for b in &self.bars {
            let death = if b.death.is_finite() { format!("{}", b.death) } else { "inf".into() };
            writeln!(out, "{},{},{}", b.dim, b.birth, death)?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let mut bars = Vec::new();
        for record in rdr.records() {
            let record = record?;
            ensure!(record.len() == 3, Parse, "barcode rows need 3 fields, got {}", record.len());
            let parse = |s: &str| -> Result<f64> {
                match s {
                    "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
                    _ => s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number `{s}`"))),
                }
            };
            let dim = record[0]
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad dimension `{}`", &record[0])))?;
            bars.push(Bar::new(dim, parse(&record[1])?, parse(&record[2])?));
        }
        Ok(Self::new(bars))
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::read_csv(std::io::BufReader::new(std::fs::File::open(path.as_ref())?))
    }
}

/// Right-continuous step function `r ↦ β(r)`; zero before the first breakpoint.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BettiCurve {
    /// `(value, betti)`: the curve equals `betti` on `[value, next value)`.
    pub breakpoints: Vec<(f64, usize)>,
}

impl BettiCurve {
    pub fn eval(&self, r: f64) -> usize {
        match self.breakpoints.partition_point(|&(v, _)| v <= r) {
            0 => 0,
            i => self.breakpoints[i - 1].1,
        }
    }
}

/// Betti curve of dimension `dim`: the number of bars `[b, d)` with `b ≤ r < d`.
pub fn betti_curve(barcode: &Barcode, dim: usize) -> BettiCurve {
    let bars: Vec<&Bar> = barcode.bars_in_dim(dim).filter(|b| b.death > b.birth).collect();
    let mut values: Vec<f64> = bars
        .iter()
        .flat_map(|b| [b.birth, b.death])
        .filter(|v| v.is_finite())
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let mut breakpoints: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for v in values {
        let betti = bars.iter().filter(|b| b.birth <= v && v < b.death).count();
        if breakpoints.last().is_none_or(|&(_, prev)| prev != betti) {
            breakpoints.push((v, betti));
        }
    }
    // Drop a leading zero step; the curve is zero before its first breakpoint anyway.
    if breakpoints.first().is_some_and(|&(_, b)| b == 0) {
        breakpoints.remove(0);
    }
    BettiCurve { breakpoints }
}
