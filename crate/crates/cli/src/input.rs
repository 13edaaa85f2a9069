//! Reading matrices, diagrams and networks from files or inline text.

use std::path::Path;

use anyhow::{Context, Result};
use cauchon::diagram::is_cauchon;
use cauchon::network::{postnikov_network, PlanarNetwork};
use cauchon::{CauchonDiagram, RatMatrix};
use serde::Deserialize;

/// The contents of `arg` if it names a file, otherwise `arg` itself.
pub fn text_of(arg: &str) -> Result<String> {
    if arg == "-" {
        return std::io::read_to_string(std::io::stdin()).context("reading stdin");
    }
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))
    } else {
        Ok(arg.to_string())
    }
}

/// A matrix from a CSV or JSON file, or inline CSV with `;` between rows.
pub fn matrix(arg: &str) -> Result<RatMatrix> {
    let text = text_of(arg)?;
    let text = if text.trim_start().starts_with('{') { text } else { text.replace(';', "\n") };
    Ok(RatMatrix::parse(&text)?)
}

pub fn diagram(arg: &str) -> Result<CauchonDiagram> {
    Ok(CauchonDiagram::parse(&text_of(arg)?)?)
}

#[derive(Deserialize)]
struct RawDiagram {
    m: usize,
    p: usize,
    black: Vec<(usize, usize)>,
}

/// A black/white grid that need not satisfy the Cauchon condition.
pub struct Grid {
    pub m: usize,
    pub p: usize,
    pub black: Vec<(usize, usize)>,
}

impl Grid {
    pub fn parse(arg: &str) -> Result<Grid> {
        let text = text_of(arg)?;
        let t = text.trim();
        if t.starts_with('{') {
            let raw: RawDiagram = serde_json::from_str(t).map_err(|e| cauchon::Error::Parse(format!("diagram JSON: {e}")))?;
            return Ok(Grid { m: raw.m, p: raw.p, black: raw.black });
        }
        let rows: Vec<&str> = t.split(['\n', '/']).map(str::trim).filter(|l| !l.is_empty()).collect();
        let p = rows.first().map_or(0, |r| r.chars().count());
        let mut black = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if row.chars().count() != p {
                return Err(cauchon::Error::Parse("diagram rows have different lengths".into()).into());
            }
            for (a, ch) in row.chars().enumerate() {
                match ch {
                    '#' | '0' => black.push((i + 1, a + 1)),
                    '.' | '1' => {}
                    _ => return Err(cauchon::Error::Parse(format!("unexpected diagram character `{ch}`")).into()),
                }
            }
        }
        Ok(Grid { m: rows.len(), p, black })
    }

    pub fn is_cauchon(&self) -> Result<bool> {
        Ok(is_cauchon(self.m, self.p, &self.black)?)
    }

    /// Black cells with neither an all-black row prefix nor an all-black
    /// column above.
    pub fn offending_cells(&self) -> Vec<(usize, usize)> {
        let is_black = |i: usize, a: usize| self.black.contains(&(i, a));
        let mut out: Vec<(usize, usize)> = self
            .black
            .iter()
            .copied()
            .filter(|&(i, a)| !(1..a).all(|b| is_black(i, b)) && !(1..i).all(|j| is_black(j, a)))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// A network from a JSON file, or the network of a diagram.
pub fn network(file: Option<&str>, diagram_arg: Option<&str>) -> Result<PlanarNetwork> {
    match (file, diagram_arg) {
        (Some(f), None) => Ok(PlanarNetwork::from_json(&text_of(f)?)?),
        (None, Some(d)) => Ok(postnikov_network(&diagram(d)?)),
        _ => Err(cauchon::Error::Domain("give exactly one of --network and --diagram".into()).into()),
    }
}
