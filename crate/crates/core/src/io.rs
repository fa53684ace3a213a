//! Text formats.
//!
//! * Edge list: first line `n m`, then `m` lines `u v` (0-indexed, `u < v`),
//!   LF line endings.
//! * Partition sidecar: one line `vertex part_name` per vertex.
//! * Copy maps: one labeled copy per line, the images of pattern vertices
//!   `0..h` separated by single spaces.

use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};
use crate::partition::VertexPartition;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse::<usize>()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    writeln!(w, "{} {}", g.n(), g.m())?;
    for e in g.edges() {
        writeln!(w, "{} {}", e.u, e.v)?;
    }
    Ok(())
}

pub fn edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("edge lists are ASCII")
}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
    let mut lines = r.lines().enumerate();
    let (n, m) = loop {
        let Some((i, line)) = lines.next() else {
            return Err(parse_err(1, "empty input"));
        };
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let n = parse_usize(it.next(), i + 1, "vertex count")?;
        let m = parse_usize(it.next(), i + 1, "edge count")?;
        if it.next().is_some() {
            return Err(parse_err(i + 1, "trailing tokens in header"));
        }
        break (n, m);
    };
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices {
            n,
            cap: MAX_VERTICES,
        });
    }
    let mut edges = Vec::with_capacity(m);
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let u = parse_usize(it.next(), i + 1, "endpoint")?;
        let v = parse_usize(it.next(), i + 1, "endpoint")?;
        if it.next().is_some() {
            return Err(parse_err(i + 1, "trailing tokens"));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("header declares {m} edges but {} were listed", edges.len()),
        ));
    }
    Graph::from_edges(n, &edges)
}

pub fn parse_edge_list(s: &str) -> Result<Graph> {
    read_edge_list(s.as_bytes())
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let f = fs::File::open(path)?;
    read_edge_list(std::io::BufReader::new(f))
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, edge_list_string(g))?;
    Ok(())
}

pub fn write_partition<W: Write>(p: &VertexPartition, mut w: W) -> Result<()> {
    for v in 0..p.n() {
        writeln!(w, "{} {}", v, p.name(p.part_of(v)))?;
    }
    Ok(())
}

pub fn partition_string(p: &VertexPartition) -> String {
    let mut buf = Vec::new();
    write_partition(p, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("partition names are UTF-8")
}

/// Reads a sidecar. Part ids follow first appearance; the allowed-pair
/// relation is not part of the format, so none is declared.
pub fn read_partition<R: BufRead>(r: R, n: usize) -> Result<VertexPartition> {
    let mut part_of = vec![usize::MAX; n];
    let mut names: Vec<String> = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let v = parse_usize(it.next(), i + 1, "vertex")?;
        let name = it
            .next()
            .ok_or_else(|| parse_err(i + 1, "missing part name"))?;
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if part_of[v] != usize::MAX {
            return Err(parse_err(i + 1, format!("vertex {v} listed twice")));
        }
        let p = match names.iter().position(|x| x == name) {
            Some(p) => p,
            None => {
                names.push(name.to_string());
                names.len() - 1
            }
        };
        part_of[v] = p;
    }
    if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
        return Err(parse_err(0, format!("vertex {v} missing from sidecar")));
    }
    VertexPartition::new(part_of, names)
}

pub fn load_partition(path: impl AsRef<Path>, n: usize) -> Result<VertexPartition> {
    let f = fs::File::open(path)?;
    read_partition(std::io::BufReader::new(f), n)
}

pub fn write_maps<W: Write>(maps: &[Vec<usize>], mut w: W) -> Result<()> {
    for map in maps {
        let line: Vec<String> = map.iter().map(usize::to_string).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn maps_string(maps: &[Vec<usize>]) -> String {
    let mut buf = Vec::new();
    write_maps(maps, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("maps are ASCII")
}

pub fn read_maps<R: BufRead>(r: R) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let map = line
            .split_whitespace()
            .map(|t| parse_usize(Some(t), i + 1, "vertex"))
            .collect::<Result<Vec<_>>>()?;
        out.push(map);
    }
    Ok(out)
}

pub fn load_maps(path: impl AsRef<Path>) -> Result<Vec<Vec<usize>>> {
    let f = fs::File::open(path)?;
    read_maps(std::io::BufReader::new(f))
}
