use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// A labeled partition of the vertex set together with the unordered part
/// pairs (self-pairs included) on which edges are permitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexPartition {
    part_of: Vec<usize>,
    names: Vec<String>,
    allowed: BTreeSet<(usize, usize)>,
}

impl VertexPartition {
    pub fn new(part_of: Vec<usize>, names: Vec<String>) -> Result<Self> {
        if let Some(&p) = part_of.iter().find(|&&p| p >= names.len()) {
            return Err(Error::InvalidInput(format!(
                "part id {p} but only {} part names",
                names.len()
            )));
        }
        Ok(Self {
            part_of,
            names,
            allowed: BTreeSet::new(),
        })
    }

    /// Builds from explicit member lists; every vertex in `0..n` must appear once.
    pub fn from_parts(n: usize, parts: &[(String, Vec<usize>)]) -> Result<Self> {
        let mut part_of = vec![usize::MAX; n];
        for (p, (_, members)) in parts.iter().enumerate() {
            for &v in members {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if part_of[v] != usize::MAX {
                    return Err(Error::InvalidInput(format!("vertex {v} in two parts")));
                }
                part_of[v] = p;
            }
        }
        if let Some(v) = part_of.iter().position(|&p| p == usize::MAX) {
            return Err(Error::InvalidInput(format!("vertex {v} has no part")));
        }
        let names = parts.iter().map(|(name, _)| name.clone()).collect();
        Self::new(part_of, names)
    }

    pub fn allow(&mut self, a: usize, b: usize) {
        self.allowed.insert((a.min(b), a.max(b)));
    }

    pub fn allow_named(&mut self, a: &str, b: &str) -> Result<()> {
        let (pa, pb) = (self.part_index(a)?, self.part_index(b)?);
        self.allow(pa, pb);
        Ok(())
    }

    pub fn allow_all(&mut self) {
        for a in 0..self.names.len() {
            for b in a..self.names.len() {
                self.allow(a, b);
            }
        }
    }

    pub fn is_allowed(&self, a: usize, b: usize) -> bool {
        self.allowed.contains(&(a.min(b), a.max(b)))
    }

    pub fn allowed_pairs(&self) -> impl Iterator<Item = &(usize, usize)> {
        self.allowed.iter()
    }

    pub fn n(&self) -> usize {
        self.part_of.len()
    }

    pub fn num_parts(&self) -> usize {
        self.names.len()
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.part_of
    }

    pub fn name(&self, p: usize) -> &str {
        &self.names[p]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn part_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidInput(format!("no part named {name}")))
    }

    pub fn members(&self, p: usize) -> Vec<usize> {
        (0..self.part_of.len())
            .filter(|&v| self.part_of[v] == p)
            .collect()
    }

    pub fn members_named(&self, name: &str) -> Result<Vec<usize>> {
        Ok(self.members(self.part_index(name)?))
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.names.len()];
        for &p in &self.part_of {
            s[p] += 1;
        }
        s
    }

    /// Edges of `g` joining a disallowed part pair.
    pub fn violations(&self, g: &Graph) -> Vec<Edge> {
        g.edges()
            .into_iter()
            .filter(|e| !self.is_allowed(self.part_of[e.u], self.part_of[e.v]))
            .collect()
    }

    pub fn is_valid_for(&self, g: &Graph) -> bool {
        g.n() == self.n() && self.violations(g).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::complete_bipartite;

    #[test]
    fn bipartition_of_complete_bipartite_is_valid() {
        let g = complete_bipartite(2, 3);
        let mut p = VertexPartition::from_parts(
            5,
            &[("L".into(), vec![0, 1]), ("R".into(), vec![2, 3, 4])],
        )
        .unwrap();
        assert!(!p.is_valid_for(&g));
        p.allow_named("L", "R").unwrap();
        assert!(p.is_valid_for(&g));
        assert_eq!(p.sizes(), vec![2, 3]);
        assert_eq!(p.members_named("R").unwrap(), vec![2, 3, 4]);
    }

    #[test]
    fn rejects_incomplete_cover() {
        assert!(VertexPartition::from_parts(3, &[("A".into(), vec![0, 1])]).is_err());
        assert!(VertexPartition::from_parts(
            2,
            &[("A".into(), vec![0, 1]), ("B".into(), vec![1])]
        )
        .is_err());
    }
}
