use std::collections::BTreeSet;
use std::fmt;

/// Simple directed graph with named nodes. Nodes are numbered in insertion
/// order; self-loops are allowed, parallel edges are not.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    names: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("dangling edge: `{0}` is not a node")]
    Dangling(String),
    #[error("graph has {nodes} nodes but class N has only {size} colours")]
    TooManyNodes { nodes: usize, size: u32 },
    #[error("net lacks places Node : N and Edge : N*N")]
    MissingPlaces,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Nodes named `1..=n`.
    pub fn with_nodes(n: usize) -> Self {
        Graph { names: (1..=n).map(|i| i.to_string()).collect(), edges: BTreeSet::new() }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::with_nodes(n);
        for (a, b) in edges {
            assert!(a < n && b < n, "edge endpoint out of range");
            g.edges.insert((a, b));
        }
        g
    }

    pub fn add_node(&mut self, name: &str) -> Result<usize, GraphError> {
        if self.index_of(name).is_some() {
            return Err(GraphError::DuplicateNode(name.to_string()));
        }
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }

    pub fn add_edge(&mut self, from: &str, to: &str) -> Result<(), GraphError> {
        let a = self.index_of(from).ok_or_else(|| GraphError::Dangling(from.to_string()))?;
        let b = self.index_of(to).ok_or_else(|| GraphError::Dangling(to.to_string()))?;
        if !self.edges.insert((a, b)) {
            return Err(GraphError::DuplicateEdge(from.to_string(), to.to_string()));
        }
        Ok(())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }

    pub fn out_degree(&self, a: usize) -> usize {
        self.edges.iter().filter(|(x, _)| *x == a).count()
    }

    pub fn in_degree(&self, b: usize) -> usize {
        self.edges.iter().filter(|(_, y)| *y == b).count()
    }

    /// Same structure with nodes renamed `1..=n`.
    pub fn unnamed(&self) -> Graph {
        Graph { names: (1..=self.names.len()).map(|i| i.to_string()).collect(), edges: self.edges.clone() }
    }
}

impl fmt::Display for Graph {
    /// Graph file syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.names {
            writeln!(f, "node {};", quote(n))?;
        }
        for (a, b) in &self.edges {
            writeln!(f, "edge {} {};", quote(&self.names[*a]), quote(&self.names[*b]))?;
        }
        Ok(())
    }
}

fn quote(name: &str) -> String {
    let plain = name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !name.is_empty()
        && (!name.starts_with(|c: char| c.is_ascii_digit())
            || (name.chars().all(|c| c.is_ascii_digit()) && (name == "0" || !name.starts_with('0'))));
    if plain {
        name.to_string()
    } else {
        format!("\"{}\"", name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dangling_and_duplicate() {
        let mut g = Graph::new();
        assert_eq!(g.add_edge("a", "b"), Err(GraphError::Dangling("a".into())));
        g.add_node("a").unwrap();
        g.add_node("b").unwrap();
        g.add_edge("a", "b").unwrap();
        assert!(matches!(g.add_edge("a", "b"), Err(GraphError::DuplicateEdge(..))));
        assert_eq!(g.out_degree(0), 1);
        assert_eq!(g.in_degree(0), 0);
    }
}
