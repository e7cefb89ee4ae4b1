use crate::error::{Error, Result};
use crate::graph::EdgeList;

/// Compressed sparse row adjacency. Immutable once built, safe to share
/// across threads.
///
/// Invariants: offsets start at 0, are non-decreasing, and end at `ne`; each
/// vertex's neighbor slice is sorted ascending with no duplicates; the edge
/// set is symmetric with no self-loops. `ne` counts directed entries, so an
/// undirected edge contributes 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Csr {
    pub nv: u32,
    pub ne: u64,
    pub offsets: Vec<u64>,
    pub adjacency: Vec<u32>,
}

impl Csr {
    pub fn num_vertices(&self) -> usize {
        self.nv as usize
    }

    pub fn degree(&self, v: usize) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    /// Checks every structural invariant. Zero-degree vertices are allowed
    /// here; they only become an error in kernels running in strict mode.
    pub fn validate(&self) -> Result<()> {
        if self.offsets.len() != self.nv as usize + 1 {
            return Err(Error::Invariant(format!(
                "offsets length {} != nv+1 = {}",
                self.offsets.len(),
                self.nv as usize + 1
            )));
        }
        if self.offsets[0] != 0 {
            return Err(Error::Invariant("offsets[0] != 0".into()));
        }
        if self.offsets[self.nv as usize] != self.ne {
            return Err(Error::Invariant(format!(
                "offsets[nv] = {} != ne = {}",
                self.offsets[self.nv as usize],
                self.ne
            )));
        }
        if self.adjacency.len() as u64 != self.ne {
            return Err(Error::Invariant(format!(
                "adjacency length {} != ne = {}",
                self.adjacency.len(),
                self.ne
            )));
        }
        if let Some(w) = self.offsets.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::Invariant(format!(
                "offsets decrease at vertex {w}"
            )));
        }
        for v in 0..self.num_vertices() {
            let nbrs = self.neighbors(v);
            for (i, &u) in nbrs.iter().enumerate() {
                if u >= self.nv {
                    return Err(Error::Invariant(format!(
                        "neighbor {u} of vertex {v} out of range"
                    )));
                }
                if u as usize == v {
                    return Err(Error::Invariant(format!("self-loop at vertex {v}")));
                }
                if i > 0 && nbrs[i - 1] >= u {
                    return Err(Error::Invariant(format!(
                        "adjacency of vertex {v} not strictly ascending"
                    )));
                }
                // Symmetry: the mirror edge must exist.
                if self.neighbors(u as usize).binary_search(&(v as u32)).is_err() {
                    return Err(Error::Invariant(format!(
                        "edge ({v},{u}) present but ({u},{v}) missing"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builds a CSR from a preprocessed edge list (symmetric, deduplicated,
/// compacted ids). Self-loops, duplicates, and asymmetry are rejected.
pub fn build_csr(el: &EdgeList) -> Result<Csr> {
    if el.edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let nv = el.nv_hint;
    let ne = el.edges.len() as u64;

    let mut counts = vec![0u64; nv as usize + 1];
    for &(u, v) in &el.edges {
        if u == v {
            return Err(Error::InvalidInput(format!(
                "self-loop ({u},{u}) in preprocessed input"
            )));
        }
        counts[u as usize + 1] += 1;
    }
    let mut offsets = counts;
    for i in 1..offsets.len() {
        offsets[i] += offsets[i - 1];
    }

    let mut adjacency = vec![0u32; ne as usize];
    let mut cursor: Vec<u64> = offsets[..nv as usize].to_vec();
    for &(u, v) in &el.edges {
        adjacency[cursor[u as usize] as usize] = v;
        cursor[u as usize] += 1;
    }

    for v in 0..nv as usize {
        let slice = &mut adjacency[offsets[v] as usize..offsets[v + 1] as usize];
        slice.sort_unstable();
        if slice.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!(
                "duplicate edge at vertex {v} in preprocessed input"
            )));
        }
    }

    let csr = Csr {
        nv,
        ne,
        offsets,
        adjacency,
    };
    csr.validate()?;
    Ok(csr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{preprocess, EdgeList, PreprocessOptions};

    fn csr_of(edges: &[(u32, u32)]) -> Csr {
        let el = preprocess(
            &EdgeList::from_edges(edges.to_vec()).unwrap(),
            &PreprocessOptions::default(),
        )
        .unwrap();
        build_csr(&el).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = build_csr(&EdgeList::from_edges(vec![(0, 1), (1, 0)]).unwrap()).unwrap();
        assert_eq!(g.offsets, vec![0, 1, 2]);
        assert_eq!(g.adjacency, vec![1, 0]);
    }

    #[test]
    fn three_path() {
        let g = csr_of(&[(0, 1), (1, 2)]);
        assert_eq!(g.nv, 3);
        assert_eq!(g.ne, 4);
        assert_eq!(g.offsets, vec![0, 1, 3, 4]);
        assert_eq!(g.adjacency, vec![1, 0, 2, 1]);
    }

    #[test]
    fn duplicate_rejected() {
        let el = EdgeList::from_edges(vec![(0, 1), (0, 1), (1, 0), (1, 0)]).unwrap();
        assert!(matches!(
            build_csr(&el).unwrap_err(),
            Error::InvalidInput(_)
        ));
    }

    #[test]
    fn self_loop_rejected() {
        let el = EdgeList::from_edges(vec![(0, 0), (0, 1), (1, 0)]).unwrap();
        assert!(build_csr(&el).is_err());
    }

    #[test]
    fn asymmetric_rejected() {
        let el = EdgeList::from_edges(vec![(0, 1)]).unwrap();
        assert!(matches!(build_csr(&el).unwrap_err(), Error::Invariant(_)));
    }

    #[test]
    fn degree_sum_equals_ne() {
        let g = csr_of(&[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let total: usize = (0..g.num_vertices()).map(|v| g.degree(v)).sum();
        assert_eq!(total as u64, g.ne);
    }
}
