use crate::error::{Error, Result};
use crate::graph::shuffle;

/// Raw list of directed vertex pairs, straight out of a parser.
///
/// No deduplication or symmetry is guaranteed at this stage; the list holds
/// whatever the input file said, in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub edges: Vec<(u32, u32)>,
    /// Vertex-count hint: every id is `< nv_hint`.
    pub nv_hint: u32,
}

impl EdgeList {
    /// Builds an edge list, deriving `nv_hint` from the maximum id.
    pub fn from_edges(edges: Vec<(u32, u32)>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let max_id = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap();
        Ok(Self {
            edges,
            nv_hint: max_id + 1,
        })
    }

    /// Builds an edge list with an explicit vertex count.
    pub fn with_nv_hint(edges: Vec<(u32, u32)>, nv_hint: u32) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= nv_hint || v >= nv_hint) {
            return Err(Error::InvalidInput(format!(
                "edge ({u},{v}) exceeds vertex count {nv_hint}"
            )));
        }
        Ok(Self { edges, nv_hint })
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
}

/// Switches for the input-cleaning pipeline. Everything defaults to on.
#[derive(Debug, Clone, Copy)]
pub struct PreprocessOptions {
    pub symmetrize: bool,
    pub drop_self_loops: bool,
    pub dedup: bool,
    pub drop_singletons: bool,
    /// When set, ids are randomized with this seed after cleaning.
    pub randomize_seed: Option<u64>,
}

impl Default for PreprocessOptions {
    fn default() -> Self {
        Self {
            symmetrize: true,
            drop_self_loops: true,
            dedup: true,
            drop_singletons: true,
            randomize_seed: None,
        }
    }
}

/// Cleans an edge list: drops self-loops, mirrors every edge, removes
/// duplicates, then drops zero-degree vertices and compacts ids into a dense
/// `0..nv` range preserving relative order. Output is sorted, so the result
/// is deterministic for a given input.
///
/// Stages are individually switchable through `opts`; randomization is NOT
/// applied here (see [`randomize_ids`]), so the same cleaned list is produced
/// regardless of `randomize_seed`.
pub fn preprocess(el: &EdgeList, opts: &PreprocessOptions) -> Result<EdgeList> {
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(el.edges.len() * 2);
    for &(u, v) in &el.edges {
        if opts.drop_self_loops && u == v {
            continue;
        }
        edges.push((u, v));
        if opts.symmetrize && u != v {
            edges.push((v, u));
        }
    }

    edges.sort_unstable();
    if opts.dedup {
        edges.dedup();
    }

    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let mut nv_hint = el.nv_hint;
    if opts.drop_singletons {
        // Relabel to a dense id range, preserving relative order.
        let mut used = vec![false; el.nv_hint as usize];
        for &(u, v) in &edges {
            used[u as usize] = true;
            used[v as usize] = true;
        }
        let mut remap = vec![u32::MAX; el.nv_hint as usize];
        let mut next = 0u32;
        for (old, &u) in used.iter().enumerate() {
            if u {
                remap[old] = next;
                next += 1;
            }
        }
        for e in &mut edges {
            *e = (remap[e.0 as usize], remap[e.1 as usize]);
        }
        nv_hint = next;
    }

    Ok(EdgeList { edges, nv_hint })
}

/// Relabels vertices with a uniform random permutation drawn from the pinned
/// deterministic generator. Same seed, same permutation.
pub fn randomize_ids(el: &EdgeList, seed: u64) -> EdgeList {
    let perm = shuffle::permutation(el.nv_hint as usize, seed);
    let edges = el
        .edges
        .iter()
        .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
        .collect();
    EdgeList {
        edges,
        nv_hint: el.nv_hint,
    }
}
