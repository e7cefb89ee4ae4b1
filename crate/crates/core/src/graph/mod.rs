//! Graph loading, preprocessing, and the CSR representation.
//!
//! The input pipeline is: parse an edge list (text or Matrix Market), treat
//! all edges as undirected, drop self-loops and duplicates, remove singleton
//! vertices, optionally randomize vertex ids, then build a CSR.

mod binary;
mod csr;
mod edge_list;
mod load;
pub(crate) mod shuffle;

pub use binary::{read_csr_binary, write_csr_binary};
pub use csr::{build_csr, Csr};
pub use edge_list::{preprocess, randomize_ids, EdgeList, PreprocessOptions};
pub use load::{load_edge_list, load_matrix_market};
