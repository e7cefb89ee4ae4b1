use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::EdgeList;

fn parse_id(tok: &str, line_no: usize) -> Result<u32> {
    let v: u64 = tok.parse().map_err(|_| Error::Parse {
        line: line_no,
        msg: format!("expected a non-negative integer, got {tok:?}"),
    })?;
    u32::try_from(v).map_err(|_| Error::Parse {
        line: line_no,
        msg: format!("vertex id {v} exceeds the 32-bit range"),
    })
}

/// Parses a whitespace-separated edge-list text file.
///
/// Lines starting with `#` or `%` are comments; blank lines are skipped.
/// Every other line must hold exactly two non-negative integers.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<EdgeList> {
    let reader = BufReader::new(File::open(path.as_ref())?);
    let mut edges = Vec::new();
    let mut max_id = 0u32;

    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(Error::Parse {
                line: line_no,
                msg: "expected exactly two vertex ids".into(),
            });
        };
        let u = parse_id(a, line_no)?;
        let v = parse_id(b, line_no)?;
        max_id = max_id.max(u).max(v);
        edges.push((u, v));
    }

    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    EdgeList::with_nv_hint(edges, max_id + 1)
}

/// Parses the coordinate subset of the Matrix Market exchange format.
///
/// Accepted headers: `matrix coordinate {pattern|real|integer}
/// {general|symmetric}`. Numeric values are discarded; only the sparsity
/// pattern matters. Indices are 1-based in the file and converted to 0-based.
/// Symmetric files yield each stored entry once; the mirror edge is produced
/// later by preprocessing.
pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<EdgeList> {
    let reader = BufReader::new(File::open(path.as_ref())?);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let header = header?;
    let fields: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::Parse {
            line: 1,
            msg: "not a MatrixMarket matrix header".into(),
        });
    }
    if fields[2] != "coordinate" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unsupported storage {:?} (only coordinate)", fields[2]),
        });
    }
    let values_per_entry = match fields[3].as_str() {
        "pattern" => 0,
        "real" | "integer" => 1,
        other => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported field type {other:?}"),
            })
        }
    };
    match fields[4].as_str() {
        "general" | "symmetric" => {}
        other => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported symmetry {other:?}"),
            })
        }
    }

    // Size line: rows cols nnz (after any comment lines).
    let mut size: Option<(u64, u64, u64)> = None;
    let mut size_line = 0usize;
    for (i, line) in &mut lines {
        let line_no = i + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let nums: Vec<&str> = t.split_whitespace().collect();
        if nums.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                msg: "expected size line: rows cols nnz".into(),
            });
        }
        let parse = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad size field {s:?}"),
            })
        };
        size = Some((parse(nums[0])?, parse(nums[1])?, parse(nums[2])?));
        size_line = line_no;
        break;
    }
    let (rows, cols, nnz) = size.ok_or(Error::Parse {
        line: size_line.max(1),
        msg: "missing size line".into(),
    })?;
    if rows != cols {
        return Err(Error::Parse {
            line: size_line,
            msg: format!("matrix must be square to form a graph, got {rows}x{cols}"),
        });
    }
    if rows == 0 || rows > u32::MAX as u64 {
        return Err(Error::Parse {
            line: size_line,
            msg: format!("vertex count {rows} out of range"),
        });
    }
    let n = rows as u32;

    let mut edges = Vec::with_capacity(nnz as usize);
    for (i, line) in lines {
        let line_no = i + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = t.split_whitespace().collect();
        if toks.len() != 2 + values_per_entry {
            return Err(Error::Parse {
                line: line_no,
                msg: format!(
                    "expected {} fields per entry, got {}",
                    2 + values_per_entry,
                    toks.len()
                ),
            });
        }
        let one_based = |s: &str| -> Result<u32> {
            let v: u64 = s.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad index {s:?}"),
            })?;
            if v == 0 || v > n as u64 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("index {v} out of range 1..={n}"),
                });
            }
            Ok((v - 1) as u32)
        };
        edges.push((one_based(toks[0])?, one_based(toks[1])?));
    }

    if edges.len() as u64 != nnz {
        return Err(Error::Parse {
            line: size_line,
            msg: format!("declared {nnz} entries, found {}", edges.len()),
        });
    }
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    EdgeList::with_nv_hint(edges, n)
}
