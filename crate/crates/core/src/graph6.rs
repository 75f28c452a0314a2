//! graph6 encoding for orders 1..=62.
//!
//! One header byte `n + 63`, then the upper triangle in column-major order
//! (`(0,1), (0,2), (1,2), (0,3), ...`) packed big-endian into 6-bit groups,
//! each offset by 63. Padding bits must be zero.

use crate::error::Graph6Error;
use crate::graph::{Graph, MAX_ORDER};

pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(1 + (n * (n - 1) / 2).div_ceil(6));
    out.push(n as u8 + 63);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// Parses one graph6 record. A single trailing newline is tolerated.
pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let text = text.strip_suffix('\n').unwrap_or(text);
    let text = text.strip_suffix('\r').unwrap_or(text);
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::new(0, "empty input"));
    }
    if let Some(pos) = bytes.iter().position(|b| !(63..=126).contains(b)) {
        return Err(Graph6Error::new(
            pos,
            format!("byte 0x{:02x} outside 63..=126", bytes[pos]),
        ));
    }
    let header = bytes[0];
    if header == 126 {
        return Err(Graph6Error::new(
            0,
            format!("multi-byte order header (order > {MAX_ORDER}) not supported"),
        ));
    }
    let n = (header - 63) as usize;
    if n == 0 {
        return Err(Graph6Error::new(0, "order 0 is not a graph"));
    }
    let nbits = n * (n - 1) / 2;
    let expected = 1 + nbits.div_ceil(6);
    if bytes.len() < expected {
        return Err(Graph6Error::new(
            bytes.len(),
            format!(
                "truncated: order {n} needs {expected} bytes, got {}",
                bytes.len()
            ),
        ));
    }
    if bytes.len() > expected {
        return Err(Graph6Error::new(expected, "trailing bytes after graph"));
    }
    let mut rows = vec![0u64; n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[1 + k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            k += 1;
        }
    }
    if !nbits.is_multiple_of(6) {
        let last = bytes[expected - 1] - 63;
        let pad = 6 - nbits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::new(expected - 1, "non-zero padding bits"));
        }
    }
    Ok(Graph::from_rows(rows).expect("decoded rows are symmetric"))
}
