//! graph6 text format: bit-packed upper triangle, 6 bits per byte,
//! offset by 63. Covers n <= 62 (single-byte size), which is far beyond
//! the n <= 16 this crate supports.

use crate::graph::{Graph, GraphError, MAX_VERTICES};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("invalid graph6 byte {0:#x}")]
    InvalidByte(u8),
    #[error("truncated graph6 string: expected {expected} data bytes, got {got}")]
    Truncated { expected: usize, got: usize },
    #[error("vertex count {0} exceeds supported maximum {MAX_VERTICES}")]
    TooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Encodes a graph as a graph6 line (without trailing newline).
pub fn encode(g: &Graph) -> String {
    let n = g.n();
    let mut bits = Vec::with_capacity(n * (n - 1) / 2 + 1);
    for v in 1..n {
        for u in 0..v {
            bits.push(g.has_edge(u, v));
        }
    }
    let mut out = vec![n as u8 + 63];
    for chunk in bits.chunks(6) {
        let mut b = 0u8;
        for (i, &bit) in chunk.iter().enumerate() {
            if bit {
                b |= 1 << (5 - i);
            }
        }
        out.push(b + 63);
    }
    String::from_utf8(out).unwrap()
}

pub fn decode(s: &str) -> Result<Graph, Graph6Error> {
    let bytes = s.trim().as_bytes();
    let &first = bytes.first().ok_or(Graph6Error::Empty)?;
    if !(63..=126).contains(&first) {
        return Err(Graph6Error::InvalidByte(first));
    }
    let n = (first - 63) as usize;
    if n > MAX_VERTICES {
        return Err(Graph6Error::TooLarge(n));
    }
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    let data = &bytes[1..];
    if data.len() < expected {
        return Err(Graph6Error::Truncated {
            expected,
            got: data.len(),
        });
    }
    let mut edges = Vec::new();
    let mut idx = 0usize;
    for v in 1..n {
        for u in 0..v {
            let byte = data[idx / 6];
            if !(63..=126).contains(&byte) {
                return Err(Graph6Error::InvalidByte(byte));
            }
            if (byte - 63) >> (5 - idx % 6) & 1 == 1 {
                edges.push((u, v));
            }
            idx += 1;
        }
    }
    Ok(Graph::new(n, &edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_encodings() {
        // K4 is the classic "C~"
        let k4 = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(encode(&k4), "C~");
        let empty4 = Graph::empty(4);
        assert_eq!(encode(&empty4), "C?");
    }

    #[test]
    fn round_trip_square() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(decode(&encode(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(decode(""), Err(Graph6Error::Empty));
        assert!(matches!(decode("C"), Err(Graph6Error::Truncated { .. })));
    }
}
