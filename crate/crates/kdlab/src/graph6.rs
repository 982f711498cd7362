//! graph6 encoding and decoding.
//!
//! The format stores the order, then the upper triangle of the adjacency
//! matrix in column-major order ((0,1), (0,2), (1,2), (0,3), ...) packed
//! big-endian into 6-bit groups, each offset by 63 into printable ASCII.
//! Orders up to 62 use a single length byte; 63 and 64 use the four-byte
//! long form. An optional `>>graph6<<` header is tolerated on input and
//! never emitted.

use thiserror::Error;

use crate::graph::{Graph, MAX_VERTICES};

const HEADER: &str = ">>graph6<<";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 input")]
    Empty,
    #[error("invalid graph6 byte 0x{byte:02x} at offset {offset}")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("graph6 input ends early at offset {offset}")]
    UnexpectedEnd { offset: usize },
    #[error("graph6 order {n} exceeds the supported maximum of {MAX_VERTICES} vertices")]
    OrderTooLarge { n: u64 },
    #[error("nonzero padding bits in final graph6 byte at offset {offset}")]
    DirtyPadding { offset: usize },
    #[error("trailing data after graph6 body at offset {offset}")]
    TrailingData { offset: usize },
}

fn data_byte(bytes: &[u8], offset: usize) -> Result<u8, Graph6Error> {
    match bytes.get(offset) {
        None => Err(Graph6Error::UnexpectedEnd { offset }),
        Some(&b) if (63..=126).contains(&b) => Ok(b - 63),
        Some(&b) => Err(Graph6Error::InvalidByte { offset, byte: b }),
    }
}

/// Decodes one graph6 string. Trailing ASCII whitespace is ignored;
/// reported offsets are byte positions in `text`.
pub fn parse_graph6(text: &str) -> Result<Graph, Graph6Error> {
    let trimmed = text.trim_end();
    let mut at = match trimmed.strip_prefix(HEADER) {
        Some(_) => HEADER.len(),
        None => 0,
    };
    let bytes = trimmed.as_bytes();
    if bytes.len() == at {
        return Err(Graph6Error::Empty);
    }

    // Order: one byte for n <= 62, 126 + three bytes for n < 2^18,
    // 126 126 + six bytes for n < 2^36.
    let first = data_byte(bytes, at)?;
    let n: u64;
    if first < 63 {
        n = first as u64;
        at += 1;
    } else {
        debug_assert_eq!(first, 63);
        let second = data_byte(bytes, at + 1)?;
        if second < 63 {
            let mut val = 0u64;
            for i in 0..3 {
                val = (val << 6) | data_byte(bytes, at + 1 + i)? as u64;
            }
            n = val;
            at += 4;
        } else {
            let mut val = 0u64;
            for i in 0..6 {
                val = (val << 6) | data_byte(bytes, at + 2 + i)? as u64;
            }
            n = val;
            at += 8;
        }
    }
    if n > MAX_VERTICES as u64 {
        return Err(Graph6Error::OrderTooLarge { n });
    }
    let n = n as usize;

    let pairs = if n < 2 { 0 } else { n * (n - 1) / 2 };
    let body_len = pairs.div_ceil(6);
    if bytes.len() < at + body_len {
        return Err(Graph6Error::UnexpectedEnd {
            offset: bytes.len(),
        });
    }
    if bytes.len() > at + body_len {
        return Err(Graph6Error::TrailingData {
            offset: at + body_len,
        });
    }

    let mut g = Graph::empty(n).expect("order checked above");
    let mut pair = 0usize;
    'cols: for j in 1..n {
        for i in 0..j {
            let byte = data_byte(bytes, at + pair / 6)?;
            if byte & (1 << (5 - pair % 6)) != 0 {
                g.add_edge(i, j);
            }
            pair += 1;
            if pair == pairs {
                break 'cols;
            }
        }
    }
    if pairs % 6 != 0 {
        let last = data_byte(bytes, at + body_len - 1)?;
        let pad = 6 - pairs % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(Graph6Error::DirtyPadding {
                offset: at + body_len - 1,
            });
        }
    }
    Ok(g)
}

/// Encodes a graph as a graph6 string (no header, no newline).
pub fn write_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else {
        out.push(126);
        out.push(63 + ((n >> 12) & 63) as u8);
        out.push(63 + ((n >> 6) & 63) as u8);
        out.push(63 + (n & 63) as u8);
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(63 + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (acc << (6 - filled)));
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_small_codes() {
        // 'B' = 66 -> n = 3; 'w' = 119 -> 111000, all three pairs present.
        let k3 = parse_graph6("Bw").unwrap();
        assert_eq!(k3, Graph::complete(3).unwrap());
        // 'A' -> n = 2; '_' = 95 -> 100000, the single pair present.
        let k2 = parse_graph6("A_").unwrap();
        assert_eq!(k2, Graph::complete(2).unwrap());
        // '?' -> 0 payload bits set.
        let e2 = parse_graph6("A?").unwrap();
        assert_eq!(e2, Graph::empty(2).unwrap());
        // Order 0 and order 1 have no body at all.
        assert_eq!(parse_graph6("?").unwrap().order(), 0);
        assert_eq!(parse_graph6("@").unwrap().order(), 1);
    }

    #[test]
    fn encodes_known_small_codes() {
        assert_eq!(write_graph6(&Graph::complete(3).unwrap()), "Bw");
        assert_eq!(write_graph6(&Graph::complete(2).unwrap()), "A_");
        assert_eq!(write_graph6(&Graph::empty(2).unwrap()), "A?");
    }

    #[test]
    fn header_is_tolerated_never_emitted() {
        let g = parse_graph6(">>graph6<<Bw").unwrap();
        assert_eq!(g, Graph::complete(3).unwrap());
        assert!(!write_graph6(&g).contains('>'));
    }

    #[test]
    fn trailing_newline_is_tolerated() {
        assert_eq!(parse_graph6("Bw\n").unwrap(), Graph::complete(3).unwrap());
    }

    #[test]
    fn roundtrip_various_orders() {
        // Deterministic pseudo-random graphs across the order range,
        // including the 63- and 64-vertex long form.
        let mut state = 0x243f_6a88_85a3_08d3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in [0usize, 1, 2, 5, 13, 32, 61, 62, 63, 64] {
            let mut g = Graph::empty(n).unwrap();
            for u in 0..n {
                for v in (u + 1)..n {
                    if next() & 1 == 1 {
                        g.add_edge(u, v);
                    }
                }
            }
            let s = write_graph6(&g);
            let back = parse_graph6(&s).unwrap();
            assert_eq!(back, g, "roundtrip failed for n = {n}");
            if n >= 63 {
                assert_eq!(s.as_bytes()[0], 126);
            }
        }
    }

    #[test]
    fn error_offsets() {
        assert_eq!(parse_graph6("").unwrap_err(), Graph6Error::Empty);
        assert_eq!(
            parse_graph6("B").unwrap_err(),
            Graph6Error::UnexpectedEnd { offset: 1 }
        );
        assert_eq!(
            parse_graph6("B\x1f").unwrap_err(),
            Graph6Error::InvalidByte {
                offset: 1,
                byte: 0x1f
            }
        );
        assert_eq!(
            parse_graph6("Bww").unwrap_err(),
            Graph6Error::TrailingData { offset: 2 }
        );
        // 'A' body with a padding bit set: 'A' expects one pair in the top
        // bit; byte 'o' = 0b101000 has bit 3 dirty.
        assert_eq!(
            parse_graph6("Ao").unwrap_err(),
            Graph6Error::DirtyPadding { offset: 1 }
        );
        // Long form declaring n = 65 must be rejected by order, not parsed.
        assert_eq!(
            parse_graph6("~?@@").unwrap_err(),
            Graph6Error::OrderTooLarge { n: 65 }
        );
    }
}
