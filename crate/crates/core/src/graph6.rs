//! graph6 encoding (McKay): size header, then the upper triangle in column
//! order packed six bits per byte with offset 63.

use crate::error::{Error, Result};
use crate::graph::Graph;

const MAX_N: usize = 68_719_476_735;

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    if bytes.is_empty() {
        return Err(Error::MalformedEncoding("empty string".into()));
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::MalformedEncoding(format!("byte {b} outside 63..=126")));
    }
    let six: Vec<u8> = bytes.iter().map(|b| b - 63).collect();
    let (n, header) = if bytes[0] != 126 {
        (six[0] as usize, 1)
    } else if bytes.len() >= 2 && bytes[1] != 126 {
        (read_groups(&six, 1, 3)?, 4)
    } else {
        (read_groups(&six, 2, 6)?, 8)
    };
    let body = &six[header.min(six.len())..];
    let nbits = n * n.saturating_sub(1) / 2;
    let expected = nbits.div_ceil(6);
    if body.len() != expected {
        return Err(Error::MalformedEncoding(format!(
            "expected {expected} data bytes for n={n}, found {}",
            body.len()
        )));
    }
    let mut g = Graph::new(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if body[k / 6] >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j).expect("in range");
            }
            k += 1;
        }
    }
    if nbits % 6 != 0 && body[nbits / 6] & ((1u8 << (6 - nbits % 6)) - 1) != 0 {
        return Err(Error::MalformedEncoding("nonzero padding bits".into()));
    }
    Ok(g)
}

fn read_groups(six: &[u8], start: usize, count: usize) -> Result<usize> {
    if six.len() < start + count {
        return Err(Error::MalformedEncoding("truncated size header".into()));
    }
    Ok(six[start..start + count].iter().fold(0usize, |acc, &b| acc << 6 | b as usize))
}

pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    assert!(n <= MAX_N);
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8);
    } else if n <= 258_047 {
        out.push(63);
        for s in [12, 6, 0] {
            out.push((n >> s & 63) as u8);
        }
    } else {
        out.extend([63, 63]);
        for s in [30, 24, 18, 12, 6, 0] {
            out.push((n >> s & 63) as u8);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(acc << (6 - filled));
    }
    out.into_iter().map(|b| (b + 63) as char).collect()
}

/// Parses one graph per non-empty line.
pub fn parse_lines(text: &str) -> Result<Vec<Graph>> {
    text.lines().map(str::trim).filter(|l| !l.is_empty()).map(parse_graph6).collect()
}
