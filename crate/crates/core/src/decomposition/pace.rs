//! PACE 2017 `.td` files: `s td <bags> <max bag size> <vertices>`, one
//! `b <id> <vertices...>` line per bag and one `<id> <id>` line per tree edge,
//! all 1-based. Lines starting with `c` are comments.

use std::fmt::Write as _;

use super::{DecompositionError, TreeDecomposition};

fn parse_err(line: usize, message: impl Into<String>) -> DecompositionError {
    DecompositionError::Parse {
        line,
        message: message.into(),
    }
}

fn number(token: Option<&str>, line: usize, what: &str) -> Result<usize, DecompositionError> {
    let token = token.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{token}`")))
}

/// Parses a `.td` file for a graph on `num_vertices` vertices.
pub fn read_td(text: &str, num_vertices: usize) -> Result<TreeDecomposition, DecompositionError> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut tokens = raw.split_whitespace();
        let Some(first) = tokens.next() else { continue };
        match first {
            "c" => continue,
            "s" => {
                if header.is_some() {
                    return Err(parse_err(line, "second header"));
                }
                if tokens.next() != Some("td") {
                    return Err(parse_err(line, "expected `s td`"));
                }
                let count = number(tokens.next(), line, "bag count")?;
                let max_bag = number(tokens.next(), line, "maximum bag size")?;
                let n = number(tokens.next(), line, "vertex count")?;
                if n != num_vertices {
                    return Err(parse_err(
                        line,
                        format!("header says {n} vertices, graph has {num_vertices}"),
                    ));
                }
                header = Some((count, max_bag));
                bags = vec![None; count];
            }
            _ if header.is_none() => return Err(parse_err(line, "content before the `s td` header")),
            "b" => {
                let id = number(tokens.next(), line, "bag id")?;
                if id == 0 || id > bags.len() {
                    return Err(parse_err(line, format!("bag id {id} out of range")));
                }
                if bags[id - 1].is_some() {
                    return Err(parse_err(line, format!("bag {id} listed twice")));
                }
                let mut bag = Vec::new();
                for token in tokens {
                    let v = number(Some(token), line, "vertex")?;
                    if v == 0 || v > num_vertices {
                        return Err(parse_err(line, format!("vertex {v} out of range")));
                    }
                    bag.push(v - 1);
                }
                bags[id - 1] = Some(bag);
            }
            _ => {
                let s = number(Some(first), line, "tree node")?;
                let t = number(tokens.next(), line, "tree node")?;
                if tokens.next().is_some() {
                    return Err(parse_err(line, "trailing tokens after tree edge"));
                }
                if s == 0 || t == 0 || s > bags.len() || t > bags.len() {
                    return Err(parse_err(line, format!("tree edge {s} {t} out of range")));
                }
                edges.push((s - 1, t - 1));
            }
        }
    }
    let (_, max_bag) = header.ok_or_else(|| parse_err(0, "missing `s td` header"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| parse_err(0, format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    let td = TreeDecomposition::new(bags, edges);
    if td.max_bag_size() != max_bag {
        return Err(parse_err(
            0,
            format!(
                "header says maximum bag size {max_bag}, bags have {}",
                td.max_bag_size()
            ),
        ));
    }
    Ok(td)
}

pub fn write_td(td: &TreeDecomposition, num_vertices: usize) -> String {
    let mut out = format!("s td {} {} {}\n", td.num_nodes(), td.max_bag_size(), num_vertices);
    for (i, bag) in td.bags().iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for v in bag {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for &(s, t) in td.edges() {
        writeln!(out, "{} {}", s + 1, t + 1).unwrap();
    }
    out
}
