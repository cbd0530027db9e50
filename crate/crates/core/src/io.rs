//! Text formats for graphs, partitions, colorings and traces.
//!
//! * graph: `n m`, then `m` lines `u v` with `u < v`, ascending.
//! * partition / coloring: `n` lines, line `i` holds the class / color of vertex `i`.
//! * trace: `n k`, then `k` lines `vertex new_color`.
//!
//! All numbers are decimal and every line is newline-terminated. Writers go
//! through a temporary file in the target directory that is renamed into
//! place only once fully written.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::coloring::{Coloring, Move};
use crate::error::{Error, Result};
use crate::generate::Partition;
use crate::graph::Graph;

fn parse_err(path: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        msg: msg.into(),
    }
}

/// Non-empty lines with their 1-based numbers; rejects a missing final newline.
fn lines<'a>(path: &'a str, text: &'a str) -> Result<impl Iterator<Item = (usize, &'a str)>> {
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(parse_err(path, text.lines().count(), "missing final newline"));
    }
    Ok(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

fn numbers<const N: usize>(path: &str, line: usize, text: &str) -> Result<[u64; N]> {
    let mut out = [0u64; N];
    let mut fields = text.split_ascii_whitespace();
    for slot in out.iter_mut() {
        let field = fields
            .next()
            .ok_or_else(|| parse_err(path, line, format!("expected {N} fields")))?;
        *slot = field
            .parse()
            .map_err(|_| parse_err(path, line, format!("not a non-negative integer: {field:?}")))?;
    }
    if fields.next().is_some() {
        return Err(parse_err(path, line, format!("expected {N} fields")));
    }
    Ok(out)
}

fn to_u32(path: &str, line: usize, x: u64) -> Result<u32> {
    u32::try_from(x).map_err(|_| parse_err(path, line, format!("value {x} too large")))
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.m() + 1));
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_graph(path: &str, text: &str) -> Result<Graph> {
    let mut it = lines(path, text)?;
    let (ln, header) = it.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let [n, m] = numbers::<2>(path, ln, header)?;
    let n = usize::try_from(n).map_err(|_| parse_err(path, ln, "n too large"))?;
    let mut edges = Vec::with_capacity(m.min(1 << 24) as usize);
    let mut prev: Option<(u32, u32)> = None;
    for (ln, line) in it.by_ref().take(m as usize) {
        let [u, v] = numbers::<2>(path, ln, line)?;
        let (u, v) = (to_u32(path, ln, u)?, to_u32(path, ln, v)?);
        if u >= v || v as usize >= n {
            return Err(parse_err(path, ln, format!("need 0 <= u < v < {n}, got {u} {v}")));
        }
        if prev.is_some_and(|p| p >= (u, v)) {
            return Err(parse_err(path, ln, "edges not in ascending order"));
        }
        prev = Some((u, v));
        edges.push((u, v));
    }
    if (edges.len() as u64) < m {
        return Err(parse_err(path, edges.len() + 2, format!("expected {m} edges")));
    }
    if let Some((ln, _)) = it.next() {
        return Err(parse_err(path, ln, "trailing content after the declared edges"));
    }
    Graph::from_edges(n, edges)
}

fn format_column(values: &[u32]) -> String {
    let mut out = String::with_capacity(8 * values.len());
    for v in values {
        writeln!(out, "{v}").unwrap();
    }
    out
}

fn parse_column(path: &str, text: &str) -> Result<Vec<u32>> {
    lines(path, text)?
        .map(|(ln, line)| {
            let [x] = numbers::<1>(path, ln, line)?;
            to_u32(path, ln, x)
        })
        .collect()
}

pub fn format_coloring(c: &Coloring) -> String {
    format_column(c.as_slice())
}

pub fn parse_coloring(path: &str, text: &str) -> Result<Coloring> {
    parse_column(path, text).map(Coloring::new)
}

pub fn format_partition(p: &Partition) -> String {
    format_column(p.to_coloring().as_slice())
}

/// `q` defaults to one more than the largest class id.
pub fn parse_partition(path: &str, text: &str, q: Option<usize>) -> Result<Partition> {
    let class_of = parse_column(path, text)?;
    let max = class_of.iter().max().map_or(0, |&c| c as usize + 1);
    let q = q.unwrap_or(max);
    if q < max {
        return Err(parse_err(path, 0, format!("class id {} exceeds q = {q}", max - 1)));
    }
    Partition::from_class_of(class_of, q)
}

pub fn format_trace(n: usize, moves: &[Move]) -> String {
    let mut out = String::with_capacity(16 * (moves.len() + 1));
    writeln!(out, "{} {}", n, moves.len()).unwrap();
    for mv in moves {
        writeln!(out, "{} {}", mv.vertex, mv.new_color).unwrap();
    }
    out
}

/// Returns `n` and the moves.
pub fn parse_trace(path: &str, text: &str) -> Result<(usize, Vec<Move>)> {
    let mut it = lines(path, text)?;
    let (ln, header) = it.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let [n, k] = numbers::<2>(path, ln, header)?;
    let n = usize::try_from(n).map_err(|_| parse_err(path, ln, "n too large"))?;
    let mut moves = Vec::with_capacity(k.min(1 << 24) as usize);
    for (ln, line) in it.by_ref().take(k as usize) {
        let [v, c] = numbers::<2>(path, ln, line)?;
        moves.push(Move::new(to_u32(path, ln, v)?, to_u32(path, ln, c)?));
    }
    if (moves.len() as u64) < k {
        return Err(parse_err(path, moves.len() + 2, format!("expected {k} moves")));
    }
    if let Some((ln, _)) = it.next() {
        return Err(parse_err(path, ln, "trailing content after the declared moves"));
    }
    Ok((n, moves))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: 0,
        msg: e.to_string(),
    })
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&path.display().to_string(), &read_text(path)?)
}

pub fn read_coloring(path: &Path) -> Result<Coloring> {
    parse_coloring(&path.display().to_string(), &read_text(path)?)
}

pub fn read_partition(path: &Path, q: Option<usize>) -> Result<Partition> {
    parse_partition(&path.display().to_string(), &read_text(path)?, q)
}

pub fn read_trace(path: &Path) -> Result<(usize, Vec<Move>)> {
    parse_trace(&path.display().to_string(), &read_text(path)?)
}

/// Writes `contents` to a temporary sibling of `path`, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn graph_text_is_canonical() {
        let g = Graph::from_edges(4, [(2, 3), (0, 1), (1, 3)]).unwrap();
        let text = format_graph(&g);
        assert_eq!(text, "4 3\n0 1\n1 3\n2 3\n");
        assert_eq!(parse_graph("g", &text).unwrap(), g);
    }

    #[test]
    fn graph_parse_errors_carry_line_numbers() {
        let cases = [
            ("3 1\n1 0\n", 2),
            ("3 2\n0 1\n0 1\n", 3),
            ("3 1\n0 5\n", 2),
            ("3 2\n0 1\n", 3),
            ("3 1\n0 1\n1 2\n", 3),
            ("3 1\n0 x\n", 2),
            ("3 1\n0 1", 2),
        ];
        for (text, line) in cases {
            match parse_graph("g", text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn trace_and_coloring_formats() {
        let moves = vec![Move::new(0, 3), Move::new(2, 1)];
        let text = format_trace(3, &moves);
        assert_eq!(text, "3 2\n0 3\n2 1\n");
        assert_eq!(parse_trace("t", &text).unwrap(), (3, moves));
        assert!(matches!(
            parse_trace("t", "3 2\n0 3\n"),
            Err(Error::Parse { line: 3, .. })
        ));

        let c = Coloring::new(vec![4, 0, 2]);
        assert_eq!(format_coloring(&c), "4\n0\n2\n");
        assert_eq!(parse_coloring("c", "4\n0\n2\n").unwrap(), c);
        assert!(matches!(
            parse_coloring("c", "4\n-1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn partition_q_override() {
        let p = parse_partition("p", "0\n2\n", Some(4)).unwrap();
        assert_eq!(p.q(), 4);
        assert_eq!(p.empty_classes(), 2);
        assert!(parse_partition("p", "0\n2\n", Some(2)).is_err());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.txt");
        write_atomic(&path, "a\n").unwrap();
        write_atomic(&path, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "b\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    proptest! {
        #[test]
        fn graph_round_trip(n in 1usize..30, seed in any::<u64>(), m in 0u64..40) {
            let m = m.min(crate::generate::pair_count(n));
            let g = crate::generate::gen_gnm(n, m, seed).unwrap();
            prop_assert_eq!(parse_graph("g", &format_graph(&g)).unwrap(), g);
        }
    }
}
