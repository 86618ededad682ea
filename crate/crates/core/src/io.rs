//! File formats: whitespace-separated edge lists, the `RMV1` container for
//! differential matrices, biclique cover text files and dense vectors.
//!
//! Every writer goes through a temporary file in the destination directory
//! and renames it into place, so a failed command leaves no output behind.

use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use integer_encoding::VarInt;

use crate::biclique::BicliqueCover;
use crate::error::{Error, Result};
use crate::graph::{CsrGraph, VertexId};
use crate::refcompress::ReferencedMatrix;

pub const RMV_MAGIC: &[u8; 4] = b"RMV1";
pub const RMV_VERSION: u8 = 0x01;
const RMV_HEADER_LEN: usize = 4 + 1 + 8 + 8;

/// Where an edge list comes from.
#[derive(Debug, Clone, Default)]
pub struct EdgeListSource {
    /// `None` reads standard input.
    pub path: Option<PathBuf>,
    pub vertices: Option<usize>,
}

/// Parses `u v` lines. `#` starts a comment line; a `# vertices <n>` comment
/// declares the vertex count when none is given by the caller. Otherwise the
/// count is one more than the largest id seen.
pub fn read_edge_list<R: BufRead>(reader: R, vertices: Option<usize>) -> Result<CsrGraph> {
    let mut edges = Vec::new();
    let mut declared = vertices;
    let mut lines = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line_no = k + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            msg: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if declared.is_none() {
                if let Some(count) = comment.trim().strip_prefix("vertices ") {
                    declared = Some(count.trim().parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("bad vertex count {count:?}"),
                    })?);
                }
            }
            continue;
        }
        let mut tok = line.split_whitespace();
        let (Some(a), Some(b), None) = (tok.next(), tok.next(), tok.next()) else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected two vertex ids, got {line:?}"),
            });
        };
        let parse = |t: &str| {
            t.parse::<u64>().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad vertex id {t:?}"),
            })
        };
        let (u, v) = (parse(a)?, parse(b)?);
        edges.push((u, v));
        lines.push(line_no);
    }

    let n = match declared {
        Some(n) => n,
        None => edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0) as usize,
    };
    let mut narrow = Vec::with_capacity(edges.len());
    for (&(u, v), &line) in edges.iter().zip(&lines) {
        if u >= n as u64 || v >= n as u64 {
            return Err(Error::OutOfRange {
                edge: (u, v),
                n,
                line: Some(line),
            });
        }
        narrow.push((u as VertexId, v as VertexId));
    }
    CsrGraph::from_edges(&narrow, n)
}

pub fn load_edge_list(src: &EdgeListSource) -> Result<CsrGraph> {
    match &src.path {
        Some(path) => {
            let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
            read_edge_list(BufReader::new(file), src.vertices)
        }
        None => read_edge_list(io::stdin().lock(), src.vertices),
    }
}

pub fn write_edge_list<W: Write>(g: &CsrGraph, mut w: W) -> io::Result<()> {
    writeln!(w, "# vertices {}", g.num_vertices())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()
}

pub fn save_edge_list(g: &CsrGraph, path: &Path) -> Result<()> {
    write_atomic(path, |w| write_edge_list(g, w))
}

fn push_varint(out: &mut Vec<u8>, value: u64) {
    let mut buf = [0u8; 10];
    let len = value.encode_var(&mut buf);
    out.extend_from_slice(&buf[..len]);
}

/// First column is stored as `c + 1`, later ones as gaps to their predecessor.
fn push_columns(out: &mut Vec<u8>, cols: &[VertexId]) {
    push_varint(out, cols.len() as u64);
    let mut prev: Option<VertexId> = None;
    for &c in cols {
        let gap = match prev {
            None => u64::from(c) + 1,
            Some(p) => u64::from(c - p),
        };
        push_varint(out, gap);
        prev = Some(c);
    }
}

pub fn encode_rmv(rm: &ReferencedMatrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(RMV_HEADER_LEN + 3 * rm.len() + 2 * rm.m_prime());
    out.extend_from_slice(RMV_MAGIC);
    out.push(RMV_VERSION);
    out.extend_from_slice(&(rm.len() as u64).to_le_bytes());
    out.extend_from_slice(&(rm.m_prime() as u64).to_le_bytes());
    for (i, r) in rm.references().iter().enumerate() {
        push_varint(&mut out, r.map_or(0, |r| (i - r as usize) as u64));
    }
    for i in 0..rm.len() {
        push_columns(&mut out, rm.plus_row(i));
        push_columns(&mut out, rm.minus_row(i));
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn varint(&mut self, what: &str) -> Result<u64> {
        match u64::decode_var(&self.bytes[self.pos..]) {
            Some((v, len)) => {
                self.pos += len;
                Ok(v)
            }
            None => Err(Error::Corrupt(format!(
                "truncated or malformed varint in {what} at byte {}",
                self.pos
            ))),
        }
    }

    fn columns(&mut self, n: usize, row: usize) -> Result<Vec<VertexId>> {
        let count = self.varint("column count")?;
        if count > self.remaining() as u64 || count > n as u64 {
            return Err(Error::Corrupt(format!("row {row} claims {count} columns")));
        }
        let mut cols = Vec::with_capacity(count as usize);
        let mut next = 0u64;
        for k in 0..count {
            let gap = self.varint("column gap")?;
            if gap == 0 {
                return Err(Error::Corrupt(format!("row {row} has a zero column gap")));
            }
            next = if k == 0 { gap - 1 } else { next.saturating_add(gap) };
            if next >= n as u64 {
                return Err(Error::Corrupt(format!(
                    "row {row} has column {next} out of range for {n} vertices"
                )));
            }
            cols.push(next as VertexId);
        }
        Ok(cols)
    }
}

pub fn decode_rmv(bytes: &[u8]) -> Result<ReferencedMatrix> {
    if bytes.len() < 5 || &bytes[..4] != RMV_MAGIC {
        return Err(Error::Format("missing RMV1 magic".into()));
    }
    if bytes[4] != RMV_VERSION {
        return Err(Error::Format(format!("unsupported RMV version {}", bytes[4])));
    }
    if bytes.len() < RMV_HEADER_LEN {
        return Err(Error::Corrupt("truncated header".into()));
    }
    let n = u64::from_le_bytes(bytes[5..13].try_into().unwrap());
    let m_prime = u64::from_le_bytes(bytes[13..21].try_into().unwrap());
    let mut cur = Cursor {
        bytes,
        pos: RMV_HEADER_LEN,
    };
    // every row needs at least three bytes
    if n > (cur.remaining() / 3) as u64 || n > u64::from(VertexId::MAX) + 1 {
        return Err(Error::Corrupt(format!("{n} rows cannot fit in {} bytes", bytes.len())));
    }
    let n = n as usize;
    let mut refs = Vec::with_capacity(n);
    for i in 0..n {
        let dist = cur.varint("reference")?;
        if dist == 0 {
            refs.push(None);
        } else if dist > i as u64 {
            return Err(Error::Corrupt(format!("row {i} references {dist} rows back")));
        } else {
            refs.push(Some((i as u64 - dist) as u32));
        }
    }
    let mut plus_rows = Vec::with_capacity(n);
    let mut minus_rows = Vec::with_capacity(n);
    let mut total = 0u64;
    for i in 0..n {
        let plus = cur.columns(n, i)?;
        let minus = cur.columns(n, i)?;
        total += (plus.len() + minus.len()) as u64;
        plus_rows.push(plus);
        minus_rows.push(minus);
    }
    if cur.remaining() != 0 {
        return Err(Error::Corrupt(format!("{} trailing bytes", cur.remaining())));
    }
    if total != m_prime {
        return Err(Error::Corrupt(format!(
            "header declares {m_prime} nonzeros but body holds {total}"
        )));
    }
    ReferencedMatrix::from_parts(refs, plus_rows, minus_rows)
}

pub fn save_rmv(rm: &ReferencedMatrix, path: &Path) -> Result<()> {
    let bytes = encode_rmv(rm);
    write_atomic(path, |w| w.write_all(&bytes))
}

pub fn load_rmv(path: &Path) -> Result<ReferencedMatrix> {
    decode_rmv(&fs::read(path).map_err(|e| Error::io(path, e))?)
}

/// True if the file starts with the `RMV1` magic.
pub fn is_rmv(path: &Path) -> Result<bool> {
    let mut head = [0u8; 4];
    let mut f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut read = 0;
    while read < 4 {
        match f.read(&mut head[read..]).map_err(|e| Error::io(path, e))? {
            0 => break,
            k => read += k,
        }
    }
    Ok(read == 4 && &head == RMV_MAGIC)
}

pub fn save_cover(cover: &BicliqueCover, path: &Path) -> Result<()> {
    let text = cover.to_text();
    write_atomic(path, |w| w.write_all(text.as_bytes()))
}

pub fn load_cover(path: &Path) -> Result<BicliqueCover> {
    BicliqueCover::from_text(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

/// One real number per line; blank lines and `#` comments are skipped.
pub fn read_vector<R: BufRead>(reader: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: k + 1,
            msg: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(line.parse::<f64>().map_err(|_| Error::Parse {
            line: k + 1,
            msg: format!("bad number {line:?}"),
        })?);
    }
    Ok(out)
}

pub fn load_vector(path: &Path) -> Result<Vec<f64>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_vector(BufReader::new(file))
}

pub fn write_vector<W: Write>(values: &[f64], mut w: W) -> io::Result<()> {
    for v in values {
        writeln!(w, "{v:e}")?;
    }
    w.flush()
}

/// Writes through a temporary sibling file that is renamed over `path` only
/// after `fill` succeeds.
pub fn write_atomic<F>(path: &Path, fill: F) -> Result<()>
where
    F: FnOnce(&mut io::BufWriter<&mut tempfile::NamedTempFile>) -> io::Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    {
        let mut w = io::BufWriter::new(&mut tmp);
        fill(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
