//! Edge-disjoint biclique covers.
//!
//! The edge set is split into bicliques `S x C` (every source points to every
//! target) plus residual edges. A biclique costs `|S| + |C|` words and the same
//! number of additions in a product: first `c = sum(x[C])`, then `y[i] += c`
//! for every `i` in `S`.
//!
//! # Text format
//!
//! ```text
//! # comments and blank lines are ignored
//! N <vertex count>
//! B <k>                      one block per biclique, in order
//! <k source ids>
//! <c> <c target ids>
//! R                          residual section, must come last
//! <u> <v>                    one residual edge per line
//! ```
//!
//! Ids are ascending within every line and residual edges are sorted.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{CsrGraph, VertexId};
use crate::kernel::{MatVec, OpCount};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Biclique {
    pub sources: Vec<VertexId>,
    pub targets: Vec<VertexId>,
}

impl Biclique {
    pub fn edges(&self) -> u64 {
        self.sources.len() as u64 * self.targets.len() as u64
    }

    pub fn words(&self) -> u64 {
        (self.sources.len() + self.targets.len()) as u64
    }

    /// Words saved over listing the edges individually.
    pub fn gain(&self) -> i64 {
        self.edges() as i64 - self.words() as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BicliqueCover {
    n: usize,
    bicliques: Vec<Biclique>,
    residual: Vec<(VertexId, VertexId)>,
}

fn sorted_in_range(ids: &[VertexId], n: usize) -> bool {
    ids.windows(2).all(|w| w[0] < w[1]) && ids.last().is_none_or(|&v| (v as usize) < n)
}

impl BicliqueCover {
    /// Checks the structural invariants (sorted, nonempty sides, ids in range).
    /// Whether the parts partition a particular graph is checked by
    /// [`verify_cover`].
    pub fn new(
        n: usize,
        bicliques: Vec<Biclique>,
        residual: Vec<(VertexId, VertexId)>,
    ) -> Result<Self> {
        for (r, b) in bicliques.iter().enumerate() {
            if b.sources.is_empty() || b.targets.is_empty() {
                return Err(Error::Parameter(format!("biclique {r} has an empty side")));
            }
            if !sorted_in_range(&b.sources, n) || !sorted_in_range(&b.targets, n) {
                return Err(Error::Parameter(format!(
                    "biclique {r} ids must be ascending and below {n}"
                )));
            }
        }
        if !residual.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Parameter("residual edges must be sorted and distinct".into()));
        }
        if let Some(&(u, v)) = residual.iter().find(|&&(u, v)| u as usize >= n || v as usize >= n) {
            return Err(Error::OutOfRange {
                edge: (u.into(), v.into()),
                n,
                line: None,
            });
        }
        Ok(BicliqueCover {
            n,
            bicliques,
            residual,
        })
    }

    /// The cover that lists every edge of `g` as residual.
    pub fn residual_only(g: &CsrGraph) -> Self {
        BicliqueCover {
            n: g.num_vertices(),
            bicliques: Vec::new(),
            residual: g.edges().collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn bicliques(&self) -> &[Biclique] {
        &self.bicliques
    }

    pub fn residual(&self) -> &[(VertexId, VertexId)] {
        &self.residual
    }

    /// `sum(|S| + |C|) + |residual|`.
    pub fn compressed_size(&self) -> u64 {
        self.bicliques.iter().map(Biclique::words).sum::<u64>() + self.residual.len() as u64
    }

    /// Number of edges represented, counting overlaps twice.
    pub fn covered_edges(&self) -> u64 {
        self.bicliques.iter().map(Biclique::edges).sum::<u64>() + self.residual.len() as u64
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "N {}", self.n).unwrap();
        let join = |ids: &[VertexId]| ids.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        for b in &self.bicliques {
            writeln!(out, "B {}", b.sources.len()).unwrap();
            writeln!(out, "{}", join(&b.sources)).unwrap();
            writeln!(out, "{} {}", b.targets.len(), join(&b.targets)).unwrap();
        }
        out.push_str("R\n");
        for (u, v) in &self.residual {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let parse_err = |line: usize, msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        let numbers = |line: usize, s: &str| -> Result<Vec<u64>> {
            s.split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|_| parse_err(line, &format!("bad integer {t:?}"))))
                .collect()
        };
        let ids = |line: usize, vals: &[u64]| -> Result<Vec<VertexId>> {
            vals.iter()
                .map(|&v| VertexId::try_from(v).map_err(|_| parse_err(line, "vertex id too large")))
                .collect()
        };

        let (line, header) = lines.next().ok_or_else(|| parse_err(1, "missing N header"))?;
        let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["N", count] => count
                .parse::<usize>()
                .map_err(|_| parse_err(line, "bad vertex count"))?,
            _ => return Err(parse_err(line, "expected `N <count>`")),
        };

        let mut bicliques = Vec::new();
        let mut residual = Vec::new();
        let mut in_residual = false;
        while let Some((line, l)) = lines.next() {
            if in_residual {
                let v = numbers(line, l)?;
                if v.len() != 2 {
                    return Err(parse_err(line, "expected `u v`"));
                }
                let e = ids(line, &v)?;
                residual.push((e[0], e[1]));
                continue;
            }
            let mut tok = l.split_whitespace();
            match (tok.next(), tok.next(), tok.next()) {
                (Some("R"), None, _) => in_residual = true,
                (Some("B"), Some(k), None) => {
                    let k: usize = k.parse().map_err(|_| parse_err(line, "bad biclique size"))?;
                    let (sline, s) = lines.next().ok_or_else(|| parse_err(line + 1, "missing sources"))?;
                    let sources = ids(sline, &numbers(sline, s)?)?;
                    if sources.len() != k {
                        return Err(parse_err(sline, &format!("expected {k} sources")));
                    }
                    let (tline, t) = lines.next().ok_or_else(|| parse_err(sline + 1, "missing targets"))?;
                    let t = numbers(tline, t)?;
                    match t.split_first() {
                        Some((&c, rest)) if rest.len() as u64 == c => bicliques.push(Biclique {
                            sources,
                            targets: ids(tline, rest)?,
                        }),
                        _ => return Err(parse_err(tline, "target count does not match ids")),
                    }
                }
                _ => return Err(parse_err(line, "expected `B <k>` or `R`")),
            }
        }
        if !in_residual {
            return Err(parse_err(text.lines().count() + 1, "missing R section"));
        }
        BicliqueCover::new(n, bicliques, residual)
    }
}

/// Computes `A * x` from the cover in `compressed_size` additions.
pub fn matvec_biclique(cover: &BicliqueCover, x: &[f64]) -> Result<(Vec<f64>, OpCount)> {
    cover.matvec(x)
}

impl MatVec for BicliqueCover {
    fn dim(&self) -> usize {
        self.n
    }

    fn matvec_into(&self, x: &[f64], y: &mut [f64]) -> Result<OpCount> {
        Error::check_len(self.n, x.len())?;
        Error::check_len(self.n, y.len())?;
        y.fill(0.0);
        for b in &self.bicliques {
            let c: f64 = b.targets.iter().map(|&j| x[j as usize]).sum();
            for &i in &b.sources {
                y[i as usize] += c;
            }
        }
        for &(i, j) in &self.residual {
            y[i as usize] += x[j as usize];
        }
        Ok(OpCount {
            adds: self.compressed_size(),
            references_used: 0,
        })
    }
}

/// True iff the bicliques and residual edges partition the edges of `g`.
pub fn verify_cover(cover: &BicliqueCover, g: &CsrGraph) -> bool {
    if cover.n != g.num_vertices() || cover.covered_edges() != g.num_edges() as u64 {
        return false;
    }
    let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(g.num_edges());
    for b in &cover.bicliques {
        for &u in &b.sources {
            edges.extend(b.targets.iter().map(|&v| (u, v)));
        }
    }
    edges.extend_from_slice(&cover.residual);
    edges.sort_unstable();
    // equal counts plus equal sorted sequences rule out duplicates
    edges.into_iter().eq(g.edges())
}

fn mix(x: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const SIGNATURES: u64 = 4;

/// Grows a biclique inside a group of rows that share a min-hash: targets are
/// added in decreasing frequency while the rows containing all of them are
/// kept as sources. Returns the prefix with the best gain.
fn grow_candidate(group: &[VertexId], rows: &[Vec<VertexId>]) -> Option<Biclique> {
    let mut all: Vec<VertexId> = group
        .iter()
        .flat_map(|&u| rows[u as usize].iter().copied())
        .collect();
    all.sort_unstable();
    let mut targets: Vec<(usize, VertexId)> = all
        .chunk_by(|a, b| a == b)
        .filter(|c| c.len() >= 2)
        .map(|c| (c.len(), c[0]))
        .collect();
    targets.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    let mut sources = group.to_vec();
    let mut chosen = Vec::new();
    let mut best: Option<(i64, usize, Vec<VertexId>)> = None;
    for (_, t) in targets {
        let kept: Vec<VertexId> = sources
            .iter()
            .copied()
            .filter(|&u| rows[u as usize].binary_search(&t).is_ok())
            .collect();
        if kept.len() < 2 {
            continue;
        }
        sources = kept;
        chosen.push(t);
        let (s, c) = (sources.len() as i64, chosen.len() as i64);
        let gain = s * c - s - c;
        if best.as_ref().is_none_or(|b| gain > b.0) {
            best = Some((gain, chosen.len(), sources.clone()));
        }
    }
    best.map(|(_, width, sources)| {
        let mut targets = chosen[..width].to_vec();
        targets.sort_unstable();
        Biclique { sources, targets }
    })
}

fn candidates(rows: &[Vec<VertexId>]) -> Vec<Biclique> {
    let mut out = Vec::new();
    for k in 0..SIGNATURES {
        let mut keyed: Vec<(u64, VertexId)> = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.len() >= 2)
            .map(|(u, r)| {
                let sig = r.iter().map(|&t| mix(u64::from(t) ^ (k << 32))).min().unwrap();
                (sig, u as VertexId)
            })
            .collect();
        keyed.sort_unstable();
        for group in keyed.chunk_by(|a, b| a.0 == b.0) {
            if group.len() < 2 {
                continue;
            }
            let members: Vec<VertexId> = group.iter().map(|&(_, u)| u).collect();
            out.extend(grow_candidate(&members, rows));
        }
    }
    out.sort_unstable_by(|a, b| {
        b.gain()
            .cmp(&a.gain())
            .then_with(|| a.sources.cmp(&b.sources))
            .then_with(|| a.targets.cmp(&b.targets))
    });
    out.dedup();
    out
}

fn contains_all(row: &[VertexId], targets: &[VertexId]) -> bool {
    let mut k = 0;
    for &t in targets {
        match row[k..].binary_search(&t) {
            Ok(pos) => k += pos + 1,
            Err(_) => return false,
        }
    }
    true
}

/// Greedy biclique extraction. Each round groups rows by min-hash signatures,
/// grows one candidate per group, and emits candidates in order of gain after
/// re-checking them against the edges still uncovered. Stops when a round
/// emits nothing with gain at least `min_gain`, or after `max_rounds` rounds.
pub fn extract_greedy(
    g: &CsrGraph,
    min_gain: u64,
    max_rounds: Option<usize>,
) -> Result<BicliqueCover> {
    if min_gain < 1 {
        return Err(Error::Parameter("min_gain must be at least 1".into()));
    }
    let mut rows: Vec<Vec<VertexId>> = g.rows().map(<[_]>::to_vec).collect();
    let mut bicliques = Vec::new();
    let mut round = 0;
    while max_rounds.is_none_or(|max| round < max) {
        round += 1;
        let mut emitted = false;
        for cand in candidates(&rows) {
            let sources: Vec<VertexId> = cand
                .sources
                .into_iter()
                .filter(|&u| contains_all(&rows[u as usize], &cand.targets))
                .collect();
            let b = Biclique {
                sources,
                targets: cand.targets,
            };
            if b.gain() < min_gain as i64 {
                continue;
            }
            for &u in &b.sources {
                let row = &mut rows[u as usize];
                row.retain(|t| b.targets.binary_search(t).is_err());
            }
            bicliques.push(b);
            emitted = true;
        }
        if !emitted {
            break;
        }
    }
    let residual = rows
        .iter()
        .enumerate()
        .flat_map(|(u, r)| r.iter().map(move |&v| (u as VertexId, v)))
        .collect();
    Ok(BicliqueCover {
        n: g.num_vertices(),
        bicliques,
        residual,
    })
}
