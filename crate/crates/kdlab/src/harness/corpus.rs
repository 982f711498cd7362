//! Corpus acquisition for the suites: internal enumeration, graph6
//! files, and seeded random sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::CorpusSpec;
use crate::enumerate::{all_graphs, MAX_ENUM_VERTICES};
use crate::graph::Graph;
use crate::graph6::{parse_graph6, Graph6Error};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus file {path}, line {line}: {source}")]
    Parse {
        path: String,
        line: usize,
        #[source]
        source: Graph6Error,
    },
    #[error("corpus file {path}, line {line}: graph has order {got}, suite requires order {want}")]
    WrongOrder {
        path: String,
        line: usize,
        got: usize,
        want: usize,
    },
    #[error("corpus file {path} contains no graphs of order {want} passing the filters")]
    Empty { path: String, want: usize },
    #[error("{reason}")]
    Refused { reason: String },
    #[error(
        "random sampling stalled: accepted {accepted} of {requested} after {tried} attempts \
         (order {n}, min degree {min_deg}); the conditioned family is too sparse"
    )]
    Stalled {
        tried: u64,
        accepted: u64,
        requested: u64,
        n: usize,
        min_deg: usize,
    },
}

/// Corpus origin and filter counters recorded into the suite report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusNotes {
    pub description: String,
    pub skipped_disconnected: u64,
    pub skipped_min_degree: u64,
}

impl CorpusNotes {
    pub fn summary(&self) -> String {
        format!(
            "corpus: {} (skipped {} disconnected, {} below min degree)",
            self.description, self.skipped_disconnected, self.skipped_min_degree
        )
    }
}

/// Loads the corpus for a suite at order `n`, keeping only connected
/// graphs with minimum degree at least `min_deg`.
pub fn load_corpus(
    spec: &CorpusSpec,
    n: usize,
    min_deg: usize,
) -> Result<(Vec<Graph>, CorpusNotes), CorpusError> {
    match spec {
        CorpusSpec::InternalEnumeration => load_internal(n, min_deg),
        CorpusSpec::Graph6File { path } => load_file(path, n, min_deg),
        CorpusSpec::RandomSample { count, seed } => sample(n, min_deg, *count, *seed),
    }
}

fn load_internal(n: usize, min_deg: usize) -> Result<(Vec<Graph>, CorpusNotes), CorpusError> {
    if n > MAX_ENUM_VERTICES {
        return Err(CorpusError::Refused {
            reason: format!(
                "internal enumeration covers orders up to {MAX_ENUM_VERTICES}; order {n} needs a \
                 graph6 corpus file (one graph per line) produced by a full generator run"
            ),
        });
    }
    let mut kept = Vec::new();
    let mut skipped_disconnected = 0;
    let mut skipped_min_degree = 0;
    for g in all_graphs(n).map_err(|e| CorpusError::Refused { reason: e.to_string() })? {
        if !g.is_connected() {
            skipped_disconnected += 1;
        } else if !g.min_degree().map_or(min_deg == 0, |d| d >= min_deg) {
            skipped_min_degree += 1;
        } else {
            kept.push(g.clone());
        }
    }
    let notes = CorpusNotes {
        description: format!("internal enumeration of all graphs of order {n}"),
        skipped_disconnected,
        skipped_min_degree,
    };
    Ok((kept, notes))
}

fn load_file(path: &str, n: usize, min_deg: usize) -> Result<(Vec<Graph>, CorpusNotes), CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_string(),
        source,
    })?;
    let mut kept = Vec::new();
    let mut skipped_disconnected = 0;
    let mut skipped_min_degree = 0;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('>') {
            continue;
        }
        let g = parse_graph6(line).map_err(|source| CorpusError::Parse {
            path: path.to_string(),
            line: idx + 1,
            source,
        })?;
        if g.order() != n {
            return Err(CorpusError::WrongOrder {
                path: path.to_string(),
                line: idx + 1,
                got: g.order(),
                want: n,
            });
        }
        if !g.is_connected() {
            skipped_disconnected += 1;
        } else if !g.min_degree().map_or(min_deg == 0, |d| d >= min_deg) {
            skipped_min_degree += 1;
        } else {
            kept.push(g);
        }
    }
    if kept.is_empty() {
        return Err(CorpusError::Empty {
            path: path.to_string(),
            want: n,
        });
    }
    let notes = CorpusNotes {
        description: format!("graph6 file {path}"),
        skipped_disconnected,
        skipped_min_degree,
    };
    Ok((kept, notes))
}

/// Uniform over edge subsets of the complete graph, conditioned on
/// connectivity and minimum degree, by rejection.
fn sample(
    n: usize,
    min_deg: usize,
    count: u64,
    seed: u64,
) -> Result<(Vec<Graph>, CorpusNotes), CorpusError> {
    if n < 2 || n > crate::graph::MAX_VERTICES {
        return Err(CorpusError::Refused {
            reason: format!("random sampling needs 2 <= n <= {}, got {n}", crate::graph::MAX_VERTICES),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kept = Vec::with_capacity(count as usize);
    let mut tried = 0u64;
    let cap = count.saturating_mul(10_000).max(10_000);
    while (kept.len() as u64) < count {
        if tried >= cap {
            return Err(CorpusError::Stalled {
                tried,
                accepted: kept.len() as u64,
                requested: count,
                n,
                min_deg,
            });
        }
        tried += 1;
        let mut g = Graph::empty(n).expect("order bounded above");
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(0.5) {
                    g.add_edge(u, v);
                }
            }
        }
        if g.is_connected() && g.min_degree().map_or(min_deg == 0, |d| d >= min_deg) {
            kept.push(g);
        }
    }
    let rejected = tried - count;
    let notes = CorpusNotes {
        description: format!(
            "random sample: {count} uniform edge subsets of order {n} conditioned on \
             connectivity and min degree >= {min_deg}, seed {seed} ({rejected} rejected)"
        ),
        skipped_disconnected: 0,
        skipped_min_degree: 0,
    };
    Ok((kept, notes))
}
