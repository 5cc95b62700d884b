//! Nearly-plat front diagrams: parsing, strand bookkeeping, Maslov potential
//! and the graded generator set.
//!
//! Strand positions are 0-based internally (position 0 is the top strand).
//! The text grammar and all user-facing output are 1-based.

use std::collections::VecDeque;
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EventKind {
    LeftCusp,
    Crossing,
    RightCusp,
}

impl EventKind {
    pub fn token(self) -> &'static str {
        match self {
            EventKind::LeftCusp => "l",
            EventKind::Crossing => "x",
            EventKind::RightCusp => "r",
        }
    }

    fn from_token(t: &str) -> Option<Self> {
        match t {
            "l" => Some(EventKind::LeftCusp),
            "x" => Some(EventKind::Crossing),
            "r" => Some(EventKind::RightCusp),
            _ => None,
        }
    }
}

/// One singularity of the front. `k` is the 0-based position of the upper
/// of the two strands involved, counted in the slice just left of the event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrontEvent {
    pub kind: EventKind,
    pub k: usize,
}

impl FrontEvent {
    pub fn new(kind: EventKind, k: usize) -> Self {
        Self { kind, k }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeneratorKind {
    Crossing,
    RightCusp,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub id: usize,
    pub kind: GeneratorKind,
    pub event_index: usize,
    pub degree: i64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("event {} ({token} {k}): strand index out of range for {strands} strands", .event + 1)]
    StrandIndexOutOfRange {
        event: usize,
        token: &'static str,
        k: usize,
        strands: usize,
    },
    #[error("front is empty")]
    Empty,
    #[error("strand count is {0} at the end of the front, expected 0")]
    NonzeroFinalStrandCount(usize),
    #[error("front has {0} components; only knots are supported")]
    MultipleComponents(usize),
    #[error("event {}: plat ordering violated (left cusps, then crossings, then right cusps)", .event + 1)]
    PlatOrdering { event: usize },
    #[error("event {} ({token} {k}): cusps must join strands 2i-1 and 2i", .event + 1)]
    CuspPosition {
        event: usize,
        token: &'static str,
        k: usize,
    },
    #[error("rotation number nonzero: Maslov potential constraints are inconsistent")]
    RotationNumberNonzero,
}

/// A statement of the line-oriented text format, split into tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub line: usize,
    pub column: usize,
    pub tokens: Vec<String>,
}

impl Statement {
    pub fn error(&self, message: impl Into<String>) -> DiagramError {
        DiagramError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

/// Split text into statements separated by `;` or newlines, dropping `#` comments.
pub fn statements(text: &str) -> Vec<Statement> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut col = 0;
        for part in line.split(';') {
            let lead = part.len() - part.trim_start().len();
            let tokens: Vec<String> = part.split_whitespace().map(str::to_owned).collect();
            if !tokens.is_empty() {
                out.push(Statement {
                    line: li + 1,
                    column: col + lead + 1,
                    tokens,
                });
            }
            col += part.len() + 1;
        }
    }
    out
}

pub(crate) fn parse_index(st: &Statement, tok: &str, what: &str) -> Result<usize, DiagramError> {
    match tok.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v - 1),
        _ => Err(st.error(format!("expected positive integer {what}, found `{tok}`"))),
    }
}

#[derive(Serialize, Deserialize)]
struct EventJson {
    op: String,
    k: usize,
}

#[derive(Serialize, Deserialize)]
struct FrontJson {
    events: Vec<EventJson>,
}

/// A validated nearly-plat front with all derived data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontDiagram {
    events: Vec<FrontEvent>,
    strand_counts: Vec<usize>,
    /// Strand-segment id at each position of each gap.
    segments: Vec<Vec<usize>>,
    maslov: Vec<i64>,
    generators: Vec<Generator>,
}

impl FrontDiagram {
    pub fn new(events: Vec<FrontEvent>) -> Result<Self, DiagramError> {
        if events.is_empty() {
            return Err(DiagramError::Empty);
        }
        let mut phase = 0;
        for (i, e) in events.iter().enumerate() {
            let p = match e.kind {
                EventKind::LeftCusp => 0,
                EventKind::Crossing => 1,
                EventKind::RightCusp => 2,
            };
            if p < phase {
                return Err(DiagramError::PlatOrdering { event: i });
            }
            phase = p;
        }

        let mut segments: Vec<Vec<usize>> = vec![Vec::new()];
        let mut strand_counts = vec![0];
        let mut cusp_pairs = Vec::new(); // (upper, lower) segment at each cusp
        let mut next_segment = 0;
        for (i, e) in events.iter().enumerate() {
            let mut cur = segments.last().unwrap().clone();
            let n = cur.len();
            let ok = match e.kind {
                EventKind::LeftCusp => e.k <= n,
                _ => e.k + 1 < n,
            };
            if !ok {
                return Err(DiagramError::StrandIndexOutOfRange {
                    event: i,
                    token: e.kind.token(),
                    k: e.k + 1,
                    strands: n,
                });
            }
            if e.kind != EventKind::Crossing && e.k % 2 == 1 {
                return Err(DiagramError::CuspPosition {
                    event: i,
                    token: e.kind.token(),
                    k: e.k + 1,
                });
            }
            match e.kind {
                EventKind::LeftCusp => {
                    cur.splice(e.k..e.k, [next_segment, next_segment + 1]);
                    cusp_pairs.push((next_segment, next_segment + 1));
                    next_segment += 2;
                }
                EventKind::Crossing => cur.swap(e.k, e.k + 1),
                EventKind::RightCusp => {
                    cusp_pairs.push((cur[e.k], cur[e.k + 1]));
                    cur.drain(e.k..e.k + 2);
                }
            }
            strand_counts.push(cur.len());
            segments.push(cur);
        }
        let last = *strand_counts.last().unwrap();
        if last != 0 {
            return Err(DiagramError::NonzeroFinalStrandCount(last));
        }

        let mut uf = UnionFind::<usize>::new(next_segment);
        for &(a, b) in &cusp_pairs {
            uf.union(a, b);
        }
        let mut roots: Vec<usize> = (0..next_segment).map(|s| uf.find(s)).collect();
        roots.sort_unstable();
        roots.dedup();
        if roots.len() != 1 {
            return Err(DiagramError::MultipleComponents(roots.len()));
        }

        // Segment 1 is the lower strand of the first left cusp.
        let maslov = solve_maslov(next_segment, &cusp_pairs, 1)?;

        let mut generators = Vec::new();
        let (mut nb, mut nc) = (0, 0);
        for (i, e) in events.iter().enumerate() {
            match e.kind {
                EventKind::Crossing => {
                    nb += 1;
                    let seg = &segments[i];
                    generators.push(Generator {
                        id: generators.len(),
                        kind: GeneratorKind::Crossing,
                        event_index: i,
                        degree: maslov[seg[e.k]] - maslov[seg[e.k + 1]],
                        label: format!("b{nb}"),
                    });
                }
                EventKind::RightCusp => {
                    nc += 1;
                    generators.push(Generator {
                        id: generators.len(),
                        kind: GeneratorKind::RightCusp,
                        event_index: i,
                        degree: 1,
                        label: format!("c{nc}"),
                    });
                }
                EventKind::LeftCusp => {}
            }
        }

        Ok(Self {
            events,
            strand_counts,
            segments,
            maslov,
            generators,
        })
    }

    pub fn events(&self) -> &[FrontEvent] {
        &self.events
    }

    /// Strand count of gap `g` (gap `g` lies just left of event `g`).
    pub fn strand_count(&self, gap: usize) -> usize {
        self.strand_counts[gap]
    }

    pub fn strand_counts(&self) -> &[usize] {
        &self.strand_counts
    }

    pub fn segment_at(&self, gap: usize, pos: usize) -> usize {
        self.segments[gap][pos]
    }

    /// Maslov potential of every strand segment.
    pub fn maslov(&self) -> &[i64] {
        &self.maslov
    }

    /// Maslov potential of the strand at `pos` in gap `gap`.
    pub fn mu(&self, gap: usize, pos: usize) -> i64 {
        self.maslov[self.segments[gap][pos]]
    }

    pub fn mus(&self, gap: usize) -> Vec<i64> {
        self.segments[gap].iter().map(|&s| self.maslov[s]).collect()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn crossing_count(&self) -> usize {
        self.generators
            .iter()
            .filter(|g| g.kind == GeneratorKind::Crossing)
            .count()
    }

    /// Generator attached to event `e`, if it is a crossing or right cusp.
    pub fn generator_at_event(&self, e: usize) -> Option<&Generator> {
        self.generators.iter().find(|g| g.event_index == e)
    }

    pub fn labels(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.label.clone()).collect()
    }

    /// Canonical text form, one event per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.events {
            s.push_str(&format!("{} {}\n", e.kind.token(), e.k + 1));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let j = FrontJson {
            events: self
                .events
                .iter()
                .map(|e| EventJson {
                    op: e.kind.token().to_owned(),
                    k: e.k + 1,
                })
                .collect(),
        };
        serde_json::to_string(&j).expect("front serializes")
    }
}

impl fmt::Display for FrontDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .events
            .iter()
            .map(|e| format!("{} {}", e.kind.token(), e.k + 1))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Solve `mu[upper] = mu[lower] + 1` for every pair, normalized to `mu[root] = 0`.
pub fn solve_maslov(n_segments: usize, constraints: &[(usize, usize)], root: usize) -> Result<Vec<i64>, DiagramError> {
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n_segments];
    for &(u, l) in constraints {
        adj[l].push((u, 1));
        adj[u].push((l, -1));
    }
    let mut mu: Vec<Option<i64>> = vec![None; n_segments];
    mu[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(s) = queue.pop_front() {
        let m = mu[s].unwrap();
        for &(t, w) in &adj[s] {
            match mu[t] {
                None => {
                    mu[t] = Some(m + w);
                    queue.push_back(t);
                }
                Some(v) if v != m + w => return Err(DiagramError::RotationNumberNonzero),
                Some(_) => {}
            }
        }
    }
    mu.into_iter()
        .map(|v| v.ok_or(DiagramError::MultipleComponents(2)))
        .collect()
}

/// Parse front statements (`l`, `x`, `r`) from already-split statements.
/// Other statements are ignored; callers decide whether they are legal.
pub fn front_from_statements(sts: &[Statement]) -> Result<FrontDiagram, DiagramError> {
    let mut events = Vec::new();
    for st in sts {
        if let Some(kind) = EventKind::from_token(&st.tokens[0]) {
            if st.tokens.len() != 2 {
                return Err(st.error(format!("`{}` takes exactly one strand index", st.tokens[0])));
            }
            let k = parse_index(st, &st.tokens[1], "strand index")?;
            events.push(FrontEvent::new(kind, k));
        }
    }
    FrontDiagram::new(events)
}

/// Parse a front from the text grammar or its JSON mirror.
pub fn parse_front(text: &str) -> Result<FrontDiagram, DiagramError> {
    if text.trim_start().starts_with('{') {
        let j: FrontJson = serde_json::from_str(text).map_err(|e| DiagramError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut events = Vec::new();
        for (i, ev) in j.events.iter().enumerate() {
            let kind = EventKind::from_token(&ev.op).ok_or_else(|| DiagramError::Syntax {
                line: 1,
                column: 1,
                message: format!("event {i}: unknown op `{}`", ev.op),
            })?;
            if ev.k == 0 {
                return Err(DiagramError::Syntax {
                    line: 1,
                    column: 1,
                    message: format!("event {i}: strand index must be positive"),
                });
            }
            events.push(FrontEvent::new(kind, ev.k - 1));
        }
        return FrontDiagram::new(events);
    }
    let sts = statements(text);
    for st in &sts {
        if EventKind::from_token(&st.tokens[0]).is_none() {
            return Err(st.error(format!("unknown statement `{}`", st.tokens[0])));
        }
    }
    front_from_statements(&sts)
}
