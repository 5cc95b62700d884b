//! Morse complex sequences on a front: propagation of the chain complexes
//! across tangles, validation, and A-form construction.
//!
//! Every event and every handleslide mark is one tangle. Slice `s` (0-based)
//! sits between tangle `s` and tangle `s + 1`; user-facing slice numbers are
//! 1-based, so slice `s` is printed as `x_{s+1}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{
    front_from_statements, parse_index, statements, DiagramError, EventKind, FrontDiagram, GeneratorKind, Statement,
};
use crate::z2linalg::{BasisElement, ChainComplexZ2, Z2Matrix};

/// An explicit handleslide mark between strands `upper < lower` (0-based),
/// placed in gap `gap` (just left of event `gap`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HandleslideMark {
    pub gap: usize,
    pub order: usize,
    pub upper: usize,
    pub lower: usize,
}

impl HandleslideMark {
    pub fn new(gap: usize, order: usize, upper: usize, lower: usize) -> Self {
        Self {
            gap,
            order,
            upper,
            lower,
        }
    }

    /// Whether the maps of two marks commute.
    pub fn commutes_with(&self, other: &HandleslideMark) -> bool {
        self.lower != other.upper && other.lower != self.upper
    }
}

/// Implicit handleslides at a left cusp on strands k, k+1 (positions in the
/// slice just right of the cusp): marks h_{u,k} for each u and h_{k+1,v} for each v.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct CuspData {
    pub u: Vec<usize>,
    pub v: Vec<usize>,
}

impl CuspData {
    pub fn is_empty(&self) -> bool {
        self.u.is_empty() && self.v.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tangle {
    Event(usize),
    Mark(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Clause {
    CrossingCondition,
    RightCuspCondition,
    Triangularity,
    MaslovMismatch,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::CrossingCondition => "crossing condition",
            Clause::RightCuspCondition => "right-cusp condition",
            Clause::Triangularity => "triangularity",
            Clause::MaslovMismatch => "Maslov mismatch",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McsError {
    #[error("{clause} at slice x_{slice} ({tangle})")]
    Violation {
        /// 1-based number of the slice just left of the offending tangle.
        slice: usize,
        clause: Clause,
        tangle: String,
    },
    #[error("mark {index}: {reason}")]
    BadMark { index: usize, reason: String },
    #[error("cusp data at event {event}: {reason}")]
    BadCuspData { event: usize, reason: String },
    #[error("crossing {0} does not have degree 0")]
    NotDegreeZero(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

impl McsError {
    pub fn clause(&self) -> Option<Clause> {
        match self {
            McsError::Violation { clause, .. } => Some(*clause),
            _ => None,
        }
    }
}

/// A validated Morse complex sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mcs {
    front: FrontDiagram,
    marks: Vec<HandleslideMark>,
    cusp_data: BTreeMap<usize, CuspData>,
    tangles: Vec<Tangle>,
    complexes: Vec<ChainComplexZ2>,
}

fn basis_for(mus: Vec<i64>) -> Vec<BasisElement> {
    mus.into_iter()
        .enumerate()
        .map(|(i, degree)| BasisElement {
            label: format!("e{}", i + 1),
            degree,
        })
        .collect()
}

fn normalize_marks(front: &FrontDiagram, mut marks: Vec<HandleslideMark>) -> Result<Vec<HandleslideMark>, McsError> {
    let n_events = front.events().len();
    for (index, m) in marks.iter().enumerate() {
        if m.gap == 0 || m.gap >= n_events {
            return Err(McsError::BadMark {
                index,
                reason: format!("gap {} has no strands", m.gap),
            });
        }
        let n = front.strand_count(m.gap);
        if m.upper >= m.lower || m.lower >= n {
            return Err(McsError::BadMark {
                index,
                reason: format!(
                    "strands {},{} invalid in a gap with {n} strands",
                    m.upper + 1,
                    m.lower + 1
                ),
            });
        }
    }
    marks.sort_by_key(|m| (m.gap, m.order));
    for w in marks.windows(2) {
        if (w[0].gap, w[0].order) == (w[1].gap, w[1].order) {
            return Err(McsError::BadMark {
                index: 0,
                reason: format!("two marks share gap {} order {}", w[0].gap, w[0].order),
            });
        }
    }
    let mut out = Vec::with_capacity(marks.len());
    let mut prev_gap = usize::MAX;
    let mut ord = 0;
    for m in marks {
        if m.gap != prev_gap {
            prev_gap = m.gap;
            ord = 0;
        }
        out.push(HandleslideMark { order: ord, ..m });
        ord += 1;
    }
    Ok(out)
}

fn normalize_cusp_data(
    front: &FrontDiagram,
    data: BTreeMap<usize, CuspData>,
) -> Result<BTreeMap<usize, CuspData>, McsError> {
    let mut out = BTreeMap::new();
    for (event, mut cd) in data {
        let bad = |reason: String| McsError::BadCuspData { event, reason };
        let ev = front.events().get(event).ok_or_else(|| bad("no such event".into()))?;
        if ev.kind != EventKind::LeftCusp {
            return Err(bad("event is not a left cusp".into()));
        }
        let k = ev.k;
        let n = front.strand_count(event + 1);
        cd.u.sort_unstable();
        cd.v.sort_unstable();
        for list in [&cd.u, &cd.v] {
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad("repeated strand".into()));
            }
        }
        if let Some(&u) = cd.u.iter().find(|&&u| u >= k) {
            return Err(bad(format!("u strand {} is not above the cusp", u + 1)));
        }
        if let Some(&v) = cd.v.iter().find(|&&v| v <= k + 1 || v >= n) {
            return Err(bad(format!("v strand {} is not below the cusp", v + 1)));
        }
        if !cd.is_empty() {
            out.insert(event, cd);
        }
    }
    Ok(out)
}

impl Mcs {
    /// Propagate the complexes determined by the marked front and check every
    /// clause of the MCS definition.
    pub fn propagate(
        front: &FrontDiagram,
        marks: Vec<HandleslideMark>,
        cusp_data: BTreeMap<usize, CuspData>,
    ) -> Result<Mcs, McsError> {
        let marks = normalize_marks(front, marks)?;
        let cusp_data = normalize_cusp_data(front, cusp_data)?;

        let mut tangles = Vec::with_capacity(front.events().len() + marks.len());
        let mut mi = 0;
        for e in 0..front.events().len() {
            while mi < marks.len() && marks[mi].gap == e {
                tangles.push(Tangle::Mark(mi));
                mi += 1;
            }
            tangles.push(Tangle::Event(e));
        }

        let mut complexes = Vec::with_capacity(tangles.len().saturating_sub(1));
        let mut cur = ChainComplexZ2::empty();
        for (t, &tangle) in tangles.iter().enumerate() {
            let fail = |clause: Clause| McsError::Violation {
                slice: t,
                clause,
                tangle: describe_tangle(front, &marks, tangle),
            };
            cur = match tangle {
                Tangle::Mark(i) => {
                    let m = marks[i];
                    let deg = cur.degrees();
                    if deg[m.upper] != deg[m.lower] {
                        return Err(fail(Clause::MaslovMismatch));
                    }
                    cur.conjugate_involution(&Z2Matrix::handleslide(cur.dim(), m.upper, m.lower))
                }
                Tangle::Event(e) => {
                    let ev = front.events()[e];
                    let k = ev.k;
                    let basis = basis_for(front.mus(e + 1));
                    match ev.kind {
                        EventKind::Crossing => {
                            if cur.coeff(k, k + 1) {
                                return Err(fail(Clause::CrossingCondition));
                            }
                            cur.conjugate_involution(&Z2Matrix::transposition(cur.dim(), k))
                                .with_basis(basis)
                        }
                        EventKind::LeftCusp => {
                            let n = cur.dim();
                            let shift = |i: usize| if i < k { i } else { i + 2 };
                            let mut d = Z2Matrix::zeros(n + 2, n + 2);
                            for i in 0..n {
                                for j in cur.image_of(i) {
                                    d.set(shift(j), shift(i), true);
                                }
                            }
                            d.set(k + 1, k, true);
                            let mut c = ChainComplexZ2::new(basis, d).expect("square");
                            if let Some(cd) = cusp_data.get(&e) {
                                let deg = c.degrees();
                                for &u in &cd.u {
                                    if deg[u] != deg[k] {
                                        return Err(fail(Clause::MaslovMismatch));
                                    }
                                    c = c.conjugate_involution(&Z2Matrix::handleslide(n + 2, u, k));
                                }
                                for &v in &cd.v {
                                    if deg[v] != deg[k + 1] {
                                        return Err(fail(Clause::MaslovMismatch));
                                    }
                                    c = c.conjugate_involution(&Z2Matrix::handleslide(n + 2, k + 1, v));
                                }
                            }
                            c
                        }
                        EventKind::RightCusp => {
                            if !cur.coeff(k, k + 1) {
                                return Err(fail(Clause::RightCuspCondition));
                            }
                            quotient_at(&cur, k, basis)
                        }
                    }
                }
            };
            if !cur.is_strictly_lower_triangular() {
                return Err(fail(Clause::Triangularity));
            }
            if t + 1 < tangles.len() {
                complexes.push(cur.clone());
            }
        }

        Ok(Mcs {
            front: front.clone(),
            marks,
            cusp_data,
            tangles,
            complexes,
        })
    }

    /// A simple MCS from explicit marks only.
    pub fn simple(front: &FrontDiagram, marks: Vec<HandleslideMark>) -> Result<Mcs, McsError> {
        Self::propagate(front, marks, BTreeMap::new())
    }

    pub fn front(&self) -> &FrontDiagram {
        &self.front
    }

    pub fn marks(&self) -> &[HandleslideMark] {
        &self.marks
    }

    pub fn cusp_data(&self) -> &BTreeMap<usize, CuspData> {
        &self.cusp_data
    }

    pub fn tangles(&self) -> &[Tangle] {
        &self.tangles
    }

    pub fn complexes(&self) -> &[ChainComplexZ2] {
        &self.complexes
    }

    pub fn complex(&self, slice: usize) -> &ChainComplexZ2 {
        &self.complexes[slice]
    }

    pub fn slice_count(&self) -> usize {
        self.complexes.len()
    }

    /// Tangle index of event `e`.
    pub fn tangle_of_event(&self, e: usize) -> usize {
        self.tangles
            .iter()
            .position(|&t| t == Tangle::Event(e))
            .expect("every event is a tangle")
    }

    /// Tangle index of mark `i`.
    pub fn tangle_of_mark(&self, i: usize) -> usize {
        self.tangles
            .iter()
            .position(|&t| t == Tangle::Mark(i))
            .expect("every mark is a tangle")
    }

    /// Whether slice `s` lies to the left of every right cusp.
    pub fn slice_left_of_right_cusps(&self, s: usize) -> bool {
        self.tangles[..=s].iter().all(|&t| match t {
            Tangle::Event(e) => self.front.events()[e].kind != EventKind::RightCusp,
            Tangle::Mark(_) => true,
        })
    }

    pub fn is_simple(&self) -> bool {
        self.cusp_data.is_empty()
    }

    /// If this MCS is in A-form, the set of marked crossings (generator ids).
    pub fn aform_crossings(&self) -> Option<BTreeSet<usize>> {
        if !self.is_simple() {
            return None;
        }
        let mut set = BTreeSet::new();
        for (i, m) in self.marks.iter().enumerate() {
            let ev = self.front.events()[m.gap];
            let last_in_gap = self.marks.get(i + 1).is_none_or(|n| n.gap != m.gap);
            if ev.kind != EventKind::Crossing || !last_in_gap || (m.upper, m.lower) != (ev.k, ev.k + 1) {
                return None;
            }
            set.insert(self.front.generator_at_event(m.gap).unwrap().id);
        }
        Some(set)
    }

    pub fn is_aform(&self) -> bool {
        self.aform_crossings().is_some()
    }

    /// Text form: the front followed by `h` and `ic` lines.
    pub fn to_text(&self) -> String {
        let mut s = self.front.to_text();
        for m in &self.marks {
            s.push_str(&format!("h {} {} {} {}\n", m.gap, m.order, m.upper + 1, m.lower + 1));
        }
        for (e, cd) in &self.cusp_data {
            let list = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
            s.push_str(&format!("ic {} u:{} v:{}\n", e + 1, list(&cd.u), list(&cd.v)));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct MarkJson {
            gap: usize,
            order: usize,
            k: usize,
            l: usize,
        }
        #[derive(Serialize)]
        struct CuspJson {
            event: usize,
            u: Vec<usize>,
            v: Vec<usize>,
        }
        let front: serde_json::Value = serde_json::from_str(&self.front.to_json()).expect("front json");
        serde_json::json!({
            "events": front["events"],
            "marks": self.marks.iter().map(|m| MarkJson {
                gap: m.gap, order: m.order, k: m.upper + 1, l: m.lower + 1,
            }).collect::<Vec<_>>(),
            "cusp_data": self.cusp_data.iter().map(|(e, cd)| CuspJson {
                event: e + 1,
                u: cd.u.iter().map(|x| x + 1).collect(),
                v: cd.v.iter().map(|x| x + 1).collect(),
            }).collect::<Vec<_>>(),
        })
    }
}

fn describe_tangle(front: &FrontDiagram, marks: &[HandleslideMark], t: Tangle) -> String {
    match t {
        Tangle::Mark(i) => format!("mark h {} {}", marks[i].upper + 1, marks[i].lower + 1),
        Tangle::Event(e) => {
            let ev = front.events()[e];
            format!("event {} `{} {}`", e + 1, ev.kind.token(), ev.k + 1)
        }
    }
}

/// Quotient by the acyclic subcomplex spanned by e_k and d e_k, on coset
/// representatives e_i + <d e_i, e_{k+1}> e_k.
fn quotient_at(c: &ChainComplexZ2, k: usize, basis: Vec<BasisElement>) -> ChainComplexZ2 {
    let n = c.dim();
    let keep: Vec<usize> = (0..n).filter(|&i| i != k && i != k + 1).collect();
    let dk = c.image_of(k);
    let mut d = Z2Matrix::zeros(n - 2, n - 2);
    for (ni, &i) in keep.iter().enumerate() {
        let mut col = vec![false; n];
        for j in c.image_of(i) {
            col[j] = true;
        }
        if c.coeff(i, k + 1) {
            for &j in &dk {
                col[j] ^= true;
            }
        }
        for (nj, &j) in keep.iter().enumerate() {
            if col[j] {
                d.set(nj, ni, true);
            }
        }
    }
    ChainComplexZ2::new(basis, d).expect("square")
}

/// Parse `h` and `ic` statements against a front. Other statements are ignored.
pub fn marks_from_statements(
    front: &FrontDiagram,
    sts: &[Statement],
) -> Result<(Vec<HandleslideMark>, BTreeMap<usize, CuspData>), DiagramError> {
    let mut marks = Vec::new();
    let mut cusp = BTreeMap::new();
    for st in sts {
        match st.tokens[0].as_str() {
            "h" => {
                if st.tokens.len() != 5 {
                    return Err(st.error("`h` takes <gap> <order> <k> <l>"));
                }
                let num = |i: usize, what: &str| {
                    st.tokens[i]
                        .parse::<usize>()
                        .map_err(|_| st.error(format!("expected integer {what}")))
                };
                let gap = num(1, "gap")?;
                let order = num(2, "order")?;
                let k = parse_index(st, &st.tokens[3], "strand")?;
                let l = parse_index(st, &st.tokens[4], "strand")?;
                marks.push(HandleslideMark::new(gap, order, k, l));
            }
            "ic" => {
                if st.tokens.len() != 4 {
                    return Err(st.error("`ic` takes <cusp-event> u:<list> v:<list>"));
                }
                let e = parse_index(st, &st.tokens[1], "event index")?;
                if e >= front.events().len() {
                    return Err(st.error("event index out of range"));
                }
                let list = |tok: &str, prefix: &str| -> Result<Vec<usize>, DiagramError> {
                    let body = tok
                        .strip_prefix(prefix)
                        .ok_or_else(|| st.error(format!("expected `{prefix}<list>`")))?;
                    body.split(',')
                        .filter(|s| !s.is_empty())
                        .map(|s| parse_index(st, s, "strand"))
                        .collect()
                };
                let cd = CuspData {
                    u: list(&st.tokens[2], "u:")?,
                    v: list(&st.tokens[3], "v:")?,
                };
                if cusp.insert(e, cd).is_some() {
                    return Err(st.error("duplicate cusp data"));
                }
            }
            _ => {}
        }
    }
    Ok((marks, cusp))
}

/// Parse a marked front (front statements plus `h` / `ic` lines).
pub fn parse_mcs(text: &str) -> Result<Mcs, McsError> {
    let sts = statements(text);
    for st in &sts {
        if !matches!(st.tokens[0].as_str(), "l" | "x" | "r" | "h" | "ic") {
            return Err(st.error(format!("unknown statement `{}`", st.tokens[0])).into());
        }
    }
    let front = front_from_statements(&sts)?;
    let (marks, cusp) = marks_from_statements(&front, &sts)?;
    Mcs::propagate(&front, marks, cusp)
}

/// An MCS in A-form together with its marked crossings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AFormMcs {
    mcs: Mcs,
    marked: BTreeSet<usize>,
}

impl AFormMcs {
    pub fn mcs(&self) -> &Mcs {
        &self.mcs
    }

    pub fn into_mcs(self) -> Mcs {
        self.mcs
    }

    /// Marked crossings, as generator ids.
    pub fn marked(&self) -> &BTreeSet<usize> {
        &self.marked
    }

    /// The associated augmentation, indexed by generator id.
    pub fn augmentation(&self) -> Vec<bool> {
        (0..self.mcs.front.generators().len())
            .map(|g| self.marked.contains(&g))
            .collect()
    }
}

/// Generator ids of the degree-0 crossings.
pub fn degree_zero_crossings(front: &FrontDiagram) -> Vec<usize> {
    front
        .generators()
        .iter()
        .filter(|g| g.kind == GeneratorKind::Crossing && g.degree == 0)
        .map(|g| g.id)
        .collect()
}

/// The A-form candidate with one mark just left of each crossing in `set`.
pub fn aform_from_set(front: &FrontDiagram, set: &BTreeSet<usize>) -> Result<AFormMcs, McsError> {
    let mut marks = Vec::new();
    for &g in set {
        let gen = front
            .generators()
            .get(g)
            .filter(|gen| gen.kind == GeneratorKind::Crossing)
            .ok_or_else(|| McsError::BadMark {
                index: g,
                reason: "not a crossing".into(),
            })?;
        if gen.degree != 0 {
            return Err(McsError::NotDegreeZero(gen.label.clone()));
        }
        let k = front.events()[gen.event_index].k;
        marks.push(HandleslideMark::new(gen.event_index, 0, k, k + 1));
    }
    let mcs = Mcs::simple(front, marks)?;
    Ok(AFormMcs {
        mcs,
        marked: set.clone(),
    })
}

/// All valid A-form MCSs, ordered by the bitmask of marked degree-0 crossings.
pub fn enumerate_aform(front: &FrontDiagram) -> Vec<AFormMcs> {
    let zero = degree_zero_crossings(front);
    assert!(zero.len() < 64, "too many degree-0 crossings");
    (0u64..1 << zero.len())
        .filter_map(|mask| {
            let set: BTreeSet<usize> = zero
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &g)| g)
                .collect();
            aform_from_set(front, &set).ok()
        })
        .collect()
}
