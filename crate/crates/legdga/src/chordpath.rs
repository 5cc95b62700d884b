//! Chord paths with convex corners and the MCS differential.

use std::collections::BTreeMap;

use serde::Serialize;

pub use crate::dga::{DgaElement, Word};
use crate::diagram::EventKind;
use crate::mcs::{Mcs, Tangle};
use crate::z2linalg::{BasisElement, ChainComplexZ2, Z2Matrix};

/// A vertical chord at slice `slice` between strands `upper < lower`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Chord {
    pub slice: usize,
    pub upper: usize,
    pub lower: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    Top,
    Bottom,
}

/// A convex corner at a crossing, between chord `position` and the next one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PathCorner {
    pub position: usize,
    pub crossing: usize,
    pub side: Side,
}

/// Which endpoint of the terminal chord carries the trajectory into the
/// terminal crossing: `Upper(i)` for a chord [i, k], `Lower(j)` for [k+1, j].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Witness {
    Upper(usize),
    Lower(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChordPath {
    pub origin: usize,
    /// Chords from right to left; consecutive slices differ by one.
    pub chords: Vec<Chord>,
    pub corners: Vec<PathCorner>,
    pub terminal: usize,
    pub witness: Witness,
}

impl ChordPath {
    /// Top corners right to left, the terminal crossing, then bottom corners
    /// left to right.
    pub fn word(&self) -> Word {
        let mut w: Vec<usize> = self
            .corners
            .iter()
            .filter(|c| c.side == Side::Top)
            .map(|c| c.crossing)
            .collect();
        w.push(self.terminal);
        w.extend(
            self.corners
                .iter()
                .rev()
                .filter(|c| c.side == Side::Bottom)
                .map(|c| c.crossing),
        );
        Word(w)
    }

    pub fn terminal_chord(&self) -> Chord {
        *self.chords.last().expect("paths have at least one chord")
    }
}

struct Enumerator<'a> {
    mcs: &'a Mcs,
    origin: usize,
    chords: Vec<Chord>,
    corners: Vec<PathCorner>,
    out: Vec<ChordPath>,
    /// Require the terminal coefficient of the complex left of the terminal crossing.
    weighted: bool,
}

impl Enumerator<'_> {
    fn visit(&mut self, s: usize, u: usize, l: usize) {
        self.chords.push(Chord {
            slice: s,
            upper: u,
            lower: l,
        });
        let front = self.mcs.front();
        match self.mcs.tangles()[s] {
            Tangle::Event(e) => {
                let ev = front.events()[e];
                let k = ev.k;
                match ev.kind {
                    EventKind::Crossing => {
                        let b = front.generator_at_event(e).expect("crossing").id;
                        let dp = self.mcs.complex(s - 1);
                        if l == k && u < k && (!self.weighted || dp.coeff(u, k)) {
                            self.emit(b, Witness::Upper(u));
                        }
                        if u == k + 1 && l > k + 1 && (!self.weighted || dp.coeff(k + 1, l)) {
                            self.emit(b, Witness::Lower(l));
                        }
                        if (u, l) != (k, k + 1) {
                            let sigma = |x: usize| {
                                if x == k {
                                    k + 1
                                } else if x == k + 1 {
                                    k
                                } else {
                                    x
                                }
                            };
                            self.visit(s - 1, sigma(u), sigma(l));
                            if l == k {
                                self.corner(s, b, Side::Bottom, u, l);
                            }
                            if u == k + 1 {
                                self.corner(s, b, Side::Top, u, l);
                            }
                        }
                    }
                    EventKind::RightCusp => {
                        let tau = |x: usize| if x < k { x } else { x + 2 };
                        self.visit(s - 1, tau(u), tau(l));
                    }
                    EventKind::LeftCusp => {}
                }
            }
            Tangle::Mark(i) => {
                let m = self.mcs.marks()[i];
                self.visit(s - 1, u, l);
                if u == m.upper && m.lower < l {
                    self.visit(s - 1, m.lower, l);
                }
                if l == m.lower && u < m.upper {
                    self.visit(s - 1, u, m.upper);
                }
            }
        }
        self.chords.pop();
    }

    fn corner(&mut self, s: usize, b: usize, side: Side, u: usize, l: usize) {
        self.corners.push(PathCorner {
            position: self.chords.len() - 1,
            crossing: b,
            side,
        });
        self.visit(s - 1, u, l);
        self.corners.pop();
    }

    fn emit(&mut self, terminal: usize, witness: Witness) {
        self.out.push(ChordPath {
            origin: self.origin,
            chords: self.chords.clone(),
            corners: self.corners.clone(),
            terminal,
            witness,
        });
    }
}

/// All chord paths with convex corners originating at generator `a`.
pub fn enumerate_paths(mcs: &Mcs, a: usize) -> Vec<ChordPath> {
    enumerate(mcs, a, true)
}

fn enumerate(mcs: &Mcs, a: usize, weighted: bool) -> Vec<ChordPath> {
    let gen = &mcs.front().generators()[a];
    let k = mcs.front().events()[gen.event_index].k;
    let t = mcs.tangle_of_event(gen.event_index);
    let mut en = Enumerator {
        mcs,
        origin: a,
        chords: Vec::new(),
        corners: Vec::new(),
        out: Vec::new(),
        weighted,
    };
    en.visit(t - 1, k, k + 1);
    en.out
}

/// Chord paths from `a` whose terminal crossing is `b` and whose terminal
/// chord (just right of `b`) is `[upper, lower]`.
pub fn paths_terminating(mcs: &Mcs, a: usize, b: usize, upper: usize, lower: usize) -> Vec<ChordPath> {
    enumerate_paths(mcs, a)
        .into_iter()
        .filter(|p| {
            let c = p.terminal_chord();
            p.terminal == b && (c.upper, c.lower) == (upper, lower)
        })
        .collect()
}

/// Like `paths_terminating`, but without requiring the terminal coefficient
/// of the complex left of `b` to be 1.
pub fn paths_reaching(mcs: &Mcs, a: usize, b: usize, upper: usize, lower: usize) -> Vec<ChordPath> {
    enumerate(mcs, a, false)
        .into_iter()
        .filter(|p| {
            let c = p.terminal_chord();
            p.terminal == b && (c.upper, c.lower) == (upper, lower)
        })
        .collect()
}

/// d a for every generator a.
pub fn differential(mcs: &Mcs) -> Vec<DgaElement> {
    (0..mcs.front().generators().len())
        .map(|a| enumerate_paths(mcs, a).iter().map(ChordPath::word).collect())
        .collect()
}

/// The pieces d_n, keyed by word length n, computed separately for each n.
pub fn differential_by_length(mcs: &Mcs) -> Vec<BTreeMap<usize, DgaElement>> {
    (0..mcs.front().generators().len())
        .map(|a| {
            let mut parts: BTreeMap<usize, DgaElement> = BTreeMap::new();
            for p in enumerate_paths(mcs, a) {
                parts.entry(p.corners.len() + 1).or_default().add_word(p.word());
            }
            parts.retain(|_, e| !e.is_zero());
            parts
        })
        .collect()
}

/// The linear part of a differential as a complex on the generators.
pub fn linear_part(labels: &[String], degrees: &[i64], d: &[DgaElement]) -> ChainComplexZ2 {
    let n = d.len();
    let mut m = Z2Matrix::zeros(n, n);
    for (i, di) in d.iter().enumerate() {
        for j in 0..n {
            if di.linear_coeff(j) {
                m.set(j, i, true);
            }
        }
    }
    let basis = labels
        .iter()
        .zip(degrees)
        .map(|(l, &degree)| BasisElement {
            label: l.clone(),
            degree,
        })
        .collect();
    ChainComplexZ2::new(basis, m).expect("square")
}

/// The linearized complex (A_C, d_1).
pub fn linearized(mcs: &Mcs) -> ChainComplexZ2 {
    let front = mcs.front();
    let degrees: Vec<i64> = front.generators().iter().map(|g| g.degree).collect();
    linear_part(&front.labels(), &degrees, &differential(mcs))
}

/// Check d(d a) = 0 for every generator by expanding with the Leibniz rule.
pub fn d_squared_vanishes(d: &[DgaElement]) -> bool {
    d.iter().all(|x| x.apply_derivation(d).is_zero())
}

/// Every word of d a has degree |a| - 1 (the unit word has degree 0).
pub fn degrees_drop_by_one(d: &[DgaElement], degrees: &[i64]) -> bool {
    d.iter()
        .enumerate()
        .all(|(a, x)| x.words().all(|w| w.degree(degrees) == degrees[a] - 1))
}

pub fn verify_d_squared(mcs: &Mcs) -> bool {
    d_squared_vanishes(&differential(mcs))
}
