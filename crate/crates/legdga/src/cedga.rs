//! Front-projection Chekanov-Eliashberg DGA: admissible disks, the boundary
//! map, augmentations and twisting, disk pairs, and gradient paths of an MCS.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::chordpath::{linear_part, Chord, Side};
use crate::dga::{DgaElement, Word};
use crate::diagram::{EventKind, FrontDiagram, GeneratorKind};
use crate::mcs::{Mcs, Tangle};
use crate::z2linalg::ChainComplexZ2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CedgaError {
    #[error("not an augmentation: constant term survives in the twisted differential of {0}")]
    NotAugmentation(String),
    #[error("augmentation bitstring has length {found}, expected {expected}")]
    BitstringLength { expected: usize, found: usize },
    #[error("augmentation bitstring may only contain 0 and 1")]
    BitstringSyntax,
    #[error("augmentation is nonzero on {0}, which does not have degree 0")]
    Support(String),
    #[error("slice x_{0} is not to the left of the right cusps")]
    SliceRightOfCusp(usize),
    #[error("chord [{0},{1}] is not a valid chord")]
    BadChord(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DiskCorner {
    /// Generator id of the crossing.
    pub crossing: usize,
    pub side: Side,
    /// Interval of the disk in the gap just left of the crossing.
    pub left_interval: (usize, usize),
}

/// An admissible disk recorded by its right-to-left sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibleDisk {
    pub origin: usize,
    /// (gap, upper, lower) from the gap just left of the origin to the gap
    /// just right of the terminating left cusp.
    pub sweep: Vec<(usize, usize, usize)>,
    /// Corners in sweep order (right to left).
    pub corners: Vec<DiskCorner>,
    /// Event index of the terminating left cusp.
    pub terminus: usize,
}

impl AdmissibleDisk {
    /// Counterclockwise reading from the origin: top corners right to left,
    /// then bottom corners left to right. Corners whose index is in `skip`
    /// are omitted.
    pub fn word_without(&self, skip: &BTreeSet<usize>) -> Word {
        let mut w: Vec<usize> = self
            .corners
            .iter()
            .enumerate()
            .filter(|(i, c)| c.side == Side::Top && !skip.contains(i))
            .map(|(_, c)| c.crossing)
            .collect();
        w.extend(
            self.corners
                .iter()
                .enumerate()
                .rev()
                .filter(|(i, c)| c.side == Side::Bottom && !skip.contains(i))
                .map(|(_, c)| c.crossing),
        );
        Word(w)
    }

    pub fn word(&self) -> Word {
        self.word_without(&BTreeSet::new())
    }
}

struct DiskSweep<'a> {
    fd: &'a FrontDiagram,
    origin: usize,
    sweep: Vec<(usize, usize, usize)>,
    corners: Vec<DiskCorner>,
    out: Vec<AdmissibleDisk>,
}

impl DiskSweep<'_> {
    fn visit(&mut self, g: usize, u: usize, l: usize) {
        self.sweep.push((g, u, l));
        let ev = self.fd.events()[g - 1];
        let k = ev.k;
        match ev.kind {
            EventKind::Crossing => {
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
                    self.visit(g - 1, sigma(u), sigma(l));
                    let b = self.fd.generator_at_event(g - 1).expect("crossing").id;
                    if l == k {
                        self.corner(g, b, Side::Bottom, u, l);
                    }
                    if u == k + 1 {
                        self.corner(g, b, Side::Top, u, l);
                    }
                }
            }
            EventKind::RightCusp => {
                let tau = |x: usize| if x < k { x } else { x + 2 };
                self.visit(g - 1, tau(u), tau(l));
            }
            EventKind::LeftCusp => {
                if (u, l) == (k, k + 1) {
                    self.out.push(AdmissibleDisk {
                        origin: self.origin,
                        sweep: self.sweep.clone(),
                        corners: self.corners.clone(),
                        terminus: g - 1,
                    });
                } else if l < k {
                    self.visit(g - 1, u, l);
                } else if u > k + 1 {
                    self.visit(g - 1, u - 2, l - 2);
                } else if u < k && l > k + 1 {
                    self.visit(g - 1, u, l - 2);
                }
            }
        }
        self.sweep.pop();
    }

    fn corner(&mut self, g: usize, b: usize, side: Side, u: usize, l: usize) {
        self.corners.push(DiskCorner {
            crossing: b,
            side,
            left_interval: (u, l),
        });
        self.visit(g - 1, u, l);
        self.corners.pop();
    }
}

/// All admissible disks originating at generator `a`.
pub fn enumerate_disks(fd: &FrontDiagram, a: usize) -> Vec<AdmissibleDisk> {
    let gen = &fd.generators()[a];
    let k = fd.events()[gen.event_index].k;
    let mut sw = DiskSweep {
        fd,
        origin: a,
        sweep: Vec::new(),
        corners: Vec::new(),
        out: Vec::new(),
    };
    sw.visit(gen.event_index, k, k + 1);
    sw.out
}

/// The boundary map on generators.
pub fn differential(fd: &FrontDiagram) -> Vec<DgaElement> {
    fd.generators()
        .iter()
        .map(|g| {
            let mut e: DgaElement = enumerate_disks(fd, g.id).iter().map(AdmissibleDisk::word).collect();
            if g.kind == GeneratorKind::RightCusp {
                e.add_word(Word::unit());
            }
            e
        })
        .collect()
}

/// A Z2-valued algebra map, stored as one value per generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Augmentation {
    values: Vec<bool>,
}

impl Augmentation {
    pub fn zero(fd: &FrontDiagram) -> Self {
        Self {
            values: vec![false; fd.generators().len()],
        }
    }

    /// From a 0/1 string with one character per crossing, in crossing order.
    /// Only the degree-0 support restriction is checked here.
    pub fn from_bits(fd: &FrontDiagram, bits: &str) -> Result<Self, CedgaError> {
        let n = fd.crossing_count();
        if bits.len() != n {
            return Err(CedgaError::BitstringLength {
                expected: n,
                found: bits.len(),
            });
        }
        let mut values = vec![false; fd.generators().len()];
        for (i, ch) in bits.chars().enumerate() {
            values[i] = match ch {
                '0' => false,
                '1' => true,
                _ => return Err(CedgaError::BitstringSyntax),
            };
            if values[i] && fd.generators()[i].degree != 0 {
                return Err(CedgaError::Support(fd.generators()[i].label.clone()));
            }
        }
        Ok(Self { values })
    }

    pub fn from_support(fd: &FrontDiagram, support: &BTreeSet<usize>) -> Self {
        let mut a = Self::zero(fd);
        for &g in support {
            a.values[g] = true;
        }
        a
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn support(&self) -> BTreeSet<usize> {
        (0..self.values.len()).filter(|&g| self.values[g]).collect()
    }

    /// Bitstring in crossing order.
    pub fn bits(&self, fd: &FrontDiagram) -> String {
        (0..fd.crossing_count())
            .map(|i| if self.values[i] { '1' } else { '0' })
            .collect()
    }
}

pub fn is_augmentation(d: &[DgaElement], eps: &[bool]) -> bool {
    d.iter().all(|x| !x.evaluate(eps))
}

/// All augmentations, by exhaustive search over the degree-0 crossings.
pub fn augmentations(fd: &FrontDiagram, d: &[DgaElement]) -> Vec<Augmentation> {
    let zero: Vec<usize> = fd
        .generators()
        .iter()
        .filter(|g| g.kind == GeneratorKind::Crossing && g.degree == 0)
        .map(|g| g.id)
        .collect();
    assert!(zero.len() < 64, "too many degree-0 crossings");
    let mut out = Vec::new();
    for mask in 0u64..1 << zero.len() {
        let mut a = Augmentation::zero(fd);
        for (bit, &g) in zero.iter().enumerate() {
            a.values[g] = mask >> bit & 1 == 1;
        }
        if is_augmentation(d, &a.values) {
            out.push(a);
        }
    }
    out
}

/// The twisted differential phi o d o phi^{-1} with phi(q) = q + eps(q).
pub fn twist(fd: &FrontDiagram, d: &[DgaElement], eps: &[bool]) -> Result<Vec<DgaElement>, CedgaError> {
    let mut out = Vec::with_capacity(d.len());
    for a in 0..d.len() {
        // phi^{-1}(a) = a + eps(a); d kills the constant.
        let mut pre = DgaElement::generator(a);
        if eps[a] {
            pre.add_word(Word::unit());
        }
        let x = pre.apply_derivation(d).apply_shift(eps);
        if x.has_constant() {
            return Err(CedgaError::NotAugmentation(fd.generators()[a].label.clone()));
        }
        out.push(x);
    }
    Ok(out)
}

/// The linearized complex of a (twisted) differential.
pub fn linearized(fd: &FrontDiagram, d: &[DgaElement]) -> ChainComplexZ2 {
    let degrees: Vec<i64> = fd.generators().iter().map(|g| g.degree).collect();
    linear_part(&fd.labels(), &degrees, d)
}

/// A disk with a chosen set of augmented corners, relative to a distinguished
/// corner `b_corner` that is not in `psi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiskPair {
    pub disk: AdmissibleDisk,
    pub b_corner: usize,
    /// Indices into `disk.corners`.
    pub psi: BTreeSet<usize>,
}

impl DiskPair {
    pub fn word(&self) -> Word {
        self.disk.word_without(&self.psi)
    }

    /// Crossing generator id of the distinguished corner.
    pub fn b(&self) -> usize {
        self.disk.corners[self.b_corner].crossing
    }

    pub fn interval(&self) -> (usize, usize) {
        self.disk.corners[self.b_corner].left_interval
    }
}

fn pairs_of_disk(disk: &AdmissibleDisk, eps: &[bool], out: &mut Vec<DiskPair>) {
    let aug = |i: usize| eps[disk.corners[i].crossing];
    for cb in 0..disk.corners.len() {
        // Every corner to the left of b (later in the sweep) must be augmented.
        if !(cb + 1..disk.corners.len()).all(aug) {
            continue;
        }
        let left: BTreeSet<usize> = (cb + 1..disk.corners.len()).collect();
        let right: Vec<usize> = (0..cb).filter(|&i| aug(i)).collect();
        for mask in 0u64..1 << right.len() {
            let mut psi = left.clone();
            psi.extend(
                right
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask >> bit & 1 == 1)
                    .map(|(_, &i)| i),
            );
            out.push(DiskPair {
                disk: disk.clone(),
                b_corner: cb,
                psi,
            });
        }
    }
}

/// Every disk pair originating at `a`, over all distinguished corners.
pub fn all_disk_pairs(fd: &FrontDiagram, eps: &[bool], a: usize) -> Vec<DiskPair> {
    let mut out = Vec::new();
    for disk in enumerate_disks(fd, a) {
        pairs_of_disk(&disk, eps, &mut out);
    }
    out
}

/// The pairs in Delta(a; b, interval): distinguished corner at crossing `b`
/// with the disk occupying `interval` just left of `b`.
pub fn disk_pairs(fd: &FrontDiagram, eps: &[bool], a: usize, b: usize, interval: (usize, usize)) -> Vec<DiskPair> {
    all_disk_pairs(fd, eps, a)
        .into_iter()
        .filter(|p| p.b() == b && p.interval() == interval)
        .collect()
}

/// A gradient path: chords moving left to right from just right of a left cusp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradientPath {
    /// Event index of the originating left cusp.
    pub origin: usize,
    pub chords: Vec<Chord>,
}

/// Successors of chord [u, l] at slice s across tangle s + 1.
fn gradient_successors(mcs: &Mcs, s: usize, u: usize, l: usize) -> Vec<(usize, usize)> {
    match mcs.tangles()[s + 1] {
        Tangle::Event(e) => {
            let ev = mcs.front().events()[e];
            let k = ev.k;
            match ev.kind {
                EventKind::Crossing => {
                    if (u, l) == (k, k + 1) {
                        return vec![];
                    }
                    let sigma = |x: usize| {
                        if x == k {
                            k + 1
                        } else if x == k + 1 {
                            k
                        } else {
                            x
                        }
                    };
                    vec![(sigma(u), sigma(l))]
                }
                EventKind::LeftCusp => {
                    let tau = |x: usize| if x < k { x } else { x + 2 };
                    vec![(tau(u), tau(l))]
                }
                EventKind::RightCusp => vec![],
            }
        }
        Tangle::Mark(i) => {
            let m = mcs.marks()[i];
            let mut v = vec![(u, l)];
            if u == m.lower {
                v.push((m.upper, l));
            }
            if l == m.upper && u < m.upper {
                v.push((u, m.lower));
            }
            v
        }
    }
}

fn left_cusp_origins(mcs: &Mcs) -> Vec<(usize, usize, usize)> {
    // (slice just right of the cusp, k, event)
    mcs.tangles()
        .iter()
        .enumerate()
        .filter_map(|(t, &tg)| match tg {
            Tangle::Event(e) if mcs.front().events()[e].kind == EventKind::LeftCusp => {
                Some((t, mcs.front().events()[e].k, e))
            }
            _ => None,
        })
        .collect()
}

/// All gradient paths ending at chord [i, j] of slice `p`.
pub fn enumerate_gradient_paths(mcs: &Mcs, p: usize, i: usize, j: usize) -> Result<Vec<GradientPath>, CedgaError> {
    if p >= mcs.slice_count() || !mcs.slice_left_of_right_cusps(p) {
        return Err(CedgaError::SliceRightOfCusp(p + 1));
    }
    if i >= j || j >= mcs.complex(p).dim() {
        return Err(CedgaError::BadChord(i + 1, j + 1));
    }
    fn walk(
        mcs: &Mcs,
        p: usize,
        target: (usize, usize),
        origin: usize,
        chords: &mut Vec<Chord>,
        out: &mut Vec<GradientPath>,
    ) {
        let c = *chords.last().unwrap();
        if c.slice == p {
            if (c.upper, c.lower) == target {
                out.push(GradientPath {
                    origin,
                    chords: chords.clone(),
                });
            }
            return;
        }
        for (u, l) in gradient_successors(mcs, c.slice, c.upper, c.lower) {
            chords.push(Chord {
                slice: c.slice + 1,
                upper: u,
                lower: l,
            });
            walk(mcs, p, target, origin, chords, out);
            chords.pop();
        }
    }
    let mut out = Vec::new();
    for (s, k, e) in left_cusp_origins(mcs) {
        if s <= p {
            let mut chords = vec![Chord {
                slice: s,
                upper: k,
                lower: k + 1,
            }];
            walk(mcs, p, (i, j), e, &mut chords, &mut out);
        }
    }
    Ok(out)
}

/// Number of gradient paths ending at each chord of each slice left of the
/// right cusps, by forward dynamic programming.
pub fn gradient_path_counts(mcs: &Mcs) -> Vec<BTreeMap<(usize, usize), u64>> {
    let n = (0..mcs.slice_count())
        .take_while(|&s| mcs.slice_left_of_right_cusps(s))
        .count();
    let mut counts: Vec<BTreeMap<(usize, usize), u64>> = vec![BTreeMap::new(); n];
    let origins = left_cusp_origins(mcs);
    for s in 0..n {
        for &(os, k, _) in &origins {
            if os == s {
                *counts[s].entry((k, k + 1)).or_default() += 1;
            }
        }
        if s + 1 < n {
            let cur = counts[s].clone();
            for ((u, l), c) in cur {
                for nxt in gradient_successors(mcs, s, u, l) {
                    *counts[s + 1].entry(nxt).or_default() += c;
                }
            }
        }
    }
    counts
}
