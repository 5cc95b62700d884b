//! Reference implementations used to cross-check the library. Nothing here
//! calls the library's disk enumerator, augmentation search, twisting,
//! propagation or linear algebra; the inputs are plain event lists.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use legdga::dga::DgaElement;
use legdga::diagram::{EventKind, FrontDiagram, GeneratorKind};

/// A Z2 polynomial in noncommuting generators: the set of words with
/// coefficient 1. The empty word is the unit.
pub type Poly = BTreeSet<Vec<usize>>;

pub fn toggle(p: &mut Poly, w: Vec<usize>) {
    if !p.remove(&w) {
        p.insert(w);
    }
}

pub fn from_element(x: &DgaElement) -> Poly {
    x.words().map(|w| w.0.clone()).collect()
}

pub fn from_elements(d: &[DgaElement]) -> Vec<Poly> {
    d.iter().map(from_element).collect()
}

/// Event-level view of a front, with generator ids assigned crossings and
/// right cusps in event order (the library's numbering).
pub struct Plain {
    pub events: Vec<(EventKind, usize)>,
    pub gen_at: Vec<Option<usize>>,
    pub degrees: Vec<i64>,
    pub crossing: Vec<bool>,
}

pub fn plain(fd: &FrontDiagram) -> Plain {
    let events: Vec<(EventKind, usize)> = fd.events().iter().map(|e| (e.kind, e.k)).collect();
    let mut gen_at = vec![None; events.len()];
    let mut degrees = Vec::new();
    let mut crossing = Vec::new();
    for (i, g) in fd.generators().iter().enumerate() {
        gen_at[g.event_index] = Some(i);
        degrees.push(g.degree);
        crossing.push(g.kind == GeneratorKind::Crossing);
    }
    Plain {
        events,
        gen_at,
        degrees,
        crossing,
    }
}

/// A disk corner found by the left-to-right sweep: crossing id, whether it
/// is on the top boundary, and the disk's interval just left of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepCorner {
    pub crossing: usize,
    pub top: bool,
    pub left: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct SweepDisk {
    pub origin: usize,
    /// Left to right.
    pub corners: Vec<SweepCorner>,
}

impl SweepDisk {
    /// Counterclockwise from the origin, skipping corners in `skip`.
    pub fn word_without(&self, skip: &BTreeSet<usize>) -> Vec<usize> {
        let mut w: Vec<usize> = (0..self.corners.len())
            .rev()
            .filter(|i| self.corners[*i].top && !skip.contains(i))
            .map(|i| self.corners[i].crossing)
            .collect();
        w.extend(
            (0..self.corners.len())
                .filter(|i| !self.corners[*i].top && !skip.contains(i))
                .map(|i| self.corners[i].crossing),
        );
        w
    }

    pub fn word(&self) -> Vec<usize> {
        self.word_without(&BTreeSet::new())
    }
}

/// Every admissible disk, found by growing each one rightward from the left
/// cusp where it starts until it closes up at a crossing or right cusp.
pub fn sweep_disks(p: &Plain) -> Vec<SweepDisk> {
    fn grow(p: &Plain, e: usize, (u, l): (usize, usize), corners: &mut Vec<SweepCorner>, out: &mut Vec<SweepDisk>) {
        let Some(&(kind, k)) = p.events.get(e) else {
            return;
        };
        match kind {
            EventKind::Crossing => {
                let id = p.gen_at[e].unwrap();
                if (u, l) == (k, k + 1) {
                    out.push(SweepDisk {
                        origin: id,
                        corners: corners.clone(),
                    });
                } else if l < k || u > k + 1 || (u < k && l > k + 1) {
                    grow(p, e + 1, (u, l), corners, out);
                } else if l == k {
                    grow(p, e + 1, (u, k + 1), corners, out);
                    corners.push(SweepCorner {
                        crossing: id,
                        top: false,
                        left: (u, l),
                    });
                    grow(p, e + 1, (u, k), corners, out);
                    corners.pop();
                } else if u == k + 1 {
                    grow(p, e + 1, (k, l), corners, out);
                    corners.push(SweepCorner {
                        crossing: id,
                        top: true,
                        left: (u, l),
                    });
                    grow(p, e + 1, (k + 1, l), corners, out);
                    corners.pop();
                } else if u == k {
                    grow(p, e + 1, (k + 1, l), corners, out);
                } else {
                    // l == k + 1 with u < k
                    grow(p, e + 1, (u, k), corners, out);
                }
            }
            EventKind::LeftCusp => {
                let iv = if l < k {
                    (u, l)
                } else if u >= k {
                    (u + 2, l + 2)
                } else {
                    (u, l + 2)
                };
                grow(p, e + 1, iv, corners, out);
            }
            EventKind::RightCusp => {
                if (u, l) == (k, k + 1) {
                    out.push(SweepDisk {
                        origin: p.gen_at[e].unwrap(),
                        corners: corners.clone(),
                    });
                } else if l < k {
                    grow(p, e + 1, (u, l), corners, out);
                } else if u > k + 1 {
                    grow(p, e + 1, (u - 2, l - 2), corners, out);
                } else if u < k && l > k + 1 {
                    grow(p, e + 1, (u, l - 2), corners, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    for (e, &(kind, k)) in p.events.iter().enumerate() {
        if kind == EventKind::LeftCusp {
            grow(p, e + 1, (k, k + 1), &mut Vec::new(), &mut out);
        }
    }
    out
}

/// The boundary map read off the swept disks, with the extra unit term that
/// every right cusp carries.
pub fn sweep_differential(p: &Plain) -> Vec<Poly> {
    let mut d = vec![Poly::new(); p.degrees.len()];
    for g in 0..d.len() {
        if !p.crossing[g] {
            toggle(&mut d[g], Vec::new());
        }
    }
    for disk in sweep_disks(p) {
        toggle(&mut d[disk.origin], disk.word());
    }
    d
}

pub fn eval(x: &Poly, eps: &[bool]) -> bool {
    x.iter().filter(|w| w.iter().all(|&g| eps[g])).count() % 2 == 1
}

/// Supports of all augmentations, by trying every subset of the degree-0
/// crossings.
pub fn brute_augmentations(p: &Plain, d: &[Poly]) -> BTreeSet<BTreeSet<usize>> {
    let zero: Vec<usize> = (0..p.degrees.len())
        .filter(|&g| p.crossing[g] && p.degrees[g] == 0)
        .collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << zero.len() {
        let mut eps = vec![false; p.degrees.len()];
        for (bit, &g) in zero.iter().enumerate() {
            eps[g] = mask >> bit & 1 == 1;
        }
        if d.iter().all(|x| !eval(x, &eps)) {
            out.insert(zero.iter().copied().filter(|&g| eps[g]).collect());
        }
    }
    out
}

pub fn eps_of(n: usize, support: &BTreeSet<usize>) -> Vec<bool> {
    (0..n).map(|g| support.contains(&g)).collect()
}

/// Substitute g -> g + eps(g) in every word.
pub fn twist(d: &[Poly], eps: &[bool]) -> Vec<Poly> {
    d.iter()
        .map(|x| {
            let mut out = Poly::new();
            for w in x {
                let pos: Vec<usize> = (0..w.len()).filter(|&i| eps[w[i]]).collect();
                for mask in 0u32..1 << pos.len() {
                    let drop: BTreeSet<usize> = pos
                        .iter()
                        .enumerate()
                        .filter(|(b, _)| mask >> b & 1 == 1)
                        .map(|(_, &i)| i)
                        .collect();
                    let kept = (0..w.len()).filter(|i| !drop.contains(i)).map(|i| w[i]).collect();
                    toggle(&mut out, kept);
                }
            }
            out
        })
        .collect()
}

/// d(d(a)) for every generator, by the Leibniz rule.
pub fn d_squared(d: &[Poly]) -> Vec<Poly> {
    d.iter()
        .map(|x| {
            let mut out = Poly::new();
            for w in x {
                for (i, &g) in w.iter().enumerate() {
                    for v in &d[g] {
                        let mut nw = w[..i].to_vec();
                        nw.extend_from_slice(v);
                        nw.extend_from_slice(&w[i + 1..]);
                        toggle(&mut out, nw);
                    }
                }
            }
            out
        })
        .collect()
}

pub fn degrees_drop(d: &[Poly], degrees: &[i64]) -> bool {
    d.iter().enumerate().all(|(a, x)| {
        x.iter()
            .all(|w| w.iter().map(|&g| degrees[g]).sum::<i64>() == degrees[a] - 1)
    })
}

/// Rank over Z2 of a list of row bitmasks.
pub fn rank(mut rows: Vec<u128>) -> usize {
    let mut r = 0;
    for bit in 0..128 {
        let Some(pos) = (r..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(r, pos);
        let pivot = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row >> bit & 1 == 1 {
                *row ^= pivot;
            }
        }
        r += 1;
    }
    r
}

/// Per-degree rank of the linear part, keyed by the source degree.
pub fn linear_ranks(d: &[Poly], degrees: &[i64]) -> BTreeMap<i64, usize> {
    let mut by_deg: BTreeMap<i64, Vec<u128>> = BTreeMap::new();
    for (a, x) in d.iter().enumerate() {
        let row = x.iter().filter(|w| w.len() == 1).fold(0u128, |acc, w| acc | 1 << w[0]);
        by_deg.entry(degrees[a]).or_default().push(row);
    }
    by_deg.into_iter().map(|(k, rows)| (k, rank(rows))).collect()
}

/// Graded homology dimensions of the linear part.
pub fn linear_homology(d: &[Poly], degrees: &[i64]) -> BTreeMap<i64, usize> {
    let ranks = linear_ranks(d, degrees);
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    for &g in degrees {
        *dims.entry(g).or_default() += 1;
    }
    dims.iter()
        .map(|(&k, &n)| {
            let out = ranks.get(&k).copied().unwrap_or(0);
            let inc = ranks.get(&(k + 1)).copied().unwrap_or(0);
            (k, n - out - inc)
        })
        .collect()
}

/// `m[i][j]` is the coefficient of e_j in d e_i.
pub type Square = Vec<Vec<bool>>;

fn slide(m: &mut Square, u: usize, l: usize) {
    // e_u -> e_u + e_l, an involution, so d -> H d H.
    let n = m.len();
    let row_l = m[l].clone();
    for j in 0..n {
        m[u][j] ^= row_l[j];
    }
    for row in m.iter_mut() {
        if row[u] {
            row[l] ^= true;
        }
    }
}

fn triangular(m: &Square) -> bool {
    (0..m.len()).all(|i| (0..=i).all(|j| !m[i][j]))
}

/// The complexes of the A-form candidate marking the crossings in `s`, one
/// per slice, or None if some clause fails.
pub fn aform_complexes(p: &Plain, s: &BTreeSet<usize>) -> Option<Vec<Square>> {
    let mut cur: Square = Vec::new();
    let mut out = Vec::new();
    for (e, &(kind, k)) in p.events.iter().enumerate() {
        match kind {
            EventKind::Crossing => {
                if s.contains(&p.gen_at[e].unwrap()) {
                    slide(&mut cur, k, k + 1);
                    if !triangular(&cur) {
                        return None;
                    }
                    out.push(cur.clone());
                }
                if cur[k][k + 1] {
                    return None;
                }
                cur.swap(k, k + 1);
                for row in cur.iter_mut() {
                    row.swap(k, k + 1);
                }
            }
            EventKind::LeftCusp => {
                let n = cur.len();
                let at = |i: usize| if i < k { i } else { i + 2 };
                let mut m = vec![vec![false; n + 2]; n + 2];
                for i in 0..n {
                    for j in 0..n {
                        m[at(i)][at(j)] = cur[i][j];
                    }
                }
                m[k][k + 1] = true;
                cur = m;
            }
            EventKind::RightCusp => {
                if !cur[k][k + 1] {
                    return None;
                }
                let n = cur.len();
                let keep: Vec<usize> = (0..n).filter(|&i| i != k && i != k + 1).collect();
                cur = keep
                    .iter()
                    .map(|&i| keep.iter().map(|&j| cur[i][j] ^ (cur[i][k + 1] && cur[k][j])).collect())
                    .collect();
            }
        }
        if !triangular(&cur) {
            return None;
        }
        if e + 1 < p.events.len() {
            out.push(cur.clone());
        }
    }
    Some(out)
}

/// Subsets of degree-0 crossings giving a valid A-form MCS.
pub fn aform_sets(p: &Plain) -> BTreeSet<BTreeSet<usize>> {
    let zero: Vec<usize> = (0..p.degrees.len())
        .filter(|&g| p.crossing[g] && p.degrees[g] == 0)
        .collect();
    (0u32..1 << zero.len())
        .map(|mask| {
            zero.iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &g)| g)
                .collect::<BTreeSet<usize>>()
        })
        .filter(|s| aform_complexes(p, s).is_some())
        .collect()
}

/// Check the library's Maslov potential against the local rules and
/// recompute every generator degree from it.
pub fn maslov_consistent(fd: &FrontDiagram) -> bool {
    for (e, ev) in fd.events().iter().enumerate() {
        let (l, r) = (fd.mus(e), fd.mus(e + 1));
        let k = ev.k;
        let ok = match ev.kind {
            EventKind::Crossing => {
                let mut s = l.clone();
                s.swap(k, k + 1);
                s == r
            }
            EventKind::LeftCusp => {
                r.len() == l.len() + 2 && r[k] == r[k + 1] + 1 && l[..k] == r[..k] && l[k..] == r[k + 2..]
            }
            EventKind::RightCusp => {
                l.len() == r.len() + 2 && l[k] == l[k + 1] + 1 && r[..k] == l[..k] && r[k..] == l[k + 2..]
            }
        };
        if !ok {
            return false;
        }
    }
    fd.generators().iter().all(|g| {
        let k = fd.events()[g.event_index].k;
        let mu = fd.mus(g.event_index);
        match g.kind {
            GeneratorKind::Crossing => g.degree == mu[k] - mu[k + 1],
            GeneratorKind::RightCusp => g.degree == 1,
        }
    })
}

pub fn render(p: &Poly, labels: &[String]) -> String {
    if p.is_empty() {
        return "0".into();
    }
    p.iter()
        .map(|w| {
            if w.is_empty() {
                "1".to_owned()
            } else {
                w.iter().map(|&g| labels[g].as_str()).collect::<Vec<_>>().join("*")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}
