//! MCS moves. Every application re-propagates the result and checks that the
//! complexes outside the modified window are unchanged.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::chordpath::linearized;
use crate::diagram::{parse_index, EventKind, Statement};
use crate::mcs::{CuspData, HandleslideMark, Mcs, McsError, Tangle};
use crate::z2linalg::Z2Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AlgebraMove {
    /// Remove marks `mark` and `mark + 1`, which are adjacent and identical.
    Cancel { mark: usize },
    /// Insert two identical marks just right of slice `slice`.
    Introduce { slice: usize, upper: usize, lower: usize },
    /// Exchange adjacent commuting marks `mark` and `mark + 1`.
    Commute { mark: usize },
    /// Exchange adjacent non-commuting marks, inserting the compensating mark
    /// between them.
    Expand { mark: usize },
    /// Inverse of `Expand` on marks `mark .. mark + 3`.
    Merge { mark: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CuspMove {
    /// Move a mark across an adjacent cusp whose strands it does not touch.
    Commute { mark: usize, direction: Direction },
    /// Turn the mark just right of a left cusp into implicit cusp data.
    MakeImplicit { mark: usize },
    /// Turn one implicit handleslide of a left cusp into an explicit mark.
    MakeExplicit { event: usize, upper: usize, lower: usize },
    /// Delete a mark of implicit type just left of a right cusp.
    Absorb { mark: usize },
    /// Inverse of `Absorb`.
    Emit { event: usize, upper: usize, lower: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MoveDescriptor {
    /// Insert the marks determined by generators i < j of slice `slice`.
    Explosion {
        slice: usize,
        i: usize,
        j: usize,
    },
    /// Remove the marks an explosion at the same data would insert.
    Implosion {
        slice: usize,
        i: usize,
        j: usize,
    },
    Algebra(AlgebraMove),
    SlidePastCrossing {
        mark: usize,
        direction: Direction,
    },
    SlidePastCusp(CuspMove),
}

impl fmt::Display for MoveDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = |d: &Direction| match d {
            Direction::Left => "left",
            Direction::Right => "right",
        };
        match self {
            MoveDescriptor::Explosion { slice, i, j } => {
                write!(f, "move explosion {} {} {}", slice + 1, i + 1, j + 1)
            }
            MoveDescriptor::Implosion { slice, i, j } => {
                write!(f, "move implosion {} {} {}", slice + 1, i + 1, j + 1)
            }
            MoveDescriptor::Algebra(a) => match a {
                AlgebraMove::Cancel { mark } => write!(f, "move algebra cancel {}", mark + 1),
                AlgebraMove::Introduce { slice, upper, lower } => {
                    write!(f, "move algebra introduce {} {} {}", slice + 1, upper + 1, lower + 1)
                }
                AlgebraMove::Commute { mark } => write!(f, "move algebra commute {}", mark + 1),
                AlgebraMove::Expand { mark } => write!(f, "move algebra expand {}", mark + 1),
                AlgebraMove::Merge { mark } => write!(f, "move algebra merge {}", mark + 1),
            },
            MoveDescriptor::SlidePastCrossing { mark, direction } => {
                write!(f, "move slide crossing {} {}", mark + 1, dir(direction))
            }
            MoveDescriptor::SlidePastCusp(c) => match c {
                CuspMove::Commute { mark, direction } => {
                    write!(f, "move slide cusp {} {}", mark + 1, dir(direction))
                }
                CuspMove::MakeImplicit { mark } => write!(f, "move implicit {}", mark + 1),
                CuspMove::MakeExplicit { event, upper, lower } => {
                    write!(f, "move explicit {} {} {}", event + 1, upper + 1, lower + 1)
                }
                CuspMove::Absorb { mark } => write!(f, "move absorb {}", mark + 1),
                CuspMove::Emit { event, upper, lower } => {
                    write!(f, "move emit {} {} {}", event + 1, upper + 1, lower + 1)
                }
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("pattern mismatch: {0}")]
    Pattern(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("explosion has no trajectories to insert (r + s = 0)")]
    EmptyExplosion,
    #[error("generators e{i} and e{j} do not satisfy |e_i| = |e_j| - 1")]
    ExplosionDegree { i: usize, j: usize },
    #[error("composite handleslide map changed")]
    CompositeMismatch,
    #[error("move does not change the MCS")]
    NoOp,
    #[error("result is not a valid MCS: {0}")]
    Invalid(McsError),
    #[error("complexes outside the window differ at slice x_{0}")]
    OuterMismatch(usize),
    #[error("MCSs live on different fronts")]
    DifferentFronts,
}

/// Evidence for one move application.
#[derive(Debug, Clone)]
pub struct MoveCertificate {
    pub before: Mcs,
    pub after: Mcs,
    pub descriptor: MoveDescriptor,
    /// Figure label of the move family; see the README for the correspondence.
    pub move_number: u8,
    pub window_before: Range<usize>,
    pub window_after: Range<usize>,
    pub outer_check: bool,
}

/// Marks grouped by gap, as (upper, lower) in left-to-right order.
type Gaps = Vec<Vec<(usize, usize)>>;

fn gaps_of(m: &Mcs) -> Gaps {
    let mut g: Gaps = vec![Vec::new(); m.front().events().len() + 1];
    for mk in m.marks() {
        g[mk.gap].push((mk.upper, mk.lower));
    }
    g
}

fn rebuild(m: &Mcs, gaps: &Gaps, cusp: BTreeMap<usize, CuspData>) -> Result<Mcs, McsError> {
    let mut marks = Vec::new();
    for (gap, list) in gaps.iter().enumerate() {
        for (order, &(u, l)) in list.iter().enumerate() {
            marks.push(HandleslideMark::new(gap, order, u, l));
        }
    }
    Mcs::propagate(m.front(), marks, cusp)
}

fn mark_at(m: &Mcs, mark: usize) -> Result<HandleslideMark, MoveError> {
    m.marks()
        .get(mark)
        .copied()
        .ok_or_else(|| MoveError::Range(format!("no mark {}", mark + 1)))
}

/// Gap and position at which marks go when inserted just right of slice `p`.
fn insertion_point(m: &Mcs, p: usize) -> Result<(usize, usize), MoveError> {
    if p >= m.slice_count() {
        return Err(MoveError::Range(format!("no slice x_{}", p + 1)));
    }
    Ok(match m.tangles()[p] {
        Tangle::Event(e) => (e + 1, 0),
        Tangle::Mark(i) => (m.marks()[i].gap, m.marks()[i].order + 1),
    })
}

fn explosion_marks(m: &Mcs, p: usize, i: usize, j: usize) -> Result<Vec<(usize, usize)>, MoveError> {
    if p >= m.slice_count() {
        return Err(MoveError::Range(format!("no slice x_{}", p + 1)));
    }
    let c = m.complex(p);
    if i >= j || j >= c.dim() {
        return Err(MoveError::Range(format!("generators e{} e{}", i + 1, j + 1)));
    }
    let deg = c.degrees();
    if deg[i] != deg[j] - 1 {
        return Err(MoveError::ExplosionDegree { i: i + 1, j: j + 1 });
    }
    let mut out: Vec<(usize, usize)> = (0..c.dim()).filter(|&u| c.coeff(u, i)).map(|u| (u, j)).collect();
    out.extend(c.image_of(j).into_iter().map(|v| (i, v)));
    if out.is_empty() {
        return Err(MoveError::EmptyExplosion);
    }
    Ok(out)
}

fn composite(n: usize, marks: &[(usize, usize)]) -> Z2Matrix {
    marks.iter().fold(Z2Matrix::identity(n), |acc, &(u, l)| {
        Z2Matrix::handleslide(n, u, l).mul(&acc)
    })
}

fn commute(a: (usize, usize), b: (usize, usize)) -> bool {
    a.1 != b.0 && b.1 != a.0
}

/// The mark whose map compensates for exchanging two non-commuting marks.
fn compensator(a: (usize, usize), b: (usize, usize)) -> Option<(usize, usize)> {
    if a.1 == b.0 {
        Some((a.0, b.1))
    } else if b.1 == a.0 {
        Some((b.0, a.1))
    } else {
        None
    }
}

fn sigma(k: usize, x: usize) -> usize {
    if x == k {
        k + 1
    } else if x == k + 1 {
        k
    } else {
        x
    }
}

fn classify_crossing_slide(k: usize, left: (usize, usize)) -> u8 {
    let (x, y) = left;
    if ![x, y].iter().any(|&s| s == k || s == k + 1) {
        7
    } else if y == k || x == k + 1 {
        8
    } else {
        10
    }
}

struct Edit {
    gaps: Gaps,
    cusp: BTreeMap<usize, CuspData>,
    number: u8,
    /// (gap, range of positions) whose composite must be preserved.
    composite_check: Option<(usize, Range<usize>, Range<usize>)>,
    widen: usize,
}

fn plan(m: &Mcs, d: &MoveDescriptor) -> Result<Edit, MoveError> {
    let mut gaps = gaps_of(m);
    let mut cusp = m.cusp_data().clone();
    let events = m.front().events();
    let adjacent = |a: usize, n: usize| -> Result<Vec<HandleslideMark>, MoveError> {
        let list: Vec<HandleslideMark> = (a..a + n).map(|i| mark_at(m, i)).collect::<Result<_, _>>()?;
        if list.iter().any(|x| x.gap != list[0].gap) {
            return Err(MoveError::Pattern("marks are not adjacent".into()));
        }
        Ok(list)
    };
    let mut composite_check = None;
    let number = match *d {
        MoveDescriptor::Explosion { slice, i, j } => {
            let new = explosion_marks(m, slice, i, j)?;
            let (g, pos) = insertion_point(m, slice)?;
            gaps[g].splice(pos..pos, new);
            15
        }
        MoveDescriptor::Implosion { slice, i, j } => {
            let want = explosion_marks(m, slice, i, j)?;
            let (g, pos) = insertion_point(m, slice)?;
            if gaps[g].get(pos..pos + want.len()) != Some(&want[..]) {
                return Err(MoveError::Pattern("marks right of the slice do not match".into()));
            }
            gaps[g].drain(pos..pos + want.len());
            15
        }
        MoveDescriptor::Algebra(a) => match a {
            AlgebraMove::Cancel { mark } => {
                let l = adjacent(mark, 2)?;
                if (l[0].upper, l[0].lower) != (l[1].upper, l[1].lower) {
                    return Err(MoveError::Pattern("marks are not identical".into()));
                }
                gaps[l[0].gap].drain(l[0].order..l[0].order + 2);
                composite_check = Some((l[0].gap, l[0].order..l[0].order + 2, l[0].order..l[0].order));
                1
            }
            AlgebraMove::Introduce { slice, upper, lower } => {
                let (g, pos) = insertion_point(m, slice)?;
                if upper >= lower || lower >= m.front().strand_count(g) {
                    return Err(MoveError::Range("strands".into()));
                }
                gaps[g].splice(pos..pos, [(upper, lower), (upper, lower)]);
                composite_check = Some((g, pos..pos, pos..pos + 2));
                1
            }
            AlgebraMove::Commute { mark } => {
                let l = adjacent(mark, 2)?;
                let (a, b) = ((l[0].upper, l[0].lower), (l[1].upper, l[1].lower));
                if a == b {
                    return Err(MoveError::NoOp);
                }
                if !commute(a, b) {
                    return Err(MoveError::Pattern("marks do not commute".into()));
                }
                gaps[l[0].gap].swap(l[0].order, l[0].order + 1);
                let r = l[0].order..l[0].order + 2;
                composite_check = Some((l[0].gap, r.clone(), r));
                if a.0 == b.0 || a.1 == b.1 {
                    3
                } else {
                    2
                }
            }
            AlgebraMove::Expand { mark } => {
                let l = adjacent(mark, 2)?;
                let (a, b) = ((l[0].upper, l[0].lower), (l[1].upper, l[1].lower));
                if commute(a, b) {
                    return Err(MoveError::Pattern("marks commute".into()));
                }
                let c = compensator(a, b).expect("non-commuting marks share an endpoint");
                let o = l[0].order;
                gaps[l[0].gap].splice(o..o + 2, [b, c, a]);
                composite_check = Some((l[0].gap, o..o + 2, o..o + 3));
                6
            }
            AlgebraMove::Merge { mark } => {
                let l = adjacent(mark, 3)?;
                let (b, c, a) = (
                    (l[0].upper, l[0].lower),
                    (l[1].upper, l[1].lower),
                    (l[2].upper, l[2].lower),
                );
                if commute(a, b) || compensator(a, b) != Some(c) {
                    return Err(MoveError::Pattern("marks do not form a mergeable triple".into()));
                }
                let o = l[0].order;
                gaps[l[0].gap].splice(o..o + 3, [a, b]);
                composite_check = Some((l[0].gap, o..o + 3, o..o + 2));
                6
            }
        },
        MoveDescriptor::SlidePastCrossing { mark, direction } => {
            let mk = mark_at(m, mark)?;
            let cur = (mk.upper, mk.lower);
            let (e, target) = match direction {
                Direction::Right => {
                    if mk.order + 1 != gaps[mk.gap].len() {
                        return Err(MoveError::Pattern("mark is not adjacent to the next event".into()));
                    }
                    (mk.gap, mk.gap + 1)
                }
                Direction::Left => {
                    if mk.order != 0 {
                        return Err(MoveError::Pattern("mark is not adjacent to the previous event".into()));
                    }
                    (mk.gap - 1, mk.gap - 1)
                }
            };
            let ev = events[e];
            if ev.kind != EventKind::Crossing {
                return Err(MoveError::Pattern("adjacent event is not a crossing".into()));
            }
            let k = ev.k;
            if (cur.0, cur.1) == (k, k + 1) {
                return Err(MoveError::Pattern("mark joins the two crossing strands".into()));
            }
            let moved = (sigma(k, cur.0), sigma(k, cur.1));
            let left = if direction == Direction::Right { cur } else { moved };
            gaps[mk.gap].remove(mk.order);
            if direction == Direction::Right {
                gaps[target].insert(0, moved);
            } else {
                gaps[target].push(moved);
            }
            classify_crossing_slide(k, left)
        }
        MoveDescriptor::SlidePastCusp(c) => match c {
            CuspMove::Commute { mark, direction } => {
                let mk = mark_at(m, mark)?;
                let (x, y) = (mk.upper, mk.lower);
                let e = match direction {
                    Direction::Right if mk.order + 1 == gaps[mk.gap].len() => mk.gap,
                    Direction::Left if mk.order == 0 => mk.gap - 1,
                    _ => return Err(MoveError::Pattern("mark is not adjacent to the event".into())),
                };
                let ev = events[e];
                let k = ev.k;
                let up = |s: usize| if s < k { s } else { s + 2 };
                let down = |s: usize| if s < k { s } else { s - 2 };
                let touches = [x, y].iter().any(|&s| s == k || s == k + 1);
                // Positions on the side with more strands must avoid the cusp strands.
                let more_strands_side = matches!(
                    (ev.kind, direction),
                    (EventKind::LeftCusp, Direction::Left) | (EventKind::RightCusp, Direction::Right)
                );
                let moved = match ev.kind {
                    EventKind::Crossing => return Err(MoveError::Pattern("adjacent event is a crossing".into())),
                    _ if more_strands_side => {
                        if touches {
                            return Err(MoveError::Pattern("mark touches the cusp strands".into()));
                        }
                        (down(x), down(y))
                    }
                    _ => (up(x), up(y)),
                };
                let straddles = {
                    let (a, b) = if more_strands_side { (x, y) } else { moved };
                    a < k && b > k + 1
                };
                gaps[mk.gap].remove(mk.order);
                match direction {
                    Direction::Right => gaps[e + 1].insert(0, moved),
                    Direction::Left => {
                        if e == 0 {
                            return Err(MoveError::Range("no gap left of the first cusp".into()));
                        }
                        gaps[e].push(moved)
                    }
                }
                match (straddles, ev.kind) {
                    (true, _) => 12,
                    (false, EventKind::LeftCusp) => 9,
                    _ => 11,
                }
            }
            CuspMove::MakeImplicit { mark } => {
                let mk = mark_at(m, mark)?;
                let e = mk.gap - 1;
                let ev = events[e];
                if mk.order != 0 || ev.kind != EventKind::LeftCusp {
                    return Err(MoveError::Pattern("mark is not just right of a left cusp".into()));
                }
                let k = ev.k;
                let entry = cusp.entry(e).or_default();
                let toggle = |list: &mut Vec<usize>, s: usize| {
                    if let Some(p) = list.iter().position(|&x| x == s) {
                        list.remove(p);
                    } else {
                        list.push(s);
                    }
                };
                if mk.lower == k && mk.upper < k {
                    toggle(&mut entry.u, mk.upper);
                } else if mk.upper == k + 1 {
                    toggle(&mut entry.v, mk.lower);
                } else {
                    return Err(MoveError::Pattern("mark is not of implicit type".into()));
                }
                gaps[mk.gap].remove(0);
                13
            }
            CuspMove::MakeExplicit { event, upper, lower } => {
                let ev = *events
                    .get(event)
                    .ok_or_else(|| MoveError::Range(format!("no event {}", event + 1)))?;
                let k = ev.k;
                let entry = cusp
                    .get_mut(&event)
                    .ok_or_else(|| MoveError::Pattern("cusp has no implicit handleslides".into()))?;
                let list = if lower == k {
                    &mut entry.u
                } else if upper == k + 1 {
                    &mut entry.v
                } else {
                    return Err(MoveError::Pattern("not an implicit handleslide".into()));
                };
                let s = if lower == k { upper } else { lower };
                let p = list
                    .iter()
                    .position(|&x| x == s)
                    .ok_or_else(|| MoveError::Pattern("implicit handleslide not present".into()))?;
                list.remove(p);
                gaps[event + 1].insert(0, (upper, lower));
                13
            }
            CuspMove::Absorb { mark } => {
                let mk = mark_at(m, mark)?;
                let ev = events[mk.gap];
                let k = ev.k;
                if mk.order + 1 != gaps[mk.gap].len() || ev.kind != EventKind::RightCusp {
                    return Err(MoveError::Pattern("mark is not just left of a right cusp".into()));
                }
                if !((mk.lower == k && mk.upper < k) || mk.upper == k + 1) {
                    return Err(MoveError::Pattern("mark is not of implicit type".into()));
                }
                gaps[mk.gap].pop();
                14
            }
            CuspMove::Emit { event, upper, lower } => {
                let ev = *events
                    .get(event)
                    .ok_or_else(|| MoveError::Range(format!("no event {}", event + 1)))?;
                let k = ev.k;
                if ev.kind != EventKind::RightCusp {
                    return Err(MoveError::Pattern("event is not a right cusp".into()));
                }
                if !((lower == k && upper < k) || (upper == k + 1 && lower > k + 1)) {
                    return Err(MoveError::Pattern("not an implicit handleslide".into()));
                }
                if lower >= m.front().strand_count(event) {
                    return Err(MoveError::Range("strands".into()));
                }
                gaps[event].push((upper, lower));
                14
            }
        },
    };
    cusp.retain(|_, cd| !cd.is_empty());
    // the right cusp's quotient is what hides an absorbed mark
    let widen = usize::from(number == 14);
    Ok(Edit {
        gaps,
        cusp,
        number,
        composite_check,
        widen,
    })
}

#[derive(PartialEq, Eq)]
enum TangleKey {
    Event(usize, Option<CuspData>),
    Mark(usize, usize),
}

fn keys(m: &Mcs) -> Vec<TangleKey> {
    m.tangles()
        .iter()
        .map(|&t| match t {
            Tangle::Event(e) => TangleKey::Event(e, m.cusp_data().get(&e).cloned()),
            Tangle::Mark(i) => TangleKey::Mark(m.marks()[i].upper, m.marks()[i].lower),
        })
        .collect()
}

/// Windows of differing tangles, and whether all complexes outside agree.
/// `widen` extends both windows rightward by that many tangles, for moves
/// whose effect is only undone by the event after the edited marks.
fn outer_check(before: &Mcs, after: &Mcs, widen: usize) -> (Range<usize>, Range<usize>, Option<usize>) {
    let (kb, ka) = (keys(before), keys(after));
    let prefix = kb.iter().zip(&ka).take_while(|(a, b)| a == b).count();
    let max_suffix = kb.len().min(ka.len()) - prefix;
    let suffix = kb
        .iter()
        .rev()
        .zip(ka.iter().rev())
        .take_while(|(a, b)| a == b)
        .count()
        .min(max_suffix)
        .saturating_sub(widen);
    let wb = prefix..kb.len() - suffix;
    let wa = prefix..ka.len() - suffix;
    // Slice s sits between tangles s and s + 1. A slice next to an empty
    // window is outside on both sides, so it must match both neighbours.
    let mut pairs = BTreeSet::new();
    for s in 0..before.slice_count() {
        if s < prefix {
            pairs.insert((s, s));
        }
        if s + 1 >= wb.end {
            if let Some(sa) = (s + wa.end).checked_sub(wb.end) {
                pairs.insert((s, sa));
            }
        }
    }
    for s in 0..after.slice_count() {
        if s < prefix {
            pairs.insert((s, s));
        }
        if s + 1 >= wa.end {
            if let Some(sb) = (s + wb.end).checked_sub(wa.end) {
                pairs.insert((sb, s));
            }
        }
    }
    for (sb, sa) in pairs {
        if before.complex(sb) != after.complex(sa) {
            return (wb, wa, Some(sb + 1));
        }
    }
    (wb, wa, None)
}

/// Apply a move and certify it.
pub fn apply(m: &Mcs, d: &MoveDescriptor) -> Result<MoveCertificate, MoveError> {
    let edit = plan(m, d)?;
    if let Some((g, rb, ra)) = &edit.composite_check {
        let n = m.front().strand_count(*g);
        let before = gaps_of(m);
        if composite(n, &before[*g][rb.clone()]) != composite(n, &edit.gaps[*g][ra.clone()]) {
            return Err(MoveError::CompositeMismatch);
        }
    }
    let after = rebuild(m, &edit.gaps, edit.cusp).map_err(MoveError::Invalid)?;
    if after.marks() == m.marks() && after.cusp_data() == m.cusp_data() {
        return Err(MoveError::NoOp);
    }
    let (wb, wa, mismatch) = outer_check(m, &after, edit.widen);
    if let Some(s) = mismatch {
        return Err(MoveError::OuterMismatch(s));
    }
    Ok(MoveCertificate {
        before: m.clone(),
        after,
        descriptor: *d,
        move_number: edit.number,
        window_before: wb,
        window_after: wa,
        outer_check: true,
    })
}

pub fn apply_explosion(m: &Mcs, slice: usize, i: usize, j: usize) -> Result<Mcs, MoveError> {
    apply(m, &MoveDescriptor::Explosion { slice, i, j }).map(|c| c.after)
}

pub fn apply_handleslide_algebra(m: &Mcs, a: AlgebraMove) -> Result<Mcs, MoveError> {
    apply(m, &MoveDescriptor::Algebra(a)).map(|c| c.after)
}

pub fn apply_slide_past(m: &Mcs, d: &MoveDescriptor) -> Result<Mcs, MoveError> {
    match d {
        MoveDescriptor::SlidePastCrossing { .. } | MoveDescriptor::SlidePastCusp(_) => apply(m, d).map(|c| c.after),
        _ => Err(MoveError::Pattern("not a slide move".into())),
    }
}

/// Linearized complexes agree up to isomorphism: equal ranks of d_1 in every degree.
pub fn check_linearized_iso(before: &Mcs, after: &Mcs) -> Result<bool, MoveError> {
    if before.front() != after.front() {
        return Err(MoveError::DifferentFronts);
    }
    Ok(linearized(before).ranks_by_degree() == linearized(after).ranks_by_degree())
}

/// Descriptors whose local pattern matches; application may still reject them.
pub fn candidate_moves(m: &Mcs, with_introductions: bool) -> Vec<MoveDescriptor> {
    let mut out = Vec::new();
    let front = m.front();
    for p in 0..m.slice_count() {
        let c = m.complex(p);
        let deg = c.degrees();
        for i in 0..c.dim() {
            for j in i + 1..c.dim() {
                if deg[i] == deg[j] - 1 {
                    if explosion_marks(m, p, i, j).is_ok() {
                        out.push(MoveDescriptor::Explosion { slice: p, i, j });
                    }
                    if plan(m, &MoveDescriptor::Implosion { slice: p, i, j }).is_ok() {
                        out.push(MoveDescriptor::Implosion { slice: p, i, j });
                    }
                }
                if with_introductions && deg[i] == deg[j] {
                    out.push(MoveDescriptor::Algebra(AlgebraMove::Introduce {
                        slice: p,
                        upper: i,
                        lower: j,
                    }));
                }
            }
        }
    }
    let marks = m.marks();
    for (i, mk) in marks.iter().enumerate() {
        let next = marks.get(i + 1).filter(|n| n.gap == mk.gap);
        if let Some(n) = next {
            let (a, b) = ((mk.upper, mk.lower), (n.upper, n.lower));
            let alg = if a == b {
                AlgebraMove::Cancel { mark: i }
            } else if commute(a, b) {
                AlgebraMove::Commute { mark: i }
            } else {
                AlgebraMove::Expand { mark: i }
            };
            out.push(MoveDescriptor::Algebra(alg));
            if plan(m, &MoveDescriptor::Algebra(AlgebraMove::Merge { mark: i })).is_ok() {
                out.push(MoveDescriptor::Algebra(AlgebraMove::Merge { mark: i }));
            }
        }
        let last = next.is_none();
        for (direction, adj, e) in [
            (Direction::Right, last, mk.gap),
            (Direction::Left, mk.order == 0, mk.gap - 1),
        ] {
            if !adj {
                continue;
            }
            match front.events()[e].kind {
                EventKind::Crossing => out.push(MoveDescriptor::SlidePastCrossing { mark: i, direction }),
                _ => out.push(MoveDescriptor::SlidePastCusp(CuspMove::Commute { mark: i, direction })),
            }
        }
        if mk.order == 0 && front.events()[mk.gap - 1].kind == EventKind::LeftCusp {
            out.push(MoveDescriptor::SlidePastCusp(CuspMove::MakeImplicit { mark: i }));
        }
        if last && front.events()[mk.gap].kind == EventKind::RightCusp {
            out.push(MoveDescriptor::SlidePastCusp(CuspMove::Absorb { mark: i }));
        }
    }
    for (&event, cd) in m.cusp_data() {
        let k = front.events()[event].k;
        for &u in &cd.u {
            out.push(MoveDescriptor::SlidePastCusp(CuspMove::MakeExplicit {
                event,
                upper: u,
                lower: k,
            }));
        }
        for &v in &cd.v {
            out.push(MoveDescriptor::SlidePastCusp(CuspMove::MakeExplicit {
                event,
                upper: k + 1,
                lower: v,
            }));
        }
    }
    for (event, ev) in front.events().iter().enumerate() {
        if ev.kind != EventKind::RightCusp {
            continue;
        }
        let k = ev.k;
        let mus = front.mus(event);
        for u in 0..k {
            if mus[u] == mus[k] {
                out.push(MoveDescriptor::SlidePastCusp(CuspMove::Emit {
                    event,
                    upper: u,
                    lower: k,
                }));
            }
        }
        for v in k + 2..mus.len() {
            if mus[v] == mus[k + 1] {
                out.push(MoveDescriptor::SlidePastCusp(CuspMove::Emit {
                    event,
                    upper: k + 1,
                    lower: v,
                }));
            }
        }
    }
    out
}

fn family(d: &MoveDescriptor) -> u8 {
    match d {
        MoveDescriptor::Explosion { .. } => 0,
        MoveDescriptor::Implosion { .. } => 1,
        MoveDescriptor::Algebra(AlgebraMove::Introduce { .. }) => 2,
        MoveDescriptor::Algebra(_) => 3,
        MoveDescriptor::SlidePastCrossing { .. } => 4,
        MoveDescriptor::SlidePastCusp(CuspMove::Commute { .. }) => 5,
        MoveDescriptor::SlidePastCusp(CuspMove::Emit { .. }) => 6,
        MoveDescriptor::SlidePastCusp(_) => 7,
    }
}

/// Apply one random certified move, choosing a move family uniformly first.
/// With `grow` false, moves that add marks are not tried.
pub fn random_move<R: Rng>(m: &Mcs, rng: &mut R, tries: usize, grow: bool) -> Option<MoveCertificate> {
    let mut by_family: BTreeMap<u8, Vec<MoveDescriptor>> = BTreeMap::new();
    for d in candidate_moves(m, grow) {
        if !grow && matches!(family(&d), 0 | 6) {
            continue;
        }
        by_family.entry(family(&d)).or_default().push(d);
    }
    for _ in 0..tries {
        let keys: Vec<u8> = by_family.keys().copied().collect();
        let f = *keys.choose(rng)?;
        let list = by_family.get_mut(&f).expect("key present");
        let d = list.swap_remove(rng.gen_range(0..list.len()));
        if list.is_empty() {
            by_family.remove(&f);
        }
        if let Ok(c) = apply(m, &d) {
            return Some(c);
        }
    }
    None
}

/// Breadth-first search for a move sequence reaching an A-form MCS.
pub fn search_aform(m: &Mcs, max_depth: usize, max_nodes: usize) -> Option<Vec<MoveDescriptor>> {
    type Key = (Vec<HandleslideMark>, BTreeMap<usize, CuspData>);
    let key = |x: &Mcs| -> Key { (x.marks().to_vec(), x.cusp_data().clone()) };
    let mut seen: HashSet<Key> = HashSet::from([key(m)]);
    let mut queue = VecDeque::from([(m.clone(), Vec::new())]);
    while let Some((cur, path)) = queue.pop_front() {
        if cur.is_aform() {
            return Some(path);
        }
        if path.len() == max_depth {
            continue;
        }
        for d in candidate_moves(&cur, false) {
            if seen.len() >= max_nodes {
                return None;
            }
            if let Ok(cert) = apply(&cur, &d) {
                if seen.insert(key(&cert.after)) {
                    let mut p = path.clone();
                    p.push(d);
                    queue.push_back((cert.after, p));
                }
            }
        }
    }
    None
}

/// Parse a `move ...` statement (1-based indices).
pub fn parse_move(st: &Statement) -> Result<MoveDescriptor, crate::diagram::DiagramError> {
    let t: Vec<&str> = st.tokens.iter().map(String::as_str).collect();
    let idx = |i: usize| -> Result<usize, crate::diagram::DiagramError> {
        let tok = t.get(i).ok_or_else(|| st.error("missing argument"))?;
        parse_index(st, tok, "index")
    };
    let dir = |i: usize| match t.get(i) {
        Some(&"left") => Ok(Direction::Left),
        Some(&"right") => Ok(Direction::Right),
        _ => Err(st.error("expected `left` or `right`")),
    };
    let arity = |n: usize| {
        if t.len() == n {
            Ok(())
        } else {
            Err(st.error(format!("`{}` takes {} arguments", t[..2.min(t.len())].join(" "), n - 2)))
        }
    };
    let d = match t.get(1).copied() {
        Some("explosion") | Some("implosion") => {
            arity(5)?;
            let (slice, i, j) = (idx(2)?, idx(3)?, idx(4)?);
            if t[1] == "explosion" {
                MoveDescriptor::Explosion { slice, i, j }
            } else {
                MoveDescriptor::Implosion { slice, i, j }
            }
        }
        Some("algebra") => match t.get(2).copied() {
            Some("introduce") => {
                arity(6)?;
                MoveDescriptor::Algebra(AlgebraMove::Introduce {
                    slice: idx(3)?,
                    upper: idx(4)?,
                    lower: idx(5)?,
                })
            }
            Some(op) => {
                arity(4)?;
                let mark = idx(3)?;
                MoveDescriptor::Algebra(match op {
                    "cancel" => AlgebraMove::Cancel { mark },
                    "commute" => AlgebraMove::Commute { mark },
                    "expand" => AlgebraMove::Expand { mark },
                    "merge" => AlgebraMove::Merge { mark },
                    _ => return Err(st.error(format!("unknown algebra move `{op}`"))),
                })
            }
            None => return Err(st.error("missing algebra move")),
        },
        Some("slide") => {
            // `move slide <kind|crossing|cusp> <mark> [left|right]`
            let kind = t.get(2).copied().ok_or_else(|| st.error("missing slide kind"))?;
            let mark = idx(3)?;
            let direction = if t.len() == 5 {
                dir(4)?
            } else if t.len() == 4 {
                Direction::Right
            } else {
                return Err(st.error("`move slide` takes <kind> <mark> [left|right]"));
            };
            match kind {
                "crossing" | "7" | "8" | "10" => MoveDescriptor::SlidePastCrossing { mark, direction },
                "cusp" | "9" | "11" | "12" => MoveDescriptor::SlidePastCusp(CuspMove::Commute { mark, direction }),
                "13" => MoveDescriptor::SlidePastCusp(CuspMove::MakeImplicit { mark }),
                "14" => MoveDescriptor::SlidePastCusp(CuspMove::Absorb { mark }),
                _ => return Err(st.error(format!("unknown slide kind `{kind}`"))),
            }
        }
        Some("implicit") => {
            arity(3)?;
            MoveDescriptor::SlidePastCusp(CuspMove::MakeImplicit { mark: idx(2)? })
        }
        Some("explicit") => {
            arity(5)?;
            MoveDescriptor::SlidePastCusp(CuspMove::MakeExplicit {
                event: idx(2)?,
                upper: idx(3)?,
                lower: idx(4)?,
            })
        }
        Some("absorb") => {
            arity(3)?;
            MoveDescriptor::SlidePastCusp(CuspMove::Absorb { mark: idx(2)? })
        }
        Some("emit") => {
            arity(5)?;
            MoveDescriptor::SlidePastCusp(CuspMove::Emit {
                event: idx(2)?,
                upper: idx(3)?,
                lower: idx(4)?,
            })
        }
        _ => return Err(st.error("unknown move")),
    };
    Ok(d)
}

/// The numeric label a `move slide <n>` statement asserts, if any.
pub fn asserted_kind(st: &Statement) -> Option<u8> {
    if st.tokens.get(1).map(String::as_str) == Some("slide") {
        st.tokens.get(2).and_then(|k| k.parse().ok())
    } else {
        None
    }
}
