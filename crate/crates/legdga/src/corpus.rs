//! Seeded random fronts and MCSs for property runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{parse_front, EventKind, FrontDiagram, FrontEvent};
use crate::mcs::{enumerate_aform, AFormMcs, Mcs};
use crate::moves::{random_move, MoveCertificate};

pub const UNKNOT: &str = "l 1; r 1";
pub const TREFOIL: &str = "l 1; l 3; x 2; x 2; x 2; r 1; r 1";

pub fn unknot() -> FrontDiagram {
    parse_front(UNKNOT).expect("unknot parses")
}

pub fn trefoil() -> FrontDiagram {
    parse_front(TREFOIL).expect("trefoil parses")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random single-component plat front with at most three cusp pairs and
/// at most `max_crossings` crossings.
pub fn random_front<R: Rng>(rng: &mut R, max_crossings: usize) -> FrontDiagram {
    loop {
        let cusps = rng.gen_range(1..=3usize);
        let crossings = rng.gen_range(0..=max_crossings);
        let mut events = Vec::new();
        let mut n = 0;
        for _ in 0..cusps {
            events.push(FrontEvent::new(EventKind::LeftCusp, 2 * rng.gen_range(0..=n / 2)));
            n += 2;
        }
        for _ in 0..crossings {
            events.push(FrontEvent::new(EventKind::Crossing, rng.gen_range(0..n - 1)));
        }
        while n > 0 {
            events.push(FrontEvent::new(EventKind::RightCusp, 2 * rng.gen_range(0..n / 2)));
            n -= 2;
        }
        if let Ok(fd) = FrontDiagram::new(events) {
            return fd;
        }
    }
}

/// `n` random fronts from `seed`.
pub fn random_fronts(n: usize, seed: u64, max_crossings: usize) -> Vec<FrontDiagram> {
    let mut r = rng(seed);
    (0..n).map(|_| random_front(&mut r, max_crossings)).collect()
}

/// The unknot, the trefoil, then `n` random fronts.
pub fn standard_corpus(n: usize, seed: u64, max_crossings: usize) -> Vec<FrontDiagram> {
    let mut out = vec![unknot(), trefoil()];
    out.extend(random_fronts(n, seed, max_crossings));
    out
}

/// A uniformly chosen A-form MCS of `fd`, if it has any.
pub fn random_aform<R: Rng>(rng: &mut R, fd: &FrontDiagram) -> Option<AFormMcs> {
    let mut all = enumerate_aform(fd);
    if all.is_empty() {
        return None;
    }
    let i = rng.gen_range(0..all.len());
    Some(all.swap_remove(i))
}

/// Random walk of certified moves starting at `m`. Introductions are only
/// tried while the MCS has at most `max_marks` marks.
pub fn random_walk<R: Rng>(rng: &mut R, m: &Mcs, steps: usize, max_marks: usize) -> Vec<MoveCertificate> {
    let mut cur = m.clone();
    let mut out: Vec<MoveCertificate> = Vec::new();
    for _ in 0..steps {
        let Some(cert) = random_move(&cur, rng, 32, cur.marks().len() < max_marks) else {
            break;
        };
        cur = cert.after.clone();
        out.push(cert);
    }
    out
}
