//! Property checks over a set of fronts, used by `legdga verify`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cedga;
use crate::chordpath::{self, DgaElement};
use crate::corpus;
use crate::diagram::{FrontDiagram, GeneratorKind};
use crate::mcs::{enumerate_aform, AFormMcs, Mcs};
use crate::moves::check_linearized_iso;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    D2,
    Degree,
    AformEq,
    AugBijection,
    Moves,
    GradientLemma,
    DiskPairs,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "d2" => Suite::D2,
            "degree" => Suite::Degree,
            "aform-eq" => Suite::AformEq,
            "aug-bijection" => Suite::AugBijection,
            "moves" => Suite::Moves,
            "gradient-lemma" => Suite::GradientLemma,
            "disk-pairs" => Suite::DiskPairs,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite `{s}`")),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::D2 => "d2",
            Suite::Degree => "degree",
            Suite::AformEq => "aform-eq",
            Suite::AugBijection => "aug-bijection",
            Suite::Moves => "moves",
            Suite::GradientLemma => "gradient-lemma",
            Suite::DiskPairs => "disk-pairs",
            Suite::All => "all",
        })
    }
}

const SUITES: [Suite; 7] = [
    Suite::D2,
    Suite::Degree,
    Suite::AformEq,
    Suite::AugBijection,
    Suite::Moves,
    Suite::GradientLemma,
    Suite::DiskPairs,
];

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const MAX_DUMPS: usize = 5;

struct Acc {
    report: CheckReport,
    failed: usize,
}

impl Acc {
    fn new(s: Suite) -> Self {
        Acc {
            report: CheckReport {
                suite: s.to_string(),
                cases: 0,
                failures: Vec::new(),
            },
            failed: 0,
        }
    }

    fn check(&mut self, ok: bool, dump: impl FnOnce() -> String) {
        self.report.cases += 1;
        if !ok {
            self.failed += 1;
            if self.report.failures.len() < MAX_DUMPS {
                self.report.failures.push(dump());
            }
        }
    }

    fn finish(mut self) -> CheckReport {
        if self.failed > self.report.failures.len() {
            let more = self.failed - self.report.failures.len();
            self.report.failures.push(format!("... and {more} more"));
        }
        self.report
    }
}

struct FrontData {
    front: FrontDiagram,
    d: Vec<DgaElement>,
    aforms: Vec<AFormMcs>,
}

fn degrees(fd: &FrontDiagram) -> Vec<i64> {
    fd.generators().iter().map(|g| g.degree).collect()
}

fn render_d(fd: &FrontDiagram, d: &[DgaElement]) -> String {
    let labels = fd.labels();
    d.iter()
        .enumerate()
        .map(|(i, x)| format!("d {} = {}", labels[i], x.render(&labels)))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Run `suite` over `fronts`. Move walks are seeded with `seed`.
pub fn run_suite(suite: Suite, fronts: &[FrontDiagram], seed: u64) -> Vec<CheckReport> {
    let data: Vec<FrontData> = fronts
        .iter()
        .map(|f| FrontData {
            front: f.clone(),
            d: cedga::differential(f),
            aforms: enumerate_aform(f),
        })
        .collect();
    let suites: Vec<Suite> = if suite == Suite::All {
        SUITES.to_vec()
    } else {
        vec![suite]
    };
    suites.into_iter().map(|s| run_one(s, &data, seed)).collect()
}

fn walk_mcss(data: &[FrontData], seed: u64) -> Vec<(usize, Mcs)> {
    let mut rng = corpus::rng(seed);
    let mut out = Vec::new();
    for (fi, fd) in data.iter().enumerate() {
        for af in &fd.aforms {
            out.push((fi, af.mcs().clone()));
            for c in corpus::random_walk(&mut rng, af.mcs(), 12, 8) {
                out.push((fi, c.after));
            }
        }
    }
    out
}

fn run_one(s: Suite, data: &[FrontData], seed: u64) -> CheckReport {
    let mut acc = Acc::new(s);
    match s {
        Suite::D2 | Suite::Degree => {
            for fd in data {
                let ok = if s == Suite::D2 {
                    chordpath::d_squared_vanishes(&fd.d)
                } else {
                    chordpath::degrees_drop_by_one(&fd.d, &degrees(&fd.front))
                };
                acc.check(ok, || format!("CE: {} :: {}", fd.front, render_d(&fd.front, &fd.d)));
            }
            for (fi, m) in walk_mcss(data, seed) {
                let fd = &data[fi].front;
                let d = chordpath::differential(&m);
                let ok = if s == Suite::D2 {
                    chordpath::d_squared_vanishes(&d)
                } else {
                    chordpath::degrees_drop_by_one(&d, &degrees(fd))
                };
                acc.check(ok, || {
                    format!("MCS: {} :: {}", m.to_text().replace('\n', "; "), render_d(fd, &d))
                });
            }
        }
        Suite::AformEq => {
            for fd in data {
                for af in &fd.aforms {
                    let d = chordpath::differential(af.mcs());
                    let tw = cedga::twist(&fd.front, &fd.d, &af.augmentation());
                    acc.check(tw.as_ref() == Ok(&d), || {
                        format!(
                            "{} S={:?} :: mcs {} :: twisted {:?}",
                            fd.front,
                            af.marked(),
                            render_d(&fd.front, &d),
                            tw.map(|t| render_d(&fd.front, &t))
                        )
                    });
                }
            }
        }
        Suite::AugBijection => {
            for fd in data {
                let augs: BTreeSet<BTreeSet<usize>> = cedga::augmentations(&fd.front, &fd.d)
                    .iter()
                    .map(|a| a.support())
                    .collect();
                let mcs: BTreeSet<BTreeSet<usize>> = fd.aforms.iter().map(|a| a.marked().clone()).collect();
                acc.check(augs == mcs, || {
                    format!("{} :: augmentations {augs:?} :: A-form {mcs:?}", fd.front)
                });
            }
        }
        Suite::Moves => {
            let mut rng = corpus::rng(seed);
            for fd in data {
                for af in &fd.aforms {
                    for c in corpus::random_walk(&mut rng, af.mcs(), 12, 8) {
                        let ok = check_linearized_iso(&c.before, &c.after) == Ok(true) && c.outer_check;
                        acc.check(ok, || {
                            format!("{} :: {}", c.before.to_text().replace('\n', "; "), c.descriptor)
                        });
                    }
                }
            }
        }
        Suite::GradientLemma => {
            for fd in data {
                for af in &fd.aforms {
                    let m = af.mcs();
                    for (p, counts) in cedga::gradient_path_counts(m).iter().enumerate() {
                        let c = m.complex(p);
                        for i in 0..c.dim() {
                            for j in i + 1..c.dim() {
                                let n = counts.get(&(i, j)).copied().unwrap_or(0);
                                acc.check((n % 2 == 1) == c.coeff(i, j), || {
                                    format!(
                                        "{} S={:?} slice x_{} [{},{}]: {} paths",
                                        fd.front,
                                        af.marked(),
                                        p + 1,
                                        i + 1,
                                        j + 1,
                                        n
                                    )
                                });
                            }
                        }
                    }
                }
            }
        }
        Suite::DiskPairs => {
            for fd in data {
                for af in &fd.aforms {
                    let eps = af.augmentation();
                    let Ok(tw) = cedga::twist(&fd.front, &fd.d, &eps) else {
                        acc.check(false, || {
                            format!("{} S={:?}: not an augmentation", fd.front, af.marked())
                        });
                        continue;
                    };
                    let m = af.mcs();
                    let counts = cedga::gradient_path_counts(m);
                    for a in 0..fd.front.generators().len() {
                        let sum: DgaElement = cedga::all_disk_pairs(&fd.front, &eps, a)
                            .iter()
                            .map(|p| p.word())
                            .filter(|w| !w.is_empty())
                            .collect();
                        acc.check(sum == tw[a], || {
                            format!("{} S={:?} generator {}", fd.front, af.marked(), a + 1)
                        });
                        for_each_interval(&fd.front, |b, u, l| {
                            let s = m.tangle_of_event(fd.front.generators()[b].event_index) - 1;
                            let delta = cedga::disk_pairs(&fd.front, &eps, a, b, (u, l)).len();
                            let g = counts[s].get(&(u, l)).copied().unwrap_or(0) as usize;
                            let paths = chordpath::paths_terminating(m, a, b, u, l).len();
                            acc.check(delta % 2 == (g * paths) % 2, || {
                                format!(
                                    "{} S={:?} a={} b={} [{},{}]: {} vs {}*{}",
                                    fd.front,
                                    af.marked(),
                                    a + 1,
                                    b + 1,
                                    u + 1,
                                    l + 1,
                                    delta,
                                    g,
                                    paths
                                )
                            });
                        });
                    }
                }
            }
        }
        Suite::All => unreachable!("expanded by run_suite"),
    }
    acc.finish()
}

/// Calls `f(b, u, l)` for each crossing b on strands k, k+1 and each
/// interval [u, k] with u < k or [k+1, l] with l > k+1.
pub fn for_each_interval(fd: &FrontDiagram, mut f: impl FnMut(usize, usize, usize)) {
    for g in fd.generators() {
        if g.kind != GeneratorKind::Crossing {
            continue;
        }
        let k = fd.events()[g.event_index].k;
        let n = fd.strand_count(g.event_index);
        for u in 0..k {
            f(g.id, u, k);
        }
        for l in k + 2..n {
            f(g.id, k + 1, l);
        }
    }
}
