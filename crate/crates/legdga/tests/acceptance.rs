//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails, except for failures listed in
//! `KNOWN_UNATTAINABLE` whose failure signature matches the one recorded
//! there.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use legdga::cedga;
use legdga::chordpath;
use legdga::corpus::{self, TREFOIL, UNKNOT};
use legdga::diagram::{parse_front, FrontDiagram, GeneratorKind};
use legdga::mcs::{enumerate_aform, AFormMcs, Mcs};
use legdga::moves::{MoveCertificate, MoveDescriptor};
use legdga::render::render_svg;
use legdga::verify::for_each_interval;

const SEED: u64 = 20240611;
const RANDOM_FRONTS: usize = 150;
const MAX_CROSSINGS: usize = 8;
const WALK_STEPS: usize = 12;
const WALK_MARKS: usize = 8;

/// Criteria whose literal statement is false; the harness still requires
/// the documented failure signature so regressions are caught.
const KNOWN_UNATTAINABLE: &[u8] = &[8];

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when a failure matches its documented signature.
    expected_failure: bool,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
            expected_failure: false,
        }
    }
}

struct Corpus {
    fronts: Vec<FrontDiagram>,
}

impl Corpus {
    /// The unknot, the trefoil and `RANDOM_FRONTS` distinct random fronts.
    fn new() -> Self {
        let mut fronts = vec![corpus::unknot(), corpus::trefoil()];
        let mut seen: BTreeSet<String> = fronts.iter().map(|f| f.to_string()).collect();
        let mut rng = corpus::rng(SEED);
        while fronts.len() < RANDOM_FRONTS + 2 {
            let f = corpus::random_front(&mut rng, MAX_CROSSINGS);
            if seen.insert(f.to_string()) {
                fronts.push(f);
            }
        }
        Corpus { fronts }
    }

    fn aforms(&self) -> Vec<(usize, AFormMcs)> {
        self.fronts
            .iter()
            .enumerate()
            .flat_map(|(i, f)| enumerate_aform(f).into_iter().map(move |a| (i, a)))
            .collect()
    }

    /// Random certified walks from every A-form MCS.
    fn walks(&self, aforms: &[(usize, AFormMcs)]) -> Vec<(usize, MoveCertificate)> {
        let mut rng = corpus::rng(SEED ^ 0x5eed);
        let mut out = Vec::new();
        for (fi, af) in aforms {
            for _ in 0..2 {
                for c in corpus::random_walk(&mut rng, af.mcs(), WALK_STEPS, WALK_MARKS) {
                    out.push((*fi, c));
                }
            }
        }
        out
    }
}

fn labels(fd: &FrontDiagram) -> Vec<String> {
    fd.labels()
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    let u = parse_front(UNKNOT).unwrap();
    let du = from_elements(&cedga::differential(&u));
    let du_oracle = sweep_differential(&plain(&u));
    // The disk bounded by the unknot cancels the unit term.
    if du != du_oracle || du != vec![Poly::new()] {
        ok = false;
        notes.push(format!("unknot: library {du:?}, sweep {du_oracle:?}"));
    }

    let t = parse_front(TREFOIL).unwrap();
    let pt = plain(&t);
    let lab = labels(&t);
    let d = from_elements(&cedga::differential(&t));
    let oracle = sweep_differential(&pt);
    if d != oracle {
        ok = false;
        for a in 0..d.len() {
            if d[a] != oracle[a] {
                notes.push(format!(
                    "d {} library {} sweep {}",
                    lab[a],
                    render(&d[a], &lab),
                    render(&oracle[a], &lab)
                ));
            }
        }
    }
    let expected: Vec<Poly> = vec![
        Poly::new(),
        Poly::new(),
        Poly::new(),
        [vec![], vec![0], vec![2], vec![0, 1, 2]].into_iter().collect(),
        [vec![], vec![0], vec![2], vec![2, 1, 0]].into_iter().collect(),
    ];
    if d != expected {
        ok = false;
        notes.push("trefoil differential differs from the frozen table".into());
    }
    for (a, g) in t.generators().iter().enumerate() {
        let good = match g.kind {
            GeneratorKind::Crossing => d[a].is_empty(),
            GeneratorKind::RightCusp => d[a].len() == 4 && d[a].contains(&vec![]),
        };
        if !good {
            ok = false;
            notes.push(format!("shape of d {}", lab[a]));
        }
    }
    if !d_squared(&d).iter().all(|x| x.is_empty()) {
        ok = false;
        notes.push("d^2 != 0".into());
    }
    if !degrees_drop(&d, &pt.degrees) || !maslov_consistent(&t) || !maslov_consistent(&u) {
        ok = false;
        notes.push("degree check".into());
    }
    let detail = if ok {
        format!(
            "unknot d c1 = 0; trefoil d c1 = {}, d c2 = {}; d^2 = 0; degrees drop by 1",
            render(&d[3], &lab),
            render(&d[4], &lab)
        )
    } else {
        notes.join("; ")
    };
    Outcome::check(ok, detail)
}

fn criterion_2() -> Outcome {
    let t = parse_front(TREFOIL).unwrap();
    let pt = plain(&t);
    let brute = brute_augmentations(&pt, &sweep_differential(&pt));
    let lib: BTreeSet<BTreeSet<usize>> = cedga::augmentations(&t, &cedga::differential(&t))
        .iter()
        .map(|a| a.support())
        .collect();
    let expected: BTreeSet<BTreeSet<usize>> = [vec![0], vec![0, 1], vec![2], vec![1, 2], vec![0, 1, 2]]
        .into_iter()
        .map(|v| v.into_iter().collect())
        .collect();
    let ok = brute.len() == 5 && brute == lib && brute == expected;
    Outcome::check(
        ok,
        format!(
            "{} augmentations by brute force over 2^3, library finds {}",
            brute.len(),
            lib.len()
        ),
    )
}

fn criterion_3(c: &Corpus) -> Outcome {
    let mut bad = Vec::new();
    let mut aug_total = 0;
    for fd in &c.fronts {
        let p = plain(fd);
        let disk_side = brute_augmentations(&p, &sweep_differential(&p));
        let lib_augs: BTreeSet<BTreeSet<usize>> = cedga::augmentations(fd, &cedga::differential(fd))
            .iter()
            .map(|a| a.support())
            .collect();
        let mcs_side: BTreeSet<BTreeSet<usize>> = enumerate_aform(fd).iter().map(|a| a.marked().clone()).collect();
        let oracle_mcs = aform_sets(&p);
        aug_total += disk_side.len();
        if disk_side != mcs_side || lib_augs != disk_side || oracle_mcs != mcs_side {
            bad.push(fd.to_string());
        }
    }
    let detail = format!(
        "{} distinct fronts ({} random), {} augmentations; mismatches: {}",
        c.fronts.len(),
        c.fronts.len() - 2,
        aug_total,
        if bad.is_empty() {
            "none".to_owned()
        } else {
            bad.join(" | ")
        }
    );
    Outcome::check(bad.is_empty() && c.fronts.len() >= 102, detail)
}

fn criterion_4(c: &Corpus, aforms: &[(usize, AFormMcs)]) -> Outcome {
    let mut bad = Vec::new();
    let diffs: Vec<Vec<Poly>> = c.fronts.iter().map(|f| sweep_differential(&plain(f))).collect();
    for (fi, af) in aforms {
        let fd = &c.fronts[*fi];
        let eps = eps_of(fd.generators().len(), af.marked());
        let expect = twist(&diffs[*fi], &eps);
        let got = from_elements(&chordpath::differential(af.mcs()));
        if got != expect {
            bad.push(format!("{fd} S={:?}", af.marked()));
        }
    }
    Outcome::check(
        bad.is_empty() && !aforms.is_empty(),
        format!(
            "{} A-form MCSs, d = twisted boundary word for word; mismatches: {}",
            aforms.len(),
            if bad.is_empty() {
                "none".to_owned()
            } else {
                bad.join(" | ")
            }
        ),
    )
}

fn criterion_5(c: &Corpus, aforms: &[(usize, AFormMcs)], walks: &[(usize, MoveCertificate)]) -> Outcome {
    let mut mcss: Vec<(usize, &Mcs)> = aforms.iter().map(|(i, a)| (*i, a.mcs())).collect();
    mcss.extend(walks.iter().map(|(i, w)| (*i, &w.after)));
    let non_aform = mcss.iter().filter(|(_, m)| !m.is_aform()).count();
    let mut bad = Vec::new();
    for (fi, m) in &mcss {
        let d = from_elements(&chordpath::differential(m));
        let degrees = plain(&c.fronts[*fi]).degrees;
        if !d_squared(&d).iter().all(|x| x.is_empty()) || !degrees_drop(&d, &degrees) {
            bad.push(m.to_text().replace('\n', "; "));
        }
    }
    let maslov_ok = c.fronts.iter().all(maslov_consistent);
    Outcome::check(
        bad.is_empty() && maslov_ok && non_aform > 0,
        format!(
            "{} MCSs ({} not in A-form): d^2 = 0 and degree -1; failures: {}",
            mcss.len(),
            non_aform,
            bad.len()
        ),
    )
}

fn category(d: &MoveDescriptor) -> &'static str {
    match d {
        MoveDescriptor::Explosion { .. } | MoveDescriptor::Implosion { .. } => "explosion",
        MoveDescriptor::Algebra(_) => "algebra",
        MoveDescriptor::SlidePastCrossing { .. } | MoveDescriptor::SlidePastCusp(_) => "slide",
    }
}

fn criterion_6(c: &Corpus, walks: &[(usize, MoveCertificate)]) -> Outcome {
    let mut by_cat: BTreeMap<&str, usize> = BTreeMap::new();
    let mut by_family: BTreeMap<u8, usize> = BTreeMap::new();
    let mut bad = Vec::new();
    for (fi, cert) in walks {
        *by_cat.entry(category(&cert.descriptor)).or_default() += 1;
        *by_family.entry(cert.move_number).or_default() += 1;
        let degrees = plain(&c.fronts[*fi]).degrees;
        let before = linear_ranks(&from_elements(&chordpath::differential(&cert.before)), &degrees);
        let after = linear_ranks(&from_elements(&chordpath::differential(&cert.after)), &degrees);
        if before != after || !cert.outer_check {
            bad.push(format!(
                "{} :: {}",
                cert.before.to_text().replace('\n', "; "),
                cert.descriptor
            ));
        }
    }
    let covered = ["explosion", "algebra", "slide"]
        .iter()
        .all(|k| by_cat.get(k).copied().unwrap_or(0) > 0);
    Outcome::check(
        bad.is_empty() && walks.len() >= 200 && covered,
        format!(
            "{} certified moves {:?}, families {:?}; rank changes: {}",
            walks.len(),
            by_cat,
            by_family,
            bad.len()
        ),
    )
}

fn criterion_7(c: &Corpus, aforms: &[(usize, AFormMcs)]) -> Outcome {
    let mut checked = 0usize;
    let mut bad = Vec::new();
    for (fi, af) in aforms {
        let m = af.mcs();
        let Some(oracle) = aform_complexes(&plain(&c.fronts[*fi]), af.marked()) else {
            bad.push(format!("oracle rejects {} S={:?}", c.fronts[*fi], af.marked()));
            continue;
        };
        if oracle.len() != m.slice_count() {
            bad.push(format!("slice count {} vs {}", oracle.len(), m.slice_count()));
            continue;
        }
        for (p, counts) in cedga::gradient_path_counts(m).iter().enumerate() {
            if !m.slice_left_of_right_cusps(p) {
                bad.push(format!("slice {} counted right of a right cusp", p + 1));
            }
            let dp = &oracle[p];
            for i in 0..dp.len() {
                for j in i + 1..dp.len() {
                    checked += 1;
                    let n = counts.get(&(i, j)).copied().unwrap_or(0);
                    if (n % 2 == 1) != dp[i][j] || dp[i][j] != m.complex(p).coeff(i, j) {
                        bad.push(format!(
                            "{} S={:?} x_{} [{},{}]: {} paths",
                            c.fronts[*fi],
                            af.marked(),
                            p + 1,
                            i + 1,
                            j + 1,
                            n
                        ));
                    }
                }
            }
        }
    }
    Outcome::check(
        bad.is_empty() && checked > 0,
        format!("{checked} (slice, i<j) checks; failures: {}", bad.len()),
    )
}

#[derive(Default)]
struct GluingTally {
    intervals: usize,
    literal_fail: Vec<String>,
    signature_ok: bool,
    refined_fail: usize,
    mod2_fail: usize,
    delta_mismatch: usize,
}

fn criterion_8(c: &Corpus, aforms: &[(usize, AFormMcs)]) -> Outcome {
    let mut sum_fail = Vec::new();
    let mut t = GluingTally {
        signature_ok: true,
        ..Default::default()
    };
    for (fi, af) in aforms {
        let fd = &c.fronts[*fi];
        let p = plain(fd);
        let m = af.mcs();
        let n = fd.generators().len();
        let eps = eps_of(n, af.marked());
        let tw = twist(&sweep_differential(&p), &eps);
        let disks = sweep_disks(&p);
        let counts = cedga::gradient_path_counts(m);

        // Delta-sets from the swept disks: (origin, b, interval) -> count, and
        // the sum of pair words per origin.
        let mut delta: BTreeMap<(usize, usize, (usize, usize)), usize> = BTreeMap::new();
        let mut sums = vec![Poly::new(); n];
        for disk in &disks {
            let cs = &disk.corners;
            for bi in 0..cs.len() {
                if !(0..bi).all(|j| eps[cs[j].crossing]) {
                    continue;
                }
                let free: Vec<usize> = (bi + 1..cs.len()).filter(|&j| eps[cs[j].crossing]).collect();
                for mask in 0u32..1 << free.len() {
                    let mut psi: BTreeSet<usize> = (0..bi).collect();
                    psi.extend(
                        free.iter()
                            .enumerate()
                            .filter(|(b, _)| mask >> b & 1 == 1)
                            .map(|(_, &j)| j),
                    );
                    toggle(&mut sums[disk.origin], disk.word_without(&psi));
                    *delta.entry((disk.origin, cs[bi].crossing, cs[bi].left)).or_default() += 1;
                }
            }
        }
        for a in 0..n {
            let lib_sum: Poly =
                cedga::all_disk_pairs(fd, &eps, a)
                    .iter()
                    .map(|pr| pr.word().0)
                    .fold(Poly::new(), |mut acc, w| {
                        toggle(&mut acc, w);
                        acc
                    });
            if sums[a] != tw[a] || lib_sum != tw[a] {
                sum_fail.push(format!("{fd} S={:?} a={}", af.marked(), a + 1));
            }
            for_each_interval(fd, |b, u, l| {
                t.intervals += 1;
                let dl = delta.get(&(a, b, (u, l))).copied().unwrap_or(0);
                if dl != cedga::disk_pairs(fd, &eps, a, b, (u, l)).len() {
                    t.delta_mismatch += 1;
                }
                let s = m.tangle_of_event(fd.generators()[b].event_index) - 1;
                let g = counts[s].get(&(u, l)).copied().unwrap_or(0) as usize;
                let paths = chordpath::paths_terminating(m, a, b, u, l).len();
                let reaching = chordpath::paths_reaching(m, a, b, u, l).len();
                if dl % 2 != (g * paths) % 2 {
                    t.mod2_fail += 1;
                }
                if dl != g * reaching {
                    t.refined_fail += 1;
                }
                if dl != g * paths {
                    if !(paths == 0 && g % 2 == 0) {
                        t.signature_ok = false;
                    }
                    t.literal_fail.push(format!(
                        "{fd} S={:?} a={} b={} [{},{}]: #Delta={dl} #G={g} #M={paths}",
                        af.marked(),
                        a + 1,
                        b + 1,
                        u + 1,
                        l + 1
                    ));
                }
            });
        }
    }
    let ok_other = sum_fail.is_empty() && t.delta_mismatch == 0 && t.mod2_fail == 0;
    let literal = t.literal_fail.is_empty();
    let mut detail = format!(
        "sum of w(D,Psi) = twisted boundary: {}; {} intervals; #Delta = #G*#M literally: {} failures; \
         mod 2: {} failures; #Delta = #G*#M' (M' without the coefficient condition): {} failures",
        if sum_fail.is_empty() {
            "yes".into()
        } else {
            format!("no ({})", sum_fail.join(" | "))
        },
        t.intervals,
        t.literal_fail.len(),
        t.mod2_fail,
        t.refined_fail,
    );
    if !literal {
        detail.push_str(&format!(
            "; first: {}; every failure has #M = 0 with #G even, where the chord-path set M \
             requires <d_p e_i, e_k> = 1",
            t.literal_fail[0]
        ));
    }
    Outcome {
        pass: ok_other && literal,
        expected_failure: ok_other && !literal && t.signature_ok && t.refined_fail == 0,
        detail,
    }
}

fn criterion_9() -> Outcome {
    let t = parse_front(TREFOIL).unwrap();
    let p = plain(&t);
    let d = sweep_differential(&p);
    let mut from_augs: Vec<BTreeMap<i64, usize>> = brute_augmentations(&p, &d)
        .iter()
        .map(|s| linear_homology(&twist(&d, &eps_of(p.degrees.len(), s)), &p.degrees))
        .collect();
    let mut from_mcs: Vec<BTreeMap<i64, usize>> = enumerate_aform(&t)
        .iter()
        .map(|af| linear_homology(&from_elements(&chordpath::differential(af.mcs())), &p.degrees))
        .collect();
    from_augs.sort();
    from_mcs.sort();
    let expected = vec![BTreeMap::from([(0, 2), (1, 1)]); 5];
    Outcome::check(
        from_augs == from_mcs && from_mcs == expected,
        format!("A-form side {from_mcs:?}, augmentation side {from_augs:?}"),
    )
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_legdga"))
        .args(args)
        .output()
        .expect("run legdga");
    let mut v = out.stdout;
    v.extend_from_slice(b"\n-- stderr --\n");
    v.extend(out.stderr);
    v.extend(format!("\n-- status {:?}", out.status.code()).into_bytes());
    v
}

fn criterion_10() -> Outcome {
    let runs: &[&[&str]] = &[
        &["verify", "all", "--random", "25", "--seed", "17"],
        &[
            "move", "--text", TREFOIL, "--aug", "111", "--random", "20", "--seed", "9",
        ],
        &["aform", "--text", TREFOIL, "--format", "json"],
        &["dga", "--text", TREFOIL, "--aug", "110", "--which", "mcs"],
        &["render", "--text", TREFOIL, "--aug", "110", "--overlay", "c1:1"],
    ];
    let mut bad = Vec::new();
    for args in runs {
        if run_cli(args) != run_cli(args) {
            bad.push(args.join(" "));
        }
    }
    let t = parse_front(TREFOIL).unwrap();
    let af = enumerate_aform(&t).into_iter().find(|a| a.marked().len() == 3).unwrap();
    let svg = render_svg(&t, Some(af.mcs()), None);
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/trefoil_111.svg");
    let stable = std::fs::read_to_string(&golden).map(|g| g == svg).unwrap_or(false);
    let cli_svg = Command::new(env!("CARGO_BIN_EXE_legdga"))
        .args(["render", "--text", TREFOIL, "--aug", "111"])
        .output()
        .map(|o| o.stdout == svg.as_bytes())
        .unwrap_or(false);
    if !stable {
        bad.push("SVG differs from tests/golden/trefoil_111.svg".into());
    }
    if !cli_svg {
        bad.push("CLI SVG differs from library SVG".into());
    }
    Outcome::check(
        bad.is_empty(),
        format!(
            "{} commands run twice, SVG compared to the stored copy; differences: {}",
            runs.len(),
            if bad.is_empty() {
                "none".to_owned()
            } else {
                bad.join(" | ")
            }
        ),
    )
}

fn main() {
    let start = Instant::now();
    let c = Corpus::new();
    let aforms = c.aforms();
    let walks = c.walks(&aforms);
    println!(
        "corpus: {} fronts, {} A-form MCSs, {} certified moves (setup {:.2}s)",
        c.fronts.len(),
        aforms.len(),
        walks.len(),
        start.elapsed().as_secs_f64()
    );

    type Crit<'a> = (u8, &'a str, u64, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Crit> = vec![
        (1, "CE sanity", 1, Box::new(criterion_1)),
        (2, "augmentation count", 1, Box::new(criterion_2)),
        (3, "augmentation / A-form bijection", 60, Box::new(|| criterion_3(&c))),
        (
            4,
            "d = twisted boundary on A-form MCSs",
            120,
            Box::new(|| criterion_4(&c, &aforms)),
        ),
        (
            5,
            "d^2 = 0 and degree -1",
            120,
            Box::new(|| criterion_5(&c, &aforms, &walks)),
        ),
        (
            6,
            "move invariance of linearized ranks",
            120,
            Box::new(|| criterion_6(&c, &walks)),
        ),
        (7, "gradient paths", 60, Box::new(|| criterion_7(&c, &aforms))),
        (8, "disk pairs and gluing", 120, Box::new(|| criterion_8(&c, &aforms))),
        (9, "linearized homology on the trefoil", 5, Box::new(criterion_9)),
        (10, "determinism", 60, Box::new(criterion_10)),
    ];

    let mut unexpected = 0;
    for (id, name, limit, f) in criteria {
        let t0 = Instant::now();
        let o = f();
        let elapsed = t0.elapsed();
        let in_time = elapsed < Duration::from_secs(limit);
        let pass = o.pass && in_time;
        let tag = if pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {tag} {name} ({:.2}s, limit {limit}s): {}",
            elapsed.as_secs_f64(),
            o.detail
        );
        if !pass {
            if KNOWN_UNATTAINABLE.contains(&id) && o.expected_failure && in_time {
                println!("criterion {id:>2} failure matches the recorded known-unattainable signature");
            } else {
                unexpected += 1;
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
