//! The `legdga` command-line interface.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cedga::{self, Augmentation};
use crate::chordpath::{self, DgaElement};
use crate::corpus;
use crate::diagram::{front_from_statements, statements, DiagramError, FrontDiagram, Statement};
use crate::mcs::{aform_from_set, enumerate_aform, marks_from_statements, Mcs, McsError};
use crate::moves::{self, parse_move};
use crate::render::render_svg;
use crate::verify::{run_suite, Suite};

#[derive(Debug, Parser)]
#[command(
    name = "legdga",
    version,
    about = "Legendrian front DGAs and Morse complex sequences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Mcs,
    Ce,
    CeTwisted,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Input file, or `-` for stdin.
    pub input: Option<String>,
    /// Inline input text instead of a file.
    #[arg(long, conflicts_with = "input")]
    pub text: Option<String>,
    /// Augmentation bits in crossing order; selects the A-form MCS with those marks.
    #[arg(long)]
    pub aug: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a front and, if present, its marks.
    Validate(Common),
    /// Print a differential table.
    Dga {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "ce")]
        which: Which,
    },
    /// List augmentations of the CE DGA.
    Augs(Common),
    /// List A-form MCSs.
    Aform(Common),
    /// Linearized homology dimensions.
    Homology {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "ce")]
        which: Which,
    },
    /// Run property checks.
    Verify {
        /// d2, degree, aform-eq, aug-bijection, moves, gradient-lemma, disk-pairs or all.
        suite: Suite,
        #[command(flatten)]
        common: Common,
        /// Add this many random fronts to the checked set.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_crossings: usize,
    },
    /// Apply the `move ...` statements of the input, or random moves.
    Move {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Draw the front as SVG.
    Render {
        #[command(flatten)]
        common: Common,
        /// Overlay chord path `<generator>:<n>`, e.g. `c1:2`.
        #[arg(long)]
        overlay: Option<String>,
    },
}

/// A parsed input: the front, the MCS from explicit marks (if any), and move
/// statements. Well-formed marks that fail the MCS conditions are kept as an
/// error so `validate` can report them.
struct Input {
    front: FrontDiagram,
    marked: Option<std::result::Result<Mcs, McsError>>,
    moves: Vec<Statement>,
}

fn read_input(c: &Common, required: bool) -> Result<Option<String>> {
    if let Some(t) = &c.text {
        return Ok(Some(t.clone()));
    }
    match c.input.as_deref() {
        Some("-") => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(Some(s))
        }
        Some(p) => Ok(Some(fs::read_to_string(p).with_context(|| format!("reading {p}"))?)),
        None if required => bail!("no input given (pass a file, `-`, or --text)"),
        None => Ok(None),
    }
}

fn parse_input(text: &str) -> Result<Input> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(trimmed)?;
        if v.get("marks").is_some() || v.get("cusp_data").is_some() {
            bail!("JSON input with marks is not supported; use the text format");
        }
        let front = crate::diagram::parse_front(trimmed)?;
        return Ok(Input {
            front,
            marked: None,
            moves: Vec::new(),
        });
    }
    let sts = statements(text);
    let mut body = Vec::new();
    let mut move_sts = Vec::new();
    for st in sts {
        match st.tokens[0].as_str() {
            "l" | "x" | "r" | "h" | "ic" => body.push(st),
            "move" => move_sts.push(st),
            other => return Err(st.error(format!("unknown statement `{other}`")).into()),
        }
    }
    let front = front_from_statements(&body)?;
    let has_marks = body.iter().any(|s| s.tokens[0] == "h" || s.tokens[0] == "ic");
    let marked = if has_marks {
        let (marks, cusp) = marks_from_statements(&front, &body)?;
        Some(Mcs::propagate(&front, marks, cusp))
    } else {
        None
    };
    Ok(Input {
        front,
        marked,
        moves: move_sts,
    })
}

fn augmentation(front: &FrontDiagram, bits: &str) -> Result<Augmentation> {
    Ok(Augmentation::from_bits(front, bits)?)
}

/// The MCS named by the input: explicit marks, `--aug`, or the unmarked front.
fn select_mcs(input: &Input, aug: Option<&str>) -> Result<Mcs> {
    match (&input.marked, aug) {
        (Some(_), Some(_)) => bail!("--aug cannot be combined with explicit marks"),
        (Some(m), None) => Ok(m.clone()?),
        (None, Some(bits)) => {
            let a = augmentation(&input.front, bits)?;
            Ok(aform_from_set(&input.front, &a.support())?.into_mcs())
        }
        (None, None) => Ok(Mcs::simple(&input.front, Vec::new())?),
    }
}

fn table(front: &FrontDiagram, d: &[DgaElement], symbol: &str) -> (String, serde_json::Value) {
    let labels = front.labels();
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by_key(|&i| (front.generators()[i].degree, i));
    let mut text = String::new();
    let mut rows = Vec::new();
    for i in order {
        let g = &front.generators()[i];
        let r = d[i].render(&labels);
        text.push_str(&format!("{symbol}{} = {r}\n", g.label));
        rows.push(json!({"generator": g.label, "degree": g.degree, "differential": r}));
    }
    (text, json!(rows))
}

fn emit(c: &Common, text: String, js: serde_json::Value, out: &mut dyn Write) -> Result<()> {
    let body = match c.format {
        Format::Json => serde_json::to_string_pretty(&js)? + "\n",
        Format::Text => text,
        Format::Svg => bail!("--format svg is only supported by `render`"),
    };
    write_body(c, &body, out)
}

fn write_body(c: &Common, body: &str, out: &mut dyn Write) -> Result<()> {
    match &c.out {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

/// 1-based inclusive tangle range; an empty range is an insertion point.
fn window(r: &std::ops::Range<usize>) -> String {
    if r.is_empty() {
        format!("(none, before {})", r.start + 1)
    } else {
        format!("{}-{}", r.start + 1, r.end)
    }
}

fn homology_json(h: &std::collections::BTreeMap<i64, usize>) -> serde_json::Value {
    json!(h
        .iter()
        .map(|(d, n)| json!({"degree": d, "dim": n}))
        .collect::<Vec<_>>())
}

fn homology_text(h: &std::collections::BTreeMap<i64, usize>) -> String {
    let parts: Vec<String> = h
        .iter()
        .filter(|(_, &n)| n > 0)
        .map(|(d, n)| format!("H_{d} = {n}"))
        .collect();
    if parts.is_empty() {
        "0".to_owned()
    } else {
        parts.join(", ")
    }
}

/// Run a parsed command, writing results to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Validate(c) => {
            let input = match parse_input(&read_input(&c, true)?.unwrap_or_default()) {
                Ok(i) => i,
                Err(e) => match e.downcast_ref::<DiagramError>() {
                    Some(d) if !matches!(d, DiagramError::Syntax { .. }) => {
                        let text = format!("invalid: {d}");
                        eprintln!("{text}");
                        emit(
                            &c,
                            format!("{text}\n"),
                            json!({"valid": false, "message": text, "generators": []}),
                            out,
                        )?;
                        return Ok(1);
                    }
                    _ => return Err(e),
                },
            };
            let res = match (&input.marked, c.aug.as_deref()) {
                (None, None) => Ok(None),
                _ => select_mcs(&input, c.aug.as_deref()).map(Some),
            };
            let (ok, text) = match &res {
                Ok(None) => (true, "valid front".to_owned()),
                Ok(Some(m)) if m.is_aform() => (true, "valid A-form MCS".to_owned()),
                Ok(Some(_)) => (true, "valid MCS".to_owned()),
                Err(e) => (false, format!("invalid: {e}")),
            };
            if !ok {
                eprintln!("{text}");
            }
            let g = &input.front;
            emit(
                &c,
                format!("{text}\n"),
                json!({
                    "valid": ok,
                    "message": text,
                    "generators": g.generators().iter().map(|x| json!({"label": x.label, "degree": x.degree})).collect::<Vec<_>>(),
                }),
                out,
            )?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Dga { common: c, which } => {
            let input = parse_input(&read_input(&c, true)?.unwrap_or_default())?;
            let f = &input.front;
            let (d, sym) = match which {
                Which::Ce => (cedga::differential(f), "∂ "),
                Which::CeTwisted => {
                    let bits = c
                        .aug
                        .as_deref()
                        .ok_or_else(|| anyhow!("`--which ce-twisted` needs --aug"))?;
                    let a = augmentation(f, bits)?;
                    (cedga::twist(f, &cedga::differential(f), a.values())?, "∂^ε ")
                }
                Which::Mcs => (chordpath::differential(&select_mcs(&input, c.aug.as_deref())?), "d "),
            };
            let (text, js) = table(f, &d, sym);
            emit(&c, text, js, out)?;
            Ok(0)
        }
        Command::Augs(c) => {
            let input = parse_input(&read_input(&c, true)?.unwrap_or_default())?;
            let f = &input.front;
            let augs = cedga::augmentations(f, &cedga::differential(f));
            let labels = f.labels();
            let mut text = String::new();
            let mut rows = Vec::new();
            for a in &augs {
                let support: Vec<&str> = a.support().iter().map(|&g| labels[g].as_str()).collect();
                text.push_str(&format!("{} {{{}}}\n", a.bits(f), support.join(",")));
                rows.push(json!({"bits": a.bits(f), "support": support}));
            }
            text.push_str(&format!("{} augmentations\n", augs.len()));
            emit(&c, text, json!(rows), out)?;
            Ok(0)
        }
        Command::Aform(c) => {
            let input = parse_input(&read_input(&c, true)?.unwrap_or_default())?;
            let f = &input.front;
            let labels = f.labels();
            let all = enumerate_aform(f);
            let mut text = String::new();
            let mut rows = Vec::new();
            for af in &all {
                let set: Vec<&str> = af.marked().iter().map(|&g| labels[g].as_str()).collect();
                let bits = Augmentation::from_support(f, af.marked()).bits(f);
                text.push_str(&format!("S = {{{}}} ({bits})\n", set.join(",")));
                for line in af.mcs().to_text().lines().skip(f.events().len()) {
                    text.push_str(&format!("  {line}\n"));
                }
                rows.push(json!({"marked": set, "bits": bits, "mcs": af.mcs().to_json()}));
            }
            text.push_str(&format!("{} A-form MCSs\n", all.len()));
            emit(&c, text, json!(rows), out)?;
            Ok(0)
        }
        Command::Homology { common: c, which } => {
            let input = parse_input(&read_input(&c, true)?.unwrap_or_default())?;
            let f = &input.front;
            let d = cedga::differential(f);
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut one = |name: String, cx: crate::z2linalg::ChainComplexZ2| -> Result<()> {
                let h = cx.homology_dims()?;
                text.push_str(&format!("{name}: {}\n", homology_text(&h)));
                rows.push(json!({"name": name, "homology": homology_json(&h)}));
                Ok(())
            };
            match (which, c.aug.as_deref()) {
                (Which::Mcs, aug) => {
                    let m = select_mcs(&input, aug)?;
                    one("mcs".into(), chordpath::linearized(&m))?;
                }
                (_, Some(bits)) => {
                    let a = augmentation(f, bits)?;
                    let tw = cedga::twist(f, &d, a.values())?;
                    one(bits.to_owned(), cedga::linearized(f, &tw))?;
                }
                (_, None) => {
                    for a in cedga::augmentations(f, &d) {
                        let tw = cedga::twist(f, &d, a.values())?;
                        one(a.bits(f), cedga::linearized(f, &tw))?;
                    }
                }
            }
            emit(&c, text, json!(rows), out)?;
            Ok(0)
        }
        Command::Verify {
            suite,
            common: c,
            random,
            seed,
            max_crossings,
        } => {
            let mut fronts = match read_input(&c, false)? {
                Some(t) => vec![parse_input(&t)?.front],
                None if random.is_none() => vec![corpus::unknot(), corpus::trefoil()],
                None => Vec::new(),
            };
            if let Some(n) = random {
                fronts.extend(corpus::random_fronts(n, seed, max_crossings));
            }
            let reports = run_suite(suite, &fronts, seed);
            let mut text = String::new();
            for r in &reports {
                let status = if r.passed() { "pass" } else { "FAIL" };
                text.push_str(&format!("{}: {status} ({} cases)\n", r.suite, r.cases));
                for f in &r.failures {
                    text.push_str(&format!("  counterexample: {f}\n"));
                }
            }
            let ok = reports.iter().all(|r| r.passed());
            emit(&c, text, json!({"passed": ok, "reports": reports}), out)?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Move {
            common: c,
            random,
            seed,
        } => {
            let input = parse_input(&read_input(&c, true)?.unwrap_or_default())?;
            let mut m = select_mcs(&input, c.aug.as_deref())?;
            let mut log = String::new();
            let mut steps = Vec::new();
            let mut record = |cert: &moves::MoveCertificate, log: &mut String| {
                let iso = moves::check_linearized_iso(&cert.before, &cert.after).unwrap_or(false);
                log.push_str(&format!(
                    "# {}: ok, family {}, tangles {} -> {}, linearized ranks preserved: {iso}\n",
                    cert.descriptor,
                    cert.move_number,
                    window(&cert.window_before),
                    window(&cert.window_after),
                ));
                steps.push(json!({
                    "move": cert.descriptor.to_string(),
                    "family": cert.move_number,
                    "linearized_iso": iso,
                }));
            };
            for st in &input.moves {
                let d = parse_move(st)?;
                let cert = moves::apply(&m, &d).map_err(|e| anyhow!("{}: {e}", d))?;
                if let Some(k) = moves::asserted_kind(st) {
                    if k != cert.move_number && matches!(k, 7..=12) {
                        bail!("{d}: pattern is family {}, not {k}", cert.move_number);
                    }
                }
                record(&cert, &mut log);
                m = cert.after;
            }
            if let Some(n) = random {
                let mut rng = corpus::rng(seed);
                for cert in corpus::random_walk(&mut rng, &m, n, 10) {
                    record(&cert, &mut log);
                    m = cert.after;
                }
            }
            let text = format!("{log}{}", m.to_text());
            emit(&c, text, json!({"steps": steps, "mcs": m.to_json()}), out)?;
            Ok(0)
        }
        Command::Render { common: c, overlay } => {
            let input = parse_input(&read_input(&c, true)?.unwrap_or_default())?;
            let mcs = match (&input.marked, c.aug.as_deref()) {
                (None, None) => None,
                _ => Some(select_mcs(&input, c.aug.as_deref())?),
            };
            let path = match &overlay {
                None => None,
                Some(spec) => {
                    let m = mcs.as_ref().ok_or_else(|| anyhow!("--overlay needs marks or --aug"))?;
                    let (label, n) = spec
                        .split_once(':')
                        .ok_or_else(|| anyhow!("--overlay expects <generator>:<n>"))?;
                    let g = input
                        .front
                        .labels()
                        .iter()
                        .position(|l| l == label)
                        .ok_or_else(|| anyhow!("unknown generator `{label}`"))?;
                    let n: usize = n.parse().context("overlay path number")?;
                    let paths = chordpath::enumerate_paths(m, g);
                    let p = n
                        .checked_sub(1)
                        .and_then(|i| paths.get(i).cloned())
                        .ok_or_else(|| anyhow!("{label} has {} chord paths", paths.len()))?;
                    Some(p)
                }
            };
            if c.format == Format::Json {
                bail!("render produces SVG only");
            }
            let svg = render_svg(&input.front, mcs.as_ref(), path.as_ref());
            write_body(&c, &svg, out)?;
            Ok(0)
        }
    }
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
