//! Deterministic SVG drawings of fronts, marks and chord paths.

use std::fmt::Write as _;

use crate::chordpath::ChordPath;
use crate::diagram::{EventKind, FrontDiagram};
use crate::mcs::{Mcs, Tangle};

const MARGIN: i64 = 30;
const COL: i64 = 40;
const ROW: i64 = 30;

fn y(p: usize) -> i64 {
    MARGIN + p as i64 * ROW
}

fn x(t: usize) -> i64 {
    MARGIN + t as i64 * COL
}

fn line(out: &mut String, (x1, y1): (i64, i64), (x2, y2): (i64, i64), class: &str) {
    let _ = writeln!(
        out,
        r#"  <line class="{class}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#
    );
}

fn dot(out: &mut String, (cx, cy): (i64, i64), class: &str) {
    let _ = writeln!(out, r#"  <circle class="{class}" cx="{cx}" cy="{cy}" r="3"/>"#);
}

enum Column {
    Event(usize),
    Mark(usize, usize),
}

/// Render the front, with the marks of `mcs` and an optional chord path.
/// Without an MCS each column holds one event.
pub fn render_svg(front: &FrontDiagram, mcs: Option<&Mcs>, overlay: Option<&ChordPath>) -> String {
    let columns: Vec<Column> = match mcs {
        Some(m) => m
            .tangles()
            .iter()
            .map(|&t| match t {
                Tangle::Event(e) => Column::Event(e),
                Tangle::Mark(i) => {
                    let mk = m.marks()[i];
                    Column::Mark(mk.upper, mk.lower)
                }
            })
            .collect(),
        None => (0..front.events().len()).map(Column::Event).collect(),
    };
    let max_strands = front.strand_counts().iter().copied().max().unwrap_or(0);
    let width = 2 * MARGIN + columns.len() as i64 * COL;
    let height = 2 * MARGIN + (max_strands.max(1) as i64 - 1) * ROW;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    out.push_str(concat!(
        "  <style>line{stroke-width:2}.strand{stroke:black}.mark{stroke:red}",
        ".chord{stroke:blue}circle.mark{fill:red}circle.corner{fill:blue}",
        "text{font:10px sans-serif}</style>\n"
    ));
    let mut strands = 0;
    for (t, col) in columns.iter().enumerate() {
        let (x0, x1) = (x(t), x(t + 1));
        let xm = (x0 + x1) / 2;
        match *col {
            Column::Mark(u, l) => {
                for p in 0..strands {
                    line(&mut out, (x0, y(p)), (x1, y(p)), "strand");
                }
                line(&mut out, (xm, y(u)), (xm, y(l)), "mark");
                dot(&mut out, (xm, y(u)), "mark");
                dot(&mut out, (xm, y(l)), "mark");
            }
            Column::Event(e) => {
                let ev = front.events()[e];
                let k = ev.k;
                let mid = y(k) + ROW / 2;
                match ev.kind {
                    EventKind::Crossing => {
                        for p in (0..strands).filter(|&p| p != k && p != k + 1) {
                            line(&mut out, (x0, y(p)), (x1, y(p)), "strand");
                        }
                        line(&mut out, (x0, y(k)), (x1, y(k + 1)), "strand");
                        line(&mut out, (x0, y(k + 1)), (x1, y(k)), "strand");
                    }
                    EventKind::LeftCusp => {
                        for p in 0..strands {
                            let q = if p < k { p } else { p + 2 };
                            line(&mut out, (x0, y(p)), (x1, y(q)), "strand");
                        }
                        line(&mut out, (xm, mid), (x1, y(k)), "strand");
                        line(&mut out, (xm, mid), (x1, y(k + 1)), "strand");
                        strands += 2;
                    }
                    EventKind::RightCusp => {
                        for p in (0..strands).filter(|&p| p != k && p != k + 1) {
                            let q = if p < k { p } else { p - 2 };
                            line(&mut out, (x0, y(p)), (x1, y(q)), "strand");
                        }
                        line(&mut out, (x0, y(k)), (xm, mid), "strand");
                        line(&mut out, (x0, y(k + 1)), (xm, mid), "strand");
                        strands -= 2;
                    }
                }
                if let Some(g) = front.generator_at_event(e) {
                    let _ = writeln!(
                        out,
                        r#"  <text x="{}" y="{}">{}</text>"#,
                        xm - 6,
                        mid - ROW / 2 - 6,
                        g.label
                    );
                }
            }
        }
    }
    if let (Some(path), Some(m)) = (overlay, mcs) {
        for c in &path.chords {
            let xc = x(c.slice + 1);
            line(&mut out, (xc, y(c.upper)), (xc, y(c.lower)), "chord");
        }
        for corner in &path.corners {
            let e = m.front().generators()[corner.crossing].event_index;
            let t = m.tangle_of_event(e);
            let k = front.events()[e].k;
            dot(&mut out, ((x(t) + x(t + 1)) / 2, y(k) + ROW / 2), "corner");
        }
    }
    out.push_str("</svg>\n");
    out
}
