//! Chart rendering in `(t − s, s)` coordinates: stems across, filtration up.

use std::fmt::Write as _;

use crate::specseq::{Page, Value, CONVERGENCE_CAVEAT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Svg,
    Json,
}

pub fn render_chart(p: &Page, format: Format) -> String {
    match format {
        Format::Ascii => ascii(p),
        Format::Svg => svg(p),
        Format::Json => json(p),
    }
}

pub fn json(p: &Page) -> String {
    let mut out = serde_json::to_string_pretty(p).expect("pages serialize");
    out.push('\n');
    out
}

pub fn parse_json(text: &str) -> Result<Page, serde_json::Error> {
    serde_json::from_str(text)
}

/// The glyph at a spot: the value, `·` for zero, `~` appended when the
/// value depends on the window.
pub fn glyph(p: &Page, s: usize, t: i64) -> String {
    match p.entry(s, t) {
        None => "·".to_string(),
        Some(e) => {
            let base = match &e.value {
                v if v.is_zero() => "·".to_string(),
                Value::HomSet { parameters, .. } if !parameters.is_empty() => {
                    v_or_a(&e.value, parameters.len())
                }
                v => v.to_string(),
            };
            if e.window_limited {
                base + "~"
            } else {
                base
            }
        }
    }
}

fn v_or_a(v: &Value, k: usize) -> String {
    match v {
        Value::HomSet {
            constraints: crate::algebra::ConstraintStatus::IdenticallyZero,
            ..
        } => format!("A^{k}"),
        _ => format!("V^{k}"),
    }
}

fn stems(p: &Page) -> (i64, i64) {
    let w = p.window;
    (w.t_min.max(0) - w.s_max as i64, w.t_max)
}

fn header(p: &Page) -> String {
    let w = p.window;
    format!(
        "E_{} page: t in [{}, {}], s <= {}; columns are stems t-s, rows are s\n",
        p.r, w.t_min, w.t_max, w.s_max
    )
}

fn ascii(p: &Page) -> String {
    let mut out = header(p);
    if p.entries().next().is_none() {
        return out;
    }
    let w = p.window;
    let (lo, hi) = stems(p);
    // drop stems with no spot in the window
    let cols: Vec<i64> = (lo..=hi)
        .filter(|n| (0..=w.s_max).any(|s| w.contains(s, n + s as i64)))
        .collect();
    let cell = |s: usize, n: i64| {
        let t = n + s as i64;
        if w.contains(s, t) {
            glyph(p, s, t)
        } else {
            String::new()
        }
    };
    let width = cols
        .iter()
        .flat_map(|&n| (0..=w.s_max).map(move |s| (s, n)))
        .map(|(s, n)| cell(s, n).chars().count())
        .chain(cols.iter().map(|n| n.to_string().len()))
        .max()
        .unwrap_or(1)
        + 1;
    let label_width = format!("s={}", w.s_max).len();
    for s in (0..=w.s_max).rev() {
        let mut line = format!("{:>label_width$} |", format!("s={s}"));
        for &n in &cols {
            let _ = write!(line, "{:>width$}", cell(s, n));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    let mut rule = format!("{:>label_width$} +", "");
    rule.push_str(&"-".repeat(width * cols.len()));
    out.push_str(&rule);
    out.push('\n');
    let mut axis = format!("{:>label_width$}  ", "t-s");
    for n in &cols {
        let _ = write!(axis, "{n:>width$}");
    }
    out.push_str(axis.trim_end());
    out.push('\n');
    for d in &p.differentials {
        let label = d.target_label.as_deref().map(|l| format!(" [{l}]")).unwrap_or_default();
        let _ = writeln!(
            out,
            "d_{}: (s={}, t-s={}) -> (s={}, t-s={}){}  -- {}",
            d.r,
            d.source.0,
            d.source.1 - d.source.0 as i64,
            d.target.0,
            d.target.1 - d.target.0 as i64,
            label,
            d.citation
        );
    }
    for o in &p.obstructions {
        let _ = writeln!(out, "obstruction: {} supports d_{} -- {}", o.class, o.r, o.citation);
    }
    let _ = writeln!(out, "note: {CONVERGENCE_CAVEAT}");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn svg(p: &Page) -> String {
    const CELL: i64 = 60;
    const MARGIN: i64 = 50;
    let w = p.window;
    let (lo, hi) = stems(p);
    let ncols = hi - lo + 1;
    let nrows = w.s_max as i64 + 1;
    let width = 2 * MARGIN + ncols * CELL;
    let height = 2 * MARGIN + nrows * CELL + 20;
    let x = |n: i64| MARGIN + (n - lo) * CELL + CELL / 2;
    let y = |s: usize| MARGIN + 20 + (nrows - 1 - s as i64) * CELL + CELL / 2;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<defs><marker id="head" markerWidth="8" markerHeight="8" refX="7" refY="4" orient="auto"><path d="M0,0 L8,4 L0,8 z"/></marker></defs>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="20">{}</text>"#,
        escape(header(p).trim_end())
    );
    for n in lo..=hi {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" fill="gray">{n}</text>"#,
            x(n),
            height - MARGIN / 2
        );
    }
    for s in 0..=w.s_max {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end" fill="gray">{s}</text>"#,
            MARGIN - 10,
            y(s)
        );
    }
    for (&(s, t), _) in p.entries() {
        let n = t - s as i64;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            x(n),
            y(s),
            escape(&glyph(p, s, t))
        );
    }
    for d in &p.differentials {
        let (x1, y1) = (x(d.source.1 - d.source.0 as i64), y(d.source.0));
        let (x2, y2) = (x(d.target.1 - d.target.0 as i64), y(d.target.0));
        let _ = writeln!(
            out,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" marker-end="url(#head)"/>"#
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="blue">d_{}</text>"#,
            (x1 + x2) / 2 + 4,
            (y1 + y2) / 2,
            d.r
        );
    }
    out.push_str("</svg>\n");
    out
}
