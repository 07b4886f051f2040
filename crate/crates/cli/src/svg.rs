//! Minimal hand-rolled SVG plots: lower/upper norm-bound curves against the
//! truncation dimension, one pair of polylines per exponent.

use crate::report::{Cell, Report};
use std::collections::BTreeMap;
use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Builds the plot, or `None` when the report has no norm cells.
pub fn norm_curves_svg(report: &Report) -> Option<String> {
    // Group (p -> sorted [(n, lower, upper)]) with a BTreeMap keyed by the
    // exponent's bit pattern for deterministic iteration.
    let mut series: BTreeMap<u64, Vec<(usize, f64, f64)>> = BTreeMap::new();
    for cell in &report.cells {
        if let Cell::Norm {
            p, n, lower, upper, ..
        } = cell
        {
            series.entry(p.to_bits()).or_default().push((*n, *lower, *upper));
        }
    }
    if series.is_empty() {
        return None;
    }
    for pts in series.values_mut() {
        pts.sort_by_key(|&(n, _, _)| n);
    }

    let n_min = series
        .values()
        .flat_map(|v| v.iter().map(|&(n, _, _)| n))
        .min()? as f64;
    let n_max = series
        .values()
        .flat_map(|v| v.iter().map(|&(n, _, _)| n))
        .max()? as f64;
    let y_max = series
        .values()
        .flat_map(|v| v.iter().flat_map(|&(_, lo, up)| [lo, up]))
        .filter(|y| y.is_finite())
        .fold(0.0f64, f64::max)
        .max(1e-12);

    let x = |n: f64| {
        if n_max > n_min {
            MARGIN + (n.log2() - n_min.log2()) / (n_max.log2() - n_min.log2()) * (WIDTH - 2.0 * MARGIN)
        } else {
            WIDTH / 2.0
        }
    };
    let y = |v: f64| HEIGHT - MARGIN - (v / (y_max * 1.05)) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    );
    let _ = write!(
        out,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    );
    // Axes.
    let _ = write!(
        out,
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN,
        t = MARGIN
    );
    let _ = write!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"13\">truncation dimension N (log2 scale)</text>\n",
        WIDTH / 2.0 - 110.0,
        HEIGHT - 18.0
    );
    let _ = write!(
        out,
        "<text x=\"14\" y=\"{}\" font-size=\"13\" transform=\"rotate(-90 14 {})\">norm bound</text>\n",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    for (idx, (p_bits, pts)) in series.iter().enumerate() {
        let p = f64::from_bits(*p_bits);
        let color = PALETTE[idx % PALETTE.len()];
        for (field, dash) in [(1usize, ""), (2usize, " stroke-dasharray=\"6 4\"")] {
            let mut path = String::new();
            for &(n, lo, up) in pts {
                let v = if field == 1 { lo } else { up };
                if !v.is_finite() {
                    continue;
                }
                let _ = write!(path, "{:.2},{:.2} ", x(n as f64), y(v));
            }
            if !path.is_empty() {
                let _ = write!(
                    out,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\"{dash}/>\n",
                    path.trim_end()
                );
            }
        }
        let ly = MARGIN + 18.0 * idx as f64;
        let _ = write!(
            out,
            "<text x=\"{}\" y=\"{ly}\" font-size=\"12\" fill=\"{color}\">p = {p} (solid: lower, dashed: upper)</text>\n",
            WIDTH - MARGIN - 240.0
        );
        // Tick labels along x for this series' dimensions.
        if idx == 0 {
            for &(n, _, _) in pts {
                let _ = write!(
                    out,
                    "<text x=\"{:.2}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{n}</text>\n",
                    x(n as f64),
                    HEIGHT - MARGIN + 16.0
                );
            }
        }
    }
    let _ = write!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"11\">y max = {:.6}</text>\n",
        MARGIN,
        MARGIN - 8.0,
        y_max
    );
    out.push_str("</svg>\n");
    Some(out)
}
