//! Minimal SVG emitters for importance bars, biplots and confusion heat maps.
//!
//! Every plotted element carries its source value in a `data-*` attribute so
//! tests can compare charts structurally.

use std::fmt::Write;

use crate::cluster::{BiplotCoords, ClusterResult};
use crate::eval::ConfusionMatrix;
use crate::importance::ImportanceTable;
use crate::scalar::Scalar;
use crate::table_io::fmt_sig;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

fn color(idx: usize) -> &'static str {
    PALETTE[idx % PALETTE.len()]
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn num(x: f64) -> String {
    format!("{x:.2}")
}

fn header(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        num(w),
        num(h),
        num(w),
        num(h)
    )
}

/// One facet per response level, one bar per explanatory level.
pub fn importance_bars<T: Scalar>(t: &ImportanceTable<T>) -> String {
    let (j, i) = t.values.dim();
    let facet_w = 40.0 + 28.0 * i as f64;
    let facet_h = 180.0;
    let cols = j.clamp(1, 4);
    let rows = j.div_ceil(cols).max(1);
    let (w, h) = (cols as f64 * facet_w + 20.0, rows as f64 * (facet_h + 30.0) + 20.0);
    let max_abs = t
        .values
        .iter()
        .fold(0.0f64, |m, v| m.max(v.as_f64().abs()))
        .max(f64::MIN_POSITIVE);
    let mut s = header(w, h);
    for (r, resp) in t.row_labels.iter().enumerate() {
        let ox = 10.0 + (r % cols) as f64 * facet_w;
        let oy = 10.0 + (r / cols) as f64 * (facet_h + 30.0);
        let zero_y = oy + 20.0 + (facet_h - 40.0) / 2.0;
        let half = (facet_h - 40.0) / 2.0;
        let _ = writeln!(
            s,
            "<g class=\"facet\" data-response=\"{}\">\n<text x=\"{}\" y=\"{}\" font-weight=\"bold\">{}</text>\n<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
            esc(resp),
            num(ox + 4.0),
            num(oy + 12.0),
            esc(resp),
            num(ox),
            num(zero_y),
            num(ox + facet_w - 10.0),
            num(zero_y)
        );
        for (c, expl) in t.col_labels.iter().enumerate() {
            let v = t.values[[r, c]].as_f64();
            let bar_h = v.abs() / max_abs * half;
            let x = ox + 20.0 + c as f64 * 28.0;
            let y = if v >= 0.0 { zero_y - bar_h } else { zero_y };
            let _ = writeln!(
                s,
                "<rect class=\"bar\" x=\"{}\" y=\"{}\" width=\"20\" height=\"{}\" fill=\"{}\" data-explanatory=\"{}\" data-value=\"{}\"/>\n<text x=\"{}\" y=\"{}\" font-size=\"9\" text-anchor=\"middle\">{}</text>",
                num(x),
                num(y),
                num(bar_h),
                if v >= 0.0 { "#4477aa" } else { "#cc6677" },
                esc(expl),
                fmt_sig(v, 6),
                num(x + 10.0),
                num(oy + facet_h + 5.0),
                esc(expl)
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

/// Response levels as circles, explanatory levels as inverted triangles;
/// both colored by cluster.
pub fn biplot<T: Scalar>(b: &BiplotCoords<T>, clusters: &ClusterResult<T>) -> String {
    let (w, h, pad) = (520.0, 520.0, 50.0);
    // Explanatory markers are unit-scale; stretch them to the row-point range.
    let row_ext = b.row_points.iter().fold(0.0f64, |m, v| m.max(v.as_f64().abs()));
    let col_ext = b.col_points.iter().fold(0.0f64, |m, v| m.max(v.as_f64().abs()));
    let col_scale = if col_ext > 0.0 && row_ext > 0.0 { row_ext / col_ext } else { 1.0 };
    let ext = row_ext.max(col_ext * col_scale).max(f64::MIN_POSITIVE) * 1.1;
    let px = |x: f64| pad + (x + ext) / (2.0 * ext) * (w - 2.0 * pad);
    let py = |y: f64| h - pad - (y + ext) / (2.0 * ext) * (h - 2.0 * pad);
    let mut s = header(w, h);
    let _ = writeln!(
        s,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999\"/>\n<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999\"/>",
        num(pad), num(py(0.0)), num(w - pad), num(py(0.0)),
        num(px(0.0)), num(pad), num(px(0.0)), num(h - pad)
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\">Dim 1 ({}%)</text>\n<text x=\"10\" y=\"{}\">Dim 2 ({}%)</text>",
        num(w / 2.0 - 30.0),
        num(h - 15.0),
        fmt_sig(b.explained[0].as_f64() * 100.0, 3),
        num(pad - 20.0),
        fmt_sig(b.explained[1].as_f64() * 100.0, 3)
    );
    for (idx, label) in b.row_labels.iter().enumerate() {
        let (x, y) = (b.row_points[[idx, 0]].as_f64(), b.row_points[[idx, 1]].as_f64());
        let k = clusters.assignments[idx];
        let _ = writeln!(
            s,
            "<circle class=\"response\" cx=\"{}\" cy=\"{}\" r=\"5\" fill=\"{}\" data-level=\"{}\" data-cluster=\"{}\" data-x=\"{}\" data-y=\"{}\"/>\n<text x=\"{}\" y=\"{}\">{}</text>",
            num(px(x)), num(py(y)), color(k), esc(label), k + 1, fmt_sig(x, 6), fmt_sig(y, 6),
            num(px(x) + 7.0), num(py(y) + 4.0), esc(label)
        );
    }
    for (idx, label) in b.col_labels.iter().enumerate() {
        let (x, y) = (b.col_points[[idx, 0]].as_f64(), b.col_points[[idx, 1]].as_f64());
        let (cx, cy) = (px(x * col_scale), py(y * col_scale));
        let k = clusters.attribution[idx];
        let _ = writeln!(
            s,
            "<polygon class=\"explanatory\" points=\"{},{} {},{} {},{}\" fill=\"{}\" data-level=\"{}\" data-cluster=\"{}\" data-x=\"{}\" data-y=\"{}\"/>\n<text x=\"{}\" y=\"{}\" font-style=\"italic\">{}</text>",
            num(cx - 6.0), num(cy - 5.0), num(cx + 6.0), num(cy - 5.0), num(cx), num(cy + 6.0),
            color(k), esc(label), k + 1, fmt_sig(x, 6), fmt_sig(y, 6),
            num(cx + 8.0), num(cy + 4.0), esc(label)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn confusion_heatmap(cm: &ConfusionMatrix) -> String {
    let j = cm.n_classes();
    let cell = 40.0;
    let pad = 70.0;
    let (w, h) = (pad + cell * j as f64 + 20.0, pad + cell * j as f64 + 20.0);
    let max = cm.counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let mut s = header(w, h);
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"15\">predicted</text>\n<text x=\"5\" y=\"{}\">actual</text>",
        num(pad),
        num(pad - 25.0)
    );
    for (c, label) in cm.labels.iter().enumerate() {
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            num(pad + cell * (c as f64 + 0.5)),
            num(pad - 8.0),
            esc(label),
            num(pad - 8.0),
            num(pad + cell * (c as f64 + 0.5) + 4.0),
            esc(label)
        );
    }
    for ((a, p), &n) in cm.counts.indexed_iter() {
        let shade = 255.0 - (n as f64 / max) * 200.0;
        let shade = shade.round() as u8;
        let (x, y) = (pad + cell * p as f64, pad + cell * a as f64);
        let _ = writeln!(
            s,
            "<rect class=\"cell\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"rgb({shade},{shade},255)\" stroke=\"white\" data-actual=\"{}\" data-predicted=\"{}\" data-count=\"{n}\"/>\n<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{n}</text>",
            num(x), num(y), num(cell), num(cell),
            esc(&cm.labels[a]), esc(&cm.labels[p]),
            num(x + cell / 2.0), num(y + cell / 2.0 + 4.0)
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{biplot as biplot_coords, kmeans};
    use crate::eval::confusion;
    use ndarray::array;

    fn table() -> ImportanceTable<f64> {
        ImportanceTable {
            values: array![[1.0, -0.5, 0.25], [0.0, 2.0, -1.0], [0.5, 0.5, 3.0]],
            row_labels: vec!["y1".into(), "y2".into(), "y<3>".into()],
            col_labels: vec!["a".into(), "b".into(), "c".into()],
        }
    }

    #[test]
    fn one_bar_per_cell() {
        let svg = importance_bars(&table());
        assert_eq!(svg.matches("class=\"bar\"").count(), 9);
        assert_eq!(svg.matches("class=\"facet\"").count(), 3);
        assert!(svg.contains("data-value=\"-0.5\""));
        assert!(svg.contains("y&lt;3&gt;"));
    }

    #[test]
    fn biplot_marks_every_level() {
        let t = table();
        let clusters = kmeans(&t, 2, 1, 50).unwrap();
        let svg = biplot(&biplot_coords(&t).unwrap(), &clusters);
        assert_eq!(svg.matches("class=\"response\"").count(), 3);
        assert_eq!(svg.matches("class=\"explanatory\"").count(), 3);
    }

    #[test]
    fn heatmap_cells() {
        let labels: Vec<String> = vec!["1".into(), "2".into()];
        let cm = confusion(&[0, 0, 1], &[0, 1, 1], &labels).unwrap();
        let svg = confusion_heatmap(&cm);
        assert_eq!(svg.matches("class=\"cell\"").count(), 4);
        assert!(svg.contains("data-actual=\"1\" data-predicted=\"2\" data-count=\"1\""));
    }
}
