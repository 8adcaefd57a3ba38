//! Static SVG 1.1 rendering of dendrograms and planar scatterplots.
//!
//! Output is a pure function of the inputs, so identical inputs give
//! byte-identical documents.

use std::fmt::Write;

use crate::dendro::MergeTable;

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 540.0;
const MARGIN: f64 = 48.0;
const GRAY: &str = "#9a9a9a";
const PALETTE: [&str; 10] =
    ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"];

pub fn cluster_color(cluster: usize) -> &'static str {
    PALETTE[cluster % PALETTE.len()]
}

fn header(out: &mut String) {
    let _ = write!(
        out,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
}

/// Draws each merge as a ∩-shaped link at its height, leaves along the bottom.
///
/// With `highlight`, a dashed horizontal line marks the threshold. With
/// `coloring` (cluster id per leaf), every link whose leaves all share one
/// cluster takes that cluster's color; the rest are gray.
pub fn render_dendrogram_svg(z: &MergeTable, highlight: Option<f64>, coloring: Option<&[usize]>) -> String {
    let n = z.n_leaves();
    let order = z.leaf_order();
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let pitch = plot_w / n as f64;
    let h_max = z.rows().iter().map(|m| m.height).chain(highlight).fold(0.0f64, f64::max);
    let scale = if h_max > 0.0 { plot_h / h_max } else { 0.0 };
    let y_of = |h: f64| HEIGHT - MARGIN - h * scale;

    // x position, height, and uniform cluster (if any) per node id
    let mut x = vec![0.0; 2 * n - 1];
    let mut height = vec![0.0; 2 * n - 1];
    let mut uniform: Vec<Option<usize>> = vec![None; 2 * n - 1];
    for (pos, &leaf) in order.iter().enumerate() {
        x[leaf] = MARGIN + (pos as f64 + 0.5) * pitch;
        uniform[leaf] = coloring.map(|c| c[leaf]);
    }

    let mut out = String::new();
    header(&mut out);
    axis(&mut out, h_max, &y_of);
    out.push_str("<g fill=\"none\" stroke-width=\"1\">\n");
    for (k, m) in z.rows().iter().enumerate() {
        let id = n + k;
        x[id] = (x[m.left] + x[m.right]) / 2.0;
        height[id] = m.height;
        uniform[id] = match (uniform[m.left], uniform[m.right]) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        };
        let color = uniform[id].map_or(GRAY, cluster_color);
        let _ = writeln!(
            out,
            "<path class=\"link\" d=\"M{:.3} {:.3}V{:.3}H{:.3}V{:.3}\" stroke=\"{color}\"/>",
            x[m.left],
            y_of(height[m.left]),
            y_of(m.height),
            x[m.right],
            y_of(height[m.right]),
        );
    }
    out.push_str("</g>\n");
    if n <= 64 {
        out.push_str("<g font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">\n");
        for &leaf in &order {
            let _ = writeln!(
                out,
                "<text class=\"leaf\" x=\"{:.3}\" y=\"{:.3}\">{leaf}</text>",
                x[leaf],
                HEIGHT - MARGIN + 14.0
            );
        }
        out.push_str("</g>\n");
    }
    if let Some(tau) = highlight {
        let _ = writeln!(
            out,
            "<line class=\"threshold\" x1=\"{MARGIN}\" x2=\"{:.3}\" y1=\"{y:.3}\" y2=\"{y:.3}\" stroke=\"#d62728\" stroke-dasharray=\"6 4\"/>",
            WIDTH - MARGIN,
            y = y_of(tau)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn axis(out: &mut String, h_max: f64, y_of: &dyn Fn(f64) -> f64) {
    let _ = writeln!(
        out,
        "<g stroke=\"black\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">\n<line x1=\"{MARGIN}\" x2=\"{MARGIN}\" y1=\"{MARGIN}\" y2=\"{:.3}\"/>",
        HEIGHT - MARGIN
    );
    if h_max > 0.0 {
        for t in 0..=4 {
            let h = h_max * t as f64 / 4.0;
            let y = y_of(h);
            let _ = writeln!(
                out,
                "<line x1=\"{:.3}\" x2=\"{MARGIN}\" y1=\"{y:.3}\" y2=\"{y:.3}\"/><text stroke=\"none\" x=\"{:.3}\" y=\"{:.3}\">{}</text>",
                MARGIN - 4.0,
                MARGIN - 6.0,
                y + 3.0,
                format_tick(h)
            );
        }
    }
    out.push_str("</g>\n");
}

fn format_tick(v: f64) -> String {
    if v == 0.0 || (1e-3..1e5).contains(&v.abs()) {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

/// Planar scatterplot, one circle per point, colored by cluster when given.
pub fn render_scatter_svg(coords: &[[f64; 2]], coloring: Option<&[usize]>) -> String {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in coords {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let span = |a: usize| if hi[a] > lo[a] { hi[a] - lo[a] } else { 1.0 };
    let s = ((WIDTH - 2.0 * MARGIN) / span(0)).min((HEIGHT - 2.0 * MARGIN) / span(1));
    let mut out = String::new();
    header(&mut out);
    out.push_str("<g stroke=\"none\">\n");
    for (i, p) in coords.iter().enumerate() {
        let color = coloring.map_or(GRAY, |c| cluster_color(c[i]));
        let _ = writeln!(
            out,
            "<circle class=\"point\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"2\" fill=\"{color}\"/>",
            MARGIN + (p[0] - lo[0]) * s,
            HEIGHT - MARGIN - (p[1] - lo[1]) * s
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

/// Places complete documents from this module side by side under optional captions.
pub fn compose_row(panels: &[(&str, String)]) -> String {
    let caption = 24.0;
    let total_w = WIDTH * panels.len() as f64;
    let total_h = HEIGHT + caption;
    let mut out = String::new();
    let _ = write!(
        out,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{total_w}\" height=\"{total_h}\" viewBox=\"0 0 {total_w} {total_h}\">\n"
    );
    for (i, (title, doc)) in panels.iter().enumerate() {
        let x = WIDTH * i as f64;
        let _ = writeln!(
            out,
            "<text x=\"{:.3}\" y=\"17\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
            x + WIDTH / 2.0,
            escape(title)
        );
        let body = doc.trim_start_matches(|c| c != '\n').trim_start();
        let _ = writeln!(out, "{}", body.replacen("<svg ", &format!("<svg x=\"{x}\" y=\"{caption}\" "), 1));
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
