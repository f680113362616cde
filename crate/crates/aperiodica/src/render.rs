//! Deterministic SVG emitters: scatter plots for point sets (1-d sets
//! drawn on a line) and stem plots for spectra. Identical input yields
//! byte-identical output; all coordinates are written with fixed
//! precision.

use crate::construct::PointSet;

#[derive(Debug, Clone)]
pub struct Style {
    pub width: u32,
    pub height: u32,
    pub margin: f64,
    pub point_radius: f64,
    pub color: &'static str,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            width: 640,
            height: 640,
            margin: 40.0,
            point_radius: 2.0,
            color: "#1f4e79",
        }
    }
}

/// Fixed-precision coordinate formatting (byte-deterministic).
fn fmt(x: f64) -> String {
    // normalize negative zero so -0.0000 never appears
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.4}")
}

fn header(style: &Style) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\">\n",
        w = style.width,
        h = style.height
    )
}

fn axes(style: &Style) -> String {
    let (w, h, m) = (style.width as f64, style.height as f64, style.margin);
    format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"#444444\" stroke-width=\"1\"/>\n",
        fmt(m),
        fmt(m),
        fmt(w - 2.0 * m),
        fmt(h - 2.0 * m)
    )
}

/// Map data coordinates into the plot area, preserving aspect ratio.
struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
    cx: f64,
    cy: f64,
}

impl Frame {
    fn new(style: &Style, lo: (f64, f64), hi: (f64, f64)) -> Frame {
        let (w, h, m) = (style.width as f64, style.height as f64, style.margin);
        let spanx = (hi.0 - lo.0).max(1e-9);
        let spany = (hi.1 - lo.1).max(1e-9);
        let scale = ((w - 2.0 * m) / spanx).min((h - 2.0 * m) / spany);
        Frame {
            x0: 0.5 * (lo.0 + hi.0),
            y0: 0.5 * (lo.1 + hi.1),
            scale,
            cx: w / 2.0,
            cy: h / 2.0,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        // SVG y grows downward
        (
            self.cx + (x - self.x0) * self.scale,
            self.cy - (y - self.y0) * self.scale,
        )
    }
}

/// Scatter plot of the physical points; 1-d sets are drawn on the
/// horizontal axis. An empty set yields a valid document with axes only.
pub fn scatter_svg(ps: &PointSet, style: &Style) -> String {
    let pts: Vec<(f64, f64)> = ps
        .points
        .iter()
        .map(|r| {
            let x = r.physical.first().copied().unwrap_or(0.0);
            let y = r.physical.get(1).copied().unwrap_or(0.0);
            (x, y)
        })
        .collect();
    scatter_svg_xy(&pts, style)
}

/// Scatter plot core over explicit (x, y) pairs.
pub fn scatter_svg_xy(pts: &[(f64, f64)], style: &Style) -> String {
    let mut out = header(style);
    out.push_str(&axes(style));
    if !pts.is_empty() {
        let lo = pts.iter().fold((f64::INFINITY, f64::INFINITY), |a, p| {
            (a.0.min(p.0), a.1.min(p.1))
        });
        let hi = pts
            .iter()
            .fold((f64::NEG_INFINITY, f64::NEG_INFINITY), |a, p| {
                (a.0.max(p.0), a.1.max(p.1))
            });
        let frame = Frame::new(style, lo, hi);
        // deterministic draw order: sort by coordinates
        let mut sorted = pts.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, y) in sorted {
            let (sx, sy) = frame.map(x, y);
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n",
                fmt(sx),
                fmt(sy),
                fmt(style.point_radius),
                style.color
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Stem plot of (position, intensity) pairs, e.g. a 1-d spectrum;
/// intensities are drawn upward from the baseline.
pub fn stem_svg(peaks: &[(f64, f64)], style: &Style) -> String {
    let mut out = header(style);
    out.push_str(&axes(style));
    if !peaks.is_empty() {
        let (w, h, m) = (style.width as f64, style.height as f64, style.margin);
        let xmin = peaks.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let xmax = peaks.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let ymax = peaks.iter().map(|p| p.1).fold(0.0f64, f64::max).max(1e-12);
        let spanx = (xmax - xmin).max(1e-9);
        let sx = (w - 2.0 * m) / spanx;
        let sy = (h - 2.0 * m) / ymax;
        let base = h - m;
        let mut sorted = peaks.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (k, inten) in sorted {
            let px = m + (k - xmin) * sx;
            let py = base - inten * sy;
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" \
                 stroke-width=\"1.5\"/>\n",
                fmt(px),
                fmt(base),
                fmt(px),
                fmt(py),
                style.color
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::enumerate_model_set;
    use crate::scheme::make_fibonacci_scheme;
    use crate::window::Window;

    #[test]
    fn empty_set_axes_only() {
        let s = make_fibonacci_scheme();
        // a star-free interval (checked by exhaustive oracle) -> empty set
        let w = Window::Interval {
            a: crate::window::Scalar::Approx(30.25),
            b: crate::window::Scalar::Approx(30.26),
        };
        let ps = enumerate_model_set(&s, &w, 20.0).unwrap();
        assert!(ps.is_empty());
        let svg = scatter_svg(&ps, &Style::default());
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<rect"));
        assert!(!svg.contains("<circle"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn byte_determinism() {
        let s = make_fibonacci_scheme();
        let w = Window::interval_golden((-1, 0), (-1, 1));
        let ps = enumerate_model_set(&s, &w, 30.0).unwrap();
        let a = scatter_svg(&ps, &Style::default());
        let b = scatter_svg(&ps, &Style::default());
        assert_eq!(a, b);
        let peaks = vec![(0.0, 1.0), (0.7236, 0.5), (-0.7236, 0.5)];
        assert_eq!(stem_svg(&peaks, &Style::default()), stem_svg(&peaks, &Style::default()));
    }

    #[test]
    fn stem_tallest_at_max() {
        let peaks = vec![(0.0, 1.0), (1.0, 0.25)];
        let svg = stem_svg(&peaks, &Style::default());
        let style = Style::default();
        // the k = 0 stem reaches the top margin exactly
        assert!(svg.contains(&format!("y2=\"{:.4}\"", style.margin)));
    }
}
