//! Minimal SVG charts of the objective plane: scatter series and mean ± σ crosses.
//!
//! Axes are fixed to [0, 1]² with the first objective (damage dealt) horizontal.

use std::fmt::Write;

use crate::nsga2::ObjectiveVector;
use crate::pareto::ObjectiveStats;

const WIDTH: f64 = 560.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 56.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Mark {
    Points(Vec<ObjectiveVector>),
    /// A cross centred on the mean whose arms span one standard deviation in total.
    Cross(ObjectiveStats),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub mark: Mark,
}

impl Series {
    pub fn points(label: impl Into<String>, points: Vec<ObjectiveVector>) -> Self {
        Self { label: label.into(), mark: Mark::Points(points) }
    }

    pub fn cross(label: impl Into<String>, stats: ObjectiveStats) -> Self {
        Self { label: label.into(), mark: Mark::Cross(stats) }
    }
}

fn sx(v: f64) -> f64 {
    MARGIN_L + v.clamp(0.0, 1.0) * (WIDTH - MARGIN_L - MARGIN_R)
}

fn sy(v: f64) -> f64 {
    HEIGHT - MARGIN_B - v.clamp(0.0, 1.0) * (HEIGHT - MARGIN_T - MARGIN_B)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(title: &str, series: &[Series]) -> String {
    let mut s = String::new();
    // Writing to a String cannot fail.
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, sx(0.5), escape(title));

    for i in 0..=10 {
        let v = i as f64 / 10.0;
        let _ = writeln!(
            s,
            r##"<line x1="{x}" y1="{y0}" x2="{x}" y2="{y1}" stroke="#eee"/><line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="#eee"/>"##,
            x = sx(v),
            y = sy(v),
            x0 = sx(0.0),
            x1 = sx(1.0),
            y0 = sy(0.0),
            y1 = sy(1.0)
        );
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{v:.1}</text>"#, sx(v), sy(0.0) + 16.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{v:.1}</text>"#, sx(0.0) - 6.0, sy(v) + 4.0);
    }
    let _ = writeln!(
        s,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        sx(0.0),
        sy(1.0),
        sx(1.0) - sx(0.0),
        sy(0.0) - sy(1.0)
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">damage dealt</text>"#, sx(0.5), HEIGHT - 16.0);
    let _ = writeln!(
        s,
        r#"<text transform="translate(18 {}) rotate(-90)" text-anchor="middle">1 - damage taken</text>"#,
        sy(0.5)
    );

    for (k, series) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        match &series.mark {
            Mark::Points(points) => {
                for p in points {
                    let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}" fill-opacity="0.75"/>"#, sx(p.o1), sy(p.o2));
                }
            }
            Mark::Cross(st) => {
                let (m, h1, h2) = (st.mean, st.std.o1 / 2.0, st.std.o2 / 2.0);
                let _ = writeln!(
                    s,
                    r#"<g stroke="{color}" stroke-width="2"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"#,
                    sx(m.o1 - h1),
                    sy(m.o2),
                    sx(m.o1 + h1),
                    sy(m.o2),
                    sx(m.o1),
                    sy(m.o2 - h2),
                    sx(m.o1),
                    sy(m.o2 + h2)
                );
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, sx(m.o1), sy(m.o2));
            }
        }
        let ly = MARGIN_T + 10.0 + 18.0 * k as f64;
        let lx = WIDTH - MARGIN_R + 14.0;
        let _ = writeln!(s, r#"<circle cx="{lx}" cy="{ly}" r="4" fill="{color}"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 10.0, ly + 4.0, escape(&series.label));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axes_map_objectives() {
        // o1 grows to the right, o2 grows upwards.
        assert!(sx(1.0) > sx(0.0));
        assert!(sy(1.0) < sy(0.0));
        assert_eq!(sx(2.0), sx(1.0));
    }

    #[test]
    fn renders_every_point_and_legend() {
        let svg = render(
            "a < b",
            &[
                Series::points("front", vec![ObjectiveVector::new(0.1, 0.9), ObjectiveVector::new(0.5, 0.5)]),
                Series::cross("random", ObjectiveStats::default()),
            ],
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 2 + 1 + 2);
        assert!(svg.contains("a &lt; b"));
        assert!(svg.contains(">random</text>"));
    }
}
