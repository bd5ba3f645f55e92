//! Standalone SVG scatter of LCOE against F_Δh.

use std::fmt::Write;

use hpmr_core::metrics::FrontPoint;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterPoint {
    pub lcoe: f64,
    pub f_dh: f64,
    pub feasible: bool,
    /// Member of the reported non-dominated front.
    pub front: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scatter {
    pub title: String,
    pub points: Vec<ScatterPoint>,
    /// Horizontal F_Δh limit line.
    pub limit: Option<f64>,
}

impl Scatter {
    /// Archive points plus the merged front drawn on top.
    pub fn from_points<'a>(
        title: impl Into<String>,
        archive: impl IntoIterator<Item = &'a FrontPoint>,
        front: &[FrontPoint],
        limit: Option<f64>,
    ) -> Self {
        let mut points: Vec<ScatterPoint> = archive
            .into_iter()
            .map(|p| ScatterPoint {
                lcoe: p.objectives[0],
                f_dh: p.objectives[1],
                feasible: p.feasible,
                front: false,
            })
            .collect();
        points.extend(front.iter().map(|p| ScatterPoint {
            lcoe: p.objectives[0],
            f_dh: p.objectives[1],
            feasible: p.feasible,
            front: true,
        }));
        Scatter {
            title: title.into(),
            points,
            limit,
        }
    }

    /// Indices of the feasible minimum-LCOE and minimum-F_Δh points.
    pub fn extremes(&self) -> Option<(usize, usize)> {
        let feasible = || {
            self.points
                .iter()
                .enumerate()
                .filter(|(_, p)| p.feasible && p.lcoe.is_finite() && p.f_dh.is_finite())
        };
        let by = |k: fn(&ScatterPoint) -> (f64, f64)| {
            feasible()
                .min_by(|a, b| k(a.1).partial_cmp(&k(b.1)).expect("finite"))
                .map(|(i, _)| i)
        };
        Some((by(|p| (p.lcoe, p.f_dh))?, by(|p| (p.f_dh, p.lcoe))?))
    }
}

const W: f64 = 720.0;
const H: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 * lo.abs().max(1e-3) };
    (lo - pad, hi + pad)
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(raw);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(t);
        t += step;
    }
    out
}

fn label(v: f64) -> String {
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the plot. Feasible points are filled dots (front members larger
/// and darker), infeasible ones grey crosses, the feasible minimum-LCOE and
/// minimum-F_Δh points are circled in blue, and the limit is a dashed red
/// line. Non-finite points are listed in the data comments but not drawn.
pub fn render_scatter(s: &Scatter) -> String {
    let (x0, x1) = range(s.points.iter().map(|p| p.lcoe));
    let (y0, y1) = range(s.points.iter().map(|p| p.f_dh).chain(s.limit));
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);
    let mut o = String::new();
    let _ = writeln!(
        o,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(o, "<!-- data: lcoe,f_dh,feasible,front -->");
    for p in &s.points {
        let _ = writeln!(o, "<!-- {},{},{},{} -->", p.lcoe, p.f_dh, p.feasible, p.front);
    }
    let _ = writeln!(o, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        o,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(&s.title)
    );
    let _ = writeln!(
        o,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    );
    for t in ticks(x0, x1) {
        let x = px(t);
        let _ = writeln!(
            o,
            r#"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{b2}" stroke="black"/><text x="{x:.2}" y="{ty}" text-anchor="middle">{}</text>"#,
            label(t),
            b = H - BOTTOM,
            b2 = H - BOTTOM + 5.0,
            ty = H - BOTTOM + 18.0
        );
    }
    for t in ticks(y0, y1) {
        let y = py(t);
        let _ = writeln!(
            o,
            r#"<line x1="{l2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{tx}" y="{ty:.2}" text-anchor="end">{}</text>"#,
            label(t),
            l2 = LEFT - 5.0,
            tx = LEFT - 8.0,
            ty = y + 4.0
        );
    }
    let _ = writeln!(
        o,
        r#"<text x="{}" y="{}" text-anchor="middle">LCOE ($/MWh)</text>"#,
        LEFT + (W - LEFT - RIGHT) / 2.0,
        H - 15.0
    );
    let _ = writeln!(
        o,
        r#"<text x="20" y="{y}" text-anchor="middle" transform="rotate(-90 20 {y})">F<tspan baseline-shift="sub" font-size="9">Δh</tspan></text>"#,
        y = TOP + (H - TOP - BOTTOM) / 2.0
    );
    if let Some(limit) = s.limit {
        let y = py(limit);
        let _ = writeln!(
            o,
            r#"<line class="limit" x1="{LEFT}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="red" stroke-dasharray="6 4"/><text x="{}" y="{:.2}" text-anchor="end" fill="red">F_Δh limit {}</text>"#,
            W - RIGHT,
            W - RIGHT - 4.0,
            y - 4.0,
            label(limit)
        );
    }
    let drawable = |p: &ScatterPoint| p.lcoe.is_finite() && p.f_dh.is_finite();
    for p in s.points.iter().filter(|p| !p.feasible && drawable(p)) {
        let (x, y) = (px(p.lcoe), py(p.f_dh));
        let _ = writeln!(
            o,
            r#"<path class="infeasible" d="M{:.2} {:.2}l6 6m0 -6l-6 6" stroke="grey"/>"#,
            x - 3.0,
            y - 3.0
        );
    }
    for p in s.points.iter().filter(|p| p.feasible && drawable(p)) {
        let (r, fill) = if p.front { (3.5, "black") } else { (2.5, "darkgrey") };
        let _ = writeln!(
            o,
            r#"<circle class="feasible" cx="{:.2}" cy="{:.2}" r="{r}" fill="{fill}"/>"#,
            px(p.lcoe),
            py(p.f_dh)
        );
    }
    if let Some((a, b)) = s.extremes() {
        for (i, name) in [(a, "min-lcoe"), (b, "min-f_dh")] {
            let p = &s.points[i];
            let _ = writeln!(
                o,
                r#"<circle class="{name}" cx="{:.2}" cy="{:.2}" r="9" fill="none" stroke="blue" stroke-width="2"/>"#,
                px(p.lcoe),
                py(p.f_dh)
            );
        }
    }
    o.push_str("</svg>\n");
    o
}
