//! Minimal self-contained SVG rendering of drop profiles.
//!
//! Fixed 800x600 canvas, equal scaling on both axes fitted to the bounding
//! box of all curves with a 5% margin, solid substrate line at z = 0. Each
//! profile is drawn mirrored about the symmetry axis.

use std::fmt::Write as _;

use sessile_core::ProfileSamples;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 0.05;
const PAD_LEFT: f64 = 70.0;
const PAD_BOTTOM: f64 = 50.0;
const PAD_TOP: f64 = 40.0;
const PAD_RIGHT: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stroke {
    Solid,
    Dashed,
}

pub struct Curve<'a> {
    pub label: &'a str,
    pub profile: &'a ProfileSamples,
    pub stroke: Stroke,
    pub color: &'a str,
}

struct Frame {
    x0: f64,
    z0: f64,
    scale: f64,
}

impl Frame {
    fn fit(curves: &[Curve]) -> Frame {
        let mut xmax: f64 = 0.0;
        let mut zmax: f64 = 0.0;
        let mut zmin: f64 = 0.0;
        for c in curves {
            for p in &c.profile.points {
                xmax = xmax.max(p.radial);
                zmax = zmax.max(p.height);
                zmin = zmin.min(p.height);
            }
        }
        let width = (2.0 * xmax).max(f64::MIN_POSITIVE);
        let height = (zmax - zmin).max(f64::MIN_POSITIVE);
        let (xlo, xhi) = (-xmax - MARGIN * width, xmax + MARGIN * width);
        let (zlo, zhi) = (zmin - MARGIN * height, zmax + MARGIN * height);
        let plot_w = WIDTH - PAD_LEFT - PAD_RIGHT;
        let plot_h = HEIGHT - PAD_TOP - PAD_BOTTOM;
        let scale = (plot_w / (xhi - xlo)).min(plot_h / (zhi - zlo));
        // centre horizontally, sit on the bottom of the plot area
        let used_w = scale * (xhi - xlo);
        Frame {
            x0: PAD_LEFT + 0.5 * (plot_w - used_w) - scale * xlo,
            z0: HEIGHT - PAD_BOTTOM + scale * zlo,
            scale,
        }
    }

    fn px(&self, x: f64, z: f64) -> (f64, f64) {
        (self.x0 + self.scale * x, self.z0 - self.scale * z)
    }
}

/// Round tick spacing giving roughly `target` intervals over `span`.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn decimals(step: f64) -> usize {
    (-step.log10().floor()).max(0.0) as usize
}

pub fn render(title: &str, curves: &[Curve]) -> String {
    let frame = Frame::fit(curves);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // axes and ticks, in cm
    let (left, right) = (PAD_LEFT, WIDTH - PAD_RIGHT);
    let (top, bottom) = (PAD_TOP, HEIGHT - PAD_BOTTOM);
    let x_at = |px: f64| (px - frame.x0) / frame.scale;
    let z_at = |py: f64| (frame.z0 - py) / frame.scale;
    let _ = writeln!(
        s,
        r##"<g stroke="#444" stroke-width="1" fill="none"><line x1="{left:.1}" y1="{bottom:.1}" x2="{right:.1}" y2="{bottom:.1}"/><line x1="{left:.1}" y1="{top:.1}" x2="{left:.1}" y2="{bottom:.1}"/></g>"##
    );
    let (xlo, xhi) = (x_at(left), x_at(right));
    let step = tick_step(xhi - xlo, 8.0);
    let digits = decimals(step);
    let mut t = (xlo / step).ceil() * step;
    while t <= xhi {
        let (px, _) = frame.px(t, 0.0);
        let _ = writeln!(
            s,
            r##"<line x1="{px:.1}" y1="{bottom:.1}" x2="{px:.1}" y2="{:.1}" stroke="#444"/><text x="{px:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{:.*}</text>"##,
            bottom + 5.0,
            bottom + 18.0,
            digits,
            t + 0.0
        );
        t += step;
    }
    let (zlo, zhi) = (z_at(bottom), z_at(top));
    let step = tick_step(zhi - zlo, 6.0);
    let digits = decimals(step);
    let mut t = (zlo / step).ceil() * step;
    while t <= zhi {
        let (_, py) = frame.px(0.0, t);
        let _ = writeln!(
            s,
            r##"<line x1="{:.1}" y1="{py:.1}" x2="{left:.1}" y2="{py:.1}" stroke="#444"/><text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{:.*}</text>"##,
            left - 5.0,
            left - 8.0,
            py + 4.0,
            digits,
            t + 0.0
        );
        t += step;
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">rho (cm)</text>"#,
        (left + right) / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {:.1})">z (cm)</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0
    );

    // substrate
    let (_, zs) = frame.px(0.0, 0.0);
    let _ = writeln!(
        s,
        r##"<line id="substrate" x1="{left:.1}" y1="{zs:.2}" x2="{right:.1}" y2="{zs:.2}" stroke="black" stroke-width="2"/>"##
    );

    for (i, c) in curves.iter().enumerate() {
        let dash = match c.stroke {
            Stroke::Solid => "",
            Stroke::Dashed => r#" stroke-dasharray="8 5""#,
        };
        let mut pts = String::new();
        let half = &c.profile.points;
        for p in half.iter().rev() {
            let (x, y) = frame.px(-p.radial, p.height);
            let _ = write!(pts, "{x:.2},{y:.2} ");
        }
        for p in half.iter().skip(1) {
            let (x, y) = frame.px(p.radial, p.height);
            let _ = write!(pts, "{x:.2},{y:.2} ");
        }
        let _ = writeln!(
            s,
            r#"<polyline class="{}" fill="none" stroke="{}" stroke-width="2"{dash} points="{}"/>"#,
            escape(c.label),
            c.color,
            pts.trim_end()
        );
        let ly = PAD_TOP + 20.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="2"{dash}/><text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            right - 150.0,
            right - 110.0,
            c.color,
            right - 104.0,
            ly + 4.0,
            escape(c.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
