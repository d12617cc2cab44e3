//! Qualitative sketch assembly and SVG rendering.
//!
//! The sketch blends the dense sweep with endpoint neighborhoods sampled
//! beyond the requested range, so the exit/entry shapes stay visible even
//! where a raw sweep would compress them. Every annotated element carries
//! a stable `id` naming the report field it came from.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::features::{sweep, FeatureError, SweepSample};
use crate::report::QualitativeReport;
use crate::xfer::TransferFunction;

#[derive(Clone, Debug)]
pub struct SketchOptions {
    pub omega_min: f64,
    pub omega_max: f64,
    pub samples_per_decade: u32,
    pub width: u32,
    pub height: u32,
}

impl Default for SketchOptions {
    fn default() -> Self {
        Self {
            omega_min: 1e-3,
            omega_max: 1e3,
            samples_per_decade: 64,
            width: 860,
            height: 640,
        }
    }
}

/// A marked point with its report key.
#[derive(Clone, Debug)]
pub struct Marker {
    pub id: &'static str,
    pub at: Complex64,
    pub label: String,
}

/// An arrow with its report key.
#[derive(Clone, Debug)]
pub struct Arrow {
    pub id: &'static str,
    pub anchor: Complex64,
    pub direction: Complex64,
}

/// Renderable sketch content in data coordinates.
#[derive(Clone, Debug)]
pub struct SketchDocument {
    pub curve: Vec<SweepSample>,
    /// Low-frequency extension showing the exit neighborhood.
    pub exit_neighborhood: Vec<SweepSample>,
    /// High-frequency extension showing the entry neighborhood.
    pub entry_neighborhood: Vec<SweepSample>,
    pub markers: Vec<Marker>,
    pub arrows: Vec<Arrow>,
    /// Vertical asymptote abscissa, when present.
    pub asymptote: Option<f64>,
    pub crossings: Vec<(f64, f64)>,
    pub captions: Vec<String>,
    pub options: SketchOptions,
}

/// Builds the sketch from an analysis report plus fresh sweeps.
pub fn build_sketch(
    tf: &TransferFunction,
    report: &QualitativeReport,
    options: SketchOptions,
) -> Result<SketchDocument, FeatureError> {
    let curve = sweep(tf, options.omega_min, options.omega_max, options.samples_per_decade)?;
    let exit_neighborhood = sweep(
        tf,
        options.omega_min / 1e3,
        options.omega_min,
        options.samples_per_decade,
    )?;
    let entry_neighborhood = sweep(
        tf,
        options.omega_max,
        options.omega_max * 1e3,
        options.samples_per_decade,
    )?;

    let exit_tag = report
        .behavior
        .exit
        .archetype
        .map(|a| format!(" · exit curve {}", a.index()))
        .unwrap_or_default();
    let entry_tag = report
        .behavior
        .entry
        .archetype
        .map(|a| format!(" · entry curve {}", a.index()))
        .unwrap_or_default();
    let mut markers = Vec::new();
    if let (Some(m), true) = (report.start.modulus_f64, report.start.modulus_kind == "finite") {
        markers.push(Marker {
            id: "endpoint-start",
            at: Complex64::from_polar(m, report.start.phase_radians),
            label: format!("start{exit_tag}"),
        });
    }
    if let (Some(m), true) = (report.end.modulus_f64, report.end.modulus_kind == "finite") {
        markers.push(Marker {
            id: "endpoint-end",
            at: Complex64::from_polar(m, report.end.phase_radians),
            label: format!("end{entry_tag}"),
        });
    }
    if report.start.modulus_kind == "zero" {
        markers.push(Marker {
            id: "endpoint-start",
            at: Complex64::new(0.0, 0.0),
            label: "start (origin)".to_string(),
        });
    }
    if report.end.modulus_kind == "zero" {
        markers.push(Marker {
            id: "endpoint-end",
            at: Complex64::new(0.0, 0.0),
            label: "end (origin)".to_string(),
        });
    }

    let mut arrows = Vec::new();
    let start_anchor = markers
        .iter()
        .find(|m| m.id == "endpoint-start")
        .map(|m| m.at)
        .or_else(|| exit_neighborhood.first().map(|s| s.value));
    if let Some(anchor) = start_anchor {
        arrows.push(Arrow {
            id: "tangent-start",
            anchor,
            direction: Complex64::new(report.tangents.start[0], report.tangents.start[1]),
        });
    }
    let end_anchor = markers
        .iter()
        .find(|m| m.id == "endpoint-end")
        .map(|m| m.at)
        .or_else(|| entry_neighborhood.last().map(|s| s.value));
    if let Some(anchor) = end_anchor {
        arrows.push(Arrow {
            id: "tangent-end",
            anchor,
            direction: Complex64::new(report.tangents.end[0], report.tangents.end[1]),
        });
    }

    let mut captions = vec![report.input_display.clone()];
    let exit = &report.behavior.exit;
    if let Some(a) = exit.archetype {
        captions.push(format!(
            "exit: curve {} ({:?}, {:?}, {:?})",
            a.index(),
            exit.approach_axis,
            exit.phase_sense,
            exit.modulus_trend
        ));
    } else {
        captions.push(format!("exit: {:?}", exit.phase_sense));
    }
    let entry = &report.behavior.entry;
    if let Some(a) = entry.archetype {
        captions.push(format!(
            "entry: curve {} ({:?}, {:?}, {:?})",
            a.index(),
            entry.approach_axis,
            entry.phase_sense,
            entry.modulus_trend
        ));
    } else {
        captions.push(format!("entry: {:?}", entry.phase_sense));
    }
    if let Some(asym) = &report.asymptote {
        captions.push(format!("asymptote at Re = {}", asym.abscissa));
    }
    for (i, c) in report.crossings.list.iter().enumerate() {
        captions.push(format!(
            "crossing {}: ω = {:.4}, Re = {:.4}",
            i, c.omega, c.real_value
        ));
    }

    Ok(SketchDocument {
        curve,
        exit_neighborhood,
        entry_neighborhood,
        markers,
        arrows,
        asymptote: report.asymptote.as_ref().map(|a| a.abscissa_f64),
        crossings: report
            .crossings
            .list
            .iter()
            .map(|c| (c.omega, c.real_value))
            .collect(),
        captions,
        options,
    })
}

struct Frame {
    x0: f64,
    y0: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn map(&self, z: Complex64) -> (f64, f64) {
        (
            (z.re - self.x0) * self.scale,
            self.height - (z.im - self.y0) * self.scale,
        )
    }

    fn contains(&self, z: Complex64) -> bool {
        let (x, y) = self.map(z);
        x >= -self.width && x <= 2.0 * self.width && y >= -self.height && y <= 2.0 * self.height
    }
}

fn robust_bounds(doc: &SketchDocument) -> (f64, f64, f64, f64) {
    // Quantile-clip the sweep so divergent branches do not flatten the
    // frame; always include the marked features.
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for s in doc
        .curve
        .iter()
        .chain(&doc.exit_neighborhood)
        .chain(&doc.entry_neighborhood)
    {
        if s.value.re.is_finite() && s.value.im.is_finite() {
            xs.push(s.value.re);
            ys.push(s.value.im);
        }
    }
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let quantile = |v: &[f64], q: f64| -> f64 {
        if v.is_empty() {
            0.0
        } else {
            v[((v.len() - 1) as f64 * q).round() as usize]
        }
    };
    let mut x_lo = quantile(&xs, 0.02);
    let mut x_hi = quantile(&xs, 0.98);
    let mut y_lo = quantile(&ys, 0.02);
    let mut y_hi = quantile(&ys, 0.98);
    let mut include = |re: f64, im: f64| {
        if re.is_finite() && im.is_finite() {
            x_lo = x_lo.min(re);
            x_hi = x_hi.max(re);
            y_lo = y_lo.min(im);
            y_hi = y_hi.max(im);
        }
    };
    for m in &doc.markers {
        include(m.at.re, m.at.im);
    }
    for (_, re) in &doc.crossings {
        include(*re, 0.0);
    }
    if let Some(a) = doc.asymptote {
        include(a, 0.0);
    }
    include(0.0, 0.0);
    if !(x_lo.is_finite() && x_hi.is_finite() && x_hi > x_lo) {
        (x_lo, x_hi) = (-1.0, 1.0);
    }
    if !(y_lo.is_finite() && y_hi.is_finite() && y_hi > y_lo) {
        (y_lo, y_hi) = (-1.0, 1.0);
    }
    let pad_x = 0.08 * (x_hi - x_lo);
    let pad_y = 0.08 * (y_hi - y_lo);
    (x_lo - pad_x, x_hi + pad_x, y_lo - pad_y, y_hi + pad_y)
}

fn polyline_paths(frame: &Frame, samples: &[SweepSample]) -> Vec<String> {
    // Split the trace where it leaves the (generous) neighborhood of the
    // frame or turns non-finite, so divergent branches render as rays.
    let mut paths = Vec::new();
    let mut current = String::new();
    let mut count = 0usize;
    for s in samples {
        let finite = s.value.re.is_finite() && s.value.im.is_finite();
        if finite && frame.contains(s.value) {
            let (x, y) = frame.map(s.value);
            if current.is_empty() {
                let _ = write!(current, "M {x:.2} {y:.2}");
            } else {
                let _ = write!(current, " L {x:.2} {y:.2}");
            }
            count += 1;
        } else if count > 1 {
            paths.push(std::mem::take(&mut current));
            count = 0;
        } else {
            current.clear();
            count = 0;
        }
    }
    if count > 1 {
        paths.push(current);
    }
    paths
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the sketch as a standalone SVG document.
pub fn render_svg(doc: &SketchDocument) -> String {
    let (x_lo, x_hi, y_lo, y_hi) = robust_bounds(doc);
    let w = doc.options.width as f64;
    let h = doc.options.height as f64;
    let scale = (w / (x_hi - x_lo)).min(h / (y_hi - y_lo));
    let frame = Frame {
        x0: (x_lo + x_hi) / 2.0 - w / (2.0 * scale),
        y0: (y_lo + y_hi) / 2.0 - h / (2.0 * scale),
        scale,
        width: w,
        height: h,
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r##"<defs><marker id="arrowhead" markerWidth="8" markerHeight="6" refX="7" refY="3" orient="auto"><polygon points="0 0, 8 3, 0 6" fill="#c62828"/></marker></defs>"##
    );
    let _ = writeln!(svg, r#"<rect width="{w}" height="{h}" fill="white"/>"#);

    // Axes through the origin when visible.
    let (ox, oy) = frame.map(Complex64::new(0.0, 0.0));
    if (0.0..=w).contains(&ox) {
        let _ = writeln!(
            svg,
            r##"<line id="axis-im" x1="{ox:.2}" y1="0" x2="{ox:.2}" y2="{h}" stroke="#888" stroke-width="1"/>"##
        );
    }
    if (0.0..=h).contains(&oy) {
        let _ = writeln!(
            svg,
            r##"<line id="axis-re" x1="0" y1="{oy:.2}" x2="{w}" y2="{oy:.2}" stroke="#888" stroke-width="1"/>"##
        );
    }

    if let Some(a) = doc.asymptote {
        let (ax, _) = frame.map(Complex64::new(a, 0.0));
        if (0.0..=w).contains(&ax) {
            let _ = writeln!(
                svg,
                r##"<line id="asymptote" x1="{ax:.2}" y1="0" x2="{ax:.2}" y2="{h}" stroke="#2e7d32" stroke-width="1.5" stroke-dasharray="8 6"/>"##
            );
            let _ = writeln!(
                svg,
                r##"<text x="{:.2}" y="16" fill="#2e7d32">asymptote</text>"##,
                ax + 5.0
            );
        }
    }

    for (idx, group, class, color, width_px) in [
        (0usize, &doc.curve, "curve", "#1a237e", 1.8),
        (1, &doc.exit_neighborhood, "exit-neighborhood", "#5c6bc0", 2.6),
        (2, &doc.entry_neighborhood, "entry-neighborhood", "#7e57c2", 2.6),
    ] {
        for (i, path) in polyline_paths(&frame, group).iter().enumerate() {
            let _ = writeln!(
                svg,
                r##"<path id="{class}-{idx}-{i}" class="{class}" d="{path}" fill="none" stroke="{color}" stroke-width="{width_px}"/>"##
            );
        }
    }

    for (i, (omega, re)) in doc.crossings.iter().enumerate() {
        let (x, y) = frame.map(Complex64::new(*re, 0.0));
        if (0.0..=w).contains(&x) {
            let _ = writeln!(
                svg,
                r##"<circle id="crossing-{i}" cx="{x:.2}" cy="{y:.2}" r="4" fill="#ef6c00"/><text x="{:.2}" y="{:.2}" fill="#ef6c00">ω={omega:.3}</text>"##,
                x + 6.0,
                y - 6.0
            );
        }
    }

    for m in &doc.markers {
        let (x, y) = frame.map(m.at);
        let _ = writeln!(
            svg,
            r##"<circle id="{}" cx="{x:.2}" cy="{y:.2}" r="4.5" fill="#c62828"/><text x="{:.2}" y="{:.2}" fill="#c62828">{}</text>"##,
            m.id,
            x + 7.0,
            y + 4.0,
            xml_escape(&m.label)
        );
    }

    let arrow_len = 0.06 * w;
    for a in &doc.arrows {
        let (x, y) = frame.map(a.anchor);
        let dx = a.direction.re * arrow_len;
        let dy = -a.direction.im * arrow_len;
        let _ = writeln!(
            svg,
            r##"<line id="{}" x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{:.2}" stroke="#c62828" stroke-width="1.6" marker-end="url(#arrowhead)"/>"##,
            a.id,
            x + dx,
            y + dy
        );
    }

    for (i, caption) in doc.captions.iter().enumerate() {
        let _ = writeln!(
            svg,
            r##"<text id="caption-{i}" x="12" y="{:.1}" fill="#333">{}</text>"##,
            18.0 + 16.0 * i as f64,
            xml_escape(caption)
        );
    }

    svg.push_str("</svg>\n");
    svg
}

/// Writes the sweep as comma-separated text with a header row.
pub fn samples_csv(samples: &[SweepSample]) -> String {
    let mut out = String::from("omega,re,im,modulus,phase_unwrapped\n");
    for s in samples {
        let _ = writeln!(
            out,
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            s.omega, s.value.re, s.value.im, s.modulus, s.phase_unwrapped
        );
    }
    out
}
