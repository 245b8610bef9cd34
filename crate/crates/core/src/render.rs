//! SVG pictures of surfaces and their cylinder decompositions.

use std::fmt::Write;

use crate::cylinder::{cylinder_regions, Decomposition, DecompositionStatus};
use crate::geom::{Mat2, Vec2};
use crate::surface::TranslationSurface;

const PALETTE: [&str; 8] = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5"];
const SCALE: f64 = 100.0;
const GAP: f64 = 0.5;

fn pt(v: &Vec2) -> (f64, f64) {
    (v.x.to_f64(), v.y.to_f64())
}

/// Renders polygons side by side, one `<polygon>` each. With a decomposition,
/// cylinder pieces are filled by cylinder and core curves are drawn on top.
pub fn render_svg(m: &TranslationSurface, d: Option<&Decomposition>) -> String {
    let mut offsets = Vec::new();
    let (mut x, mut top, mut bottom) = (0.0f64, f64::MIN, f64::MAX);
    for p in 0..m.num_polygons() {
        let pts: Vec<_> = m.vertices(p).iter().map(pt).collect();
        let min_x = pts.iter().map(|p| p.0).fold(f64::MAX, f64::min);
        let max_x = pts.iter().map(|p| p.0).fold(f64::MIN, f64::max);
        offsets.push(x - min_x);
        x += max_x - min_x + GAP;
        for &(_, y) in &pts {
            top = top.max(y);
            bottom = bottom.min(y);
        }
    }
    let width = (x - GAP).max(0.0) + 2.0 * GAP;
    let height = (top - bottom).max(0.0) + 2.0 * GAP;
    let to_svg = |p: usize, (px, py): (f64, f64)| ((px + offsets[p] + GAP) * SCALE, (top - py + GAP) * SCALE);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.2}" height="{:.2}" viewBox="0 0 {:.2} {:.2}">"#,
        width * SCALE,
        height * SCALE,
        width * SCALE,
        height * SCALE
    );
    if let Some(label) = m.label() {
        let _ = writeln!(s, "  <title>{}</title>", xml_escape(label));
    }
    let fills = d.is_some_and(|d| d.status != DecompositionStatus::NoCylinderFound);
    if let (Some(d), true) = (d, fills) {
        let g_inv = d.g.inverse().expect("normalizer is invertible");
        let back = |v: &Vec2| pt(&g_inv.apply(v));
        let _ = writeln!(s, r#"  <g class="cylinders" stroke="none">"#);
        for r in cylinder_regions(d) {
            let path = points(r.verts.iter().map(|v| to_svg(r.poly, back(v))));
            let _ = writeln!(
                s,
                r#"    <path class="cylinder" data-cylinder="{}" fill="{}" d="M {} Z"/>"#,
                r.cylinder,
                PALETTE[r.cylinder % PALETTE.len()],
                path
            );
        }
        let _ = writeln!(s, "  </g>");
    }
    let _ = writeln!(s, r##"  <g class="faces" fill="none" stroke="#222" stroke-width="1.5">"##);
    for p in 0..m.num_polygons() {
        let pts = points(m.vertices(p).iter().map(|v| to_svg(p, pt(v))));
        let _ = writeln!(s, r#"    <polygon data-polygon="{p}" points="{pts}"/>"#);
    }
    let _ = writeln!(s, "  </g>");
    if let (Some(d), true) = (d, fills) {
        let g_inv: Mat2 = d.g.inverse().expect("normalizer is invertible");
        let _ = writeln!(s, r##"  <g class="cores" stroke="#333" stroke-width="1" stroke-dasharray="4 3">"##);
        for c in &d.cylinders {
            for seg in &c.core_path {
                let (x1, y1) = to_svg(seg.poly, pt(&g_inv.apply(&seg.from)));
                let (x2, y2) = to_svg(seg.poly, pt(&g_inv.apply(&seg.to)));
                let _ = writeln!(
                    s,
                    r#"    <line data-cylinder="{}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"/>"#,
                    c.id
                );
            }
        }
        let _ = writeln!(s, "  </g>");
    }
    s.push_str("</svg>\n");
    s
}

fn points(it: impl Iterator<Item = (f64, f64)>) -> String {
    it.map(|(x, y)| format!("{x:.2},{y:.2}")).collect::<Vec<_>>().join(" ")
}

fn xml_escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
