use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::PrimitiveSemitoricPolygon;
use crate::rational::to_f64;
use crate::semitoric::{CornerLabel, SemitoricFan};

const PANEL: f64 = 240.0;
const MARGIN: f64 = 20.0;

/// Objects to draw, one panel each: polygons first, then fans.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Scene {
    #[serde(default)]
    pub polygons: Vec<PrimitiveSemitoricPolygon>,
    #[serde(default)]
    pub fans: Vec<SemitoricFan>,
}

fn f(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn polygon_panel(out: &mut String, p: &PrimitiveSemitoricPolygon, x0: f64) {
    let pts: Vec<(f64, f64)> = p.polygon().vertices().iter().map(|v| (to_f64(&v.x), to_f64(&v.y))).collect();
    let (lx, hx, ly, hy) = pts.iter().fold((f64::MAX, f64::MIN, f64::MAX, f64::MIN), |(a, b, c, d), &(x, y)| {
        (a.min(x), b.max(x), c.min(y), d.max(y))
    });
    let scale = (PANEL - 2.0 * MARGIN) / (hx - lx).max(hy - ly);
    let sx = |x: f64| x0 + MARGIN + (x - lx) * scale;
    let sy = |y: f64| PANEL - MARGIN - (y - ly) * scale;
    let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{},{}", f(sx(x)), f(sy(y)))).collect();
    writeln!(out, r##"  <polygon points="{}" fill="#dde8f4" stroke="#1f3b5c" stroke-width="1.5"/>"##, path.join(" ")).unwrap();
    for m in p.markers() {
        let x = to_f64(&m.lambda);
        writeln!(
            out,
            r##"  <line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#9a3412" stroke-dasharray="4 3"/>"##,
            f(sx(x)),
            f(sy(hy)),
            f(sy(ly))
        )
        .unwrap();
        if let Some((_, top)) = p.polygon().vertical_extent(&m.lambda) {
            writeln!(out, r##"  <circle cx="{}" cy="{}" r="3" fill="#9a3412"/>"##, f(sx(x)), f(sy(to_f64(&top)))).unwrap();
        }
    }
}

fn fan_panel(out: &mut String, fan: &SemitoricFan, x0: f64) {
    let reach = fan.vectors().iter().map(|v| v.x.abs().max(v.y.abs())).max().unwrap_or(1).max(1) as f64;
    let scale = (PANEL / 2.0 - MARGIN) / reach;
    let (cx, cy) = (x0 + PANEL / 2.0, PANEL / 2.0);
    let d = fan.len();
    for (i, v) in fan.vectors().iter().enumerate() {
        let (ex, ey) = (cx + v.x as f64 * scale, cy - v.y as f64 * scale);
        writeln!(
            out,
            r##"  <line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#1f3b5c" stroke-width="1.5"/>"##,
            f(cx),
            f(cy),
            f(ex),
            f(ey)
        )
        .unwrap();
        writeln!(out, r##"  <circle cx="{}" cy="{}" r="2.5" fill="#1f3b5c"/>"##, f(ex), f(ey)).unwrap();
        let w = fan.vectors()[(i + 1) % d];
        let tag = match fan.labels()[i] {
            CornerLabel::Delzant => continue,
            CornerLabel::Fake => "F",
            CornerLabel::Hidden => "H",
        };
        let (mx, my) = (v.x as f64 + w.x as f64, v.y as f64 + w.y as f64);
        let norm = (mx * mx + my * my).sqrt().max(1e-9);
        let (tx, ty) = (cx + mx / norm * scale * 0.6, cy - my / norm * scale * 0.6);
        writeln!(out, r##"  <text x="{}" y="{}" font-size="11" fill="#9a3412">{tag}</text>"##, f(tx), f(ty)).unwrap();
    }
}

/// Deterministic SVG with one panel per object; an empty scene gives an empty canvas.
pub fn render_svg(scene: &Scene) -> String {
    let panels = scene.polygons.len() + scene.fans.len();
    let width = PANEL * panels.max(1) as f64;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}">"#,
        f(width),
        f(PANEL)
    )
    .unwrap();
    for (i, p) in scene.polygons.iter().enumerate() {
        polygon_panel(&mut out, p, PANEL * i as f64);
    }
    for (i, fan) in scene.fans.iter().enumerate() {
        fan_panel(&mut out, fan, PANEL * (scene.polygons.len() + i) as f64);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygeom::polygon_realizing_fan;
    use crate::semitoric::standard_fan;

    #[test]
    fn empty_scene() {
        let s = render_svg(&Scene::default());
        assert!(s.starts_with("<svg"));
        assert!(s.ends_with("</svg>\n"));
        assert_eq!(s.lines().count(), 2);
    }

    #[test]
    fn deterministic() {
        let scene = Scene { polygons: vec![polygon_realizing_fan(&standard_fan(2)).unwrap()], fans: vec![standard_fan(2)] };
        assert_eq!(render_svg(&scene), render_svg(&scene.clone()));
        assert_eq!(render_svg(&scene).matches("<text").count(), 2);
    }
}
