//! SVG pictures of the strip: cluster dots, rectangles, walks and objects.
//!
//! The view is the square `[-1,3]^2` in lift coordinates at 100 px per
//! unit, so every dyadic coordinate prints as an exact decimal.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::band::{Obj, Rect, Rep};
use crate::cluster::ClusterPt;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::walk::{walk_of, Step};

const SCALE: i64 = 100;
const SIZE: i64 = 400;

/// What to draw. Objects and walks are given as `M(x,y)` strings,
/// rectangles as `[a,b]x(c,d)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderSpec {
    pub objects: Vec<String>,
    pub rects: Vec<String>,
    pub walks: Vec<String>,
    pub cluster_depth: Option<u32>,
}

fn px_x(x: &Dyadic) -> String {
    (x + &Dyadic::int(1)).mul_int(&SCALE.into()).to_decimal()
}

fn px_y(y: &Dyadic) -> String {
    (&Dyadic::int(3) - y).mul_int(&SCALE.into()).to_decimal()
}

fn pt(r: &Rep) -> String {
    format!("{},{}", px_x(&r.0), px_y(&r.1))
}

fn ipt(x: i64, y: i64) -> String {
    pt(&(Dyadic::int(x), Dyadic::int(y)))
}

fn line(out: &mut String, class: &str, a: &Rep, b: &Rep, extra: &str) {
    let _ = writeln!(
        out,
        r#"  <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"{extra}/>"#,
        px_x(&a.0),
        px_y(&a.1),
        px_x(&b.0),
        px_y(&b.1)
    );
}

const STYLE: &str = "    .strip { fill: #f4f4f4; stroke: none; }
    .domain { fill: #e3ecf7; stroke: none; }
    .edge { stroke: #333; stroke-width: 1.5; }
    .axis { stroke: #999; stroke-width: 0.75; }
    .dot { fill: #c0392b; }
    .rect { stroke: #2c7a3f; stroke-width: 1.5; }
    .rect.open { stroke-dasharray: 4 3; }
    .walk { fill: none; stroke: #1f4e9c; stroke-width: 1.5; }
    .arrow { stroke: #1f4e9c; stroke-width: 1.5; }
    .obj { fill: #111; }
    .label { font: 11px sans-serif; fill: #111; }
";

pub fn render(spec: &RenderSpec) -> Result<String> {
    let objects: Vec<Obj> = spec
        .objects
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_>>()?;
    let rects: Vec<Rect> = spec
        .rects
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_>>()?;
    let walks: Vec<Obj> = spec
        .walks
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_>>()?;
    if let Some(k) = spec.cluster_depth {
        let cap = crate::config::max_depth();
        if k > cap {
            return Err(Error::DepthLimit(k, cap));
        }
    }

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, "  <defs>");
    let _ = writeln!(
        s,
        r##"    <marker id="head" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="8" markerHeight="8" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#1f4e9c"/></marker>"##
    );
    let _ = writeln!(s, "  </defs>");
    let _ = writeln!(s, "  <style>\n{STYLE}  </style>");

    // the strip |y - x| < 1 clipped to the view, then one fundamental domain
    let strip = [(-1, -1), (-1, 0), (2, 3), (3, 3), (3, 2), (0, -1)];
    let strip: Vec<String> = strip.iter().map(|&(x, y)| ipt(x, y)).collect();
    let _ = writeln!(
        s,
        r#"  <polygon class="strip" points="{}"/>"#,
        strip.join(" ")
    );
    let domain = [(0, 0), (2, 2), (2, 3), (0, 1)];
    let domain: Vec<String> = domain.iter().map(|&(x, y)| ipt(x, y)).collect();
    let _ = writeln!(
        s,
        r#"  <polygon class="domain" points="{}"/>"#,
        domain.join(" ")
    );
    let i = |x: i64, y: i64| (Dyadic::int(x), Dyadic::int(y));
    line(&mut s, "axis", &i(-1, 0), &i(3, 0), "");
    line(&mut s, "axis", &i(0, -1), &i(0, 3), "");
    line(&mut s, "edge", &i(-1, 0), &i(2, 3), "");
    line(&mut s, "edge", &i(0, -1), &i(3, 2), "");

    if let Some(k) = spec.cluster_depth {
        let mut dots: Vec<Rep> = ClusterPt::all_to_depth(k)
            .iter()
            .map(|p| p.object().rep())
            .collect();
        dots.sort();
        dots.dedup();
        for d in &dots {
            let _ = writeln!(
                s,
                r#"  <circle class="dot" cx="{}" cy="{}" r="2.5"/>"#,
                px_x(&d.0),
                px_y(&d.1)
            );
        }
    }

    for r in &rects {
        let [l, rt, b, t] = r.open;
        let bl = (r.x_lo.clone(), r.y_lo.clone());
        let br = (r.x_hi.clone(), r.y_lo.clone());
        let tl = (r.x_lo.clone(), r.y_hi.clone());
        let tr = (r.x_hi.clone(), r.y_hi.clone());
        let class = |open: bool| if open { "rect open" } else { "rect" };
        line(&mut s, class(l), &bl, &tl, "");
        line(&mut s, class(rt), &br, &tr, "");
        line(&mut s, class(b), &bl, &br, "");
        line(&mut s, class(t), &tl, &tr, "");
    }

    for x in &walks {
        let w = walk_of(x)?;
        let reps = w.reps();
        let poly: Vec<String> = reps.iter().map(pt).collect();
        let _ = writeln!(
            s,
            r#"  <polyline class="walk" points="{}"/>"#,
            poly.join(" ")
        );
        // arrowheads sit at the midpoint of each step, pointing along the arrow
        for (k, step) in w.steps().iter().enumerate() {
            let (from, to) = match step {
                Step::Vertical => (&reps[k], &reps[k + 1]),
                Step::Horizontal => (&reps[k + 1], &reps[k]),
            };
            let mid = ((&from.0 + &to.0).half(), (&from.1 + &to.1).half());
            line(&mut s, "arrow", from, &mid, r#" marker-end="url(#head)""#);
        }
    }

    for o in &objects {
        let r = o.rep();
        let _ = writeln!(
            s,
            r#"  <circle class="obj" cx="{}" cy="{}" r="3.5"/>"#,
            px_x(&r.0),
            px_y(&r.1)
        );
        let _ = writeln!(
            s,
            r#"  <text class="label" x="{}" y="{}">{o}</text>"#,
            px_x(&r.0),
            px_y(&r.1)
        );
    }

    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(s: &str, pat: &str) -> usize {
        s.matches(pat).count()
    }

    #[test]
    fn empty_spec_is_strip_and_axes() {
        let s = render(&RenderSpec::default()).unwrap();
        assert_eq!(count(&s, "<polygon"), 2);
        assert_eq!(count(&s, "<line"), 4);
        assert_eq!(count(&s, "<circle"), 0);
        assert_eq!(count(&s, "<polyline"), 0);
    }

    #[test]
    fn walk_polyline_has_five_vertices() {
        let spec = RenderSpec {
            walks: vec!["M(1/4,3/4)".into()],
            cluster_depth: Some(3),
            ..Default::default()
        };
        let s = render(&spec).unwrap();
        let poly = s.lines().find(|l| l.contains("<polyline")).unwrap();
        let pts = poly
            .split("points=\"")
            .nth(1)
            .unwrap()
            .split('"')
            .next()
            .unwrap();
        assert_eq!(pts.split(' ').count(), 5);
        assert_eq!(count(&s, "marker-end"), 4);
        assert_eq!(render(&spec).unwrap(), s);
    }

    #[test]
    fn dots_are_iso_classes() {
        for (k, n) in [(0, 1), (1, 5), (4, 61)] {
            let spec = RenderSpec {
                cluster_depth: Some(k),
                ..Default::default()
            };
            let s = render(&spec).unwrap();
            assert_eq!(count(&s, r#"class="dot""#), n, "depth {k}");
        }
    }

    #[test]
    fn open_edges_are_dashed() {
        let spec = RenderSpec {
            rects: vec!["[0,1/2)x(1/4,1]".into()],
            ..Default::default()
        };
        let s = render(&spec).unwrap();
        assert_eq!(count(&s, r#"class="rect open""#), 2);
        assert_eq!(count(&s, r#"class="rect""#), 2);
    }

    #[test]
    fn coordinates_are_exact() {
        let spec = RenderSpec {
            objects: vec!["M(1/1024,1/8)".into()],
            ..Default::default()
        };
        let s = render(&spec).unwrap();
        assert!(s.contains(r#"cx="100.09765625""#), "{s}");
    }
}
