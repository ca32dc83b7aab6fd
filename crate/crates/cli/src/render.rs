//! SVG pictures of a sample: site votes, the largest classes, the
//! interface and the diagonal.

use std::fmt::Write as _;

use voterlab_core::classes::{class_sites, top_k};
use voterlab_core::geometry::embed_coords;
use voterlab_core::interface::trace_interface;
use voterlab_core::{PlanarPoint, SampleOutcome, Site};

/// Boxes up to this side are drawn cell by cell as hexagons.
pub const HEXAGON_LIMIT: usize = 64;

const VOTE_FILL: [&str; 2] = ["#dfe7f2", "#f4dcc9"];
const CLASS_FILL: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
    "#bcbd22", "#7f7f7f",
];
const BOUNDARY_FILL: [&str; 2] = ["#7d93b5", "#c98d62"];

struct Canvas {
    scale: f64,
    height: f64,
    x0: f64,
}

impl Canvas {
    fn point(&self, p: PlanarPoint) -> (f64, f64) {
        (
            (p.x - self.x0) * self.scale,
            self.height - (p.y + 0.6) * self.scale,
        )
    }

    fn poly(&self, out: &mut String, pts: &[PlanarPoint], fill: &str) {
        out.push_str("<polygon points=\"");
        for p in pts {
            let (x, y) = self.point(*p);
            let _ = write!(out, "{x:.2},{y:.2} ");
        }
        let _ = writeln!(out, "\" fill=\"{fill}\"/>");
    }
}

/// Renders `outcome` with the `k` largest classes of two or more sites
/// highlighted.
pub fn render_svg(outcome: &SampleOutcome, k: usize) -> anyhow::Result<String> {
    let g = *outcome.geometry();
    let side = g.side();
    let cfg = outcome.configuration();
    let path = trace_interface(cfg)?;

    let mut fill: Vec<&str> = g
        .sites()
        .map(|s| match g.boundary_vote(s) {
            Some(v) => BOUNDARY_FILL[v as usize],
            None => VOTE_FILL[cfg.vote(s) as usize],
        })
        .collect();
    // Singletons carry no class structure worth highlighting.
    let top: Vec<_> = top_k(outcome, k)
        .into_iter()
        .filter(|(_, n)| *n > 1)
        .collect();
    for (rank, (class, _)) in top.iter().enumerate() {
        for s in class_sites(outcome, *class)? {
            fill[g.index(s)] = CLASS_FILL[rank % CLASS_FILL.len()];
        }
    }

    let n = side as f64;
    let scale = (1600.0 / (1.5 * n)).clamp(1.0, 24.0);
    let width = (1.5 * n + 1.0) * scale;
    let height = ((n - 1.0) * 3f64.sqrt() / 2.0 + 1.2) * scale;
    let canvas = Canvas {
        scale,
        height,
        x0: -0.6,
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.2} {height:.2}\">"
    );
    let _ = writeln!(
        out,
        "<title>{} sample, L={}, seed {}, top {} classes</title>",
        outcome.params().corner_name().unwrap_or("(p,q)"),
        side,
        outcome.seed(),
        top.len()
    );
    out.push_str("<g stroke=\"none\">\n");
    if side <= HEXAGON_LIMIT {
        // Voronoi cell of a site: hexagon through the centroids of its six triangles.
        let r = 1.0 / 3f64.sqrt();
        for s in g.sites() {
            let c = s.embed();
            let pts: Vec<PlanarPoint> = (0..6)
                .map(|k| {
                    let a = std::f64::consts::PI / 6.0 + k as f64 * std::f64::consts::PI / 3.0;
                    PlanarPoint {
                        x: c.x + r * a.cos(),
                        y: c.y + r * a.sin(),
                    }
                })
                .collect();
            canvas.poly(&mut out, &pts, fill[g.index(s)]);
        }
    } else {
        // One parallelogram per run of equal colour along a row.
        for j in 0..side {
            let mut i0 = 0;
            while i0 < side {
                let f = fill[g.index(Site::new(i0, j))];
                let mut i1 = i0;
                while i1 + 1 < side && fill[g.index(Site::new(i1 + 1, j))] == f {
                    i1 += 1;
                }
                let (a, b, jl, jh) = (
                    i0 as f64 - 0.5,
                    i1 as f64 + 0.5,
                    j as f64 - 0.5,
                    j as f64 + 0.5,
                );
                let pts = [
                    embed_coords(a, jl),
                    embed_coords(b, jl),
                    embed_coords(b, jh),
                    embed_coords(a, jh),
                ];
                canvas.poly(&mut out, &pts, f);
                i0 = i1 + 1;
            }
        }
    }
    out.push_str("</g>\n");

    let stroke = (scale * 0.25).max(1.0);
    let (dx0, dy0) = canvas.point(g.sw_corner().embed());
    let (dx1, dy1) = canvas.point(g.ne_corner().embed());
    let _ = writeln!(
        out,
        "<line x1=\"{dx0:.2}\" y1=\"{dy0:.2}\" x2=\"{dx1:.2}\" y2=\"{dy1:.2}\" stroke=\"#555555\" stroke-width=\"{:.2}\" stroke-dasharray=\"{:.2}\"/>",
        stroke * 0.6,
        stroke * 3.0
    );
    out.push_str("<polyline fill=\"none\" stroke=\"#00a651\" stroke-linejoin=\"round\" ");
    let _ = write!(out, "stroke-width=\"{stroke:.2}\" points=\"");
    for p in path.polyline() {
        let (x, y) = canvas.point(p);
        let _ = write!(out, "{x:.2},{y:.2} ");
    }
    out.push_str("\"/>\n</svg>\n");
    Ok(out)
}
