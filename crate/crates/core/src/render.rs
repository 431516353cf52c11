//! SVG drawings of assemblies: one square per tile, tick marks on bound
//! sides (one tick per strength unit), contrasting markers on mismatched
//! abutting glues, optional glue labels. +y is up.

use crate::model::{Assembly, Direction, TileSet};
use crate::stability::binding_graph;

#[derive(Debug, Clone, Copy)]
pub struct RenderOptions {
    pub cell: u32,
    pub labels: bool,
    pub ticks: bool,
}

impl Default for RenderOptions {
    fn default() -> RenderOptions {
        RenderOptions {
            cell: 24,
            labels: false,
            ticks: true,
        }
    }
}

impl RenderOptions {
    pub fn normalized(mut self) -> RenderOptions {
        self.cell = self.cell.max(8);
        self
    }
}

/// Renders `a` as an SVG 1.1 document.
pub fn render_svg(a: &Assembly, tiles: &TileSet, opts: &RenderOptions) -> String {
    let opts = opts.normalized();
    let cell = opts.cell as f64;
    let (min_x, min_y, max_x, max_y) = a.bounds();
    let w = (max_x - min_x + 1) as f64 * cell;
    let h = (max_y - min_y + 1) as f64 * cell;
    let margin = cell * 0.5;
    // Lattice (x, y) -> svg coordinates with +y up.
    let sx = |x: i32| (x - min_x) as f64 * cell + margin;
    let sy = |y: i32| (max_y - y) as f64 * cell + margin;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        w + 2.0 * margin,
        h + 2.0 * margin,
        w + 2.0 * margin,
        h + 2.0 * margin
    ));
    out.push_str("<g stroke=\"#444\" stroke-width=\"1\">\n");
    for &(p, t) in a.cells() {
        out.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{cell}\" height=\"{cell}\" fill=\"#f2efe6\"/>\n",
            sx(p.x),
            sy(p.y)
        ));
        if opts.labels {
            let name = &tiles.tile(t).name;
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\" \
                 stroke=\"none\" fill=\"#333\">{}</text>\n",
                sx(p.x) + cell / 2.0,
                sy(p.y) + cell * 0.55,
                cell * 0.28,
                xml_escape(name)
            ));
            for dir in Direction::ALL {
                let g = tiles.tile(t).glue(dir);
                if g.is_null() {
                    continue;
                }
                let (lx, ly) = match dir {
                    Direction::North => (cell / 2.0, cell * 0.14),
                    Direction::South => (cell / 2.0, cell * 0.95),
                    Direction::East => (cell * 0.86, cell * 0.55),
                    Direction::West => (cell * 0.14, cell * 0.55),
                };
                out.push_str(&format!(
                    "<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\" \
                     stroke=\"none\" fill=\"#888\">{}</text>\n",
                    sx(p.x) + lx,
                    sy(p.y) + ly,
                    cell * 0.18,
                    xml_escape(&g.label)
                ));
            }
        }
    }
    out.push_str("</g>\n");

    // Bound sides: tick marks straddling the shared edge, one per strength
    // unit. Mismatched abutting glues (both positive, pairs unequal) get a
    // contrasting marker instead.
    let graph = binding_graph(a, tiles);
    if opts.ticks {
        out.push_str("<g stroke=\"#b4231f\" stroke-width=\"1.5\">\n");
        for &(i, j, strength) in graph.edges() {
            let p = graph.points()[i];
            let q = graph.points()[j];
            let horizontal = p.y == q.y;
            let tick = cell * 0.18;
            for k in 0..strength {
                let frac = (k as f64 + 1.0) / (strength as f64 + 1.0);
                if horizontal {
                    let x = sx(p.x.max(q.x));
                    let y = sy(p.y) + cell * frac;
                    out.push_str(&format!(
                        "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\"/>\n",
                        x - tick,
                        x + tick
                    ));
                } else {
                    let y = sy(p.y.max(q.y)) + cell;
                    let x = sx(p.x) + cell * frac;
                    out.push_str(&format!(
                        "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\"/>\n",
                        y - tick,
                        y + tick
                    ));
                }
            }
        }
        out.push_str("</g>\n");
    }

    let mut mismatches = String::new();
    for &(p, t) in a.cells() {
        for dir in [Direction::North, Direction::East] {
            let Some(q) = p.step(dir) else { continue };
            let Some(u) = a.tile_at(q) else { continue };
            let ga = tiles.tile(t).glue(dir);
            let gb = tiles.tile(u).glue(dir.opposite());
            let bound = ga == gb && ga.strength > 0;
            let mismatch = !bound && ga.strength > 0 && gb.strength > 0;
            if mismatch {
                let (cx, cy) = if dir == Direction::East {
                    (sx(q.x), sy(p.y) + cell / 2.0)
                } else {
                    (sx(p.x) + cell / 2.0, sy(q.y) + cell)
                };
                mismatches.push_str(&format!(
                    "<circle cx=\"{cx}\" cy=\"{cy}\" r=\"{}\" fill=\"#1f5fb4\"/>\n",
                    cell * 0.12
                ));
            }
        }
    }
    if !mismatches.is_empty() {
        out.push_str("<g stroke=\"none\">\n");
        out.push_str(&mismatches);
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
