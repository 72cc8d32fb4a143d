//! SVG, TikZ and plain-text drawings of layouts.
//!
//! Drawings use one coordinate system with `y` pointing up: the left tree's
//! leaves sit on `x = 0` at `y = k * unit` for order position `k`, the right
//! tree's leaves on `x = gutter`. Trees grow away from the gutter with
//! internal vertices offset by `level` per unit of height and centred between
//! their children. Tree edges are drawn as elbows so each side is crossing-free.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::registry::Registry;
use crate::trees::{Label, NodeId, RootedBinaryTree};

/// Visual parameters shared by all emitters.
#[derive(Clone, Debug, PartialEq)]
pub struct DrawingSpec {
    /// Vertical spacing between consecutive leaves.
    pub unit: f64,
    /// Horizontal gap between the two leaf lines.
    pub gutter: f64,
    /// Horizontal offset per unit of vertex height.
    pub level: f64,
    /// Pixels per length unit in SVG output.
    pub scale: f64,
    pub tree_stroke: f64,
    pub matching_stroke: f64,
    /// SVG `stroke-dasharray` for matching edges; empty for solid lines.
    pub matching_dash: String,
}

impl Default for DrawingSpec {
    fn default() -> Self {
        DrawingSpec {
            unit: 1.0,
            gutter: 4.0,
            level: 0.6,
            scale: 24.0,
            tree_stroke: 1.5,
            matching_stroke: 1.0,
            matching_dash: "4 3".into(),
        }
    }
}

impl DrawingSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("unit", self.unit),
            ("gutter", self.gutter),
            ("level", self.level),
            ("scale", self.scale),
            ("tree_stroke", self.tree_stroke),
            ("matching_stroke", self.matching_stroke),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlacedLeaf {
    pub side: Side,
    pub label: Label,
    pub at: Point,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub from: Point,
    pub to: Point,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchingSegment {
    pub left: Label,
    pub right: Label,
    pub segment: Segment,
}

/// Everything an emitter draws, in abstract coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Drawing {
    pub leaves: Vec<PlacedLeaf>,
    pub internal: Vec<(Side, Point)>,
    pub tree_edges: Vec<(Side, Segment)>,
    pub matching: Vec<MatchingSegment>,
    /// Bounding box as (min, max).
    pub bounds: (Point, Point),
}

fn place_tree(
    tree: &RootedBinaryTree,
    order: &[Label],
    side: Side,
    spec: &DrawingSpec,
    drawing: &mut Drawing,
) -> Vec<Point> {
    let heights = tree.heights();
    let (base, dir) = match side {
        Side::Left => (0.0, -1.0),
        Side::Right => (spec.gutter, 1.0),
    };
    let mut at = vec![Point { x: 0.0, y: 0.0 }; tree.node_count()];
    for (k, label) in order.iter().enumerate() {
        let v = tree
            .leaf_by_label(label)
            .expect("layout orders are validated");
        at[v] = Point {
            x: base,
            y: k as f64 * spec.unit,
        };
        drawing.leaves.push(PlacedLeaf {
            side,
            label: label.clone(),
            at: at[v],
        });
    }
    // Post-order guarantees children are placed before parents.
    for v in 0..tree.node_count() {
        if let Some((a, b)) = tree.children(v) {
            let p = Point {
                x: base + dir * spec.level * heights[v] as f64,
                y: (at[a].y + at[b].y) / 2.0,
            };
            at[v] = p;
            drawing.internal.push((side, p));
            drawing.tree_edges.push((
                side,
                Segment {
                    from: Point { x: p.x, y: at[a].y },
                    to: Point { x: p.x, y: at[b].y },
                },
            ));
            for c in [a, b] {
                drawing.tree_edges.push((
                    side,
                    Segment {
                        from: Point { x: p.x, y: at[c].y },
                        to: at[c],
                    },
                ));
            }
        }
    }
    at
}

/// Computes every coordinate of a layout drawing.
pub fn geometry(layout: &Layout, spec: &DrawingSpec) -> Result<Drawing> {
    spec.validate()?;
    let t = layout.tanglegram();
    let mut drawing = Drawing {
        leaves: Vec::new(),
        internal: Vec::new(),
        tree_edges: Vec::new(),
        matching: Vec::new(),
        bounds: (Point { x: 0.0, y: 0.0 }, Point { x: 0.0, y: 0.0 }),
    };
    let left_at = place_tree(
        t.left(),
        layout.left_order(),
        Side::Left,
        spec,
        &mut drawing,
    );
    let right_at = place_tree(
        t.right(),
        layout.right_order(),
        Side::Right,
        spec,
        &mut drawing,
    );
    let mut edges: Vec<(NodeId, NodeId)> = t.edge_nodes().to_vec();
    edges.sort_by(|a, b| left_at[a.0].y.total_cmp(&left_at[b.0].y));
    for (x, y) in edges {
        drawing.matching.push(MatchingSegment {
            left: t.left().label(x).unwrap().clone(),
            right: t.right().label(y).unwrap().clone(),
            segment: Segment {
                from: left_at[x],
                to: right_at[y],
            },
        });
    }
    let lh = t.left().heights()[t.left().root()] as f64;
    let rh = t.right().heights()[t.right().root()] as f64;
    drawing.bounds = (
        Point {
            x: -spec.level * lh,
            y: 0.0,
        },
        Point {
            x: spec.gutter + spec.level * rh,
            y: (t.size() - 1) as f64 * spec.unit,
        },
    );
    Ok(drawing)
}

/// Whether two closed segments share a point.
pub fn segments_intersect(a: &Segment, b: &Segment) -> bool {
    fn orient(p: Point, q: Point, r: Point) -> i8 {
        let v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
        if v.abs() < 1e-9 {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    }
    fn on(p: Point, q: Point, r: Point) -> bool {
        r.x >= p.x.min(q.x) - 1e-9
            && r.x <= p.x.max(q.x) + 1e-9
            && r.y >= p.y.min(q.y) - 1e-9
            && r.y <= p.y.max(q.y) + 1e-9
    }
    let (p1, p2, p3, p4) = (a.from, a.to, b.from, b.to);
    let d1 = orient(p3, p4, p1);
    let d2 = orient(p3, p4, p2);
    let d3 = orient(p1, p2, p3);
    let d4 = orient(p1, p2, p4);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on(p3, p4, p1))
        || (d2 == 0 && on(p3, p4, p2))
        || (d3 == 0 && on(p1, p2, p3))
        || (d4 == 0 && on(p1, p2, p4))
}

/// Number of segment pairs that intersect.
pub fn count_intersections(segments: &[Segment]) -> usize {
    let mut count = 0;
    for i in 0..segments.len() {
        for j in i + 1..segments.len() {
            if segments_intersect(&segments[i], &segments[j]) {
                count += 1;
            }
        }
    }
    count
}

/// An output format for layout drawings.
pub trait Emitter: Send + Sync {
    fn emit(&self, layout: &Layout, spec: &DrawingSpec) -> Result<String>;
}

pub struct Svg;
pub struct Tikz;
pub struct Text;

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

impl Emitter for Svg {
    fn emit(&self, layout: &Layout, spec: &DrawingSpec) -> Result<String> {
        let d = geometry(layout, spec)?;
        let margin = 1.5 * spec.unit;
        let (lo, hi) = d.bounds;
        // Flip y so the first order position is at the bottom.
        let sx = |x: f64| (x - lo.x + margin) * spec.scale;
        let sy = |y: f64| (hi.y - y + margin) * spec.scale;
        let width = (hi.x - lo.x + 2.0 * margin) * spec.scale;
        let height = (hi.y - lo.y + 2.0 * margin) * spec.scale;
        let mut out = String::new();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
            num(width),
            num(height),
            num(width),
            num(height)
        )
        .unwrap();
        writeln!(
            out,
            r#"<rect class="background" x="0" y="0" width="{}" height="{}" fill="white"/>"#,
            num(width),
            num(height)
        )
        .unwrap();
        for (side, seg) in &d.tree_edges {
            let class = match side {
                Side::Left => "left-tree",
                Side::Right => "right-tree",
            };
            writeln!(
                out,
                r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="{}"/>"#,
                num(sx(seg.from.x)),
                num(sy(seg.from.y)),
                num(sx(seg.to.x)),
                num(sy(seg.to.y)),
                num(spec.tree_stroke)
            )
            .unwrap();
        }
        let dash = if spec.matching_dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{}""#, xml_escape(&spec.matching_dash))
        };
        for m in &d.matching {
            writeln!(
                out,
                r#"<line class="matching" data-left="{}" data-right="{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-width="{}"{dash}/>"#,
                xml_escape(m.left.as_str()),
                xml_escape(m.right.as_str()),
                num(sx(m.segment.from.x)),
                num(sy(m.segment.from.y)),
                num(sx(m.segment.to.x)),
                num(sy(m.segment.to.y)),
                num(spec.matching_stroke)
            )
            .unwrap();
        }
        for (_, p) in &d.internal {
            writeln!(
                out,
                r#"<circle class="internal" cx="{}" cy="{}" r="2" fill="black"/>"#,
                num(sx(p.x)),
                num(sy(p.y))
            )
            .unwrap();
        }
        let offset = 0.4 * spec.unit;
        for leaf in &d.leaves {
            let (class, tx, anchor) = match leaf.side {
                Side::Left => ("left", leaf.at.x + offset, "start"),
                Side::Right => ("right", leaf.at.x - offset, "end"),
            };
            writeln!(
                out,
                r#"<circle class="leaf {class}" cx="{}" cy="{}" r="3" fill="black"/>"#,
                num(sx(leaf.at.x)),
                num(sy(leaf.at.y))
            )
            .unwrap();
            writeln!(
                out,
                r#"<text class="{class}-label" x="{}" y="{}" font-size="{}" text-anchor="{anchor}" dominant-baseline="middle">{}</text>"#,
                num(sx(tx)),
                num(sy(leaf.at.y + 0.25 * spec.unit)),
                num(0.5 * spec.unit * spec.scale),
                xml_escape(leaf.label.as_str())
            )
            .unwrap();
        }
        out.push_str("</svg>\n");
        Ok(out)
    }
}

fn tikz_label(label: &Label) -> String {
    let mut s = String::new();
    for ch in label.as_str().chars() {
        match ch {
            '\\' | '{' | '}' | '$' | '&' | '#' | '^' | '_' | '%' | '~' => {
                s.push('\\');
                s.push(ch);
            }
            _ => s.push(ch),
        }
    }
    s
}

impl Emitter for Tikz {
    fn emit(&self, layout: &Layout, spec: &DrawingSpec) -> Result<String> {
        let d = geometry(layout, spec)?;
        let pt = |p: Point| format!("({},{})", num(p.x), num(p.y));
        let mut out = String::new();
        out.push_str("\\begin{tikzpicture}[\n");
        writeln!(
            out,
            "  tree/.style={{line width={}pt}},",
            num(spec.tree_stroke)
        )
        .unwrap();
        writeln!(
            out,
            "  matching/.style={{dashed, line width={}pt}},",
            num(spec.matching_stroke)
        )
        .unwrap();
        out.push_str("  vertex/.style={circle, fill, inner sep=1pt}]\n");
        for (_, seg) in &d.tree_edges {
            writeln!(out, "\\draw[tree] {} -- {};", pt(seg.from), pt(seg.to)).unwrap();
        }
        for m in &d.matching {
            writeln!(
                out,
                "\\draw[matching] {} -- {};",
                pt(m.segment.from),
                pt(m.segment.to)
            )
            .unwrap();
        }
        for (_, p) in &d.internal {
            writeln!(out, "\\node[vertex] at {} {{}};", pt(*p)).unwrap();
        }
        for leaf in &d.leaves {
            let anchor = match leaf.side {
                Side::Left => "right",
                Side::Right => "left",
            };
            writeln!(
                out,
                "\\node[vertex, label={anchor}:{{{}}}] at {} {{}};",
                tikz_label(&leaf.label),
                pt(leaf.at)
            )
            .unwrap();
        }
        out.push_str("\\end{tikzpicture}\n");
        Ok(out)
    }
}

impl Emitter for Text {
    fn emit(&self, layout: &Layout, spec: &DrawingSpec) -> Result<String> {
        spec.validate()?;
        let join = |xs: &[Label]| xs.iter().map(|x| x.as_str()).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        writeln!(out, "left: {}", join(layout.left_order())).unwrap();
        writeln!(out, "right: {}", join(layout.right_order())).unwrap();
        writeln!(out, "crossings: {}", layout.crossings()).unwrap();
        Ok(out)
    }
}

/// Emitters by name: `svg`, `tikz` and `text`.
pub fn emitters() -> Registry<dyn Emitter> {
    let mut reg: Registry<dyn Emitter> = Registry::new("emitter");
    reg.register("svg", Box::new(Svg));
    reg.register("tikz", Box::new(Tikz));
    reg.register("text", Box::new(Text));
    reg
}

pub fn to_svg(layout: &Layout, spec: &DrawingSpec) -> Result<String> {
    Svg.emit(layout, spec)
}

pub fn to_tikz(layout: &Layout, spec: &DrawingSpec) -> Result<String> {
    Tikz.emit(layout, spec)
}
