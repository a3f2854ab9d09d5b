//! Nested cylinder diagrams as indented text, JSON or static SVG.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use perron_core::{geometry::cylinder, CylinderGeometry, PrefixBase, Rational, Representation};
use serde_json::{json, Value};

use crate::output::{join, natural_json, Style};

pub const DEFAULT_DEPTH_CAP: usize = 4;
pub const DEFAULT_WIDTH: usize = 8;

/// Which end of the parent the child with the smallest digit touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FirstChild {
    AtSup,
    AtInf,
}

impl FirstChild {
    pub fn of(kind: Representation, parent_rank: usize) -> Self {
        match kind {
            Representation::Alternating if parent_rank % 2 == 1 => FirstChild::AtInf,
            _ => FirstChild::AtSup,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FirstChild::AtSup => "sup",
            FirstChild::AtInf => "inf",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    pub base: PrefixBase,
    pub geometry: CylinderGeometry,
    pub first_child: FirstChild,
    pub children: Vec<Node>,
    /// The part of the parent covered by the children that were not drawn.
    pub rest: Option<(Rational, Rational)>,
}

/// Builds the tree below `base`, `depth` levels deep with the first `width`
/// children of every node.
pub fn build(base: &PrefixBase, kind: Representation, depth: usize, width: usize) -> Node {
    let geometry = cylinder(base, kind);
    let first_child = FirstChild::of(kind, base.rank());
    let mut node = Node {
        base: base.clone(),
        geometry,
        first_child,
        children: Vec::new(),
        rest: None,
    };
    if depth == 0 || width == 0 {
        return node;
    }
    let start = base.min_next_digit();
    for i in 0..width {
        let child = base.with_digit(&start + i).expect("digits above the minimum are admissible");
        node.children.push(build(&child, kind, depth - 1, width));
    }
    let last = &node.children.last().expect("width ≥ 1").geometry;
    node.rest = Some(match first_child {
        FirstChild::AtSup => (node.geometry.inf.clone(), last.inf.clone()),
        FirstChild::AtInf => (last.sup.clone(), node.geometry.sup.clone()),
    });
    node
}

fn label(base: &PrefixBase) -> String {
    if base.is_empty() {
        "root".to_string()
    } else {
        format!("({})", join(base.digits(), ","))
    }
}

fn interval(style: &Style, kind: Representation, lo: &Rational, hi: &Rational) -> String {
    let close = if kind == Representation::Positive { "]" } else { ")" };
    format!("({}, {}{close}", style.number(lo), style.number(hi))
}

pub fn render_text(root: &Node, kind: Representation, system: &str, style: &Style) -> String {
    let mut out = format!("{} cylinders of {system}\n", kind);
    text_node(root, kind, style, 0, &mut out);
    out
}

fn text_node(node: &Node, kind: Representation, style: &Style, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let g = &node.geometry;
    let _ = write!(out, "{pad}{} {}", label(&node.base), interval(style, kind, &g.inf, &g.sup));
    if !node.children.is_empty() {
        let _ = write!(out, "  first child at {}", node.first_child.name());
    }
    out.push('\n');
    for child in &node.children {
        text_node(child, kind, style, indent + 2, out);
    }
    if let Some((lo, hi)) = &node.rest {
        let _ = writeln!(out, "{pad}  ... {}", interval(style, kind, lo, hi));
    }
}

pub fn render_json(node: &Node) -> Value {
    let g = &node.geometry;
    let mut v = json!({
        "base": node.base.digits().iter().map(natural_json).collect::<Vec<_>>(),
        "inf": g.inf.to_string(),
        "sup": g.sup.to_string(),
        "diam": g.diam.to_string(),
    });
    if !node.children.is_empty() {
        v["first_child_at"] = json!(node.first_child.name());
        v["children"] = Value::Array(node.children.iter().map(render_json).collect());
        if let Some((lo, hi)) = &node.rest {
            v["rest"] = json!({ "inf": lo.to_string(), "sup": hi.to_string() });
        }
    }
    v
}

const SVG_WIDTH: f64 = 960.0;
const MARGIN: f64 = 40.0;
const ROW: f64 = 56.0;

pub fn render_svg(root: &Node, kind: Representation, system: &str, style: &Style) -> String {
    let levels = depth_of(root) + 1;
    let height = 2.0 * MARGIN + ROW * levels as f64;
    let lo = root.geometry.inf.clone();
    let span = &root.geometry.sup - &lo;
    let x = |v: &Rational| MARGIN + (SVG_WIDTH - 2.0 * MARGIN) * ((v - &lo) / &span).to_f64().unwrap_or(0.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{height}" viewBox="0 0 {SVG_WIDTH} {height}" font-family="monospace" font-size="11">"#
    );
    let _ = writeln!(out, r#"<title>{} cylinders of {}</title>"#, kind, escape(system));
    svg_node(root, kind, style, 0, &x, &mut out);
    out.push_str("</svg>\n");
    out
}

fn depth_of(node: &Node) -> usize {
    node.children.iter().map(|c| depth_of(c) + 1).max().unwrap_or(0)
}

fn svg_node(node: &Node, kind: Representation, style: &Style, level: usize, x: &dyn Fn(&Rational) -> f64, out: &mut String) {
    let g = &node.geometry;
    let (x0, x1) = (x(&g.inf), x(&g.sup));
    let y = MARGIN + ROW * level as f64;
    let name = label(&node.base);
    let _ = writeln!(
        out,
        r#"<g><title>{} {}</title><rect x="{x0:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="black"/>"#,
        escape(&name),
        escape(&interval(style, kind, &g.inf, &g.sup)),
        (x1 - x0).max(0.0),
        ROW * 0.6,
    );
    if x1 - x0 > 7.0 * name.len() as f64 {
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            y + ROW * 0.38,
            escape(&name)
        );
    }
    if level <= 1 {
        for (v, at) in [(&g.inf, x0), (&g.sup, x1)] {
            let _ = writeln!(
                out,
                r#"<text x="{at:.3}" y="{:.3}" text-anchor="middle" font-size="9">{}</text>"#,
                y + ROW * 0.6 + 11.0,
                escape(&style.number(v))
            );
        }
    }
    out.push_str("</g>\n");
    for child in &node.children {
        svg_node(child, kind, style, level + 1, x, out);
    }
    if let Some((lo, hi)) = &node.rest {
        let (a, b) = (x(lo), x(hi));
        let _ = writeln!(
            out,
            r##"<rect x="{a:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#ddd" stroke="none"/>"##,
            MARGIN + ROW * (level + 1) as f64,
            (b - a).max(0.0),
            ROW * 0.6
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Digits of the diagram base: `root` or a digit list.
pub fn parse_base(args: &[String]) -> Result<Vec<BigUint>, crate::error::CliError> {
    if args.is_empty() || (args.len() == 1 && args[0] == "root") {
        return Ok(Vec::new());
    }
    args.iter().map(|a| crate::number::parse_natural(a)).collect()
}
