//! SVG pictures of animals: rotated unit squares or heaps of dominoes.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::lattice::{sort_total, Animal, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    #[default]
    Squares,
    Dominoes,
}

impl std::str::FromStr for Style {
    type Err = String;
    fn from_str(s: &str) -> Result<Style, String> {
        match s {
            "squares" => Ok(Style::Squares),
            "dominoes" => Ok(Style::Dominoes),
            _ => Err(format!("unknown style {s}")),
        }
    }
}

const UNIT: f64 = 20.0;
const MARGIN: f64 = 10.0;
/// Half-length of a domino; pieces in adjacent columns of one row nearly touch.
const HALF_DOMINO: f64 = 0.95;

/// Blue to red along `t ∈ [0, 1]`.
fn ramp(t: f64) -> String {
    let r = (255.0 * t).round() as u8;
    let b = (255.0 * (1.0 - t)).round() as u8;
    format!("#{r:02x}40{b:02x}")
}

/// Renders `a`. With `order_colors`, vertices are coloured by their rank in
/// the encoding order, first blue and last red.
pub fn render_svg(a: &Animal, style: Style, order_colors: bool) -> String {
    let vs = a.vertices();
    let (mut x0, mut x1, mut y1) = (0i64, 0i64, 0i64);
    for v in vs {
        x0 = x0.min(v.x);
        x1 = x1.max(v.x);
        y1 = y1.max(v.y);
    }
    let width = (x1 - x0 + 2) as f64 * UNIT + 2.0 * MARGIN;
    let height = (y1 + 2) as f64 * UNIT + 2.0 * MARGIN;
    // lattice (x, y) to picture coordinates, y pointing up
    let px = |x: f64| MARGIN + (x - x0 as f64 + 1.0) * UNIT;
    let py = |y: f64| height - MARGIN - y * UNIT;

    let colour_of: std::collections::HashMap<Vertex, String> = if order_colors {
        let order = sort_total(a, false);
        let last = (order.len().max(2) - 1) as f64;
        order.into_iter().enumerate().map(|(i, v)| (v, ramp(i as f64 / last))).collect()
    } else {
        Default::default()
    };

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    if style == Style::Dominoes {
        writeln!(
            out,
            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black" stroke-width="2"/>"#,
            MARGIN,
            py(0.0),
            width - MARGIN,
            py(0.0)
        )
        .unwrap();
    }
    for v in vs {
        let fill = colour_of.get(v).map_or("#9ab", String::as_str);
        let (x, y) = (v.x as f64, v.y as f64);
        match style {
            Style::Squares => writeln!(
                out,
                r#"<polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="{fill}" stroke="black"/>"#,
                px(x - 1.0),
                py(y + 0.5),
                px(x),
                py(y + 1.5),
                px(x + 1.0),
                py(y + 0.5),
                px(x),
                py(y - 0.5),
            ),
            Style::Dominoes => writeln!(
                out,
                r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="{fill}" stroke="black"/>"#,
                px(x - HALF_DOMINO),
                py(y + 1.0),
                2.0 * HALF_DOMINO * UNIT,
                UNIT
            ),
        }
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
