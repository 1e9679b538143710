//! ASCII and SVG drawings of configurations.
//!
//! SVG panels use screen coordinates, so the y axis is flipped when drawing:
//! site `(x, y)` lands at `(m + x*cell, m + (B - y)*cell)`. Higher sites are
//! drawn higher on the page. The grid is gray and dashed, the ideal line
//! `(0,0)-(A,B)` red and dotted, and the thread a solid black polyline.

use std::fmt::Write as _;

use crate::config::{Configuration, LineParams, Word};
use crate::dynamics::{ParsedTrace, Snapshot};
use crate::error::{Error, Result};

pub const ASCII_MAX_TOT: usize = 200;

/// Draws a configuration as `B + 1` rows of `A + 1` characters, top row
/// first. `o` marks the origin, `@` the endpoint `(A, B)`, `#` the other
/// sites and `.` the rest of the grid.
pub fn ascii_grid(config: &Configuration) -> Result<String> {
    let tot = config.tot();
    if tot > ASCII_MAX_TOT {
        return Err(Error::RenderSize(format!(
            "ascii grid limited to tot <= {ASCII_MAX_TOT}, got {tot}"
        )));
    }
    let params = config.params();
    let (w, h) = (params.a_count() + 1, params.b_count() + 1);
    let mut cells = vec![vec!['.'; w]; h];
    let sites = config.sites();
    for s in &sites {
        cells[s.y as usize][s.x as usize] = '#';
    }
    cells[0][0] = 'o';
    cells[h - 1][w - 1] = '@';
    let mut out = String::with_capacity(h * (w + 1));
    for row in cells.iter().rev() {
        out.extend(row.iter());
        out.push('\n');
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderSpec {
    /// Pixels per grid unit.
    pub cell: u32,
    pub show_grid: bool,
    pub show_ideal_line: bool,
    /// Snapshot steps to draw, one panel each; empty means every snapshot.
    pub steps: Vec<u64>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            cell: 12,
            show_grid: true,
            show_ideal_line: true,
            steps: Vec::new(),
        }
    }
}

impl RenderSpec {
    fn validate(&self) -> Result<()> {
        if self.cell == 0 {
            return Err(Error::RenderSize("cell size must be at least 1".into()));
        }
        Ok(())
    }
}

/// Renders the requested snapshots of a trace side by side.
pub fn svg_snapshots(trace: &ParsedTrace, spec: &RenderSpec) -> Result<String> {
    let params = trace.header.params()?;
    let chosen: Vec<&Snapshot> = if spec.steps.is_empty() {
        trace.snapshots.iter().collect()
    } else {
        spec.steps
            .iter()
            .map(|&step| {
                trace
                    .snapshots
                    .iter()
                    .find(|s| s.step == step)
                    .ok_or(Error::MissingSnapshot(step))
            })
            .collect::<Result<_>>()?
    };
    let panels: Vec<(u64, &Word)> = chosen.iter().map(|s| (s.step, &s.word)).collect();
    svg_panels(&params, &panels, spec)
}

/// Renders one panel per `(step, word)`; every word must belong to `params`.
pub fn svg_panels(
    params: &LineParams,
    panels: &[(u64, &Word)],
    spec: &RenderSpec,
) -> Result<String> {
    spec.validate()?;
    let configs = panels
        .iter()
        .map(|(step, w)| Configuration::chain((*w).clone(), *params).map(|c| (*step, c)))
        .collect::<Result<Vec<_>>>()?;
    let cell = spec.cell as u64;
    let (a, b) = (params.a_count() as u64, params.b_count() as u64);
    let margin = 2 * cell;
    let label = 16u64;
    let panel_w = a * cell + 2 * margin;
    let panel_h = b * cell + 2 * margin + label;
    let width = panel_w * configs.len().max(1) as u64;

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{panel_h}\" viewBox=\"0 0 {width} {panel_h}\">"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{panel_h}\" fill=\"white\"/>"
    );
    for (k, (step, c)) in configs.iter().enumerate() {
        let ox = k as u64 * panel_w + margin;
        let oy = label + margin;
        let px = |x: u64| ox + x * cell;
        let py = |y: u64| oy + (b - y) * cell;
        let _ = writeln!(svg, "<g class=\"panel\" id=\"step-{step}\">");
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\">t = {step}</text>",
            ox,
            label - 4 + margin / 2
        );
        if spec.show_grid {
            svg.push_str("<g stroke=\"gray\" stroke-width=\"0.5\" stroke-dasharray=\"2,2\">\n");
            for x in 0..=a {
                let _ = writeln!(
                    svg,
                    "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>",
                    px(x),
                    py(b),
                    py(0)
                );
            }
            for y in 0..=b {
                let _ = writeln!(
                    svg,
                    "<line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\"/>",
                    py(y),
                    px(0),
                    px(a)
                );
            }
            svg.push_str("</g>\n");
        }
        if spec.show_ideal_line {
            let _ = writeln!(
                svg,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"red\" stroke-width=\"1\" stroke-dasharray=\"1,3\"/>",
                px(0),
                py(0),
                px(a),
                py(b)
            );
        }
        let points: Vec<String> = c
            .sites()
            .iter()
            .map(|s| format!("{},{}", px(s.x as u64), py(s.y as u64)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
            points.join(" ")
        );
        svg.push_str("</g>\n");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
