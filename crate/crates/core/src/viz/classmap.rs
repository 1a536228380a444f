//! Per-class scatter layout and rendering: each object of a class drawn at
//! (farness from the class, label dissimilarity), colored by predicted
//! class, bordered when far from every class.

use serde::Serialize;

use crate::data::DiagnosticTable;
use crate::error::Error;
use crate::viz::svg::{
    layout_fingerprint, nice_step, tick_label, SvgDoc, MARGIN_BOTTOM, MARGIN_LEFT, MARGIN_RIGHT,
    MARGIN_TOP,
};
use crate::viz::PlotOptions;
use crate::Result;

/// One marker of a class map.
#[derive(Debug, Clone, Serialize)]
pub struct ClassMapPoint {
    /// 1-based object index.
    pub index: usize,
    /// Farness of the object from the displayed class.
    pub x: f64,
    /// Label dissimilarity of the object.
    pub y: f64,
    /// Predicted class, which selects the fill color.
    pub predicted: usize,
    /// Whether the object is far from every class (drawn with a black
    /// border).
    pub outlier: bool,
    /// Whether the farness exceeds the axis cap (drawn at the edge with a
    /// distinct glyph).
    pub clipped: bool,
    /// Optional short label drawn next to the marker.
    pub annotation: Option<String>,
}

/// Complete, render-ready description of one class map.
#[derive(Debug, Clone, Serialize)]
pub struct ClassMapSpec {
    /// Displayed class (1-based).
    pub class: usize,
    /// Name of the displayed class.
    pub class_name: String,
    /// All class names, for the legend.
    pub class_names: Vec<String>,
    /// Markers, one per member of the class.
    pub points: Vec<ClassMapPoint>,
    /// Farness axis cap.
    pub x_max: f64,
    /// Dissimilarity band where the classifier still sides with the given
    /// label; always [0, 0.5].
    pub grey_zone: (f64, f64),
    /// Farness value of the dashed flagging line; always 1.
    pub cutoff_line: f64,
    /// Hex fill color per class index.
    pub palette: Vec<String>,
    /// Document width in pixels.
    pub width: f64,
    /// Document height in pixels.
    pub height: f64,
}

/// Lay out the class map of `class` from a diagnostic table.
///
/// The farness axis runs from 0 to `max(1.2, 1.05 x largest farness in the
/// class)` unless the options cap it lower, in which case markers beyond
/// the cap draw at the edge as clipped glyphs.
pub fn layout_classmap(
    table: &DiagnosticTable,
    class: usize,
    options: &PlotOptions,
) -> Result<ClassMapSpec> {
    let g_count = table.n_classes();
    if class == 0 || class > g_count {
        return Err(Error::InvalidInput(format!(
            "class {class} out of range 1..={g_count}"
        )));
    }
    if options.palette.len() < g_count {
        return Err(Error::InvalidInput(format!(
            "palette has {} colors for {g_count} classes",
            options.palette.len()
        )));
    }
    let members: Vec<_> = table.rows.iter().filter(|r| r.given == class).collect();
    if members.is_empty() {
        return Err(Error::EmptyClass(class));
    }

    let max_far = members
        .iter()
        .map(|r| r.farness[class - 1])
        .fold(0.0_f64, f64::max);
    let x_max = match options.x_max {
        Some(v) if v.is_finite() && v > 0.0 => v,
        Some(v) => {
            return Err(Error::InvalidInput(format!(
                "farness axis cap must be finite and positive, got {v}"
            )))
        }
        None => 1.2_f64.max(1.05 * max_far),
    };

    let points = members
        .iter()
        .map(|r| {
            let x = r.farness[class - 1];
            ClassMapPoint {
                index: r.index,
                x,
                y: r.ld,
                predicted: r.predicted,
                outlier: r.outlier,
                clipped: x > x_max,
                annotation: options
                    .annotations
                    .iter()
                    .find(|(idx, _)| *idx == r.index)
                    .map(|(_, s)| s.clone()),
            }
        })
        .collect();

    Ok(ClassMapSpec {
        class,
        class_name: table.class_names[class - 1].clone(),
        class_names: table.class_names.clone(),
        points,
        x_max,
        grey_zone: (0.0, 0.5),
        cutoff_line: 1.0,
        palette: options.palette.clone(),
        width: options.width,
        height: options.height,
    })
}

impl ClassMapSpec {
    /// Render as an SVG 1.1 document. Pure: identical layouts produce
    /// byte-identical documents.
    pub fn to_svg(&self) -> String {
        let serialized = serde_json::to_string(self).expect("layout serializes");
        let mut doc = SvgDoc::new(self.width, self.height, &layout_fingerprint(&serialized));

        let plot_w = self.width - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = self.height - MARGIN_TOP - MARGIN_BOTTOM;
        let px = |x: f64| MARGIN_LEFT + x / self.x_max * plot_w;
        let py = |y: f64| MARGIN_TOP + (1.0 - y) * plot_h;

        doc.rect(0.0, 0.0, self.width, self.height, "#ffffff", None);
        // Band of dissimilarities that still side with the given label.
        doc.rect(
            px(0.0),
            py(self.grey_zone.1),
            plot_w,
            py(self.grey_zone.0) - py(self.grey_zone.1),
            "#e6e6e6",
            None,
        );
        doc.rect(px(0.0), py(1.0), plot_w, plot_h, "none", Some(("#333333", 1.0)));

        // Dashed vertical flagging line at farness 1.
        if self.cutoff_line <= self.x_max {
            doc.line(
                px(self.cutoff_line),
                py(1.0),
                px(self.cutoff_line),
                py(0.0),
                "#555555",
                1.0,
                Some("6,4"),
            );
        }

        // Axis ticks and labels.
        let step = nice_step(self.x_max / 5.0);
        let mut tick = 0.0;
        while tick <= self.x_max + 1e-9 {
            let x = px(tick.min(self.x_max));
            doc.line(x, py(0.0), x, py(0.0) + 5.0, "#333333", 1.0, None);
            doc.text(x, py(0.0) + 18.0, &tick_label(tick, step), 11.0, "middle", None);
            tick += step;
        }
        for k in 0..=4 {
            let v = k as f64 * 0.25;
            doc.line(px(0.0) - 5.0, py(v), px(0.0), py(v), "#333333", 1.0, None);
            doc.text(
                px(0.0) - 8.0,
                py(v) + 4.0,
                &format!("{v:.2}"),
                11.0,
                "end",
                None,
            );
        }
        doc.text(
            MARGIN_LEFT + plot_w / 2.0,
            self.height - 12.0,
            &format!("farness from class {}", self.class_name),
            13.0,
            "middle",
            None,
        );
        doc.text(
            16.0,
            MARGIN_TOP + plot_h / 2.0,
            "label dissimilarity",
            13.0,
            "middle",
            Some(-90.0),
        );
        doc.text(
            MARGIN_LEFT,
            20.0,
            &format!("class map: {}", self.class_name),
            14.0,
            "start",
            None,
        );

        // Legend of predicted-class colors, right-aligned in the top band.
        let swatch = 10.0;
        let legend_gap = 14.0;
        let entry_w = |name: &str| swatch + 4.0 + 7.0 * name.chars().count() as f64;
        let total_w: f64 = self
            .class_names
            .iter()
            .map(|n| entry_w(n) + legend_gap)
            .sum::<f64>()
            - legend_gap;
        let mut lx = (self.width - MARGIN_RIGHT - total_w).max(MARGIN_LEFT);
        for (gi, name) in self.class_names.iter().enumerate() {
            doc.rect(lx, 28.0, swatch, swatch, &self.palette[gi], None);
            doc.text(lx + swatch + 4.0, 37.0, name, 11.0, "start", None);
            lx += entry_w(name) + legend_gap;
        }

        // Markers, in object order. Clipped markers become right-pointing
        // triangles pinned to the axis cap.
        for p in &self.points {
            let fill = &self.palette[p.predicted - 1];
            let stroke = if p.outlier {
                Some(("#000000", 1.4))
            } else {
                None
            };
            let (mx, my) = if p.clipped {
                let edge = px(self.x_max);
                let y = py(p.y);
                doc.polygon(
                    &[(edge - 8.0, y - 4.5), (edge - 8.0, y + 4.5), (edge, y)],
                    fill,
                    stroke,
                );
                (edge, y)
            } else {
                let (cx, cy) = (px(p.x), py(p.y));
                doc.circle(cx, cy, 4.0, fill, stroke);
                (cx, cy)
            };
            if let Some(label) = &p.annotation {
                doc.text(mx + 6.0, my - 6.0, label, 12.0, "start", None);
            }
        }

        doc.finish()
    }
}
