//! Stacked mosaic layout and rendering: one column per given class, column
//! width proportional to class size, stacked segments proportional to the
//! predicted-class breakdown, with an optional dark-grey segment for
//! objects far from every class.

use serde::Serialize;

use crate::data::ConfusionSummary;
use crate::error::Error;
use crate::viz::svg::{layout_fingerprint, SvgDoc, MARGIN_BOTTOM, MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP};
use crate::viz::PlotOptions;
use crate::Result;

/// Fill used for the far-from-every-class segment and its legend swatch.
const OUTLIER_FILL: &str = "#595959";

/// One stacked segment of a mosaic column, in fractional coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct MosaicSegment {
    /// Predicted class the segment counts, or `None` for the segment of
    /// objects far from every class.
    pub predicted: Option<usize>,
    /// Objects in the segment.
    pub count: usize,
    /// Bottom edge as a fraction of the column height, measured upward
    /// from the column base.
    pub y: f64,
    /// Segment height as a fraction of the column height.
    pub height: f64,
}

/// One column of the mosaic, in fractional coordinates.
#[derive(Debug, Clone, Serialize)]
pub struct MosaicColumn {
    /// Given class (1-based).
    pub given: usize,
    /// Objects with that given class.
    pub count: usize,
    /// Left edge as a fraction of the total width.
    pub x: f64,
    /// Column width as a fraction of the total width.
    pub width: f64,
    /// Segments from bottom to top: own class first, then the remaining
    /// predicted classes in ascending order, then the far-from-every-class
    /// segment. Zero-count segments are omitted.
    pub segments: Vec<MosaicSegment>,
}

/// Complete, render-ready description of a mosaic.
#[derive(Debug, Clone, Serialize)]
pub struct MosaicSpec {
    /// All class names, in class order.
    pub class_names: Vec<String>,
    /// Total object count across all classes.
    pub total: usize,
    /// Whether objects far from every class are carved out of their
    /// predicted segment into a dark-grey segment on top.
    pub show_outliers: bool,
    /// Columns in given-class order (empty classes keep a width-0 column).
    pub columns: Vec<MosaicColumn>,
    /// Hex fill color per class index.
    pub palette: Vec<String>,
    /// Document width in pixels.
    pub width: f64,
    /// Document height in pixels.
    pub height: f64,
}

/// Lay out a mosaic from confusion counts.
///
/// Column areas are exact: `width x height` of every segment equals its
/// count divided by the total, before decorative pixel gaps are applied.
pub fn layout_mosaic(
    confusion: &ConfusionSummary,
    class_names: &[String],
    show_outliers: bool,
    options: &PlotOptions,
) -> Result<MosaicSpec> {
    let g_count = class_names.len();
    if g_count == 0 {
        return Err(Error::InvalidInput("no classes to display".into()));
    }
    if confusion.counts.len() != g_count
        || confusion.counts.iter().any(|row| row.len() != g_count)
        || confusion.outlier_counts.len() != g_count
        || confusion.outlier_counts.iter().any(|row| row.len() != g_count)
    {
        return Err(Error::InvalidInput(format!(
            "confusion counts are not a {g_count} x {g_count} table"
        )));
    }
    if options.palette.len() < g_count {
        return Err(Error::InvalidInput(format!(
            "palette has {} colors for {g_count} classes",
            options.palette.len()
        )));
    }
    for g in 0..g_count {
        for h in 0..g_count {
            if confusion.outlier_counts[g][h] > confusion.counts[g][h] {
                return Err(Error::InvalidInput(format!(
                    "class pair ({}, {}) reports more far-from-every-class \
                     objects than objects",
                    g + 1,
                    h + 1
                )));
            }
        }
    }
    let total: usize = confusion.counts.iter().flatten().sum();
    if total == 0 {
        return Err(Error::InvalidInput("confusion table is empty".into()));
    }

    let mut columns = Vec::with_capacity(g_count);
    let mut x = 0.0;
    for g in 0..g_count {
        let n_g: usize = confusion.counts[g].iter().sum();
        let width = n_g as f64 / total as f64;
        let mut segments = Vec::new();
        if n_g > 0 {
            let carved: usize = if show_outliers {
                confusion.outlier_counts[g].iter().sum()
            } else {
                0
            };
            // Own class at the bottom, the rest ascending, flagged objects
            // (if carved out) on top.
            let order = std::iter::once(g).chain((0..g_count).filter(|&h| h != g));
            let mut y = 0.0;
            for h in order {
                let shown = confusion.counts[g][h]
                    - if show_outliers {
                        confusion.outlier_counts[g][h]
                    } else {
                        0
                    };
                if shown == 0 {
                    continue;
                }
                let height = shown as f64 / n_g as f64;
                segments.push(MosaicSegment {
                    predicted: Some(h + 1),
                    count: shown,
                    y,
                    height,
                });
                y += height;
            }
            if carved > 0 {
                segments.push(MosaicSegment {
                    predicted: None,
                    count: carved,
                    y,
                    height: carved as f64 / n_g as f64,
                });
            }
        }
        columns.push(MosaicColumn {
            given: g + 1,
            count: n_g,
            x,
            width,
            segments,
        });
        x += width;
    }

    Ok(MosaicSpec {
        class_names: class_names.to_vec(),
        total,
        show_outliers,
        columns,
        palette: options.palette.clone(),
        width: options.width,
        height: options.height,
    })
}

impl MosaicSpec {
    /// Render as an SVG 1.1 document. Pure: identical layouts produce
    /// byte-identical documents.
    pub fn to_svg(&self) -> String {
        let serialized = serde_json::to_string(self).expect("layout serializes");
        let mut doc = SvgDoc::new(self.width, self.height, &layout_fingerprint(&serialized));

        let plot_w = self.width - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = self.height - MARGIN_TOP - MARGIN_BOTTOM;
        const COLUMN_GAP: f64 = 3.0;
        const SEGMENT_GAP: f64 = 1.0;

        doc.rect(0.0, 0.0, self.width, self.height, "#ffffff", None);
        doc.text(MARGIN_LEFT, 20.0, "predicted classes per given class", 14.0, "start", None);

        for column in &self.columns {
            if column.count == 0 {
                continue;
            }
            // Decorative gaps shrink rectangles symmetrically but never
            // below zero size.
            let cx = MARGIN_LEFT + column.x * plot_w;
            let cw = (column.width * plot_w - COLUMN_GAP).max(0.0);
            for segment in &column.segments {
                let top = MARGIN_TOP + (1.0 - segment.y - segment.height) * plot_h;
                let sh = (segment.height * plot_h - SEGMENT_GAP).max(0.0);
                let fill = match segment.predicted {
                    Some(h) => self.palette[h - 1].as_str(),
                    None => OUTLIER_FILL,
                };
                doc.rect(cx + COLUMN_GAP / 2.0, top + SEGMENT_GAP / 2.0, cw, sh, fill, None);
            }
            doc.text(
                cx + COLUMN_GAP / 2.0 + cw / 2.0,
                MARGIN_TOP + plot_h + 16.0,
                &self.class_names[column.given - 1],
                12.0,
                "middle",
                None,
            );
        }
        doc.text(
            MARGIN_LEFT + plot_w / 2.0,
            self.height - 12.0,
            "given class",
            13.0,
            "middle",
            None,
        );

        // Legend of predicted-class colors in the top band, plus the
        // dark-grey swatch when flagged objects are carved out.
        let swatch = 10.0;
        let legend_gap = 14.0;
        let entry_w = |name: &str| swatch + 4.0 + 7.0 * name.chars().count() as f64;
        let mut entries: Vec<(&str, &str)> = self
            .class_names
            .iter()
            .enumerate()
            .map(|(gi, name)| (name.as_str(), self.palette[gi].as_str()))
            .collect();
        if self.show_outliers {
            entries.push(("outliers", OUTLIER_FILL));
        }
        let total_w: f64 = entries
            .iter()
            .map(|(name, _)| entry_w(name) + legend_gap)
            .sum::<f64>()
            - legend_gap;
        let mut lx = (self.width - MARGIN_RIGHT - total_w).max(MARGIN_LEFT);
        for (name, fill) in entries {
            doc.rect(lx, 28.0, swatch, swatch, fill, None);
            doc.text(lx + swatch + 4.0, 37.0, name, 11.0, "start", None);
            lx += entry_w(name) + legend_gap;
        }

        doc.finish()
    }
}
