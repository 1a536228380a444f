//! Deterministic SVG renderings of diagnostics: per-class scatter maps
//! (label dissimilarity against farness) and stacked mosaic displays of
//! the confusion counts. Layout and rendering are pure functions, so
//! identical inputs produce byte-identical files.

mod classmap;
mod mosaic;
mod svg;

pub use classmap::{layout_classmap, ClassMapPoint, ClassMapSpec};
pub use mosaic::{layout_mosaic, MosaicColumn, MosaicSegment, MosaicSpec};

/// Fixed colorblind-safe palette (Okabe-Ito hues first), assigned to
/// classes by index.
pub fn default_palette() -> Vec<String> {
    [
        "#e69f00", "#56b4e9", "#009e73", "#f0e442", "#0072b2", "#d55e00", "#cc79a7", "#999999",
        "#8c510a", "#7570b3",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

/// Options shared by both plot kinds.
#[derive(Debug, Clone)]
pub struct PlotOptions {
    /// Document width in pixels.
    pub width: f64,
    /// Document height in pixels.
    pub height: f64,
    /// Hex fill colors per class index; must cover every class.
    pub palette: Vec<String>,
    /// Short labels drawn next to specific markers, as (1-based object
    /// index, text) pairs.
    pub annotations: Vec<(usize, String)>,
    /// Cap on the farness axis; markers beyond it draw at the edge with a
    /// clipped glyph. Default: max(1.2, 1.05 x the largest farness in the
    /// class).
    pub x_max: Option<f64>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            width: 640.0,
            height: 480.0,
            palette: default_palette(),
            annotations: Vec::new(),
            x_max: None,
        }
    }
}
