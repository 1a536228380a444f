//! Minimal deterministic SVG writer: fixed six-decimal coordinates, XML
//! escaping, and a metadata comment fingerprinting the layout that
//! produced the drawing.

use sha2::{Digest, Sha256};

/// Left plot margin in pixels (room for the y-axis labels).
pub(crate) const MARGIN_LEFT: f64 = 56.0;
/// Right plot margin in pixels.
pub(crate) const MARGIN_RIGHT: f64 = 18.0;
/// Top plot margin in pixels (room for title and legend).
pub(crate) const MARGIN_TOP: f64 = 46.0;
/// Bottom plot margin in pixels (room for the x-axis labels).
pub(crate) const MARGIN_BOTTOM: f64 = 48.0;

/// Format a coordinate with exactly six decimal places.
pub(crate) fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

/// Escape text for XML content and attribute values.
pub(crate) fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(ch),
        }
    }
    out
}

/// Hex-encoded SHA-256 of a serialized layout.
pub(crate) fn layout_fingerprint(serialized: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(serialized.as_bytes());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Incrementally built SVG 1.1 document.
pub(crate) struct SvgDoc {
    buf: String,
}

impl SvgDoc {
    /// Open a document; the fingerprint lands in a JSON metadata comment
    /// between the XML declaration and the root element.
    pub fn new(width: f64, height: f64, fingerprint: &str) -> Self {
        let mut buf = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        buf.push_str(&format!(
            "<!-- {{\"spec_sha256\":\"{fingerprint}\"}} -->\n"
        ));
        buf.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
            fmt6(width),
            fmt6(height),
            fmt6(width),
            fmt6(height)
        ));
        SvgDoc { buf }
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str, stroke: Option<(&str, f64)>) {
        self.buf.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"",
            fmt6(x),
            fmt6(y),
            fmt6(w),
            fmt6(h),
            xml_escape(fill)
        ));
        self.push_stroke(stroke);
        self.buf.push_str("/>\n");
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64, dash: Option<&str>) {
        self.buf.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"",
            fmt6(x1),
            fmt6(y1),
            fmt6(x2),
            fmt6(y2),
            xml_escape(stroke),
            fmt6(width)
        ));
        if let Some(d) = dash {
            self.buf
                .push_str(&format!(" stroke-dasharray=\"{}\"", xml_escape(d)));
        }
        self.buf.push_str("/>\n");
    }

    pub fn circle(&mut self, cx: f64, cy: f64, r: f64, fill: &str, stroke: Option<(&str, f64)>) {
        self.buf.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" fill-opacity=\"0.9\"",
            fmt6(cx),
            fmt6(cy),
            fmt6(r),
            xml_escape(fill)
        ));
        self.push_stroke(stroke);
        self.buf.push_str("/>\n");
    }

    pub fn polygon(&mut self, points: &[(f64, f64)], fill: &str, stroke: Option<(&str, f64)>) {
        let coords: Vec<String> = points
            .iter()
            .map(|&(x, y)| format!("{},{}", fmt6(x), fmt6(y)))
            .collect();
        self.buf.push_str(&format!(
            "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.9\"",
            coords.join(" "),
            xml_escape(fill)
        ));
        self.push_stroke(stroke);
        self.buf.push_str("/>\n");
    }

    /// Text anchored `start`, `middle`, or `end`; optional rotation around
    /// the anchor point in degrees.
    pub fn text(&mut self, x: f64, y: f64, content: &str, size: f64, anchor: &str, rotate: Option<f64>) {
        self.buf.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"{}\" text-anchor=\"{}\" fill=\"#000000\"",
            fmt6(x),
            fmt6(y),
            fmt6(size),
            xml_escape(anchor)
        ));
        if let Some(deg) = rotate {
            self.buf.push_str(&format!(
                " transform=\"rotate({} {} {})\"",
                fmt6(deg),
                fmt6(x),
                fmt6(y)
            ));
        }
        self.buf
            .push_str(&format!(">{}</text>\n", xml_escape(content)));
    }

    fn push_stroke(&mut self, stroke: Option<(&str, f64)>) {
        match stroke {
            Some((color, width)) => self.buf.push_str(&format!(
                " stroke=\"{}\" stroke-width=\"{}\"",
                xml_escape(color),
                fmt6(width)
            )),
            None => self.buf.push_str(" stroke=\"none\""),
        }
    }

    pub fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }
}

/// A pleasant tick step near `target`: 1, 2, 2.5 or 5 times a power of 10.
pub(crate) fn nice_step(target: f64) -> f64 {
    let magnitude = 10f64.powf(target.abs().max(1e-12).log10().floor());
    let candidates = [1.0, 2.0, 2.5, 5.0, 10.0];
    for &c in &candidates {
        if c * magnitude >= target {
            return c * magnitude;
        }
    }
    10.0 * magnitude
}

/// Tick label with just enough decimals for the step size.
pub(crate) fn tick_label(v: f64, step: f64) -> String {
    if step >= 1.0 {
        format!("{v:.0}")
    } else if step >= 0.1 {
        format!("{v:.1}")
    } else {
        format!("{v:.2}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escaping_covers_the_five_special_characters() {
        assert_eq!(
            xml_escape("a&b<c>d\"e'f"),
            "a&amp;b&lt;c&gt;d&quot;e&apos;f"
        );
        assert_eq!(xml_escape("plain"), "plain");
    }

    #[test]
    fn coordinates_use_six_decimals() {
        assert_eq!(fmt6(1.0), "1.000000");
        assert_eq!(fmt6(0.1234567), "0.123457");
    }

    #[test]
    fn fingerprint_is_sha256_hex() {
        // sha256("") is a published constant.
        assert_eq!(
            layout_fingerprint(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        assert_eq!(layout_fingerprint("x").len(), 64);
    }

    #[test]
    fn tick_steps_are_nice_fractions() {
        assert_eq!(nice_step(0.9), 1.0);
        assert_eq!(nice_step(1.7), 2.0);
        assert_eq!(nice_step(2.2), 2.5);
        assert_eq!(nice_step(3.8), 5.0);
        assert_eq!(nice_step(0.3), 0.5);
        assert!((nice_step(0.021) - 0.025).abs() < 1e-12);
    }

    #[test]
    fn documents_open_and_close_cleanly() {
        let mut doc = SvgDoc::new(100.0, 50.0, "deadbeef");
        doc.rect(0.0, 0.0, 10.0, 10.0, "#ffffff", None);
        doc.circle(5.0, 5.0, 2.0, "#ff0000", Some(("#000000", 1.0)));
        doc.text(1.0, 2.0, "a<b", 12.0, "start", Some(-90.0));
        let out = doc.finish();
        assert!(out.starts_with("<?xml version=\"1.0\""));
        assert!(out.contains("{\"spec_sha256\":\"deadbeef\"}"));
        assert!(out.contains("a&lt;b"));
        assert!(out.trim_end().ends_with("</svg>"));
    }
}
