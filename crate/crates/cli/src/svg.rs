//! Minimal SVG emission: polyline figures on a fixed viewbox with a linear
//! data-to-pixel map, no plotting dependency.

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const MARGIN: f64 = 48.0;

pub struct Figure {
    x_range: (f64, f64),
    y_range: (f64, f64),
    body: String,
}

impl Figure {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64)) -> Figure {
        Figure {
            x_range,
            y_range,
            body: String::new(),
        }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_range.0) / (self.x_range.1 - self.x_range.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn sy(&self, y: f64) -> f64 {
        // SVG y grows downward
        HEIGHT - MARGIN
            - (y - self.y_range.0) / (self.y_range.1 - self.y_range.0) * (HEIGHT - 2.0 * MARGIN)
    }

    /// Adds a data polyline. `extra` lands verbatim in the tag, so callers
    /// can attach data-* attributes for machine-readable checks.
    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str, extra: &str) {
        let mut path = String::with_capacity(points.len() * 14);
        for (i, (x, y)) in points.iter().enumerate() {
            if i > 0 {
                path.push(' ');
            }
            path.push_str(&format!("{:.2},{:.2}", self.sx(*x), self.sy(*y)));
        }
        self.body.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\" {extra} points=\"{path}\"/>\n"
        ));
    }

    /// Horizontal marker across the x-range at data height `y`.
    pub fn hline(&mut self, y: f64, stroke: &str, extra: &str) {
        self.body.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{stroke}\" stroke-dasharray=\"5,4\" {extra}/>\n",
            self.sx(self.x_range.0),
            self.sy(y),
            self.sx(self.x_range.1),
            self.sy(y),
        ));
    }

    pub fn text(&mut self, x: f64, y: f64, s: &str) {
        self.body.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" font-family=\"sans-serif\">{s}</text>\n",
            self.sx(x),
            self.sy(y)
        ));
    }

    /// Draws the two axes through the data origin with tick labels.
    pub fn axes(&mut self, y_ticks: &[f64]) {
        let x0 = self.sx(self.x_range.0.max(0.0));
        self.body.push_str(&format!(
            "<line x1=\"{x0:.2}\" y1=\"{:.2}\" x2=\"{x0:.2}\" y2=\"{:.2}\" stroke=\"#444\"/>\n",
            self.sy(self.y_range.0),
            self.sy(self.y_range.1),
        ));
        self.body.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#444\"/>\n",
            self.sx(self.x_range.0),
            self.sy(0.0),
            self.sx(self.x_range.1),
            self.sy(0.0),
        ));
        for &t in y_ticks {
            self.text(self.x_range.0, t, &format!("{t:.4}"));
        }
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// Thins a dense point list to at most `cap` points, keeping both endpoints.
pub fn decimate(points: Vec<(f64, f64)>, cap: usize) -> Vec<(f64, f64)> {
    if points.len() <= cap {
        return points;
    }
    let last = points.len() - 1;
    let stride = last.div_ceil(cap - 1);
    let mut out: Vec<(f64, f64)> = points.iter().step_by(stride).copied().collect();
    if *out.last().unwrap() != points[last] {
        out.push(points[last]);
    }
    out
}
