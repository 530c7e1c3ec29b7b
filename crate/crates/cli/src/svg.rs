//! Static SVG plot of sampled band functions: one polyline per band over
//! `[0, π]`, axes labelled `k` and `λ`. Self-contained text output, no
//! plotting dependency.

use std::f64::consts::PI;

use chainband::floquet::BandTable;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 56.0;

// eigenvalues of the normalised Laplacian stay in [-1, 1]; pad slightly
const Y_MIN: f64 = -1.05;
const Y_MAX: f64 = 1.05;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
];

fn x_px(k: f64) -> f64 {
    MARGIN_LEFT + (k / PI) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
}

fn y_px(lambda: f64) -> f64 {
    let t = (lambda - Y_MIN) / (Y_MAX - Y_MIN);
    HEIGHT - MARGIN_BOTTOM - t * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
}

pub fn band_plot(table: &BandTable) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // frame
    out.push_str(&format!(
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" \
         stroke=\"black\" stroke-width=\"1\"/>\n",
        MARGIN_LEFT,
        MARGIN_TOP,
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        HEIGHT - MARGIN_TOP - MARGIN_BOTTOM,
    ));

    // x ticks at 0, π/2, π
    for (k, label) in [(0.0, "0"), (PI / 2.0, "&#960;/2"), (PI, "&#960;")] {
        let x = x_px(k);
        let y0 = HEIGHT - MARGIN_BOTTOM;
        out.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{y0:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            y0 + 6.0
        ));
        out.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"middle\">{label}</text>\n",
            y0 + 22.0
        ));
    }
    // y ticks
    for tick in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let y = y_px(tick);
        out.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{MARGIN_LEFT:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
            MARGIN_LEFT - 6.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"14\" text-anchor=\"end\">{tick}</text>\n",
            MARGIN_LEFT - 10.0,
            y + 5.0
        ));
    }

    // axis labels
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"16\" text-anchor=\"middle\">k</text>\n",
        x_px(PI / 2.0),
        HEIGHT - 12.0
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" font-size=\"16\" text-anchor=\"middle\">&#955;</text>\n",
        y_px(0.0)
    ));

    // one polyline per band
    for band in 0..table.band_count() {
        let color = PALETTE[band % PALETTE.len()];
        let points: Vec<String> = table
            .grid()
            .iter()
            .zip(table.rows())
            .map(|(&k, row)| format!("{:.2},{:.2}", x_px(k), y_px(row[band])))
            .collect();
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
    }

    out.push_str("</svg>\n");
    out
}
