//! Deterministic SVG fan charts.

use std::fmt::Write;

use collision_core::heston::{percentile, ForecastEnsemble};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

/// Median line over shaded 80% (p10-p90) and 50% (p25-p75) bands, with the
/// start rate dashed.
pub fn fan_chart(ensemble: &ForecastEnsemble, title: &str) -> String {
    let bands: Vec<[f64; 5]> = (0..ensemble.horizon())
        .map(|t| {
            let mut xs = ensemble.month_samples(t).to_vec();
            xs.sort_by(f64::total_cmp);
            [10.0, 25.0, 50.0, 75.0, 90.0].map(|p| percentile(&xs, p))
        })
        .collect();
    let top = bands.iter().map(|b| b[4]).fold(ensemble.start_rate, f64::max);
    let y_max = nice_ceiling(top * 1.05);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let span = bands.len().saturating_sub(1).max(1) as f64;
    let x = |t: usize| LEFT + plot_w * t as f64 / span;
    let y = |v: f64| TOP + plot_h * (1.0 - v / y_max);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, WIDTH / 2.0, escape(title));

    for i in 0..=5 {
        let v = y_max * i as f64 / 5.0;
        let yy = y(v);
        let _ = writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{yy:.2}" x2="{:.2}" y2="{yy:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{:.3}%</text>"##,
            WIDTH - RIGHT,
            LEFT - 6.0,
            yy + 4.0,
            v * 100.0
        );
    }
    let years: Vec<(usize, i32)> =
        (0..bands.len()).filter(|&t| ensemble.period(t).month == 1).map(|t| (t, ensemble.period(t).year)).collect();
    let every = years.len().div_ceil(10).max(1);
    for (t, year) in years.iter().step_by(every) {
        let xx = x(*t);
        let _ = writeln!(
            svg,
            r##"<line x1="{xx:.2}" y1="{:.2}" x2="{xx:.2}" y2="{:.2}" stroke="#333333"/><text x="{xx:.2}" y="{:.2}" text-anchor="middle">{year}</text>"##,
            HEIGHT - BOTTOM,
            HEIGHT - BOTTOM + 5.0,
            HEIGHT - BOTTOM + 20.0
        );
    }

    if !bands.is_empty() {
        for (lo, hi, fill) in [(0, 4, "#c6dbef"), (1, 3, "#6baed6")] {
            let mut points: Vec<String> = (0..bands.len()).map(|t| point(x(t), y(bands[t][hi]))).collect();
            points.extend((0..bands.len()).rev().map(|t| point(x(t), y(bands[t][lo]))));
            let _ = writeln!(svg, r#"<polygon points="{}" fill="{fill}" stroke="none"/>"#, points.join(" "));
        }
        let median: Vec<String> = (0..bands.len()).map(|t| point(x(t), y(bands[t][2]))).collect();
        let _ = writeln!(svg, r##"<polyline points="{}" fill="none" stroke="#08306b" stroke-width="2"/>"##, median.join(" "));
    }
    let start = y(ensemble.start_rate);
    let _ = writeln!(
        svg,
        r##"<line x1="{LEFT}" y1="{start:.2}" x2="{:.2}" y2="{start:.2}" stroke="#cb181d" stroke-dasharray="6 4"/>"##,
        WIDTH - RIGHT
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333333"/>"##
    );
    let legend_y = HEIGHT - 12.0;
    for (i, (swatch, text)) in
        [("#08306b", "median"), ("#6baed6", "50% interval"), ("#c6dbef", "80% interval"), ("#cb181d", "start rate")]
            .iter()
            .enumerate()
    {
        let lx = LEFT + 150.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{lx}" y="{:.2}" width="14" height="10" fill="{swatch}"/><text x="{}" y="{legend_y:.2}">{text}</text>"#,
            legend_y - 9.0,
            lx + 20.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn point(x: f64, y: f64) -> String {
    format!("{x:.2},{y:.2}")
}

/// Smallest 1, 2 or 5 times a power of ten that is at least `x`.
fn nice_ceiling(x: f64) -> f64 {
    if !(x > 0.0) || !x.is_finite() {
        return 1.0;
    }
    let scale = 10f64.powf(x.log10().floor());
    [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * scale).find(|&c| c >= x * (1.0 - 1e-12)).unwrap_or(10.0 * scale)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nice_ceilings() {
        assert_eq!(nice_ceiling(0.0042), 0.005);
        assert_eq!(nice_ceiling(0.0011), 0.002);
        assert_eq!(nice_ceiling(3.0), 5.0);
        assert_eq!(nice_ceiling(0.0), 1.0);
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a < b & c"), "a &lt; b &amp; c");
    }
}
