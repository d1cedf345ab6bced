//! Static SVG line plots from benchmark CSVs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::bench::csv_err;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotSpec {
    pub x: String,
    pub y: String,
    /// Column that splits rows into series; one line per distinct value.
    pub series: Option<String>,
    pub log_y: bool,
    pub title: String,
}

impl PlotSpec {
    /// BER against SNR, one line per scheme, log-scaled.
    pub fn ber() -> Self {
        PlotSpec {
            x: "snr_db".into(),
            y: "ber".into(),
            series: Some("scheme".into()),
            log_y: true,
            title: "bit error rate vs SNR".into(),
        }
    }
}

type Series = BTreeMap<String, Vec<(f64, f64)>>;

fn read_series(csv_text: &str, spec: &PlotSpec) -> Result<Series> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(csv_text.as_bytes());
    let headers = r.headers().map_err(csv_err)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::format("plot input", format!("missing column {name:?}")))
    };
    let xi = col(&spec.x)?;
    let yi = col(&spec.y)?;
    let si = spec.series.as_deref().map(col).transpose()?;
    let mut series = Series::new();
    let mut rows = 0usize;
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        rows += 1;
        let parse = |i: usize| rec.get(i).and_then(|v| v.trim().parse::<f64>().ok());
        let (Some(x), Some(y)) = (parse(xi), parse(yi)) else {
            continue;
        };
        let name = si.and_then(|i| rec.get(i)).unwrap_or(&spec.y).to_string();
        series.entry(name).or_default().push((x, y));
    }
    if rows == 0 {
        return Err(Error::format("plot input", "no data rows"));
    }
    Ok(series)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `spec.y` against `spec.x`. On a log axis, points with `y <= 0`
/// are dropped.
pub fn svg_lineplot(csv_text: &str, spec: &PlotSpec) -> Result<String> {
    let mut series = read_series(csv_text, spec)?;
    for pts in series.values_mut() {
        pts.retain(|&(x, y)| x.is_finite() && y.is_finite() && (!spec.log_y || y > 0.0));
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let all: Vec<(f64, f64)> = series.values().flatten().copied().collect();
    if all.is_empty() {
        return Err(Error::format("plot input", "no plottable points"));
    }
    let ty = |y: f64| if spec.log_y { y.log10() } else { y };
    let (mut x0, mut x1) = all.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (mut y0, mut y1) = all
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(ty(p.1)), b.max(ty(p.1))));
    if spec.log_y {
        y0 = y0.floor();
        y1 = y1.ceil();
    }
    if x1 <= x0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 <= y0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=5 {
        let x = x0 + (x1 - x0) * f64::from(i) / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            px(x),
            TOP + ph + 18.0,
            (x * 100.0).round() / 100.0
        );
    }
    let y_ticks: Vec<f64> = if spec.log_y {
        (y0 as i32..=y1 as i32).map(f64::from).collect()
    } else {
        (0..=5).map(|i| y0 + (y1 - y0) * f64::from(i) / 5.0).collect()
    };
    for t in y_ticks {
        let (val, label) = if spec.log_y {
            (10f64.powf(t), format!("1e{t}"))
        } else {
            (t, format!("{}", (t * 1000.0).round() / 1000.0))
        };
        let y = py(val);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{label}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0,
        escape(&spec.x)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&spec.y)
    );
    for (k, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
        let _ = writeln!(
            s,
            r#"<polyline class="series" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            path.join(" ")
        );
        let ly = TOP + 10.0 + 20.0 * k as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            s,
            r#"<g class="legend"><line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text></g>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(x: &str, y: &str) -> PlotSpec {
        PlotSpec {
            x: x.into(),
            y: y.into(),
            series: None,
            log_y: false,
            title: "t".into(),
        }
    }

    #[test]
    fn identity_series_is_a_straight_line() {
        let svg = svg_lineplot("x,y\n0,0\n1,1\n2,2\n", &linear("x", "y")).unwrap();
        let pts = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        let coords: Vec<(f64, f64)> = pts
            .split(' ')
            .map(|p| {
                let (a, b) = p.split_once(',').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect();
        let slope = |a: (f64, f64), b: (f64, f64)| (b.1 - a.1) / (b.0 - a.0);
        assert!((slope(coords[0], coords[1]) - slope(coords[1], coords[2])).abs() < 1e-9);
    }

    #[test]
    fn one_legend_entry_per_series() {
        let csv = "# comment\nscheme,snr_db,ber\ntccsk,0,0.1\nbpsk,0,0.2\ntccsk,2,0.01\nbpsk,2,0.05\n";
        let svg = svg_lineplot(csv, &PlotSpec::ber()).unwrap();
        assert_eq!(svg.matches("class=\"legend\"").count(), 2);
        assert_eq!(svg.matches("class=\"series\"").count(), 2);
    }

    #[test]
    fn errors_on_empty_or_missing_columns() {
        assert!(svg_lineplot("", &linear("x", "y")).is_err());
        assert!(svg_lineplot("x,y\n", &linear("x", "y")).is_err());
        assert!(svg_lineplot("x,z\n1,2\n", &linear("x", "y")).is_err());
    }
}
