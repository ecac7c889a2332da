//! Minimal grouped bar charts as standalone SVG.

use std::fmt::Write;

const COLORS: [&str; 6] = ["#2271B2", "#d55e00", "#359B73", "#e69f00", "#AA0DB4", "#3DB7E9"];

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 48.0;
const BOTTOM: f64 = 56.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Bars of rates in `[0, 1]`. `values[s][g]` is series `s` in group `g`;
/// `None` leaves a gap.
pub fn grouped_bars(
    title: &str,
    x_label: &str,
    groups: &[String],
    series: &[String],
    values: &[Vec<Option<f64>>],
) -> String {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    );

    // y axis with gridlines every 20%
    for i in 0..=5 {
        let frac = i as f64 / 5.0;
        let y = TOP + plot_h * (1.0 - frac);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}%</text>"#,
            LEFT - 6.0,
            y + 4.0,
            i * 20
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">success frequency</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );

    let n_groups = groups.len().max(1) as f64;
    let group_w = plot_w / n_groups;
    let bar_w = group_w * 0.8 / series.len().max(1) as f64;
    for (g, name) in groups.iter().enumerate() {
        let gx = LEFT + group_w * g as f64;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            gx + group_w / 2.0,
            TOP + plot_h + 16.0,
            escape(name)
        );
        for (k, row) in values.iter().enumerate() {
            let Some(v) = row.get(g).copied().flatten() else { continue };
            let v = v.clamp(0.0, 1.0);
            let h = plot_h * v;
            let x = gx + group_w * 0.1 + bar_w * k as f64;
            let y = TOP + plot_h - h;
            let _ = writeln!(
                s,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{:.1}" height="{h:.1}" fill="{}"/>"#,
                bar_w * 0.92,
                COLORS[k % COLORS.len()]
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="9">{:.0}%</text>"#,
                x + bar_w * 0.46,
                y - 3.0,
                100.0 * v
            );
        }
    }

    // legend
    for (k, name) in series.iter().enumerate() {
        let y = TOP + 8.0 + 18.0 * k as f64;
        let x = WIDTH - RIGHT + 16.0;
        let _ = writeln!(
            s,
            r#"<rect x="{x:.1}" y="{:.1}" width="12" height="12" fill="{}"/>"#,
            y - 10.0,
            COLORS[k % COLORS.len()]
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{y:.1}">{}</text>"#, x + 18.0, escape(name));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_rect_per_present_value() {
        let svg = grouped_bars(
            "t <x>",
            "method",
            &["cond".into(), "lex".into()],
            &["unbiased".into(), "biased".into()],
            &[vec![Some(0.9), Some(1.0)], vec![Some(0.5), None]],
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        // background + 3 bars + 2 legend swatches
        assert_eq!(svg.matches("<rect").count(), 6);
        assert!(svg.contains("t &lt;x&gt;"));
        assert!(svg.contains("90%"));
    }
}
