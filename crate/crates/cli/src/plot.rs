use std::path::Path;

use plotters::prelude::*;

use crate::error::{CliError, CliResult};

const COLORS: [RGBColor; 5] = [BLACK, RED, BLUE, GREEN, MAGENTA];

/// Static line chart of several series against a shared abscissa.
pub fn line_chart(path: &Path, title: &str, x: &[f64], series: &[(&str, &[f64])]) -> CliResult<()> {
    let err = |e: &dyn std::fmt::Display| CliError::Plot {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let (x0, x1) = bounds(x.iter());
    let (mut y0, mut y1) = bounds(series.iter().flat_map(|(_, s)| s.iter()));
    if y0 == y1 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let pad = 0.05 * (y1 - y0);

    let root = SVGBackend::new(path, (900, 540)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| err(&e))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(36)
        .y_label_area_size(64)
        .build_cartesian_2d(x0..x1, (y0 - pad)..(y1 + pad))
        .map_err(|e| err(&e))?;
    chart.configure_mesh().x_desc("t").draw().map_err(|e| err(&e))?;
    for (i, (name, ys)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        chart
            .draw_series(LineSeries::new(x.iter().copied().zip(ys.iter().copied()), color.stroke_width(2)))
            .map_err(|e| err(&e))?
            .label(*name)
            .legend(move |(lx, ly)| PathElement::new(vec![(lx, ly), (lx + 20, ly)], color.stroke_width(2)));
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| err(&e))?;
    root.present().map_err(|e| err(&e))
}

fn bounds<'a>(values: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)))
}
