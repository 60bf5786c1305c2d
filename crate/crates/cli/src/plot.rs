//! SVG rendering of a [`Table`]. Plots only read the table, so they can always be
//! regenerated from the CSV.

use std::path::Path;

use anyhow::anyhow;
use plotters::prelude::*;

use crate::output::Table;

#[derive(Debug, Clone, PartialEq)]
pub enum Plot {
    /// `y` against `x`, one line per distinct value of `series`, plus labelled
    /// horizontal reference lines.
    Lines {
        x: &'static str,
        y: &'static str,
        series: Option<&'static str>,
        reference: Vec<(String, f64)>,
    },
    /// Colour map of `z` over the `(x, y)` grid.
    Heatmap {
        x: &'static str,
        y: &'static str,
        z: &'static str,
    },
    /// One bar per row, labelled by `label`.
    Bars { label: &'static str, value: &'static str },
}

const SIZE: (u32, u32) = (900, 600);

pub fn render(path: &Path, table: &Table, plot: &Plot) -> anyhow::Result<()> {
    match plot {
        Plot::Lines { x, y, series, reference } => lines(path, table, x, y, *series, reference),
        Plot::Heatmap { x, y, z } => heatmap(path, table, x, y, z),
        Plot::Bars { label, value } => bars(path, table, label, value),
    }
}

fn col(table: &Table, name: &str) -> anyhow::Result<Vec<f64>> {
    table.column(name).ok_or_else(|| anyhow!("no numeric column '{name}'"))
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.05).max(1e-9 * hi.abs().max(1.0));
    (lo - pad, hi + pad)
}

fn draw_err<E: std::error::Error + Send + Sync>(e: DrawingAreaErrorKind<E>) -> anyhow::Error {
    anyhow!("{e}")
}

fn lines(
    path: &Path,
    table: &Table,
    x: &str,
    y: &str,
    series: Option<&str>,
    reference: &[(String, f64)],
) -> anyhow::Result<()> {
    let xs = col(table, x)?;
    let ys = col(table, y)?;
    let keys = match series {
        Some(s) => table.text_column(s).ok_or_else(|| anyhow!("no column '{s}'"))?,
        None => vec![String::new(); xs.len()],
    };
    let mut groups: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for ((k, &xv), &yv) in keys.iter().zip(&xs).zip(&ys) {
        match groups.iter_mut().find(|(g, _)| g == k) {
            Some((_, pts)) => pts.push((xv, yv)),
            None => groups.push((k.clone(), vec![(xv, yv)])),
        }
    }

    let (x0, x1) = span(xs.iter().copied());
    let (y0, y1) = span(ys.iter().copied().chain(reference.iter().map(|r| r.1)));
    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(draw_err)?;
    let mut chart = ChartBuilder::on(&root)
        .margin(15)
        .x_label_area_size(40)
        .y_label_area_size(70)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(draw_err)?;
    chart.configure_mesh().x_desc(x).y_desc(y).draw().map_err(draw_err)?;

    for (i, (name, pts)) in groups.into_iter().enumerate() {
        let color = Palette99::pick(i).to_rgba();
        let s = chart.draw_series(LineSeries::new(pts, color.stroke_width(2))).map_err(draw_err)?;
        if let Some(label) = series {
            s.label(format!("{label} = {name}"))
                .legend(move |(a, b)| PathElement::new(vec![(a, b), (a + 20, b)], color));
        }
    }
    for (name, level) in reference {
        chart
            .draw_series(LineSeries::new(vec![(x0, *level), (x1, *level)], BLACK.stroke_width(1)))
            .map_err(draw_err)?
            .label(name.clone())
            .legend(|(a, b)| PathElement::new(vec![(a, b), (a + 20, b)], BLACK));
    }
    if series.is_some() || !reference.is_empty() {
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .draw()
            .map_err(draw_err)?;
    }
    root.present().map_err(draw_err)?;
    Ok(())
}

fn heatmap(path: &Path, table: &Table, x: &str, y: &str, z: &str) -> anyhow::Result<()> {
    let xs = col(table, x)?;
    let ys = col(table, y)?;
    let zs = col(table, z)?;
    let step = |v: &[f64]| {
        let mut u: Vec<f64> = v.to_vec();
        u.sort_by(f64::total_cmp);
        u.dedup();
        if u.len() > 1 {
            (u[u.len() - 1] - u[0]) / (u.len() - 1) as f64
        } else {
            1.0
        }
    };
    let (dx, dy) = (step(&xs), step(&ys));
    let (x0, x1) = span(xs.iter().copied());
    let (y0, y1) = span(ys.iter().copied());
    let (z0, z1) = zs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let zr = if z1 > z0 { z1 - z0 } else { 1.0 };

    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(draw_err)?;
    let mut chart = ChartBuilder::on(&root)
        .margin(15)
        .caption(format!("{z}: {z0:.6} .. {z1:.6}"), ("sans-serif", 18))
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(draw_err)?;
    chart.configure_mesh().x_desc(x).y_desc(y).draw().map_err(draw_err)?;
    chart
        .draw_series(xs.iter().zip(&ys).zip(&zs).map(|((&a, &b), &v)| {
            let t = (v - z0) / zr;
            let color = HSLColor(0.7 * (1.0 - t), 0.8, 0.5);
            Rectangle::new(
                [(a - dx / 2.0, b - dy / 2.0), (a + dx / 2.0, b + dy / 2.0)],
                color.filled(),
            )
        }))
        .map_err(draw_err)?;
    root.present().map_err(draw_err)?;
    Ok(())
}

fn bars(path: &Path, table: &Table, label: &str, value: &str) -> anyhow::Result<()> {
    let labels = table.text_column(label).ok_or_else(|| anyhow!("no column '{label}'"))?;
    let vals = col(table, value)?;
    let top = vals.iter().copied().fold(0.0, f64::max).max(1e-12) * 1.1;
    let n = vals.len().max(1);

    let root = SVGBackend::new(path, SIZE).into_drawing_area();
    root.fill(&WHITE).map_err(draw_err)?;
    let mut chart = ChartBuilder::on(&root)
        .margin(15)
        .x_label_area_size(60)
        .y_label_area_size(60)
        .build_cartesian_2d(0.0..n as f64, 0.0..top)
        .map_err(draw_err)?;
    chart
        .configure_mesh()
        .disable_x_mesh()
        .x_labels(n)
        .x_label_formatter(&|v| {
            let i = v.floor() as usize;
            labels.get(i).cloned().unwrap_or_default()
        })
        .x_desc(label)
        .y_desc(value)
        .draw()
        .map_err(draw_err)?;
    chart
        .draw_series(vals.iter().enumerate().map(|(i, &v)| {
            Rectangle::new([(i as f64 + 0.1, 0.0), (i as f64 + 0.9, v)], BLUE.mix(0.6).filled())
        }))
        .map_err(draw_err)?;
    root.present().map_err(draw_err)?;
    Ok(())
}
