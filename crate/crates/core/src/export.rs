//! Text exports of illuminance fields: CSV samples and plain PGM heatmaps.

use std::fmt::Write as _;

use crate::photometry::IlluminanceField;

/// Decimal rendering with at least `digits` significant digits.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{:.*}", digits.saturating_sub(1), value);
    }
    let magnitude = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).clamp(0, 40) as usize;
    format!("{value:.decimals$}")
}

/// `x,y,lux` rows in grid order.
pub fn field_to_csv(field: &IlluminanceField) -> String {
    let mut out = String::from("x,y,lux\n");
    for (p, lux) in field.points().iter().zip(&field.lux) {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_significant(p.x, 9),
            format_significant(p.y, 9),
            format_significant(*lux, 9)
        );
    }
    out
}

/// Grey level of a sample: `round(255 * lux / max)`, 0 for a dark field.
pub fn grey_level(lux: f64, max: f64) -> u8 {
    if max <= 0.0 {
        return 0;
    }
    (255.0 * (lux / max).clamp(0.0, 1.0)).round() as u8
}

/// ASCII PGM (P2) over the full lattice, north (largest y) up. Cells without
/// a sample are written as 0.
pub fn field_to_pgm(field: &IlluminanceField) -> String {
    let grid = &field.grid;
    let mut raster = vec![0u8; grid.columns * grid.rows];
    for (&(col, row), &lux) in grid.cells.iter().zip(&field.lux) {
        let image_row = grid.rows - 1 - row;
        raster[image_row * grid.columns + col] = grey_level(lux, field.stats.max);
    }
    let mut out = format!("P2\n{} {}\n255\n", grid.columns, grid.rows);
    for line in raster.chunks(grid.columns.max(1)) {
        let row: Vec<String> = line.iter().map(u8::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
