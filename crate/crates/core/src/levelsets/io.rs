use super::checks::CurvatureSample;
use crate::error::Result;
use serde::Serialize;
use std::io::Write;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SliceRow {
    pub t: f64,
    pub area: f64,
    pub perimeter: f64,
    pub min_dt: Option<f64>,
    pub max_dt: Option<f64>,
    pub green_rel_err: Option<f64>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThicknessRow {
    pub c_arclength: f64,
    pub t: f64,
    pub d_t: Option<f64>,
}

#[derive(Clone, Copy, Debug, Serialize)]
struct CurvatureRow {
    t: f64,
    x: f64,
    y: f64,
    kappa: f64,
    term1: f64,
    term2: f64,
}

fn write_rows<T: Serialize>(rows: impl IntoIterator<Item = T>, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `t, area, perimeter, min_dt, max_dt, green_rel_err`.
pub fn write_slice_table(rows: &[SliceRow], out: impl Write) -> Result<()> {
    write_rows(rows.iter().copied(), out)
}

/// Columns `c_arclength, t, d_t`.
pub fn write_thickness_table(rows: &[ThicknessRow], out: impl Write) -> Result<()> {
    write_rows(rows.iter().copied(), out)
}

/// Columns `t, x, y, kappa, term1, term2`.
pub fn write_curvature_table(levels: &[(f64, Vec<CurvatureSample>)], out: impl Write) -> Result<()> {
    let rows = levels.iter().flat_map(|(t, samples)| {
        samples.iter().map(move |s| CurvatureRow {
            t: *t,
            x: s.point.x,
            y: s.point.y,
            kappa: s.kappa,
            term1: s.term1,
            term2: s.term2,
        })
    });
    write_rows(rows, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_table_header() {
        let mut buf = Vec::new();
        let row = SliceRow {
            t: 0.5,
            area: 1.0,
            perimeter: 2.0,
            min_dt: None,
            max_dt: Some(0.25),
            green_rel_err: None,
        };
        write_slice_table(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "t,area,perimeter,min_dt,max_dt,green_rel_err\n0.5,1.0,2.0,,0.25,\n");
    }
}
