//! Serialization of sampled fields and measure reports: CSV with
//! `#`-prefixed self-describing headers, and a JSON envelope. All floating
//! point values are written with 17 significant digits, enough to reconstruct
//! every `f64` bit-exactly.

use std::io::{self, Write};

use serde::Serialize;

use crate::measures::MeasureReport;
use crate::phase_space::WignerField;

/// The parameter set behind an emitted file; every output embeds one so the
/// file alone identifies the computation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FieldMeta {
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub t: f64,
    pub r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loss_fraction: Option<f64>,
}

/// 17 significant digits in scientific notation: the shortest width that
/// round-trips any finite `f64` exactly.
pub fn format_float(value: f64) -> String {
    format!("{value:.16e}")
}

/// Writes a sampled field as CSV: `#`-prefixed header lines carrying the full
/// parameter set and quadrature summary, a column-name row, then one
/// `x,y,w` row per grid point in row-major (y-outer) order.
pub fn field_to_csv<W: Write>(field: &WignerField, meta: &FieldMeta, out: &mut W) -> io::Result<()> {
    write_meta_comments(meta, out)?;
    let grid = field.grid();
    writeln!(out, "# x_min = {}", format_float(grid.x_min()))?;
    writeln!(out, "# x_max = {}", format_float(grid.x_max()))?;
    writeln!(out, "# y_min = {}", format_float(grid.y_min()))?;
    writeln!(out, "# y_max = {}", format_float(grid.y_max()))?;
    writeln!(out, "# nx = {}", grid.nx())?;
    writeln!(out, "# ny = {}", grid.ny())?;
    writeln!(out, "# total_integral = {}", format_float(field.total_integral()))?;
    writeln!(out, "# abs_integral = {}", format_float(field.abs_integral()))?;
    writeln!(out, "x,y,w")?;
    for iy in 0..grid.ny() {
        let y = format_float(grid.y(iy));
        for ix in 0..grid.nx() {
            writeln!(
                out,
                "{},{y},{}",
                format_float(grid.x(ix)),
                format_float(field.value(ix, iy))
            )?;
        }
    }
    Ok(())
}

fn write_meta_comments<W: Write>(meta: &FieldMeta, out: &mut W) -> io::Result<()> {
    writeln!(out, "# alpha_re = {}", format_float(meta.alpha_re))?;
    writeln!(out, "# alpha_im = {}", format_float(meta.alpha_im))?;
    writeln!(out, "# t = {}", format_float(meta.t))?;
    writeln!(out, "# r = {}", format_float(meta.r))?;
    if let Some(kt) = meta.kappa_t {
        writeln!(out, "# kappa_t = {}", format_float(kt))?;
    }
    if let Some(frac) = meta.loss_fraction {
        writeln!(out, "# loss_fraction = {}", format_float(frac))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct GridEnvelope {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
}

#[derive(Serialize)]
struct FieldEnvelope<'a> {
    meta: &'a FieldMeta,
    data: FieldData<'a>,
}

#[derive(Serialize)]
struct FieldData<'a> {
    grid: GridEnvelope,
    total_integral: f64,
    abs_integral: f64,
    /// row-major rows, `values[iy][ix]`
    values: Vec<&'a [f64]>,
}

/// Writes a sampled field as a `{meta, data}` JSON envelope.
pub fn field_to_json<W: Write>(
    field: &WignerField,
    meta: &FieldMeta,
    out: &mut W,
) -> io::Result<()> {
    let grid = field.grid();
    let envelope = FieldEnvelope {
        meta,
        data: FieldData {
            grid: GridEnvelope {
                x_min: grid.x_min(),
                x_max: grid.x_max(),
                y_min: grid.y_min(),
                y_max: grid.y_max(),
                nx: grid.nx(),
                ny: grid.ny(),
            },
            total_integral: field.total_integral(),
            abs_integral: field.abs_integral(),
            values: field.values().chunks(grid.nx()).collect(),
        },
    };
    write_json(&envelope, out)
}

#[derive(Serialize)]
struct ReportEnvelope<'a> {
    meta: &'a FieldMeta,
    data: ReportData<'a> ,
}

#[derive(Serialize)]
struct ReportData<'a> {
    reports: &'a [MeasureReport],
}

/// Writes a set of measure reports as a `{meta, data}` JSON envelope.
pub fn reports_to_json<W: Write>(
    reports: &[MeasureReport],
    meta: &FieldMeta,
    out: &mut W,
) -> io::Result<()> {
    write_json(&ReportEnvelope { meta, data: ReportData { reports } }, out)
}

/// Serializes any value as JSON with 17-significant-digit floats.
pub fn write_json<T: Serialize, W: Write>(value: &T, out: &mut W) -> io::Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut *out, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| io::Error::new(io::ErrorKind::Other, e))?;
    writeln!(out)
}

/// Compact JSON with every `f64` in 17-significant-digit scientific notation
/// (the default formatter emits shortest-representation decimals, which are
/// harder to diff against the CSV output).
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csqs::{NormalizedCsqs, StateParams};
    use crate::phase_space::{wigner_field, PhaseGrid};
    use num_complex::Complex64;

    fn sample_field() -> WignerField {
        let s = NormalizedCsqs::new(
            StateParams::from_t(Complex64::new(0.5, 0.0), 0.5).unwrap(),
        )
        .unwrap();
        let grid = PhaseGrid::new(-1.0, 1.0, -1.0, 1.0, 5, 3).unwrap();
        wigner_field(&s, grid)
    }

    fn sample_meta() -> FieldMeta {
        FieldMeta {
            alpha_re: 0.5,
            alpha_im: 0.0,
            t: 0.5,
            r: 0.75f64.sqrt(),
            kappa_t: None,
            loss_fraction: None,
        }
    }

    #[test]
    fn float_format_round_trips_bit_exactly() {
        for v in [
            0.0,
            -0.0,
            1.0,
            std::f64::consts::FRAC_2_PI,
            -2.225_073_858_507_201e-308,
            9.876_543_210_123_456e37,
            f64::MIN_POSITIVE,
        ] {
            let parsed: f64 = format_float(v).parse().unwrap();
            assert_eq!(parsed.to_bits(), v.to_bits(), "round-trip broke for {v}");
        }
    }

    #[test]
    fn csv_is_self_describing_and_complete() {
        let field = sample_field();
        let mut buf = Vec::new();
        field_to_csv(&field, &sample_meta(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();

        let header_lines = text.lines().filter(|l| l.starts_with('#')).count();
        assert_eq!(header_lines, 12);
        assert!(text.contains("# alpha_re = 5.0000000000000000e-1"));
        assert!(text.contains("# nx = 5"));
        assert!(text.lines().any(|l| l == "x,y,w"));

        let data_rows = text
            .lines()
            .filter(|l| !l.starts_with('#') && *l != "x,y,w" && !l.is_empty())
            .count();
        assert_eq!(data_rows, 15);

        // first data row is the grid's lower-left corner
        let first = text.lines().find(|l| l.starts_with('-')).unwrap();
        assert!(first.starts_with("-1.0000000000000000e0,-1.0000000000000000e0,"));
    }

    #[test]
    fn loss_metadata_appears_when_present() {
        let meta = FieldMeta {
            kappa_t: Some(0.25),
            loss_fraction: Some(0.451_188),
            ..sample_meta()
        };
        let mut buf = Vec::new();
        field_to_csv(&sample_field(), &meta, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("# kappa_t = 2.5000000000000000e-1"));
        assert!(text.contains("# loss_fraction = "));
    }

    #[test]
    fn json_envelope_parses_and_uses_scientific_floats() {
        let field = sample_field();
        let mut buf = Vec::new();
        field_to_json(&field, &sample_meta(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();

        assert!(text.contains("\"t\":5.0000000000000000e-1"));

        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["meta"]["alpha_re"].as_f64().unwrap(), 0.5);
        assert_eq!(parsed["data"]["grid"]["nx"].as_u64().unwrap(), 5);
        let rows = parsed["data"]["values"].as_array().unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].as_array().unwrap().len(), 5);
        let back = rows[1][2].as_f64().unwrap();
        assert_eq!(back.to_bits(), field.value(2, 1).to_bits());
    }

    #[test]
    fn report_envelope_serializes() {
        use crate::measures::{MeasureName, MeasureReport};
        let reports = vec![
            MeasureReport::with_oracle(MeasureName::LinearEntropy, 0.25, 0.25 + 1e-9, "closed vs ladder"),
            MeasureReport::note_only(MeasureName::WignerLogNegativity, "grid starved"),
        ];
        let mut buf = Vec::new();
        reports_to_json(&reports, &sample_meta(), &mut buf).unwrap();
        let parsed: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let rows = parsed["data"]["reports"].as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0]["name"].as_str().unwrap(), "LE");
        assert!(rows[0]["delta"].as_f64().unwrap() > 0.0);
        assert!(rows[1].get("closed_value").is_none());
    }
}
