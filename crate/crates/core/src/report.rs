//! Sweeps over `n`, their CSV and SVG renderings, and spectrum input parsing.

use std::fmt::Write as _;
use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::reference_report;
use crate::criteria::CriterionKind;
use crate::error::{Error, Result};
use crate::optimizer::{maximize_purity, Problem, SolverOptions};
use crate::spectrum::{radius_from_purity, RawSpectrum, Spectrum};

/// Column order of sweep CSV files.
pub const CSV_HEADER: &str = "m,n,N,numeric_max_purity,conjectured_purity,numeric_radius,conjectured_radius,margin_at_opt,conjecture_feasible,conjecture_saturated,restarts_converged,seed";

/// One dimension of a sweep: numerical optimum next to the closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "N")]
    pub dim: usize,
    pub numeric_max_purity: f64,
    pub conjectured_purity: f64,
    pub numeric_radius: f64,
    pub conjectured_radius: f64,
    pub margin_at_opt: f64,
    pub conjecture_feasible: bool,
    pub conjecture_saturated: bool,
    pub restarts_converged: usize,
    pub seed: u64,
}

/// Criterion for the `m`-family of a sweep (`m ∈ {2, 3}`).
pub fn family_criterion(m: usize) -> Result<CriterionKind> {
    match m {
        2 => Ok(CriterionKind::AbsSep2xN),
        3 => Ok(CriterionKind::AbsPPT3xN),
        _ => Err(Error::Domain {
            what: "sweeps",
            domain: "m in {2, 3}",
            value: m,
        }),
    }
}

/// Maximizes `m ⊗ n` under the family criterion of `m` and pairs the result
/// with the closed-form value (the two-qubit optimum for `2 ⊗ 2`).
pub fn sweep_row(m: usize, n: usize, opts: &SolverOptions, tol: f64) -> Result<SweepRow> {
    let criterion = family_criterion(m)?;
    let conjecture = reference_report(m, n, tol)?;
    let problem = Problem::with_criterion(m, n, criterion)?;
    let result = maximize_purity(&problem, opts);
    Ok(SweepRow {
        m,
        n,
        dim: m * n,
        numeric_max_purity: result.best_purity,
        conjectured_purity: conjecture.conjectured_purity,
        numeric_radius: radius_from_purity(result.best_purity, m * n),
        conjectured_radius: conjecture.conjectured_radius,
        margin_at_opt: result.margin_at_opt,
        conjecture_feasible: conjecture.conjecture_feasible,
        conjecture_saturated: conjecture.saturated,
        restarts_converged: result.restarts_converged,
        seed: opts.seed,
    })
}

/// Rows for `n = nmin..=nmax`, computed concurrently and returned in order.
pub fn sweep(
    m: usize,
    nmin: usize,
    nmax: usize,
    opts: &SolverOptions,
    tol: f64,
) -> Result<Vec<SweepRow>> {
    (nmin..=nmax)
        .into_par_iter()
        .map(|n| sweep_row(m, n, opts, tol))
        .collect()
}

/// `x` with 12 significant digits, without exponent for moderate magnitudes
/// and without trailing zeros.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn write_csv<W: io::Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.m,
            r.n,
            r.dim,
            format_sig12(r.numeric_max_purity),
            format_sig12(r.conjectured_purity),
            format_sig12(r.numeric_radius),
            format_sig12(r.conjectured_radius),
            format_sig12(r.margin_at_opt),
            r.conjecture_feasible,
            r.conjecture_saturated,
            r.restarts_converged,
            r.seed
        )?;
    }
    Ok(())
}

const SVG_WIDTH: f64 = 640.0;
const SVG_HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;

/// Line chart of numeric (red) and conjectured (blue) maximum purity versus
/// `n`: one polyline per series, one vertex per row.
pub fn render_svg(rows: &[SweepRow]) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let m = rows.first().map_or(0, |r| r.m);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="20" font-family="sans-serif" font-size="14" text-anchor="middle">Maximum purity, {m} ⊗ n</text>"#,
        SVG_WIDTH / 2.0
    );

    let (nmin, nmax) = rows
        .iter()
        .fold((usize::MAX, 0), |(lo, hi), r| (lo.min(r.n), hi.max(r.n)));
    let (ymin, ymax) = rows
        .iter()
        .flat_map(|r| [r.numeric_max_purity, r.conjectured_purity])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    let (ymin, ymax) = if rows.is_empty() {
        (0.0, 1.0)
    } else if ymax - ymin < 1e-12 {
        (ymin - 0.5e-3, ymax + 0.5e-3)
    } else {
        let pad = 0.05 * (ymax - ymin);
        (ymin - pad, ymax + pad)
    };
    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |n: usize| {
        if nmax > nmin {
            MARGIN_LEFT + plot_w * (n - nmin) as f64 / (nmax - nmin) as f64
        } else {
            MARGIN_LEFT + plot_w / 2.0
        }
    };
    let y_of = |v: f64| MARGIN_TOP + plot_h * (1.0 - (v - ymin) / (ymax - ymin));

    let bottom = MARGIN_TOP + plot_h;
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN_LEFT}" y1="{bottom}" x2="{}" y2="{bottom}" stroke="black"/>"#,
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{bottom}" stroke="black"/>"#
    );
    for r in rows {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            x_of(r.n),
            bottom + 16.0,
            r.n
        );
    }
    for tick in 0..=4 {
        let v = ymin + (ymax - ymin) * tick as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{v:.4}</text>"#,
            MARGIN_LEFT - 6.0,
            y_of(v) + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">n</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        SVG_HEIGHT - 12.0
    );

    type Series = (&'static str, &'static str, fn(&SweepRow) -> f64);
    let series: [Series; 2] = [
        ("numeric", "red", |r| r.numeric_max_purity),
        ("conjectured", "blue", |r| r.conjectured_purity),
    ];
    for (name, color, value) in series {
        let points: Vec<String> = rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", x_of(r.n), y_of(value(r))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="{name}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
    }
    let legend_x = SVG_WIDTH - MARGIN_RIGHT - 110.0;
    for (i, (name, color)) in [("numeric", "red"), ("conjectured", "blue")]
        .iter()
        .enumerate()
    {
        let y = MARGIN_TOP + 12.0 + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{legend_x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}" font-family="sans-serif" font-size="11">{name}</text>"#,
            legend_x + 20.0,
            legend_x + 26.0,
            y + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Problems reading a spectrum file or flag.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InputError {
    #[error("invalid JSON spectrum: {0}")]
    Json(String),
    #[error("line {line}: cannot parse {text:?} as a real number")]
    BadNumber { line: usize, text: String },
    #[error("field `{field}`: {message}")]
    Field {
        field: &'static str,
        message: String,
    },
    #[error(transparent)]
    Spectrum(#[from] Error),
}

/// Parses a spectrum from JSON (`{"m":..,"n":..,"lambdas":[..]}`) or from
/// plain text with one real per line. Text input takes its dimensions from
/// `dims`; JSON dimensions must agree with `dims` when both are present.
pub fn parse_spectrum(text: &str, dims: Option<(usize, usize)>) -> Result<Spectrum, InputError> {
    if text.trim_start().starts_with('{') {
        let raw: RawSpectrum =
            serde_json::from_str(text).map_err(|e| InputError::Json(e.to_string()))?;
        if let Some((m, n)) = dims {
            if m != raw.m {
                return Err(InputError::Field {
                    field: "m",
                    message: format!("file says {}, flag says {m}", raw.m),
                });
            }
            if n != raw.n {
                return Err(InputError::Field {
                    field: "n",
                    message: format!("file says {}, flag says {n}", raw.n),
                });
            }
        }
        return Ok(Spectrum::try_from(raw)?);
    }
    let (m, n) = dims.ok_or(InputError::Field {
        field: "m",
        message: "plain-text spectra need --m and --n".into(),
    })?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: f64 = t.parse().map_err(|_| InputError::BadNumber {
            line: i + 1,
            text: t.to_string(),
        })?;
        values.push(v);
    }
    Ok(Spectrum::new(m, n, values)?)
}

/// Parses a comma-separated list of reals.
pub fn parse_lambda_list(list: &str) -> Result<Vec<f64>, InputError> {
    list.split(',')
        .map(str::trim)
        .enumerate()
        .map(|(i, t)| {
            t.parse().map_err(|_| InputError::Field {
                field: "lambdas",
                message: format!("entry {} ({t:?}) is not a real number", i + 1),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, numeric: f64, conjectured: f64) -> SweepRow {
        SweepRow {
            m: 2,
            n,
            dim: 2 * n,
            numeric_max_purity: numeric,
            conjectured_purity: conjectured,
            numeric_radius: radius_from_purity(numeric, 2 * n),
            conjectured_radius: radius_from_purity(conjectured, 2 * n),
            margin_at_opt: 0.0,
            conjecture_feasible: true,
            conjecture_saturated: true,
            restarts_converged: 3,
            seed: 7,
        }
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig12(0.22), "0.22");
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(2.0 / 3.0 * 1e-7), "6.66666666667e-8");
        assert_eq!(format_sig12(-0.04), "-0.04");
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(123456.0), "123456");
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&[row(3, 0.22, 0.22)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), 12);
        assert_eq!(&fields[..5], &["2", "3", "6", "0.22", "0.22"]);
        assert_eq!(fields[8], "true");
    }

    #[test]
    fn svg_series() {
        let rows = [
            row(3, 0.22, 0.22),
            row(4, 0.166, 0.1667),
            row(5, 0.13, 0.1328),
        ];
        let svg = render_svg(&rows);
        assert_eq!(svg.matches("<polyline").count(), 2);
        for cap in svg.split("points=\"").skip(1) {
            let pts = cap.split('"').next().unwrap();
            assert_eq!(pts.split_whitespace().count(), rows.len());
        }
    }

    #[test]
    fn text_and_json_inputs() {
        let s = parse_spectrum("0.25\n0.25\n\n# comment\n0.25\n0.25\n", Some((2, 2))).unwrap();
        assert_eq!(s.lambdas(), &[0.25; 4]);
        let err = parse_spectrum("0.25\nabc\n", Some((2, 2))).unwrap_err();
        assert!(matches!(err, InputError::BadNumber { line: 2, .. }));
        let s = parse_spectrum(r#"{"m":2,"n":2,"lambdas":[0.4,0.2,0.2,0.2]}"#, None).unwrap();
        assert_eq!(s.lambdas()[0], 0.4);
        let err = parse_spectrum(r#"{"m":2,"lambdas":[0.4,0.2,0.2,0.2]}"#, None).unwrap_err();
        assert!(err.to_string().contains("`n`"), "{err}");
        let err = parse_spectrum(r#"{"m":2,"n":2,"lambdas":[0.4,0.2,0.2,0.2]}"#, Some((2, 3)))
            .unwrap_err();
        assert!(matches!(err, InputError::Field { field: "n", .. }));
    }

    #[test]
    fn lambda_lists() {
        assert_eq!(
            parse_lambda_list("1, 0,0 ,0").unwrap(),
            vec![1.0, 0.0, 0.0, 0.0]
        );
        let err = parse_lambda_list("0.5,x").unwrap_err();
        assert!(err.to_string().contains("entry 2"));
    }

    #[test]
    fn sweep_rejects_other_families() {
        assert!(sweep_row(4, 4, &SolverOptions::default(), 1e-10).is_err());
        assert!(sweep_row(2, 1, &SolverOptions::default(), 1e-10).is_err());
    }
}
