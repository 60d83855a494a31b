use std::fmt::Write as _;

use super::norms::convergence_rate;
use crate::error::Result;

pub const CSV_HEADER: &str =
    "tau,h,err_u_linf_l2,err_u_l2_h1,err_p_l2_l2,err_w_linf_l2,err_w_l2_h1,rate_u,rate_p,rate_w";

/// Space-time errors of one run against the exact solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRow {
    pub tau: f64,
    pub h: f64,
    pub err_u_linf_l2: f64,
    pub err_u_l2_h1: f64,
    pub err_p_l2_l2: f64,
    pub err_w_linf_l2: f64,
    pub err_w_l2_h1: f64,
}

/// Observed orders between a row and its predecessor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub u: f64,
    pub p: f64,
    pub w: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StudyReport {
    pub rows: Vec<ErrorRow>,
    /// `rates[i]` compares `rows[i]` with `rows[i + 1]`.
    pub rates: Vec<Rates>,
}

impl StudyReport {
    /// Rates are taken between consecutive rows, which must halve `tau` or `h`.
    pub fn from_rows(rows: Vec<ErrorRow>) -> Result<Self> {
        let rates = rows
            .windows(2)
            .map(|w| {
                Ok(Rates {
                    u: convergence_rate(w[0].err_u_linf_l2, w[1].err_u_linf_l2)?,
                    p: convergence_rate(w[0].err_p_l2_l2, w[1].err_p_l2_l2)?,
                    w: convergence_rate(w[0].err_w_linf_l2, w[1].err_w_linf_l2)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows, rates })
    }

    /// Report whose rate columns stay blank, for runs where some error is zero.
    pub fn without_rates(rows: Vec<ErrorRow>) -> Self {
        Self { rows, rates: Vec::new() }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (i, r) in self.rows.iter().enumerate() {
            let fields = [r.tau, r.h, r.err_u_linf_l2, r.err_u_l2_h1, r.err_p_l2_l2, r.err_w_linf_l2, r.err_w_l2_h1];
            let cols: Vec<String> = fields.iter().map(|&v| format_sci(v)).collect();
            out.push_str(&cols.join(","));
            match i.checked_sub(1).and_then(|k| self.rates.get(k)) {
                Some(rt) => {
                    let _ = write!(out, ",{},{},{}", format_sci(rt.u), format_sci(rt.p), format_sci(rt.w));
                }
                None => out.push_str(",,,"),
            }
            out.push('\n');
        }
        out
    }
}

/// Scientific notation with 6 significant digits and a signed two-digit
/// exponent, e.g. `4.81060e-02`.
pub fn format_sci(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.5e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", e.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(tau: f64, e: f64) -> ErrorRow {
        ErrorRow {
            tau,
            h: 0.0078125,
            err_u_linf_l2: e,
            err_u_l2_h1: 10.0 * e,
            err_p_l2_l2: 20.0 * e,
            err_w_linf_l2: 0.5 * e,
            err_w_l2_h1: e,
        }
    }

    #[test]
    fn sci_format() {
        assert_eq!(format_sci(4.8106e-2), "4.81060e-02");
        assert_eq!(format_sci(1.0542), "1.05420e+00");
        assert_eq!(format_sci(0.0), "0.00000e+00");
        assert_eq!(format_sci(-123456.7), "-1.23457e+05");
        assert_eq!(format_sci(1e-120), "1.00000e-120");
    }

    #[test]
    fn csv_layout() {
        let rep = StudyReport::from_rows(vec![row(0.1, 4.0e-2), row(0.05, 2.0e-2)]).unwrap();
        let csv = rep.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].ends_with(",,,"));
        assert_eq!(lines[1].split(',').count(), 10);
        assert!(lines[2].ends_with("1.00000e+00,1.00000e+00,1.00000e+00"));
        assert!(csv.ends_with('\n') && !csv.contains('\r'));
    }
}
