//! CSV serialization. Floats carry 17 significant digits; lines end in LF.

use std::fmt::Write;

use collsync::collision::StepRecord;
use collsync::sweep::SweepGrid;
use collsync::sync::PearsonSeries;

pub const TRACE_HEADER: &str = "N,sx1,sx2,sy1,sy2,sz1,sz2,concurrence,mutual_info";
pub const PEARSON_HEADER: &str = "window_start,c12";
pub const SWEEP_HEADER: &str = "axis1,axis2,c12";

/// Round-trip exact decimal form with 17 significant digits.
pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

pub fn trace_csv(records: &[StepRecord]) -> String {
    let mut out = format!("{TRACE_HEADER}\n");
    for r in records {
        let cols = [r.sx1, r.sx2, r.sy1, r.sy2, r.sz1, r.sz2, r.concurrence, r.mutual_info];
        write!(out, "{}", r.n).unwrap();
        for c in cols {
            write!(out, ",{}", float(c)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn pearson_csv(series: &PearsonSeries) -> String {
    let mut out = format!("{PEARSON_HEADER}\n");
    for p in &series.points {
        writeln!(out, "{},{}", p.window_start, opt(p.c12)).unwrap();
    }
    out
}

pub fn sweep_csv(grid: &SweepGrid) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for i in 0..grid.rows() {
        for j in 0..grid.cols() {
            let (a, b) = (grid.axis1.value(i), grid.axis2.value(j));
            writeln!(out, "{},{},{}", float(a), float(b), opt(grid.get(i, j))).unwrap();
        }
    }
    out
}

/// One row per temperature pair of a thermal scan.
pub fn thermal_summary_csv(rows: &[(f64, f64, Option<f64>)]) -> String {
    let mut out = "index,temp1,temp2,final_c12\n".to_string();
    for (k, &(t1, t2, c)) in rows.iter().enumerate() {
        writeln!(out, "{k},{},{},{}", float(t1), float(t2), opt(c)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use collsync::sync::PearsonPoint;

    #[test]
    fn floats_round_trip_with_seventeen_digits() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 123456.789, 0.0] {
            let s = float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let mantissa = s.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17, "{s}");
        }
        assert_eq!(float(-0.5), "-5.0000000000000000e-1");
    }

    #[test]
    fn missing_pearson_values_are_empty_fields() {
        let s = PearsonSeries {
            points: vec![PearsonPoint { window_start: 1, c12: None }, PearsonPoint { window_start: 16, c12: Some(-1.0) }],
        };
        assert_eq!(pearson_csv(&s), "window_start,c12\n1,\n16,-1.0000000000000000e0\n");
    }
}
