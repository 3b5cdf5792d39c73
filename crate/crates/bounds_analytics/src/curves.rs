use std::fmt::Write;

use crate::exponent::{budget_exponent, BoundSpec};

pub const CSV_HEADER: &str = "family,param,x,log_n_b,kind";

/// One CSV row per spec and grid point inside the spec's valid range, with
/// six decimal places. With `n` given, the explicit polylogarithmic factor
/// of strategy budgets is folded in as `c · ln ln n / ln n`.
pub fn curve_table(specs: &[BoundSpec], n: Option<u64>, x_grid: &[f64]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for spec in specs {
        let correction = match (n, spec.polylog_exponent()) {
            (Some(n), Some(c)) if n >= 3 => {
                let ln = (n as f64).ln();
                (*c.numer() as f64 / *c.denom() as f64) * ln.ln() / ln
            }
            _ => 0.0,
        };
        for &x in x_grid {
            if let Ok(y) = budget_exponent(spec, x) {
                writeln!(
                    out,
                    "{},{},{:.6},{:.6},{}",
                    spec.family.name(),
                    spec.family.param(),
                    x,
                    y + correction,
                    spec.kind.as_str()
                )
                .expect("writing to a String cannot fail");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{BoundFamily, BoundKind};

    #[test]
    fn empty_spec_list_gives_header_only() {
        assert_eq!(curve_table(&[], None, &[1.0, 2.0]), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn out_of_range_points_are_skipped() {
        let spec = BoundSpec::new(BoundFamily::CliqueFactor(4), BoundKind::LowerBound).unwrap();
        let csv = curve_table(&[spec], None, &[1.0, 1.5, 2.0]);
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(rows, ["clique_factor,4,1.500000,1.500000,lower_bound", "clique_factor,4,2.000000,1.000000,lower_bound"]);
    }
}
