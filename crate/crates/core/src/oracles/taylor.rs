use super::OracleReport;
use crate::error::{Error, Result};

/// `x - 1 + e^{-x}` without cancellation for small `x`.
fn first_order_gap(x: f64) -> f64 {
    if x < 1e-3 {
        x * x * (0.5 - x * (1.0 / 6.0 - x / 24.0))
    } else {
        x + (-x).exp_m1()
    }
}

/// `0` followed by `count - 1` log-spaced radii up to `r_max`.
pub fn radius_grid(r_max: f64, count: usize) -> Vec<f64> {
    let mut out = vec![0.0];
    if count > 1 {
        let lo = 1e-3f64.ln();
        let hi = r_max.ln();
        let m = count - 1;
        out.extend((0..m).map(|i| if m == 1 { r_max } else { (lo + (hi - lo) * i as f64 / (m - 1) as f64).exp() }));
    }
    out
}

/// Pointwise check of the two symbol Taylor bounds
/// `|δL - 1 + e^{-δL}| <= δ²L²` and `|e^{-δL} - 1| <= δL`, `L = log(a + r)`.
///
/// Any violation is build-breaking. `worst_ratio` is the largest `LHS/RHS`
/// over both bounds; extras carry the values at the first radius.
pub fn check_taylor_symbol_bounds(delta: f64, radii: &[f64], shift: f64) -> Result<OracleReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param("delta", format!("must lie in (0, 1), got {delta}")));
    }
    if !(shift > 1.0) {
        return Err(Error::param("shift", "must exceed 1"));
    }
    let mut violations = 0u64;
    let mut worst = 0.0f64;
    let mut first = None;
    for &r in radii {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::param("r_grid", format!("radius {r} is not a finite nonnegative number")));
        }
        let x = delta * (shift + r).ln();
        let (lhs1, rhs1) = (first_order_gap(x), x * x);
        let (lhs2, rhs2) = ((-x).exp_m1().abs(), x);
        if lhs1 > rhs1 || lhs2 > rhs2 {
            violations += 1;
        }
        worst = worst.max(lhs1 / rhs1).max(lhs2 / rhs2);
        first.get_or_insert((lhs1, rhs1, lhs2, rhs2));
    }
    let mut rep = OracleReport::new("2.3", 0).extra("delta", delta).extra("violations", violations as f64);
    if let Some((a, b, c, d)) = first {
        rep = rep.extra("lhs1_at_r0", a).extra("rhs1_at_r0", b).extra("lhs2_at_r0", c).extra("rhs2_at_r0", d);
    }
    rep.samples = radii.len() as u64;
    rep.worst_ratio = worst;
    rep.empirical_constant = worst;
    rep.ceiling = Some(1.0);
    rep.pass = violations == 0;
    rep.build_breaking = violations > 0;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        let r = check_taylor_symbol_bounds(0.1, &[0.0], 10.0).unwrap();
        assert!((r.extras["lhs1_at_r0"] - 0.024_586_744_023_686_07).abs() < 1e-15);
        assert!((r.extras["rhs1_at_r0"] - 0.053_018_981_104_783_98).abs() < 1e-15);
        let r = check_taylor_symbol_bounds(0.5, &[0.0], 10.0).unwrap();
        assert!((r.extras["lhs2_at_r0"] - 0.683_772_233_983_162_1).abs() < 1e-15);
        assert!((r.extras["rhs2_at_r0"] - 1.151_292_546_497_022_8).abs() < 1e-15);
        assert!(r.pass && !r.build_breaking);
    }

    #[test]
    fn vanishing_delta() {
        let a = check_taylor_symbol_bounds(1e-2, &[5.0], 10.0).unwrap();
        let b = check_taylor_symbol_bounds(1e-4, &[5.0], 10.0).unwrap();
        assert!(b.extras["lhs1_at_r0"] < a.extras["lhs1_at_r0"] * 1e-3);
        assert!(b.extras["lhs2_at_r0"] < a.extras["lhs2_at_r0"] * 2e-2);
    }

    #[test]
    fn grid_and_domain() {
        let g = radius_grid(1e4, 5);
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.0);
        assert!((g[4] - 1e4).abs() < 1e-9);
        assert!(check_taylor_symbol_bounds(1.0, &g, 10.0).is_err());
        assert!(check_taylor_symbol_bounds(0.1, &[-1.0], 10.0).is_err());
    }
}
