use crate::error::{Error, Result};

fn check_truth(n_true: f64) -> Result<()> {
    if n_true.is_finite() && n_true > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "relative bias needs a positive true abundance, got {n_true}"
        )))
    }
}

/// (N̂ − N) / N
pub fn relative_bias(n_hat: f64, n_true: f64) -> Result<f64> {
    check_truth(n_true)?;
    Ok((n_hat - n_true) / n_true)
}

/// Relative bias of both interval bounds, lower first.
pub fn ci_relative_bias(lower: f64, upper: f64, n_true: f64) -> Result<(f64, f64)> {
    check_truth(n_true)?;
    if lower > upper {
        return Err(Error::Domain(format!(
            "interval bounds out of order: ({lower}, {upper})"
        )));
    }
    Ok((relative_bias(lower, n_true)?, relative_bias(upper, n_true)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        assert_eq!(relative_bias(33.3, 33.3).unwrap(), 0.0);
        assert_eq!(relative_bias(45.0, 40.0).unwrap(), 0.125);
        assert!(relative_bias(1.0, 0.0).is_err());
    }

    #[test]
    fn interval_bias() {
        let (lo, hi) = ci_relative_bias(16.0, 87.0, 44.0).unwrap();
        assert!((lo + 0.636).abs() < 5e-4 && (hi - 0.977).abs() < 5e-4, "{lo} {hi}");
        assert_eq!(ci_relative_bias(7.0, 7.0, 7.0).unwrap(), (0.0, 0.0));
        assert!(ci_relative_bias(9.0, 8.0, 7.0).is_err());
    }

    #[test]
    fn bounds_bracket_point() {
        let (lo, hi) = ci_relative_bias(20.0, 60.0, 30.0).unwrap();
        let mid = relative_bias(41.0, 30.0).unwrap();
        assert!(lo <= mid && mid <= hi);
    }
}
