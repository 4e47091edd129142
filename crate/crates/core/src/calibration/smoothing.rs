use crate::error::{Error, Result};

/// Central moving average with span 3; the two endpoints are dropped.
pub fn smooth_cma3(series: &[f64]) -> Result<Vec<f64>> {
    if series.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "moving average needs at least 3 points, got {}",
            series.len()
        )));
    }
    Ok(series.windows(3).map(|w| (w[0] + w[1] + w[2]) / 3.0).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_is_invariant() {
        assert_eq!(smooth_cma3(&[4.0; 4]).unwrap(), vec![4.0, 4.0]);
    }

    #[test]
    fn linear_series() {
        assert_eq!(smooth_cma3(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap(), vec![2.0, 3.0, 4.0]);
    }

    #[test]
    fn too_short() {
        assert!(smooth_cma3(&[1.0, 2.0]).is_err());
    }
}
