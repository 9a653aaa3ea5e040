//! Lag polynomials and the constrained parameterisation.

/// Maps unconstrained values to partial autocorrelations in (-1, 1) and on
/// to the coefficients of a stationary `1 - a_1 B - ... - a_k B^k`.
pub fn constrained_ar(raw: &[f64]) -> Vec<f64> {
    let pacf: Vec<f64> = raw.iter().map(|x| x / (1.0 + x * x).sqrt()).collect();
    pacf_to_ar(&pacf)
}

/// Inverse of [`constrained_ar`]; `None` when the polynomial is not stationary.
pub fn unconstrained_ar(coef: &[f64]) -> Option<Vec<f64>> {
    let pacf = ar_to_pacf(coef)?;
    Some(pacf.iter().map(|r| r / (1.0 - r * r).sqrt()).collect())
}

/// Coefficients `b_j` of an invertible `1 + b_1 B + ... + b_k B^k`.
pub fn constrained_ma(raw: &[f64]) -> Vec<f64> {
    constrained_ar(raw).into_iter().map(|a| -a).collect()
}

pub fn unconstrained_ma(coef: &[f64]) -> Option<Vec<f64>> {
    let negated: Vec<f64> = coef.iter().map(|b| -b).collect();
    unconstrained_ar(&negated)
}

/// Durbin-Levinson recursion.
pub fn pacf_to_ar(pacf: &[f64]) -> Vec<f64> {
    let mut phi: Vec<f64> = Vec::with_capacity(pacf.len());
    for (k, &r) in pacf.iter().enumerate() {
        let prev = phi.clone();
        for j in 0..k {
            phi[j] = prev[j] - r * prev[k - 1 - j];
        }
        phi.push(r);
    }
    phi
}

/// Step-down recursion; `None` if any partial autocorrelation has modulus >= 1.
pub fn ar_to_pacf(coef: &[f64]) -> Option<Vec<f64>> {
    let mut phi = coef.to_vec();
    let mut pacf = vec![0.0; coef.len()];
    for k in (0..coef.len()).rev() {
        let r = phi[k];
        if !(r.abs() < 1.0) {
            return None;
        }
        pacf[k] = r;
        let denom = 1.0 - r * r;
        let prev = phi.clone();
        for j in 0..k {
            phi[j] = (prev[j] + r * prev[k - 1 - j]) / denom;
        }
        phi.truncate(k);
    }
    Some(pacf)
}

/// Polynomial product; element `i` is the coefficient of `B^i`.
pub fn multiply(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0.0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 + sign * (c_1 B^s + c_2 B^{2s} + ...)` as a dense coefficient vector.
pub fn lag_polynomial(coef: &[f64], spacing: usize, sign: f64) -> Vec<f64> {
    let mut out = vec![0.0; coef.len() * spacing + 1];
    out[0] = 1.0;
    for (i, c) in coef.iter().enumerate() {
        out[(i + 1) * spacing] = sign * c;
    }
    out
}

/// `(1 - B)^d (1 - B^m)^D`.
pub fn differencing_polynomial(d: usize, seasonal_d: usize, m: usize) -> Vec<f64> {
    let mut poly = vec![1.0];
    for _ in 0..d {
        poly = multiply(&poly, &[1.0, -1.0]);
    }
    for _ in 0..seasonal_d {
        poly = multiply(&poly, &lag_polynomial(&[1.0], m, -1.0));
    }
    poly
}

/// Applies `poly(B)` to `x`, dropping the first `poly.len() - 1` values.
pub fn apply(poly: &[f64], x: &[f64]) -> Vec<f64> {
    let lag = poly.len() - 1;
    (lag..x.len()).map(|t| poly.iter().enumerate().map(|(k, c)| c * x[t - k]).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_lag() {
        assert_eq!(pacf_to_ar(&[0.5]), vec![0.5]);
        assert_eq!(ar_to_pacf(&[0.5]).unwrap(), vec![0.5]);
        assert!(ar_to_pacf(&[1.0]).is_none());
    }

    #[test]
    fn two_lags_known_mapping() {
        // phi_1 = r1 (1 - r2), phi_2 = r2
        let phi = pacf_to_ar(&[0.5, -0.3]);
        assert!((phi[0] - 0.65).abs() < 1e-15);
        assert_eq!(phi[1], -0.3);
    }

    #[test]
    fn differencing_polynomial_shape() {
        let p = differencing_polynomial(1, 1, 12);
        assert_eq!(p.len(), 14);
        assert_eq!((p[0], p[1], p[12], p[13]), (1.0, -1.0, -1.0, 1.0));
        assert_eq!(p.iter().filter(|c| **c != 0.0).count(), 4);
    }

    #[test]
    fn apply_differences() {
        assert_eq!(apply(&[1.0, -1.0], &[1.0, 4.0, 9.0, 16.0]), vec![3.0, 5.0, 7.0]);
    }

    proptest! {
        #[test]
        fn transform_round_trip(raw in prop::collection::vec(-3.0f64..3.0, 0..8)) {
            let coef = constrained_ar(&raw);
            let back = unconstrained_ar(&coef).unwrap();
            for (a, b) in raw.iter().zip(&back) {
                prop_assert!((a - b).abs() < 1e-6 * (1.0 + a.abs()));
            }
            let ma = constrained_ma(&raw);
            let back = unconstrained_ma(&ma).unwrap();
            for (a, b) in raw.iter().zip(&back) {
                prop_assert!((a - b).abs() < 1e-6 * (1.0 + a.abs()));
            }
        }
    }
}
