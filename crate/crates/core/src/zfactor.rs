//! Small-argument-stable kernels for the deformation factors.
//!
//! Every deformed expression is written in terms of these so that `z = 0`
//! evaluates to the undeformed value exactly instead of `0/0`.

/// `(e^u - 1) / u`, equal to 1 at `u = 0`.
#[inline]
pub fn exprel(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        u.exp_m1() / u
    }
}

/// `(e^u - 1 - u) / u^2`, equal to 1/2 at `u = 0`.
pub fn exprel2(u: f64) -> f64 {
    if u.abs() < 0.1 {
        // Taylor series: sum_{k>=0} u^k / (k+2)!
        let mut term = 0.5;
        let mut sum = 0.5;
        for k in 1..14 {
            term *= u / (k as f64 + 2.0);
            sum += term;
        }
        sum
    } else {
        (u.exp_m1() - u) / (u * u)
    }
}

/// `-ln(1 - u) / u`, equal to 1 at `u = 0`. Requires `u < 1`.
#[inline]
pub fn logrel(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        -(-u).ln_1p() / u
    }
}

/// `(-ln(1 - u) - u) / u^2`, equal to 1/2 at `u = 0`. Requires `u < 1`.
pub fn logrel2(u: f64) -> f64 {
    if u.abs() < 0.1 {
        // sum_{k>=2} u^{k-2} / k
        let mut power = 1.0;
        let mut sum = 0.0;
        for k in 2..20 {
            sum += power / k as f64;
            power *= u;
        }
        sum
    } else {
        (-(-u).ln_1p() - u) / (u * u)
    }
}

/// `(e^{z q} - 1) / z`.
#[inline]
pub fn deformed_linear(z: f64, q: f64) -> f64 {
    q * exprel(z * q)
}

/// `-ln(1 - z w) / z`, the deformed inverse of [`deformed_linear`].
#[inline]
pub fn deformed_log(z: f64, w: f64) -> f64 {
    w * logrel(z * w)
}

/// `e^{-u} u exprel2(u)`, i.e. `exprel(-u) - e^{-u}`, vanishing at `u = 0`.
#[inline]
pub fn shifted_gap(u: f64) -> f64 {
    (-u).exp() * u * exprel2(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_arguments_are_exact() {
        assert_eq!(exprel(0.0), 1.0);
        assert_eq!(exprel2(0.0), 0.5);
        assert_eq!(logrel(0.0), 1.0);
        assert_eq!(logrel2(0.0), 0.5);
        assert_eq!(deformed_linear(0.0, 3.7), 3.7);
        assert_eq!(deformed_log(0.0, -2.5), -2.5);
        assert_eq!(shifted_gap(0.0), 0.0);
    }

    #[test]
    fn series_branch_matches_direct_formula() {
        for &u in &[0.099f64, -0.099, 0.05, 0.3, -0.7, 2.0] {
            let direct = (u.exp() - 1.0 - u) / (u * u);
            assert!((exprel2(u) - direct).abs() < 1e-12, "u = {u}");
        }
        for &u in &[1e-3f64, 1e-6, 1e-9] {
            assert!((exprel2(u) - (0.5 + u / 6.0 + u * u / 24.0)).abs() < 1e-11);
        }
    }

    #[test]
    fn logrel2_branches_agree() {
        for &u in &[0.0999f64, -0.0999, 0.5, -2.0, 0.9] {
            let direct = (-(1.0 - u).ln() - u) / (u * u);
            assert!((logrel2(u) - direct).abs() < 1e-12, "u = {u}");
        }
    }

    #[test]
    fn deformed_log_inverts_deformed_linear() {
        for &z in &[-0.4, -0.05, 0.0, 0.05, 0.3] {
            for &q in &[-1.5, -0.2, 0.0, 0.9, 2.0] {
                // (1 - e^{-zq})/z inverted by -ln(1 - z w)/z
                let w = q * exprel(-z * q);
                assert!((deformed_log(z, w) - q).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn shifted_gap_identity() {
        for &u in &[-1.0f64, -0.01, 0.02, 0.5, 3.0] {
            let lhs = shifted_gap(u);
            let rhs = exprel(-u) - (-u).exp();
            assert!((lhs - rhs).abs() < 1e-13, "u = {u}");
        }
    }
}
