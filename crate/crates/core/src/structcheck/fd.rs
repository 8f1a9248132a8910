//! Central differences with steps scaled to the coordinate magnitude.

use crate::error::Result;

pub fn step(v: f64) -> f64 {
    1e-6 * (1.0 + v.abs())
}

/// Gradient of a scalar field on `R^N`.
pub fn gradient<const N: usize, F>(f: F, pt: [f64; N]) -> Result<[f64; N]>
where
    F: Fn([f64; N]) -> Result<f64>,
{
    let mut g = [0.0; N];
    for i in 0..N {
        let h = step(pt[i]);
        let (mut plus, mut minus) = (pt, pt);
        plus[i] += h;
        minus[i] -= h;
        g[i] = (f(plus)? - f(minus)?) / (plus[i] - minus[i]);
    }
    Ok(g)
}

/// Jacobian `J[i][j] = ∂F_i/∂v_j` of a vector field on `R^N`.
pub fn jacobian<const N: usize, F>(f: F, pt: [f64; N]) -> Result<[[f64; N]; N]>
where
    F: Fn([f64; N]) -> Result<[f64; N]>,
{
    let mut jac = [[0.0; N]; N];
    for j in 0..N {
        let h = step(pt[j]);
        let (mut plus, mut minus) = (pt, pt);
        plus[j] += h;
        minus[j] -= h;
        let (fp, fm) = (f(plus)?, f(minus)?);
        let width = plus[j] - minus[j];
        for i in 0..N {
            jac[i][j] = (fp[i] - fm[i]) / width;
        }
    }
    Ok(jac)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_of_quadratic() {
        let g = gradient(|[x, y]| Ok(x * x * y + y.sin()), [1.5, -0.3]).unwrap();
        assert!((g[0] - 2.0 * 1.5 * -0.3).abs() < 1e-8);
        assert!((g[1] - (2.25 + (-0.3f64).cos())).abs() < 1e-8);
    }

    #[test]
    fn jacobian_of_rotation_field() {
        let j = jacobian(|[x, y]| Ok([-y, x]), [0.7, 2.0]).unwrap();
        assert!((j[0][1] + 1.0).abs() < 1e-9 && (j[1][0] - 1.0).abs() < 1e-9);
        assert!(j[0][0].abs() < 1e-9 && j[1][1].abs() < 1e-9);
    }
}
