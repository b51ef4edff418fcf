//! Collar widths and harmonic-energy upper bounds for short simple closed geodesics.

use serde::{Deserialize, Serialize};

use crate::bounds::{count_lambda, n_lambda, theorem_bound};
use crate::error::{domain, Error, Result};

/// Denominators below this are reported as precision exhaustion.
pub const MIN_DENOMINATOR: f64 = 1e-15;

/// Half-width of the embedded collar around a simple closed geodesic of length `l`.
pub fn collar_width(l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return domain(format!("length must be positive, got {l}"));
    }
    Ok((1.0 / (l / 2.0).sinh()).asinh())
}

/// `π − 2·arcsin(1/cosh w)`, evaluated as `2·atan(sinh w)`.
///
/// With `cos θ = 1/cosh w` we have `tan θ = sinh w`, so the two forms agree; the
/// arctangent form keeps full relative precision for small `w`.
fn energy_denominator(w: f64) -> f64 {
    2.0 * w.sinh().atan()
}

/// Energy upper bound for a geodesic of length `l` inside a collar of width `w`.
pub fn energy_bound(l: f64, w: f64) -> Result<f64> {
    if !(l > 0.0) || !(w > 0.0) {
        return domain(format!("length and width must be positive, got l = {l}, w = {w}"));
    }
    let denom = energy_denominator(w);
    if !(denom >= MIN_DENOMINATOR) {
        return Err(Error::Precision(format!("energy denominator {denom:e} at w = {w:e}")));
    }
    Ok(l / denom)
}

/// Genus-independent bound on the squared length of the lattice vectors.
pub fn d_lambda(lambda: f64) -> Result<f64> {
    let n = n_lambda(lambda)?;
    energy_bound(n, collar_width(n)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobianBoundRow {
    pub k: u32,
    pub length_bound: f64,
    pub width: f64,
    pub energy_bound: f64,
}

/// One row per loop `k = 1..=⌈λ·(2/3)·g⌉`, using the per-index length bound.
pub fn basis_energy_table(g: u32, lambda: f64) -> Result<Vec<JacobianBoundRow>> {
    let count = count_lambda(g, lambda)?;
    (1..=count)
        .map(|k| {
            let length_bound = theorem_bound(g, k)?;
            let width = collar_width(length_bound)?;
            Ok(JacobianBoundRow { k, length_bound, width, energy_bound: energy_bound(length_bound, width)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn direct_energy(l: f64, w: f64) -> f64 {
        l / (PI - 2.0 * (1.0 / w.cosh()).asin())
    }

    #[test]
    fn collar_width_values() {
        let l = 2.0 * 1f64.asinh();
        assert_abs_diff_eq!(collar_width(l).unwrap(), 1f64.asinh(), epsilon = 1e-12);
        assert_abs_diff_eq!(collar_width(2.0).unwrap(), 0.7719368329053047, epsilon = 1e-9);
        assert!(collar_width(1e-8).unwrap() > collar_width(1e-4).unwrap());
        assert!(collar_width(1e-12).unwrap() > 25.0);
        assert!(collar_width(0.0).is_err());
        assert!(collar_width(-1.0).is_err());
    }

    #[test]
    fn energy_bound_values() {
        let w = 2f64.acosh();
        assert_abs_diff_eq!(energy_bound(1.0, w).unwrap(), 3.0 / (2.0 * PI), epsilon = 1e-12);
        assert_abs_diff_eq!(energy_bound(1.0, 40.0).unwrap(), 1.0 / PI, epsilon = 1e-12);
        // cosh(asinh 1) = √2, so the denominator is π/2
        assert_abs_diff_eq!(energy_bound(1.0, 1f64.asinh()).unwrap(), 2.0 / PI, epsilon = 1e-12);
        assert!(energy_bound(0.0, 1.0).is_err());
        assert!(energy_bound(1.0, 0.0).is_err());
        assert!(matches!(energy_bound(1.0, 1e-300), Err(Error::Precision(_))));
    }

    #[test]
    fn d_lambda_values() {
        // mpmath, 30 digits
        assert_abs_diff_eq!(collar_width(n_lambda(0.5).unwrap()).unwrap(), 0.010204170174241705, epsilon = 1e-12);
        assert_abs_diff_eq!(d_lambda(0.5).unwrap(), 517.2597247661735, epsilon = 1e-8);
        assert_abs_diff_eq!(d_lambda(0.25).unwrap(), 230.26618437838437, epsilon = 1e-8);
        assert_abs_diff_eq!(d_lambda(0.75).unwrap(), 2202.474866258063, epsilon = 1e-7);
        assert!(d_lambda(0.25).unwrap() < d_lambda(0.5).unwrap());
        assert!(d_lambda(0.5).unwrap() < d_lambda(0.75).unwrap());
        let n = n_lambda(0.5).unwrap();
        let w = collar_width(n).unwrap();
        let rel = (direct_energy(n, w) - d_lambda(0.5).unwrap()).abs() / d_lambda(0.5).unwrap();
        assert!(rel < 1e-9);
        assert!(d_lambda(1.0).is_err());
    }

    #[test]
    fn table_rows() {
        let rows = basis_energy_table(9, 0.5).unwrap();
        assert_eq!(rows.len(), 3);
        let d = d_lambda(0.5).unwrap();
        let n = n_lambda(0.5).unwrap();
        for r in &rows {
            assert!(r.length_bound <= n);
            assert!(r.energy_bound <= d);
            assert!(r.width > 0.0);
            assert!(r.energy_bound > r.length_bound / PI);
            assert_eq!(r.energy_bound, energy_bound(r.length_bound, collar_width(r.length_bound).unwrap()).unwrap());
        }
        assert_eq!(basis_energy_table(2, 0.9).unwrap().len(), 2);
    }

    #[test]
    fn arcsin_arccos_identity() {
        for i in 0..1000 {
            let x = i as f64 / 1000.0;
            assert!(((PI - 2.0 * x.asin()) - 2.0 * x.acos()).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn denominator_matches_arcsin_form(w in 0.05f64..30.0) {
            let a = PI - 2.0 * (1.0 / w.cosh()).asin();
            prop_assert!((a - energy_denominator(w)).abs() < 1e-12);
        }

        #[test]
        fn monotonicity(l in 0.01f64..50.0, w in 0.01f64..10.0, dl in 0.001f64..1.0) {
            prop_assert!(collar_width(l + dl).unwrap() < collar_width(l).unwrap());
            prop_assert!(energy_bound(l, w).unwrap() < energy_bound(l + dl, w).unwrap());
            prop_assert!(energy_bound(l, w + dl).unwrap() < energy_bound(l, w).unwrap());
        }

        #[test]
        fn d_lambda_finite_and_increasing(a in 0.01f64..0.98, d in 0.001f64..0.01) {
            let x = d_lambda(a).unwrap();
            prop_assert!(x.is_finite() && x > 0.0);
            prop_assert!(x < d_lambda(a + d).unwrap());
        }
    }
}
