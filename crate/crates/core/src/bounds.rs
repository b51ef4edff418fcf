//! Closed-form length bounds from the disk-growth area argument and the pruning count.
//!
//! Every function here is a pure evaluation in binary64. Out-of-domain inputs are
//! rejected with [`Error::Domain`] rather than clamped.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

fn check_genus(g: u32) -> Result<()> {
    if g < 2 {
        return domain(format!("genus must be at least 2, got {g}"));
    }
    Ok(())
}

fn check_consumed(g: u32, j: u32) -> Result<()> {
    check_genus(g)?;
    if j > 2 * g + 1 {
        return domain(format!("consumed count {j} must be at most 2g+1 = {}", 2 * g + 1));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return domain(format!("lambda must lie in (0, 1), got {lambda}"));
    }
    Ok(())
}

/// Area of an embedded metric disk of radius `r` around a cone point of angle π.
pub fn half_disk_area(r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return domain(format!("radius must be nonnegative, got {r}"));
    }
    Ok(PI * (r.cosh() - 1.0))
}

/// Area of the quotient sphere of a genus `g` surface.
pub fn sphere_area(g: u32) -> Result<f64> {
    check_genus(g)?;
    Ok(2.0 * PI * (g as f64 - 1.0))
}

/// Upper bound on the growth radius once `j` disks have been consumed.
pub fn radius_bound(g: u32, j: u32) -> Result<f64> {
    check_consumed(g, j)?;
    let g = g as f64;
    let remaining = 2.0 * g + 2.0 - j as f64;
    Ok((2.0 * (g - 1.0) / remaining + 1.0).acosh())
}

/// Upper bound on the length of the closed geodesic obtained at a step with `j`
/// consumed disks, after simplifying `arccosh(x) <= log(2x)`.
pub fn alpha_length_bound(g: u32, j: u32) -> Result<f64> {
    check_consumed(g, j)?;
    let g = g as f64;
    let remaining = 2.0 * g + 2.0 - j as f64;
    Ok(4.0 * (4.0 * (g - 1.0) / remaining + 2.0).ln())
}

/// Uniform bound `4 log(4g)` dominating every [`alpha_length_bound`].
pub fn uniform_alpha_bound(g: u32) -> Result<f64> {
    check_genus(g)?;
    Ok(4.0 * (4.0 * g as f64).ln())
}

/// Bavard's refined systole bound for genus `g`.
pub fn bavard_bound(g: u32) -> Result<f64> {
    check_genus(g)?;
    let g = g as f64;
    let s = (PI * (g + 1.0) / (12.0 * g)).sin();
    Ok(4.0 * (1.0 / (2.0 * s)).acosh())
}

/// Genus-independent limit of [`bavard_bound`]: `2 log(3 + 2√3 + 2√(5 + 3√3))`.
pub fn bavard_limit() -> f64 {
    let r3 = 3f64.sqrt();
    2.0 * (3.0 + 2.0 * r3 + 2.0 * (5.0 + 3.0 * r3).sqrt()).ln()
}

/// First-step bound `4 arccosh 2` obtained from the plain area estimate.
pub fn naive_first_step_bound() -> f64 {
    4.0 * 2f64.acosh()
}

/// Number of guaranteed independent short loops, `⌈(2g+2)/3⌉`.
pub fn kappa(g: u32) -> Result<u32> {
    check_genus(g)?;
    Ok((2 * g + 2).div_ceil(3))
}

/// Length bound for the `k`-th selected loop, `1 <= k <= kappa(g)`.
pub fn theorem_bound(g: u32, k: u32) -> Result<f64> {
    let kap = kappa(g)?;
    if k < 1 || k > kap {
        return domain(format!("index k = {k} outside 1..={kap}"));
    }
    let g = g as f64;
    let k = k as f64;
    Ok(4.0 * (12.0 * (g - 1.0) / (2.0 * g + 5.0 - 3.0 * k) + 2.0).ln())
}

/// Largest admissible consumed count for the `k`-th of `kappa(g)` selected arcs.
///
/// Consumed counts strictly increase along the selected arcs and never exceed
/// `2g+1`, so the `k`-th one is at most `2g + 1 - kappa + k`.
pub fn chain_consumed_limit(g: u32, k: u32) -> Result<u32> {
    let kap = kappa(g)?;
    if k < 1 || k > kap {
        return domain(format!("index k = {k} outside 1..={kap}"));
    }
    Ok(2 * g + 1 - kap + k)
}

/// Length bound `N(λ) = 4 log(6/(1-λ) + 2)`.
pub fn n_lambda(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(4.0 * (6.0 / (1.0 - lambda) + 2.0).ln())
}

/// Number of loops `⌈λ·(2/3)·g⌉` covered by [`n_lambda`].
pub fn count_lambda(g: u32, lambda: f64) -> Result<u32> {
    check_genus(g)?;
    check_lambda(lambda)?;
    let x = lambda * 2.0 * g as f64 / 3.0;
    // guard against 3.0000000000000004 style overshoot
    let r = (x - 1e-12).ceil();
    Ok(r.max(1.0) as u32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub k: u32,
    pub j: u32,
    pub radius_bound: f64,
    pub alpha_bound: f64,
    pub theorem_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaRow {
    pub lambda: f64,
    pub count: u32,
    #[serde(rename = "N")]
    pub n: f64,
    pub w: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub genus: u32,
    pub rows: Vec<BoundRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_rows: Option<Vec<LambdaRow>>,
}

impl BoundTable {
    /// Rows for `k = 1..=kappa(g)`, each evaluated at the chain limit of its consumed count.
    pub fn new(g: u32) -> Result<Self> {
        let kap = kappa(g)?;
        let rows = (1..=kap)
            .map(|k| {
                let j = chain_consumed_limit(g, k)?;
                Ok(BoundRow {
                    k,
                    j,
                    radius_bound: radius_bound(g, j)?,
                    alpha_bound: alpha_length_bound(g, j)?,
                    theorem_bound: theorem_bound(g, k)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { genus: g, rows, lambda_rows: None })
    }

    pub fn with_lambdas(mut self, lambdas: &[f64]) -> Result<Self> {
        let rows = lambdas
            .iter()
            .map(|&lambda| {
                let n = n_lambda(lambda)?;
                Ok(LambdaRow {
                    lambda,
                    count: count_lambda(self.genus, lambda)?,
                    n,
                    w: crate::jacobian::collar_width(n)?,
                    d: crate::jacobian::d_lambda(lambda)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.lambda_rows = Some(rows);
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn half_disk_area_values() {
        assert_eq!(half_disk_area(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(half_disk_area(2f64.acosh()).unwrap(), PI, epsilon = 1e-12);
        // mpmath, 30 digits
        assert_abs_diff_eq!(half_disk_area(1.0).unwrap(), 1.706138132642451, epsilon = TOL);
        assert!(half_disk_area(-0.1).is_err());
    }

    #[test]
    fn sphere_area_values() {
        assert_abs_diff_eq!(sphere_area(2).unwrap(), 2.0 * PI, epsilon = TOL);
        assert_abs_diff_eq!(sphere_area(3).unwrap(), 4.0 * PI, epsilon = TOL);
        assert_abs_diff_eq!(sphere_area(10).unwrap(), 18.0 * PI, epsilon = TOL);
        assert!(sphere_area(1).is_err());
    }

    #[test]
    fn radius_bound_values() {
        assert_abs_diff_eq!(radius_bound(2, 0).unwrap(), 0.7953654612239056, epsilon = TOL);
        assert_abs_diff_eq!(radius_bound(2, 2).unwrap(), 0.9624236501192069, epsilon = TOL);
        for g in 2..40 {
            assert!(radius_bound(g, 0).unwrap() < 2f64.acosh());
        }
        assert!(radius_bound(2, 6).is_err());
        assert!(radius_bound(2, 5).is_ok());
    }

    #[test]
    fn alpha_bound_values() {
        assert_abs_diff_eq!(alpha_length_bound(2, 0).unwrap(), 3.923317012046905, epsilon = TOL);
        for g in 2..40 {
            let top = alpha_length_bound(g, 2 * g + 1).unwrap();
            assert_abs_diff_eq!(top, 4.0 * (4.0 * (g as f64 - 1.0) + 2.0).ln(), epsilon = TOL);
            assert!(top <= uniform_alpha_bound(g).unwrap());
        }
        let arccosh_form = 4.0 * radius_bound(2, 0).unwrap();
        assert_abs_diff_eq!(arccosh_form, 3.1814618, epsilon = 1e-6);
        assert!(alpha_length_bound(2, 0).unwrap() >= arccosh_form);
    }

    #[test]
    fn bavard_constants() {
        assert_abs_diff_eq!(bavard_limit(), 5.1067, epsilon = 1e-4);
        assert_abs_diff_eq!(naive_first_step_bound(), 5.2678, epsilon = 1e-4);
        assert_abs_diff_eq!(bavard_bound(2).unwrap(), 3.057141838961996, epsilon = TOL);
        for g in 2..200 {
            assert!(bavard_bound(g).unwrap() < bavard_limit());
        }
    }

    #[test]
    fn kappa_values() {
        assert_eq!(kappa(2).unwrap(), 2);
        assert_eq!(kappa(4).unwrap(), 4);
        assert_eq!(kappa(10).unwrap(), 8);
        assert!(kappa(1).is_err());
    }

    #[test]
    fn theorem_bound_values() {
        assert_abs_diff_eq!(theorem_bound(2, 1).unwrap(), 4.0 * 4f64.ln(), epsilon = TOL);
        assert_abs_diff_eq!(theorem_bound(2, 1).unwrap(), 5.545177444479562, epsilon = TOL);
        assert_abs_diff_eq!(theorem_bound(2, 2).unwrap(), 7.16703787691222, epsilon = TOL);
        assert!(theorem_bound(2, 0).is_err());
        assert!(theorem_bound(2, 3).is_err());
    }

    #[test]
    fn theorem_bound_dominates_chain_limit() {
        for g in 2..=64 {
            for k in 1..=kappa(g).unwrap() {
                let j = chain_consumed_limit(g, k).unwrap();
                assert!(alpha_length_bound(g, j).unwrap() <= theorem_bound(g, k).unwrap() + TOL);
            }
        }
    }

    #[test]
    fn lambda_values() {
        assert_abs_diff_eq!(n_lambda(0.5).unwrap(), 10.556229318461034, epsilon = TOL);
        assert_abs_diff_eq!(n_lambda(1e-12).unwrap(), 8.317766166719343, epsilon = 1e-9);
        assert_eq!(count_lambda(9, 0.5).unwrap(), 3);
        assert_eq!(count_lambda(2, 0.9).unwrap(), 2);
        assert!(n_lambda(0.0).is_err());
        assert!(n_lambda(1.0).is_err());
        assert!(count_lambda(5, f64::NAN).is_err());
    }

    #[test]
    fn table_invariants() {
        for g in 2..=30 {
            let t = BoundTable::new(g).unwrap();
            assert_eq!(t.rows.len() as u32, kappa(g).unwrap());
            for w in t.rows.windows(2) {
                assert!(w[0].k < w[1].k);
                assert!(w[0].radius_bound <= w[1].radius_bound);
                assert!(w[0].alpha_bound <= w[1].alpha_bound);
                assert!(w[0].theorem_bound <= w[1].theorem_bound);
            }
            for r in &t.rows {
                assert!(r.alpha_bound <= uniform_alpha_bound(g).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn arccosh_below_log_double(x in 1.0f64..1e6) {
            prop_assert!(x.acosh() <= (2.0 * x).ln() + 1e-12);
        }

        #[test]
        fn bounds_strictly_increase_in_j(g in 2u32..64, j in 0u32..127) {
            prop_assume!(j < 2 * g + 1);
            prop_assert!(radius_bound(g, j).unwrap() < radius_bound(g, j + 1).unwrap());
            prop_assert!(alpha_length_bound(g, j).unwrap() < alpha_length_bound(g, j + 1).unwrap());
            prop_assert!(alpha_length_bound(g, j).unwrap() <= uniform_alpha_bound(g).unwrap());
        }

        #[test]
        fn theorem_bound_increases_in_k(g in 2u32..64, k in 1u32..44) {
            let kap = kappa(g).unwrap();
            prop_assume!(k < kap);
            prop_assert!(theorem_bound(g, k).unwrap() < theorem_bound(g, k + 1).unwrap());
            prop_assert!(theorem_bound(g, k).unwrap() <= theorem_bound(g, kap).unwrap());
        }

        #[test]
        fn n_lambda_increasing(a in 0.001f64..0.998, d in 0.0001f64..0.001) {
            prop_assert!(n_lambda(a).unwrap() < n_lambda(a + d).unwrap());
        }
    }
}
