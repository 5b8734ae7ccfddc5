//! Roots of unity, the sums `t_u`, and the beta function used to normalise
//! the holomorphic forms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::curve::Genus;
use crate::error::Result;

/// `zeta^k` with `zeta = exp(2 pi i / (2g+2))`; `k` may be negative.
pub fn zeta_pow(g: Genus, k: i64) -> Complex64 {
    let n = g.branch_count() as i64;
    let r = k.rem_euclid(n);
    // Exact values on the axes keep cancellations in later sums clean.
    if 4 * r % n == 0 {
        return match 4 * r / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
}

/// `t_u = sum_{p=1}^{g} zeta^(u p)`, by cases: `g` when `u` is a multiple of
/// `2g+2`, `-1` for other even `u`, `(1 + zeta^u)/(1 - zeta^u)` for odd `u`.
pub fn t_u(g: Genus, u: i64) -> Complex64 {
    let n = g.branch_count() as i64;
    let r = u.rem_euclid(n);
    if r == 0 {
        Complex64::new(g.get() as f64, 0.0)
    } else if r % 2 == 0 {
        Complex64::new(-1.0, 0.0)
    } else {
        let z = zeta_pow(g, r);
        (1.0 + z) / (1.0 - z)
    }
}

pub fn t_u_direct(g: Genus, u: i64) -> Complex64 {
    (1..=g.get() as i64).map(|p| zeta_pow(g, u * p)).sum()
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// log Gamma(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs a positive argument, got {x}");
    if x < 0.5 {
        // Reflection keeps the Lanczos sum in its accurate range.
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + k as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

pub fn beta(a: f64, b: f64) -> f64 {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

/// `B(i/(2g+2), 1/2)` for `1 <= i <= g`.
pub fn beta_half(g: Genus, i: usize) -> Result<f64> {
    g.check_form_index(i)?;
    Ok(beta(i as f64 / g.branch_count() as f64, 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::TanhSinh;
    use crate::tolerances::{BETA_RELATIVE, TU_CASES, ZETA_UNIT};

    #[test]
    fn zeta_is_unit_and_periodic() {
        for gi in 3..=12 {
            let g = Genus::new(gi).unwrap();
            let n = g.branch_count() as i64;
            for k in -3 * n..3 * n {
                let z = zeta_pow(g, k);
                assert!((z.norm() - 1.0).abs() < ZETA_UNIT);
                assert!((z - zeta_pow(g, k + n)).norm() < ZETA_UNIT);
                assert!((z * zeta_pow(g, -k) - 1.0).norm() < ZETA_UNIT);
            }
        }
    }

    #[test]
    fn t_u_cases_match_direct_sum() {
        for gi in 3..=12 {
            let g = Genus::new(gi).unwrap();
            let n = g.branch_count() as i64;
            for u in -2 * n..=2 * n {
                let err = (t_u(g, u) - t_u_direct(g, u)).norm();
                assert!(err < TU_CASES, "g={gi} u={u} err={err}");
            }
        }
    }

    #[test]
    fn gamma_known_values() {
        assert!(ln_gamma(1.0).abs() < 1e-15);
        assert!(ln_gamma(2.0).abs() < 1e-15);
        assert!((ln_gamma(0.5) - 0.5 * PI.ln()).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn gamma_reflection() {
        for k in 1..40 {
            let x = k as f64 / 40.0;
            let lhs = ln_gamma(x) + ln_gamma(1.0 - x);
            let rhs = (PI / (PI * x).sin()).ln();
            assert!((lhs - rhs).abs() < BETA_RELATIVE * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn beta_half_against_integral() {
        let ts = TanhSinh::new(10, 1e-12);
        for gi in [3, 7, 12] {
            let g = Genus::new(gi).unwrap();
            for i in 1..=gi as usize {
                let a = i as f64 / g.branch_count() as f64;
                // B(a, 1/2) = int_0^1 x^(a-1) (1-x)^(-1/2) dx, with exact end gaps.
                let q = ts
                    .integrate(0.0, 1.0, |n| {
                        Complex64::new(n.from_a.powf(a - 1.0) / n.to_b.sqrt(), 0.0)
                    })
                    .unwrap();
                let b = beta_half(g, i).unwrap();
                assert!(((q.value.re - b) / b).abs() < BETA_RELATIVE, "g={gi} i={i}");
            }
        }
        let g = Genus::new(3).unwrap();
        assert!(beta_half(g, 0).is_err());
        assert!(beta_half(g, 4).is_err());
    }
}
