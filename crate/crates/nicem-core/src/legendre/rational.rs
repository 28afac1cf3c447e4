//! Exact rational arithmetic for the `Δ` quadratic form.
//!
//! Everything with rational inputs is computed over `BigRational` so the
//! negativity certificate does not rest on floating-point roundoff; only the
//! final eigen-solve of [`super::delta_form_spectrum`] is floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().expect("rational representable as f64")
}

/// Gram matrix of the basis `b_m = L_m + L_{m-1}`, `m = 1..=p` (tridiagonal):
/// `⟨b_m, b_m⟩ = 2/(2m+1) + 2/(2m-1)`, `⟨b_m, b_{m+1}⟩ = 2/(2m+1)`.
pub fn gram_matrix(p: usize) -> Vec<Vec<BigRational>> {
    let mut g = vec![vec![BigRational::zero(); p]; p];
    for i in 0..p {
        let m = (i + 1) as i64;
        g[i][i] = frac(2, 2 * m + 1) + frac(2, 2 * m - 1);
        if i + 1 < p {
            g[i][i + 1] = frac(2, 2 * m + 1);
            g[i + 1][i] = frac(2, 2 * m + 1);
        }
    }
    g
}

/// Matrix `D` with `Δ(η) = ηᵀ D η` in the `b_m` coordinates:
/// `D = a aᵀ + p² (-4 G + 9/(2p+1) e_p e_pᵀ)` where `aᵀη = 2η(1) - 3η_p`,
/// i.e. `a_m = 4` for `m < p` and `a_p = 1`.
pub fn delta_form_matrix(p: usize) -> Vec<Vec<BigRational>> {
    let g = gram_matrix(p);
    let psq = int((p * p) as i64);
    let a: Vec<BigRational> = (0..p)
        .map(|i| if i + 1 < p { int(4) } else { int(1) })
        .collect();
    let mut d = vec![vec![BigRational::zero(); p]; p];
    for i in 0..p {
        for j in 0..p {
            d[i][j] = &a[i] * &a[j] - int(4) * &psq * &g[i][j];
        }
    }
    d[p - 1][p - 1] += &psq * frac(9, 2 * p as i64 + 1);
    d
}

/// `Δ(η)` evaluated exactly for rational `(η_1, ..., η_p)`.
pub fn delta_of_eta(eta: &[BigRational]) -> BigRational {
    let p = eta.len();
    let d = delta_form_matrix(p);
    let mut acc = BigRational::zero();
    for i in 0..p {
        for j in 0..p {
            acc += &eta[i] * &d[i][j] * &eta[j];
        }
    }
    acc
}

/// Closed-form discriminant for the first eigenvector branch,
/// `16 (p² - 13p - 8)(p - 1) p³ / (2p + 1)`; negative exactly for
/// `2 <= p <= 13`, positive from `p = 14` on.
pub fn case1_discriminant(p: usize) -> BigRational {
    assert!(p >= 2, "the first branch needs p >= 2");
    let pi = p as i64;
    int(16) * int(pi * pi - 13 * pi - 8) * int(pi - 1) * int(pi).pow(3) / int(2 * pi + 1)
}

/// Closed-form value on the second eigenvector branch,
/// `-4 (p - 1) p² (p² + 1) / (p + 1)`.
pub fn case2_value(p: usize) -> BigRational {
    assert!(p >= 2, "the second branch needs p >= 2");
    let pi = p as i64;
    int(-4) * int(pi - 1) * int(pi * pi) * int(pi * pi + 1) / int(pi + 1)
}

/// Legendre coefficients of `L'_m`: `L'_m = Σ (2k+1) L_k` over
/// `k = m-1, m-3, ...` (down to 0 or 1).
pub fn legendre_prime_coeffs(m: usize) -> Vec<BigRational> {
    let mut c = vec![BigRational::zero(); m.max(1)];
    let mut k = m as i64 - 1;
    while k >= 0 {
        c[k as usize] = int(2 * k + 1);
        k -= 2;
    }
    c
}

/// The explicit maximizer of the second branch,
/// `η = (p-1)/(p+1) L'_p + L'_{p-1}`, as exact `b_m` coordinates.
/// Satisfies `η(-1) = 0` identically.
pub fn case2_eta(p: usize) -> Vec<BigRational> {
    assert!(p >= 2);
    let lambda2 = frac(p as i64 - 1, p as i64 + 1);
    let dp = legendre_prime_coeffs(p);
    let dpm1 = legendre_prime_coeffs(p - 1);
    // Legendre coefficients c_0..c_p (c_p = 0: the combination has degree p-1).
    let mut c = vec![BigRational::zero(); p + 1];
    for (k, v) in dp.iter().enumerate() {
        c[k] += &lambda2 * v;
    }
    for (k, v) in dpm1.iter().enumerate() {
        c[k] += v;
    }
    // Back-substitute into the b_m basis.
    let mut eta = vec![BigRational::zero(); p];
    eta[p - 1] = c[p].clone();
    for m in (1..p).rev() {
        eta[m - 1] = &c[m] - &eta[m];
    }
    debug_assert_eq!(eta[0], c[0], "η(-1) = 0 consistency");
    eta
}

/// Discriminant `b² - 4ac` of `Δ` read as a binary quadratic
/// `a η₁² + b η₁η₂ + c η₂²` (only defined for `p = 2`).
pub fn binary_quadratic_discriminant_p2() -> BigRational {
    let d = delta_form_matrix(2);
    let a = d[0][0].clone();
    let b = int(2) * d[0][1].clone();
    let c = d[1][1].clone();
    &b * &b - int(4) * a * c
}

/// Sign of a rational: -1, 0 or 1.
pub fn sign(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case1_values_and_sign_flip() {
        assert_eq!(case1_discriminant(2), int(-768));
        for p in 2..=13 {
            assert_eq!(sign(&case1_discriminant(p)), -1, "p={p}");
        }
        assert_eq!(sign(&case1_discriminant(14)), 1);
        assert_eq!(sign(&case1_discriminant(20)), 1);
    }

    #[test]
    fn case2_hand_values() {
        assert_eq!(case2_value(2), frac(-80, 3));
        assert_eq!(case2_value(3), int(-180));
    }

    #[test]
    fn case2_eta_matches_delta_exactly() {
        for p in 2..=13 {
            let eta = case2_eta(p);
            assert_eq!(delta_of_eta(&eta), case2_value(p), "p={p}");
        }
    }

    #[test]
    fn delta_form_p2_coefficients() {
        let d = delta_form_matrix(2);
        assert_eq!(d[0][0], frac(-80, 3));
        assert_eq!(int(2) * d[0][1].clone(), frac(-40, 3));
        assert_eq!(d[1][1], frac(-133, 15));
    }

    #[test]
    fn binary_discriminant_p2_is_minus_768() {
        // Matches the general case-1 formula at p = 2.
        assert_eq!(binary_quadratic_discriminant_p2(), int(-768));
        assert_eq!(binary_quadratic_discriminant_p2(), case1_discriminant(2));
    }

    #[test]
    fn prime_coeffs_low_orders() {
        // L'_1 = L_0, L'_2 = 3 L_1, L'_3 = 5 L_2 + L_0.
        assert_eq!(legendre_prime_coeffs(1), vec![int(1)]);
        assert_eq!(legendre_prime_coeffs(2), vec![int(0), int(3)]);
        assert_eq!(legendre_prime_coeffs(3), vec![int(1), int(0), int(5)]);
    }

    #[test]
    fn gram_matches_float_norms() {
        let g = gram_matrix(4);
        for i in 0..4 {
            let m = i + 1;
            let expect = 2.0 / (2.0 * m as f64 + 1.0) + 2.0 / (2.0 * m as f64 - 1.0);
            assert!((to_f64(&g[i][i]) - expect).abs() < 1e-15);
        }
    }
}
