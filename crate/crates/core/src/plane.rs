//! Points of the plane with complex arithmetic.
//!
//! A plane point `(x, y)` is the complex number `x + iy`; products, conjugates,
//! moduli and integer powers all come from [`num_complex::Complex64`].

use std::f64::consts::PI;

use num_complex::Complex64;

/// A point of the plane, `x + iy`.
pub type PlanePoint = Complex64;

/// The imaginary unit.
pub const I: PlanePoint = Complex64::new(0.0, 1.0);

#[inline]
pub fn point(x: f64, y: f64) -> PlanePoint {
    Complex64::new(x, y)
}

/// Unit point at angle `theta`.
#[inline]
pub fn unit(theta: f64) -> PlanePoint {
    Complex64::from_polar(1.0, theta)
}

/// `exp(2πi k / n)`, the k-th power of the primitive n-th root of unity.
///
/// The exponent is reduced modulo `n` first so that large or negative `k`
/// land on the same float as their canonical representative.
pub fn root_of_unity(n: usize, k: i64) -> PlanePoint {
    let k = k.rem_euclid(n as i64);
    unit(2.0 * PI * k as f64 / n as f64)
}

/// Normalize an angle to `(-π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Argument of `p` on the canonical branch `(-π, π]`.
pub fn arg(p: PlanePoint) -> f64 {
    normalize_angle(p.arg())
}

/// Distance from `theta` to the nearest multiple of `step`, in `[0, step/2]`.
pub fn angle_offset(theta: f64, step: f64) -> f64 {
    let r = theta.rem_euclid(step);
    r.min(step - r)
}

pub fn to_pair(p: PlanePoint) -> [f64; 2] {
    [p.re, p.im]
}

pub fn from_pair(p: [f64; 2]) -> PlanePoint {
    point(p[0], p[1])
}

/// Parse `"x,y"`.
pub fn parse_point(s: &str) -> Option<PlanePoint> {
    let (x, y) = s.split_once(',')?;
    Some(point(x.trim().parse().ok()?, y.trim().parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn branch_is_half_open() {
        assert_eq!(arg(point(-1.0, -0.0)), PI);
        assert_eq!(arg(point(-1.0, 0.0)), PI);
        assert_eq!(normalize_angle(3.0 * PI), PI);
        assert!((normalize_angle(-3.5 * PI) - 0.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn roots_of_unity_reduce_exponent() {
        assert_eq!(root_of_unity(5, 7), root_of_unity(5, 2));
        assert_eq!(root_of_unity(5, -3), root_of_unity(5, 2));
        let i4 = root_of_unity(4, 1);
        assert!((i4 - I).norm() < 1e-16);
    }

    #[test]
    fn parses_pairs() {
        assert_eq!(parse_point("1.5, -2"), Some(point(1.5, -2.0)));
        assert_eq!(parse_point("1.5"), None);
        assert_eq!(parse_point("a,b"), None);
    }

    fn pt() -> impl Strategy<Value = PlanePoint> {
        (-1e3f64..1e3, -1e3f64..1e3).prop_map(|(x, y)| point(x, y))
    }

    proptest! {
        #[test]
        fn modulus_is_multiplicative(p in pt(), q in pt()) {
            let lhs = (p * q).norm();
            let rhs = p.norm() * q.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.max(f64::MIN_POSITIVE));
        }

        #[test]
        fn conj_is_involution(p in pt()) {
            prop_assert_eq!(p.conj().conj(), p);
        }

        #[test]
        fn modulus_vanishes_only_at_origin(p in pt()) {
            prop_assert!(p.norm() >= 0.0);
            prop_assert_eq!(p.norm() == 0.0, p.re == 0.0 && p.im == 0.0);
        }
    }
}
