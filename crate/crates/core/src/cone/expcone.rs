//! Barrier calculus for the exponential cone
//! `K = cl{(x, y, z) : y exp(x / y) <= z, y > 0}` and its dual
//! `K* = cl{(u, v, w) : u < 0, -u exp(v / u) <= e w}`.

use nalgebra::{Matrix3, Vector3};

/// A point of the primal interior on the central ray: `s = -g(s)`.
pub const CENTRAL: [f64; 3] = [
    -0.827_838_399_065_678_6,
    0.805_102_001_584_795_4,
    1.290_927_709_856_958,
];

pub fn in_primal_interior(s: &[f64]) -> bool {
    let (x, y, z) = (s[0], s[1], s[2]);
    if !(y > 0.0 && z > 0.0) {
        return false;
    }
    let psi = y * (z / y).ln() - x;
    psi > 0.0 && psi.is_finite()
}

pub fn in_dual_interior(d: &[f64]) -> bool {
    let (u, v, w) = (d[0], d[1], d[2]);
    if !(u < 0.0 && w > 0.0) {
        return false;
    }
    // log(-u) + v/u < 1 + log(w), rearranged to avoid overflow of exp
    let lhs = (-u).ln() + v / u;
    let rhs = 1.0 + w.ln();
    lhs.is_finite() && rhs.is_finite() && lhs < rhs
}

/// Gradient of `F(s) = -log(y log(z/y) - x) - log y - log z`.
pub fn gradient(s: &[f64]) -> Vector3<f64> {
    let (x, y, z) = (s[0], s[1], s[2]);
    let l = (z / y).ln();
    let psi = y * l - x;
    let dpsi = Vector3::new(-1.0, l - 1.0, y / z);
    -dpsi / psi - Vector3::new(0.0, 1.0 / y, 1.0 / z)
}

pub fn hessian(s: &[f64]) -> Matrix3<f64> {
    let (x, y, z) = (s[0], s[1], s[2]);
    let l = (z / y).ln();
    let psi = y * l - x;
    let dpsi = Vector3::new(-1.0, l - 1.0, y / z);
    let d2psi = Matrix3::new(
        0.0,
        0.0,
        0.0,
        0.0,
        -1.0 / y,
        1.0 / z,
        0.0,
        1.0 / z,
        -y / (z * z),
    );
    let mut h = dpsi * dpsi.transpose() / (psi * psi) - d2psi / psi;
    h[(1, 1)] += 1.0 / (y * y);
    h[(2, 2)] += 1.0 / (z * z);
    h
}

/// Local norm `|| z / mu + g(s) ||` measured in `H(s)^{-1}`.
pub fn proximity(s: &[f64], z: &[f64], mu: f64) -> f64 {
    let g = gradient(s);
    let r = Vector3::new(z[0] / mu, z[1] / mu, z[2] / mu) + g;
    match hessian(s).cholesky() {
        Some(ch) => r.dot(&ch.solve(&r)).max(0.0).sqrt(),
        None => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_point_is_self_dual() {
        let g = gradient(&CENTRAL);
        for k in 0..3 {
            assert!((g[k] + CENTRAL[k]).abs() < 1e-12, "component {k}");
        }
        assert!(in_primal_interior(&CENTRAL));
        assert!(in_dual_interior(&CENTRAL));
        assert!(proximity(&CENTRAL, &CENTRAL, 1.0) < 1e-10);
    }

    #[test]
    fn membership() {
        assert!(in_primal_interior(&[0.0, 1.0, 1.5]));
        assert!(!in_primal_interior(&[0.0, 1.0, 0.9]));
        assert!(!in_primal_interior(&[0.0, -1.0, 1.0]));
        assert!(in_dual_interior(&[-1.0, 0.0, 1.0]));
        assert!(!in_dual_interior(&[-1.0, 0.0, 0.3]));
        assert!(!in_dual_interior(&[1.0, 0.0, 1.0]));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let f = |s: &[f64]| -> f64 {
            let psi = s[1] * (s[2] / s[1]).ln() - s[0];
            -psi.ln() - s[1].ln() - s[2].ln()
        };
        let s = [0.3, 0.7, 2.1];
        let g = gradient(&s);
        let h = hessian(&s);
        let eps = 1e-6;
        for k in 0..3 {
            let mut p = s;
            let mut m = s;
            p[k] += eps;
            m[k] -= eps;
            let fd = (f(&p) - f(&m)) / (2.0 * eps);
            assert!((fd - g[k]).abs() < 1e-6);
            let gp = gradient(&p);
            let gm = gradient(&m);
            for j in 0..3 {
                let fd2 = (gp[j] - gm[j]) / (2.0 * eps);
                assert!((fd2 - h[(j, k)]).abs() < 1e-5);
            }
        }
        // logarithmic homogeneity: <g(s), s> = -3
        let dot: f64 = (0..3).map(|k| g[k] * s[k]).sum();
        assert!((dot + 3.0).abs() < 1e-12);
    }
}
