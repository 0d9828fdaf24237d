use crate::error::{Error, Result};

/// The three constant solutions of `m = tanh(β(m + a))`, ordered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibria {
    pub m_minus: f64,
    pub m_zero: f64,
    pub m_plus: f64,
}

/// `a₀(β) = m_c − artanh(m_c)/β` with `m_c = √(1 − 1/β)`: three constant
/// solutions exist exactly for `|a| < a₀`.
pub fn triple_root_threshold(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let mc = (1.0 - 1.0 / beta).sqrt();
    Ok(mc - mc.atanh() / beta)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 1.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta must exceed 1, got {beta}")));
    }
    Ok(())
}

/// Roots of `artanh(m)/β − m − a` by bisection on the three monotone
/// branches separated by `±√(1 − 1/β)`.
pub fn equilibria(beta: f64, a: f64) -> Result<Equilibria> {
    check_beta(beta)?;
    if !a.is_finite() {
        return Err(Error::InvalidParameter(format!("forcing must be finite, got {a}")));
    }
    let f = |m: f64| m.atanh() / beta - m - a;
    // m_minus(a) = −m_plus(−a); solving both on the positive branch keeps the
    // symmetry exact
    let g = |m: f64| m.atanh() / beta - m + a;
    let mc = (1.0 - 1.0 / beta).sqrt();
    let edge = 1.0 - f64::EPSILON;
    if a.abs() >= triple_root_threshold(beta)? {
        // f is increasing outside [−m_c, m_c] and the single root sits there
        let root = if a > 0.0 {
            bisect(&f, mc, edge)
        } else {
            -bisect(&g, mc, edge)
        };
        return Err(Error::NoTripleRoot { beta, a, root });
    }
    Ok(Equilibria {
        m_minus: -bisect(&g, mc, edge),
        m_zero: bisect(&f, -mc, mc),
        m_plus: bisect(&f, mc, edge),
    })
}

/// Bisection on a bracket where `f` changes sign, run to floating-point
/// resolution. Midpoints are evaluated first, so a root at the exact centre
/// of a symmetric bracket is returned exactly.
fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_one_point_two() {
        let e = equilibria(1.2, 0.0).unwrap();
        assert!((e.m_plus - 0.6585).abs() < 5e-4, "{}", e.m_plus);
        assert_eq!(e.m_zero, 0.0);
        assert_eq!(e.m_minus, -e.m_plus);
    }

    #[test]
    fn beta_two_regression() {
        // bisection oracle for m = tanh(2m), computed independently
        let mut lo = 0.5f64;
        let mut hi = 1.0f64;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if (2.0 * mid).tanh() - mid > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let e = equilibria(2.0, 0.0).unwrap();
        assert!((e.m_plus - lo).abs() < 1e-10);
        assert!((e.m_plus - 0.957_504_024_077_268_6).abs() < 1e-10);
        assert_eq!(e.m_zero, 0.0);
    }

    #[test]
    fn roots_satisfy_the_fixed_point_equation() {
        for (beta, a) in [(1.2, 0.01), (1.5, -0.05), (3.0, 0.2)] {
            let e = equilibria(beta, a).unwrap();
            assert!(e.m_minus < e.m_zero && e.m_zero < e.m_plus);
            for m in [e.m_minus, e.m_zero, e.m_plus] {
                assert!((m - (beta * (m + a)).tanh()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn large_forcing_has_a_single_root() {
        let a0 = triple_root_threshold(1.2).unwrap();
        match equilibria(1.2, 1.1 * a0) {
            Err(Error::NoTripleRoot { root, .. }) => {
                assert!(root > 0.0 && (root - (1.2 * (root + 1.1 * a0)).tanh()).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(equilibria(1.2, -2.0), Err(Error::NoTripleRoot { .. })));
        assert!(equilibria(1.2, 0.9 * a0).is_ok());
        assert!(equilibria(1.0, 0.0).is_err());
    }
}
