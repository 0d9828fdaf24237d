use super::{group_mul, GroupPoint};

/// A function on H¹ together with its exact horizontal derivatives.
pub trait HorizontalJet {
    fn value(&self, x: GroupPoint) -> f64;
    /// `(X1 u, X2 u)`.
    fn horizontal_gradient(&self, x: GroupPoint) -> [f64; 2];
    /// `∂u/∂x3`.
    fn vertical_derivative(&self, x: GroupPoint) -> f64;
    /// `[[X1X1 u, X1X2 u], [X2X1 u, X2X2 u]]`, not symmetrized.
    fn horizontal_hessian(&self, x: GroupPoint) -> [[f64; 2]; 2];

    fn symmetric_horizontal_hessian(&self, x: GroupPoint) -> [[f64; 2]; 2] {
        let h = self.horizontal_hessian(x);
        let off = 0.5 * (h[0][1] + h[1][0]);
        [[h[0][0], off], [off, h[1][1]]]
    }

    /// Euclidean gradient recovered from the frame: `∂1 = X1 + (x2/2)∂3`, `∂2 = X2 − (x1/2)∂3`.
    fn euclidean_gradient(&self, x: GroupPoint) -> [f64; 3] {
        let [g1, g2] = self.horizontal_gradient(x);
        let d3 = self.vertical_derivative(x);
        [g1 + 0.5 * x.x2 * d3, g2 - 0.5 * x.x1 * d3, d3]
    }
}

/// Remainder of the second-order horizontal Taylor expansion,
/// `u(x0∘x) − [u(x0) + ⟨∇_H u(x0), x̄⟩ + ∂3u(x0) x3 + ½ x̄ᵀ (D²_H u(x0))* x̄]`.
pub fn taylor_residual<U: HorizontalJet + ?Sized>(u: &U, x0: GroupPoint, x: GroupPoint) -> f64 {
    let g = u.horizontal_gradient(x0);
    let h = u.symmetric_horizontal_hessian(x0);
    let (a, b) = (x.x1, x.x2);
    let quad = h[0][0] * a * a + 2.0 * h[0][1] * a * b + h[1][1] * b * b;
    let model = u.value(x0) + g[0] * a + g[1] * b + u.vertical_derivative(x0) * x.x3 + 0.5 * quad;
    u.value(group_mul(x0, x)) - model
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dilate, gauge_norm};

    struct Linear;
    impl HorizontalJet for Linear {
        fn value(&self, x: GroupPoint) -> f64 {
            2.0 + 3.0 * x.x1 - x.x2 + 0.5 * x.x3
        }
        fn horizontal_gradient(&self, x: GroupPoint) -> [f64; 2] {
            [3.0 - 0.25 * x.x2, -1.0 + 0.25 * x.x1]
        }
        fn vertical_derivative(&self, _: GroupPoint) -> f64 {
            0.5
        }
        fn horizontal_hessian(&self, _: GroupPoint) -> [[f64; 2]; 2] {
            // X1(−1 + x1/4) = 1/4, X2(3 − x2/4) = −1/4
            [[0.0, 0.25], [-0.25, 0.0]]
        }
    }

    struct Product;
    impl HorizontalJet for Product {
        fn value(&self, x: GroupPoint) -> f64 {
            x.x1 * x.x2
        }
        fn horizontal_gradient(&self, x: GroupPoint) -> [f64; 2] {
            [x.x2, x.x1]
        }
        fn vertical_derivative(&self, _: GroupPoint) -> f64 {
            0.0
        }
        fn horizontal_hessian(&self, _: GroupPoint) -> [[f64; 2]; 2] {
            [[0.0, 1.0], [1.0, 0.0]]
        }
    }

    /// `‖x‖⁴ = (x1²+x2²)² + 16 x3²`.
    struct GaugeFourth;
    impl HorizontalJet for GaugeFourth {
        fn value(&self, x: GroupPoint) -> f64 {
            gauge_norm(x).powi(4)
        }
        fn horizontal_gradient(&self, x: GroupPoint) -> [f64; 2] {
            let r2 = x.rho2();
            [
                4.0 * x.x1 * r2 - 16.0 * x.x2 * x.x3,
                4.0 * x.x2 * r2 + 16.0 * x.x1 * x.x3,
            ]
        }
        fn vertical_derivative(&self, x: GroupPoint) -> f64 {
            32.0 * x.x3
        }
        fn horizontal_hessian(&self, x: GroupPoint) -> [[f64; 2]; 2] {
            let r2 = x.rho2();
            let (a, b, c) = (x.x1, x.x2, x.x3);
            [
                [
                    4.0 * r2 + 8.0 * a * a + 8.0 * b * b,
                    8.0 * a * b + 16.0 * c - 8.0 * a * b,
                ],
                [
                    8.0 * a * b - 16.0 * c - 8.0 * a * b,
                    4.0 * r2 + 8.0 * b * b + 8.0 * a * a,
                ],
            ]
        }
    }

    /// `sin(x1) e^{x2} + cos(x3)`, smooth and non-polynomial.
    struct Smooth;
    impl HorizontalJet for Smooth {
        fn value(&self, x: GroupPoint) -> f64 {
            x.x1.sin() * x.x2.exp() + x.x3.cos()
        }
        fn horizontal_gradient(&self, x: GroupPoint) -> [f64; 2] {
            let d3 = -x.x3.sin();
            [
                x.x1.cos() * x.x2.exp() - 0.5 * x.x2 * d3,
                x.x1.sin() * x.x2.exp() + 0.5 * x.x1 * d3,
            ]
        }
        fn vertical_derivative(&self, x: GroupPoint) -> f64 {
            -x.x3.sin()
        }
        fn horizontal_hessian(&self, x: GroupPoint) -> [[f64; 2]; 2] {
            let (s1, c1, e2) = (x.x1.sin(), x.x1.cos(), x.x2.exp());
            let (s3, c3) = (x.x3.sin(), x.x3.cos());
            let (a, b) = (x.x1, x.x2);
            // X1 u = c1 e2 + (b/2) s3, X2 u = s1 e2 − (a/2) s3
            let x1x1 = -s1 * e2 - 0.5 * b * (0.5 * b * c3);
            let x2x2 = s1 * e2 + 0.5 * a * (-0.5 * a * c3);
            let x1x2 = c1 * e2 - 0.5 * s3 - 0.5 * b * (-0.5 * a * c3);
            let x2x1 = c1 * e2 + 0.5 * s3 + 0.5 * a * (0.5 * b * c3);
            [[x1x1, x1x2], [x2x1, x2x2]]
        }
    }

    fn slope(f: impl Fn(f64) -> f64) -> f64 {
        let s: [f64; 3] = [0.1, 0.05, 0.025];
        let (lx, ly): (Vec<f64>, Vec<f64>) = s.iter().map(|&s| (s.ln(), f(s).abs().ln())).unzip();
        let (mx, my) = (lx.iter().sum::<f64>() / 3.0, ly.iter().sum::<f64>() / 3.0);
        let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
        num / den
    }

    #[test]
    fn linear_functions_have_zero_remainder() {
        let x0 = GroupPoint::new(0.3, -1.2, 0.7);
        for x in [GroupPoint::new(0.1, 0.2, -0.3), GroupPoint::new(-1.0, 2.0, 0.5)] {
            assert!(taylor_residual(&Linear, x0, x).abs() < 1e-13);
        }
    }

    #[test]
    fn product_expansion_is_exact() {
        // u = x1 x2 is reproduced exactly by the second-order model
        let x0 = GroupPoint::new(0.8, -0.4, 1.5);
        let dir = GroupPoint::new(0.6, 0.8, 0.3);
        for s in [0.1, 0.05, 0.025] {
            let x = dilate(s / gauge_norm(dir), dir);
            assert!(taylor_residual(&Product, x0, x).abs() < 1e-14);
        }
    }

    #[test]
    fn gauge_fourth_remainder_matches_hand_expansion() {
        // at x0 = (1,0,0): u(x0∘x) − model = 4 x1 ρ² + ρ⁴ + 16 x3² + 16 x2 x3
        let x0 = GroupPoint::new(1.0, 0.0, 0.0);
        for x in [
            GroupPoint::new(0.1, -0.2, 0.05),
            GroupPoint::new(-0.3, 0.4, -0.2),
            GroupPoint::new(0.01, 0.02, 0.003),
        ] {
            let r2 = x.rho2();
            let exact = 4.0 * x.x1 * r2 + r2 * r2 + 16.0 * x.x3 * x.x3 + 16.0 * x.x2 * x.x3;
            assert!((taylor_residual(&GaugeFourth, x0, x) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn smooth_remainder_is_higher_order() {
        let x0 = GroupPoint::new(0.4, -0.3, 0.9);
        for dir in [
            GroupPoint::new(0.6, 0.8, 0.3),
            GroupPoint::new(-1.0, 0.2, -0.4),
            GroupPoint::new(0.1, -0.7, 0.9),
        ] {
            let k = slope(|s| taylor_residual(&Smooth, x0, dilate(s / gauge_norm(dir), dir)));
            assert!(k >= 1.8, "empirical order {k}");
        }
    }
}
