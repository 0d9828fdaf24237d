//! Finite-difference forms of `X1 = ∂1 − (x2/2)∂3`, `X2 = ∂2 + (x1/2)∂3`,
//! `X3 = ∂3` and of the sub-Laplacian `Δ_H = X1² + X2²`.

use rayon::prelude::*;

use super::grid::ScalarField;
use crate::error::{Error, Result};

/// One of the left-invariant frame fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorField {
    X1,
    X2,
    X3,
}

impl TryFrom<u8> for VectorField {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(VectorField::X1),
            2 => Ok(VectorField::X2),
            3 => Ok(VectorField::X3),
            _ => Err(Error::InvalidParameter(format!("no vector field X{v}"))),
        }
    }
}

/// Centered second-order value of `X u` at node `(i, j, k)`.
pub fn apply_x(field: &ScalarField, which: VectorField, index: [isize; 3]) -> Result<f64> {
    let [i, j, k] = index;
    field.try_get(i, j, k)?;
    let g = &field.grid;
    let [h1, h2, h3] = g.spacing;
    let d3 = (field.at(i, j, k + 1) - field.at(i, j, k - 1)) / (2.0 * h3);
    Ok(match which {
        VectorField::X1 => {
            let d1 = (field.at(i + 1, j, k) - field.at(i - 1, j, k)) / (2.0 * h1);
            d1 - 0.5 * g.coord(1, j) * d3
        }
        VectorField::X2 => {
            let d2 = (field.at(i, j + 1, k) - field.at(i, j - 1, k)) / (2.0 * h2);
            d2 + 0.5 * g.coord(0, i) * d3
        }
        VectorField::X3 => d3,
    })
}

/// `Δ_H u` in expanded coordinates,
/// `∂11 + ∂22 + ((x1²+x2²)/4)∂33 + x1 ∂23 − x2 ∂13`,
/// with centered differences and centered cross stencils. Exact on
/// polynomials of degree ≤ 2 in each stencil direction.
pub fn horizontal_laplacian(field: &ScalarField) -> ScalarField {
    let g = &field.grid;
    let [_, n2, n3] = g.dims;
    let [h1, h2, h3] = g.spacing;
    let (c11, c22, c33) = (1.0 / (h1 * h1), 1.0 / (h2 * h2), 1.0 / (h3 * h3));
    let (c13, c23) = (1.0 / (4.0 * h1 * h3), 1.0 / (4.0 * h2 * h3));
    let mut out = vec![0.0; g.len()];
    out.par_chunks_mut(n3).enumerate().for_each(|(col, slab)| {
        let (i, j) = ((col / n2) as isize, (col % n2) as isize);
        let x1 = g.coord(0, i);
        let x2 = g.coord(1, j);
        let a33 = 0.25 * (x1 * x1 + x2 * x2);
        for (k, o) in slab.iter_mut().enumerate() {
            let k = k as isize;
            let u = field.at(i, j, k);
            let u11 = (field.at(i + 1, j, k) - 2.0 * u + field.at(i - 1, j, k)) * c11;
            let u22 = (field.at(i, j + 1, k) - 2.0 * u + field.at(i, j - 1, k)) * c22;
            let u33 = (field.at(i, j, k + 1) - 2.0 * u + field.at(i, j, k - 1)) * c33;
            let u13 = (field.at(i + 1, j, k + 1) - field.at(i + 1, j, k - 1) - field.at(i - 1, j, k + 1)
                + field.at(i - 1, j, k - 1))
                * c13;
            let u23 = (field.at(i, j + 1, k + 1) - field.at(i, j + 1, k - 1) - field.at(i, j - 1, k + 1)
                + field.at(i, j - 1, k - 1))
                * c23;
            *o = u11 + u22 + a33 * u33 + x1 * u23 - x2 * u13;
        }
    });
    field.with_values(out).map_far_field_to_zero()
}

/// Monotone sub-Laplacian built from second differences along the
/// horizontal lines through each node,
///
/// `Σ_i [u(x∘h_i e_i) − 2u(x) + u(x∘(−h_i e_i))] / h_i²`,  i = 1, 2.
///
/// The line `s ↦ x∘(s e_1)` is the integral curve of `X1`, so each second
/// difference is second-order accurate for `X_i² u`. The neighbours are off
/// the grid only in `x3`, where they are read by linear interpolation; all
/// weights are nonnegative, so an explicit step with
/// `dt (2/h1² + 2/h2²) ≤ 1` satisfies the discrete maximum principle.
/// The interpolation error adds vertical diffusion of at most
/// `(h3/h_i)²/4`, and vanishes when `h1 h2 / (2 h3)` is an integer.
pub fn monotone_sub_laplacian(field: &ScalarField) -> ScalarField {
    let out = monotone_sub_laplacian_values(field, 1.0, false);
    field.with_values(out).map_far_field_to_zero()
}

/// `center_weight · u + scale · L_h u` where `L_h` is [`monotone_sub_laplacian`].
/// With `add_identity`, the centre term is `u`; otherwise it is omitted.
pub(crate) fn monotone_sub_laplacian_values(field: &ScalarField, scale: f64, add_identity: bool) -> Vec<f64> {
    let g = &field.grid;
    let [_, n2, n3] = g.dims;
    let [h1, h2, h3] = g.spacing;
    let (w1, w2) = (scale / (h1 * h1), scale / (h2 * h2));
    let center = if add_identity { 1.0 } else { 0.0 } - 2.0 * (w1 + w2);
    let mut out = vec![0.0; g.len()];
    out.par_chunks_mut(n3).enumerate().for_each(|(col, slab)| {
        let (i, j) = ((col / n2) as isize, (col % n2) as isize);
        let x1 = g.coord(0, i);
        let x2 = g.coord(1, j);
        // x∘(±h1,0,0) = (x1 ± h1, x2, x3 ∓ x2 h1/2); x∘(0,±h2,0) = (x1, x2 ± h2, x3 ± x1 h2/2)
        let s1 = 0.5 * x2 * h1 / h3;
        let s2 = 0.5 * x1 * h2 / h3;
        field.add_column_taps(i, j, 0, &[center], slab);
        field.add_shifted_column(i + 1, j, -s1, w1, slab);
        field.add_shifted_column(i - 1, j, s1, w1, slab);
        field.add_shifted_column(i, j + 1, s2, w2, slab);
        field.add_shifted_column(i, j - 1, -s2, w2, slab);
    });
    out
}

impl ScalarField {
    /// Far-field constants of a derivative field are zero.
    fn map_far_field_to_zero(mut self) -> ScalarField {
        for b in self.boundary.iter_mut() {
            if let super::Boundary::FarField { .. } = b {
                *b = super::Boundary::FarField { low: 0.0, high: 0.0 };
            }
        }
        self
    }
}
