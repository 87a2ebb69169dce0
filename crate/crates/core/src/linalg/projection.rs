use crate::error::{Error, Result};

use super::matrix::{axpy, norm_sq, DenseMatrix};

/// Squared norm at or below which a direction is treated as zero.
pub const DEGENERATE_NORM_SQ: f64 = 1e-12;

/// Returns `A (I - a aᵀ / ‖a‖²)`.
///
/// Computed as `A - (A a) aᵀ / ‖a‖²` in `O(LJ)`; the `J x J` projector is
/// never formed.
pub fn project_out_row(a: &DenseMatrix, direction: &[f64]) -> Result<DenseMatrix> {
    let mut out = a.clone();
    project_out_row_in_place(&mut out, direction)?;
    Ok(out)
}

/// In-place form of [`project_out_row`]. `direction` must not alias a row of `a`;
/// use [`project_out_own_row`] for that.
pub fn project_out_row_in_place(a: &mut DenseMatrix, direction: &[f64]) -> Result<()> {
    assert_eq!(
        direction.len(),
        a.cols(),
        "direction length must equal column count"
    );
    let n2 = norm_sq(direction);
    if n2 <= DEGENERATE_NORM_SQ {
        return Err(Error::DegenerateDirection { norm_sq: n2 });
    }
    let y = a.mul_vec(direction);
    for (i, &yi) in y.iter().enumerate() {
        if yi != 0.0 {
            axpy(-yi / n2, direction, a.row_mut(i));
        }
    }
    Ok(())
}

/// Projects every row of `a` onto the orthogonal complement of its own row `i`.
/// Returns the direction that was projected out.
pub fn project_out_own_row(a: &mut DenseMatrix, i: usize) -> Result<Vec<f64>> {
    let direction = a.row(i).to_vec();
    project_out_row_in_place(a, &direction)?;
    Ok(direction)
}
