//! Exact arithmetic in `Q` viewed inside `Q_p`: scalars with valuations,
//! matrices, canonical forms over `Z_(p)`, and Newton polygons.

mod echelon;
mod matrix;
mod newton;
mod parse;
mod scalar;

pub use echelon::{echelon_localized, is_local_unit_matrix, smith_exponents};
pub(crate) use echelon::hermite_columns;
pub use matrix::PMatrix;
pub use newton::{newton_slopes, NewtonPolygon, Segment};
pub use parse::{parse_entry, parse_grid, parse_matrix};
pub use scalar::{PScalar, Prime, Valuation};

/// Valuation of a scalar; `Valuation::Infinite` exactly for zero.
pub fn val(x: &PScalar, p: Prime) -> Valuation {
    x.val(p)
}
