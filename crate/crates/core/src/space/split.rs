use crate::error::{Error, Result};

/// Splits an interface flux `g` into `(p, d) = (-min(g, 0), max(g, 0))`.
///
/// `d` is destruction of the left cell and production of the right one,
/// `p` the reverse.
pub fn split_interface_flux(g: f64) -> Result<(f64, f64)> {
    if g.is_nan() {
        return Err(Error::NonFinite("interface flux"));
    }
    Ok(((-g).max(0.0), g.max(0.0)))
}

/// Interface flux after Patankar weighting of the left and right cell.
pub fn modified_flux(g: f64, weight_left: f64, weight_right: f64) -> f64 {
    g.max(0.0) * weight_left + g.min(0.0) * weight_right
}
