//! The first-difference operator used to turn cumulative dimension counts
//! into multiplicities: E_i(F)(x) = F(..., x_i, ...) - F(..., x_i - 1, ...),
//! extended by zero outside the declared domain.

/// Apply the first-difference operator along each axis in `axes` to the
/// integer-valued function `f` of a fixed arity, evaluated at `point`.
/// Composition over several axes expands into the usual signed
/// inclusion–exclusion sum with 2^|axes| terms.
///
/// `f` must return 0 outside its meaningful domain; this function only
/// shifts coordinates, it does not clamp them.
pub fn signed_difference(
    f: &mut dyn FnMut(&[i64]) -> i64,
    point: &[i64],
    axes: &[usize],
) -> i64 {
    let k = axes.len();
    let mut total = 0i64;
    let mut shifted = point.to_vec();
    for mask in 0u32..(1 << k) {
        shifted.copy_from_slice(point);
        let mut sign = 1i64;
        for (bit, &ax) in axes.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                shifted[ax] -= 1;
                sign = -sign;
            }
        }
        total += sign * f(&shifted);
    }
    total
}
