//! One-dimensional maximisation over a period.

use crate::scalar::Real;

/// Grid search followed by golden-section refinement of the best bracket.
///
/// `f` may carry state between calls (warm starts); it is evaluated in
/// increasing `theta` on the grid and then inside a single bracket.
pub fn maximize_periodic<T: Real, E>(
    mut f: impl FnMut(T) -> Result<T, E>,
    period: T,
    grid: usize,
    width: T,
) -> Result<(T, T), E> {
    let grid = grid.max(3);
    let step = period / T::from_usize(grid).unwrap();
    let mut best_k = 0;
    let mut best = T::neg_infinity();
    for k in 0..grid {
        let v = f(step * T::from_usize(k).unwrap())?;
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let center = step * T::from_usize(best_k).unwrap();
    let (theta, value) = golden_max(&mut f, center - step, center + step, width)?;
    if value >= best {
        Ok((theta, value))
    } else {
        Ok((center, best))
    }
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
pub fn golden_max<T: Real, E>(
    f: &mut impl FnMut(T) -> Result<T, E>,
    mut a: T,
    mut b: T,
    width: T,
) -> Result<(T, T), E> {
    let invphi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut x1 = b - invphi * (b - a);
    let mut x2 = a + invphi * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    // floating point stalls the bracket well before 200 halvings
    for _ in 0..200 {
        if b - a <= width {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}
