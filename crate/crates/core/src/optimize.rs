//! One-dimensional search helpers: golden-section minimization and bisection
//! on a boolean predicate. Both take fallible closures so solver errors
//! propagate instead of being swallowed.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes `f` on `[a, b]` by golden-section search until the bracket is
/// narrower than `tol`. Returns the best point seen and its value.
pub fn golden_section_min<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64), E> {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
        if x1 >= x2 {
            break;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Maximizes `f` on `[a, b]`; see [`golden_section_min`].
pub fn golden_section_max<E>(
    mut f: impl FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<(f64, f64), E> {
    let (x, neg) = golden_section_min(|x| f(x).map(|v| -v), a, b, tol)?;
    Ok((x, -neg))
}

/// Shrinks `[lo, hi]`, where `pred(lo)` is false and `pred(hi)` is true, until
/// `hi - lo <= tol(lo, hi)`. Returns the final bracket.
pub fn bisect_predicate<E>(
    mut pred: impl FnMut(f64) -> Result<bool, E>,
    mut lo: f64,
    mut hi: f64,
    tol: impl Fn(f64, f64) -> f64,
    max_iter: usize,
) -> Result<(f64, f64), E> {
    for _ in 0..max_iter {
        if hi - lo <= tol(lo, hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}
