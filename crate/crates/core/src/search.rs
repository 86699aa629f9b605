//! One-dimensional maximization on a bracket.

const INV_PHI: f64 = 0.618_033_988_749_894_8; // (√5 − 1)/2

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
///
/// Shrinks the bracket until it is narrower than `tol` and returns the best
/// point seen among the final interior probes and both bracket ends, with ties
/// going to the smaller abscissa.
pub fn golden_section_max<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    debug_assert!(lo <= hi);
    let (f_lo0, f_hi0) = (f(lo), f(hi));
    let (lo0, hi0) = (lo, hi);

    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // Each step keeps the sub-bracket holding the larger probe; ties go left.
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }

    let mut best = (lo0, f_lo0);
    for cand in [(x1, f1), (x2, f2), (hi0, f_hi0)] {
        if cand.1 > best.1 || (cand.1 == best.1 && cand.0 < best.0) {
            best = cand;
        }
    }
    best
}
