//! Scalar golden-section maximization on a closed interval.

/// Maximize a unimodal function on [lo, hi] to the given x tolerance.
/// Returns (argmax, max). On non-unimodal input it converges to some
/// local maximum; callers that cannot guarantee unimodality seed the
/// interval from a coarse grid first.
pub(crate) fn maximize(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc == fd {
            // Ties dominate once f is flat to machine precision near the
            // peak; shrinking one side then drifts the bracket sideways
            // across the flat plateau. Keeping [c, d] stays centered.
            a = c;
            b = d;
            c = b - INV_PHI * (b - a);
            d = a + INV_PHI * (b - a);
            fc = f(c);
            fd = f(d);
        } else if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}
