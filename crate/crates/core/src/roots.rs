//! One-dimensional root isolation on sampled intervals.

/// Roots found by [`scan_roots`], plus places where the function came close
/// to zero without crossing (candidate tangencies).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanOutcome {
    pub roots: Vec<f64>,
    pub near_touches: Vec<(f64, f64)>,
}

/// Finds the roots of `f` on `[ts[0], ts[n]]` from samples `vals[i] = f(ts[i])`.
///
/// Sign changes between consecutive samples are refined by the Illinois
/// method. Sample-level local minima of `|f|` are inspected by golden-section
/// search so that a pair of roots squeezed between two samples is not lost;
/// if the minimum stays on one side but below `touch_tol` it is reported in
/// `near_touches`.
pub fn scan_roots<F: Fn(f64) -> f64>(
    ts: &[f64],
    vals: &[f64],
    f: F,
    touch_tol: f64,
) -> ScanOutcome {
    assert_eq!(ts.len(), vals.len());
    let n = ts.len();
    let mut out = ScanOutcome::default();
    let sign = |v: f64| {
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    };
    for i in 0..n {
        let si = sign(vals[i]);
        if si == 0 {
            out.roots.push(ts[i]);
            continue;
        }
        if i + 1 < n {
            let sj = sign(vals[i + 1]);
            if si * sj < 0 {
                out.roots
                    .push(refine(&f, ts[i], ts[i + 1], vals[i], vals[i + 1]));
            }
        }
        if i > 0 && i + 1 < n {
            let (a, b) = (vals[i - 1], vals[i + 1]);
            if sign(a) == si
                && sign(b) == si
                && vals[i].abs() <= a.abs()
                && vals[i].abs() <= b.abs()
            {
                let s = si as f64;
                let (tm, vm) = golden_min(|t| s * f(t), ts[i - 1], ts[i + 1]);
                if vm < 0.0 {
                    out.roots.push(refine(&f, ts[i - 1], tm, a, s * vm));
                    out.roots.push(refine(&f, tm, ts[i + 1], s * vm, b));
                } else if vm < touch_tol {
                    out.near_touches.push((tm, vm));
                }
            }
        }
    }
    out.roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.roots
        .dedup_by(|a, b| (*a - *b).abs() < 1e-13 * (1.0 + b.abs()));
    out
}

/// Illinois false-position refinement of a bracketed root.
pub fn refine<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> f64 {
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let c = if c.is_finite() && c > a.min(b) && c < a.max(b) {
            c
        } else {
            0.5 * (a + b)
        };
        if (b - a).abs() <= 4.0 * f64::EPSILON * (1.0 + c.abs()) {
            return c;
        }
        let fc = f(c);
        if fc == 0.0 {
            return c;
        }
        if (fc > 0.0) == (fb > 0.0) {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
    }
    0.5 * (a + b)
}

/// Golden-section minimum of `f` on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_9;
    let mut c = b - R * (b - a);
    let mut d = a + R * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..80 {
        if (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - R * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + R * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
