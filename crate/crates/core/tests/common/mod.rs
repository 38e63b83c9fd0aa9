#![allow(dead_code, clippy::excessive_precision)]

use hawkes::intensity::conditional_intensity;
use hawkes::{EventSequence, HawkesModel};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// 15-point Kronrod estimate and its difference from the embedded 7-point Gauss rule.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let centre = f(mid);
    let mut kronrod = GK_WEIGHTS[7] * centre;
    let mut gauss = GAUSS_WEIGHTS[3] * centre;
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += GK_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss-Kronrod quadrature on a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gk15(f, a, b);
        if err <= tol.max(1e-15 * value.abs()) || depth == 0 {
            return value;
        }
        let mid = 0.5 * (a + b);
        recurse(f, a, mid, 0.5 * tol, depth - 1) + recurse(f, mid, b, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    recurse(&f, a, b, tol, 50)
}

/// Integral over `[a, inf)` via the substitution `x = a + u / (1 - u)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> f64 {
    let g = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let x = a + u / (1.0 - u);
        f(x) / ((1.0 - u) * (1.0 - u))
    };
    // Split so the mass near the origin is resolved separately from the tail.
    let cuts = [0.0, 0.5, 0.9, 0.99, 0.999, 0.9999, 1.0];
    cuts.windows(2).map(|w| integrate(g, w[0], w[1], tol)).sum()
}

/// `int_0^t lambda*(s) ds` by quadrature, integrating piecewise between arrivals
/// where the intensity is smooth.
pub fn quadrature_compensator(model: &HawkesModel, events: &EventSequence, t: f64) -> f64 {
    let mut knots = vec![0.0];
    knots.extend(events.times().iter().copied().filter(|&s| s < t));
    knots.push(t);
    knots
        .windows(2)
        // Gauss-Kronrod nodes are interior, so no arrival is ever evaluated.
        .map(|w| integrate(|s| conditional_intensity(model, events, s), w[0], w[1], 1e-13))
        .sum()
}

/// Upper-tail probability of a chi-square statistic.
pub fn chi_square_sf(statistic: f64, dof: f64) -> f64 {
    1.0 - ChiSquared::new(dof).unwrap().cdf(statistic)
}

/// Pearson goodness-of-fit p-value for counts against Poisson(mean).
/// Tail cells are pooled so every expected count is at least 5.
pub fn poisson_chi_square(counts: &[usize], mean: f64) -> f64 {
    let n = counts.len() as f64;
    let max = *counts.iter().max().unwrap_or(&0);
    let mut observed = vec![0.0; max + 2];
    for &c in counts {
        observed[c] += 1.0;
    }
    let mut pmf = Vec::with_capacity(max + 2);
    let mut p = (-mean).exp();
    for j in 0..=max {
        pmf.push(p);
        p *= mean / (j as f64 + 1.0);
    }
    let tail = 1.0 - pmf.iter().sum::<f64>();
    pmf.push(tail.max(0.0));

    // Merge adjacent cells left to right until each expects at least 5.
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for j in 0..pmf.len() {
        o += observed[j];
        e += pmf[j] * n;
        if e >= 5.0 {
            cells.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => cells.push((o, e)),
        }
    }
    let stat: f64 = cells.iter().map(|&(o, e)| (o - e).powi(2) / e).sum();
    chi_square_sf(stat, (cells.len() - 1) as f64)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Counts of `events` in consecutive unit windows `(j, j + 1]`.
pub fn unit_window_counts(events: &EventSequence) -> Vec<usize> {
    let windows = events.horizon().floor() as usize;
    let mut counts = vec![0usize; windows];
    for &t in events.times() {
        let j = t.ceil() as usize;
        if j >= 1 && j <= windows {
            counts[j - 1] += 1;
        }
    }
    counts
}
