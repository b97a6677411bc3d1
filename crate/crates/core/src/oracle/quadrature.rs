//! Adaptive quadrature used only by the oracles. Deliberately shares no
//! code with the rules in `polybasis`.

use crate::error::{Error, Result};

/// Double-exponential (tanh-sinh) quadrature on `[a, b]`.
///
/// The integrand receives `(x, x - a, b - x)`; the two distances are
/// computed without cancellation so endpoint singularities can be
/// evaluated arbitrarily close to the end. Levels are refined until two
/// successive estimates agree to `tol` (absolute).
pub fn tanh_sinh<F>(a: f64, b: f64, tol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64, f64, f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let half = 0.5 * (b - a);
    let center = a + half;
    let t_max = 6.5;
    let mut eval = |t: f64| -> f64 {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        // 1 - tanh|u| without cancellation
        let near = 2.0 * e / (1.0 + e);
        let cosh_u = u.cosh();
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        if !w.is_finite() || w == 0.0 || near == 0.0 {
            return 0.0;
        }
        let (dl, dr) = if u < 0.0 {
            (half * near, half * (2.0 - near))
        } else {
            (half * (2.0 - near), half * near)
        };
        let x = if u < 0.0 { a + dl } else { b - dr };
        let v = f(x, dl, dr);
        if !v.is_finite() {
            return 0.0;
        }
        w * v
    };
    let _ = center;
    let mut step = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * step <= t_max {
        let t = k as f64 * step;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut estimate = sum * step * half;
    for _level in 0..12 {
        step *= 0.5;
        let mut k = 1;
        while (k as f64) * step <= t_max {
            let t = k as f64 * step;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let next = sum * step * half;
        if (next - estimate).abs() <= tol {
            return Ok(next);
        }
        estimate = next;
    }
    Err(Error::NoConvergence {
        what: "tanh-sinh quadrature",
        achieved: f64::NAN,
        requested: tol,
    })
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const G_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(a: f64, b: f64, f: &mut F) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = GK_WEIGHTS[7] * fc;
    let mut gauss = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        kron += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += G_WEIGHTS[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod (7/15) by global bisection of the worst panel.
pub fn gauss_kronrod<F>(a: f64, b: f64, tol: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(a, b, &mut f);
    let mut panels = vec![(a, b, v, e)];
    for _ in 0..2000 {
        let total_err: f64 = panels.iter().map(|p| p.3).sum();
        if total_err <= tol {
            return Ok(panels.iter().map(|p| p.2).sum());
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (pa, pb, _, _) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        let (v1, e1) = gk15(pa, mid, &mut f);
        let (v2, e2) = gk15(mid, pb, &mut f);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
    let achieved: f64 = panels.iter().map(|p| p.3).sum();
    Err(Error::NoConvergence {
        what: "Gauss-Kronrod quadrature",
        achieved,
        requested: tol,
    })
}
