//! Off-grid evaluation of band-limited periodic fields: refined sup norms and
//! `L¹` norms integrated exactly between sign changes.

use num_complex::Complex64;

use crate::spectral::SpectralField;

/// Real trigonometric polynomial in the field convention,
/// `u(x) = (Δξ/√2π) Σ_k c_k e^{iξ_k x}`, restricted to the contiguous range
/// of positive modes between the first and last nonzero coefficient.
pub(crate) struct TrigPoly {
    first: usize,
    c: Vec<Complex64>,
    c0: f64,
    dxi: f64,
    scale: f64,
}

impl TrigPoly {
    pub(crate) fn new(field: &SpectralField) -> Self {
        let grid = field.grid();
        let n = grid.n_points();
        let zero = Complex64::new(0.0, 0.0);
        let positive = &field.coeffs()[1..n / 2];
        let first = positive.iter().position(|&v| v != zero);
        let last = positive.iter().rposition(|&v| v != zero);
        let (first, c) = match (first, last) {
            (Some(a), Some(b)) => (a + 1, positive[a..=b].to_vec()),
            _ => (1, Vec::new()),
        };
        TrigPoly {
            first,
            c,
            c0: field.coeffs()[0].re,
            dxi: grid.dxi(),
            scale: grid.dxi() / (2.0 * std::f64::consts::PI).sqrt(),
        }
    }

    /// `j`-th derivative at `x`; `j = -1` gives the antiderivative of the
    /// oscillating part plus `c_0 x`.
    pub(crate) fn derivative(&self, j: i32, x: f64) -> f64 {
        let mut s = match j {
            0 => self.c0,
            -1 => self.c0 * x,
            _ => 0.0,
        };
        let twist = Complex64::i().powi(j);
        // e^{iξx} by recurrence along the contiguous mode range.
        let step = Complex64::from_polar(1.0, self.dxi * x);
        let mut e = Complex64::from_polar(1.0, self.first as f64 * self.dxi * x);
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &c) in self.c.iter().enumerate() {
            let k = (self.first + i) as f64 * self.dxi;
            acc += c * k.powi(j) * e;
            e *= step;
        }
        s += 2.0 * (twist * acc).re;
        self.scale * s
    }

    pub(crate) fn value(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }
}

/// `max_x |u(x)|`: the sampled maximum refined by Newton steps on `u'`.
pub(crate) fn sup_abs(field: &SpectralField) -> f64 {
    let v = field.to_physical();
    let (m, best) = v
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bi, bv), (i, &x)| if x.abs() > bv { (i, x.abs()) } else { (bi, bv) });
    if best == 0.0 {
        return 0.0;
    }
    let p = TrigPoly::new(field);
    let dx = field.grid().dx();
    let x0 = m as f64 * dx;
    let mut x = x0;
    for _ in 0..20 {
        let d1 = p.derivative(1, x);
        let d2 = p.derivative(2, x);
        if d2 == 0.0 {
            break;
        }
        let step = (d1 / d2).clamp(-dx, dx);
        x = (x - step).clamp(x0 - dx, x0 + dx);
        if step.abs() < 1e-15 * dx.max(x.abs()) {
            break;
        }
    }
    best.max(p.value(x).abs())
}

/// Root of `p` in `[a, b]` where `p(a)` and `p(b)` differ in sign.
fn bracketed_root(p: &TrigPoly, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    let mut x = 0.5 * (a + b);
    for _ in 0..60 {
        let fx = p.value(x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == (fa < 0.0) {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let d = p.derivative(1, x);
        let step = fx / d;
        if d != 0.0 && step.abs() < 1e-16 * x.abs().max(1.0) {
            return x;
        }
        let newton = x - step;
        x = if d != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if b - a < 1e-15 * b.abs().max(1.0) {
            break;
        }
    }
    x
}

/// `∫|u| dx` over the box. Sign changes on the grid are refined to roots of
/// the interpolant and the antiderivative is differenced between them, so
/// the only error comes from sign changes hidden inside one cell. Sign
/// changes where `|u|` is below `1e-12 max|u|` are ignored.
pub(crate) fn l1_norm(field: &SpectralField) -> f64 {
    let v = field.to_physical();
    let n = v.len();
    let dx = field.grid().dx();
    let top = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if top == 0.0 {
        return 0.0;
    }
    let floor = 1e-12 * top;
    let p = TrigPoly::new(field);
    let mut roots = Vec::new();
    for m in 0..n {
        let (a, b) = (v[m], v[(m + 1) % n]);
        if a == 0.0 && a.abs().max(b.abs()) > floor {
            roots.push(m as f64 * dx);
        } else if (a < 0.0) != (b < 0.0) && b != 0.0 && a.abs().max(b.abs()) > floor {
            roots.push(bracketed_root(&p, m as f64 * dx, (m + 1) as f64 * dx, a));
        }
    }
    if roots.len() < 2 {
        return v.iter().map(|x| x.abs()).sum::<f64>() * dx;
    }
    let box_length = field.grid().box_length();
    let h: Vec<f64> = roots.iter().map(|&r| p.derivative(-1, r)).collect();
    let mut total = 0.0;
    for i in 0..roots.len() - 1 {
        total += (h[i + 1] - h[i]).abs();
    }
    let wrap = p.derivative(-1, roots[0] + box_length);
    total + (wrap - h[h.len() - 1]).abs()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn exact_values_off_grid() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let f = SpectralField::from_fn(&g, |x| (3.0 * x + 0.3).sin() + 0.25);
        let p = TrigPoly::new(&f);
        for x in [0.01, 1.234, 5.0] {
            assert!((p.value(x) - ((3.0 * x + 0.3).sin() + 0.25)).abs() < 1e-13);
            assert!((p.derivative(1, x) - 3.0 * (3.0 * x + 0.3).cos()).abs() < 1e-12);
            assert!((p.derivative(2, x) + 9.0 * (3.0 * x + 0.3).sin()).abs() < 1e-12);
        }
        let h = |x: f64| p.derivative(-1, x);
        let exact = -((3.0 * 2.0 + 0.3f64).cos() - (3.0 * 0.5 + 0.3f64).cos()) / 3.0 + 0.25 * 1.5;
        assert!((h(2.0) - h(0.5) - exact).abs() < 1e-13);
    }

    #[test]
    fn sup_between_samples() {
        // Peak of cos(5(x - x0)) sits between grid points.
        let g = make_grid(32, 2.0 * PI).unwrap();
        let f = SpectralField::from_fn(&g, |x| 0.7 * (5.0 * (x - 0.0617)).cos());
        let sampled = f.to_physical().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(sampled < 0.7 - 1e-4);
        assert!((sup_abs(&f) - 0.7).abs() < 1e-14);
    }

    #[test]
    fn l1_of_sines() {
        // ∫|sin(kx)| over a period box is 4 for every k.
        let g = make_grid(128, 2.0 * PI).unwrap();
        for k in [1.0, 3.0, 17.0, 40.0] {
            let f = SpectralField::from_fn(&g, |x| (k * x + 0.1).sin());
            assert!((l1_norm(&f) - 4.0).abs() < 1e-12, "k={k}: {}", l1_norm(&f));
        }
        let f = SpectralField::from_fn(&g, |x| 2.0 + x.cos());
        assert!((l1_norm(&f) - 4.0 * PI).abs() < 1e-12);
        assert_eq!(l1_norm(&SpectralField::zeros(&g)), 0.0);
    }
}
