//! Adaptive Gauss–Kronrod (7/15) quadrature, with a nested 2D variant.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{LabError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            max_intervals: 200_000,
        }
    }
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]`, bisecting the interval with the largest
/// error estimate until the total estimate meets the tolerance.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: Tolerance) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(LabError::Quadrature(format!("non-finite interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let (mut value, mut error) = (v, e);
    loop {
        if !(value.is_finite() && error.is_finite()) {
            return Err(LabError::Quadrature("non-finite integrand".into()));
        }
        if error <= tol.abs.max(tol.rel * value.abs()) {
            break;
        }
        if heap.len() >= tol.max_intervals {
            return Err(LabError::Quadrature(format!(
                "no convergence on [{a}, {b}] after {} intervals: estimate {value}, error {error}",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(LabError::Quadrature(format!(
                "interval [{}, {}] cannot be split further",
                worst.a, worst.b
            )));
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        evaluations += 30;
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        heap.push(Piece { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Piece { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // Re-sum to shed the drift of the running updates.
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Quadrature { value, error, evaluations })
}

/// Nested adaptive integral of `f(x, y)` over a rectangle. The inner
/// tolerance is scaled so that inner errors add up to at most a quarter of
/// the outer absolute tolerance.
pub fn integrate_2d(
    f: impl Fn(f64, f64) -> f64,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    tol: Tolerance,
) -> Result<Quadrature> {
    let inner_tol = Tolerance {
        abs: 0.25 * tol.abs / (bx - ax).abs().max(f64::MIN_POSITIVE),
        rel: 0.0,
        max_intervals: tol.max_intervals,
    };
    let mut failure: Option<LabError> = None;
    let mut evaluations = 0;
    let outer = integrate(
        |x| {
            if failure.is_some() {
                return 0.0;
            }
            match integrate(|y| f(x, y), ay, by, inner_tol) {
                Ok(q) => {
                    evaluations += q.evaluations;
                    q.value
                }
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        ax,
        bx,
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let outer = outer?;
    Ok(Quadrature {
        value: outer.value,
        error: outer.error + 0.25 * tol.abs,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn polynomials_are_exact() {
        // G7 is exact to degree 13, K15 to degree 22.
        let q = integrate(|x| x.powi(12) - 3.0 * x.powi(5), -1.0, 2.0, Tolerance::new(1e-14, 0.0)).unwrap();
        let exact = (2f64.powi(13) + 1.0) / 13.0 - 0.5 * (64.0 - 1.0);
        assert!((q.value - exact).abs() < 1e-11 * exact.abs());
        assert_eq!(q.evaluations, 15);
    }

    #[test]
    fn gaussian_and_oscillatory() {
        let q = integrate(|x| (-x * x).exp(), -8.0, 8.0, Tolerance::new(1e-14, 0.0)).unwrap();
        assert!((q.value - PI.sqrt()).abs() < 1e-13);
        let q = integrate(|x| (50.0 * x).cos(), 0.0, PI, Tolerance::new(1e-13, 0.0)).unwrap();
        assert!(q.value.abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity_converges() {
        let q = integrate(|x| x.sqrt().recip(), 1e-300, 1.0, Tolerance::new(1e-9, 0.0)).unwrap();
        assert!((q.value - 2.0).abs() < 1e-8, "{}", q.value);
    }

    #[test]
    fn non_convergence_is_reported() {
        let tol = Tolerance {
            abs: 1e-12,
            rel: 0.0,
            max_intervals: 4,
        };
        let err = integrate(|x| (1000.0 * x).sin(), 0.0, 10.0, tol).unwrap_err();
        assert!(matches!(err, LabError::Quadrature(_)));
        assert!(integrate(|_| f64::NAN, 0.0, 1.0, Tolerance::new(1e-9, 0.0)).is_err());
    }

    #[test]
    fn separable_2d() {
        let q = integrate_2d(
            |x, y| (-x * x - 2.0 * y * y).exp(),
            (-7.0, 7.0),
            (-6.0, 6.0),
            Tolerance::new(1e-12, 0.0),
        )
        .unwrap();
        assert!((q.value - PI / 2f64.sqrt()).abs() < 1e-11);
    }
}
