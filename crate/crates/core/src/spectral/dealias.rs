use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SpectralField;

/// Truncation rule that makes a discrete product of the given degree
/// alias-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DealiasRule {
    /// Quadratic products: zero `|k| > n/3`.
    TwoThirds,
    /// Cubic products: zero `|k| > n/4`.
    OneHalf,
}

impl DealiasRule {
    /// Rule for a pointwise product of `degree` factors (2 or 3).
    pub fn for_product_degree(degree: usize) -> Self {
        if degree <= 2 {
            DealiasRule::TwoThirds
        } else {
            DealiasRule::OneHalf
        }
    }

    /// Largest retained `|k|` on an `n`-point grid.
    pub fn cutoff_index(self, n: usize) -> usize {
        match self {
            DealiasRule::TwoThirds => n / 3,
            DealiasRule::OneHalf => n / 4,
        }
    }
}

/// Zeroes every mode outside the rule's retained band.
pub fn dealias(field: &SpectralField, rule: DealiasRule) -> SpectralField {
    let mut out = field.clone();
    apply_mask(out.coeffs_mut(), rule);
    out
}

pub(crate) fn apply_mask(coeffs: &mut [Complex64], rule: DealiasRule) {
    let n = coeffs.len();
    let kmax = rule.cutoff_index(n);
    for (i, c) in coeffs.iter_mut().enumerate() {
        let k = if i < n / 2 { i } else { n - i };
        if k > kmax {
            *c = Complex64::new(0.0, 0.0);
        }
    }
}
