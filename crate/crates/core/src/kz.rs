//! Comparison of `A_{σ₀}` with the fiberwise restriction of the KZ form.

use std::collections::BTreeMap;

use num_traits::One;

use crate::curve::{Curve, Differential, RationalFunction, Section};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One-forms on the fiber keyed by the generator `t_{ij}` (`i < j`, 0-based;
/// index `n` is the moving point).
pub type GeneratorForms = BTreeMap<(usize, usize), Differential>;

#[derive(Debug, Clone)]
pub struct KzComparison {
    pub connection_side: GeneratorForms,
    pub kz_side: GeneratorForms,
}

impl KzComparison {
    pub fn holds(&self) -> bool {
        self.connection_side == self.kz_side
    }
}

/// `Σ_i σ₀(h_i) ⊗ t_{i,n}` after substituting `hⁱ ↦ t_{i,n}`.
pub fn connection_form(curve: &Curve) -> GeneratorForms {
    let sigma = Section::standard(curve);
    let n = curve.len();
    (0..n).map(|i| ((i, n), sigma.of_class(i))).collect()
}

/// `Σ_{i<j} t_{ij} ⊗ dlog(z_i − z_j)` pulled back along
/// `z ↦ (s₁, …, s_n, z)`.
pub fn kz_restriction(curve: &Curve) -> GeneratorForms {
    let n = curve.len();
    // coordinate functions of the fiber: constants s_k, then z
    let coord = |k: usize| {
        if k == n {
            RationalFunction::z(curve)
        } else {
            RationalFunction::constant(curve, curve.point(k).clone())
        }
    };
    let mut out = GeneratorForms::new();
    for j in 0..=n {
        for i in 0..j {
            let diff = coord(i).sub(&coord(j)).expect("same curve");
            let num = diff.derivative();
            if num.is_zero() {
                continue;
            }
            // z_i − z with i < n fixed: 1/(s_i − z) = −1/(z − s_i)
            let inv = RationalFunction::pole_term(curve, i, 1, -Scalar::one());
            let om = Differential::new(num.mul(&inv).expect("same curve"));
            if !om.is_zero() {
                out.insert((i, j), om);
            }
        }
    }
    out
}

pub fn kz_comparison(points: &[Scalar]) -> Result<KzComparison> {
    if points.len() < 2 {
        return Err(Error::Config("need at least two points".into()));
    }
    let curve = Curve::new(points.to_vec())?;
    Ok(KzComparison {
        connection_side: connection_form(&curve),
        kz_side: kz_restriction(&curve),
    })
}

pub fn kz_specialization_check(points: &[Scalar]) -> Result<bool> {
    Ok(kz_comparison(points)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn small_cases() {
        assert!(kz_specialization_check(&pts(&[0, 1])).unwrap());
        assert!(kz_specialization_check(&pts(&[0, 1, -1])).unwrap());
        assert!(matches!(kz_specialization_check(&pts(&[0, 0])), Err(Error::RepeatedPole(_))));
        let cmp = kz_comparison(&pts(&[0, 1])).unwrap();
        assert_eq!(cmp.kz_side.len(), 2);
    }
}
