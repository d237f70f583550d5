//! Seeded generators of exact data and safe paths for randomized checks.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{ClassLetter, Curve, FormLetter, RationalFunction, Section};
use crate::iterint::Path;
use crate::scalar::Scalar;
use crate::shuffle::{ShuffleTensor, Word};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `|p| ≤ num`, `1 ≤ q ≤ den`.
pub fn rational(r: &mut Rng64, num: i64, den: i64) -> Scalar {
    Scalar::from_ratio(r.gen_range(-num..=num), r.gen_range(1..=den))
}

pub fn gaussian(r: &mut Rng64, num: i64, den: i64) -> Scalar {
    let re = rational(r, num, den);
    let im = rational(r, num, den);
    re + im * Scalar::i()
}

/// `n` distinct poles on the grid `(a + bi)/2`, `|a|, |b| ≤ 4`, pairwise at
/// least 1/2 apart.
pub fn pole_set(r: &mut Rng64, n: usize) -> Curve {
    let mut pts: Vec<Scalar> = Vec::new();
    while pts.len() < n {
        let p = Scalar::gaussian(r.gen_range(-4..=4), 2, r.gen_range(-4..=4), 2);
        if pts.iter().all(|q| (q.to_c64() - p.to_c64()).norm() >= 0.5) {
            pts.push(p);
        }
    }
    Curve::new(pts).expect("distinct points")
}

/// Distinct real rational points in `[-3, 3]`.
pub fn real_points(r: &mut Rng64, n: usize) -> Vec<Scalar> {
    let mut pts: Vec<Scalar> = Vec::new();
    while pts.len() < n {
        let p = Scalar::from_ratio(r.gen_range(-12..=12), 4);
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts
}

pub fn form_letter(r: &mut Rng64, curve: &Curve, max_order: u32, max_degree: u32) -> FormLetter {
    if r.gen_bool(0.2) {
        FormLetter::Monomial(r.gen_range(0..=max_degree))
    } else {
        FormLetter::Pole {
            pole: r.gen_range(0..curve.len()),
            order: r.gen_range(1..=max_order),
        }
    }
}

pub fn form_word(r: &mut Rng64, curve: &Curve, weight: usize) -> Word<FormLetter> {
    Word((0..weight).map(|_| form_letter(r, curve, 2, 1)).collect())
}

pub fn class_word(r: &mut Rng64, curve: &Curve, weight: usize) -> Word<ClassLetter> {
    Word((0..weight).map(|_| ClassLetter(r.gen_range(0..curve.len()))).collect())
}

/// Random tensor with up to `terms` words of weight in `1..=max_weight`.
pub fn form_tensor(r: &mut Rng64, curve: &Curve, max_weight: usize, terms: usize) -> ShuffleTensor<FormLetter> {
    let mut t = ShuffleTensor::zero(curve.form_alphabet());
    for _ in 0..r.gen_range(1..=terms) {
        let n = r.gen_range(1..=max_weight);
        t.add_term(form_word(r, curve, n), rational(r, 3, 3));
    }
    t
}

/// Random element of `O(C)` with polynomial degree `≤ degree` and poles of
/// order `≤ max_order`.
pub fn rational_function(r: &mut Rng64, curve: &Curve, degree: usize, max_order: u32) -> RationalFunction {
    let poly: Vec<Scalar> = (0..=degree).map(|_| rational(r, 2, 3)).collect();
    let mut principal = Vec::new();
    for s in 0..curve.len() {
        for k in 1..=max_order {
            if r.gen_bool(0.5) {
                principal.push(((s, k), rational(r, 2, 3)));
            }
        }
    }
    RationalFunction::from_parts(curve, poly, principal).expect("valid parts")
}

/// Section with random corrections `g_s`.
pub fn section(r: &mut Rng64, curve: &Curve) -> Section {
    let corrections = (0..curve.len())
        .map(|_| rational_function(r, curve, 1, 1))
        .collect();
    Section::with_corrections(curve, corrections).expect("own curve")
}

/// Point in the box `|re|, |im| ≤ half` at distance `≥ min_dist` from every pole.
pub fn point(r: &mut Rng64, curve: &Curve, half: f64, min_dist: f64) -> Complex64 {
    loop {
        let z = Complex64::new(r.gen_range(-half..half), r.gen_range(-half..half));
        if curve.distance_to_poles(z) >= min_dist {
            return z;
        }
    }
}

/// Polyline from `a` to `b` through up to `stops` random points, every
/// segment at distance `≥ min_dist` from the poles.
pub fn safe_path(r: &mut Rng64, curve: &Curve, a: Complex64, b: Complex64, stops: usize, half: f64, min_dist: f64) -> Path {
    let pts = curve.numeric_points();
    for _ in 0..1000 {
        let k = r.gen_range(0..=stops);
        let mut nodes = vec![a];
        for _ in 0..k {
            nodes.push(point(r, curve, half, min_dist));
        }
        nodes.push(b);
        let path = Path::polyline(&nodes);
        if path.distance_to(pts) >= min_dist {
            return path;
        }
    }
    Path::route(pts, a, b)
}

pub fn choose<'a, T>(r: &mut Rng64, xs: &'a [T]) -> &'a T {
    xs.choose(r).expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a = form_tensor(&mut rng(7), &pole_set(&mut rng(1), 3), 3, 4);
        let c = pole_set(&mut rng(1), 3);
        let b = form_tensor(&mut rng(7), &c, 3, 4);
        assert_eq!(format!("{:?}", a.terms().collect::<Vec<_>>()), format!("{:?}", b.terms().collect::<Vec<_>>()));
        let p = safe_path(&mut rng(3), &c, point(&mut rng(4), &c, 2.0, 0.4), Complex64::new(0.1, 3.3), 2, 2.0, 0.3);
        assert!(p.distance_to(c.numeric_points()) >= 0.3);
    }
}
