//! Shuffle-regularized hyperlogarithms `L_w(z)` with basepoint 0, and
//! multiple zeta values as their values at 1.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::curve::{ClassLetter, Curve, NumericFunction, Section};
use crate::error::{Error, Result};
use crate::iterint::{section_numeric, GroupLikeSeries, IntegratorConfig, Path, WordSystem};
use crate::local_expansion::{expand_at, zero_seeded_series, ExpansionTarget};
use crate::monodromy::standard_loop;
use crate::par::{par_try_map, Execution};
use crate::scalar::Scalar;
use crate::shuffle::{words_up_to, ShuffleTensor, Word};

type C64 = Complex64;
type ClassWord = Word<ClassLetter>;

/// Series order used for the starting values near 0.
const SEED_ORDER: i32 = 96;

pub fn zero_index(curve: &Curve) -> Result<usize> {
    curve.index_of(&Scalar::zero()).ok_or(Error::MissingZero)
}

/// Starting point `z₀ = ρ/2`, where `ρ` is the distance from 0 to the
/// nearest other pole (`z₀ = 1` when 0 is the only pole).
pub fn base_point(curve: &Curve) -> Result<C64> {
    let h0 = zero_index(curve)?;
    let rho = curve
        .numeric_points()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != h0)
        .map(|(_, p)| p.norm())
        .fold(f64::INFINITY, f64::min);
    Ok(if rho.is_finite() { C64::new(0.5 * rho, 0.0) } else { C64::one() })
}

/// `w = Σ_k u_k ⧢ [h₀]^{⧢k}` where no `u_k` starts with `h₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct Regularized {
    pub parts: BTreeMap<usize, ShuffleTensor<ClassLetter>>,
}

impl Regularized {
    /// Reassembles `Σ_k u_k ⧢ [h₀]^{⧢k}`.
    pub fn reassemble(&self, curve: &Curve, h0: usize) -> ShuffleTensor<ClassLetter> {
        let alpha = curve.class_alphabet();
        let mut out = ShuffleTensor::zero(alpha);
        for (&k, u) in &self.parts {
            let mut p = ShuffleTensor::unit(alpha);
            let g = ShuffleTensor::word(alpha, vec![ClassLetter(h0)]);
            for _ in 0..k {
                p = p.shuffle(&g).expect("one alphabet");
            }
            out = out.add(&u.shuffle(&p).expect("one alphabet")).expect("one alphabet");
        }
        out
    }
}

fn reg_rec(
    alpha: crate::shuffle::AlphabetId,
    h0: ClassLetter,
    w: &ClassWord,
    memo: &mut BTreeMap<ClassWord, BTreeMap<usize, ShuffleTensor<ClassLetter>>>,
) -> BTreeMap<usize, ShuffleTensor<ClassLetter>> {
    if let Some(r) = memo.get(w) {
        return r.clone();
    }
    let m = w.letters().iter().take_while(|&&l| l == h0).count();
    let mut out: BTreeMap<usize, ShuffleTensor<ClassLetter>> = BTreeMap::new();
    if m == 0 {
        out.insert(0, ShuffleTensor::monomial(alpha, w.clone(), Scalar::one()));
    } else {
        // [h₀] ⧢ h₀^{m−1}v = m·w + Σ_j (h₀ inserted after v_j)
        let shorter = w.suffix_from(1);
        for (k, u) in reg_rec(alpha, h0, &shorter, memo) {
            out.insert(k + 1, u);
        }
        let v = &shorter.letters()[m - 1..];
        for j in 1..=v.len() {
            let mut x: Vec<ClassLetter> = shorter.letters()[..m - 1 + j].to_vec();
            x.push(h0);
            x.extend_from_slice(&v[j..]);
            for (k, u) in reg_rec(alpha, h0, &Word(x), memo) {
                let e = out.entry(k).or_insert_with(|| ShuffleTensor::zero(alpha));
                *e = e.sub(&u).expect("one alphabet");
            }
        }
        let inv = Scalar::from_ratio(1, m as i64);
        for u in out.values_mut() {
            *u = u.scale(&inv);
        }
        out.retain(|_, u| !u.is_zero());
    }
    memo.insert(w.clone(), out.clone());
    out
}

pub fn regularize(curve: &Curve, w: &ClassWord) -> Result<Regularized> {
    let h0 = ClassLetter(zero_index(curve)?);
    let mut memo = BTreeMap::new();
    Ok(Regularized {
        parts: reg_rec(curve.class_alphabet(), h0, w, &mut memo),
    })
}

/// Homotopy class of a path from `z₀`: either loops around poles followed
/// by the default route, or an explicit path.
#[derive(Debug, Clone, PartialEq)]
pub enum PathClass {
    /// `(pole index, turns)` applied in order, then the default route to `z`.
    Default { loops: Vec<(usize, i32)> },
    Explicit(Path),
}

impl Default for PathClass {
    fn default() -> Self {
        PathClass::Default { loops: Vec::new() }
    }
}

impl PathClass {
    pub fn path(&self, curve: &Curve, z: C64) -> Result<Path> {
        let z0 = base_point(curve)?;
        match self {
            PathClass::Explicit(p) => {
                let tol = 1e-12 * (1.0 + z0.norm());
                if (p.base() - z0).norm() > tol {
                    return Err(Error::Config(format!("path must start at {z0}")));
                }
                if (p.end() - z).norm() > 1e-12 * (1.0 + z.norm()) {
                    return Err(Error::Config(format!("path must end at {z}")));
                }
                Ok(p.clone())
            }
            PathClass::Default { loops } => {
                let mut path = Path::new(z0);
                for &(s, turns) in loops {
                    let gamma = standard_loop(curve, s, z0)?.power(turns);
                    path = path.then(&gamma.path)?;
                }
                path.then(&Path::route(curve.numeric_points(), z0, z))
            }
        }
    }
}

fn check_point(curve: &Curve, z: C64) -> Result<()> {
    if curve.numeric_points().iter().any(|&p| p == z) {
        return Err(Error::AtPole(format!("{z}")));
    }
    Ok(())
}

/// `L_w(z)` for several words along one path of the given class.
pub fn eval_many(curve: &Curve, words: &[ClassWord], z: C64, class: &PathClass, cfg: &IntegratorConfig) -> Result<Vec<C64>> {
    let h0 = zero_index(curve)?;
    check_point(curve, z)?;
    let path = class.path(curve, z)?;
    let regs: Vec<Regularized> = words.iter().map(|w| regularize(curve, w)).collect::<Result<_>>()?;
    let g = Word(vec![ClassLetter(h0)]);
    let mut nodes: Vec<ClassWord> = vec![g.clone()];
    for r in &regs {
        for u in r.parts.values() {
            nodes.extend(u.terms().map(|(w, _)| w.clone()).filter(|w| !w.is_empty()));
        }
    }
    let section = Section::standard(curve);
    let forms: Vec<NumericFunction> = section_numeric(&section);
    let sys = WordSystem::new(&nodes, |l| forms[l.0].clone());

    let z0 = base_point(curve)?;
    let admissible: Vec<&ClassWord> = nodes.iter().filter(|w| **w != g).collect();
    let seeds = zero_seeded_series(&section, admissible, h0, SEED_ORDER);
    let ln0 = z0.ln();
    let mut init = vec![C64::zero(); sys.len()];
    for (w, i) in sys.words() {
        init[i] = if w.is_empty() {
            C64::one()
        } else if *w == g {
            ln0
        } else {
            seeds[w].eval(z0, ln0)
        };
    }
    let y = sys.solve(&path, init, curve.numeric_points(), curve.pole_guard(), cfg, None)?;
    let log = y[sys.node(&g).expect("present")];
    Ok(regs
        .iter()
        .map(|r| {
            r.parts
                .iter()
                .map(|(&k, u)| {
                    let lu: C64 = u.terms().map(|(w, q)| q.to_c64() * y[sys.node(w).expect("present")]).sum();
                    lu * log.powu(k as u32)
                })
                .sum()
        })
        .collect())
}

pub fn eval_l(curve: &Curve, w: &ClassWord, z: C64, class: &PathClass, cfg: &IntegratorConfig) -> Result<C64> {
    Ok(eval_many(curve, std::slice::from_ref(w), z, class, cfg)?[0])
}

/// `L_w` at many points (default class), one solve per point.
pub fn eval_points(curve: &Curve, w: &ClassWord, points: &[C64], cfg: &IntegratorConfig, exec: Execution) -> Result<Vec<C64>> {
    par_try_map(exec, points, |&z| eval_l(curve, w, z, &PathClass::default(), cfg))
}

/// `L_w(1)` for a convergent word (last letter not `h₁`). Requires 0 and 1 in `S`.
pub fn mzv(curve: &Curve, w: &ClassWord, cfg: &IntegratorConfig) -> Result<C64> {
    zero_index(curve)?;
    let one = curve
        .index_of(&Scalar::one())
        .ok_or_else(|| Error::Config("1 must be a pole".into()))?;
    if w.is_empty() {
        return Ok(C64::one());
    }
    if w.letters().last() == Some(&ClassLetter(one)) {
        return Err(Error::DivergentWord);
    }
    let section = Section::standard(curve);
    let e = expand_at(&section, ExpansionTarget::Hyperlog, w, one, 0, w.weight(), cfg)?;
    Ok(e.coeff(0, 0))
}

/// Series `P` with `L(γ_s·δ) = P·L(δ)` up to weight `n`, where `γ_s` is the
/// standard loop around `s` at `z₀`.
pub fn monodromy_series(curve: &Curve, s: usize, n: usize, cfg: &IntegratorConfig) -> Result<GroupLikeSeries<ClassLetter>> {
    let z0 = base_point(curve)?;
    let letters = curve.class_letters();
    let words = words_up_to(&letters, n);
    let l0 = eval_many(curve, &words, z0, &PathClass::default(), cfg)?;
    let l0 = GroupLikeSeries::from_values(n, words.into_iter().zip(l0).collect());
    let gamma = standard_loop(curve, s, z0)?;
    let t = crate::iterint::j_element(&Section::standard(curve), &gamma.path, &cfg.with_weight(n))?;
    Ok(l0.concat_product(&t).concat_product(&l0.inverse()))
}

/// `Σ_{w=uv} P(u)·L_v(z)`, where `values` holds `L_v(z)` for all words up to
/// the weight of `w`.
pub fn continue_value(p: &GroupLikeSeries<ClassLetter>, values: &BTreeMap<ClassWord, C64>, w: &ClassWord) -> C64 {
    w.splits()
        .map(|(u, v)| p.get(&u).unwrap_or_default() * values.get(&v).copied().unwrap_or_default())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> IntegratorConfig {
        IntegratorConfig::default()
    }

    fn w(ls: &[usize]) -> ClassWord {
        Word(ls.iter().map(|&l| ClassLetter(l)).collect())
    }

    fn li(n: u32, z: f64) -> f64 {
        (1..4000).map(|k| z.powi(k) / (k as f64).powi(n as i32)).sum()
    }

    #[test]
    fn regularization_reassembles() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        for word in [w(&[0, 1]), w(&[0, 0, 1, 0]), w(&[0, 1, 0, 0, 1]), w(&[0, 0, 0])] {
            let r = regularize(&c, &word).unwrap();
            for u in r.parts.values() {
                assert!(u.terms().all(|(x, _)| x.letters().first() != Some(&ClassLetter(0))));
            }
            let back = r.reassemble(&c, 0);
            assert_eq!(back, ShuffleTensor::monomial(c.class_alphabet(), word, Scalar::one()));
        }
    }

    #[test]
    fn polylog_values() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let z = 0.3;
        let v = eval_many(&c, &[w(&[1, 0]), w(&[1, 0, 0]), w(&[0]), w(&[1])], C64::new(z, 0.0), &PathClass::default(), &cfg())
            .unwrap();
        assert!((v[0].re + li(2, z)).abs() < 1e-9);
        assert!((v[1].re + li(3, z)).abs() < 1e-9);
        assert!((v[2] - C64::new(z.ln(), 0.0)).norm() < 1e-10);
        assert!((v[3] - C64::new((1.0 - z).ln(), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn regularized_value_matches_zero_series() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let word = w(&[0, 1, 0]);
        let z = C64::new(0.2, 0.1);
        let v = eval_l(&c, &word, z, &PathClass::default(), &cfg()).unwrap();
        let s = zero_seeded_series(&Section::standard(&c), [&word], 0, 80);
        let direct = s[&word].eval(z, z.ln());
        assert!((v - direct).norm() < 1e-10);
    }

    #[test]
    fn zeta_values() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let z2 = mzv(&c, &w(&[1, 0]), &cfg()).unwrap();
        assert!((z2.re + PI * PI / 6.0).abs() < 1e-7 && z2.im.abs() < 1e-7);
        let z3 = mzv(&c, &w(&[1, 0, 0]), &cfg()).unwrap();
        assert!((z3.re + 1.2020569031595942).abs() < 1e-7);
        assert!(matches!(mzv(&c, &w(&[0, 1]), &cfg()), Err(Error::DivergentWord)));
        assert_eq!(mzv(&c, &Word::empty(), &cfg()).unwrap(), C64::one());
        let c2 = Curve::from_ints(&[1, 2]).unwrap();
        assert!(matches!(eval_l(&c2, &w(&[0]), C64::new(0.5, 0.0), &PathClass::default(), &cfg()), Err(Error::MissingZero)));
    }

    #[test]
    fn monodromy_of_log() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let p = monodromy_series(&c, 0, 2, &cfg()).unwrap();
        let tau = C64::new(0.0, 2.0 * PI);
        assert!((p.value(&[ClassLetter(0)]) - tau).norm() < 1e-9);
        assert!(p.value(&[ClassLetter(1)]).norm() < 1e-9);
        let z = C64::new(0.3, 0.0);
        let words = words_up_to(&c.class_letters(), 2);
        let vals = eval_many(&c, &words, z, &PathClass::default(), &cfg()).unwrap();
        let values: BTreeMap<_, _> = words.iter().cloned().zip(vals).collect();
        let looped = PathClass::Default { loops: vec![(0, 1)] };
        for word in &words {
            let direct = eval_l(&c, word, z, &looped, &cfg()).unwrap();
            assert!((direct - continue_value(&p, &values, word)).norm() < 1e-8);
        }
    }
}
