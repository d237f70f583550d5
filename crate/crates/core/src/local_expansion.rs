//! Truncated expansions `Σ c_{j,k} (z − s)ʲ logᵏ(z − s)` of iterated integrals
//! near a puncture `s`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::curve::{ClassLetter, RationalFunction, Section};
use crate::error::{Error, Result};
use crate::hyperlog::{self, PathClass};
use crate::iterint::{integrate_class_tensors, IntegratorConfig, Path};
use crate::shuffle::{ShuffleTensor, Word};

type C64 = Complex64;
type ClassWord = Word<ClassLetter>;

/// Working precision of internal expansions before truncation.
const INTERNAL_ORDER: i32 = 56;

/// Sparse `Σ c_{j,k} xʲ Lᵏ` in the local coordinate `x = z − s`, `L = log x`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LogLaurent {
    terms: BTreeMap<(i32, u32), C64>,
}

impl LogLaurent {
    pub fn zero() -> Self {
        LogLaurent::default()
    }

    pub fn one() -> Self {
        let mut s = Self::zero();
        s.add(0, 0, C64::one());
        s
    }

    pub fn terms(&self) -> &BTreeMap<(i32, u32), C64> {
        &self.terms
    }

    pub fn coeff(&self, j: i32, k: u32) -> C64 {
        self.terms.get(&(j, k)).copied().unwrap_or_default()
    }

    pub fn add(&mut self, j: i32, k: u32, c: C64) {
        if c == C64::zero() {
            return;
        }
        *self.terms.entry((j, k)).or_default() += c;
    }

    pub fn log_degree(&self) -> usize {
        self.terms
            .iter()
            .filter(|(_, c)| **c != C64::zero())
            .map(|(&(_, k), _)| k as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn min_order(&self) -> i32 {
        self.terms.keys().map(|&(j, _)| j).min().unwrap_or(0)
    }

    pub fn mul_truncated(&self, other: &Self, jmax: i32) -> Self {
        let mut out = Self::zero();
        for (&(j1, k1), a) in &self.terms {
            for (&(j2, k2), b) in &other.terms {
                if j1 + j2 <= jmax {
                    out.add(j1 + j2, k1 + k2, a * b);
                }
            }
        }
        out
    }

    /// Termwise antiderivative without constant term.
    pub fn integrate(&self) -> Self {
        let mut out = Self::zero();
        for (&(j, k), &c) in &self.terms {
            if j == -1 {
                out.add(0, k + 1, c / (k as f64 + 1.0));
                continue;
            }
            let jp = (j + 1) as f64;
            let mut fall = 1.0; // k!/(k−m)!
            for m in 0..=k {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                out.add(j + 1, k - m, c * (sign * fall / jp.powi(m as i32 + 1)));
                fall *= (k - m) as f64;
            }
        }
        out
    }

    pub fn eval(&self, x: C64, log: C64) -> C64 {
        let mut acc = C64::zero();
        for (&(j, k), &c) in &self.terms {
            acc += c * x.powi(j) * log.powu(k);
        }
        acc
    }

    /// `L ↦ L + shift`
    pub fn shift_log(&self, shift: C64) -> Self {
        let mut out = Self::zero();
        for (&(j, k), &c) in &self.terms {
            // binomial expansion of (L + shift)^k
            let mut binom = 1.0;
            for m in 0..=k {
                out.add(j, k - m, c * binom * shift.powu(m));
                binom = binom * (k - m) as f64 / (m + 1) as f64;
            }
        }
        out
    }

    fn truncated(&self, jmax: i32, kmax: u32) -> Self {
        LogLaurent {
            terms: self
                .terms
                .iter()
                .filter(|(&(j, k), _)| j <= jmax && k <= kmax)
                .map(|(&key, &c)| (key, c))
                .collect(),
        }
    }
}

/// Laurent expansion of a rational function at the pole with index `s`, up
/// to `x^{jmax}`.
pub fn laurent_at(f: &RationalFunction, s: usize, jmax: i32) -> LogLaurent {
    let curve = f.curve();
    let pts = curve.numeric_points();
    let sp = pts[s];
    let mut out = LogLaurent::zero();
    // Σ a_m (x + s)^m
    for (m, a) in f.poly().iter().enumerate() {
        let a = a.to_c64();
        let mut binom = 1.0;
        for j in 0..=m {
            if j as i32 <= jmax {
                out.add(j as i32, 0, a * binom * sp.powu((m - j) as u32));
            }
            binom = binom * (m - j) as f64 / (j + 1) as f64;
        }
    }
    for (&(t, k), c) in f.principal() {
        let c = c.to_c64();
        if t == s {
            out.add(-(k as i32), 0, c);
            continue;
        }
        // c (x + d)^{−k} = c Σ_n binom(−k, n) d^{−k−n} xⁿ
        let d = sp - pts[t];
        let mut coef = c * d.powi(-(k as i32));
        for n in 0..=jmax.max(0) {
            out.add(n, 0, coef);
            coef *= -((k as i32 + n) as f64) / ((n + 1) as f64) / d;
        }
    }
    out
}

/// `log x` with argument in `(φ − π, φ + π]`; on the cut the value reached
/// from the upper half plane is taken.
pub fn branch_log(x: C64, phi: f64) -> C64 {
    let mut th = x.arg();
    let wrap = |t: f64| t - 2.0 * PI * ((t - phi + PI) / (2.0 * PI)).ceil() + 2.0 * PI;
    th = wrap(th);
    let cut = phi + PI;
    if (th - cut).abs() < 1e-13 || (th - (phi - PI)).abs() < 1e-13 {
        let probe = wrap((x + C64::new(0.0, 1e-7 * x.norm())).arg());
        th = if probe > phi { cut } else { phi - PI };
        if x.im == 0.0 && (probe - th).abs() > 1.0 {
            th = cut;
        }
    }
    C64::new(x.norm().ln(), th)
}

/// Which function of the word is expanded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpansionTarget {
    /// Regularized hyperlogarithm `L_w` (standard section, basepoint 0).
    Hyperlog,
    /// `I_{x₀}(σ(w))` along the default route from `x₀`.
    Based { x0: C64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogLaurentExpansion {
    pub center: C64,
    pub center_label: String,
    pub radius: f64,
    /// Argument of `z − s` at the matching point; the log branch is centered here.
    pub ref_angle: f64,
    pub j_max: i32,
    pub k_max: u32,
    pub series: LogLaurent,
}

#[derive(Serialize)]
struct TermJson {
    j: i32,
    k: u32,
    coeff: [f64; 2],
}

#[derive(Serialize)]
struct ExpansionJson {
    center: String,
    radius: f64,
    terms: Vec<TermJson>,
}

impl LogLaurentExpansion {
    pub fn coeff(&self, j: i32, k: u32) -> C64 {
        self.series.coeff(j, k)
    }

    pub fn log_degree(&self) -> usize {
        self.series.log_degree()
    }

    pub fn evaluate(&self, z: C64) -> Result<C64> {
        let x = z - self.center;
        let d = x.norm();
        if !(d > 0.0 && d < self.radius) {
            return Err(Error::OutsideDisk(format!("{z}")));
        }
        Ok(self.series.eval(x, branch_log(x, self.ref_angle)))
    }

    /// Expansion continued `turns` times counterclockwise around the center.
    pub fn log_shift(&self, turns: i32) -> Self {
        LogLaurentExpansion {
            series: self.series.shift_log(C64::new(0.0, 2.0 * PI * turns as f64)),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms = self
            .series
            .terms()
            .iter()
            .map(|(&(j, k), c)| TermJson {
                j,
                k,
                coeff: [c.re, c.im],
            })
            .collect();
        serde_json::to_value(ExpansionJson {
            center: self.center_label.clone(),
            radius: self.radius,
            terms,
        })
        .expect("expansion serializes")
    }
}

/// Half the distance from `s` to the nearest other pole.
pub fn expansion_radius(section: &Section, s: usize) -> f64 {
    let pts = section.curve().numeric_points();
    0.5 * pts
        .iter()
        .enumerate()
        .filter(|&(t, _)| t != s)
        .map(|(_, p)| (p - pts[s]).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Zero-constant expansions at `s` of every prefix of every word.
pub(crate) fn zero_seeded_series<'a>(
    section: &Section,
    words: impl IntoIterator<Item = &'a ClassWord>,
    s: usize,
    jint: i32,
) -> BTreeMap<ClassWord, LogLaurent> {
    let letters: Vec<LogLaurent> = (0..section.curve().len())
        .map(|t| laurent_at(section.of_class(t).coefficient(), s, jint))
        .collect();
    let mut memo: BTreeMap<ClassWord, LogLaurent> = BTreeMap::new();
    memo.insert(Word::empty(), LogLaurent::one());
    for w in words {
        for n in 1..=w.weight() {
            let p = w.prefix(n);
            if memo.contains_key(&p) {
                continue;
            }
            let parent = &memo[&w.prefix(n - 1)];
            let a = &letters[w.letters()[n - 1].0];
            let e = parent.mul_truncated(a, jint).integrate();
            memo.insert(p, e);
        }
    }
    memo
}

fn target_values(
    section: &Section,
    target: ExpansionTarget,
    words: &[ClassWord],
    z: C64,
    cfg: &IntegratorConfig,
) -> Result<Vec<C64>> {
    match target {
        ExpansionTarget::Hyperlog => hyperlog::eval_many(section.curve(), words, z, &PathClass::default(), cfg),
        ExpansionTarget::Based { x0 } => {
            let path = Path::route(section.curve().numeric_points(), x0, z);
            let ts: Vec<ShuffleTensor<ClassLetter>> = words
                .iter()
                .map(|w| ShuffleTensor::monomial(section.curve().class_alphabet(), w.clone(), One::one()))
                .collect();
            integrate_class_tensors(section, &path, &ts.iter().collect::<Vec<_>>(), cfg)
        }
    }
}

/// Expansion of the target function of `w` at the pole with index `s`,
/// keeping `j ≤ j_max` and `k ≤ k_max`.
pub fn expand_at(
    section: &Section,
    target: ExpansionTarget,
    w: &ClassWord,
    s: usize,
    j_max: usize,
    k_max: usize,
    cfg: &IntegratorConfig,
) -> Result<LogLaurentExpansion> {
    let curve = section.curve();
    if s >= curve.len() {
        return Err(Error::Config(format!("no pole with index {s}")));
    }
    let base = match target {
        ExpansionTarget::Hyperlog => {
            if !section.is_standard() {
                return Err(Error::Config("hyperlogarithms use the standard section".into()));
            }
            hyperlog::base_point(curve)?
        }
        ExpansionTarget::Based { x0 } => x0,
    };
    let sp = curve.numeric_points()[s];
    let radius = expansion_radius(section, s);
    let zero_seeded = matches!(target, ExpansionTarget::Hyperlog) && hyperlog::zero_index(curve)? == s;
    let phi = if zero_seeded { 0.0 } else { (base - sp).arg() };

    // lost orders from letters with higher poles at s
    let letters: Vec<RationalFunction> = (0..curve.len())
        .map(|t| section.of_class(t).coefficient().clone())
        .collect();
    let extra: i32 = w
        .letters()
        .iter()
        .map(|l| (letters[l.0].pole_order(s) as i32 - 1).max(0))
        .sum();
    let jint = (j_max as i32).max(INTERNAL_ORDER) + extra + 2;

    let series = if zero_seeded {
        zero_seeded_series(section, [w], s, jint).remove(w).expect("word expanded")
    } else {
        let reach = radius.min((base - sp).norm());
        let x_ref = C64::from_polar(0.5 * reach, phi);
        let prefixes: Vec<ClassWord> = (1..=w.weight()).map(|n| w.prefix(n)).collect();
        let values = target_values(section, target, &prefixes, sp + x_ref, cfg)?;
        let log_ref = branch_log(x_ref, phi);
        let lau: Vec<LogLaurent> = letters.iter().map(|f| laurent_at(f, s, jint)).collect();
        let mut e = LogLaurent::one();
        for (n, l) in w.letters().iter().enumerate() {
            let mut next = e.mul_truncated(&lau[l.0], jint).integrate();
            let c = values[n] - next.eval(x_ref, log_ref);
            next.add(0, 0, c);
            e = next;
        }
        if !w.is_empty() {
            let x_chk = C64::from_polar(0.5 * reach, phi + 1.0);
            let v = target_values(section, target, std::slice::from_ref(w), sp + x_chk, cfg)?[0];
            let got = e.eval(x_chk, branch_log(x_chk, phi));
            let res = (got - v).norm();
            if res > 1e-7 * v.norm().max(1.0) {
                return Err(Error::MatchingFailed(res));
            }
        }
        e
    };
    let found = series.log_degree();
    if found > k_max {
        return Err(Error::LogDegree { found, bound: k_max });
    }
    Ok(LogLaurentExpansion {
        center: sp,
        center_label: curve.label(s),
        radius,
        ref_angle: phi,
        j_max: j_max as i32,
        k_max: k_max as u32,
        series: series.truncated(j_max as i32, k_max as u32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;

    fn cfg() -> IntegratorConfig {
        IntegratorConfig::default()
    }

    #[test]
    fn branch_conventions() {
        let l = branch_log(C64::new(-1.0, 0.0), 0.0);
        assert!((l.im - PI).abs() < 1e-15);
        let l = branch_log(C64::new(1.0, 0.0), PI);
        assert!(l.im.abs() < 1e-15);
        let l = branch_log(C64::new(0.0, -1.0), PI);
        assert!((l.im - 1.5 * PI).abs() < 1e-15);
        let l = branch_log(C64::new(0.0, -1.0), 0.0);
        assert!((l.im + 0.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn integrate_log_terms() {
        let mut f = LogLaurent::zero();
        f.add(2, 2, C64::one());
        f.add(-1, 1, C64::new(0.0, 1.0));
        let g = f.integrate();
        let x = C64::new(0.3, 0.2);
        let h = 1e-6;
        let lg = |x: C64| branch_log(x, 0.0);
        let num = (g.eval(x + h, lg(x + h)) - g.eval(x - h, lg(x - h))) / (2.0 * h);
        assert!((num - f.eval(x, lg(x))).norm() < 1e-8);
    }

    #[test]
    fn expansions_at_zero() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let sigma = Section::standard(&c);
        let h0 = Word(vec![ClassLetter(0)]);
        let e = expand_at(&sigma, ExpansionTarget::Hyperlog, &h0, 0, 4, 1, &cfg()).unwrap();
        assert_eq!(e.series.terms().len(), 1);
        assert_eq!(e.coeff(0, 1), C64::one());
        let q = e.evaluate(C64::new(0.25, 0.0)).unwrap();
        assert!((q - 0.25f64.ln()).norm() < 1e-15);

        let h1 = Word(vec![ClassLetter(1)]);
        let e = expand_at(&sigma, ExpansionTarget::Hyperlog, &h1, 0, 8, 1, &cfg()).unwrap();
        assert_eq!(e.log_degree(), 0);
        for n in 1..=8 {
            assert!((e.coeff(n, 0) + 1.0 / n as f64).norm() < 1e-15);
        }
        let v = e.evaluate(C64::new(0.1, 0.0)).unwrap();
        assert!((v.re - (-0.1053605)).abs() < 1e-7);
        assert!(matches!(e.evaluate(C64::new(0.7, 0.0)), Err(Error::OutsideDisk(_))));
        assert!(matches!(
            expand_at(&sigma, ExpansionTarget::Hyperlog, &h0, 0, 4, 0, &cfg()),
            Err(Error::LogDegree { found: 1, bound: 0 })
        ));
    }

    #[test]
    fn expansion_at_one_matches_branch() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let sigma = Section::standard(&c);
        let h1 = Word(vec![ClassLetter(1)]);
        let e = expand_at(&sigma, ExpansionTarget::Hyperlog, &h1, 1, 6, 1, &cfg()).unwrap();
        assert!((e.coeff(0, 1) - C64::one()).norm() < 1e-12);
        assert!((e.coeff(0, 0) - C64::new(0.0, -PI)).norm() < 1e-9);
    }
    #[test]
    fn based_expansion_with_corrected_section() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let g = RationalFunction::pole_term(&c, 1, 1, crate::scalar::Scalar::from_int(2));
        let sigma = Section::with_corrections(&c, vec![g, RationalFunction::z(&c)]).unwrap();
        let x0 = C64::new(-1.0, 0.5);
        let w = Word(vec![ClassLetter(1), ClassLetter(0)]);
        let target = ExpansionTarget::Based { x0 };
        let e = expand_at(&sigma, target, &w, 1, 40, 2, &cfg()).unwrap();
        let z = C64::new(1.1, -0.15);
        let direct = target_values(&sigma, target, std::slice::from_ref(&w), z, &cfg()).unwrap()[0];
        assert!((e.evaluate(z).unwrap() - direct).norm() < 1e-8);
        let json = e.to_json();
        assert_eq!(json["center"], "1");
        assert!(json["terms"].as_array().unwrap().len() > 3);
    }
}
