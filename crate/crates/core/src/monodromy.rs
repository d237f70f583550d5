//! Loops around punctures, the pairing with class words, monodromy operators
//! on the weight-truncated word basis, and the period matrix.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::curve::{ClassLetter, Curve, Section};
use crate::error::{Error, Result};
use crate::iterint::{j_element, GroupLikeSeries, IntegratorConfig, Path, Segment};
use crate::par::{par_try_map, Execution};
use crate::shuffle::{words_up_to, Word};

type C64 = Complex64;
type ClassWord = Word<ClassLetter>;

/// A closed path at a basepoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Loop {
    pub path: Path,
    pub label: String,
}

impl Loop {
    pub fn new(path: Path, label: impl Into<String>) -> Result<Self> {
        path.validate()?;
        if !path.is_closed() {
            return Err(Error::InfeasibleLoop("path does not return to its basepoint".into()));
        }
        Ok(Loop {
            path,
            label: label.into(),
        })
    }

    /// The trivial loop at `x₀`.
    pub fn constant(x0: C64) -> Self {
        Loop {
            path: Path::new(x0),
            label: "1".into(),
        }
    }

    pub fn base(&self) -> C64 {
        self.path.base()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Loop) -> Result<Loop> {
        Ok(Loop {
            path: self.path.then(&other.path)?,
            label: format!("{}·{}", self.label, other.label),
        })
    }

    pub fn inverse(&self) -> Loop {
        Loop {
            path: self.path.reversed(),
            label: format!("{}⁻¹", self.label),
        }
    }

    pub fn power(&self, n: i32) -> Loop {
        let step = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Loop::constant(self.base());
        for _ in 0..n.unsigned_abs() {
            out = out.then(&step).expect("same basepoint");
        }
        if n == 1 {
            out.label = self.label.clone();
        }
        out
    }

    /// `(1/2πi)∮ dz/(z − p)`, integrated numerically.
    pub fn winding_number(&self, p: C64, cfg: &IntegratorConfig) -> Result<f64> {
        let f = crate::curve::NumericFunction::simple_poles(&[(p, C64::one())]);
        let v = crate::iterint::integrate_numeric(&[f], &self.path, &[vec![0]], cfg)?;
        Ok((v[0] / (2.0 * PI * C64::i())).re)
    }
}

/// Lollipop loop: segment from `x₀` to the circle `|z − s| = r`, one
/// counterclockwise turn, and back. If the segment runs into another pole
/// the entry point is rotated around the circle.
pub fn loop_around(curve: &Curve, s: usize, x0: C64, radius: f64) -> Result<Loop> {
    if s >= curve.len() {
        return Err(Error::InfeasibleLoop(format!("no pole with index {s}")));
    }
    let pts = curve.numeric_points();
    let sp = pts[s];
    let guard = curve.pole_guard();
    if curve.distance_to_poles(x0) < guard {
        return Err(Error::InfeasibleLoop("basepoint lies on the pole set".into()));
    }
    let nearest = pts
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != s)
        .map(|(_, p)| (p - sp).norm())
        .fold(f64::INFINITY, f64::min);
    if !(radius > guard && radius < 0.5 * nearest && radius < (x0 - sp).norm()) {
        return Err(Error::InfeasibleLoop(format!(
            "radius {radius} around {} from basepoint {x0}",
            curve.label(s)
        )));
    }
    let others: Vec<C64> = pts
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != s)
        .map(|(_, &p)| p)
        .collect();
    let theta0 = (x0 - sp).arg();
    let label = format!("γ_{}", curve.label(s));
    for k in 0..=24 {
        let offset = (k as f64 / 2.0).ceil() * PI / 12.0 * if k % 2 == 0 { 1.0 } else { -1.0 };
        let theta = theta0 + offset;
        let entry = sp + C64::from_polar(radius, theta);
        let stick = Path::straight(x0, entry);
        let clear_of_others = stick.distance_to(&others) > 0.25 * radius;
        let clear_of_s = stick.distance_to(&[sp]) > 0.5 * radius;
        if clear_of_others && clear_of_s {
            let path = stick
                .push(Segment::arc(sp, radius, theta, theta + 2.0 * PI))
                .line_to(x0);
            return Ok(Loop { path, label });
        }
    }
    Err(Error::InfeasibleLoop(format!(
        "no unobstructed entry point on the circle around {}",
        curve.label(s)
    )))
}

/// Radius used for the standard generator around `s` seen from `x₀`.
pub fn standard_radius(curve: &Curve, s: usize, x0: C64) -> f64 {
    let pts = curve.numeric_points();
    let sp = pts[s];
    let nearest = pts
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != s)
        .map(|(_, p)| (p - sp).norm())
        .fold(f64::INFINITY, f64::min);
    (0.4 * nearest).min(0.5 * (x0 - sp).norm())
}

pub fn standard_loop(curve: &Curve, s: usize, x0: C64) -> Result<Loop> {
    loop_around(curve, s, x0, standard_radius(curve, s, x0))
}

/// `a ↦ p_{σ,x₀}(γ, a) = I_{x₀}(σ(a))(γx₀)` for class words up to weight `n`.
pub fn pairing(section: &Section, gamma: &Loop, n: usize, cfg: &IntegratorConfig) -> Result<GroupLikeSeries<ClassLetter>> {
    j_element(section, &gamma.path, &cfg.with_weight(n))
}

/// Action of a loop on the span of `{L_w : weight(w) ≤ N}`, in the basis of
/// words ordered by (weight, lex): `(M F)_w = Σ_{w=uv} p(γ,u) F_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyOperator {
    weight: usize,
    words: Vec<ClassWord>,
    matrix: Vec<Vec<C64>>,
}

impl MonodromyOperator {
    pub fn from_pairing(p: &GroupLikeSeries<ClassLetter>, letters: &[ClassLetter]) -> Self {
        let n = p.weight();
        let words = words_up_to(letters, n);
        let index: BTreeMap<&ClassWord, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut matrix = vec![vec![C64::zero(); words.len()]; words.len()];
        for (i, w) in words.iter().enumerate() {
            for (u, v) in w.splits() {
                let val = if u.is_empty() { C64::one() } else { p.get(&u).unwrap_or_default() };
                matrix[i][index[&v]] = val;
            }
        }
        MonodromyOperator { weight: n, words, matrix }
    }

    pub fn identity(letters: &[ClassLetter], n: usize) -> Self {
        let words = words_up_to(letters, n);
        let m = words.len();
        let matrix = (0..m)
            .map(|i| (0..m).map(|j| if i == j { C64::one() } else { C64::zero() }).collect())
            .collect();
        MonodromyOperator { weight: n, words, matrix }
    }

    /// Arbitrary array on the standard word basis (used for controls).
    pub fn from_matrix(letters: &[ClassLetter], n: usize, matrix: Vec<Vec<C64>>) -> Result<Self> {
        let words = words_up_to(letters, n);
        if matrix.len() != words.len() || matrix.iter().any(|r| r.len() != words.len()) {
            return Err(Error::Config("matrix size does not match the word basis".into()));
        }
        Ok(MonodromyOperator { weight: n, words, matrix })
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn words(&self) -> &[ClassWord] {
        &self.words
    }

    pub fn matrix(&self) -> &[Vec<C64>] {
        &self.matrix
    }

    pub fn entry(&self, w: &ClassWord, v: &ClassWord) -> C64 {
        let i = self.words.iter().position(|x| x == w);
        let j = self.words.iter().position(|x| x == v);
        match (i, j) {
            (Some(i), Some(j)) => self.matrix[i][j],
            _ => C64::zero(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.words != other.words {
            return Err(Error::Config("operators on different word bases".into()));
        }
        Ok(MonodromyOperator {
            weight: self.weight,
            words: self.words.clone(),
            matrix: mat_mul(&self.matrix, &other.matrix),
        })
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        self.matrix
            .iter()
            .zip(&other.matrix)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }

    /// Exactly `1` on the diagonal and exactly `0` on every entry that does
    /// not strictly lower the weight.
    pub fn is_weight_unitriangular(&self) -> bool {
        for (i, wi) in self.words.iter().enumerate() {
            for (j, wj) in self.words.iter().enumerate() {
                let e = self.matrix[i][j];
                if i == j {
                    if e != C64::one() {
                        return false;
                    }
                } else if wj.weight() >= wi.weight() && e != C64::zero() {
                    return false;
                }
            }
        }
        true
    }

    /// `max |(M − Id)^{N+1}|` computed as dense array arithmetic.
    pub fn nilpotency_residual(&self) -> f64 {
        let m = self.matrix.len();
        let d: Vec<Vec<C64>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| self.matrix[i][j] - if i == j { C64::one() } else { C64::zero() })
                    .collect()
            })
            .collect();
        let mut p = d.clone();
        for _ in 0..self.weight {
            p = mat_mul(&p, &d);
        }
        p.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Continued values `M F` for function values `F` on the word basis.
    pub fn apply(&self, values: &[C64]) -> Vec<C64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(values).map(|(a, b)| a * b).sum())
            .collect()
    }
}

fn mat_mul(a: &[Vec<C64>], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![C64::zero(); m];
            for (k, &x) in row.iter().enumerate() {
                if x == C64::zero() {
                    continue;
                }
                for (o, &y) in out.iter_mut().zip(&b[k]) {
                    *o += x * y;
                }
            }
            out
        })
        .collect()
}

pub fn monodromy_operator(
    section: &Section,
    gamma: &Loop,
    n: usize,
    cfg: &IntegratorConfig,
) -> Result<MonodromyOperator> {
    let p = pairing(section, gamma, n, cfg)?;
    Ok(MonodromyOperator::from_pairing(&p, &section.curve().class_letters()))
}

/// Structural unitriangularity and numeric nilpotency of `M − Id`.
pub fn unipotence_check(m: &MonodromyOperator) -> bool {
    m.is_weight_unitriangular() && m.nilpotency_residual() < 1e-8
}

#[derive(Debug, Clone)]
pub struct PeriodMatrix {
    pub basepoint: C64,
    pub loops: Vec<Loop>,
    /// `entries[s][t] = ∮_{γ_s} σ(h_t)`
    pub entries: Vec<Vec<C64>>,
}

impl PeriodMatrix {
    pub fn determinant(&self) -> C64 {
        determinant(&self.entries)
    }
}

pub fn period_matrix(
    section: &Section,
    x0: Option<C64>,
    cfg: &IntegratorConfig,
    exec: Execution,
) -> Result<PeriodMatrix> {
    let curve = section.curve();
    let x0 = x0.unwrap_or_else(|| curve.default_basepoint().to_c64());
    let loops: Vec<Loop> = (0..curve.len())
        .map(|s| standard_loop(curve, s, x0))
        .collect::<Result<_>>()?;
    let letters = curve.class_letters();
    let entries = par_try_map(exec, &loops, |g| {
        let p = pairing(section, g, 1, cfg)?;
        Ok::<_, Error>(letters.iter().map(|&h| p.value(&[h])).collect::<Vec<_>>())
    })?;
    Ok(PeriodMatrix {
        basepoint: x0,
        loops,
        entries,
    })
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &[Vec<C64>]) -> C64 {
    let n = m.len();
    let mut a: Vec<Vec<C64>> = m.to_vec();
    let mut det = C64::one();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .expect("nonempty range");
        if a[piv][col] == C64::zero() {
            return C64::zero();
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[r][k] -= f * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> IntegratorConfig {
        IntegratorConfig::default()
    }

    #[test]
    fn loops_wind_once() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let g = loop_around(&c, 0, C64::new(1.0, 0.0), 0.25);
        // the basepoint is a pole here
        assert!(matches!(g, Err(Error::InfeasibleLoop(_))));
        let c0 = Curve::from_ints(&[0]).unwrap();
        let g = loop_around(&c0, 0, C64::new(1.0, 0.0), 0.25).unwrap();
        assert!((g.winding_number(C64::zero(), &cfg()).unwrap() - 1.0).abs() < 1e-10);
        // stick from −1 towards 1 would run through 0
        let g = loop_around(&c, 1, C64::new(-1.0, 0.0), 0.3).unwrap();
        assert!((g.winding_number(C64::one(), &cfg()).unwrap() - 1.0).abs() < 1e-10);
        assert!(g.winding_number(C64::zero(), &cfg()).unwrap().abs() < 1e-10);
        assert!(loop_around(&c, 1, C64::new(-1.0, 0.0), 0.6).is_err());
    }

    #[test]
    fn pairing_and_operator() {
        let c0 = Curve::from_ints(&[0]).unwrap();
        let sigma = Section::standard(&c0);
        let g = loop_around(&c0, 0, C64::new(1.0, 0.0), 0.5).unwrap();
        let p = pairing(&sigma, &g, 2, &cfg()).unwrap();
        let tpi = 2.0 * PI * C64::i();
        assert!((p.value(&[ClassLetter(0)]) - tpi).norm() < 1e-9);
        assert!((p.value(&[ClassLetter(0), ClassLetter(0)]) - tpi * tpi / 2.0).norm() < 1e-9);
        assert_eq!(p.value(&[]), C64::one());

        let m = monodromy_operator(&sigma, &g, 1, &cfg()).unwrap();
        let w = Word(vec![ClassLetter(0)]);
        assert_eq!(m.entry(&w, &w), C64::one());
        assert!((m.entry(&w, &Word::empty()) - tpi).norm() < 1e-9);
        assert!(unipotence_check(&m));
        let id = monodromy_operator(&sigma, &Loop::constant(C64::one()), 3, &cfg()).unwrap();
        assert_eq!(id, MonodromyOperator::identity(&c0.class_letters(), 3));
        assert!(unipotence_check(&id));

        let mut bad = MonodromyOperator::identity(&c0.class_letters(), 2).matrix().to_vec();
        bad[1][1] = C64::new(2.0, 0.0);
        let bad = MonodromyOperator::from_matrix(&c0.class_letters(), 2, bad).unwrap();
        assert!(!unipotence_check(&bad));
    }

    #[test]
    fn periods() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let pm = period_matrix(&Section::standard(&c), None, &cfg(), Execution::Sequential).unwrap();
        let tpi = 2.0 * PI * C64::i();
        for s in 0..2 {
            for t in 0..2 {
                let expect = if s == t { tpi } else { C64::zero() };
                assert!((pm.entries[s][t] - expect).norm() < 1e-9);
            }
        }
        assert!((pm.determinant() - tpi * tpi).norm() < 1e-8);
    }
}
