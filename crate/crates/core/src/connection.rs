//! Elements of `O(C) ⊗ Sh(H^dR)` and the connection `∇_σ` on them.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::curve::{ClassLetter, Curve, Differential, RationalFunction, Section};
use crate::error::{Error, Result};
use crate::iterint::{section_numeric, IntegratorConfig, Path, WordSystem};
use crate::scalar::Scalar;
use crate::shuffle::{shuffle_words, Word};

type ClassWord = Word<ClassLetter>;

/// `Σ f_w ⊗ w` with `f_w ∈ O(C)` and class words `w`.
#[derive(Clone, PartialEq)]
pub struct FunctionTensor {
    curve: Curve,
    terms: BTreeMap<ClassWord, RationalFunction>,
}

impl FunctionTensor {
    pub fn zero(curve: &Curve) -> Self {
        FunctionTensor {
            curve: curve.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `f ⊗ w`
    pub fn single(curve: &Curve, w: ClassWord, f: RationalFunction) -> Self {
        let mut t = Self::zero(curve);
        t.add_term(w, f);
        t
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn terms(&self) -> &BTreeMap<ClassWord, RationalFunction> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.terms.keys().map(Word::weight).max().unwrap_or(0)
    }

    pub fn coeff(&self, w: &ClassWord) -> RationalFunction {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.curve))
    }

    pub fn add_term(&mut self, w: ClassWord, f: RationalFunction) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(g) => {
                *g = g.add(&f).expect("shared pole set");
                if g.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, f);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.curve.same_as(&other.curve) {
            return Err(Error::PoleSetMismatch);
        }
        let mut out = self.clone();
        for (w, f) in &other.terms {
            out.add_term(w.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Scalar::from_int(1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.curve);
        for (w, f) in &self.terms {
            out.add_term(w.clone(), f.scale(c));
        }
        out
    }

    /// `(a ⊗ f)(b ⊗ g) = (a⧢b) ⊗ fg`
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if !self.curve.same_as(&other.curve) {
            return Err(Error::PoleSetMismatch);
        }
        let mut out = Self::zero(&self.curve);
        for (a, f) in &self.terms {
            for (b, g) in &other.terms {
                let fg = f.mul(g)?;
                for (w, m) in shuffle_words(a.letters(), b.letters()) {
                    out.add_term(w, fg.scale(&Scalar::from_int(m as i64)));
                }
            }
        }
        Ok(out)
    }

    /// `Σ f_w(z)·I_{x₀}(σ(w))(z)` along `path` from `x₀` to `z`.
    pub fn eval(&self, section: &Section, path: &Path, cfg: &IntegratorConfig) -> Result<Complex64> {
        let z = path.end();
        let coeffs: Vec<(ClassWord, Complex64)> = self
            .terms
            .iter()
            .map(|(w, f)| Ok((w.clone(), f.evaluate(z)?)))
            .collect::<Result<_>>()?;
        eval_combination(section, path, &coeffs, cfg)
    }
}

pub(crate) fn eval_combination(
    section: &Section,
    path: &Path,
    coeffs: &[(ClassWord, Complex64)],
    cfg: &IntegratorConfig,
) -> Result<Complex64> {
    if coeffs.is_empty() {
        return Ok(Complex64::zero());
    }
    let forms = section_numeric(section);
    let sys = WordSystem::new(coeffs.iter().map(|(w, _)| w), |l| forms[l.0].clone());
    let curve = section.curve();
    let y = sys.solve(path, sys.unit_state(), curve.numeric_points(), curve.pole_guard(), cfg, None)?;
    Ok(coeffs
        .iter()
        .map(|(w, c)| c * y[sys.node(w).expect("present")])
        .sum())
}

impl fmt::Debug for FunctionTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, g)| format!("[{g:?}]⊗{w:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Σ ω_w ⊗ w` with `ω_w ∈ Ω(C)`: values of the connection.
#[derive(Clone, PartialEq)]
pub struct FormTensor {
    curve: Curve,
    terms: BTreeMap<ClassWord, Differential>,
}

impl FormTensor {
    pub fn zero(curve: &Curve) -> Self {
        FormTensor {
            curve: curve.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn terms(&self) -> &BTreeMap<ClassWord, Differential> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &ClassWord) -> Option<&Differential> {
        self.terms.get(w)
    }

    pub fn add_term(&mut self, w: ClassWord, om: Differential) {
        if om.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(g) => {
                *g = g.add(&om).expect("shared pole set");
                if g.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, om);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.curve.same_as(&other.curve) {
            return Err(Error::PoleSetMismatch);
        }
        let mut out = self.clone();
        for (w, om) in &other.terms {
            out.add_term(w.clone(), om.clone());
        }
        Ok(out)
    }

    /// `(a ⊗ f)·(b ⊗ ω) = (a⧢b) ⊗ fω`
    pub fn times(&self, x: &FunctionTensor) -> Result<Self> {
        let mut out = Self::zero(&self.curve);
        for (a, f) in x.terms() {
            for (b, om) in &self.terms {
                let fo = om.times(f)?;
                for (w, m) in shuffle_words(a.letters(), b.letters()) {
                    out.add_term(w, fo.scale(&Scalar::from_int(m as i64)));
                }
            }
        }
        Ok(out)
    }

    /// Coefficient of `dz` in `Σ ω_w(z)·I_{x₀}(σ(w))(z)`.
    pub fn eval(&self, section: &Section, path: &Path, cfg: &IntegratorConfig) -> Result<Complex64> {
        let z = path.end();
        let coeffs: Vec<(ClassWord, Complex64)> = self
            .terms
            .iter()
            .map(|(w, om)| Ok((w.clone(), om.coefficient().evaluate(z)?)))
            .collect::<Result<_>>()?;
        eval_combination(section, path, &coeffs, cfg)
    }
}

impl fmt::Debug for FormTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, g)| format!("[{g:?}]⊗{w:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `∇_σ(a ⊗ f) = a ⊗ df + Σ_i R_{hⁱ}(a) ⊗ σ(h_i)·f`
pub fn nabla_sigma(section: &Section, x: &FunctionTensor) -> Result<FormTensor> {
    if !section.curve().same_as(x.curve()) {
        return Err(Error::PoleSetMismatch);
    }
    let mut out = FormTensor::zero(x.curve());
    for (w, f) in x.terms() {
        out.add_term(w.clone(), Differential::exact(f));
        if let Some(last) = w.letters().last() {
            let head = w.prefix(w.weight() - 1);
            out.add_term(head, section.of_class(last.0).times(f)?);
        }
    }
    Ok(out)
}

/// `∇(xy) − x∇y − y∇x`; zero for a derivation.
pub fn derivation_defect(section: &Section, x: &FunctionTensor, y: &FunctionTensor) -> Result<FormTensor> {
    let lhs = nabla_sigma(section, &x.mul(y)?)?;
    let rhs = nabla_sigma(section, y)?.times(x)?.add(&nabla_sigma(section, x)?.times(y)?)?;
    let mut out = lhs;
    for (w, om) in rhs.terms() {
        out.add_term(w.clone(), om.scale(&-Scalar::from_int(1)));
    }
    Ok(out)
}

/// Compares the central difference of `z ↦ eval(x)(z)` with `eval(∇x)(z)`.
/// Returns `(numeric derivative, connection value)`.
pub fn connection_derivative(
    section: &Section,
    x: &FunctionTensor,
    to_z: &Path,
    h: f64,
    cfg: &IntegratorConfig,
) -> Result<(Complex64, Complex64)> {
    let z = to_z.end();
    let plus = to_z.clone().line_to(z + h);
    let minus = to_z.clone().line_to(z - h);
    let fp = x.eval(section, &plus, cfg)?;
    let fm = x.eval(section, &minus, cfg)?;
    let numeric = (fp - fm) / (2.0 * h);
    let symbolic = nabla_sigma(section, x)?.eval(section, to_z, cfg)?;
    Ok((numeric, symbolic))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn nabla_examples() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let sigma = Section::standard(&c);
        let f = RationalFunction::from_parts(&c, vec![Scalar::from_int(2), Scalar::one()], [((1, 2), Scalar::from_int(3))])
            .unwrap();
        let x = FunctionTensor::single(&c, Word::empty(), f.clone());
        let n = nabla_sigma(&sigma, &x).unwrap();
        assert_eq!(n.terms().len(), 1);
        assert_eq!(n.coeff(&Word::empty()).unwrap(), &Differential::exact(&f));

        let y = FunctionTensor::single(&c, Word(vec![ClassLetter(1)]), RationalFunction::one(&c));
        let n = nabla_sigma(&sigma, &y).unwrap();
        assert_eq!(n.terms().len(), 1);
        assert_eq!(n.coeff(&Word::empty()).unwrap(), &sigma.of_class(1));
    }

    #[test]
    fn leibniz() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let g = RationalFunction::pole_term(&c, 0, 2, Scalar::from_int(1));
        let sigma = Section::with_corrections(&c, vec![g.clone(), RationalFunction::z(&c)]).unwrap();
        let mut x = FunctionTensor::single(&c, Word(vec![ClassLetter(0), ClassLetter(1)]), g.clone());
        x.add_term(Word(vec![ClassLetter(1)]), RationalFunction::z(&c));
        let y = FunctionTensor::single(&c, Word(vec![ClassLetter(0)]), RationalFunction::pole_term(&c, 1, 1, Scalar::one()));
        assert!(derivation_defect(&sigma, &x, &y).unwrap().is_zero());
    }
}
