//! Exact model of `C = P¹ ∖ (S∞ ∪ {∞})` for a finite set `S∞` of Gaussian
//! rational points.
//!
//! Functions on `C` are kept in partial-fraction normal form
//! `Σ aₖ zᵏ + Σ_{s,k} c_{s,k} (z − s)^{−k}`, which makes the representation
//! unique and zero tests exact. Differentials are `f·dz`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::shuffle::AlphabetId;

#[derive(Debug)]
struct CurveData {
    points: Vec<Scalar>,
    numeric: Vec<Complex64>,
    form_alphabet: AlphabetId,
    class_alphabet: AlphabetId,
}

/// The pole set `S∞`; cheap to clone.
#[derive(Clone)]
pub struct Curve(Arc<CurveData>);

impl Curve {
    pub fn new(points: Vec<Scalar>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyPoleSet);
        }
        for (k, p) in points.iter().enumerate() {
            if points[..k].contains(p) {
                return Err(Error::RepeatedPole(p.to_string()));
            }
        }
        let label = points.iter().map(Scalar::to_string).collect::<Vec<_>>().join(",");
        Ok(Curve(Arc::new(CurveData {
            numeric: points.iter().map(Scalar::to_c64).collect(),
            form_alphabet: AlphabetId::named(&format!("forms:{label}")),
            class_alphabet: AlphabetId::named(&format!("classes:{label}")),
            points,
        })))
    }

    /// Parses a comma-separated list of exact points, e.g. `"0,1,1/2+i"`.
    pub fn parse(list: &str) -> Result<Self> {
        let points = list
            .split(',')
            .map(|s| s.trim().parse::<Scalar>())
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Curve::new(points)
    }

    pub fn from_ints(points: &[i64]) -> Result<Self> {
        Curve::new(points.iter().map(|&p| Scalar::from_int(p)).collect())
    }

    pub fn points(&self) -> &[Scalar] {
        &self.0.points
    }

    pub fn point(&self, idx: usize) -> &Scalar {
        &self.0.points[idx]
    }

    pub fn numeric_points(&self) -> &[Complex64] {
        &self.0.numeric
    }

    pub fn len(&self) -> usize {
        self.0.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.points.is_empty()
    }

    pub fn index_of(&self, p: &Scalar) -> Option<usize> {
        self.0.points.iter().position(|q| q == p)
    }

    /// Looks a pole up by its printed label (any exact spelling is accepted).
    pub fn index_of_label(&self, label: &str) -> Result<usize> {
        let p: Scalar = label.parse()?;
        self.index_of(&p)
            .ok_or_else(|| crate::error::ParseError::UnknownLabel(label.to_string()).into())
    }

    pub fn label(&self, idx: usize) -> String {
        self.0.points[idx].to_string()
    }

    pub fn form_alphabet(&self) -> AlphabetId {
        self.0.form_alphabet
    }

    pub fn class_alphabet(&self) -> AlphabetId {
        self.0.class_alphabet
    }

    pub fn class_letters(&self) -> Vec<ClassLetter> {
        (0..self.len()).map(ClassLetter).collect()
    }

    pub fn min_pairwise_distance(&self) -> f64 {
        let pts = &self.0.numeric;
        let mut best = f64::INFINITY;
        for i in 0..pts.len() {
            for j in 0..i {
                best = best.min((pts[i] - pts[j]).norm());
            }
        }
        best
    }

    /// Minimum admissible distance between an integration path and `S∞`.
    pub fn pole_guard(&self) -> f64 {
        let d = self.min_pairwise_distance();
        if d.is_finite() {
            (1e-3 * d).max(1e-8)
        } else {
            1e-8
        }
    }

    pub fn distance_to_poles(&self, z: Complex64) -> f64 {
        self.0
            .numeric
            .iter()
            .map(|p| (z - p).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Point of the half-integer grid around `S∞` farthest from `S∞`.
    pub fn default_basepoint(&self) -> Scalar {
        let pts = &self.0.numeric;
        let lo_re = pts.iter().map(|p| p.re).fold(f64::INFINITY, f64::min).floor() as i64 - 1;
        let hi_re = pts.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max).ceil() as i64 + 1;
        let lo_im = pts.iter().map(|p| p.im).fold(f64::INFINITY, f64::min).floor() as i64 - 1;
        let hi_im = pts.iter().map(|p| p.im).fold(f64::NEG_INFINITY, f64::max).ceil() as i64 + 1;
        let mut best = (f64::NEG_INFINITY, 0, 0);
        for a in 2 * lo_re..=2 * hi_re {
            for b in 2 * lo_im..=2 * hi_im {
                let d = self.distance_to_poles(Complex64::new(a as f64 / 2.0, b as f64 / 2.0));
                if d > best.0 + 1e-12 {
                    best = (d, a, b);
                }
            }
        }
        Scalar::gaussian(best.1, 2, best.2, 2)
    }

    pub fn same_as(&self, other: &Curve) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.points == other.0.points
    }
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve{:?}", self.0.points)
    }
}

/// Basis letter of `Ω(C)`: `zᵏ dz` or `(z − s)^{−k} dz`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormLetter {
    Monomial(u32),
    Pole { pole: usize, order: u32 },
}

/// Basis class `h_s` of `H^dR`, indexed by the position of `s` in `S∞`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassLetter(pub usize);

impl fmt::Debug for ClassLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h{}", self.0)
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `binom(−l, m) = (−1)ᵐ binom(l + m − 1, m)` for `l ≥ 1`.
fn neg_binomial(l: u32, m: u32) -> Scalar {
    let b = binomial((l + m - 1) as u64, m as u64);
    let v = Scalar::from(num_rational::BigRational::from_integer(b));
    if m % 2 == 1 {
        -v
    } else {
        v
    }
}

fn int_scalar(b: BigInt) -> Scalar {
    Scalar::from(num_rational::BigRational::from_integer(b))
}

/// Element of `O(C) = ℂ[z, 1/(z − s), s ∈ S∞]` in partial-fraction form.
#[derive(Clone, PartialEq)]
pub struct RationalFunction {
    curve: Curve,
    poly: Vec<Scalar>,
    principal: BTreeMap<(usize, u32), Scalar>,
}

impl RationalFunction {
    pub fn zero(curve: &Curve) -> Self {
        RationalFunction {
            curve: curve.clone(),
            poly: Vec::new(),
            principal: BTreeMap::new(),
        }
    }

    pub fn constant(curve: &Curve, c: Scalar) -> Self {
        let mut f = Self::zero(curve);
        f.add_poly_term(0, c);
        f
    }

    pub fn one(curve: &Curve) -> Self {
        Self::constant(curve, Scalar::one())
    }

    /// `c·zᵏ`
    pub fn monomial(curve: &Curve, k: u32, c: Scalar) -> Self {
        let mut f = Self::zero(curve);
        f.add_poly_term(k, c);
        f
    }

    /// `c·(z − s)^{−order}` with `s = S∞[pole]`.
    pub fn pole_term(curve: &Curve, pole: usize, order: u32, c: Scalar) -> Self {
        assert!(order >= 1 && pole < curve.len());
        let mut f = Self::zero(curve);
        f.add_principal(pole, order, c);
        f
    }

    /// The coordinate function `z`.
    pub fn z(curve: &Curve) -> Self {
        Self::monomial(curve, 1, Scalar::one())
    }

    pub fn from_parts(
        curve: &Curve,
        poly: Vec<Scalar>,
        principal: impl IntoIterator<Item = ((usize, u32), Scalar)>,
    ) -> Result<Self> {
        let mut f = Self::zero(curve);
        for (k, c) in poly.into_iter().enumerate() {
            f.add_poly_term(k as u32, c);
        }
        for ((pole, order), c) in principal {
            if pole >= curve.len() || order == 0 {
                return Err(Error::PoleSetMismatch);
            }
            f.add_principal(pole, order, c);
        }
        Ok(f)
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn poly(&self) -> &[Scalar] {
        &self.poly
    }

    pub fn principal(&self) -> &BTreeMap<(usize, u32), Scalar> {
        &self.principal
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty() && self.principal.is_empty()
    }

    /// Constant coefficient of the polynomial part.
    pub fn constant_term(&self) -> Scalar {
        self.poly.first().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.principal.is_empty() && self.poly.len() <= 1
    }

    pub fn term_count(&self) -> usize {
        self.poly.iter().filter(|c| !c.is_zero()).count() + self.principal.len()
    }

    /// Highest pole order at `pole` (0 when regular there).
    pub fn pole_order(&self, pole: usize) -> u32 {
        self.principal
            .keys()
            .filter(|(p, _)| *p == pole)
            .map(|(_, k)| *k)
            .max()
            .unwrap_or(0)
    }

    fn add_poly_term(&mut self, k: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let k = k as usize;
        if self.poly.len() <= k {
            self.poly.resize(k + 1, Scalar::zero());
        }
        self.poly[k] += &c;
        while self.poly.last().is_some_and(Scalar::is_zero) {
            self.poly.pop();
        }
    }

    fn add_principal(&mut self, pole: usize, order: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.principal.entry((pole, order)).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.principal.remove(&(pole, order));
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !self.curve.same_as(&other.curve) {
            return Err(Error::PoleSetMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in other.poly.iter().enumerate() {
            out.add_poly_term(k as u32, c.clone());
        }
        for (&(p, o), c) in &other.principal {
            out.add_principal(p, o, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.curve);
        }
        RationalFunction {
            curve: self.curve.clone(),
            poly: self.poly.iter().map(|x| x * c).collect(),
            principal: self.principal.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    /// Exact product, re-expanded into partial fractions.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.curve);
        // polynomial × polynomial
        for (i, a) in self.poly.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.poly.iter().enumerate() {
                out.add_poly_term((i + j) as u32, a * b);
            }
        }
        // polynomial × principal (both orders)
        for (m, a) in self.poly.iter().enumerate() {
            for (&(s, k), b) in &other.principal {
                out.add_monomial_times_pole(m as u32, s, k, &(a * b));
            }
        }
        for (m, a) in other.poly.iter().enumerate() {
            for (&(s, k), b) in &self.principal {
                out.add_monomial_times_pole(m as u32, s, k, &(a * b));
            }
        }
        // principal × principal
        for (&(s, k), a) in &self.principal {
            for (&(t, l), b) in &other.principal {
                out.add_pole_times_pole(s, k, t, l, &(a * b));
            }
        }
        Ok(out)
    }

    /// Adds `c·zᵐ·(z − s)^{−k}`.
    fn add_monomial_times_pole(&mut self, m: u32, s: usize, k: u32, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let sp = self.curve.point(s).clone();
        // zᵐ = Σⱼ C(m,j) s^{m−j} (z−s)ʲ
        for j in 0..=m {
            let coeff = c * &int_scalar(binomial(m as u64, j as u64)) * sp.pow(m - j);
            if coeff.is_zero() {
                continue;
            }
            let e = j as i64 - k as i64;
            if e < 0 {
                self.add_principal(s, (-e) as u32, coeff);
            } else {
                // (z−s)^e = Σᵢ C(e,i) zⁱ (−s)^{e−i}
                let e = e as u32;
                let neg_s = -&sp;
                for i in 0..=e {
                    let t = &coeff * &int_scalar(binomial(e as u64, i as u64)) * neg_s.pow(e - i);
                    self.add_poly_term(i, t);
                }
            }
        }
    }

    /// Adds `c·(z − s)^{−k}(z − t)^{−l}`.
    fn add_pole_times_pole(&mut self, s: usize, k: u32, t: usize, l: u32, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        if s == t {
            self.add_principal(s, k + l, c.clone());
            return;
        }
        let ps = self.curve.point(s).clone();
        let pt = self.curve.point(t).clone();
        let d_st = &ps - &pt;
        let d_ts = -&d_st;
        let inv_st = d_st.inv().expect("distinct poles");
        let inv_ts = d_ts.inv().expect("distinct poles");
        // Laurent coefficients of (z−t)^{−l} at s, and symmetrically.
        for j in 1..=k {
            let m = k - j;
            let coeff = c * &neg_binomial(l, m) * inv_st.pow(l + m);
            self.add_principal(s, j, coeff);
        }
        for j in 1..=l {
            let m = l - j;
            let coeff = c * &neg_binomial(k, m) * inv_ts.pow(k + m);
            self.add_principal(t, j, coeff);
        }
    }

    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(&self.curve);
        for (k, c) in self.poly.iter().enumerate().skip(1) {
            out.add_poly_term(k as u32 - 1, c * &Scalar::from_int(k as i64));
        }
        for (&(s, k), c) in &self.principal {
            out.add_principal(s, k + 1, c * &Scalar::from_int(-(k as i64)));
        }
        out
    }

    /// Antiderivative with zero constant term; fails if any residue is nonzero.
    pub fn antiderivative(&self) -> Result<Self> {
        let mut out = Self::zero(&self.curve);
        for (k, c) in self.poly.iter().enumerate() {
            out.add_poly_term(k as u32 + 1, c / &Scalar::from_int(k as i64 + 1));
        }
        for (&(s, k), c) in &self.principal {
            if k == 1 {
                return Err(Error::NotExact);
            }
            out.add_principal(s, k - 1, c / &Scalar::from_int(1 - k as i64));
        }
        Ok(out)
    }

    pub fn residue(&self, pole: usize) -> Scalar {
        self.principal
            .get(&(pole, 1))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Exact value at a point of `C`.
    pub fn eval_exact(&self, z: &Scalar) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for c in self.poly.iter().rev() {
            acc = &(&acc * z) + c;
        }
        for (&(s, k), c) in &self.principal {
            let d = z - self.curve.point(s);
            let inv = d.inv().ok_or_else(|| Error::AtPole(self.curve.label(s)))?;
            acc += &(c * &inv.pow(k));
        }
        Ok(acc)
    }

    /// Floating-point value at `z`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        for &(s, _) in self.principal.keys() {
            if z == self.curve.numeric_points()[s] {
                return Err(Error::AtPole(self.curve.label(s)));
            }
        }
        Ok(NumericFunction::from_exact(self).eval(z))
    }

    pub fn to_numeric(&self) -> NumericFunction {
        NumericFunction::from_exact(self)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => format!("({c})"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{k}"),
            });
        }
        for (&(s, k), c) in &self.principal {
            parts.push(format!("({c})/(z-{})^{k}", self.curve.label(s)));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A rational function compiled to floating point for fast evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericFunction {
    poly: Vec<Complex64>,
    poles: Vec<(Complex64, u32, Complex64)>,
}

impl NumericFunction {
    pub fn from_exact(f: &RationalFunction) -> Self {
        let pts = f.curve.numeric_points();
        NumericFunction {
            poly: f.poly.iter().map(Scalar::to_c64).collect(),
            poles: f
                .principal
                .iter()
                .map(|(&(s, k), c)| (pts[s], k, c.to_c64()))
                .collect(),
        }
    }

    /// `Σ cᵢ/(z − sᵢ)` with floating poles.
    pub fn simple_poles(terms: &[(Complex64, Complex64)]) -> Self {
        NumericFunction {
            poly: Vec::new(),
            poles: terms.iter().map(|&(s, c)| (s, 1, c)).collect(),
        }
    }

    pub fn from_raw(poly: Vec<Complex64>, poles: Vec<(Complex64, u32, Complex64)>) -> Self {
        NumericFunction { poly, poles }
    }

    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.poly.iter().rev() {
            acc = acc * z + c;
        }
        for &(s, k, c) in &self.poles {
            let inv = (z - s).inv();
            acc += c * inv.powu(k);
        }
        acc
    }

    pub fn pole_locations(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.poles.iter().map(|p| p.0)
    }
}

/// A differential `f·dz` on `C`.
#[derive(Clone, PartialEq)]
pub struct Differential(pub RationalFunction);

impl Differential {
    pub fn new(f: RationalFunction) -> Self {
        Differential(f)
    }

    pub fn zero(curve: &Curve) -> Self {
        Differential(RationalFunction::zero(curve))
    }

    /// `dz/(z − s)`
    pub fn dlog(curve: &Curve, pole: usize) -> Self {
        Differential(RationalFunction::pole_term(curve, pole, 1, Scalar::one()))
    }

    pub fn from_letter(curve: &Curve, letter: FormLetter) -> Self {
        Differential(match letter {
            FormLetter::Monomial(k) => RationalFunction::monomial(curve, k, Scalar::one()),
            FormLetter::Pole { pole, order } => {
                RationalFunction::pole_term(curve, pole, order, Scalar::one())
            }
        })
    }

    /// `d f`
    pub fn exact(f: &RationalFunction) -> Self {
        Differential(f.derivative())
    }

    pub fn coefficient(&self) -> &RationalFunction {
        &self.0
    }

    pub fn curve(&self) -> &Curve {
        self.0.curve()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Differential(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Differential(self.0.sub(&other.0)?))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Differential(self.0.scale(c))
    }

    /// `f·ω`
    pub fn times(&self, f: &RationalFunction) -> Result<Self> {
        Ok(Differential(self.0.mul(f)?))
    }

    /// Expansion in the letter basis of `Ω(C)`.
    pub fn to_letters(&self) -> Vec<(FormLetter, Scalar)> {
        let mut out = Vec::new();
        for (k, c) in self.0.poly.iter().enumerate() {
            if !c.is_zero() {
                out.push((FormLetter::Monomial(k as u32), c.clone()));
            }
        }
        for (&(pole, order), c) in &self.0.principal {
            out.push((FormLetter::Pole { pole, order }, c.clone()));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Class in `H^dR = Ω(C)/dO(C)`: the vector of residues.
    pub fn project_de_rham(&self) -> DeRhamClass {
        let curve = self.curve().clone();
        let coeffs = (0..curve.len()).map(|s| self.0.residue(s)).collect();
        DeRhamClass { curve, coeffs }
    }

    /// Writes `ω = σ(h) + df` with `h` the class of `ω` and `f` normalized
    /// to zero constant term.
    pub fn decompose(&self, section: &Section) -> Result<(DeRhamClass, RationalFunction)> {
        let h = self.project_de_rham();
        let rest = self.sub(&section.apply(&h)?)?;
        let f = rest.0.antiderivative()?;
        Ok((h, f))
    }

    pub fn to_numeric(&self) -> NumericFunction {
        self.0.to_numeric()
    }
}

impl fmt::Debug for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})dz", self.0)
    }
}

/// Element of `H^dR = ⊕ ℂ h_s`.
#[derive(Clone, PartialEq, Debug)]
pub struct DeRhamClass {
    curve: Curve,
    coeffs: Vec<Scalar>,
}

impl DeRhamClass {
    pub fn new(curve: &Curve, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != curve.len() {
            return Err(Error::PoleSetMismatch);
        }
        Ok(DeRhamClass {
            curve: curve.clone(),
            coeffs,
        })
    }

    pub fn basis(curve: &Curve, s: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); curve.len()];
        coeffs[s] = Scalar::one();
        DeRhamClass {
            curve: curve.clone(),
            coeffs,
        }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, s: usize) -> &Scalar {
        &self.coeffs[s]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }
}

/// A section `σ : H^dR → Ω(C)` of the de Rham projection, given by
/// `σ(h_s) = dz/(z − s) + d g_s`.
#[derive(Clone, PartialEq, Debug)]
pub struct Section {
    curve: Curve,
    corrections: Vec<RationalFunction>,
}

impl Section {
    /// `σ₀(h_s) = dlog(z − s)`.
    pub fn standard(curve: &Curve) -> Self {
        Section {
            curve: curve.clone(),
            corrections: vec![RationalFunction::zero(curve); curve.len()],
        }
    }

    pub fn with_corrections(curve: &Curve, corrections: Vec<RationalFunction>) -> Result<Self> {
        if corrections.len() != curve.len() || corrections.iter().any(|g| !g.curve().same_as(curve)) {
            return Err(Error::PoleSetMismatch);
        }
        Ok(Section {
            curve: curve.clone(),
            corrections,
        })
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn corrections(&self) -> &[RationalFunction] {
        &self.corrections
    }

    pub fn is_standard(&self) -> bool {
        self.corrections.iter().all(|g| g.derivative().is_zero())
    }

    /// `σ(h_s)`
    pub fn of_class(&self, s: usize) -> Differential {
        let base = Differential::dlog(&self.curve, s);
        base.add(&Differential::exact(&self.corrections[s]))
            .expect("section lives on its own curve")
    }

    pub fn apply(&self, h: &DeRhamClass) -> Result<Differential> {
        if !h.curve.same_as(&self.curve) {
            return Err(Error::PoleSetMismatch);
        }
        let mut out = Differential::zero(&self.curve);
        for (s, c) in h.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.of_class(s).scale(c))?;
            }
        }
        Ok(out)
    }
}
