//! Exact reduction of `Sh(Ω(C))` to `O(C) ⊗ Sh(H^dR)`, the kernel map
//! `D_{x₀}` and the splitting `Sh(Ω(C)) = Sub_σ ⊕ Ker(I_{x₀})`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::connection::FunctionTensor;
use crate::curve::{ClassLetter, Curve, Differential, FormLetter, RationalFunction, Section};
use crate::error::{Error, Result};
use crate::iterint::{integrate_tensor, IntegratorConfig, Path};
use crate::par::{par_try_map, Execution};
use crate::scalar::Scalar;
use crate::shuffle::{ShuffleTensor, Word};

type ClassWord = Word<ClassLetter>;
type FormTensorSh = ShuffleTensor<FormLetter>;

/// `Σ f_i ⊗ u_i`, read as `Σ f_i(z)·I_{x₀}(σ(u_i))(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm {
    pub tensor: FunctionTensor,
    pub x0: Scalar,
    pub section: Section,
}

impl NormalForm {
    pub fn is_zero(&self) -> bool {
        self.tensor.is_zero()
    }

    pub fn eval(&self, path: &Path, cfg: &IntegratorConfig) -> Result<Complex64> {
        self.tensor.eval(&self.section, path, cfg)
    }

    /// Value along the default route from `x₀` to `z`.
    pub fn eval_at(&self, z: Complex64, cfg: &IntegratorConfig) -> Result<Complex64> {
        let curve = self.section.curve();
        if curve.numeric_points().iter().any(|&p| p == z) {
            return Err(Error::AtPole(format!("{z}")));
        }
        let path = Path::route(curve.numeric_points(), self.x0.to_c64(), z);
        self.eval(&path, cfg)
    }

    /// Words of weight `≤ n`, and constant coefficients on weight exactly `n`.
    pub fn within_filtration(&self, n: usize) -> bool {
        self.tensor
            .terms()
            .iter()
            .all(|(w, f)| w.weight() < n || (w.weight() == n && f.is_constant()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Ext {
    Class(usize),
    Form(FormLetter),
}

type Key = (usize, usize, Vec<Ext>);

fn key(word: Vec<Ext>) -> Key {
    let forms = word.iter().filter(|e| matches!(e, Ext::Form(_))).count();
    (word.len(), forms, word)
}

struct Rewriter<'a> {
    section: &'a Section,
    x0: &'a Scalar,
    split: BTreeMap<FormLetter, (Vec<(usize, Scalar)>, RationalFunction)>,
}

impl<'a> Rewriter<'a> {
    fn new(section: &'a Section, x0: &'a Scalar) -> Result<Self> {
        let curve = section.curve();
        if curve.index_of(x0).is_some() {
            return Err(Error::AtPole(format!("{x0}")));
        }
        Ok(Rewriter {
            section,
            x0,
            split: BTreeMap::new(),
        })
    }

    fn curve(&self) -> &Curve {
        self.section.curve()
    }

    /// `ω_l = Σ c_s σ(h_s) + df`
    fn split(&mut self, l: FormLetter) -> Result<(Vec<(usize, Scalar)>, RationalFunction)> {
        if let Some(v) = self.split.get(&l) {
            return Ok(v.clone());
        }
        let (h, f) = Differential::from_letter(self.curve(), l).decompose(self.section)?;
        let classes: Vec<(usize, Scalar)> = h
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| (s, c.clone()))
            .collect();
        self.split.insert(l, (classes.clone(), f.clone()));
        Ok((classes, f))
    }

    fn form(&self, e: Ext) -> Differential {
        match e {
            Ext::Class(s) => self.section.of_class(s),
            Ext::Form(l) => Differential::from_letter(self.curve(), l),
        }
    }

    /// `e·f` in the letter basis.
    fn times(&self, e: Ext, f: &RationalFunction) -> Result<Vec<(Ext, Scalar)>> {
        Ok(self
            .form(e)
            .times(f)?
            .to_letters()
            .into_iter()
            .map(|(l, c)| (Ext::Form(l), c))
            .collect())
    }

    fn at_x0(&self, f: &RationalFunction) -> Result<Scalar> {
        f.eval_exact(self.x0)
    }

    fn expand(&self, word: &[Ext]) -> FormTensorSh {
        let alpha = self.curve().form_alphabet();
        let mut out = ShuffleTensor::unit(alpha);
        for &e in word {
            let letters = match e {
                Ext::Form(l) => vec![(l, Scalar::one())],
                Ext::Class(_) => self.form(e).to_letters(),
            };
            let mut next = ShuffleTensor::zero(alpha);
            for (w, c) in out.terms() {
                for (l, d) in &letters {
                    next.add_term(w.clone().push(*l), c * d);
                }
            }
            out = next;
        }
        out
    }
}

fn spliced(word: &[Ext], at: usize, len: usize, mid: &[Ext]) -> Vec<Ext> {
    let mut out = word[..at].to_vec();
    out.extend_from_slice(mid);
    out.extend_from_slice(&word[at + len..]);
    out
}

fn check_tensor(curve: &Curve, t: &FormTensorSh) -> Result<()> {
    if t.alphabet() != curve.form_alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

fn initial_words(t: &FormTensorSh) -> impl Iterator<Item = (Vec<Ext>, &Scalar)> {
    t.terms()
        .map(|(w, c)| (w.letters().iter().map(|&l| Ext::Form(l)).collect(), c))
}

/// `f_{σ,x₀}⁻¹(I_{x₀}(t))`, computed by eliminating exact letters from the
/// left.
pub fn normal_form(t: &FormTensorSh, section: &Section, x0: &Scalar) -> Result<NormalForm> {
    let curve = section.curve().clone();
    check_tensor(&curve, t)?;
    let mut rw = Rewriter::new(section, x0)?;
    let mut work: BTreeMap<Key, RationalFunction> = BTreeMap::new();
    fn push(work: &mut BTreeMap<Key, RationalFunction>, word: Vec<Ext>, g: RationalFunction) -> Result<()> {
        if g.is_zero() {
            return Ok(());
        }
        let k = key(word);
        let v = match work.remove(&k) {
            Some(h) => h.add(&g)?,
            None => g,
        };
        if !v.is_zero() {
            work.insert(k, v);
        }
        Ok(())
    }
    for (w, c) in initial_words(t) {
        push(&mut work, w, RationalFunction::constant(&curve, c.clone()))?;
    }
    let mut out = FunctionTensor::zero(&curve);
    while let Some(((n, forms, word), g)) = work.pop_last() {
        if forms == 0 {
            let w = Word(
                word.iter()
                    .map(|e| match e {
                        Ext::Class(s) => ClassLetter(*s),
                        Ext::Form(_) => unreachable!(),
                    })
                    .collect(),
            );
            out.add_term(w, g);
            continue;
        }
        let p = word.iter().position(|e| matches!(e, Ext::Form(_))).expect("has a form letter");
        let Ext::Form(l) = word[p] else { unreachable!() };
        let (classes, f) = rw.split(l)?;
        for (s, c) in classes {
            push(&mut work, spliced(&word, p, 1, &[Ext::Class(s)]), g.scale(&c))?;
        }
        if f.is_zero() {
            continue;
        }
        if p == n - 1 {
            // [α|df] = f⊗[α] − [α'|α_last·f],  [df] = f − f(x₀)
            push(&mut work, word[..p].to_vec(), g.mul(&f)?)?;
            if p == 0 {
                push(&mut work, Vec::new(), g.scale(&-rw.at_x0(&f)?))?;
            } else {
                for (e, c) in rw.times(word[p - 1], &f)? {
                    push(&mut work, spliced(&word, p - 1, 2, &[e]), g.scale(&-c))?;
                }
            }
        } else if p == 0 {
            // [df|β₁|β'] = [f·β₁|β'] − f(x₀)[β₁|β']
            for (e, c) in rw.times(word[1], &f)? {
                push(&mut work, spliced(&word, 0, 2, &[e]), g.scale(&c))?;
            }
            push(&mut work, word[1..].to_vec(), g.scale(&-rw.at_x0(&f)?))?;
        } else {
            // [α|df|β₁|β'] = [α|f·β₁|β'] − [α'|α_last·f|β₁|β']
            for (e, c) in rw.times(word[p + 1], &f)? {
                push(&mut work, spliced(&word, p, 2, &[e]), g.scale(&c))?;
            }
            for (e, c) in rw.times(word[p - 1], &f)? {
                push(&mut work, spliced(&word, p - 1, 2, &[e]), g.scale(&-c))?;
            }
        }
    }
    Ok(NormalForm {
        tensor: out,
        x0: x0.clone(),
        section: section.clone(),
    })
}

/// Normal forms of many tensors.
pub fn normal_forms(ts: &[FormTensorSh], section: &Section, x0: &Scalar, exec: Execution) -> Result<Vec<NormalForm>> {
    par_try_map(exec, ts, |t| normal_form(t, section, x0))
}

/// `I_{x₀}(t)` at the end of `path`, by direct integration.
pub fn integrate(t: &FormTensorSh, curve: &Curve, path: &Path, cfg: &IntegratorConfig) -> Result<Complex64> {
    integrate_tensor(curve, path, t, cfg)
}

/// `D_{x₀}(s, f, s′) = [s|df|s′] − [s|f·s′] + [s·f|s′]` with `1·f := f(x₀)`.
pub fn d_map(s: &FormTensorSh, f: &RationalFunction, s2: &FormTensorSh, x0: &Scalar) -> Result<FormTensorSh> {
    let curve = f.curve();
    check_tensor(curve, s)?;
    check_tensor(curve, s2)?;
    if !s2.coeff(&Word::empty()).is_zero() {
        return Err(Error::NotAugmented);
    }
    if curve.index_of(x0).is_some() {
        return Err(Error::AtPole(format!("{x0}")));
    }
    let alpha = curve.form_alphabet();
    let df = Differential::exact(f).to_letters();
    let mut out = ShuffleTensor::zero(alpha);
    for (a, c) in s.terms() {
        for (b, d) in s2.terms() {
            let cd = c * d;
            for (l, e) in &df {
                out.add_term(a.clone().push(*l).concat(b), &cd * e);
            }
            let b0 = Differential::from_letter(curve, b.letters()[0]).times(f)?;
            for (l, e) in b0.to_letters() {
                let mut w = a.clone().push(l);
                w = w.concat(&b.suffix_from(1));
                out.add_term(w, -(&cd * &e));
            }
            match a.letters().last() {
                None => out.add_term(b.clone(), &cd * &f.eval_exact(x0)?),
                Some(&last) => {
                    let head = a.prefix(a.weight() - 1);
                    for (l, e) in Differential::from_letter(curve, last).times(f)?.to_letters() {
                        out.add_term(head.clone().push(l).concat(b), &cd * &e);
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn kernel_member(t: &FormTensorSh, section: &Section, x0: &Scalar) -> Result<bool> {
    Ok(normal_form(t, section, x0)?.is_zero())
}

/// Element of `Sub_σ`: `Σ c_u [σ(u)] + Σ [σ(u)|d g_u]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubPart {
    pub classes: BTreeMap<ClassWord, Scalar>,
    pub trailing: BTreeMap<ClassWord, RationalFunction>,
}

impl SubPart {
    fn new() -> Self {
        SubPart {
            classes: BTreeMap::new(),
            trailing: BTreeMap::new(),
        }
    }

    fn add_class(&mut self, u: ClassWord, c: Scalar) {
        let e = self.classes.entry(u.clone()).or_insert_with(Scalar::zero);
        *e += &c;
        if e.is_zero() {
            self.classes.remove(&u);
        }
    }

    fn add_trailing(&mut self, u: ClassWord, g: RationalFunction) -> Result<()> {
        // g is only defined up to a constant
        let g = g.sub(&RationalFunction::constant(g.curve(), g.constant_term()))?;
        let v = match self.trailing.remove(&u) {
            Some(h) => h.add(&g)?,
            None => g,
        };
        if !v.is_zero() {
            self.trailing.insert(u, v);
        }
        Ok(())
    }

    pub fn to_tensor(&self, section: &Section) -> Result<FormTensorSh> {
        let alpha = section.curve().form_alphabet();
        let x0 = Scalar::zero();
        let rw = Rewriter {
            section,
            x0: &x0,
            split: BTreeMap::new(),
        };
        let cls = |u: &ClassWord| -> Vec<Ext> { u.letters().iter().map(|l| Ext::Class(l.0)).collect() };
        let mut out = ShuffleTensor::zero(alpha);
        for (u, c) in &self.classes {
            out = out.add(&rw.expand(&cls(u)).scale(c))?;
        }
        for (u, g) in &self.trailing {
            let base = rw.expand(&cls(u));
            let dg = Differential::exact(g).to_letters();
            for (w, c) in base.terms() {
                for (l, d) in &dg {
                    out.add_term(w.clone().push(*l), c * d);
                }
            }
        }
        Ok(out)
    }
}

/// `t = sub + ker` with `sub ∈ Sub_σ` and `I_{x₀}(ker) = 0`, by inverting
/// the normal form from the top weight down.
pub fn decompose_subker(t: &FormTensorSh, section: &Section, x0: &Scalar) -> Result<(FormTensorSh, FormTensorSh)> {
    let part = sub_part(t, section, x0)?;
    let sub = part.to_tensor(section)?;
    let ker = t.sub(&sub)?;
    Ok((sub, ker))
}

pub fn sub_part(t: &FormTensorSh, section: &Section, x0: &Scalar) -> Result<SubPart> {
    let mut rest = normal_form(t, section, x0)?.tensor;
    let mut part = SubPart::new();
    while !rest.is_zero() {
        let k = rest.weight();
        let mut piece = SubPart::new();
        let top: Vec<(ClassWord, RationalFunction)> = rest
            .terms()
            .iter()
            .filter(|(w, _)| w.weight() == k)
            .map(|(w, f)| (w.clone(), f.clone()))
            .collect();
        for (w, r) in &top {
            piece.add_trailing(w.clone(), r.clone())?;
        }
        let nf = normal_form(&piece.to_tensor(section)?, section, x0)?.tensor;
        let left = rest.sub(&nf)?;
        for (w, c) in left.terms().iter().filter(|(w, _)| w.weight() == k) {
            if !c.is_constant() {
                return Err(Error::Config("normal form inversion left a non-constant top coefficient".into()));
            }
            piece.add_class(w.clone(), c.constant_term());
        }
        let nf = normal_form(&piece.to_tensor(section)?, section, x0)?.tensor;
        rest = rest.sub(&nf)?;
        if rest.terms().keys().any(|w| w.weight() >= k) {
            return Err(Error::Config("normal form inversion did not lower the weight".into()));
        }
        for (u, c) in piece.classes {
            part.add_class(u, c);
        }
        for (u, g) in piece.trailing {
            part.add_trailing(u, g)?;
        }
    }
    Ok(part)
}

/// An element of `Ker(I_{x₀})` written as `Σ D_{x₀}(s, f, s′)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelWitness {
    pub x0: Scalar,
    pub triples: Vec<(FormTensorSh, RationalFunction, FormTensorSh)>,
}

impl KernelWitness {
    pub fn apply(&self, curve: &Curve) -> Result<FormTensorSh> {
        let mut out = ShuffleTensor::zero(curve.form_alphabet());
        for (s, f, s2) in &self.triples {
            out = out.add(&d_map(s, f, s2, &self.x0)?)?;
        }
        Ok(out)
    }
}

/// Rewrites `t` at the tensor level as `sub + Σ D(triples)`, using
/// `[α|df|β] = D(α, f, β) + [α|f·β] − [α·f|β]`.
pub fn kernel_witness(t: &FormTensorSh, section: &Section, x0: &Scalar) -> Result<(SubPart, KernelWitness)> {
    let curve = section.curve().clone();
    check_tensor(&curve, t)?;
    let mut rw = Rewriter::new(section, x0)?;
    let mut work: BTreeMap<Key, Scalar> = BTreeMap::new();
    fn push(work: &mut BTreeMap<Key, Scalar>, word: Vec<Ext>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let k = key(word);
        let v = work.remove(&k).map(|d| d + &c).unwrap_or(c);
        if !v.is_zero() {
            work.insert(k, v);
        }
    }
    for (w, c) in initial_words(t) {
        push(&mut work, w, c.clone());
    }
    let mut part = SubPart::new();
    let mut triples = Vec::new();
    let class_word = |w: &[Ext]| -> ClassWord {
        Word(
            w.iter()
                .map(|e| match e {
                    Ext::Class(s) => ClassLetter(*s),
                    Ext::Form(_) => unreachable!(),
                })
                .collect(),
        )
    };
    while let Some(((n, forms, word), c)) = work.pop_last() {
        if forms == 0 {
            part.add_class(class_word(&word), c);
            continue;
        }
        let p = word.iter().position(|e| matches!(e, Ext::Form(_))).expect("has a form letter");
        let Ext::Form(l) = word[p] else { unreachable!() };
        let (classes, f) = rw.split(l)?;
        for (s, d) in classes {
            push(&mut work, spliced(&word, p, 1, &[Ext::Class(s)]), &c * &d);
        }
        if f.is_zero() {
            continue;
        }
        if p == n - 1 {
            part.add_trailing(class_word(&word[..p]), f.scale(&c))?;
            continue;
        }
        let alpha = rw.expand(&word[..p]).scale(&c);
        let beta = rw.expand(&word[p + 1..]);
        triples.push((alpha, f.clone(), beta));
        for (e, d) in rw.times(word[p + 1], &f)? {
            push(&mut work, spliced(&word, p, 2, &[e]), &c * &d);
        }
        if p == 0 {
            push(&mut work, word[1..].to_vec(), -(&c * &rw.at_x0(&f)?));
        } else {
            for (e, d) in rw.times(word[p - 1], &f)? {
                push(&mut work, spliced(&word, p - 1, 2, &[e]), -(&c * &d));
            }
        }
    }
    Ok((
        part,
        KernelWitness {
            x0: x0.clone(),
            triples,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn cfg() -> IntegratorConfig {
        IntegratorConfig::default()
    }

    fn pole(s: usize, k: u32) -> FormLetter {
        FormLetter::Pole { pole: s, order: k }
    }

    #[test]
    fn weight_one_examples() {
        let c = Curve::from_ints(&[0]).unwrap();
        let sigma = Section::standard(&c);
        let one = Scalar::one();
        let t = ShuffleTensor::word(c.form_alphabet(), vec![pole(0, 2)]);
        let nf = normal_form(&t, &sigma, &one).unwrap();
        let expect = RationalFunction::from_parts(&c, vec![Scalar::one()], [((0, 1), -Scalar::one())]).unwrap();
        assert_eq!(nf.tensor, FunctionTensor::single(&c, Word::empty(), expect));
        assert!(!kernel_member(&t, &sigma, &one).unwrap());

        let t = ShuffleTensor::word(c.form_alphabet(), vec![pole(0, 1)]);
        let nf = normal_form(&t, &sigma, &one).unwrap();
        assert_eq!(
            nf.tensor,
            FunctionTensor::single(&c, Word(vec![ClassLetter(0)]), RationalFunction::one(&c))
        );
        let v = nf.eval_at(C::new(2.0, 0.0), &cfg()).unwrap();
        assert!((v - C::new(2f64.ln(), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn mixed_form_matches_integral() {
        let c = Curve::from_ints(&[0]).unwrap();
        let sigma = Section::standard(&c);
        let one = Scalar::one();
        let t = ShuffleTensor::word(c.form_alphabet(), vec![pole(0, 2), pole(0, 1)]);
        let nf = normal_form(&t, &sigma, &one).unwrap();
        assert!(nf.within_filtration(2));
        for z in [C::new(2.0, 0.0), C::new(0.5, 0.7), C::new(-1.0, 0.3)] {
            let path = Path::route(c.numeric_points(), C::new(1.0, 0.0), z);
            let direct = integrate(&t, &c, &path, &cfg()).unwrap();
            assert!((direct - nf.eval(&path, &cfg()).unwrap()).norm() < 1e-8);
        }
    }

    #[test]
    fn d_map_examples() {
        let c = Curve::from_ints(&[0]).unwrap();
        let a = c.form_alphabet();
        let one = Scalar::one();
        let unit = ShuffleTensor::unit(a);
        let dlog = ShuffleTensor::word(a, vec![pole(0, 1)]);
        let d = d_map(&unit, &RationalFunction::z(&c), &dlog, &one).unwrap();
        let expect = ShuffleTensor::from_terms(
            a,
            [
                (Word(vec![FormLetter::Monomial(0), pole(0, 1)]), Scalar::one()),
                (Word(vec![FormLetter::Monomial(0)]), -Scalar::one()),
                (Word(vec![pole(0, 1)]), Scalar::one()),
            ],
        );
        assert_eq!(d, expect);
        assert!(kernel_member(&d, &Section::standard(&c), &one).unwrap());
        assert!(d_map(&dlog, &RationalFunction::one(&c), &dlog, &one).unwrap().is_zero());
        assert_eq!(d_map(&dlog, &RationalFunction::z(&c), &unit, &one), Err(Error::NotAugmented));
    }

    #[test]
    fn subker_examples() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let sigma = Section::standard(&c);
        let a = c.form_alphabet();
        let x0 = Scalar::from_ratio(-1, 2);
        let t = ShuffleTensor::word(a, vec![pole(0, 1)]);
        let (sub, ker) = decompose_subker(&t, &sigma, &x0).unwrap();
        assert_eq!(sub, t);
        assert!(ker.is_zero());

        let dlog1 = ShuffleTensor::word(a, vec![pole(1, 1)]);
        let f = RationalFunction::pole_term(&c, 0, 2, Scalar::from_int(3));
        let d = d_map(&t, &f, &dlog1, &x0).unwrap();
        let (sub, ker) = decompose_subker(&d, &sigma, &x0).unwrap();
        assert!(sub.is_zero());
        assert_eq!(ker, d);

        let t = ShuffleTensor::word(a, vec![pole(0, 2)]);
        let (sub, ker) = decompose_subker(&t, &sigma, &x0).unwrap();
        assert_eq!(normal_form(&sub, &sigma, &x0).unwrap(), normal_form(&t, &sigma, &x0).unwrap());
        assert!(kernel_member(&ker, &sigma, &x0).unwrap());
    }

    #[test]
    fn witness_agrees_with_inversion() {
        let c = Curve::from_ints(&[0, 1]).unwrap();
        let g = RationalFunction::pole_term(&c, 1, 2, Scalar::one());
        let sigma = Section::with_corrections(&c, vec![g, RationalFunction::z(&c)]).unwrap();
        let a = c.form_alphabet();
        let x0 = Scalar::from_ratio(-1, 2);
        let mut t = ShuffleTensor::word(a, vec![pole(0, 2), FormLetter::Monomial(1), pole(1, 1)]);
        t.add_term(Word(vec![pole(1, 3), pole(0, 1)]), Scalar::from_int(2));
        t.add_term(Word(vec![FormLetter::Monomial(0)]), Scalar::one());
        let (part, wit) = kernel_witness(&t, &sigma, &x0).unwrap();
        assert_eq!(part, sub_part(&t, &sigma, &x0).unwrap());
        let (sub, ker) = decompose_subker(&t, &sigma, &x0).unwrap();
        assert_eq!(part.to_tensor(&sigma).unwrap(), sub);
        assert_eq!(wit.apply(&c).unwrap(), ker);
    }
}
