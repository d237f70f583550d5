//! The shuffle Hopf algebra `Sh(V)` on words over a finite alphabet.
//!
//! Tensors are exact: a finite map from words to [`Scalar`] with no stored
//! zero coefficient. Words are ordered by `(weight, lexicographic)` so that
//! every iteration over a tensor is deterministic.
//!
//! Each tensor carries the [`AlphabetId`] of the registry its letters were
//! drawn from; binary operations refuse to mix alphabets.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Letter types usable inside words.
pub trait Letter: Clone + Ord + fmt::Debug + Send + Sync {}
impl<T: Clone + Ord + fmt::Debug + Send + Sync> Letter for T {}

/// Identifier of a declared alphabet (a letter registry).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlphabetId(pub u64);

impl AlphabetId {
    /// Stable identifier derived from a registry label (FNV-1a).
    pub fn named(label: &str) -> Self {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in label.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        AlphabetId(h)
    }
}

/// A finite sequence of letters. Weight is the length.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word<L>(pub Vec<L>);

impl<L: Letter> Word<L> {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(letter: L) -> Self {
        Word(vec![letter])
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[L] {
        &self.0
    }

    pub fn concat(&self, other: &Word<L>) -> Word<L> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(mut self, letter: L) -> Word<L> {
        self.0.push(letter);
        self
    }

    pub fn prefix(&self, len: usize) -> Word<L> {
        Word(self.0[..len].to_vec())
    }

    pub fn suffix_from(&self, start: usize) -> Word<L> {
        Word(self.0[start..].to_vec())
    }

    /// All ways of writing the word as a concatenation `u·v`, from `u = 1` upward.
    pub fn splits(&self) -> impl Iterator<Item = (Word<L>, Word<L>)> + '_ {
        (0..=self.0.len()).map(move |k| (self.prefix(k), self.suffix_from(k)))
    }

    pub fn reversed(&self) -> Word<L> {
        Word(self.0.iter().rev().cloned().collect())
    }
}

impl<L: Letter> PartialOrd for Word<L> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<L: Letter> Ord for Word<L> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl<L: fmt::Debug> fmt::Debug for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        write!(f, "[")?;
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            write!(f, "{l:?}")?;
        }
        write!(f, "]")
    }
}

impl<L> From<Vec<L>> for Word<L> {
    fn from(v: Vec<L>) -> Self {
        Word(v)
    }
}

/// All words of weight `≤ max_weight` over `letters`, in term order.
pub fn words_up_to<L: Letter>(letters: &[L], max_weight: usize) -> Vec<Word<L>> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::<L>::empty()];
    for _ in 0..max_weight {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for l in letters {
                next.push(w.clone().push(l.clone()));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.sort();
    out
}

/// Shuffles of two words, with multiplicities.
pub fn shuffle_words<L: Letter>(a: &[L], b: &[L]) -> BTreeMap<Word<L>, u64> {
    let mut out = BTreeMap::new();
    let mut buf = Vec::with_capacity(a.len() + b.len());
    shuffle_rec(a, b, &mut buf, &mut out);
    out
}

fn shuffle_rec<L: Letter>(a: &[L], b: &[L], buf: &mut Vec<L>, out: &mut BTreeMap<Word<L>, u64>) {
    if a.is_empty() || b.is_empty() {
        let mut w = buf.clone();
        w.extend_from_slice(a);
        w.extend_from_slice(b);
        *out.entry(Word(w)).or_insert(0) += 1;
        return;
    }
    buf.push(a[0].clone());
    shuffle_rec(&a[1..], b, buf, out);
    buf.pop();
    buf.push(b[0].clone());
    shuffle_rec(a, &b[1..], buf, out);
    buf.pop();
}

/// An element of `Sh(V)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ShuffleTensor<L> {
    alphabet: AlphabetId,
    terms: BTreeMap<Word<L>, Scalar>,
}

impl<L: Letter> ShuffleTensor<L> {
    pub fn zero(alphabet: AlphabetId) -> Self {
        ShuffleTensor {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    /// The unit `1` (empty word).
    pub fn unit(alphabet: AlphabetId) -> Self {
        Self::monomial(alphabet, Word::empty(), Scalar::one())
    }

    pub fn monomial(alphabet: AlphabetId, word: Word<L>, coeff: Scalar) -> Self {
        let mut t = Self::zero(alphabet);
        t.add_term(word, coeff);
        t
    }

    pub fn word(alphabet: AlphabetId, letters: Vec<L>) -> Self {
        Self::monomial(alphabet, Word(letters), Scalar::one())
    }

    pub fn from_terms(alphabet: AlphabetId, terms: impl IntoIterator<Item = (Word<L>, Scalar)>) -> Self {
        let mut t = Self::zero(alphabet);
        for (w, c) in terms {
            t.add_term(w, c);
        }
        t
    }

    pub fn alphabet(&self) -> AlphabetId {
        self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum weight of a word carrying a nonzero coefficient (0 for the zero tensor).
    pub fn weight(&self) -> usize {
        self.terms.keys().next_back().map_or(0, Word::weight)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word<L>, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word<L>, Scalar> {
        self.terms
    }

    pub fn coeff(&self, word: &Word<L>) -> Scalar {
        self.terms.get(word).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Counit: the coefficient of the empty word.
    pub fn counit(&self) -> Scalar {
        self.coeff(&Word::empty())
    }

    pub fn add_term(&mut self, word: Word<L>, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.alphabet);
        }
        ShuffleTensor {
            alphabet: self.alphabet,
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    /// Homogeneous component of weight `n`.
    pub fn component(&self, n: usize) -> Self {
        ShuffleTensor {
            alphabet: self.alphabet,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.weight() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// The commutative shuffle product.
    pub fn shuffle(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.alphabet);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let c = ca * cb;
                for (w, mult) in shuffle_words(&wa.0, &wb.0) {
                    out.add_term(w, &c * &Scalar::from_int(mult as i64));
                }
            }
        }
        Ok(out)
    }

    /// Concatenation product `[a|b]`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.alphabet);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb), ca * cb);
            }
        }
        Ok(out)
    }

    /// Deconcatenation coproduct `[v₁|…|vₙ] ↦ Σₖ [v₁|…|vₖ] ⊗ [vₖ₊₁|…|vₙ]`.
    pub fn deconcat(&self) -> TensorPair<L> {
        let mut out = TensorPair::zero(self.alphabet);
        for (w, c) in &self.terms {
            for (u, v) in w.splits() {
                out.add_term(u, v, c.clone());
            }
        }
        out
    }

    /// Iterated coproduct into `legs ≥ 1` tensor factors.
    pub fn iterated_coproduct(&self, legs: usize) -> BTreeMap<Vec<Word<L>>, Scalar> {
        assert!(legs >= 1, "coproduct needs at least one leg");
        let mut out: BTreeMap<Vec<Word<L>>, Scalar> = BTreeMap::new();
        for (w, c) in &self.terms {
            for_each_cut(w.weight(), legs, &mut |cuts| {
                let pieces = cut_word(w, cuts);
                let e = out.entry(pieces).or_insert_with(Scalar::zero);
                *e += c;
            });
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Antipode of the deconcatenation Hopf structure: `[v₁|…|vₙ] ↦ (−1)ⁿ[vₙ|…|v₁]`.
    pub fn antipode(&self) -> Self {
        let mut out = Self::zero(self.alphabet);
        for (w, c) in &self.terms {
            let c = if w.weight() % 2 == 1 { -c } else { c.clone() };
            out.add_term(w.reversed(), c);
        }
        out
    }

    /// Right derivation `∂[v₁|…|vₙ] = [v₁|…|vₙ₋₁] ⊗ vₙ`, `∂1 = 0`.
    pub fn deriv_right(&self) -> WordLetterSum<L> {
        let mut out = WordLetterSum::zero(self.alphabet);
        for (w, c) in &self.terms {
            if let Some((last, init)) = w.0.split_last() {
                out.add_term(Word(init.to_vec()), last.clone(), c.clone());
            }
        }
        out
    }

    /// `R_ξ = (id ⊗ ξ) ∘ ∂` for a linear functional `ξ` on the letters.
    pub fn r_xi(&self, xi: impl Fn(&L) -> Scalar) -> Self {
        let mut out = Self::zero(self.alphabet);
        for (w, c) in &self.terms {
            if let Some((last, init)) = w.0.split_last() {
                let x = xi(last);
                if !x.is_zero() {
                    out.add_term(Word(init.to_vec()), c * &x);
                }
            }
        }
        out
    }

    /// Membership in the coradical filtration `F♥ₙ`: tests whether
    /// `(id − ηε)^{⊗n+1} ∘ Δ^{(n+1)}` annihilates the tensor, computed exactly.
    pub fn coradical_member(&self, n: usize) -> bool {
        let legs = n + 1;
        let projected: BTreeMap<Vec<Word<L>>, Scalar> = self
            .iterated_coproduct(legs)
            .into_iter()
            .filter(|(pieces, _)| pieces.iter().all(|p| !p.is_empty()))
            .collect();
        projected.values().all(Scalar::is_zero)
    }

    /// Letter-wise linear substitution into another alphabet. Each letter
    /// maps to a linear combination of target letters.
    pub fn substitute<M: Letter>(
        &self,
        target: AlphabetId,
        image: impl Fn(&L) -> Vec<(M, Scalar)>,
    ) -> ShuffleTensor<M> {
        let mut cache: BTreeMap<L, Vec<(M, Scalar)>> = BTreeMap::new();
        let mut out = ShuffleTensor::zero(target);
        for (w, c) in &self.terms {
            let mut partial: Vec<(Vec<M>, Scalar)> = vec![(Vec::new(), c.clone())];
            for l in &w.0 {
                let img = cache.entry(l.clone()).or_insert_with(|| image(l)).clone();
                let mut next = Vec::with_capacity(partial.len() * img.len());
                for (prefix, pc) in &partial {
                    for (m, mc) in &img {
                        let mut p = prefix.clone();
                        p.push(m.clone());
                        next.push((p, pc * mc));
                    }
                }
                partial = next;
            }
            for (letters, coeff) in partial {
                out.add_term(Word(letters), coeff);
            }
        }
        out
    }
}

impl<L: Letter> fmt::Debug for ShuffleTensor<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}){w:?}")?;
        }
        Ok(())
    }
}

/// Calls `f` with every weakly increasing cut vector `0 = c₀ ≤ … ≤ c_legs = len`.
fn for_each_cut(len: usize, legs: usize, f: &mut impl FnMut(&[usize])) {
    let mut cuts = vec![0usize; legs + 1];
    cuts[legs] = len;
    fn rec(pos: usize, legs: usize, len: usize, cuts: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if pos == legs {
            f(cuts);
            return;
        }
        let lo = cuts[pos - 1];
        for c in lo..=len {
            cuts[pos] = c;
            rec(pos + 1, legs, len, cuts, f);
        }
    }
    if legs == 1 {
        f(&cuts);
    } else {
        rec(1, legs, len, &mut cuts, f);
    }
}

fn cut_word<L: Letter>(w: &Word<L>, cuts: &[usize]) -> Vec<Word<L>> {
    cuts.windows(2).map(|p| Word(w.0[p[0]..p[1]].to_vec())).collect()
}

/// An element of `Sh(V) ⊗ Sh(V)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorPair<L> {
    alphabet: AlphabetId,
    terms: BTreeMap<(Word<L>, Word<L>), Scalar>,
}

impl<L: Letter> TensorPair<L> {
    pub fn zero(alphabet: AlphabetId) -> Self {
        TensorPair {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, left: Word<L>, right: Word<L>, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let key = (left, right);
        let e = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *e += &coeff;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word<L>, Word<L>), &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, left: &Word<L>, right: &Word<L>) -> Scalar {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Componentwise shuffle `(a⊗b)⧢(c⊗d) = (a⧢c)⊗(b⧢d)`.
    pub fn shuffle(&self, other: &Self) -> Result<Self> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = Self::zero(self.alphabet);
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &other.terms {
                let xy = x * y;
                let left = shuffle_words(&a.0, &c.0);
                let right = shuffle_words(&b.0, &d.0);
                for (l, ml) in &left {
                    for (r, mr) in &right {
                        out.add_term(l.clone(), r.clone(), &xy * &Scalar::from_int((ml * mr) as i64));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies linear maps to each leg and multiplies the legs by shuffle.
    pub fn convolve(
        &self,
        left: impl Fn(&ShuffleTensor<L>) -> ShuffleTensor<L>,
        right: impl Fn(&ShuffleTensor<L>) -> ShuffleTensor<L>,
    ) -> Result<ShuffleTensor<L>> {
        let mut out = ShuffleTensor::zero(self.alphabet);
        for ((a, b), c) in &self.terms {
            let la = left(&ShuffleTensor::monomial(self.alphabet, a.clone(), Scalar::one()));
            let rb = right(&ShuffleTensor::monomial(self.alphabet, b.clone(), Scalar::one()));
            out = out.add(&la.shuffle(&rb)?.scale(c))?;
        }
        Ok(out)
    }
}

/// An element of `Sh(V) ⊗ V`, the target of the right derivation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordLetterSum<L> {
    alphabet: AlphabetId,
    terms: BTreeMap<(Word<L>, L), Scalar>,
}

impl<L: Letter> WordLetterSum<L> {
    pub fn zero(alphabet: AlphabetId) -> Self {
        WordLetterSum {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, word: Word<L>, letter: L, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let key = (word, letter);
        let e = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *e += &coeff;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word<L>, L), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = self.clone();
        for ((w, l), c) in &other.terms {
            out.add_term(w.clone(), l.clone(), c.clone());
        }
        Ok(out)
    }

    /// Module action `a ⧢ (b ⊗ v) = (a ⧢ b) ⊗ v`.
    pub fn act(&self, a: &ShuffleTensor<L>) -> Result<Self> {
        if self.alphabet != a.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = Self::zero(self.alphabet);
        for ((w, l), c) in &self.terms {
            let prod = a.shuffle(&ShuffleTensor::monomial(self.alphabet, w.clone(), c.clone()))?;
            for (pw, pc) in prod.terms() {
                out.add_term(pw.clone(), l.clone(), pc.clone());
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const AB: AlphabetId = AlphabetId(7);

    fn w(s: &str) -> ShuffleTensor<char> {
        if s.is_empty() {
            return ShuffleTensor::unit(AB);
        }
        ShuffleTensor::word(AB, s.chars().collect())
    }

    fn sum(parts: &[&str]) -> ShuffleTensor<char> {
        parts
            .iter()
            .fold(ShuffleTensor::zero(AB), |acc, p| acc.add(&w(p)).unwrap())
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(w("a").shuffle(&w("b")).unwrap(), sum(&["ab", "ba"]));
        assert_eq!(w("a").shuffle(&w("bc")).unwrap(), sum(&["abc", "bac", "bca"]));
        let t = sum(&["ab", "c"]);
        assert_eq!(w("").shuffle(&t).unwrap(), t);
        assert_eq!(w("a").shuffle(&w("a")).unwrap(), w("aa").scale(&Scalar::from_int(2)));
    }

    #[test]
    fn alphabet_mismatch_is_reported() {
        let other = ShuffleTensor::word(AlphabetId(8), vec!['a']);
        assert_eq!(w("a").shuffle(&other), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn deconcat_examples() {
        let one = Word::<char>::empty();
        let d = w("ab").deconcat();
        assert_eq!(d.len(), 3);
        assert_eq!(d.coeff(&one, &Word(vec!['a', 'b'])), Scalar::one());
        assert_eq!(d.coeff(&Word(vec!['a']), &Word(vec!['b'])), Scalar::one());
        assert_eq!(d.coeff(&Word(vec!['a', 'b']), &one), Scalar::one());
        let d1 = w("").deconcat();
        assert_eq!(d1.len(), 1);
        assert_eq!(d1.coeff(&one, &one), Scalar::one());
        assert_eq!(w("a").deconcat().len(), 2);
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(w("ab").antipode(), w("ba"));
        assert_eq!(w("a").antipode(), w("a").scale(&-Scalar::one()));
        assert_eq!(w("").antipode(), w(""));
    }

    #[test]
    fn derivation_examples() {
        let d = w("ab").deriv_right();
        let mut expected = WordLetterSum::zero(AB);
        expected.add_term(Word(vec!['a']), 'b', Scalar::one());
        assert_eq!(d, expected);
        assert!(w("").deriv_right().is_zero());
        // ∂([a]⧢[b]) = [a]⊗b + [b]⊗a
        let d2 = w("a").shuffle(&w("b")).unwrap().deriv_right();
        let mut e2 = WordLetterSum::zero(AB);
        e2.add_term(Word(vec!['a']), 'b', Scalar::one());
        e2.add_term(Word(vec!['b']), 'a', Scalar::one());
        assert_eq!(d2, e2);
    }

    #[test]
    fn r_xi_examples() {
        let a_star = |l: &char| if *l == 'a' { Scalar::one() } else { Scalar::zero() };
        assert_eq!(w("xa").r_xi(a_star), w("x"));
        assert!(w("xb").r_xi(a_star).is_zero());
        assert!(w("").r_xi(a_star).is_zero());
    }

    #[test]
    fn coradical_examples() {
        assert!(!w("ab").coradical_member(1));
        assert!(w("ab").coradical_member(2));
        assert!(w("").coradical_member(0));
        assert!(!w("a").coradical_member(0));
    }

    #[test]
    fn words_up_to_counts() {
        let ws = words_up_to(&['a', 'b'], 3);
        assert_eq!(ws.len(), 1 + 2 + 4 + 8);
        assert!(ws.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn substitution_is_multilinear() {
        let t = w("ab");
        let img = t.substitute(AlphabetId(9), |l| match l {
            'a' => vec![('x', Scalar::one()), ('y', Scalar::from_int(2))],
            _ => vec![('z', Scalar::from_int(3))],
        });
        assert_eq!(img.len(), 2);
        assert_eq!(img.coeff(&Word(vec!['y', 'z'])), Scalar::from_int(6));
    }
}
