//! Numerical iterated integrals `I_{x₀}` along piecewise paths in `ℂ ∖ S∞`.
//!
//! With the convention `I([ω₁|…|ωₙ]) = ∫ I([ω₁|…|ωₙ₋₁])·ωₙ` every word needs
//! exactly its prefixes, so a set of words becomes a prefix trie and the whole
//! trie is integrated as one triangular linear ODE with an adaptive
//! Dormand–Prince 5(4) scheme.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{ClassLetter, Curve, FormLetter, NumericFunction, Section};
use crate::error::{Error, ParseError, Result};
use crate::scalar::Scalar;
use crate::shuffle::{words_up_to, Letter, ShuffleTensor, Word};

pub type C64 = Complex64;

fn c(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

fn arr(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Segment {
    Line([[f64; 2]; 2]),
    Arc {
        center: [f64; 2],
        radius: f64,
        from: f64,
        to: f64,
    },
}

impl Segment {
    pub fn line(a: C64, b: C64) -> Self {
        Segment::Line([arr(a), arr(b)])
    }

    pub fn arc(center: C64, radius: f64, from: f64, to: f64) -> Self {
        Segment::Arc {
            center: arr(center),
            radius,
            from,
            to,
        }
    }

    /// Position and velocity at parameter `t ∈ [0, 1]`.
    #[inline]
    pub fn at(&self, t: f64) -> (C64, C64) {
        match *self {
            Segment::Line([a, b]) => {
                let (a, b) = (c(a), c(b));
                (a + (b - a) * t, b - a)
            }
            Segment::Arc {
                center,
                radius,
                from,
                to,
            } => {
                let th = from + (to - from) * t;
                let e = C64::from_polar(radius, th);
                (c(center) + e, C64::i() * e * (to - from))
            }
        }
    }

    pub fn start(&self) -> C64 {
        self.at(0.0).0
    }

    pub fn end(&self) -> C64 {
        self.at(1.0).0
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line([a, b]) => Segment::Line([b, a]),
            Segment::Arc {
                center,
                radius,
                from,
                to,
            } => Segment::Arc {
                center,
                radius,
                from: to,
                to: from,
            },
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line([a, b]) => (c(b) - c(a)).norm(),
            Segment::Arc { radius, from, to, .. } => radius * (to - from).abs(),
        }
    }

    pub fn distance_to(&self, p: C64) -> f64 {
        match *self {
            Segment::Line([a, b]) => {
                let (a, b) = (c(a), c(b));
                let d = b - a;
                let n = d.norm_sqr();
                let t = if n == 0.0 {
                    0.0
                } else {
                    (((p - a) * d.conj()).re / n).clamp(0.0, 1.0)
                };
                (a + d * t - p).norm()
            }
            Segment::Arc {
                center,
                radius,
                from,
                to,
            } => {
                let cc = c(center);
                let rel = p - cc;
                let sweep = to - from;
                let inside = if rel.norm() == 0.0 || sweep.abs() >= 2.0 * PI {
                    true
                } else {
                    let phi = rel.arg();
                    let d = if sweep >= 0.0 {
                        (phi - from).rem_euclid(2.0 * PI)
                    } else {
                        (from - phi).rem_euclid(2.0 * PI)
                    };
                    d <= sweep.abs()
                };
                if inside {
                    (rel.norm() - radius).abs()
                } else {
                    (self.start() - p).norm().min((self.end() - p).norm())
                }
            }
        }
    }
}

/// Piecewise path with a basepoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub base: [f64; 2],
    pub segments: Vec<Segment>,
}

impl Path {
    pub fn new(base: C64) -> Self {
        Path {
            base: arr(base),
            segments: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Path = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("paths serialize")
    }

    pub fn straight(a: C64, b: C64) -> Self {
        Path::new(a).line_to(b)
    }

    /// Polyline through the given points.
    pub fn polyline(points: &[C64]) -> Self {
        let mut p = Path::new(points[0]);
        for &z in &points[1..] {
            p = p.line_to(z);
        }
        p
    }

    pub fn base(&self) -> C64 {
        c(self.base)
    }

    pub fn end(&self) -> C64 {
        self.segments.last().map_or(self.base(), Segment::end)
    }

    pub fn is_closed(&self) -> bool {
        (self.end() - self.base()).norm() <= 1e-9 * (1.0 + self.base().norm())
    }

    pub fn line_to(mut self, z: C64) -> Self {
        let a = self.end();
        self.segments.push(Segment::line(a, z));
        self
    }

    pub fn push(mut self, seg: Segment) -> Self {
        self.segments.push(seg);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let mut cur = self.base();
        for (k, s) in self.segments.iter().enumerate() {
            let st = s.start();
            if !(st - cur).norm().is_finite() || (st - cur).norm() > 1e-9 * (1.0 + cur.norm()) {
                return Err(Error::BrokenPath(k));
            }
            cur = s.end();
        }
        Ok(())
    }

    /// This path followed by `other`.
    pub fn then(&self, other: &Path) -> Result<Path> {
        if (other.base() - self.end()).norm() > 1e-9 * (1.0 + self.end().norm()) {
            return Err(Error::BrokenPath(self.segments.len()));
        }
        let mut out = self.clone();
        out.segments.extend(other.segments.iter().cloned());
        Ok(out)
    }

    pub fn reversed(&self) -> Path {
        Path {
            base: arr(self.end()),
            segments: self.segments.iter().rev().map(Segment::reversed).collect(),
        }
    }

    pub fn distance_to(&self, points: &[C64]) -> f64 {
        let mut best = f64::INFINITY;
        for s in &self.segments {
            for &p in points {
                best = best.min(s.distance_to(p));
            }
        }
        if self.segments.is_empty() {
            for &p in points {
                best = best.min((self.base() - p).norm());
            }
        }
        best
    }

    /// Straight route from `a` to `b` that passes above (to the left of the
    /// direction of travel) every pole lying on or next to the segment.
    pub fn route(poles: &[C64], a: C64, b: C64) -> Path {
        let mut path = Path::new(a);
        let len = (b - a).norm();
        if len == 0.0 {
            return path;
        }
        let u = (b - a) / len;
        let mut detours: Vec<(f64, C64, f64)> = Vec::new();
        for (k, &p) in poles.iter().enumerate() {
            let rel = (p - a) * u.conj();
            let (tp, d) = (rel.re, rel.im);
            let others = poles
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &q)| (q - p).norm())
                .fold(f64::INFINITY, f64::min);
            let r = 0.4 * others.min((a - p).norm()).min((b - p).norm());
            if r > 0.0 && d.abs() < 0.5 * r && tp > 0.0 && tp < len {
                detours.push((tp, p, r));
            }
        }
        detours.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (tp, p, r) in detours {
            let d = ((p - a) * u.conj()).im;
            let half = (r * r - d * d).sqrt();
            let entry = a + u * (tp - half);
            let exit = a + u * (tp + half);
            let th_in = (entry - p).arg();
            let th_out = (exit - p).arg();
            let sweep = (th_in - th_out).rem_euclid(2.0 * PI);
            path = path.line_to(entry).push(Segment::arc(p, r, th_in, th_in - sweep));
        }
        path.line_to(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub weight: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 200_000,
            weight: 6,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be positive".into()));
        }
        Ok(())
    }

    pub fn with_weight(mut self, n: usize) -> Self {
        self.weight = n;
        self
    }
}

/// Guard distance for a numeric pole set.
pub fn pole_guard(points: &[C64]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..points.len() {
        for j in 0..i {
            d = d.min((points[i] - points[j]).norm());
        }
    }
    if d.is_finite() {
        (1e-3 * d).max(1e-8)
    } else {
        1e-8
    }
}

/// One row of an integration trace: global parameter and tracked values.
pub type TraceRow = (f64, Vec<C64>);

/// Prefix trie of words together with the numeric form of every letter.
#[derive(Debug, Clone)]
pub struct WordSystem<L> {
    letters: Vec<L>,
    forms: Vec<NumericFunction>,
    parent: Vec<usize>,
    letter: Vec<usize>,
    index: BTreeMap<Word<L>, usize>,
}

impl<L: Letter> WordSystem<L> {
    pub fn new<'a>(words: impl IntoIterator<Item = &'a Word<L>>, form: impl Fn(&L) -> NumericFunction) -> Self
    where
        L: 'a,
    {
        let mut sys = WordSystem {
            letters: Vec::new(),
            forms: Vec::new(),
            parent: vec![usize::MAX],
            letter: vec![usize::MAX],
            index: BTreeMap::new(),
        };
        sys.index.insert(Word::empty(), 0);
        for w in words {
            sys.insert(w, &form);
        }
        sys
    }

    fn insert(&mut self, w: &Word<L>, form: &impl Fn(&L) -> NumericFunction) -> usize {
        if let Some(&k) = self.index.get(w) {
            return k;
        }
        let n = w.weight();
        let parent = self.insert(&w.prefix(n - 1), form);
        let l = &w.letters()[n - 1];
        let li = match self.letters.iter().position(|x| x == l) {
            Some(i) => i,
            None => {
                self.letters.push(l.clone());
                self.forms.push(form(l));
                self.letters.len() - 1
            }
        };
        self.parent.push(parent);
        self.letter.push(li);
        let k = self.parent.len() - 1;
        self.index.insert(w.clone(), k);
        k
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, w: &Word<L>) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn words(&self) -> impl Iterator<Item = (&Word<L>, usize)> {
        self.index.iter().map(|(w, &k)| (w, k))
    }

    pub fn pole_locations(&self) -> Vec<C64> {
        let mut out: Vec<C64> = Vec::new();
        for f in &self.forms {
            for p in f.pole_locations() {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Initial state `1` at the empty word and zero elsewhere.
    pub fn unit_state(&self) -> Vec<C64> {
        let mut y = vec![C64::zero(); self.len()];
        y[0] = C64::one();
        y
    }

    /// Integrates from `path.base()` to `path.end()` starting at `init`.
    pub fn solve(
        &self,
        path: &Path,
        init: Vec<C64>,
        poles: &[C64],
        guard: f64,
        cfg: &IntegratorConfig,
        mut trace: Option<&mut Vec<TraceRow>>,
    ) -> Result<Vec<C64>> {
        cfg.validate()?;
        path.validate()?;
        let dist = path.distance_to(poles);
        if dist < guard {
            return Err(Error::TooCloseToPole { distance: dist, guard });
        }
        let mut y = init;
        if let Some(tr) = trace.as_deref_mut() {
            tr.push((0.0, y.clone()));
        }
        let mut steps = 0usize;
        for (k, seg) in path.segments.iter().enumerate() {
            if seg.length() == 0.0 {
                continue;
            }
            y = self.integrate_segment(seg, y, cfg, &mut steps, k as f64, trace.as_deref_mut())?;
        }
        Ok(y)
    }

    fn rhs(&self, seg: &Segment, t: f64, y: &[C64], out: &mut [C64], vals: &mut [C64]) {
        let (z, dz) = seg.at(t);
        for (v, f) in vals.iter_mut().zip(&self.forms) {
            *v = f.eval(z) * dz;
        }
        out[0] = C64::zero();
        for p in 1..y.len() {
            out[p] = y[self.parent[p]] * vals[self.letter[p]];
        }
    }

    fn integrate_segment(
        &self,
        seg: &Segment,
        mut y: Vec<C64>,
        cfg: &IntegratorConfig,
        steps: &mut usize,
        offset: f64,
        mut trace: Option<&mut Vec<TraceRow>>,
    ) -> Result<Vec<C64>> {
        const C2: f64 = 1.0 / 5.0;
        const C3: f64 = 3.0 / 10.0;
        const C4: f64 = 4.0 / 5.0;
        const C5: f64 = 8.0 / 9.0;
        const A21: f64 = 1.0 / 5.0;
        const A31: f64 = 3.0 / 40.0;
        const A32: f64 = 9.0 / 40.0;
        const A41: f64 = 44.0 / 45.0;
        const A42: f64 = -56.0 / 15.0;
        const A43: f64 = 32.0 / 9.0;
        const A51: f64 = 19372.0 / 6561.0;
        const A52: f64 = -25360.0 / 2187.0;
        const A53: f64 = 64448.0 / 6561.0;
        const A54: f64 = -212.0 / 729.0;
        const A61: f64 = 9017.0 / 3168.0;
        const A62: f64 = -355.0 / 33.0;
        const A63: f64 = 46732.0 / 5247.0;
        const A64: f64 = 49.0 / 176.0;
        const A65: f64 = -5103.0 / 18656.0;
        const B1: f64 = 35.0 / 384.0;
        const B3: f64 = 500.0 / 1113.0;
        const B4: f64 = 125.0 / 192.0;
        const B5: f64 = -2187.0 / 6784.0;
        const B6: f64 = 11.0 / 84.0;
        const E1: f64 = 71.0 / 57600.0;
        const E3: f64 = -71.0 / 16695.0;
        const E4: f64 = 71.0 / 1920.0;
        const E5: f64 = -17253.0 / 339200.0;
        const E6: f64 = 22.0 / 525.0;
        const E7: f64 = -1.0 / 40.0;
        // local error target, so that the accumulated error stays below the requested tolerance
        const LOCAL: f64 = 1e-3;

        let n = y.len();
        let mut vals = vec![C64::zero(); self.forms.len()];
        let mut k: [Vec<C64>; 7] = std::array::from_fn(|_| vec![C64::zero(); n]);
        let mut tmp = vec![C64::zero(); n];
        let mut ynew = vec![C64::zero(); n];
        let mut t = 0.0f64;
        let mut h = 0.02f64;
        self.rhs(seg, t, &y, &mut k[0], &mut vals);
        while t < 1.0 {
            if *steps >= cfg.max_steps {
                return Err(Error::StepLimit(cfg.max_steps));
            }
            if h < 1e-14 {
                return Err(Error::StepUnderflow(offset + t));
            }
            let last = t + h >= 1.0;
            if last {
                h = 1.0 - t;
            }
            macro_rules! stage {
                ($dst:expr, $ct:expr, [$( ($a:expr, $i:expr) ),*]) => {{
                    for p in 0..n {
                        tmp[p] = y[p] $( + k[$i][p] * ($a * h) )*;
                    }
                    let (head, tail) = k.split_at_mut($dst);
                    let _ = &head;
                    self.rhs(seg, t + $ct * h, &tmp, &mut tail[0], &mut vals);
                }};
            }
            stage!(1, C2, [(A21, 0)]);
            stage!(2, C3, [(A31, 0), (A32, 1)]);
            stage!(3, C4, [(A41, 0), (A42, 1), (A43, 2)]);
            stage!(4, C5, [(A51, 0), (A52, 1), (A53, 2), (A54, 3)]);
            stage!(5, 1.0, [(A61, 0), (A62, 1), (A63, 2), (A64, 3), (A65, 4)]);
            for p in 0..n {
                ynew[p] = y[p]
                    + (k[0][p] * B1 + k[2][p] * B3 + k[3][p] * B4 + k[4][p] * B5 + k[5][p] * B6) * h;
            }
            {
                let (head, tail) = k.split_at_mut(6);
                let _ = &head;
                self.rhs(seg, t + h, &ynew, &mut tail[0], &mut vals);
            }
            let mut err = 0.0f64;
            for p in 0..n {
                let e = (k[0][p] * E1 + k[2][p] * E3 + k[3][p] * E4 + k[4][p] * E5 + k[5][p] * E6
                    + k[6][p] * E7)
                    * h;
                let sc = LOCAL * (cfg.atol + cfg.rtol * y[p].norm().max(ynew[p].norm()));
                err = err.max(e.norm() / sc);
            }
            *steps += 1;
            if err <= 1.0 {
                t = if last { 1.0 } else { t + h };
                std::mem::swap(&mut y, &mut ynew);
                k.swap(0, 6);
                if let Some(tr) = trace.as_deref_mut() {
                    tr.push((offset + t, y.clone()));
                }
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                h *= fac;
            } else {
                let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
                h *= fac;
            }
        }
        Ok(y)
    }
}

/// Numeric form of an `Ω(C)` basis letter.
pub fn form_letter_numeric(curve: &Curve, l: &FormLetter) -> NumericFunction {
    let pts = curve.numeric_points();
    match *l {
        FormLetter::Monomial(k) => {
            let mut poly = vec![C64::zero(); k as usize + 1];
            poly[k as usize] = C64::one();
            NumericFunction::from_raw(poly, Vec::new())
        }
        FormLetter::Pole { pole, order } => {
            NumericFunction::from_raw(Vec::new(), vec![(pts[pole], order, C64::one())])
        }
    }
}

/// Numeric forms `σ(h_s)` for every class letter.
pub fn section_numeric(section: &Section) -> Vec<NumericFunction> {
    (0..section.curve().len())
        .map(|s| section.of_class(s).to_numeric())
        .collect()
}

/// Value of `I_{x₀}(w)` at the end of the path, together with all prefixes
/// (index `k` holds the prefix of weight `k`).
#[derive(Debug, Clone, PartialEq)]
pub struct WordIntegral {
    pub value: C64,
    pub prefixes: Vec<C64>,
}

pub fn integrate_word(
    curve: &Curve,
    path: &Path,
    word: &Word<FormLetter>,
    cfg: &IntegratorConfig,
) -> Result<WordIntegral> {
    let sys = WordSystem::new([word], |l| form_letter_numeric(curve, l));
    let y = sys.solve(path, sys.unit_state(), curve.numeric_points(), curve.pole_guard(), cfg, None)?;
    let prefixes: Vec<C64> = (0..=word.weight())
        .map(|k| y[sys.node(&word.prefix(k)).expect("prefix present")])
        .collect();
    Ok(WordIntegral {
        value: *prefixes.last().expect("nonempty"),
        prefixes,
    })
}

fn tensor_value<L: Letter>(sys: &WordSystem<L>, y: &[C64], t: &ShuffleTensor<L>) -> C64 {
    t.terms()
        .map(|(w, q)| y[sys.node(w).expect("word in system")] * q.to_c64())
        .sum()
}

/// `I_{x₀}(t)` at the end of the path for an `Ω(C)` tensor.
pub fn integrate_tensor(
    curve: &Curve,
    path: &Path,
    t: &ShuffleTensor<FormLetter>,
    cfg: &IntegratorConfig,
) -> Result<C64> {
    Ok(integrate_tensors(curve, path, &[t], cfg)?[0])
}

/// Several `Ω(C)` tensors along one path, in a single joint solve.
pub fn integrate_tensors(
    curve: &Curve,
    path: &Path,
    ts: &[&ShuffleTensor<FormLetter>],
    cfg: &IntegratorConfig,
) -> Result<Vec<C64>> {
    let sys = WordSystem::new(ts.iter().flat_map(|t| t.terms().map(|(w, _)| w)), |l| {
        form_letter_numeric(curve, l)
    });
    let y = sys.solve(path, sys.unit_state(), curve.numeric_points(), curve.pole_guard(), cfg, None)?;
    Ok(ts.iter().map(|t| tensor_value(&sys, &y, t)).collect())
}

/// `I_{x₀}(σ(t))` for class tensors `t`.
pub fn integrate_class_tensors(
    section: &Section,
    path: &Path,
    ts: &[&ShuffleTensor<ClassLetter>],
    cfg: &IntegratorConfig,
) -> Result<Vec<C64>> {
    let forms = section_numeric(section);
    let sys = WordSystem::new(ts.iter().flat_map(|t| t.terms().map(|(w, _)| w)), |l| forms[l.0].clone());
    let curve = section.curve();
    let y = sys.solve(path, sys.unit_state(), curve.numeric_points(), curve.pole_guard(), cfg, None)?;
    Ok(ts.iter().map(|t| tensor_value(&sys, &y, t)).collect())
}

/// Iterated integrals of words over floating-point forms (numeric-only mode).
pub fn integrate_numeric(
    forms: &[NumericFunction],
    path: &Path,
    words: &[Vec<usize>],
    cfg: &IntegratorConfig,
) -> Result<Vec<C64>> {
    let ws: Vec<Word<usize>> = words.iter().map(|w| Word(w.clone())).collect();
    let sys = WordSystem::new(&ws, |&l| forms[l].clone());
    let poles = sys.pole_locations();
    let y = sys.solve(path, sys.unit_state(), &poles, pole_guard(&poles), cfg, None)?;
    Ok(ws.iter().map(|w| y[sys.node(w).expect("present")]).collect())
}

/// Weight-truncated assignment word ↦ complex value.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupLikeSeries<L> {
    weight: usize,
    values: BTreeMap<Word<L>, C64>,
}

impl<L: Letter> GroupLikeSeries<L> {
    pub fn from_values(weight: usize, values: BTreeMap<Word<L>, C64>) -> Self {
        GroupLikeSeries { weight, values }
    }

    /// `1` on the empty word, `0` elsewhere (all words over `letters`).
    pub fn identity(letters: &[L], weight: usize) -> Self {
        let values = words_up_to(letters, weight)
            .into_iter()
            .map(|w| {
                let v = if w.is_empty() { C64::one() } else { C64::zero() };
                (w, v)
            })
            .collect();
        GroupLikeSeries { weight, values }
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn values(&self) -> &BTreeMap<Word<L>, C64> {
        &self.values
    }

    pub fn get(&self, w: &Word<L>) -> Option<C64> {
        self.values.get(w).copied()
    }

    pub fn value(&self, letters: &[L]) -> C64 {
        self.get(&Word(letters.to_vec())).unwrap_or_default()
    }

    /// Linear extension to a tensor; words above the truncation count as 0.
    pub fn eval(&self, t: &ShuffleTensor<L>) -> C64 {
        t.terms()
            .map(|(w, q)| self.get(w).unwrap_or_default() * q.to_c64())
            .sum()
    }

    /// `max |S(a⧢b) − S(a)S(b)|` over words with `|a| + |b| ≤ N`.
    pub fn group_like_residual(&self) -> f64 {
        let words: Vec<&Word<L>> = self.values.keys().collect();
        let mut worst = (self.get(&Word::empty()).unwrap_or_default() - C64::one()).norm();
        for a in &words {
            for b in &words {
                if a.weight() + b.weight() > self.weight || a > b {
                    continue;
                }
                let sh = crate::shuffle::shuffle_words(a.letters(), b.letters());
                let lhs: C64 = sh
                    .iter()
                    .map(|(w, &m)| self.get(w).unwrap_or_default() * m as f64)
                    .sum();
                let rhs = self.values[*a] * self.values[*b];
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }

    /// Concatenation product `(S·T)(w) = Σ_{w=uv} S(u)T(v)`; for path
    /// series this is the series of the composite path.
    pub fn concat_product(&self, other: &Self) -> Self {
        let weight = self.weight.min(other.weight);
        let mut values = BTreeMap::new();
        for w in self.values.keys().filter(|w| w.weight() <= weight) {
            let mut acc = C64::zero();
            for (u, v) in w.splits() {
                acc += self.get(&u).unwrap_or_default() * other.get(&v).unwrap_or_default();
            }
            values.insert(w.clone(), acc);
        }
        GroupLikeSeries { weight, values }
    }

    /// Inverse for the concatenation product of a group-like series:
    /// `S⁻¹(w) = (−1)^{|w|} S(reverse w)`.
    pub fn inverse(&self) -> Self {
        let values = self
            .values
            .keys()
            .map(|w| {
                let v = self.get(&w.reversed()).unwrap_or_default();
                let v = if w.weight() % 2 == 1 { -v } else { v };
                (w.clone(), v)
            })
            .collect();
        GroupLikeSeries {
            weight: self.weight,
            values,
        }
    }

    pub fn max_distance(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .map(|(w, v)| (v - other.get(w).unwrap_or_default()).norm())
            .fold(0.0, f64::max)
    }
}

/// `J_{σ,x₀}` at the end of `path`: every class word of weight `≤ cfg.weight`.
pub fn j_element(section: &Section, path: &Path, cfg: &IntegratorConfig) -> Result<GroupLikeSeries<ClassLetter>> {
    j_element_traced(section, path, cfg, None)
}

pub fn j_element_traced(
    section: &Section,
    path: &Path,
    cfg: &IntegratorConfig,
    trace: Option<&mut Vec<TraceRow>>,
) -> Result<GroupLikeSeries<ClassLetter>> {
    let curve = section.curve();
    let words = words_up_to(&curve.class_letters(), cfg.weight);
    let forms = section_numeric(section);
    let sys = WordSystem::new(&words, |l| forms[l.0].clone());
    let y = sys.solve(path, sys.unit_state(), curve.numeric_points(), curve.pole_guard(), cfg, trace)?;
    let values = words
        .into_iter()
        .map(|w| {
            let v = y[sys.node(&w).expect("word present")];
            (w, v)
        })
        .collect();
    Ok(GroupLikeSeries {
        weight: cfg.weight,
        values,
    })
}

/// `|I(a⧢b) − I(a)I(b)|` at the end of the path.
pub fn shuffle_identity_check(
    curve: &Curve,
    path: &Path,
    a: &ShuffleTensor<FormLetter>,
    b: &ShuffleTensor<FormLetter>,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let ab = a.shuffle(b)?;
    let v = integrate_tensors(curve, path, &[&ab, a, b], cfg)?;
    Ok((v[0] - v[1] * v[2]).norm())
}

/// `|I_{x₀}(w)(x₂) − Σ I_{x₀}(w⁽¹⁾)(x₁)·I_{x₁}(w⁽²⁾)(x₂)|` for composable paths.
pub fn chain_rule_check(
    curve: &Curve,
    first: &Path,
    second: &Path,
    w: &ShuffleTensor<FormLetter>,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let whole = first.then(second)?;
    let pairs = w.deconcat();
    let mut lefts: Vec<ShuffleTensor<FormLetter>> = Vec::new();
    let mut rights: Vec<ShuffleTensor<FormLetter>> = Vec::new();
    let mut coeffs: Vec<Scalar> = Vec::new();
    for ((l, r), q) in pairs.terms() {
        lefts.push(ShuffleTensor::monomial(w.alphabet(), l.clone(), Scalar::one()));
        rights.push(ShuffleTensor::monomial(w.alphabet(), r.clone(), Scalar::one()));
        coeffs.push(q.clone());
    }
    let direct = integrate_tensor(curve, &whole, w, cfg)?;
    let lv = integrate_tensors(curve, first, &lefts.iter().collect::<Vec<_>>(), cfg)?;
    let rv = integrate_tensors(curve, second, &rights.iter().collect::<Vec<_>>(), cfg)?;
    let split: C64 = (0..coeffs.len()).map(|k| lv[k] * rv[k] * coeffs[k].to_c64()).sum();
    Ok((direct - split).norm())
}

/// CSV rendering of a trace for the listed word labels.
pub fn trace_csv(labels: &[String], columns: &[usize], rows: &[TraceRow]) -> String {
    let mut out = String::from("t");
    for l in labels {
        let _ = write!(out, ",re_{l},im_{l}");
    }
    out.push('\n');
    for (t, y) in rows {
        let _ = write!(out, "{t}");
        for &c in columns {
            let _ = write!(out, ",{},{}", y[c].re, y[c].im);
        }
        out.push('\n');
    }
    out
}
