//! End-to-end checks of the library against independent oracles. Each check
//! is seeded and reports its worst observed residual.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;

use crate::connection::{connection_derivative, FunctionTensor};
use crate::curve::{ClassLetter, Curve, Section};
use crate::error::Result;
use crate::hyperlog::{self, PathClass};
use crate::iterint::{chain_rule_check, integrate_tensor, j_element, shuffle_identity_check, IntegratorConfig, Path};
use crate::kz::kz_specialization_check;
use crate::local_expansion::{expand_at, ExpansionTarget};
use crate::monodromy::{monodromy_operator, pairing, period_matrix, standard_loop, unipotence_check};
use crate::par::{par_range, Execution};
use crate::random::{self, Rng64};
use crate::reduce::{d_map, decompose_subker, kernel_witness, normal_form};
use crate::scalar::Scalar;
use crate::shuffle::{words_up_to, ShuffleTensor, Word};

type C64 = Complex64;

#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<24} {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

pub const CRITERIA: [&str; 12] = [
    "mzv values",
    "shuffle morphism",
    "chain rule",
    "period matrix",
    "monodromy",
    "reduction soundness",
    "kernel exactness",
    "coradical filtration",
    "kz specialization",
    "local expansions",
    "connection",
    "homotopy invariance",
];

fn zero_one() -> Curve {
    Curve::from_ints(&[0, 1]).expect("valid")
}

fn cfg() -> IntegratorConfig {
    IntegratorConfig::default()
}

fn seeded(seed: u64, id: usize, k: usize) -> Rng64 {
    random::rng(seed ^ ((id as u64) << 40) ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn worst(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

fn collect(v: Vec<Result<f64>>) -> Result<f64> {
    Ok(worst(v.into_iter().collect::<Result<Vec<f64>>>()?))
}

fn c1_mzv() -> Result<(bool, String)> {
    let c = zero_one();
    let h = |i| ClassLetter(i);
    let n = 1_000_000u64;
    let tail2 = |n: f64| 1.0 / n - 1.0 / (2.0 * n * n) + 1.0 / (6.0 * n * n * n);
    let tail3 = |n: f64| 1.0 / (2.0 * n * n) - 1.0 / (2.0 * n * n * n);
    let s2: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64).powi(2)).sum::<f64>() + tail2(n as f64);
    let s3: f64 = (1..=n).rev().map(|k| 1.0 / (k as f64).powi(3)).sum::<f64>() + tail3(n as f64);
    let t = Instant::now();
    let z2 = -hyperlog::mzv(&c, &Word(vec![h(1), h(0)]), &cfg())?;
    let t2 = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let z3 = -hyperlog::mzv(&c, &Word(vec![h(1), h(0), h(0)]), &cfg())?;
    let t3 = t.elapsed().as_secs_f64();
    let e2 = (z2 - s2).norm();
    let e3 = (z3 - s3).norm();
    Ok((
        e2 < 1e-7 && e3 < 1e-7 && t2 < 5.0 && t3 < 5.0,
        format!("|ζ(2) err| {e2:.1e} in {t2:.2}s, |ζ(3) err| {e3:.1e} in {t3:.2}s"),
    ))
}

fn c2_shuffle(seed: u64, exec: Execution) -> Result<(bool, String)> {
    let c = zero_one();
    let res = par_range(exec, 50, |k| {
        let mut r = seeded(seed, 2, k);
        let wa = r.gen_range(1..=3);
        let wb = r.gen_range(1..=4 - wa);
        let a = ShuffleTensor::monomial(c.form_alphabet(), random::form_word(&mut r, &c, wa), Scalar::from_int(1));
        let b = ShuffleTensor::monomial(c.form_alphabet(), random::form_word(&mut r, &c, wb), Scalar::from_int(1));
        let x0 = random::point(&mut r, &c, 1.5, 0.4);
        let z = random::point(&mut r, &c, 1.5, 0.4);
        let path = random::safe_path(&mut r, &c, x0, z, 2, 1.5, 0.3);
        shuffle_identity_check(&c, &path, &a, &b, &cfg())
    });
    let m = collect(res)?;
    Ok((m < 1e-9, format!("max residual {m:.1e} over 50 pairs")))
}

fn c3_chain(seed: u64, exec: Execution) -> Result<(bool, String)> {
    let c = zero_one();
    let res = par_range(exec, 50, |k| {
        let mut r = seeded(seed, 3, k);
        let n = r.gen_range(1..=4);
        let w = ShuffleTensor::monomial(c.form_alphabet(), random::form_word(&mut r, &c, n), Scalar::from_int(1));
        let x0 = random::point(&mut r, &c, 1.5, 0.4);
        let x1 = random::point(&mut r, &c, 1.5, 0.4);
        let x2 = random::point(&mut r, &c, 1.5, 0.4);
        let first = random::safe_path(&mut r, &c, x0, x1, 1, 1.5, 0.3);
        let second = random::safe_path(&mut r, &c, x1, x2, 1, 1.5, 0.3);
        chain_rule_check(&c, &first, &second, &w, &cfg())
    });
    let m = collect(res)?;
    Ok((m < 1e-9, format!("max residual {m:.1e} over 50 splits")))
}

fn c4_periods(seed: u64, exec: Execution) -> Result<(bool, String)> {
    let mut err: f64 = 0.0;
    for n in 1..=4 {
        for k in 0..3 {
            let mut r = seeded(seed, 4, 10 * n + k);
            let c = random::pole_set(&mut r, n);
            let p = period_matrix(&Section::standard(&c), None, &cfg(), exec)?;
            for (s, row) in p.entries.iter().enumerate() {
                for (t, v) in row.iter().enumerate() {
                    let expect = if s == t { C64::new(0.0, 2.0 * PI) } else { C64::new(0.0, 0.0) };
                    err = err.max((v - expect).norm());
                }
            }
        }
    }
    let mut min_ratio = f64::INFINITY;
    for k in 0..10 {
        let mut r = seeded(seed, 4, 100 + k);
        let n = r.gen_range(1..=4);
        let c = random::pole_set(&mut r, n);
        let sigma = random::section(&mut r, &c);
        let p = period_matrix(&sigma, None, &cfg(), exec)?;
        min_ratio = min_ratio.min(p.determinant().norm() / (2.0 * PI).powi(n as i32));
    }
    Ok((
        err < 1e-9 && min_ratio > 1e-6,
        format!("max |P − 2πi·I| {err:.1e}; min |det|/(2π)ⁿ {min_ratio:.3}"),
    ))
}

fn c5_monodromy(seed: u64) -> Result<(bool, String)> {
    let c = zero_one();
    let x0 = c.default_basepoint().to_c64();
    let g0 = standard_loop(&c, 0, x0)?;
    let g1 = standard_loop(&c, 1, x0)?;
    let p = pairing(&Section::standard(&c), &g0, 1, &cfg())?;
    let e0 = (p.value(&[ClassLetter(0)]) - C64::new(0.0, 2.0 * PI)).norm();
    let mut r = seeded(seed, 5, 0);
    let mut comp: f64 = 0.0;
    let mut unipotent = true;
    for sigma in [Section::standard(&c), random::section(&mut r, &c)] {
        let pairs = [(g0.clone(), g1.clone()), (g1.clone(), g0.clone()), (g0.clone(), g0.inverse())];
        for (a, b) in pairs {
            let ma = monodromy_operator(&sigma, &a, 3, &cfg())?;
            let mb = monodromy_operator(&sigma, &b, 3, &cfg())?;
            let mab = monodromy_operator(&sigma, &a.then(&b)?, 3, &cfg())?;
            comp = comp.max(mab.max_distance(&ma.mul(&mb)?));
            unipotent &= unipotence_check(&ma) && unipotence_check(&mab);
        }
    }
    Ok((
        e0 < 1e-9 && comp < 1e-8 && unipotent,
        format!("|p(γ₀,[h₀]) − 2πi| {e0:.1e}; composition {comp:.1e}; unipotent {unipotent}"),
    ))
}

fn c6_reduction(seed: u64, exec: Execution) -> Result<(bool, String)> {
    let c = zero_one();
    let x0 = c.default_basepoint();
    let pts = c.numeric_points().to_vec();
    let res = par_range(exec, 100, |k| -> Result<(f64, bool)> {
        let mut r = seeded(seed, 6, k);
        let sigma = if k % 2 == 0 { Section::standard(&c) } else { random::section(&mut r, &c) };
        let t = random::form_tensor(&mut r, &c, 3, 3);
        let nf = normal_form(&t, &sigma, &x0)?;
        let bound = nf.within_filtration(t.weight());
        let mut m: f64 = 0.0;
        for _ in 0..5 {
            let z = random::point(&mut r, &c, 2.0, 0.3);
            let path = Path::route(&pts, x0.to_c64(), z);
            let direct = integrate_tensor(&c, &path, &t, &cfg())?;
            m = m.max((direct - nf.eval(&path, &cfg())?).norm());
        }
        Ok((m, bound))
    });
    let res = res.into_iter().collect::<Result<Vec<_>>>()?;
    let m = worst(res.iter().map(|x| x.0));
    let bound = res.iter().all(|x| x.1);
    Ok((
        m < 1e-8 && bound,
        format!("max |I(t) − eval(NF)| {m:.1e} over 100×5; filtration bound {bound}"),
    ))
}

fn c7_kernel(seed: u64, exec: Execution) -> Result<(bool, String)> {
    let c = zero_one();
    let x0 = c.default_basepoint();
    let pts = c.numeric_points().to_vec();
    let sigma = Section::standard(&c);
    let gens = par_range(exec, 100, |k| -> Result<(bool, f64)> {
        let mut r = seeded(seed, 7, k);
        let s = if r.gen_bool(0.3) {
            ShuffleTensor::unit(c.form_alphabet())
        } else {
            random::form_tensor(&mut r, &c, 1, 2)
        };
        let f = random::rational_function(&mut r, &c, 1, 1);
        let s2 = random::form_tensor(&mut r, &c, 2, 2);
        let d = d_map(&s, &f, &s2, &x0)?;
        let exact = normal_form(&d, &sigma, &x0)?.is_zero();
        let z = random::point(&mut r, &c, 2.0, 0.4);
        let v = integrate_tensor(&c, &Path::route(&pts, x0.to_c64(), z), &d, &cfg())?;
        Ok((exact, v.norm()))
    });
    let gens = gens.into_iter().collect::<Result<Vec<_>>>()?;
    let all_zero = gens.iter().all(|g| g.0);
    let m = worst(gens.iter().map(|g| g.1));
    let splits = par_range(exec, 30, |k| -> Result<bool> {
        let mut r = seeded(seed, 7, 1000 + k);
        let sigma = random::section(&mut r, &c);
        let t = random::form_tensor(&mut r, &c, 3, 3);
        let (sub, ker) = decompose_subker(&t, &sigma, &x0)?;
        let (part, wit) = kernel_witness(&t, &sigma, &x0)?;
        Ok(sub.add(&ker)? == t
            && normal_form(&ker, &sigma, &x0)?.is_zero()
            && part.to_tensor(&sigma)? == sub
            && wit.apply(&c)? == ker)
    });
    let split_ok = splits.into_iter().collect::<Result<Vec<_>>>()?.into_iter().all(|b| b);
    Ok((
        all_zero && m < 1e-9 && split_ok,
        format!("100 generators exact-zero {all_zero}, max |I(D)| {m:.1e}; sub ⊕ ker reassembly {split_ok}"),
    ))
}

fn c8_coradical() -> Result<(bool, String)> {
    let c = zero_one();
    let words = words_up_to(&c.class_letters(), 4);
    let mut checked = 0;
    let mut ok = true;
    for w in &words {
        let t = ShuffleTensor::monomial(c.class_alphabet(), w.clone(), Scalar::from_int(1));
        for n in 0..=5 {
            ok &= t.coradical_member(n) == (w.weight() <= n);
            checked += 1;
        }
    }
    Ok((ok, format!("{checked} (word, n) pairs")))
}

fn c9_kz(seed: u64) -> Result<(bool, String)> {
    let mut ok = true;
    let mut cases = 0;
    for n in 2..=3 {
        for k in 0..5 {
            let mut r = seeded(seed, 9, 10 * n + k);
            let mut pts: Vec<Scalar> = Vec::new();
            while pts.len() < n {
                let p = random::gaussian(&mut r, 5, 3);
                if !pts.contains(&p) {
                    pts.push(p);
                }
            }
            ok &= kz_specialization_check(&pts)?;
            cases += 1;
        }
    }
    Ok((ok, format!("{cases} point configurations")))
}

fn c10_expansions(seed: u64, exec: Execution) -> Result<(bool, String)> {
    let c = zero_one();
    let sigma = Section::standard(&c);
    let words: Vec<Word<ClassLetter>> = words_up_to(&c.class_letters(), 3).into_iter().filter(|w| !w.is_empty()).collect();
    let mut agree: f64 = 0.0;
    let mut mono: f64 = 0.0;
    let mut degree_ok = true;
    for s in 0..2 {
        let exps = par_range(exec, words.len(), |i| expand_at(&sigma, ExpansionTarget::Hyperlog, &words[i], s, 30, words[i].weight(), &cfg()));
        let exps = exps.into_iter().collect::<Result<Vec<_>>>()?;
        degree_ok &= exps.iter().zip(&words).all(|(e, w)| e.log_degree() <= w.weight());
        let radius = exps[0].radius;
        let mut r = seeded(seed, 10, s);
        let center = c.numeric_points()[s];
        for _ in 0..3 {
            let z = center + C64::from_polar(r.gen_range(0.1..0.5) * radius, r.gen_range(-PI..PI));
            let direct = hyperlog::eval_many(&c, &words, z, &PathClass::default(), &cfg())?;
            let looped = hyperlog::eval_many(&c, &words, z, &PathClass::Default { loops: vec![(s, 1)] }, &cfg())?;
            for (k, e) in exps.iter().enumerate() {
                agree = agree.max((e.evaluate(z)? - direct[k]).norm());
                mono = mono.max((e.log_shift(1).evaluate(z)? - looped[k]).norm());
            }
        }
    }
    Ok((
        agree < 1e-6 && mono < 1e-6 && degree_ok,
        format!("max |expansion − L_w| {agree:.1e}; after one turn {mono:.1e}; log degree ≤ weight {degree_ok}"),
    ))
}

fn c11_connection(seed: u64, exec: Execution) -> Result<(bool, String)> {
    let c = zero_one();
    let x0 = c.default_basepoint().to_c64();
    let pts = c.numeric_points().to_vec();
    let res = par_range(exec, 20, |k| {
        let mut r = seeded(seed, 11, k);
        let sigma = if k % 2 == 0 { Section::standard(&c) } else { random::section(&mut r, &c) };
        let a = random::class_word(&mut r, &c, k % 4);
        let f = random::rational_function(&mut r, &c, 1, 1);
        let x = FunctionTensor::single(&c, a, f);
        let z = random::point(&mut r, &c, 1.5, 0.4);
        let (num, sym) = connection_derivative(&sigma, &x, &Path::route(&pts, x0, z), 1e-5, &cfg())?;
        Ok((num - sym).norm())
    });
    let m = collect(res)?;
    Ok((m < 1e-6, format!("max |Δ/2h − ∇| {m:.1e} over 20 cases")))
}

fn inside_triangle(p: C64, a: C64, b: C64, c: C64) -> bool {
    let cross = |u: C64, v: C64| u.re * v.im - u.im * v.re;
    let d1 = cross(b - a, p - a);
    let d2 = cross(c - b, p - b);
    let d3 = cross(a - c, p - c);
    let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(neg && pos)
}

fn c12_homotopy(seed: u64, exec: Execution) -> Result<(bool, String)> {
    let res = par_range(exec, 20, |k| {
        let mut r = seeded(seed, 12, k);
        let c = if k % 2 == 0 { zero_one() } else { random::pole_set(&mut r, 3) };
        let sigma = random::section(&mut r, &c);
        let pts = c.numeric_points().to_vec();
        let (straight, bent) = loop {
            let x0 = random::point(&mut r, &c, 2.0, 0.4);
            let z = random::point(&mut r, &c, 2.0, 0.4);
            let w = random::point(&mut r, &c, 2.0, 0.4);
            if pts.iter().any(|&p| inside_triangle(p, x0, w, z)) {
                continue;
            }
            let straight = Path::straight(x0, z);
            let bent = Path::polyline(&[x0, w, z]);
            if straight.distance_to(&pts) > 0.3 && bent.distance_to(&pts) > 0.3 {
                break (straight, bent);
            }
        };
        let cf = cfg().with_weight(3);
        let a = j_element(&sigma, &straight, &cf)?;
        let b = j_element(&sigma, &bent, &cf)?;
        Ok(a.max_distance(&b))
    });
    let m = collect(res)?;
    Ok((m < 1e-8, format!("max deformation difference {m:.1e} over 20 cases")))
}

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize, seed: u64, exec: Execution) -> CriterionReport {
    let t = Instant::now();
    let out = match id {
        1 => c1_mzv(),
        2 => c2_shuffle(seed, exec),
        3 => c3_chain(seed, exec),
        4 => c4_periods(seed, exec),
        5 => c5_monodromy(seed),
        6 => c6_reduction(seed, exec),
        7 => c7_kernel(seed, exec),
        8 => c8_coradical(),
        9 => c9_kz(seed),
        10 => c10_expansions(seed, exec),
        11 => c11_connection(seed, exec),
        12 => c12_homotopy(seed, exec),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport {
        id,
        name: CRITERIA.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed,
        detail,
        seconds: t.elapsed().as_secs_f64(),
    }
}

pub fn run_all(seed: u64, exec: Execution) -> Vec<CriterionReport> {
    (1..=CRITERIA.len()).map(|id| run_criterion(id, seed, exec)).collect()
}
