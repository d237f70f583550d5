use std::collections::BTreeMap;
use std::f64::consts::PI;

use curvelog::curve::ClassLetter;
use curvelog::hyperlog::{self, eval_many, regularize, PathClass};
use curvelog::iterint::{j_element, section_numeric, GroupLikeSeries, IntegratorConfig, Path, WordSystem};
use curvelog::local_expansion::{expand_at, ExpansionTarget};
use curvelog::monodromy::{loop_around, monodromy_operator, pairing, period_matrix, standard_loop};
use curvelog::par::Execution;
use curvelog::random::{self, rng};
use curvelog::shuffle::words_up_to;
use curvelog::{Curve, Scalar, Section, ShuffleTensor, Word};
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;

type ClassWord = Word<ClassLetter>;

fn zero_one() -> Curve {
    Curve::from_ints(&[0, 1]).unwrap()
}

fn cfg() -> IntegratorConfig {
    IntegratorConfig::default()
}

fn series_scale(s: &GroupLikeSeries<ClassLetter>) -> f64 {
    s.values().values().map(|v| v.norm()).fold(1.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn deformed_paths_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = zero_one();
        let sigma = random::section(&mut r, &c);
        let x0 = C64::new(-0.5, 0.5);
        let z = C64::new(1.6, 0.7);
        // both run above the two poles
        let a = Path::polyline(&[x0, C64::new(0.5, 0.4), z]);
        let b = Path::polyline(&[x0, C64::new(r.gen_range(-0.5..1.5), r.gen_range(0.8..1.8)), z]);
        let cf = cfg().with_weight(4);
        let ja = j_element(&sigma, &a, &cf).unwrap();
        let jb = j_element(&sigma, &b, &cf).unwrap();
        let tol = 10.0 * (cf.atol + cf.rtol * series_scale(&ja));
        prop_assert!(ja.max_distance(&jb) < tol, "{} vs {}", ja.max_distance(&jb), tol);
    }

    #[test]
    fn prepending_a_loop_multiplies_by_its_pairing(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = zero_one();
        let sigma = random::section(&mut r, &c);
        let x0 = c.default_basepoint().to_c64();
        let s = r.gen_range(0..2);
        let gamma = standard_loop(&c, s, x0).unwrap().power(if r.gen_bool(0.5) { 1 } else { -1 });
        let z = random::point(&mut r, &c, 1.5, 0.4);
        let delta = Path::route(c.numeric_points(), x0, z);
        let cf = cfg().with_weight(3);
        let whole = j_element(&sigma, &gamma.path.then(&delta).unwrap(), &cf).unwrap();
        let split = pairing(&sigma, &gamma, 3, &cf).unwrap().concat_product(&j_element(&sigma, &delta, &cf).unwrap());
        prop_assert!(whole.max_distance(&split) < 1e-8);
    }

    #[test]
    fn halving_tolerance_is_stable(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = zero_one();
        let sigma = random::section(&mut r, &c);
        let x0 = random::point(&mut r, &c, 1.5, 0.4);
        let z = random::point(&mut r, &c, 1.5, 0.4);
        let path = random::safe_path(&mut r, &c, x0, z, 2, 1.5, 0.3);
        let coarse = IntegratorConfig { rtol: 1e-7, atol: 1e-9, ..cfg() }.with_weight(3);
        let fine = IntegratorConfig { rtol: 5e-8, atol: 5e-10, ..coarse };
        let a = j_element(&sigma, &path, &coarse).unwrap();
        let b = j_element(&sigma, &path, &fine).unwrap();
        prop_assert!(a.max_distance(&b) <= coarse.atol + coarse.rtol * series_scale(&a));
    }

    #[test]
    fn pairing_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random::pole_set(&mut r, 3);
        let sigma = random::section(&mut r, &c);
        let x0 = c.default_basepoint().to_c64();
        let pick = |r: &mut random::Rng64| {
            let s = r.gen_range(0..3);
            standard_loop(&c, s, x0).unwrap().power(r.gen_range(-1..=2))
        };
        let g = pick(&mut r);
        let h = pick(&mut r);
        let pg = pairing(&sigma, &g, 3, &cfg()).unwrap();
        let ph = pairing(&sigma, &h, 3, &cfg()).unwrap();
        let pgh = pairing(&sigma, &g.then(&h).unwrap(), 3, &cfg()).unwrap();
        prop_assert!(pg.group_like_residual() < 1e-8);
        prop_assert!(pgh.max_distance(&pg.concat_product(&ph)) < 1e-8);
    }
}

#[test]
fn group_like_up_to_weight_six() {
    let c = zero_one();
    let sigma = Section::standard(&c);
    let path = Path::polyline(&[C64::new(-0.5, 0.5), C64::new(0.5, 0.8), C64::new(1.5, -0.3)]);
    for n in 1..=6 {
        let j = j_element(&sigma, &path, &cfg().with_weight(n)).unwrap();
        assert!(j.group_like_residual() < 1e-8 * series_scale(&j), "weight {n}");
    }
}

#[test]
fn first_pairings_do_not_see_the_basepoint() {
    let c = Curve::parse("0,1,1/2+i").unwrap();
    let mut r = rng(5);
    let sigma = random::section(&mut r, &c);
    for x0 in [C64::new(-1.0, -0.5), C64::new(2.0, 1.5)] {
        let p = period_matrix(&sigma, Some(x0), &cfg(), Execution::Sequential).unwrap();
        for s in 0..3 {
            let row = pairing(&sigma, &standard_loop(&c, s, x0).unwrap(), 1, &cfg()).unwrap();
            for t in 0..3 {
                let expect = if s == t { C64::new(0.0, 2.0 * PI) } else { C64::new(0.0, 0.0) };
                assert!((row.value(&[ClassLetter(t)]) - expect).norm() < 1e-9);
                assert!((p.entries[s][t] - expect).norm() < 1e-9);
            }
        }
    }
}

#[test]
fn monodromy_depends_on_homotopy_class_only() {
    let c = zero_one();
    let sigma = Section::standard(&c);
    let x0 = C64::new(-1.0, 0.0);
    let a = monodromy_operator(&sigma, &loop_around(&c, 0, x0, 0.2).unwrap(), 3, &cfg()).unwrap();
    let b = monodromy_operator(&sigma, &loop_around(&c, 0, x0, 0.45).unwrap(), 3, &cfg()).unwrap();
    assert!(a.max_distance(&b) < 1e-8);
}

fn l_of(c: &Curve, t: &ShuffleTensor<ClassLetter>, z: C64) -> C64 {
    let words: Vec<ClassWord> = t.terms().map(|(w, _)| w.clone()).collect();
    let v = eval_many(c, &words, z, &PathClass::default(), &cfg()).unwrap();
    t.terms().zip(v).map(|((_, q), v)| q.to_c64() * v).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hyperlogs_respect_shuffles(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = zero_one();
        let na = r.gen_range(1..=2);
        let nb = r.gen_range(1..=4 - na);
        let a = ShuffleTensor::monomial(c.class_alphabet(), random::class_word(&mut r, &c, na), Scalar::from_int(1));
        let b = ShuffleTensor::monomial(c.class_alphabet(), random::class_word(&mut r, &c, nb), Scalar::from_int(1));
        let z = random::point(&mut r, &c, 1.5, 0.3);
        let ab = a.shuffle(&b).unwrap();
        let res = (l_of(&c, &ab, z) - l_of(&c, &a, z) * l_of(&c, &b, z)).norm();
        prop_assert!(res < 1e-8, "{}", res);
    }

    #[test]
    fn regularization_is_exact(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = Curve::parse("0,1,-1").unwrap();
        let n = r.gen_range(0..=5);
        let mut w = random::class_word(&mut r, &c, n);
        if r.gen_bool(0.6) {
            w = Word(std::iter::repeat(ClassLetter(0)).take(r.gen_range(1..3)).chain(w.0).collect());
        }
        let reg = regularize(&c, &w).unwrap();
        prop_assert_eq!(reg.reassemble(&c, 0), ShuffleTensor::monomial(c.class_alphabet(), w, Scalar::from_int(1)));
    }

    #[test]
    fn expansions_match_direct_values(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = zero_one();
        let s = r.gen_range(0..2);
        let n = r.gen_range(1..=3);
        let w = random::class_word(&mut r, &c, n);
        let e = expand_at(&Section::standard(&c), ExpansionTarget::Hyperlog, &w, s, 30, n, &cfg()).unwrap();
        prop_assert!(e.log_degree() <= n);
        let z = c.numeric_points()[s] + C64::from_polar(r.gen_range(0.05..0.5) * e.radius, r.gen_range(-PI..PI));
        let direct = hyperlog::eval_l(&c, &w, z, &PathClass::default(), &cfg()).unwrap();
        prop_assert!((e.evaluate(z).unwrap() - direct).norm() < 1e-6);
    }
}

/// `I_ε(σ₀(v))(z)` for all words up to weight `n`, integrated from `ε`.
fn from_epsilon(c: &Curve, eps: f64, z: C64, n: usize) -> BTreeMap<ClassWord, C64> {
    let words = words_up_to(&c.class_letters(), n);
    let forms = section_numeric(&Section::standard(c));
    let sys = WordSystem::new(&words, |l| forms[l.0].clone());
    let path = Path::straight(C64::new(eps, 0.0), z);
    let y = sys.solve(&path, sys.unit_state(), c.numeric_points(), 1e-9, &cfg(), None).unwrap();
    words.into_iter().map(|w| {
        let v = y[sys.node(&w).unwrap()];
        (w, v)
    }).collect()
}

#[test]
fn basepoint_zero_is_the_limit_from_epsilon() {
    let c = zero_one();
    let z = C64::new(0.3, 0.2);
    let words = words_up_to(&c.class_letters(), 3);
    let exact = eval_many(&c, &words, z, &PathClass::default(), &cfg()).unwrap();
    let mut errs = Vec::new();
    for eps in [1e-3, 1e-4] {
        let vals = from_epsilon(&c, eps, z, 3);
        let mut err: f64 = 0.0;
        for (w, l) in words.iter().zip(&exact) {
            // L_w(z) ≈ Σ_{w = h₀ᵏ v} (log ε)ᵏ/k! · I_ε(v)(z)
            let mut approx = C64::new(0.0, 0.0);
            let lead = w.letters().iter().take_while(|&&x| x == ClassLetter(0)).count();
            let mut fact = 1.0;
            for k in 0..=lead {
                if k > 0 {
                    fact *= k as f64;
                }
                approx += eps.ln().powi(k as i32) / fact * vals[&w.suffix_from(k)];
            }
            err = err.max((approx - l).norm());
        }
        errs.push(err);
    }
    assert!(errs[1] < errs[0] && errs[1] < 1e-2, "{errs:?}");
    // error is O(ε·log²ε): one extra digit per decade up to the log factor
    assert!(errs[1] < 0.3 * errs[0], "{errs:?}");
}
