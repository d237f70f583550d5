use curvelog::curve::DeRhamClass;
use curvelog::random::{self, rng};
use curvelog::reduce::{d_map, decompose_subker, kernel_witness, normal_form};
use curvelog::shuffle::TensorPair;
use curvelog::{AlphabetId, Differential, Scalar, Section, ShuffleTensor, Word};
use proptest::prelude::*;

const ABC: AlphabetId = AlphabetId(3);

fn tensor(size: u8, max_weight: usize) -> impl Strategy<Value = ShuffleTensor<u8>> {
    let word = prop::collection::vec(0..size, 0..=max_weight);
    prop::collection::vec((word, -4i64..=4, 1i64..=3), 1..4).prop_map(|terms| {
        ShuffleTensor::from_terms(
            ABC,
            terms.into_iter().map(|(w, p, q)| (Word(w), Scalar::from_ratio(p, q))),
        )
    })
}

fn shuffle_pairs(x: &TensorPair<u8>, y: &TensorPair<u8>) -> TensorPair<u8> {
    x.shuffle(y).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shuffle_is_commutative(a in tensor(3, 3), b in tensor(3, 2)) {
        prop_assert_eq!(a.shuffle(&b).unwrap(), b.shuffle(&a).unwrap());
    }

    #[test]
    fn shuffle_is_associative(a in tensor(3, 2), b in tensor(3, 2), c in tensor(2, 1)) {
        let l = a.shuffle(&b).unwrap().shuffle(&c).unwrap();
        let r = a.shuffle(&b.shuffle(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn deconcat_is_multiplicative(a in tensor(3, 3), b in tensor(3, 2)) {
        let lhs = a.shuffle(&b).unwrap().deconcat();
        let rhs = shuffle_pairs(&a.deconcat(), &b.deconcat());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn right_derivation_is_leibniz(a in tensor(3, 3), b in tensor(3, 2)) {
        let lhs = a.shuffle(&b).unwrap().deriv_right();
        let rhs = a.deriv_right().act(&b).unwrap().add(&b.deriv_right().act(&a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn antipode_convolution_is_counit(a in tensor(3, 4)) {
        let conv = a.deconcat().convolve(|x| x.antipode(), |x| x.clone()).unwrap();
        let expect = ShuffleTensor::monomial(ABC, Word::empty(), a.counit());
        prop_assert_eq!(&conv, &expect);
        let conv = a.deconcat().convolve(|x| x.clone(), |x| x.antipode()).unwrap();
        prop_assert_eq!(conv, expect);
    }

    #[test]
    fn coradical_matches_weight(a in tensor(2, 4), n in 0usize..6) {
        prop_assert_eq!(a.coradical_member(n), a.weight() <= n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decompose_reassembles(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random::pole_set(&mut r, 3);
        let sigma = if seed % 2 == 0 { Section::standard(&c) } else { random::section(&mut r, &c) };
        let om = Differential::new(random::rational_function(&mut r, &c, 2, 4));
        let (h, f) = om.decompose(&sigma).unwrap();
        let back = sigma.apply(&h).unwrap().add(&Differential::exact(&f)).unwrap();
        prop_assert_eq!(back, om);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sections_split_the_projection(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random::pole_set(&mut r, 1 + (seed % 4) as usize);
        let sigma = random::section(&mut r, &c);
        let coeffs = (0..c.len()).map(|_| random::gaussian(&mut r, 3, 2)).collect();
        let h = DeRhamClass::new(&c, coeffs).unwrap();
        prop_assert_eq!(sigma.apply(&h).unwrap().project_de_rham(), h);
    }

    #[test]
    fn derivative_of_antiderivative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random::pole_set(&mut r, 2);
        let f = random::rational_function(&mut r, &c, 3, 3);
        // residue-free part: the derivative of anything
        let g = f.derivative();
        prop_assert_eq!(g.antiderivative().unwrap().derivative(), g);
    }

    #[test]
    fn kernel_generators_reduce_to_zero(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random::pole_set(&mut r, 2);
        let x0 = c.default_basepoint();
        let sigma = random::section(&mut r, &c);
        let s = random::form_tensor(&mut r, &c, 1, 2);
        let f = random::rational_function(&mut r, &c, 1, 2);
        let s2 = random::form_tensor(&mut r, &c, 2, 2);
        let d = d_map(&s, &f, &s2, &x0).unwrap();
        prop_assert!(normal_form(&d, &sigma, &x0).unwrap().is_zero());
        let (sub, ker) = decompose_subker(&d, &sigma, &x0).unwrap();
        prop_assert!(sub.is_zero());
        prop_assert_eq!(ker, d);
    }

    #[test]
    fn normal_forms_are_filtered_and_split(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random::pole_set(&mut r, 2);
        let x0 = c.default_basepoint();
        let sigma = random::section(&mut r, &c);
        let t = random::form_tensor(&mut r, &c, 3, 3);
        let nf = normal_form(&t, &sigma, &x0).unwrap();
        prop_assert!(nf.within_filtration(t.weight()));
        // a normal form vanishes only with all of its coefficients
        prop_assert_eq!(nf.is_zero(), nf.tensor.terms().values().all(|f| f.is_zero()));
        let (sub, ker) = decompose_subker(&t, &sigma, &x0).unwrap();
        prop_assert_eq!(&sub.add(&ker).unwrap(), &t);
        prop_assert_eq!(normal_form(&sub, &sigma, &x0).unwrap(), nf);
        let (part, wit) = kernel_witness(&t, &sigma, &x0).unwrap();
        prop_assert_eq!(part.to_tensor(&sigma).unwrap(), sub);
        prop_assert_eq!(wit.apply(&c).unwrap(), ker);
    }
}
