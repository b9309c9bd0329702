use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hilbres::chern::elementary_symmetric;
use hilbres::diagram::DiagramND;
use hilbres::poly::{MPoly, Monomial, Rational, VariableContext};
use hilbres::verify::random_diagram;

fn ctx() -> Arc<VariableContext> {
    VariableContext::builder()
        .residue("z1")
        .residue("z2")
        .geometry("L", 1)
        .geometry("c1", 1)
        .grading(4)
        .build()
        .unwrap()
}

prop_compose! {
    fn term()(e in prop::collection::vec(-2i32..3, 2), g in prop::collection::vec(0i32..3, 2),
              n in -5i64..6, d in 1i64..4) -> (Monomial, Rational) {
        let m = Monomial::from_pairs([(0, e[0]), (1, e[1]), (2, g[0]), (3, g[1])]);
        (m, Rational::new(n.into(), d.into()))
    }
}

fn poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(term(), 0..5).prop_map(|ts| MPoly::from_terms(&ctx(), ts))
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &MPoly::one(&ctx()), a.clone());
    }

    #[test]
    fn display_parse_roundtrip(a in poly()) {
        let back = MPoly::parse(&ctx(), &a.to_string()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn elementary_symmetric_is_symmetric(perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(), m in 1usize..5) {
        let c = ctx();
        let roots: Vec<MPoly> = ["z1", "z2", "L", "c1"].iter().map(|n| MPoly::named(&c, n)).collect();
        let shuffled: Vec<MPoly> = perm.iter().map(|&i| roots[i].clone()).collect();
        prop_assert_eq!(
            elementary_symmetric(m, &roots).unwrap(),
            elementary_symmetric(m, &shuffled).unwrap()
        );
    }

    #[test]
    fn planar_curvilinear_sums(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let [a, b, c] = [0; 3].map(|_| random_diagram(&mut rng, 2, 8));
        let sum = |ds: &[DiagramND]| DiagramND::curvilinear_sum(ds).unwrap();
        prop_assert_eq!(sum(&[a.clone(), b.clone()]), sum(&[b.clone(), a.clone()]));
        prop_assert_eq!(
            sum(&[sum(&[a.clone(), b.clone()]), c.clone()]),
            sum(&[a.clone(), sum(&[b.clone(), c.clone()])])
        );
        prop_assert_eq!(sum(&[a.clone(), b.clone(), c.clone()]).len(), a.len() + b.len() + c.len());
    }
}
