use proptest::prelude::*;

use qorbit::exactnum::{quad_cmp, rational_between, QuadPoint, Rational};
use qorbit::orbitals::{are_conjugate, signature};
use qorbit::pmaut::PMAut;
use qorbit::sampler::{random_pm, RandomParams};

fn aut(seed: u64) -> PMAut {
    random_pm(seed, &RandomParams::default())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| Rational::ratio(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_cancels(seed in any::<u64>(), x in rational()) {
        let f = aut(seed);
        prop_assert!(f.compose(&f.invert()).is_identity());
        prop_assert_eq!(f.eval_inv(&f.eval(&x)), x.clone());
        prop_assert_eq!(f.invert().eval(&x), f.eval_inv(&x));
    }

    #[test]
    fn composition_is_pointwise(a in any::<u64>(), b in any::<u64>(), x in rational()) {
        let (f, g) = (aut(a), aut(b));
        prop_assert_eq!(f.compose(&g).eval(&x), f.eval(&g.eval(&x)));
    }

    #[test]
    fn increasing(seed in any::<u64>(), x in rational(), y in rational()) {
        let f = aut(seed);
        prop_assert_eq!(x.cmp(&y), f.eval(&x).cmp(&f.eval(&y)));
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let f = aut(seed);
        prop_assert_eq!(PMAut::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn conjugates_share_signature(a in any::<u64>(), b in any::<u64>()) {
        let (f, h) = (aut(a), aut(b));
        let g = f.conjugate_by(&h);
        prop_assert_eq!(signature(&f), signature(&g));
        prop_assert!(are_conjugate(&f, &g));
    }

    #[test]
    fn reflection_reverses_signature(seed in any::<u64>()) {
        let f = aut(seed);
        let s = signature(&f).to_string();
        let mirrored: Vec<String> = s
            .split(' ')
            .rev()
            .map(|t| match t {
                "+" => "-".into(),
                "-" => "+".into(),
                // Block ends swap sides.
                t => t
                    .chars()
                    .rev()
                    .map(|c| match c { '(' => ')', ')' => '(', '[' => ']', ']' => '[', c => c })
                    .collect(),
            })
            .collect();
        prop_assert_eq!(signature(&f.reflect()).to_string(), mirrored.join(" "));
    }

    #[test]
    fn between_is_strict(x in rational(), y in rational()) {
        prop_assume!(x != y);
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let m = rational_between(&lo, &hi).unwrap();
        prop_assert!(lo < m && m < hi);
    }

    #[test]
    fn quad_order_is_antisymmetric(p in rational(), q in rational(), d in 0i64..200, r in rational()) {
        let a = QuadPoint::new(p, q, d);
        let b = QuadPoint::rational(r);
        prop_assert_eq!(quad_cmp(&a, &b), quad_cmp(&b, &a).reverse());
        prop_assert_eq!(quad_cmp(&a, &a.add_rational(&Rational::ratio(1, 1000))), std::cmp::Ordering::Less);
    }
}
