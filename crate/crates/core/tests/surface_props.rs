use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use snakegraph::generate::{random_annulus, random_polygon, random_walk_arc};
use snakegraph::mpath::{chi, ChiVariant};
use snakegraph::selftest::positivity_holds;
use snakegraph::surface::{CurveDescriptor, ExpandOptions};

const KEEP: ExpandOptions = ExpandOptions { keep_boundary: true, rel: 1 };

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn loop_rotations_agree(seed in any::<u64>(), outer in 1usize..4, inner in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_annulus(outer, inner, &mut rng);
        let n = t.arcs.len();
        let mut first = None;
        for r in 0..n {
            let names: Vec<String> = (0..n).map(|k| format!("e{}", (k + r) % n)).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let c = CurveDescriptor::closed_loop(&refs, (r + n - 1) % n);
            let b = t.build_band_from_loop(&c).unwrap();
            let v = (b.band_enumerator(), t.expand(&c, &KEEP).unwrap().x);
            match &first {
                None => first = Some(v),
                Some(f) => prop_assert_eq!(f, &v),
            }
        }
    }

    #[test]
    fn kinks_flip_sign(seed in any::<u64>(), kinks in 0u32..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_polygon(7, &mut rng);
        let c = random_walk_arc(&t, 6, &mut rng).unwrap();
        let plain = t.expand(&c, &KEEP).unwrap().x;
        let kinked = t.expand(&c.clone().with_kinks(kinks), &KEEP).unwrap().x;
        prop_assert_eq!(kinked, if kinks % 2 == 1 { -plain } else { plain });
    }

    #[test]
    fn methods_agree_on_walks(seed in any::<u64>(), n in 4usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = if n % 2 == 0 { random_polygon(n, &mut rng) } else { random_annulus(n / 3, n - n / 3 - 1, &mut rng) };
        let c = random_walk_arc(&t, 8, &mut rng).unwrap();
        let e = t.expand(&c, &KEEP).unwrap();
        prop_assert_eq!(&chi(&t, &c, ChiVariant::Phi).unwrap(), &e.x);
        prop_assert!(positivity_holds(&e));
        prop_assert_eq!(e.normalized.normalize(), e.normalized.clone());
    }
}
