use hyperfourier::grid::{random_packets2, random_packets4, Grid2Spec, Grid4Spec, PacketConfig};
use hyperfourier::qft::{qft_fast, qft_inverse, relative_frobenius, Direction2};
use hyperfourier::sft::{relative_frobenius4, sft_fast, sft_inverse, wave_packets, Direction4};
use hyperfourier::uncertainty::{split_energies, verify_directional_up_2d, verify_directional_up_4d};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field2(seed: u64) -> hyperfourier::grid::QField2 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_packets2(&Grid2Spec::square(32, 0.45).unwrap(), &PacketConfig::default(), &mut rng)
}

fn field4(seed: u64) -> hyperfourier::grid::MVField4 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = (2.0 * std::f64::consts::PI / 8.0).sqrt();
    random_packets4(&Grid4Spec::cube(8, h).unwrap(), &PacketConfig::coarse(), &mut rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn qft_is_linear(s1 in 0u64..1000, s2 in 0u64..1000, c in -3.0f64..3.0) {
        let (f, g) = (field2(s1), field2(s2));
        let lhs = qft_fast(&f.scale(c).checked_add(&g).unwrap()).unwrap();
        let rhs = qft_fast(&f).unwrap().scale(c).checked_add(&qft_fast(&g).unwrap()).unwrap();
        prop_assert!(relative_frobenius(&lhs, &rhs).unwrap() < 1e-12);
    }

    #[test]
    fn qft_round_trip_and_parseval(seed in any::<u64>()) {
        let f = field2(seed);
        let s = qft_fast(&f).unwrap();
        prop_assert!((s.parseval_energy() - f.energy()).abs() <= 1e-10 * f.energy());
        let back = qft_inverse(&s).unwrap();
        prop_assert!(back.checked_sub(&f).unwrap().frobenius() <= 1e-12 * f.frobenius());
    }

    #[test]
    fn split_energies_add_up(seed in any::<u64>()) {
        prop_assert!(split_energies(&field2(seed)).additivity_residual() < 1e-12);
        prop_assert!(split_energies(&field4(seed)).additivity_residual() < 1e-12);
    }

    #[test]
    fn directional_principle_2d_holds(seed in any::<u64>(), ta in 0.0f64..6.3, tb in 0.0f64..6.3) {
        let r = verify_directional_up_2d(&field2(seed), Direction2::from_angle(ta), Direction2::from_angle(tb), 1e-6).unwrap();
        prop_assert!(r.satisfied, "ratio {}", r.ratio);
    }

    #[test]
    fn uncertainty_ratio_is_scale_invariant(seed in any::<u64>(), c in 0.1f64..10.0, ta in 0.0f64..6.3) {
        let f = field2(seed);
        let a = Direction2::from_angle(ta);
        let r1 = verify_directional_up_2d(&f, a, a, 1e-6).unwrap();
        let r2 = verify_directional_up_2d(&f.scale(c), a, a, 1e-6).unwrap();
        prop_assert!((r1.ratio - r2.ratio).abs() <= 1e-9 * r1.ratio);
    }

    #[test]
    fn sft_packets_and_round_trip(seed in any::<u64>()) {
        let f = field4(seed);
        let s = sft_fast(&f).unwrap();
        let (p, m) = wave_packets(&f).unwrap();
        prop_assert!(relative_frobenius4(&p.checked_add(&m).unwrap(), &s).unwrap() < 1e-12);
        let back = sft_inverse(&s).unwrap();
        prop_assert!(back.checked_sub(&f).unwrap().frobenius() <= 1e-12 * f.frobenius());
    }

    #[test]
    fn directional_principle_4d_holds_on_packets(
        seed in any::<u64>(),
        a in prop::array::uniform4(-1.0f64..1.0),
        b in prop::array::uniform4(-1.0f64..1.0),
    ) {
        let r = verify_directional_up_4d(&field4(seed), Direction4::from_array(a), Direction4::from_array(b), 1e-6).unwrap();
        prop_assert!(r.satisfied, "ratio {}", r.ratio);
    }
}
