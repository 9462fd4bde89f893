//! Cross-module properties of the public API.

use graphene_landau::landau::{overlap, valley_spectrum, valley_state, LevelKind};
use graphene_landau::lattice::Valley;
use graphene_landau::zetahall::{
    build_spectrum_table, hall_conductivity, hall_conductivity_thermal, level_logdet, level_logdet_closed_form,
    ThermalParams,
};
use proptest::prelude::*;

fn signed_z() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0, any::<bool>()).prop_map(|(e, neg)| if neg { -(10f64.powf(e)) } else { 10f64.powf(e) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valleys_are_mirror_images(z in signed_z()) {
        let k = valley_spectrum(Valley::K, 8, z).unwrap();
        let kp = valley_spectrum(Valley::KPrime, 8, z).unwrap();
        prop_assert_eq!(k.len(), kp.len());
        for (a, b) in k.iter().zip(&kp) {
            prop_assert_eq!(a.kind, b.kind);
            prop_assert_eq!(a.energy, -b.energy);
        }
    }

    #[test]
    fn hall_conductivity_is_odd(z in signed_z(), mu in 0.013f64..2.7) {
        let table = build_spectrum_table(z, 4000).unwrap();
        let up = hall_conductivity(&table, mu);
        let down = hall_conductivity(&table, -mu);
        if let (Ok(up), Ok(down)) = (up, down) {
            prop_assert_eq!(up, -down);
            prop_assert_eq!((up / 2.0).fract(), 0.0);
        }
    }

    #[test]
    fn cold_limit_matches_step(z in signed_z(), mu in -2.5f64..2.5) {
        let table = build_spectrum_table(z, 4000).unwrap();
        let Ok(cold) = hall_conductivity(&table, mu) else { return Ok(()) };
        let gap = table.energies().iter().map(|e| (e - mu).abs()).fold(f64::INFINITY, f64::min);
        prop_assume!(gap > 1e-3);
        let warm = hall_conductivity_thermal(&table, mu, 1e5).unwrap();
        prop_assert!((warm - cold).abs() < 1e-9, "{warm} vs {cold}");
    }

    #[test]
    fn zeta_determinant_matches_closed_form(e in -5.0f64..5.0, mu in -5.0f64..5.0, beta in 0.1f64..50.0) {
        prop_assume!((e - mu).abs() > 1e-6);
        let tp = ThermalParams::new(beta, mu, 1.0).unwrap();
        let ld = level_logdet(e, &tp).unwrap();
        let closed = level_logdet_closed_form(e, &tp);
        prop_assert!((ld.value - closed).abs() <= 1e-10 * closed.max(1.0));
    }

    #[test]
    fn eigenstates_are_orthonormal(z in signed_z(), k in -2.0f64..2.0) {
        let mut kinds = vec![LevelKind::ZeroMode];
        for n in 0..4 {
            kinds.extend([LevelKind::Pair { n, s: 1 }, LevelKind::Pair { n, s: -1 }]);
        }
        let states: Vec<_> = kinds.iter().map(|&kind| valley_state(Valley::K, kind, k, z).unwrap()).collect();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let o = overlap(a, b).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((o.re - expect).abs() < 1e-12 && o.im.abs() < 1e-12, "{i},{j}: {o}");
            }
        }
    }
}
