use fieldlab_rpwitness::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn uncut_line_pairing_is_nonnegative(kappa in 0.05f64..20.0, n in 0usize..8) {
        let u = line_pairing_uncut(&Bump::standard(), kappa, n).unwrap();
        prop_assert!(u >= -1e-12);
    }

    #[test]
    fn uncut_cylinder_pairing_is_nonnegative(lambda in 1.0f64..200.0, n in 0usize..6) {
        let u = cylinder_pairing_uncut(&Bump::standard(), lambda, 2.0, n).unwrap();
        prop_assert!(u >= -1e-12);
    }

    #[test]
    fn compact_witness_hits_closed_form(length in 2.0f64..9.0, lambda in 1.0f64..12.0) {
        let p = CompactParams { length, lambda, basis_size: None, margin: 0.03 };
        match compact_witness(&p) {
            Ok(c) => {
                let t = c.target.unwrap();
                prop_assert!((c.pairing_value - t).abs() < 1e-8);
                prop_assert!(c.uncut_pairing >= -1e-12);
                prop_assert!(c.verify().unwrap() < 1e-10);
            }
            Err(RpError::Precondition(_)) => {
                prop_assert!((2.0 * std::f64::consts::PI / length).powi(2) > lambda);
            }
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn bump_transform_is_translation_covariant(xi in -3.0f64..3.0, shift in -1.0f64..1.0) {
        // F[φ(· − s)](ξ) = e^{iξs}Fφ(ξ)
        let b = Bump { center: 0.3, halfwidth: 0.4 };
        let m = Bump { center: 0.3 + shift, ..b };
        let (a, s) = b.fourier(xi);
        let (c, d) = m.fourier(xi);
        let (sn, cs) = (xi * shift).sin_cos();
        prop_assert!((c - (a * cs - s * sn)).abs() < 1e-13);
        prop_assert!((d - (a * sn + s * cs)).abs() < 1e-13);
    }
}
