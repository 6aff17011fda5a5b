use fieldlab_rpwitness::*;
use std::f64::consts::PI;

fn order() -> usize {
    match line_witness(1.0, 40).unwrap().params {
        WitnessParams::LineDerivative { n, .. } => n,
        _ => unreachable!(),
    }
}

#[test]
fn negative_across_cutoffs() {
    for lambda in [1.0, 10.0, 100.0] {
        let c = cylinder_witness(lambda, 2.0 * PI, 40).unwrap();
        assert!(c.negative, "Λ = {lambda}: {}", c.pairing_value);
        assert!(c.uncut_pairing > 0.0);
    }
}

#[test]
fn reduces_to_the_line() {
    // substituting τ = √Λ s gives Λ^{-1/2} times the line pairing at κ = 1/Λ
    let b = Bump::standard();
    let n = order();
    for lambda in [1.0, 3.0, 10.0, 100.0] {
        let (cyl, _) = cylinder_pairing(&b, lambda, 2.0 * PI, n).unwrap();
        let line = line_pairing(&b, 1.0 / lambda, n).unwrap().value;
        assert!((cyl - line / lambda.sqrt()).abs() < 1e-13, "Λ = {lambda}");
        let cu = cylinder_pairing_uncut(&b, lambda, 2.0 * PI, n).unwrap();
        let lu = line_pairing_uncut(&b, 1.0 / lambda, n).unwrap();
        assert!((cu - lu / lambda.sqrt()).abs() < 1e-12 * lu);
    }
    let at_one = cylinder_witness(1.0, 2.0 * PI, 40).unwrap();
    let line = line_witness(1.0, 40).unwrap();
    assert!((at_one.pairing_value - line.pairing_value).abs() < 1e-15);
}

#[test]
fn slice_length_does_not_enter() {
    let b = Bump::standard();
    let a = cylinder_pairing(&b, 10.0, 1.0, 1).unwrap().0;
    let c = cylinder_pairing(&b, 10.0, 50.0, 1).unwrap().0;
    assert_eq!(a, c);
}

#[test]
fn rejects_small_cutoff() {
    assert!(cylinder_witness(0.5, 2.0 * PI, 40).is_err());
    assert!(cylinder_witness(2.0, 0.0, 40).is_err());
}
