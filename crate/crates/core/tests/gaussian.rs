use std::f64::consts::PI;

use catamp::circuits::generate_pssv;
use catamp::numerics::integrate_1d;
use catamp::states::{self, coherent, vacuum};
use catamp::{CatSpec, Kind, LogComplex, SqueezingSpec, SymplecticMap, WignerObject};
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn tensor_products() {
    let vv = vacuum().tensor(&vacuum());
    assert!(close(vv.evaluate(&[0.0; 4]).re, 1.0 / (PI * PI), 1e-15));
    let c = states::cat(&CatSpec::odd(1.0).unwrap());
    let same = c.tensor(&WignerObject::unit(0));
    for q in [[0.3, -0.7], [1.4, 0.2]] {
        assert!((same.evaluate(&q) - c.evaluate(&q)).norm() < 1e-15);
    }
    let cv = c.tensor(&vacuum());
    assert_eq!(cv.len(), 4);
    assert_eq!(cv.modes(), 2);
    assert!(close(cv.trace().unwrap(), 1.0, 1e-12));
}

#[test]
fn linear_maps() {
    let vv = vacuum().tensor(&vacuum());
    let bs = SymplecticMap::beamsplitter(0.5, 0, 1, 2).unwrap();
    let mixed = vv.apply_linear(&bs).unwrap();
    let back = mixed.apply_linear(&bs.inverted()).unwrap();
    for q in [[0.1, 0.2, -0.3, 0.4], [1.0, -1.0, 0.5, 0.0]] {
        assert!((mixed.evaluate(&q) - vv.evaluate(&q)).norm() < 1e-15);
        assert!((back.evaluate(&q) - vv.evaluate(&q)).norm() < 1e-15);
    }
}

/// Mean x of a one-coordinate object, by quadrature.
fn mean_by_quadrature(w: &WignerObject) -> f64 {
    let norm = integrate_1d(|x| w.evaluate(&[x]).re, -15.0, 15.0, 1e-12).unwrap();
    integrate_1d(|x| x * w.evaluate(&[x]).re, -15.0, 15.0, 1e-12).unwrap() / norm
}

#[test]
fn beam_splitter_moves_a_coherent_state() {
    let (t, gamma) = (0.7_f64, 1.3);
    let joint = coherent(gamma).tensor(&vacuum());
    let out = joint.apply_linear(&SymplecticMap::beamsplitter(t, 0, 1, 2).unwrap()).unwrap();
    let x1 = out.integrate_subset(&[1, 2, 3]).unwrap();
    let x2 = out.integrate_subset(&[0, 1, 3]).unwrap();
    let centre = 2f64.sqrt() * gamma;
    assert!(close(mean_by_quadrature(&x1), t.sqrt() * centre, 1e-9));
    assert!(close(mean_by_quadrature(&x2).abs(), (1.0 - t).sqrt() * centre, 1e-9));
}

#[test]
fn multiply_counts_and_constants() {
    let c = states::cat(&CatSpec::even(0.8).unwrap());
    let one = WignerObject::identity_operator(1);
    let prod = c.multiply(&one).unwrap();
    // The identity carries 1/2π, so c·𝟙 integrates to 1/2π.
    assert!(close(prod.integrate_all_log().unwrap().re(), 1.0 / (2.0 * PI), 1e-12));
    assert!(close(vacuum().multiply(&vacuum()).unwrap().evaluate(&[0.0, 0.0]).re, 1.0 / (PI * PI), 1e-15));
    assert_eq!(c.multiply(&states::op_apd()).unwrap().len(), 8);
}

#[test]
fn marginals() {
    assert!(close(vacuum().trace().unwrap(), 1.0, 1e-15));
    let m = vacuum().integrate_subset(&[1]).unwrap();
    for x in [0.0, 0.4, -1.7] {
        assert!(close(m.evaluate(&[x]).re, (-x * x).exp() / PI.sqrt(), 1e-15));
    }
}

#[test]
fn partial_trace_matches_nested_quadrature() {
    let joint = coherent(0.9).tensor(&vacuum());
    let out = joint.apply_linear(&SymplecticMap::beamsplitter(0.6, 0, 1, 2).unwrap()).unwrap();
    let reduced = out.integrate_subset(&[2, 3]).unwrap();
    assert!(close(reduced.trace().unwrap(), 1.0, 1e-12));
    // Integrate mode 2 numerically at a fixed point of mode 1.
    let (x1, p1) = (0.5, -0.2);
    let quad = integrate_1d(
        |x2| integrate_1d(|p2| out.evaluate(&[x1, p1, x2, p2]).re, -9.0, 9.0, 1e-13).unwrap(),
        -9.0,
        9.0,
        1e-12,
    )
    .unwrap();
    assert!(close(reduced.evaluate(&[x1, p1]).re, quad, 1e-8));
}

#[test]
fn evaluation_examples() {
    assert!(close(vacuum().evaluate(&[0.0, 0.0]).re, 1.0 / PI, 1e-16));
    // Even cat at the origin: two lobes e^{-2γ²} plus two fringes of weight 1.
    let g: f64 = 0.7;
    let by_hand = (2.0 * (-2.0 * g * g).exp() + 2.0) / (PI * (2.0 + 2.0 * (-2.0 * g * g).exp()));
    let at0 = states::cat(&CatSpec::even(g).unwrap()).evaluate(&[0.0, 0.0]);
    assert!(close(at0.re, by_hand, 1e-15) && at0.im.abs() < 1e-16);
    let spec = SqueezingSpec::new(-4.0, 1.5).unwrap();
    let sv = states::squeezed_vacuum(&spec).evaluate(&[0.0, 0.0]).re;
    assert!(close(sv, 1.0 / (PI * spec.scale_x() * spec.scale_p()), 1e-15));
}

#[test]
fn overlap_examples() {
    assert!(close(vacuum().overlap(&vacuum()).unwrap(), 1.0, 1e-15));
    let (odd, even) = (CatSpec::odd(1.1).unwrap(), CatSpec::even(1.1).unwrap());
    assert!(states::cat(&odd).overlap(&states::cat(&even)).unwrap().abs() < 1e-14);
    let g: f64 = 0.6;
    let o = coherent(g).overlap(&coherent(-g)).unwrap();
    assert!(close(o, (-4.0 * g * g).exp(), 1e-15));
}

#[test]
fn purity_examples() {
    assert!(close(vacuum().purity().unwrap(), 1.0, 1e-15));
    let p = states::squeezed_vacuum(&SqueezingSpec::new(-3.0, 1.3).unwrap()).purity().unwrap();
    assert!(close(p, 10f64.powf(-0.9 / 20.0), 1e-12));
    for xi in [0.5, 3.0, 12.0] {
        let p = states::squeezed_vacuum(&SqueezingSpec::pure(xi).unwrap()).purity().unwrap();
        assert!(close(p, 1.0, 1e-12));
    }
}

#[test]
fn normalize_examples() {
    let (n, t) = vacuum().normalize().unwrap();
    assert!(close(t, 1.0, 1e-15) && close(n.trace().unwrap(), 1.0, 1e-15));
    let quarter = vacuum().scaled(LogComplex::from_real(0.25));
    let (n, t) = quarter.normalize().unwrap();
    assert!(close(t, 0.25, 1e-15));
    assert!(close(n.evaluate(&[0.0, 0.0]).re, 1.0 / PI, 1e-15));
    let tiny = vacuum().scaled(LogComplex::new(-700.0, 0.0));
    assert!(tiny.normalize().is_err());
    let pssv = generate_pssv(&SqueezingSpec::pure(5.2).unwrap(), 0.99).unwrap();
    assert!(close(pssv.success, 0.004, 0.0005));
    assert_eq!(pssv.state.kind(), Kind::State);
}

fn random_map() -> impl Strategy<Value = SymplecticMap> {
    (0.05f64..0.95, 0.3f64..3.0, -PI..PI).prop_map(|(t, s, phi)| {
        let bs = SymplecticMap::beamsplitter(t, 0, 1, 2).unwrap();
        let sq = SymplecticMap::squeezer(s, 1, 2).unwrap();
        let rot = SymplecticMap::rotation(phi, 0, 2).unwrap();
        rot.after(&sq.after(&bs).unwrap()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maps_round_trip_and_preserve_trace(
        map in random_map(),
        gamma in 0.0f64..2.0,
        q in prop::array::uniform4(-2.0f64..2.0),
    ) {
        // Odd cats far below 0.1 cancel heavily between terms; see `states::cat`.
        let joint = states::cat(&CatSpec::odd(gamma.max(0.1)).unwrap()).tensor(&coherent(gamma));
        let moved = joint.apply_linear(&map).unwrap();
        prop_assert!((moved.trace().unwrap() - 1.0).abs() < 1e-10);
        let back = moved.apply_linear(&map.inverted()).unwrap();
        let (a, b) = (back.evaluate(&q), joint.evaluate(&q));
        prop_assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-3));
        prop_assert_eq!(moved.len(), joint.len());
    }

    #[test]
    fn overlaps_are_symmetric_and_bounded(a in 0.05f64..2.5, b in 0.05f64..2.5, odd in any::<bool>()) {
        let u = states::cat(&if odd { CatSpec::odd(a) } else { CatSpec::even(a) }.unwrap());
        let v = states::cat(&CatSpec::even(b).unwrap());
        let (uv, vu) = (u.overlap(&v).unwrap(), v.overlap(&u).unwrap());
        prop_assert!((uv - vu).abs() < 1e-13);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&uv));
    }
}
