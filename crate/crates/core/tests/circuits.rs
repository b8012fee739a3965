use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use catamp::circuits::{
    amplify, analytic_amplified_fidelity, beamsplitter, fidelity_with_pure, generate_pssv, heralded_fidelity,
    heralded_success, heralded_wigner_at, optimize_input_for_target, optimize_target_size, perr, InputFamily,
    SuccessKind,
};
use catamp::numerics::{integrate_1d, maximize_scalar};
use catamp::states::{self, vacuum, wf_cat, SNU};
use catamp::{CatSpec, Parity, Projection, SqueezingSpec};
use proptest::prelude::*;

fn odd_pair(alpha: f64, projection: Projection) -> catamp::circuits::HeraldedState {
    let c = states::cat(&CatSpec::odd(alpha).unwrap());
    amplify(&c, &c, projection).unwrap()
}

fn window(w: f64) -> Projection {
    Projection::window(w).unwrap()
}

#[test]
fn beam_splitter_conventions() {
    let id = beamsplitter(1.0 - 1e-300, 0, 1, 2).unwrap();
    let m = id.matrix();
    for i in 0..4 {
        for j in 0..4 {
            assert!((m[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }
    // Balanced: x₁ → (x₁ - x₂)/√2 and x₂ → (x₁ + x₂)/√2.
    let half = beamsplitter(0.5, 0, 1, 2).unwrap();
    let q = nalgebra::DVector::from_vec(vec![0.3, -0.4, 1.1, 0.7]);
    let out = half.matrix() * &q;
    assert!((out[0] - (0.3 - 1.1) * FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((out[2] - (0.3 + 1.1) * FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((out[1] - (-0.4 - 0.7) * FRAC_1_SQRT_2).abs() < 1e-15);
    // Twice gives x₁ → -x₂, x₂ → x₁.
    let twice = half.matrix() * half.matrix();
    let swapped = &twice * &q;
    assert!((swapped[0] + 1.1).abs() < 1e-15 && (swapped[2] - 0.3).abs() < 1e-15);
}

#[test]
fn pssv_examples() {
    let out = generate_pssv(&SqueezingSpec::pure(3.0).unwrap(), 0.99).unwrap();
    let best = optimize_target_size(&out, Parity::Odd).unwrap();
    assert!((best.argument - 1.0).abs() < 0.05);
    assert_eq!(best.success_probability, Some(out.success));
    // The optimizer agrees with a dense scan.
    let f = |b: f64| fidelity_with_pure(&out.state, &states::cat(&CatSpec::odd(b).unwrap())).unwrap();
    // Odd cats much smaller than 0.05 are ill-conditioned in closed form.
    let dense = (25..=1000).map(|i| i as f64 * 0.002).fold((0.0, 0.0), |a, b| if f(b) > a.1 { (b, f(b)) } else { a });
    assert!((best.argument - dense.0).abs() < 2e-3);
    assert!(best.fidelity >= dense.1 - 1e-12);
    // Fidelities of distinguishable states.
    let vac = vacuum();
    assert!((fidelity_with_pure(&vac, &vac).unwrap() - 1.0).abs() < 1e-15);
    let (even, odd) = (states::cat(&CatSpec::even(1.0).unwrap()), states::cat(&CatSpec::odd(1.0).unwrap()));
    assert!(fidelity_with_pure(&even, &odd).unwrap() < 1e-14);
    assert!(fidelity_with_pure(&out.state, &states::squeezed_vacuum(&SqueezingSpec::new(-3.0, 1.2).unwrap())).is_err());
}

#[test]
fn ideal_cat_amplification() {
    let h = odd_pair(1.4, window(1.0));
    assert!(heralded_fidelity(&h, &CatSpec::even(2.0).unwrap()).unwrap() >= 0.99);
    let s = heralded_success(&h).unwrap();
    assert_eq!(s.kind, SuccessKind::Probability);
    assert!((s.value() - 0.20).abs() < 0.02);
    let h = odd_pair(2.5, window(8.0));
    assert!((heralded_success(&h).unwrap().value() - 0.5).abs() < 0.05);
    assert!(heralded_fidelity(&h, &CatSpec::even(3.54).unwrap()).unwrap() >= 0.99);
}

/// Probability that the heralded x of two mixed odd cats lands in the
/// window, from wavefunction quadrature: Ψ(x₁, x₂) = ψ((x₁+x₂)/√2) ψ((x₁-x₂)/√2).
fn window_probability_oracle(alpha: f64, width_snu: f64) -> f64 {
    let psi = wf_cat(&CatSpec::odd(alpha).unwrap());
    let h = 0.5 * width_snu * SNU;
    let joint = |x1: f64, x2: f64| (psi.evaluate((x1 + x2) * FRAC_1_SQRT_2) * psi.evaluate((x1 - x2) * FRAC_1_SQRT_2)).powi(2);
    integrate_1d(|x2| integrate_1d(|x1| joint(x1, x2), -14.0, 14.0, 1e-13).unwrap(), -h, h, 1e-12).unwrap()
}

#[test]
fn heralding_probability_matches_quadrature() {
    for (alpha, w) in [(1.0, 1.0), (1.5, 2.0), (0.7, 0.3)] {
        let got = heralded_success(&odd_pair(alpha, window(w))).unwrap().value();
        let want = window_probability_oracle(alpha, w);
        assert!((got - want).abs() < 1e-6 * want.max(1e-3), "α={alpha}, ΔQ={w}: {got} vs {want}");
    }
    let all = heralded_success(&odd_pair(1.0, window(f64::INFINITY))).unwrap().value();
    assert!((all - 1.0).abs() < 1e-12);
}

#[test]
fn output_wigner_functions() {
    let pssv = generate_pssv(&SqueezingSpec::pure(2.9).unwrap(), 0.95).unwrap();
    let h = amplify(&pssv.state, &pssv.state, window(1.0)).unwrap();
    assert!((heralded_fidelity(&h, &CatSpec::even(1.5).unwrap()).unwrap() - 0.926).abs() < 0.01);
    assert!((heralded_success(&h).unwrap().value() - 0.20).abs() < 0.03);

    let v = amplify(&vacuum(), &vacuum(), window(1.0)).unwrap();
    for (x, p) in [(0.0, 0.0), (0.7, -0.3)] {
        let w = heralded_wigner_at(&v, x, p).unwrap();
        assert!((w - vacuum().evaluate(&[x, p]).re).abs() < 1e-14);
    }

    // Riemann sum over a large box.
    let h = odd_pair(1.0, window(1.0));
    let step = 0.1;
    let mut sum = 0.0;
    for i in -70..=70 {
        for j in -70..=70 {
            sum += heralded_wigner_at(&h, i as f64 * step, j as f64 * step).unwrap();
        }
    }
    assert!((sum * step * step - 1.0).abs() < 1e-3);
}

/// Most negative value of the output Wigner function on a coarse grid.
fn deepest_negativity(alpha: f64, w: f64) -> f64 {
    let h = odd_pair(alpha, window(w));
    let mut min = f64::INFINITY;
    for i in -30..=30 {
        for j in -30..=30 {
            min = min.min(heralded_wigner_at(&h, i as f64 * 0.1, j as f64 * 0.1).unwrap());
        }
    }
    min
}

#[test]
fn wider_windows_wash_out_negativity() {
    let narrow = deepest_negativity(1.0, 1.0);
    let wide = deepest_negativity(1.0, 10.0);
    assert!(narrow < 0.0);
    assert!(wide > narrow, "{wide} vs {narrow}");
}

#[test]
fn analytic_fidelity_against_the_pipeline() {
    let f = analytic_amplified_fidelity(1.0, SQRT_2, Parity::Odd);
    assert!((f - 0.9686).abs() < 5e-5);
    assert!(analytic_amplified_fidelity(3.0, 3.0 * SQRT_2, Parity::Odd) >= 1.0 - 1e-6);
    for alpha in [0.5, 1.0, 2.0] {
        // An even cat of size 0 is the vacuum.
        let h = odd_pair(alpha, Projection::slice());
        let pipe = heralded_fidelity(&h, &CatSpec::even(0.0).unwrap()).unwrap();
        let formula = analytic_amplified_fidelity(alpha, 0.0, Parity::Odd);
        assert!((pipe - formula).abs() < 1e-9, "α={alpha}: {pipe} vs {formula}");
        for beta in [0.5, 1.3, 2.9] {
            let pipe = heralded_fidelity(&h, &CatSpec::even(beta).unwrap()).unwrap();
            let formula = analytic_amplified_fidelity(alpha, beta, Parity::Odd);
            assert!((pipe - formula).abs() < 1e-9, "α={alpha}, β={beta}: {pipe} vs {formula}");
        }
    }
}

#[test]
fn false_herald_probability() {
    assert!((perr(1e-4, 1.0).unwrap() - 0.5).abs() < 1e-6);
    assert!((perr(2.0, 1e5).unwrap() - 0.5).abs() < 1e-6);
    let p = perr(2.0, 1.0).unwrap();
    assert!(p > 0.0 && p < 0.5);
    // Same quantity from wavefunction quadrature.
    let h = 0.5 * SNU;
    let (cat, vac) = (wf_cat(&CatSpec::even(2.0).unwrap()), states::wf_vacuum());
    let pc = integrate_1d(|x| cat.evaluate(x).powi(2), -h, h, 1e-15).unwrap();
    let pv = integrate_1d(|x| vac.evaluate(x).powi(2), -h, h, 1e-15).unwrap();
    assert!((p - pc / (pc + pv)).abs() < 1e-9);
    assert!(perr(1.0, 0.0).is_err());
}

#[test]
fn size_optimization_examples() {
    let target = states::cat(&CatSpec::odd(1.2).unwrap());
    let r = optimize_target_size(&target, Parity::Odd).unwrap();
    assert!((r.argument - 1.2).abs() < 1e-4 && (r.fidelity - 1.0).abs() < 1e-9);
    assert_eq!(r.success_probability, None);

    // Tiny odd cats act as single photons. Two photons mixed and sliced at
    // x = 0 leave ψ(x) ∝ x² e^{-x²/2}; its best even cat is the plateau.
    let two_photon = |x: f64| x * x * (-x * x / 2.0).exp() * (4.0 / (3.0 * PI.sqrt())).sqrt();
    let fid = |b: f64| {
        let c = wf_cat(&CatSpec::even(b).unwrap());
        integrate_1d(|x| two_photon(x) * c.evaluate(x), -15.0, 15.0, 1e-14).unwrap().powi(2)
    };
    let (plateau, f_plateau) = maximize_scalar(fid, 0.05, 4.0, 1e-8);
    assert!((0.9..1.3).contains(&plateau));
    let sliced = optimize_target_size(&odd_pair(0.02, Projection::slice()), Parity::Even).unwrap();
    assert!((sliced.argument - plateau).abs() < 2e-3, "{} vs {plateau}", sliced.argument);
    assert!((sliced.fidelity - f_plateau).abs() < 1e-3);
    let windowed = optimize_target_size(&odd_pair(0.05, window(1.0)), Parity::Even).unwrap();
    assert!((windowed.argument - plateau).abs() < 0.05, "{} vs {plateau}", windowed.argument);

    let r = optimize_input_for_target(2.0, InputFamily::IdealCat, window(1.0)).unwrap();
    assert!((r.argument - 1.4).abs() < 0.05, "{}", r.argument);

    let pssv = InputFamily::Pssv { t: 0.95, epsilon: 1.0 };
    let r = optimize_input_for_target(1.5, pssv, window(1.0)).unwrap();
    assert!((r.argument - 2.9).abs() < 0.15, "{}", r.argument);
    assert!((r.fidelity - 0.926).abs() < 0.01);

    let r = optimize_input_for_target(3.5, InputFamily::IdealCat, window(1.0)).unwrap();
    assert!((r.argument / 3.5 * SQRT_2 - 1.0).abs() < 0.02, "{}", r.argument);
    assert!(optimize_input_for_target(0.0, InputFamily::IdealCat, window(1.0)).is_err());
}

#[test]
fn target_scan_matches_dense_grid() {
    let h = odd_pair(1.7, window(2.0));
    let r = optimize_target_size(&h, Parity::Even).unwrap();
    let f = |b: f64| heralded_fidelity(&h, &CatSpec::even(b).unwrap()).unwrap();
    let (x, fx) = maximize_scalar(f, 0.05, 6.0, 1e-7);
    assert!((r.argument - x).abs() < 1e-3 && (r.fidelity - fx).abs() < 1e-9);
    let dense = (1..=600).map(|i| i as f64 * 0.01).fold(0.0f64, |m, b| m.max(f(b)));
    assert!(r.fidelity >= dense - 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn success_grows_with_the_window(alpha in 0.1f64..3.0, w in 0.05f64..10.0, extra in 0.01f64..5.0) {
        let narrow = heralded_success(&odd_pair(alpha, window(w))).unwrap().value();
        let wide = heralded_success(&odd_pair(alpha, window(w + extra))).unwrap().value();
        prop_assert!(narrow > 0.0 && narrow <= wide && wide <= 1.0 + 1e-12);
    }

    #[test]
    fn fidelities_are_probabilities(alpha in 0.1f64..3.0, beta in 0.0f64..5.0, w in 0.01f64..10.0) {
        let f = heralded_fidelity(&odd_pair(alpha, window(w)), &CatSpec::even(beta).unwrap()).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn pssv_is_normalized(xi in 0.2f64..12.0, eps in 1.0f64..2.0, t in 0.5f64..0.999) {
        let out = generate_pssv(&SqueezingSpec::impure(xi, eps).unwrap(), t).unwrap();
        prop_assert!((out.state.trace().unwrap() - 1.0).abs() < 1e-10);
        prop_assert!(out.success > 0.0 && out.success < 1.0);
        // Photon subtraction keeps the state odd.
        let x = 0.37;
        let (a, b) = (out.state.evaluate(&[x, 0.2]).re, out.state.evaluate(&[-x, -0.2]).re);
        prop_assert!((a - b).abs() < 1e-12 * a.abs().max(1e-6));
    }
}
