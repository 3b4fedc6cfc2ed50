use growfrag::closedform::{front, omega, u_regular, SolutionSnapshot};
use growfrag::mellin::{
    beta_moment_integral, beta_moment_quadrature, forward_mellin, inverse_mellin_regular,
    mellin_ode_residual, reassembled_omega, ContourSpec,
};
use growfrag::specfun::ComplexScalar;
use growfrag::{make_params, RadialGrid, Spacing};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

#[test]
fn forward_transform_on_grid_of_s() {
    let p = make_params(0.8, 2.0).unwrap();
    let t = 0.5 / 0.8;
    let grid = RadialGrid::new(1e-3, 1.2 * front(&p, t).unwrap(), 32, Spacing::LogUniform).unwrap();
    let snap = SolutionSnapshot::new(&p, t, grid).unwrap();
    for s in [c(0.7, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.3, 0.0), c(2.0, 1.0)] {
        let got = forward_mellin(&snap, s).unwrap();
        let expect = omega(&p, t, s).unwrap();
        assert!((got - expect).norm() <= 1e-6 * expect.norm(), "{s}: {got} vs {expect}");
    }
}

#[test]
fn inverse_is_independent_of_abscissa() {
    let p = make_params(0.8, 2.0).unwrap();
    let t = 0.5 / 0.8;
    for x in [0.5, 1.0, 2.0] {
        let exact = u_regular(&p, t, x).unwrap();
        let mut values = Vec::new();
        for s0 in [0.5, 2.0] {
            let contour = ContourSpec::new(s0, 400.0, 20_000).unwrap();
            let v = inverse_mellin_regular(&p, t, x, &contour).unwrap();
            assert!((v - exact).abs() <= 1e-4, "x={x} s0={s0}: {v} vs {exact}");
            values.push(v);
        }
        assert!((values[0] - values[1]).abs() <= 2e-4);
    }
}

#[test]
fn inverse_error_falls_with_height() {
    let p = make_params(1.0, 2.0).unwrap();
    let exact = u_regular(&p, 0.5, 1.0).unwrap();
    let err = |h: f64| {
        let contour = ContourSpec::with_tolerance(1.0, h, (50.0 * h) as usize, 1.0).unwrap();
        (inverse_mellin_regular(&p, 0.5, 1.0, &contour).unwrap() - exact).abs()
    };
    // the error oscillates with the cut-off, so compare against an H^-2 envelope
    let heights = [20.0, 40.0, 80.0, 160.0, 320.0];
    let errors: Vec<f64> = heights.iter().map(|&h| err(h)).collect();
    for (h, e) in heights.iter().zip(&errors) {
        assert!(e * h * h <= 2e-2, "height {h}: {e}");
    }
    assert!(errors[4] < 1e-2 * errors[0], "{errors:?}");
}

#[test]
fn functional_equation_is_second_order() {
    let p = make_params(0.8, 2.0).unwrap();
    for s in [c(2.0, 0.0), c(1.5, 1.0), c(3.7, 0.0)] {
        let r: Vec<f64> = [1e-3, 5e-4, 2.5e-4]
            .iter()
            .map(|&dt| mellin_ode_residual(&p, 0.4, s, dt).unwrap())
            .collect();
        for w in r.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio - 4.0).abs() <= 0.8, "s={s}: ratio {ratio}");
        }
        assert!(mellin_ode_residual(&p, 0.4, s, 1e-4).unwrap() <= 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn beta_integral_closed_form(
        g in 0.4f64..2.5, frac in 0.05f64..0.9, n in 0u32..6, sr in 0.3f64..4.0, si in -2.0f64..2.0,
    ) {
        let p = make_params(g, 2.0).unwrap();
        let s = c(sr, si);
        let t = frac / g;
        let a = beta_moment_integral(&p, t, n, s).unwrap();
        let b = beta_moment_quadrature(&p, t, n, s).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn reassembly_matches_omega(
        g in 0.4f64..2.5, th in 1.1f64..6.0, frac in 0.05f64..0.9, sr in 0.3f64..4.0, si in -2.0f64..2.0,
    ) {
        let p = make_params(g, th).unwrap();
        let s = c(sr, si);
        let t = frac / g;
        let a = reassembled_omega(&p, t, s).unwrap();
        let b = omega(&p, t, s).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * b.norm(), "{} vs {}", a, b);
    }
}
