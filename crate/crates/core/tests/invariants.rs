use lflab::density::{char_fn, gaussian_model, FourierPoint};
use lflab::discrepancy::{box_discrepancy, bs_b_minus, bs_b_plus, bs_f, bs_h, bs_h_series, bs_k, BSWindow, RectFamily};
use lflab::lfunc::{LFunctionSpec, LinearCombination};
use lflab::primes::PrimeTable;
use lflab::random_model::{mc_expect_log_f, random_log_l, MCConfig, PhaseAssignment, Truncation};
use lflab::zeros::{count_zeros, Rectangle, ZeroCountConfig};
use lflab::{Complex64, Error};
use proptest::prelude::*;

fn spec() -> impl Strategy<Value = LFunctionSpec> {
    prop_oneof![
        Just(LFunctionSpec::zeta()),
        Just(LFunctionSpec::conrey(5, 2).unwrap()),
        Just(LFunctionSpec::conrey(7, 3).unwrap()),
        Just(LFunctionSpec::conrey(8, 5).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn char_fn_bounded_and_hermitian(s in spec(), sigma in 0.52..1.2f64, x in -2.0..2.0f64, y in -2.0..2.0f64) {
        let specs = [s];
        let p = FourierPoint::new(vec![x], vec![y]).unwrap();
        let v = char_fn(&specs, sigma, &p, 300).unwrap();
        let w = char_fn(&specs, sigma, &p.neg(), 300).unwrap();
        prop_assert!(v.norm() <= 1.0 + 1e-12);
        prop_assert!((v - w.conj()).norm() < 1e-12);
    }

    #[test]
    fn char_fn_of_zeta_is_real(sigma in 0.52..1.2f64, x in -2.0..2.0f64, y in -2.0..2.0f64) {
        // Real coefficients make (log|ζ|, arg ζ) symmetric under v -> -v.
        let p = FourierPoint::new(vec![x], vec![y]).unwrap();
        let v = char_fn(&[LFunctionSpec::zeta()], sigma, &p, 300).unwrap();
        let w = char_fn(&[LFunctionSpec::zeta()], sigma, &FourierPoint::new(vec![x], vec![-y]).unwrap(), 300).unwrap();
        prop_assert!((v - w).norm() < 1e-12);
    }

    #[test]
    fn majorant_minorant_of_sign(x in -60.0..60.0f64) {
        let s = x.signum();
        prop_assert!(bs_b_minus(x) <= s + 1e-12);
        prop_assert!(bs_b_plus(x) >= s - 1e-12);
        prop_assert!((bs_b_plus(x) - bs_b_minus(x) - 2.0 * bs_k(x)).abs() < 1e-12);
        prop_assert!((bs_h(x) - bs_h_series(x)).abs() < 1e-3);
        prop_assert!((bs_h(-x) + bs_h(x)).abs() < 1e-12);
    }

    #[test]
    fn window_function_sandwich(a in -5.0..5.0f64, len in 0.1..5.0f64, delta in 0.5..20.0f64, x in -20.0..20.0f64) {
        let w = BSWindow::new(a, a + len, delta).unwrap();
        let f = bs_f(&w, x);
        let gap = w.indicator(x) - f;
        prop_assert!(f.abs() <= 1.0 + 1e-12);
        prop_assert!(gap >= -1e-12);
        prop_assert!(gap <= w.error_bound(x) + 1e-12);
    }

    #[test]
    fn box_discrepancy_is_a_symmetric_probability_gap(
        a in prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 2), 1..60),
        b in prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 2), 1..60),
        points in 2usize..8,
    ) {
        let fam = RectFamily::uniform(2, 2.5, points).unwrap();
        let ab = box_discrepancy(&a, &b, &fam).unwrap();
        let ba = box_discrepancy(&b, &a, &fam).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab.value));
        prop_assert!((0.0..=1.0).contains(&ab.argmax.measure_a) && (0.0..=1.0).contains(&ab.argmax.measure_b));
        prop_assert!((ab.value - (ab.argmax.measure_a - ab.argmax.measure_b).abs()).abs() < 1e-12);
        prop_assert!((ab.value - ba.value).abs() < 1e-12);
        prop_assert_eq!(box_discrepancy(&a, &a, &fam).unwrap().value, 0.0);
    }

    #[test]
    fn log_l_is_a_logarithm(s in spec(), sigma in 0.6..3.0f64, t in -40.0..40.0f64) {
        let z = Complex64::new(sigma, t);
        match (s.eval_l(z, 1e-12), s.eval_log_l(z, 1e-12)) {
            (Ok(v), Ok(l)) => {
                prop_assert!((l.re - v.norm().ln()).abs() < 1e-8);
                prop_assert!((l.exp() - v).norm() < 1e-8 * v.norm().max(1.0));
            }
            (_, Err(Error::ZeroOnPath(_))) | (Err(Error::Pole(_)), _) => {}
            (Err(e), _) | (_, Err(e)) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn log_l_continues_from_the_right(s in spec(), t in -40.0..40.0f64) {
        // Right of 1 the continued argument equals the absolutely convergent prime sum.
        let table = PrimeTable::new(200_000);
        let z = Complex64::new(2.5, t);
        let l = s.eval_log_l(z, 1e-13).unwrap();
        let d = s.dirichlet_poly(z, 200_000.0, &table).unwrap();
        prop_assert!((l - d).norm() < 1e-6, "{l} vs {d}");
    }

    #[test]
    fn unit_phases_give_the_dirichlet_polynomial(s in spec(), sigma in 0.55..1.5f64, y in 10.0..5000.0f64) {
        let table = PrimeTable::new(5000);
        let r = random_log_l(&s, sigma, &PhaseAssignment::ones(), y, &table).unwrap();
        let d = s.dirichlet_poly(Complex64::new(sigma, 0.0), y, &table).unwrap();
        prop_assert!((r - d).norm() < 1e-9);
    }

    #[test]
    fn conjugate_pair_is_real_on_the_real_axis(sigma in 0.55..2.0f64, t in 0.5..40.0f64) {
        let f = LinearCombination::conjugate_pair(5, 2).unwrap();
        let up = f.eval_f(Complex64::new(sigma, t), 1e-12).unwrap();
        let down = f.eval_f(Complex64::new(sigma, -t), 1e-12).unwrap();
        prop_assert!((up - down.conj()).norm() < 1e-9 * up.norm().max(1.0));
    }

    #[test]
    fn gaussian_model_is_normalised(j in 1usize..3, g in 4.0..1e4f64, x in -0.5..0.5f64) {
        let xi = vec![1.0; j];
        let m = gaussian_model(j, &xi, g).unwrap();
        prop_assert!((m.char_fn(&FourierPoint::origin(j)) - 1.0).abs() < 1e-15);
        let p = FourierPoint::new(vec![x; j], vec![0.0; j]).unwrap();
        prop_assert!(m.char_fn(&p) <= 1.0);
        // Per coordinate pair the density integrates to one; check J = 1 by a Riemann sum.
        if j == 1 {
            let r = 8.0 * g.ln().sqrt();
            let n = 200;
            let h = 2.0 * r / n as f64;
            let mut sum = 0.0;
            for a in 0..n {
                for b in 0..n {
                    let u = -r + (a as f64 + 0.5) * h;
                    let v = -r + (b as f64 + 0.5) * h;
                    sum += m.density(&[u], &[v]) * h * h;
                }
            }
            prop_assert!((sum - 1.0).abs() < 1e-6, "{sum}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn zero_counts_add_over_a_split(t0 in 10.0..40.0f64, height in 4.0..12.0f64, frac in 0.2..0.8f64) {
        let f = LinearCombination::conjugate_pair(5, 2).unwrap().series();
        let cfg = ZeroCountConfig::default();
        let (lo, hi) = (0.52, 1.6);
        let mid = t0 + frac * height;
        let whole = count_zeros(&f, &Rectangle::new(lo, hi, t0, t0 + height).unwrap(), &cfg);
        let bottom = count_zeros(&f, &Rectangle::new(lo, hi, t0, mid).unwrap(), &cfg);
        let top = count_zeros(&f, &Rectangle::new(lo, hi, mid, t0 + height).unwrap(), &cfg);
        match (whole, bottom, top) {
            (Ok(w), Ok(b), Ok(t)) => prop_assert_eq!(w.count, b.count + t.count),
            // A zero within the floor of the cut makes the split meaningless.
            (Err(Error::ZeroNearBoundary(_)), _, _) | (_, Err(Error::ZeroNearBoundary(_)), _) | (_, _, Err(Error::ZeroNearBoundary(_))) => {}
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => prop_assert!(false, "{e}"),
        }
    }
}

#[test]
fn monte_carlo_is_independent_of_worker_count() {
    let comb = LinearCombination::conjugate_pair(5, 2).unwrap();
    let base = MCConfig::new(5000, 500.0, 17).with_truncation(Truncation::GaussianTail);
    let one = mc_expect_log_f(&comb, 0.6, &MCConfig { workers: Some(1), ..base }).unwrap();
    let three = mc_expect_log_f(&comb, 0.6, &MCConfig { workers: Some(3), ..base }).unwrap();
    assert_eq!(one.stats.mean.to_bits(), three.stats.mean.to_bits());
    assert_eq!(one.stats.std_error.to_bits(), three.stats.std_error.to_bits());
}
