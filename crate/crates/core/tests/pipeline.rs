use lflab::cache::{CacheStatus, TableCache};
use lflab::density::{compute_k0, invert_density, DensityGridSpec, K0Budget, K0Method};
use lflab::discrepancy::{box_discrepancy, sample_l_vector, RectFamily};
use lflab::lfunc::{LFunctionSpec, LinearCombination};
use lflab::primes::PrimeTable;
use lflab::random_model::{sample_vectors, MCConfig, Truncation};

#[test]
fn k0_quadrature_agrees_with_monte_carlo_for_three_members() {
    let xi = [1.0, 0.5, 2.0];
    let quad = compute_k0(&xi, K0Method::Quadrature, &K0Budget::default()).unwrap();
    let mc = compute_k0(&xi, K0Method::MonteCarlo, &K0Budget { samples: 2_000_000, seed: 5, ..K0Budget::default() }).unwrap();
    let z = (quad.value - mc.value).abs() / mc.abs_error_estimate;
    assert!(z < 4.0, "quad {} mc {} ± {}", quad.value, mc.value, mc.abs_error_estimate);
    assert!(quad.abs_error_estimate < 1e-6);
}

#[test]
fn zeta_density_is_symmetric_in_the_argument() {
    let spec = DensityGridSpec { half_width: 4.0, points: 21, ..DensityGridSpec::default() };
    let grid = invert_density(&[LFunctionSpec::zeta()], 0.7, &spec, 2000).unwrap();
    assert!((grid.mass() - 1.0).abs() < 1e-3, "mass {}", grid.mass());
    let n = grid.axis.len();
    let peak = grid.values.iter().cloned().fold(0.0, f64::max);
    for i in 0..n {
        for j in 0..n {
            let d = (grid.at(&[i, j]) - grid.at(&[i, n - 1 - j])).abs();
            assert!(d < 1e-9 * peak, "asymmetry {d} at ({i}, {j})");
        }
    }
}

#[test]
fn time_samples_and_random_model_agree_roughly() {
    let comb = LinearCombination::single(LFunctionSpec::zeta());
    let emp = sample_l_vector(&comb, 0.7, 400.0, 0.1).unwrap();
    assert_eq!(emp.samples.len() + emp.skipped, 4000);
    let cfg = MCConfig::new(20_000, 1000.0, 3).with_truncation(Truncation::GaussianTail);
    let rnd = sample_vectors(&comb, 0.7, &cfg).unwrap();
    let family = RectFamily::uniform(2, 2.0, 9).unwrap();
    let d = box_discrepancy(&emp.samples, &rnd, &family).unwrap();
    assert!(d.value < 0.15, "discrepancy {}", d.value);
}

#[test]
fn cached_tables_match_fresh_ones() {
    let dir = tempfile::tempdir().unwrap();
    let cache = TableCache::new(dir.path().join("nested"));
    let (t, s) = cache.prime_table(100_000).unwrap();
    assert_eq!(s, CacheStatus::Miss);
    assert_eq!(t, PrimeTable::new(100_000));
    assert_eq!(cache.prime_table(100_000).unwrap().1, CacheStatus::Hit);
    // A different limit is a different entry.
    assert_eq!(cache.prime_table(50_000).unwrap().1, CacheStatus::Miss);
    let (chars, _) = cache.characters(12).unwrap();
    assert_eq!(chars.len(), 4);
}
