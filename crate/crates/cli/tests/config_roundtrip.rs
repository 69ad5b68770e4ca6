use std::path::PathBuf;

use lflab_cli::config::*;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, Just(0.0), Just(1e-300), Just(0.1), Just(f64::MAX)]
}

fn combination() -> impl Strategy<Value = CombinationArgs> {
    let member = prop_oneof![Just("zeta".to_string()), (3u64..40, 1u64..40).prop_map(|(q, m)| format!("{q}.{m}"))];
    (prop::collection::vec(member, 1..4), prop::option::of(prop::collection::vec(0.1..10.0f64, 1..4)))
        .prop_map(|(members, weights)| CombinationArgs { members, weights })
}

fn mc() -> impl Strategy<Value = McArgs> {
    let trunc = prop_oneof![Just(TruncationArg::PrimePowers), Just(TruncationArg::FullFactors), Just(TruncationArg::GaussianTail)];
    (1usize..10_000_000, prop::option::of(2.0..1e7f64), trunc, any::<bool>()).prop_map(|(samples, y, truncation, antithetic)| McArgs {
        samples,
        y,
        truncation,
        antithetic,
    })
}

fn experiment() -> impl Strategy<Value = Experiment> {
    prop_oneof![
        (combination(), finite(), finite(), finite(), finite(), any::<bool>()).prop_map(|(combination, a, b, c, d, refine)| {
            Experiment::CountZeros(CountZerosArgs { combination, sigma_lo: a, sigma_hi: b, t_lo: c, t_hi: d, boundary_floor: 1e-10, refine })
        }),
        (1usize..6, prop::collection::vec(0.01..100.0f64, 1..6), any::<bool>(), 2usize..1_000_000, finite()).prop_map(|(j, xi, mc, samples, target_error)| {
            let method = if mc { K0MethodArg::MonteCarlo } else { K0MethodArg::Quadrature };
            Experiment::K0(K0Args { j, xi, method, samples, target_error })
        }),
        ("[a-z0-9.]{1,8}", finite(), prop::collection::vec(finite(), 0..5), mc()).prop_map(|(member, sigma, taus, mc)| Experiment::McTail(McTailArgs {
            member,
            sigma,
            taus,
            mc
        })),
        (combination(), finite(), prop::collection::vec(finite(), 0..4), 1usize..5, 2usize..20, mc()).prop_map(
            |(combination, sigma, t, seeds, breakpoints, mc)| {
                Experiment::Discrepancy(DiscrepancyArgs { combination, sigma, t, grid_step: 0.1, seeds, breakpoints, half_width: 3.0, mc })
            }
        ),
        (combination(), finite(), 1usize..100, any::<u64>(), any::<bool>()).prop_map(|(combination, sigma, points, cutoff, cell_average)| {
            Experiment::Density(DensityArgs { combination, sigma, half_width: 4.0, points, cutoff: cutoff >> 1, cell_average })
        }),
        (combination(), prop::option::of(finite()))
            .prop_map(|(combination, big_l)| { Experiment::TailCdf(TailCdfArgs { combination, big_l, ..TailCdfArgs::default() }) }),
        Just(Experiment::SelbergCheck(SelbergCheckArgs::default())),
        Just(Experiment::BsCheck(BsCheckArgs::default())),
        Just(Experiment::LittlewoodCheck(LittlewoodArgs::default())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn toml_round_trip(
        seed in 0u64..=i64::MAX as u64,
        workers in prop::option::of(1usize..64),
        out_dir in prop::option::of("[a-z/_-]{1,12}"),
        check in any::<bool>(),
        experiment in experiment(),
    ) {
        let cfg = ExperimentConfig { seed, workers, out_dir: out_dir.map(PathBuf::from), check, experiment };
        let text = cfg.to_toml().unwrap();
        let back: ExperimentConfig = toml::from_str(&text).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
