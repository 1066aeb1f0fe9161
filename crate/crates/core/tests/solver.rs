use vdwe::io::Config;
use vdwe::solver::mms::{space_convergence, time_convergence};
use vdwe::solver::run::{run, scheme_config, RunOutput};
use vdwe::Error;

fn small() -> Config {
    let mut c = Config::default();
    c.grid.cells = 256;
    c.grid.half_width = 16.0;
    c.run.t_end = 2.0;
    c.run.output_interval = 0.25;
    c.diagnostics.fit_start = 0.5;
    c.diagnostics.fit_end = 2.0;
    c.scheme.positivity_tolerance = f64::INFINITY;
    c
}

fn run_on(threads: usize, config: &Config) -> RunOutput {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| run(config)).map_err(|f| f.error).unwrap()
}

#[test]
fn results_do_not_depend_on_thread_count() {
    for general in [false, true] {
        let mut config = small();
        config.scheme.general = general;
        let one = run_on(1, &config);
        let three = run_on(3, &config);
        assert_eq!(one.steps, three.steps);
        assert_eq!(one.final_fields, three.final_fields);
        assert_eq!(one.series, three.series);
    }
}

#[test]
fn zero_data_stays_zero() {
    let mut config = small();
    config.initial.amplitude = 0.0;
    config.initial.entropy_amplitude = 0.0;
    let out = run(&config).map_err(|f| f.error).unwrap();
    assert_eq!(out.final_fields.max_abs(), 0.0);
    assert!(out.series.rows.iter().all(|r| r.z == 0.0));
}

#[test]
fn manufactured_solution_converges_at_fourth_order() {
    let config = Config::default();
    let gas = config.gas_parameters().unwrap();
    for general in [false, true] {
        let mut c = config.clone();
        c.scheme.general = general;
        let scheme = scheme_config(&c);
        let space = space_convergence(gas, scheme, &[64, 128, 256], 0.5).unwrap();
        assert!(space.min_order() >= 3.5, "{:?}", space.orders);
        let time = time_convergence(gas, scheme, 64, &[64, 128, 256], 8, 0.5).unwrap();
        assert!(time.min_order() >= 3.5, "{:?}", time.orders);
    }
}

#[test]
fn small_data_decays_and_stays_positive() {
    let out = run(&small()).map_err(|f| f.error).unwrap();
    let y0: Vec<f64> = out.series.primary(0);
    assert!(y0.last().unwrap() < &y0[0]);
    assert!(out.relative_undershoot() < 1e-2);
    assert!(out.final_fields.is_finite());
}

#[test]
fn positivity_guard_aborts_with_partial_output() {
    let mut config = small();
    config.scheme.positivity_tolerance = 1e-14;
    let failure = run(&config).unwrap_err();
    assert!(matches!(failure.error, Error::PositivityViolation { .. }), "{:?}", failure.error);
    assert!(failure.partial.is_some());
}

#[test]
fn box_too_small_for_the_horizon_is_rejected() {
    let mut config = small();
    config.run.t_end = 40.0;
    assert!(matches!(run(&config).unwrap_err().error, Error::DomainTooSmall { .. }));
}
