use pslet::leading::solve_q0;
use pslet::oracle::{solve_radial, solve_radial_detailed, wavefunction, OracleConfig};
use pslet::riccati::{build_v_terms, log_derivative, solve_hierarchy, DEFAULT_ORDER};
use pslet::{DoubleDouble, PotentialSpec, Real};

fn ground(pot: &PotentialSpec, l: f64) -> f64 {
    let cfg = OracleConfig::auto(pot, l, 0).unwrap();
    solve_radial::<DoubleDouble>(pot, l, &cfg).unwrap().to_f64()
}

#[test]
fn harmonic_ground_state() {
    let pot = PotentialSpec::quartic(0.5, 0.0).unwrap();
    assert!((ground(&pot, 0.0) - 1.5).abs() < 1e-14);
}

#[test]
fn quartic_exact_values() {
    let pot = PotentialSpec::quartic(0.5, 0.5).unwrap();
    assert!((ground(&pot, 0.0) - 2.32441).abs() <= 1e-5);
    assert!((ground(&pot, 5.0) - 13.2644588).abs() <= 1e-7);
}

#[test]
fn step_halving_is_consistent() {
    for (a0, a, l) in [(0.5, 0.5, 0.0), (0.5, 0.5, 50.0), (0.5, 20000.0, 0.0), (-50.0, 0.5, 0.0)] {
        let pot = PotentialSpec::quartic(a0, a).unwrap();
        let cfg = OracleConfig::auto(&pot, l, 0).unwrap();
        let s = solve_radial_detailed::<f64>(&pot, l, &cfg).unwrap();
        assert!((s.fine - s.coarse).abs() < 1e-8);
    }
}

#[test]
fn levels_increase_with_nodes_at_l0() {
    let pot = PotentialSpec::double_well(5.0).unwrap();
    let levels: Vec<f64> = (0..4)
        .map(|n| {
            let cfg = OracleConfig::auto(&pot, 0.0, n).unwrap();
            solve_radial::<DoubleDouble>(&pot, 0.0, &cfg).unwrap().to_f64()
        })
        .collect();
    assert!(levels.windows(2).all(|w| w[0] < w[1]), "{levels:?}");
}

#[test]
fn log_derivative_matches_grid_wavefunction() {
    let pot = PotentialSpec::quartic(0.5, 0.5).unwrap();
    let lead = solve_q0::<f64>(&pot, 0.0, 0, None).unwrap();
    let terms = build_v_terms(&pot, &lead, DEFAULT_ORDER);
    let h = solve_hierarchy(&terms, &lead, DEFAULT_ORDER).unwrap();

    let cfg = OracleConfig::auto(&pot, 0.0, 0).unwrap();
    let e = ground(&pot, 0.0);
    let (q, u) = wavefunction(&pot, 0.0, &cfg, e);
    // x = sqrt(lbar) (q - q0) / q0
    let dq_dx = lead.q0 / lead.lbar.sqrt();
    for i in 1..q.len() - 1 {
        let x = (q[i] - lead.q0) / dq_dx;
        if x.abs() > 1.0 {
            continue;
        }
        let grid = (u[i + 1].ln() - u[i - 1].ln()) / (q[i + 1] - q[i - 1]) * dq_dx;
        let series = log_derivative(&h, &lead, x);
        let scale = grid.abs().max(series.abs()).max(0.1);
        assert!((grid - series).abs() <= 0.05 * scale, "x={x}: grid {grid} vs series {series}");
    }
}
