use vcwave::profiles::{CompositeAnsatz, ProfileOptions};
use vcwave::riemann::{solve_wave_pattern, synthesize_right_state, Strengths, DEFAULT_TOL};
use vcwave::solver::{initialize, run, FarField, Grid1D, NullRecorder, Reflected, SolverConfig, Uniform};
use vcwave::{GasParams, ThermoState};

fn gas() -> GasParams {
    GasParams::monatomic(0.5).with_transport(1.0, 2.5).unwrap()
}

fn ansatz(g: &GasParams) -> CompositeAnsatz {
    let left = ThermoState::new(1.0, 0.0, 1.0).unwrap();
    let right = synthesize_right_state(&left, Strengths { r1: 0.05, cd: 0.05, r3: 0.05 }, g).unwrap();
    let d = solve_wave_pattern(&left, &right, g, DEFAULT_TOL).unwrap();
    CompositeAnsatz::new(&d, g, &ProfileOptions::default()).unwrap()
}

fn bump(x: f64) -> (f64, f64, f64) {
    let e = (-((x - 1.5) / 2.0).powi(2)).exp();
    (0.02 * e, 0.01 * e * (x - 1.5), 0.03 * e)
}

/// Mirrored data on the mirrored background evolves into the mirror image.
#[test]
fn reflection_symmetry() {
    let g = gas();
    let a = ansatz(&g);
    let grid = Grid1D::new(-20.0, 20.0, 400).unwrap();
    let cfg = SolverConfig::new(2.0);
    let s0 = initialize(&a, bump, &grid, &g).unwrap();
    let refl = Reflected(&a);
    let mirrored = |x: f64| {
        let (dv, du, dt) = bump(-x);
        (dv, -du, dt)
    };
    let r0 = initialize(&refl, mirrored, &grid, &g).unwrap();
    let s = run(s0, &grid, &cfg, &a, &g, &mut NullRecorder).unwrap();
    let r = run(r0, &grid, &cfg, &refl, &g, &mut NullRecorder).unwrap();
    assert_eq!(s.t, r.t);
    assert_eq!(s.step_count, r.step_count);
    let n = grid.n_cells();
    let scale = 1.0 + s.u.iter().fold(0.0f64, |m, u| m.max(u.abs()));
    let mut worst = 0.0f64;
    for i in 0..n {
        worst = worst.max((s.v[i] - r.v[n - 1 - i]).abs()).max((s.theta[i] - r.theta[n - 1 - i]).abs());
    }
    for j in 0..=n {
        worst = worst.max((s.u[j] + r.u[n - j]).abs() / scale);
    }
    assert!(worst < 1e-13, "asymmetry {worst:e}");
}

#[test]
fn quiescent_run_does_not_drift() {
    let g = gas();
    let state = ThermoState::new(1.3, 0.2, 0.8).unwrap();
    let far = Uniform(state);
    let grid = Grid1D::new(-50.0, 50.0, 500).unwrap();
    let s0 = initialize(&far, |_| (0.0, 0.0, 0.0), &grid, &g).unwrap();
    let s = run(s0, &grid, &SolverConfig::new(20.0), &far, &g, &mut NullRecorder).unwrap();
    assert!(s.step_count > 100);
    let dev = s
        .v
        .iter()
        .map(|v| (v - state.v).abs())
        .chain(s.theta.iter().map(|t| (t - state.theta).abs()))
        .chain(s.u.iter().map(|u| (u - state.u).abs()))
        .fold(0.0f64, f64::max);
    assert!(dev < 1e-10, "deviation {dev:e}");
    assert!(s.mass_drift(&grid).abs() < 1e-10);
    assert!(s.momentum_drift(&grid).abs() < 1e-10);
}

#[test]
fn boundary_follows_ansatz() {
    let g = gas();
    let a = ansatz(&g);
    let grid = Grid1D::new(-30.0, 30.0, 300).unwrap();
    let s0 = initialize(&a, |_| (0.0, 0.0, 0.0), &grid, &g).unwrap();
    let s = run(s0, &grid, &SolverConfig::new(3.0), &a, &g, &mut NullRecorder).unwrap();
    let n = grid.n_cells();
    assert_eq!(s.u[0], a.state_at(grid.edge(0), 3.0).unwrap().u);
    assert_eq!(s.u[n], a.state_at(grid.edge(n), 3.0).unwrap().u);
    assert!(s.mass_drift(&grid).abs() < 1e-12);
}

#[test]
fn determinism() {
    let g = gas();
    let a = ansatz(&g);
    let grid = Grid1D::new(-20.0, 20.0, 200).unwrap();
    let go = || run(initialize(&a, bump, &grid, &g).unwrap(), &grid, &SolverConfig::new(1.5), &a, &g, &mut NullRecorder).unwrap();
    assert_eq!(go(), go());
}
