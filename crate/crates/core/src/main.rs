use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vcwave::harness::{
    convergence_study, default_out_root, domain_doubling_check, load_config, run_scenario, RunManifest, RunStatus,
    Scenario, CONFIG_SCHEMA,
};
use vcwave::profiles::{solve_contact_profile, ProfileOptions};
use vcwave::riemann::solve_wave_pattern;
use vcwave::{Error, GasParams, ThermoState};

const EXIT_FAIL: u8 = 1;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "vcwave", version, about = "Viscous contact / rarefaction wave laboratory")]
#[command(after_help = CONFIG_SCHEMA)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write diagnostics plus a manifest.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to $VCWAVE_OUT_ROOT/<seed_label>.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a Riemann problem into 1-rarefaction, contact, 3-rarefaction.
    Riemann {
        #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
        left: ThermoState,
        #[arg(long, value_parser = parse_state, allow_hyphen_values = true)]
        right: ThermoState,
        #[command(flatten)]
        gas: GasArgs,
    },
    /// Solve and tabulate a self-similar profile.
    Profile {
        #[command(subcommand)]
        kind: ProfileKind,
    },
    /// Run scenarios and report every verdict; exit 0 only if all pass.
    Verify {
        #[arg(long, required = true)]
        config: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also rerun each trajectory scenario on a doubled domain.
        #[arg(long)]
        domain_check: bool,
    },
    /// Grid refinement study at n, 2n, 4n, ... cells.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
}

#[derive(Subcommand)]
enum ProfileKind {
    /// Temperature profile of the viscous contact wave.
    Contact {
        #[arg(long)]
        theta_minus: f64,
        #[arg(long)]
        theta_plus: f64,
        #[arg(long)]
        p_plus: f64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        gas: GasArgs,
        #[arg(long, default_value_t = 20.0)]
        l_xi: f64,
        #[arg(long, default_value_t = 4001)]
        n_nodes: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Args)]
struct GasArgs {
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 5.0 / 3.0)]
    gamma: f64,
    /// Entropy constant; defaults to R.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    mu_tilde: f64,
    #[arg(long, default_value_t = 1.0)]
    kappa_tilde: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
}

impl GasArgs {
    fn params(&self) -> vcwave::Result<GasParams> {
        GasParams::new(self.r, self.gamma, self.a.unwrap_or(self.r), self.mu_tilde, self.kappa_tilde, 0.0, self.beta)
    }
}

fn parse_state(s: &str) -> Result<ThermoState, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [v, u, theta] => ThermoState::new(v, u, theta).map_err(|e| e.to_string()),
        _ => Err(format!("expected v,u,theta but got {s:?}")),
    }
}

fn report_error(e: &Error) -> ExitCode {
    eprintln!("error [{}]: {e}", e.module());
    if matches!(e, Error::ParseError { .. } | Error::ValidationError(_)) {
        eprintln!("\n{CONFIG_SCHEMA}");
    }
    ExitCode::from(EXIT_ERROR)
}

fn verdict_lines(m: &RunManifest) -> Vec<(String, bool)> {
    let mut out = Vec::new();
    let Some(v) = &m.verdicts else {
        return out;
    };
    if let Some(d) = &v.decay {
        let vd = &d.verdicts;
        out.push((format!("positivity (min v {:.3e}, min theta {:.3e})", d.min_v, d.min_theta), vd.positivity));
        out.push((
            format!("sup decay factor {:.4} >= {}", d.combined.factor, d.thresholds.min_decay_factor),
            vd.sup_decay,
        ));
        out.push((
            format!(
                "energy max {:.6e} <= {} E(0) + {:e} (E(0) = {:.6e})",
                d.e_max, d.thresholds.energy_factor, d.thresholds.energy_offset, d.e0
            ),
            vd.energy_bounded,
        ));
        out.push((
            format!(
                "dissipation final-decade share {:.4} < {}",
                d.final_decade_fraction, d.thresholds.max_final_decade_fraction
            ),
            vd.dissipation_plateau,
        ));
        out.push((
            format!("window constant {:.6e} (half horizon {:.6e})", d.window_constant_full, d.window_constant_half),
            vd.window_constant_stable,
        ));
    }
    if let Some(c) = &v.cell_averages {
        out.push((
            format!(
                "cell averages in [{:.6}, {:.6}] within [{:.6}, {:.6}] (C0 = {:.4e})",
                c.averages.min(),
                c.averages.max(),
                c.alpha1,
                c.alpha2,
                c.c0
            ),
            c.pass,
        ));
    }
    if let Some(s) = v.quiescent_sup {
        out.push((format!("quiescent sup-norm {s:.3e}"), v.pass));
    }
    if let Some(e) = v.manufactured_error {
        out.push((format!("manufactured L2 error {e:.6e}"), v.pass));
    }
    out
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn out_dir_for(out: Option<PathBuf>, label: &str) -> PathBuf {
    out.unwrap_or_else(|| default_out_root().join(if label.is_empty() { "run" } else { label }))
}

fn simulate(config: &Path, out: Option<PathBuf>) -> Result<bool, Error> {
    let cfg = load_config(config)?;
    let dir = out_dir_for(out, &cfg.seed_label);
    let m = run_scenario(&cfg, &dir)?;
    for (line, ok) in verdict_lines(&m) {
        println!("{} {line}", mark(ok));
    }
    let status = match m.status {
        RunStatus::Pass => "pass",
        RunStatus::Fail => "fail",
        RunStatus::Error => "error",
    };
    println!("{status} -> {}", dir.join(vcwave::harness::MANIFEST_FILE).display());
    Ok(m.status == RunStatus::Pass)
}

fn verify(configs: &[PathBuf], out: Option<PathBuf>, domain_check: bool) -> Result<bool, Error> {
    let root = out.unwrap_or_else(default_out_root);
    let mut all = true;
    for path in configs {
        let cfg = load_config(path)?;
        let label = if cfg.seed_label.is_empty() { cfg.scenario.as_str().to_string() } else { cfg.seed_label.clone() };
        let m = run_scenario(&cfg, &root.join(&label))?;
        println!("[{label}] {}", cfg.scenario.as_str());
        for (line, ok) in verdict_lines(&m) {
            println!("  {} {line}", mark(ok));
        }
        all &= m.status == RunStatus::Pass;
        if domain_check && cfg.scenario != Scenario::Manufactured {
            let (check, _, _) = domain_doubling_check(&cfg)?;
            println!(
                "  {} domain doubling: max relative change {:.3e} in {} (< {:e}), max drift {:.2e}",
                mark(check.pass),
                check.max_relative,
                check.worst,
                check.tolerance,
                check.max_drift
            );
            all &= check.pass;
        }
    }
    Ok(all)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            if e.use_stderr() {
                eprintln!("\n{CONFIG_SCHEMA}");
            }
            return ExitCode::from(code);
        }
    };
    let result: Result<bool, Error> = match cli.command {
        Command::Simulate { config, out } => simulate(&config, out),
        Command::Riemann { left, right, gas } => gas.params().and_then(|g| {
            let d = solve_wave_pattern(&left, &right, &g, 1e-10)?;
            let s = |t: &ThermoState| format!("{:.16e},{:.16e},{:.16e}", t.v, t.u, t.theta);
            println!("left       {}", s(&d.left));
            println!("left_mid   {}", s(&d.left_mid));
            println!("right_mid  {}", s(&d.right_mid));
            println!("right      {}", s(&d.right));
            println!("p_mid      {:.16e}", d.p_mid);
            println!("delta_r1   {:.16e}", d.strengths.r1);
            println!("delta_cd   {:.16e}", d.strengths.cd);
            println!("delta_r3   {:.16e}", d.strengths.r3);
            Ok(true)
        }),
        Command::Profile {
            kind: ProfileKind::Contact { theta_minus, theta_plus, p_plus, out, gas, l_xi, n_nodes, tol },
        } => gas.params().and_then(|g| {
            let opts = ProfileOptions { l_xi, n_nodes, tol };
            let p = solve_contact_profile(theta_minus, theta_plus, p_plus, &g, &opts)?;
            p.write_table(&out)?;
            println!("residual   {:.16e}", p.max_residual());
            println!("a_bar      {:.16e}", p.a_bar);
            println!("decay_c1   {:.16e}", p.decay_c1);
            println!("wrote {}", out.display());
            Ok(true)
        }),
        Command::Verify { config, out, domain_check } => verify(&config, out, domain_check),
        Command::Converge { config, levels } => load_config(&config).and_then(|cfg| {
            let r = convergence_study(&cfg, levels)?;
            println!("reference {}{}", r.reference, if r.exact { " (exact: round-off level errors)" } else { "" });
            println!("{:>10} {:>24} {:>24} {:>24}", "n_cells", "err_v", "err_u", "err_theta");
            for l in &r.levels {
                println!("{:>10} {:>24.16e} {:>24.16e} {:>24.16e}", l.n_cells, l.errors.v, l.errors.u, l.errors.theta);
            }
            for (k, o) in r.orders.iter().enumerate() {
                println!("order {k}->{}: v {:.4} u {:.4} theta {:.4}", k + 1, o.v, o.u, o.theta);
            }
            let ok = r.orders_within(1.8, 2.2);
            println!("{} observed order within [1.8, 2.2]", mark(ok));
            Ok(ok)
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => report_error(&e),
    }
}
