//! Command-line driver: config-driven experiment commands plus the
//! acceptance `suite`. Each config command writes a run directory with the
//! input echoed, CSV result tables, a JSON summary and SVG plots.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use pharm_bm::convex::SupportFn;
use pharm_bm::harness::{self, ExperimentConfig, InnerSpec};
use pharm_bm::measure;
use pharm_bm::ring::{InnerData, RingProblem, ScalarField};
use pharm_bm::supcoord;
use pharm_bm::{exact, plot};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "pharm-bm", version, about = "p-harmonic measure toolkit on planar convex rings")]
struct Cli {
    /// Force the serial deterministic reference path (single thread).
    #[arg(long, global = true)]
    serial: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve annulus oracles and compare with the closed-form solution.
    Oracle {
        #[arg(long, default_value_t = 2.5)]
        p: f64,
        /// Mesh as ANGxRAD, e.g. 256x128.
        #[arg(long, default_value = "256x128")]
        mesh: String,
    },
    /// Functional T through both parameterizations.
    Functional { config: PathBuf },
    /// Boundary measure samples and pushforward mass.
    Measure { config: PathBuf },
    /// Vanishing-level ratio sweep I(s) and the limit ratio.
    Limchar { config: PathBuf },
    /// p-Laplacian bracket residuals on the level-family table.
    Residual { config: PathBuf },
    /// Support-coordinate identity residuals.
    Ids { config: PathBuf },
    /// Supremal-convolution subsolution comparison for the config pair.
    Supconv { config: PathBuf },
    /// Min-form Brunn-Minkowski margins for the config pair.
    Bm { config: PathBuf },
    /// Hadamard variational formula in transported semantics.
    Hadamard { config: PathBuf },
    /// Whole-configuration scaling slope of T.
    Homogeneity { config: PathBuf },
    /// T(R) sweeps along annulus dilate families.
    Locality { config: PathBuf },
    /// Run the acceptance battery; nonzero exit on any failed criterion.
    Suite {
        /// Reduced-mesh smoke battery.
        #[arg(long)]
        quick: bool,
    },
}

fn fmt(v: f64) -> String {
    format!("{v:.12e}")
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    Ok(ExperimentConfig::from_json(&text)?)
}

/// Create the run directory and echo the parsed config into it.
fn run_dir(cfg: &ExperimentConfig, sub: &str) -> Result<PathBuf> {
    let dir = PathBuf::from(&cfg.output.dir).join(sub);
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("config.json"), serde_json::to_string_pretty(cfg)?)?;
    Ok(dir)
}

fn write_json(dir: &Path, value: &impl serde::Serialize) -> Result<()> {
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn solve_from_config(cfg: &ExperimentConfig) -> Result<ScalarField> {
    let k0 = cfg.bodies.k0.build()?;
    let inner = match cfg.experiment.inner {
        InnerSpec::Scale(s) => k0.scale(s),
        InnerSpec::LevelSet(_) => bail!("this command needs a scale-constructed inner body"),
    };
    let prob = RingProblem::new(
        k0,
        inner,
        cfg.solver.p,
        InnerData::Const(cfg.experiment.epsilon0),
        cfg.mesh_dims(),
    )?
    .with_solver_params(cfg.solver.reg_delta, cfg.solver.tol, cfg.solver.max_iter);
    Ok(prob.solve()?)
}

fn table_levels(n: usize, eps0: f64) -> Vec<f64> {
    (0..n).map(|k| 0.5 * eps0 * k as f64 / (n - 1) as f64).collect()
}

fn cmd_oracle(p: f64, mesh: &str) -> Result<i32> {
    let (ma, mr) = mesh
        .split_once('x')
        .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)))
        .context("mesh must look like 256x128")?;
    let prob = RingProblem::new(
        SupportFn::ball(1.0)?,
        SupportFn::ball(0.25)?,
        p,
        InnerData::Const(1.0),
        (ma, mr),
    )?;
    let start = std::time::Instant::now();
    let field = prob.solve()?;
    let secs = start.elapsed().as_secs_f64();
    let ann = exact::Annulus::new(0.25, 1.0, p, 1.0);
    let mesh_ref = field.mesh();
    let mut worst: f64 = 0.0;
    for j in 0..=mesh_ref.m_rad {
        for i in 0..mesh_ref.m_ang {
            let x = mesh_ref.nodes[mesh_ref.node_index(i, j)];
            worst = worst.max((field.node_value(i, j) - ann.u(x.norm())).abs());
        }
    }
    println!("annulus oracle p={p} mesh={ma}x{mr}: max nodal error {worst:.3e} in {secs:.2}s");
    Ok(if worst <= 1e-3 { 0 } else { 1 })
}

fn cmd_functional(cfg: &ExperimentConfig) -> Result<i32> {
    let dir = run_dir(cfg, "functional")?;
    let field = solve_from_config(cfg)?;
    let rep = measure::functional_t(&field)?;
    let mut csv = String::from("t_direct,t_spherical,relative_split\n");
    let split = (rep.t_direct - rep.t_spherical).abs() / rep.t_direct;
    csv.push_str(&format!("{},{},{}\n", fmt(rep.t_direct), fmt(rep.t_spherical), fmt(split)));
    fs::write(dir.join("results.csv"), csv)?;
    write_json(&dir, &rep)?;
    let mu = measure::measure(&field)?;
    let pts: Vec<(f64, f64)> = mu.thetas.iter().zip(&mu.densities).map(|(&t, &d)| (t, d)).collect();
    plot::line_plot(
        &dir.join("density.svg"),
        "boundary measure density",
        "normal angle",
        "|∇u|^(p-1)",
        &[("density", &pts)],
    )?;
    println!("T_direct = {:.6}, T_spherical = {:.6} -> {}", rep.t_direct, rep.t_spherical, dir.display());
    Ok(0)
}

fn cmd_measure(cfg: &ExperimentConfig) -> Result<i32> {
    let dir = run_dir(cfg, "measure")?;
    let field = solve_from_config(cfg)?;
    let mu = measure::measure(&field)?;
    let mut csv = String::from("theta,density,arc_weight\n");
    for j in 0..mu.thetas.len() {
        csv.push_str(&format!(
            "{},{},{}\n",
            fmt(mu.thetas[j]),
            fmt(mu.densities[j]),
            fmt(mu.arc_weights[j])
        ));
    }
    fs::write(dir.join("results.csv"), csv)?;
    write_json(&dir, &mu)?;
    println!(
        "boundary mass = {:.6} (pushforward mass {:.6}) -> {}",
        mu.total_mass,
        mu.spherical_mass(&field),
        dir.display()
    );
    Ok(0)
}

fn cmd_limchar(cfg: &ExperimentConfig) -> Result<i32> {
    let dir = run_dir(cfg, "limchar")?;
    let field = solve_from_config(cfg)?;
    let rep = measure::level_ratio_sweep(&field, &cfg.experiment.s_levels)?;
    let mut csv = String::from("s,integral\n");
    for (s, i) in &rep.ratio_sweep {
        csv.push_str(&format!("{},{}\n", fmt(*s), fmt(*i)));
    }
    fs::write(dir.join("results.csv"), csv)?;
    write_json(&dir, &rep)?;
    plot::line_plot(
        &dir.join("sweep.svg"),
        "vanishing-level ratio integral",
        "s",
        "I(s)",
        &[("I(s)", &rep.ratio_sweep)],
    )?;
    println!(
        "I(s) sweep stabilized at {:.6}; T/I = {:.6} -> {}",
        rep.ratio_sweep.last().unwrap().1,
        rep.limit_ratio.unwrap(),
        dir.display()
    );
    Ok(0)
}

fn cmd_residual(cfg: &ExperimentConfig) -> Result<i32> {
    let dir = run_dir(cfg, "residual")?;
    let field = solve_from_config(cfg)?;
    let levels = table_levels(16, cfg.experiment.epsilon0);
    let table = supcoord::build_table(&field, &levels, cfg.mesh_dims().0, 12)?;
    let grid = table.p_laplace_residual(cfg.solver.p)?;
    let mut txt = String::new();
    for (k, row) in grid.bracket.iter().enumerate() {
        txt.push_str(&fmt(grid.t_values[k]));
        for v in row {
            txt.push(' ');
            txt.push_str(&fmt(*v));
        }
        txt.push('\n');
    }
    fs::write(dir.join("bracket_matrix.txt"), txt)?;
    write_json(&dir, &grid)?;
    plot::heat_map(&dir.join("bracket.svg"), "p-Laplace bracket residual", &grid.bracket)?;
    println!("sup |bracket| = {:.4e} -> {}", grid.sup_abs_bracket, dir.display());
    Ok(0)
}

fn cmd_ids(cfg: &ExperimentConfig) -> Result<i32> {
    let dir = run_dir(cfg, "ids")?;
    let field = solve_from_config(cfg)?;
    let levels = table_levels(32, cfg.experiment.epsilon0);
    let table = supcoord::build_table(&field, &levels, cfg.mesh_dims().0, 12)?;
    let rep = supcoord::support_identity_residuals(&table, &field)?;
    // Table dump: rows t, columns θ.
    let mut txt = String::new();
    for (k, &t) in table.t_values.iter().enumerate() {
        txt.push_str(&fmt(t));
        for &theta in &table.thetas {
            txt.push(' ');
            txt.push_str(&fmt(table.rows[k].eval(theta)));
        }
        txt.push('\n');
    }
    fs::write(dir.join("support_table.txt"), txt)?;
    write_json(&dir, &rep)?;
    println!(
        "identity residuals: support {:.3e}, gradient {:.3e}, dt {:.3e} -> {}",
        rep.support_residual,
        rep.gradient_residual,
        rep.dt_residual,
        dir.display()
    );
    Ok(0)
}

fn cmd_supconv(cfg: &ExperimentConfig) -> Result<i32> {
    let dir = run_dir(cfg, "supconv")?;
    let k1 = cfg.bodies.k0.build()?;
    let k2 = cfg
        .bodies
        .kprime
        .as_ref()
        .context("supconv needs bodies.kprime as the second body")?
        .build()?;
    let inner = match cfg.experiment.inner {
        InnerSpec::Scale(s) => k1.scale(s),
        InnerSpec::LevelSet(_) => bail!("supconv needs a scale-constructed inner body"),
    };
    let eps0 = cfg.experiment.epsilon0;
    let solve = |outer: &SupportFn| -> Result<ScalarField> {
        Ok(RingProblem::new(
            outer.clone(),
            inner.clone(),
            cfg.solver.p,
            InnerData::Const(eps0),
            cfg.mesh_dims(),
        )?
        .with_solver_params(cfg.solver.reg_delta, cfg.solver.tol, cfg.solver.max_iter)
        .solve()?)
    };
    let f1 = solve(&k1)?;
    let f2 = solve(&k2)?;
    let levels = table_levels(16, eps0);
    let t1 = supcoord::build_table(&f1, &levels, cfg.mesh_dims().0, 12)?;
    let t2 = supcoord::build_table(&f2, &levels, cfg.mesh_dims().0, 12)?;
    let mut csv = String::from("lambda,max_violation,tol_discrete,max_bracket\n");
    for &lam in &cfg.experiment.lambda_grid {
        let k_lam = pharm_bm::convex::minkowski_combine(&k1, &k2, 1.0 - lam, lam)?;
        let f_lam = solve(&k_lam)?;
        let sc = supcoord::supremal_convolution(&t1, &t2, lam)?;
        let rep = supcoord::subsolution_compare(&sc, &f_lam, cfg.experiment.probes)?;
        let sign = sc.sign_check(cfg.solver.p)?;
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt(lam),
            fmt(rep.max_violation),
            fmt(rep.tol_discrete),
            fmt(sign.max_bracket)
        ));
        println!(
            "lambda={lam}: max(u*-u) = {:.3e} (tol {:.3e}), bracket max {:.3e}",
            rep.max_violation, rep.tol_discrete, sign.max_bracket
        );
    }
    fs::write(dir.join("results.csv"), csv)?;
    println!("-> {}", dir.display());
    Ok(0)
}

fn cmd_bm(cfg: &ExperimentConfig) -> Result<i32> {
    let dir = run_dir(cfg, "bm")?;
    let k1 = cfg.bodies.k0.build()?;
    let k2 = cfg
        .bodies
        .kprime
        .as_ref()
        .context("bm needs bodies.kprime as the second body")?
        .build()?;
    let rep = harness::bm_min_check(cfg, &k1, &k2)?;
    let mut csv = Vec::new();
    rep.write_csv(&mut csv)?;
    fs::write(dir.join("results.csv"), csv)?;
    write_json(&dir, &rep)?;
    let margins: Vec<(f64, f64)> = rep.rows.iter().map(|r| (r.lambda, r.margin)).collect();
    plot::line_plot(
        &dir.join("margins.svg"),
        "min-form Brunn-Minkowski margins",
        "lambda",
        "T(K_l) - min(T1, T2)",
        &[("margin", &margins)],
    )?;
    println!(
        "T1 = {:.5}, T2 = {:.5}, min margin = {:.5e} -> {}",
        rep.t1,
        rep.t2,
        rep.min_margin(),
        dir.display()
    );
    Ok(0)
}

fn cmd_hadamard(cfg: &ExperimentConfig) -> Result<i32> {
    let dir = run_dir(cfg, "hadamard")?;
    let rep = harness::hadamard_check(cfg)?;
    let mut csv = Vec::new();
    rep.write_csv(&mut csv)?;
    fs::write(dir.join("results.csv"), csv)?;
    write_json(&dir, &rep)?;
    let pts: Vec<(f64, f64)> = rep.t_rows.iter().map(|(t, _, tf)| (*t, *tf)).collect();
    plot::line_plot(
        &dir.join("variation.svg"),
        "T along the transported family",
        "t",
        "T(K_t)",
        &[("T", &pts)],
    )?;
    println!(
        "dT/dt = {:.6} vs quadrature {:.6} (rel {:.3e}) -> {}",
        rep.lhs_derivative,
        rep.rhs_quadrature,
        rep.rel_error,
        dir.display()
    );
    Ok(0)
}

fn cmd_homogeneity(cfg: &ExperimentConfig) -> Result<i32> {
    let dir = run_dir(cfg, "homogeneity")?;
    let rep = harness::homogeneity_check(cfg, &[0.9, 1.1, 1.2, 2.0])?;
    let mut csv = Vec::new();
    rep.write_csv(&mut csv)?;
    fs::write(dir.join("results.csv"), csv)?;
    write_json(&dir, &rep)?;
    let pts: Vec<(f64, f64)> = rep.rows.iter().map(|(l, t)| (l.ln(), t.ln())).collect();
    plot::line_plot(
        &dir.join("slope.svg"),
        "log T against log scale",
        "log lambda",
        "log T",
        &[("log T", &pts)],
    )?;
    println!(
        "slope = {:.6} (expected {}) -> {}",
        rep.slope,
        rep.expected_slope,
        dir.display()
    );
    Ok(0)
}

fn cmd_locality(cfg: &ExperimentConfig) -> Result<i32> {
    let dir = run_dir(cfg, "locality")?;
    let rep = harness::locality_probe(cfg)?;
    let mut csv = Vec::new();
    rep.write_csv(&mut csv)?;
    fs::write(dir.join("results.csv"), csv)?;
    write_json(&dir, &rep)?;
    let thick: Vec<(f64, f64)> = rep.thick_rows.iter().map(|(r, t, _)| (*r, t.ln())).collect();
    let closed: Vec<(f64, f64)> = rep.thick_rows.iter().map(|(r, _, t)| (*r, t.ln())).collect();
    plot::line_plot(
        &dir.join("t_of_outer_radius.svg"),
        "log T along the dilate family",
        "outer radius",
        "log T",
        &[("numeric", &thick), ("closed form", &closed)],
    )?;
    println!(
        "argmin T(R) = {:.4} (stationary {:.4}); thin family monotone: {} -> {}",
        rep.argmin_numeric,
        rep.stationary_closed,
        rep.thin_monotone_decreasing,
        dir.display()
    );
    Ok(0)
}

fn main() -> Result<()> {
    let cli = Cli::parse();

    let threads = if cli.serial {
        1
    } else {
        std::env::var("PHARM_BM_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0) // 0 lets rayon pick
    };
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }

    let code = match &cli.command {
        Command::Oracle { p, mesh } => cmd_oracle(*p, mesh)?,
        Command::Functional { config } => cmd_functional(&load_config(config)?)?,
        Command::Measure { config } => cmd_measure(&load_config(config)?)?,
        Command::Limchar { config } => cmd_limchar(&load_config(config)?)?,
        Command::Residual { config } => cmd_residual(&load_config(config)?)?,
        Command::Ids { config } => cmd_ids(&load_config(config)?)?,
        Command::Supconv { config } => cmd_supconv(&load_config(config)?)?,
        Command::Bm { config } => cmd_bm(&load_config(config)?)?,
        Command::Hadamard { config } => cmd_hadamard(&load_config(config)?)?,
        Command::Homogeneity { config } => cmd_homogeneity(&load_config(config)?)?,
        Command::Locality { config } => cmd_locality(&load_config(config)?)?,
        Command::Suite { quick } => {
            let results = pharm_bm::acceptance::run_all(*quick);
            let failed = results.iter().filter(|r| !r.passed).count();
            println!(
                "{} of {} criteria passed",
                results.len() - failed,
                results.len()
            );
            if failed > 0 {
                1
            } else {
                0
            }
        }
    };
    std::process::exit(code);
}
