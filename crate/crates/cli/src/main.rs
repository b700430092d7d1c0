//! Command-line front end: profile tables, grid analysis/synthesis, norms,
//! Riesz transforms, the invariant suite, and the scripted demos.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 I/O error.
//! All randomness flows from the single `--seed` through fixed per-job
//! sub-seeds, so identical invocations produce byte-identical artifacts.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use tlwavelab::experiments::{
    duality_pairing_check, inclusion_demo, lacunary_demo, riesz_char_check, sub_seed,
    trivial_fs_decomposition,
};
use tlwavelab::grid::GridSpec;
use tlwavelab::io::{read_coefficients_csv, read_grid, write_coefficients_csv, write_grid};
use tlwavelab::meyer::MeyerSystem;
use tlwavelab::norms::{
    f01q_norm, f0infq_functional, l1_norm, linf_norm, min_1q, sum_space_upper, we1q_norm,
    weinfq_norm, NormKind, NormReport,
};
use tlwavelab::riesz::{riesz_apply, riesz_square_sum, RieszComponent};
use tlwavelab::verify::{run_suite, VerifyConfig};
use tlwavelab::wavelet::WaveletBasis;
use tlwavelab::REPORT_SCHEMA;

#[derive(Parser)]
#[command(name = "tlwavelab", version, about = "Meyer wavelet / Riesz transform desk lab")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Global run configuration shared by every subcommand.
#[derive(Args, Clone)]
struct RunConfig {
    /// Spatial dimension (1 or 2).
    #[arg(long = "dim", default_value_t = 1, global = true)]
    dimension: usize,
    /// Period exponent P (torus period 2^P).
    #[arg(long, global = true)]
    period_exp: Option<u32>,
    /// Grid exponent G (2^G samples per axis).
    #[arg(long, global = true)]
    grid_exp: Option<u32>,
    /// Integrability index q.
    #[arg(long, default_value_t = 2.0, global = true)]
    q: f64,
    /// Master seed for every randomized check.
    #[arg(long, default_value_t = 7, global = true)]
    seed: u64,
    /// Output directory (TLWAVELAB_OUT overrides).
    #[arg(long, default_value = ".", global = true)]
    out: PathBuf,
    /// Max concurrent demo jobs for `demo all`.
    #[arg(long, default_value_t = 1, global = true)]
    jobs: usize,
    /// Absolute quadrature tolerance for profile construction.
    #[arg(long, default_value_t = 1e-10, global = true)]
    quad_tol: f64,
}

impl RunConfig {
    fn out_dir(&self) -> PathBuf {
        match std::env::var_os("TLWAVELAB_OUT") {
            Some(v) if !v.is_empty() => PathBuf::from(v),
            _ => self.out.clone(),
        }
    }

    fn grid_spec(&self) -> anyhow::Result<GridSpec> {
        let (p_default, g_default) = match self.dimension {
            1 => (5u32, 14u32),
            _ => (3u32, 9u32),
        };
        let p = self.period_exp.unwrap_or(p_default);
        let g = self.grid_exp.unwrap_or(g_default);
        Ok(GridSpec::with_default_window(self.dimension, p, g)?)
    }

    fn system(&self) -> anyhow::Result<MeyerSystem> {
        Ok(MeyerSystem::with_accuracy(
            self.dimension,
            tlwavelab::bump::DEFAULT_NODES,
            self.quad_tol,
        )?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build profiles and run the profile property suite, or emit tables.
    Wavelet {
        #[command(subcommand)]
        action: WaveletAction,
    },
    /// Analyze a grid file into wavelet coefficients (CSV).
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Synthesize a grid file from wavelet coefficients (CSV).
    Synthesize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Evaluate a norm of a grid function.
    Norm {
        /// Which norm: l1, linf, f01q, f0infq, we1q, weinfq, min1q, sum1q.
        #[arg(long)]
        which: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// Apply a Riesz component to a grid file.
    Riesz {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also verify the square-sum identity on this input.
        #[arg(long, default_value_t = false)]
        check_square_sum: bool,
    },
    /// Run the structural invariant suite.
    Verify,
    /// Reproducible experiment reports.
    Demo {
        #[command(subcommand)]
        which: DemoCommand,
    },
}

#[derive(Subcommand)]
enum WaveletAction {
    /// Run the profile property suite and write a pass/fail summary.
    Build,
    /// Emit a CSV table of the frequency profiles with a JSON sidecar.
    Table {
        /// Number of sample points.
        #[arg(long, default_value_t = 1024)]
        points: usize,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Coefficient decay and norm divergence of the father tensor.
    Inclusion {
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = -9, allow_negative_numbers = true)]
        j_floor: i32,
    },
    /// Lacunary sum counterexample scan.
    Lacunary {
        #[arg(long, default_value_t = 2.0)]
        q_prime: f64,
        /// Comma-separated partial-sum sizes.
        #[arg(long, default_value = "1,2,3,4,5,6,7,8", value_delimiter = ',')]
        terms: Vec<usize>,
    },
    /// Riesz characterization ratio scan.
    RieszChar {
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Duality pairing constant scan.
    Duality {
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Trivial Riesz splitting of a grid file.
    FsTrivial {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run every demo, parallel up to --jobs, each in its own directory.
    All,
}

/// Failure modes that map onto the documented exit codes.
enum RunError {
    Check(String),
    Io(String),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for RunError {
    fn from(e: anyhow::Error) -> Self {
        // Classify I/O-ish failures for the exit code contract.
        if e.downcast_ref::<std::io::Error>().is_some()
            || e.downcast_ref::<tlwavelab::io::IoError>().is_some()
        {
            RunError::Io(format!("{e:#}"))
        } else {
            RunError::Other(e)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(RunError::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(RunError::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn ensure_dir(dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, schema_body: &T) -> anyhow::Result<()> {
    let mut file = std::fs::File::create(path)?;
    let text = serde_json::to_string_pretty(schema_body)?;
    file.write_all(text.as_bytes())?;
    file.write_all(b"\n")?;
    Ok(())
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    schema: &'static str,
    #[serde(flatten)]
    body: T,
}

fn report<T: Serialize>(body: T) -> Report<T> {
    Report {
        schema: REPORT_SCHEMA,
        body,
    }
}

fn run(cli: &Cli) -> Result<(), RunError> {
    let out = cli.run.out_dir();
    ensure_dir(&out).map_err(RunError::from)?;
    match &cli.command {
        Command::Wavelet { action } => match action {
            WaveletAction::Build => cmd_wavelet_build(&cli.run, &out),
            WaveletAction::Table { points } => cmd_wavelet_table(&cli.run, &out, *points),
        },
        Command::Analyze { input, output } => cmd_analyze(&cli.run, input, output),
        Command::Synthesize { input, output } => cmd_synthesize(&cli.run, input, output),
        Command::Norm { which, input } => cmd_norm(&cli.run, &out, which, input),
        Command::Riesz {
            ell,
            input,
            output,
            check_square_sum,
        } => cmd_riesz(&cli.run, *ell, input, output.as_deref(), *check_square_sum),
        Command::Verify => cmd_verify(&cli.run, &out),
        Command::Demo { which } => cmd_demo(&cli.run, &out, which),
    }
}

#[derive(Serialize)]
struct ProfileCheck {
    check: &'static str,
    passed: bool,
    value: f64,
    threshold: f64,
}

#[derive(Serialize)]
struct WaveletBuildReport {
    quad_tol: f64,
    node_count: usize,
    psi_zero: tlwavelab::meyer::PsiZeroReport,
    checks: Vec<ProfileCheck>,
}

fn profile_suite(system: &MeyerSystem) -> anyhow::Result<WaveletBuildReport> {
    use std::f64::consts::PI;
    let mut checks = Vec::new();

    let mut partition = 0.0f64;
    for i in 0..10_000 {
        let xi = 2.0 * PI * i as f64 / 9_999.0;
        let a = system.phi_hat(xi);
        let b = system.phi_hat(xi - 2.0 * PI);
        partition = partition.max((a * a + b * b - 1.0 / (2.0 * PI)).abs());
    }
    checks.push(ProfileCheck {
        check: "profile-partition-identity",
        passed: partition <= 1e-9,
        value: partition,
        threshold: 1e-9,
    });

    let mut evenness = 0.0f64;
    for i in 0..2_000 {
        let xi = 5.0 * i as f64 / 1_999.0;
        evenness = evenness.max((system.phi_hat(xi) - system.phi_hat(-xi)).abs());
    }
    checks.push(ProfileCheck {
        check: "profile-evenness",
        passed: evenness == 0.0,
        value: evenness,
        threshold: 0.0,
    });

    let inner = 2.0 * PI / 3.0 - 1e-12;
    let outer = 8.0 * PI / 3.0 + 1e-12;
    let support_leak = system
        .psi_hat(inner)
        .norm()
        .max(system.psi_hat(outer).norm())
        .max(system.psi_hat(-inner).norm());
    checks.push(ProfileCheck {
        check: "wavelet-annulus-support",
        passed: support_leak == 0.0,
        value: support_leak,
        threshold: 0.0,
    });

    let psi_zero = system.psi_zero_report()?;
    checks.push(ProfileCheck {
        check: "wavelet-origin-lower-bound",
        passed: psi_zero.margin >= -1e-6,
        value: psi_zero.margin,
        threshold: -1e-6,
    });

    let mut monotone = 0.0f64;
    let mut prev = 0.0;
    for i in 0..=4_000 {
        let x = i as f64 / 4_000.0;
        let v = system.bump().eval(x);
        monotone = monotone.max(prev - v);
        prev = v;
    }
    checks.push(ProfileCheck {
        check: "transition-monotonicity",
        passed: monotone <= 2.0 * system.quad_tol(),
        value: monotone,
        threshold: 2.0 * system.quad_tol(),
    });

    Ok(WaveletBuildReport {
        quad_tol: system.quad_tol(),
        node_count: system.bump().sample_nodes().len(),
        psi_zero,
        checks,
    })
}

fn cmd_wavelet_build(run: &RunConfig, out: &Path) -> Result<(), RunError> {
    let system = run.system().map_err(RunError::from)?;
    let rep = profile_suite(&system).map_err(RunError::from)?;
    write_json(&out.join("wavelet_build.json"), &report(&rep)).map_err(RunError::from)?;
    let mut failed = Vec::new();
    for c in &rep.checks {
        println!(
            "{} {}: {:.3e} (threshold {:.3e})",
            if c.passed { "pass" } else { "FAIL" },
            c.check,
            c.value,
            c.threshold
        );
        if !c.passed {
            failed.push(c.check);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(RunError::Check(format!("violated: {}", failed.join(", "))))
    }
}

fn cmd_wavelet_table(run: &RunConfig, out: &Path, points: usize) -> Result<(), RunError> {
    let system = run.system().map_err(RunError::from)?;
    let path = out.join("wavelet_table.csv");
    let go = || -> anyhow::Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(&path)?);
        writeln!(w, "xi,phi,m_phi,re_psi_hat,im_psi_hat")?;
        let span = 3.0 * std::f64::consts::PI;
        for i in 0..points {
            let xi = -span + 2.0 * span * i as f64 / (points - 1) as f64;
            let p = system.psi_hat(xi);
            writeln!(
                w,
                "{xi:e},{:e},{:e},{:e},{:e}",
                system.phi_hat(xi),
                system.m_phi(xi),
                p.re,
                p.im
            )?;
        }
        w.flush()?;
        let side = report(profile_suite(&system)?);
        write_json(&out.join("wavelet_table.json"), &side)?;
        Ok(())
    };
    go().map_err(RunError::from)?;
    println!("wrote {} and sidecar", path.display());
    Ok(())
}

fn cmd_analyze(run: &RunConfig, input: &Path, output: &Path) -> Result<(), RunError> {
    let f = read_grid(input).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let system = MeyerSystem::with_accuracy(
        f.spec().dimension,
        tlwavelab::bump::DEFAULT_NODES,
        run.quad_tol,
    )
    .map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let basis =
        WaveletBasis::new(system, *f.spec()).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let c = basis
        .analyze(&f)
        .map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    write_coefficients_csv(output, &c).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    println!("analyzed {} entries -> {}", c.len(), output.display());
    Ok(())
}

fn cmd_synthesize(run: &RunConfig, input: &Path, output: &Path) -> Result<(), RunError> {
    let c = read_coefficients_csv(input).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let system = MeyerSystem::with_accuracy(
        c.spec().dimension,
        tlwavelab::bump::DEFAULT_NODES,
        run.quad_tol,
    )
    .map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let basis =
        WaveletBasis::new(system, *c.spec()).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let f = basis.synthesize(&c);
    write_grid(output, &f).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    println!("synthesized {} -> {}", input.display(), output.display());
    Ok(())
}

fn cmd_norm(run: &RunConfig, out: &Path, which: &str, input: &Path) -> Result<(), RunError> {
    let f = read_grid(input).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let q = run.q;
    let go = || -> anyhow::Result<NormReport> {
        let needs_coeffs = which != "l1" && which != "linf";
        let rep = if needs_coeffs {
            let system = MeyerSystem::with_accuracy(
                f.spec().dimension,
                tlwavelab::bump::DEFAULT_NODES,
                run.quad_tol,
            )?;
            let basis = WaveletBasis::new(system, *f.spec())?;
            let c = basis.analyze(&f)?;
            match which {
                "f01q" => NormReport::with_q(NormKind::F01q, f01q_norm(&c, q)?, q),
                "h1" => NormReport::with_q(NormKind::H1, f01q_norm(&c, 2.0)?, 2.0),
                "f0infq" => NormReport::with_q(NormKind::F0infq, f0infq_functional(&c, q)?, q),
                "we1q" => {
                    let r = we1q_norm(&basis, &c, &f, q)?;
                    let mut rep = NormReport::with_q(NormKind::We1q, r.value, q);
                    rep.witnesses = Some(r.witnesses);
                    rep
                }
                "weinfq" => NormReport::with_q(NormKind::Weinfq, weinfq_norm(&basis, &c, &f, q)?, q),
                "min1q" => NormReport::with_q(NormKind::Min1q, min_1q(&c, &f, q)?, q),
                "sum1q" => {
                    let mut rep = NormReport::with_q(
                        NormKind::Sum1qUpper,
                        sum_space_upper(&basis, &c, &f, q)?,
                        q,
                    );
                    rep.notes = Some(
                        "upper bound from trivial and scale-cutoff splittings; \
                         the exact infimum is not computed"
                            .into(),
                    );
                    rep
                }
                other => anyhow::bail!("unknown norm '{other}'"),
            }
        } else {
            match which {
                "l1" => NormReport::plain(NormKind::L1, l1_norm(&f)),
                "linf" => NormReport::plain(NormKind::Linf, linf_norm(&f)),
                _ => unreachable!(),
            }
        };
        Ok(rep)
    };
    let rep = go().map_err(RunError::from)?;
    write_json(&out.join(format!("norm_{which}.json")), &report(&rep)).map_err(RunError::from)?;
    println!("{which} = {:.12e}", rep.value);
    Ok(())
}

fn cmd_riesz(
    run: &RunConfig,
    ell: usize,
    input: &Path,
    output: Option<&Path>,
    check_square_sum: bool,
) -> Result<(), RunError> {
    let f = read_grid(input).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let comp = RieszComponent::new(ell, f.spec().dimension)
        .map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let g = riesz_apply(comp, &f);
    if let Some(path) = output {
        write_grid(path, &g).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
        println!("riesz component {ell} -> {}", path.display());
    }
    if check_square_sum {
        let s = riesz_square_sum(&f).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
        let mut worst = 0.0f64;
        let mut amp = 0.0f64;
        for (a, b) in f.samples().iter().zip(s.samples()) {
            worst = worst.max((a + b).norm());
            amp = amp.max(a.norm());
        }
        let rel = worst / amp.max(1e-300);
        println!("square-sum identity relative error: {rel:.3e}");
        if rel > 1e-10 {
            return Err(RunError::Check(format!(
                "square-sum identity off by {rel:.3e} (limit 1e-10)"
            )));
        }
    }
    let _ = run;
    Ok(())
}

#[derive(Serialize)]
struct VerifyReport {
    dimension: usize,
    seed: u64,
    checks: Vec<tlwavelab::verify::CheckOutcome>,
}

fn cmd_verify(run: &RunConfig, out: &Path) -> Result<(), RunError> {
    let mut config = VerifyConfig::desk_default(run.dimension);
    config.seed = run.seed;
    if let (Some(p), Some(g)) = (run.period_exp, run.grid_exp) {
        config.spec = GridSpec::with_default_window(run.dimension, p, g)
            .map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    }
    let checks = run_suite(&config).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let rep = VerifyReport {
        dimension: run.dimension,
        seed: run.seed,
        checks,
    };
    write_json(&out.join("verify.json"), &report(&rep)).map_err(RunError::from)?;
    let mut failed = Vec::new();
    for c in &rep.checks {
        println!(
            "{} {}: {:.3e} ({} {:.3e})",
            if c.passed { "pass" } else { "FAIL" },
            c.check,
            c.value,
            if c.upper_bound { "<=" } else { ">=" },
            c.threshold
        );
        if !c.passed {
            failed.push(c.check);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(RunError::Check(format!("violated: {}", failed.join(", "))))
    }
}

fn write_csv_rows(path: &Path, header: &str, rows: &[String]) -> anyhow::Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{header}")?;
    for r in rows {
        writeln!(w, "{r}")?;
    }
    w.flush()?;
    Ok(())
}

fn demo_inclusion(run: &RunConfig, out: &Path, q: f64, j_floor: i32) -> Result<(), RunError> {
    let rep = inclusion_demo(q, j_floor, run.dimension)
        .map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    write_json(&out.join("inclusion.json"), &report(&rep)).map_err(RunError::from)?;
    let rows: Vec<String> = rep
        .shells
        .iter()
        .map(|r| format!("{},{:e},{:e}", r.coarsest_scale, r.truncated_f01q, r.l1))
        .collect();
    write_csv_rows(
        &out.join("inclusion_shells.csv"),
        "coarsest_scale,truncated_f01q,l1",
        &rows,
    )
    .map_err(RunError::from)?;
    let rows: Vec<String> = rep
        .ratios
        .iter()
        .map(|r| format!("{},{:e}", r.scale, r.ratio))
        .collect();
    write_csv_rows(&out.join("inclusion_ratios.csv"), "scale,ratio", &rows)
        .map_err(RunError::from)?;
    println!(
        "inclusion: slope {:.4e}, r2 {:.4}, l1 spread {:.3e}, ratio spread {:.3e}",
        rep.fit_slope, rep.fit_r2, rep.l1_relative_spread, rep.ratio_relative_spread
    );
    Ok(())
}

fn demo_lacunary(out: &Path, q_prime: f64, terms: &[usize]) -> Result<(), RunError> {
    let rep =
        lacunary_demo(q_prime, terms).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    write_json(&out.join("lacunary.json"), &report(&rep)).map_err(RunError::from)?;
    let rows: Vec<String> = rep
        .rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{:e},{:e},{:e}",
                r.terms, r.included_terms, r.truncated, r.linf, r.f0infq_prime, r.sup_r1_near_zero
            )
        })
        .collect();
    write_csv_rows(
        &out.join("lacunary_terms.csv"),
        "terms,included_terms,truncated,linf,f0infq_prime,sup_r1_near_zero",
        &rows,
    )
    .map_err(RunError::from)?;
    println!(
        "lacunary: shift 2^{}, c_d {:.5e}, delta {:.3}",
        rep.shift_exponent + 1,
        rep.c_d,
        rep.delta
    );
    if rep.c_d >= -1e-3 {
        return Err(RunError::Check(format!(
            "kernel integral {:.3e} not negative with margin; adjust the shift",
            rep.c_d
        )));
    }
    Ok(())
}

fn demo_riesz_char(run: &RunConfig, out: &Path, q: f64, trials: usize) -> Result<(), RunError> {
    let spec = run.grid_spec().map_err(RunError::from)?;
    let rep = riesz_char_check(&spec, q, trials, sub_seed(run.seed, "riesz-char"))
        .map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    write_json(&out.join("riesz_char.json"), &report(&rep)).map_err(RunError::from)?;
    println!(
        "riesz-char: ratios in [{:.4e}, {:.4e}], spread {:?}",
        rep.ratios.min.unwrap_or(0.0),
        rep.ratios.max.unwrap_or(0.0),
        rep.equivalence_spread
    );
    Ok(())
}

fn demo_duality(run: &RunConfig, out: &Path, q: f64, trials: usize) -> Result<(), RunError> {
    let spec = run.grid_spec().map_err(RunError::from)?;
    let rep = duality_pairing_check(&spec, q, trials, sub_seed(run.seed, "duality"))
        .map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    write_json(&out.join("duality.json"), &report(&rep)).map_err(RunError::from)?;
    println!(
        "duality: pairing constant {:.4e} (half-run {:.4e})",
        rep.pairing_constant, rep.pairing_constant_half
    );
    Ok(())
}

fn demo_fs_trivial(run: &RunConfig, out: &Path, input: &Path) -> Result<(), RunError> {
    let f = read_grid(input).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let system = MeyerSystem::with_accuracy(
        f.spec().dimension,
        tlwavelab::bump::DEFAULT_NODES,
        run.quad_tol,
    )
    .map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let basis =
        WaveletBasis::new(system, *f.spec()).map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    let q_prime = if run.q > 1.0 && run.q <= 2.0 {
        run.q
    } else {
        run.q / (run.q - 1.0)
    };
    let (_, rep) = trivial_fs_decomposition(&basis, &f, q_prime)
        .map_err(|e| RunError::from(anyhow::Error::new(e)))?;
    write_json(&out.join("fs_trivial.json"), &report(&rep)).map_err(RunError::from)?;
    println!(
        "fs-trivial: reconstruction rel err {:.3e}",
        rep.reconstruction_rel_error
    );
    if rep.reconstruction_rel_error > 1e-10 {
        return Err(RunError::Check(format!(
            "reconstruction error {:.3e} above 1e-10",
            rep.reconstruction_rel_error
        )));
    }
    Ok(())
}

fn cmd_demo(run: &RunConfig, out: &Path, which: &DemoCommand) -> Result<(), RunError> {
    match which {
        DemoCommand::Inclusion { q, j_floor } => demo_inclusion(run, out, *q, *j_floor),
        DemoCommand::Lacunary { q_prime, terms } => demo_lacunary(out, *q_prime, terms),
        DemoCommand::RieszChar { q, trials } => demo_riesz_char(run, out, *q, *trials),
        DemoCommand::Duality { q, trials } => demo_duality(run, out, *q, *trials),
        DemoCommand::FsTrivial { input } => demo_fs_trivial(run, out, input),
        DemoCommand::All => {
            // Independent jobs with isolated output directories, at most
            // `--jobs` running at once.
            type DemoJob<'a> = Box<dyn Fn(&Path) -> Result<(), RunError> + Send + Sync + 'a>;
            let jobs: Vec<(&str, DemoJob)> = vec![
                (
                    "inclusion",
                    Box::new(|dir: &Path| demo_inclusion(run, dir, run.q.max(2.0), -9)),
                ),
                (
                    "lacunary",
                    Box::new(|dir: &Path| {
                        demo_lacunary(dir, 2.0, &[1, 2, 3, 4, 5, 6, 7, 8])
                    }),
                ),
                (
                    "riesz-char",
                    Box::new(|dir: &Path| demo_riesz_char(run, dir, run.q.max(2.0), 20)),
                ),
                (
                    "duality",
                    Box::new(|dir: &Path| demo_duality(run, dir, run.q.max(2.0), 20)),
                ),
            ];
            let failures = std::sync::Mutex::new(Vec::<String>::new());
            let queue = std::sync::Mutex::new(jobs.into_iter().collect::<Vec<_>>());
            let workers = run.jobs.max(1);
            std::thread::scope(|scope| {
                for _ in 0..workers {
                    scope.spawn(|| loop {
                        let next = queue.lock().expect("queue lock").pop();
                        let Some((name, job)) = next else { break };
                        let dir = out.join(name);
                        let result = ensure_dir(&dir)
                            .map_err(RunError::from)
                            .and_then(|()| job(&dir));
                        if let Err(e) = result {
                            let msg = match e {
                                RunError::Check(m) => m,
                                RunError::Io(m) => m,
                                RunError::Other(e) => format!("{e:#}"),
                            };
                            failures
                                .lock()
                                .expect("failure lock")
                                .push(format!("{name}: {msg}"));
                        }
                    });
                }
            });
            let failures = failures.into_inner().expect("failure lock");
            if failures.is_empty() {
                Ok(())
            } else {
                Err(RunError::Check(failures.join("; ")))
            }
        }
    }
}
