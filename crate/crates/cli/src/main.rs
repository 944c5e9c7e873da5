//! `snsigma`: evaluation, extremal analysis, figure-data emission,
//! verification suites and spectral checks for sigma(u,m) = |sn(K(m)u|m)|
//! with complex parameter m.
//!
//! Exit codes: 0 success, 1 failed verification or numeric non-convergence,
//! 2 usage or validation errors.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use output::{json_array, json_complex, Csv, JsonObject};
use snsigma_core as core;
use snsigma_core::{CutSide, Parameter, Regime, Window};

#[derive(Parser)]
#[command(
    name = "snsigma",
    version,
    about = "Jacobian elliptic functions with complex parameter m and the extremal analysis of sigma(u,m) = |sn(K(m)u|m)|",
    after_help = "All numeric output uses 17 significant digits in lowercase scientific \
                  notation; identical invocations produce byte-identical output."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Above,
    Below,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Identities,
    Theorem1,
    Asymptotics,
    Spectral,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate K, K', the nome and sn, cn, dn, sigma at one (u, m).
    Eval {
        /// Argument scale: the elliptic argument is K(m) u, u in (0, 1).
        #[arg(long)]
        u: f64,
        /// Re m.
        #[arg(long = "m-re")]
        m_re: f64,
        /// Im m.
        #[arg(long = "m-im", default_value_t = 0.0)]
        m_im: f64,
        /// Branch-cut side for real m > 1 (default: above).
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Sample sigma(u, .) over a rectangle and extract the sigma = 1
    /// contour. Writes the grid CSV to OUT and the contour CSV next to it
    /// with an `_contour` suffix.
    Region {
        #[arg(long)]
        u: f64,
        /// Window as X0,X1,Y0,Y1.
        #[arg(long)]
        window: String,
        /// Grid step.
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// CSV of (u, m_tilde, m_star, sigma_star) over a u-grid. For
    /// u <= 1/2 the columns hold the limit values (1, 1, 1).
    Maxima {
        #[arg(long = "u-min")]
        u_min: f64,
        #[arg(long = "u-max")]
        u_max: f64,
        #[arg(long = "u-step")]
        u_step: f64,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate the global maximum of sigma(u, m).
    GlobalMax {
        /// Stop refining when both coordinate steps fall below this.
        #[arg(long, default_value_t = 1e-8)]
        refine: f64,
    },
    /// CSV profile of sigma(u, .) on a real interval of m.
    Profile {
        #[arg(long)]
        u: f64,
        #[arg(long = "m-min", default_value_t = 1.0)]
        m_min: f64,
        #[arg(long = "m-max", default_value_t = 2.0)]
        m_max: f64,
        #[arg(long)]
        step: f64,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and emit a JSON report; exits 0 only if
    /// every check passes.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
    },
    /// Solution sequence and difference-equation residuals of the Jacobi
    /// matrix J(k) at spectral parameter z.
    Spectral {
        #[arg(long = "k-re")]
        k_re: f64,
        #[arg(long = "k-im", default_value_t = 0.0)]
        k_im: f64,
        #[arg(long = "z-re")]
        z_re: f64,
        #[arg(long = "z-im", default_value_t = 0.0)]
        z_im: f64,
        /// Truncation length of the sequence.
        #[arg(long = "n-max", default_value_t = 24)]
        n_max: usize,
        /// Gauss-Legendre order per quadrature panel.
        #[arg(long, default_value_t = 16)]
        order: usize,
    },
}

/// Validation failure (exit 2) as opposed to numeric failure (exit 1).
struct UsageError(String);

fn validated(cond: bool, msg: &str) -> Result<(), UsageError> {
    if cond {
        Ok(())
    } else {
        Err(UsageError(msg.to_string()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn numeric_fail(e: core::Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn run(command: Command) -> Result<ExitCode, UsageError> {
    match command {
        Command::Eval { u, m_re, m_im, side } => cmd_eval(u, m_re, m_im, side),
        Command::Region { u, window, step, out } => cmd_region(u, &window, step, &out),
        Command::Maxima { u_min, u_max, u_step, out } => cmd_maxima(u_min, u_max, u_step, out),
        Command::GlobalMax { refine } => cmd_global_max(refine),
        Command::Profile { u, m_min, m_max, step, out } => {
            cmd_profile(u, m_min, m_max, step, out)
        }
        Command::Verify { suite } => cmd_verify(suite),
        Command::Spectral { k_re, k_im, z_re, z_im, n_max, order } => {
            cmd_spectral(k_re, k_im, z_re, z_im, n_max, order)
        }
    }
}

fn parse_parameter(m_re: f64, m_im: f64, side: Option<SideArg>) -> Result<Parameter, UsageError> {
    let m = Complex64::new(m_re, m_im);
    let on_cut = m_im == 0.0 && m_re > 1.0;
    match side {
        None => Ok(Parameter::new(m)),
        Some(_) if !on_cut => Err(UsageError(format!(
            "--side only applies to real m > 1; m = {m} is off the cut"
        ))),
        Some(SideArg::Above) => Ok(Parameter::with_side(m, CutSide::Above).unwrap()),
        Some(SideArg::Below) => Ok(Parameter::with_side(m, CutSide::Below).unwrap()),
    }
}

fn cmd_eval(u: f64, m_re: f64, m_im: f64, side: Option<SideArg>) -> Result<ExitCode, UsageError> {
    validated(0.0 < u && u < 1.0, "--u must lie in (0, 1)")?;
    let p = parse_parameter(m_re, m_im, side)?;

    let result = (|| -> core::Result<String> {
        let sig = core::sigma(u, &p)?;
        let (ctx_k, ctx_kp, ctx_q, s, c, d) = match p.regime() {
            Regime::One => {
                // limit values: sn -> 1, cn -> 0, dn -> 0, K diverges
                let ctx = core::build_context(p)?;
                (
                    ctx.k,
                    ctx.kprime,
                    ctx.q,
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                )
            }
            Regime::Cut => {
                let ctx = core::build_context(p)?;
                let t = core::cut_triple(u, m_re, p.side())?;
                (ctx.k, ctx.kprime, ctx.q, t.s, t.c, t.d)
            }
            _ => {
                let ctx = core::build_context(p)?;
                let t = core::jacobi_triple(u, &ctx)?;
                (ctx.k, ctx.kprime, ctx.q, t.s, t.c, t.d)
            }
        };
        Ok(JsonObject::new()
            .complex("K", ctx_k)
            .complex("Kprime", ctx_kp)
            .complex("q", ctx_q)
            .complex("sn", s)
            .complex("cn", c)
            .complex("dn", d)
            .num("sigma", sig.sigma)
            .render())
    })();
    match result {
        Ok(json) => {
            println!("{json}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => Ok(numeric_fail(e)),
    }
}

fn contour_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned());
    match (stem, out.extension()) {
        (Some(stem), Some(ext)) => {
            out.with_file_name(format!("{stem}_contour.{}", ext.to_string_lossy()))
        }
        _ => {
            let mut name = out.as_os_str().to_os_string();
            name.push("_contour");
            PathBuf::from(name)
        }
    }
}

fn cmd_region(u: f64, window: &str, step: f64, out: &Path) -> Result<ExitCode, UsageError> {
    validated(0.0 < u && u < 1.0, "--u must lie in (0, 1)")?;
    let parts: Vec<f64> = window
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| UsageError(format!("--window must be X0,X1,Y0,Y1; got `{window}`")))?;
    validated(parts.len() == 4, "--window must have exactly four components")?;
    let w = Window { x0: parts[0], x1: parts[1], y0: parts[2], y1: parts[3] };
    validated(w.x1 > w.x0 && w.y1 > w.y0, "--window is degenerate")?;
    validated(step > 0.0, "--step must be > 0")?;

    let grid = match core::region_scan(u, w, step) {
        Ok(g) => g,
        Err(e) => return Ok(numeric_fail(e)),
    };
    let mut grid_csv = Csv::new("re_m,im_m,sigma");
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let m = grid.node(i, j);
            grid_csv.row(&[m.re, m.im, grid.value(i, j)]);
        }
    }
    let mut contour_csv = Csv::new("polyline_id,vertex_index,re_m,im_m");
    for (pid, poly) in grid.contours.iter().enumerate() {
        for (vid, pt) in poly.points.iter().enumerate() {
            contour_csv.row_with_index(&[pid, vid], &[pt.re, pt.im]);
        }
    }
    let write = |path: &Path, data: String| -> Result<(), UsageError> {
        fs::write(path, data).map_err(|e| UsageError(format!("cannot write {path:?}: {e}")))
    };
    write(out, grid_csv.finish())?;
    write(&contour_path(out), contour_csv.finish())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_maxima(
    u_min: f64,
    u_max: f64,
    u_step: f64,
    out: Option<PathBuf>,
) -> Result<ExitCode, UsageError> {
    validated(
        0.0 < u_min && u_min <= u_max && u_max < 1.0,
        "--u-min/--u-max must satisfy 0 < u-min <= u-max < 1",
    )?;
    validated(u_step > 0.0, "--u-step must be > 0")?;
    let mut csv = Csv::new("u,m_tilde,m_star,sigma_star");
    let n = ((u_max - u_min) / u_step).floor() as usize + 1;
    for i in 0..n {
        let u = u_min + u_step * i as f64;
        let row = (|| -> core::Result<[f64; 4]> {
            if u <= 0.5 {
                // the limit values at the degenerate end
                Ok([u, 1.0, 1.0, 1.0])
            } else {
                let mt = core::m_tilde(u)?;
                let mx = core::max_on_cut(u)?;
                Ok([u, mt.location, mx.location, mx.value])
            }
        })();
        match row {
            Ok(r) => csv.row(&r),
            Err(e) => return Ok(numeric_fail(e)),
        }
    }
    emit(csv.finish(), out)
}

fn cmd_global_max(refine: f64) -> Result<ExitCode, UsageError> {
    validated(refine > 0.0, "--refine must be > 0")?;
    match core::global_max(0.505, 0.995, 0.005, refine) {
        Ok(g) => {
            let json = JsonObject::new()
                .num("u_star", g.u_star)
                .num("m_star", g.m_star)
                .num("sigma_star", g.sigma_star)
                .render();
            println!("{json}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => Ok(numeric_fail(e)),
    }
}

fn cmd_profile(
    u: f64,
    m_min: f64,
    m_max: f64,
    step: f64,
    out: Option<PathBuf>,
) -> Result<ExitCode, UsageError> {
    validated(0.0 < u && u < 1.0, "--u must lie in (0, 1)")?;
    validated(step > 0.0, "--step must be > 0")?;
    validated(m_max > m_min, "--m-max must exceed --m-min")?;
    let mut csv = Csv::new("m,sigma");
    let n = ((m_max - m_min) / step).floor() as usize + 1;
    for i in 0..n {
        let m = m_min + step * i as f64;
        match core::sigma(u, &Parameter::from_re(m)) {
            Ok(s) => csv.row(&[m, s.sigma]),
            Err(e) => return Ok(numeric_fail(e)),
        }
    }
    emit(csv.finish(), out)
}

fn emit(data: String, out: Option<PathBuf>) -> Result<ExitCode, UsageError> {
    match out {
        Some(path) => {
            fs::write(&path, data)
                .map_err(|e| UsageError(format!("cannot write {path:?}: {e}")))?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            print!("{data}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_verify(suite: SuiteArg) -> Result<ExitCode, UsageError> {
    let reports = match suite {
        SuiteArg::Identities => core::run_identities(),
        SuiteArg::Theorem1 => core::run_theorem1(),
        SuiteArg::Asymptotics => core::run_asymptotics(),
        SuiteArg::Spectral => core::run_spectral(),
        SuiteArg::All => core::run_all(),
    };
    match reports {
        Ok(reports) => {
            let items = reports.iter().map(|r| {
                JsonObject::new()
                    .raw("check_name", format!("\"{}\"", r.name))
                    .raw("samples", r.samples.to_string())
                    .num("max_error", r.max_error)
                    .raw("pass", r.pass.to_string())
                    .render()
            });
            println!("{}", json_array(items));
            if reports.iter().all(|r| r.pass) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Err(e) => Ok(numeric_fail(e)),
    }
}

fn cmd_spectral(
    k_re: f64,
    k_im: f64,
    z_re: f64,
    z_im: f64,
    n_max: usize,
    order: usize,
) -> Result<ExitCode, UsageError> {
    let k = Complex64::new(k_re, k_im);
    let z = Complex64::new(z_re, z_im);
    validated(k.norm() <= 1.0, "--k must lie in the closed unit disk")?;
    validated(
        k != Complex64::new(1.0, 0.0) && k != Complex64::new(-1.0, 0.0),
        "--k = +/-1 is excluded",
    )?;
    validated(n_max >= 3, "--n-max must be >= 3")?;
    validated((1..=64).contains(&order), "--order must be in 1..=64")?;

    let result = (|| -> core::Result<String> {
        let rule = core::QuadratureRule::gauss_legendre(order, 4)?;
        let vs = core::v_sequence_with_rule(z, k, n_max, &rule)?;
        let (rows, rhs) = core::jacobi_residual_with_rule(k, z, n_max, &rule)?;
        let v_json = json_array(vs.entries.iter().map(|e| json_complex(*e)));
        let r_json = json_array(rows.iter().map(|e| json_complex(*e)));
        Ok(JsonObject::new()
            .raw("v", v_json)
            .raw("residuals", r_json)
            .complex("rhs_check", rhs)
            .render())
    })();
    match result {
        Ok(json) => {
            println!("{json}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => Ok(numeric_fail(e)),
    }
}
