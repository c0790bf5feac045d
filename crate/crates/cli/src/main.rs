//! voldist: classify the k-volume distortion of ℤ^m in Γ_M from the
//! spectrum of M, and verify predicted exponents with an exact
//! ℓ1-minimal-filling oracle at desk scale.

mod input;
mod report;

use clap::{Parser, Subcommand};
use serde_json::json;
use voldist_core::chains::{
    build_grid_complex, build_slab_complex, min_filling, word_to_cycle, FillingError,
    FillingOptions, GridSpec, Position, SlabSpec,
};
use voldist_core::classify::{
    classify_area, classify_top_volume, complexity_bound, ClassifyError, FillStrategy,
};
use voldist_core::fclass::evaluate;
use voldist_core::intmat::{spectral_profile, IntMatError, SpectralProfile};
use voldist_core::witness::{
    block_witness, diag_witness, jordan2_witness, measure_distortion, MeasureOptions,
    WitnessFamily,
};
use voldist_core::IntMatrix;

const EXIT_OK: i32 = 0;
const EXIT_INVALID_INPUT: i32 = 2;
const EXIT_AMBIGUOUS: i32 = 3;
const EXIT_ORACLE: i32 = 4;

#[derive(Parser)]
#[command(
    name = "voldist",
    version,
    about = "Volume distortion of Z^m in the abelian-by-cyclic group defined by an integer matrix"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct MatrixArgs {
    /// Inline matrix: JSON {"matrix": [[...]]} or whitespace rows.
    #[arg(long, conflicts_with = "matrix_file")]
    matrix: Option<String>,
    /// Path to a file holding the matrix in either format.
    #[arg(long)]
    matrix_file: Option<String>,
}

#[derive(clap::Args, Clone)]
struct CommonArgs {
    /// Working precision for certified eigenvalue moduli.
    #[arg(long, default_value_t = 256)]
    precision_bits: u32,
    /// Output format: json or text.
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the distortion of Z^m in Γ_M (area or top volume).
    Classify {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// area (k = 2) or volume (k = m).
        #[arg(long, default_value = "area")]
        mode: String,
        /// Volume dimension; defaults to 2 for area, m for volume.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Classify, then evaluate the verdict classes at a scale n.
    Eval {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "area")]
        mode: String,
        #[arg(long)]
        k: Option<u32>,
        /// Scale to evaluate at.
        #[arg(long)]
        n: f64,
        /// Lambert W tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Emit the hard-cycle witness family and its per-scale predictions.
    Witness {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated scales.
        #[arg(long, default_value = "4,8,16", value_delimiter = ',')]
        scales: Vec<u64>,
    },
    /// Measure the witness family with the exact filling oracle.
    Measure {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value = "4,8,16", value_delimiter = ',')]
        scales: Vec<u64>,
        /// Cap on slab layers above zero.
        #[arg(long, default_value_t = 8)]
        height_cap: usize,
        /// Scales needing a grid box beyond this radius are skipped.
        #[arg(long, default_value_t = 64)]
        grid_radius: i64,
        /// Grid LP is used up to this many 2-cells (beyond: winding path).
        #[arg(long, default_value_t = 300)]
        grid_lp_cells: usize,
        /// Slab LP is attempted up to this many 2-cells (0 disables).
        #[arg(long, default_value_t = 600)]
        slab_lp_cells: usize,
        /// Branch-and-bound node budget per filling.
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Complexity bound n·m^n from commutator filling areas (|det M| = 1).
    Complexity {
        #[command(flatten)]
        matrix: MatrixArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Use the staircase construction instead of the exact oracle.
        #[arg(long, default_value_t = false)]
        construction_only: bool,
    },
    /// Raw minimal filling of a cycle described in a JSON file.
    Oracle {
        /// Path to the cycle file.
        #[arg(long)]
        cycle_file: String,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = run(cli);
    std::process::exit(code);
}

fn fail(format: &str, code: i32, message: String) -> i32 {
    let report = json!({
        "version": report::version(),
        "status": "error",
        "exit_code": code,
        "error": message,
    });
    println!("{}", report::emit(&report, format));
    code
}

fn load_matrix(args: &MatrixArgs) -> Result<IntMatrix, String> {
    let text = match (&args.matrix, &args.matrix_file) {
        (Some(inline), None) => inline.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {path}: {e}"))?,
        _ => return Err("provide exactly one of --matrix or --matrix-file".into()),
    };
    input::parse_matrix(&text).map_err(|e| e.to_string())
}

fn classify_exit_code(e: &ClassifyError) -> i32 {
    match e {
        ClassifyError::Spectrum(IntMatError::AmbiguousSpectrum) => EXIT_AMBIGUOUS,
        ClassifyError::Oracle(_) => EXIT_ORACLE,
        _ => EXIT_INVALID_INPUT,
    }
}

/// Pick the witness family the spectrum calls for.
fn choose_family(matrix: &IntMatrix, profile: &SpectralProfile) -> Result<WitnessFamily, String> {
    use num_traits::ToPrimitive;
    let m = profile.dim;
    let moduli: Vec<f64> = profile
        .moduli
        .iter()
        .flat_map(|e| std::iter::repeat_n(e.interval.to_f64(), e.multiplicity))
        .collect();
    let d = profile.d_abs.to_f64().unwrap_or(f64::NAN);
    if profile.diagonalizable {
        let mut family = diag_witness(&moduli, d, m as u32).map_err(|e| e.to_string())?;
        if m == 2 {
            family.matrix = Some(matrix.clone());
        }
        return Ok(family);
    }
    if profile.all_on_circle() {
        let blocks = profile
            .unipotent_block_sizes
            .clone()
            .expect("all-on-circle profile carries blocks");
        let mut family = block_witness(&blocks, 2).map_err(|e| e.to_string())?;
        if m == 2 {
            // Measure in the slab of M itself.
            family.matrix = Some(matrix.clone());
        }
        return Ok(family);
    }
    // Off-circle non-diagonalizable: the 2x2 shear witness when M is one.
    if m == 2 {
        let p = matrix.char_poly();
        let coeffs = p.coeffs_i64();
        // (x - λ)²  =  x² - 2λx + λ².
        if coeffs.len() == 3 && coeffs[1] % 2 == 0 {
            let lambda = -coeffs[1] / 2;
            if lambda >= 2 && lambda * lambda == coeffs[0] {
                return jordan2_witness(lambda as u64).map_err(|e| e.to_string());
            }
        }
    }
    // Fall back to the diagonalizable-reduction family on the moduli.
    let mut family = diag_witness(&moduli, d, m as u32).map_err(|e| e.to_string())?;
    family
        .notes
        .push("non-diagonalizable input: witness follows the diagonalizable reduction".into());
    if m == 2 {
        family.matrix = Some(matrix.clone());
    }
    Ok(family)
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Classify { matrix, common, mode, k } => {
            let m = match load_matrix(&matrix) {
                Ok(m) => m,
                Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e),
            };
            run_classify(&m, &common, &mode, k, None)
        }
        Command::Eval { matrix, common, mode, k, n, tol } => {
            let m = match load_matrix(&matrix) {
                Ok(m) => m,
                Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e),
            };
            run_classify(&m, &common, &mode, k, Some((n, tol)))
        }
        Command::Witness { matrix, common, scales } => {
            let m = match load_matrix(&matrix) {
                Ok(m) => m,
                Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e),
            };
            let profile = match spectral_profile(&m, common.precision_bits) {
                Ok(p) => p,
                Err(IntMatError::AmbiguousSpectrum) => {
                    return fail(&common.format, EXIT_AMBIGUOUS, "ambiguous spectrum".into())
                }
                Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e.to_string()),
            };
            let family = match choose_family(&m, &profile) {
                Ok(f) => f,
                Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e),
            };
            let report = json!({
                "version": report::version(),
                "command": "witness",
                "input": { "matrix": report::matrix_json(&m), "scales": scales },
                "spectral": report::spectral_json(&m, &profile),
                "family": report::family_json(&family, &scales),
                "status": "ok",
            });
            println!("{}", report::emit(&report, &common.format));
            EXIT_OK
        }
        Command::Measure {
            matrix,
            common,
            scales,
            height_cap,
            grid_radius,
            grid_lp_cells,
            slab_lp_cells,
            budget,
        } => {
            let m = match load_matrix(&matrix) {
                Ok(m) => m,
                Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e),
            };
            let profile = match spectral_profile(&m, common.precision_bits) {
                Ok(p) => p,
                Err(IntMatError::AmbiguousSpectrum) => {
                    return fail(&common.format, EXIT_AMBIGUOUS, "ambiguous spectrum".into())
                }
                Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e.to_string()),
            };
            let family = match choose_family(&m, &profile) {
                Ok(f) => f,
                Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e),
            };
            let mut options = MeasureOptions::default();
            options.height_cap = height_cap;
            options.grid_radius_cap = grid_radius;
            options.grid_lp_max_cells = grid_lp_cells;
            options.slab_lp_max_cells = slab_lp_cells;
            options.filling.node_budget = budget;
            let measurement = match measure_distortion(&family, &scales, &options) {
                Ok(r) => r,
                Err(e) => return fail(&common.format, EXIT_ORACLE, e.to_string()),
            };
            let partial = measurement.partial;
            let report = json!({
                "version": report::version(),
                "command": "measure",
                "input": {
                    "matrix": report::matrix_json(&m),
                    "scales": scales,
                    "height_cap": height_cap,
                },
                "spectral": report::spectral_json(&m, &profile),
                "family": report::family_json(&family, &scales),
                "measurement": report::measurement_json(&measurement),
                "status": if partial { "partial" } else { "ok" },
            });
            println!("{}", report::emit(&report, &common.format));
            if partial {
                EXIT_ORACLE
            } else {
                EXIT_OK
            }
        }
        Command::Complexity { matrix, common, construction_only } => {
            let m = match load_matrix(&matrix) {
                Ok(m) => m,
                Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e),
            };
            let strategy = if construction_only {
                FillStrategy::ConstructionOnly
            } else {
                FillStrategy::Oracle(FillingOptions::default())
            };
            match complexity_bound(&m, &strategy) {
                Ok((m_cx, class)) => {
                    let report = json!({
                        "version": report::version(),
                        "command": "complexity",
                        "input": { "matrix": report::matrix_json(&m) },
                        "complexity": {
                            "m_cx": m_cx,
                            "upper_bound_class": class.to_string(),
                            "exact": !construction_only,
                        },
                        "status": "ok",
                    });
                    println!("{}", report::emit(&report, &common.format));
                    EXIT_OK
                }
                Err(e) => fail(&common.format, classify_exit_code(&e), e.to_string()),
            }
        }
        Command::Oracle { cycle_file, common, budget } => run_oracle(&cycle_file, &common, budget),
    }
}

fn run_classify(
    m: &IntMatrix,
    common: &CommonArgs,
    mode: &str,
    k: Option<u32>,
    eval_at: Option<(f64, f64)>,
) -> i32 {
    let profile = match spectral_profile(m, common.precision_bits) {
        Ok(p) => p,
        Err(IntMatError::AmbiguousSpectrum) => {
            return fail(
                &common.format,
                EXIT_AMBIGUOUS,
                "eigenvalue modulus straddles 1 at the requested precision".into(),
            )
        }
        Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e.to_string()),
    };
    let dim = m.dim() as u32;
    let (verdict, k_used) = match mode {
        "area" => {
            let k = k.unwrap_or(2);
            if k != 2 {
                return fail(
                    &common.format,
                    EXIT_INVALID_INPUT,
                    "area distortion is the k = 2 case".into(),
                );
            }
            (classify_area(m, common.precision_bits), 2)
        }
        "volume" => {
            let k = k.unwrap_or(dim);
            if k != dim {
                return fail(
                    &common.format,
                    EXIT_INVALID_INPUT,
                    format!("top volume requires k = m = {dim}"),
                );
            }
            (classify_top_volume(m, common.precision_bits), dim)
        }
        other => {
            return fail(
                &common.format,
                EXIT_INVALID_INPUT,
                format!("unknown mode {other}; use area or volume"),
            )
        }
    };
    let verdict = match verdict {
        Ok(v) => v,
        Err(e) => return fail(&common.format, classify_exit_code(&e), e.to_string()),
    };
    let evaluation = eval_at.map(|(n, tol)| {
        let lower = evaluate(&verdict.lower, n, tol).ok();
        let upper = evaluate(&verdict.upper, n, tol).ok();
        json!({ "n": n, "tol": tol, "lower": lower, "upper": upper })
    });
    let report = json!({
        "version": report::version(),
        "command": if eval_at.is_some() { "eval" } else { "classify" },
        "input": {
            "matrix": report::matrix_json(m),
            "dim": m.dim(),
            "k": k_used,
            "mode": mode,
            "precision_bits": common.precision_bits,
        },
        "spectral": report::spectral_json(m, &profile),
        "verdict": report::verdict_json(&verdict),
        "evaluation": evaluation,
        "status": "ok",
    });
    println!("{}", report::emit(&report, &common.format));
    EXIT_OK
}

fn run_oracle(cycle_file: &str, common: &CommonArgs, budget: usize) -> i32 {
    let text = match std::fs::read_to_string(cycle_file) {
        Ok(t) => t,
        Err(e) => {
            return fail(
                &common.format,
                EXIT_INVALID_INPUT,
                format!("cannot read {cycle_file}: {e}"),
            )
        }
    };
    let cycle = match input::parse_cycle_file(&text) {
        Ok(c) => c,
        Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e.to_string()),
    };
    let (complex, basepoint) = match &cycle.complex {
        input::ComplexSpec::Grid { dim, radius } => {
            let complex = match build_grid_complex(&GridSpec::new(*dim, *radius, 2)) {
                Ok(c) => c,
                Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e.to_string()),
            };
            let base = cycle
                .basepoint_grid
                .clone()
                .unwrap_or_else(|| vec![0; *dim]);
            (complex, Position::Grid(base))
        }
        input::ComplexSpec::Slab { matrix, radius, height } => {
            let spec = match SlabSpec::new(matrix, *radius, *height) {
                Ok(s) => s,
                Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e.to_string()),
            };
            let complex = match build_slab_complex(&spec) {
                Ok(c) => c,
                Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e.to_string()),
            };
            let (layer, pos) = cycle.basepoint_slab.unwrap_or((0, [0, 0]));
            (complex, Position::Slab { layer, pos })
        }
    };
    let z = match word_to_cycle(&cycle.word, &complex, &basepoint) {
        Ok(z) => z,
        Err(e) => return fail(&common.format, EXIT_INVALID_INPUT, e.to_string()),
    };
    let mut options = FillingOptions::default();
    options.node_budget = budget;
    match min_filling(&complex, &z, &options) {
        Ok(result) => {
            let chain: Vec<serde_json::Value> = result
                .chain
                .iter()
                .map(|(cell, coeff)| {
                    json!({
                        "cell": complex.cell(result.chain.dim, cell),
                        "coeff": coeff,
                    })
                })
                .collect();
            let report = json!({
                "version": report::version(),
                "command": "oracle",
                "input": { "cycle_volume": z.volume(), "cells": complex.total_cells() },
                "filling": {
                    "volume": result.volume,
                    "optimal": result.optimal,
                    "lp_bound": result.lp_bound.to_string(),
                    "chain": chain,
                },
                "status": if result.optimal { "ok" } else { "partial" },
            });
            println!("{}", report::emit(&report, &common.format));
            if result.optimal {
                EXIT_OK
            } else {
                EXIT_ORACLE
            }
        }
        Err(
            e @ (FillingError::Infeasible
            | FillingError::BudgetExhausted
            | FillingError::PivotLimit),
        ) => fail(&common.format, EXIT_ORACLE, e.to_string()),
        Err(e) => fail(&common.format, EXIT_INVALID_INPUT, e.to_string()),
    }
}
