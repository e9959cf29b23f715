//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 parse, 3 empty result,
//! 4 dimension or guard violation, 5 optimizer failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::indexes::{
    apply_linear_map, jl_distortion, random_projection, CumulantIndex, LogCoshIndex,
    ProjectionIndex, VarianceIndex,
};
use crate::linalg::DataMatrix;
use crate::manifest::RunManifest;
use crate::plot;
use crate::preprocess::{
    filter_genes, join_labels, quantile_normalize, CountMatrix, DenseTable, LabelTable,
};
use crate::pursuit::{embed, pca, prepare, pursue_k, PursuitConfig};
use crate::spectra::{
    df_projection_experiment, esd_vs_mp_distance, median, simulate_wishart_esd, Marginal, MpParams,
    ESD_BINS,
};
use crate::synth::{two_clusters, TwoClusterSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "projpursuit",
    version,
    about = "Projection pursuit, PCA and spectral diagnostics for dense expression matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Filter sparse genes, then quantile-normalize cells.
    Preprocess {
        in_csv: PathBuf,
        out_csv: PathBuf,
        /// Remove genes that are zero in more than this fraction of cells.
        #[arg(long, default_value_t = 0.8)]
        zero_frac: f64,
        /// Only filter; skip quantile normalization.
        #[arg(long)]
        skip_quantile: bool,
    },
    /// Principal component embedding.
    Pca {
        in_csv: PathBuf,
        out_csv: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// `cell_id,label` CSV used to color the plot.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Write an SVG scatter plot here (k = 2 only).
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Projection pursuit embedding.
    Pp {
        in_csv: PathBuf,
        out_csv: PathBuf,
        #[arg(long, value_enum, default_value_t = IndexName::Logcosh)]
        index: IndexName,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Log-cosh contrast parameter, in [1, 2].
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Simulated Wishart spectrum against the Marcenko-Pastur law.
    Spectrum {
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        out_csv: PathBuf,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Gaussianity of random one-dimensional projections.
    Dfcheck {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 500)]
        d: usize,
        #[arg(long, default_value_t = 100)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = MarginalName::Uniform)]
        marginal: MarginalName,
    },
    /// Pairwise distance distortion of a Gaussian random projection.
    Jl {
        in_csv: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the two-cluster demonstration data set and its labels.
    Synth {
        out_csv: PathBuf,
        labels_csv: PathBuf,
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        d: usize,
        #[arg(long, default_value_t = 4.0)]
        separation: f64,
        #[arg(long, default_value_t = 10.0)]
        spread: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IndexName {
    Logcosh,
    Cumulant,
    Variance,
}

impl IndexName {
    fn as_str(self) -> &'static str {
        match self {
            IndexName::Logcosh => "logcosh",
            IndexName::Cumulant => "cumulant",
            IndexName::Variance => "variance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MarginalName {
    Uniform,
    Laplace,
    Exponential,
    Rademacher,
    Gaussian,
}

impl From<MarginalName> for Marginal {
    fn from(m: MarginalName) -> Self {
        match m {
            MarginalName::Uniform => Marginal::Uniform,
            MarginalName::Laplace => Marginal::Laplace,
            MarginalName::Exponential => Marginal::Exponential,
            MarginalName::Rademacher => Marginal::Rademacher,
            MarginalName::Gaussian => Marginal::Gaussian,
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Preprocess {
            in_csv,
            out_csv,
            zero_frac,
            skip_quantile,
        } => cmd_preprocess(&in_csv, &out_csv, zero_frac, skip_quantile, out),
        Command::Pca {
            in_csv,
            out_csv,
            k,
            labels,
            plot,
        } => cmd_pca(
            &in_csv,
            &out_csv,
            k,
            labels.as_deref(),
            plot.as_deref(),
            out,
            err,
        ),
        Command::Pp {
            in_csv,
            out_csv,
            index,
            k,
            alpha,
            restarts,
            seed,
            labels,
            plot,
        } => cmd_pp(
            &PpArgs {
                in_csv: &in_csv,
                out_csv: &out_csv,
                index,
                k,
                alpha,
                restarts,
                seed,
                labels: labels.as_deref(),
                plot: plot.as_deref(),
            },
            out,
            err,
        ),
        Command::Spectrum {
            n,
            d,
            seed,
            out_csv,
            plot,
        } => cmd_spectrum(n, d, seed, &out_csv, plot.as_deref(), out),
        Command::Dfcheck {
            n,
            d,
            m,
            seed,
            marginal,
        } => cmd_dfcheck(n, d, m, seed, marginal.into(), out),
        Command::Jl {
            in_csv,
            r,
            delta,
            seed,
        } => cmd_jl(&in_csv, r, delta, seed, out),
        Command::Synth {
            out_csv,
            labels_csv,
            n,
            d,
            separation,
            spread,
            seed,
        } => cmd_synth(
            &out_csv,
            &labels_csv,
            TwoClusterSpec {
                n,
                d,
                separation,
                spread,
            },
            seed,
            out,
        ),
    }
}

fn cmd_preprocess(
    in_csv: &Path,
    out_csv: &Path,
    zero_frac: f64,
    skip_quantile: bool,
    out: &mut dyn Write,
) -> Result<()> {
    let raw = CountMatrix::read_csv(std::fs::File::open(in_csv)?)?;
    // order is fixed: filter first, then normalize the survivors
    let filtered = filter_genes(&raw, zero_frac)?;
    let result = if skip_quantile {
        filtered
    } else {
        quantile_normalize(&filtered)?
    };
    write_file(out_csv, |w| result.write_csv(w))?;
    RunManifest::new("preprocess")
        .param("zero_frac", zero_frac)
        .param("skip_quantile", skip_quantile)
        .param(
            "pipeline",
            if skip_quantile {
                "filter"
            } else {
                "filter,quantile"
            },
        )
        .input(in_csv)?
        .write_next_to(out_csv)?;
    writeln!(
        out,
        "kept {} of {} genes, {} cells",
        result.n_genes(),
        raw.n_genes(),
        result.n_cells()
    )?;
    Ok(())
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut std::io::BufWriter<std::fs::File>) -> Result<()>,
) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Writes `cell_id,dim1..dimk`.
pub fn write_embedding<W: Write>(out: W, cell_ids: &[String], z: &DataMatrix) -> Result<()> {
    let table = DenseTable {
        row_ids: cell_ids.to_vec(),
        col_ids: (1..=z.n_cols()).map(|j| format!("dim{j}")).collect(),
        values: z.to_row_major(),
    };
    table.write_csv(out)
}

fn load_labels(path: Option<&Path>, cell_ids: &[String]) -> Result<Option<Vec<String>>> {
    match path {
        Some(p) => Ok(Some(join_labels(cell_ids, &LabelTable::load(p)?)?)),
        None => Ok(None),
    }
}

fn maybe_plot(
    plot: Option<&Path>,
    z: &DataMatrix,
    labels: Option<&[String]>,
    title: &str,
    err: &mut dyn Write,
) -> Result<()> {
    let Some(path) = plot else { return Ok(()) };
    if z.n_cols() != 2 {
        writeln!(err, "note: --plot needs k = 2, skipping plot")?;
        return Ok(());
    }
    let points: Vec<(f64, f64)> = (0..z.n_rows())
        .map(|i| (z.get(i, 0), z.get(i, 1)))
        .collect();
    std::fs::write(path, plot::scatter_svg(&points, labels, title))?;
    Ok(())
}

fn cmd_pca(
    in_csv: &Path,
    out_csv: &Path,
    k: usize,
    labels_file: Option<&Path>,
    plot: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<()> {
    let table = DenseTable::load(in_csv)?;
    let labels = load_labels(labels_file, &table.row_ids)?;
    let x = table.to_data_matrix()?;
    let fit = pca(&x, k)?;
    let z = embed(&x.centered(), &fit.components)?;
    write_file(out_csv, |w| write_embedding(w, &table.row_ids, &z))?;
    maybe_plot(plot, &z, labels.as_deref(), "PCA", err)?;

    let mut manifest = RunManifest::new("pca").param("k", k).input(in_csv)?;
    if let Some(p) = labels_file {
        manifest = manifest.input(p)?;
    }
    if let Some(p) = plot {
        manifest = manifest.param("plot", p.display());
    }
    manifest.write_next_to(out_csv)?;
    for (j, v) in fit.explained_variances.iter().enumerate() {
        writeln!(out, "dim{}: explained variance {v}", j + 1)?;
    }
    Ok(())
}

struct PpArgs<'a> {
    in_csv: &'a Path,
    out_csv: &'a Path,
    index: IndexName,
    k: usize,
    alpha: f64,
    restarts: usize,
    seed: u64,
    labels: Option<&'a Path>,
    plot: Option<&'a Path>,
}

fn cmd_pp(args: &PpArgs<'_>, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let table = DenseTable::load(args.in_csv)?;
    let labels = load_labels(args.labels, &table.row_ids)?;
    let x = table.to_data_matrix()?;
    if args.k == 0 || args.k > x.n_cols() {
        return Err(Error::Dimension(format!(
            "k = {} but the input has {} features",
            args.k,
            x.n_cols()
        )));
    }
    let index: Box<dyn ProjectionIndex> = match args.index {
        IndexName::Logcosh => Box::new(LogCoshIndex::new(args.alpha)?),
        IndexName::Cumulant => Box::new(CumulantIndex),
        IndexName::Variance => Box::new(VarianceIndex),
    };
    let prepared = prepare(&x, index.preparation())?;
    let cfg = PursuitConfig {
        restarts: args.restarts,
        seed: args.seed,
        max_k: x.n_cols(),
        ..Default::default()
    };
    let result = pursue_k(&prepared.data, &index, args.k, &cfg)?;
    let z = embed(&prepared.data, &result.directions)?;
    write_file(args.out_csv, |w| write_embedding(w, &table.row_ids, &z))?;
    maybe_plot(
        args.plot,
        &z,
        labels.as_deref(),
        &format!("PP ({})", args.index.as_str()),
        err,
    )?;

    let mut manifest = RunManifest::new("pp")
        .param("index", args.index.as_str())
        .param("k", args.k)
        .param("alpha", args.alpha)
        .param("restarts", args.restarts)
        .param("max_iters", cfg.max_iters)
        .param("step_init", cfg.step_init)
        .param("tol", cfg.tol)
        .seed(args.seed)
        .input(args.in_csv)?;
    if let Some(p) = args.labels {
        manifest = manifest.input(p)?;
    }
    if let Some(p) = args.plot {
        manifest = manifest.param("plot", p.display());
    }
    manifest.write_next_to(args.out_csv)?;
    for (j, (v, r)) in result.values.iter().zip(&result.chosen_restart).enumerate() {
        writeln!(out, "dim{}: index {v} (restart {r})", j + 1)?;
    }
    Ok(())
}

fn cmd_spectrum(
    n: usize,
    d: usize,
    seed: u64,
    out_csv: &Path,
    plot: Option<&Path>,
    out: &mut dyn Write,
) -> Result<()> {
    let sample = simulate_wishart_esd(n, d, seed)?;
    let distance = esd_vs_mp_distance(&sample)?;
    write_file(out_csv, |w| {
        writeln!(w, "index,eigenvalue")?;
        for (i, v) in sample.eigenvalues().iter().enumerate() {
            writeln!(w, "{i},{v}")?;
        }
        Ok(())
    })?;
    if let Some(path) = plot {
        let p = MpParams::new(sample.gamma())?;
        let upper = 1.1 * p.b_plus;
        let width = upper / ESD_BINS as f64;
        let edges: Vec<f64> = (0..=ESD_BINS).map(|j| j as f64 * width).collect();
        let mut counts = vec![0usize; ESD_BINS];
        for &v in sample.eigenvalues() {
            if (0.0..=upper).contains(&v) {
                counts[((v / width) as usize).min(ESD_BINS - 1)] += 1;
            }
        }
        let densities: Vec<f64> = counts
            .iter()
            .map(|&c| c as f64 / (d as f64 * width))
            .collect();
        let curve: Vec<(f64, f64)> = (0..=400)
            .map(|i| {
                let k = upper * i as f64 / 400.0;
                (k, p.density(k))
            })
            .collect();
        let title = format!("spectrum n={n} d={d} vs Marcenko-Pastur");
        std::fs::write(
            path,
            plot::histogram_density_svg(&edges, &densities, &curve, &title),
        )?;
    }
    let mut manifest = RunManifest::new("spectrum")
        .param("n", n)
        .param("d", d)
        .seed(seed);
    if let Some(p) = plot {
        manifest = manifest.param("plot", p.display());
    }
    manifest.write_next_to(out_csv)?;
    writeln!(out, "L1 distance to Marcenko-Pastur: {distance}")?;
    Ok(())
}

fn cmd_dfcheck(
    n: usize,
    d: usize,
    m: usize,
    seed: u64,
    marginal: Marginal,
    out: &mut dyn Write,
) -> Result<()> {
    let ks = df_projection_experiment(n, d, m, seed, marginal)?;
    let min = ks.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ks.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    writeln!(
        out,
        "KS over {m} directions: median {} min {min} max {max}",
        median(&ks)
    )?;
    Ok(())
}

fn cmd_jl(in_csv: &Path, r: usize, delta: f64, seed: u64, out: &mut dyn Write) -> Result<()> {
    let x = DenseTable::load(in_csv)?.to_data_matrix()?;
    let a = random_projection(x.n_cols(), r, seed)?;
    let z = apply_linear_map(&x, &a)?;
    let dist = jl_distortion(&x, &z)?;
    let verdict = if dist.max_relative <= delta {
        "PASS"
    } else {
        "FAIL"
    };
    writeln!(
        out,
        "max relative distortion {} (delta {delta}): {verdict}; sum of absolute gaps {}; skipped pairs {}",
        dist.max_relative, dist.sum_abs, dist.skipped_pairs
    )?;
    Ok(())
}

fn cmd_synth(
    out_csv: &Path,
    labels_csv: &Path,
    spec: TwoClusterSpec,
    seed: u64,
    out: &mut dyn Write,
) -> Result<()> {
    let c = two_clusters(spec, seed)?;
    let ids: Vec<String> = (0..spec.n).map(|i| format!("cell{i}")).collect();
    let table = DenseTable {
        row_ids: ids.clone(),
        col_ids: (1..=spec.d).map(|j| format!("x{j}")).collect(),
        values: c.data.to_row_major(),
    };
    write_file(out_csv, |w| table.write_csv(w))?;
    write_file(labels_csv, |w| {
        writeln!(w, "cell_id,label")?;
        for (id, l) in ids.iter().zip(&c.labels) {
            writeln!(w, "{id},cluster{l}")?;
        }
        Ok(())
    })?;
    RunManifest::new("synth")
        .param("n", spec.n)
        .param("d", spec.d)
        .param("separation", spec.separation)
        .param("spread", spec.spread)
        .param("labels", labels_csv.display())
        .seed(seed)
        .write_next_to(out_csv)?;
    let u: Vec<String> = c
        .separation_axis
        .iter()
        .map(|v| format!("{v:.6}"))
        .collect();
    writeln!(out, "separation axis: {}", u.join(","))?;
    Ok(())
}
