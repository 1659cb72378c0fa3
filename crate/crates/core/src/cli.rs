//! The `graphon-sep` command line.
//!
//! Every command is deterministic in its flags. Failures print
//! `{"error": {"kind": .., "message": ..}}` on stderr and exit with status 2;
//! `test` exits with 0 for a distinct verdict and 3 for an inconclusive one.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{self, SpectralTest, Verdict};
use crate::classify::{self, FeatureConfig, FeatureSource};
use crate::dataset::{self, Dataset};
use crate::density::{hom_density, injective_hom_density};
use crate::error::{Error, Result};
use crate::experiments::{self, Evaluation};
use crate::graphon::{DecoratedGraphon, StepGraphon, WeightedGraph};
use crate::io::{self, fmt_num};
use crate::motif::Motif;
use crate::spectral::{self, Channel, TruncationOrder};
use crate::transport::{nested_wasserstein, wasserstein_1d};

/// Exit status of `test` when the verdict is inconclusive.
pub const EXIT_INCONCLUSIVE: i32 = 3;
/// Exit status for any error.
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "graphon-sep",
    version,
    about = "Motif densities, spectra and cut-distance lower bounds for weighted graph populations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample weighted graphs from a graphon or decorated graphon file.
    Sample {
        #[arg(long)]
        graphon: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory; files are named graph_0000.json, graph_0001.json, ...
        #[arg(long)]
        out: PathBuf,
    },
    /// Homomorphism density of a motif in one graph.
    Motif {
        #[arg(long)]
        graph: PathBuf,
        /// edge, C<n>, S<n>, P<n>, K<n> or a JSON motif.
        #[arg(long)]
        motif: String,
        /// Average over injective maps only.
        #[arg(long)]
        injective: bool,
    },
    /// Spectral atoms of one graph, or its truncated spectral features.
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = ChannelArg::Adjacency)]
        channel: ChannelArg,
        /// Keep the r lowest and r highest atoms.
        #[arg(long)]
        r: Option<usize>,
        /// Rank atoms by absolute value when truncating.
        #[arg(long)]
        abs_order: bool,
    },
    /// Wasserstein distance between the motif-density or spectral measures of two groups.
    Distance {
        #[command(flatten)]
        groups: Groups,
    },
    /// Cut-distance lower bound and verdict for two groups (JSON report).
    Test {
        #[command(flatten)]
        groups: Groups,
        #[arg(long, default_value_t = bounds::DEFAULT_C)]
        c: f64,
        #[arg(long, default_value_t = 0.9)]
        threshold: f64,
        /// Cycle length for the spectral bound.
        #[arg(long, default_value_t = 1)]
        v: usize,
        #[arg(long, default_value_t = bounds::DEFAULT_V_MAX)]
        v_max: usize,
    },
    /// Leave-one-out accuracy and permutation p-value of the sparse linear classifier.
    Classify {
        #[command(flatten)]
        features: FeatureArgs,
        #[arg(long, default_value_t = 0.1)]
        lambda: f64,
        #[arg(long, default_value_t = 99)]
        permutations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-fold CSV log; written to stderr when absent.
        #[arg(long)]
        fold_log: Option<PathBuf>,
    },
    /// Standardized spectral feature matrix of a dataset as CSV.
    Features {
        #[command(flatten)]
        features: FeatureArgs,
    },
    /// Monte Carlo checks of the concentration lemmas (CSV of statistic vs bound).
    Experiment {
        #[command(subcommand)]
        which: ExperimentCommand,
    },
}

#[derive(Args, Debug)]
struct Groups {
    #[arg(long)]
    group_a: PathBuf,
    #[arg(long)]
    group_b: PathBuf,
    /// motif:<F> or spectral[:<channel>].
    #[arg(long)]
    mode: String,
}

#[derive(Args, Debug)]
struct FeatureArgs {
    #[arg(long)]
    dataset: PathBuf,
    /// Comma-separated channel names; `name:kind` overrides --kinds for that channel.
    #[arg(long, value_delimiter = ',', required = true)]
    channels: Vec<String>,
    /// Spectral kinds applied to channels without an explicit kind.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "laplacian")]
    kinds: Vec<ChannelArg>,
    #[arg(long, default_value_t = 10)]
    r: usize,
    #[arg(long)]
    abs_order: bool,
    /// Coarsen every graph with this partition first.
    #[arg(long)]
    partition: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ExperimentCommand {
    /// Fraction of sampled graphs whose motif density strays by eps or more.
    Concentration {
        #[arg(long)]
        graphon: PathBuf,
        #[arg(long, default_value = "edge")]
        motif: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Estimate densities from this many random maps instead of exactly.
        #[arg(long)]
        mc_samples: Option<usize>,
    },
    /// Wasserstein distance of n uniform draws to the uniform law.
    MeanWasserstein {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ChannelArg {
    Adjacency,
    Laplacian,
    Degree,
}

impl From<ChannelArg> for Channel {
    fn from(c: ChannelArg) -> Channel {
        match c {
            ChannelArg::Adjacency => Channel::Adjacency,
            ChannelArg::Laplacian => Channel::Laplacian,
            ChannelArg::Degree => Channel::Degree,
        }
    }
}

enum Mode {
    Motif(Motif),
    Spectral(Channel),
}

fn parse_mode(s: &str) -> Result<Mode> {
    match s.split_once(':') {
        Some(("motif", f)) => Ok(Mode::Motif(f.parse()?)),
        Some(("spectral", c)) => Ok(Mode::Spectral(c.parse()?)),
        None if s == "spectral" => Ok(Mode::Spectral(Channel::Adjacency)),
        _ => Err(Error::Parse {
            context: "--mode".into(),
            detail: format!("expected motif:<F> or spectral[:<channel>], got {s:?}"),
        }),
    }
}

/// Reads a decorated graphon (`{"expectation", "noise"}`) or a plain step
/// graphon (`{"m", "values"}`), which samples binary graphs.
pub fn load_graphon(path: &Path) -> Result<DecoratedGraphon> {
    let value: serde_json::Value = io::read_json(path)?;
    let ctx = path.display().to_string();
    let as_err = |e: serde_json::Error| Error::Parse {
        context: ctx.clone(),
        detail: e.to_string(),
    };
    if value.get("expectation").is_some() {
        serde_json::from_value(value).map_err(as_err)
    } else {
        let w: StepGraphon = serde_json::from_value(value).map_err(as_err)?;
        Ok(w.into())
    }
}

fn group(dir: &Path) -> Result<Vec<WeightedGraph>> {
    Ok(io::load_graph_dir(dir)?.into_iter().map(|(_, g)| g).collect())
}

fn feature_config(args: &FeatureArgs) -> Result<FeatureConfig> {
    let mut sources = Vec::new();
    for c in &args.channels {
        if c.contains(':') {
            sources.push(c.parse::<FeatureSource>()?);
        } else {
            sources.extend(args.kinds.iter().map(|&k| FeatureSource {
                channel: c.clone(),
                kind: k.into(),
            }));
        }
    }
    Ok(FeatureConfig {
        sources,
        r: args.r,
        order: if args.abs_order {
            TruncationOrder::Absolute
        } else {
            TruncationOrder::Signed
        },
    })
}

fn load_features_dataset(args: &FeatureArgs) -> Result<Dataset> {
    let ds = dataset::load_dataset(&args.dataset)?;
    match &args.partition {
        None => Ok(ds),
        Some(p) => {
            let part = dataset::load_partition(p)?;
            ds.map_graphs(|_, g| dataset::coarsen(g, &part))
        }
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Io {
        path: "<stdout>".into(),
        source: e,
    })
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Sample {
            graphon,
            k,
            n,
            seed,
            out: dir,
        } => {
            let d = load_graphon(&graphon)?;
            if n == 0 {
                return Err(Error::Domain("--n must be positive".into()));
            }
            let graphs = d.sample_graphs(k, n, seed)?;
            fs::create_dir_all(&dir).map_err(|e| Error::Io {
                path: dir.display().to_string(),
                source: e,
            })?;
            let width = (n - 1).to_string().len().max(4);
            for (i, g) in graphs.iter().enumerate() {
                io::save_graph(g, &dir.join(format!("graph_{i:0width$}.json")))?;
            }
            write_out(out, &format!("wrote {n} graphs to {}\n", dir.display()))?;
        }
        Command::Motif {
            graph,
            motif,
            injective,
        } => {
            let g = io::load_graph(&graph)?;
            let f: Motif = motif.parse()?;
            let t = if injective {
                injective_hom_density(&f, &g)?
            } else {
                hom_density(&f, &g)?
            };
            write_out(out, &format!("{}\n", fmt_num(t)))?;
        }
        Command::Spectrum {
            graph,
            channel,
            r,
            abs_order,
        } => {
            let g = io::load_graph(&graph)?;
            let channel: Channel = channel.into();
            let mu = spectral::channel_measure(&g, channel);
            let text = match r {
                None => {
                    let rows: Vec<Vec<String>> = mu
                        .merged()
                        .atoms()
                        .iter()
                        .map(|a| vec![fmt_num(a.value), fmt_num(a.mass)])
                        .collect();
                    io::csv_string(&["value", "mass"], &rows)?
                }
                Some(r) => {
                    let order = if abs_order {
                        TruncationOrder::Absolute
                    } else {
                        TruncationOrder::Signed
                    };
                    let row = spectral::truncate_features(&mu, r, order)?;
                    io::matrix_csv(&spectral::feature_names("", channel, r), &[row], None)?
                }
            };
            write_out(out, &text)?;
        }
        Command::Distance { groups } => {
            let a = group(&groups.group_a)?;
            let b = group(&groups.group_b)?;
            let d = match parse_mode(&groups.mode)? {
                Mode::Motif(f) => wasserstein_1d(
                    &crate::density::empirical_density_measure(&f, &a)?,
                    &crate::density::empirical_density_measure(&f, &b)?,
                )?,
                Mode::Spectral(c) => nested_wasserstein(&spectral::ensemble(&a, c)?, &spectral::ensemble(&b, c)?)?,
            };
            write_out(out, &format!("{}\n", fmt_num(d)))?;
        }
        Command::Test {
            groups,
            c,
            threshold,
            v,
            v_max,
        } => {
            if !(c > 0.0) || !(0.0..=1.0).contains(&threshold) {
                return Err(Error::Domain("need c > 0 and threshold in [0, 1]".into()));
            }
            let a = group(&groups.group_a)?;
            let b = group(&groups.group_b)?;
            let report = match parse_mode(&groups.mode)? {
                Mode::Motif(f) => bounds::equality_test_motif(&a, &b, &f, c, threshold)?,
                Mode::Spectral(channel) => bounds::equality_test_spectral(
                    &a,
                    &b,
                    &SpectralTest {
                        v,
                        v_max,
                        channel,
                        c,
                        threshold,
                    },
                )?,
            };
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            write_out(out, &format!("{json}\n"))?;
            return Ok(match report.verdict {
                Verdict::Distinct => 0,
                Verdict::Inconclusive => EXIT_INCONCLUSIVE,
            });
        }
        Command::Classify {
            features,
            lambda,
            permutations,
            seed,
            fold_log,
        } => {
            let ds = load_features_dataset(&features)?;
            let cfg = feature_config(&features)?;
            let res = classify::permutation_test(&ds, &cfg, lambda, permutations, seed)?;
            let folds: Vec<Vec<String>> = res
                .observed
                .folds
                .iter()
                .map(|f| {
                    vec![
                        ds.items()[f.index].id.clone(),
                        f.label.to_string(),
                        f.predicted.to_string(),
                        fmt_num(f.score),
                        f.nonzero_weights.to_string(),
                    ]
                })
                .collect();
            let log = io::csv_string(&["id", "label", "predicted", "score", "nonzero_weights"], &folds)?;
            match fold_log {
                Some(p) => fs::write(&p, log).map_err(|e| Error::Io {
                    path: p.display().to_string(),
                    source: e,
                })?,
                None => {
                    let _ = err.write_all(log.as_bytes());
                }
            }
            let summary = io::csv_string(
                &["accuracy", "p_value"],
                &[vec![fmt_num(res.observed.accuracy), fmt_num(res.p_value)]],
            )?;
            write_out(out, &summary)?;
        }
        Command::Features { features } => {
            let ds = load_features_dataset(&features)?;
            let cfg = feature_config(&features)?;
            let (x, names) = classify::extract_features(&ds, &cfg)?;
            let ids: Vec<String> = ds.items().iter().map(|i| i.id.clone()).collect();
            write_out(out, &io::matrix_csv(&names, &x, Some(&ids))?)?;
        }
        Command::Experiment { which } => {
            let rows = match which {
                ExperimentCommand::Concentration {
                    graphon,
                    motif,
                    k,
                    eps,
                    trials,
                    seed,
                    mc_samples,
                } => {
                    let d = load_graphon(&graphon)?;
                    let f: Motif = motif.parse()?;
                    let res = match mc_samples {
                        Some(samples) => experiments::concentration_experiment_with(
                            &d,
                            &f,
                            k,
                            eps,
                            trials,
                            seed,
                            Evaluation::MonteCarlo { samples },
                        )?,
                        None => experiments::concentration_experiment(&d, &f, k, eps, trials, seed)?,
                    };
                    let _ = writeln!(
                        err,
                        "exceedance rate {} vs bound {}",
                        fmt_num(res.exceedance_rate),
                        fmt_num(res.bound)
                    );
                    res.rows()
                }
                ExperimentCommand::MeanWasserstein { n, trials, seed } => {
                    let res = experiments::mean_wasserstein_experiment(n, trials, seed)?;
                    let _ = writeln!(err, "mean {} vs bound {}", fmt_num(res.mean), fmt_num(res.bound));
                    res.rows()
                }
            };
            write_out(out, &experiments::rows_csv(&rows)?)?;
        }
    }
    Ok(0)
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = writeln!(err, "{}", error_json("usage", e.to_string().trim()));
            return EXIT_ERROR;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", error_json(e.kind(), &e.to_string()));
            EXIT_ERROR
        }
    }
}
