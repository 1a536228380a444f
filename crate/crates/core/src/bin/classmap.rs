//! Command-line front end: ingest CSV data, run one classifier family,
//! and write the diagnostic table (JSON/CSV), per-class scatter plots,
//! the mosaic display, and a text summary.
//!
//! Exit codes: 0 on success, 2 on invalid input or options, 3 on numerical
//! failure during computation.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use classmap::da::DaMode;
use classmap::io;
use classmap::logistic::FarnessDispatch;
use classmap::pipeline::{run_da, run_knn, run_logistic, run_svm, run_vote, RunOutput};
use classmap::svm::{compute_spectrum_kernel, KernelSpec};
use classmap::synth;
use classmap::viz::{layout_classmap, layout_mosaic, PlotOptions};
use classmap::{Error, InputKind, LabeledInput};

#[derive(Parser)]
#[command(
    name = "classmap",
    version,
    about = "Classification diagnostics: label dissimilarity, farness, class maps and mosaics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Linear or quadratic discriminant analysis.
    Da(DaArgs),
    /// k-nearest neighbors on dissimilarities.
    Knn(KnnArgs),
    /// Binary support vector machine.
    Svm(SvmArgs),
    /// Binary logistic regression.
    Logistic(LogisticArgs),
    /// One-vs-one majority voting with a binary SVM per class pair.
    Vote(VoteArgs),
    /// Write the built-in synthetic example instances as CSV.
    Synth(SynthArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Feature CSV with a labels column.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Pairwise dissimilarity CSV: a labels column plus one column per
    /// object.
    #[arg(long, value_name = "PATH")]
    diss: Option<PathBuf>,

    /// Kernel matrix CSV: a labels column plus one column per object.
    #[arg(long, value_name = "PATH")]
    kernel: Option<PathBuf>,

    /// Raw-text CSV (labels column plus one text column), classified
    /// through the substring-spectrum kernel.
    #[arg(long, value_name = "PATH")]
    strings: Option<PathBuf>,

    /// Name of the labels column [default: label].
    #[arg(long, value_name = "NAME")]
    labels_col: Option<String>,

    /// key=value file supplying defaults for any long option of this
    /// subcommand; explicit flags win.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Coverage probability behind the farness cutoff of 1
    /// [default: 0.995].
    #[arg(long)]
    quantile: Option<f64>,

    /// Carve objects far from every class into a dark-grey top segment of
    /// the mosaic.
    #[arg(long)]
    show_outliers: bool,

    /// Output directory [default: .].
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Comma-separated fill colors (one per class) replacing the built-in
    /// palette.
    #[arg(long, value_name = "COLORS")]
    palette: Option<String>,

    /// Annotate an object in the plots: 1-based index, '=', short label.
    /// Repeatable.
    #[arg(long, value_name = "IDX=TEXT")]
    annotate: Vec<String>,
}

#[derive(Args)]
struct KernelOptionArgs {
    /// Kernel: linear, polynomial, rbf, spectrum, or precomputed
    /// [default: by input kind].
    #[arg(long, value_enum, value_name = "KIND")]
    kernel_kind: Option<KernelKindArg>,

    /// Gamma of the polynomial/rbf kernels [default: 1].
    #[arg(long)]
    gamma: Option<f64>,

    /// Degree of the polynomial kernel [default: 3].
    #[arg(long)]
    degree: Option<u32>,

    /// Additive constant of the polynomial kernel [default: 0].
    #[arg(long)]
    coef0: Option<f64>,

    /// Substring length of the spectrum kernel [default: 7].
    #[arg(long)]
    spectrum_length: Option<usize>,
}

#[derive(Args)]
struct DaArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// lda (pooled covariance) or qda (per-class) [default: qda].
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Args)]
struct KnnArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Neighborhood size [default: 5].
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct SvmArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[command(flatten)]
    kernel_options: KernelOptionArgs,

    /// Box constraint of the SVM [default: 1].
    #[arg(long)]
    cost: Option<f64>,
}

#[derive(Args)]
struct LogisticArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Farness route: pooled / per-class Mahalanobis or kpca
    /// [default: by dimension].
    #[arg(long, value_enum)]
    dispatch: Option<DispatchArg>,

    /// CSV of externally fitted coefficients (header name,value; use
    /// "intercept" for the constant term). Skips training.
    #[arg(long, value_name = "PATH")]
    coefficients: Option<PathBuf>,
}

#[derive(Args)]
struct VoteArgs {
    #[command(flatten)]
    common: CommonArgs,

    #[command(flatten)]
    kernel_options: KernelOptionArgs,

    /// Box constraint of the pairwise SVMs [default: 1].
    #[arg(long)]
    cost: Option<f64>,

    /// Farness route: pooled / per-class Mahalanobis or kpca
    /// [default: kpca on the voting kernel].
    #[arg(long, value_enum)]
    dispatch: Option<DispatchArg>,
}

#[derive(Args)]
struct SynthArgs {
    /// Instances to write [default: all of blobs2, blobs3, binary400,
    /// mislabel].
    names: Vec<String>,

    /// Seed of the generator streams.
    #[arg(long, default_value_t = synth::DEFAULT_SEED)]
    seed: u64,

    /// Output directory [default: .].
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Lda,
    Qda,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DispatchArg {
    /// Mahalanobis distances with one pooled covariance.
    Pooled,
    /// Mahalanobis distances with per-class covariances.
    PerClass,
    /// Distances within and from per-class kernel subspaces.
    Kpca,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelKindArg {
    Linear,
    Polynomial,
    Rbf,
    Spectrum,
    Precomputed,
}

impl DispatchArg {
    fn to_dispatch(self) -> FarnessDispatch {
        match self {
            DispatchArg::Pooled => FarnessDispatch::MahalanobisPooled,
            DispatchArg::PerClass => FarnessDispatch::MahalanobisPerClass,
            DispatchArg::Kpca => FarnessDispatch::Kpca,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> classmap::Result<()> {
    match cli.command {
        Command::Da(args) => {
            let settings = Settings::resolve(&args.common)?;
            let mode = match pick_enum(args.mode, &settings.config, "mode", parse_mode)?
                .unwrap_or(ModeArg::Qda)
            {
                ModeArg::Lda => DaMode::Linear,
                ModeArg::Qda => DaMode::Quadratic,
            };
            let (input, _) = settings.load_input(None)?;
            let output = run_da(&input, mode, settings.quantile)?;
            settings.write_artifacts(&output)
        }
        Command::Knn(args) => {
            let settings = Settings::resolve(&args.common)?;
            let k = pick(args.k, &settings.config, "k")?.unwrap_or(5);
            let (input, _) = settings.load_input(None)?;
            let output = run_knn(&input, k, settings.quantile)?;
            settings.write_artifacts(&output)
        }
        Command::Svm(args) => {
            let settings = Settings::resolve(&args.common)?;
            let cost = pick(args.cost, &settings.config, "cost")?.unwrap_or(1.0);
            let (input, spec) = settings.load_input(Some(&args.kernel_options))?;
            let output = run_svm(&input, &spec, cost, settings.quantile)?;
            settings.write_artifacts(&output)
        }
        Command::Logistic(args) => {
            let settings = Settings::resolve(&args.common)?;
            let dispatch = pick_enum(args.dispatch, &settings.config, "dispatch", parse_dispatch)?
                .map(DispatchArg::to_dispatch);
            let coefficients = match pick::<PathBuf>(args.coefficients, &settings.config, "coefficients")? {
                Some(path) => Some(io::read_coefficients(&path)?),
                None => None,
            };
            let (input, _) = settings.load_input(None)?;
            let output = run_logistic(
                &input,
                dispatch,
                coefficients.as_deref(),
                settings.quantile,
            )?;
            settings.write_artifacts(&output)
        }
        Command::Vote(args) => {
            let settings = Settings::resolve(&args.common)?;
            let cost = pick(args.cost, &settings.config, "cost")?.unwrap_or(1.0);
            let dispatch = pick_enum(args.dispatch, &settings.config, "dispatch", parse_dispatch)?
                .map(DispatchArg::to_dispatch);
            let (input, spec) = settings.load_input(Some(&args.kernel_options))?;
            let output = run_vote(&input, &spec, cost, dispatch, settings.quantile)?;
            settings.write_artifacts(&output)
        }
        Command::Synth(args) => run_synth(args),
    }
}

fn run_synth(args: SynthArgs) -> classmap::Result<()> {
    let out_dir = args.out.unwrap_or_else(|| PathBuf::from("."));
    ensure_dir(&out_dir)?;
    let names: Vec<String> = if args.names.is_empty() {
        synth::INSTANCE_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        args.names
    };
    for name in &names {
        let input = synth::instance(name, args.seed)?;
        let path = out_dir.join(format!("{name}.csv"));
        io::write_text(&path, &synth::to_features_csv(&input, "label"))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Everything a classifier run needs besides its own options, with the
/// flag > config-file > built-in-default precedence already applied.
struct Settings {
    config: ConfigFile,
    input: Option<PathBuf>,
    diss: Option<PathBuf>,
    kernel: Option<PathBuf>,
    strings: Option<PathBuf>,
    labels_col: String,
    quantile: f64,
    show_outliers: bool,
    out_dir: PathBuf,
    plot: PlotOptions,
}

impl Settings {
    fn resolve(common: &CommonArgs) -> classmap::Result<Settings> {
        let config = ConfigFile::load(common.config.as_deref())?;
        let input = pick(common.input.clone(), &config, "input")?;
        let diss = pick(common.diss.clone(), &config, "diss")?;
        let kernel = pick(common.kernel.clone(), &config, "kernel")?;
        let strings = pick(common.strings.clone(), &config, "strings")?;
        let labels_col =
            pick(common.labels_col.clone(), &config, "labels-col")?.unwrap_or_else(|| "label".into());
        let quantile = pick(common.quantile, &config, "quantile")?.unwrap_or(0.995);
        if !(0.0 < quantile && quantile < 1.0) {
            return Err(Error::InvalidInput(format!(
                "quantile must lie strictly between 0 and 1, got {quantile}"
            )));
        }
        // The flag can only switch the carving on; absence defers to the
        // config file.
        let show_outliers = common.show_outliers
            || pick(None::<bool>, &config, "show-outliers")?.unwrap_or(false);
        let out_dir = pick(common.out.clone(), &config, "out")?.unwrap_or_else(|| ".".into());

        let mut plot = PlotOptions::default();
        if let Some(colors) = pick::<String>(common.palette.clone(), &config, "palette")? {
            plot.palette = colors.split(',').map(|c| c.trim().to_string()).collect();
        }
        let mut annotate_specs = common.annotate.clone();
        if annotate_specs.is_empty() {
            if let Some(joined) = config.get("annotate") {
                annotate_specs = joined.split(',').map(str::to_string).collect();
            }
        }
        for spec in &annotate_specs {
            plot.annotations.push(parse_annotation(spec)?);
        }

        Ok(Settings {
            config,
            input,
            diss,
            kernel,
            strings,
            labels_col,
            quantile,
            show_outliers,
            out_dir,
            plot,
        })
    }

    /// Read the one data source that was specified and, for kernel
    /// methods, settle which kernel to use.
    fn load_input(
        &self,
        kernel_options: Option<&KernelOptionArgs>,
    ) -> classmap::Result<(LabeledInput, KernelSpec)> {
        let sources = [&self.input, &self.diss, &self.kernel, &self.strings];
        if sources.iter().filter(|s| s.is_some()).count() != 1 {
            return Err(Error::InvalidInput(
                "specify exactly one data source: --input, --diss, --kernel, or --strings".into(),
            ));
        }

        let kind = match kernel_options {
            Some(options) => {
                pick_enum(options.kernel_kind, &self.config, "kernel-kind", parse_kernel_kind)?
            }
            None => None,
        };

        if let Some(path) = &self.input {
            let input = io::ingest_features(path, &self.labels_col)?;
            let spec = self.kernel_spec(kind.unwrap_or(KernelKindArg::Linear), kernel_options)?;
            return Ok((input, spec));
        }
        if let Some(path) = &self.diss {
            let input = io::ingest_square(path, &self.labels_col, InputKind::Dissimilarity)?;
            return Ok((input, KernelSpec::Precomputed));
        }
        if let Some(path) = &self.kernel {
            let input = io::ingest_square(path, &self.labels_col, InputKind::Kernel)?;
            if !matches!(kind, None | Some(KernelKindArg::Precomputed)) {
                return Err(Error::InvalidInput(
                    "a kernel matrix input is already the kernel; drop --kernel-kind".into(),
                ));
            }
            return Ok((input, KernelSpec::Precomputed));
        }

        // Strings: build the spectrum kernel here, then hand the run a
        // precomputed kernel input.
        let path = self.strings.as_ref().expect("one source is set");
        if kernel_options.is_none() {
            return Err(Error::InvalidInput(
                "string input works through the spectrum kernel; use the svm or vote subcommand"
                    .into(),
            ));
        }
        if !matches!(kind, None | Some(KernelKindArg::Spectrum)) {
            return Err(Error::InvalidInput(
                "string input works through the spectrum kernel; drop the other kernel kind"
                    .into(),
            ));
        }
        let length = pick(
            kernel_options.and_then(|o| o.spectrum_length),
            &self.config,
            "spectrum-length",
        )?
        .unwrap_or(7);
        let strings = io::ingest_strings(path, &self.labels_col)?;
        let matrix = compute_spectrum_kernel(&strings.texts, length)?;
        let input = LabeledInput::kernel(matrix, strings.labels, strings.class_names)?;
        Ok((input, KernelSpec::Precomputed))
    }

    /// Kernel specification for feature input.
    fn kernel_spec(
        &self,
        kind: KernelKindArg,
        options: Option<&KernelOptionArgs>,
    ) -> classmap::Result<KernelSpec> {
        let gamma = pick(options.and_then(|o| o.gamma), &self.config, "gamma")?.unwrap_or(1.0);
        let degree = pick(options.and_then(|o| o.degree), &self.config, "degree")?.unwrap_or(3);
        let coef0 = pick(options.and_then(|o| o.coef0), &self.config, "coef0")?.unwrap_or(0.0);
        let spec = match kind {
            KernelKindArg::Linear => KernelSpec::Linear,
            KernelKindArg::Polynomial => KernelSpec::Polynomial { gamma, coef0, degree },
            KernelKindArg::Rbf => KernelSpec::Rbf { gamma },
            KernelKindArg::Spectrum => {
                return Err(Error::InvalidInput(
                    "the spectrum kernel needs raw-text input (--strings)".into(),
                ))
            }
            KernelKindArg::Precomputed => KernelSpec::Precomputed,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Write diagnostics.json/.csv, the schema, one scatter plot per
    /// class, the mosaic, and summary.txt; print the headline numbers.
    fn write_artifacts(&self, output: &RunOutput) -> classmap::Result<()> {
        ensure_dir(&self.out_dir)?;
        let table = &output.table;
        if self.plot.palette.len() < table.n_classes() {
            return Err(Error::InvalidInput(format!(
                "palette has {} colors for {} classes",
                self.plot.palette.len(),
                table.n_classes()
            )));
        }

        let mut json = table.to_json_string()?;
        json.push('\n');
        io::write_text(&self.out_dir.join("diagnostics.json"), &json)?;
        io::write_text(&self.out_dir.join("diagnostics.csv"), &table.to_csv_string())?;
        io::write_text(
            &self.out_dir.join("diagnostics.schema.json"),
            io::DIAGNOSTICS_SCHEMA,
        )?;

        for class in 1..=table.n_classes() {
            let svg = layout_classmap(table, class, &self.plot)?.to_svg();
            io::write_text(&self.out_dir.join(format!("classmap_{class}.svg")), &svg)?;
        }
        let confusion = table.build_confusion();
        let mosaic = layout_mosaic(
            &confusion,
            &table.class_names,
            self.show_outliers,
            &self.plot,
        )?
        .to_svg();
        io::write_text(&self.out_dir.join("mosaic.svg"), &mosaic)?;

        let summary = summary_text(output);
        io::write_text(&self.out_dir.join("summary.txt"), &summary)?;
        print!("{summary}");
        println!(
            "artifacts: {} (diagnostics.json, diagnostics.csv, {} class maps, mosaic.svg, summary.txt)",
            self.out_dir.display(),
            table.n_classes()
        );
        Ok(())
    }
}

fn summary_text(output: &RunOutput) -> String {
    let table = &output.table;
    let confusion = table.build_confusion();
    let n = table.n();
    let wrong = table
        .rows
        .iter()
        .filter(|r| r.predicted != r.given)
        .count();
    let mut s = format!(
        "classifier: {}\nobjects: {}  classes: {} ({})\n",
        table.classifier,
        n,
        table.n_classes(),
        table.class_names.join(", ")
    );
    s.push_str(&format!(
        "misclassification rate: {:.4} ({wrong} of {n})\n",
        table.misclassification_rate()
    ));
    let sizes: Vec<usize> = confusion.counts.iter().map(|row| row.iter().sum()).collect();
    let per_class: Vec<String> = table
        .class_names
        .iter()
        .zip(&confusion.outliers_per_class)
        .zip(&sizes)
        .map(|((name, outliers), size)| format!("{name} {outliers}/{size}"))
        .collect();
    s.push_str(&format!(
        "outliers per class: {} (total {})\n",
        per_class.join(", "),
        confusion.outliers_per_class.iter().sum::<usize>()
    ));
    for warning in &output.warnings {
        s.push_str(&format!("warning: {warning}\n"));
    }
    s
}

fn ensure_dir(dir: &Path) -> classmap::Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })
}

fn parse_annotation(spec: &str) -> classmap::Result<(usize, String)> {
    let (index, text) = spec.split_once('=').ok_or_else(|| {
        Error::InvalidInput(format!(
            "annotation {spec:?} must be index=text, for example 7=a"
        ))
    })?;
    let index: usize = index.trim().parse().map_err(|_| {
        Error::InvalidInput(format!("annotation index {index:?} is not a 1-based integer"))
    })?;
    Ok((index, text.trim().to_string()))
}

fn parse_mode(s: &str) -> classmap::Result<ModeArg> {
    match s {
        "lda" => Ok(ModeArg::Lda),
        "qda" => Ok(ModeArg::Qda),
        _ => Err(Error::InvalidInput(format!(
            "mode must be lda or qda, got {s:?}"
        ))),
    }
}

fn parse_dispatch(s: &str) -> classmap::Result<DispatchArg> {
    match s {
        "pooled" => Ok(DispatchArg::Pooled),
        "per-class" => Ok(DispatchArg::PerClass),
        "kpca" => Ok(DispatchArg::Kpca),
        _ => Err(Error::InvalidInput(format!(
            "dispatch must be pooled, per-class, or kpca, got {s:?}"
        ))),
    }
}

fn parse_kernel_kind(s: &str) -> classmap::Result<KernelKindArg> {
    match s {
        "linear" => Ok(KernelKindArg::Linear),
        "polynomial" => Ok(KernelKindArg::Polynomial),
        "rbf" => Ok(KernelKindArg::Rbf),
        "spectrum" => Ok(KernelKindArg::Spectrum),
        "precomputed" => Ok(KernelKindArg::Precomputed),
        _ => Err(Error::InvalidInput(format!(
            "kernel kind must be linear, polynomial, rbf, spectrum, or precomputed, got {s:?}"
        ))),
    }
}

/// key=value configuration file; `#` starts a comment line.
struct ConfigFile {
    values: BTreeMap<String, String>,
}

/// Options a config file may supply. Keys use the long flag names.
const CONFIG_KEYS: &[&str] = &[
    "input",
    "diss",
    "kernel",
    "strings",
    "labels-col",
    "quantile",
    "show-outliers",
    "out",
    "palette",
    "annotate",
    "mode",
    "k",
    "kernel-kind",
    "gamma",
    "degree",
    "coef0",
    "spectrum-length",
    "cost",
    "dispatch",
    "coefficients",
];

impl ConfigFile {
    fn load(path: Option<&Path>) -> classmap::Result<ConfigFile> {
        let mut values = BTreeMap::new();
        let Some(path) = path else {
            return Ok(ConfigFile { values });
        };
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::InvalidInput(format!(
                    "{} line {}: expected key=value, got {line:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "{} line {}: unknown option {key:?}; known options: {}",
                    path.display(),
                    lineno + 1,
                    CONFIG_KEYS.join(", ")
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Flag value if given, else the config-file value, else nothing.
fn pick<T: ConfigValue>(
    flag: impl Into<Option<T>>,
    config: &ConfigFile,
    key: &str,
) -> classmap::Result<Option<T>> {
    if let Some(v) = flag.into() {
        return Ok(Some(v));
    }
    match config.get(key) {
        Some(raw) => T::parse_config(raw)
            .map(Some)
            .map_err(|why| Error::InvalidInput(format!("config option {key}={raw:?}: {why}"))),
        None => Ok(None),
    }
}

/// Same precedence for enums that have a dedicated parser.
fn pick_enum<T>(
    flag: Option<T>,
    config: &ConfigFile,
    key: &str,
    parse: impl Fn(&str) -> classmap::Result<T>,
) -> classmap::Result<Option<T>> {
    if let Some(v) = flag {
        return Ok(Some(v));
    }
    config.get(key).map(parse).transpose()
}

/// Types a config file can carry.
trait ConfigValue: Sized {
    fn parse_config(raw: &str) -> Result<Self, String>;
}

impl ConfigValue for String {
    fn parse_config(raw: &str) -> Result<Self, String> {
        Ok(raw.to_string())
    }
}

impl ConfigValue for PathBuf {
    fn parse_config(raw: &str) -> Result<Self, String> {
        Ok(PathBuf::from(raw))
    }
}

impl ConfigValue for f64 {
    fn parse_config(raw: &str) -> Result<Self, String> {
        raw.parse().map_err(|_| "not a number".to_string())
    }
}

impl ConfigValue for usize {
    fn parse_config(raw: &str) -> Result<Self, String> {
        raw.parse().map_err(|_| "not a nonnegative integer".to_string())
    }
}

impl ConfigValue for u32 {
    fn parse_config(raw: &str) -> Result<Self, String> {
        raw.parse().map_err(|_| "not a nonnegative integer".to_string())
    }
}

impl ConfigValue for bool {
    fn parse_config(raw: &str) -> Result<Self, String> {
        match raw {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            _ => Err("not a boolean (true/false)".to_string()),
        }
    }
}
