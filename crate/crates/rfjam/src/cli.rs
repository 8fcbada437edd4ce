//! Command-line front end: simulate scenario datasets, evaluate experiment
//! cases, and aggregate results into a summary report.
//!
//! Exit codes: 0 on success, 1 on runtime failure, 2 on usage errors such as
//! an unknown case name or a bad config key.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::dataset::{
    self, CaseResult, Classifier, DatasetCache, ExperimentCase, ManifestEntry,
};
use crate::error::{ConfigError, DatasetError};
use crate::ml::DEFAULT_K;
use crate::scenario::{simulate_run, ScenarioConfig, ScenarioKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rfjam", about = "RF jamming simulation and detection toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the scenarios and write observation CSVs.
    Simulate(SimulateArgs),
    /// Train and evaluate one experiment case (or all of them).
    Evaluate(EvaluateArgs),
    /// Aggregate evaluation results into a summary CSV and SVG chart.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Optional key = value config file; flags below override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Tx/Rx travelling speed in m/s.
    #[arg(long)]
    pub speed: Option<f64>,
    /// Restrict to one scenario (Interference, SmartAttack, ConstantAttack).
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Case name (e.g. Same_KNN-VRS) or "all".
    #[arg(long)]
    pub case: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// KNN neighborhood size.
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,
    /// Random forest size.
    #[arg(long, default_value_t = 100)]
    pub trees: usize,
    /// Override the training speed range (m/s).
    #[arg(long)]
    pub train_speed: Option<f64>,
    /// Override the test speed range (m/s).
    #[arg(long)]
    pub test_speed: Option<f64>,
    /// Directory for machine-readable result files.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Directory containing evaluate result files.
    #[arg(long, default_value = "results")]
    pub results: PathBuf,
    /// Output directory for the summary CSV and SVG chart.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

/// Run a parsed command, returning the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Evaluate(args) => cmd_evaluate(&args),
        Command::Report(args) => cmd_report(&args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

fn io_err(path: &Path, source: std::io::Error) -> DatasetError {
    DatasetError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<i32, DatasetError> {
    let base = match &args.config {
        Some(path) => match ScenarioConfig::read_config(path) {
            Ok(cfg) => cfg,
            Err(e @ (ConfigError::UnknownKey { .. }
            | ConfigError::InvalidValue { .. }
            | ConfigError::MissingKey { .. })) => {
                eprintln!("error: {e}");
                return Ok(EXIT_USAGE);
            }
            Err(e) => {
                eprintln!("error: {e}");
                return Ok(EXIT_RUNTIME);
            }
        },
        None => ScenarioConfig::default(),
    };
    let kinds: Vec<ScenarioKind> = match &args.scenario {
        Some(name) => match ScenarioKind::from_str_opt(name) {
            Some(k) => vec![k],
            None => {
                eprintln!("error: unknown scenario: {name}");
                return Ok(EXIT_USAGE);
            }
        },
        None => ScenarioKind::all().to_vec(),
    };
    std::fs::create_dir_all(&args.out).map_err(|e| io_err(&args.out, e))?;
    let mut manifest = Vec::new();
    for kind in kinds {
        let mut cfg = base.clone();
        cfg.kind = kind;
        if let Some(speed) = args.speed {
            cfg.base_speed = speed;
            cfg.pursuit_speed = speed * 4.0 / 3.0;
        }
        cfg.seed = args
            .seed
            .wrapping_mul(0x0100_0000_01b3)
            .wrapping_add(kind.index() as u64 + 1);
        let records = simulate_run(&cfg);
        let csv_path = args.out.join(format!("{kind}.csv"));
        dataset::write_observations(&csv_path, &records)?;
        // Plot-ready SINR trace.
        let trace: String = std::iter::once("t,sinr_db".to_string())
            .chain(records.iter().map(|r| format!("{:.6},{:.6}", r.t, r.sinr)))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n";
        let trace_path = args.out.join(format!("{kind}_sinr.csv"));
        std::fs::write(&trace_path, trace).map_err(|e| io_err(&trace_path, e))?;
        let config_path = args.out.join(format!("{kind}.config"));
        cfg.write_config(&config_path).map_err(|e| match e {
            ConfigError::Io { path, source } => DatasetError::Io { path, source },
            other => DatasetError::Malformed {
                path: config_path.display().to_string(),
                line: 0,
                reason: other.to_string(),
            },
        })?;
        println!("wrote {} ({} rows)", csv_path.display(), records.len());
        manifest.push(ManifestEntry {
            path: csv_path.display().to_string(),
            kind,
            speed: cfg.base_speed,
            seed: cfg.seed,
        });
    }
    dataset::write_manifest(&args.out.join("manifest.txt"), &manifest)?;
    Ok(EXIT_OK)
}

fn result_file_body(res: &CaseResult, seed: u64) -> String {
    let c = &res.case;
    let mut out = String::new();
    out.push_str(&format!("case = {}\n", c.name));
    out.push_str(&format!("classifier = {}\n", c.classifier));
    out.push_str(&format!("use_vrs = {}\n", c.use_vrs));
    out.push_str(&format!("train_speed = {}\n", c.train_speed));
    out.push_str(&format!("test_speed = {}\n", c.test_speed));
    out.push_str(&format!("seed = {seed}\n"));
    out.push_str(&format!("accuracy = {:.6}\n", res.accuracy));
    for i in 0..3 {
        for j in 0..3 {
            out.push_str(&format!("matrix.{i}.{j} = {}\n", res.matrix.counts[i][j]));
        }
    }
    out
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> Result<i32, DatasetError> {
    let cases: Vec<ExperimentCase> = if args.case == "all" {
        ExperimentCase::all()
    } else {
        match ExperimentCase::from_name(&args.case) {
            Ok(c) => vec![c],
            Err(e) => {
                eprintln!("error: {e}");
                return Ok(EXIT_USAGE);
            }
        }
    };
    std::fs::create_dir_all(&args.out).map_err(|e| io_err(&args.out, e))?;
    let mut cache = DatasetCache::new();
    let mut summary = Vec::new();
    for case in cases {
        let case = match (args.train_speed, args.test_speed) {
            (None, None) => case,
            (tr, te) => {
                let train = tr.unwrap_or(case.train_speed);
                let test = te.unwrap_or(case.test_speed);
                case.with_speeds(train, test)
            }
        };
        let res = dataset::run_case(&case, args.seed, args.k, args.trees, &mut cache)?;
        println!("case {}:", res.case.name);
        print!("{}", res.matrix);
        println!("accuracy: {:.2}%", res.accuracy * 100.0);
        let path = args.out.join(format!("{}.txt", res.case.name));
        std::fs::write(&path, result_file_body(&res, args.seed))
            .map_err(|e| io_err(&path, e))?;
        summary.push(res);
    }
    if summary.len() > 1 {
        println!("\n{:<20} accuracy", "case");
        for res in &summary {
            println!("{:<20} {:.2}%", res.case.name, res.accuracy * 100.0);
        }
    }
    Ok(EXIT_OK)
}

/// Parsed contents of one evaluate result file.
#[derive(Debug, Clone)]
struct ResultRow {
    case: String,
    classifier: String,
    use_vrs: String,
    train_speed: String,
    test_speed: String,
    accuracy: f64,
}

fn parse_result_file(path: &Path) -> Option<ResultRow> {
    let text = std::fs::read_to_string(path).ok()?;
    let mut row = ResultRow {
        case: String::new(),
        classifier: String::new(),
        use_vrs: String::new(),
        train_speed: String::new(),
        test_speed: String::new(),
        accuracy: f64::NAN,
    };
    for line in text.lines() {
        let Some((key, value)) = line.split_once('=') else {
            continue;
        };
        let value = value.trim();
        match key.trim() {
            "case" => row.case = value.to_string(),
            "classifier" => row.classifier = value.to_string(),
            "use_vrs" => row.use_vrs = value.to_string(),
            "train_speed" => row.train_speed = value.to_string(),
            "test_speed" => row.test_speed = value.to_string(),
            "accuracy" => row.accuracy = value.parse().ok()?,
            _ => {}
        }
    }
    if row.case.is_empty() || row.accuracy.is_nan() {
        return None;
    }
    Some(row)
}

fn svg_bar_chart(rows: &[ResultRow]) -> String {
    let bar_w = 46;
    let gap = 14;
    let left = 60;
    let bottom = 260;
    let height = 200.0;
    let width = left + rows.len() * (bar_w + gap) + 20;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"330\" \
         font-family=\"monospace\" font-size=\"10\">\n"
    );
    svg.push_str(&format!(
        "<line x1=\"{left}\" y1=\"{bottom}\" x2=\"{}\" y2=\"{bottom}\" stroke=\"black\"/>\n",
        width - 10
    ));
    svg.push_str(&format!(
        "<line x1=\"{left}\" y1=\"{}\" x2=\"{left}\" y2=\"{bottom}\" stroke=\"black\"/>\n",
        bottom as f64 - height
    ));
    for pct in [0, 25, 50, 75, 100] {
        let y = bottom as f64 - height * pct as f64 / 100.0;
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.0}\" text-anchor=\"end\">{pct}%</text>\n",
            left - 6,
            y + 3.0
        ));
    }
    for (i, row) in rows.iter().enumerate() {
        let h = height * row.accuracy;
        let x = left + i * (bar_w + gap);
        let y = bottom as f64 - h;
        let fill = if row.use_vrs == "true" { "#2b7" } else { "#779" };
        svg.push_str(&format!(
            "<rect x=\"{x}\" y=\"{y:.1}\" width=\"{bar_w}\" height=\"{h:.1}\" fill=\"{fill}\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.0}\" text-anchor=\"middle\">{:.1}</text>\n",
            x + bar_w / 2,
            y - 4.0,
            row.accuracy * 100.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"start\" \
             transform=\"rotate(45 {} {})\">{}</text>\n",
            x + 4,
            bottom + 12,
            x + 4,
            bottom + 12,
            row.case
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn cmd_report(args: &ReportArgs) -> Result<i32, DatasetError> {
    std::fs::create_dir_all(&args.out).map_err(|e| io_err(&args.out, e))?;
    let mut rows = Vec::new();
    for case in ExperimentCase::all() {
        let path = args.results.join(format!("{}.txt", case.name));
        match parse_result_file(&path) {
            Some(row) => rows.push(row),
            None => eprintln!("warning: no result for case {}, bar omitted", case.name),
        }
    }
    let mut csv = String::from("case,classifier,use_vrs,train_speed,test_speed,accuracy\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{:.6}\n",
            r.case, r.classifier, r.use_vrs, r.train_speed, r.test_speed, r.accuracy
        ));
    }
    let csv_path = args.out.join("summary.csv");
    std::fs::write(&csv_path, csv).map_err(|e| io_err(&csv_path, e))?;
    let svg_path = args.out.join("summary.svg");
    std::fs::write(&svg_path, svg_bar_chart(&rows)).map_err(|e| io_err(&svg_path, e))?;
    println!(
        "wrote {} and {} ({} cases)",
        csv_path.display(),
        svg_path.display(),
        rows.len()
    );
    Ok(EXIT_OK)
}

// Re-export for the accuracy summary printed by evaluate.
impl CaseResult {
    pub fn classifier(&self) -> Classifier {
        self.case.classifier
    }
}
