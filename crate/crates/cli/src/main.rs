use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use refcast::ingest::{list_series, DateRange};
use refcast::report::{
    self, render_comparison, render_summary, summarize, write_series_plots, ModelChoice, OutputFormat, RunConfig,
    Transform,
};
use refcast::sarima::SarimaOrder;
use refcast::{Error, ErrorClass, MonthStamp};

/// Forecast monthly EIA production series with seasonal naive, ETS and seasonal ARIMA models.
#[derive(Debug, Parser)]
#[command(name = "refcast", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the series (MSN codes) in a MER CSV file.
    List {
        #[arg(long)]
        input: PathBuf,
        /// Print the catalog as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Summarize one series and write its plot data.
    Inspect {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a model and report parameters and diagnostics.
    Fit(ModelArgs),
    /// Fit a model and forecast.
    Forecast(ModelArgs),
    /// Fit all three models to the same input and compare training accuracy.
    Compare(ModelArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    msn: String,
    /// First month, YYYY-MM.
    #[arg(long)]
    from: Option<MonthStamp>,
    /// Last month, YYYY-MM.
    #[arg(long)]
    to: Option<MonthStamp>,
    /// none, diff or seasonal-diff.
    #[arg(long, default_value = "none")]
    transform: Transform,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[command(flatten)]
    data: DataArgs,
    /// snaive, ets, arima or auto-compare.
    #[arg(long, default_value = "arima")]
    model: ModelChoice,
    /// ARIMA order p,d,q[,P,D,Q]; searched automatically when omitted.
    #[arg(long)]
    order: Option<String>,
    #[arg(long, default_value_t = report::DEFAULT_HORIZON)]
    horizon: usize,
    /// Confidence levels, as fractions or percentages.
    #[arg(long, value_delimiter = ',', default_value = "80,95")]
    levels: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "refcast-out")]
    out: PathBuf,
    /// Forecast table formats: csv, json.
    #[arg(long, value_delimiter = ',', default_value = "csv")]
    format: Vec<OutputFormat>,
}

impl DataArgs {
    fn range(&self) -> refcast::Result<DateRange> {
        DateRange::new(self.from, self.to)
    }
}

impl ModelArgs {
    fn config(&self, model: ModelChoice, include_forecast: bool) -> refcast::Result<RunConfig> {
        let mut c = RunConfig::new(&self.data.input, &self.data.msn, &self.out);
        c.range = self.data.range()?;
        c.transform = self.data.transform;
        c.model = model;
        c.order = self.order.as_deref().map(|o| SarimaOrder::parse_list(o, 12)).transpose()?;
        c.horizon = self.horizon;
        c.levels = self.levels.iter().map(|l| if *l > 1.0 { l / 100.0 } else { *l }).collect();
        c.seed = self.seed;
        c.formats = self.format.clone();
        c.formats.sort();
        c.formats.dedup();
        c.include_forecast = include_forecast;
        Ok(c)
    }
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Usage => 2,
        ErrorClass::Data => 3,
        ErrorClass::Fit => 4,
    }
}

fn class_name(class: ErrorClass) -> &'static str {
    match class {
        ErrorClass::Usage => "usage",
        ErrorClass::Data => "data",
        ErrorClass::Fit => "fit",
    }
}

fn run_model(args: &ModelArgs, model: ModelChoice, include_forecast: bool) -> refcast::Result<()> {
    let config = args.config(model, include_forecast)?;
    let outcome = report::run(&config)?;
    for (i, r) in outcome.runs.iter().enumerate() {
        if i > 0 {
            println!("{}", "-".repeat(72));
        }
        print!("{}", r.report);
    }
    if let Some(rows) = &outcome.comparison {
        println!();
        print!("{}", render_comparison(rows));
    }
    println!("\nWrote {} files to {}", outcome.files.len(), config.out_dir.display());
    Ok(())
}

fn execute(cli: Cli) -> refcast::Result<()> {
    match cli.command {
        Command::List { input, json } => {
            let catalog = list_series(BufReader::new(File::open(&input)?))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&catalog)?);
            } else {
                let width = catalog.iter().map(|c| c.msn.len()).max().unwrap_or(3).max(3);
                println!("{:width$}  {:7}  {:7}  {:>5}  DESCRIPTION [UNIT]", "MSN", "FIRST", "LAST", "N");
                for c in &catalog {
                    let stamp = |s: Option<MonthStamp>| s.map_or_else(|| "-".into(), |s| s.to_string());
                    println!(
                        "{:width$}  {:7}  {:7}  {:>5}  {} [{}]",
                        c.msn,
                        stamp(c.first),
                        stamp(c.last),
                        c.observations,
                        c.description,
                        c.unit
                    );
                }
            }
            Ok(())
        }
        Command::Inspect { data, out } => {
            let mut config = RunConfig::new(&data.input, &data.msn, out.clone().unwrap_or_default());
            config.range = data.range()?;
            let loaded = report::load_series(&config)?;
            let ts = data.transform.apply(&loaded.series)?;
            let label = data.transform.label(&loaded.msn);
            print!("{}", render_summary(&label, &loaded.unit, &summarize(&ts)));
            if !loaded.description.is_empty() {
                println!("Description: {}", loaded.description);
            }
            if let Some(dir) = out {
                let files = write_series_plots(&ts, &dir.join("plots"))?;
                println!("\nWrote {} files to {}", files.len(), dir.display());
            }
            Ok(())
        }
        Command::Fit(args) => run_model(&args, args.model, false),
        Command::Forecast(args) => run_model(&args, args.model, true),
        Command::Compare(args) => run_model(&args, ModelChoice::AutoCompare, true),
    }
}

fn report_error(code: &str, class: &str, exit: u8, message: &str) {
    let record = json!({ "error": { "code": code, "class": class, "exit": exit, "message": message } });
    eprintln!("{record}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("usage error").trim_start_matches("error: ");
            report_error("usage", "usage", 2, first);
            eprint!("{text}");
            return ExitCode::from(2);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let class = e.class();
            let exit = exit_code(class);
            report_error(e.code(), class_name(class), exit, &e.to_string());
            eprintln!("error: {e}");
            if let Error::NotFound { .. } = e {
                eprintln!("hint: run `refcast list --input <file>` to see available MSN codes");
            }
            ExitCode::from(exit)
        }
    }
}
