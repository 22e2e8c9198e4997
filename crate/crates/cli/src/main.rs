use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use anyforest::order::OrderKind;
use anyforest::{
    accuracy_curve, enumerate_all_orders, export_forest, import_forest, load_csv, mean_accuracy,
    nma, optimal_order, precompute_routing, split, train_forest, unoptimal_order, Error,
    FeatureSubsample, LabelColumn, StepOrder, TrainConfig, DEFAULT_LATTICE_CAP,
};
use anyforest_cli::experiment::{parse_feature_subsample, run_experiment, ExperimentConfig};

const EXIT_CONFIG: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_LATTICE_REFUSAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "anyforest",
    about = "Anytime random-forest inference with optimized step orders",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    /// CSV dataset path
    #[arg(long)]
    data: PathBuf,
    /// Label column: "last", a column index, or a header name
    #[arg(long, default_value = "last")]
    label_col: String,
    /// Seed for the train/ordering/test split (and any seeded generator)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Train a forest on the training split and write it as JSON
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        trees: usize,
        #[arg(long)]
        depth: usize,
        /// Disable bootstrap resampling
        #[arg(long)]
        no_bootstrap: bool,
        /// Features tried per split: "sqrt", "all", or a count
        #[arg(long, default_value = "sqrt")]
        features: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a step order on the ordering split
    Order {
        #[command(flatten)]
        data: DataArgs,
        /// Forest JSON file
        #[arg(long)]
        model: PathBuf,
        /// Generator name
        #[arg(long)]
        order: String,
        /// State-count cap for the exact searches
        #[arg(long, default_value_t = DEFAULT_LATTICE_CAP)]
        lattice_cap: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate an order on the test split: accuracy curve and NMA
    Run {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        model: PathBuf,
        /// Step-order file produced by `order`
        #[arg(long)]
        order_file: PathBuf,
        /// Write the JSON result here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a full experiment grid from a JSON config file
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Cross-check the exact search against exhaustive enumeration on a
    /// small synthetic forest
    Oracle {
        #[arg(long, default_value_t = 3)]
        trees: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ordering-set size
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap's help/version output is a success, not a config error
            if err.use_stderr() {
                eprint!("{err}");
                return ExitCode::from(EXIT_CONFIG);
            }
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::LatticeCapExceeded { .. } => EXIT_LATTICE_REFUSAL,
        Error::Io(_)
        | Error::Csv(_)
        | Error::EmptyDataset
        | Error::TooFewSamples { .. }
        | Error::NonNumericFeature { .. }
        | Error::LabelColumnNotFound(_)
        | Error::EmptyOrderingSet
        | Error::DimensionMismatch { .. }
        | Error::InvalidModel(_)
        | Error::SchemaVersion { .. } => EXIT_DATA,
        _ => EXIT_CONFIG,
    }
}

fn parse_label_column(spec: &str) -> LabelColumn {
    if spec == "last" {
        LabelColumn::Last
    } else if let Ok(index) = spec.parse::<usize>() {
        LabelColumn::Index(index)
    } else {
        LabelColumn::Name(spec.to_string())
    }
}

fn dispatch(command: Command) -> anyforest::Result<()> {
    match command {
        Command::Train {
            data,
            trees,
            depth,
            no_bootstrap,
            features,
            out,
        } => {
            let dataset = load_csv(&data.data, &parse_label_column(&data.label_col))?;
            let splits = split(&dataset, data.seed)?;
            let forest = train_forest(
                &splits.train,
                &TrainConfig {
                    n_trees: trees,
                    max_depth: depth,
                    seed: data.seed,
                    bootstrap: !no_bootstrap,
                    feature_subsample: parse_feature_subsample(&features)?,
                },
            )?;
            fs::write(&out, export_forest(&forest))?;
            println!(
                "trained {} trees (budgets {:?}, {} total steps) on {} samples -> {}",
                forest.n_trees(),
                forest.budgets(),
                forest.total_steps(),
                splits.train.len(),
                out.display()
            );
            Ok(())
        }
        Command::Order {
            data,
            model,
            order,
            lattice_cap,
            out,
        } => {
            let kind = OrderKind::parse(&order)?;
            let dataset = load_csv(&data.data, &parse_label_column(&data.label_col))?;
            let splits = split(&dataset, data.seed)?;
            let forest = import_forest(&fs::read_to_string(&model)?)?;
            let step_order = kind.generate(&forest, &splits.ordering, lattice_cap, data.seed)?;
            fs::write(&out, step_order.to_text())?;
            let routing = precompute_routing(&forest, &splits.ordering)?;
            println!(
                "{} order: {} steps, mean accuracy {:.4} on the ordering split -> {}",
                kind,
                step_order.total_steps(),
                mean_accuracy(&routing, splits.ordering.labels(), &step_order),
                out.display()
            );
            Ok(())
        }
        Command::Run {
            data,
            model,
            order_file,
            out,
        } => {
            let dataset = load_csv(&data.data, &parse_label_column(&data.label_col))?;
            let splits = split(&dataset, data.seed)?;
            let forest = import_forest(&fs::read_to_string(&model)?)?;
            let order = StepOrder::from_text(&fs::read_to_string(&order_file)?)?;
            let curve = accuracy_curve(&forest, &order, &splits.test)?;
            let result = serde_json::json!({
                "curve": curve,
                "mean_accuracy": curve.iter().sum::<f64>() / curve.len() as f64,
                "final_accuracy": curve.last(),
                "nma": nma(&curve)?,
                "nma_formula": anyforest::NMA_FORMULA_VERSION,
                "steps": curve.len() - 1,
                "test_samples": splits.test.len(),
            });
            let text = serde_json::to_string_pretty(&result)?;
            match out {
                Some(path) => fs::write(path, text)?,
                None => println!("{text}"),
            }
            Ok(())
        }
        Command::Experiment { config } => {
            let config = ExperimentConfig::from_file(&config)?;
            let reports = run_experiment(&config)?;
            let refused = reports.iter().filter(|r| r.refused).count();
            println!(
                "wrote {} reports ({refused} refusals) -> {}",
                reports.len(),
                config.out_dir.join("reports.jsonl").display()
            );
            Ok(())
        }
        Command::Oracle {
            trees,
            depth,
            seed,
            samples,
        } => {
            let train = anyforest::synth::noise_dataset(64, 3, 2, seed);
            let ordering = anyforest::synth::noise_dataset(samples, 3, 2, seed ^ 0x5eed);
            let forest = train_forest(
                &train,
                &TrainConfig {
                    n_trees: trees,
                    max_depth: depth,
                    seed,
                    bootstrap: true,
                    feature_subsample: FeatureSubsample::All,
                },
            )?;
            let routing = precompute_routing(&forest, &ordering)?;
            let labels = ordering.labels();
            let mut best = f64::NEG_INFINITY;
            let mut worst = f64::INFINITY;
            let mut count = 0usize;
            for order in enumerate_all_orders(&forest.budgets())? {
                let acc = mean_accuracy(&routing, labels, &order);
                best = best.max(acc);
                worst = worst.min(acc);
                count += 1;
            }
            let optimal = optimal_order(&forest, &ordering, DEFAULT_LATTICE_CAP)?;
            let unoptimal = unoptimal_order(&forest, &ordering, DEFAULT_LATTICE_CAP)?;
            let optimal_acc = mean_accuracy(&routing, labels, &optimal);
            let unoptimal_acc = mean_accuracy(&routing, labels, &unoptimal);
            println!("enumerated {count} distinct orders over budgets {:?}", forest.budgets());
            println!("optimal   mean accuracy {optimal_acc:.6} vs enumerated max {best:.6}");
            println!("unoptimal mean accuracy {unoptimal_acc:.6} vs enumerated min {worst:.6}");
            if optimal_acc == best && unoptimal_acc == worst {
                println!("oracle check: PASS");
                Ok(())
            } else {
                Err(Error::InvalidParameter(
                    "oracle check FAILED: search does not match enumeration".into(),
                ))
            }
        }
    }
}
