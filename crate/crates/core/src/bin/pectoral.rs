use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use pectoral::fuzzyseg::FuzzyOverrides;
use pectoral::harness::batch::{evaluate_batch, BatchConfig};
use pectoral::harness::{generate_phantom, suppress_with, PhantomSpec};
use pectoral::imageio::{load_pgm, save_mask, save_pgm};
use pectoral::labeling::CclParams;
use pectoral::{Error, MethodId, MethodParams};

#[derive(Parser)]
#[command(
    name = "pectoral",
    version,
    about = "Pectoral muscle suppression for MLO mammograms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Remove the pectoral muscle from one image.
    Suppress {
        #[arg(long)]
        input: PathBuf,
        /// ccl, fuzzy, line, ccl+fuzzy, ccl+line or fuzzy+line
        #[arg(long)]
        method: MethodId,
        #[arg(long)]
        out_image: PathBuf,
        #[arg(long)]
        out_mask: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Run methods over a directory of PGMs and write a metrics CSV.
    Eval {
        #[arg(long)]
        input_dir: PathBuf,
        /// Directory holding `<stem>_gt.pgm` pectoral masks.
        #[arg(long)]
        gt_dir: Option<PathBuf>,
        /// Comma-separated method list, or `all`.
        #[arg(long, default_value = "all")]
        methods: String,
        #[arg(long)]
        out: PathBuf,
        /// Where predicted masks are written (default: `masks/` beside the CSV).
        #[arg(long)]
        mask_dir: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Write synthetic phantoms with ground-truth masks.
    Phantom {
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long, default_value_t = 512)]
        height: usize,
        #[arg(long, default_value_t = 0.0)]
        noise_sigma: f64,
        #[arg(long, default_value_t = 220)]
        pectoral_level: u16,
        #[arg(long, default_value_t = 120)]
        breast_level: u16,
        #[arg(long, default_value_t = 20)]
        background_level: u16,
    },
}

#[derive(Args)]
struct Tuning {
    /// Fuzzy crossover intensity (membership 0.5).
    #[arg(long)]
    crossover: Option<f64>,
    /// Fuzzy transition half-width.
    #[arg(long)]
    bandwidth: Option<f64>,
    #[arg(long)]
    int_exponent: Option<f64>,
    #[arg(long)]
    defuzz_threshold: Option<f64>,
    /// CCL row-march cut, as a fraction of maxval.
    #[arg(long, default_value_t = 0.1)]
    delta_frac: f64,
}

impl Tuning {
    fn params(&self) -> MethodParams {
        MethodParams {
            ccl: CclParams {
                delta_frac: self.delta_frac,
            },
            fuzzy: FuzzyOverrides {
                crossover: self.crossover,
                bandwidth: self.bandwidth,
                int_exponent: self.int_exponent,
                defuzz_threshold: self.defuzz_threshold,
            },
        }
    }
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Suppress {
            input,
            method,
            out_image,
            out_mask,
            tuning,
        } => {
            let img = load_pgm(&input).map_err(|e| Error::Stage {
                stage: "read",
                source: Box::new(e),
            })?;
            let out = suppress_with(&img, method, &tuning.params())?;
            save_pgm(&out_image, &out.image)?;
            save_mask(&out_mask, &out.pectoral)?;
            info!(
                "{}: {:?} orientation, {} pectoral pixels removed",
                input.display(),
                out.orientation,
                out.pectoral.count()
            );
        }
        Command::Eval {
            input_dir,
            gt_dir,
            methods,
            out,
            mask_dir,
            tuning,
        } => {
            let cfg = BatchConfig {
                input_dir,
                gt_dir,
                methods: MethodId::parse_list(&methods)?,
                out_csv: out,
                mask_dir,
                params: tuning.params(),
            };
            let reports = evaluate_batch(&cfg)?;
            info!("wrote {} rows to {}", reports.len(), cfg.out_csv.display());
        }
        Command::Phantom {
            count,
            seed,
            out_dir,
            width,
            height,
            noise_sigma,
            pectoral_level,
            breast_level,
            background_level,
        } => {
            let base = PhantomSpec {
                width,
                height,
                noise_sigma,
                pectoral_level,
                breast_level,
                background_level,
                ..Default::default()
            };
            base.validate()?;
            let gt_dir = out_dir.join("gt");
            fs::create_dir_all(&gt_dir).map_err(|source| Error::UnwritableOutput {
                path: gt_dir.clone(),
                source,
            })?;
            for (i, spec) in base.series(count, seed).iter().enumerate() {
                let p = generate_phantom(spec)?;
                let id = format!("phantom_{i:03}");
                save_pgm(out_dir.join(format!("{id}.pgm")), &p.image)?;
                save_mask(gt_dir.join(format!("{id}_gt.pgm")), &p.pectoral)?;
                save_mask(gt_dir.join(format!("{id}_breast.pgm")), &p.breast)?;
            }
            info!("wrote {count} phantoms to {}", out_dir.display());
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    let decode_failure = matches!(e, Error::Stage { stage: "read", .. });
    if e.is_io() || decode_failure {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
