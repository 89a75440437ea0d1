use ars3d::sample::{SampleCfg, DEFAULT_SEED};
use ars3d_cli::commands::{self, Outcome};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "ars3d",
    version,
    about = "Validate, classify, and verify almost-Riemannian structures on G(theta)"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a document against the structure definition
    Validate { path: String },
    /// Classify a rank-two structure and print its normalizer
    Classify { path: String },
    /// Export a t-slice of the singular locus as CSV
    Locus {
        path: String,
        /// Slice coordinate
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Window as x0,x1,y0,y1
        #[arg(long, default_value = "-2,2,-2,2", allow_hyphen_values = true)]
        window: String,
        /// Grid resolution per axis
        #[arg(long, default_value_t = 64)]
        res: usize,
        /// CSV destination; stdout when omitted
        #[arg(long)]
        out: Option<String>,
    },
    /// Verify the document's candidate map as a self-isometry
    Verify {
        path: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Sampling box as t_half_width,v_half_width
        #[arg(long = "box", default_value = "2,2", allow_hyphen_values = true)]
        boxes: String,
    },
    /// Reproduce the rank-deficient isometry counterexample
    DemoCounterexample {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Sampling box as t_half_width,v_half_width
        #[arg(long = "box", default_value = "2,2", allow_hyphen_values = true)]
        boxes: String,
        /// Swap in an invertible field; the demo map then fails
        #[arg(long)]
        rank_two_field: bool,
    },
}

fn parse_floats(text: &str, n: usize, what: &str) -> Result<Vec<f64>, Outcome> {
    let parts: Result<Vec<f64>, _> = text.split(',').map(|p| p.trim().parse()).collect();
    match parts {
        Ok(v) if v.len() == n => Ok(v),
        _ => Err(Outcome {
            stdout: String::new(),
            stderr: format!("{what} must be {n} comma-separated numbers, got {text:?}"),
            code: commands::EXIT_USAGE,
        }),
    }
}

fn sample_cfg(samples: usize, seed: u64, boxes: &str) -> Result<SampleCfg, Outcome> {
    let b = parse_floats(boxes, 2, "--box")?;
    Ok(SampleCfg { samples, seed, t_box: b[0], v_box: b[1] })
}

fn dispatch(cmd: Cmd) -> Outcome {
    match cmd {
        Cmd::Validate { path } => commands::cmd_validate(&path),
        Cmd::Classify { path } => commands::cmd_classify(&path),
        Cmd::Locus { path, t, window, res, out } => {
            let w = match parse_floats(&window, 4, "--window") {
                Ok(w) => w,
                Err(outcome) => return outcome,
            };
            commands::cmd_locus(&path, t, (w[0], w[1], w[2], w[3]), res, out.as_deref())
        }
        Cmd::Verify { path, samples, seed, boxes } => match sample_cfg(samples, seed, &boxes)
        {
            Ok(cfg) => commands::cmd_verify(&path, &cfg),
            Err(outcome) => outcome,
        },
        Cmd::DemoCounterexample { samples, seed, boxes, rank_two_field } => {
            match sample_cfg(samples, seed, &boxes) {
                Ok(cfg) => commands::cmd_demo_counterexample(&cfg, rank_two_field),
                Err(outcome) => outcome,
            }
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => commands::EXIT_USAGE,
            };
            // clap renders its own message (help text or the usage error)
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let outcome = dispatch(cli.cmd);
    if !outcome.stdout.is_empty() {
        print!("{}", outcome.stdout);
    }
    if !outcome.stderr.is_empty() {
        eprintln!("{}", outcome.stderr.trim_end());
    }
    std::process::exit(outcome.code);
}
