use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use homalg::exactla::FieldSpec;
use homalg_cli::{run, Job, Task, Theory, EXIT_INPUT};

#[derive(Parser, Debug)]
#[command(name = "homalg", version, about = "Exact homological algebra workbench")]
struct Args {
    #[arg(value_enum)]
    task: Task,
    /// Problem file; repeat to merge several into one job.
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    #[arg(long, value_enum)]
    theory: Theory,
    /// `Q` or `Fp:P`; must agree with any field named in the inputs.
    #[arg(long, value_parser = parse_field)]
    field: Option<FieldSpec>,
    #[arg(long, default_value_t = 4)]
    window: usize,
    /// Also tabulate products of basis classes.
    #[arg(long)]
    ring: bool,
    #[arg(long)]
    check: Option<String>,
    /// Human-readable summary instead of JSON.
    #[arg(long)]
    text: bool,
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    FieldSpec::parse(s).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let job = Job {
        task: args.task,
        theory: args.theory,
        inputs: args.input,
        window: args.window,
        field: args.field,
        ring: args.ring,
        check: args.check,
    };
    match run(&job) {
        Ok(report) => {
            if args.text {
                print!("{}", report.to_text());
            } else {
                println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("report serializes"));
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
