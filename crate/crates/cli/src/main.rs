use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use hitlaw::distfn::csv::{read_linear, read_step, sniff_kind, write_linear, write_step, CsvKind};
use hitlaw::distfn::{
    forward_transform, inverse_transform, make_law, validate_class_f, validate_class_ftilde, ClassReport,
    Law, LimitLaw, Verdict,
};
use hitlaw::ErrorKind;

mod config;
mod experiment;
mod svg;

use config::{ExperimentConfig, Overrides};

#[derive(Parser)]
#[command(name = "hitlaw", version, about = "Hitting and return time laws of dynamical systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a key = value config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long = "cap-factor")]
        cap_factor: Option<f64>,
        /// Evaluation grid as start,stop,step.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Output directory; results go to <out>/<name>/.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the hitting/return duality to a CSV function.
    Transform {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Direction::Forward)]
        direction: Direction,
        /// Output CSV; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a closed-form limit law as CSV.
    Law {
        /// `exp[:grid=h,horizon=H]`, `uniform-hitting`, `cf-hitting:θ,ω` or `cf-return:θ,ω`.
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a CSV function for membership in its class.
    Validate {
        input: PathBuf,
        /// Bound on the unobserved tail of a return law that does not reach 1.
        #[arg(long = "tail-bound")]
        tail_bound: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    /// Return law (step function) to hitting law.
    Forward,
    /// Hitting law (piecewise linear) to return law.
    Inverse,
}

enum Function {
    Step(hitlaw::distfn::StepFn<f64>),
    Linear(hitlaw::distfn::PiecewiseLinear<f64>),
}

fn read_input(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_function(path: &Path, kind: CsvKind) -> anyhow::Result<Function> {
    let text = read_input(path)?;
    let f = match kind {
        CsvKind::Step => Function::Step(read_step(text.as_bytes())?),
        CsvKind::Linear => Function::Linear(read_linear(text.as_bytes())?),
    };
    Ok(f)
}

fn write_function(f: &Function, out: Option<&Path>) -> anyhow::Result<()> {
    let mut buf = Vec::new();
    match f {
        Function::Step(s) => write_step(s, &mut buf)?,
        Function::Linear(l) => write_linear(l, &mut buf)?,
    }
    match out {
        Some(p) => fs::write(p, buf).with_context(|| format!("cannot write {}", p.display()))?,
        None => io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn describe(what: &str, report: &ClassReport<f64>) -> String {
    let verdict = match report.verdict {
        Verdict::Member => "member",
        Verdict::NotMember => "not a member",
        Verdict::Indeterminate => "indeterminate (does not reach 1; pass --tail-bound)",
    };
    let mut s = format!("{what}: {verdict}");
    if let Some(c) = report.complement_integral {
        s.push_str(&format!(", integral of 1 - F~ = {c}"));
    }
    for v in &report.violations {
        s.push_str(&format!("\n  {} violated at t = {} by {}", v.rule.name(), v.witness, v.magnitude));
    }
    s
}

fn report_of(f: &Function, tail_bound: Option<f64>) -> (String, ClassReport<f64>) {
    match f {
        Function::Step(s) => ("return law".into(), validate_class_ftilde(s, tail_bound)),
        Function::Linear(l) => ("hitting law".into(), validate_class_f(l)),
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run {
            config,
            seed,
            samples,
            cap_factor,
            grid,
            out,
        } => {
            let text = read_input(&config)?;
            let overrides = Overrides {
                seed,
                samples,
                cap_factor,
                grid,
                out,
            };
            let cfg = ExperimentConfig::parse(&text, &overrides)?;
            let result = experiment::run(&cfg)?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            println!("{}", experiment::SUMMARY_HEADER);
            for (i, r) in result.sets.iter().enumerate() {
                println!("{}", r.summary_row(i + 1));
            }
            eprintln!("wrote {}", result.dir.display());
        }
        Command::Transform { input, direction, out } => {
            let kind = match direction {
                Direction::Forward => CsvKind::Step,
                Direction::Inverse => CsvKind::Linear,
            };
            let f = read_function(&input, kind)?;
            let (what, report) = report_of(&f, None);
            if report.verdict == Verdict::NotMember {
                eprintln!("warning: input {}", describe(&what, &report));
            } else {
                eprintln!("input {}", describe(&what, &report));
            }
            let g = match &f {
                Function::Step(s) => Function::Linear(forward_transform(s)),
                Function::Linear(l) => Function::Step(inverse_transform(l)?),
            };
            let (what, report) = report_of(&g, None);
            eprintln!("output {}", describe(&what, &report));
            write_function(&g, out.as_deref())?;
        }
        Command::Law { spec, out } => {
            let law: LimitLaw = spec.parse()?;
            let f = match make_law(&law)? {
                Law::Step(s) => Function::Step(s),
                Law::Linear(l) => Function::Linear(l),
            };
            write_function(&f, out.as_deref())?;
        }
        Command::Validate { input, tail_bound } => {
            let kind = sniff_kind(&read_input(&input)?)?;
            let f = read_function(&input, kind)?;
            let (what, report) = report_of(&f, tail_bound);
            println!("{}", describe(&what, &report));
            if report.verdict == Verdict::NotMember {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<hitlaw::Error>() {
            return match e.kind() {
                ErrorKind::Parse => 2,
                ErrorKind::Numeric => 3,
                ErrorKind::Sampling => 4,
            };
        }
        if cause.downcast_ref::<io::Error>().is_some() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
