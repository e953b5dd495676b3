use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hklab::job::{self, CechAction, Command, CurveInput, Format, JobError, JobSpec};

#[derive(Parser)]
#[command(
    name = "hklab",
    version,
    about = "Hilbert-Kunz functions, syzygy bundles and Frobenius on plane curves over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: FormatArg,

    /// Cache results under this directory.
    #[arg(long, global = true, env = "HKLAB_CACHE")]
    cache_dir: Option<PathBuf>,

    /// Echo the parsed job and curve instead of running it.
    #[arg(long, global = true)]
    dump: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ActionArg {
    Matrix,
    Orbit,
}

#[derive(Args)]
struct CurveArg {
    #[arg(long)]
    curve: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hilbert-Kunz function of an ideal on the curve.
    Hk {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, default_value = "X,Y,Z")]
        ideal: String,
        #[arg(long, default_value_t = 3)]
        e_max: u32,
    },
    /// Semistability of Frobenius pull-backs of a rank-2 syzygy bundle.
    Hn {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        gens: String,
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i32>,
        #[arg(long, default_value_t = 2)]
        e_max: u32,
    },
    /// Frobenius on H^1(O_C(m)): matrix or orbit of a class.
    Cech {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i32,
        #[arg(long, value_enum, default_value = "matrix")]
        action: ActionArg,
        #[arg(long)]
        class: Option<String>,
        #[arg(long, default_value_t = 8)]
        steps: usize,
    },
    /// Hasse-Witt matrix, p-rank and Frobenius-fixed classes.
    Prank {
        #[command(flatten)]
        curve: CurveArg,
    },
    /// Bounds and trigger margins for a Frobenius descent sequence.
    Descent {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        g: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        deg: i64,
        #[arg(long)]
        m_gg: i64,
        #[arg(long)]
        deg_o1: i64,
        /// Comma-separated `q:e` pairs.
        #[arg(long, default_value = "")]
        seq: String,
    },
    /// Runs the acceptance checks; exits nonzero if any fails.
    PaperSuite {
        /// Directory of `<name>.curve` files replacing the bundled ones.
        #[arg(long)]
        curve_dir: Option<PathBuf>,
    },
}

fn build(cmd: Cmd) -> Result<Command, JobError> {
    Ok(match cmd {
        Cmd::Hk {
            curve,
            ideal,
            e_max,
        } => Command::Hk {
            curve: CurveInput::read(&curve.curve)?,
            ideal,
            e_max,
        },
        Cmd::Hn {
            curve,
            gens,
            twist,
            e_max,
        } => Command::Hn {
            curve: CurveInput::read(&curve.curve)?,
            gens,
            twist,
            e_max,
        },
        Cmd::Cech {
            curve,
            twist,
            action,
            class,
            steps,
        } => Command::Cech {
            curve: CurveInput::read(&curve.curve)?,
            twist,
            action: match action {
                ActionArg::Matrix => CechAction::Matrix,
                ActionArg::Orbit => CechAction::Orbit,
            },
            class,
            steps,
        },
        Cmd::Prank { curve } => Command::Prank {
            curve: CurveInput::read(&curve.curve)?,
        },
        Cmd::Descent {
            r,
            g,
            deg,
            m_gg,
            deg_o1,
            seq,
        } => Command::Descent {
            r,
            g,
            deg,
            m_gg,
            deg_o1,
            seq,
        },
        Cmd::PaperSuite { curve_dir } => Command::paper_suite(curve_dir)?,
    })
}

fn color_enabled(stream_is_tty: bool) -> bool {
    if std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty()) {
        return false;
    }
    if std::env::var_os("FORCE_COLOR").is_some_and(|v| !v.is_empty() && v != "0") {
        return true;
    }
    stream_is_tty
}

fn colorize(text: &str) -> String {
    text.replace("PASS", "\x1b[32mPASS\x1b[0m")
        .replace("FAIL", "\x1b[31mFAIL\x1b[0m")
}

fn emit(text: &str, format: Format) {
    let mut out = std::io::stdout().lock();
    let text = if format == Format::Text && color_enabled(std::io::stdout().is_terminal()) {
        colorize(text)
    } else {
        text.to_string()
    };
    let _ = out.write_all(text.as_bytes());
}

fn report_error(err: &JobError, format: Format) {
    let mut stderr = std::io::stderr().lock();
    if format == Format::Json {
        let _ = writeln!(stderr, "{}", err.to_json());
    } else {
        let kind = serde_json::to_value(err.kind).expect("kind serializes");
        let kind = kind.as_str().unwrap_or("error");
        let prefix = if color_enabled(std::io::stderr().is_terminal()) {
            format!("\x1b[31merror[{kind}]\x1b[0m")
        } else {
            format!("error[{kind}]")
        };
        let _ = writeln!(stderr, "{prefix}: {err}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Text => Format::Text,
    };
    let command = match build(cli.command) {
        Ok(c) => c,
        Err(e) => {
            report_error(&e, format);
            return ExitCode::from(e.kind.exit_code() as u8);
        }
    };
    let spec = JobSpec { command, format };
    if cli.dump {
        return match spec.dump() {
            Ok(v) => {
                emit(
                    &format!("{}\n", serde_json::to_string(&v).expect("dump serializes")),
                    Format::Json,
                );
                ExitCode::SUCCESS
            }
            Err(e) => {
                report_error(&e, format);
                ExitCode::from(e.kind.exit_code() as u8)
            }
        };
    }
    match job::run(&spec, cli.cache_dir.as_deref()) {
        Ok(record) => {
            emit(&job::render(&spec.command, &record.payload, format), format);
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(text) = job::render_failure(&spec.command, &e, format) {
                emit(&text, format);
            }
            report_error(&e, format);
            ExitCode::from(e.kind.exit_code() as u8)
        }
    }
}
