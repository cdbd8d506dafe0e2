use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use stratifold_cli::ast::EmitFormat;
use stratifold_cli::emit;
use stratifold_cli::eval::{eval_stmt, Env, StmtEffect};
use stratifold_cli::parse::parse;

/// Build, quotient, and unfold stratified spaces.
#[derive(Parser)]
#[command(name = "strat", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script file.
    Eval {
        file: PathBuf,
        /// Also emit the last bound space in this format.
        #[arg(long, value_enum)]
        emit: Option<EmitArg>,
        /// Write the emitted space here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Sample budget for tube-system validation.
        #[arg(long, default_value_t = 256)]
        samples: u64,
        /// Seed for the validation sampler.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate statements interactively.
    Repl {
        #[arg(long, default_value_t = 256)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Parse a script and report syntax errors without evaluating it.
    Check { file: PathBuf },
}

#[derive(Copy, Clone, ValueEnum)]
enum EmitArg {
    Dot,
    Json,
}

impl From<EmitArg> for EmitFormat {
    fn from(a: EmitArg) -> Self {
        match a {
            EmitArg::Dot => EmitFormat::Dot,
            EmitArg::Json => EmitFormat::Json,
        }
    }
}

const OK: u8 = 0;
const FAILED: u8 = 1;
const BAD_INPUT: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Eval { file, emit, out, samples, seed } => {
            run_eval(&file, emit.map(Into::into), out.as_deref(), samples, seed)
        }
        Command::Repl { samples, seed } => run_repl(samples, seed),
        Command::Check { file } => match load(&file) {
            Ok(_) => OK,
            Err(code) => code,
        },
    };
    ExitCode::from(code)
}

fn load(file: &std::path::Path) -> Result<stratifold_cli::ast::Script, u8> {
    let src = std::fs::read_to_string(file).map_err(|e| {
        eprintln!("{}: {e}", file.display());
        BAD_INPUT
    })?;
    parse(&src).map_err(|e| {
        eprintln!("{}:{e}", file.display());
        BAD_INPUT
    })
}

fn run_eval(
    file: &std::path::Path,
    emit_as: Option<EmitFormat>,
    out: Option<&std::path::Path>,
    samples: u64,
    seed: u64,
) -> u8 {
    let script = match load(file) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let mut env = Env::new(samples, seed);
    for stmt in &script.stmts {
        match eval_stmt(&mut env, stmt) {
            Ok(StmtEffect::None) => {}
            Ok(StmtEffect::Print(line)) => println!("{line}"),
            Ok(StmtEffect::Emit { format, value }) => print!("{}", emit::render(format, &value)),
            Err(e) => {
                eprintln!("{}:{e}", file.display());
                return FAILED;
            }
        }
    }
    if let Some(format) = emit_as {
        let Some((_, value)) = env.last_binding() else {
            eprintln!("{}: nothing to emit: the script binds no space", file.display());
            return FAILED;
        };
        let rendered = emit::render(format, value);
        match out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, rendered) {
                    eprintln!("{}: {e}", path.display());
                    return FAILED;
                }
            }
            None => print!("{rendered}"),
        }
    }
    OK
}

/// First word of a line, for deciding whether it already is a statement.
fn leading_word(line: &str) -> &str {
    let end = line
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(line.len());
    &line[..end]
}

fn run_repl(samples: u64, seed: u64) -> u8 {
    let mut env = Env::new(samples, seed);
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    eprintln!("strat repl; statements end with `;`, `q` quits");
    loop {
        eprint!("> ");
        let _ = std::io::stderr().flush();
        let Some(Ok(line)) = lines.next() else { break };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == "q" || line == "quit" {
            break;
        }
        // Bare expressions are printed; a missing final `;` is forgiven.
        let mut src = if matches!(leading_word(line), "let" | "print" | "emit") {
            line.to_string()
        } else {
            format!("print {}", line.trim_end_matches(';'))
        };
        if !src.ends_with(';') {
            src.push(';');
        }
        let script = match parse(&src) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("{e}");
                continue;
            }
        };
        for stmt in &script.stmts {
            match eval_stmt(&mut env, stmt) {
                Ok(StmtEffect::None) => {}
                Ok(StmtEffect::Print(text)) => println!("{text}"),
                Ok(StmtEffect::Emit { format, value }) => {
                    print!("{}", emit::render(format, &value))
                }
                Err(e) => {
                    eprintln!("{e}");
                    break;
                }
            }
        }
    }
    OK
}
