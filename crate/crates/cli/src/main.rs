use std::io::Write;
use std::process::ExitCode;

use askey_hankel_cli::{execute, output_path, Cli, EXIT_INPUT};
use clap::Parser;

fn run() -> Result<i32, askey_hankel_cli::CliError> {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return Ok(code);
        }
    };
    let out = execute(&cli)?;
    match output_path(&cli.global)? {
        Some(path) => std::fs::write(&path, &out.text)
            .map_err(|e| askey_hankel_cli::CliError::input(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
        }
    }
    for note in &out.notes {
        eprintln!("{note}");
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    let code = run().unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.code
    });
    ExitCode::from(code as u8)
}
