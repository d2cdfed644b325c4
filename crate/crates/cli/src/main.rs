use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use qes_cli::doc::ErrorDoc;
use qes_cli::render::render;
use qes_cli::{run, Cli, RunConfig};

fn fail(doc: ErrorDoc, code: u8) -> ExitCode {
    eprintln!("{}", serde_json::to_string(&doc).expect("error document serializes"));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(ErrorDoc::new("usage", e.render().to_string().trim().to_string()), 2),
    };
    let cfg = match RunConfig::from_cli(cli) {
        Ok(cfg) => cfg,
        Err(e) => return fail(ErrorDoc::from_error(&e), 2),
    };
    let doc = match run(&cfg) {
        Ok(doc) => doc,
        Err(e) => return fail(ErrorDoc::from_error(&e), 2),
    };
    let text = match render(&doc, cfg.format) {
        Ok(text) => text,
        Err(e) => return fail(ErrorDoc::from_error(&e), 2),
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                return fail(ErrorDoc::new("io", format!("cannot write {}: {e}", path.display())), 2);
            }
        }
        None => print!("{text}"),
    }
    let failed = doc.failed_checks();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        let mut err = ErrorDoc::new("check_failed", format!("{} check(s) failed", failed.len()));
        err.error.failed = failed.iter().map(|c| c.name.clone()).collect();
        fail(err, 1)
    }
}
