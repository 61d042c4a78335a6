use std::io::Write;
use std::process::exit;

use clap::Parser;
use quatroots_cli::{run, Args};

fn main() {
    let args = Args::parse();
    let (mut out, mut err) = (String::new(), String::new());
    let code = run(&args, &mut std::io::stdin().lock(), &mut out, &mut err);
    let _ = std::io::stdout().write_all(out.as_bytes());
    let _ = std::io::stderr().write_all(err.as_bytes());
    exit(code);
}
