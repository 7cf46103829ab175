//! Binary entry point; all command logic lives in the library crate.

fn main() {
    std::process::exit(causalcap_cli::run(std::env::args_os()));
}
