use std::process;

fn main() {
    process::exit(hoopoe::harness::cli_main(std::env::args_os()));
}
