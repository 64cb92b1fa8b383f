use std::collections::HashMap;

fn main() {
    let env: HashMap<String, String> = std::env::vars().collect();
    std::process::exit(depthlab_cli::run_command(std::env::args(), &env));
}
