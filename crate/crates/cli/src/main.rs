use std::io::{stderr, stdout};

fn main() {
    let code = smallknot_cli::run(std::env::args(), &mut stdout().lock(), &mut stderr().lock());
    std::process::exit(code);
}
