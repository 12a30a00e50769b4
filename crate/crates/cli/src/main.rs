use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv = std::env::args().collect();
    let code = mgl::main_with(argv, &mut io::stdin().lock(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
