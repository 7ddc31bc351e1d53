fn main() {
    let stdin = Box::new(std::io::stdin().lock());
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr();
    let code = nbasis::cli::run(std::env::args_os(), stdin, &mut stdout, &mut stderr);
    std::process::exit(code);
}
