fn main() {
    let out = isokit_cli::run(std::env::args_os());
    print!("{}", out.stdout);
    std::process::exit(out.code);
}
