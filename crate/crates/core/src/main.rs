fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(mpb_ldpc::cli::cli_main(args));
}
