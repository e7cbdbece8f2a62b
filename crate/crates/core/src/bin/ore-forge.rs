fn main() { std::process::exit(ore_forge::cli::run()); }
