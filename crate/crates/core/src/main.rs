fn main() {
    std::process::exit(fractal_curvature::cli::main_with_args(std::env::args_os()));
}
