fn main() {
    std::process::exit(iot_sla::cli::main_with_std());
}
