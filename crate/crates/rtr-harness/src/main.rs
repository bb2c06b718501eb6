fn main() {
    std::process::exit(rtr_harness::cli_main());
}
