fn main() -> std::process::ExitCode {
    posesynth::cli::main()
}
