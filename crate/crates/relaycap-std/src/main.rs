use relaycap::cli;
use relaycap::parallel::Runner;

fn main() {
    let runner = Runner::from_env();
    let code = cli::run(
        std::env::args_os(),
        &runner,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr(),
    );
    std::process::exit(code);
}
