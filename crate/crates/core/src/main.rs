use std::process::ExitCode;

use qinit::harness::cli::parse_cli;
use qinit::harness::run_experiment;

fn main() -> ExitCode {
    let config = match parse_cli(std::env::args()) {
        Ok(config) => config,
        Err(e) => {
            if e.exit_code == 0 {
                print!("{}", e.message);
                return ExitCode::SUCCESS;
            }
            eprint!("{}", e.message);
            if !e.message.ends_with('\n') {
                eprintln!();
            }
            return ExitCode::from(2);
        }
    };
    match run_experiment(&config) {
        Ok((traces, summary)) => {
            println!(
                "{} round(s) x {} epoch(s) written to {}",
                traces.len(),
                config.epochs,
                config.output_dir.display()
            );
            println!(
                "final loss mean {:.6} (std {:.6}), final grad-norm mean {:.6}",
                summary.final_loss_mean, summary.final_loss_std, summary.final_grad_mean
            );
            if let Some(fstar) = summary.fstar {
                println!("exact ground energy {fstar:.6}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
