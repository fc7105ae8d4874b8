// Parses a configuration, runs it, and prints where the tube and report went.

use interval_reach::{runner, RunConfig};

const CONFIG: &str = "\
# Van der Pol, Monte Carlo with a fixed seed
model = vdp
method = monte-carlo
initial.lower = 1.25, 2.35
initial.upper = 1.55, 2.45
t1 = 0.5
h = 0.01
tube_stride = 10
epsilon = 0.05
delta = 0.01
seed = 3
format = csv
";

fn main() -> interval_reach::Result<()> {
    let config = RunConfig::from_text(CONFIG)?;
    println!("normalized config:\n{}", config.to_text());
    let dir = std::env::temp_dir().join("interval-reach-example");
    std::fs::create_dir_all(&dir)?;
    let outcome = runner::run(&config, &dir)?;
    println!("tube:   {}", outcome.tube_path.display());
    println!("report: {}", outcome.report_path.display());
    print!("{}", std::fs::read_to_string(&outcome.tube_path)?);
    Ok(())
}
