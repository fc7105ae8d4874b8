// Dimension and worker sweep of the traffic growth bound, printed as CSV.

use interval_reach::runner::{bench, bench_csv, BenchSpec};
use interval_reach::RunConfig;

fn main() -> interval_reach::Result<()> {
    // The bench tiles these boxes out to each swept dimension.
    let config = RunConfig::from_text(
        "model = traffic\n\
         param.n = 3\n\
         method = growth-bound\n\
         initial.lower = 20*3\n\
         initial.upper = 40*3\n\
         input.lower = 30\n\
         input.upper = 40\n\
         t1 = 100\n\
         h = 1\n",
    )?;
    let cores = std::thread::available_parallelism().map_or(1, |c| c.get());
    let spec = BenchSpec {
        dims: vec![1_000, 10_000, 100_000],
        workers: vec![1, cores],
        repetitions: 3,
    };
    print!("{}", bench_csv(&bench(&config, &spec)?));
    Ok(())
}
