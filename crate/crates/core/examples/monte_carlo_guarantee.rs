// Monte Carlo hull with the (epsilon, delta) sample count, then an empirical
// check of how much probability mass falls outside it.

use interval_reach::models::make_vdp;
use interval_reach::{coverage_estimate, monte_carlo, sample_count, IntervalVector, MonteCarloSpec, ReachProblem};

fn main() -> interval_reach::Result<()> {
    let model = make_vdp(1.0)?;
    let initial = IntervalVector::new(vec![1.25, 2.35], vec![1.55, 2.45])?;
    let problem = ReachProblem::new(model, initial, IntervalVector::empty_dims(), 0.0, 0.5, 0.01)?;

    for (epsilon, delta) in [(0.1, 0.05), (0.05, 0.01), (0.01, 0.001)] {
        let spec = MonteCarloSpec::new(epsilon, delta, 42);
        let tube = monte_carlo(&problem, &spec, 1)?;
        let outside = coverage_estimate(&problem, &tube, 20_000, 4242, 1)?;
        let b = tube.final_box();
        println!(
            "eps {epsilon:<5} delta {delta:<6} m = {:>5}  box x [{:.4}, {:.4}] y [{:.4}, {:.4}]  outside {outside:.4}",
            sample_count(2, epsilon, delta)?,
            b.lower()[0],
            b.upper()[0],
            b.lower()[1],
            b.upper()[1]
        );
    }
    Ok(())
}
