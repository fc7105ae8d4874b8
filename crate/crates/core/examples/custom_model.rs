// A user-defined two-state system with hand-written growth dynamics and a
// decomposition function, run through all three methods.

use interval_reach::{run_method, IntervalVector, Method, MonteCarloSpec, ReachProblem, SystemModel};

fn main() -> interval_reach::Result<()> {
    // x1' = -x1 + x2 + p,  x2' = -2 x2 + 0.5 x1
    let model = SystemModel::from_fn("coupled", 2, 1, |i, _, x, p| match i {
        0 => -x[0] + x[1] + p[0],
        _ => -2.0 * x[1] + 0.5 * x[0],
    })?
    .with_growth_fn(|i, _, r, w| match i {
        0 => -r[0] + r[1] + w[0],
        _ => -2.0 * r[1] + 0.5 * r[0],
    })?
    // Cooperative, so f itself is a decomposition.
    .with_decomposition_fn(|i, _, x, p, _, _| match i {
        0 => -x[0] + x[1] + p[0],
        _ => -2.0 * x[1] + 0.5 * x[0],
    })
    .input_affine(true);

    let problem = ReachProblem::new(
        model,
        IntervalVector::new(vec![0.9, -0.1], vec![1.1, 0.1])?,
        IntervalVector::new(vec![-0.2], vec![0.2])?,
        0.0,
        2.0,
        0.01,
    )?;
    for method in Method::ALL {
        let tube = run_method(method, &problem, &MonteCarloSpec::default(), 1)?;
        let b = tube.final_box();
        println!(
            "{method:<20} x1 [{:.4}, {:.4}]  x2 [{:.4}, {:.4}]",
            b.lower()[0],
            b.upper()[0],
            b.lower()[1],
            b.upper()[1]
        );
    }
    Ok(())
}
