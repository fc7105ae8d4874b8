// Laub-Loomis and the controlled quadrotor: growth bound against a Monte
// Carlo hull.

use interval_reach::models::{make_arch_quadrotor, make_laub_loomis, ArchQuadrotorParams};
use interval_reach::{growth_bound, monte_carlo, IntervalVector, MonteCarloSpec, ReachProblem, SystemModel};

fn compare(model: SystemModel, initial: IntervalVector, t1: f64, h: f64, shown: &[usize]) -> interval_reach::Result<()> {
    println!("{}:", model.name());
    let problem = ReachProblem::new(model, initial, IntervalVector::empty_dims(), 0.0, t1, h)?;
    let gb = growth_bound(&problem, 1)?;
    let mc = monte_carlo(&problem, &MonteCarloSpec::new(0.05, 0.01, 1), 1)?;
    let (g, m) = (gb.final_box(), mc.final_box());
    for &i in shown {
        println!(
            "  x{}: GB [{:8.4}, {:8.4}]  MC [{:8.4}, {:8.4}]",
            i + 1,
            g.lower()[i],
            g.upper()[i],
            m.lower()[i],
            m.upper()[i]
        );
    }
    println!("  MC box inside GB box: {}", m.subset_of(g)?);
    Ok(())
}

fn main() -> interval_reach::Result<()> {
    let center = [1.2, 1.05, 1.5, 2.4, 1.0, 0.1, 0.45];
    let ll = IntervalVector::new(center.iter().map(|c| c - 0.01).collect(), center.iter().map(|c| c + 0.01).collect())?;
    compare(make_laub_loomis()?, ll, 2.0, 0.01, &[0, 3, 6])?;

    let mut lo = vec![-0.4; 6];
    let mut hi = vec![0.4; 6];
    lo.extend([0.0; 6]);
    hi.extend([0.0; 6]);
    let quad = IntervalVector::new(lo, hi)?;
    compare(make_arch_quadrotor(ArchQuadrotorParams::default())?, quad, 1.0, 0.005, &[0, 2, 5])
}
