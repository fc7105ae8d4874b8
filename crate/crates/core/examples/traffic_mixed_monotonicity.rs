// Compares growth-bound and mixed-monotonicity boxes on the traffic network.

use interval_reach::models::{make_traffic, TrafficParams};
use interval_reach::{growth_bound, mixed_monotonicity, IntervalVector, ReachProblem};

fn main() -> interval_reach::Result<()> {
    let n = 50;
    let model = make_traffic(TrafficParams { n, ..Default::default() })?;
    let initial = IntervalVector::new(vec![20.0; n], vec![40.0; n])?;
    let inflow = IntervalVector::new(vec![30.0], vec![40.0])?;
    let problem = ReachProblem::new(model, initial, inflow, 0.0, 60.0, 1.0)?;

    let gb = growth_bound(&problem, 1)?;
    let mm = mixed_monotonicity(&problem, 1)?;
    println!("segment  growth-bound            mixed-monotonicity");
    for i in [0, 1, 2, 10, 25, 49] {
        let (g, m) = (gb.final_box(), mm.final_box());
        println!(
            "{i:>7}  [{:7.2}, {:7.2}]      [{:7.2}, {:7.2}]",
            g.lower()[i],
            g.upper()[i],
            m.lower()[i],
            m.upper()[i]
        );
    }
    println!(
        "state memory: growth bound {} B, mixed monotonicity {} B",
        gb.report.state_memory_bytes, mm.report.state_memory_bytes
    );
    Ok(())
}
