// Growth-bound boxes for a quadrotor swarm with and without the potential
// field coupling.

use interval_reach::models::{make_quadrotor_apf, make_quadrotor_swarm, ApfParams, QuadrotorParams, QUAD_STATES};
use interval_reach::{growth_bound, IntervalVector, ReachProblem};

fn main() -> interval_reach::Result<()> {
    let k = 4;
    let params = QuadrotorParams { k, ..Default::default() };
    // Two pairs along the diagonal so every nearest neighbor is unambiguous.
    let spots = [1.0, 2.0, 5.0, 6.0];
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for s in spots {
        lower.extend([s - 0.1, s - 0.1, s - 0.1, -0.01, -0.01, -0.01]);
        upper.extend([s + 0.1, s + 0.1, s + 0.1, 0.01, 0.01, 0.01]);
        lower.extend([0.0; 6]);
        upper.extend([0.0; 6]);
    }
    let initial = IntervalVector::new(lower, upper)?;
    let torques = IntervalVector::new(vec![-0.001; 3 * k], vec![0.001; 3 * k])?;

    for (label, model) in [
        ("independent", make_quadrotor_swarm(params)?),
        ("potential field", make_quadrotor_apf(params, ApfParams::default())?),
    ] {
        let problem = ReachProblem::new(model, initial.clone(), torques.clone(), 0.0, 1.0, 0.01)?;
        let b = growth_bound(&problem, 1)?.final_box().clone();
        let r = b.half_width();
        println!("{label}:");
        for q in 0..k {
            let s = q * QUAD_STATES;
            println!(
                "  quad {q}: position half-widths {:.3} {:.3} {:.3}, center {:.3} {:.3} {:.3}",
                r[s],
                r[s + 1],
                r[s + 2],
                b.center()[s],
                b.center()[s + 1],
                b.center()[s + 2]
            );
        }
    }
    Ok(())
}
