// Growth-bound tube of the Van der Pol oscillator, checked against sampled
// trajectories.

use interval_reach::models::make_vdp;
use interval_reach::{growth_bound, IntegrationJob, IntervalVector, ReachProblem, Rk4Engine};

fn main() -> interval_reach::Result<()> {
    let model = make_vdp(1.0)?;
    let initial = IntervalVector::new(vec![1.25, 2.35], vec![1.55, 2.45])?;
    let problem =
        ReachProblem::new(model.clone(), initial, IntervalVector::empty_dims(), 0.0, 0.5, 0.01)?.with_stride(10);
    let tube = growth_bound(&problem, 1)?;
    for (t, b) in tube.times.iter().zip(&tube.boxes) {
        println!("t = {t:.2}  x in [{:.4}, {:.4}]  y in [{:.4}, {:.4}]", b.lower()[0], b.upper()[0], b.lower()[1], b.upper()[1]);
    }

    let engine = Rk4Engine::serial();
    let mut inside = 0;
    let grid = 20;
    for a in 0..=grid {
        for b in 0..=grid {
            let x0 = [1.25 + 0.3 * a as f64 / grid as f64, 2.35 + 0.1 * b as f64 / grid as f64];
            let job = IntegrationJob::new(model.rhs(), &x0, &[], 0.0, 0.5, 0.001);
            if tube.final_box().contains(engine.integrate(&job)?.final_state())? {
                inside += 1;
            }
        }
    }
    println!("{inside} of {} grid trajectories end inside the final box", (grid + 1) * (grid + 1));
    Ok(())
}
