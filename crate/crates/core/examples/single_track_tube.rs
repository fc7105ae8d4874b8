// Position tube of the single-track vehicle, written as CSV.

use interval_reach::models::{make_single_track, SingleTrackParams};
use interval_reach::{growth_bound, IntervalVector, ReachProblem};

fn main() -> interval_reach::Result<()> {
    let model = make_single_track(SingleTrackParams::default())?;
    let initial = IntervalVector::new(
        vec![-0.05, -0.05, -0.005, 14.9, -0.01, -0.01, -0.005],
        vec![0.05, 0.05, 0.005, 15.1, 0.01, 0.01, 0.005],
    )?;
    // Growth bound on this model needs a point input: steering rate and acceleration.
    let inputs = IntervalVector::point(&[0.02, 0.3])?;
    let problem = ReachProblem::new(model, initial, inputs, 0.0, 1.0, 0.005)?.with_stride(20);
    let tube = growth_bound(&problem, 1)?;
    println!("t,x_lo,x_hi,y_lo,y_hi,yaw_lo,yaw_hi");
    for (t, b) in tube.times.iter().zip(&tube.boxes) {
        println!(
            "{t:.2},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4}",
            b.lower()[0],
            b.upper()[0],
            b.lower()[1],
            b.upper()[1],
            b.lower()[4],
            b.upper()[4]
        );
    }
    Ok(())
}
