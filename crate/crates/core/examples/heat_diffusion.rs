// Heat in a cube whose lower half starts warm with uncertain temperature.

use interval_reach::models::{make_heat3d, HeatParams};
use interval_reach::{growth_bound, mixed_monotonicity, IntervalVector, ReachProblem};

fn main() -> interval_reach::Result<()> {
    let l = 8;
    let model = make_heat3d(HeatParams { l, ..Default::default() })?;
    let n = l * l * l;
    let warm = n / 2;
    let lower: Vec<f64> = (0..n).map(|i| if i < warm { 0.9 } else { 0.0 }).collect();
    let upper: Vec<f64> = (0..n).map(|i| if i < warm { 1.1 } else { 0.0 }).collect();
    let problem = ReachProblem::new(
        model,
        IntervalVector::new(lower, upper)?,
        IntervalVector::empty_dims(),
        0.0,
        0.1,
        0.002,
    )?
    .with_stride(10);

    let gb = growth_bound(&problem, 1)?;
    let mm = mixed_monotonicity(&problem, 1)?;
    let column = |k: usize| k * l * l;
    println!("t      bottom (GB)          top (GB)             top (MM)");
    for (idx, t) in gb.times.iter().enumerate() {
        let (g, m) = (&gb.boxes[idx], &mm.boxes[idx]);
        let (b, top) = (column(0), column(l - 1));
        println!(
            "{t:.3}  [{:.4}, {:.4}]   [{:.4}, {:.4}]   [{:.4}, {:.4}]",
            g.lower()[b],
            g.upper()[b],
            g.lower()[top],
            g.upper()[top],
            m.lower()[top],
            m.upper()[top]
        );
    }
    Ok(())
}
