// Integrates a long diffusion chain with the state-parallel RK4 engine and
// checks that every worker count produces the same final state.

use std::time::Instant;

use interval_reach::{IntegrationJob, Rk4Engine, SystemModel};

fn main() -> interval_reach::Result<()> {
    let n = 200_000;
    let chain = SystemModel::from_fn("chain", n, 0, move |i, _, x, _| {
        let left = if i > 0 { x[i - 1] } else { 0.0 };
        let right = if i + 1 < n { x[i + 1] } else { 0.0 };
        left + right - 2.0 * x[i]
    })?;
    let x0: Vec<f64> = (0..n).map(|i| if i < n / 2 { 1.0 } else { 0.0 }).collect();
    let job = IntegrationJob::new(chain.rhs(), &x0, &[], 0.0, 1.0, 0.05);

    let cores = std::thread::available_parallelism().map_or(1, |c| c.get());
    let mut reference: Option<Vec<f64>> = None;
    for workers in [1, 2, cores.max(4)] {
        let engine = Rk4Engine::new(workers)?;
        let start = Instant::now();
        let traj = engine.integrate(&job)?;
        let secs = start.elapsed().as_secs_f64();
        let x = traj.final_state().to_vec();
        let same = reference.as_ref().is_none_or(|r| *r == x);
        println!("workers {workers:>3}: {secs:.3} s, x[n/2] = {:.6}, identical = {same}", x[n / 2]);
        reference.get_or_insert(x);
    }
    Ok(())
}
