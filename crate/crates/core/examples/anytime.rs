//! Watch the search progress and stop it from the callback once a
//! wall-clock budget, counted from the end of initialization, runs out.

use std::ops::ControlFlow;
use std::time::Duration;

use hgmeans::dataset::{generate_gmm, GmmSpec};
use hgmeans::genetic::{hgmeans_run, HgParams};

fn main() -> hgmeans::Result<()> {
    let (ds, ..) = generate_gmm(&GmmSpec::new(25, 5, 4_000, 8))?;
    let budget = Duration::from_millis(1500);
    let mut last = f64::INFINITY;
    let mut started = Duration::ZERO;

    let outcome = hgmeans_run(&ds, &HgParams::new(25).with_seed(8), |p| {
        if p.best_cost < last {
            println!("{:>6} it  {:>8.3}s  {:.4}", p.iteration, p.elapsed.as_secs_f64(), p.best_cost);
            last = p.best_cost;
        }
        if p.iteration == 0 {
            started = p.elapsed;
        }
        if p.elapsed - started >= budget {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    println!(
        "stopped: {:?} after {} iterations, best {:.4}",
        outcome.termination, outcome.iterations, outcome.best.cost
    );
    Ok(())
}
