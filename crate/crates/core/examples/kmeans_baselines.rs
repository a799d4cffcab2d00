//! The K-means building blocks on their own: seeding strategies, Lloyd's
//! iteration and its Hamerly-accelerated twin.

use std::time::Instant;

use hgmeans::dataset::{generate_gmm, GmmSpec};
use hgmeans::kmeans::{
    hamerly_kmeans, lloyd_kmeans_traced, seed_kmeanspp, seed_random_samples, MAX_ITER,
};
use hgmeans::rng::stream;

fn main() -> hgmeans::Result<()> {
    let (ds, ..) = generate_gmm(&GmmSpec::new(15, 10, 5_000, 11))?;
    let m = 15;
    let mut rng = stream(11, 0);

    let init = seed_random_samples(&ds, m, &mut rng)?;
    let t = Instant::now();
    let (lloyd, trace) = lloyd_kmeans_traced(&ds, &init, MAX_ITER);
    let lloyd_time = t.elapsed();
    let t = Instant::now();
    let hamerly = hamerly_kmeans(&ds, &init, MAX_ITER);
    let hamerly_time = t.elapsed();

    println!("random-sample seed, {} iterations", lloyd.iterations);
    println!("  objective per iteration: {:.1} -> {:.1}", trace[0], trace[trace.len() - 1]);
    println!("  Lloyd   {:.3} in {lloyd_time:?}", lloyd.cost);
    println!("  Hamerly {:.3} in {hamerly_time:?}", hamerly.cost);
    println!("  same assignment: {}", lloyd.member == hamerly.member);

    let mut best = f64::INFINITY;
    for _ in 0..10 {
        let r = hamerly_kmeans(&ds, &seed_kmeanspp(&ds, m, &mut rng)?, MAX_ITER);
        best = best.min(r.cost);
    }
    println!("kmeans++ seeds, best of 10: {best:.3}");
    Ok(())
}
