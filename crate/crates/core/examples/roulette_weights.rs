//! How the mutation weight shapes center relocation.

use hgmeans::dataset::Dataset;
use hgmeans::genetic::roulette;
use hgmeans::kmeans::{distances_to_nearest, Centers};
use hgmeans::rng::stream;

fn main() -> hgmeans::Result<()> {
    let ds = Dataset::from_rows(&[[0.0], [1.0], [2.0], [4.0], [8.0]])?;
    let centers = Centers::from_rows(&[[0.0], [4.0]])?;
    // Center 1 is being relocated; weights are distances to the others.
    let w = distances_to_nearest(&ds, &centers, &[0]);
    println!("distances {w:?}");

    let mut rng = stream(1, 0);
    for alpha in [0.0, 0.5, 1.0] {
        let p = roulette::probabilities(&w, alpha);
        let mut counts = [0u32; 5];
        for _ in 0..20_000 {
            counts[roulette::sample(&w, alpha, &mut rng)] += 1;
        }
        let freq: Vec<String> = counts.iter().map(|c| format!("{:.3}", *c as f64 / 20_000.0)).collect();
        let p: Vec<String> = p.iter().map(|x| format!("{x:.3}")).collect();
        println!("alpha={alpha}: P={p:?} observed={freq:?}");
    }
    Ok(())
}
