//! Minimum-cost assignment and the crossover built on it.

use hgmeans::genetic::{crossover_mx, mutate, Individual};
use hgmeans::kmeans::{decode_membership, Centers};
use hgmeans::dataset::Dataset;
use hgmeans::matching::{solve_assignment, CostMatrix};
use hgmeans::rng::stream;

fn main() -> hgmeans::Result<()> {
    let costs = CostMatrix::from_rows(&[[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]])?;
    let (perm, total) = solve_assignment(&costs);
    println!("assignment {perm:?} with total cost {total}");

    let ds = Dataset::from_rows(&[
        [0.0, 0.0], [0.5, 0.2], [5.0, 5.0], [5.5, 4.8], [10.0, 0.0], [9.6, 0.4],
    ])?;
    let parent = |rows: &[[f64; 2]], alpha| {
        let centers = Centers::from_rows(rows).unwrap();
        let member = decode_membership(&ds, &centers);
        Individual::new(&ds, centers, member, alpha)
    };
    // Same clusters, different center order and slightly different positions.
    let p1 = parent(&[[0.2, 0.1], [5.2, 4.9], [9.8, 0.2]], 0.2);
    let p2 = parent(&[[9.9, 0.1], [0.3, 0.0], [5.0, 5.0]], 0.6);

    let pairing = solve_assignment(&CostMatrix::from_centers(&p1.centers, &p2.centers)).0;
    println!("parent-1 center i pairs with parent-2 center {pairing:?}");

    let mut rng = stream(5, 0);
    for _ in 0..3 {
        let (child, alpha) = crossover_mx(&p1, &p2, &mut rng);
        let rows: Vec<&[f64]> = child.iter().collect();
        println!("child alpha={alpha:.2} centers={rows:?}");
        let (mutated, alpha) = mutate(child, alpha, &ds, &mut rng);
        let rows: Vec<&[f64]> = mutated.iter().collect();
        println!("  mutated alpha={alpha:.2} centers={rows:?}");
    }
    Ok(())
}
