//! Generate an overlapping Gaussian mixture and see how well the solver
//! recovers the generating components, next to a K-means++ baseline.

use std::ops::ControlFlow;

use hgmeans::dataset::{generate_accepted_mixture, GmmSpec, MAX_MIXTURE_ATTEMPTS};
use hgmeans::genetic::{hgmeans_run, HgParams};
use hgmeans::kmeans::{hamerly_kmeans, seed_kmeanspp, MAX_ITER};
use hgmeans::metrics::{centroid_index, crand, nmi};
use hgmeans::rng::{purpose, stream};

fn main() -> hgmeans::Result<()> {
    let spec = GmmSpec::new(10, 8, 2_000, 3);
    let (ds, truth, mixture, sep, attempts) = generate_accepted_mixture(&spec, MAX_MIXTURE_ATTEMPTS)?;
    println!(
        "mixture m={} d={} n={} accepted after {attempts} attempt(s), {:.1}% of pairs ½-separated",
        spec.m,
        spec.d,
        spec.n,
        100.0 * sep.frac_half_separated
    );

    let mut rng = stream(3, purpose::SEEDING);
    let baseline = (0..20)
        .map(|_| hamerly_kmeans(&ds, &seed_kmeanspp(&ds, spec.m, &mut rng).unwrap(), MAX_ITER))
        .min_by(|a, b| a.cost.total_cmp(&b.cost))
        .unwrap();
    let hg = hgmeans_run(&ds, &HgParams::new(spec.m).with_seed(3), |_| ControlFlow::Continue(()))?.best;

    println!("{:<22} {:>14} {:>7} {:>7} {:>3}", "solver", "objective", "CRand", "NMI", "CI");
    for (name, centers, member, cost) in [
        ("kmeans++ best of 20", &baseline.centers, &baseline.member, baseline.cost),
        ("hgmeans", &hg.centers, &hg.member, hg.cost),
    ] {
        println!(
            "{name:<22} {cost:>14.4} {:>7.4} {:>7.4} {:>3}",
            crand(truth.labels(), member)?,
            nmi(truth.labels(), member)?,
            centroid_index(centers, &mixture.means)
        );
    }
    Ok(())
}
