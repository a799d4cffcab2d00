//! External validity indices and the percentage gap.

use hgmeans::kmeans::Centers;
use hgmeans::metrics::{centroid_index, crand, gap_percent, nmi, nmi_with, NmiNormalization};

fn main() -> hgmeans::Result<()> {
    let truth = [0, 0, 0, 1, 1, 1, 2, 2, 2];
    let found = [1, 1, 1, 0, 0, 2, 2, 2, 2];
    let relabeled = [2, 2, 2, 0, 0, 0, 1, 1, 1];

    println!("CRand(truth, relabeled) = {:.4}", crand(&truth, &relabeled)?);
    println!("CRand(truth, found)     = {:.4}", crand(&truth, &found)?);
    println!("NMI(truth, found)       = {:.4}", nmi(&truth, &found)?);
    for norm in [NmiNormalization::Max, NmiNormalization::Geometric] {
        println!("  {norm:?} normalization: {:.4}", nmi_with(&truth, &found, norm)?);
    }

    let means = Centers::from_rows(&[[0.0, 0.0], [10.0, 0.0], [0.0, 10.0], [10.0, 10.0]])?;
    // Two centers share one true cluster and one true cluster has none.
    let solution = Centers::from_rows(&[[0.5, 0.0], [-0.5, 0.0], [10.0, 0.5], [9.5, 10.0]])?;
    println!("CI = {}", centroid_index(&solution, &means));

    println!("gap of 101.5 against 100 = {:.2}%", gap_percent(101.5, 100.0)?);
    Ok(())
}
