// Two clusters separated along one axis, with a much larger spread along
// another: PCA follows the spread, log-cosh projection pursuit finds the
// clusters. Writes both scatter plots to the system temp directory.
//
// ```bash
// cargo run --example pca_vs_pp_clusters
// ```

use projpursuit::indexes::{LogCoshIndex, ProjectionIndex};
use projpursuit::plot::scatter_svg;
use projpursuit::pursuit::{embed, pca, prepare, pursue_k, PursuitConfig};
use projpursuit::synth::{two_clusters, TwoClusterSpec};

pub fn run_example() -> projpursuit::Result<()> {
    let spec = TwoClusterSpec {
        n: 1000,
        ..Default::default()
    };
    let c = two_clusters(spec, 11)?;
    let labels: Vec<String> = c.labels.iter().map(|l| format!("cluster{l}")).collect();

    let pc = pca(&c.data, 2)?;
    let pca_overlap = pc.components.rows()[0].dot(&c.separation_axis).abs();
    let pca_z = embed(&c.data.centered(), &pc.components)?;

    let index = LogCoshIndex::default();
    let prepared = prepare(&c.data, index.preparation())?;
    let fit = pursue_k(
        &prepared.data,
        &index,
        2,
        &PursuitConfig::default().with_seed(11),
    )?;
    let axis = prepared.input_direction(&fit.directions.rows()[0])?;
    let pp_overlap = axis.dot(&c.separation_axis).abs();
    let pp_z = embed(&prepared.data, &fit.directions)?;

    println!("|<first axis, separation axis>|: PCA {pca_overlap:.3}, pursuit {pp_overlap:.3}");
    println!("log-cosh index of the pursuit axes: {:?}", fit.values);

    let dir = std::env::temp_dir();
    for (name, z) in [("pca", &pca_z), ("pp", &pp_z)] {
        let points: Vec<(f64, f64)> = (0..z.n_rows())
            .map(|i| (z.get(i, 0), z.get(i, 1)))
            .collect();
        let path = dir.join(format!("two_clusters_{name}.svg"));
        std::fs::write(&path, scatter_svg(&points, Some(&labels), name))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> projpursuit::Result<()> {
    run_example()
}
