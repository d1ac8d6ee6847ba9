//! Runs every file under examples/ as a test.

macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $module() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example!(polyspectral_means, "polyspectral_means.rs");
example!(simulate_scenarios, "simulate_scenarios.rs");
example!(feature_matrix, "feature_matrix.rs");
example!(kmeans_clustering, "kmeans_clustering.rs");
example!(medoids, "medoids.rs");
example!(cluster_validation, "cluster_validation.rs");
example!(hopkins_vat, "hopkins_vat.rs");
example!(accuracy_metrics, "accuracy_metrics.rs");
example!(stock_pipeline, "stock_pipeline.rs");
