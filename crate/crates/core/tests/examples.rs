macro_rules! example {
    ($name:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(check_dataset, "check_dataset.rs");
example!(small_dimension_areas, "small_dimension_areas.rs");
example!(area_by_goods, "area_by_goods.rs");
example!(area_bounds, "area_bounds.rs");
example!(separable_preferences, "separable_preferences.rs");
example!(experimental_designs, "experimental_designs.rs");
example!(strict_potentials, "strict_potentials.rs");
example!(dataset_files, "dataset_files.rs");

#[test]
fn check_dataset_runs() {
    check_dataset::run_example().unwrap();
}

#[test]
fn small_dimension_areas_runs() {
    small_dimension_areas::run_example().unwrap();
}

#[test]
fn area_by_goods_runs() {
    area_by_goods::run_example().unwrap();
}

#[test]
fn area_bounds_runs() {
    area_bounds::run_example().unwrap();
}

#[test]
fn separable_preferences_runs() {
    separable_preferences::run_example().unwrap();
}

#[test]
fn experimental_designs_runs() {
    experimental_designs::run_example().unwrap();
}

#[test]
fn strict_potentials_runs() {
    strict_potentials::run_example().unwrap();
}

#[test]
fn dataset_files_runs() {
    dataset_files::run_example().unwrap();
}
