use animalab::enumeration::first_layer_law;
use animalab::exact::to_f64;
use animalab::kernels::{enumerate_row, KernelKind};
use animalab::AdmissibleSet;

#[test]
fn first_layer_approaches_kernel_row() {
    let d = AdmissibleSet::new(vec![0, 2]).unwrap();
    let row = enumerate_row(KernelKind::Uip, &d).unwrap();
    let mut tvs = Vec::new();
    for n in [6, 9, 12] {
        let law = first_layer_law(&d, n).unwrap();
        let mut tv = 0.0;
        for (l, p) in &row.entries {
            tv += (to_f64(p) - law.get(l).map_or(0.0, to_f64)).abs();
        }
        for (l, q) in &law {
            if !row.entries.contains_key(l) {
                tv += to_f64(q);
            }
        }
        tvs.push(tv / 2.0);
    }
    println!("{tvs:?}");
    assert!(tvs[0] > tvs[1] && tvs[1] > tvs[2], "{tvs:?}");
}
