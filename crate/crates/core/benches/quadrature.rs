use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use spinhall::quadrature::{momenta_numeric, QuadratureSpec};
use spinhall::tilt::tilted_centroid_numeric;
use spinhall::{BeamGeometry, Execution, ModeSuperposition, PolarizationState, TiltFrame};

fn executions() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn momenta(c: &mut Criterion) {
    let geom = BeamGeometry::new(40.0).unwrap();
    let modes = ModeSuperposition::from_terms([
        ((0, 0), Complex64::new(1.0, 0.0)),
        ((1, 2), Complex64::new(0.3, -0.2)),
        ((3, 0), Complex64::new(0.0, 0.4)),
    ])
    .unwrap()
    .normalized()
    .unwrap();
    let pol = PolarizationState::circular(true);
    let mut group = c.benchmark_group("momenta_numeric");
    group.sample_size(10);
    for nodes in [101, 201] {
        for (name, exec) in executions() {
            let spec = QuadratureSpec::new(8.0, nodes).unwrap().with_execution(exec);
            group.bench_with_input(BenchmarkId::new(name, nodes), &spec, |b, spec| {
                b.iter(|| momenta_numeric(&modes, &pol, &geom, 0.0, spec).unwrap())
            });
        }
    }
    group.finish();
}

fn tilted_centroid(c: &mut Criterion) {
    let geom = BeamGeometry::new(200.0).unwrap();
    let frame = TiltFrame::new(0.3, 1.0).unwrap();
    let mut group = c.benchmark_group("tilted_centroid_numeric");
    group.sample_size(10);
    for (name, exec) in executions() {
        let spec = QuadratureSpec::default().with_execution(exec);
        group.bench_function(name, |b| b.iter(|| tilted_centroid_numeric(1.0, &geom, &frame, 0.0, &spec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, momenta, tilted_centroid);
criterion_main!(benches);
