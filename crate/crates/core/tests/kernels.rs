use brw_core::kernels::{dense_matrix, sample_neighbor, KernelSpec};
use brw_core::rng::replica_rng;
use brw_core::stats::chi_square_gof;
use brw_core::{Matrix, VertexLabel};

const DRAWS: u64 = 1_000_000;

fn kernels() -> Vec<KernelSpec> {
    vec![
        KernelSpec::single_flip(8).unwrap(),
        KernelSpec::power(6, 3).unwrap(),
        KernelSpec::power(5, 4).unwrap(),
        KernelSpec::mixture(5, 3).unwrap(),
        KernelSpec::mixture(8, 8).unwrap(),
        KernelSpec::lazy(0.5, KernelSpec::single_flip(6).unwrap()).unwrap(),
        KernelSpec::lazy(0.25, KernelSpec::mixture(6, 4).unwrap()).unwrap(),
        KernelSpec::complete(256).unwrap(),
        KernelSpec::complete_bipartite(64).unwrap(),
        KernelSpec::explicit(vec![vec![0.1, 0.6, 0.3], vec![0.5, 0.0, 0.5], vec![0.9, 0.1, 0.0]]).unwrap(),
    ]
}

#[test]
fn sampled_neighbours_follow_the_dense_row() {
    for (i, k) in kernels().into_iter().enumerate() {
        let m: Matrix = dense_matrix(&k).unwrap();
        let v = (k.state_count() - 1).min(0b101);
        let mut rng = replica_rng(100 + i as u64, 0);
        let mut counts = vec![0u64; m.dim()];
        for _ in 0..DRAWS {
            counts[k.sample(v, &mut rng) as usize] += 1;
        }
        let test = chi_square_gof(&counts, m.row(v as usize)).unwrap();
        assert!(test.p_value > 0.01, "{k:?}: {test:?}");
    }
}

#[test]
fn scattered_particles_follow_the_dense_row() {
    for (i, k) in kernels().into_iter().enumerate() {
        let m: Matrix = dense_matrix(&k).unwrap();
        let v = (k.state_count() - 1).min(0b11);
        let mut rng = replica_rng(200 + i as u64, 0);
        let mut counts = vec![0u64; m.dim()];
        // Large groups exercise the conditional-binomial path, small ones the per-child path.
        for group in [1u64, 3, 50, 10_000] {
            for _ in 0..DRAWS / group / 4 {
                k.scatter(v, group, &mut rng, &mut |w, c| counts[w as usize] += c);
            }
        }
        let test = chi_square_gof(&counts, m.row(v as usize)).unwrap();
        assert!(test.p_value > 0.01, "{k:?}: {test:?}");
    }
}

#[test]
fn parity_of_sampled_moves() {
    let mut rng = replica_rng(7, 7);
    for n in 2..=12 {
        let v = VertexLabel::new(0b10 & ((1 << n) - 1), n).unwrap();
        let flip = KernelSpec::single_flip(n).unwrap();
        for _ in 0..2000 {
            let w = sample_neighbor(&flip, v, &mut rng).unwrap();
            assert_eq!(brw_core::hamming(v, w).unwrap(), 1);
        }
        for k in 1..=5 {
            let pk = KernelSpec::power(n, k).unwrap();
            for _ in 0..500 {
                let w = sample_neighbor(&pk, v, &mut rng).unwrap();
                let changed = (v.weight() + w.weight()) % 2 == 1;
                assert_eq!(changed, k % 2 == 1);
            }
        }
    }
}

#[test]
fn complete_graph_sampling_is_uniform_off_the_diagonal() {
    let k = KernelSpec::complete(16).unwrap();
    let v = VertexLabel::new(6, 4).unwrap();
    let mut rng = replica_rng(1, 2);
    let mut counts = vec![0u64; 16];
    for _ in 0..160_000 {
        counts[sample_neighbor(&k, v, &mut rng).unwrap().bits() as usize] += 1;
    }
    assert_eq!(counts[6], 0);
    let mut expected = vec![1.0 / 15.0; 16];
    expected[6] = 0.0;
    assert!(chi_square_gof(&counts, &expected).unwrap().p_value > 0.01);
}

#[test]
fn sample_neighbor_checks_labels() {
    let k = KernelSpec::single_flip(4).unwrap();
    let mut rng = replica_rng(0, 0);
    assert!(sample_neighbor(&k, VertexLabel::new(1, 5).unwrap(), &mut rng).is_err());
    assert!(sample_neighbor(&k, VertexLabel::new(20, 5).unwrap(), &mut rng).is_err());
}
