use std::collections::{BTreeMap, BTreeSet};

use brw_core::kernels::KernelSpec;
use brw_core::rng::replica_rng;
use brw_core::sim::{
    detect_full_cover, run_replica, step_multiplicity, Population, SimConfig, SimMode, Start,
};
use brw_core::stats::{chi_square_two_sample, run_replicas};

#[test]
fn parity_law_on_the_cube() {
    let v0 = 0b1011_0010;
    let cfg = SimConfig::new(KernelSpec::single_flip(8).unwrap(), SimMode::Simple, 20)
        .with_start(Start::Vertex(v0))
        .with_snapshots(1)
        .with_seed(3);
    for traj in run_replicas(&cfg, 50).unwrap() {
        for snap in &traj.snapshots {
            assert!(snap.states.iter().all(|&(v, _)| (v ^ v0).count_ones() % 2 == snap.t % 2));
        }
    }
}

#[test]
fn active_sets_grow_inside_the_neighbourhood() {
    for kernel in [KernelSpec::single_flip(9).unwrap(), KernelSpec::mixture(9, 3).unwrap(), KernelSpec::complete_bipartite(64).unwrap()] {
        for c in [2u32, 3] {
            let cfg = SimConfig::new(kernel.clone(), SimMode::Simple, 15).with_c(c).with_snapshots(1);
            for traj in run_replicas(&cfg, 20).unwrap() {
                for pair in traj.snapshots.windows(2) {
                    let (now, next) = (&pair[0].states, &pair[1].states);
                    assert!(!next.is_empty() && next.len() <= c as usize * now.len());
                    let hood: BTreeSet<u64> = now.iter().flat_map(|&(v, _)| kernel.support_neighbors(v)).collect();
                    assert!(next.iter().all(|(w, _)| hood.contains(w)));
                }
            }
        }
    }
}

#[test]
fn populations_are_exact_powers() {
    for c in [1u32, 2, 3] {
        let cfg = SimConfig::new(KernelSpec::mixture(10, 7).unwrap(), SimMode::Multiplicity, 12).with_c(c);
        for traj in run_replicas(&cfg, 10).unwrap() {
            for r in &traj.records {
                assert_eq!(r.population, (c as u64).pow(r.t));
                assert!(r.active_count <= r.population);
            }
        }
    }
}

/// Reference stepping: every child of every particle draws its own move.
fn naive_step(pop: &BTreeMap<u64, u64>, kernel: &KernelSpec, c: u32, rng: &mut brw_core::rng::SimRng) -> BTreeMap<u64, u64> {
    let mut next = BTreeMap::new();
    for (&v, &m) in pop {
        for _ in 0..m * c as u64 {
            *next.entry(kernel.sample(v, rng)).or_insert(0) += 1;
        }
    }
    next
}

#[test]
fn multinomial_stepping_matches_particle_stepping() {
    let reps = 100_000u64;
    for kernel in [KernelSpec::single_flip(3).unwrap(), KernelSpec::mixture(3, 3).unwrap()] {
        let mut outcomes: BTreeMap<Vec<u64>, (u64, u64)> = BTreeMap::new();
        for r in 0..reps {
            let mut rng = replica_rng(11, r);
            let mut pop = Population::new(8, 26);
            pop.add(0, 1).unwrap();
            for _ in 0..3 {
                pop = step_multiplicity(&pop, &kernel, 2, &mut rng).unwrap();
            }
            let key: Vec<u64> = (0..8).map(|v| pop.get(v)).collect();
            outcomes.entry(key).or_default().0 += 1;

            let mut rng = replica_rng(12, r);
            let mut naive = BTreeMap::from([(0u64, 1u64)]);
            for _ in 0..3 {
                naive = naive_step(&naive, &kernel, 2, &mut rng);
            }
            let key: Vec<u64> = (0..8).map(|v| naive.get(&v).copied().unwrap_or(0)).collect();
            outcomes.entry(key).or_default().1 += 1;
        }
        let (a, b): (Vec<u64>, Vec<u64>) = outcomes.values().copied().unzip();
        let test = chi_square_two_sample(&a, &b).unwrap();
        assert!(test.p_value > 0.01, "{kernel:?}: {test:?}");
    }
}

#[test]
fn start_vertex_does_not_matter() {
    let kernel = KernelSpec::mixture(6, 2).unwrap();
    let sizes = |start: u64, seed: u64| {
        let cfg = SimConfig::new(kernel.clone(), SimMode::Simple, 6).with_start(Start::Vertex(start)).with_seed(seed);
        let mut h = vec![0u64; 65];
        for t in run_replicas(&cfg, 20_000).unwrap() {
            h[t.final_record().active_count as usize] += 1;
        }
        h
    };
    let test = chi_square_two_sample(&sizes(0, 1), &sizes(0b101101, 2)).unwrap();
    assert!(test.p_value > 0.01, "{test:?}");
}

#[test]
fn full_cover_on_a_small_mixture() {
    let cfg = SimConfig::new(KernelSpec::mixture(4, 2).unwrap(), SimMode::Simple, 200).with_snapshots(1);
    let runs = run_replicas(&cfg, 100).unwrap();
    let covered = runs.iter().filter(|t| detect_full_cover(t).unwrap().is_some()).count();
    assert!(covered > 50, "{covered} of 100");
}

#[test]
fn full_cover_impossible_from_one_side_of_a_cube() {
    let cfg = SimConfig::new(KernelSpec::single_flip(3).unwrap(), SimMode::Simple, 200).with_snapshots(1).with_c(3);
    for t in run_replicas(&cfg, 30).unwrap() {
        assert_eq!(detect_full_cover(&t).unwrap(), None);
    }
}

#[test]
fn complete_bipartite_split_start_covers() {
    let cfg = SimConfig::new(KernelSpec::complete_bipartite(4).unwrap(), SimMode::Simple, 100)
        .with_start(Start::Vertices(vec![0, 4]))
        .with_snapshots(1);
    let runs = run_replicas(&cfg, 50).unwrap();
    assert!(runs.iter().any(|t| detect_full_cover(t).unwrap().is_some()));
    let one_side = SimConfig { start: Start::Vertex(0), ..cfg };
    assert!(run_replicas(&one_side, 20).unwrap().iter().all(|t| detect_full_cover(t).unwrap().is_none()));
}

fn step_table(n: u32, radius: u32) -> Vec<f64> {
    (0..=n).map(|a| if a < n - radius { 0.0 } else { 1.0 }).collect()
}

#[test]
fn affinity_step_function_support() {
    let target = 0b1111111;
    for (start, expected) in [(target, vec![3u32, 4, 6]), (target ^ 1, vec![3, 5, 7])] {
        let cfg = SimConfig::new(KernelSpec::single_flip(7).unwrap(), SimMode::AffinityDivision, 15)
            .with_division_table(step_table(7, 3))
            .with_target(target)
            .with_start(Start::Vertex(start));
        let mut support = BTreeSet::new();
        for t in run_replicas(&cfg, 100).unwrap() {
            let h = t.final_record().affinity.clone().unwrap();
            support.extend((0..=7u32).filter(|&a| h[a as usize] > 0));
        }
        assert_eq!(support.into_iter().collect::<Vec<_>>(), expected);
    }
}

#[test]
fn frozen_particles_accumulate_at_the_threshold() {
    let cfg = SimConfig::new(KernelSpec::single_flip(7).unwrap(), SimMode::AffinityDivision, 15)
        .with_division_table(step_table(7, 3))
        .with_target(0)
        .with_seed(8);
    let traj = run_replica(&cfg, 0).unwrap();
    let at_three: Vec<u64> = traj.records.iter().map(|r| r.affinity.as_ref().unwrap()[3]).collect();
    assert!(at_three.windows(2).all(|w| w[1] >= w[0]));
}
