//! Structural facts about kernels: degrees, minimal transition entries, bipartiteness and
//! shared neighbourhoods.

use std::collections::{BTreeSet, VecDeque};

use super::spec::KernelSpec;
use super::KernelError;
use crate::scalar::{Real, Scalar};

/// Largest state space [`is_bipartite`] will traverse.
pub const MAX_BIPARTITE_STATES: u64 = 1 << 20;

/// Number of states reachable in one move (self included when the kernel can stay put).
pub fn degree(kernel: &KernelSpec) -> u64 {
    match kernel {
        KernelSpec::SingleFlip { n_bits } => *n_bits as u64,
        KernelSpec::Power { n_bits, k } => {
            (0..=(*k).min(*n_bits)).filter(|h| (k - h) % 2 == 0).map(|h| binomial_u64(*n_bits, h)).sum()
        }
        KernelSpec::Mixture { n_bits, k } => mixture_degree(*n_bits, *k).expect("validated kernel"),
        KernelSpec::CompleteGraph { n } => n - 1,
        KernelSpec::CompleteBipartite { half } => *half,
        KernelSpec::Lazy { base, .. } if !matches!(**base, KernelSpec::ExplicitMatrix(_)) => {
            degree(base) + u64::from(!base.has_transition(0, 0))
        }
        KernelSpec::Lazy { .. } | KernelSpec::ExplicitMatrix(_) => {
            (0..kernel.state_count()).map(|v| kernel.support_neighbors(v).len() as u64).max().unwrap_or(0)
        }
    }
}

/// Support size of the mixture of `1..=k` flips, by the recursion
///
/// ```text
/// d(N, 1) = N
/// d(N, N) = 2^N
/// d(N, 2) = N + d(N-1, 2)
/// d(N, k) = d(N-1, k-1) + d(N-1, k)      3 <= k <= N-1
/// ```
pub fn mixture_degree(n_bits: u32, k: u32) -> Result<u64, KernelError> {
    if n_bits == 0 || n_bits > super::vertex::MAX_DIM {
        return Err(KernelError::InvalidDimension(n_bits));
    }
    if k == 0 || k > n_bits {
        return Err(KernelError::InvalidParameter(format!("k must lie in 1..={n_bits}, got {k}")));
    }
    Ok(mixture_degree_table(n_bits, |x: u64| x, |a, b| a + b)[n_bits as usize][k as usize])
}

/// [`mixture_degree`] evaluated in floating point, for dimensions where the count
/// exceeds 64 bits.
pub fn mixture_degree_real<F: Real>(n_bits: u32, k: u32) -> Result<F, KernelError> {
    if n_bits == 0 {
        return Err(KernelError::InvalidDimension(n_bits));
    }
    if k == 0 || k > n_bits {
        return Err(KernelError::InvalidParameter(format!("k must lie in 1..={n_bits}, got {k}")));
    }
    Ok(mixture_degree_table(n_bits, F::of_u64, |a, b| a + b)[n_bits as usize][k as usize])
}

fn mixture_degree_table<V: Copy>(n_bits: u32, lift: impl Fn(u64) -> V, add: impl Fn(V, V) -> V) -> Vec<Vec<V>> {
    let n_max = n_bits as usize;
    let mut d = vec![vec![lift(0); n_max + 1]; n_max + 1];
    let mut full = lift(1);
    for n in 1..=n_max {
        full = add(full, full);
        d[n][1] = lift(n as u64);
        for k in 2..=n {
            d[n][k] = if k == n {
                full
            } else if k == 2 {
                add(lift(n as u64), d[n - 1][2])
            } else {
                add(d[n - 1][k - 1], d[n - 1][k])
            };
        }
    }
    d
}

fn binomial_u64(n: u32, h: u32) -> u64 {
    let h = h.min(n - h);
    (0..h as u64).fold(1u64, |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// Smallest non-zero entry of the `i`-th power of the single-flip matrix on `N` bits:
/// `i! / N^i` (and 1 for `i = 0`).
pub fn min_nonzero_entry_power<T: Scalar>(n_bits: u32, i: u32) -> Result<T, KernelError> {
    if n_bits == 0 {
        return Err(KernelError::InvalidDimension(n_bits));
    }
    if i > n_bits {
        return Err(KernelError::InvalidParameter(format!("power {i} exceeds dimension {n_bits}")));
    }
    Ok((1..=i as u64).fold(T::one(), |acc, j| acc * T::from_ratio(j, n_bits as u64)))
}

/// Whether the support graph of `kernel` admits a proper 2-colouring (no odd cycle).
///
/// A self-loop counts as an odd cycle. Kernels whose support is not connected are
/// reported as [`KernelError::Disconnected`].
pub fn is_bipartite(kernel: &KernelSpec) -> Result<bool, KernelError> {
    let n = kernel.state_count();
    if n > MAX_BIPARTITE_STATES {
        return Err(KernelError::SizeGuard { states: n, limit: MAX_BIPARTITE_STATES });
    }
    let masks = kernel.flip_masks();
    let mut colour: Vec<i8> = vec![-1; n as usize];
    let mut bipartite = true;
    let mut queue = VecDeque::from([0u64]);
    colour[0] = 0;
    let mut seen = 1u64;
    while let Some(u) = queue.pop_front() {
        let cu = colour[u as usize];
        let neighbours = match &masks {
            Some(m) => m.iter().map(|&x| u ^ x).collect(),
            None => kernel.support_neighbors(u),
        };
        for w in neighbours {
            let cw = &mut colour[w as usize];
            if *cw < 0 {
                *cw = 1 - cu;
                seen += 1;
                queue.push_back(w);
            } else if *cw == cu {
                bipartite = false;
            }
        }
    }
    if seen < n {
        return Err(KernelError::Disconnected);
    }
    Ok(bipartite)
}

/// Number of states that every vertex in `vertices` can move to.
pub fn common_neighbor_count(kernel: &KernelSpec, vertices: &[u64]) -> usize {
    let mut iter = vertices.iter();
    let Some(&first) = iter.next() else { return 0 };
    let mut common: BTreeSet<u64> = kernel.support_neighbors(first).into_iter().collect();
    for &v in iter {
        let nb: BTreeSet<u64> = kernel.support_neighbors(v).into_iter().collect();
        common.retain(|w| nb.contains(w));
    }
    common.len()
}

/// Largest number of common neighbours shared by `s` distinct vertices of the hypercube,
/// by exhaustive enumeration. Requires a single-flip kernel with `N <= 5` and `2 <= s <= 4`.
pub fn max_common_neighbors(kernel: &KernelSpec, s: usize) -> Result<u32, KernelError> {
    let KernelSpec::SingleFlip { n_bits } = *kernel else {
        return Err(KernelError::InvalidParameter("common-neighbour enumeration needs a single-flip kernel".into()));
    };
    if n_bits > 5 || !(2..=4).contains(&s) {
        return Err(KernelError::InvalidParameter(format!(
            "enumeration limited to N <= 5 and 2 <= s <= 4, got N = {n_bits}, s = {s}"
        )));
    }
    let n = 1usize << n_bits;
    if s > n {
        return Ok(0);
    }
    let nb: Vec<u32> = (0..n).map(|v| (0..n_bits).fold(0u32, |m, i| m | 1 << (v ^ (1 << i)))).collect();

    fn go(nb: &[u32], start: usize, left: usize, acc: u32, best: &mut u32) {
        if left == 0 {
            *best = (*best).max(acc.count_ones());
            return;
        }
        for v in start..nb.len() {
            let next = acc & nb[v];
            if next.count_ones() > *best || left == 1 {
                go(nb, v + 1, left - 1, next, best);
            }
        }
    }
    let mut best = 0;
    go(&nb, 0, s, u32::MAX, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::dense::dense_matrix;
    use crate::kernels::DenseMatrix;
    use crate::Rational;

    #[test]
    fn mixture_degree_examples() {
        assert_eq!(mixture_degree(7, 2).unwrap(), 29);
        assert_eq!(mixture_degree(7, 7).unwrap(), 128);
        assert_eq!(mixture_degree(7, 1).unwrap(), 7);
        assert_eq!(mixture_degree(1, 1).unwrap(), 1);
        assert_eq!(mixture_degree(2, 2).unwrap(), 4);
        assert_eq!(mixture_degree(62, 62).unwrap(), 1 << 62);
        assert!(mixture_degree(5, 6).is_err());
        assert!(mixture_degree(5, 0).is_err());
    }

    #[test]
    fn mixture_degree_closed_form_for_two_flips() {
        for n in 2..=62u64 {
            assert_eq!(mixture_degree(n as u32, 2).unwrap(), (n * n + n + 2) / 2);
        }
        let big: f64 = mixture_degree_real(200, 2).unwrap();
        assert_eq!(big, 20101.0);
    }

    #[test]
    fn mixture_degree_matches_dense_support() {
        for n in 1..=8u32 {
            for k in 1..=n {
                let m: DenseMatrix<f64> = dense_matrix(&KernelSpec::mixture(n, k).unwrap()).unwrap();
                let expected = mixture_degree(n, k).unwrap();
                for v in 0..m.dim() {
                    assert_eq!(m.nonzero_in_row(v) as u64, expected, "N={n} k={k}");
                }
                let real: f64 = mixture_degree_real(n, k).unwrap();
                assert_eq!(real, expected as f64);
            }
        }
    }

    #[test]
    fn degree_of_other_kernels() {
        assert_eq!(degree(&KernelSpec::single_flip(9).unwrap()), 9);
        assert_eq!(degree(&KernelSpec::power(5, 2).unwrap()), 11);
        assert_eq!(degree(&KernelSpec::power(5, 3).unwrap()), 15);
        assert_eq!(degree(&KernelSpec::complete(1024).unwrap()), 1023);
        assert_eq!(degree(&KernelSpec::complete_bipartite(512).unwrap()), 512);
        assert_eq!(degree(&KernelSpec::lazy(0.5, KernelSpec::single_flip(4).unwrap()).unwrap()), 5);
        assert_eq!(degree(&KernelSpec::lazy(0.5, KernelSpec::mixture(4, 2).unwrap()).unwrap()), 11);
        let e = KernelSpec::explicit(vec![vec![0.0, 1.0, 0.0], vec![0.5, 0.0, 0.5], vec![0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(degree(&e), 2);
        for k in 1..=6 {
            let m: DenseMatrix<f64> = dense_matrix(&KernelSpec::power(6, k).unwrap()).unwrap();
            assert_eq!(degree(&KernelSpec::power(6, k).unwrap()), m.nonzero_in_row(0) as u64);
        }
    }

    #[test]
    fn min_entry_examples() {
        let m: Rational = min_nonzero_entry_power(10, 3).unwrap();
        assert_eq!(m, Rational::from_ratio(6, 1000));
        let one: Rational = min_nonzero_entry_power(9, 0).unwrap();
        assert_eq!(one, Rational::from_ratio(1, 1));
        assert!(min_nonzero_entry_power::<f64>(4, 5).is_err());
    }

    #[test]
    fn min_entry_matches_matrix_powers() {
        for n in 1..=8u32 {
            let k = KernelSpec::single_flip(n).unwrap();
            let mut row: Vec<Rational> = vec![Rational::from_ratio(0, 1); 1 << n];
            row[0] = Rational::from_ratio(1, 1);
            for i in 0..=n {
                if i > 0 {
                    row = k.push_forward(&row).unwrap();
                }
                // Bit permutations and translations act transitively, so row 0 holds every
                // value of the matrix.
                let min = row.iter().filter(|x| !num_traits::Zero::is_zero(*x)).min().unwrap();
                assert_eq!(*min, min_nonzero_entry_power::<Rational>(n, i).unwrap(), "N={n} i={i}");
            }
        }
        for n in 1..=5u32 {
            let p: DenseMatrix<Rational> = dense_matrix(&KernelSpec::single_flip(n).unwrap()).unwrap();
            for i in 0..=n {
                assert_eq!(p.pow(i).min_nonzero().unwrap(), min_nonzero_entry_power::<Rational>(n, i).unwrap());
            }
        }
    }

    #[test]
    fn bipartiteness() {
        assert!(is_bipartite(&KernelSpec::single_flip(6).unwrap()).unwrap());
        for k in 2..=6 {
            assert!(!is_bipartite(&KernelSpec::mixture(6, k).unwrap()).unwrap());
        }
        assert!(is_bipartite(&KernelSpec::power(6, 3).unwrap()).unwrap());
        assert!(matches!(is_bipartite(&KernelSpec::power(6, 2).unwrap()), Err(KernelError::Disconnected)));
        assert!(is_bipartite(&KernelSpec::complete_bipartite(8).unwrap()).unwrap());
        assert!(!is_bipartite(&KernelSpec::complete(5).unwrap()).unwrap());
        assert!(!is_bipartite(&KernelSpec::lazy(0.5, KernelSpec::single_flip(3).unwrap()).unwrap()).unwrap());
        let cycle5: Vec<Vec<f64>> = (0..5)
            .map(|i| (0..5).map(|j| if (i + 1) % 5 == j || (j + 1) % 5 == i { 0.5 } else { 0.0 }).collect())
            .collect();
        assert!(!is_bipartite(&KernelSpec::explicit(cycle5).unwrap()).unwrap());
        assert!(matches!(
            is_bipartite(&KernelSpec::single_flip(21).unwrap()),
            Err(KernelError::SizeGuard { .. })
        ));
    }

    #[test]
    fn common_neighbours() {
        let h3 = KernelSpec::single_flip(3).unwrap();
        assert_eq!(max_common_neighbors(&h3, 2).unwrap(), 2);
        assert!(max_common_neighbors(&KernelSpec::single_flip(4).unwrap(), 3).unwrap() <= 3);
        assert_eq!(common_neighbor_count(&h3, &[0b000, 0b111]), 0);
        assert_eq!(common_neighbor_count(&h3, &[0b000, 0b011]), 2);
        for n in 2..=5 {
            for s in 2..=4 {
                assert!(max_common_neighbors(&KernelSpec::single_flip(n).unwrap(), s).unwrap() <= s as u32);
            }
        }
        assert!(max_common_neighbors(&KernelSpec::single_flip(6).unwrap(), 2).is_err());
        assert!(max_common_neighbors(&h3, 5).is_err());
        assert!(max_common_neighbors(&KernelSpec::mixture(3, 2).unwrap(), 2).is_err());
    }
}
