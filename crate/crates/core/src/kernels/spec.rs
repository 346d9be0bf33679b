use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use super::vertex::{mask, MAX_DIM};
use super::KernelError;
use crate::scalar::Scalar;

/// Largest explicit matrix accepted.
pub const MAX_EXPLICIT_STATES: usize = 4096;

/// A mutation rule: the transition matrix offspring move by.
///
/// States are indexed `0..state_count()`. For the hypercube family (`SingleFlip`, `Power`,
/// `Mixture` and `Lazy` over them) the index is the bit string itself.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelSpec {
    /// One uniformly chosen bit is flipped.
    SingleFlip { n_bits: u32 },
    /// `k` successive single flips.
    Power { n_bits: u32, k: u32 },
    /// Uniform mixture of 1..=k successive single flips.
    Mixture { n_bits: u32, k: u32 },
    /// Stay put with probability `p_stay`, otherwise move by `base`.
    Lazy { p_stay: f64, base: Box<KernelSpec> },
    /// Uniform over the other `n - 1` states.
    CompleteGraph { n: u64 },
    /// States `0..half` and `half..2 half` form the two sides; moves are uniform over the
    /// opposite side.
    CompleteBipartite { half: u64 },
    ExplicitMatrix(ExplicitKernel),
}

/// Row-stochastic matrix given entry by entry. Only meant for small oracle chains.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitKernel {
    n: usize,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

impl ExplicitKernel {
    /// Validates the rows (non-negative, summing to one within `1e-9`) and rejects
    /// matrices whose support is not strongly connected.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, KernelError> {
        let n = rows.len();
        if n == 0 || n > MAX_EXPLICIT_STATES {
            return Err(KernelError::SizeGuard { states: n as u64, limit: MAX_EXPLICIT_STATES as u64 });
        }
        let mut probs = Vec::with_capacity(n * n);
        let mut cumulative = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(KernelError::InvalidParameter(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            let mut acc = 0.0;
            for &p in row {
                if !(p >= 0.0 && p.is_finite()) {
                    return Err(KernelError::InvalidParameter(format!("row {i} has entry {p}")));
                }
                acc += p;
                probs.push(p);
                cumulative.push(acc);
            }
            if (acc - 1.0).abs() > 1e-9 {
                return Err(KernelError::NotStochastic { row: i, sum: acc });
            }
        }
        let kernel = Self { n, probs, cumulative };
        if !kernel.strongly_connected() {
            return Err(KernelError::Disconnected);
        }
        Ok(kernel)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.probs[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.probs[i * self.n..(i + 1) * self.n]
    }

    fn strongly_connected(&self) -> bool {
        let reach = |forward: bool| {
            let mut seen = vec![false; self.n];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(u) = stack.pop() {
                for w in 0..self.n {
                    let e = if forward { self.entry(u, w) } else { self.entry(w, u) };
                    if e > 0.0 && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(true) && reach(false)
    }

    fn sample<R: Rng + ?Sized>(&self, v: usize, rng: &mut R) -> usize {
        let cum = &self.cumulative[v * self.n..(v + 1) * self.n];
        let u = rng.random::<f64>() * cum[self.n - 1];
        let idx = cum.partition_point(|&c| c <= u);
        // Rounding can land on a trailing zero-probability entry; step back to the last
        // positive one.
        let mut idx = idx.min(self.n - 1);
        while self.entry(v, idx) == 0.0 {
            idx -= 1;
        }
        idx
    }
}

impl KernelSpec {
    pub fn single_flip(n_bits: u32) -> Result<Self, KernelError> {
        let k = Self::SingleFlip { n_bits };
        k.validate()?;
        Ok(k)
    }

    pub fn power(n_bits: u32, k: u32) -> Result<Self, KernelError> {
        let spec = Self::Power { n_bits, k };
        spec.validate()?;
        Ok(spec)
    }

    pub fn mixture(n_bits: u32, k: u32) -> Result<Self, KernelError> {
        let spec = Self::Mixture { n_bits, k };
        spec.validate()?;
        Ok(spec)
    }

    pub fn lazy(p_stay: f64, base: KernelSpec) -> Result<Self, KernelError> {
        let spec = Self::Lazy { p_stay, base: Box::new(base) };
        spec.validate()?;
        Ok(spec)
    }

    pub fn complete(n: u64) -> Result<Self, KernelError> {
        let spec = Self::CompleteGraph { n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn complete_bipartite(half: u64) -> Result<Self, KernelError> {
        let spec = Self::CompleteBipartite { half };
        spec.validate()?;
        Ok(spec)
    }

    pub fn explicit(rows: Vec<Vec<f64>>) -> Result<Self, KernelError> {
        Ok(Self::ExplicitMatrix(ExplicitKernel::new(rows)?))
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        let check_dim = |n: u32| {
            if n == 0 || n > MAX_DIM {
                Err(KernelError::InvalidDimension(n))
            } else {
                Ok(())
            }
        };
        match self {
            Self::SingleFlip { n_bits } => check_dim(*n_bits),
            Self::Power { n_bits, k } => {
                check_dim(*n_bits)?;
                if *k == 0 {
                    return Err(KernelError::InvalidParameter("power k must be >= 1".into()));
                }
                Ok(())
            }
            Self::Mixture { n_bits, k } => {
                check_dim(*n_bits)?;
                if *k == 0 || k > n_bits {
                    return Err(KernelError::InvalidParameter(format!("mixture k must lie in 1..={n_bits}, got {k}")));
                }
                Ok(())
            }
            Self::Lazy { p_stay, base } => {
                if !(*p_stay > 0.0 && *p_stay < 1.0) {
                    return Err(KernelError::InvalidParameter(format!("p_stay must lie in (0, 1), got {p_stay}")));
                }
                base.validate()
            }
            Self::CompleteGraph { n } => {
                if *n < 2 || *n > 1 << MAX_DIM {
                    return Err(KernelError::InvalidParameter(format!("complete graph needs 2 <= n <= 2^62, got {n}")));
                }
                Ok(())
            }
            Self::CompleteBipartite { half } => {
                if *half == 0 || *half > 1 << (MAX_DIM - 1) {
                    return Err(KernelError::InvalidParameter(format!("complete bipartite side size out of range: {half}")));
                }
                Ok(())
            }
            Self::ExplicitMatrix(_) => Ok(()),
        }
    }

    /// Number of states the kernel acts on.
    pub fn state_count(&self) -> u64 {
        match self {
            Self::SingleFlip { n_bits } | Self::Power { n_bits, .. } | Self::Mixture { n_bits, .. } => 1 << n_bits,
            Self::Lazy { base, .. } => base.state_count(),
            Self::CompleteGraph { n } => *n,
            Self::CompleteBipartite { half } => 2 * half,
            Self::ExplicitMatrix(m) => m.n as u64,
        }
    }

    /// Dimension `N` when the states are `N`-bit strings moved by bit flips.
    pub fn hypercube_dim(&self) -> Option<u32> {
        match self {
            Self::SingleFlip { n_bits } | Self::Power { n_bits, .. } | Self::Mixture { n_bits, .. } => Some(*n_bits),
            Self::Lazy { base, .. } => base.hypercube_dim(),
            _ => None,
        }
    }

    /// Bit-string dimension used for labels: `N` for the hypercube family, otherwise the
    /// number of bits needed to index the states.
    pub fn label_dim(&self) -> u32 {
        self.hypercube_dim().unwrap_or_else(|| {
            let n = self.state_count();
            (64 - (n - 1).leading_zeros()).max(1)
        })
    }

    #[inline]
    pub fn contains(&self, v: u64) -> bool {
        v < self.state_count()
    }

    /// Draws the next state of a single particle at `v`.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, v: u64, rng: &mut R) -> u64 {
        match self {
            Self::SingleFlip { n_bits } => v ^ (1 << rng.random_range(0..*n_bits)),
            Self::Power { n_bits, k } => flips(v, *n_bits, *k, rng),
            Self::Mixture { n_bits, k } => {
                let depth = rng.random_range(1..=*k);
                flips(v, *n_bits, depth, rng)
            }
            Self::Lazy { p_stay, base } => {
                if rng.random_bool(*p_stay) {
                    v
                } else {
                    base.sample(v, rng)
                }
            }
            Self::CompleteGraph { n } => {
                let w = rng.random_range(0..n - 1);
                if w >= v {
                    w + 1
                } else {
                    w
                }
            }
            Self::CompleteBipartite { half } => {
                let w = rng.random_range(0..*half);
                if v < *half {
                    w + half
                } else {
                    w
                }
            }
            Self::ExplicitMatrix(m) => m.sample(v as usize, rng) as u64,
        }
    }

    /// Whether the transition `v -> w` has positive probability.
    pub fn has_transition(&self, v: u64, w: u64) -> bool {
        if !self.contains(v) || !self.contains(w) {
            return false;
        }
        let h = (v ^ w).count_ones();
        match self {
            Self::SingleFlip { .. } => h == 1,
            Self::Power { k, .. } => h <= *k && (k - h).is_multiple_of(2),
            Self::Mixture { k, .. } => {
                if *k == 1 {
                    h == 1
                } else {
                    h <= *k
                }
            }
            Self::Lazy { base, .. } => v == w || base.has_transition(v, w),
            Self::CompleteGraph { .. } => v != w,
            Self::CompleteBipartite { half } => (v < *half) != (w < *half),
            Self::ExplicitMatrix(m) => m.entry(v as usize, w as usize) > 0.0,
        }
    }

    /// Flip masks `m` such that `v -> v ^ m` is a possible move, for kernels that act by
    /// XOR. `None` for the other kernels.
    pub fn flip_masks(&self) -> Option<Vec<u64>> {
        let weights: Vec<u32> = match self {
            Self::SingleFlip { .. } => vec![1],
            Self::Power { n_bits, k } => (0..=(*k).min(*n_bits)).filter(|h| (k - h) % 2 == 0).collect(),
            Self::Mixture { k, .. } => {
                if *k == 1 {
                    vec![1]
                } else {
                    (0..=*k).collect()
                }
            }
            Self::Lazy { base, .. } => {
                let mut m = base.flip_masks()?;
                if !m.contains(&0) {
                    m.insert(0, 0);
                }
                return Some(m);
            }
            _ => return None,
        };
        let n = self.hypercube_dim()?;
        Some(weights.into_iter().flat_map(|h| masks_of_weight(n, h)).collect())
    }

    /// States reachable from `v` in one move.
    pub fn support_neighbors(&self, v: u64) -> Vec<u64> {
        if let Some(masks) = self.flip_masks() {
            return masks.into_iter().map(|m| v ^ m).collect();
        }
        match self {
            Self::CompleteGraph { n } => (0..*n).filter(|&w| w != v).collect(),
            Self::CompleteBipartite { half } => {
                let start = if v < *half { *half } else { 0 };
                (start..start + half).collect()
            }
            Self::ExplicitMatrix(m) => (0..m.n).filter(|&w| m.entry(v as usize, w) > 0.0).map(|w| w as u64).collect(),
            _ => unreachable!("XOR kernels handled above"),
        }
    }

    /// One step of the forward equation: returns `x M` for a row vector `x` over the states.
    pub fn push_forward<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>, KernelError> {
        let n = self.state_count();
        if x.len() as u64 != n {
            return Err(KernelError::InvalidParameter(format!("vector has length {}, kernel has {n} states", x.len())));
        }
        Ok(match self {
            Self::SingleFlip { n_bits } => flip_average(x, *n_bits),
            Self::Power { n_bits, k } => {
                let mut cur = x.to_vec();
                for _ in 0..*k {
                    cur = flip_average(&cur, *n_bits);
                }
                cur
            }
            Self::Mixture { n_bits, k } => {
                let mut cur = x.to_vec();
                let mut acc = vec![T::zero(); x.len()];
                for _ in 0..*k {
                    cur = flip_average(&cur, *n_bits);
                    for (a, c) in acc.iter_mut().zip(&cur) {
                        *a = a.clone() + c.clone();
                    }
                }
                let scale = T::from_ratio(1, *k as u64);
                acc.into_iter().map(|a| a * scale.clone()).collect()
            }
            Self::Lazy { p_stay, base } => {
                let stay = T::from_f64(*p_stay);
                let go = T::one() - stay.clone();
                let moved = base.push_forward(x)?;
                x.iter().zip(moved).map(|(a, b)| stay.clone() * a.clone() + go.clone() * b).collect()
            }
            Self::CompleteGraph { n } => {
                let total = sum(x);
                let scale = T::from_ratio(1, n - 1);
                x.iter().map(|a| (total.clone() - a.clone()) * scale.clone()).collect()
            }
            Self::CompleteBipartite { half } => {
                let h = *half as usize;
                let scale = T::from_ratio(1, *half);
                let left = sum(&x[..h]) * scale.clone();
                let right = sum(&x[h..]) * scale;
                (0..2 * h).map(|w| if w < h { right.clone() } else { left.clone() }).collect()
            }
            Self::ExplicitMatrix(m) => {
                let mut y = vec![T::zero(); m.n];
                for (v, xv) in x.iter().enumerate() {
                    if xv.is_zero() {
                        continue;
                    }
                    for (w, &p) in m.row(v).iter().enumerate() {
                        if p > 0.0 {
                            y[w] = y[w].clone() + xv.clone() * T::from_f64(p);
                        }
                    }
                }
                y
            }
        })
    }

    /// Moves `count` independent particles from `v`, reporting `(destination, how many)`.
    ///
    /// Exactly distributed as `count` independent calls to [`sample`](Self::sample), but
    /// realised as a multinomial (a chain of conditional binomials) so the cost does not
    /// grow with `count`. A destination may be reported more than once.
    pub fn scatter<R, F>(&self, v: u64, count: u64, rng: &mut R, emit: &mut F)
    where
        R: Rng + ?Sized,
        F: FnMut(u64, u64),
    {
        if count == 0 {
            return;
        }
        match self {
            Self::SingleFlip { n_bits } => {
                uniform_multinomial(count, *n_bits as u64, rng, |i, c| emit(v ^ (1 << i), c));
            }
            Self::Power { n_bits, k } => walk_groups(v, count, *n_bits, *k, rng, emit),
            Self::Mixture { n_bits, k } => {
                let mut depths = vec![0u64; *k as usize];
                uniform_multinomial(count, *k as u64, rng, |i, c| depths[i as usize] += c);
                for (i, c) in depths.into_iter().enumerate() {
                    walk_groups(v, c, *n_bits, i as u32 + 1, rng, emit);
                }
            }
            Self::Lazy { p_stay, base } => {
                let stay = binomial(count, *p_stay, rng);
                if stay > 0 {
                    emit(v, stay);
                }
                base.scatter(v, count - stay, rng, emit);
            }
            Self::CompleteGraph { n } => {
                uniform_multinomial(count, n - 1, rng, |i, c| emit(if i >= v { i + 1 } else { i }, c));
            }
            Self::CompleteBipartite { half } => {
                let offset = if v < *half { *half } else { 0 };
                uniform_multinomial(count, *half, rng, |i, c| emit(i + offset, c));
            }
            Self::ExplicitMatrix(m) => {
                let row = m.row(v as usize);
                let mut remaining = count;
                let mut mass_left: f64 = row.iter().sum();
                let last = row.iter().rposition(|&p| p > 0.0).expect("stochastic row");
                for (w, &p) in row.iter().enumerate() {
                    if remaining == 0 {
                        break;
                    }
                    if p <= 0.0 {
                        continue;
                    }
                    let c = if w == last { remaining } else { binomial(remaining, (p / mass_left).min(1.0), rng) };
                    if c > 0 {
                        emit(w as u64, c);
                    }
                    remaining -= c;
                    mass_left -= p;
                }
            }
        }
    }
}

#[inline]
fn flips<R: Rng + ?Sized>(mut v: u64, n_bits: u32, k: u32, rng: &mut R) -> u64 {
    for _ in 0..k {
        v ^= 1 << rng.random_range(0..n_bits);
    }
    v
}

fn sum<T: Scalar>(x: &[T]) -> T {
    x.iter().fold(T::zero(), |a, b| a + b.clone())
}

/// `y[w] = (1/N) sum_i x[w ^ e_i]`.
fn flip_average<T: Scalar>(x: &[T], n_bits: u32) -> Vec<T> {
    let scale = T::from_ratio(1, n_bits as u64);
    (0..x.len())
        .map(|w| {
            let s = (0..n_bits).fold(T::zero(), |acc, i| acc + x[w ^ (1 << i)].clone());
            s * scale.clone()
        })
        .collect()
}

/// All `n`-bit masks with exactly `h` ones, in increasing order.
pub(crate) fn masks_of_weight(n: u32, h: u32) -> Vec<u64> {
    if h > n {
        return Vec::new();
    }
    if h == 0 {
        return vec![0];
    }
    let limit = mask(n);
    let mut out = Vec::new();
    let mut m: u64 = (1u64 << h) - 1;
    loop {
        out.push(m);
        // Gosper's hack: next integer with the same popcount.
        let c = m & m.wrapping_neg();
        let r = m + c;
        if r > limit || r == 0 {
            break;
        }
        let next = (((r ^ m) >> 2) / c) | r;
        if next > limit {
            break;
        }
        m = next;
    }
    out
}

/// `Binomial(n, p)` draw, without touching the generator in the degenerate cases.
#[inline]
pub(crate) fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        0
    } else if p >= 1.0 {
        n
    } else {
        Binomial::new(n, p).expect("p in (0, 1)").sample(rng)
    }
}

/// Splits `count` items uniformly over `categories` cells, calling `f(cell, k)` for
/// non-empty cells.
fn uniform_multinomial<R, F>(count: u64, categories: u64, rng: &mut R, mut f: F)
where
    R: Rng + ?Sized,
    F: FnMut(u64, u64),
{
    if count < categories {
        for _ in 0..count {
            f(rng.random_range(0..categories), 1);
        }
        return;
    }
    let mut remaining = count;
    for i in 0..categories - 1 {
        if remaining == 0 {
            return;
        }
        let c = binomial(remaining, 1.0 / (categories - i) as f64, rng);
        if c > 0 {
            f(i, c);
            remaining -= c;
        }
    }
    if remaining > 0 {
        f(categories - 1, remaining);
    }
}

/// `count` particles at `v` each make `depth` uniform single flips. Particles that meet on
/// the same intermediate string are exchangeable, so they are moved as one group.
fn walk_groups<R, F>(v: u64, count: u64, n_bits: u32, depth: u32, rng: &mut R, emit: &mut F)
where
    R: Rng + ?Sized,
    F: FnMut(u64, u64),
{
    if count == 0 {
        return;
    }
    let mut groups: BTreeMap<u64, u64> = BTreeMap::from([(v, count)]);
    for _ in 0..depth {
        let mut next = BTreeMap::new();
        for (u, c) in groups {
            uniform_multinomial(c, n_bits as u64, rng, |i, k| *next.entry(u ^ (1 << i)).or_insert(0) += k);
        }
        groups = next;
    }
    for (w, c) in groups {
        emit(w, c);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replica_rng;

    #[test]
    fn masks_of_weight_enumerates_combinations() {
        assert_eq!(masks_of_weight(4, 2), vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(masks_of_weight(3, 0), vec![0]);
        assert_eq!(masks_of_weight(3, 3), vec![0b111]);
        assert!(masks_of_weight(3, 4).is_empty());
        assert_eq!(masks_of_weight(10, 3).len(), 120);
        assert_eq!(masks_of_weight(62, 1).len(), 62);
    }

    #[test]
    fn constructor_guards() {
        assert!(KernelSpec::mixture(5, 0).is_err());
        assert!(KernelSpec::mixture(5, 6).is_err());
        assert!(KernelSpec::power(5, 0).is_err());
        assert!(KernelSpec::power(5, 9).is_ok());
        assert!(KernelSpec::single_flip(63).is_err());
        assert!(KernelSpec::lazy(1.0, KernelSpec::single_flip(3).unwrap()).is_err());
        assert!(KernelSpec::complete(1).is_err());
        assert!(KernelSpec::complete_bipartite(0).is_err());
    }

    #[test]
    fn explicit_rejects_bad_input() {
        assert!(matches!(
            KernelSpec::explicit(vec![vec![0.5, 0.4], vec![1.0, 0.0]]),
            Err(KernelError::NotStochastic { row: 0, .. })
        ));
        assert!(matches!(
            KernelSpec::explicit(vec![vec![1.0, 0.0], vec![0.0, 1.0]]),
            Err(KernelError::Disconnected)
        ));
        assert!(KernelSpec::explicit(vec![vec![0.0, 1.0], vec![0.5, 0.5]]).is_ok());
    }

    #[test]
    fn single_flip_moves_exactly_one_bit() {
        let k = KernelSpec::single_flip(9).unwrap();
        let mut rng = replica_rng(1, 0);
        for v in 0..512 {
            let w = k.sample(v, &mut rng);
            assert_eq!((v ^ w).count_ones(), 1);
        }
    }

    #[test]
    fn complete_graph_never_stays() {
        let k = KernelSpec::complete(5).unwrap();
        let mut rng = replica_rng(2, 0);
        let mut hits = [0u32; 5];
        for _ in 0..50_000 {
            let w = k.sample(2, &mut rng);
            assert_ne!(w, 2);
            hits[w as usize] += 1;
        }
        for (w, &h) in hits.iter().enumerate() {
            if w != 2 {
                assert!((h as f64 - 12_500.0).abs() < 500.0, "{hits:?}");
            }
        }
    }

    #[test]
    fn complete_bipartite_switches_side() {
        let k = KernelSpec::complete_bipartite(8).unwrap();
        let mut rng = replica_rng(3, 0);
        for _ in 0..1000 {
            assert!(k.sample(3, &mut rng) >= 8);
            assert!(k.sample(12, &mut rng) < 8);
        }
    }

    #[test]
    fn scatter_conserves_count_and_respects_support() {
        let kernels = [
            KernelSpec::single_flip(6).unwrap(),
            KernelSpec::power(6, 3).unwrap(),
            KernelSpec::mixture(6, 4).unwrap(),
            KernelSpec::lazy(0.3, KernelSpec::mixture(6, 2).unwrap()).unwrap(),
            KernelSpec::complete(64).unwrap(),
            KernelSpec::complete_bipartite(32).unwrap(),
            KernelSpec::explicit(vec![vec![0.0, 0.25, 0.75], vec![0.5, 0.0, 0.5], vec![1.0, 0.0, 0.0]]).unwrap(),
        ];
        let mut rng = replica_rng(4, 0);
        for k in &kernels {
            for count in [1u64, 5, 70, 10_000] {
                let mut total = 0;
                k.scatter(1, count, &mut rng, &mut |w, c| {
                    assert!(k.has_transition(1, w), "{k:?} 1 -> {w}");
                    total += c;
                });
                assert_eq!(total, count, "{k:?}");
            }
        }
    }

    #[test]
    fn push_forward_preserves_mass() {
        let k = KernelSpec::mixture(5, 3).unwrap();
        let mut x = vec![0.0; 32];
        x[3] = 0.25;
        x[17] = 0.75;
        let y = k.push_forward(&x).unwrap();
        assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(k.push_forward(&[1.0]).is_err());
    }

    #[test]
    fn flip_masks_cover_support() {
        for k in [
            KernelSpec::single_flip(5).unwrap(),
            KernelSpec::power(5, 2).unwrap(),
            KernelSpec::power(5, 3).unwrap(),
            KernelSpec::mixture(5, 3).unwrap(),
            KernelSpec::lazy(0.5, KernelSpec::single_flip(5).unwrap()).unwrap(),
        ] {
            let from_masks: Vec<u64> = {
                let mut n = k.support_neighbors(6);
                n.sort_unstable();
                n
            };
            let direct: Vec<u64> = (0..32).filter(|&w| k.has_transition(6, w)).collect();
            assert_eq!(from_masks, direct, "{k:?}");
        }
    }
}
