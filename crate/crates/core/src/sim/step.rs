use rand::Rng;

use super::state::{ActiveSet, Population};
use super::SimError;
use crate::kernels::{binomial, KernelSpec};

/// One step of the coalescing walk: every active vertex activates `c` independently drawn
/// neighbours; repeated draws of the same vertex coalesce and the old set is dropped.
pub fn step_simple<R: Rng + ?Sized>(active: &ActiveSet, kernel: &KernelSpec, c: u32, rng: &mut R) -> Result<ActiveSet, SimError> {
    if active.is_empty() {
        return Err(SimError::Empty);
    }
    let mut next = active.empty_like();
    for v in active.iter() {
        for _ in 0..c {
            next.insert(kernel.sample(v, rng))?;
        }
    }
    Ok(next)
}

/// One step of the walk with multiplicity: each particle is replaced by `c` children, each
/// moved independently by `kernel`. The total becomes exactly `c Z_t`.
pub fn step_multiplicity<R: Rng + ?Sized>(pop: &Population, kernel: &KernelSpec, c: u32, rng: &mut R) -> Result<Population, SimError> {
    if pop.total() == 0 {
        return Err(SimError::Empty);
    }
    let mut next = pop.empty_like();
    for (v, m) in pop.iter() {
        let children = m.checked_mul(c as u64).ok_or(SimError::Overflow { step: None })?;
        scatter_into(&mut next, kernel, v, children, rng)?;
    }
    Ok(next)
}

/// One step of the division-rate walk: each particle independently divides into two moved
/// children with probability `p`, otherwise stays where it is.
pub fn step_division_rate<R: Rng + ?Sized>(pop: &Population, kernel: &KernelSpec, p: f64, rng: &mut R) -> Result<Population, SimError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(SimError::InvalidConfig(format!("division rate must lie in (0, 1), got {p}")));
    }
    divide(pop, kernel, |_| p, rng)
}

/// One step of the affinity-driven walk: a particle at `v` divides with probability
/// `table[affinity(v, target)]`; children move by `kernel`, non-dividers stay in place.
pub fn step_affinity_division<R: Rng + ?Sized>(
    pop: &Population,
    kernel: &KernelSpec,
    table: &[f64],
    target: u64,
    rng: &mut R,
) -> Result<Population, SimError> {
    let n_bits = kernel
        .hypercube_dim()
        .ok_or_else(|| SimError::InvalidConfig("affinity needs a hypercube kernel".into()))?;
    check_table(table, n_bits)?;
    if !kernel.contains(target) {
        return Err(SimError::StateOutOfRange { state: target, states: kernel.state_count() });
    }
    divide(pop, kernel, |v| table[(n_bits - (v ^ target).count_ones()) as usize], rng)
}

pub(crate) fn check_table(table: &[f64], n_bits: u32) -> Result<(), SimError> {
    if table.len() != n_bits as usize + 1 {
        return Err(SimError::InvalidConfig(format!(
            "division table has {} entries, expected {}",
            table.len(),
            n_bits + 1
        )));
    }
    if let Some(bad) = table.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(SimError::InvalidConfig(format!("division probability {bad} outside [0, 1]")));
    }
    Ok(())
}

fn divide<R, P>(pop: &Population, kernel: &KernelSpec, rate: P, rng: &mut R) -> Result<Population, SimError>
where
    R: Rng + ?Sized,
    P: Fn(u64) -> f64,
{
    if pop.total() == 0 {
        return Err(SimError::Empty);
    }
    let mut next = pop.empty_like();
    for (v, m) in pop.iter() {
        let dividers = binomial(m, rate(v), rng);
        next.add(v, m - dividers)?;
        scatter_into(&mut next, kernel, v, 2 * dividers, rng)?;
    }
    Ok(next)
}

fn scatter_into<R: Rng + ?Sized>(next: &mut Population, kernel: &KernelSpec, v: u64, count: u64, rng: &mut R) -> Result<(), SimError> {
    let mut failed = None;
    kernel.scatter(v, count, rng, &mut |w, k| {
        if failed.is_none() {
            if let Err(e) = next.add(w, k) {
                failed = Some(e);
            }
        }
    });
    failed.map_or(Ok(()), Err)
}
