use std::collections::{BTreeMap, BTreeSet};

use super::SimError;

/// Default largest `log2(states)` kept in dense form.
pub const DEFAULT_DENSE_BITS: u32 = 26;

fn dense_for(state_count: u64, dense_bits: u32) -> bool {
    dense_bits < 64 && state_count <= 1u64 << dense_bits
}

/// Set of currently active vertices.
///
/// Dense state spaces use a bitset plus a member list in insertion order; large ones an
/// ordered set.
#[derive(Clone, Debug)]
pub struct ActiveSet {
    state_count: u64,
    repr: SetRepr,
}

#[derive(Clone, Debug)]
enum SetRepr {
    Dense { bits: Vec<u64>, members: Vec<u64> },
    Sparse(BTreeSet<u64>),
}

impl ActiveSet {
    pub fn new(state_count: u64, dense_bits: u32) -> Self {
        let repr = if dense_for(state_count, dense_bits) {
            SetRepr::Dense { bits: vec![0; state_count.div_ceil(64) as usize], members: Vec::new() }
        } else {
            SetRepr::Sparse(BTreeSet::new())
        };
        Self { state_count, repr }
    }

    /// Empty set with the same state space and representation.
    pub fn empty_like(&self) -> Self {
        let repr = match &self.repr {
            SetRepr::Dense { bits, .. } => SetRepr::Dense { bits: vec![0; bits.len()], members: Vec::new() },
            SetRepr::Sparse(_) => SetRepr::Sparse(BTreeSet::new()),
        };
        Self { state_count: self.state_count, repr }
    }

    pub fn state_count(&self) -> u64 {
        self.state_count
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, SetRepr::Dense { .. })
    }

    /// Adds `v`; returns whether it was new.
    pub fn insert(&mut self, v: u64) -> Result<bool, SimError> {
        if v >= self.state_count {
            return Err(SimError::StateOutOfRange { state: v, states: self.state_count });
        }
        Ok(match &mut self.repr {
            SetRepr::Dense { bits, members } => {
                let (w, b) = ((v / 64) as usize, v % 64);
                let fresh = bits[w] >> b & 1 == 0;
                if fresh {
                    bits[w] |= 1 << b;
                    members.push(v);
                }
                fresh
            }
            SetRepr::Sparse(set) => set.insert(v),
        })
    }

    pub fn contains(&self, v: u64) -> bool {
        match &self.repr {
            SetRepr::Dense { bits, .. } => v < self.state_count && bits[(v / 64) as usize] >> (v % 64) & 1 == 1,
            SetRepr::Sparse(set) => set.contains(&v),
        }
    }

    pub fn len(&self) -> u64 {
        match &self.repr {
            SetRepr::Dense { members, .. } => members.len() as u64,
            SetRepr::Sparse(set) => set.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Members in a deterministic order (insertion order when dense, increasing otherwise).
    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.repr {
            SetRepr::Dense { members, .. } => Box::new(members.iter().copied()),
            SetRepr::Sparse(set) => Box::new(set.iter().copied()),
        }
    }

    pub fn to_sorted_vec(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.iter().collect();
        v.sort_unstable();
        v
    }
}

/// Particle counts per vertex.
#[derive(Clone, Debug)]
pub struct Population {
    state_count: u64,
    total: u64,
    repr: CountRepr,
}

#[derive(Clone, Debug)]
enum CountRepr {
    Dense { counts: Vec<u64>, occupied: Vec<u64> },
    Sparse(BTreeMap<u64, u64>),
}

impl Population {
    pub fn new(state_count: u64, dense_bits: u32) -> Self {
        let repr = if dense_for(state_count, dense_bits) {
            CountRepr::Dense { counts: vec![0; state_count as usize], occupied: Vec::new() }
        } else {
            CountRepr::Sparse(BTreeMap::new())
        };
        Self { state_count, total: 0, repr }
    }

    pub fn empty_like(&self) -> Self {
        let repr = match &self.repr {
            CountRepr::Dense { counts, .. } => CountRepr::Dense { counts: vec![0; counts.len()], occupied: Vec::new() },
            CountRepr::Sparse(_) => CountRepr::Sparse(BTreeMap::new()),
        };
        Self { state_count: self.state_count, total: 0, repr }
    }

    pub fn state_count(&self) -> u64 {
        self.state_count
    }

    /// Adds `count` particles at `v`. Fails if the total would exceed `2^63`.
    pub fn add(&mut self, v: u64, count: u64) -> Result<(), SimError> {
        if v >= self.state_count {
            return Err(SimError::StateOutOfRange { state: v, states: self.state_count });
        }
        if count == 0 {
            return Ok(());
        }
        self.total = self
            .total
            .checked_add(count)
            .filter(|&t| t <= 1 << 63)
            .ok_or(SimError::Overflow { step: None })?;
        match &mut self.repr {
            CountRepr::Dense { counts, occupied } => {
                let slot = &mut counts[v as usize];
                if *slot == 0 {
                    occupied.push(v);
                }
                *slot += count;
            }
            CountRepr::Sparse(map) => *map.entry(v).or_insert(0) += count,
        }
        Ok(())
    }

    pub fn get(&self, v: u64) -> u64 {
        match &self.repr {
            CountRepr::Dense { counts, .. } => counts.get(v as usize).copied().unwrap_or(0),
            CountRepr::Sparse(map) => map.get(&v).copied().unwrap_or(0),
        }
    }

    /// Total number of particles `Z_t`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of vertices holding at least one particle.
    pub fn occupied(&self) -> u64 {
        match &self.repr {
            CountRepr::Dense { occupied, .. } => occupied.len() as u64,
            CountRepr::Sparse(map) => map.len() as u64,
        }
    }

    /// `(vertex, count)` pairs with positive count, in a deterministic order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = (u64, u64)> + '_> {
        match &self.repr {
            CountRepr::Dense { counts, occupied } => Box::new(occupied.iter().map(move |&v| (v, counts[v as usize]))),
            CountRepr::Sparse(map) => Box::new(map.iter().map(|(&v, &c)| (v, c))),
        }
    }

    pub fn to_sorted_vec(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = self.iter().collect();
        v.sort_unstable();
        v
    }
}
