use serde::{Deserialize, Serialize};

use super::spec::KernelSpec;
use super::KernelError;

/// Named kernel family, as written in configuration files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    SingleFlip,
    Power,
    Mixture,
    Lazy,
    Complete,
    CompleteBipartite,
}

impl std::str::FromStr for KernelKind {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "single_flip" => Self::SingleFlip,
            "power" => Self::Power,
            "mixture" => Self::Mixture,
            "lazy" => Self::Lazy,
            "complete" => Self::Complete,
            "complete_bipartite" => Self::CompleteBipartite,
            _ => return Err(KernelError::InvalidParameter(format!("unknown kernel kind {s:?}"))),
        })
    }
}

/// Textual kernel description.
///
/// `complete` acts on `2^n_bits` states and `complete_bipartite` on two sides of
/// `2^(n_bits - 1)`. `lazy` wraps `base` (single flips unless given), which takes `k`
/// from the same record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub kind: KernelKind,
    pub n_bits: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_stay: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<KernelKind>,
}

impl KernelConfig {
    pub fn new(kind: KernelKind, n_bits: u32) -> Self {
        Self { kind, n_bits, k: None, p_stay: None, base: None }
    }

    pub fn from_toml(text: &str) -> Result<Self, KernelError> {
        toml::from_str(text).map_err(|e| KernelError::InvalidParameter(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain record serialises")
    }

    pub fn to_spec(&self) -> Result<KernelSpec, KernelError> {
        self.build(self.kind)
    }

    fn build(&self, kind: KernelKind) -> Result<KernelSpec, KernelError> {
        let n = self.n_bits;
        let need_k = || self.k.ok_or_else(|| KernelError::InvalidParameter(format!("{kind:?} kernel needs k")));
        let side = |shift: u32| {
            if n == 0 || n > super::vertex::MAX_DIM {
                Err(KernelError::InvalidDimension(n))
            } else {
                Ok(1u64 << (n - shift))
            }
        };
        match kind {
            KernelKind::SingleFlip => KernelSpec::single_flip(n),
            KernelKind::Power => KernelSpec::power(n, need_k()?),
            KernelKind::Mixture => KernelSpec::mixture(n, need_k()?),
            KernelKind::Complete => KernelSpec::complete(side(0)?),
            KernelKind::CompleteBipartite => KernelSpec::complete_bipartite(side(1)?),
            KernelKind::Lazy => {
                let base = self.base.unwrap_or(KernelKind::SingleFlip);
                if base == KernelKind::Lazy {
                    return Err(KernelError::InvalidParameter("lazy kernel cannot wrap another lazy kernel".into()));
                }
                let p = self.p_stay.ok_or_else(|| KernelError::InvalidParameter("lazy kernel needs p_stay".into()))?;
                KernelSpec::lazy(p, self.build(base)?)
            }
        }
    }

    /// Inverse of [`to_spec`](Self::to_spec) for kernels a configuration can describe.
    pub fn from_spec(spec: &KernelSpec) -> Result<Self, KernelError> {
        let unsupported = || KernelError::InvalidParameter(format!("no configuration form for {spec:?}"));
        let pow2 = |x: u64| if x.is_power_of_two() { Some(x.trailing_zeros()) } else { None };
        Ok(match spec {
            KernelSpec::SingleFlip { n_bits } => Self::new(KernelKind::SingleFlip, *n_bits),
            KernelSpec::Power { n_bits, k } => Self { k: Some(*k), ..Self::new(KernelKind::Power, *n_bits) },
            KernelSpec::Mixture { n_bits, k } => Self { k: Some(*k), ..Self::new(KernelKind::Mixture, *n_bits) },
            KernelSpec::CompleteGraph { n } => Self::new(KernelKind::Complete, pow2(*n).ok_or_else(unsupported)?),
            KernelSpec::CompleteBipartite { half } => {
                Self::new(KernelKind::CompleteBipartite, pow2(*half).ok_or_else(unsupported)? + 1)
            }
            KernelSpec::Lazy { p_stay, base } => {
                let inner = Self::from_spec(base)?;
                if inner.kind == KernelKind::Lazy {
                    return Err(unsupported());
                }
                Self { kind: KernelKind::Lazy, p_stay: Some(*p_stay), base: Some(inner.kind), ..inner }
            }
            KernelSpec::ExplicitMatrix(_) => return Err(unsupported()),
        })
    }
}
