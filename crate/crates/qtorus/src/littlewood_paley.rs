//! Dyadic Littlewood-Paley decomposition.
//!
//! A profile is a radial function φ(ξ) = χ(|ξ|) − χ(2|ξ|) built from a
//! smooth cutoff χ that is 1 on [0,1], 0 on [2,∞) and strictly decreasing
//! in between, so that supp φ ⊆ {1/2 ≤ |ξ| ≤ 2}, φ > 0 on the open
//! annulus, and Σ_{k∈Z} φ(2^{−k}ξ) = 1 for ξ ≠ 0 by telescoping.

use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::QElement;

type Cutoff = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct LPProfile {
    name: String,
    chi: Cutoff,
}

impl LPProfile {
    pub fn new<F>(name: impl Into<String>, chi: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        LPProfile { name: name.into(), chi: Arc::new(chi) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chi(&self, t: f64) -> f64 {
        (self.chi)(t)
    }

    /// φ at radius t: χ(t) − χ(2t). Exactly zero outside (1/2, 2).
    pub fn phi(&self, t: f64) -> f64 {
        self.chi(t) - self.chi(2.0 * t)
    }

    /// φ(2^{−k}|m|) as used by the k-th dyadic block.
    pub fn weight(&self, k: u32, radius: f64) -> f64 {
        self.phi(radius * 0.5f64.powi(k as i32))
    }

    pub fn by_name(name: &str) -> Option<LPProfile> {
        match name {
            "bump" => Some(default_profile()),
            "bump-shifted" => Some(shifted_profile()),
            _ => None,
        }
    }
}

impl std::fmt::Debug for LPProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LPProfile({})", self.name)
    }
}

fn bump(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// The canonical bump-quotient cutoff:
/// χ(t) = g(2−t)/(g(2−t)+g(t−1)) on (1,2) with g(s) = e^{−1/s}.
pub fn default_profile() -> LPProfile {
    LPProfile::new("bump", |t| {
        if t <= 1.0 {
            1.0
        } else if t >= 2.0 {
            0.0
        } else {
            let a = bump(2.0 - t);
            a / (a + bump(t - 1.0))
        }
    })
}

/// Same cutoff with the transition re-parameterized by t ↦ t², giving a
/// genuinely different profile for the norm-equivalence checks.
pub fn shifted_profile() -> LPProfile {
    let base = default_profile();
    LPProfile::new("bump-shifted", move |t| {
        if t <= 1.0 {
            1.0
        } else if t >= 2.0 {
            0.0
        } else {
            base.chi(1.0 + (t * t - 1.0) / 3.0)
        }
    })
}

/// The k-th dyadic block: multiplier with symbol φ(2^{−k}·).
pub fn block(x: &QElement, k: u32, profile: &LPProfile) -> QElement {
    x.map_coeffs(|m, c| {
        let w = profile.weight(k, m.norm());
        if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            c * w
        }
    })
}

/// Minimal range [k_lo, k_hi] of block indices outside which every block
/// of `x` vanishes; `None` for elements supported on {0} only.
///
/// A frequency m contributes to block k iff 2^{k−1} < |m| < 2^{k+1},
/// so k_hi ≤ ceil(log2 max|m|) + 1 for polynomials.
pub fn block_indices(x: &QElement, profile: &LPProfile) -> Option<(u32, u32)> {
    let mut lo = u32::MAX;
    let mut hi = 0u32;
    let mut any = false;
    for m in x.support() {
        if m.is_zero() {
            continue;
        }
        let r = m.norm();
        let k_max = r.log2().ceil() as i64 + 1;
        for k in 0..=k_max.max(0) as u32 {
            if profile.weight(k, r) != 0.0 {
                any = true;
                lo = lo.min(k);
                hi = hi.max(k);
            }
        }
    }
    if any {
        Some((lo, hi))
    } else {
        None
    }
}
