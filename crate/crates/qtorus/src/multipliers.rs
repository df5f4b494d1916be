//! Fourier multipliers `M_φ: x̂(m) ↦ φ(m) x̂(m)` and the concrete families
//! used throughout: derivations, Bessel/Riesz potentials, translations and
//! differences, Fejér means, and the Poisson/heat semigroups (both the
//! ε-parameterized and the circular `r`-parameterized versions).

use std::sync::Arc;

use num_complex::Complex64;

use crate::algebra::{MultiIndex, QElement, TAU};
use crate::error::{Error, Result};

type Rule = Arc<dyn Fn(&MultiIndex) -> Complex64 + Send + Sync>;
type DomainCheck = Arc<dyn Fn(&MultiIndex) -> bool + Send + Sync>;

/// An evaluable multiplier symbol `Z^d → C`, optionally restricted to a
/// frequency domain (e.g. "m ≠ 0" for the Riesz potential).
#[derive(Clone)]
pub struct Symbol {
    name: String,
    rule: Rule,
    domain: Option<DomainCheck>,
}

impl Symbol {
    pub fn new<F>(name: impl Into<String>, rule: F) -> Self
    where
        F: Fn(&MultiIndex) -> Complex64 + Send + Sync + 'static,
    {
        Symbol { name: name.into(), rule: Arc::new(rule), domain: None }
    }

    pub fn with_domain<G>(mut self, check: G) -> Self
    where
        G: Fn(&MultiIndex) -> bool + Send + Sync + 'static,
    {
        self.domain = Some(Arc::new(check));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, m: &MultiIndex) -> Complex64 {
        (self.rule)(m)
    }

    pub fn admits(&self, m: &MultiIndex) -> bool {
        self.domain.as_ref().map_or(true, |d| d(m))
    }

    /// Pointwise product φψ (domain is the intersection).
    pub fn product(&self, other: &Symbol) -> Symbol {
        let a = self.rule.clone();
        let b = other.rule.clone();
        let da = self.domain.clone();
        let db = other.domain.clone();
        let mut s = Symbol {
            name: format!("{}*{}", self.name, other.name),
            rule: Arc::new(move |m| a(m) * b(m)),
            domain: None,
        };
        if da.is_some() || db.is_some() {
            s.domain = Some(Arc::new(move |m| {
                da.as_ref().map_or(true, |f| f(m)) && db.as_ref().map_or(true, |f| f(m))
            }));
        }
        s
    }
}

impl std::fmt::Debug for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Symbol({})", self.name)
    }
}

/// Applies the multiplier; errors if any support frequency falls outside
/// the symbol's domain.
pub fn apply(phi: &Symbol, x: &QElement) -> Result<QElement> {
    for m in x.support() {
        if !phi.admits(m) {
            return Err(Error::SymbolDomain { symbol: phi.name.clone(), frequency: m.to_string() });
        }
    }
    Ok(x.map_coeffs(|m, c| phi.eval(m) * c))
}

/// D^μ = ∂_1^{μ_1} ⋯ ∂_d^{μ_d}; the coefficient at m picks up
/// Π_j (2πi m_j)^{μ_j}.
pub fn derivative(x: &QElement, mu: &[u32]) -> QElement {
    x.map_coeffs(|m, c| {
        let mut f = Complex64::new(1.0, 0.0);
        for (j, &order) in mu.iter().enumerate() {
            if order > 0 {
                f *= Complex64::new(0.0, TAU * m.0[j] as f64).powu(order);
            }
        }
        f * c
    })
}

/// Δ = Σ_j ∂_j², i.e. the coefficient at m times −4π²|m|².
pub fn laplacian(x: &QElement) -> QElement {
    x.map_coeffs(|m, c| c * Complex64::new(-TAU * TAU * m.norm_sq(), 0.0))
}

/// Bessel potential J^α: (1 + |m|²)^{α/2}.
pub fn bessel(x: &QElement, alpha: f64) -> QElement {
    x.map_coeffs(|m, c| c * (1.0 + m.norm_sq()).powf(alpha / 2.0))
}

/// Riesz potential I^α: |m|^α on m ≠ 0. Refuses elements with a mean;
/// use `strip_mean` first.
pub fn riesz(x: &QElement, alpha: f64) -> Result<QElement> {
    let mean = x.trace();
    if mean != Complex64::new(0.0, 0.0) {
        return Err(Error::NonzeroMean {
            operation: "riesz potential".into(),
            coeff: format!("{mean}"),
        });
    }
    Ok(x.map_coeffs(|m, c| c * m.norm_sq().powf(alpha / 2.0)))
}

/// Translation T_u: coefficient at m times e^{2πi u·m}; an L_p-isometry.
pub fn translate(x: &QElement, u: &[f64]) -> QElement {
    x.map_coeffs(|m, c| c * Complex64::from_polar(1.0, TAU * m.dot(u)))
}

/// k-th difference Δ_u^k with symbol (e^{2πi u·m} − 1)^k.
pub fn difference(x: &QElement, u: &[f64], k: u32) -> QElement {
    x.map_coeffs(|m, c| {
        let e = Complex64::from_polar(1.0, TAU * m.dot(u)) - Complex64::new(1.0, 0.0);
        c * e.powu(k)
    })
}

/// Square Fejér mean: weight Π_j (1 − |m_j|/(N+1)) on max_j |m_j| ≤ N,
/// zero outside.
pub fn fejer(x: &QElement, n: u32) -> QElement {
    let np1 = (n + 1) as f64;
    x.map_coeffs(|m, c| {
        if m.linf() > n as i64 {
            return Complex64::new(0.0, 0.0);
        }
        let w: f64 = m.0.iter().map(|&mj| 1.0 - (mj.abs() as f64) / np1).product();
        c * w
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemigroupKind {
    Poisson,
    Heat,
}

/// ε-parameterized Poisson/heat semigroup with `k`-fold derivative (k > 0)
/// or integration (k < 0) in ε.
///
/// Poisson: coefficient factor (−sgn(k)·2π|m|)^k e^{−2πε|m|};
/// heat: (−sgn(k)·4π²|m|²)^k e^{−4π²ε|m|²}. For k = 0 the mean passes
/// through; for k > 0 it is annihilated; k < 0 requires a mean-zero input
/// (the integral diverges on constants).
pub fn semigroup(x: &QElement, kind: SemigroupKind, eps: f64, k: i32) -> Result<QElement> {
    if k < 0 {
        let mean = x.trace();
        if mean != Complex64::new(0.0, 0.0) {
            return Err(Error::NonzeroMean {
                operation: "semigroup integration (k < 0)".into(),
                coeff: format!("{mean}"),
            });
        }
    }
    Ok(x.map_coeffs(|m, c| {
        let base = match kind {
            SemigroupKind::Poisson => TAU * m.norm(),
            SemigroupKind::Heat => TAU * TAU * m.norm_sq(),
        };
        let decay = (-eps * base).exp();
        let factor = match k.cmp(&0) {
            std::cmp::Ordering::Equal => 1.0,
            std::cmp::Ordering::Greater => (-base).powi(k),
            std::cmp::Ordering::Less => {
                if base == 0.0 {
                    // unreachable: mean-zero enforced above
                    0.0
                } else {
                    base.powi(k)
                }
            }
        };
        c * factor * decay
    }))
}

/// Factor C_{w,k}·r^{w−k} of the circular semigroups, where w = |m| for
/// the Poisson kernel and w = |m|² for the heat kernel:
/// C_{w,k} = w(w−1)⋯(w−k+1) for k ≥ 0 and 1/((w+1)⋯(w−k)) for k < 0.
fn circular_factor(w: f64, r: f64, k: i32) -> f64 {
    let c = if k >= 0 {
        (0..k).map(|i| w - i as f64).product::<f64>()
    } else {
        1.0 / (1..=(-k)).map(|i| w + i as f64).product::<f64>()
    };
    if c == 0.0 {
        return 0.0;
    }
    c * r.powf(w - k as f64)
}

/// Circular Poisson `P_r` / heat `W_r` semigroup with `k`-fold derivative
/// or integration in `r`.
///
/// For the Poisson kernel with k ≥ 1 the caller must have removed all
/// frequencies with |m| < k (non-integer |m| keeps those coefficients
/// alive and they are not integrable against (1−r)^{q(k−α)} dr/(1−r));
/// this function errors if any are present.
pub fn circular_semigroup(x: &QElement, kind: SemigroupKind, r: f64, k: i32) -> Result<QElement> {
    if kind == SemigroupKind::Poisson && k >= 1 {
        for m in x.support() {
            if m.norm() < k as f64 {
                return Err(Error::LowFrequency {
                    frequency: m.to_string(),
                    norm: m.norm(),
                    k,
                });
            }
        }
    }
    Ok(x.map_coeffs(|m, c| {
        let w = match kind {
            SemigroupKind::Poisson => m.norm(),
            SemigroupKind::Heat => m.norm_sq(),
        };
        c * circular_factor(w, r, k)
    }))
}
