//! Exact arithmetic of quantum-torus trigonometric polynomials.
//!
//! The algebra is generated by `d` unitaries subject to
//! `U_k U_j = e^{2πi θ_{kj}} U_j U_k` for a real skew-symmetric `θ`.
//! Elements are finite twisted Fourier sums `x = Σ_m x̂(m) U^m` with
//! `U^m = U_1^{m_1} ⋯ U_d^{m_d}` kept in this normal order, so every
//! product reduces to a phase times another normal-ordered monomial.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Skew-symmetry is validated to machine precision on construction.
const SKEW_TOL: f64 = 1e-12;

/// The deformation parameter: a real skew-symmetric d×d matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaMatrix {
    d: usize,
    entries: Vec<f64>, // row-major, d*d
}

impl ThetaMatrix {
    pub fn new(d: usize, entries: Vec<f64>) -> Result<Self> {
        if d == 0 || entries.len() != d * d {
            return Err(Error::NotSquare {
                rows: if d == 0 { 0 } else { entries.len() / d },
                cols: d,
            });
        }
        for j in 0..d {
            for k in j..d {
                let defect = entries[j * d + k] + entries[k * d + j];
                if defect.abs() > SKEW_TOL {
                    return Err(Error::NotSkewSymmetric { i: j, j: k, defect });
                }
            }
        }
        Ok(ThetaMatrix { d, entries })
    }

    /// The commutative torus (θ = 0).
    pub fn zero(d: usize) -> Arc<Self> {
        Arc::new(ThetaMatrix { d, entries: vec![0.0; d * d] })
    }

    /// Builds θ with `θ_{kj} = value` for all k > j (and `−value` above).
    pub fn constant_skew(d: usize, value: f64) -> Arc<Self> {
        let mut entries = vec![0.0; d * d];
        for k in 0..d {
            for j in 0..k {
                entries[k * d + j] = value;
                entries[j * d + k] = -value;
            }
        }
        Arc::new(ThetaMatrix { d, entries })
    }

    pub fn from_lower(d: usize, lower: &[f64]) -> Result<Arc<Self>> {
        let expected = d * (d - 1) / 2;
        if lower.len() != expected {
            return Err(Error::Parse(format!(
                "expected {expected} strictly-lower entries for d = {d}, got {}",
                lower.len()
            )));
        }
        let mut entries = vec![0.0; d * d];
        let mut it = lower.iter();
        for k in 1..d {
            for j in 0..k {
                let v = *it.next().unwrap();
                entries[k * d + j] = v;
                entries[j * d + k] = -v;
            }
        }
        Ok(Arc::new(ThetaMatrix { d, entries }))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.d + col]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.d)
            .map(|r| self.entries[r * self.d..(r + 1) * self.d].to_vec())
            .collect()
    }

    /// θ̃_{jk} = −2π θ_{jk} for j < k, zero otherwise (upper triangular).
    pub fn tilde(&self, row: usize, col: usize) -> f64 {
        if row < col {
            -TAU * self.get(row, col)
        } else {
            0.0
        }
    }

    pub fn is_commutative(&self) -> bool {
        self.entries.iter().all(|&e| e == 0.0)
    }
}

/// A frequency vector m ∈ Z^d. Ordered lexicographically so that every
/// support enumeration in the crate is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn unit(d: usize, axis: usize) -> Self {
        let mut v = vec![0; d];
        v[axis] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|&c| (c as f64) * (c as f64)).sum()
    }

    /// Euclidean length |m|.
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn linf(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn l1(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| -a).collect())
    }

    /// u·m for a real vector u.
    pub fn dot(&self, u: &[f64]) -> f64 {
        self.0.iter().zip(u).map(|(&m, &x)| m as f64 * x).sum()
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Normal-ordering phase: `U^m · U^n = e^{iσ(m,n)} U^{m+n}` with
/// `σ(m,n) = 2π Σ_{k>j} θ_{kj} m_k n_j`.
///
/// Equivalently σ(m,n) = n·θ̃·mᵗ; the two routes are cross-checked in the
/// tests together with the matrix-entry formula of the truncated
/// representation. The value is returned unreduced.
pub fn phase(theta: &ThetaMatrix, m: &MultiIndex, n: &MultiIndex) -> f64 {
    let d = theta.d();
    let mut acc = 0.0;
    for k in 1..d {
        let mk = m.0[k] as f64;
        if mk == 0.0 {
            continue;
        }
        for j in 0..k {
            let nj = n.0[j] as f64;
            if nj != 0.0 {
                acc += theta.get(k, j) * mk * nj;
            }
        }
    }
    TAU * acc
}

/// Adjoint phase: `(U^m)* = e^{iρ(m)} U^{−m}` with ρ(m) = σ(m,m).
pub fn adjoint_phase(theta: &ThetaMatrix, m: &MultiIndex) -> f64 {
    phase(theta, m, m)
}

/// A quantum-torus trigonometric polynomial: a finite twisted Fourier sum.
///
/// Coefficients of modulus ≤ `prune_tol` are dropped; the default
/// tolerance is 0, i.e. only exact zeros are pruned.
#[derive(Debug, Clone)]
pub struct QElement {
    theta: Arc<ThetaMatrix>,
    coeffs: BTreeMap<MultiIndex, Complex64>,
    prune_tol: f64,
}

impl QElement {
    pub fn zero(theta: Arc<ThetaMatrix>) -> Self {
        QElement { theta, coeffs: BTreeMap::new(), prune_tol: 0.0 }
    }

    pub fn one(theta: Arc<ThetaMatrix>) -> Self {
        let d = theta.d();
        Self::monomial(theta, MultiIndex::zero(d), Complex64::new(1.0, 0.0)).unwrap()
    }

    /// c·U^m.
    pub fn monomial(theta: Arc<ThetaMatrix>, m: MultiIndex, c: Complex64) -> Result<Self> {
        if m.len() != theta.d() {
            return Err(Error::DimensionMismatch { expected: theta.d(), got: m.len() });
        }
        let mut el = QElement::zero(theta);
        el.insert(m, c);
        Ok(el)
    }

    pub fn from_coeffs<I>(theta: Arc<ThetaMatrix>, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut el = QElement::zero(theta);
        for (m, c) in coeffs {
            if m.len() != el.theta.d() {
                return Err(Error::DimensionMismatch { expected: el.theta.d(), got: m.len() });
            }
            let cur = el.coeff(&m);
            el.insert(m, cur + c);
        }
        Ok(el)
    }

    pub fn with_prune_tol(mut self, tol: f64) -> Self {
        self.prune_tol = tol.max(0.0);
        let tol = self.prune_tol;
        self.coeffs.retain(|_, c| c.norm() > tol);
        self
    }

    pub fn prune_tol(&self) -> f64 {
        self.prune_tol
    }

    pub fn theta(&self) -> &Arc<ThetaMatrix> {
        &self.theta
    }

    pub fn d(&self) -> usize {
        self.theta.d()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored frequencies.
    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn support(&self) -> impl Iterator<Item = &MultiIndex> {
        self.coeffs.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Complex64 {
        self.coeffs.get(m).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// max_m max_j |m_j| over the support; 0 for the zero element.
    pub fn degree(&self) -> i64 {
        self.coeffs.keys().map(|m| m.linf()).max().unwrap_or(0)
    }

    fn insert(&mut self, m: MultiIndex, c: Complex64) {
        if c.norm() > self.prune_tol {
            self.coeffs.insert(m, c);
        } else {
            self.coeffs.remove(&m);
        }
    }

    fn same_theta(&self, other: &QElement) -> Result<()> {
        if Arc::ptr_eq(&self.theta, &other.theta) || self.theta == other.theta {
            Ok(())
        } else {
            Err(Error::ThetaMismatch)
        }
    }

    /// Applies `f` coefficientwise: x̂(m) ↦ f(m, x̂(m)). Results below the
    /// prune tolerance are dropped. This is the engine behind every
    /// Fourier multiplier.
    pub fn map_coeffs<F>(&self, mut f: F) -> QElement
    where
        F: FnMut(&MultiIndex, Complex64) -> Complex64,
    {
        let mut out = QElement::zero(self.theta.clone());
        out.prune_tol = self.prune_tol;
        for (m, &c) in &self.coeffs {
            let v = f(m, c);
            if v.norm() > out.prune_tol {
                out.coeffs.insert(m.clone(), v);
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> QElement {
        self.map_coeffs(|_, v| c * v)
    }

    pub fn add(&self, other: &QElement) -> Result<QElement> {
        linear_combine(&[
            (Complex64::new(1.0, 0.0), self.clone()),
            (Complex64::new(1.0, 0.0), other.clone()),
        ])
    }

    pub fn sub(&self, other: &QElement) -> Result<QElement> {
        linear_combine(&[
            (Complex64::new(1.0, 0.0), self.clone()),
            (Complex64::new(-1.0, 0.0), other.clone()),
        ])
    }

    /// Twisted product: ẑ(k) = Σ_{m+n=k} x̂(m) ŷ(n) e^{iσ(m,n)}.
    pub fn multiply(&self, other: &QElement) -> Result<QElement> {
        self.same_theta(other)?;
        let theta = self.theta.clone();
        let prune = self.prune_tol.max(other.prune_tol);
        let mut acc: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (m, &a) in &self.coeffs {
            for (n, &b) in &other.coeffs {
                let k = m.add(n);
                let ph = phase(&theta, m, n);
                let term = a * b * Complex64::from_polar(1.0, ph);
                *acc.entry(k).or_insert_with(|| Complex64::new(0.0, 0.0)) += term;
            }
        }
        acc.retain(|_, c| c.norm() > prune);
        Ok(QElement { theta, coeffs: acc, prune_tol: prune })
    }

    /// Involution: x* = Σ conj(x̂(m)) e^{iρ(m)} U^{−m}.
    pub fn adjoint(&self) -> QElement {
        let theta = self.theta.clone();
        let mut coeffs = BTreeMap::new();
        for (m, &c) in &self.coeffs {
            let ph = adjoint_phase(&theta, m);
            let v = c.conj() * Complex64::from_polar(1.0, ph);
            if v.norm() > self.prune_tol {
                coeffs.insert(m.neg(), v);
            }
        }
        QElement { theta, coeffs, prune_tol: self.prune_tol }
    }

    /// τ(x) = x̂(0), the tracial state.
    pub fn trace(&self) -> Complex64 {
        self.coeff(&MultiIndex::zero(self.d()))
    }

    /// ⟨x,y⟩ = τ(y* x) = Σ_m x̂(m) conj(ŷ(m)).
    pub fn inner_product(&self, other: &QElement) -> Result<Complex64> {
        self.same_theta(other)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, &a) in &self.coeffs {
            let b = other.coeff(m);
            if b != Complex64::new(0.0, 0.0) {
                acc += a * b.conj();
            }
        }
        Ok(acc)
    }

    /// ‖x‖₂ = (Σ |x̂(m)|²)^{1/2}, exact by Plancherel.
    pub fn norm_l2(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// (x̂(0), x − x̂(0)·1).
    pub fn strip_mean(&self) -> (Complex64, QElement) {
        let mean = self.trace();
        let mut rest = self.clone();
        rest.coeffs.remove(&MultiIndex::zero(self.d()));
        (mean, rest)
    }
}

/// Coefficientwise linear combination Σ cᵢ·xᵢ, pruned by the largest
/// prune tolerance among the terms.
pub fn linear_combine(terms: &[(Complex64, QElement)]) -> Result<QElement> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::Parse("linear_combine needs at least one term".into()));
    };
    let theta = first.theta.clone();
    let mut prune = 0.0f64;
    let mut acc: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
    for (c, x) in terms {
        if !(Arc::ptr_eq(&theta, &x.theta) || *theta == *x.theta) {
            return Err(Error::ThetaMismatch);
        }
        prune = prune.max(x.prune_tol);
        for (m, &v) in &x.coeffs {
            *acc.entry(m.clone()).or_insert_with(|| Complex64::new(0.0, 0.0)) += c * v;
        }
    }
    acc.retain(|_, c| c.norm() > prune);
    Ok(QElement { theta, coeffs: acc, prune_tol: prune })
}
