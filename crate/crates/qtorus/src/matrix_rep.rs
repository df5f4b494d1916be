//! L_p norms via the truncated matrix representation.
//!
//! An element acts on ℓ₂(Z^d) in the twisted-monomial basis with matrix
//! entries `x̂(m−n)·e^{iσ(m−n,n)}`; compressing to the window
//! Z_N = {−N,…,N}^d and taking normalized Schatten norms converges to
//! the tracial L_p norm as N grows. The compression never overshoots:
//! at p = 2 the truncated value has the closed form
//! (1/|Z_N|) Σ_{m,n∈Z_N} |x̂(m−n)|², used for calibration throughout.

use faer::prelude::*;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{phase, MultiIndex, QElement};
use crate::error::{Error, Result};
use crate::linalg;

/// Default cap on |Z_N| = (2N+1)^d; 33² keeps dense eigendecomposition
/// in the tens of milliseconds.
pub const DEFAULT_WINDOW_BUDGET: usize = 1100;

/// The window Z_N = {−N,…,N}^d enumerated lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationWindow {
    d: usize,
    n: i64,
}

impl TruncationWindow {
    pub fn new(d: usize, n: i64) -> Self {
        assert!(n >= 0, "window parameter must be nonnegative");
        TruncationWindow { d, n }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn side(&self) -> usize {
        (2 * self.n + 1) as usize
    }

    pub fn size(&self) -> usize {
        self.side().pow(self.d as u32)
    }

    /// The i-th multi-index in lexicographic order.
    pub fn index(&self, mut i: usize) -> MultiIndex {
        let side = self.side();
        let mut coords = vec![0i64; self.d];
        for axis in (0..self.d).rev() {
            coords[axis] = (i % side) as i64 - self.n;
            i /= side;
        }
        MultiIndex(coords)
    }

    /// Stable inverse of `index`.
    pub fn position(&self, m: &MultiIndex) -> Option<usize> {
        let side = self.side();
        let mut pos = 0usize;
        for &c in &m.0 {
            if c < -self.n || c > self.n {
                return None;
            }
            pos = pos * side + (c + self.n) as usize;
        }
        Some(pos)
    }

    pub fn iter(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.size()).map(move |i| self.index(i))
    }
}

/// Dense compression of the matrix of an element to a window.
pub struct TruncatedMatrix {
    pub window: TruncationWindow,
    pub entries: Mat<c64>,
    /// Whether Schatten norms divide the trace by the window size
    /// (the tracial normalization). Always set by `to_matrix`.
    pub normalized: bool,
}

impl TruncatedMatrix {
    pub fn size(&self) -> usize {
        self.window.size()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }
}

/// A_N(x): the compression of `[x]` to Z_N.
pub fn to_matrix(x: &QElement, n: i64) -> Result<TruncatedMatrix> {
    to_matrix_with_budget(x, n, DEFAULT_WINDOW_BUDGET)
}

pub fn to_matrix_with_budget(x: &QElement, n: i64, budget: usize) -> Result<TruncatedMatrix> {
    let window = TruncationWindow::new(x.d(), n);
    let size = window.size();
    if size > budget {
        return Err(Error::WindowBudget { size, budget });
    }
    linalg::pin_sequential();
    let mut entries = Mat::<c64>::zeros(size, size);
    // fill by diagonals: entry(row m, col n) = x̂(v)·e^{iσ(v,n)} with v = m−n
    for (v, &c) in x.iter() {
        for (col, nn) in window.iter().enumerate() {
            let m = nn.add(v);
            if let Some(row) = window.position(&m) {
                let ph = phase(x.theta(), v, &nn);
                entries[(row, col)] = c * Complex64::from_polar(1.0, ph);
            }
        }
    }
    Ok(TruncatedMatrix { window, entries, normalized: true })
}

/// Normalized Schatten norm ((1/size)·Σ sᵢ^p)^{1/p}; p = ∞ is the largest
/// singular value. `p` must satisfy p ≥ 1 or p = ∞.
pub fn schatten_norm(a: &TruncatedMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) && !p.is_infinite() {
        return Err(Error::Constraint(format!("schatten exponent must satisfy p >= 1, got {p}")));
    }
    schatten_power_mean(a, p)
}

/// Same aggregation without the p ≥ 1 gate; used internally with
/// exponents in (0,1) on positive matrices (Triebel square functions).
pub(crate) fn schatten_power_mean(a: &TruncatedMatrix, p: f64) -> Result<f64> {
    let size = a.size() as f64;
    if p == 2.0 {
        // Frobenius route, exact
        let mut s = 0.0;
        for j in 0..a.size() {
            for i in 0..a.size() {
                s += a.entries[(i, j)].norm_sqr();
            }
        }
        return Ok((s / size).sqrt());
    }
    if p == 4.0 {
        // Σ s_i^4 = ‖a*a‖_F², again no eigensolver needed
        let g = linalg::gram(&a.entries);
        let mut s = 0.0;
        for j in 0..a.size() {
            for i in 0..a.size() {
                s += g[(i, j)].norm_sqr();
            }
        }
        return Ok((s / size).powf(0.25));
    }
    let sv = linalg::singular_values(&a.entries)?;
    if p.is_infinite() {
        return Ok(sv.first().copied().unwrap_or(0.0));
    }
    let sum: f64 = sv.iter().map(|s| s.powf(p)).sum();
    Ok((sum / size).powf(1.0 / p))
}

/// Eigenvalues of the compression of a self-adjoint element (clamped at 0
/// when `positive` is set), aggregated as ((1/size)·Σ λᵢ^p)^{1/p}.
pub(crate) fn hermitian_power_mean(a: &TruncatedMatrix, p: f64, positive: bool) -> Result<f64> {
    let size = a.size() as f64;
    let vals = linalg::hermitian_eigenvalues(&a.entries)?;
    if p.is_infinite() {
        return Ok(vals.iter().fold(0.0f64, |acc, &l| acc.max(l.abs())));
    }
    let sum: f64 = vals
        .iter()
        .map(|&l| {
            let v = if positive { l.max(0.0) } else { l.abs() };
            v.powf(p)
        })
        .sum();
    Ok((sum / size).powf(1.0 / p))
}

/// Control for the adaptive L_p evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LpCtrl {
    /// Explicit window schedule; when empty, {2·deg, 4·deg, 8·deg} capped
    /// by the budget is used.
    pub schedule: Vec<i64>,
    /// Relative-change stopping tolerance along the schedule.
    pub rel_tol: f64,
    /// Stop once the p=2 calibration error at the current window drops
    /// below this value (optional).
    pub p2_target: Option<f64>,
    /// Cap on |Z_N|.
    pub max_window: usize,
    /// Richardson-extrapolate the last two window values in 1/(2N+1)
    /// for finite p ≠ 2.
    pub extrapolate: bool,
}

impl Default for LpCtrl {
    fn default() -> Self {
        LpCtrl {
            schedule: vec![],
            rel_tol: 1e-3,
            p2_target: None,
            max_window: DEFAULT_WINDOW_BUDGET,
            extrapolate: true,
        }
    }
}

impl LpCtrl {
    pub fn with_schedule(mut self, schedule: Vec<i64>) -> Self {
        self.schedule = schedule;
        self
    }

    fn effective_schedule(&self, x: &QElement) -> Vec<i64> {
        let d = x.d() as u32;
        let budget = self.max_window;
        let fits = |n: i64| ((2 * n + 1) as usize).pow(d) <= budget;
        let mut sched: Vec<i64> = if self.schedule.is_empty() {
            let deg = x.degree().max(1);
            vec![2 * deg, 4 * deg, 8 * deg]
        } else {
            self.schedule.clone()
        };
        sched.retain(|&n| n >= 0 && fits(n));
        sched.dedup();
        if sched.is_empty() {
            // largest window the budget allows
            let mut n = 0i64;
            while fits(n + 1) {
                n += 1;
            }
            sched.push(n);
        }
        sched
    }
}

/// Diagnostics record serialized alongside reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LpDiag {
    pub n_used: i64,
    pub value: f64,
    pub p2_calibration_error: f64,
    pub converged: bool,
    /// Raw compression value at the final window (≤ the exact norm).
    pub raw_value: f64,
    pub extrapolated: bool,
    pub history: Vec<(i64, f64)>,
}

/// Closed-form truncated p=2 value at window N:
/// ((1/|Z_N|) Σ_v |x̂(v)|²·#{(m,n)∈Z_N²: m−n=v})^{1/2}.
pub fn truncated_l2(x: &QElement, n: i64) -> f64 {
    let side = 2 * n + 1;
    let d = x.d();
    let mut total = 0.0;
    for (v, c) in x.iter() {
        let mut pairs = 1.0f64;
        for j in 0..d {
            pairs *= (side - v.0[j].abs()).max(0) as f64;
        }
        total += c.norm_sqr() * pairs;
    }
    (total / (side as f64).powi(d as i32)).sqrt()
}

/// Adaptive L_p norm along a growing window schedule.
///
/// p = 2 returns the exact Plancherel value (the compression route is
/// kept as a calibration diagnostic). Finite p ≠ 2 optionally applies
/// Richardson extrapolation in 1/(2N+1) to the last two compression
/// values; the raw value stays in the diagnostics. Budget exhaustion
/// before the tolerance is met is reported as non-convergence, not an
/// error.
pub fn lp_norm(x: &QElement, p: f64, ctrl: &LpCtrl) -> Result<LpDiag> {
    if !(p >= 1.0) && !p.is_infinite() {
        return Err(Error::Constraint(format!("lp_norm requires p >= 1 or p = inf, got {p}")));
    }
    let exact_l2 = x.norm_l2();
    if x.is_zero() {
        return Ok(LpDiag {
            n_used: 0,
            value: 0.0,
            p2_calibration_error: 0.0,
            converged: true,
            raw_value: 0.0,
            extrapolated: false,
            history: vec![],
        });
    }
    let sched = ctrl.effective_schedule(x);

    if p == 2.0 {
        let n_last = *sched.last().unwrap();
        let trunc = truncated_l2(x, n_last);
        let cal = (trunc - exact_l2).abs() / exact_l2;
        return Ok(LpDiag {
            n_used: n_last,
            value: exact_l2,
            p2_calibration_error: cal,
            converged: true,
            raw_value: trunc,
            extrapolated: false,
            history: sched.iter().map(|&n| (n, truncated_l2(x, n))).collect(),
        });
    }

    let mut history: Vec<(i64, f64)> = Vec::new();
    let mut converged = false;
    for &n in &sched {
        let a = to_matrix_with_budget(x, n, ctrl.max_window)?;
        let v = schatten_norm(&a, p)?;
        if let Some((_, prev)) = history.last() {
            if (v - prev).abs() <= ctrl.rel_tol * v.abs().max(f64::MIN_POSITIVE) {
                history.push((n, v));
                converged = true;
                break;
            }
        }
        history.push((n, v));
        if let Some(target) = ctrl.p2_target {
            let cal = (truncated_l2(x, n) - exact_l2).abs() / exact_l2;
            if cal < target {
                converged = true;
                break;
            }
        }
    }
    let (n_used, raw) = *history.last().unwrap();
    let mut value = raw;
    let mut extrapolated = false;
    if ctrl.extrapolate && p.is_finite() && history.len() >= 2 {
        let (n1, v1) = history[history.len() - 2];
        let (n2, v2) = history[history.len() - 1];
        let l1 = (2 * n1 + 1) as f64;
        let l2 = (2 * n2 + 1) as f64;
        let w = (1.0 / l2) / (1.0 / l1 - 1.0 / l2);
        value = v2 + (v2 - v1) * w;
        extrapolated = true;
    }
    let cal = (truncated_l2(x, n_used) - exact_l2).abs() / exact_l2;
    if ctrl.p2_target.is_none() && history.len() == 1 {
        // single-window schedule: nothing to compare against
        converged = true;
    }
    Ok(LpDiag {
        n_used,
        value,
        p2_calibration_error: cal,
        converged,
        raw_value: raw,
        extrapolated,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{MultiIndex, QElement, ThetaMatrix};
    use crate::multipliers::{apply, Symbol};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn window_enumeration_roundtrips() {
        let w = TruncationWindow::new(2, 3);
        assert_eq!(w.size(), 49);
        for i in 0..w.size() {
            let m = w.index(i);
            assert_eq!(w.position(&m), Some(i));
        }
        // lexicographic
        assert_eq!(w.index(0), MultiIndex(vec![-3, -3]));
        assert_eq!(w.index(1), MultiIndex(vec![-3, -2]));
        assert_eq!(w.index(w.size() - 1), MultiIndex(vec![3, 3]));
        assert_eq!(w.position(&MultiIndex(vec![4, 0])), None);
    }

    #[test]
    fn identity_maps_to_identity_matrix() {
        let th = ThetaMatrix::constant_skew(2, 0.3);
        let one = QElement::one(th);
        let a = to_matrix(&one, 2).unwrap();
        for i in 0..a.size() {
            for j in 0..a.size() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((a.entry(i, j) - c(expect, 0.0)).norm() < 1e-15);
            }
        }
        assert!((schatten_norm(&a, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((schatten_norm(&a, 3.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((schatten_norm(&a, f64::INFINITY).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monomial_is_a_shift_band() {
        // d=1: U^m compresses to a 0/1 band on diagonal offset m
        let th = ThetaMatrix::zero(1);
        let x = QElement::monomial(th, MultiIndex(vec![2]), c(1.0, 0.0)).unwrap();
        let a = to_matrix(&x, 4).unwrap();
        let w = &a.window;
        for i in 0..a.size() {
            for j in 0..a.size() {
                let mi = w.index(i).0[0];
                let nj = w.index(j).0[0];
                let expect = if mi - nj == 2 { 1.0 } else { 0.0 };
                assert!((a.entry(i, j) - c(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn entry_formula_matches_trace_route() {
        // entry(m,n) = τ((U^m)* x U^n), sampled
        let th = ThetaMatrix::from_lower(2, &[0.2360679774997897]).unwrap();
        let x = QElement::from_coeffs(
            th.clone(),
            vec![
                (MultiIndex(vec![1, 0]), c(0.7, -0.4)),
                (MultiIndex(vec![-1, 2]), c(-0.3, 0.9)),
                (MultiIndex(vec![0, 0]), c(0.2, 0.0)),
            ],
        )
        .unwrap();
        let a = to_matrix(&x, 2).unwrap();
        let w = &a.window;
        for (i, m) in w.iter().enumerate().step_by(7) {
            for (j, n) in w.iter().enumerate().step_by(5) {
                let um = QElement::monomial(th.clone(), m.clone(), c(1.0, 0.0)).unwrap();
                let un = QElement::monomial(th.clone(), n.clone(), c(1.0, 0.0)).unwrap();
                let tr = um.adjoint().multiply(&x).unwrap().multiply(&un).unwrap().trace();
                assert!((a.entry(i, j) - tr).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn schatten_rank_one_and_p2() {
        let th = ThetaMatrix::zero(1);
        // rank-one e_{11}: realized directly
        let w = TruncationWindow::new(1, 2);
        let s = w.size();
        let mut entries = Mat::<c64>::zeros(s, s);
        entries[(0, 0)] = c64::new(1.0, 0.0);
        let a = TruncatedMatrix { window: w, entries, normalized: true };
        for p in [1.0, 2.0, 3.0] {
            let expect = (1.0 / s as f64).powf(1.0 / p);
            assert!((schatten_norm(&a, p).unwrap() - expect).abs() < 1e-12);
        }
        assert!((schatten_norm(&a, f64::INFINITY).unwrap() - 1.0).abs() < 1e-12);

        // p=2 equals Frobenius/sqrt(size) equals the closed form
        let x = QElement::from_coeffs(
            ThetaMatrix::zero(1),
            vec![
                (MultiIndex(vec![0]), c(0.3, 0.1)),
                (MultiIndex(vec![1]), c(-1.0, 0.2)),
                (MultiIndex(vec![-2]), c(0.5, 0.5)),
            ],
        )
        .unwrap();
        let _ = th;
        let a = to_matrix(&x, 6).unwrap();
        let via_schatten = schatten_norm(&a, 2.0).unwrap();
        assert!((via_schatten - truncated_l2(&x, 6)).abs() < 1e-12);
        // eigensolver route agrees with the Frobenius fast path
        let sv = linalg::singular_values(&a.entries).unwrap();
        let via_eig = (sv.iter().map(|s| s * s).sum::<f64>() / a.size() as f64).sqrt();
        assert!((via_eig - via_schatten).abs() < 1e-10);
    }

    #[test]
    fn schatten_monotone_in_p() {
        let th = ThetaMatrix::from_lower(2, &[0.41421356237]).unwrap();
        let x = QElement::from_coeffs(
            th,
            vec![
                (MultiIndex(vec![1, 0]), c(1.0, 0.3)),
                (MultiIndex(vec![0, -1]), c(-0.4, 0.8)),
                (MultiIndex(vec![2, 1]), c(0.1, -0.6)),
            ],
        )
        .unwrap();
        let a = to_matrix(&x, 4).unwrap();
        let ps = [1.0, 1.5, 2.0, 4.0, f64::INFINITY];
        let mut last = 0.0;
        for &p in &ps {
            let v = schatten_norm(&a, p).unwrap();
            assert!(v + 1e-12 >= last, "p={p}: {v} < {last}");
            last = v;
        }
    }

    #[test]
    fn p_infinity_monotone_in_n() {
        let th = ThetaMatrix::zero(1);
        let x = QElement::from_coeffs(
            th,
            vec![
                (MultiIndex(vec![1]), c(1.0, 0.0)),
                (MultiIndex(vec![-1]), c(1.0, 0.0)),
                (MultiIndex(vec![3]), c(0.2, 0.1)),
            ],
        )
        .unwrap();
        let mut last = 0.0;
        for n in [2i64, 4, 8, 16] {
            let v = schatten_norm(&to_matrix(&x, n).unwrap(), f64::INFINITY).unwrap();
            assert!(v + 1e-10 >= last);
            last = v;
        }
    }

    #[test]
    fn contractivity_raw_never_exceeds_exact() {
        let th = ThetaMatrix::from_lower(2, &[0.3010299956639812]).unwrap();
        let x = QElement::from_coeffs(
            th.clone(),
            vec![
                (MultiIndex(vec![1, 1]), c(0.9, -0.1)),
                (MultiIndex(vec![-2, 0]), c(0.2, 0.7)),
            ],
        )
        .unwrap();
        for n in [2i64, 4, 8] {
            assert!(truncated_l2(&x, n) <= x.norm_l2() + 1e-12);
        }
        // arbitrary p on a unitary multiple: norm is |c|
        let um = QElement::monomial(th, MultiIndex(vec![2, -1]), c(0.0, 1.7)).unwrap();
        for p in [1.0, 2.5, f64::INFINITY] {
            for n in [2i64, 4] {
                let v = schatten_norm(&to_matrix(&um, n).unwrap(), p).unwrap();
                assert!(v <= 1.7 + 1e-12);
            }
        }
    }

    #[test]
    fn lp_norm_unitary_converges_to_one() {
        // d=1 windows reach the budget, so the deficiency 1−|m|/(2N+1)
        // actually falls below 1e−3 (raw at p≥2, extrapolated at p=1).
        let th = ThetaMatrix::zero(1);
        let x = QElement::monomial(th, MultiIndex(vec![1]), c(1.0, 0.0)).unwrap();
        let ctrl = LpCtrl {
            schedule: vec![64, 128, 256],
            rel_tol: 1e-12,
            ..LpCtrl::default()
        };
        for p in [1.0, 2.0, 4.0, f64::INFINITY] {
            let diag = lp_norm(&x, p, &ctrl).unwrap();
            assert!(
                (diag.value - 1.0).abs() < 1e-3,
                "p={p}: value {} (raw {})",
                diag.value,
                diag.raw_value
            );
        }
    }

    #[test]
    fn lp_norm_p2_closed_form_calibration() {
        let th = ThetaMatrix::zero(1);
        let x = QElement::from_coeffs(
            th,
            vec![
                (MultiIndex(vec![0]), c(0.5, 0.0)),
                (MultiIndex(vec![1]), c(1.0, -0.5)),
                (MultiIndex(vec![-2]), c(0.3, 0.3)),
            ],
        )
        .unwrap();
        let ctrl = LpCtrl { schedule: vec![256, 512], rel_tol: 0.0, ..LpCtrl::default() };
        let diag = lp_norm(&x, 2.0, &ctrl).unwrap();
        assert!((diag.value - x.norm_l2()).abs() < 1e-14);
        assert!(diag.p2_calibration_error < 1e-3);
    }

    #[test]
    fn lp_norm_sup_norm_of_cosine() {
        // θ=0, d=1, x = z + z^{-1}: ‖x‖_∞ = 2, values increase toward 2
        let th = ThetaMatrix::zero(1);
        let x = QElement::from_coeffs(
            th,
            vec![
                (MultiIndex(vec![1]), c(1.0, 0.0)),
                (MultiIndex(vec![-1]), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let ctrl = LpCtrl { schedule: vec![16, 32, 64], rel_tol: 1e-6, ..LpCtrl::default() };
        let diag = lp_norm(&x, f64::INFINITY, &ctrl).unwrap();
        assert!((diag.value - 2.0).abs() < 1e-3, "got {}", diag.value);
        let mut last = 0.0;
        for &(_, v) in &diag.history {
            assert!(v >= last - 1e-12 && v <= 2.0 + 1e-12);
            last = v;
        }
    }

    #[test]
    fn schur_identity_entrywise() {
        let th = ThetaMatrix::from_lower(2, &[0.16180339887]).unwrap();
        let x = QElement::from_coeffs(
            th,
            vec![
                (MultiIndex(vec![1, 0]), c(0.6, -0.2)),
                (MultiIndex(vec![0, 2]), c(-0.1, 0.8)),
                (MultiIndex(vec![-1, -1]), c(0.4, 0.4)),
            ],
        )
        .unwrap();
        let phi = Symbol::new("poly", |m: &MultiIndex| c((m.0[0] * m.0[0]) as f64 - 0.5, m.0[1] as f64));
        let n = 3i64;
        let lhs = to_matrix(&apply(&phi, &x).unwrap(), n).unwrap();
        let rhs = to_matrix(&x, n).unwrap();
        let w = &rhs.window;
        for i in 0..w.size() {
            for j in 0..w.size() {
                let v = w.index(i).sub(&w.index(j));
                let expect = phi.eval(&v) * rhs.entry(i, j);
                assert!((lhs.entry(i, j) - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn window_budget_is_enforced() {
        let th = ThetaMatrix::constant_skew(2, 0.3);
        let x = QElement::one(th);
        let err = to_matrix_with_budget(&x, 40, 1000).unwrap_err();
        assert!(matches!(err, Error::WindowBudget { .. }));
    }
}
