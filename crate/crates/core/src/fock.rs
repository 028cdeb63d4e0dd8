//! Truncated single-mode Fock space.
//!
//! A [`FockVector`] stores the amplitudes of `|0⟩ … |N⟩` for a cutoff `N`.
//! Everything here is exact linear algebra on the truncated basis; the only
//! approximation is the truncation itself, which is policed through
//! [`tail_mass`] and [`TailPolicy`].

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability allowed in the top of the truncated basis before a state is
/// considered under-resolved.
pub const TAIL_TOLERANCE: f64 = 1e-10;

/// Tolerance on `|Σ|amps|² − 1|` for a vector to count as normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Number of highest Fock indices summed by [`tail_mass`].
const TAIL_WINDOW: usize = 3;

/// Extra levels added by [`choose_cutoff`] on top of the Poisson estimate.
const CUTOFF_MARGIN: usize = 10;

/// What to do when a vector's tail mass exceeds [`TAIL_TOLERANCE`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TailPolicy {
    /// Fail with [`Error::CutoffInsufficient`].
    #[default]
    Strict,
    /// Log a warning and carry on.
    Lenient,
}

impl TailPolicy {
    pub(crate) fn check(self, cutoff: usize, tail: f64, limit: f64) -> Result<()> {
        if tail <= limit {
            return Ok(());
        }
        match self {
            TailPolicy::Strict => Err(Error::CutoffInsufficient { cutoff, tail, limit }),
            TailPolicy::Lenient => {
                log::warn!("cutoff {cutoff}: tail {tail:.3e} exceeds {limit:.1e}, continuing");
                Ok(())
            }
        }
    }
}

/// A point `x + ip` of phase space, or a coherent amplitude `r e^{iω}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

impl ComplexPoint {
    pub const ORIGIN: ComplexPoint = ComplexPoint { re: 0.0, im: 0.0 };

    /// Panics on non-finite input; use [`ComplexPoint::try_new`] for untrusted values.
    pub fn new(re: f64, im: f64) -> Self {
        Self::try_new(re, im).expect("ComplexPoint components must be finite")
    }

    pub fn try_new(re: f64, im: f64) -> Result<Self> {
        if re.is_finite() && im.is_finite() {
            Ok(Self { re, im })
        } else {
            Err(Error::invalid(format!("non-finite complex point ({re}, {im})")))
        }
    }

    pub fn real(re: f64) -> Self {
        Self::new(re, 0.0)
    }

    /// `r e^{iω}`.
    pub fn from_polar(r: f64, omega: f64) -> Self {
        Self::new(r * omega.cos(), r * omega.sin())
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.to_complex()
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(c: Complex64) -> Self {
        ComplexPoint::new(c.re, c.im)
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im)
    }
}

/// Amplitudes of `|0⟩ … |cutoff⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

impl FockVector {
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::invalid("a Fock vector needs at least one amplitude"));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::invalid("non-finite Fock amplitude"));
        }
        Ok(Self { amps })
    }

    pub fn zeros(cutoff: usize) -> Self {
        Self { amps: vec![Complex64::new(0.0, 0.0); cutoff + 1] }
    }

    pub fn vacuum(cutoff: usize) -> Self {
        Self::number_state(0, cutoff)
    }

    /// `|n⟩` embedded in a basis with the given cutoff (`n ≤ cutoff`).
    pub fn number_state(n: usize, cutoff: usize) -> Self {
        assert!(n <= cutoff, "number state {n} exceeds cutoff {cutoff}");
        let mut v = Self::zeros(cutoff);
        v.amps[n] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amps.get(n).copied().unwrap_or_default()
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm_sqr: self.norm_sqr() })
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { amps: self.amps.iter().map(|a| a * c).collect() }
    }

    /// Zero-extends (or keeps) the vector to at least `cutoff`.
    pub fn padded(&self, cutoff: usize) -> Self {
        let mut amps = self.amps.clone();
        if amps.len() < cutoff + 1 {
            amps.resize(cutoff + 1, Complex64::new(0.0, 0.0));
        }
        Self { amps }
    }

    /// `a·self + b·other`, zero-extended to the larger cutoff.
    pub fn combine(&self, a: Complex64, other: &FockVector, b: Complex64) -> Self {
        let len = self.amps.len().max(other.amps.len());
        let amps = (0..len).map(|n| a * self.amplitude(n) + b * other.amplitude(n)).collect();
        Self { amps }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(x, y)| x.conj() * y).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Highest index carrying more than `threshold` probability (0 if none).
    pub fn support(&self, threshold: f64) -> usize {
        self.amps.iter().rposition(|a| a.norm_sqr() > threshold).unwrap_or(0)
    }

    pub fn check_tail(&self, policy: TailPolicy) -> Result<()> {
        policy.check(self.cutoff(), tail_mass(self), TAIL_TOLERANCE)
    }
}

/// Probability carried by the top three retained Fock levels.
pub fn tail_mass(state: &FockVector) -> f64 {
    let amps = state.amplitudes();
    amps[amps.len().saturating_sub(TAIL_WINDOW)..].iter().map(|a| a.norm_sqr()).sum()
}

/// Smallest cutoff whose Poisson tail (mean `|α|² + 1`) beyond it is below
/// `tol`, plus a fixed margin for photon addition and displacement.
pub fn choose_cutoff(alpha_mag: f64, tol: f64) -> usize {
    debug_assert!(tol > 0.0 && tol <= 1e-6, "tol must lie in (0, 1e-6]");
    let mean = alpha_mag * alpha_mag + 1.0;
    let n_max = (mean + 40.0 * mean.sqrt() + 60.0).ceil() as usize;

    // pmf in log space, then suffix sums from the far end so no 1 − CDF cancellation.
    let ln_mean = mean.ln();
    let mut ln_fact = 0.0;
    let pmf: Vec<f64> = (0..=n_max)
        .map(|n| {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            (n as f64 * ln_mean - mean - ln_fact).exp()
        })
        .collect();
    let mut tail = 0.0;
    let mut suffix = vec![0.0; n_max + 2];
    for n in (0..=n_max).rev() {
        tail += pmf[n];
        suffix[n] = tail;
    }
    let n = (0..=n_max).find(|&n| suffix[n + 1] < tol).unwrap_or(n_max);
    n + CUTOFF_MARGIN
}

/// `|α⟩ = e^{−|α|²/2} Σ αⁿ/√n! |n⟩` truncated at `cutoff`.
pub fn coherent_vector(alpha: ComplexPoint, cutoff: usize, policy: TailPolicy) -> Result<FockVector> {
    let alpha = alpha.to_complex();
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut amp = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    amps.push(amp);
    for n in 1..=cutoff {
        amp = amp * alpha / (n as f64).sqrt();
        amps.push(amp);
    }
    let v = FockVector { amps };
    v.check_tail(policy)?;
    Ok(v)
}

/// `a†|ψ⟩`; the result has cutoff one higher than the input and is unnormalized.
///
/// The weight `(N+1)|ψ_N|²` landing on the new top level is checked against
/// [`TAIL_TOLERANCE`]: a populated edge means the input was already truncated.
pub fn apply_creation(state: &FockVector, policy: TailPolicy) -> Result<FockVector> {
    let top = state.cutoff();
    let edge = state.amps[top].norm_sqr() * (top + 1) as f64;
    policy.check(top, edge, TAIL_TOLERANCE)?;

    let mut amps = Vec::with_capacity(top + 2);
    amps.push(Complex64::new(0.0, 0.0));
    amps.extend(state.amps.iter().enumerate().map(|(n, a)| a * ((n + 1) as f64).sqrt()));
    Ok(FockVector { amps })
}

/// `a|ψ⟩` on the same basis; the top level is left empty.
pub fn apply_annihilation(state: &FockVector) -> FockVector {
    let len = state.amps.len();
    let amps = (0..len)
        .map(|n| if n + 1 < len { state.amps[n + 1] * ((n + 1) as f64).sqrt() } else { Complex64::new(0.0, 0.0) })
        .collect();
    FockVector { amps }
}

/// `n̂|ψ⟩`.
pub fn apply_number(state: &FockVector) -> FockVector {
    let amps = state.amps.iter().enumerate().map(|(n, a)| a * n as f64).collect();
    FockVector { amps }
}

/// `√(n (n−1) ⋯ (n−k+1))`, zero when `k > n`.
fn sqrt_falling(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|j| ((n - j) as f64).sqrt()).product()
}

/// `⟨a†^p a^q⟩` evaluated exactly on the truncated basis.
pub fn expectation_normal_ordered(state: &FockVector, p: usize, q: usize, policy: TailPolicy) -> Result<Complex64> {
    if p + q > 8 {
        return Err(Error::invalid(format!("moment order p+q={} exceeds 8", p + q)));
    }
    state.require_normalized()?;
    state.check_tail(policy)?;

    let amps = &state.amps;
    let top = state.cutoff();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in q..=top {
        let lowered = n - q;
        let m = lowered + p;
        if m > top {
            break;
        }
        let weight = sqrt_falling(n, q) * sqrt_falling(m, p);
        acc += amps[m].conj() * amps[n] * weight;
    }
    Ok(acc)
}

/// The normally ordered moments every metric is built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean_a: Complex64,
    pub mean_a2: Complex64,
    pub mean_a4: Complex64,
    pub mean_n: f64,
    pub mean_adag2a2: f64,
}

impl MomentSet {
    pub fn from_state(state: &FockVector, policy: TailPolicy) -> Result<Self> {
        let moments = Self {
            mean_a: expectation_normal_ordered(state, 0, 1, policy)?,
            mean_a2: expectation_normal_ordered(state, 0, 2, policy)?,
            mean_a4: expectation_normal_ordered(state, 0, 4, policy)?,
            mean_n: expectation_normal_ordered(state, 1, 1, policy)?.re,
            mean_adag2a2: expectation_normal_ordered(state, 2, 2, policy)?.re,
        };
        debug_assert!(moments.satisfies_cauchy_schwarz(1e-9));
        Ok(moments)
    }

    /// `mean_n ≥ 0`, `mean_adag2a2 ≥ 0`, `|⟨a⟩|² ≤ ⟨a†a⟩`, each up to `tol`.
    pub fn satisfies_cauchy_schwarz(&self, tol: f64) -> bool {
        self.mean_n >= -tol && self.mean_adag2a2 >= -tol && self.mean_a.norm_sqr() <= self.mean_n + tol
    }
}
