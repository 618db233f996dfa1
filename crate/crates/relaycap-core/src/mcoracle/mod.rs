//! Monte Carlo simulator of the dual-hop channel.
//!
//! Every estimator here draws its trials sequentially from one
//! [`RngStream`]. Parallel drivers split a run into shards, give shard `k`
//! the stream `(seed, k)` and merge the [`Accumulator`]s in shard order, so
//! results do not depend on the number of workers.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::eigenstats::SystemConfig;
use crate::matrixcore::{hermitian_eigenvalues, ComplexMatrix};
use crate::{Error, Result};

/// Relative threshold below which an eigenvalue counts as a structural zero.
pub const STRUCTURAL_ZERO: f64 = 1e-10;

/// A reproducible random stream: `(seed, stream_id)` fixes every draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// ChaCha8 keyed by `seed`, on stream `stream_id`.
    pub fn generator(&self) -> Gaussian {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        Gaussian { rng }
    }
}

/// Source of unit-variance circularly symmetric complex Gaussians.
#[derive(Debug, Clone)]
pub struct Gaussian {
    rng: ChaCha8Rng,
}

impl Gaussian {
    pub fn complex(&mut self) -> Complex64 {
        let re: f64 = StandardNormal.sample(&mut self.rng);
        let im: f64 = StandardNormal.sample(&mut self.rng);
        Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.complex())
    }
}

/// Running mean and sum of squared deviations (Welford), mergeable.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Accumulator {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
    /// Trials dropped as singular.
    pub skipped: u64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan et al. pairwise merge; call in a fixed order for reproducibility.
    pub fn merge(&mut self, other: &Self) {
        self.skipped += other.skipped;
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            let skipped = self.skipped;
            *self = *other;
            self.skipped = skipped;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        self.mean += d * w;
        self.m2 += other.m2 + d * d * self.n as f64 * w;
        self.n = n;
    }

    pub fn estimate(&self) -> McEstimate {
        let var = if self.n > 1 {
            self.m2 / (self.n - 1) as f64
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            stderr: libm::sqrt(var.max(0.0) / self.n.max(1) as f64),
            n_trials: self.n,
            skipped: self.skipped,
        }
    }
}

/// Sample mean with its standard error `sd/√n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_trials: u64,
    pub skipped: u64,
}

impl McEstimate {
    /// `|x - mean| ≤ k·stderr`.
    pub fn brackets(&self, x: f64, k: f64) -> bool {
        (x - self.mean).abs() <= k * self.stderr
    }
}

fn check_trials(n: u64) -> Result<()> {
    if n < 100 {
        return Err(Error::Domain("at least 100 trials required"));
    }
    Ok(())
}

/// One draw of `(H1, H2)`: `H1` is `n_r×n_s`, `H2` is `n_d×n_r`.
pub fn sample_channels(cfg: &SystemConfig, g: &mut Gaussian) -> (ComplexMatrix, ComplexMatrix) {
    let h1 = g.matrix(cfg.n_r as usize, cfg.n_s as usize);
    let h2 = g.matrix(cfg.n_d as usize, cfg.n_r as usize);
    (h1, h2)
}

/// Per-draw quantities of the received-signal model.
pub struct Draw {
    /// Whitened cascade `X = C⁻¹ H2 H1` with `R_n = I + a H2 H2† = C C†`;
    /// `X†X = H1† H2† R_n⁻¹ H2 H1`.
    pub whitened: ComplexMatrix,
    pub noise_chol: ComplexMatrix,
    pub h2h1: ComplexMatrix,
}

impl Draw {
    pub fn new(cfg: &SystemConfig, h1: &ComplexMatrix, h2: &ComplexMatrix) -> Result<Self> {
        let a = cfg.a();
        let mut rn = h2.gram_outer();
        rn.scale(a);
        rn.add_identity(1.0);
        let noise_chol = rn.cholesky()?;
        let h2h1 = h2.mul(h1);
        let whitened = noise_chol.solve_lower(&h2h1);
        Ok(Self {
            whitened,
            noise_chol,
            h2h1,
        })
    }

    /// The `n_s×n_s` cascade `H1† H2† R_n⁻¹ H2 H1`.
    pub fn cascade(&self) -> ComplexMatrix {
        self.whitened.gram_inner()
    }

    /// `½ log2 det(I + c X†X)`, `c = ρa/n_s`.
    pub fn capacity(&self, c: f64) -> Result<f64> {
        let mut m = self.cascade();
        m.scale(c);
        m.add_identity(1.0);
        Ok(0.5 * m.ln_det_hpd()? / core::f64::consts::LN_2)
    }

    /// `½ log2 det(I + R_s R_n⁻¹)` with `R_s = c H2 H1 H1† H2†`, as
    /// `ln det(R_n + R_s) - ln det R_n`.
    pub fn capacity_direct(&self, c: f64) -> Result<f64> {
        let mut rs = self.h2h1.gram_outer();
        rs.scale(c);
        let rn = self.noise_chol.mul(&self.noise_chol.adjoint());
        let mut sum = rn.clone();
        for i in 0..sum.rows() {
            for j in 0..sum.cols() {
                sum[(i, j)] += rs[(i, j)];
            }
        }
        let ln_rn = 2.0
            * (0..rn.rows())
                .map(|i| libm::log(self.noise_chol[(i, i)].re))
                .sum::<f64>();
        Ok(0.5 * (sum.ln_det_hpd()? - ln_rn) / core::f64::consts::LN_2)
    }
}

/// Which algebraic form of the instantaneous mutual information to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityForm {
    /// `det(I_{n_s} + c X†X)` on the whitened cascade.
    Whitened,
    /// `det(I_{n_d} + R_s R_n⁻¹)`.
    Direct,
}

pub fn mc_capacity_acc(
    cfg: &SystemConfig,
    n_trials: u64,
    rng: RngStream,
    form: CapacityForm,
) -> Result<Accumulator> {
    let mut acc = Accumulator::default();
    if cfg.rho == 0.0 {
        for _ in 0..n_trials {
            acc.push(0.0);
        }
        return Ok(acc);
    }
    let c = cfg.rho * cfg.a() / f64::from(cfg.n_s);
    let mut g = rng.generator();
    for _ in 0..n_trials {
        let (h1, h2) = sample_channels(cfg, &mut g);
        let d = Draw::new(cfg, &h1, &h2)?;
        acc.push(match form {
            CapacityForm::Whitened => d.capacity(c)?,
            CapacityForm::Direct => d.capacity_direct(c)?,
        });
    }
    Ok(acc)
}

/// Ergodic capacity `½ E log2 det(I + (ρa/n_s) H1† H2† R_n⁻¹ H2 H1)`.
pub fn mc_capacity(cfg: &SystemConfig, n_trials: u64, rng: RngStream) -> Result<McEstimate> {
    check_trials(n_trials)?;
    mc_capacity_acc(cfg, n_trials, rng, CapacityForm::Whitened).map(|a| a.estimate())
}

/// [`mc_capacity`] through `det(I + R_s R_n⁻¹)`.
pub fn mc_capacity_direct(cfg: &SystemConfig, n_trials: u64, rng: RngStream) -> Result<McEstimate> {
    check_trials(n_trials)?;
    mc_capacity_acc(cfg, n_trials, rng, CapacityForm::Direct).map(|a| a.estimate())
}

/// The `s` largest eigenvalues of one cascade draw, descending.
fn top_eigenvalues(d: &Draw, s: usize) -> Result<Vec<f64>> {
    let mut w = hermitian_eigenvalues(&d.cascade())?;
    w.reverse();
    w.truncate(s);
    Ok(w)
}

/// Pooled nonzero cascade eigenvalues, `n_trials·s` of them.
pub fn mc_cascade_eigenvalues(
    cfg: &SystemConfig,
    n_trials: u64,
    rng: RngStream,
) -> Result<Vec<f64>> {
    check_trials(n_trials)?;
    cascade_eigenvalue_samples(cfg, n_trials, rng)
}

/// [`mc_cascade_eigenvalues`] without the trial-count floor, for shards.
pub fn cascade_eigenvalue_samples(
    cfg: &SystemConfig,
    n_trials: u64,
    rng: RngStream,
) -> Result<Vec<f64>> {
    let s = cfg.s() as usize;
    let mut out = Vec::with_capacity(n_trials as usize * s);
    let mut g = rng.generator();
    for _ in 0..n_trials {
        let (h1, h2) = sample_channels(cfg, &mut g);
        let d = Draw::new(cfg, &h1, &h2)?;
        out.extend(top_eigenvalues(&d, s)?.into_iter().map(|x| x.max(0.0)));
    }
    Ok(out)
}

pub fn mc_expected_det_acc(
    cfg: &SystemConfig,
    n_trials: u64,
    rng: RngStream,
) -> Result<Accumulator> {
    let mut acc = Accumulator::default();
    if cfg.rho == 0.0 {
        for _ in 0..n_trials {
            acc.push(1.0);
        }
        return Ok(acc);
    }
    let c = cfg.rho * cfg.a() / f64::from(cfg.n_s);
    let mut g = rng.generator();
    for _ in 0..n_trials {
        let (h1, h2) = sample_channels(cfg, &mut g);
        let d = Draw::new(cfg, &h1, &h2)?;
        let mut m = d.cascade();
        m.scale(c);
        m.add_identity(1.0);
        acc.push(libm::exp(m.ln_det_hpd()?));
    }
    Ok(acc)
}

/// `E det(I + (ρa/n_s) H̃1† L H̃1)` by simulation.
pub fn mc_expected_det(cfg: &SystemConfig, n_trials: u64, rng: RngStream) -> Result<McEstimate> {
    check_trials(n_trials)?;
    mc_expected_det_acc(cfg, n_trials, rng).map(|a| a.estimate())
}

pub fn mc_expected_logdet_acc(
    cfg: &SystemConfig,
    n_trials: u64,
    rng: RngStream,
) -> Result<Accumulator> {
    let s = cfg.s() as usize;
    let mut acc = Accumulator::default();
    let mut g = rng.generator();
    for _ in 0..n_trials {
        let (h1, h2) = sample_channels(cfg, &mut g);
        let d = Draw::new(cfg, &h1, &h2)?;
        // ln det Φ is the log of the product of the s nonzero eigenvalues
        // in both branches (n_s ≤ q and n_s > q)
        let w = top_eigenvalues(&d, s)?;
        let floor = STRUCTURAL_ZERO * w[0];
        if !(w[0] > 0.0) || w.iter().any(|x| *x <= floor) {
            acc.skipped += 1;
            continue;
        }
        acc.push(w.iter().map(|x| libm::log(*x)).sum());
    }
    Ok(acc)
}

/// `E ln det Φ` by simulation; singular draws are skipped and counted.
pub fn mc_expected_logdet(cfg: &SystemConfig, n_trials: u64, rng: RngStream) -> Result<McEstimate> {
    check_trials(n_trials)?;
    mc_expected_logdet_acc(cfg, n_trials, rng).map(|a| a.estimate())
}

pub fn mc_single_hop_acc(
    n_t: u32,
    n_r: u32,
    snr: f64,
    n_trials: u64,
    rng: RngStream,
) -> Result<Accumulator> {
    if n_t == 0 || n_r == 0 || !(snr >= 0.0) {
        return Err(Error::Domain("need antennas >= 1 and snr >= 0"));
    }
    let mut acc = Accumulator::default();
    let mut g = rng.generator();
    let c = snr / f64::from(n_t);
    for _ in 0..n_trials {
        let h = g.matrix(n_r as usize, n_t as usize);
        let mut m = if n_r <= n_t {
            h.gram_outer()
        } else {
            h.gram_inner()
        };
        m.scale(c);
        m.add_identity(1.0);
        acc.push(m.ln_det_hpd()? / core::f64::consts::LN_2);
    }
    Ok(acc)
}

/// `log2 det(I + (hi/n_t) HH†) - log2 det(I + (lo/n_t) HH†)` on the same
/// draw of `H`, so the difference carries no independent noise.
pub fn mc_single_hop_gap_acc(
    n_t: u32,
    n_r: u32,
    hi: f64,
    lo: f64,
    n_trials: u64,
    rng: RngStream,
) -> Result<Accumulator> {
    if n_t == 0 || n_r == 0 || !(hi >= 0.0) || !(lo >= 0.0) {
        return Err(Error::Domain("need antennas >= 1 and snr >= 0"));
    }
    let mut acc = Accumulator::default();
    let mut g = rng.generator();
    for _ in 0..n_trials {
        let h = g.matrix(n_r as usize, n_t as usize);
        let w = if n_r <= n_t {
            h.gram_outer()
        } else {
            h.gram_inner()
        };
        let mut v = 0.0;
        for (snr, sign) in [(hi, 1.0), (lo, -1.0)] {
            let mut m = w.clone();
            m.scale(snr / f64::from(n_t));
            m.add_identity(1.0);
            v += sign * m.ln_det_hpd()?;
        }
        acc.push(v / core::f64::consts::LN_2);
    }
    Ok(acc)
}

/// Single-hop `E log2 det(I + (snr/n_t) H H†)`, `H` being `n_r×n_t`.
pub fn mc_single_hop_capacity(
    n_t: u32,
    n_r: u32,
    snr: f64,
    n_trials: u64,
    rng: RngStream,
) -> Result<McEstimate> {
    check_trials(n_trials)?;
    mc_single_hop_acc(n_t, n_r, snr, n_trials, rng).map(|a| a.estimate())
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `samples` and
/// `cdf`.
pub fn ks_statistic<F: FnMut(f64) -> f64>(samples: &[f64], mut cdf: F) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::Domain("at least two samples required"));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d.clamp(0.0, 1.0))
}
