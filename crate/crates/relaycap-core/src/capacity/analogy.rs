use super::{exact_capacity, CapacityPoint, QuadratureSpec};
use crate::eigenstats::SystemConfig;
use crate::mcoracle::{
    mc_capacity_acc, mc_single_hop_acc, mc_single_hop_gap_acc, Accumulator, CapacityForm, RngStream,
};
use crate::{Error, Result};

/// Antenna count from which a dimension counts as large.
pub const LARGE_DIMENSION: u32 = 32;
/// Relay gain from which `α` counts as large.
pub const LARGE_GAIN: f64 = 1e4;
/// Above this `q` the AF side is simulated rather than integrated.
pub const ANALYTIC_MAX_Q: u32 = 8;

/// Which parameter grows in an analogy check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    NrLarge,
    NsLarge,
    NdLarge,
    AlphaLarge,
}

impl Regime {
    pub const ALL: [Regime; 4] = [
        Regime::NrLarge,
        Regime::NsLarge,
        Regime::NdLarge,
        Regime::AlphaLarge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Regime::NrLarge => "nr_large",
            Regime::NsLarge => "ns_large",
            Regime::NdLarge => "nd_large",
            Regime::AlphaLarge => "alpha_large",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == s)
    }
}

/// Half of a single-hop capacity, or half the difference of two at the
/// same channel dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingleHopTarget {
    Plain {
        n_t: u32,
        n_r: u32,
        snr: f64,
    },
    Gap {
        n_t: u32,
        n_r: u32,
        hi: f64,
        lo: f64,
    },
}

impl SingleHopTarget {
    /// Per-trial values of the full (not halved) single-hop quantity.
    pub fn accumulate(&self, n_trials: u64, rng: RngStream) -> Result<Accumulator> {
        match *self {
            SingleHopTarget::Plain { n_t, n_r, snr } => {
                mc_single_hop_acc(n_t, n_r, snr, n_trials, rng)
            }
            SingleHopTarget::Gap { n_t, n_r, hi, lo } => {
                mc_single_hop_gap_acc(n_t, n_r, hi, lo, n_trials, rng)
            }
        }
    }
}

/// The single-hop system whose halved capacity the AF capacity approaches.
pub fn analogy_target(cfg: &SystemConfig, regime: Regime) -> Result<SingleHopTarget> {
    let (n_s, n_r, n_d, alpha, rho) = (cfg.n_s, cfg.n_r, cfg.n_d, cfg.alpha, cfg.rho);
    Ok(match regime {
        Regime::NrLarge => {
            if n_r < LARGE_DIMENSION {
                return Err(Error::Regime("nr_large needs n_r >= 32"));
            }
            SingleHopTarget::Plain {
                n_t: n_s,
                n_r: n_d,
                snr: rho * alpha / (1.0 + rho + alpha),
            }
        }
        Regime::NsLarge => {
            if n_s < LARGE_DIMENSION {
                return Err(Error::Regime("ns_large needs n_s >= 32"));
            }
            SingleHopTarget::Gap {
                n_t: n_r,
                n_r: n_d,
                hi: alpha,
                lo: alpha / (1.0 + rho),
            }
        }
        Regime::NdLarge => {
            if n_d < LARGE_DIMENSION {
                return Err(Error::Regime("nd_large needs n_d >= 32"));
            }
            SingleHopTarget::Plain {
                n_t: n_s,
                n_r,
                snr: rho,
            }
        }
        Regime::AlphaLarge => {
            if alpha < LARGE_GAIN {
                return Err(Error::Regime("alpha_large needs alpha >= 1e4"));
            }
            SingleHopTarget::Plain {
                n_t: n_s,
                n_r: cfg.q(),
                snr: rho,
            }
        }
    })
}

pub fn af_side_is_simulated(cfg: &SystemConfig) -> bool {
    cfg.q() > ANALYTIC_MAX_Q
}

/// Halves a single-hop accumulator into a capacity point.
pub fn single_hop_point(rho: f64, acc: &Accumulator) -> CapacityPoint {
    let e = acc.estimate();
    CapacityPoint::monte_carlo(rho, 0.5 * e.mean, 0.5 * e.stderr)
}

/// AF capacity next to its single-hop analogue, `(af, single_hop)`.
///
/// The single-hop side always uses stream `(seed, 0)`; a simulated AF side
/// uses `(seed, 1)`.
pub fn analogy_check(
    cfg: &SystemConfig,
    regime: Regime,
    n_trials: u64,
    seed: u64,
) -> Result<(CapacityPoint, CapacityPoint)> {
    if n_trials < 100 {
        return Err(Error::Domain("at least 100 trials required"));
    }
    let target = analogy_target(cfg, regime)?;
    let sh = single_hop_point(
        cfg.rho,
        &target.accumulate(n_trials, RngStream::new(seed, 0))?,
    );
    let af = if af_side_is_simulated(cfg) {
        let acc = mc_capacity_acc(
            cfg,
            n_trials,
            RngStream::new(seed, 1),
            CapacityForm::Whitened,
        )?;
        // mc_capacity_acc already carries the ½ factor
        let e = acc.estimate();
        CapacityPoint::monte_carlo(cfg.rho, e.mean, e.stderr)
    } else {
        exact_capacity(cfg, QuadratureSpec::default())?
    };
    Ok((af, sh))
}
