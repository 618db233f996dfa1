//! Deterministic sharded Monte Carlo on a rayon pool.
//!
//! A run of `n` trials is cut into shards of [`SHARD_TRIALS`] (the last one
//! shorter). Shard `k` draws from stream `(seed, k)` and the shard
//! accumulators are merged in index order, so the result is bitwise the same
//! for any worker count.

use rayon::prelude::*;
use relaycap_core::capacity::{
    af_side_is_simulated, analogy_target, exact_capacity, single_hop_point, CapacityPoint,
    QuadratureSpec, Regime,
};
use relaycap_core::eigenstats::SystemConfig;
use relaycap_core::mcoracle::{
    cascade_eigenvalue_samples, mc_capacity_acc, mc_expected_det_acc, mc_expected_logdet_acc,
    mc_single_hop_acc, Accumulator, CapacityForm, McEstimate, RngStream,
};
use relaycap_core::{Error, Result};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "RELAYCAP_THREADS";
pub const SHARD_TRIALS: u64 = 10_000;
pub const MIN_TRIALS: u64 = 100;

/// `(stream_id, trials)` per shard.
pub fn shard_plan(n_trials: u64) -> Vec<(u64, u64)> {
    (0..n_trials.div_ceil(SHARD_TRIALS))
        .map(|k| (k, SHARD_TRIALS.min(n_trials - k * SHARD_TRIALS)))
        .collect()
}

fn check_trials(n: u64) -> Result<()> {
    if n < MIN_TRIALS {
        return Err(Error::Domain("at least 100 trials required"));
    }
    Ok(())
}

/// Quantity estimated by [`Runner::estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Capacity,
    ExpectedDet,
    ExpectedLogdet,
}

pub struct Runner {
    pool: rayon::ThreadPool,
}

impl Runner {
    pub fn new(threads: usize) -> Self {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .expect("thread pool");
        Self { pool }
    }

    /// Worker count from `RELAYCAP_THREADS`, else all available cores.
    pub fn from_env() -> Self {
        let cap = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|n| *n > 0);
        let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
        Self::new(cap.unwrap_or(avail))
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// `f` over `items` concurrently, results in input order.
    pub fn map<T: Sync, R: Send>(&self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        self.pool.install(|| items.par_iter().map(&f).collect())
    }

    /// Merged accumulator of `f(trials, stream)` over the shard plan.
    pub fn sharded<F>(&self, n_trials: u64, seed: u64, f: F) -> Result<Accumulator>
    where
        F: Fn(u64, RngStream) -> Result<Accumulator> + Sync + Send,
    {
        let plan = shard_plan(n_trials);
        let parts = self.map(&plan, |&(k, n)| f(n, RngStream::new(seed, k)));
        let mut acc = Accumulator::default();
        for p in parts {
            acc.merge(&p?);
        }
        Ok(acc)
    }

    pub fn estimate(
        &self,
        q: Quantity,
        cfg: &SystemConfig,
        n_trials: u64,
        seed: u64,
    ) -> Result<McEstimate> {
        check_trials(n_trials)?;
        let acc = self.sharded(n_trials, seed, |n, rng| match q {
            Quantity::Capacity => mc_capacity_acc(cfg, n, rng, CapacityForm::Whitened),
            Quantity::ExpectedDet => mc_expected_det_acc(cfg, n, rng),
            Quantity::ExpectedLogdet => mc_expected_logdet_acc(cfg, n, rng),
        })?;
        Ok(acc.estimate())
    }

    pub fn single_hop(
        &self,
        n_t: u32,
        n_r: u32,
        snr: f64,
        n_trials: u64,
        seed: u64,
    ) -> Result<McEstimate> {
        check_trials(n_trials)?;
        let acc = self.sharded(n_trials, seed, |n, rng| {
            mc_single_hop_acc(n_t, n_r, snr, n, rng)
        })?;
        Ok(acc.estimate())
    }

    /// Pooled cascade eigenvalues, concatenated in shard order.
    pub fn cascade_eigenvalues(
        &self,
        cfg: &SystemConfig,
        n_trials: u64,
        seed: u64,
    ) -> Result<Vec<f64>> {
        check_trials(n_trials)?;
        let plan = shard_plan(n_trials);
        let parts = self.map(&plan, |&(k, n)| {
            cascade_eigenvalue_samples(cfg, n, RngStream::new(seed, k))
        });
        let mut out = Vec::with_capacity(n_trials as usize * cfg.s() as usize);
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }

    /// Sharded counterpart of the core analogy check: the single-hop side uses
    /// `seed`, a simulated AF side `seed + 1`.
    pub fn analogy_check(
        &self,
        cfg: &SystemConfig,
        regime: Regime,
        n_trials: u64,
        seed: u64,
    ) -> Result<(CapacityPoint, CapacityPoint)> {
        check_trials(n_trials)?;
        let target = analogy_target(cfg, regime)?;
        let sh = self.sharded(n_trials, seed, |n, rng| target.accumulate(n, rng))?;
        let af = if af_side_is_simulated(cfg) {
            let e = self.estimate(Quantity::Capacity, cfg, n_trials, seed.wrapping_add(1))?;
            CapacityPoint::monte_carlo(cfg.rho, e.mean, e.stderr)
        } else {
            exact_capacity(cfg, QuadratureSpec::default())?
        };
        Ok((af, single_hop_point(cfg.rho, &sh)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_covers_all_trials() {
        assert_eq!(
            shard_plan(25_000),
            vec![(0, 10_000), (1, 10_000), (2, 5_000)]
        );
        assert_eq!(shard_plan(100), vec![(0, 100)]);
        assert!(shard_plan(0).is_empty());
    }

    #[test]
    fn result_independent_of_worker_count() {
        let cfg = SystemConfig::new(2, 3, 4, 2.0, 10.0).unwrap();
        let a = Runner::new(1)
            .estimate(Quantity::Capacity, &cfg, 25_000, 3)
            .unwrap();
        let b = Runner::new(4)
            .estimate(Quantity::Capacity, &cfg, 25_000, 3)
            .unwrap();
        assert_eq!(a, b);
        let x = Runner::new(1).cascade_eigenvalues(&cfg, 12_000, 3).unwrap();
        let y = Runner::new(3).cascade_eigenvalues(&cfg, 12_000, 3).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.len(), 24_000);
    }

    #[test]
    fn single_shard_equals_core_estimator() {
        let cfg = SystemConfig::new(2, 3, 4, 2.0, 10.0).unwrap();
        let a = Runner::new(2)
            .estimate(Quantity::ExpectedDet, &cfg, 5_000, 8)
            .unwrap();
        let b =
            relaycap_core::mcoracle::mc_expected_det(&cfg, 5_000, RngStream::new(8, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trial_floor() {
        let cfg = SystemConfig::new(1, 1, 1, 2.0, 1.0).unwrap();
        assert!(Runner::new(1)
            .estimate(Quantity::Capacity, &cfg, 99, 0)
            .is_err());
    }
}
