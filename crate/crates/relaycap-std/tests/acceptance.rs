//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Tolerances are fixed below.

use std::time::{Duration, Instant};

use relaycap::parallel::{Quantity, Runner};
use relaycap::tables::{rows, Row, Which};
use relaycap_core::capacity::{
    exact_capacity, fixed_alpha_limit, high_snr_affine, high_snr_char, lower_bound,
    lower_bound_nr1, upper_bound, upper_bound_nr1, QuadratureSpec, Regime,
};
use relaycap_core::eigenstats::{
    expected_det, expected_logdet, expected_logdet_at, expected_logdet_q_eq_s,
    rayleigh_product_pdf, unordered_pdf, unordered_pdf_at, Dims, SystemConfig,
};
use relaycap_core::mcoracle::{ks_statistic, sample_channels, Draw, RngStream};
use relaycap_core::specfun::bessel_k_scaled;

const SEED: u64 = 20_240_601;

fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

fn cfg(ns: u32, nr: u32, nd: u32, alpha: f64, rho: f64) -> SystemConfig {
    SystemConfig::new(ns, nr, nd, alpha, rho).expect("valid configuration")
}

fn exact(c: &SystemConfig) -> f64 {
    exact_capacity(c, QuadratureSpec::default())
        .expect("exact capacity")
        .value
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn within(limit: Option<Duration>, took: Duration) -> bool {
    limit.map_or(true, |l| took <= l)
}

fn table_outcome(rs: &[Row]) -> Outcome {
    let mut detail = String::new();
    for r in rs {
        detail.push_str(&format!(
            "\n      ({},{},{}) k={} got {:.4} published {} dev {:+.4} tol {} {}",
            r.n_s,
            r.n_r,
            r.n_d,
            r.k,
            r.value_db,
            r.published_db,
            r.deviation(),
            r.tolerance_db,
            if r.pass() { "ok" } else { "MISS" }
        ));
    }
    Outcome {
        pass: rs.iter().all(Row::pass),
        detail,
    }
}

fn nd_sweep(_: &Runner) -> Outcome {
    table_outcome(&rows(Which::NdSweep).expect("n_d sweep"))
}

fn nr_sweep(_: &Runner) -> Outcome {
    table_outcome(&rows(Which::NrSweep).expect("n_r sweep"))
}

fn offset_example(_: &Runner) -> Outcome {
    let mut o = table_outcome(&rows(Which::Siso).expect("siso"));
    // the same offset with 3 dB taken as exactly 3
    let ch = high_snr_char(1, 1, 1, 1.0).expect("offset");
    o.detail.push_str(&format!(
        "\n      note: (1,1,1) offset with 3 dB := 3.000 is {:.4} dB",
        ch.offset_3db * 3.0
    ));
    o
}

fn eigen_ks(runner: &Runner) -> Outcome {
    let c = cfg(2, 3, 4, 2.0, 1.0);
    let table = unordered_pdf(&c).cdf_table(2000).expect("cdf table");
    let samples = runner
        .cascade_eigenvalues(&c, 100_000, SEED)
        .expect("samples");
    let d = ks_statistic(&samples, |x| table.eval(x)).expect("ks");
    Outcome {
        pass: d <= 0.01,
        detail: format!(
            "(2,3,4) alpha=2 rho=0dB, {} samples: KS {d:.5} (limit 0.01)",
            samples.len()
        ),
    }
}

const DENSITY_CONFIGS: [(u32, u32, u32); 2] = [(2, 3, 2), (3, 2, 4)];

fn capacity_vs_mc(runner: &Runner) -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for (ns, nr, nd) in DENSITY_CONFIGS {
        for r in (0..=30).step_by(5) {
            let rho = db(f64::from(r));
            let c = cfg(ns, nr, nd, 2.0 * rho, rho);
            let x = exact(&c);
            let (l, u) = (
                lower_bound(&c).unwrap().value,
                upper_bound(&c).unwrap().value,
            );
            let e = runner
                .estimate(Quantity::Capacity, &c, 100_000, SEED + u64::from(r as u32))
                .expect("mc");
            let z = (x - e.mean) / e.stderr;
            let ok = z.abs() <= 3.0 && l <= x && x <= u;
            pass &= ok;
            detail.push_str(&format!(
                "\n      ({ns},{nr},{nd}) {r:>2} dB: L {l:.4} C {x:.4} U {u:.4} mc {:.4}±{:.4} z {z:+.2} {}",
                e.mean,
                e.stderr,
                if ok { "ok" } else { "MISS" }
            ));
        }
    }
    Outcome { pass, detail }
}

fn affine_convergence(_: &Runner) -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    let rho = db(40.0);
    for (ns, nr, nd) in DENSITY_CONFIGS {
        let ch = high_snr_char(ns, nr, nd, 2.0).expect("offset");
        let x = exact(&cfg(ns, nr, nd, 2.0 * rho, rho));
        let gap = (x - high_snr_affine(&ch, rho).value).abs();
        pass &= gap <= 0.05;
        detail.push_str(&format!(" ({ns},{nr},{nd}) gap {gap:.5};"));
    }
    detail.push_str(" limit 0.05");
    Outcome { pass, detail }
}

fn siso_closed_form(_: &Runner) -> Outcome {
    // n_r = 1: a = α/(1+ρ)
    let (alpha, rho) = (2.0, 3.0);
    let a = alpha / (1.0 + rho);
    let series = unordered_pdf(&cfg(1, 1, 1, alpha, rho));
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let lam = 10f64.powf(-3.0 + 4.5 * f64::from(i) / 49.0);
        let x = 2.0 * lam.sqrt();
        let k0 = bessel_k_scaled(0, x).unwrap() * (-x).exp();
        let k1 = bessel_k_scaled(1, x).unwrap() * (-x).exp();
        let want = 2.0 * (-lam * a).exp() * (a * lam.sqrt() * k1 + k0);
        let got = series.eval(lam).expect("pdf");
        worst = worst.max((got - want).abs() / want);
    }
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("50 points on [1e-3, 10^1.5]: max rel err {worst:.2e} (limit 1e-12)"),
    }
}

fn small_gain_limit(_: &Runner) -> Outcome {
    let d = Dims::from_antennas(2, 3, 4).unwrap();
    let near = unordered_pdf_at(d, 1e-8);
    let limit = rayleigh_product_pdf(2, 3, 4).expect("limit density");
    let mut worst: f64 = 0.0;
    for lam in [0.5, 1.0, 2.0, 5.0] {
        let (x, y) = (near.eval(lam).unwrap(), limit.eval(lam).unwrap());
        worst = worst.max((x - y).abs() / y);
    }
    Outcome {
        pass: worst <= 1e-4,
        detail: format!("(2,3,4) a=1e-8: max rel diff {worst:.2e} (limit 1e-4)"),
    }
}

fn moments_vs_mc(runner: &Runner) -> Outcome {
    let mut pass = true;
    let mut detail = String::new();
    for (ns, nr, nd, alpha, rho) in [(2, 3, 4, 2.0, 4.0), (4, 2, 3, 1.0, 2.0)] {
        let c = cfg(ns, nr, nd, alpha, rho);
        for (name, q, want) in [
            ("E det", Quantity::ExpectedDet, expected_det(&c).unwrap()),
            (
                "E lndet",
                Quantity::ExpectedLogdet,
                expected_logdet(&c).unwrap(),
            ),
        ] {
            let e = runner.estimate(q, &c, 1_000_000, SEED).expect("mc");
            let z = (want - e.mean) / e.stderr;
            pass &= z.abs() <= 3.0;
            detail.push_str(&format!(
                "\n      ({ns},{nr},{nd}) {name}: {want:.6} vs {:.6}±{:.6} z {z:+.2}",
                e.mean, e.stderr
            ));
        }
    }
    Outcome { pass, detail }
}

fn internal_consistency(_: &Runner) -> Outcome {
    let mut forms: f64 = 0.0;
    for (ns, q, p) in [(2, 2, 3), (3, 3, 3), (4, 2, 5), (5, 4, 4), (1, 1, 6)] {
        let d = Dims::new(ns, q, p).unwrap();
        for a in [0.01, 0.5, 2.0, 40.0] {
            let x = expected_logdet_at(d, a).unwrap();
            let y = expected_logdet_q_eq_s(d, a).unwrap();
            forms = forms.max((x - y).abs() / x.abs().max(1.0));
        }
    }
    let mut nr1: f64 = 0.0;
    for (ns, nd, alpha, rho) in [
        (1, 1, 2.0, 10.0),
        (2, 4, 2.0, 10.0),
        (3, 2, 0.5, 100.0),
        (4, 6, 50.0, 1.0),
    ] {
        let c = cfg(ns, 1, nd, alpha, rho);
        let pairs = [
            (
                upper_bound(&c).unwrap().value,
                upper_bound_nr1(ns, nd, alpha, rho).unwrap().value,
            ),
            (
                lower_bound(&c).unwrap().value,
                lower_bound_nr1(ns, nd, alpha, rho).unwrap().value,
            ),
        ];
        for (g, s) in pairs {
            nr1 = nr1.max((g - s).abs() / g.abs());
        }
    }
    let mut draw: f64 = 0.0;
    for (ns, nr, nd) in [(2, 3, 4), (4, 2, 3), (3, 5, 1)] {
        let c = cfg(ns, nr, nd, 3.0, 7.0);
        let k = c.rho * c.a() / f64::from(ns);
        let mut g = RngStream::new(SEED, 0).generator();
        for _ in 0..1000 {
            let (h1, h2) = sample_channels(&c, &mut g);
            let d = Draw::new(&c, &h1, &h2).unwrap();
            let (x, y) = (d.capacity(k).unwrap(), d.capacity_direct(k).unwrap());
            draw = draw.max((x - y).abs() / x.abs().max(1.0));
        }
    }
    Outcome {
        pass: forms <= 1e-8 && nr1 <= 1e-10 && draw <= 1e-12,
        detail: format!("logdet forms {forms:.1e} (1e-8), n_r=1 corollaries {nr1:.1e} (1e-10), per-draw det identity {draw:.1e} (1e-12)"),
    }
}

fn analogies(runner: &Runner) -> Outcome {
    let cases = [
        (Regime::AlphaLarge, cfg(2, 3, 4, 1e6, 10.0), 0.01),
        (Regime::NdLarge, cfg(2, 3, 64, 20.0, 10.0), 0.05),
        (Regime::NsLarge, cfg(64, 2, 3, 2.0, 10.0), 0.05),
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (regime, c, tol) in cases {
        let (af, sh) = runner
            .analogy_check(&c, regime, 100_000, SEED)
            .expect("analogy");
        let gap = (af.value - sh.value).abs();
        pass &= gap <= tol;
        detail.push_str(&format!(
            "\n      {} ({},{},{}): AF {:.4} single-hop {:.4}±{:.4} gap {gap:.4} (tol {tol})",
            regime.name(),
            c.n_s,
            c.n_r,
            c.n_d,
            af.value,
            sh.value,
            sh.stderr.unwrap_or(0.0)
        ));
    }
    Outcome { pass, detail }
}

fn saturation(_: &Runner) -> Outcome {
    let c = cfg(3, 4, 2, 2.0, db(60.0));
    let (x, lim) = (exact(&c), fixed_alpha_limit(&c).unwrap().value);
    Outcome {
        pass: (x - lim).abs() <= 0.02,
        detail: format!(
            "(3,4,2) alpha=2: C(60 dB) {x:.5} limit {lim:.5} diff {:.5} (tol 0.02)",
            (x - lim).abs()
        ),
    }
}

type Check = fn(&Runner) -> Outcome;

fn main() {
    let runner = Runner::from_env();
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria: [(&str, Check, Option<Duration>); 12] = [
        ("published offsets, n_d sweep", nd_sweep, secs(1)),
        ("published offsets, n_r sweep", nr_sweep, secs(1)),
        ("(1,1,1) offset and shifts", offset_example, None),
        ("eigenvalue CDF vs simulation, KS", eigen_ks, secs(60)),
        (
            "exact capacity vs simulation and bound ordering",
            capacity_vs_mc,
            secs(300),
        ),
        (
            "high-SNR affine convergence at 40 dB",
            affine_convergence,
            None,
        ),
        ("(1,1,1) density closed form", siso_closed_form, None),
        ("small-gain limit density", small_gain_limit, None),
        ("E det and E ln det vs simulation", moments_vs_mc, secs(180)),
        ("internal consistency", internal_consistency, None),
        ("asymptotic analogies", analogies, None),
        ("fixed-gain saturation", saturation, None),
    ];
    println!("acceptance: {} workers", runner.threads());
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check(&runner);
        let took = t.elapsed();
        let timely = within(*limit, took);
        let pass = o.pass && timely;
        failed += usize::from(!pass);
        let budget = limit.map_or(String::new(), |l| format!(" budget {}s", l.as_secs()));
        println!(
            "{} [{:>2}] {name}: {}  ({:.2}s{budget}{})",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail.trim_start(),
            took.as_secs_f64(),
            if timely { "" } else { ", over budget" }
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
