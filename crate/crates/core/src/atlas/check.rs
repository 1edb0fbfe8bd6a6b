//! Randomized chart-overlap suite: every sampled covector is pushed into
//! every chart that contains it and compared against the source.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::region::radius;
use super::{hamiltonian, to_chart, ChartId, CotangentState, Sheet};
use crate::special::WBranch;
use crate::sweep::par_range;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtlasCheckConfig {
    pub n: usize,
    pub seed: u64,
    pub tol: f64,
    /// Perturbs the transported energies; exists to prove the suite can fail.
    #[serde(default)]
    pub inject_fault: bool,
}

impl Default for AtlasCheckConfig {
    fn default() -> Self {
        Self { n: 1000, seed: 0, tol: 1e-10, inject_fault: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasCheckReport {
    pub n: usize,
    pub checks: usize,
    pub failures: usize,
    pub max_energy_error: f64,
    pub max_round_trip_error: f64,
    pub max_overlap_relation_error: f64,
    pub first_failure: Option<String>,
}

impl AtlasCheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: usize,
    energy: f64,
    round_trip: f64,
    relation: f64,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, err: f64, tol: f64, what: impl FnOnce() -> String) -> f64 {
        self.checks += 1;
        if !(err <= tol) {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
        err
    }

    fn merge(mut self, o: Tally) -> Tally {
        self.checks += o.checks;
        self.failures += o.failures;
        self.energy = self.energy.max(o.energy);
        self.round_trip = self.round_trip.max(o.round_trip);
        self.relation = self.relation.max(o.relation);
        self.first = self.first.or(o.first);
        self
    }
}

pub fn atlas_check(cfg: &AtlasCheckConfig) -> AtlasCheckReport {
    let tallies = par_range(cfg.n, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(i as u64);
        check_instance(&mut rng, cfg)
    });
    let t = tallies.into_iter().fold(Tally::default(), Tally::merge);
    AtlasCheckReport {
        n: cfg.n,
        checks: t.checks,
        failures: t.failures,
        max_energy_error: t.energy,
        max_round_trip_error: t.round_trip,
        max_overlap_relation_error: t.relation,
        first_failure: t.first,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

/// Radius in one of the exterior, interior or anti-Schwarzschild bands.
fn sample_radius(rng: &mut ChaCha8Rng, allow_negative: bool) -> f64 {
    let band = rng.gen_range(0..if allow_negative { 3 } else { 2 });
    match band {
        0 => 1.05 + 19.0 * rng.gen::<f64>().powi(2),
        1 => rng.gen_range(0.01..0.95),
        _ => -0.05 - 19.95 * rng.gen::<f64>().powi(2),
    }
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let m = rng.gen_range(lo..hi);
    if rng.gen::<bool>() {
        m
    } else {
        -m
    }
}

pub(crate) fn sample_state(rng: &mut ChaCha8Rng) -> CotangentState<f64> {
    let chart = ChartId::ALL[rng.gen_range(0..ChartId::ALL.len())];
    let sheet = if rng.gen::<bool>() { Sheet::Positive } else { Sheet::Negative };
    let m = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
    let c = rng.gen_range(-3.0..3.0);
    let mut r = sample_radius(rng, !chart.carries_x());
    if chart == ChartId::Ks {
        // Kruskal momenta carry a factor r³e^{r−1} relative to the null
        // charts; far from the horizon O(1) samples are ill-conditioned there.
        r = r.clamp(-4.0, 4.0);
    }
    let x = sheet.sign() * r.abs().sqrt();
    let pos = match chart {
        ChartId::Schw => [c, r],
        ChartId::EfAdv | ChartId::EfRet => [c, 1.0 / r - 1.0 / 3.0],
        ChartId::Ks => {
            let p = signed(rng, 0.1, 3.0);
            [p, (r - 1.0) * (r - 1.0).exp() / p]
        }
        ChartId::Xu | ChartId::Xv | ChartId::Xt => [c, x],
        ChartId::Xp | ChartId::Xq => [signed(rng, 0.1, 3.0), x],
        ChartId::Yp | ChartId::Yq => [signed(rng, 0.1, 3.0), 1.0 / r],
    };
    let mut s = CotangentState::new(chart, pos, m).with_sheet(sheet);
    if chart == ChartId::Ks {
        if r < 0.0 {
            s.branch = WBranch::Lower;
        } else {
            s.ks_x = Some(x);
        }
    }
    s
}

fn check_instance(rng: &mut ChaCha8Rng, cfg: &AtlasCheckConfig) -> Tally {
    let mut t = Tally::default();
    let fault = if cfg.inject_fault { 1.0 + 1e-6 } else { 1.0 };
    let s = sample_state(rng);
    let h = hamiltonian(&s).expect("sampled states are valid");
    for target in ChartId::ALL {
        let Ok(m) = to_chart(&s, target) else { continue };
        let hm = hamiltonian(&m).map(|v| v * fault).unwrap_or(f64::NAN);
        let e = t.record(rel(hm, h), cfg.tol, || format!("energy {} -> {target}: {h} vs {hm}", s.chart));
        t.energy = t.energy.max(e);
        let back = to_chart(&m, s.chart);
        let err = match back {
            Ok(b) => b.to_array().iter().zip(s.to_array()).map(|(u, v)| rel(*u, v)).fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        };
        let e = t.record(err, cfg.tol * 10.0, || format!("round trip {} -> {target}: {err:e}", s.chart));
        t.round_trip = t.round_trip.max(e);
    }
    let e = t.record(kruskal_relations(rng), cfg.tol, || "overlap relations".to_string());
    t.relation = t.relation.max(e);
    let e = t.record(complex_instance(rng, fault), cfg.tol, || "complex energy".to_string());
    t.energy = t.energy.max(e);
    t
}

/// Checks the published relations between the `(p, x; R, X)` and
/// `(q, x; S, Y)` momenta of one Kruskal covector.
fn kruskal_relations(rng: &mut ChaCha8Rng) -> f64 {
    let x = signed(rng, 0.2, 2.0);
    if (x * x - 1.0).abs() < 0.05 {
        return 0.0;
    }
    let p = signed(rng, 0.1, 3.0);
    let d = x * x - 1.0;
    let q = d * d.exp() / p;
    let (pp, qq) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let k = CotangentState::new(ChartId::Ks, [p, q], [pp, qq]).with_ks_x(x);
    let (Ok(xp), Ok(xq)) = (to_chart(&k, ChartId::Xp), to_chart(&k, ChartId::Xq)) else { return f64::INFINITY };
    let [r, xx] = xp.momentum;
    let [ss, yy] = xq.momentum;
    let x3 = x * x * x;
    [
        rel(r + xx * d / (2.0 * x3 * p), pp),
        rel(yy * d / (2.0 * x3 * p), pp),
        rel(xx * d / (2.0 * x3 * q), qq),
        rel(ss + yy * d / (2.0 * x3 * q), qq),
        rel(-q * ss / p, r),
        rel(-p * r / q, ss),
        rel(yy + 2.0 * x3 * q * ss / d, xx),
        rel(xx + 2.0 * x3 * p * r / d, yy),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn complex_instance(rng: &mut ChaCha8Rng, fault: f64) -> f64 {
    let mut c = || Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
    let (p, x, m1, m2) = (c() + 0.1, c(), c(), c());
    if x.norm() < 0.2 || p.norm() < 0.2 || (x * x - 1.0).norm() < 0.05 {
        return 0.0;
    }
    let s = CotangentState::new(ChartId::Xp, [p, x], [m1, m2]);
    let h = hamiltonian(&s).unwrap();
    let mut worst: f64 = 0.0;
    for target in ChartId::ALL {
        if let Ok(m) = to_chart(&s, target) {
            if radius(&m).is_none() {
                continue;
            }
            let hm = hamiltonian(&m).unwrap() * fault;
            worst = worst.max((hm - h).norm() / (1.0 + h.norm()));
        }
    }
    worst
}
