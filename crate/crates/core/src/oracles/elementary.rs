use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::OracleReport;
use crate::error::{Error, Result};

const DEGENERATE: f64 = 1e-12;

#[derive(Clone, Copy, Debug)]
pub struct ElementarySpec {
    pub s: f64,
    pub samples: u64,
    pub seed: u64,
    pub ceiling: Option<f64>,
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// `(LHS, RHS)` of the elementary inequality at one pair of frequencies.
pub fn elementary_ratio(s: f64, xi: [f64; 2], eta: [f64; 2]) -> (f64, f64) {
    let d = [xi[0] - eta[0], xi[1] - eta[1]];
    let (nx, ne, nd) = (norm(xi), norm(eta), norm(d));
    let dot = d[0] * eta[0] + d[1] * eta[1];
    let lhs = nx.powf(s) - ne.powf(s) - nd.powf(s) - s * dot * nd.powf(s - 2.0);
    let rhs = ne * ne * nd.powf(s - 2.0) + nd * ne.powf(s - 1.0);
    (lhs.abs(), rhs)
}

fn sample_vector(rng: &mut ChaCha8Rng) -> [f64; 2] {
    let mag = 10f64.powf(rng.random_range(-3.0..=3.0));
    let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    [mag * angle.cos(), mag * angle.sin()]
}

/// Supremum of the elementary-inequality ratio over random frequency pairs.
///
/// The report's extras hold the running supremum after the first tenth of the
/// samples (`sup_tenth`), so stability under sample growth is read off one run.
pub fn check_elementary_inequality(spec: &ElementarySpec) -> Result<OracleReport> {
    if !(spec.s >= 3.0) || !spec.s.is_finite() {
        return Err(Error::param("s", format!("must be at least 3, got {}", spec.s)));
    }
    if spec.samples == 0 {
        return Err(Error::param("samples", "must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let tenth = (spec.samples / 10).max(1);
    let (mut sup, mut sup_tenth, mut skipped) = (0.0f64, 0.0f64, 0u64);
    for i in 0..spec.samples {
        let xi = sample_vector(&mut rng);
        let eta = sample_vector(&mut rng);
        let (lhs, rhs) = elementary_ratio(spec.s, xi, eta);
        if rhs < DEGENERATE {
            skipped += 1;
        } else {
            sup = sup.max(lhs / rhs);
        }
        if i + 1 == tenth {
            sup_tenth = sup;
        }
    }
    let mut r = OracleReport::new("2.1", spec.seed).extra("s", spec.s).extra("sup_tenth", sup_tenth);
    r.samples = spec.samples;
    r.skipped = skipped;
    r.worst_ratio = sup;
    r.empirical_constant = sup;
    Ok(r.judge_ceiling(spec.ceiling))
}
