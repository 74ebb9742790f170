//! Monte Carlo estimation of the product measure of intersecting triangle
//! families on the circle. All angles are in turns (fractions of a full
//! circle); this is the only module that uses floating point, since
//! measure estimates tolerate measure-zero predicate errors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

pub const RNG_ID: &str = "chacha12";

/// A probability measure on the circle: uniform, or a piecewise-constant
/// density over arcs partitioning [0, 1) in turns.
#[derive(Debug, Clone)]
pub enum CircleDistribution {
    Uniform,
    Piecewise {
        /// Arc boundaries 0 = b_0 < b_1 < … < b_k = 1.
        breaks: Vec<f64>,
        /// Arc masses, summing to 1.
        weights: Vec<f64>,
    },
}

impl CircleDistribution {
    pub fn piecewise(breaks: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if breaks.len() != weights.len() + 1 || weights.is_empty() {
            return Err(Error::InvalidArg("need k+1 breaks for k arc weights".into()));
        }
        if breaks[0] != 0.0 || *breaks.last().unwrap() != 1.0 {
            return Err(Error::InvalidArg("arc breaks must start at 0 and end at 1".into()));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArg("arc breaks must be strictly increasing".into()));
        }
        if weights.iter().any(|&w| w < 0.0) {
            return Err(Error::InvalidArg("arc weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArg(format!("arc weights sum to {total}, expected 1")));
        }
        Ok(CircleDistribution::Piecewise { breaks, weights })
    }

    /// Inverse-CDF sample of one angle in turns.
    pub fn sample_angle(&self, rng: &mut ChaCha12Rng) -> f64 {
        let u: f64 = rng.random();
        match self {
            CircleDistribution::Uniform => u,
            CircleDistribution::Piecewise { breaks, weights } => {
                let mut acc = 0.0;
                for (i, &w) in weights.iter().enumerate() {
                    if u < acc + w || i == weights.len() - 1 {
                        let frac = if w > 0.0 { (u - acc) / w } else { 0.0 };
                        let frac = frac.clamp(0.0, 1.0);
                        return (breaks[i] + frac * (breaks[i + 1] - breaks[i])).min(
                            f64::from_bits(1.0f64.to_bits() - 1), // largest value < 1
                        );
                    }
                    acc += w;
                }
                unreachable!()
            }
        }
    }

    pub fn sample_triple(&self, rng: &mut ChaCha12Rng) -> [f64; 3] {
        [self.sample_angle(rng), self.sample_angle(rng), self.sample_angle(rng)]
    }
}

/// Membership oracle for a measurable family of inscribed triangles.
#[derive(Debug, Clone)]
pub enum FamilyPredicate {
    /// Triangles strictly containing the fixed point (x, y) in the disk.
    ContainsFixedPoint { x: f64, y: f64 },
    Never,
    /// Intersection of two families (both predicates hold).
    And(Box<FamilyPredicate>, Box<FamilyPredicate>),
    /// Union of two families.
    Or(Box<FamilyPredicate>, Box<FamilyPredicate>),
}

fn circle_point(theta: f64) -> (f64, f64) {
    let a = std::f64::consts::TAU * theta;
    (a.cos(), a.sin())
}

fn orient_sign(p: (f64, f64), q: (f64, f64), r: (f64, f64)) -> f64 {
    (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
}

/// Strict containment of (x, y) in the inscribed triangle of the angle
/// triple; degenerate triples are non-members.
pub fn triple_contains(triple: &[f64; 3], x: f64, y: f64) -> bool {
    let a = circle_point(triple[0]);
    let b = circle_point(triple[1]);
    let c = circle_point(triple[2]);
    let s1 = orient_sign(a, b, (x, y));
    let s2 = orient_sign(b, c, (x, y));
    let s3 = orient_sign(c, a, (x, y));
    (s1 > 0.0 && s2 > 0.0 && s3 > 0.0) || (s1 < 0.0 && s2 < 0.0 && s3 < 0.0)
}

impl FamilyPredicate {
    pub fn is_member(&self, triple: &[f64; 3]) -> bool {
        match self {
            FamilyPredicate::ContainsFixedPoint { x, y } => triple_contains(triple, *x, *y),
            FamilyPredicate::Never => false,
            FamilyPredicate::And(a, b) => a.is_member(triple) && b.is_member(triple),
            FamilyPredicate::Or(a, b) => a.is_member(triple) || b.is_member(triple),
        }
    }

    /// Whether the family is intersecting by construction (any two members
    /// share a point). Conservative for unions.
    pub fn is_intersecting(&self) -> bool {
        match self {
            FamilyPredicate::ContainsFixedPoint { .. } | FamilyPredicate::Never => true,
            FamilyPredicate::And(a, b) => a.is_intersecting() || b.is_intersecting(),
            FamilyPredicate::Or(_, _) => false,
        }
    }
}

/// Fraction of N sampled triples in the family, with the binomial
/// standard error sqrt(p(1-p)/N).
pub fn estimate_measure(
    pred: &FamilyPredicate,
    dist: &CircleDistribution,
    n: u64,
    seed: u64,
) -> (f64, f64) {
    assert!(n >= 1);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..n {
        let t = dist.sample_triple(&mut rng);
        if pred.is_member(&t) {
            hits += 1;
        }
    }
    let p = hits as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

#[derive(Debug, Clone)]
pub struct McReport {
    pub estimate: f64,
    pub se: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub bound_ok: bool,
}

impl McReport {
    pub fn render(&self) -> String {
        format!(
            "rng: {RNG_ID}\nestimate={:.6} se={:.6} n_samples={} seed={} bound_ok={}\n",
            self.estimate, self.se, self.n_samples, self.seed, self.bound_ok
        )
    }
}

/// Estimates the measure of a declared-intersecting family and checks the
/// quarter bound with a 4-sigma allowance.
pub fn check_thm4(
    pred: &FamilyPredicate,
    dist: &CircleDistribution,
    n: u64,
    seed: u64,
) -> Result<McReport> {
    if !pred.is_intersecting() {
        return Err(Error::InvalidArg(
            "the quarter-bound check needs an intersecting-by-construction family".into(),
        ));
    }
    let (estimate, se) = estimate_measure(pred, dist, n, seed);
    Ok(McReport {
        estimate,
        se,
        n_samples: n,
        seed,
        bound_ok: estimate <= 0.25 + 4.0 * se,
    })
}

#[derive(Debug, Clone)]
pub struct DiscretizedReport {
    pub mean: f64,
    pub se: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

impl DiscretizedReport {
    pub fn render(&self) -> String {
        format!(
            "rng: {RNG_ID}\nmean={:.6} se={:.6} n={} trials={} seed={}\n",
            self.mean, self.se, self.n, self.trials, self.seed
        )
    }
}

/// Two-stage estimator: sample `trials` point sets of size `n` from the
/// distribution, and within each count the fraction of spanned triangles
/// in the family. The mean estimates the same measure as
/// `estimate_measure` for a fixed-point predicate.
pub fn discretized_check(
    pred: &FamilyPredicate,
    dist: &CircleDistribution,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<DiscretizedReport> {
    if n < 3 || trials == 0 {
        return Err(Error::InvalidArg("need n >= 3 and at least one trial".into()));
    }
    let (x, y) = match pred {
        FamilyPredicate::ContainsFixedPoint { x, y } => (*x, *y),
        _ => {
            return Err(Error::InvalidArg(
                "the discretized check supports fixed-point predicates".into(),
            ))
        }
    };
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(trials);
    let total = (n * (n - 1) * (n - 2) / 6) as f64;
    for _ in 0..trials {
        let angles: Vec<f64> = (0..n).map(|_| dist.sample_angle(&mut rng)).collect();
        let mut hits = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if triple_contains(&[angles[i], angles[j], angles[k]], x, y) {
                        hits += 1;
                    }
                }
            }
        }
        values.push(hits as f64 / total);
    }
    let mean = values.iter().sum::<f64>() / trials as f64;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (trials.max(2) - 1) as f64;
    Ok(DiscretizedReport {
        mean,
        se: (var / trials as f64).sqrt(),
        n,
        trials,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn center() -> FamilyPredicate {
        FamilyPredicate::ContainsFixedPoint { x: 0.0, y: 0.0 }
    }

    #[test]
    fn uniform_sampler_sanity() {
        let d = CircleDistribution::Uniform;
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let n = 100_000;
        let mut sum = 0.0;
        let mut below_half = 0usize;
        for _ in 0..n {
            let a = d.sample_angle(&mut rng);
            assert!((0.0..1.0).contains(&a));
            sum += a;
            if a < 0.5 {
                below_half += 1;
            }
        }
        assert!((sum / n as f64 - 0.5).abs() < 0.01);
        assert!((below_half as f64 / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn piecewise_concentrated_arc() {
        let d = CircleDistribution::piecewise(vec![0.0, 0.5, 1.0], vec![1.0, 0.0]).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            assert!(d.sample_angle(&mut rng) < 0.5);
        }
    }

    #[test]
    fn bad_piecewise_rejected() {
        assert!(CircleDistribution::piecewise(vec![0.0, 1.0], vec![0.5]).is_err());
        assert!(CircleDistribution::piecewise(vec![0.0, 0.5], vec![1.0]).is_err());
        assert!(CircleDistribution::piecewise(vec![0.0, 0.6, 0.5, 1.0], vec![0.3, 0.3, 0.4])
            .is_err());
    }

    #[test]
    fn deterministic_streams() {
        let d = CircleDistribution::Uniform;
        let a = estimate_measure(&center(), &d, 10_000, 5);
        let b = estimate_measure(&center(), &d, 10_000, 5);
        assert_eq!(a, b);
    }

    #[test]
    fn center_family_measure_quarter() {
        let (p, se) = estimate_measure(&center(), &CircleDistribution::Uniform, 200_000, 11);
        assert!((p - 0.25).abs() < 0.01, "p={p}");
        assert!(se > 0.0 && se < 0.002);
    }

    #[test]
    fn never_is_zero() {
        let (p, se) =
            estimate_measure(&FamilyPredicate::Never, &CircleDistribution::Uniform, 1000, 1);
        assert_eq!(p, 0.0);
        assert_eq!(se, 0.0);
    }

    #[test]
    fn boundary_point_strictly_below_quarter() {
        let pred = FamilyPredicate::ContainsFixedPoint { x: 0.99, y: 0.0 };
        let (p, se) = estimate_measure(&pred, &CircleDistribution::Uniform, 200_000, 2);
        assert!(p < 0.25 - 10.0 * se, "p={p} se={se}");
    }

    #[test]
    fn thm4_report() {
        let r = check_thm4(&center(), &CircleDistribution::Uniform, 50_000, 9).unwrap();
        assert!(r.bound_ok);
        let text = r.render();
        assert!(text.starts_with("rng: chacha12\n"));
        assert!(text.contains("bound_ok=true"));
        let union = FamilyPredicate::Or(Box::new(center()), Box::new(center()));
        assert!(check_thm4(&union, &CircleDistribution::Uniform, 10, 0).is_err());
    }

    #[test]
    fn discretized_agrees_with_direct() {
        let d = CircleDistribution::Uniform;
        let direct = estimate_measure(&center(), &d, 200_000, 21);
        let disc = discretized_check(&center(), &d, 30, 100, 22).unwrap();
        let tol = 4.0 * (direct.1 + disc.se);
        assert!((direct.0 - disc.mean).abs() <= tol.max(0.02));
    }

    #[test]
    fn discretized_n3_is_zero_or_one() {
        let disc =
            discretized_check(&center(), &CircleDistribution::Uniform, 3, 50, 4).unwrap();
        // Each trial value is 0 or 1; the mean is a fraction of trials.
        assert!((0.0..=1.0).contains(&disc.mean));
        assert_eq!((disc.mean * 50.0).round(), disc.mean * 50.0);
    }
}
