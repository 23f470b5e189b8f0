//! Sampled network scenes: node positions, fading, cache marks and the
//! typical user's request.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, Poisson};

use crate::analytic::zipf_popularity;
use crate::config::{CacheConfig, PlacementMode, Scenario};
use crate::numerics::FeedbackCoefficients;

/// Independent random streams of one realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Rrh = 1,
    Fap = 2,
    Request = 3,
    Cache = 4,
    Users = 5,
    RrhGuard = 17,
    FapGuard = 18,
    CacheGuard = 20,
}

/// Stream keyed by `(seed, realization index, purpose)`; independent of the
/// order or thread in which realizations are generated.
pub fn stream(seed: u64, index: u64, purpose: Purpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((index << 8) | purpose as u64);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polar {
    pub r: f64,
    pub theta: f64,
}

impl Polar {
    pub fn xy(&self) -> (f64, f64) {
        (self.r * self.theta.cos(), self.r * self.theta.sin())
    }

    pub fn distance_to(&self, other: &Polar) -> f64 {
        let (x1, y1) = self.xy();
        let (x2, y2) = other.xy();
        (x1 - x2).hypot(y1 - y2)
    }
}

fn poisson_count<R: Rng>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("finite positive mean");
    d.sample(rng) as usize
}

/// Homogeneous PPP of intensity `lambda` on the disc of radius `radius`.
pub fn sample_ppp<R: Rng>(lambda: f64, radius: f64, rng: &mut R) -> Vec<Polar> {
    sample_ppp_annulus(lambda, 0.0, radius, rng)
}

/// PPP restricted to `inner <= r < outer`.
pub fn sample_ppp_annulus<R: Rng>(lambda: f64, inner: f64, outer: f64, rng: &mut R) -> Vec<Polar> {
    let area = std::f64::consts::PI * (outer * outer - inner * inner);
    let n = poisson_count(lambda * area, rng);
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            Polar {
                r: (inner * inner + u * (outer * outer - inner * inner)).sqrt(),
                theta: std::f64::consts::TAU * v,
            }
        })
        .collect()
}

/// Zipf request sampler.
#[derive(Debug, Clone)]
pub struct Popularity {
    pub probabilities: Vec<f64>,
    index: WeightedIndex<f64>,
}

impl Popularity {
    pub fn new(tau: f64, catalog_size: usize) -> Self {
        let probabilities = zipf_popularity(tau, catalog_size);
        let index = WeightedIndex::new(&probabilities).expect("valid popularity vector");
        Self {
            probabilities,
            index,
        }
    }
}

/// Requested content, 1-based (1 is the most popular).
pub fn draw_request<R: Rng>(popularity: &Popularity, rng: &mut R) -> usize {
    popularity.index.sample(rng) + 1
}

/// Per-F-AP flag telling whether the requested content is cached there.
pub fn mark_caches<R: Rng>(
    fap_count: usize,
    cache: &CacheConfig,
    request: usize,
    p_hit: f64,
    rng: &mut R,
) -> Vec<bool> {
    match cache.placement {
        PlacementMode::MostPopular => vec![request <= cache.cached_count; fap_count],
        PlacementMode::IndependentThinning => {
            if cache.cached_count >= cache.catalog_size {
                return vec![true; fap_count];
            }
            (0..fap_count).map(|_| rng.random::<f64>() < p_hit).collect()
        }
    }
}

/// A base station with its fading gain towards the typical user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub pos: Polar,
    pub gain: f64,
}

fn with_fading<R: Rng>(points: Vec<Polar>, rng: &mut R) -> Vec<Node> {
    points
        .into_iter()
        .map(|pos| Node {
            pos,
            gain: rng.sample(Exp1),
        })
        .collect()
}

/// Scenario constants shared by every realization.
#[derive(Debug, Clone)]
pub struct SceneModel {
    pub scenario: Scenario,
    pub popularity: Popularity,
    pub p_hit: f64,
    pub k: f64,
    pub feedback: FeedbackCoefficients,
}

impl SceneModel {
    pub fn new(scenario: &Scenario) -> Self {
        let c = scenario.cache();
        Self {
            scenario: scenario.clone(),
            popularity: Popularity::new(c.zipf_tau, c.catalog_size),
            p_hit: scenario.hit_probability(),
            k: scenario.k(),
            feedback: scenario.feedback(),
        }
    }

    pub fn realize(&self, seed: u64, index: u64) -> Realization {
        let n = self.scenario.network();
        let radius = n.disc_radius;
        let mut rng = stream(seed, index, Purpose::Rrh);
        let pts = sample_ppp(n.lambda_r, radius, &mut rng);
        let rrh = with_fading(pts, &mut rng);
        let mut rng = stream(seed, index, Purpose::Fap);
        let pts = sample_ppp(n.lambda_f, radius, &mut rng);
        let fap = with_fading(pts, &mut rng);
        let request = draw_request(&self.popularity, &mut stream(seed, index, Purpose::Request));
        let fap_hit = mark_caches(
            fap.len(),
            self.scenario.cache(),
            request,
            self.p_hit,
            &mut stream(seed, index, Purpose::Cache),
        );
        Realization {
            radius,
            rrh,
            fap,
            fap_hit,
            request,
            users: Vec::new(),
        }
    }

    /// Realization together with the user process on the same disc.
    pub fn realize_with_users(&self, seed: u64, index: u64) -> Realization {
        let mut r = self.realize(seed, index);
        let lu = self.scenario.traffic().lambda_u;
        r.users = sample_ppp(lu, r.radius, &mut stream(seed, index, Purpose::Users));
        r
    }

    /// Grow a realization to a larger disc. Points inside the original disc
    /// are kept, so estimates on both discs are coupled.
    pub fn extend_to_radius(&self, real: &mut Realization, radius: f64, seed: u64, index: u64) {
        if radius <= real.radius {
            return;
        }
        let n = self.scenario.network();
        let mut rng = stream(seed, index, Purpose::RrhGuard);
        let pts = sample_ppp_annulus(n.lambda_r, real.radius, radius, &mut rng);
        real.rrh.extend(with_fading(pts, &mut rng));
        let mut rng = stream(seed, index, Purpose::FapGuard);
        let pts = sample_ppp_annulus(n.lambda_f, real.radius, radius, &mut rng);
        let added = with_fading(pts, &mut rng);
        let marks = mark_caches(
            added.len(),
            self.scenario.cache(),
            real.request,
            self.p_hit,
            &mut stream(seed, index, Purpose::CacheGuard),
        );
        real.fap.extend(added);
        real.fap_hit.extend(marks);
        real.radius = radius;
    }
}

/// One sampled network around the typical user at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub radius: f64,
    pub rrh: Vec<Node>,
    pub fap: Vec<Node>,
    /// Whether each F-AP holds the requested content.
    pub fap_hit: Vec<bool>,
    pub request: usize,
    /// User process; empty unless loads are being measured.
    pub users: Vec<Polar>,
}

fn nearest(nodes: &[Node], mut keep: impl FnMut(usize) -> bool) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, n) in nodes.iter().enumerate() {
        if keep(i) && best.is_none_or(|(_, r)| n.pos.r < r) {
            best = Some((i, n.pos.r));
        }
    }
    best.map(|(i, _)| i)
}

impl Realization {
    pub fn nearest_fap(&self) -> Option<usize> {
        nearest(&self.fap, |_| true)
    }

    pub fn nearest_hit_fap(&self) -> Option<usize> {
        nearest(&self.fap, |i| self.fap_hit[i])
    }

    pub fn nearest_rrh(&self) -> Option<usize> {
        nearest(&self.rrh, |_| true)
    }
}
