//! Problem instances: node geometry, distances, package masses and the
//! vehicle's unladen mass.
//!
//! Nodes are addressed by zero-based index throughout the library. Text
//! formats (TSPLIB and the native instance file) use one-based ids; the
//! conversion happens only in the readers and writers.

mod native;
mod tsplib;

pub use native::{read_instance, write_instance};
pub use tsplib::parse_tsplib;

use thiserror::Error;

use crate::rng::Stream;

/// The ten package masses packages are drawn from.
pub const MASS_SUPPORT: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Energy per unit mass per unit distance used by default.
pub const DEFAULT_ALPHA: f64 = 0.1;

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported EDGE_WEIGHT_TYPE `{0}`")]
    UnsupportedWeightType(String),
    #[error("DIMENSION is {declared} but {found} coordinates were given")]
    DimensionMismatch { declared: usize, found: usize },
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("unsupported instance file version `{0}`")]
    Version(String),
    #[error("need at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("depot id {0} out of range")]
    DepotOutOfRange(usize),
    #[error("expected {expected} package masses, got {found}")]
    MassCount { expected: usize, found: usize },
    #[error("package mass for node {id} must be positive and finite, got {mass}")]
    BadMass { id: usize, mass: f64 },
    #[error("invalid {name}: {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error("unladen mass {unladen} disagrees with gamma {gamma} times total package mass {total}")]
    GammaMismatch { unladen: f64, gamma: f64, total: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Unrounded Euclidean distance.
    EuclidExact,
    /// Euclidean distance rounded to the nearest integer (TSPLIB `EUC_2D`).
    EuclidRounded,
    /// TSPLIB `GEO` great-circle distance.
    Geo,
}

impl Metric {
    pub fn keyword(self) -> &'static str {
        match self {
            Metric::EuclidExact => "EUC_2D_EXACT",
            Metric::EuclidRounded => "EUC_2D_ROUND",
            Metric::Geo => "GEO",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "EUC_2D_EXACT" => Some(Metric::EuclidExact),
            "EUC_2D_ROUND" => Some(Metric::EuclidRounded),
            "GEO" => Some(Metric::Geo),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    pub name: String,
    pub coords: Vec<(f64, f64)>,
    pub metric: Metric,
}

impl NodeSet {
    pub fn new(name: impl Into<String>, coords: Vec<(f64, f64)>, metric: Metric) -> Result<Self, InstanceError> {
        if coords.len() < 2 {
            return Err(InstanceError::TooFewNodes(coords.len()));
        }
        Ok(Self {
            name: name.into(),
            coords,
            metric,
        })
    }

    /// `n` points uniform in `[0, side)^2`, exact Euclidean metric.
    pub fn random_uniform(n: usize, side: f64, seed: u64) -> Result<Self, InstanceError> {
        let mut s = Stream::new(seed);
        let coords = (0..n).map(|_| (s.range(0.0, side), s.range(0.0, side))).collect();
        Self::new(format!("uniform{n}s{seed}"), coords, Metric::EuclidExact)
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }
}

/// Dense symmetric matrix of pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self { n, d }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

pub fn compute_distances(nodes: &NodeSet) -> DistanceMatrix {
    let c = &nodes.coords;
    match nodes.metric {
        Metric::EuclidExact => DistanceMatrix::from_fn(c.len(), |i, j| euclid(c[i], c[j])),
        Metric::EuclidRounded => {
            DistanceMatrix::from_fn(c.len(), |i, j| (euclid(c[i], c[j]) + 0.5).floor())
        }
        Metric::Geo => DistanceMatrix::from_fn(c.len(), |i, j| geo_distance(c[i], c[j])),
    }
}

fn euclid(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Degrees.minutes value to radians, using TSPLIB's constant for pi.
fn geo_radians(v: f64) -> f64 {
    #[allow(clippy::approx_constant)]
    const TSPLIB_PI: f64 = 3.141592;
    let deg = v.trunc();
    let min = v - deg;
    TSPLIB_PI * (deg + 5.0 * min / 3.0) / 180.0
}

/// TSPLIB great-circle distance between (latitude, longitude) pairs given
/// in degrees.minutes, truncated to an integer.
pub fn geo_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    const RRR: f64 = 6378.388;
    let (lat_a, lon_a) = (geo_radians(a.0), geo_radians(a.1));
    let (lat_b, lon_b) = (geo_radians(b.0), geo_radians(b.1));
    let q1 = (lon_a - lon_b).cos();
    let q2 = (lat_a - lat_b).cos();
    let q3 = (lat_a + lat_b).cos();
    (RRR * (0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)).acos() + 1.0).trunc()
}

/// Draws `n_targets` masses uniformly from [`MASS_SUPPORT`].
pub fn generate_masses(n_targets: usize, seed: u64) -> Vec<f64> {
    let mut s = Stream::new(seed);
    (0..n_targets)
        .map(|_| MASS_SUPPORT[s.below(MASS_SUPPORT.len() as u64) as usize])
        .collect()
}

/// A load-dependent TSP instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    nodes: NodeSet,
    depot: usize,
    /// Indexed by node; the depot entry is zero.
    masses: Vec<f64>,
    unladen: f64,
    alpha: f64,
    gamma: Option<f64>,
    dist: DistanceMatrix,
}

impl Instance {
    /// `target_masses` lists one mass per non-depot node in index order.
    pub fn new(
        nodes: NodeSet,
        depot: usize,
        target_masses: &[f64],
        unladen: f64,
        alpha: f64,
        gamma: Option<f64>,
    ) -> Result<Self, InstanceError> {
        let n = nodes.len();
        if n < 2 {
            return Err(InstanceError::TooFewNodes(n));
        }
        if depot >= n {
            return Err(InstanceError::DepotOutOfRange(depot + 1));
        }
        if target_masses.len() != n - 1 {
            return Err(InstanceError::MassCount {
                expected: n - 1,
                found: target_masses.len(),
            });
        }
        let mut masses = vec![0.0; n];
        let targets = (0..n).filter(|&i| i != depot);
        for (i, &m) in targets.zip(target_masses) {
            if !(m > 0.0 && m.is_finite()) {
                return Err(InstanceError::BadMass { id: i + 1, mass: m });
            }
            masses[i] = m;
        }
        if !(unladen >= 0.0 && unladen.is_finite()) {
            return Err(InstanceError::BadParameter {
                name: "unladen mass",
                value: unladen,
            });
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(InstanceError::BadParameter { name: "alpha", value: alpha });
        }
        let total: f64 = masses.iter().sum();
        if let Some(g) = gamma {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(InstanceError::BadParameter { name: "gamma", value: g });
            }
            if (unladen - g * total).abs() > 1e-9 {
                return Err(InstanceError::GammaMismatch { unladen, gamma: g, total });
            }
        }
        let dist = compute_distances(&nodes);
        Ok(Self {
            nodes,
            depot,
            masses,
            unladen,
            alpha,
            gamma,
            dist,
        })
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn name(&self) -> &str {
        &self.nodes.name
    }

    pub fn depot(&self) -> usize {
        self.depot
    }

    /// Number of nodes including the depot.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n_targets(&self) -> usize {
        self.len() - 1
    }

    pub fn targets(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| i != self.depot)
    }

    /// Package mass dropped at `node`; zero for the depot.
    pub fn mass(&self, node: usize) -> f64 {
        self.masses[node]
    }

    pub fn target_masses(&self) -> Vec<f64> {
        self.targets().map(|t| self.masses[t]).collect()
    }

    /// Unladen vehicle mass `M`.
    pub fn unladen(&self) -> f64 {
        self.unladen
    }

    /// Total package mass.
    pub fn package_total(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// Departure mass at the depot, unladen plus all packages.
    pub fn laden(&self) -> f64 {
        self.unladen + self.package_total()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> Option<f64> {
        self.gamma
    }

    /// Recorded gamma, or the ratio implied by the masses.
    pub fn effective_gamma(&self) -> f64 {
        self.gamma.unwrap_or(self.unladen / self.package_total())
    }

    pub fn dist(&self) -> &DistanceMatrix {
        &self.dist
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist.get(i, j)
    }
}

/// Builds an instance whose unladen mass is `gamma` times the total package
/// mass. `depot` defaults to the last node.
pub fn make_instance(
    nodes: NodeSet,
    depot: Option<usize>,
    masses: &[f64],
    gamma: f64,
    alpha: f64,
) -> Result<Instance, InstanceError> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(InstanceError::BadParameter { name: "gamma", value: gamma });
    }
    let depot = depot.unwrap_or(nodes.len().saturating_sub(1));
    let total: f64 = masses.iter().sum();
    Instance::new(nodes, depot, masses, gamma * total, alpha, Some(gamma))
}

/// Uniform random geometry on `[0, 100)^2` with masses from the package
/// support, depot at the last node. Geometry and masses use separate
/// streams derived from `seed`.
pub fn random_instance(n_targets: usize, gamma: f64, seed: u64) -> Instance {
    let nodes = NodeSet::random_uniform(n_targets + 1, 100.0, seed).expect("at least two nodes");
    let masses = generate_masses(n_targets, seed ^ 0x6d61_7373);
    make_instance(nodes, None, &masses, gamma, DEFAULT_ALPHA).expect("generated instance is valid")
}
