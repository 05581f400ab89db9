//! Radial meshes on `[0, r_max]` and functions living on them.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 16;
pub const MAX_NODES: usize = 1 << 16;
/// Growth rate of the graded size function (neighbouring elements differ by ≤ 5%).
pub const GRADING: f64 = 0.05;

/// Three-point Gauss rule on `[-1, 1]`.
pub(crate) const GAUSS3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

/// Nodes `0 = r_0 < … < r_m = r_max` for a radial problem in dimension `n`.
/// The last node carries a homogeneous Dirichlet condition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialGrid {
    pub n: f64,
    pub r_max: f64,
    nodes: Vec<f64>,
}

impl RadialGrid {
    pub fn from_nodes(n: f64, nodes: Vec<f64>) -> Result<Self> {
        if !(n >= 1.0) || !n.is_finite() {
            return Err(Error::DegenerateGrid(format!("dimension {n} < 1")));
        }
        if nodes.len() < MIN_NODES || nodes.len() > MAX_NODES {
            return Err(Error::DegenerateGrid(format!(
                "{} nodes, need {MIN_NODES}..={MAX_NODES}",
                nodes.len()
            )));
        }
        if nodes[0] != 0.0 {
            return Err(Error::DegenerateGrid("first node must be 0".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::DegenerateGrid("nodes must strictly increase".into()));
        }
        let r_max = *nodes.last().unwrap();
        Ok(Self { n, r_max, nodes })
    }

    pub fn uniform(n: f64, r_max: f64, elements: usize) -> Result<Self> {
        if !(r_max > 0.0) {
            return Err(Error::NonPositiveRadius(r_max));
        }
        let h = r_max / elements as f64;
        let mut nodes: Vec<f64> = (0..=elements).map(|i| i as f64 * h).collect();
        if let Some(last) = nodes.last_mut() {
            *last = r_max;
        }
        Self::from_nodes(n, nodes)
    }

    /// Geometrically graded mesh, fine near both ends:
    /// `h(r) = max(h_min, 0.05·min(r, r_max − r))`, capped at `r_max/16`.
    pub fn graded(n: f64, r_max: f64) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::NonPositiveRadius(r_max));
        }
        let h_min = (1e-2f64).min(r_max / 64.0);
        let h_cap = r_max / MIN_NODES as f64;
        let size = |r: f64| (GRADING * r.min(r_max - r)).max(h_min).min(h_cap);
        let mut nodes = vec![0.0];
        let mut r = 0.0;
        loop {
            let h = size(r);
            if r + 1.5 * h >= r_max {
                nodes.push(r_max);
                break;
            }
            r += h;
            nodes.push(r);
            if nodes.len() > MAX_NODES {
                return Err(Error::DegenerateGrid(format!(
                    "graded mesh on [0, {r_max}] exceeds {MAX_NODES} nodes"
                )));
            }
        }
        if nodes.len() < MIN_NODES {
            return Self::uniform(n, r_max, MIN_NODES - 1);
        }
        Self::from_nodes(n, nodes)
    }

    /// Bisects every element.
    pub fn refined(&self) -> Result<Self> {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len());
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(self.r_max);
        Self::from_nodes(self.n, nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn elements(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Free (non-Dirichlet) nodes.
    pub fn unknowns(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Calls `f(element, r, weight)` at every Gauss point, the weight
    /// including the radial measure `r^{N−1}`.
    pub(crate) fn for_each_point<F: FnMut(usize, f64, f64)>(&self, mut f: F) {
        for (e, w) in self.nodes.windows(2).enumerate() {
            let half = 0.5 * (w[1] - w[0]);
            let mid = 0.5 * (w[1] + w[0]);
            for (xi, wi) in GAUSS3 {
                let r = mid + half * xi;
                f(e, r, half * wi * r.powf(self.n - 1.0));
            }
        }
    }
}

/// A radial test function that can be evaluated inside a given element.
pub trait RadialTest {
    /// `(φ(r), φ′(r))` for `r` inside element `element`.
    fn eval(&self, element: usize, r: f64) -> (f64, f64);
}

/// Piecewise-linear function given by its nodal values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridFunction {
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: &RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nodes.len() {
            return Err(Error::ParameterMismatch(format!(
                "{} values on {} nodes",
                values.len(),
                grid.nodes.len()
            )));
        }
        Ok(Self {
            nodes: grid.nodes.clone(),
            values,
        })
    }

    /// Nodal interpolant, forced to zero at `r_max`.
    pub fn interpolate<F: Fn(f64) -> f64>(grid: &RadialGrid, f: F) -> Self {
        let mut values: Vec<f64> = grid.nodes.iter().map(|&r| f(r)).collect();
        *values.last_mut().unwrap() = 0.0;
        Self {
            nodes: grid.nodes.clone(),
            values,
        }
    }

    pub fn zero(grid: &RadialGrid) -> Self {
        Self::interpolate(grid, |_| 0.0)
    }

    pub fn respects_boundary(&self) -> bool {
        self.values.last() == Some(&0.0)
    }
}

impl RadialTest for GridFunction {
    fn eval(&self, e: usize, r: f64) -> (f64, f64) {
        let (r0, r1) = (self.nodes[e], self.nodes[e + 1]);
        let (v0, v1) = (self.values[e], self.values[e + 1]);
        let h = r1 - r0;
        let slope = (v1 - v0) / h;
        (v0 + slope * (r - r0), slope)
    }
}

/// Closed-form test function `r ↦ (φ(r), φ′(r))`.
pub struct Smooth<F>(pub F);

impl<F: Fn(f64) -> (f64, f64)> RadialTest for Smooth<F> {
    fn eval(&self, _element: usize, r: f64) -> (f64, f64) {
        (self.0)(r)
    }
}
