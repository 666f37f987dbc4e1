use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::partition::Partition;
use crate::{Error, Result};

/// Closed-form kernel families. All of them map [0,1]^2 into [0,1] and are
/// symmetric in (u, v).
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticModel {
    /// W(u,v) = c
    Constant(f64),
    /// W(u,v) = u v
    Product,
    /// W(u,v) = (u + v) / 2
    Average,
    /// W(u,v) = (u^2 + v^2) / 2
    SquareAverage,
    /// W(u,v) = 1 - max(u, v)
    OneMinusMax,
    /// W(u,v) = min(u, v) (1 - max(u, v))
    MinOneMinusMax,
    /// W(u,v) = |sin(f u v)|
    AbsSin(f64),
    /// W(u,v) = |sin(f u v)| / 2 + |cos(f u v)| / 2
    SinCosMix(f64),
}

impl AnalyticModel {
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        match *self {
            AnalyticModel::Constant(c) => c,
            AnalyticModel::Product => u * v,
            AnalyticModel::Average => (u + v) / 2.0,
            AnalyticModel::SquareAverage => (u * u + v * v) / 2.0,
            AnalyticModel::OneMinusMax => 1.0 - u.max(v),
            AnalyticModel::MinOneMinusMax => u.min(v) * (1.0 - u.max(v)),
            // grouped as f*(u*v) so evaluation is bitwise symmetric in (u,v)
            AnalyticModel::AbsSin(f) => (f * (u * v)).sin().abs(),
            AnalyticModel::SinCosMix(f) => {
                let t = f * (u * v);
                t.sin().abs() / 2.0 + t.cos().abs() / 2.0
            }
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            AnalyticModel::Constant(_) => "constant",
            AnalyticModel::Product => "product",
            AnalyticModel::Average => "avg",
            AnalyticModel::SquareAverage => "sq-avg",
            AnalyticModel::OneMinusMax => "one-minus-max",
            AnalyticModel::MinOneMinusMax => "min-one-minus-max",
            AnalyticModel::AbsSin(_) => "abs-sin",
            AnalyticModel::SinCosMix(_) => "sin-cos",
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            AnalyticModel::Constant(c) => vec![c],
            AnalyticModel::AbsSin(f) | AnalyticModel::SinCosMix(f) => vec![f],
            _ => vec![],
        }
    }

    pub fn from_id(id: &str, params: &[f64]) -> Result<Self> {
        let one_param = |name: &str| -> Result<f64> {
            params.first().copied().ok_or_else(|| {
                Error::InvalidGraphon(format!("builtin '{name}' needs one parameter"))
            })
        };
        match id {
            "constant" => {
                let c = one_param("constant")?;
                if !(0.0..=1.0).contains(&c) {
                    return Err(Error::InvalidGraphon(format!(
                        "constant value {c} outside [0,1]"
                    )));
                }
                Ok(AnalyticModel::Constant(c))
            }
            "product" => Ok(AnalyticModel::Product),
            "avg" => Ok(AnalyticModel::Average),
            "sq-avg" => Ok(AnalyticModel::SquareAverage),
            "one-minus-max" => Ok(AnalyticModel::OneMinusMax),
            "min-one-minus-max" => Ok(AnalyticModel::MinOneMinusMax),
            "abs-sin" => Ok(AnalyticModel::AbsSin(one_param("abs-sin")?)),
            "sin-cos" => Ok(AnalyticModel::SinCosMix(one_param("sin-cos")?)),
            other => Err(Error::InvalidGraphon(format!("unknown builtin '{other}'"))),
        }
    }
}

/// The seven kernels used by the reconstruction experiments, with their ids.
pub fn experiment_graphons() -> Vec<(String, Graphon)> {
    let models = [
        AnalyticModel::Average,
        AnalyticModel::SquareAverage,
        AnalyticModel::OneMinusMax,
        AnalyticModel::MinOneMinusMax,
        AnalyticModel::AbsSin(100.0),
        AnalyticModel::SinCosMix(64.0),
        AnalyticModel::SinCosMix(10.0),
    ];
    models
        .into_iter()
        .map(|m| {
            let cfg = GraphonConfig::from(&Graphon::Analytic(m.clone()));
            (cfg.display_id(), Graphon::Analytic(m))
        })
        .collect()
}

/// A piecewise-constant kernel on a partition of [0,1]: cell (i,j) of the
/// product grid carries the constant `values[i*n + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon {
    partition: Partition,
    values: Vec<f64>, // row-major n x n, symmetric
}

impl StepGraphon {
    pub fn new(partition: Partition, values: Vec<f64>) -> Result<Self> {
        let n = partition.len();
        if values.len() != n * n {
            return Err(Error::InvalidGraphon(format!(
                "value grid has {} entries, expected {}",
                values.len(),
                n * n
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[i * n + j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidGraphon(format!(
                        "cell ({i},{j}) value {v} outside [0,1]"
                    )));
                }
                if values[i * n + j] != values[j * n + i] {
                    return Err(Error::InvalidGraphon(format!(
                        "value grid not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { partition, values })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn cells(&self) -> usize {
        self.partition.len()
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cells() + j]
    }

    pub fn value_at(&self, u: f64, v: f64) -> Result<f64> {
        let i = self.partition.locate(u)?;
        let j = self.partition.locate(v)?;
        Ok(self.value(i, j))
    }

    pub fn values_matrix(&self) -> DMatrix<f64> {
        let n = self.cells();
        DMatrix::from_fn(n, n, |i, j| self.value(i, j))
    }

    /// Re-expresses the kernel on a finer partition that must refine this
    /// one; values are looked up per refined cell.
    pub fn on_partition(&self, partition: &Partition) -> StepGraphon {
        let n = partition.len();
        let parent: Vec<usize> = (0..n)
            .map(|i| {
                let (a, b) = partition.cell(i);
                self.partition.locate((a + b) / 2.0).expect("cell midpoint")
            })
            .collect();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] = self.value(parent[i], parent[j]);
            }
        }
        StepGraphon {
            partition: partition.clone(),
            values,
        }
    }

    /// The sqrt-width-weighted grid B(i,j) = sqrt(w_i) A(i,j) sqrt(w_j).
    ///
    /// Under the isometry f -> (f_i sqrt(w_i)) between step functions and
    /// finite vectors, B represents the kernel integral operator exactly, so
    /// all spectral quantities of the operator are spectral quantities of B.
    pub fn weighted_matrix(&self) -> DMatrix<f64> {
        weighted_grid(&self.partition, &self.values)
    }

    /// Exact operator norm of the kernel integral operator.
    pub fn operator_norm(&self) -> f64 {
        spectral_norm(&self.weighted_matrix())
    }
}

pub(crate) fn weighted_grid(partition: &Partition, values: &[f64]) -> DMatrix<f64> {
    let n = partition.len();
    let sqrt_w: Vec<f64> = (0..n).map(|i| partition.width(i).sqrt()).collect();
    DMatrix::from_fn(n, n, |i, j| values[i * n + j] * sqrt_w[i] * sqrt_w[j])
}

/// Largest singular value.
pub(crate) fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// A bounded symmetric kernel on [0,1]^2, either in closed form or as a step
/// function.
#[derive(Debug, Clone, PartialEq)]
pub enum Graphon {
    Analytic(AnalyticModel),
    Step(StepGraphon),
}

impl Graphon {
    pub fn builtin(id: &str, params: &[f64]) -> Result<Graphon> {
        Ok(Graphon::Analytic(AnalyticModel::from_id(id, params)?))
    }

    pub fn constant(c: f64) -> Result<Graphon> {
        Graphon::builtin("constant", &[c])
    }

    /// Kernel value at (u, v); errors when a coordinate leaves [0,1].
    pub fn evaluate(&self, u: f64, v: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::OutOfDomain { value: u });
        }
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfDomain { value: v });
        }
        match self {
            Graphon::Analytic(m) => Ok(m.eval(u, v)),
            Graphon::Step(s) => s.value_at(u, v),
        }
    }

    /// Step form of the kernel: a step graphon is returned as-is (the
    /// resolution is ignored), an analytic kernel is averaged onto the
    /// uniform grid of the given resolution.
    pub fn to_step(&self, resolution: usize) -> Result<StepGraphon> {
        match self {
            Graphon::Step(s) => Ok(s.clone()),
            Graphon::Analytic(_) => {
                let g = discretize_gd1(self, resolution, &Quadrature::default())?;
                Ok(induce_graphon(&g))
            }
        }
    }
}

/// Cell-averaging rule for the grid discretization: composite midpoint with
/// a fixed number of sub-points per axis per cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadrature {
    pub points_per_axis: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { points_per_axis: 8 }
    }
}

impl Quadrature {
    pub fn midpoint(points_per_axis: usize) -> Self {
        assert!(points_per_axis >= 1);
        Self { points_per_axis }
    }

    /// Mean of `f` over [a0,a1] x [b0,b1], normalized by the cell area.
    fn cell_mean(&self, f: impl Fn(f64, f64) -> f64, a: (f64, f64), b: (f64, f64)) -> f64 {
        let q = self.points_per_axis;
        let (ua, ub) = a;
        let (va, vb) = b;
        let du = (ub - ua) / q as f64;
        let dv = (vb - va) / q as f64;
        let mut sum = 0.0;
        for s in 0..q {
            let u = ua + (s as f64 + 0.5) * du;
            for t in 0..q {
                let v = va + (t as f64 + 0.5) * dv;
                sum += f(u, v);
            }
        }
        sum / (q * q) as f64
    }
}

/// Grid discretization on the regular N-partition: adjacency entry (i,j) is
/// the normalized average of the kernel over cell I_i x I_j, computed once
/// per unordered pair so the output is exactly symmetric. Diagonal cells are
/// kept, so the graph may carry self-loops.
pub fn discretize_gd1(graphon: &Graphon, n: usize, quadrature: &Quadrature) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidGraph("node count must be positive".into()));
    }
    let partition = Partition::uniform(n);
    let eval = |u: f64, v: f64| match graphon {
        Graphon::Analytic(m) => m.eval(u, v),
        Graphon::Step(s) => s.value_at(u, v).expect("quadrature point in domain"),
    };
    let mut adjacency = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mean = quadrature
                .cell_mean(eval, partition.cell(i), partition.cell(j))
                .clamp(0.0, 1.0);
            adjacency[(i, j)] = mean;
            adjacency[(j, i)] = mean;
        }
    }
    Graph::from_adjacency(adjacency)
}

/// The step graphon induced by a graph on the regular N-partition: cell
/// (i,j) carries the adjacency entry A(i,j). Inverse of `discretize_gd1` on
/// step inputs.
pub fn induce_graphon(graph: &Graph) -> StepGraphon {
    let n = graph.n();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = graph.adjacency()[(i, j)];
        }
    }
    StepGraphon {
        partition: Partition::uniform(n),
        values,
    }
}

/// Operator norm of the kernel integral operator. Exact for step graphons
/// (the resolution is ignored); analytic graphons are discretized at the
/// given resolution first.
pub fn operator_norm(graphon: &Graphon, resolution: usize) -> Result<f64> {
    Ok(graphon.to_step(resolution)?.operator_norm())
}

/// Operator norm of the difference of two step kernels, computed exactly on
/// the common refinement of their partitions.
pub fn operator_distance(w1: &StepGraphon, w2: &StepGraphon) -> f64 {
    let merged = w1.partition.merge(&w2.partition);
    let a1 = w1.on_partition(&merged);
    let a2 = w2.on_partition(&merged);
    let n = merged.len();
    let diff: Vec<f64> = (0..n * n).map(|k| a1.values[k] - a2.values[k]).collect();
    spectral_norm(&weighted_grid(&merged, &diff))
}

/// Serializable description of a graphon: a builtin id with parameters, or
/// an explicit step grid (breakpoints plus row-major values).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphonConfig {
    Builtin {
        id: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        params: Vec<f64>,
    },
    Step {
        breakpoints: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
}

impl GraphonConfig {
    pub fn build(&self) -> Result<Graphon> {
        match self {
            GraphonConfig::Builtin { id, params } => Graphon::builtin(id, params),
            GraphonConfig::Step {
                breakpoints,
                values,
            } => {
                let partition = Partition::new(breakpoints.clone())?;
                let n = partition.len();
                if values.len() != n || values.iter().any(|row| row.len() != n) {
                    return Err(Error::InvalidGraphon(format!(
                        "step value grid must be {n} x {n}"
                    )));
                }
                let flat: Vec<f64> = values.iter().flatten().copied().collect();
                Ok(Graphon::Step(StepGraphon::new(partition, flat)?))
            }
        }
    }

    /// Compact id for file names and trial records, e.g. "abs-sin:100".
    pub fn display_id(&self) -> String {
        match self {
            GraphonConfig::Builtin { id, params } => {
                if params.is_empty() {
                    id.clone()
                } else {
                    let ps: Vec<String> = params.iter().map(|p| format!("{p}")).collect();
                    format!("{}:{}", id, ps.join(","))
                }
            }
            GraphonConfig::Step { breakpoints, .. } => format!("step[{}]", breakpoints.len() - 1),
        }
    }

    /// Parses the CLI shorthand "id" or "id:p1,p2".
    pub fn parse(spec: &str) -> Result<Self> {
        let (id, params) = match spec.split_once(':') {
            Some((id, rest)) => {
                let params: std::result::Result<Vec<f64>, _> =
                    rest.split(',').map(str::parse::<f64>).collect();
                let params = params.map_err(|e| {
                    Error::InvalidGraphon(format!("bad parameter in '{spec}': {e}"))
                })?;
                (id, params)
            }
            None => (spec, vec![]),
        };
        // validate eagerly so bad ids fail at parse time
        let cfg = GraphonConfig::Builtin {
            id: id.to_string(),
            params,
        };
        cfg.build()?;
        Ok(cfg)
    }
}

impl From<&Graphon> for GraphonConfig {
    fn from(g: &Graphon) -> Self {
        match g {
            Graphon::Analytic(m) => GraphonConfig::Builtin {
                id: m.id().to_string(),
                params: m.params(),
            },
            Graphon::Step(s) => {
                let n = s.cells();
                GraphonConfig::Step {
                    breakpoints: s.partition().breakpoints().to_vec(),
                    values: (0..n)
                        .map(|i| (0..n).map(|j| s.value(i, j)).collect())
                        .collect(),
                }
            }
        }
    }
}
