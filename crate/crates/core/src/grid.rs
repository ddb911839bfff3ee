//! Zonal transmission model: topology, DC flows and corridor ratings.
//!
//! Each corridor bundles parallel 220 kV and 380 kV circuits strung with the
//! same conductor. Its thermal limit is the ampacity of one circuit converted
//! to three-phase MVA and summed over circuits, taken under the worse of the
//! two endpoint zones' weather and multiplied by a per-corridor factor that
//! makes the nominal reference weather reproduce the corridor's static rating.

use crate::thermal::{ampacity, AmbientConditions, ConductorSpec};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

pub const KV_220: f64 = 220.0;
pub const KV_380: f64 = 380.0;

/// Calibration factors outside this band point at a circuit-count or NLR
/// typo in the benchmark file.
pub const CALIBRATION_SANITY_BAND: (f64, f64) = (0.5, 2.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("network is disconnected: {unreachable:?} not reachable from {slack}")]
    DisconnectedGraph { slack: String, unreachable: Vec<String> },
    #[error("reduced susceptance matrix is singular")]
    SingularNetwork,
    #[error("invalid grid model: {0}")]
    InvalidModel(String),
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("ambient series misaligned: {0}")]
    HorizonMismatch(String),
    #[error("line {line}: corridor rating at the reference ambient is {rating} MVA, cannot calibrate")]
    UncalibratableLine { line: String, rating: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub from: usize,
    pub to: usize,
    pub circuits_220: u32,
    pub circuits_380: u32,
    /// Per unit on the model's base MVA.
    pub susceptance: f64,
    pub nlr_mva: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridModel {
    nodes: Vec<Node>,
    lines: Vec<Line>,
    base_mva: f64,
}

impl GridModel {
    pub fn new(nodes: Vec<Node>, lines: Vec<Line>, base_mva: f64) -> Result<Self, GridError> {
        if nodes.is_empty() {
            return Err(GridError::InvalidModel("no nodes".into()));
        }
        let mut seen = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if seen.insert(n.id.as_str(), i).is_some() {
                return Err(GridError::InvalidModel(format!("duplicate node id '{}'", n.id)));
            }
        }
        if !(base_mva > 0.0) {
            return Err(GridError::InvalidModel(format!("base MVA {base_mva}")));
        }
        for (k, l) in lines.iter().enumerate() {
            if l.from >= nodes.len() || l.to >= nodes.len() || l.from == l.to {
                return Err(GridError::InvalidModel(format!(
                    "line {k} joins node {} and {}",
                    l.from, l.to
                )));
            }
            if !(l.susceptance > 0.0) || !l.susceptance.is_finite() {
                return Err(GridError::InvalidModel(format!(
                    "line {k}: susceptance {}",
                    l.susceptance
                )));
            }
            if !(l.nlr_mva > 0.0) {
                return Err(GridError::InvalidModel(format!("line {k}: NLR {}", l.nlr_mva)));
            }
            if l.circuits_220 + l.circuits_380 == 0 {
                return Err(GridError::InvalidModel(format!("line {k} has no circuits")));
            }
        }
        Ok(Self {
            nodes,
            lines,
            base_mva,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn base_mva(&self) -> f64 {
        self.base_mva
    }

    pub fn node_index(&self, id: &str) -> Result<usize, GridError> {
        self.nodes
            .iter()
            .position(|n| n.id == id)
            .ok_or_else(|| GridError::UnknownNode(id.to_string()))
    }

    /// `"A-B"` style label of a line.
    pub fn line_label(&self, line: usize) -> String {
        let l = &self.lines[line];
        format!("{}-{}", self.nodes[l.from].id, self.nodes[l.to].id)
    }

    /// Nodes not reachable from `root`.
    pub fn unreachable_from(&self, root: usize) -> Vec<usize> {
        let n = self.nodes.len();
        let mut adj = vec![Vec::new(); n];
        for l in &self.lines {
            adj[l.from].push(l.to);
            adj[l.to].push(l.from);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        (0..n).filter(|&i| !seen[i]).collect()
    }
}

/// Per-unit susceptance of `circuits_220` + `circuits_380` parallel circuits of
/// length `length_km` with per-kilometre series reactances in Ω.
pub fn corridor_susceptance(
    length_km: f64,
    circuits_220: u32,
    circuits_380: u32,
    x_220_ohm_per_km: f64,
    x_380_ohm_per_km: f64,
    base_mva: f64,
) -> f64 {
    let per_circuit = |kv: f64, x: f64| {
        let z_base = kv * kv / base_mva;
        z_base / (x * length_km)
    };
    circuits_220 as f64 * per_circuit(KV_220, x_220_ohm_per_km)
        + circuits_380 as f64 * per_circuit(KV_380, x_380_ohm_per_km)
}

/// Power transfer distribution factors, lines × nodes. The slack column is
/// zero, so any imbalance in the injections is taken up at the slack.
#[derive(Debug, Clone, PartialEq)]
pub struct PtdfMatrix {
    pub matrix: DMatrix<f64>,
    pub slack: usize,
}

impl PtdfMatrix {
    pub fn n_lines(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_nodes(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn get(&self, line: usize, node: usize) -> f64 {
        self.matrix[(line, node)]
    }

    /// Line flows (MW, positive from `from` to `to`) for nodal injections (MW).
    pub fn flows(&self, injections: &[f64]) -> Vec<f64> {
        assert_eq!(injections.len(), self.n_nodes(), "injection vector length");
        (0..self.n_lines())
            .map(|l| {
                injections
                    .iter()
                    .enumerate()
                    .map(|(n, p)| self.matrix[(l, n)] * p)
                    .sum()
            })
            .collect()
    }
}

pub fn build_ptdf(model: &GridModel, slack: usize) -> Result<PtdfMatrix, GridError> {
    let n = model.nodes.len();
    if slack >= n {
        return Err(GridError::UnknownNode(format!("#{slack}")));
    }
    let unreachable = model.unreachable_from(slack);
    if !unreachable.is_empty() {
        return Err(GridError::DisconnectedGraph {
            slack: model.nodes[slack].id.clone(),
            unreachable: unreachable.iter().map(|&i| model.nodes[i].id.clone()).collect(),
        });
    }
    let m = model.lines.len();
    let mut ptdf = DMatrix::<f64>::zeros(m, n);
    if n == 1 {
        return Ok(PtdfMatrix { matrix: ptdf, slack });
    }

    // reduced index: node -> row in the slack-free B matrix
    let reduced: Vec<Option<usize>> = (0..n)
        .map(|i| match i.cmp(&slack) {
            std::cmp::Ordering::Less => Some(i),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(i - 1),
        })
        .collect();
    let mut b = DMatrix::<f64>::zeros(n - 1, n - 1);
    for l in &model.lines {
        let (i, j) = (reduced[l.from], reduced[l.to]);
        if let Some(i) = i {
            b[(i, i)] += l.susceptance;
        }
        if let Some(j) = j {
            b[(j, j)] += l.susceptance;
        }
        if let (Some(i), Some(j)) = (i, j) {
            b[(i, j)] -= l.susceptance;
            b[(j, i)] -= l.susceptance;
        }
    }
    let x = b.lu().try_inverse().ok_or(GridError::SingularNetwork)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(GridError::SingularNetwork);
    }
    let angle_sens = |node: usize, inj: usize| match (reduced[node], reduced[inj]) {
        (Some(a), Some(c)) => x[(a, c)],
        _ => 0.0,
    };
    for (k, l) in model.lines.iter().enumerate() {
        for inj in 0..n {
            ptdf[(k, inj)] = l.susceptance * (angle_sens(l.from, inj) - angle_sens(l.to, inj));
        }
    }
    Ok(PtdfMatrix { matrix: ptdf, slack })
}

/// Three-phase apparent power of `circuits` circuits carrying `i_ac` A at line
/// voltage `voltage_kv`, MVA.
pub fn ampacity_to_mva(i_ac: f64, voltage_kv: f64, circuits: u32) -> f64 {
    3f64.sqrt() * voltage_kv * i_ac * circuits as f64 / 1000.0
}

/// Uncalibrated corridor rating (MVA) for a per-circuit AC ampacity.
pub fn corridor_mva(line: &Line, i_ac: f64) -> f64 {
    ampacity_to_mva(i_ac, KV_220, line.circuits_220) + ampacity_to_mva(i_ac, KV_380, line.circuits_380)
}

/// Calibrated corridor rating (MVA) under the two endpoint zones' weather.
/// The lower of the two endpoint ratings is used.
pub fn corridor_dlr(
    line: &Line,
    amb_from: &AmbientConditions,
    amb_to: &AmbientConditions,
    spec: &ConductorSpec,
    factor: f64,
) -> f64 {
    let i = ampacity(spec, amb_from).ac.min(ampacity(spec, amb_to).ac);
    factor * corridor_mva(line, i)
}

/// Nominal-rating reference weather: 35 °C, 45° attack angle, full sun and
/// 1 m/s wind.
pub fn nlr_reference_ambient() -> AmbientConditions {
    AmbientConditions {
        wind_speed: 1.0,
        wind_angle_deg: 45.0,
        solar_radiation: 1000.0,
        air_temp: 35.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub factors: Vec<f64>,
}

pub fn calibrate_to_nlr(
    model: &GridModel,
    spec: &ConductorSpec,
    reference: &AmbientConditions,
) -> Result<Calibration, GridError> {
    let i_ref = ampacity(spec, reference).ac;
    let mut factors = Vec::with_capacity(model.lines.len());
    for (k, line) in model.lines.iter().enumerate() {
        let raw = corridor_mva(line, i_ref);
        if !(raw > 0.0) {
            return Err(GridError::UncalibratableLine {
                line: model.line_label(k),
                rating: raw,
            });
        }
        let f = line.nlr_mva / raw;
        let (lo, hi) = CALIBRATION_SANITY_BAND;
        if !(lo..=hi).contains(&f) {
            log::error!(
                "line {}: calibration factor {f:.3} outside [{lo}, {hi}]; check its circuit counts and NLR",
                model.line_label(k)
            );
        }
        factors.push(f);
    }
    Ok(Calibration { factors })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RatingMode {
    Nlr,
    Dlr,
}

impl RatingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RatingMode::Nlr => "nlr",
            RatingMode::Dlr => "dlr",
        }
    }
}

impl std::fmt::Display for RatingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RatingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "nlr" => Ok(RatingMode::Nlr),
            "dlr" => Ok(RatingMode::Dlr),
            other => Err(format!("unknown rating mode '{other}' (expected nlr or dlr)")),
        }
    }
}

/// Corridor limits over time.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingSeries {
    pub mode: RatingMode,
    /// `limits[line][step]`, MVA.
    pub limits: Vec<Vec<f64>>,
    /// Steps at which some zone had no thermal headroom and the limit is 0.
    pub exhausted: Vec<Vec<bool>>,
}

impl RatingSeries {
    pub fn nlr(model: &GridModel, steps: usize) -> Self {
        Self {
            mode: RatingMode::Nlr,
            limits: model.lines.iter().map(|l| vec![l.nlr_mva; steps]).collect(),
            exhausted: vec![vec![false; steps]; model.lines.len()],
        }
    }

    pub fn steps(&self) -> usize {
        self.limits.first().map_or(0, Vec::len)
    }

    pub fn limit(&self, line: usize, step: usize) -> f64 {
        self.limits[line][step]
    }

    /// Window `[start, start + len)` of the series.
    pub fn window(&self, start: usize, len: usize) -> RatingSeries {
        RatingSeries {
            mode: self.mode,
            limits: self.limits.iter().map(|s| s[start..start + len].to_vec()).collect(),
            exhausted: self.exhausted.iter().map(|s| s[start..start + len].to_vec()).collect(),
        }
    }

    /// True when every limit of `self` is at least the matching limit of
    /// `other`.
    pub fn dominates(&self, other: &RatingSeries) -> bool {
        self.limits.len() == other.limits.len()
            && self
                .limits
                .iter()
                .zip(&other.limits)
                .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x >= y))
    }
}

/// Rating series for every line. `ambients[node][step]` holds the zone
/// weather; in NLR mode only its length is used.
pub fn rating_series(
    model: &GridModel,
    spec: &ConductorSpec,
    calibration: &Calibration,
    ambients: &[Vec<AmbientConditions>],
    mode: RatingMode,
) -> Result<RatingSeries, GridError> {
    if ambients.len() != model.nodes.len() {
        return Err(GridError::HorizonMismatch(format!(
            "{} zone series for {} nodes",
            ambients.len(),
            model.nodes.len()
        )));
    }
    let steps = ambients[0].len();
    if let Some((i, s)) = ambients.iter().enumerate().find(|(_, s)| s.len() != steps) {
        return Err(GridError::HorizonMismatch(format!(
            "zone {} has {} steps, zone {} has {steps}",
            model.nodes[i].id,
            s.len(),
            model.nodes[0].id
        )));
    }
    if calibration.factors.len() != model.lines.len() {
        return Err(GridError::InvalidModel(format!(
            "{} calibration factors for {} lines",
            calibration.factors.len(),
            model.lines.len()
        )));
    }
    if mode == RatingMode::Nlr {
        return Ok(RatingSeries::nlr(model, steps));
    }

    let zone_amps: Vec<Vec<(f64, bool)>> = ambients
        .iter()
        .map(|series| {
            series
                .iter()
                .map(|a| {
                    let amp = ampacity(spec, a);
                    (amp.ac, amp.headroom_exhausted)
                })
                .collect()
        })
        .collect();
    let mut limits = Vec::with_capacity(model.lines.len());
    let mut exhausted = Vec::with_capacity(model.lines.len());
    for (line, &factor) in model.lines.iter().zip(&calibration.factors) {
        let (a, b) = (&zone_amps[line.from], &zone_amps[line.to]);
        limits.push(
            (0..steps)
                .map(|k| factor * corridor_mva(line, a[k].0.min(b[k].0)))
                .collect(),
        );
        exhausted.push((0..steps).map(|k| a[k].1 || b[k].1).collect());
    }
    Ok(RatingSeries {
        mode,
        limits,
        exhausted,
    })
}
