//! Running sums gathered during a replication and the estimates built from
//! them.

use serde::Serialize;

/// Largest inter-refresh time with its own histogram bin.
pub const HISTOGRAM_LEN: usize = 50;

/// Empirical statistics of a simulation run, pooled over tracked nodes and
/// replications. Estimates without samples are `NaN`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimStats {
    pub time_avg_aoi: f64,
    pub time_avg_aoi_se: f64,
    /// Time-average age of each tracked node, pooled over replications.
    pub per_node_aoi: Vec<f64>,
    /// Decoded packets per measured slot, over all nodes.
    pub throughput: f64,
    pub throughput_se: f64,
    /// Decoded packets per measured slot for each node, when requested.
    pub per_node_throughput: Option<Vec<f64>>,
    pub mean_y: f64,
    pub mean_y_se: f64,
    pub mean_y2: f64,
    pub mean_y2_se: f64,
    pub mean_z: f64,
    pub mean_z_se: f64,
    /// Refreshes per node per slot.
    pub zeta_hat: f64,
    pub zeta_hat_se: f64,
    pub refresh_count: u64,
    /// Complete inter-refresh intervals observed.
    pub y_samples: u64,
    /// `y_histogram[y - 1]` counts complete intervals of length `y`.
    pub y_histogram: Vec<u64>,
    pub measured_slots: u64,
    pub tracked_nodes: u32,
    pub replications: u32,
}

impl SimStats {
    /// Empirical `P(Y = y)` with its binomial standard error, for
    /// `1 <= y <= HISTOGRAM_LEN`.
    pub fn y_pmf(&self, y: usize) -> (f64, f64) {
        let n = self.y_samples as f64;
        let p = self.y_histogram[y - 1] as f64 / n;
        (p, (p * (1.0 - p) / n).sqrt())
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Accumulator {
    pub slots: u64,
    pub decoded: u64,
    pub node_decoded: Vec<u64>,
    pub node_area: Vec<f64>,
    pub refreshes: u64,
    pub y: Moments,
    pub z: Moments,
    pub y4: f64,
    pub area: f64,
    pub area2: f64,
    pub area_y: f64,
    pub histogram: Vec<u64>,
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    pub count: u64,
    pub sum: f64,
    pub sum2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum2 += x * x;
    }

    fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum2 += other.sum2;
    }

    fn mean(&self) -> f64 {
        self.sum / self.count as f64
    }

    fn mean_sq(&self) -> f64 {
        self.sum2 / self.count as f64
    }

    fn std_err(&self) -> f64 {
        let m = self.mean();
        ((self.mean_sq() - m * m).max(0.0) / self.count as f64).sqrt()
    }
}

impl Accumulator {
    pub fn new(tracked: usize) -> Self {
        Accumulator {
            node_decoded: vec![0; tracked],
            node_area: vec![0.0; tracked],
            histogram: vec![0; HISTOGRAM_LEN],
            ..Default::default()
        }
    }

    /// One complete interval of length `y` that opened with age `z0`.
    pub fn push_interval(&mut self, y: u64, z0: u64) {
        let yf = y as f64;
        let a = z0 as f64 * yf + 0.5 * yf * yf;
        self.y.push(yf);
        self.y4 += yf * yf * yf * yf;
        self.area += a;
        self.area2 += a * a;
        self.area_y += a * yf;
        if let Some(bin) = self.histogram.get_mut(y as usize - 1) {
            *bin += 1;
        }
    }

    pub fn merge(&mut self, other: &Accumulator) {
        self.slots += other.slots;
        self.decoded += other.decoded;
        for (a, b) in self.node_decoded.iter_mut().zip(&other.node_decoded) {
            *a += b;
        }
        for (a, b) in self.node_area.iter_mut().zip(&other.node_area) {
            *a += b;
        }
        self.refreshes += other.refreshes;
        self.y.merge(&other.y);
        self.z.merge(&other.z);
        self.y4 += other.y4;
        self.area += other.area;
        self.area2 += other.area2;
        self.area_y += other.area_y;
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
    }

    pub fn finish(&self, replications: u32, per_node_throughput: bool) -> SimStats {
        let tracked = self.node_area.len();
        let t = self.slots as f64;
        let node_time = t * tracked as f64;
        let s = self.decoded as f64 / t;

        // Ratio estimator over complete intervals for the standard error.
        let ratio = self.area / self.y.sum;
        let resid = self.area2 - 2.0 * ratio * self.area_y + ratio * ratio * self.y.sum2;
        let aoi_se = resid.max(0.0).sqrt() / self.y.sum;

        let n_y = self.y.count as f64;
        let mean_y = self.y.mean();
        let mean_y2 = self.y.mean_sq();
        let y_var = (mean_y2 - mean_y * mean_y).max(0.0);
        let zeta = self.refreshes as f64 / node_time;

        SimStats {
            time_avg_aoi: self.node_area.iter().sum::<f64>() / node_time,
            time_avg_aoi_se: aoi_se,
            per_node_aoi: self.node_area.iter().map(|a| a / t).collect(),
            throughput: s,
            throughput_se: (s * (1.0 - s) / t).sqrt(),
            per_node_throughput: per_node_throughput
                .then(|| self.node_decoded.iter().map(|&d| d as f64 / t).collect()),
            mean_y,
            mean_y_se: self.y.std_err(),
            mean_y2,
            mean_y2_se: ((self.y4 / n_y - mean_y2 * mean_y2).max(0.0) / n_y).sqrt(),
            mean_z: self.z.mean(),
            mean_z_se: self.z.std_err(),
            zeta_hat: zeta,
            zeta_hat_se: zeta * y_var.sqrt() / mean_y / n_y.sqrt(),
            refresh_count: self.refreshes,
            y_samples: self.y.count,
            y_histogram: self.histogram.clone(),
            measured_slots: self.slots,
            tracked_nodes: tracked as u32,
            replications,
        }
    }
}
