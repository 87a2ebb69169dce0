use netkrig_core::heuristics::SelectionResult;
use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub load: f64,
    pub bounds: f64,
    pub select: f64,
}

/// Output of `solve` and `ensemble`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub version: String,
    pub command: String,
    pub source: String,
    pub links: usize,
    pub flows: usize,
    pub algorithm: String,
    pub criterion: String,
    pub k: usize,
    pub m: usize,
    pub early_stop: bool,
    /// Seed of the run that produced `selected`.
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    pub selected: Vec<usize>,
    pub error_trajectory: Vec<f64>,
    pub bound_trajectory: Vec<f64>,
    pub stopped_early: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub member_errors: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_index: Option<usize>,
    pub wall_time_ms: PhaseTimes,
}

impl ResultRecord {
    pub fn from_selection(
        command: &str,
        source: &str,
        shape: (usize, usize),
        k: usize,
        r: &SelectionResult,
    ) -> Self {
        ResultRecord {
            version: VERSION.to_string(),
            command: command.to_string(),
            source: source.to_string(),
            links: shape.0,
            flows: shape.1,
            algorithm: r.algorithm.kind.name().to_string(),
            criterion: r.criterion.name().to_string(),
            k,
            m: r.algorithm.m,
            early_stop: r.algorithm.early_stop,
            seed: r.algorithm.seed,
            seeds: None,
            selected: r.selected.clone(),
            error_trajectory: r.error_trajectory.clone(),
            bound_trajectory: r.bound_trajectory.clone(),
            stopped_early: r.stopped_early,
            member_errors: None,
            best_index: None,
            wall_time_ms: PhaseTimes {
                select: r.wall_time.as_secs_f64() * 1e3,
                ..PhaseTimes::default()
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// One row per k: `k,link,error,bound`; row 0 has no link.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "link", "error", "bound"]).unwrap();
        for (k, (e, b)) in self
            .error_trajectory
            .iter()
            .zip(&self.bound_trajectory)
            .enumerate()
        {
            let link = if k == 0 {
                String::new()
            } else {
                self.selected[k - 1].to_string()
            };
            w.write_record([k.to_string(), link, e.to_string(), b.to_string()])
                .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

/// Output of `bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub version: String,
    pub source: String,
    pub links: usize,
    pub flows: usize,
    pub criterion: String,
    pub k: usize,
    pub bound_trajectory: Vec<f64>,
    pub spectrum: Vec<f64>,
    pub wall_time_ms: PhaseTimes,
}

impl BoundRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "bound"]).unwrap();
        for (k, b) in self.bound_trajectory.iter().enumerate() {
            w.write_record([k.to_string(), b.to_string()]).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

/// One `bench` row; failed rows carry the message in `status` and no error or time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub algorithm: String,
    pub criterion: String,
    #[serde(rename = "L")]
    pub links: Option<usize>,
    #[serde(rename = "J")]
    pub flows: Option<usize>,
    #[serde(rename = "K")]
    pub k: usize,
    pub m: usize,
    pub error: Option<f64>,
    pub wall_time: Option<f64>,
    pub status: String,
}

pub const BENCH_HEADER: [&str; 10] = [
    "instance",
    "algorithm",
    "criterion",
    "L",
    "J",
    "K",
    "m",
    "error",
    "wall_time",
    "status",
];

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(BENCH_HEADER).unwrap();
    for r in rows {
        w.serialize(r).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

pub fn bench_json(rows: &[BenchRow]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}
