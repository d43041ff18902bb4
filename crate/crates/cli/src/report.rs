use serde::{Deserialize, Serialize};

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Ok,
    IterationLimitExceeded,
    ResourceLimitExceeded,
    UnsupportedSemantics,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            _ => 2,
        }
    }

    /// The more severe of two statuses (anything beats `Ok`).
    pub fn worst(self, other: Status) -> Status {
        if self == Status::Ok {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgramInfo {
    pub file: String,
    pub sha256: String,
    /// `mpp` or `pgc`.
    pub kind: String,
    pub variables: Vec<String>,
    pub branches: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub generators: usize,
    pub max_degree: u32,
    pub family: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    pub elapsed_us: u64,
    pub reductions: u64,
    pub membership_tests: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// `groebner` or `variety`.
    pub algorithm: String,
    pub status: Status,
    /// N̂ for the Gröbner chain, N for the variety chain; for
    /// `IterationLimitExceeded` the last index reached.
    pub index: Option<u64>,
    /// Reduced Gröbner basis whose zero set is the non-terminating input set.
    pub basis: Vec<String>,
    pub iteration_bound: String,
    pub history: Vec<StepReport>,
    pub stats: Option<StatsReport>,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LassoReport {
    pub stem: String,
    pub cycle: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointReport {
    pub point: Vec<String>,
    /// `Terminating` or `NonTerminating`.
    pub verdict: String,
    pub lasso: Option<LassoReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub polynomials: Vec<String>,
    /// `Empty` or `NonEmpty`: whether the constraint set meets the
    /// non-terminating inputs.
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub report_version: u32,
    pub program: ProgramInfo,
    pub semantics: String,
    pub analyses: Vec<AnalysisReport>,
    pub points: Vec<PointReport>,
    pub constraints: Option<ConstraintReport>,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub report_version: u32,
    pub d: u64,
    /// Description of the degree bound, e.g. `affine(1,1)`.
    pub f: String,
    pub cap: u64,
    /// Exact value when within the cap.
    pub value: Option<String>,
    pub lower_bound: Option<String>,
    pub status: Status,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub report_version: u32,
    pub program: ProgramInfo,
    pub point: Vec<String>,
    pub depth: usize,
    pub nodes: usize,
    /// Paths of each length after which some branch is still enabled.
    pub alive: Vec<usize>,
    pub longest_alive: Option<usize>,
    pub truncated: bool,
    pub bit_capped: bool,
    pub lasso: Option<LassoReport>,
    pub status: Status,
    pub message: Option<String>,
}
