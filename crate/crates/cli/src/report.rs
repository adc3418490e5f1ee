use presym_core::foliation::CycleValue;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub kind: String,
    pub status: Status,
    pub details: Vec<String>,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Certificate>,
    /// set when the check failed on a ring error
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub ring_error: bool,
}

impl CheckReport {
    pub fn new(id: &str, kind: &str) -> Self {
        CheckReport {
            id: id.into(),
            kind: kind.into(),
            status: Status::Pass,
            details: Vec::new(),
            witnesses: Vec::new(),
            certificates: Vec::new(),
            ring_error: false,
        }
    }

    pub fn detail(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }

    /// Records a failed expectation.
    pub fn fail(&mut self, witness: impl Into<String>) {
        if self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self.witnesses.push(witness.into());
    }

    pub fn expect(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.fail(witness());
        }
    }
}

/// An integral pairing against a cycle; nonzero certifies an obstruction.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub cycle: String,
    pub value: String,
    pub exact: bool,
    pub nonzero: bool,
}

impl From<CycleValue> for Certificate {
    fn from(c: CycleValue) -> Self {
        Certificate {
            cycle: c.cycle,
            value: c.value.to_string(),
            exact: c.value.is_exact(),
            nonzero: c.nonzero,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

impl Summary {
    fn add(&mut self, c: &CheckReport) {
        match c.status {
            Status::Pass => self.passed += 1,
            Status::Fail => self.failed += 1,
            Status::Error => self.errors += 1,
        }
    }

    pub fn status(&self) -> Status {
        if self.errors > 0 {
            Status::Error
        } else if self.failed > 0 {
            Status::Fail
        } else {
            Status::Pass
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub scenario_sha256: String,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
}

impl ScenarioReport {
    pub fn new(scenario: &str, sha: String, seed: u64, checks: Vec<CheckReport>) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            summary.add(c);
        }
        ScenarioReport {
            scenario: scenario.into(),
            scenario_sha256: sha,
            seed,
            checks,
            summary,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub samples: Option<usize>,
    pub float_tol: f64,
    pub scenarios: Vec<ScenarioReport>,
    pub summary: Summary,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str, samples: Option<usize>, float_tol: f64, scenarios: Vec<ScenarioReport>) -> Self {
        let mut summary = Summary::default();
        for s in &scenarios {
            for c in &s.checks {
                summary.add(c);
            }
        }
        Report {
            command: command.into(),
            samples,
            float_tol,
            status: summary.status(),
            scenarios,
            summary,
        }
    }

    /// 0 pass, 1 failed check, 3 ring error.
    pub fn exit_code(&self) -> i32 {
        let ring = self.scenarios.iter().flat_map(|s| &s.checks).any(|c| c.ring_error);
        match self.status {
            Status::Pass => 0,
            _ if ring => 3,
            _ => 1,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.scenarios {
            out.push_str(&format!("scenario {} (seed {})\n", s.scenario, s.seed));
            for c in &s.checks {
                let tag = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Error => "ERROR",
                };
                out.push_str(&format!("  {tag} {} [{}]\n", c.id, c.kind));
                for d in &c.details {
                    out.push_str(&format!("      {d}\n"));
                }
                for w in &c.witnesses {
                    out.push_str(&format!("      witness: {w}\n"));
                }
            }
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} errors\n",
            self.summary.passed, self.summary.failed, self.summary.errors
        ));
        out
    }
}
