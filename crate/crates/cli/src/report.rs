use ramstruct::structures::RamStructure;
use ramstruct::FiniteGroup;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Whether the answer is final. Maps to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Definitive,
    Undecided,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Definitive => 0,
            Status::Undecided => 2,
        }
    }
}

/// Tuples rendered as literals accepted by `ram check`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub t1: String,
    pub t2: String,
    pub size: (usize, usize),
}

impl Witness {
    pub fn of(g: &FiniteGroup, s: &RamStructure) -> Witness {
        Witness {
            t1: g.render_tuple(s.t1()),
            t2: g.render_tuple(s.t2()),
            size: s.size(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub candidates_examined: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool_version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub status: Status,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counters: Option<Counters>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<bool>,
}

impl Report {
    pub fn new(
        command: &'static str,
        group: Option<String>,
        status: Status,
        result: Value,
    ) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            tool_version: TOOL_VERSION,
            command,
            group,
            status,
            result,
            witness: None,
            counters: None,
            exhaustive: None,
        }
    }

    pub fn with_witness(mut self, w: Option<Witness>) -> Self {
        self.witness = w;
        self
    }

    pub fn with_counters(mut self, candidates_examined: u64, elapsed_ms: u64) -> Self {
        self.counters = Some(Counters {
            candidates_examined,
            elapsed_ms,
        });
        self
    }

    pub fn with_exhaustive(mut self, exhaustive: bool) -> Self {
        self.exhaustive = Some(exhaustive);
        self
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    /// One-line human summary.
    pub fn to_text(&self) -> String {
        let mut line = self.command.to_string();
        if let Some(g) = &self.group {
            line.push_str(&format!(" {g}"));
        }
        line.push_str(&format!(": {:?}", self.status).to_lowercase());
        line.push_str(&format!(" {}", self.result));
        if let Some(w) = &self.witness {
            line.push_str(&format!("\n  T1 = {}\n  T2 = {}", w.t1, w.t2));
        }
        line
    }
}
