//! Serializable reports. Field order is fixed by the struct definitions, so
//! the JSON is byte-identical across runs.

use cosym3_core::CheckReport;
use serde::Serialize;

use crate::file_format::StructureFile;

#[derive(Clone, Debug, Serialize)]
pub struct InputEcho {
    pub source: String,
    pub name: String,
    pub dim: usize,
    pub topology: String,
    pub order_bound: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Versions {
    pub cosym3: String,
}

impl Default for Versions {
    fn default() -> Self {
        Versions {
            cosym3: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

pub fn items(r: &CheckReport) -> Vec<Item> {
    r.items
        .iter()
        .map(|i| Item {
            name: i.name.clone(),
            passed: i.passed,
            detail: i.detail.clone(),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub input: InputEcho,
    pub versions: Versions,
    pub conventions: Vec<String>,
    pub passed: bool,
    pub verdict: String,
    pub results: Results,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Results {
    Check(CheckResults),
    Betti(BettiResults),
    Deform(DeformResults),
    Liealg(LiealgResults),
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResults {
    pub failures: usize,
    pub checks: Vec<Item>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiResults {
    pub b: Vec<usize>,
    pub bh: Vec<usize>,
    pub epsilon_order: Vec<String>,
    /// `decomposition[k][i]` is the dimension for `epsilon_order[i]` in degree `k`.
    pub decomposition: Vec<Vec<usize>>,
    pub notes: Vec<String>,
    pub failures: usize,
    pub checks: Vec<Item>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeformResults {
    pub a: String,
    pub identical_to_input: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub failures: usize,
    pub checks: Vec<Item>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureFile>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiealgResults {
    pub module_dim: usize,
    pub generators: Vec<String>,
    pub span_dim: usize,
    pub generators_closed: bool,
    pub basis: Vec<String>,
    /// `bracket_table[i][j] = [generators[i], generators[j]]` in the basis.
    pub bracket_table: Vec<Vec<String>>,
    pub killing_form: Vec<Vec<String>>,
    pub killing_rank: usize,
    pub signature: Signature,
    pub l_lambda: Vec<String>,
    pub failures: usize,
    pub checks: Vec<Item>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_pretty(&self) -> String {
        crate::pretty::render(self)
    }
}
