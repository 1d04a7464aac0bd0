use serde::{Deserialize, Serialize};

use crate::matrix::{CellKey, CellSnapshot, MatrixState};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextEntry {
    pub cell: CellKey,
    pub label: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellView {
    pub key: CellKey,
    pub label: String,
    pub candidates: Vec<String>,
    pub submitted: Option<String>,
    pub stale: bool,
    /// Whether brainstorm/iterate/submit are currently allowed.
    pub enabled: bool,
    /// Cells shown to the model as context when this cell is the target, in
    /// prompt order.
    pub context: Vec<ContextEntry>,
    pub versions: Vec<CellSnapshot>,
}

/// The matrix as the workbench renders it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixView {
    pub problem: String,
    pub complete: bool,
    pub submission_log: Vec<CellKey>,
    pub cells: Vec<CellView>,
}

impl MatrixView {
    pub fn of(m: &MatrixState) -> Self {
        let cells = CellKey::ALL
            .into_iter()
            .map(|key| {
                let c = m.cell(key);
                CellView {
                    key,
                    label: key.label(),
                    candidates: c.candidates.clone(),
                    submitted: c.submitted.clone(),
                    stale: c.stale,
                    enabled: m.check_order(key).is_ok(),
                    context: m
                        .context_for(key)
                        .into_iter()
                        .map(|(cell, text)| ContextEntry { cell, label: cell.label(), text })
                        .collect(),
                    versions: c.history.clone(),
                }
            })
            .collect();
        Self {
            problem: m.problem.clone(),
            complete: m.is_complete(),
            submission_log: m.submission_log.clone(),
            cells,
        }
    }

    pub fn cell(&self, key: CellKey) -> &CellView {
        self.cells.iter().find(|c| c.key == key).expect("all cells present")
    }
}
