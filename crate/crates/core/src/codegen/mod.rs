//! Stepwise implementation: plan, per-step code versions, and their status.

mod lint;
mod plan;
mod prompt;
mod sanitize;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use lint::{has_errors, lint_code, CodeIssue, IssueKind, Severity};
pub use plan::{parse_plan, plan_request, PLAN_MAX_STEPS, PLAN_MIN_STEPS};
pub use prompt::{code_rules_text, iterate_request, step_request, StepContext, EXISTING_CODE_HEADER};
pub use sanitize::sanitize_code;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CodeRules {
    pub max_lines_prompted: usize,
    pub max_lines_enforced: usize,
    pub forbidden_component_names: Vec<String>,
    pub required_cdn_markers: Vec<String>,
}

impl Default for CodeRules {
    fn default() -> Self {
        Self {
            max_lines_prompted: 420,
            max_lines_enforced: 450,
            forbidden_component_names: [
                "Calendar",
                "DatePicker",
                "TimePicker",
                "SwipeableViews",
                "SwipeableViewsVirtualizer",
                "Fade",
                "MopbileStepper",
                "MobileStepper",
            ]
            .map(String::from)
            .to_vec(),
            required_cdn_markers: [
                "https://unpkg.com/react@18/umd/react.development.js",
                "https://unpkg.com/react-dom@18/umd/react-dom.development.js",
                "https://unpkg.com/@babel/standalone/babel.min.js",
                "https://unpkg.com/@mui/material@5.0.0-rc.1/umd/material-ui.development.js",
            ]
            .map(String::from)
            .to_vec(),
        }
    }
}

impl CodeRules {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.max_lines_prompted > self.max_lines_enforced {
            return Err(format!(
                "max_lines_prompted {} exceeds max_lines_enforced {}",
                self.max_lines_prompted, self.max_lines_enforced
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepStatus {
    Pending,
    Generated,
    Approved,
    Stale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Generated,
    Iterated,
    ManualEdit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeVersion {
    pub id: String,
    /// Kept out of the manifest on disk; each version has its own file.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub html: String,
    pub provenance: Provenance,
    pub parent: Option<String>,
    pub lint: Vec<CodeIssue>,
    pub created_at: DateTime<Utc>,
}

impl CodeVersion {
    pub fn new(id: String, html: String, provenance: Provenance, parent: Option<String>, rules: &CodeRules) -> Self {
        Self {
            lint: lint_code(&html, rules),
            id,
            html,
            provenance,
            parent,
            created_at: Utc::now(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanStep {
    pub index: usize,
    pub description: String,
    pub status: StepStatus,
    pub versions: Vec<CodeVersion>,
    pub current_version: Option<String>,
}

impl PlanStep {
    fn new(index: usize, description: String) -> Self {
        Self {
            index,
            description,
            status: StepStatus::Pending,
            versions: Vec::new(),
            current_version: None,
        }
    }

    pub fn version(&self, id: &str) -> Option<&CodeVersion> {
        self.versions.iter().find(|v| v.id == id)
    }

    pub fn current(&self) -> Option<&CodeVersion> {
        self.current_version.as_deref().and_then(|id| self.version(id))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plan {
    pub steps: Vec<PlanStep>,
    pub stale: bool,
}

impl Plan {
    pub fn from_descriptions(descriptions: Vec<String>) -> Self {
        Self {
            steps: descriptions
                .into_iter()
                .enumerate()
                .map(|(i, d)| PlanStep::new(i + 1, d))
                .collect(),
            stale: false,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn step(&self, index: usize) -> Result<&PlanStep> {
        index
            .checked_sub(1)
            .and_then(|i| self.steps.get(i))
            .ok_or(Error::IndexOutOfRange(index))
    }

    fn step_mut(&mut self, index: usize) -> Result<&mut PlanStep> {
        index
            .checked_sub(1)
            .and_then(|i| self.steps.get_mut(i))
            .ok_or(Error::IndexOutOfRange(index))
    }

    fn renumber(&mut self) {
        for (i, s) in self.steps.iter_mut().enumerate() {
            s.index = i + 1;
        }
    }

    /// Marks Generated/Approved steps with index > `index` Stale.
    fn stale_after(&mut self, index: usize) {
        for s in self.steps.iter_mut().skip(index) {
            if matches!(s.status, StepStatus::Generated | StepStatus::Approved) {
                s.status = StepStatus::Stale;
            }
        }
    }

    /// First step below `index` that is not Approved.
    pub fn first_unapproved_before(&self, index: usize) -> Option<usize> {
        self.steps
            .iter()
            .take(index.saturating_sub(1))
            .find(|s| s.status != StepStatus::Approved)
            .map(|s| s.index)
    }

    /// Inserts a step after `after_index` (0 inserts at the top).
    pub fn add_step(&mut self, after_index: usize, description: &str) -> Result<()> {
        if after_index > self.steps.len() {
            return Err(Error::IndexOutOfRange(after_index));
        }
        if description.trim().is_empty() {
            return Err(Error::EmptyContent);
        }
        self.steps
            .insert(after_index, PlanStep::new(after_index + 1, description.trim().to_string()));
        self.renumber();
        self.stale_after(after_index + 1);
        Ok(())
    }

    pub fn update_step(&mut self, index: usize, description: &str) -> Result<()> {
        if description.trim().is_empty() {
            return Err(Error::EmptyContent);
        }
        self.step_mut(index)?.description = description.trim().to_string();
        self.stale_after(index - 1);
        Ok(())
    }

    pub fn remove_step(&mut self, index: usize) -> Result<()> {
        let step = self.step(index)?;
        if step.status == StepStatus::Approved {
            return Err(Error::RemoveApprovedStep(index));
        }
        if self.steps.len() == 1 {
            return Err(Error::PlanWouldBeEmpty);
        }
        self.steps.remove(index - 1);
        self.renumber();
        self.stale_after(index - 1);
        Ok(())
    }

    /// Checks that `index` may be generated now.
    pub fn check_can_generate(&self, index: usize) -> Result<()> {
        let step = self.step(index)?;
        if let Some(j) = self.first_unapproved_before(index) {
            return Err(Error::PriorStepUnapproved(j));
        }
        if step.status == StepStatus::Approved {
            return Err(Error::StepAlreadyApproved(index));
        }
        Ok(())
    }

    /// Code the step builds on: the previous step's current version.
    pub fn previous_code(&self, index: usize) -> Option<&str> {
        if index < 2 {
            return None;
        }
        self.step(index - 1).ok()?.current().map(|v| v.html.as_str())
    }

    pub fn record_generated(&mut self, index: usize, version: CodeVersion) -> Result<&CodeVersion> {
        self.check_can_generate(index)?;
        let step = self.step_mut(index)?;
        step.current_version = Some(version.id.clone());
        step.status = StepStatus::Generated;
        step.versions.push(version);
        Ok(step.versions.last().expect("just pushed"))
    }

    /// Status bookkeeping after the current version of a step changes by
    /// iterate, manual edit, or selection.
    fn current_changed(&mut self, index: usize) {
        let lower_ok = self.first_unapproved_before(index).is_none();
        let step = &mut self.steps[index - 1];
        match step.status {
            StepStatus::Approved => {
                step.status = StepStatus::Generated;
                self.stale_after(index);
            }
            StepStatus::Stale | StepStatus::Pending if lower_ok => step.status = StepStatus::Generated,
            StepStatus::Pending => step.status = StepStatus::Stale,
            _ => {}
        }
    }

    /// Appends an iterated or hand-edited version whose parent is the
    /// current one.
    pub fn record_derived(&mut self, index: usize, version: CodeVersion) -> Result<&CodeVersion> {
        let step = self.step_mut(index)?;
        if step.current_version.is_none() {
            return Err(Error::NoCurrentVersion(index));
        }
        step.current_version = Some(version.id.clone());
        step.versions.push(version);
        self.current_changed(index);
        Ok(self.steps[index - 1].versions.last().expect("just pushed"))
    }

    pub fn approve(&mut self, index: usize) -> Result<()> {
        self.step(index)?;
        if let Some(j) = self.first_unapproved_before(index) {
            return Err(Error::PriorStepUnapproved(j));
        }
        let step = self.step_mut(index)?;
        if step.status != StepStatus::Generated || step.current().is_none() {
            return Err(Error::NotGenerated(index));
        }
        step.status = StepStatus::Approved;
        Ok(())
    }

    /// Makes `index` the working baseline: every later step that has been
    /// worked on becomes Stale, keeping its versions.
    pub fn revert_to(&mut self, index: usize) -> Result<()> {
        let highest = self
            .steps
            .iter()
            .rev()
            .find(|s| !s.versions.is_empty())
            .map_or(0, |s| s.index);
        if index == 0 || index > highest {
            return Err(Error::IndexOutOfRange(index));
        }
        if self.step(index)?.current().is_none() {
            return Err(Error::NoCurrentVersion(index));
        }
        for s in self.steps.iter_mut().skip(index) {
            if s.status != StepStatus::Pending {
                s.status = StepStatus::Stale;
            }
        }
        Ok(())
    }

    pub fn select_version(&mut self, index: usize, version_id: &str) -> Result<()> {
        let step = self.step_mut(index)?;
        if step.version(version_id).is_none() {
            return Err(Error::UnknownVersion(version_id.to_string()));
        }
        if step.current_version.as_deref() == Some(version_id) {
            return Ok(());
        }
        step.current_version = Some(version_id.to_string());
        self.current_changed(index);
        Ok(())
    }

    /// Highest step whose status is Approved and that has a current version.
    pub fn highest_approved(&self) -> Option<&PlanStep> {
        self.steps
            .iter()
            .rev()
            .find(|s| s.status == StepStatus::Approved && s.current().is_some())
    }

    /// Highest step with any version.
    pub fn highest_with_version(&self) -> Option<&PlanStep> {
        self.steps.iter().rev().find(|s| s.current().is_some())
    }

    pub fn all_versions(&self) -> impl Iterator<Item = (&PlanStep, &CodeVersion)> {
        self.steps
            .iter()
            .flat_map(|s| s.versions.iter().map(move |v| (s, v)))
    }
}
