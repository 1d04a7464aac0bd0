use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::codegen::{Plan, StepStatus};
use crate::error::{Error, Result};
use crate::matrix::MatrixState;
use crate::scoping::{PlaceholderData, RequirementSet, SpecDoc};

/// One prototype and everything derived for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Project {
    pub id: String,
    pub name: String,
    pub matrix: MatrixState,
    pub requirements: Option<RequirementSet>,
    pub spec: Option<SpecDoc>,
    pub spec_history: Vec<SpecDoc>,
    pub data: Option<PlaceholderData>,
    pub plan: Option<Plan>,
    pub plan_history: Vec<Plan>,
    /// Next number used for a code version id (`v1`, `v2`, ...).
    pub next_version: u64,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectSummary {
    pub id: String,
    pub name: String,
    pub matrix_complete: bool,
    pub steps: usize,
    pub approved_steps: usize,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

pub(crate) fn check_name(name: &str) -> Result<String> {
    let name = name.trim();
    if name.is_empty() {
        return Err(Error::EmptyName);
    }
    Ok(name.to_string())
}

impl Project {
    pub fn new(id: String, name: &str) -> Result<Self> {
        let now = Utc::now();
        Ok(Self {
            id,
            name: check_name(name)?,
            matrix: MatrixState::default(),
            requirements: None,
            spec: None,
            spec_history: Vec::new(),
            data: None,
            plan: None,
            plan_history: Vec::new(),
            next_version: 1,
            created_at: now,
            updated_at: now,
        })
    }

    pub fn touch(&mut self) {
        self.updated_at = Utc::now().max(self.created_at);
    }

    pub fn mint_version_id(&mut self) -> String {
        let id = format!("v{}", self.next_version);
        self.next_version += 1;
        id
    }

    pub fn plan(&self) -> Result<&Plan> {
        self.plan.as_ref().ok_or(Error::NoPlan)
    }

    pub fn plan_mut(&mut self) -> Result<&mut Plan> {
        self.plan.as_mut().ok_or(Error::NoPlan)
    }

    pub fn spec(&self) -> Result<&SpecDoc> {
        self.spec.as_ref().ok_or(Error::SpecMissing)
    }

    pub fn summary(&self) -> ProjectSummary {
        let (steps, approved_steps) = self.plan.as_ref().map_or((0, 0), |p| {
            (
                p.len(),
                p.steps.iter().filter(|s| s.status == StepStatus::Approved).count(),
            )
        });
        ProjectSummary {
            id: self.id.clone(),
            name: self.name.clone(),
            matrix_complete: self.matrix.is_complete(),
            steps,
            approved_steps,
            created_at: self.created_at,
            updated_at: self.updated_at,
        }
    }

    /// Replaces the spec, keeping the previous one in history and marking
    /// any plan stale.
    pub(crate) fn replace_spec(&mut self, spec: SpecDoc) {
        if let Some(old) = self.spec.replace(spec) {
            self.spec_history.push(old);
        }
        if let Some(plan) = self.plan.as_mut() {
            plan.stale = true;
        }
    }

    pub fn edit_spec(&mut self, body: &str) -> Result<&SpecDoc> {
        let spec = SpecDoc::parse(body, true)?;
        self.replace_spec(spec);
        Ok(self.spec.as_ref().expect("just set"))
    }

    pub fn set_requirements<S: AsRef<str>>(&mut self, names: &[S]) -> Result<&RequirementSet> {
        self.requirements = Some(RequirementSet::user_edited(names)?);
        Ok(self.requirements.as_ref().expect("just set"))
    }

    pub fn edit_data(&mut self, raw_text: &str) -> Result<&PlaceholderData> {
        self.data = Some(PlaceholderData::from_user_text(raw_text)?);
        Ok(self.data.as_ref().expect("just set"))
    }

    /// Copy of the design matrix under a new identity; derived artifacts are
    /// left for the variation to regenerate.
    pub fn clone_as(&self, id: String, name: &str) -> Result<Project> {
        let mut p = Project::new(id, name)?;
        p.matrix = self.matrix.clone();
        Ok(p)
    }

    /// True if any code version exists.
    pub fn has_code(&self) -> bool {
        self.plan
            .as_ref()
            .is_some_and(|p| p.steps.iter().any(|s| !s.versions.is_empty()))
    }
}
