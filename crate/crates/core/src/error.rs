use thiserror::Error;

use crate::gateway::{GatewayError, TemplateError};
use crate::matrix::CellKey;
use crate::scoping::Requirement;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad class of a failure, used by the HTTP layer to pick a status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    NotFound,
    Conflict,
    Unprocessable,
    Upstream,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("problem statement is empty")]
    EmptyProblem,
    #[error("content is empty")]
    EmptyContent,
    #[error("feedback is empty")]
    EmptyFeedback,
    #[error("project name is empty")]
    EmptyName,
    #[error("{0} requires the dimension's idea to be submitted first")]
    PreconditionOrder(CellKey),
    #[error("no snapshot {0}")]
    UnknownSnapshot(String),
    #[error("cell has nothing to save")]
    NothingToSave,
    #[error("could not parse {what} from model output")]
    ParseFailure { what: String, raw: String },
    #[error("design matrix is incomplete")]
    MatrixIncomplete,
    #[error("unknown requirement {0:?}")]
    UnknownRequirement(String),
    #[error("spec shape: {0}")]
    SpecShape(String),
    #[error("no spec")]
    SpecMissing,
    #[error("requirement {0:?} is not selected")]
    RequirementMissing(Requirement),
    #[error("placeholder data has {0} items, expected 10 to 20")]
    LengthOutOfRange(usize),
    #[error("plan has {0} steps, expected 3 to 6")]
    StepCountOutOfRange(usize),
    #[error("no plan")]
    NoPlan,
    #[error("step index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("step {0} is approved and cannot be removed")]
    RemoveApprovedStep(usize),
    #[error("a plan must keep at least one step")]
    PlanWouldBeEmpty,
    #[error("step {0} is not approved")]
    PriorStepUnapproved(usize),
    #[error("step {0} is approved; revert or select another version first")]
    StepAlreadyApproved(usize),
    #[error("step {0} has no generated code")]
    NotGenerated(usize),
    #[error("step {0} has no current version")]
    NoCurrentVersion(usize),
    #[error("no version {0}")]
    UnknownVersion(String),
    #[error("no html document found in model output")]
    SanitizeFailure,
    #[error("a project named {0:?} already exists")]
    DuplicateName(String),
    #[error("no project {0}")]
    UnknownProject(String),
    #[error("nothing to export")]
    NothingToExport,
    #[error("storage: {0}")]
    Storage(String),
    #[error("a generation is already running for this project")]
    Busy,
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error(transparent)]
    Template(#[from] TemplateError),
}

impl Error {
    pub(crate) fn parse(what: impl Into<String>, raw: impl Into<String>) -> Self {
        Error::ParseFailure {
            what: what.into(),
            raw: raw.into(),
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyProblem => "empty_problem",
            Error::EmptyContent => "empty_content",
            Error::EmptyFeedback => "empty_feedback",
            Error::EmptyName => "empty_name",
            Error::PreconditionOrder(_) => "precondition_order",
            Error::UnknownSnapshot(_) => "unknown_snapshot",
            Error::NothingToSave => "nothing_to_save",
            Error::ParseFailure { .. } => "parse_failure",
            Error::MatrixIncomplete => "matrix_incomplete",
            Error::UnknownRequirement(_) => "unknown_requirement",
            Error::SpecShape(_) => "spec_shape",
            Error::SpecMissing => "spec_missing",
            Error::RequirementMissing(_) => "requirement_missing",
            Error::LengthOutOfRange(_) => "length_out_of_range",
            Error::StepCountOutOfRange(_) => "step_count_out_of_range",
            Error::NoPlan => "no_plan",
            Error::IndexOutOfRange(_) => "index_out_of_range",
            Error::RemoveApprovedStep(_) => "remove_approved_step",
            Error::PlanWouldBeEmpty => "plan_would_be_empty",
            Error::PriorStepUnapproved(_) => "prior_step_unapproved",
            Error::StepAlreadyApproved(_) => "step_already_approved",
            Error::NotGenerated(_) => "not_generated",
            Error::NoCurrentVersion(_) => "no_current_version",
            Error::UnknownVersion(_) => "unknown_version",
            Error::SanitizeFailure => "sanitize_failure",
            Error::DuplicateName(_) => "duplicate_name",
            Error::UnknownProject(_) => "unknown_project",
            Error::NothingToExport => "nothing_to_export",
            Error::Storage(_) => "storage_error",
            Error::Busy => "busy",
            Error::Gateway(g) => match g {
                GatewayError::Provider { .. } => "provider_error",
                GatewayError::Timeout(_) => "timeout",
                GatewayError::ReplayMiss(_) => "replay_miss",
                GatewayError::BudgetExceeded { .. } => "budget_exceeded",
                GatewayError::InvalidRequest(_) => "invalid_request",
                GatewayError::Config(_) => "gateway_config",
                GatewayError::Transcript(_) => "transcript_error",
            },
            Error::Template(TemplateError::MissingPlaceholder(_)) => "missing_placeholder",
            Error::Template(TemplateError::UnknownPlaceholder(_)) => "unknown_placeholder",
        }
    }

    pub fn class(&self) -> ErrorClass {
        use ErrorClass::*;
        match self {
            Error::EmptyProblem
            | Error::EmptyContent
            | Error::EmptyFeedback
            | Error::EmptyName
            | Error::UnknownRequirement(_)
            | Error::IndexOutOfRange(_) => Validation,
            Error::UnknownSnapshot(_)
            | Error::UnknownVersion(_)
            | Error::UnknownProject(_)
            | Error::NothingToExport
            | Error::NoPlan
            | Error::SpecMissing => NotFound,
            Error::PreconditionOrder(_)
            | Error::NothingToSave
            | Error::MatrixIncomplete
            | Error::RequirementMissing(_)
            | Error::RemoveApprovedStep(_)
            | Error::PlanWouldBeEmpty
            | Error::PriorStepUnapproved(_)
            | Error::StepAlreadyApproved(_)
            | Error::NotGenerated(_)
            | Error::NoCurrentVersion(_)
            | Error::DuplicateName(_)
            | Error::Busy => Conflict,
            Error::ParseFailure { .. }
            | Error::SpecShape(_)
            | Error::LengthOutOfRange(_)
            | Error::StepCountOutOfRange(_)
            | Error::SanitizeFailure => Unprocessable,
            Error::Gateway(GatewayError::BudgetExceeded { .. }) => Conflict,
            Error::Gateway(GatewayError::InvalidRequest(_)) => Validation,
            Error::Gateway(GatewayError::Config(_) | GatewayError::Transcript(_)) => Internal,
            Error::Gateway(_) => Upstream,
            Error::Template(_) | Error::Storage(_) => Internal,
        }
    }

    /// Extra structured detail for API consumers.
    pub fn detail(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Error::PreconditionOrder(k) => json!({ "target": k }),
            Error::ParseFailure { what, raw } => json!({ "what": what, "raw": raw }),
            Error::LengthOutOfRange(n) | Error::StepCountOutOfRange(n) => json!({ "count": n }),
            Error::IndexOutOfRange(i)
            | Error::RemoveApprovedStep(i)
            | Error::PriorStepUnapproved(i)
            | Error::StepAlreadyApproved(i)
            | Error::NotGenerated(i)
            | Error::NoCurrentVersion(i) => json!({ "index": i }),
            Error::Gateway(GatewayError::ReplayMiss(d)) => json!({ "digest": d }),
            Error::Gateway(GatewayError::Provider { status, body }) => {
                json!({ "status": status, "body": body })
            }
            _ => serde_json::Value::Null,
        }
    }
}
