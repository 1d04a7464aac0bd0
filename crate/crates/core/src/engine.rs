//! Model-backed operations on a project.

use std::sync::Arc;

use crate::codegen::{
    iterate_request, parse_plan, plan_request, sanitize_code, step_request, CodeRules, CodeVersion, Plan,
    Provenance, StepContext,
};
use crate::error::{Error, Result};
use crate::gateway::{Gateway, PromptRequest};
use crate::markdown::fenced_blocks;
use crate::matrix::{parse_candidates, CellKey, IdeationInput};
use crate::project::Project;
use crate::prompts::endpoints::SelfInvokeMode;
use crate::scoping::{
    data_request, parse_requirements, parse_spec_sections, requirements_request, spec_request,
    PlaceholderData, Requirement, RequirementSet, RequirementSource, SpecDoc,
};

pub const DEFAULT_BRAINSTORM_COUNT: usize = 3;

pub struct Engine {
    gateway: Arc<Gateway>,
    rules: CodeRules,
    self_invoke: SelfInvokeMode,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine")
            .field("gateway", &self.gateway)
            .field("rules", &self.rules)
            .field("self_invoke", &self.self_invoke)
            .finish()
    }
}

impl Engine {
    pub fn new(gateway: Arc<Gateway>, rules: CodeRules, self_invoke: SelfInvokeMode) -> Self {
        Self { gateway, rules, self_invoke }
    }

    pub fn gateway(&self) -> &Gateway {
        &self.gateway
    }

    pub fn rules(&self) -> &CodeRules {
        &self.rules
    }

    pub fn self_invoke(&self) -> SelfInvokeMode {
        self.self_invoke
    }

    fn complete(&self, project: &Project, req: &PromptRequest) -> Result<String> {
        Ok(self.gateway.complete(&project.id, req)?.text)
    }

    fn ideate(
        &self,
        project: &mut Project,
        target: CellKey,
        count: usize,
        feedback: Option<&str>,
    ) -> Result<Vec<String>> {
        project.matrix.check_order(target)?;
        let count = count.max(1);
        let context = project.matrix.context_for(target);
        let existing = project.matrix.cell(target).candidates.clone();
        let req = IdeationInput {
            problem: &project.matrix.problem,
            target,
            context: &context,
            existing: &existing,
            count,
            feedback,
        }
        .render()?;
        let text = self.complete(project, &req)?;
        let new = parse_candidates(&text, target.level, count)?;
        project.matrix.append_candidates(target, new.clone());
        Ok(new)
    }

    /// Appends `count` new candidates to a cell.
    pub fn brainstorm(&self, project: &mut Project, target: CellKey, count: usize) -> Result<Vec<String>> {
        self.ideate(project, target, count, None)
    }

    pub fn iterate_candidates(
        &self,
        project: &mut Project,
        target: CellKey,
        feedback: &str,
        count: usize,
    ) -> Result<Vec<String>> {
        if feedback.trim().is_empty() {
            return Err(Error::EmptyFeedback);
        }
        self.ideate(project, target, count, Some(feedback.trim()))
    }

    pub fn identify_requirements<'p>(&self, project: &'p mut Project) -> Result<&'p RequirementSet> {
        let req = requirements_request(&project.matrix)?;
        let text = self.complete(project, &req)?;
        let selected = parse_requirements(&text)?;
        project.requirements = Some(RequirementSet {
            selected,
            source: RequirementSource::ModelSuggested,
        });
        Ok(project.requirements.as_ref().expect("just set"))
    }

    pub fn generate_spec<'p>(&self, project: &'p mut Project) -> Result<&'p SpecDoc> {
        let reqs = project.requirements.clone().unwrap_or(RequirementSet {
            selected: Default::default(),
            source: RequirementSource::ModelSuggested,
        });
        let req = spec_request(&project.matrix, &reqs)?;
        let text = self.complete(project, &req)?;
        let mut spec = spec_from_completion(&text)?;
        if reqs.contains(Requirement::PregeneratedData) {
            spec.ensure_data_directive();
        }
        project.replace_spec(spec);
        Ok(project.spec.as_ref().expect("just set"))
    }

    /// Generates 10 to 20 placeholder items, asking once more if the first
    /// answer has the wrong length.
    pub fn generate_data<'p>(&self, project: &'p mut Project) -> Result<&'p PlaceholderData> {
        if !project
            .requirements
            .as_ref()
            .is_some_and(|r| r.contains(Requirement::PregeneratedData))
        {
            return Err(Error::RequirementMissing(Requirement::PregeneratedData));
        }
        let req = data_request(&project.matrix, &project.spec()?.body)?;
        let mut data = PlaceholderData::from_completion(&self.complete(project, &req)?)?;
        if data.length_warning {
            tracing::info!(items = data.len(), "placeholder data out of range, regenerating");
            data = PlaceholderData::from_completion(&self.complete(project, &req)?)?;
            if data.length_warning {
                return Err(Error::LengthOutOfRange(data.len()));
            }
        }
        project.data = Some(data);
        Ok(project.data.as_ref().expect("just set"))
    }

    pub fn generate_plan<'p>(&self, project: &'p mut Project) -> Result<&'p Plan> {
        let req = plan_request(&project.spec()?.body, project.requirements.as_ref())?;
        let text = self.complete(project, &req)?;
        let plan = Plan::from_descriptions(parse_plan(&text)?);
        if let Some(old) = project.plan.replace(plan) {
            project.plan_history.push(old);
        }
        Ok(project.plan.as_ref().expect("just set"))
    }

    fn step_context<'p>(&'p self, project: &'p Project, task: &'p str) -> Result<StepContext<'p>> {
        Ok(StepContext {
            rules: &self.rules,
            spec: &project.spec()?.body,
            task,
            requirements: project.requirements.as_ref(),
            data: project.data.as_ref(),
            self_invoke: self.self_invoke,
        })
    }

    pub fn generate_step_code(&self, project: &mut Project, index: usize) -> Result<CodeVersion> {
        let plan = project.plan()?;
        plan.check_can_generate(index)?;
        let task = plan.step(index)?.description.clone();
        let previous = plan.previous_code(index).map(str::to_string);
        let req = step_request(&self.step_context(project, &task)?, previous.as_deref())?;
        let html = sanitize_code(&self.complete(project, &req)?)?;
        let id = project.mint_version_id();
        let version = CodeVersion::new(id, html, Provenance::Generated, None, &self.rules);
        Ok(project.plan_mut()?.record_generated(index, version)?.clone())
    }

    pub fn iterate_step(&self, project: &mut Project, index: usize, problem: &str) -> Result<CodeVersion> {
        if problem.trim().is_empty() {
            return Err(Error::EmptyProblem);
        }
        let step = project.plan()?.step(index)?;
        let current = step.current().ok_or(Error::NoCurrentVersion(index))?;
        let (parent, code, task) = (current.id.clone(), current.html.clone(), step.description.clone());
        let req = iterate_request(&self.step_context(project, &task)?, &code, problem.trim())?;
        let html = sanitize_code(&self.complete(project, &req)?)?;
        let id = project.mint_version_id();
        let version = CodeVersion::new(id, html, Provenance::Iterated, Some(parent), &self.rules);
        Ok(project.plan_mut()?.record_derived(index, version)?.clone())
    }

    pub fn save_manual_edit(&self, project: &mut Project, index: usize, html: &str) -> Result<CodeVersion> {
        let step = project.plan()?.step(index)?;
        let parent = step.current_version.clone().ok_or(Error::NoCurrentVersion(index))?;
        let html = sanitize_code(html)?;
        let id = project.mint_version_id();
        let version = CodeVersion::new(id, html, Provenance::ManualEdit, Some(parent), &self.rules);
        Ok(project.plan_mut()?.record_derived(index, version)?.clone())
    }
}

/// The spec text from a completion: a fenced block holding the sections if
/// there is one, trimmed to start at the first section header.
fn spec_from_completion(text: &str) -> Result<SpecDoc> {
    let source = fenced_blocks(text)
        .into_iter()
        .map(|b| b.body)
        .find(|body| parse_spec_sections(body).is_ok())
        .unwrap_or(text);
    let sections = parse_spec_sections(source)?;
    let body = format!("{}\n", source[sections[0].start..].trim_end());
    SpecDoc::parse(&body, false)
}
