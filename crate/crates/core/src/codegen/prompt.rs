use super::CodeRules;
use crate::error::Result;
use crate::gateway::{bindings, ModelRole, PromptRequest, PromptTemplate};
use crate::prompts::endpoints::{proxy_rewrite, SelfInvokeMode, DATA_URL, KEY_PLACEHOLDER};
use crate::prompts::fewshot::{
    APP_SKELETON, CHART_LIBRARY_EXAMPLE, CODE_RULES_CDN, CODE_RULES_PREAMBLE, CODE_RULES_RETENTION,
    DEBUG_SYSTEM, DEBUG_USER, DIAGRAM_LIBRARY_EXAMPLE, SELF_INVOKE_IMAGE_EXAMPLE,
    SELF_INVOKE_TEXT_EXAMPLE,
};
use crate::scoping::{PlaceholderData, Requirement, RequirementSet};

/// Marks the block holding the previous step's code in a step prompt.
pub const EXISTING_CODE_HEADER: &str = "There is already existing code in the index.html file:";

/// The code rules as they appear in every code-producing prompt, with the
/// configured line limits and forbidden component list.
pub fn code_rules_text(rules: &CodeRules) -> String {
    let forbidden = rules.forbidden_component_names.join(", ");
    format!(
        "{CODE_RULES_PREAMBLE}\n{APP_SKELETON}\n{CODE_RULES_RETENTION}\n\
         - The entire file should be less than {p} lines of code. MUST BE LESS THAN {p} LINES OF CODE. Files longer than {e} lines are rejected.\n\
         {CODE_RULES_CDN}\n\
         - DO NOT USE THESE MUI COMPONENTS: {forbidden} as they do not exist.",
        p = rules.max_lines_prompted,
        e = rules.max_lines_enforced,
    )
}

/// Inputs shared by the step and iterate prompts.
#[derive(Debug, Clone, Copy)]
pub struct StepContext<'a> {
    pub rules: &'a CodeRules,
    pub spec: &'a str,
    pub task: &'a str,
    pub requirements: Option<&'a RequirementSet>,
    pub data: Option<&'a PlaceholderData>,
    pub self_invoke: SelfInvokeMode,
}

fn snippet(text: &str, mode: SelfInvokeMode) -> String {
    match mode {
        SelfInvokeMode::Proxy => proxy_rewrite(text),
        SelfInvokeMode::InjectKey => text.to_string(),
    }
}

fn resources(ctx: &StepContext<'_>) -> String {
    let has = |r| ctx.requirements.is_some_and(|s| s.contains(r));
    let mut parts = Vec::new();
    if has(Requirement::PregeneratedData) {
        let sample = ctx.data.map_or("(not generated yet)", |d| d.raw_text.as_str());
        parts.push(format!(
            "The placeholder data is served as a JSON array at {DATA_URL}. Read it in with fetch('{DATA_URL}') when the app starts; do not copy it into the code. This is the data:\n```json\n{sample}\n```"
        ));
    }
    let access = match ctx.self_invoke {
        SelfInvokeMode::Proxy => "These calls go through a proxy that adds the credentials, so do not send an Authorization header.".to_string(),
        SelfInvokeMode::InjectKey => format!("Write the API key exactly as {KEY_PLACEHOLDER}."),
    };
    if has(Requirement::TextModelToolCalling) {
        parts.push(format!(
            "The app can call GPT while it runs. {access} Follow this example:\n```javascript\n{}\n```",
            snippet(SELF_INVOKE_TEXT_EXAMPLE, ctx.self_invoke)
        ));
    }
    if has(Requirement::ImageGeneration) {
        parts.push(format!(
            "The app can generate images while it runs. {access} Follow this example:\n```\n{}\n```",
            snippet(SELF_INVOKE_IMAGE_EXAMPLE, ctx.self_invoke)
        ));
    }
    if has(Requirement::ChartLibrary) {
        parts.push(CHART_LIBRARY_EXAMPLE.to_string());
    }
    if has(Requirement::DiagramLibrary) {
        parts.push(DIAGRAM_LIBRARY_EXAMPLE.to_string());
    }
    parts.iter().map(|p| format!("{p}\n\n")).collect()
}

const STEP_SYSTEM: &str = "You implement one step of a web application prototype at a time.\n\n{code_rules}";

const STEP_USER: &str = "This is the project description:
{spec}

{resources}The task for this step is: {task}

{existing}

Return the FULL CODE NEEDED TO HAVE THE APP WORK, INSIDE THE INDEX.HTML file, in a single ```html code block.";

pub fn step_request(ctx: &StepContext<'_>, previous_code: Option<&str>) -> Result<PromptRequest> {
    let existing = match previous_code {
        Some(code) => format!(
            "{EXISTING_CODE_HEADER}\n```html\n{}\n```\nKeep all of it and only add to it.",
            code.trim_end()
        ),
        None => "There is no existing code yet. Start index.html from the example document.".into(),
    };
    let t = PromptTemplate::new("step_code", ModelRole::Codegen, STEP_SYSTEM, STEP_USER);
    Ok(t.render(&bindings([
        ("code_rules", code_rules_text(ctx.rules)),
        ("spec", ctx.spec.to_string()),
        ("resources", resources(ctx)),
        ("task", ctx.task.to_string()),
        ("existing", existing),
    ]))?)
}

/// Bug-fix prompt for a step's current code.
pub fn iterate_request(ctx: &StepContext<'_>, current_code: &str, problem: &str) -> Result<PromptRequest> {
    let system = format!("{DEBUG_SYSTEM}\n\n{{resources}}{{code_rules}}");
    let t = PromptTemplate::new("iterate_step", ModelRole::Codegen, system, DEBUG_USER);
    Ok(t.render(&bindings([
        ("spec", ctx.spec.to_string()),
        ("task", ctx.task.to_string()),
        ("faked_data", ctx.data.map_or("(none)", |d| d.raw_text.as_str()).to_string()),
        ("problem", problem.to_string()),
        ("task_code", current_code.to_string()),
        ("resources", resources(ctx)),
        ("code_rules", code_rules_text(ctx.rules)),
    ]))?)
}
