use std::sync::LazyLock;

use regex::Regex;

use crate::error::{Error, Result};
use crate::gateway::{bindings, ModelRole, PromptRequest, PromptTemplate};
use crate::prompts::fewshot::PLAN_EXAMPLE;
use crate::scoping::{Requirement, RequirementSet};

pub const PLAN_MIN_STEPS: usize = 3;
pub const PLAN_MAX_STEPS: usize = 6;

static NUMBERED: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\s*(\d+)\s*[.)]\s+(.*\S)\s*$").unwrap());

/// Reads a numbered list (`1.` or `1)`) into step descriptions. Lines that
/// are not numbered are ignored; numbering must run 1, 2, 3, ...
pub fn parse_plan(text: &str) -> Result<Vec<String>> {
    let mut steps = Vec::new();
    for line in text.lines() {
        let line = line.replace("**", "");
        let Some(cap) = NUMBERED.captures(&line) else { continue };
        let n: usize = cap[1].parse().map_err(|_| Error::parse("numbered plan", text))?;
        if n != steps.len() + 1 {
            return Err(Error::parse("numbered plan", text));
        }
        steps.push(cap[2].trim().to_string());
    }
    if steps.is_empty() {
        return Err(Error::parse("numbered plan", text));
    }
    if !(PLAN_MIN_STEPS..=PLAN_MAX_STEPS).contains(&steps.len()) {
        return Err(Error::StepCountOutOfRange(steps.len()));
    }
    Ok(steps)
}

const SYSTEM: &str = "You break a project spec into an implementation plan for a single-file React and MUI web app. Each step is the next-smallest testable unit that builds on the code of the previous step, and steps do not overlap.

Here is an example spec and its plan:

{example}

Rules:
{rules}";

const USER: &str = "Spec
{spec}

Plan";

pub fn plan_request(spec_body: &str, requirements: Option<&RequirementSet>) -> Result<PromptRequest> {
    let mut rules = vec![
        "Return a numbered list of 3 to 6 steps, one step per line, in the form \"1. ...\", and nothing else.".to_string(),
        "Step 1 sets up the application and creates the main layout.".to_string(),
    ];
    let has = |r| requirements.is_some_and(|s| s.contains(r));
    if has(Requirement::PregeneratedData) {
        rules.push("The placeholder data already exists and is served from a data endpoint. Step 1 reads it in from the endpoint; no step creates it.".into());
    }
    if has(Requirement::TextModelToolCalling) {
        rules.push("Features that need generated text call GPT from the app.".into());
    }
    if has(Requirement::ImageGeneration) {
        rules.push("Images are generated by calling the image model from the app.".into());
    }
    let rules = rules.iter().map(|r| format!("- {r}")).collect::<Vec<_>>().join("\n");
    let t = PromptTemplate::new("plan", ModelRole::Codegen, SYSTEM, USER);
    Ok(t.render(&bindings([
        ("example", PLAN_EXAMPLE.to_string()),
        ("rules", rules),
        ("spec", spec_body.to_string()),
    ]))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_plan_parses() {
        let plan_text = PLAN_EXAMPLE.split("\nPlan\n").nth(1).unwrap();
        let steps = parse_plan(plan_text).unwrap();
        assert_eq!(steps.len(), 5);
        assert!(steps[0].starts_with("Set up the React application and create the main layout with the three sections: 'Outfit Recommendations', 'Wardrobe', and 'Saved Outfits'."));
    }

    #[test]
    fn accepts_parens_bold_and_prose() {
        let text = "Here is the plan:\n**1)** First\n2) Second\n  detail line\n3. **Third**\nGood luck";
        assert_eq!(parse_plan(text).unwrap(), ["First", "Second", "Third"]);
    }

    #[test]
    fn rejects_bad_counts_and_numbering() {
        assert_eq!(parse_plan("1. a\n2. b"), Err(Error::StepCountOutOfRange(2)));
        assert_eq!(
            parse_plan(&(1..=7).map(|i| format!("{i}. s")).collect::<Vec<_>>().join("\n")),
            Err(Error::StepCountOutOfRange(7))
        );
        assert!(matches!(parse_plan("1. a\n3. b\n4. c"), Err(Error::ParseFailure { .. })));
        let Err(Error::ParseFailure { raw, .. }) = parse_plan("- a\n- b") else { panic!() };
        assert_eq!(raw, "- a\n- b");
    }

    #[test]
    fn data_note_follows_requirements() {
        use crate::scoping::RequirementSource;
        use std::collections::BTreeSet;
        let with = RequirementSet {
            selected: BTreeSet::from([Requirement::PregeneratedData]),
            source: RequirementSource::UserEdited,
        };
        assert!(plan_request("s", Some(&with)).unwrap().rendered_system.contains("data endpoint"));
        assert!(!plan_request("s", None).unwrap().rendered_system.contains("data endpoint"));
    }
}
