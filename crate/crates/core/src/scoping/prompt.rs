use super::{Requirement, RequirementSet};
use crate::error::{Error, Result};
use crate::gateway::{bindings, ModelRole, PromptRequest, PromptTemplate};
use crate::matrix::{CellKey, Dimension, MatrixState};
use crate::prompts::fewshot::{DATA_PROMPT, SPEC_EXAMPLES};

const REQUIREMENTS_SYSTEM: &str = "You identify the technical requirements of a single-page web application prototype from its design matrix. Choose only from this list:
{vocabulary}

Return a JSON array containing the names of the requirements the application needs, for example [\"image_generation\"], and nothing else. Return [] if none of them is needed.";

const SPEC_SYSTEM: &str = "You write the project spec for a single-page web application prototype built from a design matrix. The spec is about one page long and has exactly three sections, in this order, each introduced by its header on its own line:
Application Layout:
User Interactions:
Inputs and Logic:
Each section is a list of bullet points starting with \"- \".

Here are example specs:

{examples}

{notes}";

const SPEC_USER: &str = "{matrix}

Technical requirements:
{requirements}

Write the spec.";

/// The matrix as a labeled listing, as the scoping prompts see it.
pub fn matrix_summary(matrix: &MatrixState) -> String {
    let mut out = format!("Problem: {}\n", matrix.problem);
    for dim in Dimension::ALL {
        for key in [CellKey::idea(dim), CellKey::grounding(dim)] {
            let text = matrix.current(key).unwrap_or("(not submitted)");
            out.push_str(&format!("{} ({}):\n{}\n", key.label(), describe(key), text));
        }
    }
    out.trim_end().to_string()
}

fn describe(key: CellKey) -> &'static str {
    match key.dimension {
        Dimension::Person => "who the application is for",
        Dimension::Approach => "how the application addresses the problem",
        Dimension::Interaction => "how the user interacts with the application",
    }
}

fn require_complete(matrix: &MatrixState) -> Result<()> {
    if matrix.is_complete() {
        Ok(())
    } else {
        Err(Error::MatrixIncomplete)
    }
}

pub fn requirements_request(matrix: &MatrixState) -> Result<PromptRequest> {
    require_complete(matrix)?;
    let vocabulary = Requirement::ALL
        .iter()
        .map(|r| format!("- {}: {}", r.name(), r.description()))
        .collect::<Vec<_>>()
        .join("\n");
    let t = PromptTemplate::new("requirements", ModelRole::Ideation, REQUIREMENTS_SYSTEM, "{matrix}");
    Ok(t.render(&bindings([("vocabulary", vocabulary), ("matrix", matrix_summary(matrix))]))?)
}

fn spec_notes(reqs: &RequirementSet) -> String {
    let mut notes = vec![
        "Return only the spec.".to_string(),
        "The app is a single page with no routes.".to_string(),
    ];
    if reqs.contains(Requirement::PregeneratedData) {
        notes.push("Data for the app is pre-generated. End the Inputs and Logic section with a bullet starting \"Create placeholder data for\" that names what data to create.".into());
    } else {
        notes.push("No placeholder data will be created for this app.".into());
    }
    if reqs.contains(Requirement::TextModelToolCalling) {
        notes.push("Logic that needs generated text or recommendations is implemented by calling GPT.".into());
    }
    if reqs.contains(Requirement::ImageGeneration) {
        notes.push("Images are generated at runtime with an image model.".into());
    }
    if reqs.contains(Requirement::ChartLibrary) {
        notes.push("Charts are drawn with Chart.js.".into());
    }
    if reqs.contains(Requirement::DiagramLibrary) {
        notes.push("Diagrams are drawn with GoJS.".into());
    }
    format!(
        "Rules:\n{}",
        notes.iter().map(|n| format!("- {n}")).collect::<Vec<_>>().join("\n")
    )
}

pub fn spec_request(matrix: &MatrixState, reqs: &RequirementSet) -> Result<PromptRequest> {
    require_complete(matrix)?;
    let examples = SPEC_EXAMPLES
        .iter()
        .map(|(name, body)| format!("Example: {name}\n{body}"))
        .collect::<Vec<_>>()
        .join("\n\n");
    let requirements = if reqs.selected.is_empty() {
        "(none)".to_string()
    } else {
        reqs.selected
            .iter()
            .map(|r| format!("- {}", r.label()))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let t = PromptTemplate::new("spec", ModelRole::Ideation, SPEC_SYSTEM, SPEC_USER);
    Ok(t.render(&bindings([
        ("examples", examples),
        ("notes", spec_notes(reqs)),
        ("matrix", matrix_summary(matrix)),
        ("requirements", requirements),
    ]))?)
}

pub fn data_request(matrix: &MatrixState, spec_body: &str) -> Result<PromptRequest> {
    let person = CellKey::idea(Dimension::Person);
    let grounding = CellKey::grounding(Dimension::Person);
    let t = PromptTemplate::new("placeholder_data", ModelRole::Ideation, DATA_PROMPT, "{spec}");
    Ok(t.render(&bindings([
        ("person_idea", matrix.current(person).unwrap_or_default().to_string()),
        ("person_grounding", matrix.current(grounding).unwrap_or_default().to_string()),
        ("spec", spec_body.to_string()),
    ]))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn complete() -> MatrixState {
        let mut m = MatrixState::default();
        m.submit_problem("learn Chinese").unwrap();
        for d in Dimension::ALL {
            m.submit_cell(CellKey::idea(d), &format!("{} idea", d.title())).unwrap();
            m.submit_cell(CellKey::grounding(d), "- a\n- b\n- c").unwrap();
        }
        m
    }

    #[test]
    fn incomplete_matrix_is_rejected() {
        assert_eq!(requirements_request(&MatrixState::default()), Err(Error::MatrixIncomplete));
    }

    #[test]
    fn requirements_prompt_lists_vocabulary_and_matrix() {
        let req = requirements_request(&complete()).unwrap();
        for r in Requirement::ALL {
            assert!(req.rendered_system.contains(r.name()));
        }
        assert!(req.rendered_user.contains("Person:Idea (who the application is for):\nPerson idea"));
    }

    #[test]
    fn spec_prompt_includes_all_examples() {
        let reqs = RequirementSet {
            selected: BTreeSet::from([Requirement::PregeneratedData]),
            source: super::super::RequirementSource::ModelSuggested,
        };
        let req = spec_request(&complete(), &reqs).unwrap();
        for (name, _) in SPEC_EXAMPLES {
            assert!(req.rendered_system.contains(name));
        }
        assert!(req.rendered_system.contains("Create placeholder data for"));
        assert!(req.rendered_user.contains("- Pre-generated data"));
    }

    #[test]
    fn data_prompt_personalises() {
        let req = data_request(&complete(), "SPEC BODY").unwrap();
        assert!(req.rendered_system.contains("The application is for Person idea, with these details: - a"));
        assert_eq!(req.rendered_user, "SPEC BODY");
        assert!(req.rendered_system.contains("\"discountPercentage\": 8.4"));
    }
}
