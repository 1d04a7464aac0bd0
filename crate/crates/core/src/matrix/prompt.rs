use serde_json::Value;

use super::{CellKey, Level};
use crate::error::{Error, Result};
use crate::gateway::{bindings, extract_json_array, ModelRole, PromptRequest, PromptTemplate};
use crate::prompts::fewshot::MATRIX_EXAMPLES;

const SYSTEM: &str = "You help a user explore the design space of an application that addresses their problem. The design space is a matrix with three dimensions:
- Person: who the application is for.
- Approach: how the application addresses the problem.
- Interaction: how the user interacts with the application.
Each dimension has two levels of specificity. An Idea is a short phrase. A Grounding is 3-5 bullet points that make the dimension's Idea concrete enough to implement.

Here are entries of this kind for existing applications:

{examples}

{format}";

const USER: &str = "Problem: {problem}

Entries the user has already submitted:
{context}

Candidates already shown for this entry:
{existing}

Suggest {count} new, distinct candidates for {cell}.";

const ITERATE_USER: &str = "Problem: {problem}

Entries the user has already submitted:
{context}

Candidates already shown for this entry:
{existing}

The user gave this feedback on the candidates: {feedback}

Suggest {count} new candidates for {cell} that address the feedback.";

const IDEA_FORMAT: &str = "Return a JSON array of strings, one short phrase per idea, and nothing else.";
const GROUNDING_FORMAT: &str = "Return a JSON array in which each element is itself an array of 3 to 5 bullet-point strings, one inner array per grounding, and nothing else.";

pub fn ideation_template() -> PromptTemplate {
    PromptTemplate::new("matrix_brainstorm", ModelRole::Ideation, SYSTEM, USER)
}

pub fn iterate_template() -> PromptTemplate {
    PromptTemplate::new("matrix_iterate", ModelRole::Ideation, SYSTEM, ITERATE_USER)
}

#[derive(Debug, Clone)]
pub struct IdeationInput<'a> {
    pub problem: &'a str,
    pub target: CellKey,
    pub context: &'a [(CellKey, String)],
    pub existing: &'a [String],
    pub count: usize,
    pub feedback: Option<&'a str>,
}

/// The few-shot block restricted to the target's dimension and level. For a
/// grounding target each example's idea is shown above its grounding.
fn examples_for(target: CellKey) -> String {
    let mut out = String::new();
    for app in &MATRIX_EXAMPLES {
        out.push_str(&format!("Application: {}\n", app.name));
        for (dim, level, text) in &app.cells {
            if *dim != target.dimension {
                continue;
            }
            if *level == target.level || (target.level == Level::Grounding && *level == Level::Idea) {
                out.push_str(&format!("{}:\n{}\n", CellKey::new(*dim, *level).label(), text));
            }
        }
        out.push('\n');
    }
    out.trim_end().to_string()
}

fn listing(items: impl IntoIterator<Item = String>) -> String {
    let text: Vec<String> = items.into_iter().collect();
    if text.is_empty() {
        "(none)".to_string()
    } else {
        text.join("\n")
    }
}

impl IdeationInput<'_> {
    pub fn render(&self) -> Result<PromptRequest> {
        let format = match self.target.level {
            Level::Idea => IDEA_FORMAT,
            Level::Grounding => GROUNDING_FORMAT,
        };
        let context = listing(self.context.iter().map(|(k, t)| format!("{}:\n{}", k.label(), t)));
        let existing = listing(self.existing.iter().map(|c| format!("* {c}")));
        let mut b = bindings([
            ("examples", examples_for(self.target)),
            ("format", format.to_string()),
            ("problem", self.problem.to_string()),
            ("context", context),
            ("existing", existing),
            ("count", self.count.to_string()),
            ("cell", self.target.label()),
        ]);
        let template = match self.feedback {
            Some(feedback) => {
                b.insert("feedback", feedback.to_string());
                iterate_template()
            }
            None => ideation_template(),
        };
        Ok(template.render(&b)?)
    }
}

fn bullet_text(bullets: &[Value]) -> Option<String> {
    let mut lines = Vec::with_capacity(bullets.len());
    for b in bullets {
        let t = b.as_str()?.trim();
        let t = t.strip_prefix("- ").or_else(|| t.strip_prefix("* ")).unwrap_or(t);
        lines.push(format!("- {}", t.trim()));
    }
    Some(lines.join("\n"))
}

/// Parses exactly `count` candidates out of an ideation completion. Extra
/// items are dropped; fewer is a parse failure.
pub fn parse_candidates(text: &str, level: Level, count: usize) -> Result<Vec<String>> {
    let fail = || Error::parse(format!("{count} {} candidates", level.as_str()), text);
    let items = extract_json_array(text).map_err(|_| fail())?;
    let mut out = Vec::with_capacity(count);
    for item in items {
        let candidate = match (&item, level) {
            (Value::String(s), _) => s.trim().to_string(),
            (Value::Array(bullets), Level::Grounding) => bullet_text(bullets).ok_or_else(fail)?,
            _ => return Err(fail()),
        };
        if !candidate.is_empty() {
            out.push(candidate);
        }
    }
    if out.len() < count {
        return Err(fail());
    }
    out.truncate(count);
    Ok(out)
}
