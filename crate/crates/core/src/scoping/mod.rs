//! Requirements, spec, and placeholder data derived from a complete matrix.

mod prompt;

use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::gateway::extract_json_array;

pub use prompt::{data_request, matrix_summary, requirements_request, spec_request};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Requirement {
    TextModelToolCalling,
    ImageGeneration,
    PregeneratedData,
    ChartLibrary,
    DiagramLibrary,
}

impl Requirement {
    pub const ALL: [Requirement; 5] = [
        Requirement::TextModelToolCalling,
        Requirement::ImageGeneration,
        Requirement::PregeneratedData,
        Requirement::ChartLibrary,
        Requirement::DiagramLibrary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Requirement::TextModelToolCalling => "text_model_tool_calling",
            Requirement::ImageGeneration => "image_generation",
            Requirement::PregeneratedData => "pregenerated_data",
            Requirement::ChartLibrary => "chart_library",
            Requirement::DiagramLibrary => "diagram_library",
        }
    }

    /// Checkbox label shown to users.
    pub fn label(self) -> &'static str {
        match self {
            Requirement::TextModelToolCalling => "Self-invoked GPT calls",
            Requirement::ImageGeneration => "Dynamically generated AI-images",
            Requirement::PregeneratedData => "Pre-generated data",
            Requirement::ChartLibrary => "Charts (Chart.js)",
            Requirement::DiagramLibrary => "Diagrams (GoJS)",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Requirement::TextModelToolCalling => {
                "the app calls a text model (GPT) at runtime to produce content such as recommendations or generated text"
            }
            Requirement::ImageGeneration => {
                "the app generates images with an image model at runtime"
            }
            Requirement::PregeneratedData => {
                "the app needs a fixed dataset created ahead of time and read in when it starts"
            }
            Requirement::ChartLibrary => "the app draws charts or graphs of numeric data",
            Requirement::DiagramLibrary => {
                "the app draws diagrams such as flow charts, trees, or mind maps"
            }
        }
    }
}

impl FromStr for Requirement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Requirement::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s) || r.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownRequirement(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RequirementSource {
    ModelSuggested,
    UserEdited,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementSet {
    pub selected: BTreeSet<Requirement>,
    pub source: RequirementSource,
}

impl RequirementSet {
    pub fn contains(&self, r: Requirement) -> bool {
        self.selected.contains(&r)
    }

    pub fn user_edited<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let selected = names
            .iter()
            .map(|n| n.as_ref().parse())
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(Self {
            selected,
            source: RequirementSource::UserEdited,
        })
    }
}

static EMPTY_ANSWER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\b(none|no (technical |special )?requirements|not needed|nothing)\b").unwrap()
});

/// Reads a requirement set from a completion. Only vocabulary members are
/// kept; an answer naming none of them is a parse failure unless it clearly
/// says nothing is needed.
pub fn parse_requirements(text: &str) -> Result<BTreeSet<Requirement>> {
    let fail = || Error::parse("requirement list", text);
    if let Ok(items) = extract_json_array(text) {
        let known: BTreeSet<Requirement> = items
            .iter()
            .filter_map(Value::as_str)
            .filter_map(|s| s.parse().ok())
            .collect();
        if known.is_empty() && !items.is_empty() {
            return Err(fail());
        }
        return Ok(known);
    }
    let lower = text.to_ascii_lowercase();
    let found: BTreeSet<Requirement> = Requirement::ALL
        .into_iter()
        .filter(|r| lower.contains(r.name()) || lower.contains(&r.label().to_ascii_lowercase()))
        .collect();
    if !found.is_empty() {
        return Ok(found);
    }
    if EMPTY_ANSWER.is_match(text) {
        return Ok(BTreeSet::new());
    }
    Err(fail())
}

pub const SPEC_SECTIONS: [&str; 3] = ["Application Layout", "User Interactions", "Inputs and Logic"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecSection {
    pub title: String,
    /// Byte offsets into the body: header line start to the next header.
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecDoc {
    pub body: String,
    pub sections: Vec<SpecSection>,
    pub edited_by_user: bool,
}

fn header_of(line: &str) -> Option<usize> {
    let t = line
        .trim()
        .trim_matches(|c: char| c == '#' || c == '*' || c.is_whitespace());
    let t = t.strip_suffix(':').unwrap_or(t).trim_end_matches('*').trim();
    SPEC_SECTIONS.iter().position(|h| h.eq_ignore_ascii_case(t))
}

/// Locates the three section headers, each exactly once and in order.
pub fn parse_spec_sections(body: &str) -> Result<Vec<SpecSection>> {
    let mut found: Vec<(usize, usize)> = Vec::new();
    let mut offset = 0;
    for line in body.split_inclusive('\n') {
        if let Some(which) = header_of(line) {
            if found.iter().any(|(w, _)| *w == which) {
                return Err(Error::SpecShape(format!("duplicated section {:?}", SPEC_SECTIONS[which])));
            }
            found.push((which, offset));
        }
        offset += line.len();
    }
    for (i, name) in SPEC_SECTIONS.iter().enumerate() {
        if !found.iter().any(|(w, _)| *w == i) {
            return Err(Error::SpecShape(format!("missing section {name:?}")));
        }
    }
    if found.iter().enumerate().any(|(i, (w, _))| *w != i) {
        return Err(Error::SpecShape("sections out of order".into()));
    }
    Ok(found
        .iter()
        .enumerate()
        .map(|(i, (w, start))| SpecSection {
            title: SPEC_SECTIONS[*w].to_string(),
            start: *start,
            end: found.get(i + 1).map_or(body.len(), |(_, s)| *s),
        })
        .collect())
}

static DATA_DIRECTIVE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)placeholder data|pre-?generated data").unwrap()
});
static NEGATION: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\bno need\b|\bnot\b|\bdon't\b|\bdo not\b").unwrap());

pub const DATA_DIRECTIVE_LINE: &str = "- Create placeholder data for the initial content the app displays.";

impl SpecDoc {
    pub fn parse(body: &str, edited_by_user: bool) -> Result<Self> {
        Ok(Self {
            sections: parse_spec_sections(body)?,
            body: body.to_string(),
            edited_by_user,
        })
    }

    /// True if some line asks for placeholder data (and does not say it is
    /// unnecessary).
    pub fn has_data_directive(&self) -> bool {
        self.body
            .lines()
            .any(|l| DATA_DIRECTIVE.is_match(l) && !NEGATION.is_match(l))
    }

    /// Appends the data-creation bullet if the spec has none.
    pub fn ensure_data_directive(&mut self) {
        if self.has_data_directive() {
            return;
        }
        let body = self.body.trim_end().to_string();
        self.body = format!("{body}\n{DATA_DIRECTIVE_LINE}\n");
        if let Some(last) = self.sections.last_mut() {
            last.end = self.body.len();
        }
    }
}

pub const DATA_MIN_ITEMS: usize = 10;
pub const DATA_MAX_ITEMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceholderData {
    pub items: Vec<Map<String, Value>>,
    /// Exactly what the data endpoint serves.
    pub raw_text: String,
    pub edited_by_user: bool,
    /// Set when the item count is outside 10..=20.
    pub length_warning: bool,
}

fn objects(values: Vec<Value>, raw: &str) -> Result<Vec<Map<String, Value>>> {
    values
        .into_iter()
        .map(|v| match v {
            Value::Object(m) => Ok(m),
            _ => Err(Error::parse("array of objects", raw)),
        })
        .collect()
}

fn in_range(n: usize) -> bool {
    (DATA_MIN_ITEMS..=DATA_MAX_ITEMS).contains(&n)
}

impl PlaceholderData {
    /// Parses a data completion. Returns the items whatever their count; the
    /// caller decides what to do about the length.
    pub fn from_completion(text: &str) -> Result<Self> {
        let values = extract_json_array(text).map_err(|_| Error::parse("placeholder data", text))?;
        let items = objects(values, text)?;
        let raw_text = serde_json::to_string_pretty(&items).expect("json values serialize");
        Ok(Self {
            length_warning: !in_range(items.len()),
            items,
            raw_text,
            edited_by_user: false,
        })
    }

    /// Accepts user-edited data. The text must be a strict JSON array of
    /// objects and is stored as given.
    pub fn from_user_text(raw_text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(raw_text).map_err(|_| Error::parse("JSON array", raw_text))?;
        let Value::Array(values) = value else {
            return Err(Error::parse("JSON array", raw_text));
        };
        let items = objects(values, raw_text)?;
        Ok(Self {
            length_warning: !in_range(items.len()),
            items,
            raw_text: raw_text.to_string(),
            edited_by_user: true,
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prompts::fewshot::SPEC_EXAMPLES;

    #[test]
    fn requirement_names_and_labels_parse() {
        assert_eq!("image_generation".parse::<Requirement>().unwrap(), Requirement::ImageGeneration);
        assert_eq!("Pre-generated data".parse::<Requirement>().unwrap(), Requirement::PregeneratedData);
        assert_eq!(
            "FooLib".parse::<Requirement>(),
            Err(Error::UnknownRequirement("FooLib".into()))
        );
    }

    #[test]
    fn requirement_completions() {
        let set = parse_requirements("```json\n[\"image_generation\", \"pregenerated_data\", \"fooLib\"]\n```").unwrap();
        assert_eq!(
            set,
            BTreeSet::from([Requirement::ImageGeneration, Requirement::PregeneratedData])
        );
        assert!(parse_requirements("[]").unwrap().is_empty());
        assert!(parse_requirements("none needed").unwrap().is_empty());
        assert!(matches!(parse_requirements("[\"blockchain\"]"), Err(Error::ParseFailure { .. })));
        assert!(matches!(parse_requirements("maybe a database?"), Err(Error::ParseFailure { .. })));
        assert_eq!(
            parse_requirements("It needs chart_library.").unwrap(),
            BTreeSet::from([Requirement::ChartLibrary])
        );
    }

    #[test]
    fn example_specs_have_ordered_sections() {
        for (_, body) in SPEC_EXAMPLES {
            let spec = SpecDoc::parse(body, false).unwrap();
            let starts: Vec<_> = spec.sections.iter().map(|s| s.start).collect();
            assert!(starts.windows(2).all(|w| w[0] < w[1]));
            assert!(body[spec.sections[0].start..].starts_with("Application Layout"));
        }
    }

    #[test]
    fn markdown_headers_are_recognised() {
        let body = "## Application Layout\n- a\n**User Interactions:**\n- b\n### Inputs and Logic:\n- c\n";
        let s = parse_spec_sections(body).unwrap();
        assert_eq!(s[2].end, body.len());
        assert_eq!(&body[s[1].start..s[1].end], "**User Interactions:**\n- b\n");
    }

    #[test]
    fn spec_shape_errors() {
        let missing = "Application Layout:\n- a\nUser Interactions:\n- b\n";
        assert!(matches!(parse_spec_sections(missing), Err(Error::SpecShape(_))));
        let dup = "Application Layout:\nUser Interactions:\nInputs and Logic:\nInputs and Logic:\n";
        assert!(matches!(parse_spec_sections(dup), Err(Error::SpecShape(_))));
        let order = "User Interactions:\nApplication Layout:\nInputs and Logic:\n";
        assert!(matches!(parse_spec_sections(order), Err(Error::SpecShape(_))));
    }

    #[test]
    fn data_directive_detection() {
        assert!(SpecDoc::parse(SPEC_EXAMPLES[2].1, false).unwrap().has_data_directive());
        // the music example only says no data is needed
        let mut spec = SpecDoc::parse(SPEC_EXAMPLES[0].1, false).unwrap();
        assert!(!spec.has_data_directive());
        spec.body = "Application Layout:\nUser Interactions:\nInputs and Logic:\n- x\n".into();
        spec.sections = parse_spec_sections(&spec.body).unwrap();
        spec.ensure_data_directive();
        assert!(spec.body.ends_with(&format!("{DATA_DIRECTIVE_LINE}\n")));
        assert_eq!(parse_spec_sections(&spec.body).unwrap(), spec.sections);
    }

    #[test]
    fn data_from_completion_and_user_text() {
        let d = PlaceholderData::from_completion("Here:\n[{\"id\":1,},{\"id\":2}]").unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.length_warning);
        let back: Vec<Map<String, Value>> = serde_json::from_str(&d.raw_text).unwrap();
        assert_eq!(back, d.items);
        assert!(PlaceholderData::from_completion("[1, 2]").is_err());

        let raw = "[ {\"a\": 1} ]";
        let edited = PlaceholderData::from_user_text(raw).unwrap();
        assert_eq!(edited.raw_text, raw);
        assert!(edited.edited_by_user && edited.length_warning);
        assert!(PlaceholderData::from_user_text("{\"a\": 1}").is_err());
        assert!(PlaceholderData::from_user_text("[{\"a\": 1},]").is_err());
    }
}
