//! The 3x2 design matrix: Person / Approach / Interaction by Idea / Grounding.

mod prompt;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use prompt::{ideation_template, iterate_template, parse_candidates, IdeationInput};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Person,
    Approach,
    Interaction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Idea,
    Grounding,
}

impl Dimension {
    pub const ALL: [Dimension; 3] = [Dimension::Person, Dimension::Approach, Dimension::Interaction];

    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Person => "person",
            Dimension::Approach => "approach",
            Dimension::Interaction => "interaction",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Dimension::Person => "Person",
            Dimension::Approach => "Approach",
            Dimension::Interaction => "Interaction",
        }
    }
}

impl Level {
    pub const ALL: [Level; 2] = [Level::Idea, Level::Grounding];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Idea => "idea",
            Level::Grounding => "grounding",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Level::Idea => "Idea",
            Level::Grounding => "Grounding",
        }
    }
}

impl FromStr for Dimension {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Dimension::ALL
            .into_iter()
            .find(|d| d.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown dimension {s:?}"))
    }
}

impl FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Level::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown level {s:?}"))
    }
}

/// One of the six matrix cells. Serialized as `"dimension:level"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellKey {
    pub dimension: Dimension,
    pub level: Level,
}

impl CellKey {
    pub const ALL: [CellKey; 6] = [
        CellKey::new(Dimension::Person, Level::Idea),
        CellKey::new(Dimension::Person, Level::Grounding),
        CellKey::new(Dimension::Approach, Level::Idea),
        CellKey::new(Dimension::Approach, Level::Grounding),
        CellKey::new(Dimension::Interaction, Level::Idea),
        CellKey::new(Dimension::Interaction, Level::Grounding),
    ];

    pub const fn new(dimension: Dimension, level: Level) -> Self {
        Self { dimension, level }
    }

    pub fn idea(dimension: Dimension) -> Self {
        Self::new(dimension, Level::Idea)
    }

    pub fn grounding(dimension: Dimension) -> Self {
        Self::new(dimension, Level::Grounding)
    }

    /// Human label, e.g. `Person:Idea`.
    pub fn label(self) -> String {
        format!("{}:{}", self.dimension.title(), self.level.title())
    }
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.dimension.as_str(), self.level.as_str())
    }
}

impl FromStr for CellKey {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (d, l) = s.split_once(':').ok_or_else(|| format!("bad cell key {s:?}"))?;
        Ok(CellKey::new(d.parse()?, l.parse()?))
    }
}

impl Serialize for CellKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CellKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSnapshot {
    pub id: String,
    pub candidates: Vec<String>,
    pub submitted: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellState {
    pub candidates: Vec<String>,
    pub submitted: Option<String>,
    pub stale: bool,
    pub history: Vec<CellSnapshot>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixState {
    pub problem: String,
    pub cells: BTreeMap<CellKey, CellState>,
    pub submission_log: Vec<CellKey>,
}

impl Default for MatrixState {
    fn default() -> Self {
        Self {
            problem: String::new(),
            cells: CellKey::ALL.into_iter().map(|k| (k, CellState::default())).collect(),
            submission_log: Vec::new(),
        }
    }
}

impl MatrixState {
    pub fn cell(&self, key: CellKey) -> &CellState {
        &self.cells[&key]
    }

    fn cell_mut(&mut self, key: CellKey) -> &mut CellState {
        self.cells.entry(key).or_default()
    }

    /// Sets the problem and clears every cell.
    pub fn submit_problem(&mut self, text: &str) -> Result<()> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::EmptyProblem);
        }
        *self = MatrixState {
            problem: text.to_string(),
            ..Default::default()
        };
        Ok(())
    }

    /// Checks the ordering rule for writing into `target`.
    pub fn check_order(&self, target: CellKey) -> Result<()> {
        if self.problem.is_empty() {
            return Err(Error::EmptyProblem);
        }
        if target.level == Level::Grounding {
            let idea = self.cell(CellKey::idea(target.dimension));
            if idea.submitted.is_none() || idea.stale {
                return Err(Error::PreconditionOrder(target));
            }
        }
        Ok(())
    }

    pub fn submit_cell(&mut self, target: CellKey, content: &str) -> Result<()> {
        if content.trim().is_empty() {
            return Err(Error::EmptyContent);
        }
        self.check_order(target)?;
        self.apply_submit(target, content.to_string());
        Ok(())
    }

    fn apply_submit(&mut self, target: CellKey, content: String) {
        let cell = self.cell_mut(target);
        cell.submitted = Some(content);
        cell.stale = false;
        self.submission_log.push(target);
        if target.level == Level::Idea {
            let grounding = self.cell_mut(CellKey::grounding(target.dimension));
            if grounding.submitted.is_some() {
                grounding.stale = true;
            }
        }
    }

    /// Submitted, non-stale cells other than `target`, ordered by their most
    /// recent submit.
    pub fn context_for(&self, target: CellKey) -> Vec<(CellKey, String)> {
        let mut latest: Vec<(usize, CellKey)> = Vec::with_capacity(6);
        for (pos, key) in self.submission_log.iter().enumerate() {
            match latest.iter_mut().find(|(_, k)| k == key) {
                Some(slot) => slot.0 = pos,
                None => latest.push((pos, *key)),
            }
        }
        latest.sort_unstable_by_key(|(pos, _)| *pos);
        latest
            .into_iter()
            .filter(|(_, k)| *k != target)
            .filter_map(|(_, k)| {
                let cell = self.cell(k);
                match (&cell.submitted, cell.stale) {
                    (Some(text), false) => Some((k, text.clone())),
                    _ => None,
                }
            })
            .collect()
    }

    pub fn append_candidates(&mut self, target: CellKey, new: impl IntoIterator<Item = String>) {
        self.cell_mut(target).candidates.extend(new);
    }

    pub fn save_cell_version(&mut self, target: CellKey) -> Result<String> {
        let cell = self.cell_mut(target);
        if cell.candidates.is_empty() && cell.submitted.is_none() {
            return Err(Error::NothingToSave);
        }
        let id = format!("s{}", cell.history.len() + 1);
        cell.history.push(CellSnapshot {
            id: id.clone(),
            candidates: cell.candidates.clone(),
            submitted: cell.submitted.clone(),
        });
        Ok(id)
    }

    pub fn list_cell_versions(&self, target: CellKey) -> &[CellSnapshot] {
        &self.cell(target).history
    }

    /// Puts a snapshot's candidates and submitted value back into the cell.
    ///
    /// Restoring a submitted value counts as a submit (ordering rule, log
    /// entry, staleness of the sibling grounding). Restoring an idea without
    /// a submitted value clears the idea and also stales the grounding.
    pub fn restore_cell_version(&mut self, target: CellKey, id: &str) -> Result<()> {
        let snapshot = self
            .cell(target)
            .history
            .iter()
            .find(|s| s.id == id)
            .cloned()
            .ok_or_else(|| Error::UnknownSnapshot(id.to_string()))?;
        match snapshot.submitted {
            Some(text) => {
                self.check_order(target)?;
                self.cell_mut(target).candidates = snapshot.candidates;
                self.apply_submit(target, text);
            }
            None => {
                let cell = self.cell_mut(target);
                cell.candidates = snapshot.candidates;
                cell.submitted = None;
                cell.stale = false;
                if target.level == Level::Idea {
                    let grounding = self.cell_mut(CellKey::grounding(target.dimension));
                    if grounding.submitted.is_some() {
                        grounding.stale = true;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        !self.problem.is_empty()
            && CellKey::ALL.iter().all(|k| {
                let c = self.cell(*k);
                c.submitted.is_some() && !c.stale
            })
    }

    /// Submitted text for a cell, if present and current.
    pub fn current(&self, key: CellKey) -> Option<&str> {
        let cell = self.cell(key);
        match (&cell.submitted, cell.stale) {
            (Some(t), false) => Some(t),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Dimension::*;

    fn started() -> MatrixState {
        let mut m = MatrixState::default();
        m.submit_problem("learn Chinese").unwrap();
        m
    }

    #[test]
    fn problem_sets_and_resets() {
        let mut m = started();
        assert_eq!(m.problem, "learn Chinese");
        assert!(m.cells.values().all(|c| *c == CellState::default()));
        m.submit_cell(CellKey::idea(Person), "x").unwrap();
        m.append_candidates(CellKey::idea(Approach), ["a".to_string()]);
        m.submit_problem("meal planning").unwrap();
        assert_eq!(m, MatrixState { problem: "meal planning".into(), ..Default::default() });
        assert_eq!(m.submit_problem("   "), Err(Error::EmptyProblem));
    }

    #[test]
    fn grounding_requires_idea() {
        let mut m = started();
        assert_eq!(
            m.submit_cell(CellKey::grounding(Interaction), "g"),
            Err(Error::PreconditionOrder(CellKey::grounding(Interaction)))
        );
        assert_eq!(m.submit_cell(CellKey::idea(Person), " "), Err(Error::EmptyContent));
    }

    #[test]
    fn idea_resubmit_stales_grounding_only_in_its_dimension() {
        let mut m = started();
        for d in Dimension::ALL {
            m.submit_cell(CellKey::idea(d), "i").unwrap();
            m.submit_cell(CellKey::grounding(d), "g").unwrap();
        }
        assert!(m.is_complete());
        let before = m.clone();
        m.submit_cell(CellKey::idea(Approach), "Visual storytelling").unwrap();
        assert!(m.cell(CellKey::grounding(Approach)).stale);
        for d in [Person, Interaction] {
            for l in Level::ALL {
                assert_eq!(m.cell(CellKey::new(d, l)), before.cell(CellKey::new(d, l)));
            }
        }
        assert!(!m.is_complete());
        m.submit_cell(CellKey::grounding(Approach), "g2").unwrap();
        assert!(m.is_complete());
    }

    #[test]
    fn context_excludes_stale_grounding() {
        let mut m = started();
        m.submit_cell(CellKey::idea(Person), "p").unwrap();
        m.submit_cell(CellKey::grounding(Person), "pg").unwrap();
        m.submit_cell(CellKey::idea(Person), "p2").unwrap();
        assert_eq!(
            m.context_for(CellKey::idea(Approach)),
            vec![(CellKey::idea(Person), "p2".to_string())]
        );
    }

    #[test]
    fn context_is_in_latest_submit_order() {
        let mut m = started();
        m.submit_cell(CellKey::idea(Person), "p").unwrap();
        m.submit_cell(CellKey::idea(Approach), "a").unwrap();
        m.submit_cell(CellKey::grounding(Person), "pg").unwrap();
        m.submit_cell(CellKey::grounding(Approach), "ag").unwrap();
        m.submit_cell(CellKey::idea(Interaction), "i").unwrap();
        let keys: Vec<_> = m
            .context_for(CellKey::grounding(Interaction))
            .into_iter()
            .map(|(k, _)| k)
            .collect();
        assert_eq!(
            keys,
            [
                CellKey::idea(Person),
                CellKey::idea(Approach),
                CellKey::grounding(Person),
                CellKey::grounding(Approach),
                CellKey::idea(Interaction)
            ]
        );
        assert!(MatrixState::default().context_for(CellKey::idea(Person)).is_empty());
    }

    #[test]
    fn snapshots_restore_groundings() {
        let mut m = started();
        let ai = CellKey::idea(Approach);
        let ag = CellKey::grounding(Approach);
        m.append_candidates(ai, ["Pictorial".to_string(), "Storytelling".to_string()]);
        m.submit_cell(ai, "Storytelling").unwrap();
        m.append_candidates(ag, ["- story bullets".to_string()]);
        m.submit_cell(ag, "- story bullets").unwrap();
        let idea_snap = m.save_cell_version(ai).unwrap();
        let grounding_snap = m.save_cell_version(ag).unwrap();

        m.submit_cell(ai, "Pictorial").unwrap();
        assert!(m.cell(ag).stale);
        m.append_candidates(ag, ["- srs bullets".to_string()]);
        m.submit_cell(ag, "- srs bullets").unwrap();

        m.restore_cell_version(ai, &idea_snap).unwrap();
        assert!(m.cell(ag).stale);
        m.restore_cell_version(ag, &grounding_snap).unwrap();
        assert_eq!(m.current(ag), Some("- story bullets"));
        assert_eq!(m.cell(ag).candidates, ["- story bullets"]);
        assert_eq!(m.list_cell_versions(ag).len(), 1);

        assert_eq!(m.restore_cell_version(ag, "bogus"), Err(Error::UnknownSnapshot("bogus".into())));
        assert_eq!(m.save_cell_version(CellKey::idea(Person)), Err(Error::NothingToSave));
    }

    #[test]
    fn cell_key_round_trips_as_string() {
        for k in CellKey::ALL {
            let s = serde_json::to_string(&k).unwrap();
            assert_eq!(serde_json::from_str::<CellKey>(&s).unwrap(), k);
        }
        assert_eq!(CellKey::idea(Person).to_string(), "person:idea");
        assert!("person:middle".parse::<CellKey>().is_err());
    }
}
