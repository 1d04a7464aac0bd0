use proptest::prelude::*;

use workbench_core::codegen::{CodeRules, CodeVersion, Plan, Provenance};
use workbench_core::matrix::{CellKey, Dimension};
use workbench_core::scoping::Requirement;
use workbench_core::store::ProjectStore;
use workbench_core::Project;

const DIMS: [Dimension; 3] = [Dimension::Person, Dimension::Approach, Dimension::Interaction];

#[derive(Debug, Clone)]
pub struct Recipe {
    problem: String,
    cells: Vec<(usize, bool, String)>,
    snapshot: bool,
    requirements: Vec<usize>,
    spec_bullets: Option<[String; 3]>,
    data: Option<Vec<(u32, String)>>,
    steps: Vec<String>,
    versions: Vec<(usize, String)>,
    approve: usize,
    replan: bool,
}

fn text() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9 ,.'\"{}<>/\\\\\u{4e00}-\u{4e10}-]{1,40}"
}

pub fn recipe() -> impl Strategy<Value = Recipe> {
    (
        text(),
        prop::collection::vec((0..3usize, any::<bool>(), text()), 0..8),
        any::<bool>(),
        prop::collection::vec(0..5usize, 0..4),
        prop::option::of([text(), text(), text()]),
        prop::option::of(prop::collection::vec((any::<u32>(), text()), 0..25)),
        prop::collection::vec(text(), 0..6),
        prop::collection::vec((1..6usize, "(?s).{0,300}"), 0..8),
        0..6usize,
        any::<bool>(),
    )
        .prop_map(|(problem, cells, snapshot, requirements, spec_bullets, data, steps, versions, approve, replan)| Recipe {
            problem: format!("p {problem}"),
            cells,
            snapshot,
            requirements,
            spec_bullets,
            data,
            steps,
            versions,
            approve,
            replan,
        })
}

pub fn spec_body(b: &[String; 3]) -> String {
    format!(
        "Application Layout:\n- {}\n\nUser Interactions:\n- {}\n\nInputs and Logic:\n- {}\n",
        b[0], b[1], b[2]
    )
}

fn add_version(p: &mut Project, index: usize, html: &str, rules: &CodeRules) {
    let Ok(plan) = p.plan() else { return };
    if index > plan.len() {
        return;
    }
    let id = p.mint_version_id();
    let plan = p.plan_mut().unwrap();
    let parent = plan.step(index).unwrap().current_version.clone();
    let v = CodeVersion::new(id, html.to_string(), Provenance::Generated, None, rules);
    if plan.record_generated(index, v.clone()).is_err() && parent.is_some() {
        let v = CodeVersion { provenance: Provenance::ManualEdit, parent, ..v };
        plan.record_derived(index, v).unwrap();
    }
}

pub fn build(store: &ProjectStore, name: &str, r: &Recipe) -> Project {
    let rules = CodeRules::default();
    let mut p = store.create_project(name).unwrap();
    p.matrix.submit_problem(&r.problem).unwrap();
    for (d, grounding, content) in &r.cells {
        let key = if *grounding { CellKey::grounding(DIMS[*d]) } else { CellKey::idea(DIMS[*d]) };
        let _ = p.matrix.submit_cell(key, content);
        p.matrix.append_candidates(key, [content.clone()]);
        if r.snapshot {
            let _ = p.matrix.save_cell_version(key);
        }
    }
    let names: Vec<&str> = r.requirements.iter().map(|&i| Requirement::ALL[i].name()).collect();
    p.set_requirements(&names).unwrap();
    if let Some(b) = &r.spec_bullets {
        p.edit_spec(&spec_body(b)).unwrap();
        p.edit_spec(&spec_body(b).replace("- ", "* ")).unwrap();
    }
    if let Some(items) = &r.data {
        let arr: Vec<_> = items.iter().map(|(id, s)| serde_json::json!({ "id": id, "label": s })).collect();
        p.edit_data(&serde_json::to_string_pretty(&arr).unwrap()).unwrap();
    }
    if !r.steps.is_empty() {
        p.plan = Some(Plan::from_descriptions(r.steps.clone()));
        for (k, html) in &r.versions {
            add_version(&mut p, *k, html, &rules);
        }
        for k in 1..=r.approve.min(r.steps.len()) {
            if p.plan_mut().unwrap().approve(k).is_err() {
                break;
            }
        }
        if r.replan {
            let old = p.plan.take().unwrap();
            p.plan_history.push(old);
            p.plan = Some(Plan::from_descriptions(r.steps.iter().rev().cloned().collect()));
            if let Some((_, html)) = r.versions.first() {
                add_version(&mut p, 1, html, &rules);
            }
        }
    }
    p.touch();
    p
}

/// Crashes a full save at every filesystem operation in turn, checking that
/// the project always loads as the old or the new state. Returns the number
/// of crash points.
pub fn crash_sweep() -> usize {
    let rules = CodeRules::default();
    let dir = tempfile::tempdir().unwrap();
    let store = ProjectStore::open(dir.path()).unwrap();
    let mut old = store.create_project("full").unwrap();
    old.plan = Some(Plan::from_descriptions(vec!["a".into(), "b".into(), "c".into()]));
    for k in 1..=3 {
        let id = old.mint_version_id();
        let plan = old.plan_mut().unwrap();
        plan.record_generated(k, CodeVersion::new(id, format!("<html>{k}</html>"), Provenance::Generated, None, &rules)).unwrap();
        plan.approve(k).unwrap();
    }
    old.edit_spec(&spec_body(&["x".into(), "y".into(), "z".into()])).unwrap();
    store.save(&old).unwrap();

    let mut new = old.clone();
    new.plan_mut().unwrap().remove_step(3).unwrap_err();
    new.plan_mut().unwrap().revert_to(1).unwrap();
    for k in 2..=3 {
        let id = new.mint_version_id();
        let plan = new.plan_mut().unwrap();
        let parent = plan.step(k).unwrap().current_version.clone();
        plan.record_derived(k, CodeVersion::new(id, format!("<html>{k}'</html>"), Provenance::Iterated, parent, &rules)).unwrap();
    }
    new.plan_history.push(new.plan.clone().unwrap());
    new.plan = Some(Plan::from_descriptions(vec!["fresh".into()]));
    new.edit_data("[]").unwrap();

    let mut n = 0;
    loop {
        let scratch = tempfile::tempdir().unwrap();
        copy_dir(dir.path(), scratch.path());
        let s = ProjectStore::open(scratch.path()).unwrap();
        s.inject_crash_after(n);
        let res = s.save(&new);
        s.clear_fault();
        let loaded = s.load(&old.id).unwrap();
        if res.is_ok() {
            assert_eq!(loaded, new);
            break;
        }
        assert!(loaded == old || loaded == new, "crash at op {n}");
        n += 1;
    }
    n
}

pub fn copy_dir(from: &std::path::Path, to: &std::path::Path) {
    for f in super::all_files(from) {
        let dest = to.join(f.strip_prefix(from).unwrap());
        std::fs::create_dir_all(dest.parent().unwrap()).unwrap();
        std::fs::copy(&f, dest).unwrap();
    }
}

