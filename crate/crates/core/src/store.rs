//! On-disk project persistence.
//!
//! ```text
//! <root>/projects/<id>/manifest.json        schema tag + project without code
//! <root>/projects/<id>/spec.md              current spec body (mirror)
//! <root>/projects/<id>/data.json            current placeholder data (mirror)
//! <root>/projects/<id>/steps/<i>/<vid>.html one file per code version
//! <root>/projects/<id>/transcript.jsonl     model call log (written by the gateway)
//! <root>/exports/                           exported documents
//! ```
//!
//! Every file is written to a temporary name and renamed into place. The
//! manifest is renamed last, so an interrupted save leaves the previous
//! manifest and all files it references intact.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde_json::Value;
use uuid::Uuid;

use crate::codegen::Plan;
use crate::error::{Error, Result};
use crate::export::{render_export, resolve_version, ExportMode};
use crate::gateway::TRANSCRIPT_FILE;
use crate::project::{check_name, Project, ProjectSummary};

pub const SCHEMA_TAG: &str = "workbench.project/v1";
pub const MANIFEST_FILE: &str = "manifest.json";
const TMP_SUFFIX: &str = ".tmp";

fn io_err(context: &str, path: &Path, e: std::io::Error) -> Error {
    Error::Storage(format!("{context} {}: {e}", path.display()))
}

/// Ids are generated here, so anything else is rejected before touching the
/// filesystem.
fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-')
}

fn version_path(index: usize, vid: &str) -> PathBuf {
    PathBuf::from("steps").join(index.to_string()).join(format!("{vid}.html"))
}

fn plans(project: &Project) -> impl Iterator<Item = &Plan> {
    project.plan.iter().chain(project.plan_history.iter())
}

fn fsync_dir(dir: &Path) {
    if let Ok(d) = fs::File::open(dir) {
        let _ = d.sync_all();
    }
}

#[derive(Debug)]
pub struct ProjectStore {
    root: PathBuf,
    /// Serializes name checks with directory creation.
    names: Mutex<()>,
    /// Remaining filesystem operations before a simulated crash.
    fault: Mutex<Option<usize>>,
}

impl ProjectStore {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        for dir in [root.join("projects"), root.join("exports")] {
            fs::create_dir_all(&dir).map_err(|e| io_err("create", &dir, e))?;
        }
        Ok(Self { root, names: Mutex::new(()), fault: Mutex::new(None) })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Directory holding one subdirectory per project; also the gateway's
    /// transcript root.
    pub fn projects_dir(&self) -> PathBuf {
        self.root.join("projects")
    }

    pub fn exports_dir(&self) -> PathBuf {
        self.root.join("exports")
    }

    pub fn project_dir(&self, id: &str) -> Result<PathBuf> {
        if !valid_id(id) {
            return Err(Error::UnknownProject(id.to_string()));
        }
        Ok(self.projects_dir().join(id))
    }

    /// Makes the `n`th filesystem operation from now fail as if the process
    /// died there. A failing write leaves a partial temporary file.
    #[doc(hidden)]
    pub fn inject_crash_after(&self, n: usize) {
        *self.fault.lock().unwrap() = Some(n);
    }

    #[doc(hidden)]
    pub fn clear_fault(&self) {
        *self.fault.lock().unwrap() = None;
    }

    fn tick(&self) -> bool {
        let mut fault = self.fault.lock().unwrap();
        match fault.as_mut() {
            Some(0) => true,
            Some(n) => {
                *n -= 1;
                false
            }
            None => false,
        }
    }

    fn crash() -> Error {
        Error::Storage("simulated crash".into())
    }

    fn write_atomic(&self, path: &Path, bytes: &[u8]) -> Result<()> {
        let dir = path.parent().expect("file paths have a parent");
        fs::create_dir_all(dir).map_err(|e| io_err("create", dir, e))?;
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(TMP_SUFFIX);
        let tmp = PathBuf::from(tmp);
        let crash_on_write = self.tick();
        {
            let mut f = fs::File::create(&tmp).map_err(|e| io_err("create", &tmp, e))?;
            if crash_on_write {
                let _ = f.write_all(&bytes[..bytes.len() / 2]);
                return Err(Self::crash());
            }
            f.write_all(bytes).map_err(|e| io_err("write", &tmp, e))?;
            f.sync_all().map_err(|e| io_err("sync", &tmp, e))?;
        }
        if self.tick() {
            return Err(Self::crash());
        }
        fs::rename(&tmp, path).map_err(|e| io_err("rename", &tmp, e))?;
        fsync_dir(dir);
        Ok(())
    }

    pub fn save(&self, project: &Project) -> Result<()> {
        let dir = self.project_dir(&project.id)?;
        check_name(&project.name)?;

        let mut keep: BTreeSet<PathBuf> = BTreeSet::new();
        for plan in plans(project) {
            for (step, v) in plan.all_versions() {
                let rel = version_path(step.index, &v.id);
                let path = dir.join(&rel);
                let unchanged = fs::read(&path).is_ok_and(|old| old == v.html.as_bytes());
                if !unchanged {
                    self.write_atomic(&path, v.html.as_bytes())?;
                }
                keep.insert(rel);
            }
        }

        let spec_path = dir.join("spec.md");
        match &project.spec {
            Some(spec) => self.write_atomic(&spec_path, spec.body.as_bytes())?,
            None => remove_if_exists(&spec_path)?,
        }
        let data_path = dir.join("data.json");
        match &project.data {
            Some(data) => self.write_atomic(&data_path, data.raw_text.as_bytes())?,
            None => remove_if_exists(&data_path)?,
        }

        let manifest = serde_json::json!({ "schema": SCHEMA_TAG, "project": project });
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Storage(e.to_string()))?;
        self.write_atomic(&dir.join(MANIFEST_FILE), text.as_bytes())?;

        self.collect_garbage(&dir, &keep)
    }

    /// Removes code files no longer referenced and temporary leftovers.
    fn collect_garbage(&self, dir: &Path, keep: &BTreeSet<PathBuf>) -> Result<()> {
        let steps = dir.join("steps");
        let Ok(indices) = fs::read_dir(&steps) else { return Ok(()) };
        for index_dir in indices.flatten() {
            let Ok(files) = fs::read_dir(index_dir.path()) else { continue };
            for file in files.flatten() {
                let path = file.path();
                let rel = path.strip_prefix(dir).unwrap_or(&path).to_path_buf();
                if !keep.contains(&rel) {
                    if self.tick() {
                        return Err(Self::crash());
                    }
                    fs::remove_file(&path).map_err(|e| io_err("remove", &path, e))?;
                }
            }
            let _ = fs::remove_dir(index_dir.path());
        }
        for name in [MANIFEST_FILE, "spec.md", "data.json"] {
            let _ = fs::remove_file(dir.join(format!("{name}{TMP_SUFFIX}")));
        }
        Ok(())
    }

    fn read_manifest(&self, id: &str) -> Result<Project> {
        let path = self.project_dir(id)?.join(MANIFEST_FILE);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(Error::UnknownProject(id.to_string()))
            }
            Err(e) => return Err(io_err("read", &path, e)),
        };
        let mut value: Value = serde_json::from_str(&text)
            .map_err(|e| Error::Storage(format!("{}: {e}", path.display())))?;
        match value.get("schema").and_then(Value::as_str) {
            Some(SCHEMA_TAG) => {}
            Some(other) => {
                return Err(Error::Storage(format!(
                    "{}: unsupported schema tag {other:?} (this build reads {SCHEMA_TAG:?})",
                    path.display()
                )))
            }
            None => return Err(Error::Storage(format!("{}: missing schema tag", path.display()))),
        }
        let project: Project = serde_json::from_value(value["project"].take())
            .map_err(|e| Error::Storage(format!("{}: {e}", path.display())))?;
        if project.id != id {
            return Err(Error::Storage(format!("{}: id mismatch", path.display())));
        }
        Ok(project)
    }

    pub fn load(&self, id: &str) -> Result<Project> {
        let mut project = self.read_manifest(id)?;
        let dir = self.project_dir(id)?;
        let all_plans = project.plan.iter_mut().chain(project.plan_history.iter_mut());
        for plan in all_plans {
            for step in &mut plan.steps {
                if let Some(cur) = &step.current_version {
                    if step.version(cur).is_none() {
                        return Err(Error::Storage(format!("step {} references missing version {cur}", step.index)));
                    }
                }
                for v in &mut step.versions {
                    let path = dir.join(version_path(step.index, &v.id));
                    v.html = fs::read_to_string(&path).map_err(|e| io_err("read", &path, e))?;
                }
            }
        }
        Ok(project)
    }

    fn ids(&self) -> Result<Vec<String>> {
        let dir = self.projects_dir();
        let entries = fs::read_dir(&dir).map_err(|e| io_err("list", &dir, e))?;
        Ok(entries
            .flatten()
            .filter(|e| e.path().join(MANIFEST_FILE).is_file())
            .filter_map(|e| e.file_name().into_string().ok())
            .filter(|id| valid_id(id))
            .collect())
    }

    /// Summaries ordered by creation time.
    pub fn list_projects(&self) -> Result<Vec<ProjectSummary>> {
        let mut out = self
            .ids()?
            .iter()
            .map(|id| self.read_manifest(id).map(|p| p.summary()))
            .collect::<Result<Vec<_>>>()?;
        out.sort_by(|a, b| a.created_at.cmp(&b.created_at).then_with(|| a.name.cmp(&b.name)));
        Ok(out)
    }

    fn check_unique(&self, name: &str) -> Result<()> {
        for id in self.ids()? {
            if self.read_manifest(&id)?.name == name {
                return Err(Error::DuplicateName(name.to_string()));
            }
        }
        Ok(())
    }

    fn insert_new(&self, build: impl FnOnce(String) -> Result<Project>) -> Result<Project> {
        let _guard = self.names.lock().unwrap();
        let project = build(Uuid::new_v4().to_string())?;
        self.check_unique(&project.name)?;
        self.save(&project)?;
        Ok(project)
    }

    pub fn create_project(&self, name: &str) -> Result<Project> {
        self.insert_new(|id| Project::new(id, name))
    }

    /// New project carrying a copy of the source's design matrix.
    pub fn clone_project(&self, source_id: &str, new_name: &str) -> Result<Project> {
        let source = self.read_manifest(source_id)?;
        self.insert_new(|id| source.clone_as(id, new_name))
    }

    pub fn delete_project(&self, id: &str) -> Result<()> {
        let dir = self.project_dir(id)?;
        if !dir.join(MANIFEST_FILE).is_file() {
            return Err(Error::UnknownProject(id.to_string()));
        }
        fs::remove_dir_all(&dir).map_err(|e| io_err("remove", &dir, e))
    }

    pub fn transcript_path(&self, id: &str) -> Result<PathBuf> {
        Ok(self.project_dir(id)?.join(TRANSCRIPT_FILE))
    }

    /// Writes a standalone document for a code version and returns its path.
    pub fn export_artifact(
        &self,
        project: &Project,
        step: Option<usize>,
        version: Option<&str>,
        mode: &ExportMode,
    ) -> Result<PathBuf> {
        let (index, v) = resolve_version(project, step, version)?;
        let doc = render_export(project, &v.html, mode);
        let tag = match mode {
            ExportMode::Inline => "inline",
            ExportMode::Server { .. } => "server",
        };
        let path = self.exports_dir().join(format!("{}-step{index}-{}-{tag}.html", project.id, v.id));
        self.write_atomic(&path, doc.as_bytes())?;
        Ok(path)
    }
}

fn remove_if_exists(path: &Path) -> Result<()> {
    match fs::remove_file(path) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
        Err(e) => Err(io_err("remove", path, e)),
    }
}
