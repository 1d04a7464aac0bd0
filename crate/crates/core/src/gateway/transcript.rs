use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{CompletionResult, GatewayError, ModelRole, PromptRequest};

pub const TRANSCRIPT_FILE: &str = "transcript.jsonl";

#[derive(Serialize)]
struct DigestInput<'a> {
    role: ModelRole,
    rendered_system: &'a str,
    rendered_user: &'a str,
    temperature: f64,
}

/// Hex SHA-256 over the request's role, rendered text, and temperature.
pub fn request_digest(req: &PromptRequest) -> String {
    let input = DigestInput {
        role: req.role,
        rendered_system: &req.rendered_system,
        rendered_user: &req.rendered_user,
        temperature: req.temperature,
    };
    let bytes = serde_json::to_vec(&input).expect("digest input serializes");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub sequence_number: u64,
    pub request_digest: String,
    pub request: PromptRequest,
    pub result: CompletionResult,
    pub created_at: DateTime<Utc>,
}

impl TranscriptRecord {
    pub fn new(sequence_number: u64, request: PromptRequest, result: CompletionResult) -> Self {
        Self {
            sequence_number,
            request_digest: request_digest(&request),
            request,
            result,
            created_at: Utc::now(),
        }
    }
}

/// Appends records to `<root>/<project_id>/transcript.jsonl`.
#[derive(Debug)]
pub struct TranscriptLog {
    root: PathBuf,
    next_sequence: Mutex<HashMap<String, u64>>,
}

impl TranscriptLog {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self {
            root: root.into(),
            next_sequence: Mutex::default(),
        }
    }

    pub fn path_for(&self, project_id: &str) -> PathBuf {
        self.root.join(project_id).join(TRANSCRIPT_FILE)
    }

    pub fn append(
        &self,
        project_id: &str,
        request: &PromptRequest,
        result: &CompletionResult,
    ) -> Result<TranscriptRecord, GatewayError> {
        let io = |e: std::io::Error| GatewayError::Transcript(e.to_string());
        let path = self.path_for(project_id);
        let mut next = self.next_sequence.lock().unwrap();
        let seq = match next.get(project_id) {
            Some(n) => *n,
            None => existing_records(&path).map_err(io)? + 1,
        };
        let record = TranscriptRecord::new(seq, request.clone(), result.clone());
        let mut line = serde_json::to_string(&record).expect("record serializes");
        line.push('\n');

        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(io)?;
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&path).map_err(io)?;
        file.write_all(line.as_bytes()).map_err(io)?;
        file.sync_data().map_err(io)?;
        next.insert(project_id.to_string(), seq + 1);
        Ok(record)
    }
}

fn existing_records(path: &Path) -> std::io::Result<u64> {
    match fs::read_to_string(path) {
        Ok(text) => Ok(text.lines().filter(|l| !l.trim().is_empty()).count() as u64),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(0),
        Err(e) => Err(e),
    }
}

/// Recorded completions indexed by request digest.
#[derive(Debug, Clone, Default)]
pub struct FixtureStore {
    by_digest: HashMap<String, Vec<CompletionResult>>,
    len: usize,
}

impl FixtureStore {
    pub fn from_records(records: impl IntoIterator<Item = TranscriptRecord>) -> Self {
        let mut store = Self::default();
        for record in records {
            store.insert(record);
        }
        store
    }

    fn insert(&mut self, record: TranscriptRecord) {
        self.by_digest
            .entry(record.request_digest)
            .or_default()
            .push(record.result);
        self.len += 1;
    }

    /// Loads a transcript file, or every `*.jsonl` file (sorted by name) in a
    /// directory. Each record's stored digest is checked against its request.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, GatewayError> {
        let path = path.as_ref();
        let err = |msg: String| GatewayError::Transcript(format!("{}: {msg}", path.display()));
        let mut files = Vec::new();
        if path.is_dir() {
            for entry in fs::read_dir(path).map_err(|e| err(e.to_string()))? {
                let p = entry.map_err(|e| err(e.to_string()))?.path();
                if p.extension().is_some_and(|x| x == "jsonl") {
                    files.push(p);
                }
            }
            files.sort();
        } else {
            files.push(path.to_path_buf());
        }

        let mut store = Self::default();
        for file in files {
            let text = fs::read_to_string(&file).map_err(|e| err(e.to_string()))?;
            for (n, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let at = || format!("{} line {}", file.display(), n + 1);
                let record: TranscriptRecord = serde_json::from_str(line)
                    .map_err(|e| GatewayError::Transcript(format!("{}: {e}", at())))?;
                let actual = request_digest(&record.request);
                if actual != record.request_digest {
                    return Err(GatewayError::Transcript(format!(
                        "{}: stored digest {} does not match request digest {actual}",
                        at(),
                        record.request_digest
                    )));
                }
                store.insert(record);
            }
        }
        Ok(store)
    }

    /// The `nth` recorded result for a digest, clamped to the last one.
    pub fn lookup(&self, digest: &str, nth: usize) -> Option<&CompletionResult> {
        let results = self.by_digest.get(digest)?;
        results.get(nth.min(results.len() - 1))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}
