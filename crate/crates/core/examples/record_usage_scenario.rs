//! Records the walkthrough transcripts used as replay fixtures.
//!
//! cargo run -p workbench-core --example record_usage_scenario [out_dir]

#[path = "../tests/common/scenario.rs"]
mod scenario;

use std::path::PathBuf;
use std::sync::Arc;

use workbench_core::codegen::CodeRules;
use workbench_core::gateway::{Gateway, ProviderMode, TRANSCRIPT_FILE};
use workbench_core::prompts::endpoints::SelfInvokeMode;
use workbench_core::{Engine, Project};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures"));
    std::fs::create_dir_all(&out)?;
    for (mode, name) in [
        (SelfInvokeMode::Proxy, "usage_proxy"),
        (SelfInvokeMode::InjectKey, "usage_inject_key"),
    ] {
        let tmp = tempfile::tempdir()?;
        let script = scenario::Scripted::new(scenario::responses(mode));
        let gateway = Gateway::builder(ProviderMode::Record)
            .provider(script.clone())
            .transcript_root(tmp.path())
            .build()?;
        let engine = Engine::new(Arc::new(gateway), CodeRules::default(), mode);
        let mut project = Project::new(name.to_string(), name)?;
        scenario::run(&engine, &mut project)?;
        assert_eq!(script.remaining(), 0, "unused scripted answers");
        let dest = out.join(format!("{name}.jsonl"));
        std::fs::copy(tmp.path().join(name).join(TRANSCRIPT_FILE), &dest)?;
        println!("wrote {}", dest.display());
    }
    Ok(())
}
