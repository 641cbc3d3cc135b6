//! Registry of sensitivity runs with a single execution slot.

use std::collections::BTreeMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::engine::ErrorBody;
use crate::sensitivity::{SaConfig, SensitivityReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Queued,
    Running,
    Done,
    Failed,
}

impl RunStatus {
    pub fn is_terminal(self) -> bool {
        matches!(self, RunStatus::Done | RunStatus::Failed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaRunHandle {
    pub id: String,
    pub status: RunStatus,
    pub config: SaConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reports: Option<Vec<SensitivityReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorBody>,
}

#[derive(Default)]
struct Inner {
    next_id: u64,
    active: Option<String>,
    runs: BTreeMap<String, SaRunHandle>,
}

#[derive(Default)]
pub struct RunRegistry {
    inner: Mutex<Inner>,
}

impl RunRegistry {
    fn lock(&self) -> std::sync::MutexGuard<'_, Inner> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Queue a run, or return the id of the run holding the slot.
    pub fn start(&self, config: SaConfig) -> Result<SaRunHandle, String> {
        let mut inner = self.lock();
        if let Some(active) = &inner.active {
            return Err(active.clone());
        }
        inner.next_id += 1;
        let id = inner.next_id.to_string();
        let handle = SaRunHandle { id: id.clone(), status: RunStatus::Queued, config, reports: None, error: None };
        inner.active = Some(id.clone());
        inner.runs.insert(id, handle.clone());
        Ok(handle)
    }

    pub fn get(&self, id: &str) -> Option<SaRunHandle> {
        self.lock().runs.get(id).cloned()
    }

    pub fn mark_running(&self, id: &str) {
        if let Some(run) = self.lock().runs.get_mut(id) {
            if run.status == RunStatus::Queued {
                run.status = RunStatus::Running;
            }
        }
    }

    /// Record the outcome and free the slot. Terminal runs are never rewritten.
    pub fn finish(&self, id: &str, outcome: Result<Vec<SensitivityReport>, ErrorBody>) {
        let mut inner = self.lock();
        if let Some(run) = inner.runs.get_mut(id) {
            if !run.status.is_terminal() {
                match outcome {
                    Ok(reports) => {
                        run.status = RunStatus::Done;
                        run.reports = Some(reports);
                    }
                    Err(error) => {
                        run.status = RunStatus::Failed;
                        run.error = Some(error);
                    }
                }
            }
        }
        if inner.active.as_deref() == Some(id) {
            inner.active = None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_slot_lifecycle() {
        let registry = RunRegistry::default();
        let first = registry.start(SaConfig::default()).unwrap();
        assert_eq!((first.id.as_str(), first.status), ("1", RunStatus::Queued));
        assert_eq!(registry.start(SaConfig::default()), Err("1".to_string()));
        registry.mark_running("1");
        assert_eq!(registry.get("1").unwrap().status, RunStatus::Running);
        registry.finish("1", Ok(vec![]));
        assert_eq!(registry.get("1").unwrap().status, RunStatus::Done);

        let second = registry.start(SaConfig::default()).unwrap();
        assert_eq!(second.id, "2");
        assert!(registry.get("3").is_none());
    }

    #[test]
    fn terminal_states_are_final() {
        let registry = RunRegistry::default();
        registry.start(SaConfig::default()).unwrap();
        let failure = ErrorBody { error: "x".into(), detail: "y".into(), fields: vec![] };
        registry.finish("1", Err(failure.clone()));
        registry.finish("1", Ok(vec![]));
        registry.mark_running("1");
        let run = registry.get("1").unwrap();
        assert_eq!((run.status, run.error, run.reports), (RunStatus::Failed, Some(failure), None));
    }
}
