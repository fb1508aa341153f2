//! Sessions: a linear history of snapshots with a cursor.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use uuid::Uuid;

use relim_problems::{format_problem, Limits, Problem, Result};

use crate::ops::{execute, Action, ActionResult, Initial};

pub fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

/// One history entry: the action that produced the snapshot (none for the first).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub snapshot: Problem,
    #[serde(default)]
    pub action: Option<Action>,
    #[serde(default)]
    pub summary: Value,
    pub timestamp_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: Uuid,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub notes: String,
    pub initial: Initial,
    pub history: Vec<Entry>,
    pub cursor: usize,
    pub created_ms: u64,
    pub updated_ms: u64,
}

/// A difference found by [`Session::replay`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayDiff {
    pub index: usize,
    pub field: String,
    pub stored: String,
    pub replayed: String,
}

impl Session {
    pub fn create(initial: Initial, name: String, notes: String) -> Result<Session> {
        let snapshot = initial.problem()?;
        let now = now_ms();
        Ok(Session {
            id: Uuid::new_v4(),
            name,
            notes,
            initial,
            history: vec![Entry { snapshot, action: None, summary: Value::Null, timestamp_ms: now }],
            cursor: 0,
            created_ms: now,
            updated_ms: now,
        })
    }

    pub fn current(&self) -> &Problem {
        &self.history[self.cursor].snapshot
    }

    /// Runs `action` at the cursor; the result replaces everything after the cursor.
    pub fn apply(&mut self, action: Action, limits: &Limits) -> Result<ActionResult> {
        let result = execute(&action, self.current(), limits)?;
        self.history.truncate(self.cursor + 1);
        self.history.push(Entry {
            snapshot: result.snapshot.clone(),
            action: Some(action),
            summary: result.summary.clone(),
            timestamp_ms: now_ms(),
        });
        self.cursor = self.history.len() - 1;
        self.updated_ms = now_ms();
        Ok(result)
    }

    pub fn seek(&mut self, cursor: usize) -> Result<()> {
        if cursor >= self.history.len() {
            return Err(relim_problems::Error::Invalid(format!(
                "cursor {cursor} is outside the history of length {}",
                self.history.len()
            )));
        }
        self.cursor = cursor;
        self.updated_ms = now_ms();
        Ok(())
    }

    /// Structural checks applied to sessions read from disk.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.history.is_empty() {
            return Err("empty history".into());
        }
        if self.cursor >= self.history.len() {
            return Err(format!("cursor {} outside history of length {}", self.cursor, self.history.len()));
        }
        if self.history[0].action.is_some() {
            return Err("the first entry has an action".into());
        }
        if let Some(k) = self.history.iter().skip(1).position(|e| e.action.is_none()) {
            return Err(format!("entry {} has no action", k + 1));
        }
        Ok(())
    }

    /// Rebuilds every snapshot from the initial spec and the recorded actions
    /// and lists where the canonical texts or summaries differ.
    pub fn replay(&self, limits: &Limits) -> Result<Vec<ReplayDiff>> {
        let mut diffs = Vec::new();
        let mut current = self.initial.problem()?;
        let mut compare = |index: usize, field: &str, stored: String, replayed: String| {
            if stored != replayed {
                diffs.push(ReplayDiff { index, field: field.into(), stored, replayed });
            }
        };
        compare(0, "snapshot", format_problem(&self.history[0].snapshot), format_problem(&current));
        for (index, entry) in self.history.iter().enumerate().skip(1) {
            let action = entry.action.as_ref().expect("validated sessions record every action");
            let result = execute(action, &current, limits)?;
            compare(index, "snapshot", format_problem(&entry.snapshot), format_problem(&result.snapshot));
            compare(index, "summary", entry.summary.to_string(), result.summary.to_string());
            current = result.snapshot;
        }
        Ok(diffs)
    }
}
