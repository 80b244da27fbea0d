//! Timed plans and their on-disk text format. One line per action:
//!
//! ```text
//! 70.002: (kid_give c1 kenny toy1 toy1_wp toy1_wp)  [60.000]
//! ```
//!
//! Start and duration carry exactly three decimal digits and two spaces
//! precede the bracketed duration. `;` lines and blank lines are skipped on
//! input.

use crate::state::ActionSig;

#[derive(Debug, Clone, PartialEq)]
pub struct TimedAction {
    pub start: f64,
    pub action: ActionSig,
    pub duration: f64,
}

impl TimedAction {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }

    pub fn render(&self) -> String {
        format!("{:.3}: {}  [{:.3}]", self.start, self.action, self.duration)
    }
}

/// An epsilon-separated timed action list, sorted by start time. Separation
/// is checked by the validator, not enforced on construction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Plan {
    pub actions: Vec<TimedAction>,
}

impl Plan {
    pub fn new(mut actions: Vec<TimedAction>) -> Self {
        actions.sort_by(|a, b| a.start.total_cmp(&b.start));
        Plan { actions }
    }

    /// Completion time of the last action; 0 for the empty plan.
    pub fn makespan(&self) -> f64 {
        self.actions.iter().map(TimedAction::end).fold(0.0, f64::max)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for a in &self.actions {
            s.push_str(&a.render());
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct PlanParseError {
    pub line: u32,
    pub message: String,
}

/// Inverse of [`Plan::render`] on its output range; tolerant of extra
/// whitespace and comment lines.
pub fn parse_plan(text: &str) -> Result<Plan, PlanParseError> {
    let mut actions = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = (idx + 1) as u32;
        let err = |message: String| PlanParseError { line: lineno, message };
        let line = raw.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        let (time_part, rest) = line
            .split_once(':')
            .ok_or_else(|| err("missing ': ' after the start time".to_string()))?;
        let start: f64 = time_part
            .trim()
            .parse()
            .map_err(|_| err(format!("bad start time '{}'", time_part.trim())))?;
        if start < 0.0 {
            return Err(err(format!("negative start time {start}")));
        }
        let rest = rest.trim();
        let open = rest
            .find('(')
            .ok_or_else(|| err("missing '(' before the action".to_string()))?;
        let close = rest
            .find(')')
            .ok_or_else(|| err("missing ')' after the action".to_string()))?;
        if close < open {
            return Err(err("')' before '('".to_string()));
        }
        let mut words = rest[open + 1..close].split_whitespace();
        let name = words
            .next()
            .ok_or_else(|| err("empty action".to_string()))?
            .to_string();
        let args: Vec<String> = words.map(str::to_string).collect();

        let tail = rest[close + 1..].trim();
        let dur_text = tail
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| err("missing bracketed [duration]".to_string()))?;
        let duration: f64 = dur_text
            .trim()
            .parse()
            .map_err(|_| err(format!("bad duration '{dur_text}'")))?;
        if duration <= 0.0 {
            return Err(err(format!("duration must be positive, got {duration}")));
        }
        actions.push(TimedAction { start, action: ActionSig { name, args }, duration });
    }
    Ok(Plan::new(actions))
}
