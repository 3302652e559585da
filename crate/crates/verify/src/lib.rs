//! Minimal reporting harness for the acceptance target: each criterion
//! prints one `PASS`/`FAIL` line with its measured values and wall time.

use std::time::{Duration, Instant};

pub struct Outcome {
    pub ok: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, detail: detail.into() }
    }
}

#[derive(Default)]
pub struct Report {
    results: Vec<(u32, bool)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs `check`, failing it as well when it exceeds `budget`.
    pub fn criterion(&mut self, id: u32, title: &str, budget: Option<Duration>, check: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                Outcome::new(false, format!("panicked: {msg}"))
            });
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let ok = outcome.ok && in_time;
        let budget_note = match budget {
            Some(b) if !in_time => format!(" (over budget {:.0} s)", b.as_secs_f64()),
            Some(b) => format!(" (budget {:.0} s)", b.as_secs_f64()),
            None => String::new(),
        };
        println!(
            "{} [{:>2}] {title}: {} [{:.2} s{budget_note}]",
            if ok { "PASS" } else { "FAIL" },
            id,
            outcome.detail,
            elapsed.as_secs_f64()
        );
        self.results.push((id, ok));
    }

    pub fn failed(&self) -> Vec<u32> {
        self.results.iter().filter(|(_, ok)| !ok).map(|(id, _)| *id).collect()
    }

    /// Prints the summary; returns `true` when every criterion passed.
    pub fn finish(&self) -> bool {
        let failed = self.failed();
        println!(
            "acceptance: {} passed, {} failed{}",
            self.results.len() - failed.len(),
            failed.len(),
            if failed.is_empty() { String::new() } else { format!(" (criteria {failed:?})") }
        );
        failed.is_empty()
    }
}

/// `|actual − expected| ≤ tol`, formatted for the report line.
pub fn within(label: &str, actual: f64, expected: f64, tol: f64) -> (bool, String) {
    let ok = (actual - expected).abs() <= tol;
    (ok, format!("{label} = {actual:.6} (target {expected} ± {tol})"))
}
