use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Limit {
    AtMost(f64),
    Above(f64),
    /// Reported, not verified.
    Info,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: Limit,
}

impl Check {
    pub fn at_most(name: &str, value: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value,
            limit: Limit::AtMost(tol),
        }
    }

    pub fn above(name: &str, value: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            value,
            limit: Limit::Above(bound),
        }
    }

    pub fn info(name: &str, value: f64) -> Self {
        Check {
            name: name.into(),
            value,
            limit: Limit::Info,
        }
    }

    /// NaN never passes a verified check.
    pub fn passed(&self) -> bool {
        match self.limit {
            Limit::AtMost(t) => self.value <= t,
            Limit::Above(b) => self.value > b,
            Limit::Info => true,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (bound, verdict) = match self.limit {
            Limit::AtMost(t) => (format!("<= {t:.0e}"), if self.passed() { "ok" } else { "FAILED" }),
            Limit::Above(b) => (format!(">  {b:.0e}"), if self.passed() { "ok" } else { "FAILED" }),
            Limit::Info => (String::new(), ""),
        };
        write!(f, "  {:<36} {:>12.4e}  {:<9} {}", self.name, self.value, bound, verdict)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for n in &self.notes {
            writeln!(f, "  {n}")?;
        }
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        write!(f, "{}", if self.passed() { "result: pass" } else { "result: FAIL" })
    }
}
