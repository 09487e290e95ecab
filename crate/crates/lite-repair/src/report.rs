//! Line-oriented key/value reports.
//!
//! ```text
//! strategy: nd
//! repair:
//!   A(a)
//!   A(b)
//! answers: {}
//! ```
//!
//! Scalars are `key: value`; lists put one item per line, indented by two
//! spaces, or `key: {}` when empty. Sections nest the same way.

use std::fmt::{self, Display, Write as _};

#[derive(Clone, Debug, PartialEq)]
enum Entry {
    Scalar(String, String),
    List(String, Vec<String>),
    Section(String, Report),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    entries: Vec<Entry>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn scalar(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.entries.push(Entry::Scalar(key.into(), value.to_string()));
        self
    }

    pub fn list<T: Display>(&mut self, key: &str, items: impl IntoIterator<Item = T>) -> &mut Self {
        self.entries.push(Entry::List(
            key.into(),
            items.into_iter().map(|i| i.to_string()).collect(),
        ));
        self
    }

    pub fn section(&mut self, key: &str, body: Report) -> &mut Self {
        self.entries.push(Entry::Section(key.into(), body));
        self
    }

    fn write(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        for e in &self.entries {
            match e {
                Entry::Scalar(k, v) => {
                    let _ = writeln!(out, "{pad}{k}: {v}");
                }
                Entry::List(k, items) if items.is_empty() => {
                    let _ = writeln!(out, "{pad}{k}: {{}}");
                }
                Entry::List(k, items) => {
                    let _ = writeln!(out, "{pad}{k}:");
                    for i in items {
                        let _ = writeln!(out, "{pad}  {i}");
                    }
                }
                Entry::Section(k, body) => {
                    let _ = writeln!(out, "{pad}{k}:");
                    body.write(out, depth + 1);
                }
            }
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, 0);
        f.write_str(&s)
    }
}

/// Fixed six-decimal rendering used for every ratio in reports and CSV.
pub fn ratio(value: f64) -> String {
    format!("{value:.6}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout() {
        let mut inner = Report::new();
        inner.scalar("cr", 2);
        let mut r = Report::new();
        r.scalar("strategy", "nd")
            .list("repair", ["A(a)", "A(b)"])
            .list::<&str>("answers", [])
            .section("metrics", inner);
        assert_eq!(
            r.to_string(),
            "strategy: nd\nrepair:\n  A(a)\n  A(b)\nanswers: {}\nmetrics:\n  cr: 2\n"
        );
    }
}
