//! Reports: ordered sections of key/value fields, tables and notes,
//! rendered as JSON or aligned plain text.

use std::fmt::Write as _;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Key/value pairs kept in insertion order; serialised as a JSON object.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fields(pub Vec<(String, String)>);

impl Serialize for Fields {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, headers: &[&str]) -> Self {
        Table { name: name.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Value in column `header` of the first row whose first cell is `key`.
    pub fn lookup(&self, key: &str, header: &str) -> Option<&str> {
        let col = self.headers.iter().position(|h| h == header)?;
        self.rows.iter().find(|r| r[0] == key).map(|r| r[col].as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: String,
    #[serde(skip_serializing_if = "is_empty_fields")]
    pub fields: Fields,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn is_empty_fields(f: &Fields) -> bool {
    f.0.is_empty()
}

impl Section {
    pub fn new(name: impl Into<String>) -> Self {
        Section { name: name.into(), ..Default::default() }
    }

    pub fn field(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.fields.0.push((key.into(), value.to_string()));
        self
    }

    pub fn table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), sections: vec![] }
    }

    pub fn push(&mut self, s: Section) {
        self.sections.push(s);
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Field `key` of section `section`.
    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.section(section)?.get(key)
    }

    pub fn table(&self, section: &str, table: &str) -> Option<&Table> {
        self.section(section)?.tables.iter().find(|t| t.name == table)
    }

    /// All notes of all sections.
    pub fn notes(&self) -> impl Iterator<Item = &str> {
        self.sections.iter().flat_map(|s| s.notes.iter().map(String::as_str))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("reports serialise") + "\n",
            Format::Text => self.to_text(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.title);
        for s in &self.sections {
            let _ = writeln!(out, "\n[{}]", s.name);
            let width = s.fields.0.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
            for (k, v) in &s.fields.0 {
                let _ = writeln!(out, "  {k:<width$}  {v}");
            }
            for t in &s.tables {
                if !t.name.is_empty() {
                    let _ = writeln!(out, "  {}:", t.name);
                }
                render_table(&mut out, t);
            }
            for n in &s.notes {
                let _ = writeln!(out, "  note: {n}");
            }
        }
        out
    }
}

fn render_table(out: &mut String, t: &Table) {
    let mut widths: Vec<usize> = t.headers.iter().map(|h| h.chars().count()).collect();
    for r in &t.rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        format!("    {}", padded.join("  ").trim_end())
    };
    let _ = writeln!(out, "{}", line(&t.headers));
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    let _ = writeln!(out, "{}", line(&rule));
    for r in &t.rows {
        let _ = writeln!(out, "{}", line(r));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut t = Table::new("dims", &["k", "dim"]);
        t.push(vec!["1".into(), "2".into()]);
        t.push(vec!["10".into(), "58".into()]);
        let mut r = Report::new("sample");
        r.push(Section::new("ring").field("zeta", 1).field("alpha", "2").table(t).note("n"));
        r
    }

    #[test]
    fn json_keeps_field_order() {
        let json = sample().render(Format::Json);
        assert!(json.find("zeta").unwrap() < json.find("alpha").unwrap());
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["sections"][0]["fields"]["alpha"], "2");
    }

    #[test]
    fn text_is_aligned() {
        let text = sample().to_text();
        assert!(text.contains("  zeta   1\n  alpha  2\n"));
        assert!(text.contains("    k   dim\n    --  ---\n    1   2\n    10  58\n"));
    }

    #[test]
    fn lookups() {
        let r = sample();
        assert_eq!(r.get("ring", "alpha"), Some("2"));
        assert_eq!(r.table("ring", "dims").unwrap().lookup("10", "dim"), Some("58"));
    }
}
