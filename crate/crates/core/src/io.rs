//! JSON and JSON-lines formats.
//!
//! Families are JSON lines: one marked set (`["0","1/2","1"]`) or one element
//! (`{"breaks":[["0","0"],...]}`) per line. Blank lines are ignored. All
//! numbers are exact strings.

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::diagnostics::{FiniteMeasure, IntervalChain};
use crate::error::{Error, Result};
use crate::felement::FElement;
use crate::folner::{ElementSet, MarkedFamily};
use crate::partition::MarkedSet;

/// A family read from a JSON-lines file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Marked(MarkedFamily),
    Elements(ElementSet),
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_lines<T: DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    lines(text)
        .map(|(no, l)| serde_json::from_str(l).map_err(|e| Error::Parse(format!("line {no}: {e}"))))
        .collect()
}

pub fn load_marked_family(text: &str) -> Result<MarkedFamily> {
    let items: Vec<MarkedSet> = parse_lines(text)?;
    if items.is_empty() {
        return Err(Error::EmptyFamily);
    }
    Ok(items.into_iter().collect())
}

pub fn load_element_set(text: &str) -> Result<ElementSet> {
    let items: Vec<FElement> = parse_lines(text)?;
    if items.is_empty() {
        return Err(Error::EmptyFamily);
    }
    Ok(items.into_iter().collect())
}

/// Decides the family kind from the first non-blank line.
pub fn load_family(text: &str) -> Result<Family> {
    match lines(text).next() {
        None => Err(Error::EmptyFamily),
        Some((_, l)) if l.starts_with('[') => Ok(Family::Marked(load_marked_family(text)?)),
        Some((_, l)) if l.starts_with('{') => Ok(Family::Elements(load_element_set(text)?)),
        Some((no, _)) => Err(Error::Parse(format!(
            "line {no}: expected a JSON array or object"
        ))),
    }
}

pub fn to_json_lines<'a, T: Serialize + 'a>(items: impl IntoIterator<Item = &'a T>) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item).expect("serializable"));
        out.push('\n');
    }
    out
}

pub fn load_marked_set(text: &str) -> Result<MarkedSet> {
    Ok(serde_json::from_str(text.trim())?)
}

pub fn load_measure(text: &str) -> Result<FiniteMeasure> {
    Ok(serde_json::from_str(text.trim())?)
}

pub fn load_chain(text: &str) -> Result<IntervalChain> {
    Ok(serde_json::from_str(text.trim())?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::felement::generators;

    #[test]
    fn families_round_trip() {
        let z = crate::folner::z_family(&(0..5).collect()).unwrap();
        let text = to_json_lines(z.iter());
        assert_eq!(text.lines().next().unwrap(), r#"["0","3/4","1"]"#);
        assert_eq!(load_family(&text).unwrap(), Family::Marked(z));

        let a: ElementSet = generators().into_iter().collect();
        let text = to_json_lines(a.iter());
        assert_eq!(load_family(&text).unwrap(), Family::Elements(a));
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(load_family(""), Err(Error::EmptyFamily));
        assert_eq!(load_family("\n  \n"), Err(Error::EmptyFamily));
        assert!(matches!(load_family("42"), Err(Error::Parse(_))));
        let err = load_marked_family("[\"0\",\"1\"]\n[\"0\",\"x\",\"1\"]\n").unwrap_err();
        assert!(
            matches!(err, Error::Parse(ref m) if m.starts_with("line 2")),
            "{err:?}"
        );
        assert!(load_marked_set("[\"0\",\"1/2\"]").is_err());
    }
}
