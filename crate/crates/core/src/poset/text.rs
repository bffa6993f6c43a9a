//! The `poset v1` text format.
//!
//! ```text
//! poset v1
//! elements a b c d
//! cover a b
//! cover c d
//! ```
//!
//! Line one is the literal header, line two names the elements (unique,
//! whitespace-separated), and each further line declares one cover `a < b`.
//! The transitive closure is computed on load; a cycle is a load error.

use super::Poset;
use crate::error::{Error, Result};

pub fn parse_poset_text(input: &str) -> Result<Poset> {
    let mut lines = input.lines().map(str::trim).filter(|l| !l.is_empty());
    match lines.next() {
        Some("poset v1") => {}
        Some(other) => {
            return Err(Error::Parse(format!(
                "expected header `poset v1`, found `{other}`"
            )))
        }
        None => return Err(Error::Parse("empty poset file".into())),
    }
    let names: Vec<String> = match lines.next() {
        Some(line) => {
            let mut parts = line.split_whitespace();
            if parts.next() != Some("elements") {
                return Err(Error::Parse(format!(
                    "expected `elements <name>...`, found `{line}`"
                )));
            }
            parts.map(str::to_string).collect()
        }
        None => return Err(Error::Parse("missing `elements` line".into())),
    };
    if names.is_empty() {
        return Err(Error::Parse("no elements declared".into()));
    }
    for (i, name) in names.iter().enumerate() {
        if names[..i].contains(name) {
            return Err(Error::DuplicateEntry(name.clone()));
        }
    }
    let index = |name: &str| -> Result<usize> {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown element `{name}`")))
    };
    let mut covers = Vec::new();
    for line in lines {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("cover") => {}
            Some(other) => {
                return Err(Error::Parse(format!(
                    "expected `cover <a> <b>`, found `{other} ...`"
                )))
            }
            None => unreachable!("blank lines were filtered"),
        }
        let a = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("cover line too short: `{line}`")))?;
        let b = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("cover line too short: `{line}`")))?;
        if parts.next().is_some() {
            return Err(Error::Parse(format!("trailing tokens on `{line}`")));
        }
        covers.push((index(a)?, index(b)?));
    }
    let mut poset = Poset::from_covers(names.len(), &covers)?;
    poset.set_labels(names);
    Ok(poset)
}

/// Renders a poset in the `poset v1` format, one cover per line.
pub fn format_poset_text(p: &Poset) -> String {
    let names: Vec<String> = (0..p.len()).map(|i| p.label(i)).collect();
    let mut out = String::from("poset v1\n");
    out.push_str("elements ");
    out.push_str(&names.join(" "));
    out.push('\n');
    for (lo, hi) in p.covers() {
        out.push_str(&format!("cover {} {}\n", names[lo], names[hi]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_small_file() {
        let p = parse_poset_text("poset v1\nelements x y z\ncover x y\ncover y z\n").unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.less(0, 2));
        assert_eq!(p.label(2), "z");
    }

    #[test]
    fn round_trips() {
        let b2 = Poset::boolean_lattice(2, true).unwrap();
        let text = format_poset_text(&b2);
        assert_eq!(parse_poset_text(&text).unwrap(), b2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_poset_text("").is_err());
        assert!(parse_poset_text("poset v2\nelements a\n").is_err());
        assert!(parse_poset_text("poset v1\nelements a a\n").is_err());
        assert!(parse_poset_text("poset v1\nelements a b\ncover a c\n").is_err());
        assert!(parse_poset_text("poset v1\nelements a b\ncover a b\ncover b a\n").is_err());
    }
}
