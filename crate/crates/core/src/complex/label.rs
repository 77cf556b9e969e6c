//! Canonical text encoding of nested vertex sets.
//!
//! A vertex of `Bary(K)` is a simplex of `K`, i.e. a set of vertices of `K`.
//! Its label is `{m1,m2,...}` where the member labels are sorted as strings
//! and deduplicated. Since member labels are themselves canonical, the
//! encoding is canonical at every nesting depth.

use std::fmt;

use thiserror::Error;

use super::Vertex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LabelError {
    #[error("unexpected end of label {0:?}")]
    UnexpectedEnd(String),
    #[error("unexpected character {found:?} at byte {at} in label {label:?}")]
    Unexpected { label: String, at: usize, found: char },
    #[error("empty set in label {0:?}")]
    EmptySet(String),
}

/// A parsed subdivision label: either a base vertex or a set of labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NestedLabel {
    Atom(String),
    Set(Vec<NestedLabel>),
}

impl NestedLabel {
    pub fn encode(&self) -> String {
        match self {
            NestedLabel::Atom(a) => a.clone(),
            NestedLabel::Set(members) => {
                let mut parts: Vec<String> = members.iter().map(NestedLabel::encode).collect();
                parts.sort();
                parts.dedup();
                format!("{{{}}}", parts.join(","))
            }
        }
    }

    /// Sorts and deduplicates members at every level.
    pub fn canonical(&self) -> NestedLabel {
        match self {
            NestedLabel::Atom(_) => self.clone(),
            NestedLabel::Set(members) => {
                let mut m: Vec<NestedLabel> = members.iter().map(NestedLabel::canonical).collect();
                m.sort_by_key(NestedLabel::encode);
                m.dedup();
                NestedLabel::Set(m)
            }
        }
    }

    /// Nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            NestedLabel::Atom(_) => 0,
            NestedLabel::Set(m) => 1 + m.iter().map(NestedLabel::depth).max().unwrap_or(0),
        }
    }

    pub fn decode(s: &str) -> Result<NestedLabel, LabelError> {
        let bytes = s.as_bytes();
        let (label, end) = parse(s, bytes, 0)?;
        if end != bytes.len() {
            return Err(LabelError::Unexpected {
                label: s.to_string(),
                at: end,
                found: s[end..].chars().next().unwrap_or(' '),
            });
        }
        Ok(label)
    }
}

impl fmt::Display for NestedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

fn parse(s: &str, b: &[u8], mut i: usize) -> Result<(NestedLabel, usize), LabelError> {
    if i >= b.len() {
        return Err(LabelError::UnexpectedEnd(s.to_string()));
    }
    if b[i] != b'{' {
        let start = i;
        while i < b.len() && !matches!(b[i], b'{' | b'}' | b',') {
            i += 1;
        }
        if i == start {
            return Err(LabelError::Unexpected {
                label: s.to_string(),
                at: i,
                found: b[i] as char,
            });
        }
        return Ok((NestedLabel::Atom(s[start..i].to_string()), i));
    }
    i += 1;
    if i < b.len() && b[i] == b'}' {
        return Err(LabelError::EmptySet(s.to_string()));
    }
    let mut members = Vec::new();
    loop {
        let (m, next) = parse(s, b, i)?;
        members.push(m);
        i = next;
        match b.get(i) {
            Some(b',') => i += 1,
            Some(b'}') => return Ok((NestedLabel::Set(members), i + 1)),
            Some(&c) => {
                return Err(LabelError::Unexpected {
                    label: s.to_string(),
                    at: i,
                    found: c as char,
                })
            }
            None => return Err(LabelError::UnexpectedEnd(s.to_string())),
        }
    }
}

/// Label of the subdivision vertex whose members are `members`.
pub fn encode_set<'a>(members: impl IntoIterator<Item = &'a Vertex>) -> Vertex {
    let mut parts: Vec<&str> = members.into_iter().map(Vertex::label).collect();
    parts.sort_unstable();
    parts.dedup();
    Vertex::new(format!("{{{}}}", parts.join(",")))
}

/// Top-level members of a set label, returned verbatim.
///
/// Returns `None` if the label is not a well-formed set.
pub fn decode_members(v: &Vertex) -> Option<Vec<Vertex>> {
    let s = v.label();
    let b = s.as_bytes();
    if b.len() < 2 || b[0] != b'{' || b[b.len() - 1] != b'}' {
        return None;
    }
    // validates nesting
    NestedLabel::decode(s).ok()?;
    let inner = &s[1..s.len() - 1];
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in inner.bytes().enumerate() {
        match c {
            b'{' => depth += 1,
            b'}' => depth -= 1,
            b',' if depth == 0 => {
                out.push(Vertex::new(&inner[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(Vertex::new(&inner[start..]));
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn atom(s: &str) -> NestedLabel {
        NestedLabel::Atom(s.to_string())
    }

    #[test]
    fn encodes_sorted_at_every_level() {
        let l = NestedLabel::Set(vec![
            NestedLabel::Set(vec![atom("b"), atom("a")]),
            NestedLabel::Set(vec![atom("a")]),
        ]);
        assert_eq!(l.encode(), "{{a,b},{a}}");
        assert_eq!(l.depth(), 2);
    }

    #[test]
    fn decode_members_splits_top_level_only() {
        let v = Vertex::new("{{a,b},{a}}");
        let m = decode_members(&v).unwrap();
        assert_eq!(m, vec![Vertex::new("{a,b}"), Vertex::new("{a}")]);
        assert!(decode_members(&Vertex::new("a")).is_none());
        assert!(decode_members(&Vertex::new("{a,{b}")).is_none());
    }

    #[test]
    fn rejects_malformed() {
        assert!(NestedLabel::decode("{}").is_err());
        assert!(NestedLabel::decode("{a,}").is_err());
        assert!(NestedLabel::decode("{a}b").is_err());
    }

    fn nested() -> impl Strategy<Value = NestedLabel> {
        let leaf = "[a-z][a-z0-9]{0,2}".prop_map(NestedLabel::Atom);
        leaf.prop_recursive(3, 24, 4, |inner| {
            prop::collection::vec(inner, 1..4).prop_map(NestedLabel::Set)
        })
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(l in nested()) {
            let enc = l.encode();
            let back = NestedLabel::decode(&enc).unwrap();
            prop_assert_eq!(back.canonical(), l.canonical());
            prop_assert_eq!(back.encode(), enc);
        }
    }
}
