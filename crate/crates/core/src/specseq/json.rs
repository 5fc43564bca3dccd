//! Chart format: entries as a list sorted by `(s, t)`, each with its
//! value key (`dim`, `group`, `hom_set`, `marker`) inline.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Entry, InjectedDifferential, Obstruction, Page, PageWindow, Value, CONVERGENCE_CAVEAT};

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    s: usize,
    t: i64,
    #[serde(flatten)]
    value: Value,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    window_limited: bool,
    provenance: String,
}

#[derive(Serialize, Deserialize)]
struct PageRepr {
    r: usize,
    window: PageWindow,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vanishing_line: Option<usize>,
    entries: Vec<EntryRepr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    differentials: Vec<InjectedDifferential>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    obstructions: Vec<Obstruction>,
    #[serde(default)]
    caveat: String,
}

impl Serialize for Page {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        PageRepr {
            r: self.r,
            window: self.window,
            vanishing_line: self.vanishing_line,
            entries: self
                .entries()
                .map(|(&(s, t), e)| EntryRepr {
                    s,
                    t,
                    value: e.value.clone(),
                    window_limited: e.window_limited,
                    provenance: e.provenance.clone(),
                })
                .collect(),
            differentials: self.differentials.clone(),
            obstructions: self.obstructions.clone(),
            caveat: CONVERGENCE_CAVEAT.to_string(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Page {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = PageRepr::deserialize(de)?;
        let mut entries = BTreeMap::new();
        for e in repr.entries {
            if !repr.window.contains(e.s, e.t) {
                return Err(serde::de::Error::custom(format!(
                    "entry ({}, {}) outside the window",
                    e.s, e.t
                )));
            }
            if e.value.is_zero() && !e.window_limited {
                continue;
            }
            let previous = entries.insert(
                (e.s, e.t),
                Entry {
                    value: e.value,
                    window_limited: e.window_limited,
                    provenance: e.provenance,
                },
            );
            if previous.is_some() {
                return Err(serde::de::Error::custom(format!(
                    "entry ({}, {}) given twice",
                    e.s, e.t
                )));
            }
        }
        let mut page = Page::from_parts(repr.r, repr.window, entries);
        page.differentials = repr.differentials;
        page.obstructions = repr.obstructions;
        page.vanishing_line = repr.vanishing_line;
        Ok(page)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ConstraintStatus;
    use crate::exactlin::AbelianGroupDescriptor as G;
    use crate::specseq::page::int_rows;

    fn sample() -> Page {
        let mut p = Page::new(
            2,
            PageWindow {
                s_max: 4,
                t_min: 0,
                t_max: 6,
            },
        )
        .with_vanishing_line(1);
        p.set(
            0,
            0,
            Value::HomSet {
                parameters: vec!["a:u".into()],
                constraints: ConstraintStatus::Polynomials(vec!["a:u^2".into()]),
            },
            "hom",
        )
        .unwrap();
        p.set(1, 1, Value::Group(G::cyclic(2)), "group").unwrap();
        p.set(1, 4, Value::Dim(3), "dims").unwrap();
        p.set(2, 2, Value::unidentified(), "none").unwrap();
        p.insert(
            0,
            2,
            Entry {
                value: Value::Dim(0),
                window_limited: true,
                provenance: "edge".into(),
            },
        )
        .unwrap();
        p.with_differentials(vec![InjectedDifferential::new(2, (0, 2), int_rows(&[]), "c")
            .with_target_label("x")])
    }

    #[test]
    fn entry_layout() {
        let mut p = Page::new(
            2,
            PageWindow {
                s_max: 4,
                t_min: 0,
                t_max: 4,
            },
        );
        p.set(1, 1, Value::Group(G::cyclic(2)), "h").unwrap();
        let v = serde_json::to_value(&p).unwrap();
        let e = &v["entries"][0];
        assert_eq!(e["s"], 1);
        assert_eq!(e["t"], 1);
        assert_eq!(e["group"], serde_json::json!({"free_rank": 0, "torsion": [2]}));
    }

    #[test]
    fn round_trip() {
        let p = sample();
        let text = serde_json::to_string_pretty(&p).unwrap();
        let back: Page = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    }

    #[test]
    fn rationals_are_strings() {
        let d = InjectedDifferential::new(
            2,
            (0, 3),
            vec![vec![crate::Rational::new(3.into(), 2.into())]],
            "c",
        );
        let v = serde_json::to_value(&d).unwrap();
        assert_eq!(v["matrix"], serde_json::json!([["3/2"]]));
        let back: InjectedDifferential = serde_json::from_value(v).unwrap();
        assert_eq!(back, d);
    }
}
