//! Components that no invariant separates, and how the mirror relates them.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::action::ClassAction;
use crate::classifier::Census;
use crate::curve::{CurveComponent, Valency};
use crate::error::{Error, Result};
use crate::invariants::{invariant_key, InvariantKey, Stratum};
use crate::reference;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GenusRange {
    pub min: u32,
    pub max: u32,
}

impl std::fmt::Display for GenusRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.min == self.max {
            write!(f, "{}", self.min)
        } else {
            write!(f, "{}-{}", self.min, self.max)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SideSummary {
    pub classes: usize,
    pub components: usize,
    /// `None` when there are no components.
    pub genus: Option<GenusRange>,
    /// Number of invariant keys shared by two or more components.
    pub ambiguous: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub degree: usize,
    pub abelian: SideSummary,
    pub non_abelian: SideSummary,
}

/// How the mirror acts on the components of one row.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Relationship {
    /// Components sent to themselves.
    pub mirror_closed: usize,
    /// Isomorphism types among the mirror-closed components.
    pub closed_types: usize,
    /// Swapped pairs whose two halves are isomorphic.
    pub symmetric_pairs: usize,
    /// Swapped pairs whose two halves are not isomorphic.
    pub conjugate_pairs: usize,
    /// Components whose mirror image lies outside the row.
    pub unmatched: usize,
}

fn number_word(n: usize) -> String {
    const WORDS: [&str; 11] = [
        "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    ];
    WORDS.get(n).map_or_else(|| n.to_string(), |w| w.to_string())
}

impl Relationship {
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        match self.conjugate_pairs {
            0 => {}
            1 => parts.push("one mirror-conjugate pair".to_string()),
            n => parts.push(format!("{} mirror-conjugate pairs", number_word(n))),
        }
        match self.symmetric_pairs {
            0 => {}
            1 => parts.push("one pair of mirror-symmetric curves, mirroring each other".to_string()),
            n => parts.push(format!(
                "{} pairs of mirror-symmetric curves, mirroring each other",
                number_word(n)
            )),
        }
        let n = self.mirror_closed;
        if n == 1 {
            parts.push("one mirror-closed curve".to_string());
        } else if n > 1 {
            let w = number_word(n);
            parts.push(match self.closed_types {
                1 => format!("{w} identical, mirror-closed curves"),
                k if k == n => format!("{w} distinct, mirror-closed curves"),
                k => format!("{w} mirror-closed curves of {} isomorphism types", number_word(k)),
            });
        }
        if self.unmatched > 0 {
            parts.push(format!("{} curves mirrored outside the row", number_word(self.unmatched)));
        }
        parts.join(" & ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmbiguousRow {
    pub no: String,
    pub abelian: bool,
    pub stratum: Stratum,
    pub index: usize,
    pub valency: Valency,
    pub genus: u32,
    pub components: Vec<u32>,
    pub relationship: Relationship,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisReport {
    pub degree: usize,
    pub summary: Summary,
    pub rows: Vec<AmbiguousRow>,
    /// Disagreements with the published tables, if any.
    pub notes: Vec<String>,
}

/// Whether two sets of classes are isomorphic as sets with the two generators acting.
pub fn isomorphic(a: &[u32], b: &[u32], action: &ClassAction) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(&a0) = a.first() else { return true };
    let (t, s) = (action.phi_t(), action.phi_s());
    b.iter().any(|&b0| {
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        let mut used: BTreeMap<usize, usize> = BTreeMap::new();
        let mut stack = vec![(a0 as usize, b0 as usize)];
        map.insert(a0 as usize, b0 as usize);
        used.insert(b0 as usize, a0 as usize);
        while let Some((p, q)) = stack.pop() {
            for g in [t, s] {
                let (p1, q1) = (g.apply(p), g.apply(q));
                match (map.get(&p1), used.get(&q1)) {
                    (Some(&m), _) if m != q1 => return false,
                    (None, Some(_)) => return false,
                    (None, None) => {
                        map.insert(p1, q1);
                        used.insert(q1, p1);
                        stack.push((p1, q1));
                    }
                    _ => {}
                }
            }
        }
        map.len() == a.len()
    })
}

fn relationship(comps: &[&CurveComponent], comp_of: &[u32], action: &ClassAction) -> Relationship {
    let mut rel = Relationship::default();
    let ids: Vec<u32> = comps.iter().map(|c| c.id).collect();
    let mut closed: Vec<&CurveComponent> = Vec::new();
    for c in comps {
        let image = comp_of[action.mirror().apply(c.base() as usize)];
        if image == c.id {
            closed.push(c);
        } else if !ids.contains(&image) {
            rel.unmatched += 1;
        } else if c.id < image {
            let other = comps.iter().find(|o| o.id == image).expect("image is in the row");
            if isomorphic(&c.members, &other.members, action) {
                rel.symmetric_pairs += 1;
            } else {
                rel.conjugate_pairs += 1;
            }
        }
    }
    rel.mirror_closed = closed.len();
    let mut types: Vec<&CurveComponent> = Vec::new();
    for c in closed {
        if !types.iter().any(|t| isomorphic(&t.members, &c.members, action)) {
            types.push(c);
        }
    }
    rel.closed_types = types.len();
    rel
}

fn side_summary(census: &Census, comps: &[CurveComponent], abelian: bool, ambiguous: usize) -> SideSummary {
    let classes = census.classes().iter().filter(|c| c.abelian == abelian).count();
    let genera: Vec<u32> = comps.iter().filter(|c| c.abelian == abelian).map(|c| c.genus).collect();
    SideSummary {
        classes,
        components: genera.len(),
        genus: genera.iter().min().map(|&min| GenusRange {
            min,
            max: *genera.iter().max().unwrap(),
        }),
        ambiguous,
    }
}

/// Abelian flag negated so abelian rows sort first.
type GroupKey = (bool, usize, Stratum, Valency);

pub fn galois_report(census: &Census, action: &ClassAction, comps: &[CurveComponent]) -> Result<GaloisReport> {
    let d = census.degree();
    if action.len() != census.len() {
        return Err(Error::Invariant("action and census have different sizes".into()));
    }
    let mut groups: BTreeMap<GroupKey, (InvariantKey, Vec<&CurveComponent>)> = BTreeMap::new();
    for c in comps {
        let key = invariant_key(c, census)?;
        // abelian rows first
        let sort = (!key.abelian, key.index, key.stratum.clone(), key.valency.clone());
        groups.entry(sort).or_insert_with(|| (key, Vec::new())).1.push(c);
    }
    let comp_of = crate::curve::component_of(comps, census.len());
    let mut rows = Vec::new();
    for (key, members) in groups.into_values().filter(|(_, m)| m.len() > 1) {
        let relationship = relationship(&members, &comp_of, action);
        rows.push(AmbiguousRow {
            no: format!("{d}-{}", rows.len() + 1),
            abelian: key.abelian,
            stratum: key.stratum,
            index: key.index,
            valency: key.valency,
            genus: key.genus,
            components: members.iter().map(|c| c.id).collect(),
            description: relationship.describe(),
            relationship,
        });
    }
    let amb_ab = rows.iter().filter(|r| r.abelian).count();
    let summary = Summary {
        degree: d,
        abelian: side_summary(census, comps, true, amb_ab),
        non_abelian: side_summary(census, comps, false, rows.len() - amb_ab),
    };
    let notes = compare_with_reference(&summary, &rows);
    Ok(GaloisReport {
        degree: d,
        summary,
        rows,
        notes,
    })
}

fn compare_side(out: &mut Vec<String>, label: &str, got: &SideSummary, want: &reference::ReferenceSide) {
    let genus = got.genus.map_or((0, 0), |g| (g.min, g.max));
    let pairs = [
        ("classes", got.classes, want.classes),
        ("components", got.components, want.components),
        ("ambiguous keys", got.ambiguous, want.ambiguous),
    ];
    for (what, g, w) in pairs {
        if g != w {
            out.push(format!("{label} {what}: computed {g}, published {w}"));
        }
    }
    if genus != want.genus {
        out.push(format!(
            "{label} genus range: computed {}-{}, published {}-{}",
            genus.0, genus.1, want.genus.0, want.genus.1
        ));
    }
}

fn compare_with_reference(summary: &Summary, rows: &[AmbiguousRow]) -> Vec<String> {
    let d = summary.degree;
    let mut out = Vec::new();
    if let Some(r) = reference::summary(d) {
        compare_side(&mut out, "abelian", &summary.abelian, &r.abelian);
        compare_side(&mut out, "non-abelian", &summary.non_abelian, &r.non_abelian);
    }
    let published = reference::rows(d);
    if d == 6 {
        let listed = published.iter().filter(|r| !r.stratum.starts_with('A')).count();
        out.push(format!(
            "published summary counts {} non-abelian ambiguous keys but its table lists {listed} rows",
            reference::summary(6).map_or(0, |s| s.non_abelian.ambiguous)
        ));
    }
    if d == 7 {
        out.push(format!(
            "published text mentions {} exceptional cases but its table lists {} rows",
            reference::DEGREE7_PROSE_CASES,
            published.len()
        ));
    }
    for p in published {
        let (Ok(st), Ok(v)) = (p.stratum.parse::<Stratum>(), p.valency.parse::<Valency>()) else {
            out.push(format!("published row {} cannot be parsed", p.no));
            continue;
        };
        let exact = rows.iter().find(|r| r.stratum == st && r.valency == v && r.index == p.index);
        let same_key: Vec<&AmbiguousRow> =
            rows.iter().filter(|r| r.stratum == st && r.index == p.index).collect();
        let r = match (exact, same_key.as_slice()) {
            (Some(r), _) => r,
            (None, [r]) => {
                out.push(format!(
                    "row {}: valency {}, published row {} has {}",
                    r.no, r.valency, p.no, p.valency
                ));
                r
            }
            _ => {
                out.push(format!("published row {} ({} index {}) not found", p.no, p.stratum, p.index));
                continue;
            }
        };
        if r.components.len() != p.components {
            out.push(format!(
                "row {}: {} components, published row {} has {}",
                r.no,
                r.components.len(),
                p.no,
                p.components
            ));
        }
        if r.description != p.relationship {
            out.push(format!(
                "row {}: \"{}\", published row {} says \"{}\"",
                r.no, r.description, p.no, p.relationship
            ));
        }
    }
    if !published.is_empty() {
        for r in rows {
            let listed = published
                .iter()
                .any(|p| p.index == r.index && p.stratum.parse::<Stratum>().ok().as_ref() == Some(&r.stratum));
            if !listed {
                out.push(format!("row {} ({} index {}) is not in the published table", r.no, r.stratum, r.index));
            }
        }
    }
    out
}

impl GaloisReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Invariant(e.to_string()))
    }

    /// Columns `No., stratum, index, valency, relationship`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Invariant(e.to_string());
        w.write_record(["No.", "stratum", "index", "valency", "relationship"]).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.no.clone(),
                r.stratum.to_string(),
                r.index.to_string(),
                r.valency.to_string(),
                r.description.clone(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let side = |label: &str, x: &SideSummary| {
            format!(
                "{label:<12} classes={} components={} genus={} ambiguous={}\n",
                x.classes,
                x.components,
                x.genus.map_or("-".to_string(), |g| g.to_string()),
                x.ambiguous
            )
        };
        let _ = writeln!(s, "degree {}", self.degree);
        s += &side("abelian", &self.summary.abelian);
        s += &side("non-abelian", &self.summary.non_abelian);
        if !self.rows.is_empty() {
            let cells: Vec<[String; 5]> = self
                .rows
                .iter()
                .map(|r| {
                    [
                        r.no.clone(),
                        r.stratum.to_string(),
                        r.index.to_string(),
                        r.valency.to_string(),
                        r.description.clone(),
                    ]
                })
                .collect();
            let head = ["No.", "stratum", "index", "valency", "relationship"].map(String::from);
            let mut width = [0usize; 4];
            for row in std::iter::once(&head).chain(&cells) {
                for k in 0..4 {
                    width[k] = width[k].max(row[k].chars().count());
                }
            }
            s.push('\n');
            for row in std::iter::once(&head).chain(&cells) {
                for k in 0..4 {
                    let _ = write!(s, "{:<w$}  ", row[k], w = width[k]);
                }
                let _ = writeln!(s, "{}", row[4]);
            }
        }
        if !self.notes.is_empty() {
            s.push('\n');
            for n in &self.notes {
                let _ = writeln!(s, "note: {n}");
            }
        }
        s
    }
}
