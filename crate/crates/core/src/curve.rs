//! Teichmüller curves as orbits of the class action: valency lists, genus, coset
//! representatives and stabilizer generators, and a graph export of the fundamental-domain
//! copies.

use std::collections::VecDeque;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::action::{ClassAction, Order3};
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Cycle types of the order-3 element, of `S` and of `T` on one component, each sorted
/// descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Valency {
    pub order3: Vec<usize>,
    pub order2: Vec<usize>,
    pub cusps: Vec<usize>,
}

impl Valency {
    /// Total number of cycles over the three lists.
    pub fn cycle_count(&self) -> usize {
        self.order3.len() + self.order2.len() + self.cusps.len()
    }
}

fn write_multiset(f: &mut fmt::Formatter<'_>, parts: &[usize]) -> fmt::Result {
    let mut first = true;
    let mut k = 0;
    while k < parts.len() {
        let run = parts[k..].iter().take_while(|&&p| p == parts[k]).count();
        if !first {
            f.write_str(",")?;
        }
        first = false;
        if run > 1 {
            write!(f, "{}^{}", parts[k], run)?;
        } else {
            write!(f, "{}", parts[k])?;
        }
        k += run;
    }
    Ok(())
}

impl fmt::Display for Valency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_multiset(f, &self.order3)?;
        f.write_str("|")?;
        write_multiset(f, &self.order2)?;
        f.write_str("|")?;
        write_multiset(f, &self.cusps)?;
        f.write_str(")")
    }
}

/// Parses `a^k,b,…` into a descending multiset.
fn parse_multiset(s: &str) -> Option<Vec<usize>> {
    let mut out: Vec<usize> = Vec::new();
    for tok in s.split(',').map(str::trim) {
        let (v, k): (usize, usize) = match tok.split_once('^') {
            Some((v, k)) => (v.trim().parse().ok()?, k.trim().parse().ok()?),
            None => (tok.parse().ok()?, 1),
        };
        out.extend(std::iter::repeat_n(v, k));
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    Some(out)
}

impl FromStr for Valency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invariant(format!("cannot parse valency {s:?}"));
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r: &str| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split(['|', '∣']).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lists: Vec<Vec<usize>> = parts.iter().map(|p| parse_multiset(p).ok_or_else(bad)).collect::<Result<_>>()?;
        Ok(Valency {
            order3: lists[0].clone(),
            order2: lists[1].clone(),
            cusps: lists[2].clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveComponent {
    pub id: u32,
    pub degree: usize,
    pub abelian: bool,
    /// Class ids, ascending.
    pub members: Vec<u32>,
    pub valency: Valency,
    pub genus: u32,
}

impl CurveComponent {
    pub fn index(&self) -> usize {
        self.members.len()
    }

    pub fn base(&self) -> u32 {
        self.members[0]
    }

    /// Cusp widths, the lengths of the `T`-cycles.
    pub fn cusp_widths(&self) -> &[usize] {
        &self.valency.cusps
    }
}

fn cycle_type_on(p: &Permutation, members: &[u32]) -> Vec<usize> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &m in members {
        let mut cur = m as usize;
        let mut len = 0;
        while seen.insert(cur) {
            cur = p.apply(cur);
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

pub fn valency_list(members: &[u32], action: &ClassAction) -> Result<Valency> {
    let (_, r) = action.order3()?;
    Ok(Valency {
        order3: cycle_type_on(&r, members),
        order2: cycle_type_on(action.phi_s(), members),
        cusps: cycle_type_on(action.phi_t(), members),
    })
}

/// `1 + (index − n)/2` with `n` the total number of cycles.
pub fn curve_genus(index: usize, valency: &Valency) -> Result<u32> {
    let n = valency.cycle_count() as i64;
    let twice = 2 + index as i64 - n;
    if twice < 0 || twice % 2 != 0 {
        return Err(Error::Invariant(format!(
            "index {index} with valency {valency} gives a non-integral genus"
        )));
    }
    Ok((twice / 2) as u32)
}

/// Orbits of `⟨phi_T, phi_S⟩`, ordered by smallest member.
pub fn components(action: &ClassAction, abelian: &[bool]) -> Result<Vec<CurveComponent>> {
    let n = action.len();
    let mut comp = vec![u32::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != u32::MAX {
            continue;
        }
        let id = out.len() as u32;
        comp[s] = id;
        let mut members = vec![s as u32];
        let mut k = 0;
        while k < members.len() {
            let a = members[k] as usize;
            k += 1;
            for b in [action.phi_t().apply(a), action.phi_s().apply(a)] {
                if comp[b] == u32::MAX {
                    comp[b] = id;
                    members.push(b as u32);
                }
            }
        }
        members.sort_unstable();
        let valency = valency_list(&members, action)?;
        let genus = curve_genus(members.len(), &valency)?;
        out.push(CurveComponent {
            id,
            degree: action.degree(),
            abelian: abelian[s],
            members,
            valency,
            genus,
        });
    }
    Ok(out)
}

/// Component id of every class.
pub fn component_of(components: &[CurveComponent], classes: usize) -> Vec<u32> {
    let mut out = vec![u32::MAX; classes];
    for c in components {
        for &m in &c.members {
            out[m as usize] = c.id;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    T,
    S,
    TInv,
    SInv,
}

impl Letter {
    fn inverse(self) -> Letter {
        match self {
            Letter::T => Letter::TInv,
            Letter::TInv => Letter::T,
            Letter::S => Letter::SInv,
            Letter::SInv => Letter::S,
        }
    }
}

/// A word in the generators, acting on classes from the right: letters apply left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Free reduction together with `S² = 1` (so `S⁻¹ = S`).
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for &l in &self.0 {
            let l = if l == Letter::SInv { Letter::S } else { l };
            match out.last() {
                Some(&p) if p == l.inverse() || (p == Letter::S && l == Letter::S) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, action: &ClassAction, class: u32) -> u32 {
        let (tinv, sinv) = (action.phi_t().inverse(), action.phi_s().inverse());
        self.0.iter().fold(class as usize, |c, l| match l {
            Letter::T => action.phi_t().apply(c),
            Letter::S => action.phi_s().apply(c),
            Letter::TInv => tinv.apply(c),
            Letter::SInv => sinv.apply(c),
        }) as u32
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let names: Vec<&str> = self
            .0
            .iter()
            .map(|l| match l {
                Letter::T => "T",
                Letter::S => "S",
                Letter::TInv => "T^-1",
                Letter::SInv => "S^-1",
            })
            .collect();
        f.write_str(&names.join(" "))
    }
}

/// Coset representatives of the stabilizer of the base class and generators of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VeechData {
    pub base: u32,
    /// `(class, word)` with `base·word = class`, in tree order.
    pub representatives: Vec<(u32, Word)>,
    /// Nontrivial Schreier generators after reduction.
    pub generators: Vec<Word>,
    /// Schreier generators before pruning; always `index + 1`.
    pub schreier_count: usize,
}

pub fn veech_data(comp: &CurveComponent, base: u32, action: &ClassAction) -> Result<VeechData> {
    if !comp.members.contains(&base) {
        return Err(Error::Invariant(format!("class {base} is not in component {}", comp.id)));
    }
    let n = action.len();
    let mut rep: Vec<Option<Word>> = vec![None; n];
    rep[base as usize] = Some(Word::default());
    let mut order = vec![base];
    let mut queue = VecDeque::from([base]);
    let mut tree = std::collections::HashSet::new();
    while let Some(c) = queue.pop_front() {
        for (l, g) in [(Letter::T, action.phi_t()), (Letter::S, action.phi_s())] {
            let t = g.apply(c as usize) as u32;
            if rep[t as usize].is_none() {
                let w = rep[c as usize].as_ref().expect("visited").concat(&Word(vec![l]));
                rep[t as usize] = Some(w);
                tree.insert((c, l));
                order.push(t);
                queue.push_back(t);
            }
        }
    }
    let mut generators = Vec::new();
    let mut schreier_count = 0;
    for &c in &order {
        for (l, g) in [(Letter::T, action.phi_t()), (Letter::S, action.phi_s())] {
            if tree.contains(&(c, l)) {
                continue;
            }
            schreier_count += 1;
            let t = g.apply(c as usize);
            let w = rep[c as usize]
                .as_ref()
                .expect("visited")
                .concat(&Word(vec![l]))
                .concat(&rep[t].as_ref().expect("visited").inverse())
                .reduced();
            if !w.is_empty() && !generators.contains(&w) {
                generators.push(w);
            }
        }
    }
    let representatives = order
        .iter()
        .map(|&c| (c, rep[c as usize].clone().expect("visited")))
        .collect();
    Ok(VeechData {
        base,
        representatives,
        generators,
        schreier_count,
    })
}

/// Graphviz description of a component: one triangle per class, `T` edges directed, `S`
/// edges undirected, fixed points of `S` and of the order-3 element marked as cone points,
/// cusps listed with their widths.
pub fn export_diagram(comp: &CurveComponent, action: &ClassAction) -> Result<String> {
    let (kind, r) = action.order3()?;
    let mut out = String::new();
    let _ = writeln!(out, "digraph component_{} {{", comp.id);
    let _ = writeln!(
        out,
        "  label=\"degree={} comp={} abelian={} index={} valency={} genus={} order3={}\";",
        comp.degree,
        comp.id,
        comp.abelian as u8,
        comp.index(),
        comp.valency,
        comp.genus,
        match kind {
            Order3::ST => "ST",
            Order3::TS => "TS",
        }
    );
    let _ = writeln!(out, "  node [shape=triangle];");
    for &m in &comp.members {
        let m = m as usize;
        let mut cones = Vec::new();
        if action.phi_s().apply(m) == m {
            cones.push("i");
        }
        if r.apply(m) == m {
            cones.push("rho");
        }
        if cones.is_empty() {
            let _ = writeln!(out, "  c{m} [label=\"{m}\"];");
        } else {
            let _ = writeln!(out, "  c{m} [label=\"{m}\", xlabel=\"cone:{}\"];", cones.join(","));
        }
    }
    for &m in &comp.members {
        let m = m as usize;
        let _ = writeln!(out, "  c{m} -> c{} [label=\"T\"];", action.phi_t().apply(m));
        let s = action.phi_s().apply(m);
        if m <= s {
            let _ = writeln!(out, "  c{m} -> c{s} [label=\"S\", dir=none];");
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut k = 0;
    for &m in &comp.members {
        if seen.contains(&m) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = m as usize;
        while seen.insert(cur as u32) {
            cycle.push(cur);
            cur = action.phi_t().apply(cur);
        }
        let _ = writeln!(
            out,
            "  cusp{k} [shape=plaintext, label=\"cusp width {}\"];",
            cycle.len()
        );
        for c in cycle {
            let _ = writeln!(out, "  cusp{k} -> c{c} [style=dotted, arrowhead=none];");
        }
        k += 1;
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::census;

    fn setup(d: usize) -> (ClassAction, Vec<CurveComponent>) {
        let c = census(d).unwrap();
        let a = ClassAction::compute(&c).unwrap();
        let ab: Vec<bool> = c.classes().iter().map(|k| k.abelian).collect();
        let comps = components(&a, &ab).unwrap();
        (a, comps)
    }

    /// Genus of the surface glued from one triangle per class, counted by Euler
    /// characteristic. Each triangle has an order-3 corner `ρ`, its rotation `ρ²`, the
    /// midpoint `i` of the `S`-edge and the cusp `∞`.
    fn euler_genus(comp: &CurveComponent, a: &ClassAction) -> u32 {
        let n = comp.index();
        let pos = |c: u32| comp.members.binary_search(&c).unwrap();
        let mut parent: Vec<usize> = (0..2 * n).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            let mut i = i;
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            p[ra] = rb;
        };
        for &m in &comp.members {
            let k = pos(m);
            let t = pos(a.phi_t().apply(m as usize) as u32);
            let s = pos(a.phi_s().apply(m as usize) as u32);
            union(&mut parent, 2 * k, 2 * t + 1);
            union(&mut parent, 2 * k + 1, 2 * s);
        }
        let rho = (0..2 * n).filter(|&i| find(&mut parent, i) == i).count();
        let elliptic2 = comp
            .members
            .iter()
            .filter(|&&m| {
                let s = a.phi_s().apply(m as usize) as u32;
                m <= s
            })
            .count();
        let cusps = comp.valency.cusps.len();
        let chi = (rho + elliptic2 + cusps) as i64 - n as i64;
        ((2 - chi) / 2) as u32
    }

    #[test]
    fn component_counts_small() {
        let expected = [(1, 0), (1, 1), (2, 1), (5, 6), (8, 13)];
        for (d, &(ab, nab)) in (1..=5).zip(expected.iter()) {
            let (_, comps) = setup(d);
            let a = comps.iter().filter(|c| c.abelian).count();
            assert_eq!((a, comps.len() - a), (ab, nab), "d={d}");
        }
    }

    #[test]
    fn valency_and_genus_invariants() {
        for d in 1..=5 {
            let (a, comps) = setup(d);
            let total: usize = comps.iter().map(CurveComponent::index).sum();
            assert_eq!(total, a.len());
            for c in &comps {
                for list in [&c.valency.order3, &c.valency.order2, &c.valency.cusps] {
                    assert_eq!(list.iter().sum::<usize>(), c.index());
                }
                assert!(c.valency.order2.iter().all(|&v| v == 1 || v == 2));
                assert!(c.valency.order3.iter().all(|&v| v == 1 || v == 3));
                assert_eq!(euler_genus(c, &a), c.genus, "component {}", c.id);
                let m = component_of(&comps, a.len())[a.mirror().apply(c.base() as usize)];
                let image = &comps[m as usize];
                assert_eq!((image.index(), &image.valency, image.genus), (c.index(), &c.valency, c.genus));
            }
        }
    }

    #[test]
    fn veech_data_properties() {
        for d in 1..=5 {
            let (a, comps) = setup(d);
            for c in &comps {
                let v = veech_data(c, c.base(), &a).unwrap();
                assert_eq!(v.schreier_count, c.index() + 1);
                assert_eq!(v.representatives.len(), c.index());
                let mut reached: Vec<u32> = v.representatives.iter().map(|(_, w)| w.apply(&a, c.base())).collect();
                for (cls, w) in &v.representatives {
                    assert_eq!(w.apply(&a, c.base()), *cls);
                }
                reached.sort_unstable();
                assert_eq!(reached, c.members);
                for g in &v.generators {
                    assert_eq!(g.apply(&a, c.base()), c.base(), "{g}");
                }
            }
        }
    }

    #[test]
    fn index_one_component() {
        let (a, comps) = setup(1);
        let c = &comps[0];
        assert_eq!(c.valency.to_string(), "(1|1|1)");
        assert_eq!(c.genus, 0);
        let v = veech_data(c, 0, &a).unwrap();
        assert_eq!(v.representatives, vec![(0, Word::default())]);
        let gens: Vec<String> = v.generators.iter().map(ToString::to_string).collect();
        assert_eq!(gens, ["T", "S"]);
        let dot = export_diagram(c, &a).unwrap();
        assert_eq!(dot.matches("shape=triangle").count(), 1);
        assert!(dot.contains("c0 -> c0 [label=\"T\"]"));
    }

    #[test]
    fn diagram_nodes_and_cusps() {
        for d in 2..=5 {
            let (a, comps) = setup(d);
            for c in &comps {
                let dot = export_diagram(c, &a).unwrap();
                let nodes = dot.lines().filter(|l| l.trim_start().starts_with('c') && l.contains("[label=\"") && !l.contains("->")).count();
                assert_eq!(nodes, c.index());
                let mut widths: Vec<usize> = dot
                    .lines()
                    .filter_map(|l| l.split("cusp width ").nth(1))
                    .map(|r| r.trim_end_matches("\"];").parse().unwrap())
                    .collect();
                widths.sort_unstable_by(|x, y| y.cmp(x));
                assert_eq!(widths, c.valency.cusps);
                for l in dot.lines().filter(|l| l.contains("->") && !l.contains("dotted")) {
                    assert!(l.contains("label=\"T\"") || l.contains("label=\"S\""));
                }
            }
        }
    }

    #[test]
    fn valency_text() {
        let v: Valency = "(3^5|2^7,1|5,4,3^2)".parse().unwrap();
        assert_eq!(v.order3, vec![3; 5]);
        assert_eq!(v.cusps, vec![5, 4, 3, 3]);
        assert_eq!(v.to_string(), "(3^5|2^7,1|5,4,3^2)");
        assert_eq!("(3^4∣2^6∣6,3,2,1)".parse::<Valency>().unwrap().cusps, vec![6, 3, 2, 1]);
        assert_eq!(curve_genus(15, &v).unwrap(), 0);
        assert!("(3|2".parse::<Valency>().is_err());
        assert!(curve_genus(2, &"(1|1|1)".parse().unwrap()).is_err());
    }

    #[test]
    fn word_reduction() {
        let w = Word(vec![Letter::T, Letter::S, Letter::SInv, Letter::TInv, Letter::S, Letter::S]);
        assert!(w.reduced().is_empty());
        assert_eq!(Word(vec![Letter::SInv, Letter::T]).reduced().to_string(), "S T");
    }
}
