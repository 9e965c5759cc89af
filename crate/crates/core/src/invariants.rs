//! Strata of origamis and the invariant keys of curve components.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classifier::Census;
use crate::curve::{CurveComponent, Valency};
use crate::error::{Error, Result};
use crate::origami::Origami;
use crate::perm::Permutation;

/// Singularity orders in the quadratic convention (an abelian zero of order `m` is listed
/// as `2m`), including order-0 marked points, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Stratum {
    pub abelian: bool,
    pub genus: u32,
    pub orders: Vec<i32>,
}

impl Stratum {
    pub fn new(abelian: bool, mut orders: Vec<i32>) -> Result<Stratum> {
        orders.sort_unstable();
        let sum: i32 = orders.iter().sum();
        if sum % 4 != 0 || sum < -4 || orders.iter().any(|&k| k < -1) {
            return Err(Error::Invariant(format!("orders {orders:?} do not form a stratum")));
        }
        if abelian && orders.iter().any(|k| k % 2 != 0) {
            return Err(Error::Invariant(format!("abelian stratum with odd orders {orders:?}")));
        }
        Ok(Stratum {
            abelian,
            genus: (1 + sum / 4) as u32,
            orders,
        })
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<String> = self.orders.iter().map(ToString::to_string).collect();
        let kind = if self.abelian { 'A' } else { 'Q' };
        write!(f, "{kind}{}({})", self.genus, orders.join(","))
    }
}

impl FromStr for Stratum {
    type Err = Error;

    /// Accepts `Q2(-1,-1,3,3)` as well as the exponent form `Q_2(-1^2,3^2)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invariant(format!("cannot parse stratum {s:?}"));
        let s = s.trim().replace('−', "-");
        let abelian = match s.chars().next() {
            Some('A') => true,
            Some('Q') => false,
            _ => return Err(bad()),
        };
        let (head, rest) = s[1..].split_once('(').ok_or_else(bad)?;
        let genus: u32 = head.trim_start_matches('_').parse().map_err(|_| bad())?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        let mut orders = Vec::new();
        for tok in body.split(',').map(str::trim) {
            let (v, k) = match tok.split_once('^') {
                Some((v, k)) => (v.parse::<i32>().map_err(|_| bad())?, k.parse::<usize>().map_err(|_| bad())?),
                None => (tok.parse().map_err(|_| bad())?, 1),
            };
            orders.extend(std::iter::repeat_n(v, k));
        }
        let st = Stratum::new(abelian, orders)?;
        if st.genus != genus {
            return Err(Error::Invariant(format!("stratum {s} has orders of genus {}", st.genus)));
        }
        Ok(st)
    }
}

/// Commutator `Y·X·Y⁻¹·X⁻¹` (apply `X⁻¹` first): its cycle through `s` walks around the
/// lower-left corner of cell `s`.
fn corner_cycles(xhat: &Permutation, yhat: &Permutation) -> (Vec<usize>, Vec<usize>) {
    let (xi, yi) = (xhat.inverse(), yhat.inverse());
    let n = xhat.degree();
    let z: Vec<usize> = (0..n).map(|p| yhat.apply(xhat.apply(yi.apply(xi.apply(p))))).collect();
    let mut vertex = vec![usize::MAX; n];
    let mut lengths = Vec::new();
    for s in 0..n {
        if vertex[s] != usize::MAX {
            continue;
        }
        let mut p = s;
        let mut len = 0;
        while vertex[p] == usize::MAX {
            vertex[p] = lengths.len();
            p = z[p];
            len += 1;
        }
        lengths.push(len);
    }
    (vertex, lengths)
}

/// Stratum of a connected origami, read off the vertices of its double cover.
///
/// A vertex of the cover with `L` corners has cone angle `2πL`. If the deck involution fixes
/// it, it lies over a singularity of order `L − 2`; otherwise it and its image lie over a
/// single singularity of order `2L − 2`.
pub fn stratum(o: &Origami) -> Result<Stratum> {
    if !o.is_connected() {
        return Err(Error::Disconnected);
    }
    let cover = o.double_cover();
    let (xhat, yhat) = (cover.xhat(), cover.yhat());
    let d = o.degree();
    let (vertex, lengths) = corner_cycles(xhat, yhat);
    let mut rep = vec![usize::MAX; lengths.len()];
    for (p, &v) in vertex.iter().enumerate() {
        if rep[v] == usize::MAX {
            rep[v] = p;
        }
    }
    // the lower-left corner of −s is the upper-right corner of s
    let image = |v: usize| vertex[yhat.apply(xhat.apply((rep[v] + d) % (2 * d)))];
    let mut orders = Vec::new();
    for (v, &len) in lengths.iter().enumerate() {
        let w = image(v);
        if w == v {
            orders.push(len as i32 - 2);
        } else if v < w {
            if lengths[w] != len {
                return Err(Error::Invariant(format!("deck involution pairs vertices of lengths {len} and {}", lengths[w])));
            }
            orders.push(2 * len as i32 - 2);
        }
    }
    Stratum::new(!cover.is_connected(), orders)
}

/// Orders of an abelian origami from the commutator on one sheet of its cover: a cycle of
/// length `L` is a zero of order `L − 1`, listed as `2L − 2`.
pub fn abelian_orders(o: &Origami) -> Result<Vec<i32>> {
    if !o.is_abelian()? {
        return Err(Error::Invariant(format!("{o} is not abelian")));
    }
    let cover = o.double_cover();
    let sheet = &cover.orbits()[0];
    let pos = |p: usize| sheet.binary_search(&p).expect("sheet is invariant");
    let restrict = |g: &Permutation| {
        Permutation::from_images(sheet.iter().map(|&p| pos(g.apply(p))).collect()).expect("sheet is invariant")
    };
    let (_, lengths) = corner_cycles(&restrict(cover.xhat()), &restrict(cover.yhat()));
    let mut orders: Vec<i32> = lengths.iter().map(|&l| 2 * l as i32 - 2).collect();
    orders.sort_unstable();
    Ok(orders)
}

pub fn origami_genus(o: &Origami) -> Result<u32> {
    Ok(stratum(o)?.genus)
}

/// The invariants compared across components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantKey {
    pub degree: usize,
    pub abelian: bool,
    pub index: usize,
    pub stratum: Stratum,
    pub valency: Valency,
    pub genus: u32,
}

/// Key of a component; fails if its classes disagree on the stratum.
pub fn invariant_key(comp: &CurveComponent, census: &Census) -> Result<InvariantKey> {
    let st = stratum(&census.class(comp.base())?.rep)?;
    for &m in &comp.members[1..] {
        let other = stratum(&census.class(m)?.rep)?;
        if other != st {
            return Err(Error::Invariant(format!(
                "component {} mixes strata {st} and {other}",
                comp.id
            )));
        }
    }
    Ok(InvariantKey {
        degree: comp.degree,
        abelian: comp.abelian,
        index: comp.index(),
        stratum: st,
        valency: comp.valency.clone(),
        genus: comp.genus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{factorial, SignVector};

    /// Walks the corners of the squares directly. A corner is `(cell, k)` with
    /// `k = 0..4` for SW, SE, NE, NW; turning counter-clockwise around the vertex leaves the
    /// square through the left, bottom, right and top edge respectively. Each corner is a
    /// quarter turn, so a vertex with `n` corners has order `n/2 − 2`.
    fn corner_walk_orders(o: &Origami) -> Vec<i32> {
        const SW: usize = 0;
        const SE: usize = 1;
        const NE: usize = 2;
        const NW: usize = 3;
        let d = o.degree();
        let (x, y, eps) = (o.x(), o.y(), o.eps());
        let (xi, yi) = (x.inverse(), y.inverse());
        // the glued neighbour of corner (c, k) across the edge it is left through, as the
        // corner on the other side at the same point
        let across = |c: usize, k: usize| -> (usize, usize) {
            match k {
                SW => (xi.apply(c), SE),
                NE => (x.apply(c), NW),
                SE | NW => {
                    let top = k == NW;
                    let forward = top == (eps.get(c) > 0);
                    let j = if forward { y.apply(c) } else { yi.apply(c) };
                    // the edge of j it meets: backward edge of j if we left forward, else forward
                    let j_top = if forward { eps.get(j) < 0 } else { eps.get(j) > 0 };
                    // NW leaves at the left end of the top edge, SE at the right end of the bottom
                    let left_end = k == NW;
                    let same_end = top != j_top;
                    let j_left = if same_end { left_end } else { !left_end };
                    let k2 = match (j_top, j_left) {
                        (true, true) => NW,
                        (true, false) => NE,
                        (false, true) => SW,
                        (false, false) => SE,
                    };
                    (j, k2)
                }
                _ => unreachable!(),
            }
        };
        let mut seen = vec![false; 4 * d];
        let mut orders = Vec::new();
        for s in 0..4 * d {
            if seen[s] {
                continue;
            }
            let mut n = 0;
            let mut cur = s;
            while !seen[cur] {
                seen[cur] = true;
                n += 1;
                let (c, k) = across(cur / 4, cur % 4);
                cur = 4 * c + k;
            }
            assert_eq!(n % 2, 0, "{o}");
            orders.push(n / 2 - 2);
        }
        orders.sort_unstable();
        orders
    }

    fn connected(d: usize) -> Vec<Origami> {
        let n = factorial(d);
        let mut out = Vec::new();
        for rx in 0..n {
            for ry in 0..n {
                for e in SignVector::all(d) {
                    let t = Origami::new(Permutation::from_lex_rank(d, rx), Permutation::from_lex_rank(d, ry), e)
                        .unwrap();
                    if t.is_connected() {
                        out.push(t);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn examples() {
        let t = stratum(&Origami::torus()).unwrap();
        assert_eq!(t.to_string(), "A1(0)");
        let p = stratum(&Origami::pillowcase()).unwrap();
        assert_eq!(p.to_string(), "Q0(-1,-1,-1,-1)");
        let o: Origami = "x=(1,2,3,4); y=(1,2); eps=++++".parse().unwrap();
        let s = stratum(&o).unwrap();
        assert!(s.abelian);
        assert_eq!(s.genus, s.orders.iter().sum::<i32>() as u32 / 4 + 1);
    }

    #[test]
    fn corner_walk_oracle_agrees() {
        assert_eq!(corner_walk_orders(&Origami::pillowcase()), vec![-1; 4]);
        assert_eq!(corner_walk_orders(&Origami::torus()), vec![0]);
        for d in 1..=4 {
            for o in connected(d) {
                let s = stratum(&o).unwrap();
                assert_eq!(s.orders, corner_walk_orders(&o), "{o}");
                assert_eq!(s.orders.iter().sum::<i32>(), 4 * s.genus as i32 - 4);
                assert_eq!(s.abelian, o.is_abelian().unwrap());
                if s.abelian {
                    assert_eq!(abelian_orders(&o).unwrap(), s.orders, "{o}");
                }
            }
        }
    }

    #[test]
    fn single_commutator_cycle() {
        // z = (1 3)(2 4) on each sheet: two simple zeros
        let o: Origami = "x=(1,2,3,4); y=(1,3); eps=++++".parse().unwrap();
        let cover = o.double_cover();
        let (_, lengths) = corner_cycles(cover.xhat(), cover.yhat());
        assert_eq!(lengths, vec![2, 2, 2, 2]);
        assert_eq!(stratum(&o).unwrap().to_string(), "A2(2,2)");
        let o: Origami = "x=(1,2,3); y=(1,2); eps=+++".parse().unwrap();
        assert_eq!(abelian_orders(&o).unwrap(), vec![4]);
        assert_eq!(stratum(&o).unwrap().genus, 2);
    }

    #[test]
    fn text_format() {
        let s: Stratum = "Q_1(-1^2,0^3,2)".parse().unwrap();
        assert_eq!(s.to_string(), "Q1(-1,-1,0,0,0,2)");
        let a: Stratum = "A3(0,8)".parse().unwrap();
        assert!(a.abelian && a.genus == 3);
        assert!("A3(0,7)".parse::<Stratum>().is_err());
        assert!("Q2(-1,-1,3)".parse::<Stratum>().is_err());
        assert!("Q3(-1,-1,3,3)".parse::<Stratum>().is_err());
    }
}
