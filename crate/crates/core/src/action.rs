//! The generators `T = [[1,1],[0,1]]` and `S = [[0,−1],[1,0]]` of the modular group, and
//! the left-right mirror, acting on the classes of a census.
//!
//! Both generators are computed by walking the cylinders of the representative: `T` shears
//! along horizontal cylinders and rebuilds `y`, `S` turns the surface a quarter and rebuilds
//! both gluings. Flipped cells (`ε = −1`) reverse the walking direction.

use rayon::prelude::*;

use crate::classifier::Census;
use crate::error::{Error, Result};
use crate::origami::Origami;
use crate::perm::{Permutation, SignVector};

#[inline]
fn step(p: &Permutation, pinv: &Permutation, sign: i8, a: usize) -> usize {
    if sign > 0 {
        p.apply(a)
    } else {
        pinv.apply(a)
    }
}

fn walk_failure(o: &Origami, what: &str) -> Error {
    Error::Invariant(format!("{what} walk does not close on {o}"))
}

/// The sheared origami `(x, y_T, ε_T)`; `x` is unchanged.
pub fn t_walk(o: &Origami) -> Result<Origami> {
    let d = o.degree();
    let (x, y, eps) = (o.x(), o.y(), o.eps());
    let (xinv, yinv) = (x.inverse(), y.inverse());
    let mut yt = vec![usize::MAX; d];
    let mut et = SignVector::all_plus(d);
    while let Some(a0) = yt.iter().position(|&v| v == usize::MAX) {
        let (mut a, mut e) = (a0, 1i8);
        loop {
            let b = if e > 0 { x.apply(a) } else { a };
            let a1 = step(y, &yinv, e * eps.get(b), b);
            let e1 = e * eps.get(b) * eps.get(a1);
            let next = if e1 > 0 { a1 } else { xinv.apply(a1) };
            if yt[a] != usize::MAX {
                return Err(walk_failure(o, "T"));
            }
            yt[a] = next;
            et.set(a, e);
            a = next;
            e = e1;
            if a == a0 {
                break;
            }
        }
    }
    let yt = Permutation::from_images(yt).map_err(|_| walk_failure(o, "T"))?;
    Origami::new(x.clone(), yt, et)
}

/// The turned origami `(x_S, y_S, ε_S)`, before relabelling `x_S` to canonical form.
pub fn s_walk(o: &Origami) -> Result<Origami> {
    let d = o.degree();
    let (x, y, eps) = (o.x(), o.y(), o.eps());
    let (xinv, yinv) = (x.inverse(), y.inverse());

    // signs collected along the vertical cylinders, which become the new horizontal ones
    let mut xs = vec![usize::MAX; d];
    let mut delta = SignVector::all_plus(d);
    while let Some(a0) = xs.iter().position(|&v| v == usize::MAX) {
        let (mut a, mut s) = (a0, 1i8);
        loop {
            let next = step(y, &yinv, s * eps.get(a), a);
            let s1 = s * eps.get(a) * eps.get(next);
            if xs[a] != usize::MAX {
                return Err(walk_failure(o, "S"));
            }
            xs[a] = next;
            delta.set(a, s);
            a = next;
            s = s1;
            if a == a0 {
                break;
            }
        }
    }

    let mut ys = vec![usize::MAX; d];
    let mut es = SignVector::all_plus(d);
    while let Some(a0) = ys.iter().position(|&v| v == usize::MAX) {
        let (mut a, mut e) = (a0, 1i8);
        loop {
            let next = step(x, &xinv, -e * delta.get(a), a);
            let e1 = e * delta.get(a) * delta.get(next);
            if ys[a] != usize::MAX {
                return Err(walk_failure(o, "S"));
            }
            ys[a] = next;
            es.set(a, e);
            a = next;
            e = e1;
            if a == a0 {
                break;
            }
        }
    }
    let xs = Permutation::from_images(xs).map_err(|_| walk_failure(o, "S"))?;
    let ys = Permutation::from_images(ys).map_err(|_| walk_failure(o, "S"))?;
    Origami::new(xs, ys, es)
}

pub fn act_t(census: &Census, id: u32) -> Result<u32> {
    census.find_class(&t_walk(&census.class(id)?.rep)?)
}

pub fn act_s(census: &Census, id: u32) -> Result<u32> {
    let turned = s_walk(&census.class(id)?.rep)?;
    census.find_class(&turned.canonicalize_x().0)
}

pub fn mirror(census: &Census, id: u32) -> Result<u32> {
    let flipped = census.class(id)?.rep.mirror();
    census.find_class(&flipped.canonicalize_x().0)
}

/// Which composition of the generators has order three.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order3 {
    /// `phi_S ∘ phi_T`: apply `T`, then `S`.
    ST,
    /// `phi_T ∘ phi_S`: apply `S`, then `T`.
    TS,
}

impl Order3 {
    pub fn name(self) -> &'static str {
        match self {
            Order3::ST => "phi_S∘phi_T",
            Order3::TS => "phi_T∘phi_S",
        }
    }
}

/// `phi_T`, `phi_S` and the mirror as permutations of class ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassAction {
    degree: usize,
    phi_t: Permutation,
    phi_s: Permutation,
    mirror: Permutation,
}

impl ClassAction {
    pub fn compute(census: &Census) -> Result<ClassAction> {
        let rows: Vec<[u32; 3]> = (0..census.len() as u32)
            .into_par_iter()
            .map(|id| Ok([act_t(census, id)?, act_s(census, id)?, mirror(census, id)?]))
            .collect::<Result<_>>()?;
        Self::from_rows(census.degree(), &rows)
    }

    /// From table rows `[phi_T(id), phi_S(id), mirror(id)]` in id order.
    pub fn from_rows(degree: usize, rows: &[[u32; 3]]) -> Result<ClassAction> {
        let column = |k: usize| {
            Permutation::from_images(rows.iter().map(|r| r[k] as usize).collect())
                .map_err(|_| Error::Invariant(format!("action column {k} is not a permutation")))
        };
        Ok(ClassAction {
            degree,
            phi_t: column(0)?,
            phi_s: column(1)?,
            mirror: column(2)?,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.phi_t.degree()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn phi_t(&self) -> &Permutation {
        &self.phi_t
    }

    pub fn phi_s(&self) -> &Permutation {
        &self.phi_s
    }

    pub fn mirror(&self) -> &Permutation {
        &self.mirror
    }

    pub fn rows(&self) -> Vec<[u32; 3]> {
        (0..self.len())
            .map(|i| {
                [
                    self.phi_t.apply(i) as u32,
                    self.phi_s.apply(i) as u32,
                    self.mirror.apply(i) as u32,
                ]
            })
            .collect()
    }

    /// The composition of order three, checking `phi_S² = 1` on the way.
    pub fn order3(&self) -> Result<(Order3, Permutation)> {
        if !self.phi_s.pow(2).is_identity() {
            return Err(Error::Invariant("phi_S does not square to the identity".into()));
        }
        let st = self.phi_s.compose(&self.phi_t)?;
        if st.pow(3).is_identity() {
            return Ok((Order3::ST, st));
        }
        let ts = self.phi_t.compose(&self.phi_s)?;
        if ts.pow(3).is_identity() {
            return Ok((Order3::TS, ts));
        }
        Err(Error::Invariant("no composition of phi_S and phi_T has order three".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{census, restricted_class, EpsSearch};

    #[test]
    fn fixed_points_in_low_degree() {
        let c1 = census(1).unwrap();
        assert_eq!((act_t(&c1, 0).unwrap(), act_s(&c1, 0).unwrap(), mirror(&c1, 0).unwrap()), (0, 0, 0));
        let c2 = census(2).unwrap();
        let p = c2.find_class(&Origami::pillowcase()).unwrap();
        assert_eq!(act_t(&c2, p).unwrap(), p);
        assert_eq!(act_s(&c2, p).unwrap(), p);
    }

    #[test]
    fn relations_hold() {
        for d in 1..=5 {
            let c = census(d).unwrap();
            let a = ClassAction::compute(&c).unwrap();
            let (_, r) = a.order3().unwrap();
            assert!(r.pow(3).is_identity());
            let st = a.phi_s().compose(a.phi_t()).unwrap();
            let ts = a.phi_t().compose(a.phi_s()).unwrap();
            assert!(st.pow(3).is_identity() && ts.pow(3).is_identity());
            let m = a.mirror();
            assert!(m.pow(2).is_identity());
            let conj = |g: &Permutation| m.compose(g).unwrap().compose(m).unwrap();
            assert_eq!(conj(a.phi_t()), a.phi_t().inverse());
            assert_eq!(conj(a.phi_s()), a.phi_s().inverse());
            for (k, cls) in c.classes().iter().enumerate() {
                for g in [a.phi_t(), a.phi_s(), m] {
                    assert_eq!(c.classes()[g.apply(k)].abelian, cls.abelian);
                }
            }
        }
    }

    #[test]
    fn walks_are_well_defined_on_classes() {
        for d in 1..=3 {
            let c = census(d).unwrap();
            for cls in c.classes() {
                let t = act_t(&c, cls.id).unwrap();
                let s = act_s(&c, cls.id).unwrap();
                for member in restricted_class(&cls.rep, EpsSearch::Propagated).unwrap().members {
                    let o = Origami::new(cls.rep.x().clone(), member.0, member.1).unwrap();
                    assert_eq!(c.find_class(&t_walk(&o).unwrap()).unwrap(), t, "{o}");
                    assert_eq!(c.classify(&s_walk(&o).unwrap()).unwrap(), s, "{o}");
                }
            }
        }
    }

    #[test]
    fn abelian_mirror_inverts_x() {
        let c = census(4).unwrap();
        for cls in c.classes().iter().filter(|k| k.rep.eps().is_all_plus()) {
            let flipped = Origami::new(cls.rep.x().inverse(), cls.rep.y().clone(), *cls.rep.eps()).unwrap();
            assert_eq!(mirror(&c, cls.id).unwrap(), c.classify(&flipped).unwrap());
        }
    }

    #[test]
    fn from_rows_roundtrip() {
        let c = census(3).unwrap();
        let a = ClassAction::compute(&c).unwrap();
        assert_eq!(ClassAction::from_rows(3, &a.rows()).unwrap(), a);
        assert!(ClassAction::from_rows(3, &[[0, 0, 0], [0, 1, 1]]).is_err());
    }
}
