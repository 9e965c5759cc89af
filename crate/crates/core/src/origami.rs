//! Origamis `(x, y, ε)` and their canonical double covers.
//!
//! Cell `i` is glued on its right to the left side of `x(i)`. Vertically, `ε(i) = −1`
//! means the cell is flipped: its "forward" vertical edge is the bottom one. The forward
//! edge of `i` is glued to the backward edge of `y(i)`, by a translation when one is a
//! top and the other a bottom edge, by a half turn otherwise.
//!
//! The double cover lives on the signed labels `±{1..d}`; `−i` is the half-turned copy of
//! cell `i`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::{Permutation, SignVector};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Origami {
    x: Permutation,
    y: Permutation,
    eps: SignVector,
}

impl Origami {
    pub fn new(x: Permutation, y: Permutation, eps: SignVector) -> Result<Self> {
        let d = x.degree();
        for got in [y.degree(), eps.len()] {
            if got != d {
                return Err(Error::Degree { expected: d, got });
            }
        }
        Ok(Origami { x, y, eps })
    }

    /// The one-square torus.
    pub fn torus() -> Self {
        Origami {
            x: Permutation::identity(1),
            y: Permutation::identity(1),
            eps: SignVector::all_plus(1),
        }
    }

    /// `((1 2), (1 2), +−)`: two squares glued into a sphere with four cone points.
    pub fn pillowcase() -> Self {
        let t = Permutation::from_cycles(2, &[vec![1, 2]]).expect("valid cycle");
        Origami {
            x: t.clone(),
            y: t,
            eps: SignVector::from_signs(&[1, -1]).expect("valid signs"),
        }
    }

    pub fn degree(&self) -> usize {
        self.x.degree()
    }

    pub fn x(&self) -> &Permutation {
        &self.x
    }

    pub fn y(&self) -> &Permutation {
        &self.y
    }

    pub fn eps(&self) -> &SignVector {
        &self.eps
    }

    /// True iff `⟨x, y⟩` is transitive on the cells.
    pub fn is_connected(&self) -> bool {
        orbit_count(self.degree(), &[self.x.images(), self.y.images()]) <= 1
    }

    /// True iff the double cover splits into two sheets.
    pub fn is_abelian(&self) -> Result<bool> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(!self.double_cover().is_connected())
    }

    pub fn double_cover(&self) -> DoubleCover {
        DoubleCover::new(self)
    }

    /// `(σ#x, σ#y, ε∘σ⁻¹)`: the same surface with cells renamed by `σ`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<Origami> {
        Ok(Origami {
            x: Permutation::conjugate(sigma, &self.x)?,
            y: Permutation::conjugate(sigma, &self.y)?,
            eps: self.eps.compose(&sigma.inverse()),
        })
    }

    /// Relabels the cells so that `x` becomes the block form of its cycle type. Returns the
    /// relabelled origami and the conjugator used.
    pub fn canonicalize_x(&self) -> (Origami, Permutation) {
        let sigma = canonical_x_conjugator(&self.x);
        let o = self.relabel(&sigma).expect("same degree");
        (o, sigma)
    }

    pub fn has_canonical_x(&self) -> bool {
        self.x == self.x.cycle_type().canonical_x()
    }

    /// Same surface reflected left to right.
    pub fn mirror(&self) -> Origami {
        let cover = self.double_cover();
        let xhat = cover.xhat.inverse();
        let (y, eps) = restore(self.degree(), &cover.yhat).expect("cover of an origami");
        let x = Permutation::from_images_unchecked(xhat.images()[..self.degree()].to_vec());
        Origami { x, y, eps }
    }
}

/// The conjugator that sorts the cycles of `x` by (length desc, smallest point asc) and
/// sends each cycle onto a consecutive block, its smallest point first.
pub fn canonical_x_conjugator(x: &Permutation) -> Permutation {
    let mut cycles = x.cycles();
    cycles.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut images = vec![0; x.degree()];
    let mut next = 0;
    for cycle in &cycles {
        for &a in cycle {
            images[a] = next;
            next += 1;
        }
    }
    Permutation::from_images_unchecked(images)
}

pub(crate) fn orbit_count(n: usize, gens: &[&[usize]]) -> usize {
    let mut seen = vec![false; n];
    let mut stack = Vec::new();
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        stack.push(s);
        while let Some(p) = stack.pop() {
            for g in gens {
                let t = g[p];
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
    }
    count
}

impl fmt::Display for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x={}; y={}; eps={}", self.x, self.y, self.eps)
    }
}

impl fmt::Debug for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Origami({self})")
    }
}

impl FromStr for Origami {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::ParseOrigami {
            input: s.to_string(),
            reason,
        };
        let (mut x, mut y, mut eps) = (None, None, None);
        for field in s.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {field:?}")))?;
            let slot = match key.trim() {
                "x" => &mut x,
                "y" => &mut y,
                "eps" => &mut eps,
                other => return Err(bad(format!("unknown field {other:?}"))),
            };
            if slot.replace(value.trim()).is_some() {
                return Err(bad(format!("duplicate field {key:?}")));
            }
        }
        let eps: SignVector = eps
            .ok_or_else(|| bad("missing eps".into()))?
            .parse()
            .map_err(|e| bad(format!("{e}")))?;
        let d = eps.len();
        if d == 0 {
            return Err(bad("empty eps".into()));
        }
        let perm = |v: Option<&str>, name: &str| {
            let v = v.ok_or_else(|| bad(format!("missing {name}")))?;
            Permutation::parse_cycles(v, Some(d)).map_err(|e| bad(format!("{e}")))
        };
        Origami::new(perm(x, "x")?, perm(y, "y")?, eps)
    }
}

/// The canonical double cover on `±{1..d}`.
///
/// Points are encoded as `+i ↦ i−1` and `−i ↦ d+i−1`. The deck involution `ι: i ↦ −i`
/// satisfies `ι·x̂·ι = x̂⁻¹` and `ι·ŷ·ι = ŷ⁻¹`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DoubleCover {
    degree: usize,
    xhat: Permutation,
    yhat: Permutation,
}

impl DoubleCover {
    fn new(o: &Origami) -> Self {
        let d = o.degree();
        let (x, y, eps) = (o.x(), o.y(), o.eps());
        let xinv = x.inverse();
        let yinv = y.inverse();
        let ypow = |i: usize, s: i8| if s > 0 { y.apply(i) } else { yinv.apply(i) };
        let mut xi = vec![0; 2 * d];
        let mut yi = vec![0; 2 * d];
        for i in 0..d {
            xi[i] = x.apply(i);
            xi[d + i] = d + xinv.apply(i);
            let e = eps.get(i);
            let j = ypow(i, e);
            yi[i] = if e * eps.get(j) > 0 { j } else { d + j };
            let j = ypow(i, -e);
            yi[d + i] = if e * eps.get(j) > 0 { d + j } else { j };
        }
        DoubleCover {
            degree: d,
            xhat: Permutation::from_images_unchecked(xi),
            yhat: Permutation::from_images_unchecked(yi),
        }
    }

    /// Builds a cover from explicit maps on the encoded points.
    pub fn from_parts(degree: usize, xhat: Permutation, yhat: Permutation) -> Result<Self> {
        for got in [xhat.degree(), yhat.degree()] {
            if got != 2 * degree {
                return Err(Error::Degree {
                    expected: 2 * degree,
                    got,
                });
            }
        }
        Ok(DoubleCover { degree, xhat, yhat })
    }

    /// Degree of the base origami; the cover has twice as many cells.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn xhat(&self) -> &Permutation {
        &self.xhat
    }

    pub fn yhat(&self) -> &Permutation {
        &self.yhat
    }

    pub fn point(&self, label: i32) -> usize {
        encode(self.degree, label)
    }

    pub fn label(&self, point: usize) -> i32 {
        decode(self.degree, point)
    }

    pub fn apply_x(&self, label: i32) -> i32 {
        self.label(self.xhat.apply(self.point(label)))
    }

    pub fn apply_y(&self, label: i32) -> i32 {
        self.label(self.yhat.apply(self.point(label)))
    }

    /// The deck involution `i ↦ −i` on encoded points.
    pub fn deck(&self) -> Permutation {
        let d = self.degree;
        Permutation::from_images_unchecked((0..2 * d).map(|p| (p + d) % (2 * d)).collect())
    }

    pub fn is_connected(&self) -> bool {
        orbit_count(2 * self.degree, &[self.xhat.images(), self.yhat.images()]) <= 1
    }

    /// Orbits of `⟨x̂, ŷ⟩` as sorted lists of encoded points.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = 2 * self.degree;
        let mut comp = vec![usize::MAX; n];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut k = 0;
            while k < members.len() {
                let p = members[k];
                k += 1;
                for t in [self.xhat.apply(p), self.yhat.apply(p)] {
                    if comp[t] == usize::MAX {
                        comp[t] = id;
                        members.push(t);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Cycles of `ŷ` as signed labels.
    pub fn yhat_cycles(&self) -> Vec<Vec<i32>> {
        self.yhat
            .cycles()
            .into_iter()
            .map(|c| c.into_iter().map(|p| self.label(p)).collect())
            .collect()
    }
}

fn encode(d: usize, label: i32) -> usize {
    let i = label.unsigned_abs() as usize - 1;
    if label > 0 {
        i
    } else {
        d + i
    }
}

fn decode(d: usize, point: usize) -> i32 {
    if point < d {
        point as i32 + 1
    } else {
        -((point - d) as i32 + 1)
    }
}

/// Recovers `(y, ε)` from the vertical map of a double cover.
///
/// The cycles of `ŷ` come in pairs `c, c′` with `c′` the negated reverse of `c`. From each
/// pair the cycle through the smallest positive label is kept; its absolute values give a
/// cycle of `y` and its negative entries mark `ε = −1`.
pub fn restore(degree: usize, yhat: &Permutation) -> Result<(Permutation, SignVector)> {
    let d = degree;
    if yhat.degree() != 2 * d {
        return Err(Error::Degree {
            expected: 2 * d,
            got: yhat.degree(),
        });
    }
    let mut visited = vec![false; 2 * d];
    let mut y = vec![usize::MAX; d];
    let mut eps = SignVector::all_plus(d);
    for start in 0..d {
        if visited[start] {
            continue;
        }
        let mut cycle = vec![start];
        let mut p = yhat.apply(start);
        while p != start {
            cycle.push(p);
            p = yhat.apply(p);
        }
        for (k, &p) in cycle.iter().enumerate() {
            let partner = (p + d) % (2 * d);
            let cell = p % d;
            if visited[p] || visited[partner] || y[cell] != usize::MAX {
                return Err(Error::MalformedCover(format!(
                    "cycle through {} meets its own negation",
                    decode(d, start)
                )));
            }
            let next = cycle[(k + 1) % cycle.len()];
            // the partner cycle runs through the negated points in reverse
            if yhat.apply((next + d) % (2 * d)) != partner {
                return Err(Error::MalformedCover(format!(
                    "cycle through {} has no negated partner",
                    decode(d, start)
                )));
            }
            y[cell] = next % d;
            if p >= d {
                eps.set(cell, -1);
            }
        }
        for &p in &cycle {
            visited[p] = true;
            visited[(p + d) % (2 * d)] = true;
        }
    }
    Ok((Permutation::from_images(y)?, eps))
}

/// `ŷ` of the double cover of `(id, y, ε)`; the inverse of `restore`.
pub fn star_image(y: &Permutation, eps: &SignVector) -> Permutation {
    let d = y.degree();
    let o = Origami::new(Permutation::identity(d), y.clone(), *eps).expect("same degree");
    o.double_cover().yhat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::factorial;

    fn o(s: &str) -> Origami {
        s.parse().unwrap()
    }

    fn all_origamis(d: usize) -> impl Iterator<Item = Origami> {
        let n = factorial(d);
        (0..n).flat_map(move |rx| {
            (0..n).flat_map(move |ry| {
                SignVector::all(d).map(move |e| {
                    Origami::new(Permutation::from_lex_rank(d, rx), Permutation::from_lex_rank(d, ry), e).unwrap()
                })
            })
        })
    }

    #[test]
    fn all_plus_cover_splits() {
        let t = o("x=(1,2,3); y=(1,3); eps=+++");
        let c = t.double_cover();
        for i in 1..=3 {
            assert_eq!(c.apply_y(i), t.y().apply(i as usize - 1) as i32 + 1);
        }
        assert_eq!(c.orbits().len(), 2);
        assert!(t.is_abelian().unwrap());
    }

    #[test]
    fn pillowcase_cover() {
        let c = Origami::pillowcase().double_cover();
        assert_eq!((c.apply_x(1), c.apply_x(2), c.apply_x(-1), c.apply_x(-2)), (2, 1, -2, -1));
        assert_eq!((c.apply_y(1), c.apply_y(-2), c.apply_y(-1), c.apply_y(2)), (-2, 1, 2, -1));
        assert!(c.is_connected());
        assert!(!Origami::pillowcase().is_abelian().unwrap());
    }

    #[test]
    fn degree_one_flipped_cell() {
        let t = o("x=(1); y=(1); eps=-");
        let c = t.double_cover();
        assert!(c.xhat().is_identity() && c.yhat().is_identity());
        assert!(t.is_abelian().unwrap());
    }

    #[test]
    fn connectivity() {
        assert!(Origami::torus().is_connected());
        assert!(!o("x=(1,2)(3,4); y=(1)(2)(3)(4); eps=+-+-").is_connected());
        assert!(o("x=(1,2,3,4,5,6); y=(1,3); eps=------").is_connected());
        assert!(matches!(
            o("x=(1,2)(3,4); y=(1); eps=++++").is_abelian(),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn deck_involution_inverts_both_maps() {
        for d in 1..=3 {
            for t in all_origamis(d) {
                let c = t.double_cover();
                let iota = c.deck();
                for g in [c.xhat(), c.yhat()] {
                    let conj = iota.compose(g).unwrap().compose(&iota).unwrap();
                    assert_eq!(conj, g.inverse(), "{t}");
                }
                for i in 1..=d {
                    assert_eq!(c.apply_x(i as i32).unsigned_abs() as usize, t.x().apply(i - 1) + 1);
                }
            }
        }
    }

    #[test]
    fn restore_roundtrip_exhaustive() {
        for d in 1..=4 {
            for t in all_origamis(d).filter(Origami::is_connected) {
                let c = t.double_cover();
                let (y, eps) = restore(d, c.yhat()).unwrap();
                assert_eq!(&star_image(&y, &eps), c.yhat(), "{t}");
            }
        }
    }

    #[test]
    fn restore_examples() {
        let (y, eps) = restore(3, &Permutation::identity(6)).unwrap();
        assert!(y.is_identity() && eps.is_all_plus());
        let (y, eps) = restore(2, Origami::pillowcase().double_cover().yhat()).unwrap();
        assert_eq!(y.to_string(), "(1,2)");
        assert_eq!(eps.to_string(), "+-");
        // (1 −1) pairs with itself, which no cover produces
        let bad = Permutation::from_cycles(2, &[vec![1, 2]]).unwrap();
        assert!(restore(1, &bad).is_err());
    }

    #[test]
    fn abelian_orbits_have_size_d() {
        for d in 1..=4 {
            for t in all_origamis(d).filter(Origami::is_connected) {
                let orbits = t.double_cover().orbits();
                if t.is_abelian().unwrap() {
                    assert!(orbits.len() == 2 && orbits.iter().all(|o| o.len() == d));
                } else {
                    assert_eq!(orbits.len(), 1);
                }
            }
        }
    }

    #[test]
    fn text_roundtrip() {
        let t = o("x=(1,2,3)(4); y=(1,4); eps=+--+");
        assert_eq!(t.to_string(), "x=(1,2,3)(4); y=(1,4)(2)(3); eps=+--+");
        assert_eq!(o(&t.to_string()), t);
        assert!("x=(1,2); y=(1,2)".parse::<Origami>().is_err());
        assert!("x=(1,2); y=(1,3); eps=++".parse::<Origami>().is_err());
        assert!("x=(1,2); z=(1); eps=++".parse::<Origami>().is_err());
    }

    #[test]
    fn canonicalize_x_sorts_cycles() {
        let t = o("x=(1,4)(2,3,5); y=(1,2); eps=+-+-+");
        let (c, sigma) = t.canonicalize_x();
        assert!(c.has_canonical_x());
        assert_eq!(c.x().to_string(), "(1,2,3)(4,5)");
        assert_eq!(sigma.apply(1), 0);
        assert_eq!(c.relabel(&sigma.inverse()).unwrap(), t);
    }

    #[test]
    fn mirror_is_involution_up_to_relabel() {
        for t in all_origamis(3).filter(Origami::is_connected) {
            let m = t.mirror();
            assert_eq!(m.x(), &t.x().inverse());
            assert_eq!(m.mirror().double_cover(), t.double_cover());
        }
    }
}
