//! Permutations of `{1..d}`, sign vectors, signed permutations of `±{1..d}` and integer
//! partitions.
//!
//! Points are stored 0-based. The 1-based labels only appear in the text formats: cycle
//! notation `(1,2,3)(4)` for permutations and `+-+` strings for sign vectors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest length a [`SignVector`] can have (signs are packed into a `u64`).
pub const MAX_SIGN_LEN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("images do not form a bijection of 1..{0}")]
    NotBijective(usize),
    #[error("sign vector longer than {MAX_SIGN_LEN}")]
    TooLong,
    #[error("invalid partition {0:?}")]
    InvalidPartition(Vec<usize>),
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },
}

fn parse_err(what: &'static str, input: &str, reason: impl Into<String>) -> PermError {
    PermError::Parse {
        what,
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// A bijection of `{0..d}` stored by its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &v in &images {
            if v >= d || seen[v] {
                return Err(PermError::NotBijective(d));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based images (`images[i-1]` is the image of `i`).
    pub fn from_one_based(images: &[usize]) -> Result<Self, PermError> {
        if images.contains(&0) {
            return Err(PermError::NotBijective(images.len()));
        }
        Self::from_images(images.iter().map(|&v| v - 1).collect())
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation of degree `degree` from disjoint 1-based cycles. Points not
    /// mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a == 0 || a > degree || seen[a - 1] {
                    return Err(PermError::NotBijective(degree));
                }
                seen[a - 1] = true;
                images[a - 1] = cycle[(k + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        })
    }

    /// `t ∘ s ∘ t⁻¹`: the permutation `s` with its points renamed through `t`.
    pub fn conjugate(t: &Permutation, s: &Permutation) -> Result<Self, PermError> {
        if t.degree() != s.degree() {
            return Err(PermError::DegreeMismatch(t.degree(), s.degree()));
        }
        let mut images = vec![0; s.degree()];
        for (i, &v) in s.images.iter().enumerate() {
            images[t.images[i]] = t.images[v];
        }
        Ok(Permutation { images })
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            out = base.compose(&out).expect("same degree");
        }
        out
    }

    /// Disjoint cycles (0-based), each starting at its smallest point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.images[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.images[cur];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths as a partition of the degree.
    pub fn cycle_type(&self) -> Partition {
        let mut parts: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// Position of the image sequence in lexicographic order over all permutations of the
    /// same degree.
    pub fn lex_rank(&self) -> u64 {
        lex_rank(&self.images)
    }

    pub fn from_lex_rank(degree: usize, rank: u64) -> Self {
        let mut images = vec![0; degree];
        lex_unrank(degree, rank, &mut images);
        Permutation { images }
    }

    /// Parses cycle notation such as `(1,2,3)(4)`; fixed points may be omitted. Without an
    /// explicit degree the largest label mentioned is used.
    pub fn parse_cycles(text: &str, degree: Option<usize>) -> Result<Self, PermError> {
        let cycles = parse_cycle_list(text)?;
        let max = cycles.iter().flatten().copied().max().unwrap_or(0);
        let degree = degree.unwrap_or(max);
        if max > degree {
            return Err(parse_err(
                "permutation",
                text,
                format!("label {max} exceeds degree {degree}"),
            ));
        }
        Self::from_cycles(degree, &cycles).map_err(|_| parse_err("permutation", text, "cycles are not disjoint"))
    }
}

pub(crate) fn lex_rank(images: &[usize]) -> u64 {
    let d = images.len();
    let mut rank = 0u64;
    for i in 0..d {
        let smaller = images[i + 1..].iter().filter(|&&v| v < images[i]).count() as u64;
        rank = rank * (d - i) as u64 + smaller;
    }
    rank
}

pub(crate) fn lex_unrank(degree: usize, mut rank: u64, out: &mut [usize]) {
    let mut digits = [0usize; 32];
    for i in (0..degree).rev() {
        let base = (degree - i) as u64;
        digits[i] = (rank % base) as usize;
        rank /= base;
    }
    let mut avail: Vec<usize> = (0..degree).collect();
    for i in 0..degree {
        out[i] = avail.remove(digits[i]);
    }
}

pub(crate) fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn parse_cycle_list(text: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body_end = rest
            .strip_prefix('(')
            .and_then(|r| r.find(')'))
            .ok_or_else(|| parse_err("permutation", text, "expected `(…)` groups"))?;
        let body = &rest[1..=body_end];
        let mut cycle = Vec::new();
        for tok in body.split([',', ' ']).filter(|t| !t.is_empty()) {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_err("permutation", text, format!("bad label {tok:?}")))?;
            if v == 0 {
                return Err(parse_err("permutation", text, "labels start at 1"));
            }
            cycle.push(v);
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = rest[body_end + 2..].trim_start();
    }
    Ok(cycles)
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based labels, fixed points included.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.images.is_empty() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            write!(f, "(")?;
            for (k, a) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", a + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_cycles(s, None)
    }
}

/// A function `{1..d} → {±1}`. The odd extension `ε(−i) = −ε(i)` is implied wherever a
/// sign vector is evaluated at a negative label.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignVector {
    len: u8,
    /// bit `i` set ⇔ cell `i` (0-based) carries `−1`
    minus: u64,
}

impl SignVector {
    pub fn all_plus(len: usize) -> Self {
        assert!(len <= MAX_SIGN_LEN, "sign vector longer than {MAX_SIGN_LEN}");
        SignVector {
            len: len as u8,
            minus: 0,
        }
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self, PermError> {
        if signs.len() > MAX_SIGN_LEN {
            return Err(PermError::TooLong);
        }
        let mut minus = 0;
        for (i, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => minus |= 1 << i,
                _ => return Err(parse_err("sign vector", &format!("{signs:?}"), "entries must be ±1")),
            }
        }
        Ok(SignVector {
            len: signs.len() as u8,
            minus,
        })
    }

    pub(crate) fn from_mask(len: usize, minus: u64) -> Self {
        debug_assert!(len <= MAX_SIGN_LEN);
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        SignVector {
            len: len as u8,
            minus: minus & mask,
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bitmask of the cells carrying `−1` (bit `i` for 0-based cell `i`).
    pub fn minus_mask(&self) -> u64 {
        self.minus
    }

    #[inline]
    pub fn get(&self, i: usize) -> i8 {
        debug_assert!(i < self.len());
        if self.minus >> i & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Value of the odd extension at a signed 1-based label.
    #[inline]
    pub fn at_signed(&self, label: i32) -> i8 {
        let s = self.get(label.unsigned_abs() as usize - 1);
        if label < 0 {
            -s
        } else {
            s
        }
    }

    pub fn set(&mut self, i: usize, sign: i8) {
        if sign < 0 {
            self.minus |= 1 << i;
        } else {
            self.minus &= !(1 << i);
        }
    }

    pub fn is_all_plus(&self) -> bool {
        self.minus == 0
    }

    pub fn negated(&self) -> Self {
        Self::from_mask(self.len(), !self.minus)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &SignVector) -> Self {
        assert_eq!(self.len, other.len, "sign vector length mismatch");
        SignVector {
            len: self.len,
            minus: self.minus ^ other.minus,
        }
    }

    /// `ε ∘ p`, i.e. `i ↦ ε(p(i))`.
    pub fn compose(&self, p: &Permutation) -> Self {
        assert_eq!(self.len(), p.degree(), "degree mismatch");
        let mut minus = 0;
        for i in 0..self.len() {
            minus |= (self.minus >> p.apply(i) & 1) << i;
        }
        SignVector {
            len: self.len,
            minus,
        }
    }

    /// Position in the sweep order: lexicographic over cells `1..d` with `+ < −`.
    pub fn sweep_index(&self) -> u64 {
        let d = self.len();
        (0..d).fold(0u64, |acc, i| acc << 1 | (self.minus >> i & 1))
    }

    pub fn from_sweep_index(len: usize, index: u64) -> Self {
        let mut minus = 0;
        for i in 0..len {
            minus |= (index >> (len - 1 - i) & 1) << i;
        }
        SignVector::from_mask(len, minus)
    }

    /// All `2^len` sign vectors in sweep order.
    pub fn all(len: usize) -> impl Iterator<Item = SignVector> {
        (0..1u64 << len).map(move |k| SignVector::from_sweep_index(len, k))
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }
}

impl Ord for SignVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.sweep_index().cmp(&other.sweep_index()))
    }
}

impl PartialOrd for SignVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVector({self})")
    }
}

impl FromStr for SignVector {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let signs = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' | '−' => Ok(-1),
                _ => Err(parse_err("sign vector", s, format!("unexpected {c:?}"))),
            })
            .collect::<Result<Vec<i8>, _>>()?;
        SignVector::from_signs(&signs)
    }
}

/// `x^e`: applies `x` at cells with `e = +1` and `x⁻¹` at cells with `e = −1`.
///
/// Defined when every cell `i` has `e(i) = e(x(i))` or `x²(i) = i`, i.e. `e` is constant
/// on the cycles of `x` longer than two; then `x^{−e}` is its inverse. Otherwise `None` is
/// returned, even in the rare cases where the pointwise map happens to be a bijection
/// (`x = (1 2 3 4)`, `e = +−+−`), since those do not describe a walk along the cycles.
pub fn twisted_power(x: &Permutation, e: &SignVector) -> Option<Permutation> {
    assert_eq!(x.degree(), e.len(), "degree mismatch");
    let d = x.degree();
    let admissible = (0..d).all(|i| {
        let xi = x.apply(i);
        e.get(i) == e.get(xi) || x.apply(xi) == i
    });
    if !admissible {
        return None;
    }
    let inv = x.inverse();
    let images: Vec<usize> = (0..d)
        .map(|i| if e.get(i) > 0 { x.apply(i) } else { inv.apply(i) })
        .collect();
    Some(Permutation::from_images_unchecked(images))
}

/// An odd bijection `σ` of `±{1..d}`, stored as `σ(i) = δ(i)·σ̄(i)` for `i > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    base: Permutation,
    sign: SignVector,
}

impl SignedPermutation {
    pub fn new(base: Permutation, sign: SignVector) -> Result<Self, PermError> {
        if base.degree() != sign.len() {
            return Err(PermError::DegreeMismatch(base.degree(), sign.len()));
        }
        Ok(SignedPermutation { base, sign })
    }

    pub fn identity(degree: usize) -> Self {
        SignedPermutation {
            base: Permutation::identity(degree),
            sign: SignVector::all_plus(degree),
        }
    }

    /// From the signed 1-based images of `+1, …, +d`.
    pub fn from_signed_images(images: &[i32]) -> Result<Self, PermError> {
        let base = Permutation::from_images(
            images
                .iter()
                .map(|&v| (v.unsigned_abs() as usize).wrapping_sub(1))
                .collect(),
        )?;
        let signs: Vec<i8> = images.iter().map(|&v| if v < 0 { -1 } else { 1 }).collect();
        Ok(SignedPermutation {
            base,
            sign: SignVector::from_signs(&signs)?,
        })
    }

    pub fn degree(&self) -> usize {
        self.base.degree()
    }

    /// The unsigned part `σ̄ = |σ|` on `{1..d}`.
    pub fn base(&self) -> &Permutation {
        &self.base
    }

    /// The sign part `δ_σ`.
    pub fn sign(&self) -> &SignVector {
        &self.sign
    }

    /// Image of a signed 1-based label.
    pub fn apply(&self, label: i32) -> i32 {
        let i = label.unsigned_abs() as usize - 1;
        let v = (self.base.apply(i) + 1) as i32 * self.sign.get(i) as i32;
        if label < 0 {
            -v
        } else {
            v
        }
    }

    pub fn inverse(&self) -> Self {
        let base = self.base.inverse();
        let sign = self.sign.compose(&base);
        SignedPermutation { base, sign }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPermutation) -> Result<Self, PermError> {
        let base = self.base.compose(&other.base)?;
        let sign = other.sign.mul(&self.sign.compose(&other.base));
        Ok(SignedPermutation { base, sign })
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let images: Vec<i32> = (1..=self.degree() as i32).map(|i| self.apply(i)).collect();
        write!(f, "SignedPermutation{images:?}")
    }
}

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, PermError> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PermError::InvalidPartition(parts));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The integer being partitioned.
    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// The permutation whose cycles are the consecutive blocks `(1..j₁)(j₁+1..j₁+j₂)…`.
    pub fn canonical_x(&self) -> Permutation {
        let mut images = Vec::with_capacity(self.total());
        let mut start = 0;
        for &len in &self.parts {
            for k in 0..len {
                images.push(start + (k + 1) % len);
            }
            start += len;
        }
        Permutation { images }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{self}")
    }
}

/// All partitions of `n` in reverse-lexicographic order: `(n), (n-1,1), (n-2,2), …, (1,…,1)`.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            rec(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Free-function form of [`Partition::canonical_x`].
pub fn canonical_x(p: &Partition) -> Permutation {
    p.canonical_x()
}
