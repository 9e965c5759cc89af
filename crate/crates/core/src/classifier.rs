//! Isomorphism classes of origamis with a fixed canonical `x`.
//!
//! Two triples with the same `x` are isomorphic exactly when an odd signed permutation `σ`
//! in `Stab(x)` carries one to the other. For a fixed `σ`, the admissible new sign vectors
//! `ε′` are those for which `η = ε·(ε′∘σ̄)·δ_σ` is constant on every cycle of `y`; the
//! image is then `(σ̄·y^η·σ̄⁻¹, (η·ε·δ_σ)∘σ̄⁻¹)`.
//!
//! Triples `(x_p, y, ε)` of one partition `p` are addressed by a slot
//! `rank(y)·2^d + index(ε)`, where `rank` is the lexicographic rank of the image sequence of
//! `y` and `index` the sweep index of `ε`. Slot order is the sweep order and the order in
//! which class representatives are compared.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::origami::Origami;
use crate::perm::{
    factorial, lex_rank, lex_unrank, partitions, twisted_power, Partition, Permutation, SignVector,
    SignedPermutation,
};

/// Largest degree the census accepts.
pub const MAX_CENSUS_DEGREE: usize = 8;

/// Default memory budget for a census, in MiB.
pub const DEFAULT_MEMORY_BUDGET_MIB: u64 = 4096;

const UNCLAIMED: u32 = 0;
const NO_CLASS: u32 = u32::MAX;

/// How the `ε′` candidates of each stabilizer element are found.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EpsSearch {
    /// Try all `2^d` sign vectors and filter by the two membership conditions.
    Exhaustive,
    /// Enumerate the `2^c(y)` sign patterns constant on the cycles of `y`.
    #[default]
    Propagated,
}

/// Calls `f(σ̄, δ_σ)` for every element of `Stab(x)`: per cycle of `x`, a target cycle of
/// equal length, a rotation and a sign. `δ_σ` is a bitmask of the cells where it is `−1`.
pub fn for_each_stabilizer(x: &Permutation, mut f: impl FnMut(&[usize], u64)) {
    let cycles = x.cycles();
    let mut used = vec![false; cycles.len()];
    let mut bar = vec![0usize; x.degree()];
    fn rec(
        ci: usize,
        cycles: &[Vec<usize>],
        used: &mut [bool],
        bar: &mut [usize],
        delta: u64,
        f: &mut dyn FnMut(&[usize], u64),
    ) {
        if ci == cycles.len() {
            f(bar, delta);
            return;
        }
        let src = &cycles[ci];
        let m = src.len();
        for ti in 0..cycles.len() {
            if used[ti] || cycles[ti].len() != m {
                continue;
            }
            used[ti] = true;
            let dst = &cycles[ti];
            for r in 0..m {
                for k in 0..m {
                    bar[src[k]] = dst[(k + r) % m];
                }
                rec(ci + 1, cycles, used, bar, delta, f);
                let mut minus = delta;
                for k in 0..m {
                    bar[src[k]] = dst[(r + m - k) % m];
                    minus |= 1 << src[k];
                }
                rec(ci + 1, cycles, used, bar, minus, f);
            }
            used[ti] = false;
        }
    }
    rec(0, &cycles, &mut used, &mut bar, 0, &mut f);
}

/// All elements of `Stab(x)`.
pub fn stabilizer_x(x: &Permutation) -> Vec<SignedPermutation> {
    let d = x.degree();
    let mut out = Vec::new();
    for_each_stabilizer(x, |bar, delta| {
        out.push(
            SignedPermutation::new(
                Permutation::from_images_unchecked(bar.to_vec()),
                SignVector::from_mask(d, delta),
            )
            .expect("same degree"),
        );
    });
    out
}

/// `Π n_m!·(2m)^{n_m}` over the cycle lengths `m` of `x` with multiplicities `n_m`.
pub fn stabilizer_order(x: &Permutation) -> u64 {
    let mut mult: HashMap<usize, u64> = HashMap::new();
    for &m in x.cycle_type().parts() {
        *mult.entry(m).or_default() += 1;
    }
    mult.iter()
        .map(|(&m, &n)| factorial(n as usize) * (2 * m as u64).pow(n as u32))
        .product()
}

#[inline]
fn slot_of(d: usize, y: &[usize], eps_index: u64) -> u32 {
    ((lex_rank(y) << d) | eps_index) as u32
}

/// Members of the restricted class of `(x, y, ε)` as sorted, deduplicated slots.
fn class_slots(x: &Permutation, y: &Permutation, eps: &SignVector, search: EpsSearch) -> Vec<u32> {
    let d = x.degree();
    let yinv = y.inverse();
    let mut out = Vec::new();
    match search {
        EpsSearch::Propagated => {
            let cycles = y.cycles();
            let mut cyc = vec![0usize; d];
            for (k, c) in cycles.iter().enumerate() {
                for &a in c {
                    cyc[a] = k;
                }
            }
            let mut yp = vec![0usize; d];
            for_each_stabilizer(x, |bar, delta| {
                for mask in 0u64..1 << cycles.len() {
                    let mut idx = 0u64;
                    for i in 0..d {
                        let eta_minus = mask >> cyc[i] & 1;
                        let step = if eta_minus == 0 { y.apply(i) } else { yinv.apply(i) };
                        yp[bar[i]] = bar[step];
                        let sign = eta_minus ^ (eps.minus_mask() >> i & 1) ^ (delta >> i & 1);
                        idx |= sign << (d - 1 - bar[i]);
                    }
                    out.push(slot_of(d, &yp, idx));
                }
            });
        }
        EpsSearch::Exhaustive => {
            for_each_stabilizer(x, |bar, delta| {
                let sbar = Permutation::from_images_unchecked(bar.to_vec());
                let sinv = sbar.inverse();
                let delta = SignVector::from_mask(d, delta);
                for eps2 in SignVector::all(d) {
                    let eta = eps.mul(&eps2.compose(&sbar)).mul(&delta);
                    let Some(twisted) = twisted_power(y, &eta) else {
                        continue;
                    };
                    let y2 = Permutation::conjugate(&sbar, &twisted).expect("same degree");
                    let mu = delta.compose(&sinv).mul(&eps.compose(&sinv)).mul(&eps2);
                    if (0..d).all(|i| mu.get(i) == mu.get(y2.apply(i))) {
                        out.push(slot_of(d, y2.images(), eps2.sweep_index()));
                    }
                }
            });
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn decode_slot(d: usize, slot: u32) -> (Permutation, SignVector) {
    let mut y = vec![0; d];
    lex_unrank(d, (slot >> d) as u64, &mut y);
    let eps = SignVector::from_sweep_index(d, slot as u64 & ((1 << d) - 1));
    (Permutation::from_images_unchecked(y), eps)
}

/// The restricted class of a connected origami with canonical `x`: every `(y′, ε′)` such
/// that `(x, y′, ε′)` is isomorphic to it, sorted so the first member is the canonical
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedClass {
    pub x: Permutation,
    pub members: Vec<(Permutation, SignVector)>,
}

impl RestrictedClass {
    pub fn representative(&self) -> Origami {
        let (y, eps) = &self.members[0];
        Origami::new(self.x.clone(), y.clone(), *eps).expect("same degree")
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, o: &Origami) -> bool {
        o.x() == &self.x && self.members.iter().any(|(y, e)| y == o.y() && e == o.eps())
    }
}

pub fn restricted_class(o: &Origami, search: EpsSearch) -> Result<RestrictedClass> {
    check_degree(o.degree())?;
    if !o.is_connected() {
        return Err(Error::Disconnected);
    }
    if !o.has_canonical_x() {
        return Err(Error::NonCanonicalX(o.x().to_string()));
    }
    let d = o.degree();
    let members = class_slots(o.x(), o.y(), o.eps(), search)
        .into_iter()
        .map(|s| decode_slot(d, s))
        .collect();
    Ok(RestrictedClass {
        x: o.x().clone(),
        members,
    })
}

fn check_degree(d: usize) -> Result<()> {
    if d == 0 || d > MAX_CENSUS_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: d,
            limit: MAX_CENSUS_DEGREE,
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrigamiClass {
    pub id: u32,
    /// Index into [`Census::partitions`].
    pub partition: usize,
    pub rep: Origami,
    pub size: u64,
    pub abelian: bool,
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub search: EpsSearch,
    pub memory_budget_mib: u64,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            workers: None,
            search: EpsSearch::Propagated,
            memory_budget_mib: DEFAULT_MEMORY_BUDGET_MIB,
        }
    }
}

/// All classes of connected origamis of one degree, with a slot table for lookups.
#[derive(Debug)]
pub struct Census {
    degree: usize,
    partitions: Vec<Partition>,
    xs: Vec<Permutation>,
    classes: Vec<OrigamiClass>,
    /// per partition, per slot: class id or `NO_CLASS` for disconnected triples
    lookup: Vec<Vec<u32>>,
}

/// Rough peak memory of a census in MiB.
pub fn census_memory_mib(d: usize) -> u64 {
    let slots = factorial(d) << d;
    let tables = slots * 4 * (partitions(d).len() as u64 + 1);
    tables / (1 << 20) + 1
}

pub fn census(d: usize) -> Result<Census> {
    census_with(d, &CensusOptions::default())
}

pub fn census_with(d: usize, opts: &CensusOptions) -> Result<Census> {
    check_degree(d)?;
    let needed = census_memory_mib(d);
    if needed > opts.memory_budget_mib {
        return Err(Error::MemoryBudget {
            degree: d,
            needed,
            budget: opts.memory_budget_mib,
        });
    }
    match opts.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?
            .install(|| sweep(d, opts.search)),
        None => sweep(d, opts.search),
    }
}

fn sweep(d: usize, search: EpsSearch) -> Result<Census> {
    let parts = partitions(d);
    let nperm = factorial(d);
    let nslots = (nperm << d) as usize;
    let mut classes = Vec::new();
    let mut lookup = Vec::with_capacity(parts.len());
    let mut xs = Vec::with_capacity(parts.len());
    for (pi, part) in parts.iter().enumerate() {
        let x = part.canonical_x();
        let owner: Vec<AtomicU32> = (0..nslots).map(|_| AtomicU32::new(UNCLAIMED)).collect();
        let mut found: Vec<(u32, u64)> = (0..nperm)
            .into_par_iter()
            .flat_map_iter(|ry| {
                let y = Permutation::from_lex_rank(d, ry);
                let mut local = Vec::new();
                if crate::origami::orbit_count(d, &[x.images(), y.images()]) > 1 {
                    return local.into_iter();
                }
                for e in 0..1u64 << d {
                    let slot = ((ry << d) | e) as usize;
                    if owner[slot].load(Ordering::Acquire) != UNCLAIMED {
                        continue;
                    }
                    let eps = SignVector::from_sweep_index(d, e);
                    let members = class_slots(&x, &y, &eps, search);
                    let rep = members[0];
                    if owner[rep as usize]
                        .compare_exchange(UNCLAIMED, rep + 1, Ordering::AcqRel, Ordering::Acquire)
                        .is_ok()
                    {
                        for &m in &members[1..] {
                            owner[m as usize].store(rep + 1, Ordering::Release);
                        }
                        local.push((rep, members.len() as u64));
                    }
                }
                local.into_iter()
            })
            .collect();
        found.sort_unstable();
        let base = classes.len() as u32;
        let table: Vec<u32> = owner
            .into_par_iter()
            .map(|o| {
                let o = o.into_inner();
                if o == UNCLAIMED {
                    NO_CLASS
                } else {
                    let k = found
                        .binary_search_by_key(&(o - 1), |&(r, _)| r)
                        .expect("owner is a claimed representative");
                    base + k as u32
                }
            })
            .collect();
        let new: Vec<OrigamiClass> = found
            .par_iter()
            .enumerate()
            .map(|(k, &(rep, size))| {
                let (y, eps) = decode_slot(d, rep);
                let o = Origami::new(x.clone(), y, eps).expect("same degree");
                let abelian = o.is_abelian().expect("connected");
                OrigamiClass {
                    id: base + k as u32,
                    partition: pi,
                    rep: o,
                    size,
                    abelian,
                }
            })
            .collect();
        classes.extend(new);
        lookup.push(table);
        xs.push(x);
    }
    Ok(Census {
        degree: d,
        partitions: parts,
        xs,
        classes,
        lookup,
    })
}

impl Census {
    /// Rebuilds a census from its class representatives in id order, recomputing every
    /// member. Fails if a representative is not the minimum of its class or the classes
    /// overlap.
    pub fn from_representatives(d: usize, reps: Vec<(Origami, Option<u64>)>) -> Result<Census> {
        check_degree(d)?;
        let parts = partitions(d);
        let index: HashMap<Partition, usize> =
            parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let nslots = (factorial(d) << d) as usize;
        let xs: Vec<Permutation> = parts.iter().map(Partition::canonical_x).collect();
        let expanded: Vec<(usize, Vec<u32>)> = reps
            .par_iter()
            .map(|(o, _)| {
                if o.degree() != d {
                    return Err(Error::Degree {
                        expected: d,
                        got: o.degree(),
                    });
                }
                if !o.is_connected() {
                    return Err(Error::Disconnected);
                }
                if !o.has_canonical_x() {
                    return Err(Error::NonCanonicalX(o.x().to_string()));
                }
                let pi = index[&o.x().cycle_type()];
                let rep = slot_of(d, o.y().images(), o.eps().sweep_index());
                let members = class_slots(o.x(), o.y(), o.eps(), EpsSearch::Propagated);
                if members[0] != rep {
                    return Err(Error::Invariant(format!("{o} is not the minimum of its class")));
                }
                Ok((pi, members))
            })
            .collect::<Result<_>>()?;
        let mut lookup = vec![vec![NO_CLASS; nslots]; parts.len()];
        let mut classes = Vec::with_capacity(reps.len());
        let mut last: Option<(usize, u32)> = None;
        for (id, ((o, size), (pi, members))) in reps.into_iter().zip(expanded).enumerate() {
            if let Some(prev) = last {
                if prev >= (pi, members[0]) {
                    return Err(Error::Invariant("representatives out of sweep order".into()));
                }
            }
            last = Some((pi, members[0]));
            if let Some(s) = size {
                if s != members.len() as u64 {
                    return Err(Error::Invariant(format!(
                        "class of {o} has {} members, recorded {s}",
                        members.len()
                    )));
                }
            }
            for &m in &members {
                let cell = &mut lookup[pi][m as usize];
                if *cell != NO_CLASS {
                    return Err(Error::Invariant(format!("classes overlap at {o}")));
                }
                *cell = id as u32;
            }
            let abelian = o.is_abelian()?;
            classes.push(OrigamiClass {
                id: id as u32,
                partition: pi,
                rep: o,
                size: members.len() as u64,
                abelian,
            });
        }
        Ok(Census {
            degree: d,
            partitions: parts,
            xs,
            classes,
            lookup,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn classes(&self) -> &[OrigamiClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, id: u32) -> Result<&OrigamiClass> {
        self.classes.get(id as usize).ok_or(Error::UnknownClass(id))
    }

    /// `(abelian, non-abelian)` class counts.
    pub fn counts(&self) -> (usize, usize) {
        let ab = self.classes.iter().filter(|c| c.abelian).count();
        (ab, self.classes.len() - ab)
    }

    /// Number of connected triples covered by the classes.
    pub fn total_members(&self) -> u64 {
        self.classes.iter().map(|c| c.size).sum()
    }

    /// Class of an origami whose `x` is already canonical.
    pub fn find_class(&self, o: &Origami) -> Result<u32> {
        if o.degree() != self.degree {
            return Err(Error::Degree {
                expected: self.degree,
                got: o.degree(),
            });
        }
        let pi = self
            .partitions
            .iter()
            .position(|p| p == &o.x().cycle_type())
            .expect("every cycle type is a partition");
        if o.x() != &self.xs[pi] {
            return Err(Error::NonCanonicalX(o.x().to_string()));
        }
        let slot = slot_of(self.degree, o.y().images(), o.eps().sweep_index());
        match self.lookup[pi][slot as usize] {
            NO_CLASS => Err(Error::ClassNotFound(o.to_string())),
            id => Ok(id),
        }
    }

    /// Class of any connected origami of this degree, relabelling `x` first.
    pub fn classify(&self, o: &Origami) -> Result<u32> {
        if !o.is_connected() {
            return Err(Error::Disconnected);
        }
        self.find_class(&o.canonicalize_x().0)
    }

    /// All members of a class.
    pub fn members(&self, id: u32) -> Result<RestrictedClass> {
        restricted_class(&self.class(id)?.rep, EpsSearch::Propagated)
    }
}
