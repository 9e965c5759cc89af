//! Independent oracles: brute-force canonical labelling of the double cover and of
//! translation pairs. Nothing here goes through the classifier's slot tables.
#![allow(dead_code)]

use std::collections::HashMap;

use origami::perm::{partitions, Permutation, SignVector};
use origami::Origami;

fn inv(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        q[v] = i;
    }
    q
}

/// Smallest relabelling of the generator tuple over all BFS starting points.
pub fn canon(gens: &[&[usize]]) -> Vec<u8> {
    let n = gens[0].len();
    let mut best: Option<Vec<u8>> = None;
    let mut label = vec![u8::MAX; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        label.fill(u8::MAX);
        order.clear();
        label[s] = 0;
        order.push(s);
        let mut q = 0;
        while q < order.len() {
            let p = order[q];
            q += 1;
            for g in gens {
                let t = g[p];
                if label[t] == u8::MAX {
                    label[t] = order.len() as u8;
                    order.push(t);
                }
            }
        }
        if order.len() < n {
            return Vec::new();
        }
        let key: Vec<u8> = gens.iter().flat_map(|g| order.iter().map(|&p| label[g[p]])).collect();
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.unwrap_or_default()
}

/// Double cover written directly from the gluing rules, on points `0..d` (+) and `d..2d` (−).
pub fn cover(x: &[usize], y: &[usize], e: &[i8]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let d = x.len();
    let xi = inv(x);
    let yi = inv(y);
    let mut xh = vec![0; 2 * d];
    let mut yh = vec![0; 2 * d];
    for i in 0..d {
        xh[i] = x[i];
        xh[d + i] = d + xi[i];
        // going up from the + copy of i
        let (j, s) = if e[i] > 0 { (y[i], e[i] * e[y[i]]) } else { (yi[i], e[i] * e[yi[i]]) };
        yh[i] = if s > 0 { j } else { d + j };
        let (j, s) = if e[i] > 0 { (yi[i], e[i] * e[yi[i]]) } else { (y[i], e[i] * e[y[i]]) };
        yh[d + i] = if s > 0 { d + j } else { j };
    }
    let iota = (0..2 * d).map(|i| (i + d) % (2 * d)).collect();
    (xh, yh, iota)
}

pub fn cover_key(x: &[usize], y: &[usize], e: &[i8]) -> Vec<u8> {
    let (xh, yh, io) = cover(x, y, e);
    canon(&[&xh, &yh, &io])
}

fn connected(x: &[usize], y: &[usize]) -> bool {
    let d = x.len();
    let mut seen = vec![false; d];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(a) = stack.pop() {
        for b in [x[a], y[a]] {
            if !seen[b] {
                seen[b] = true;
                count += 1;
                stack.push(b);
            }
        }
    }
    count == d
}

pub fn all_perms(d: usize) -> Vec<Vec<usize>> {
    let n: u64 = (1..=d as u64).product();
    (0..n).map(|r| Permutation::from_lex_rank(d, r).images().to_vec()).collect()
}

/// One oracle class: the first triple met, and the abelian flag from orbit sizes.
pub struct OracleClass {
    pub origami: Origami,
    pub abelian: bool,
    /// Triples with canonical `x` in the class.
    pub size: u64,
}

/// Every connected triple with canonical `x`, grouped by the canonical key of its cover.
pub struct OracleCensus {
    pub classes: Vec<OracleClass>,
    pub index: HashMap<Vec<u8>, usize>,
}

fn cover_splits(xh: &[usize], yh: &[usize]) -> bool {
    let d = xh.len() / 2;
    let mut seen = vec![false; 2 * d];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(a) = stack.pop() {
        for b in [xh[a], yh[a]] {
            if !seen[b] {
                seen[b] = true;
                count += 1;
                stack.push(b);
            }
        }
    }
    count == d
}

pub fn oracle_census(d: usize) -> OracleCensus {
    let mut classes = Vec::new();
    let mut index = HashMap::new();
    let ys = all_perms(d);
    for p in partitions(d) {
        let x = p.canonical_x().images().to_vec();
        for y in &ys {
            if !connected(&x, y) {
                continue;
            }
            for eps in SignVector::all(d) {
                let e = eps.signs();
                let (xh, yh, io) = cover(&x, y, &e);
                let key = canon(&[&xh, &yh, &io]);
                if let Some(&k) = index.get(&key) {
                    let c: &mut OracleClass = &mut classes[k];
                    c.size += 1;
                    continue;
                }
                index.insert(key, classes.len());
                let o = Origami::new(
                    Permutation::from_images(x.clone()).unwrap(),
                    Permutation::from_images(y.clone()).unwrap(),
                    eps,
                )
                .unwrap();
                classes.push(OracleClass {
                    origami: o,
                    abelian: cover_splits(&xh, &yh),
                    size: 1,
                });
            }
        }
    }
    OracleCensus { classes, index }
}

impl OracleCensus {
    pub fn class_of(&self, o: &Origami) -> usize {
        self.index[&cover_key(o.x().images(), o.y().images(), &o.eps().signs())]
    }
}

/// Abelian classes counted from translation pairs: `(x, y)` up to conjugation and the
/// half-turn `(x, y) ~ (x⁻¹, y⁻¹)`.
pub fn abelian_class_count(d: usize) -> usize {
    let mut seen = std::collections::HashSet::new();
    let ys = all_perms(d);
    for p in partitions(d) {
        let x = p.canonical_x().images().to_vec();
        let xi = inv(&x);
        for y in &ys {
            if !connected(&x, y) {
                continue;
            }
            let yi = inv(y);
            let a = canon(&[&x, y]);
            let b = canon(&[&xi, &yi]);
            seen.insert(a.min(b));
        }
    }
    seen.len()
}

fn after(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

/// The generators and the mirror acting on covers directly: `T: (X, YX⁻¹, Xι)`,
/// `S: (Y⁻¹, X, ι)`, `M: (X⁻¹, Y, ι)`. Returns `[T, S, M]` images of every class.
pub fn oracle_action(c: &OracleCensus) -> Vec<[usize; 3]> {
    c.classes
        .iter()
        .map(|k| {
            let o = &k.origami;
            let (xh, yh, io) = cover(o.x().images(), o.y().images(), &o.eps().signs());
            let xi = inv(&xh);
            let t = canon(&[&xh, &after(&yh, &xi), &after(&xh, &io)]);
            let s = canon(&[&inv(&yh), &xh, &io]);
            let m = canon(&[&xi, &yh, &io]);
            [c.index[&t], c.index[&s], c.index[&m]]
        })
        .collect()
}

/// Singularity orders read off by walking the corners of the squares. A corner is
/// `(cell, k)` with `k` = SW, SE, NE, NW; a vertex with `n` corners has order `n/2 − 2`.
pub fn corner_walk_orders(o: &Origami) -> Vec<i32> {
    let d = o.degree();
    let (x, y) = (o.x().images(), o.y().images());
    let (xi, yi) = (inv(x), inv(y));
    let e = o.eps().signs();
    let across = |c: usize, k: usize| -> (usize, usize) {
        match k {
            0 => (xi[c], 1),
            2 => (x[c], 3),
            _ => {
                let top = k == 3;
                let forward = top == (e[c] > 0);
                let j = if forward { y[c] } else { yi[c] };
                let j_top = if forward { e[j] < 0 } else { e[j] > 0 };
                let j_left = if top != j_top { top } else { !top };
                let k2 = match (j_top, j_left) {
                    (true, true) => 3,
                    (true, false) => 2,
                    (false, true) => 0,
                    (false, false) => 1,
                };
                (j, k2)
            }
        }
    };
    let mut seen = vec![false; 4 * d];
    let mut orders = Vec::new();
    for s in 0..4 * d {
        let mut n = 0;
        let mut cur = s;
        while !seen[cur] {
            seen[cur] = true;
            n += 1;
            let (c, k) = across(cur / 4, cur % 4);
            cur = 4 * c + k;
        }
        if n > 0 {
            orders.push(n / 2 - 2);
        }
    }
    orders.sort_unstable();
    orders
}

/// Genus of a translation origami from the cycles of its commutator.
pub fn translation_genus(x: &[usize], y: &[usize]) -> usize {
    let n = x.len();
    let comm = after(&after(&inv(y), &inv(x)), &after(y, x));
    let mut seen = vec![false; n];
    let mut vertices = 0;
    for s in 0..n {
        if !seen[s] {
            vertices += 1;
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                c = comm[c];
            }
        }
    }
    (n - vertices) / 2 + 1
}
