//! Small finite groups given by Cayley tables, isomorphism invariants and a
//! catalogue of the groups that occur as N'/H'.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::Serialize;

use super::{quotient_group, SubgroupHandle};
use crate::arith::{gcd, Mat2};
use crate::error::{Error, Result};

/// A finite group on {0, .., k-1} given by its multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    k: usize,
    table: Vec<u32>,
    identity: usize,
}

impl FiniteGroup {
    /// Checks for an identity and inverses; associativity is assumed.
    pub fn from_table(k: usize, table: Vec<u32>) -> Result<Self> {
        if table.len() != k * k || k == 0 {
            return Err(Error::invalid("Cayley table has the wrong size"));
        }
        let identity = (0..k)
            .find(|&e| (0..k).all(|x| table[e * k + x] as usize == x && table[x * k + e] as usize == x))
            .ok_or_else(|| Error::invalid("Cayley table has no identity"))?;
        let g = FiniteGroup { k, table, identity };
        for x in 0..k {
            if !(0..k).any(|y| g.mul(x, y) == identity) {
                return Err(Error::invalid("Cayley table has an element without inverse"));
            }
        }
        Ok(g)
    }

    /// Closure of `gens` under `mul`.
    pub fn generated_by<T, F>(gens: &[T], identity: T, mul: F) -> Self
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut index: HashMap<T, usize> = HashMap::from([(identity.clone(), 0)]);
        let mut elements = vec![identity];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let y = mul(&elements[i], g);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(y);
                }
            }
        }
        let k = elements.len();
        let mut table = vec![0u32; k * k];
        for i in 0..k {
            for j in 0..k {
                table[i * k + j] = index[&mul(&elements[i], &elements[j])] as u32;
            }
        }
        FiniteGroup { k, table, identity: 0 }
    }

    pub fn cyclic(n: usize) -> Self {
        Self::generated_by(&[1 % n], 0, |a, b| (a + b) % n)
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> Self {
        let gens: Vec<(usize, usize)> = (0..self.k)
            .map(|x| (x, other.identity))
            .chain((0..other.k).map(|y| (self.identity, y)))
            .collect();
        Self::generated_by(&gens, (self.identity, other.identity), |a, b| {
            (self.mul(a.0, b.0), other.mul(a.1, b.1))
        })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.k + y] as usize
    }

    pub fn inverse(&self, x: usize) -> usize {
        (0..self.k).find(|&y| self.mul(x, y) == self.identity).expect("group element")
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut n = 1;
        while y != self.identity {
            y = self.mul(y, x);
            n += 1;
        }
        n
    }

    fn power(&self, x: usize, mut e: usize) -> usize {
        let mut acc = self.identity;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.k).all(|x| (x..self.k).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.k];
        seen[self.identity] = true;
        let mut stack = vec![self.identity];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    fn center_order(&self) -> usize {
        (0..self.k)
            .filter(|&x| (0..self.k).all(|y| self.mul(x, y) == self.mul(y, x)))
            .count()
    }

    /// Invariant factors d_1 | d_2 | ... of the abelianisation.
    pub fn abelianization(&self) -> Vec<u64> {
        let mut commutators = Vec::new();
        for x in 0..self.k {
            for y in 0..self.k {
                let c = self.mul(self.mul(self.inverse(x), self.inverse(y)), self.mul(x, y));
                commutators.push(c);
            }
        }
        commutators.sort_unstable();
        commutators.dedup();
        let derived = self.closure(&commutators);
        // cosets of the derived subgroup
        let mut coset = vec![usize::MAX; self.k];
        let mut reps = Vec::new();
        for x in 0..self.k {
            if coset[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for h in (0..self.k).filter(|&h| derived[h]) {
                coset[self.mul(x, h)] = id;
            }
        }
        let m = reps.len();
        let mut table = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                table[i * m + j] = coset[self.mul(reps[i], reps[j])] as u32;
            }
        }
        let q = FiniteGroup::from_table(m, table).expect("quotient group");
        abelian_invariants(&q)
    }

    /// A generating set, of minimal size when two elements suffice.
    pub fn small_generating_set(&self) -> Vec<usize> {
        let full = |gens: &[usize]| self.closure(gens).iter().all(|&b| b);
        if self.k == 1 {
            return vec![];
        }
        // higher-order elements first, so the search usually ends quickly
        let mut by_order: Vec<usize> = (0..self.k).collect();
        by_order.sort_by_key(|&x| std::cmp::Reverse(self.element_order(x)));
        for &x in &by_order {
            if full(&[x]) {
                return vec![x];
            }
        }
        for (i, &x) in by_order.iter().enumerate() {
            let cx = self.closure(&[x]);
            for &y in &by_order[i + 1..] {
                if !cx[y] && full(&[x, y]) {
                    return vec![x, y];
                }
            }
        }
        let mut gens: Vec<usize> = Vec::new();
        let mut cl = self.closure(&gens);
        for &x in &by_order {
            if !cl[x] {
                gens.push(x);
                cl = self.closure(&gens);
            }
        }
        gens
    }

    /// Tries to extend `gens -> images` to a homomorphism; returns it if injective.
    fn extend_map(&self, other: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.k];
        map[self.identity] = other.identity;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for (g, h) in gens.iter().zip(images) {
                let y = self.mul(x, *g);
                let fy = other.mul(map[x], *h);
                if map[y] == usize::MAX {
                    map[y] = fy;
                    queue.push_back(y);
                } else if map[y] != fy {
                    return None;
                }
            }
        }
        // consistency on every edge of the Cayley graph makes this a homomorphism
        let mut hit = vec![false; other.k];
        for &v in &map {
            if hit[v] {
                return None;
            }
            hit[v] = true;
        }
        Some(map)
    }

    /// Explicit isomorphism test by searching images of a small generating set.
    pub fn is_isomorphic(&self, other: &FiniteGroup) -> bool {
        if self.k != other.k || self.order_histogram() != other.order_histogram() {
            return false;
        }
        let gens = self.small_generating_set();
        let orders: Vec<usize> = gens.iter().map(|&g| self.element_order(g)).collect();
        let candidates: Vec<Vec<usize>> = orders
            .iter()
            .map(|&o| (0..other.k).filter(|&y| other.element_order(y) == o).collect())
            .collect();
        let mut choice = vec![0usize; gens.len()];
        if gens.is_empty() {
            return true;
        }
        loop {
            let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
            if self.extend_map_quick(other, &gens, &images) && self.extend_map(other, &gens, &images).is_some() {
                return true;
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == choice.len() {
                    return false;
                }
                choice[pos] += 1;
                if choice[pos] < candidates[pos].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Cheap necessary condition: the images generate a group of the right order.
    fn extend_map_quick(&self, other: &FiniteGroup, _gens: &[usize], images: &[usize]) -> bool {
        other.closure(images).iter().all(|&b| b)
    }

    pub fn exponent(&self) -> u64 {
        (0..self.k).fold(1u64, |acc, x| {
            let o = self.element_order(x) as u64;
            acc / gcd(acc, o) * o
        })
    }

    pub fn order_histogram(&self) -> BTreeMap<u64, u64> {
        let mut h = BTreeMap::new();
        for x in 0..self.k {
            *h.entry(self.element_order(x) as u64).or_insert(0) += 1;
        }
        h
    }
}

fn abelian_invariants(q: &FiniteGroup) -> Vec<u64> {
    let n = q.order() as u64;
    if n == 1 {
        return vec![];
    }
    let primes: Vec<u64> = crate::arith::factorize(n)
        .expect("nonzero")
        .factors()
        .iter()
        .map(|&(p, _)| p)
        .collect();
    // per prime: the partition of the p-part, largest first
    let mut prime_parts: Vec<Vec<u64>> = Vec::new();
    for &p in &primes {
        let mut logs = vec![0u32];
        let mut pk = 1u64;
        loop {
            pk *= p;
            let count = (0..q.order()).filter(|&x| q.power(x, pk as usize) == q.identity()).count() as u64;
            let mut l = 0;
            let mut c = count;
            while c % p == 0 && c > 1 {
                c /= p;
                l += 1;
            }
            if l == *logs.last().unwrap() {
                break;
            }
            logs.push(l);
        }
        // number of cyclic factors of order >= p^k is logs[k] - logs[k-1]
        let mut sizes = Vec::new();
        let top = logs.len() - 1;
        for k in 1..=top {
            let ge_k = logs[k] - logs[k - 1];
            let ge_next = if k < top { logs[k + 1] - logs[k] } else { 0 };
            for _ in 0..(ge_k - ge_next) {
                sizes.push(p.pow(k as u32));
            }
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        prime_parts.push(sizes);
    }
    let len = prime_parts.iter().map(Vec::len).max().unwrap_or(0);
    let mut out: Vec<u64> = (0..len)
        .map(|i| prime_parts.iter().map(|v| v.get(i).copied().unwrap_or(1)).product())
        .collect();
    out.reverse();
    out
}

/// Catalogue labels for the groups that occur as N'/H'.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GroupLabel {
    Trivial,
    Cyclic(u64),
    KleinFour,
    S3,
    Z3xS3,
    /// SmallGroup(128, 68)
    D8SemiZ8,
    /// SmallGroup(128, 67)
    Z8SquaredSemiZ2,
    /// PSL_2(Z/2^e), i.e. SL_2 modulo its scalar subgroup.
    Psl2TwoPower(u32),
    Psl2Three,
    Unmatched,
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Trivial => write!(f, "trivial"),
            GroupLabel::Cyclic(k) => write!(f, "Z/{k}"),
            GroupLabel::KleinFour => write!(f, "Z/2 x Z/2"),
            GroupLabel::S3 => write!(f, "S3"),
            GroupLabel::Z3xS3 => write!(f, "Z/3 x S3"),
            GroupLabel::D8SemiZ8 => write!(f, "D8 : Z/8 [128-68]"),
            GroupLabel::Z8SquaredSemiZ2 => write!(f, "(Z/8)^2 : Z/2 [128-67]"),
            GroupLabel::Psl2TwoPower(e) => write!(f, "PSL2(Z/{})", 1u64 << e),
            GroupLabel::Psl2Three => write!(f, "PSL2(Z/3)"),
            GroupLabel::Unmatched => write!(f, "unmatched"),
        }
    }
}

impl GroupLabel {
    pub fn order(&self) -> Option<u64> {
        Some(match self {
            GroupLabel::Trivial => 1,
            GroupLabel::Cyclic(k) => *k,
            GroupLabel::KleinFour => 4,
            GroupLabel::S3 => 6,
            GroupLabel::Z3xS3 => 18,
            GroupLabel::D8SemiZ8 | GroupLabel::Z8SquaredSemiZ2 => 128,
            GroupLabel::Psl2TwoPower(e) => match e {
                1 => 6,
                2 => 24,
                _ => 96 * 8u64.pow(e - 3),
            },
            GroupLabel::Psl2Three => 12,
            GroupLabel::Unmatched => return None,
        })
    }

    /// A concrete model of the labelled group.
    pub fn model(&self) -> Option<FiniteGroup> {
        Some(match self {
            GroupLabel::Trivial => FiniteGroup::cyclic(1),
            GroupLabel::Cyclic(k) => FiniteGroup::cyclic(*k as usize),
            GroupLabel::KleinFour => FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(2)),
            GroupLabel::S3 => symmetric3(),
            GroupLabel::Z3xS3 => FiniteGroup::cyclic(3).direct_product(&symmetric3()),
            GroupLabel::D8SemiZ8 => dihedral16_by_z8(),
            GroupLabel::Z8SquaredSemiZ2 => z8_wreath_z2(),
            GroupLabel::Psl2TwoPower(e) => psl2(1 << e),
            GroupLabel::Psl2Three => psl2(3),
            GroupLabel::Unmatched => return None,
        })
    }
}

fn symmetric3() -> FiniteGroup {
    let compose = |a: &[u8; 3], b: &[u8; 3]| [a[b[0] as usize], a[b[1] as usize], a[b[2] as usize]];
    FiniteGroup::generated_by(&[[1, 0, 2], [1, 2, 0]], [0, 1, 2], compose)
}

/// The dihedral group of order 16, <r, s>, extended by z of order 8 acting
/// as r -> r^5, s -> r^3 s.
fn dihedral16_by_z8() -> FiniteGroup {
    // (i, j, k) = r^i s^j z^k
    let phi = |i: u8, j: u8| ((5 * i + 3 * j) % 8, j);
    let phi_k = move |mut i: u8, j: u8, k: u8| {
        for _ in 0..k {
            (i, _) = phi(i, j);
        }
        (i, j)
    };
    let dmul = |(i, j): (u8, u8), (k, l): (u8, u8)| {
        let sign = if j == 0 { k } else { (8 - k) % 8 };
        ((i + sign) % 8, (j + l) % 2)
    };
    let mul = move |a: &(u8, u8, u8), b: &(u8, u8, u8)| {
        let moved = phi_k(b.0, b.1, a.2);
        let (i, j) = dmul((a.0, a.1), moved);
        (i, j, (a.2 + b.2) % 8)
    };
    FiniteGroup::generated_by(&[(1, 0, 0), (0, 1, 0), (0, 0, 1)], (0, 0, 0), mul)
}

/// (Z/8)^2 extended by the coordinate swap.
fn z8_wreath_z2() -> FiniteGroup {
    let mul = |a: &(u8, u8, u8), b: &(u8, u8, u8)| {
        let (c, d) = if a.2 == 0 { (b.0, b.1) } else { (b.1, b.0) };
        ((a.0 + c) % 8, (a.1 + d) % 8, (a.2 + b.2) % 2)
    };
    FiniteGroup::generated_by(&[(1, 0, 0), (0, 0, 1)], (0, 0, 0), mul)
}

/// SL_2(Z/n) modulo the scalar matrices it contains.
fn psl2(n: u64) -> FiniteGroup {
    let scalars: Vec<Mat2> = (1..n)
        .filter(|&l| l * l % n == 1 % n)
        .map(|l| Mat2::scalar(l, n))
        .collect();
    let canon = |m: Mat2| scalars.iter().map(|s| s.mul(&m).code()).min().unwrap();
    let gens = [canon(Mat2::s(n)), canon(Mat2::t(n))];
    FiniteGroup::generated_by(&gens, canon(Mat2::identity(n)), |a, b| {
        canon(Mat2::from_code(*a, n).mul(&Mat2::from_code(*b, n)))
    })
}

/// Isomorphism invariants of a finite group and its catalogue label.
#[derive(Clone, Debug, Serialize)]
pub struct GroupFingerprint {
    pub order: u64,
    pub exponent: u64,
    pub abelianization: Vec<u64>,
    pub order_histogram: BTreeMap<u64, u64>,
    pub center_order: u64,
    pub label: GroupLabel,
}

impl GroupFingerprint {
    pub fn of(g: &FiniteGroup) -> Self {
        let mut fp = GroupFingerprint {
            order: g.order() as u64,
            exponent: g.exponent(),
            abelianization: g.abelianization(),
            order_histogram: g.order_histogram(),
            center_order: g.center_order() as u64,
            label: GroupLabel::Unmatched,
        };
        fp.label = match_label(g, &fp);
        fp
    }
}

fn candidates_for(order: u64) -> Vec<GroupLabel> {
    let mut c = match order {
        1 => vec![GroupLabel::Trivial],
        4 => vec![GroupLabel::KleinFour],
        6 => vec![GroupLabel::Psl2TwoPower(1), GroupLabel::S3],
        12 => vec![GroupLabel::Psl2Three],
        18 => vec![GroupLabel::Z3xS3],
        24 => vec![GroupLabel::Psl2TwoPower(2)],
        96 => vec![GroupLabel::Psl2TwoPower(3)],
        128 => vec![GroupLabel::D8SemiZ8, GroupLabel::Z8SquaredSemiZ2],
        _ => vec![],
    };
    if order > 1 {
        c.insert(0, GroupLabel::Cyclic(order));
    }
    c
}

fn match_label(g: &FiniteGroup, fp: &GroupFingerprint) -> GroupLabel {
    for label in candidates_for(fp.order) {
        if let GroupLabel::Cyclic(k) = label {
            if fp.order_histogram.contains_key(&k) {
                return label;
            }
            continue;
        }
        let model = label.model().expect("catalogue model");
        let cheap = model.order_histogram() == fp.order_histogram
            && model.abelianization() == fp.abelianization
            && model.center_order() as u64 == fp.center_order;
        if cheap && model.is_isomorphic(g) {
            // S3 and PSL_2(Z/2) coincide; prefer the PSL_2 name only when asked
            return label;
        }
    }
    GroupLabel::Unmatched
}

/// Fingerprint of N/H for H normal in N.
pub fn quotient_fingerprint(n_group: &SubgroupHandle, h: &SubgroupHandle) -> Result<GroupFingerprint> {
    let q = quotient_group(n_group, h)?;
    Ok(GroupFingerprint::of(&q))
}
