//! Conjugacy classes of GL_2(Z/nZ), permutation characters of coset
//! representations, and the Chen-type character identities.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gl2_order, legendre, units, Mat2, Modulus};
use crate::error::{Error, Result};
use crate::groups::{unit_group_generators, CartanType, LocalKind, SubgroupSpec};

/// Largest n^4 (matrix codes) scanned by a class partition.
pub const PARTITION_BUDGET: u64 = 1 << 24;
/// Largest |G| for direct counting of a character value.
pub const DIRECT_COUNT_BUDGET: u64 = 500_000;

/// Conjugacy classes of GL_2(Z/nZ) found by closing each element under
/// conjugation by a generating set.
#[derive(Clone, Debug)]
pub struct ClassPartition {
    n: u64,
    class_of: Vec<u32>,
    reps: Vec<Mat2>,
    sizes: Vec<u64>,
}

impl ClassPartition {
    pub fn new(n: u64) -> Result<ClassPartition> {
        let codes = n.checked_pow(4).unwrap_or(u64::MAX);
        if codes > PARTITION_BUDGET {
            return Err(Error::Budget {
                what: "conjugacy class partition",
                needed: codes,
                limit: PARTITION_BUDGET,
            });
        }
        let mut gens = vec![Mat2::t(n), Mat2::t(n).transpose()];
        gens.extend(unit_group_generators(n).into_iter().map(|u| Mat2::from_residues(u, 0, 0, 1, n)));
        let conj: Vec<(Mat2, Mat2)> = gens.iter().map(|g| (*g, g.inverse().expect("unit"))).collect();
        let mut class_of = vec![u32::MAX; codes as usize];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for code in 0..codes {
            if class_of[code as usize] != u32::MAX {
                continue;
            }
            let m = Mat2::from_code(code, n);
            if !m.is_invertible() {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(m);
            class_of[code as usize] = id;
            stack.push(m);
            let mut size = 0u64;
            while let Some(x) = stack.pop() {
                size += 1;
                for (g, gi) in &conj {
                    let y = g.mul(&x).mul(gi);
                    let slot = &mut class_of[y.code() as usize];
                    if *slot == u32::MAX {
                        *slot = id;
                        stack.push(y);
                    }
                }
            }
            sizes.push(size);
        }
        Ok(ClassPartition { n, class_of, reps, sizes })
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Smallest-code representative of each class.
    pub fn reps(&self) -> &[Mat2] {
        &self.reps
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn group_order(&self) -> u64 {
        self.sizes.iter().sum()
    }

    /// Class index of an invertible matrix.
    pub fn class_of(&self, m: &Mat2) -> usize {
        debug_assert_eq!(m.n, self.n);
        let c = self.class_of[m.code() as usize];
        assert!(c != u32::MAX, "{m} is not invertible");
        c as usize
    }

    pub fn conjugate(&self, x: &Mat2, y: &Mat2) -> bool {
        self.class_of(x) == self.class_of(y)
    }
}

/// (representative, class size) for every class of GL_2(Z/nZ).
pub fn class_partition_bruteforce(n: u64) -> Result<Vec<(Mat2, u64)>> {
    let p = ClassPartition::new(n)?;
    Ok(p.reps.iter().copied().zip(p.sizes.iter().copied()).collect())
}

/// Shapes of the class representatives of GL_2(Z/2^e).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassShape {
    /// lambda Id
    Scalar { lambda: u64 },
    /// (0 a; 1 b)
    Companion { a: u64, b: u64 },
    /// diag(lambda, lambda + 2^k u)
    Diagonal { lambda: u64, k: u32, u: u64 },
    /// (lambda, 2^k u; 2^k, lambda + shift 2^k) with shift 0, 1 or 2
    Block { lambda: u64, k: u32, u: u64, shift: u32 },
}

impl ClassShape {
    pub fn matrix(&self, e: u32) -> Mat2 {
        let q = 1u64 << e;
        match *self {
            ClassShape::Scalar { lambda } => Mat2::scalar(lambda, q),
            ClassShape::Companion { a, b } => Mat2::from_residues(0, a, 1, b, q),
            ClassShape::Diagonal { lambda, k, u } => Mat2::from_residues(lambda, 0, 0, (lambda + (u << k)) % q, q),
            ClassShape::Block { lambda, k, u, shift } => {
                let d = if shift == 0 { lambda } else { lambda + (1u64 << (k + shift - 1)) };
                Mat2::from_residues(lambda, (u << k) % q, (1u64 << k) % q, d % q, q)
            }
        }
    }

    /// Row name used in rendered tables.
    pub fn row_name(&self) -> &'static str {
        match *self {
            ClassShape::Scalar { .. } => "lambda*Id",
            ClassShape::Companion { b, .. } if b % 2 == 1 => "(0 a; 1 b), b odd",
            ClassShape::Companion { .. } => "(0 a; 1 b), b even",
            ClassShape::Diagonal { .. } => "(l 0; 0 l+2^k u)",
            ClassShape::Block { shift: 0, .. } => "(l 2^k u; 2^k l)",
            ClassShape::Block { shift: 1, .. } => "(l 2^k u; 2^k l+2^k)",
            ClassShape::Block { .. } => "(l 2^k u; 2^k l+2^(k+1))",
        }
    }
}

impl fmt::Display for ClassShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClassShape::Scalar { lambda } => write!(f, "{lambda}*Id"),
            ClassShape::Companion { a, b } => write!(f, "(0 {a}; 1 {b})"),
            ClassShape::Diagonal { lambda, k, u } => write!(f, "diag({lambda}, {lambda}+2^{k}*{u})"),
            ClassShape::Block { lambda, k, u, shift } => {
                let tail = match shift {
                    0 => String::new(),
                    1 => format!("+2^{k}"),
                    _ => format!("+2^{}", k + 1),
                };
                write!(f, "({lambda}, 2^{k}*{u}; 2^{k}, {lambda}{tail})")
            }
        }
    }
}

/// All instances of the representative shapes for GL_2(Z/2^e), before
/// removing conjugate duplicates.
pub fn shape_instances_2power(e: u32) -> Vec<ClassShape> {
    let q = 1u64 << e;
    let lambdas = units(q);
    let mut out: Vec<ClassShape> = lambdas.iter().map(|&lambda| ClassShape::Scalar { lambda }).collect();
    for &a in &lambdas {
        for b in 0..q {
            out.push(ClassShape::Companion { a, b });
        }
    }
    for k in 1..e {
        let us = units(1u64 << (e - k));
        for &lambda in &lambdas {
            for &u in &us {
                out.push(ClassShape::Diagonal { lambda, k, u });
            }
        }
        for shift in 0..3 {
            for &lambda in &lambdas {
                for &u in &us {
                    out.push(ClassShape::Block { lambda, k, u, shift });
                }
            }
        }
    }
    out
}

/// A conjugacy class representative with its size and shape.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClassRep {
    pub rep: Mat2,
    pub size: u64,
    pub shape: ClassShape,
}

/// One representative per class of GL_2(Z/2^e), taken from the shape
/// families in order; the class sizes must add up to |G|.
pub fn class_reps_2power(e: u32) -> Result<Vec<ClassRep>> {
    if !(1..=6).contains(&e) {
        return Err(Error::invalid("class representatives are provided for 1 <= e <= 6"));
    }
    let part = ClassPartition::new(1 << e)?;
    class_reps_with(&part, e)
}

/// As [`class_reps_2power`], reusing a partition of GL_2(Z/2^e).
pub fn class_reps_with(part: &ClassPartition, e: u32) -> Result<Vec<ClassRep>> {
    let mut seen = vec![false; part.len()];
    let mut out = Vec::new();
    for shape in shape_instances_2power(e) {
        let m = shape.matrix(e);
        if !m.is_invertible() {
            return Err(Error::Inconsistent(format!("{shape} is not invertible")));
        }
        let c = part.class_of(&m);
        if !seen[c] {
            seen[c] = true;
            out.push(ClassRep { rep: m, size: part.sizes()[c], shape });
        }
    }
    let total: u64 = out.iter().map(|r| r.size).sum();
    if total != part.group_order() {
        return Err(Error::Inconsistent(format!(
            "representatives cover {total} of {} elements",
            part.group_order()
        )));
    }
    Ok(out)
}

/// A permutation character, one value per class of a partition.
#[derive(Clone, Debug, Serialize)]
pub struct PermCharacter {
    pub subgroup: String,
    pub index: u64,
    pub values: Vec<u64>,
}

impl PermCharacter {
    pub fn at(&self, part: &ClassPartition, m: &Mat2) -> u64 {
        self.values[part.class_of(m)]
    }

    /// Number of orbits of G on G/H, i.e. the inner product with the trivial character.
    pub fn trivial_multiplicity(&self, part: &ClassPartition) -> u64 {
        let s: u128 = self
            .values
            .iter()
            .zip(part.sizes())
            .map(|(&v, &s)| v as u128 * s as u128)
            .sum();
        (s / part.group_order() as u128) as u64
    }
}

/// chi_H(C) = |G| |C n H| / (|C| |H|), counting the elements of H in each class.
pub fn perm_character(spec: &SubgroupSpec, part: &ClassPartition) -> Result<PermCharacter> {
    let n = part.level();
    if spec.level() != n {
        return Err(Error::invalid("subgroup and partition have different levels"));
    }
    let codes = n.pow(4);
    let hist = (0..codes)
        .into_par_iter()
        .fold(
            || vec![0u64; part.len()],
            |mut acc, code| {
                let c = part.class_of[code as usize];
                if c != u32::MAX && spec.contains(&Mat2::from_code(code, n)) {
                    acc[c as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; part.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let h: u64 = hist.iter().sum();
    if h != spec.order() {
        return Err(Error::Inconsistent(format!("{spec}: counted {h} members, expected {}", spec.order())));
    }
    let g = part.group_order() as u128;
    let mut values = Vec::with_capacity(part.len());
    for (count, size) in hist.iter().zip(part.sizes()) {
        let num = g * *count as u128;
        let den = *size as u128 * h as u128;
        if num % den != 0 {
            return Err(Error::Inconsistent(format!("{spec}: non-integral character value")));
        }
        values.push((num / den) as u64);
    }
    Ok(PermCharacter {
        subgroup: spec.to_string(),
        index: (g / h as u128) as u64,
        values,
    })
}

/// chi_H(gamma) = #{g in G : g^-1 gamma g in H} / |H| by direct counting.
pub fn perm_character_direct(spec: &SubgroupSpec, gamma: &Mat2) -> Result<u64> {
    let n = spec.level();
    let g_order = gl2_order(&Modulus::new(n)?);
    if g_order > DIRECT_COUNT_BUDGET {
        return Err(Error::Budget {
            what: "direct character count",
            needed: g_order,
            limit: DIRECT_COUNT_BUDGET,
        });
    }
    let count: u64 = (0..n.pow(4))
        .into_par_iter()
        .filter(|&code| {
            let g = Mat2::from_code(code, n);
            match g.inverse() {
                Some(gi) => spec.contains(&gi.mul(gamma).mul(&g)),
                None => false,
            }
        })
        .count() as u64;
    let h = spec.order();
    if count % h != 0 {
        return Err(Error::Inconsistent(format!("{spec}: {count} not divisible by {h}")));
    }
    Ok(count / h)
}

/// Conjugacy type of an element of GL_2(Z/p^e), p odd, as far as the
/// non-split Cartan character sees it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OddClassType {
    Scalar,
    /// lambda + p^mu N with N non-scalar mod p and disc(N) a non-residue.
    NonSplitRegular { mu: u32 },
    Other,
}

fn valuation(x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    let mut y = x;
    while y % p == 0 && v < cap {
        y /= p;
        v += 1;
    }
    v
}

/// Classifies gamma mod p^e for odd p.
pub fn classify_odd(p: u64, e: u32, gamma: &Mat2) -> Result<OddClassType> {
    let q = p.pow(e);
    if p == 2 || gamma.n != q || !gamma.is_invertible() {
        return Err(Error::invalid("classify_odd needs an invertible matrix mod an odd prime power"));
    }
    let diff = (gamma.d + q - gamma.a) % q;
    let mu = valuation(gamma.b, p, e).min(valuation(gamma.c, p, e)).min(valuation(diff, p, e));
    if mu >= e {
        return Ok(OddClassType::Scalar);
    }
    // disc(gamma) = (a - d)^2 + 4bc, divisible by p^(2 mu); work mod p^(2mu+1)
    let big = p.pow(2 * mu + 1) as u128;
    let disc = ((diff as u128 * diff as u128) + 4 * gamma.b as u128 * gamma.c as u128) % big;
    let reduced = (disc / p.pow(2 * mu) as u128) as i64;
    Ok(if legendre(reduced, p) == -1 {
        OddClassType::NonSplitRegular { mu }
    } else {
        OddClassType::Other
    })
}

/// Closed form of chi_{C_ns(p^e)} for odd p.
pub fn chi_cns_closed_form(p: u64, e: u32, gamma: &Mat2) -> Result<u64> {
    Ok(match classify_odd(p, e, gamma)? {
        OddClassType::Scalar => (p - 1) * p.pow(2 * e - 1),
        OddClassType::NonSplitRegular { mu } => 2 * p.pow(2 * mu),
        OddClassType::Other => 0,
    })
}

/// Outcome of checking a character identity class by class.
#[derive(Clone, Debug, Serialize)]
pub struct ChenReport {
    pub label: String,
    pub holds: bool,
    pub classes: usize,
    /// (class representative, left side minus right side) for every class.
    pub residuals: Vec<(Mat2, i64)>,
}

impl ChenReport {
    fn from_sides(label: String, part: &ClassPartition, lhs: &[i64], rhs: &[i64]) -> ChenReport {
        let residuals: Vec<(Mat2, i64)> =
            part.reps().iter().zip(lhs.iter().zip(rhs)).map(|(r, (a, b))| (*r, a - b)).collect();
        ChenReport {
            label,
            holds: residuals.iter().all(|&(_, r)| r == 0),
            classes: part.len(),
            residuals,
        }
    }
}

fn add_scaled(acc: &mut [i64], chi: &PermCharacter, k: i64) {
    for (a, v) in acc.iter_mut().zip(&chi.values) {
        *a += k * *v as i64;
    }
}

/// chi_Cns + 2 sum_r chi_{B_r} = chi_Cs + 2 sum_r chi_{T_r}, r = 0..e-1.
pub fn verify_chen_prime_power(p: u64, e: u32) -> Result<ChenReport> {
    let q = Modulus::prime_power(p, e)?.n();
    let part = ClassPartition::new(q)?;
    let mut lhs = vec![0i64; part.len()];
    let mut rhs = vec![0i64; part.len()];
    add_scaled(&mut lhs, &perm_character(&SubgroupSpec::totally(q, CartanType::NonSplit, false)?, &part)?, 1);
    add_scaled(&mut rhs, &perm_character(&SubgroupSpec::totally(q, CartanType::Split, false)?, &part)?, 1);
    for r in 0..e {
        add_scaled(&mut lhs, &perm_character(&SubgroupSpec::borel(p, e, r)?, &part)?, 2);
        add_scaled(&mut rhs, &perm_character(&SubgroupSpec::torus(p, e, r)?, &part)?, 2);
    }
    Ok(ChenReport::from_sides(format!("chen {q}"), &part, &lhs, &rhs))
}

/// Q[G/H] = sum over d | b^2 of eps(d) m(d) Q[G/K(d)] for a Cartan H split
/// exactly at the primes of a, where n = ab.
pub fn verify_chen_composite(spec: &SubgroupSpec) -> Result<ChenReport> {
    if spec.family() != crate::groups::Family::Cartan {
        return Err(Error::invalid("the representation ring identity is for Cartan subgroups"));
    }
    let n = spec.level();
    let part = ClassPartition::new(n)?;
    let mut lhs = vec![0i64; part.len()];
    add_scaled(&mut lhs, &perm_character(spec, &part)?, 1);
    let split: Vec<(u64, LocalKind)> = spec
        .locals()
        .iter()
        .filter(|l| l.kind == LocalKind::Split)
        .map(|l| (l.p, LocalKind::Split))
        .collect();
    let nonsplit: Vec<(u64, u32)> = spec
        .locals()
        .iter()
        .filter(|l| l.kind == LocalKind::NonSplit)
        .map(|l| (l.p, l.e))
        .collect();
    let mut rhs = vec![0i64; part.len()];
    // f_j ranges over 0..=2 e_j for each non-split prime
    let mut f = vec![0u32; nonsplit.len()];
    loop {
        let mut kinds = split.clone();
        let mut sign = 1i64;
        let mut mult = 1i64;
        for (&(p, e), &fj) in nonsplit.iter().zip(&f) {
            let kind = if fj % 2 == 0 { LocalKind::Torus(fj / 2) } else { LocalKind::Borel(fj / 2) };
            kinds.push((p, kind));
            if fj % 2 == 1 {
                sign = -sign;
            }
            if fj != 2 * e {
                mult *= 2;
            }
        }
        let k_spec = SubgroupSpec::product(n, &kinds)?;
        add_scaled(&mut rhs, &perm_character(&k_spec, &part)?, sign * mult);
        let mut pos = 0;
        loop {
            if pos == f.len() {
                return Ok(ChenReport::from_sides(format!("chen {spec}"), &part, &lhs, &rhs));
            }
            f[pos] += 1;
            if f[pos] <= 2 * nonsplit[pos].1 {
                break;
            }
            f[pos] = 0;
            pos += 1;
        }
    }
}

/// Column subgroups of the 2-power character table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TableColumn {
    Borel(u32),
    Torus(u32),
    Split,
    SplitPlus,
    NonSplit,
    NonSplitPlus,
}

impl TableColumn {
    pub fn spec(&self, p: u64, e: u32) -> Result<SubgroupSpec> {
        let q = p.pow(e);
        match *self {
            TableColumn::Borel(r) => SubgroupSpec::borel(p, e, r),
            TableColumn::Torus(r) => SubgroupSpec::torus(p, e, r),
            TableColumn::Split => SubgroupSpec::totally(q, CartanType::Split, false),
            TableColumn::SplitPlus => SubgroupSpec::totally(q, CartanType::Split, true),
            TableColumn::NonSplit => SubgroupSpec::totally(q, CartanType::NonSplit, false),
            TableColumn::NonSplitPlus => SubgroupSpec::totally(q, CartanType::NonSplit, true),
        }
    }

    /// B_0..B_{e-1}, T_0..T_{e-1}, C_s, C_s+, C_ns, C_ns+.
    pub fn all(e: u32) -> Vec<TableColumn> {
        let mut v: Vec<TableColumn> = (0..e).map(TableColumn::Borel).collect();
        v.extend((0..e).map(TableColumn::Torus));
        v.extend([TableColumn::Split, TableColumn::SplitPlus, TableColumn::NonSplit, TableColumn::NonSplitPlus]);
        v
    }
}

impl fmt::Display for TableColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableColumn::Borel(r) => write!(f, "B_{r}"),
            TableColumn::Torus(r) => write!(f, "T_{r}"),
            TableColumn::Split => write!(f, "C_s"),
            TableColumn::SplitPlus => write!(f, "C_s+"),
            TableColumn::NonSplit => write!(f, "C_ns"),
            TableColumn::NonSplitPlus => write!(f, "C_ns+"),
        }
    }
}

/// Character table of GL_2(Z/2^e) on the shape representatives.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    pub e: u32,
    pub columns: Vec<TableColumn>,
    pub rows: Vec<(ClassRep, Vec<u64>)>,
}

pub fn character_table_2power(e: u32) -> Result<CharacterTable> {
    let part = ClassPartition::new(1 << e)?;
    let reps = class_reps_with(&part, e)?;
    let columns = TableColumn::all(e);
    let chars: Vec<PermCharacter> = columns
        .iter()
        .map(|c| perm_character(&c.spec(2, e)?, &part))
        .collect::<Result<_>>()?;
    let rows = reps
        .into_iter()
        .map(|r| {
            let vals = chars.iter().map(|chi| chi.at(&part, &r.rep)).collect();
            (r, vals)
        })
        .collect();
    Ok(CharacterTable { e, columns, rows })
}
