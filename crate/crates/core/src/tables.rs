//! Row data for the standard tables: local invariants, N'/H' groups, the
//! 2-adic character table and the low level survey.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::factorize;
use crate::characters::{character_table_2power, CharacterTable};
use crate::classify::{assess, automorphism_group, Status, TildeCm};
use crate::error::Result;
use crate::groups::{CartanType, GroupFingerprint, SubgroupSpec};
use crate::invariants::{table1_closed_form, BoundMode};
use crate::newforms::NewformDB;

/// Local counts of one Cartan family at a prime power.
#[derive(Clone, Debug, Serialize)]
pub struct Table1Row {
    pub q: u64,
    pub family: String,
    pub d: u64,
    pub eps2: u64,
    pub eps3: u64,
    pub eps_inf: u64,
    /// Whether the coset engine agrees with the closed form.
    pub engine_agrees: bool,
}

pub const FAMILIES: [(CartanType, bool); 4] = [
    (CartanType::NonSplit, true),
    (CartanType::NonSplit, false),
    (CartanType::Split, true),
    (CartanType::Split, false),
];

fn family_name(t: CartanType, plus: bool) -> String {
    format!("{}{}", t.short(), if plus { "+" } else { "" })
}

pub fn prime_powers_up_to(max: u64) -> Vec<u64> {
    (2..=max).filter(|&q| factorize(q).is_ok_and(|m| m.is_prime_power())).collect()
}

pub fn table1(max: u64) -> Result<Vec<Table1Row>> {
    let mut jobs = Vec::new();
    for q in prime_powers_up_to(max) {
        for (t, plus) in FAMILIES {
            jobs.push(SubgroupSpec::totally(q, t, plus)?);
        }
    }
    jobs.par_iter()
        .map(|spec| {
            let closed = table1_closed_form(spec)?;
            let engine = crate::cosets::coset_table(spec)?.counts();
            let (t, plus) = (spec.uniform_type().expect("uniform"), spec.is_plus());
            Ok(Table1Row {
                q: spec.level(),
                family: family_name(t, plus),
                d: closed.0,
                eps2: closed.1,
                eps3: closed.2,
                eps_inf: closed.3,
                engine_agrees: closed == engine,
            })
        })
        .collect()
}

/// A row of the N'/H' table: a named subgroup family and a level instance.
#[derive(Clone, Debug, Serialize)]
pub struct Table2Row {
    pub subgroup: String,
    pub spec: String,
    pub group: GroupFingerprint,
}

/// The prime power subgroups whose N'/H' is not Z/2 (Cartan) or trivial (plus).
pub fn table2_specs(max_e2: u32, max_e3: u32) -> Result<Vec<(String, SubgroupSpec)>> {
    let ns = CartanType::NonSplit;
    let s = CartanType::Split;
    let mut out = vec![("C_ns+(3)".to_string(), SubgroupSpec::totally(3, ns, true)?)];
    for e in 1..=max_e2 {
        out.push((format!("C_s(2^{e})"), SubgroupSpec::totally(1 << e, s, false)?));
    }
    out.push(("C_s(3)".into(), SubgroupSpec::totally(3, s, false)?));
    for e in 2..=max_e3 {
        out.push((format!("C_s(3^{e})"), SubgroupSpec::totally(3u64.pow(e), s, false)?));
    }
    for e in 1..=max_e2 {
        out.push((format!("C_s+(2^{e})"), SubgroupSpec::totally(1 << e, s, true)?));
    }
    out.push(("C_s+(3)".into(), SubgroupSpec::totally(3, s, true)?));
    for e in 2..=max_e3 {
        out.push((format!("C_s+(3^{e})"), SubgroupSpec::totally(3u64.pow(e), s, true)?));
    }
    out.push(("C_s+(5)".into(), SubgroupSpec::totally(5, s, true)?));
    Ok(out)
}

pub fn table2(max_e2: u32, max_e3: u32) -> Result<Vec<Table2Row>> {
    table2_specs(max_e2, max_e3)?
        .into_iter()
        .map(|(name, spec)| {
            Ok(Table2Row {
                subgroup: name,
                spec: spec.to_string(),
                group: automorphism_group(&spec)?.quotient,
            })
        })
        .collect()
}

pub fn chartable(e: u32) -> Result<CharacterTable> {
    character_table_2power(e)
}

/// Markup of a low level cell: italic (genus at most 1), bold (all
/// automorphisms proved modular) or plain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellClass {
    Italic,
    Bold,
    Plain,
}

impl CellClass {
    pub fn from_status(s: Status) -> Self {
        match s {
            Status::InfiniteAut => CellClass::Italic,
            Status::AllModularProved => CellClass::Bold,
            Status::Undetermined => CellClass::Plain,
        }
    }

    pub fn letter(self) -> char {
        match self {
            CellClass::Italic => 'I',
            CellClass::Bold => 'B',
            CellClass::Plain => 'P',
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LowLevelCell {
    pub family: String,
    pub genus: u64,
    /// Exact tilde_cm when newform data determines it.
    pub tilde_cm: Option<u64>,
    pub tilde_cm_estimate: Option<TildeCm>,
    pub gonality_lb: u64,
    pub class: CellClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct LowLevelRow {
    pub n: u64,
    /// Columns ns+, ns, s+, s.
    pub cells: Vec<LowLevelCell>,
}

pub fn low_level_row(n: u64, db: Option<&NewformDB>, mode: BoundMode) -> Result<LowLevelRow> {
    let cells = FAMILIES
        .iter()
        .map(|&(t, plus)| {
            let spec = SubgroupSpec::totally(n, t, plus)?;
            let a = assess(&spec, db, mode)?;
            let tilde_cm = if a.genus <= 1 {
                Some(0)
            } else {
                a.tilde_cm.as_ref().and_then(TildeCm::exact)
            };
            Ok(LowLevelCell {
                family: family_name(t, plus),
                genus: a.genus,
                tilde_cm,
                tilde_cm_estimate: a.tilde_cm,
                gonality_lb: a.gonality_lb,
                class: CellClass::from_status(a.status),
            })
        })
        .collect::<Result<_>>()?;
    Ok(LowLevelRow { n, cells })
}

pub fn low_levels(max: u64, db: Option<&NewformDB>, mode: BoundMode) -> Result<Vec<LowLevelRow>> {
    (1..=max).into_par_iter().map(|n| low_level_row(n, db, mode)).collect()
}

/// Every Cartan (or Cartan-plus) spec of level n, one per split/non-split assignment.
pub fn cartan_specs(n: u64, plus: bool) -> Result<Vec<SubgroupSpec>> {
    let primes: Vec<u64> = factorize(n)?.primes().collect();
    (0..1u32 << primes.len())
        .map(|mask| {
            let a: Vec<(u64, CartanType)> = primes
                .iter()
                .enumerate()
                .map(|(i, &p)| (p, if mask >> i & 1 == 1 { CartanType::NonSplit } else { CartanType::Split }))
                .collect();
            SubgroupSpec::cartan(n, &a, plus)
        })
        .collect()
}

/// Result of the dimension check for one plain Cartan spec.
#[derive(Clone, Debug, Serialize)]
pub struct DimensionRow {
    pub spec: String,
    pub genus: u64,
    pub total: u64,
}

impl DimensionRow {
    pub fn holds(&self) -> bool {
        self.genus == self.total
    }
}

pub fn dimension_rows(max: u64) -> Result<Vec<DimensionRow>> {
    let mut specs = Vec::new();
    for n in 2..=max {
        specs.extend(cartan_specs(n, false)?);
    }
    specs
        .iter()
        .map(|spec| {
            let dec = crate::decomposition::isogeny_factors(spec)?;
            Ok(DimensionRow {
                spec: spec.to_string(),
                genus: crate::invariants::curve_invariants(spec, BoundMode::Table)?.genus,
                total: dec.total_dimension.expect("unfiltered factors"),
            })
        })
        .collect()
}
