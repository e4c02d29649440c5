//! Deciding whether every automorphism of a Cartan modular curve is modular,
//! and naming the automorphism group and its field of definition.

use std::fmt;

use serde::Serialize;

use crate::arith::{gcd, is_prime};
use crate::decomposition::{cm_bound_for_spec, cm_dimensions, CmDimensions, Exactness};
use crate::error::{Error, Result};
use crate::groups::{
    build_subgroup, extra_involution, intersect_sl2, normalizer_in_sl2, quotient_group, CartanType, ExtraInvolution,
    FiniteGroup, GroupFingerprint, GroupLabel, SubgroupSpec,
};
use crate::invariants::{curve_invariants, BoundMode};
use crate::newforms::NewformDB;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Genus 0 or 1.
    InfiniteAut,
    AllModularProved,
    Undetermined,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::InfiniteAut => "infinite_aut",
            Status::AllModularProved => "all_modular_proved",
            Status::Undetermined => "undetermined",
        })
    }
}

/// How a conclusion was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ProvedByCriterion,
    Literature,
    None,
}

/// The CM dimension after removing elliptic factors, or an upper bound for it.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TildeCm {
    Exact { value: u64, exactness: Exactness },
    Bound { value: f64, source: String },
}

impl TildeCm {
    /// An upper bound for the true value.
    pub fn upper(&self) -> f64 {
        match self {
            TildeCm::Exact { value, .. } => *value as f64,
            TildeCm::Bound { value, .. } => *value,
        }
    }

    pub fn exact(&self) -> Option<u64> {
        match self {
            TildeCm::Exact { value, .. } => Some(*value),
            TildeCm::Bound { .. } => None,
        }
    }

    /// Whether tilde_cm < (g - 1)/2 is established.
    pub fn small_for(&self, genus: u64) -> bool {
        2.0 * self.upper() < genus as f64 - 1.0
    }
}

impl fmt::Display for TildeCm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TildeCm::Exact { value, .. } => write!(f, "{value}"),
            TildeCm::Bound { value, source } => write!(f, "<= {value:.1} ({source})"),
        }
    }
}

/// The group of modular automorphisms.
#[derive(Clone, Debug, Serialize)]
pub struct AutGroup {
    /// N'/H'.
    pub quotient: GroupFingerprint,
    /// Local factors of N'/H', one per prime power.
    pub local_factors: Vec<(u64, GroupLabel)>,
    /// Present exactly when the extra Z/2 factor occurs.
    pub extra_involution: Option<ExtraInvolution>,
    pub order: u64,
}

impl fmt::Display for AutGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = match &self.quotient.label {
            GroupLabel::Unmatched => {
                let parts: Vec<String> = self
                    .local_factors
                    .iter()
                    .filter(|(_, l)| *l != GroupLabel::Trivial)
                    .map(|(_, l)| l.to_string())
                    .collect();
                if parts.len() > 1 && !parts.iter().any(|p| p == "unmatched") {
                    parts.join(" x ")
                } else {
                    format!("group of order {}", self.quotient.order)
                }
            }
            l => l.to_string(),
        };
        match (&self.extra_involution, &self.quotient.label) {
            (None, _) => f.write_str(&q),
            (Some(_), GroupLabel::Trivial) => f.write_str("Z/2"),
            (Some(_), _) => write!(f, "({q}) x Z/2"),
        }
    }
}

/// Local N'/H' at one prime power.
fn local_quotient(spec: &SubgroupSpec) -> Result<FiniteGroup> {
    let h_prime = intersect_sl2(&build_subgroup(spec)?)?;
    let n_prime = normalizer_in_sl2(&h_prime)?;
    quotient_group(&n_prime, &h_prime)
}

/// N'/H' computed prime by prime, times Z/2 for the extra involution.
pub fn automorphism_group(spec: &SubgroupSpec) -> Result<AutGroup> {
    let mut q = FiniteGroup::cyclic(1);
    let mut local_factors = Vec::new();
    for p in spec.modulus().primes() {
        let local = spec.local_spec(p).expect("prime divides the level");
        let g = local_quotient(&local)?;
        local_factors.push((local.level(), GroupFingerprint::of(&g).label));
        q = q.direct_product(&g);
    }
    let extra = match extra_involution(spec) {
        Ok(inv) => Some(inv),
        Err(Error::NoInvolution(_)) => None,
        Err(e) => return Err(e),
    };
    let quotient = GroupFingerprint::of(&q);
    let order = quotient.order * if extra.is_some() { 2 } else { 1 };
    Ok(AutGroup {
        quotient,
        local_factors,
        extra_involution: extra,
        order,
    })
}

/// A group named by the prime power classification, with where it comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedAut {
    pub label: GroupLabel,
    pub provenance: Provenance,
}

/// Aut X_H for H a Cartan or Cartan-plus subgroup of level p^e, for p^e > 11
/// outside {16, 27, 32, 64}; a few excluded levels are answered from the literature.
pub fn aut_prime_power(p: u64, e: u32, t: CartanType, plus: bool) -> Result<NamedAut> {
    if !is_prime(p) || e == 0 {
        return Err(Error::invalid(format!("{p}^{e} is not a prime power")));
    }
    let q = p.pow(e);
    if q == 16 && t == CartanType::NonSplit && plus {
        return Ok(NamedAut {
            label: GroupLabel::KleinFour,
            provenance: Provenance::Literature,
        });
    }
    if q <= 11 || matches!(q, 16 | 27 | 32 | 64) {
        return Err(Error::Unsupported(format!(
            "level {q} is outside the prime power classification (p^e > 11, not 16, 27, 32, 64)"
        )));
    }
    let label = match (t, plus) {
        (CartanType::NonSplit, false) => GroupLabel::Cyclic(2),
        (CartanType::NonSplit, true) => GroupLabel::Trivial,
        (CartanType::Split, false) => match p {
            2 => GroupLabel::Z8SquaredSemiZ2,
            3 => GroupLabel::Z3xS3,
            _ => GroupLabel::Cyclic(2),
        },
        (CartanType::Split, true) => match p {
            2 => GroupLabel::Cyclic(8),
            3 => GroupLabel::Cyclic(3),
            _ => GroupLabel::Trivial,
        },
    };
    Ok(NamedAut {
        label,
        provenance: Provenance::ProvedByCriterion,
    })
}

/// Automorphism groups known from the literature for curves the numeric
/// criterion does not settle.
fn literature_aut(spec: &SubgroupSpec) -> Option<GroupLabel> {
    let uniform = spec.uniform_type()?;
    let m = spec.modulus();
    if m.is_prime_power() {
        let (p, e) = m.factors()[0];
        return aut_prime_power(p, e, uniform, spec.is_plus()).ok().map(|a| a.label);
    }
    (spec.level() == 20 && uniform == CartanType::NonSplit && spec.is_plus()).then_some(GroupLabel::Cyclic(2))
}

/// Field over which every automorphism is defined, as a display string.
pub fn field_of_definition(spec: &SubgroupSpec, genus: u64, tilde_cm: Option<&TildeCm>) -> String {
    if genus < 2 {
        return "unknown (genus < 2)".into();
    }
    let m = spec.modulus();
    if m.is_prime_power() {
        let p = m.factors()[0].0;
        return match p {
            2 => "ℚ(i, √2)".into(),
            _ if p % 4 == 1 => format!("ℚ(√{p})"),
            _ => format!("ℚ(√-{p})"),
        };
    }
    match tilde_cm {
        Some(t) if t.small_for(genus) => format!("compositum of quadratic fields of discriminant dividing {}", spec.level()),
        Some(t) => format!("unknown (tilde_cm {t} is not < (g-1)/2 = {:.1})", (genus as f64 - 1.0) / 2.0),
        None => "unknown (no CM estimate)".into(),
    }
}

/// Smallest prime l >= 5 not dividing n with A > 2(l + 1).
pub fn witness_prime(n: u64, gonality_lb: u64) -> Option<u64> {
    (5..)
        .filter(|&l| is_prime(l) && gcd(l, n) == 1)
        .take_while(|&l| 2 * (l + 1) < gonality_lb)
        .next()
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub spec: String,
    pub curve: String,
    pub genus: u64,
    pub tilde_cm: Option<TildeCm>,
    pub gonality_lb: u64,
    pub witness: Option<u64>,
    pub status: Status,
    pub provenance: Provenance,
    pub aut_group: Option<AutGroup>,
    pub field: String,
    pub notes: Vec<String>,
}

/// The numeric part of a verdict, without the group computation.
#[derive(Clone, Debug, Serialize)]
pub struct Assessment {
    pub genus: u64,
    pub gonality_lb: u64,
    pub tilde_cm: Option<TildeCm>,
    pub cm: Option<CmDimensions>,
    pub witness: Option<u64>,
    pub status: Status,
    pub notes: Vec<String>,
}

/// Best available estimate of tilde_cm: exact from newform data, then the
/// exact value of the plain Cartan curve (for plus curves), then the
/// analytic bound for J_0(n^2).
fn estimate_tilde_cm(spec: &SubgroupSpec, genus: u64, db: Option<&NewformDB>, notes: &mut Vec<String>) -> (Option<CmDimensions>, TildeCm) {
    if let Some(db) = db {
        match cm_dimensions(spec, db) {
            Ok(c) => {
                return (
                    Some(c),
                    TildeCm::Exact {
                        value: c.tilde_cm,
                        exactness: c.exactness,
                    },
                )
            }
            Err(e) => notes.push(format!("cm dimensions: {e}")),
        }
        if spec.is_plus() {
            match cm_dimensions(&spec.without_plus(), db) {
                Ok(c) => {
                    return (
                        None,
                        TildeCm::Bound {
                            value: c.tilde_cm as f64,
                            source: "plain Cartan curve".into(),
                        },
                    )
                }
                Err(e) => notes.push(format!("cm dimensions of the plain Cartan curve: {e}")),
            }
        }
    }
    let b = cm_bound_for_spec(spec).min(genus as f64);
    if b == 0.0 {
        // nothing to bound: the CM part vanishes
        let zero = CmDimensions {
            cm: 0,
            tilde_cm: 0,
            exactness: Exactness::Proved,
        };
        return (Some(zero), TildeCm::Exact { value: 0, exactness: Exactness::Proved });
    }
    (
        None,
        TildeCm::Bound {
            value: b,
            source: "analytic bound".into(),
        },
    )
}

pub fn assess(spec: &SubgroupSpec, db: Option<&NewformDB>, mode: BoundMode) -> Result<Assessment> {
    let inv = curve_invariants(spec, mode)?;
    let mut notes = Vec::new();
    let genus = inv.genus;
    if genus <= 1 {
        return Ok(Assessment {
            genus,
            gonality_lb: inv.gonality_lb,
            tilde_cm: None,
            cm: None,
            witness: None,
            status: Status::InfiniteAut,
            notes,
        });
    }
    let (cm, tilde) = if spec.is_cartan_family() {
        let (cm, t) = estimate_tilde_cm(spec, genus, db, &mut notes);
        (cm, Some(t))
    } else {
        notes.push("CM estimates are only available for Cartan specs".into());
        (None, None)
    };
    let witness = witness_prime(spec.level(), inv.gonality_lb);
    let small = tilde.as_ref().is_some_and(|t| t.small_for(genus));
    let status = if small && witness.is_some() {
        Status::AllModularProved
    } else {
        if !small {
            notes.push("tilde_cm < (g-1)/2 is not established".into());
        }
        if witness.is_none() {
            notes.push(format!("no prime l >= 5 coprime to n with A = {} > 2(l+1)", inv.gonality_lb));
        }
        Status::Undetermined
    };
    Ok(Assessment {
        genus,
        gonality_lb: inv.gonality_lb,
        tilde_cm: tilde,
        cm,
        witness,
        status,
        notes,
    })
}

/// Full decision pipeline for one spec.
pub fn modularity_verdict(spec: &SubgroupSpec, db: Option<&NewformDB>, mode: BoundMode) -> Result<Verdict> {
    let a = assess(spec, db, mode)?;
    let mut notes = a.notes;
    let mut provenance = match a.status {
        Status::AllModularProved => Provenance::ProvedByCriterion,
        _ => Provenance::None,
    };
    let aut_group = if a.status == Status::InfiniteAut {
        None
    } else {
        Some(automorphism_group(spec)?)
    };
    if a.status == Status::Undetermined {
        if let Some(label) = literature_aut(spec) {
            provenance = Provenance::Literature;
            notes.push(format!("settled in the literature: Aut = {label}"));
        }
    }
    Ok(Verdict {
        spec: spec.to_string(),
        curve: spec.curve_name(),
        genus: a.genus,
        field: field_of_definition(spec, a.genus, a.tilde_cm.as_ref()),
        tilde_cm: a.tilde_cm,
        gonality_lb: a.gonality_lb,
        witness: a.witness,
        status: a.status,
        provenance,
        aut_group,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> SubgroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn witnesses() {
        // X_s(30): A = 19, l = 7
        assert_eq!(witness_prime(30, 19), Some(7));
        assert_eq!(witness_prime(30, 16), None);
        assert_eq!(witness_prime(41, 15), Some(5));
        assert_eq!(witness_prime(13, 2), None);
    }

    #[test]
    fn prime_power_names() {
        let ns = CartanType::NonSplit;
        let s = CartanType::Split;
        assert_eq!(aut_prime_power(13, 1, ns, true).unwrap().label, GroupLabel::Trivial);
        assert_eq!(aut_prime_power(2, 7, s, false).unwrap().label, GroupLabel::Z8SquaredSemiZ2);
        let l16 = aut_prime_power(2, 4, ns, true).unwrap();
        assert_eq!(l16.label, GroupLabel::KleinFour);
        assert_eq!(l16.provenance, Provenance::Literature);
        assert!(aut_prime_power(3, 3, s, false).is_err());
        assert!(aut_prime_power(11, 1, s, false).is_err());
    }

    #[test]
    fn groups_of_small_curves() {
        let a = automorphism_group(&spec("13:ns")).unwrap();
        assert_eq!(a.order, 2);
        assert_eq!(automorphism_group(&spec("13:ns:plus")).unwrap().order, 1);
        let a = automorphism_group(&spec("9:s")).unwrap();
        assert_eq!(a.quotient.label, GroupLabel::Z3xS3);
        let a = automorphism_group(&spec("6:2=s,3=ns:plus")).unwrap();
        assert!(a.extra_involution.is_some());
        assert_eq!(a.order, 2 * a.quotient.order);
    }

    #[test]
    fn fields() {
        assert_eq!(field_of_definition(&spec("13:ns:plus"), 3, None), "ℚ(√13)");
        assert_eq!(field_of_definition(&spec("16:ns"), 5, None), "ℚ(i, √2)");
        assert_eq!(field_of_definition(&spec("11:ns"), 4, None), "ℚ(√-11)");
        let big = TildeCm::Bound { value: 8.0, source: "x".into() };
        assert!(field_of_definition(&spec("48:ns:plus"), 9, Some(&big)).starts_with("unknown"));
    }

    #[test]
    fn verdict_examples_without_data() {
        let v = modularity_verdict(&spec("13:ns"), None, BoundMode::Table).unwrap();
        assert_eq!(v.status, Status::Undetermined);
        assert_eq!(v.provenance, Provenance::Literature);
        let v = modularity_verdict(&spec("5:s:plus"), None, BoundMode::Table).unwrap();
        assert_eq!(v.status, Status::InfiniteAut);
        assert!(v.aut_group.is_none());
        // p = 1 mod 4: the CM part of J_0(p^2e) vanishes, so no data is needed
        let v = modularity_verdict(&spec("41:ns"), None, BoundMode::Table).unwrap();
        assert_eq!(v.status, Status::AllModularProved);
        assert_eq!(v.witness, Some(5));
    }
}
