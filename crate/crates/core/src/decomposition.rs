//! Isogeny decompositions of Cartan jacobians into new parts of J_0, and CM dimensions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::{divisors, factorize, sigma0};
use crate::error::{Error, Result};
use crate::groups::{CartanType, Family, SubgroupSpec};
use crate::invariants::{curve_invariants, genus_x0_new, BoundMode};
use crate::newforms::{NewformDB, NewformOrbit};

/// J_0^new(level)^multiplicity, restricted to the orbits whose Atkin-Lehner
/// signs match the filter when one is given.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsogenyFactor {
    pub level: u64,
    pub multiplicity: u64,
    pub al_filter: BTreeMap<u64, i8>,
}

impl IsogenyFactor {
    fn plain(level: u64, multiplicity: u64) -> Self {
        IsogenyFactor {
            level,
            multiplicity,
            al_filter: BTreeMap::new(),
        }
    }

    pub fn is_filtered(&self) -> bool {
        !self.al_filter.is_empty()
    }

    pub fn admits(&self, f: &NewformOrbit) -> bool {
        self.al_filter.iter().all(|(&q, &s)| f.al_sign(q) == Some(s))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Proved,
    BestEffort,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub spec: String,
    pub factors: Vec<IsogenyFactor>,
    /// Sum of multiplicity times dimension, when it can be computed.
    pub total_dimension: Option<u64>,
    pub exactness: Exactness,
}

impl Decomposition {
    fn new(spec: String, factors: Vec<IsogenyFactor>, exactness: Exactness) -> Result<Self> {
        let total_dimension = if factors.iter().any(IsogenyFactor::is_filtered) {
            None
        } else {
            Some(genus_formula_total(&factors)?)
        };
        Ok(Decomposition {
            spec,
            factors,
            total_dimension,
            exactness,
        })
    }

    /// Levels that need newform data (those with a nonzero new part).
    pub fn levels(&self) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        for f in &self.factors {
            if genus_x0_new(f.level)? > 0 && !out.contains(&f.level) {
                out.push(f.level);
            }
        }
        Ok(out)
    }

    /// Total dimension computed from newform data, honoring the filters.
    pub fn dimension_from_db(&self, db: &NewformDB) -> Result<u64> {
        self.sum_over_db(db, |_| true)
    }

    fn missing_levels(&self, db: &NewformDB) -> Result<Vec<u64>> {
        Ok(self.levels()?.into_iter().filter(|&l| !db.is_complete(l)).collect())
    }

    fn sum_over_db(&self, db: &NewformDB, keep: impl Fn(&NewformOrbit) -> bool) -> Result<u64> {
        let missing = self.missing_levels(db)?;
        if !missing.is_empty() {
            return Err(Error::InsufficientData(missing));
        }
        Ok(self
            .factors
            .iter()
            .map(|f| {
                let (orbits, _) = db.query(f.level);
                f.multiplicity * orbits.iter().filter(|o| f.admits(o) && keep(o)).map(|o| o.dim).sum::<u64>()
            })
            .sum())
    }
}

fn genus_formula_total(factors: &[IsogenyFactor]) -> Result<u64> {
    let mut total = 0;
    for f in factors {
        total += f.multiplicity * genus_x0_new(f.level)?;
    }
    Ok(total)
}

/// Jac(X_H) ~ prod over c | a^2, d | b of J_0^new(c d^2)^sigma0(a^2/c), where a is
/// the split part of n and b the non-split part.
pub fn isogeny_factors(spec: &SubgroupSpec) -> Result<Decomposition> {
    if spec.family() != Family::Cartan || spec.is_plus() {
        return Err(Error::Unsupported(format!("{spec}: isogeny factors need a plain Cartan spec")));
    }
    let (mut a, mut b) = (1u64, 1u64);
    for l in spec.locals() {
        match spec.cartan_type_at(l.p) {
            Some(CartanType::Split) => a *= l.q,
            _ => b *= l.q,
        }
    }
    let mut factors = Vec::new();
    for c in divisors(a * a) {
        for d in divisors(b) {
            factors.push(IsogenyFactor::plain(c * d * d, sigma0(a * a / c)));
        }
    }
    factors.sort_by_key(|f| f.level);
    Decomposition::new(spec.to_string(), factors, Exactness::Proved)
}

/// J_ns(p^e) ~ prod_{r=1}^e J_0^new(p^{2r}). For the plus curve the same levels
/// are kept with sign +1 at w_{p^{2r}}; that variant is not proved.
pub fn nonsplit_prime_power_factors(p: u64, e: u32, plus: bool) -> Result<Decomposition> {
    let spec = SubgroupSpec::totally(p.pow(e), CartanType::NonSplit, plus)?;
    let factors = (1..=e)
        .map(|r| {
            let q = p.pow(2 * r);
            let mut f = IsogenyFactor::plain(q, 1);
            if plus {
                f.al_filter.insert(q, 1);
            }
            f
        })
        .collect();
    let exactness = if plus { Exactness::BestEffort } else { Exactness::Proved };
    Decomposition::new(spec.to_string(), factors, exactness)
}

/// X_s^+(p^e) is X_0^+(p^{2e}). A newform of level p^k contributes its
/// 2e-k+1 old copies, on which w_{p^{2e}} acts by reversal times its own sign.
pub fn split_plus_prime_power_factors(p: u64, e: u32) -> Result<Decomposition> {
    let spec = SubgroupSpec::totally(p.pow(e), CartanType::Split, true)?;
    let mut factors = Vec::new();
    for k in 1..=2 * e {
        let q = p.pow(k);
        let copies = (2 * e - k + 1) as u64;
        for (sign, mult) in [(1i8, copies.div_ceil(2)), (-1, copies / 2)] {
            if mult > 0 {
                factors.push(IsogenyFactor {
                    level: q,
                    multiplicity: mult,
                    al_filter: BTreeMap::from([(q, sign)]),
                });
            }
        }
    }
    Decomposition::new(spec.to_string(), factors, Exactness::BestEffort)
}

/// The decomposition used for a spec: exact for plain Cartan specs, best effort
/// for prime power plus curves, unsupported otherwise.
pub fn decomposition(spec: &SubgroupSpec) -> Result<Decomposition> {
    if !spec.is_cartan_family() {
        return Err(Error::Unsupported(format!("{spec}: not a Cartan spec")));
    }
    if !spec.is_plus() {
        return isogeny_factors(spec);
    }
    let m = spec.modulus();
    if !m.is_prime_power() {
        return Err(Error::Unsupported(format!("{spec}: no decomposition for composite plus curves")));
    }
    let (p, e) = m.factors()[0];
    match spec.uniform_type() {
        Some(CartanType::NonSplit) => nonsplit_prime_power_factors(p, e, true),
        _ => split_plus_prime_power_factors(p, e),
    }
}

fn genus(spec: &SubgroupSpec) -> Result<u64> {
    Ok(curve_invariants(spec, BoundMode::Table)?.genus)
}

/// Whether the multiplicity-weighted dimension of the decomposition equals the
/// genus. Filtered factors need newform data.
pub fn dimension_check(spec: &SubgroupSpec, db: Option<&NewformDB>) -> Result<bool> {
    let dec = decomposition(spec)?;
    let total = match (dec.total_dimension, db) {
        (Some(t), _) => t,
        (None, Some(db)) => dec.dimension_from_db(db)?,
        (None, None) => return Err(Error::InsufficientData(dec.levels()?)),
    };
    Ok(total == genus(spec)?)
}

/// 9 log(n)^2 n^(1/2 + 2.816/loglog n), an upper bound for the CM part of J_0(n).
///
/// For n <= 2 the jacobian is zero and 0 is returned.
pub fn cm_bound_general(n: u64) -> f64 {
    if n <= 2 {
        return 0.0;
    }
    let x = n as f64;
    let l = x.ln();
    9.0 * l * l * x.powf(0.5 + 2.816 / l.ln())
}

/// Upper bound for the CM part of J_0(p^e).
pub fn cm_bound_prime_power(p: u64, e: u32) -> f64 {
    let q = (p as f64).powi(e as i32);
    if p == 2 {
        13.0 * q.sqrt()
    } else if p % 4 == 1 {
        0.0
    } else {
        5.5 * q.sqrt() * (p as f64).ln()
    }
}

/// Upper bound for the CM part of Jac(X_H), which is a quotient of J_0(n^2).
pub fn cm_bound_for_spec(spec: &SubgroupSpec) -> f64 {
    let m = spec.modulus();
    if m.is_prime_power() {
        let (p, e) = m.factors()[0];
        cm_bound_prime_power(p, 2 * e)
    } else {
        let n = spec.level();
        cm_bound_general(n.saturating_mul(n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CmDimensions {
    pub cm: u64,
    /// CM dimension after dropping the one-dimensional orbits.
    pub tilde_cm: u64,
    pub exactness: Exactness,
}

/// CM dimensions of Jac(X_H) from newform data.
pub fn cm_dimensions(spec: &SubgroupSpec, db: &NewformDB) -> Result<CmDimensions> {
    let dec = decomposition(spec)?;
    if dec.exactness == Exactness::BestEffort {
        let total = dec.dimension_from_db(db)?;
        let g = genus(spec)?;
        if total != g {
            return Err(Error::Unsupported(format!(
                "{spec}: filtered decomposition has dimension {total}, genus is {g}"
            )));
        }
    }
    Ok(CmDimensions {
        cm: dec.sum_over_db(db, |o| o.is_cm)?,
        tilde_cm: dec.sum_over_db(db, |o| o.is_cm && o.dim >= 2)?,
        exactness: dec.exactness,
    })
}

/// Exact CM dimension of J_0(n) from newform data: sum over M | n of
/// sigma0(n/M) times the CM dimension of the new part at M.
pub fn cm_dimension_x0(n: u64, db: &NewformDB) -> Result<u64> {
    let mut missing = Vec::new();
    let mut total = 0;
    for m in divisors(n) {
        match db.cm_new_dimension(m) {
            Some(c) => total += sigma0(n / m) * c,
            None => missing.push(m),
        }
    }
    if missing.is_empty() {
        Ok(total)
    } else {
        Err(Error::InsufficientData(missing))
    }
}

/// Every level at which newform data is needed for the cm columns of the
/// plain and prime power plus Cartan curves of level at most `max`.
pub fn required_levels(max: u64) -> Result<Vec<u64>> {
    let mut levels = std::collections::BTreeSet::new();
    for n in 2..=max {
        let m = factorize(n)?;
        for t in [CartanType::Split, CartanType::NonSplit] {
            for plus in [false, true] {
                if plus && !m.is_prime_power() {
                    continue;
                }
                let spec = SubgroupSpec::totally(n, t, plus)?;
                levels.extend(decomposition(&spec)?.levels()?);
            }
        }
    }
    Ok(levels.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> SubgroupSpec {
        s.parse().unwrap()
    }

    fn levels(d: &Decomposition) -> Vec<(u64, u64)> {
        d.factors.iter().map(|f| (f.level, f.multiplicity)).collect()
    }

    #[test]
    fn factor_lists() {
        assert_eq!(levels(&isogeny_factors(&spec("13:ns")).unwrap()), vec![(1, 1), (169, 1)]);
        assert_eq!(
            levels(&isogeny_factors(&spec("6:2=s,3=ns")).unwrap()),
            vec![(1, 3), (2, 2), (4, 1), (9, 3), (18, 2), (36, 1)]
        );
        assert_eq!(
            levels(&isogeny_factors(&spec("15:ns")).unwrap()),
            vec![(1, 1), (9, 1), (25, 1), (225, 1)]
        );
        assert!(isogeny_factors(&spec("15:ns:plus")).is_err());
    }

    #[test]
    fn prime_power_examples() {
        let d = nonsplit_prime_power_factors(13, 1, false).unwrap();
        assert_eq!(levels(&d), vec![(169, 1)]);
        assert_eq!(d.total_dimension, Some(8));
        let d = nonsplit_prime_power_factors(3, 2, false).unwrap();
        assert_eq!(levels(&d), vec![(9, 1), (81, 1)]);
        assert_eq!(d.total_dimension, Some(2));
        let d = nonsplit_prime_power_factors(11, 1, true).unwrap();
        assert_eq!(d.exactness, Exactness::BestEffort);
        assert_eq!(d.total_dimension, None);
        assert_eq!(d.factors[0].al_filter, BTreeMap::from([(121, 1)]));
    }

    #[test]
    fn mixed_level_six_has_dimension_one() {
        let d = isogeny_factors(&spec("6:2=s,3=ns")).unwrap();
        assert_eq!(d.total_dimension, Some(1));
        assert!(dimension_check(&spec("6:2=s,3=ns"), None).unwrap());
    }

    #[test]
    fn ns49_total() {
        let d = isogeny_factors(&spec("49:ns")).unwrap();
        assert_eq!(d.total_dimension, Some(151));
    }

    #[test]
    fn dimension_check_prime_powers() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32] {
            for t in [CartanType::Split, CartanType::NonSplit] {
                let s = SubgroupSpec::totally(q, t, false).unwrap();
                assert!(dimension_check(&s, None).unwrap(), "{s}");
            }
        }
    }

    #[test]
    fn split_plus_copies() {
        // level p appears twice (both signs), level p^2 once with sign +
        let d = split_plus_prime_power_factors(7, 1).unwrap();
        let got: Vec<(u64, u64, i8)> = d.factors.iter().map(|f| (f.level, f.multiplicity, f.al_filter[&f.level])).collect();
        assert_eq!(got, vec![(7, 1, 1), (7, 1, -1), (49, 1, 1)]);
    }

    #[test]
    fn bounds() {
        assert_eq!(cm_bound_prime_power(5, 3), 0.0);
        assert_eq!(cm_bound_prime_power(2, 6), 104.0);
        assert!((cm_bound_prime_power(7, 2) - 5.5 * 7.0 * 7f64.ln()).abs() < 1e-9);
        let l = 169f64.ln();
        assert!((cm_bound_general(169) - 9.0 * l * l * 169f64.powf(0.5 + 2.816 / l.ln())).abs() < 1e-6);
        assert!(cm_bound_general(1_000_000) < cm_bound_general(100_000_000));
        assert!(cm_bound_general(16).is_finite() && cm_bound_general(16) > 0.0);
        assert_eq!(cm_bound_general(2), 0.0);
    }

    #[test]
    fn missing_data_is_reported() {
        let db = NewformDB::empty();
        match cm_dimensions(&spec("13:ns"), &db) {
            Err(Error::InsufficientData(l)) => assert_eq!(l, vec![169]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(cm_dimensions(&spec("15:ns:plus"), &db), Err(Error::Unsupported(_))));
    }
}
