//! Genus, elliptic points, cusps and gonality bounds of Cartan curves, and the
//! genera of X_0(n), its new part and X_0^+(n).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith::{class_number_or_zero, divisors, sigma0};
use crate::cosets::coset_table;
use crate::error::{Error, Result};
use crate::groups::{CartanType, LocalFactor, SubgroupSpec};

/// How the gonality bound of plus curves is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMode {
    /// ceil(7 d / 800) on the curve itself, except that plus curves use
    /// half the index of the underlying Cartan curve, as the low level table does.
    #[default]
    Table,
    /// ceil(7 d / 800) on the curve itself.
    Conservative,
}

impl fmt::Display for BoundMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMode::Table => "table",
            BoundMode::Conservative => "conservative",
        })
    }
}

impl FromStr for BoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(BoundMode::Table),
            "conservative" => Ok(BoundMode::Conservative),
            _ => Err(Error::invalid(format!("unknown bound mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveInvariants {
    pub d: u64,
    pub eps2: u64,
    pub eps3: u64,
    pub eps_inf: u64,
    pub genus: u64,
    pub gonality_lb: u64,
    pub bound_mode: BoundMode,
}

/// g = 1 + d/12 - eps2/4 - eps3/3 - eps_inf/2.
pub fn genus_from_counts(d: u64, eps2: u64, eps3: u64, eps_inf: u64) -> Result<u64> {
    let twelve_g = 12 + d as i128 - 3 * eps2 as i128 - 4 * eps3 as i128 - 6 * eps_inf as i128;
    if twelve_g < 0 || twelve_g % 12 != 0 {
        return Err(Error::Inconsistent(format!(
            "d={d}, eps2={eps2}, eps3={eps3}, eps_inf={eps_inf} give 12g = {twelve_g}"
        )));
    }
    Ok((twelve_g / 12) as u64)
}

/// Closed-form (d, eps2, eps3, eps_inf) of a Cartan or Cartan-plus subgroup mod p^e.
pub fn local_closed_form(p: u64, e: u32, t: CartanType, plus: bool) -> (u64, u64, u64, u64) {
    let pe1 = p.pow(e - 1);
    let q = pe1 * p;
    match (t, plus) {
        (CartanType::Split, false) => {
            let d = pe1 * q * (p + 1);
            let e2 = if p % 4 == 1 { 2 } else { 0 };
            let e3 = if p % 3 == 1 { 2 } else { 0 };
            (d, e2, e3, pe1 * (p + 1))
        }
        (CartanType::Split, true) => {
            let d = pe1 * q * (p + 1) / 2;
            let e2 = match p % 4 {
                _ if p == 2 => pe1,
                1 => 1 + pe1 * (p - 1) / 2,
                _ => pe1 * (p + 1) / 2,
            };
            let e3 = if p % 3 == 1 { 1 } else { 0 };
            let cusps = if q == 2 { 2 } else { pe1 * (p + 1) / 2 };
            (d, e2, e3, cusps)
        }
        (CartanType::NonSplit, false) => {
            let d = pe1 * q * (p - 1);
            let e2 = if p % 4 == 3 { 2 } else { 0 };
            let e3 = if p % 3 == 2 { 2 } else { 0 };
            (d, e2, e3, pe1 * (p - 1))
        }
        (CartanType::NonSplit, true) => {
            let d = pe1 * q * (p - 1) / 2;
            let e2 = match p % 4 {
                _ if p == 2 => pe1,
                1 => pe1 * (p - 1) / 2,
                _ => 1 + pe1 * (p + 1) / 2,
            };
            let e3 = if p % 3 == 2 { 1 } else { 0 };
            let cusps = if q == 2 { 1 } else { pe1 * (p - 1) / 2 };
            (d, e2, e3, cusps)
        }
    }
}

fn local_cartan(l: &LocalFactor) -> Option<(CartanType, bool)> {
    Some((l.kind.cartan_type()?, l.kind.is_plus()))
}

/// Closed form for a Cartan or Cartan-plus spec of prime power level.
pub fn table1_closed_form(spec: &SubgroupSpec) -> Result<(u64, u64, u64, u64)> {
    match spec.locals() {
        [l] => {
            let (t, plus) = local_cartan(l).ok_or_else(|| Error::invalid("not a Cartan family"))?;
            Ok(local_closed_form(l.p, l.e, t, plus))
        }
        _ => Err(Error::invalid(format!("{spec} is not of prime power level"))),
    }
}

/// (d, eps2, eps3, eps_inf): products of local closed forms for Cartan
/// families, the coset engine otherwise.
pub fn curve_counts(spec: &SubgroupSpec) -> Result<(u64, u64, u64, u64)> {
    if spec.level() == 1 {
        return Ok((1, 1, 1, 1));
    }
    if spec.is_cartan_family() {
        return Ok(spec.locals().iter().fold((1, 1, 1, 1), |acc, l| {
            let (t, plus) = local_cartan(l).expect("cartan family");
            let c = local_closed_form(l.p, l.e, t, plus);
            (acc.0 * c.0, acc.1 * c.1, acc.2 * c.2, acc.3 * c.3)
        }));
    }
    Ok(coset_table(spec)?.counts())
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Lower bound for the gonality from the index.
pub fn gonality_lower_bound(spec: &SubgroupSpec, mode: BoundMode) -> Result<u64> {
    let d = curve_counts(spec)?.0;
    if mode == BoundMode::Table && spec.is_plus() {
        let d_cartan = curve_counts(&spec.without_plus())?.0;
        return Ok(ceil_div(7 * d_cartan, 1600).max(1));
    }
    Ok(ceil_div(7 * d, 800).max(1))
}

pub fn curve_invariants(spec: &SubgroupSpec, mode: BoundMode) -> Result<CurveInvariants> {
    let (d, eps2, eps3, eps_inf) = curve_counts(spec)?;
    Ok(CurveInvariants {
        d,
        eps2,
        eps3,
        eps_inf,
        genus: genus_from_counts(d, eps2, eps3, eps_inf)?,
        gonality_lb: gonality_lower_bound(spec, mode)?,
        bound_mode: mode,
    })
}

/// 0.01 n^(2 - 0.96/loglog n) / loglog n, valid for n >= 10^5.
pub fn genus_lower_bound_large_n(n: u64) -> Result<f64> {
    if n < 100_000 {
        return Err(Error::invalid("the large-n genus bound needs n >= 10^5"));
    }
    let x = n as f64;
    let ll = x.ln().ln();
    Ok(0.01 * x.powf(2.0 - 0.96 / ll) / ll)
}

fn memo() -> &'static Mutex<HashMap<(u8, u64), u64>> {
    static CACHE: OnceLock<Mutex<HashMap<(u8, u64), u64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(kind: u8, n: u64, f: impl FnOnce() -> Result<u64>) -> Result<u64> {
    if let Some(&v) = memo().lock().expect("cache lock").get(&(kind, n)) {
        return Ok(v);
    }
    let v = f()?;
    memo().lock().expect("cache lock").insert((kind, n), v);
    Ok(v)
}

/// Genus of X_0(n), from the coset engine on upper triangular matrices.
pub fn genus_x0(n: u64) -> Result<u64> {
    cached(0, n, || {
        let (d, e2, e3, c) = coset_table(&SubgroupSpec::gamma0(n)?)?.counts();
        genus_from_counts(d, e2, e3, c)
    })
}

/// Dimension of the new part of J_0(n), inverting
/// g_0(n) = sum over d | n of sigma_0(n/d) g_0^new(d).
pub fn genus_x0_new(n: u64) -> Result<u64> {
    cached(1, n, || {
        let mut rest = genus_x0(n)? as i64;
        for d in divisors(n) {
            if d < n {
                rest -= sigma0(n / d) as i64 * genus_x0_new(d)? as i64;
            }
        }
        u64::try_from(rest).map_err(|_| Error::Inconsistent(format!("negative new genus at level {n}")))
    })
}

/// Genus of X_0^+(n) = X_0(n)/w_n.
pub fn genus_x0_plus(n: u64) -> Result<u64> {
    if n <= 4 {
        return Ok(0);
    }
    let g0 = genus_x0(n)? as i64;
    let n_i = n as i64;
    let h = if n % 2 == 1 {
        class_number_or_zero(-n_i)? + class_number_or_zero(-4 * n_i)?
    } else {
        class_number_or_zero(-4 * n_i)?
    } as i64;
    let four_g = 2 * (1 + g0) - h;
    if four_g < 0 || four_g % 4 != 0 {
        return Err(Error::Inconsistent(format!("X_0^+({n}) genus formula gives {four_g}/4")));
    }
    Ok((four_g / 4) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Modulus;

    fn spec(s: &str) -> SubgroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_from_counts(110, 2, 2, 10).unwrap(), 4);
        assert_eq!(genus_from_counts(192, 24, 0, 4).unwrap(), 9);
        assert_eq!(genus_from_counts(1, 1, 1, 1).unwrap(), 0);
        assert!(genus_from_counts(7, 0, 0, 1).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(table1_closed_form(&spec("16:ns:plus")).unwrap(), (64, 8, 1, 4));
        assert_eq!(table1_closed_form(&spec("9:s")).unwrap(), (108, 0, 0, 12));
        assert_eq!(table1_closed_form(&spec("3:ns:plus")).unwrap(), (3, 3, 0, 1));
        assert!(table1_closed_form(&spec("6:s")).is_err());
    }

    #[test]
    fn curve_invariant_examples() {
        let t = BoundMode::Table;
        assert_eq!(curve_invariants(&spec("48:ns:plus"), t).unwrap().genus, 9);
        let mixed = curve_invariants(&spec("6:2=s,3=ns"), t).unwrap();
        assert_eq!((mixed.d, mixed.eps2, mixed.eps3, mixed.eps_inf, mixed.genus), (36, 0, 0, 6, 1));
        assert_eq!(curve_invariants(&spec("30:s"), t).unwrap().genus, 145);
    }

    #[test]
    fn gonality_examples() {
        for mode in [BoundMode::Table, BoundMode::Conservative] {
            assert_eq!(gonality_lower_bound(&spec("13:ns"), mode).unwrap(), 2);
            assert_eq!(gonality_lower_bound(&spec("30:s"), mode).unwrap(), 19);
        }
        assert_eq!(gonality_lower_bound(&spec("48:ns:plus"), BoundMode::Table).unwrap(), 4);
        assert_eq!(gonality_lower_bound(&spec("48:ns:plus"), BoundMode::Conservative).unwrap(), 2);
    }

    #[test]
    fn x0_genera() {
        assert_eq!(genus_x0(169).unwrap(), 8);
        assert_eq!(genus_x0_new(169).unwrap(), 8);
        assert_eq!(genus_x0_plus(37).unwrap(), 1);
        assert_eq!(genus_x0(1).unwrap(), 0);
        assert_eq!(genus_x0(11).unwrap(), 1);
        assert_eq!(genus_x0(37).unwrap(), 2);
        assert_eq!(genus_x0_new(36).unwrap(), 1);
    }

    #[test]
    fn split_cartan_is_x0_of_the_square() {
        for q in 2..=16u64 {
            let m = Modulus::new(q).unwrap();
            if !m.is_prime_power() {
                continue;
            }
            let g = curve_invariants(&SubgroupSpec::totally(q, CartanType::Split, false).unwrap(), BoundMode::Table)
                .unwrap()
                .genus;
            assert_eq!(g, genus_x0(q * q).unwrap(), "{q}");
        }
    }

    #[test]
    fn x0_new_parts_are_nonnegative_and_plus_genus_integral() {
        for n in 1..=300u64 {
            genus_x0_new(n).unwrap();
            genus_x0_plus(n).unwrap();
        }
    }

    #[test]
    fn large_n_bound() {
        assert!(genus_lower_bound_large_n(10_000).is_err());
        let b = genus_lower_bound_large_n(100_000).unwrap();
        let x: f64 = 1e5;
        let ll = x.ln().ln();
        assert!((b - 0.01 * x.powf(2.0 - 0.96 / ll) / ll).abs() < 1e-9 * b);
        let g = curve_invariants(&SubgroupSpec::totally(1_000_000, CartanType::Split, true).unwrap(), BoundMode::Table)
            .unwrap()
            .genus;
        assert!(g as f64 > genus_lower_bound_large_n(1_000_000).unwrap());
    }
}
