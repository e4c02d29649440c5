//! Subgroup specifications: a level plus one local subgroup per prime.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{least_nonresidue, Mat2, Modulus};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CartanType {
    Split,
    NonSplit,
}

impl CartanType {
    pub fn short(self) -> &'static str {
        match self {
            CartanType::Split => "s",
            CartanType::NonSplit => "ns",
        }
    }
}

/// The subgroup of GL_2(Z/p^e) sitting at one prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalKind {
    Split,
    NonSplit,
    SplitPlus,
    NonSplitPlus,
    /// p^r | b, p^(r+1) | c
    Borel(u32),
    /// p^r | b, p^r | c
    Torus(u32),
    /// upper triangular: c = 0
    Gamma0,
    Full,
}

impl LocalKind {
    pub fn cartan(t: CartanType, plus: bool) -> Self {
        match (t, plus) {
            (CartanType::Split, false) => LocalKind::Split,
            (CartanType::Split, true) => LocalKind::SplitPlus,
            (CartanType::NonSplit, false) => LocalKind::NonSplit,
            (CartanType::NonSplit, true) => LocalKind::NonSplitPlus,
        }
    }

    pub fn cartan_type(self) -> Option<CartanType> {
        match self {
            LocalKind::Split | LocalKind::SplitPlus => Some(CartanType::Split),
            LocalKind::NonSplit | LocalKind::NonSplitPlus => Some(CartanType::NonSplit),
            _ => None,
        }
    }

    pub fn is_plus(self) -> bool {
        matches!(self, LocalKind::SplitPlus | LocalKind::NonSplitPlus)
    }
}

/// One prime-power component of a subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalFactor {
    pub p: u64,
    pub e: u32,
    /// p^e
    pub q: u64,
    pub kind: LocalKind,
    /// Non-square used for the non-split shape at odd p (unused at p = 2).
    pub xi: u64,
}

impl LocalFactor {
    pub fn new(p: u64, e: u32, kind: LocalKind) -> Result<Self> {
        let q = p.pow(e);
        match kind {
            LocalKind::Borel(r) if r >= e => {
                return Err(Error::invalid(format!("borel({r}) needs r <= e-1 at {p}^{e}")))
            }
            LocalKind::Torus(r) if r > e => {
                return Err(Error::invalid(format!("torus({r}) needs r <= e at {p}^{e}")))
            }
            _ => {}
        }
        let xi = if p == 2 { 0 } else { least_nonresidue(p) };
        Ok(LocalFactor { p, e, q, kind, xi })
    }

    /// Membership for a matrix with entries already reduced mod q.
    #[inline]
    pub fn contains(&self, a: u64, b: u64, c: u64, d: u64) -> bool {
        let q = self.q;
        let p = self.p;
        let unit = |x: u64| x % p != 0;
        let det_unit = || {
            let det = (a * d % q + q - b * c % q) % q;
            unit(det)
        };
        match self.kind {
            LocalKind::Split => b == 0 && c == 0 && unit(a) && unit(d),
            LocalKind::SplitPlus => {
                (b == 0 && c == 0 && unit(a) && unit(d)) || (a == 0 && d == 0 && unit(b) && unit(c))
            }
            LocalKind::NonSplit => self.ns_main(a, b, c, d) && det_unit(),
            LocalKind::NonSplitPlus => {
                (self.ns_main(a, b, c, d) || self.ns_twist(a, b, c, d)) && det_unit()
            }
            LocalKind::Borel(r) => {
                b % p.pow(r) == 0 && c % p.pow(r + 1) == 0 && unit(a) && unit(d)
            }
            LocalKind::Torus(r) => b % p.pow(r) == 0 && c % p.pow(r) == 0 && det_unit(),
            LocalKind::Gamma0 => c == 0 && unit(a) && unit(d),
            LocalKind::Full => det_unit(),
        }
    }

    /// (a, xi c; c, a) at odd p, (a, c; c, a + c) at p = 2.
    #[inline]
    fn ns_main(&self, a: u64, b: u64, c: u64, d: u64) -> bool {
        let q = self.q;
        if self.p == 2 {
            b == c && d == (a + c) % q
        } else {
            d == a && b == self.xi * c % q
        }
    }

    /// The second coset of the normaliser: (a, -xi c; c, -a) at odd p,
    /// (a, a - c; c, -a) at p = 2.
    #[inline]
    fn ns_twist(&self, a: u64, b: u64, c: u64, d: u64) -> bool {
        let q = self.q;
        if d != (q - a) % q {
            return false;
        }
        if self.p == 2 {
            b == (a + q - c) % q
        } else {
            b == (q - self.xi * c % q) % q
        }
    }

    pub fn order(&self) -> u64 {
        let (p, e, q) = (self.p, self.e, self.q);
        let phi = q / p * (p - 1);
        let gl = q.pow(4) / (p * p * p) * (p - 1) * (p * p - 1);
        match self.kind {
            LocalKind::Split => phi * phi,
            LocalKind::SplitPlus => 2 * phi * phi,
            LocalKind::NonSplit => p.pow(2 * e - 2) * (p * p - 1),
            LocalKind::NonSplitPlus => 2 * p.pow(2 * e - 2) * (p * p - 1),
            LocalKind::Borel(r) => phi * phi * p.pow(e - r) * p.pow(e - r - 1),
            LocalKind::Torus(0) | LocalKind::Full => gl,
            LocalKind::Torus(r) => phi * phi * p.pow(2 * (e - r)),
            LocalKind::Gamma0 => phi * phi * q,
        }
    }

    /// Explicit element list (entries mod q), generated from the shape.
    pub fn elements(&self) -> Vec<[u64; 4]> {
        let (p, q) = (self.p, self.q);
        let unit = |x: u64| x % p != 0;
        let mut out = Vec::new();
        let det_unit = |a: u64, b: u64, c: u64, d: u64| unit((a * d + q * q - b * c) % q);
        match self.kind {
            LocalKind::Split | LocalKind::SplitPlus => {
                for a in (0..q).filter(|&x| unit(x)) {
                    for d in (0..q).filter(|&x| unit(x)) {
                        out.push([a, 0, 0, d]);
                        if self.kind == LocalKind::SplitPlus {
                            out.push([0, a, d, 0]);
                        }
                    }
                }
            }
            LocalKind::NonSplit | LocalKind::NonSplitPlus => {
                for a in 0..q {
                    for c in 0..q {
                        let (m, t) = if p == 2 {
                            ([a, c, c, (a + c) % q], [a, (a + q - c) % q, c, (q - a) % q])
                        } else {
                            let b = self.xi * c % q;
                            ([a, b, c, a], [a, (q - b) % q, c, (q - a) % q])
                        };
                        if det_unit(m[0], m[1], m[2], m[3]) {
                            out.push(m);
                            if self.kind == LocalKind::NonSplitPlus {
                                out.push(t);
                            }
                        }
                    }
                }
            }
            LocalKind::Borel(r) => {
                let (sb, sc) = (p.pow(r), p.pow(r + 1));
                for a in (0..q).filter(|&x| unit(x)) {
                    for d in (0..q).filter(|&x| unit(x)) {
                        for b in (0..q).step_by(sb as usize) {
                            for c in (0..q).step_by(sc as usize) {
                                out.push([a, b, c, d]);
                            }
                        }
                    }
                }
            }
            LocalKind::Torus(r) => {
                let s = p.pow(r) as usize;
                for a in 0..q {
                    for d in 0..q {
                        for b in (0..q).step_by(s) {
                            for c in (0..q).step_by(s) {
                                if det_unit(a, b, c, d) {
                                    out.push([a, b, c, d]);
                                }
                            }
                        }
                    }
                }
            }
            LocalKind::Gamma0 => {
                for a in (0..q).filter(|&x| unit(x)) {
                    for d in (0..q).filter(|&x| unit(x)) {
                        for b in 0..q {
                            out.push([a, b, 0, d]);
                        }
                    }
                }
            }
            LocalKind::Full => {
                for code in 0..q.pow(4) {
                    let m = Mat2::from_code(code, q);
                    if det_unit(m.a, m.b, m.c, m.d) {
                        out.push([m.a, m.b, m.c, m.d]);
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Cartan,
    CartanPlus,
    Borel(u32),
    Torus(u32),
    Gamma0,
    Full,
    /// Arbitrary product of local factors (used by the Chen identities).
    Product,
}

/// A subgroup of GL_2(Z/nZ) given as a CRT product of local subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupSpec {
    level: u64,
    family: Family,
    locals: Vec<LocalFactor>,
}

impl SubgroupSpec {
    /// Cartan (or Cartan-plus) subgroup with the given per-prime assignment.
    pub fn cartan(n: u64, assignment: &[(u64, CartanType)], plus: bool) -> Result<Self> {
        let m = Modulus::new(n)?;
        let mut locals = Vec::new();
        for &(p, e) in m.factors() {
            let t = assignment
                .iter()
                .find(|&&(q, _)| q == p)
                .map(|&(_, t)| t)
                .ok_or_else(|| Error::invalid(format!("prime {p} of {n} has no assignment")))?;
            locals.push(LocalFactor::new(p, e, LocalKind::cartan(t, plus))?);
        }
        if let Some(&(p, _)) = assignment.iter().find(|&&(p, _)| n % p != 0) {
            return Err(Error::invalid(format!("{p} does not divide {n}")));
        }
        let family = if plus { Family::CartanPlus } else { Family::Cartan };
        Ok(SubgroupSpec { level: n, family, locals })
    }

    /// Same Cartan type at every prime.
    pub fn totally(n: u64, t: CartanType, plus: bool) -> Result<Self> {
        let m = Modulus::new(n)?;
        let assignment: Vec<_> = m.primes().map(|p| (p, t)).collect();
        Self::cartan(n, &assignment, plus)
    }

    pub fn borel(p: u64, e: u32, r: u32) -> Result<Self> {
        Self::single(p, e, LocalKind::Borel(r), Family::Borel(r))
    }

    pub fn torus(p: u64, e: u32, r: u32) -> Result<Self> {
        Self::single(p, e, LocalKind::Torus(r), Family::Torus(r))
    }

    fn single(p: u64, e: u32, kind: LocalKind, family: Family) -> Result<Self> {
        let m = Modulus::prime_power(p, e)?;
        if e == 0 {
            return Err(Error::invalid("borel/torus need a proper prime power"));
        }
        Ok(SubgroupSpec {
            level: m.n(),
            family,
            locals: vec![LocalFactor::new(p, e, kind)?],
        })
    }

    /// Upper triangular matrices mod n; its curve is X_0(n).
    pub fn gamma0(n: u64) -> Result<Self> {
        Self::uniform(n, LocalKind::Gamma0, Family::Gamma0)
    }

    pub fn full(n: u64) -> Result<Self> {
        Self::uniform(n, LocalKind::Full, Family::Full)
    }

    fn uniform(n: u64, kind: LocalKind, family: Family) -> Result<Self> {
        let m = Modulus::new(n)?;
        let locals = m
            .factors()
            .iter()
            .map(|&(p, e)| LocalFactor::new(p, e, kind))
            .collect::<Result<_>>()?;
        Ok(SubgroupSpec { level: n, family, locals })
    }

    /// Product of arbitrary local subgroups, one per prime of n.
    pub fn product(n: u64, kinds: &[(u64, LocalKind)]) -> Result<Self> {
        let m = Modulus::new(n)?;
        if kinds.len() != m.omega() {
            return Err(Error::invalid("need exactly one local kind per prime"));
        }
        let mut locals = Vec::new();
        for &(p, e) in m.factors() {
            let kind = kinds
                .iter()
                .find(|&&(q, _)| q == p)
                .map(|&(_, k)| k)
                .ok_or_else(|| Error::invalid(format!("prime {p} missing")))?;
            locals.push(LocalFactor::new(p, e, kind)?);
        }
        Ok(SubgroupSpec { level: n, family: Family::Product, locals })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.level).expect("level was validated")
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn locals(&self) -> &[LocalFactor] {
        &self.locals
    }

    pub fn is_plus(&self) -> bool {
        self.family == Family::CartanPlus
    }

    pub fn is_cartan_family(&self) -> bool {
        matches!(self.family, Family::Cartan | Family::CartanPlus)
    }

    /// Per-prime split/non-split assignment (Cartan families only).
    pub fn assignment(&self) -> Vec<(u64, CartanType)> {
        self.locals
            .iter()
            .filter_map(|l| l.kind.cartan_type().map(|t| (l.p, t)))
            .collect()
    }

    pub fn cartan_type_at(&self, p: u64) -> Option<CartanType> {
        self.locals.iter().find(|l| l.p == p).and_then(|l| l.kind.cartan_type())
    }

    /// The plain Cartan subgroup underlying a Cartan-plus spec.
    pub fn without_plus(&self) -> SubgroupSpec {
        if self.family != Family::CartanPlus {
            return self.clone();
        }
        SubgroupSpec::cartan(self.level, &self.assignment(), false).expect("same assignment")
    }

    pub fn with_plus(&self) -> SubgroupSpec {
        if self.family != Family::Cartan {
            return self.clone();
        }
        SubgroupSpec::cartan(self.level, &self.assignment(), true).expect("same assignment")
    }

    /// The same family at one prime power of the level.
    pub fn local_spec(&self, p: u64) -> Option<SubgroupSpec> {
        let l = *self.locals.iter().find(|l| l.p == p)?;
        Some(SubgroupSpec {
            level: l.q,
            family: if self.family == Family::Product {
                match l.kind {
                    LocalKind::Borel(r) => Family::Borel(r),
                    LocalKind::Torus(r) => Family::Torus(r),
                    LocalKind::Gamma0 => Family::Gamma0,
                    LocalKind::Full => Family::Full,
                    LocalKind::SplitPlus | LocalKind::NonSplitPlus => Family::CartanPlus,
                    _ => Family::Cartan,
                }
            } else {
                self.family
            },
            locals: vec![l],
        })
    }

    /// Every prime non-split, every prime split, or neither.
    pub fn uniform_type(&self) -> Option<CartanType> {
        let a = self.assignment();
        if a.len() != self.locals.len() {
            return None;
        }
        if a.iter().all(|&(_, t)| t == CartanType::Split) {
            Some(CartanType::Split)
        } else if a.iter().all(|&(_, t)| t == CartanType::NonSplit) {
            Some(CartanType::NonSplit)
        } else {
            None
        }
    }

    /// Curve name such as `X_ns+(48)`; mixed assignments list the split part.
    pub fn curve_name(&self) -> String {
        let n = self.level;
        match self.family {
            Family::Cartan | Family::CartanPlus => {
                let plus = if self.is_plus() { "+" } else { "" };
                match self.uniform_type() {
                    Some(t) if n > 1 => format!("X_{}{}({})", t.short(), plus, n),
                    _ if n == 1 => "X(1)".to_string(),
                    _ => format!("X_H{}({})", plus, self),
                }
            }
            Family::Gamma0 => format!("X_0({n})"),
            Family::Full => format!("X(1) via level {n}"),
            _ => format!("X_H({self})"),
        }
    }

    /// Membership of a matrix mod the level.
    pub fn contains(&self, m: &Mat2) -> bool {
        debug_assert_eq!(m.n, self.level);
        if self.level == 1 {
            return true;
        }
        self.locals.iter().all(|l| {
            let q = l.q;
            l.contains(m.a % q, m.b % q, m.c % q, m.d % q)
        })
    }

    /// Order computed from the local formulas.
    pub fn order(&self) -> u64 {
        self.locals.iter().map(LocalFactor::order).product()
    }

    /// Canonical spec string, parseable by [`FromStr`].
    fn render(&self) -> String {
        let n = self.level;
        let body: Vec<String> = self
            .locals
            .iter()
            .map(|l| {
                let k = match l.kind {
                    LocalKind::Split | LocalKind::SplitPlus => "s".to_string(),
                    LocalKind::NonSplit | LocalKind::NonSplitPlus => "ns".to_string(),
                    LocalKind::Borel(r) => format!("b{r}"),
                    LocalKind::Torus(r) => format!("t{r}"),
                    LocalKind::Gamma0 => "g0".to_string(),
                    LocalKind::Full => "full".to_string(),
                };
                format!("{}={}", l.p, k)
            })
            .collect();
        let mut s = format!("{n}:{}", body.join(","));
        if self.is_plus() {
            s.push_str(":plus");
        }
        s
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for SubgroupSpec {
    type Err = Error;

    /// Grammar: `<n>:<p>=<kind>,...[:plus]` where kind is `s` or `ns`
    /// (also `b<r>`, `t<r>`, `g0`, `full`), or `<n>:<kind>[:plus]` to apply
    /// one kind at every prime.
    fn from_str(s: &str) -> Result<Self> {
        let perr = |reason: &str| Error::Parse {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let mut parts = s.trim().split(':');
        let n: u64 = parts
            .next()
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|_| perr("level must be a positive integer"))?;
        if n == 0 {
            return Err(perr("level must be positive"));
        }
        let body = parts.next().unwrap_or("").trim();
        let plus = match parts.next().map(str::trim) {
            None => false,
            Some("plus") | Some("+") => true,
            Some(other) => return Err(perr(&format!("unexpected suffix {other:?}"))),
        };
        if parts.next().is_some() {
            return Err(perr("too many ':' separated fields"));
        }
        let m = Modulus::new(n).map_err(|e| perr(&e.to_string()))?;
        let parse_kind = |k: &str| -> Result<LocalKind> {
            Ok(match k {
                "s" => LocalKind::cartan(CartanType::Split, plus),
                "ns" => LocalKind::cartan(CartanType::NonSplit, plus),
                "g0" | "gamma0" => LocalKind::Gamma0,
                "full" => LocalKind::Full,
                _ if k.starts_with('b') || k.starts_with('t') => {
                    let r: u32 = k[1..].parse().map_err(|_| perr("bad borel/torus index"))?;
                    if k.starts_with('b') {
                        LocalKind::Borel(r)
                    } else {
                        LocalKind::Torus(r)
                    }
                }
                _ => return Err(perr(&format!("unknown kind {k:?}"))),
            })
        };
        let mut kinds: Vec<(u64, LocalKind)> = Vec::new();
        if body.is_empty() {
            if n != 1 {
                return Err(perr("missing per-prime assignment"));
            }
        } else if !body.contains('=') {
            let k = parse_kind(body)?;
            kinds = m.primes().map(|p| (p, k)).collect();
        } else {
            for item in body.split(',') {
                let (p, k) = item.split_once('=').ok_or_else(|| perr("expected p=kind"))?;
                let p: u64 = p.trim().parse().map_err(|_| perr("bad prime"))?;
                if m.exponent_of(p) == 0 {
                    return Err(perr(&format!("{p} is not a prime factor of {n}")));
                }
                if kinds.iter().any(|&(q, _)| q == p) {
                    return Err(perr(&format!("prime {p} assigned twice")));
                }
                kinds.push((p, parse_kind(k.trim())?));
            }
        }
        if kinds.len() != m.omega() {
            return Err(perr("every prime of the level needs an assignment"));
        }
        let all_cartan = kinds.iter().all(|(_, k)| k.cartan_type().is_some());
        if plus && !all_cartan {
            return Err(perr(":plus only applies to s/ns assignments"));
        }
        if all_cartan {
            let assignment: Vec<_> = kinds
                .iter()
                .map(|&(p, k)| (p, k.cartan_type().expect("checked")))
                .collect();
            return SubgroupSpec::cartan(n, &assignment, plus);
        }
        let same = kinds.windows(2).all(|w| w[0].1 == w[1].1);
        let spec = SubgroupSpec::product(n, &kinds).map_err(|e| perr(&e.to_string()))?;
        let family = match kinds[0].1 {
            LocalKind::Gamma0 if same => Family::Gamma0,
            LocalKind::Full if same => Family::Full,
            LocalKind::Borel(r) if m.omega() == 1 => Family::Borel(r),
            LocalKind::Torus(r) if m.omega() == 1 => Family::Torus(r),
            _ => Family::Product,
        };
        Ok(SubgroupSpec { family, ..spec })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let s: SubgroupSpec = "48:2=ns,3=ns:plus".parse().unwrap();
        assert_eq!(s.level(), 48);
        assert!(s.is_plus());
        assert_eq!(s.uniform_type(), Some(CartanType::NonSplit));
        assert_eq!(s.curve_name(), "X_ns+(48)");
        assert_eq!(s.to_string(), "48:2=ns,3=ns:plus");
        let t: SubgroupSpec = "30:s".parse().unwrap();
        assert_eq!(t.to_string(), "30:2=s,3=s,5=s");
        let b: SubgroupSpec = "27:b1".parse().unwrap();
        assert_eq!(b.family(), Family::Borel(1));
        let g: SubgroupSpec = "12:g0".parse().unwrap();
        assert_eq!(g.family(), Family::Gamma0);
        assert_eq!("1:".parse::<SubgroupSpec>().unwrap().curve_name(), "X(1)");
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["", "0:s", "12:2=s", "12:2=s,5=ns", "12:2=s,3=x", "12:2=s,2=s,3=s", "12:g0:plus", "9:b2", "4:s:minus"] {
            assert!(bad.parse::<SubgroupSpec>().is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn round_trips_display() {
        for s in ["6:2=s,3=ns", "6:2=s,3=ns:plus", "16:2=t3", "45:3=b1,5=s"] {
            let spec: SubgroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string().parse::<SubgroupSpec>().unwrap(), spec);
        }
    }
}
