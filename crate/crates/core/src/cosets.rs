//! Right cosets of the transposed image of +-H' in SL_2(Z/nZ), with the
//! actions of S, R and T used to count elliptic points and cusps.

use std::collections::HashMap;

use crate::arith::{crt, inv_mod, sl2_order, Mat2, Modulus};
use crate::error::{Error, Result};
use crate::groups::{build_subgroup, intersect_sl2, Family, SubgroupHandle, SubgroupSpec};

/// Largest number of cosets enumerated.
pub const COSET_BUDGET: u64 = 1_000_000;

/// Cosets of G = {g in SL_2 : g^T in +-H'} with the right actions of S, R, T.
#[derive(Clone, Debug)]
pub struct CosetTable {
    level: u64,
    reps: Vec<Mat2>,
    s: Vec<u32>,
    r: Vec<u32>,
    t: Vec<u32>,
}

enum Keyer {
    /// Upper triangular H: the coset of g is the projective point of its first row.
    Projective { n: u64, qs: Vec<u64> },
    /// Smallest code in the coset G g.
    Generic { group: Vec<Mat2> },
}

impl Keyer {
    fn key(&self, g: &Mat2) -> u64 {
        match self {
            Keyer::Projective { n, qs } => {
                let parts: Vec<(u64, u64)> = qs.iter().map(|&q| normalize_p1(g.a % q, g.b % q, q)).collect();
                let (x, _) = crt(&parts.iter().zip(qs).map(|(&(x, _), &q)| (x, q)).collect::<Vec<_>>());
                let (y, _) = crt(&parts.iter().zip(qs).map(|(&(_, y), &q)| (y, q)).collect::<Vec<_>>());
                x * n + y
            }
            Keyer::Generic { group } => group.iter().map(|h| h.mul(g).code()).min().expect("nonempty group"),
        }
    }
}

/// Representative of the point (x : y) of P^1(Z/q), q a prime power.
fn normalize_p1(x: u64, y: u64, q: u64) -> (u64, u64) {
    match inv_mod(x, q) {
        Some(xi) => (1 % q, y * xi % q),
        None => {
            let yi = inv_mod(y, q).expect("primitive row");
            (x * yi % q, 1 % q)
        }
    }
}

/// The subgroup +-H' of SL_2 attached to a spec.
pub fn pm_h_prime(spec: &SubgroupSpec) -> Result<SubgroupHandle> {
    Ok(intersect_sl2(&build_subgroup(spec)?)?.with_minus_identity())
}

impl CosetTable {
    /// Enumerates the cosets for a spec.
    pub fn new(spec: &SubgroupSpec) -> Result<CosetTable> {
        let n = spec.level();
        if n == 1 {
            return Ok(Self::trivial());
        }
        if spec.family() == Family::Gamma0 {
            let m = Modulus::new(n)?;
            let index: u64 = m.factors().iter().map(|&(p, e)| p.pow(e - 1) * (p + 1)).product();
            check_budget(index)?;
            return Ok(Self::enumerate(n, &Keyer::Projective { n, qs: m.prime_powers() }));
        }
        Self::from_subgroup(&pm_h_prime(spec)?)
    }

    /// Cosets of the transpose of an explicit subgroup of SL_2 (which must contain -Id).
    pub fn from_subgroup(h: &SubgroupHandle) -> Result<CosetTable> {
        let n = h.level();
        if n == 1 {
            return Ok(Self::trivial());
        }
        let sl2 = sl2_order(&Modulus::new(n)?);
        if h.order() == 0 || sl2 % h.order() != 0 {
            return Err(Error::invalid("subgroup order does not divide |SL_2|"));
        }
        check_budget(sl2 / h.order())?;
        let group: Vec<Mat2> = h.elements()?.iter().map(Mat2::transpose).collect();
        Ok(Self::enumerate(n, &Keyer::Generic { group }))
    }

    fn trivial() -> CosetTable {
        CosetTable {
            level: 1,
            reps: vec![Mat2::identity(1)],
            s: vec![0],
            r: vec![0],
            t: vec![0],
        }
    }

    fn enumerate(n: u64, keyer: &Keyer) -> CosetTable {
        let gens = [Mat2::s(n), Mat2::r(n), Mat2::t(n)];
        let id = Mat2::identity(n);
        let mut index: HashMap<u64, u32> = HashMap::from([(keyer.key(&id), 0)]);
        let mut reps = vec![id];
        let mut perms: [Vec<u32>; 3] = [vec![], vec![], vec![]];
        let mut i = 0;
        while i < reps.len() {
            let g = reps[i];
            for (perm, x) in perms.iter_mut().zip(&gens) {
                let y = g.mul(x);
                let k = keyer.key(&y);
                let next = reps.len() as u32;
                let j = *index.entry(k).or_insert_with(|| {
                    reps.push(y);
                    next
                });
                perm.push(j);
            }
            i += 1;
        }
        let [s, r, t] = perms;
        CosetTable { level: n, reps, s, r, t }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// Number of cosets, the index of Gamma_H in SL_2(Z) modulo +-1.
    pub fn index(&self) -> u64 {
        self.reps.len() as u64
    }

    pub fn representatives(&self) -> &[Mat2] {
        &self.reps
    }

    pub fn s_perm(&self) -> &[u32] {
        &self.s
    }

    pub fn r_perm(&self) -> &[u32] {
        &self.r
    }

    pub fn t_perm(&self) -> &[u32] {
        &self.t
    }

    /// Elliptic points of period 2 (fixed cosets of S) or 3 (fixed cosets of R).
    pub fn elliptic_count(&self, period: u32) -> Result<u64> {
        let perm = match period {
            2 => &self.s,
            3 => &self.r,
            _ => return Err(Error::invalid("elliptic period must be 2 or 3")),
        };
        Ok(perm.iter().enumerate().filter(|&(i, &j)| i as u32 == j).count() as u64)
    }

    /// Orbit sizes of T, one per cusp.
    pub fn cusp_widths(&self) -> Vec<u64> {
        let mut seen = vec![false; self.t.len()];
        let mut widths = Vec::new();
        for start in 0..self.t.len() {
            if seen[start] {
                continue;
            }
            let mut w = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.t[x] as usize;
                w += 1;
            }
            widths.push(w);
        }
        widths
    }

    pub fn cusp_count(&self) -> u64 {
        self.cusp_widths().len() as u64
    }

    /// (d, eps2, eps3, eps_inf).
    pub fn counts(&self) -> (u64, u64, u64, u64) {
        (
            self.index(),
            self.elliptic_count(2).expect("period 2"),
            self.elliptic_count(3).expect("period 3"),
            self.cusp_count(),
        )
    }
}

fn check_budget(index: u64) -> Result<()> {
    if index > COSET_BUDGET {
        return Err(Error::Budget {
            what: "coset enumeration",
            needed: index,
            limit: COSET_BUDGET,
        });
    }
    Ok(())
}

/// Builds the coset table of a spec.
pub fn coset_table(spec: &SubgroupSpec) -> Result<CosetTable> {
    CosetTable::new(spec)
}
