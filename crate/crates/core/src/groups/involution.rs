//! The extra involution of Cartan-plus curves of level n = 2 mod 4, split at 2.

use serde::Serialize;

use super::{build_subgroup, LocalKind, SubgroupSpec};
use crate::arith::{crt_combine, ext_gcd, gcd_i, Mat2};
use crate::error::{Error, Result};

/// A 2x2 integer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntMat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMat2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &IntMat2) -> IntMat2 {
        IntMat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn reduce(&self, n: u64) -> Mat2 {
        Mat2::new(self.a, self.b, self.c, self.d, n)
    }
}

impl std::fmt::Display for IntMat2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// gamma_1, gamma_0 and their product.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExtraInvolution {
    pub gamma0: IntMat2,
    pub gamma1: IntMat2,
    pub product: IntMat2,
}

/// Lifts an element of SL_2(Z/N) to SL_2(Z).
pub fn lift_sl2(m: &Mat2) -> Result<IntMat2> {
    let n = m.n as i64;
    if m.det() != 1 % m.n {
        return Err(Error::invalid("lift_sl2 needs determinant 1"));
    }
    if n == 1 {
        return Ok(IntMat2::new(1, 0, 0, 1));
    }
    let c = if m.c == 0 { n } else { m.c as i64 };
    let mut d = m.d as i64;
    // make (c, d) coprime without changing d mod n
    while gcd_i(c, d) != 1 {
        d += n;
    }
    let (_, x, y) = ext_gcd(d as i128, c as i128);
    // x*d + y*c = 1, so (a0, b0) = (x, -y) gives a0*d - b0*c = 1
    let (a0, b0) = (x as i64, -(y as i64));
    for t in 0..n {
        let a = a0 + t * c;
        let b = b0 + t * d;
        if a.rem_euclid(n) as u64 == m.a && b.rem_euclid(n) as u64 == m.b {
            return Ok(IntMat2::new(a, b, c, d));
        }
    }
    Err(Error::Inconsistent(format!("no SL_2(Z) lift of {m}")))
}

fn precondition(spec: &SubgroupSpec) -> Result<()> {
    let n = spec.level();
    let why = if n % 4 != 2 {
        Some(format!("level {n} is not 2 mod 4"))
    } else if !spec.is_plus() {
        Some("not a Cartan-plus subgroup".to_string())
    } else if spec.locals().first().map(|l| l.kind) != Some(LocalKind::SplitPlus) {
        Some("not split at 2".to_string())
    } else {
        None
    };
    match why {
        Some(w) => Err(Error::NoInvolution(w)),
        None => Ok(()),
    }
}

/// gamma_1 * gamma_0 for a Cartan-plus spec of level 2 mod 4, split at 2.
///
/// Here H_2 = {Id, (0 1; 1 0)}, so gamma_0 = (3 1; 1 1); gamma_1 is Id mod 4
/// and makes the transposed product land in H_{n'} mod the odd part n'.
pub fn extra_involution(spec: &SubgroupSpec) -> Result<ExtraInvolution> {
    precondition(spec)?;
    let n = spec.level();
    let odd = n / 2;
    let gamma0 = IntMat2::new(3, 1, 1, 1);
    let h_odd = if odd == 1 {
        None
    } else {
        let kinds: Vec<(u64, LocalKind)> = spec.locals()[1..].iter().map(|l| (l.p, l.kind)).collect();
        Some(SubgroupSpec::product(odd, &kinds)?)
    };
    let gamma1 = match &h_odd {
        None => IntMat2::new(1, 0, 0, 1),
        Some(h) => {
            let g0inv = gamma0.reduce(odd).inverse().expect("det 2 is a unit mod odd n'");
            let two = 2 % odd;
            // any h in H_{n'} with det 2 gives gamma_1 = h^T gamma_0^{-1} mod n'
            let elements = build_subgroup(h)?.elements()?;
            let target = elements
                .iter()
                .find(|x| x.det() == two)
                .ok_or_else(|| Error::Inconsistent("det is not surjective on H_n'".into()))?
                .transpose()
                .mul(&g0inv);
            lift_sl2(&crt_combine(&[Mat2::identity(4), target]))?
        }
    };
    let product = gamma1.mul(&gamma0);
    let out = ExtraInvolution { gamma0, gamma1, product };
    check(&out, h_odd.as_ref())?;
    Ok(out)
}

fn check(inv: &ExtraInvolution, h_odd: Option<&SubgroupSpec>) -> Result<()> {
    let p = inv.product;
    let fail = |what: &str| Err(Error::Inconsistent(format!("extra involution {p}: {what}")));
    if p.det() != 2 {
        return fail("determinant is not 2");
    }
    if p.reduce(2) != Mat2::new(1, 1, 1, 1, 2) {
        return fail("not (1 1; 1 1) mod 2");
    }
    if inv.gamma1.det() != 1 || !inv.gamma1.reduce(4).is_identity() {
        return fail("gamma_1 is not in SL_2(Z) and Id mod 4");
    }
    if let Some(h) = h_odd {
        if !h.contains(&p.reduce(h.level()).transpose()) {
            return fail("transpose does not reduce into H_n'");
        }
    }
    Ok(())
}
