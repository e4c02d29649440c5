//! Modular arithmetic, 2x2 matrices over Z/nZ, CRT plumbing, the usual
//! multiplicative functions and class numbers of imaginary quadratic orders.

use std::fmt;

use crate::error::{Error, Result};

/// A positive integer together with its prime factorisation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Modulus {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        factorize(n)
    }

    /// Builds `p^e` without factoring. `p` must be prime.
    pub fn prime_power(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        let n = p
            .checked_pow(e)
            .ok_or_else(|| Error::invalid(format!("{p}^{e} overflows")))?;
        let factors = if e == 0 { vec![] } else { vec![(p, e)] };
        Ok(Modulus { n, factors })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// The maximal prime powers dividing n, in increasing order of p.
    pub fn prime_powers(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, e)| p.pow(e)).collect()
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn omega(&self) -> usize {
        self.factors.len()
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_i(a: i64, b: i64) -> i64 {
    gcd(a.unsigned_abs(), b.unsigned_abs()) as i64
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd(a as i128 % n as i128, n as i128);
    (g == 1).then(|| x.rem_euclid(n as i128) as u64)
}

/// Reduces a signed integer into [0, n).
#[inline]
pub fn reduce(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set is deterministic for all 64-bit inputs.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn collect_prime_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    collect_prime_factors(d, out);
    collect_prime_factors(n / d, out);
}

/// Factors `n` (1 <= n <= 2^63). Small factors by trial division, the rest
/// with Pollard rho.
pub fn factorize(n: u64) -> Result<Modulus> {
    if n == 0 {
        return Err(Error::invalid("cannot factor 0"));
    }
    if n > 1 << 63 {
        return Err(Error::invalid(format!("{n} exceeds 2^63")));
    }
    let mut primes = Vec::new();
    let mut m = n;
    for p in 2..1000u64 {
        while m % p == 0 {
            primes.push(p);
            m /= p;
        }
    }
    collect_prime_factors(m, &mut primes);
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Modulus { n, factors })
}

fn factors_of(n: u64) -> Vec<(u64, u32)> {
    factorize(n.max(1)).map(|m| m.factors).unwrap_or_default()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factors_of(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn sigma0(n: u64) -> u64 {
    factors_of(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn sigma1(n: u64) -> u64 {
    factors_of(n)
        .iter()
        .map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1))
        .product()
}

pub fn euler_phi(n: u64) -> u64 {
    factors_of(n)
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

pub fn omega(n: u64) -> u64 {
    factors_of(n).len() as u64
}

pub fn mobius(n: u64) -> i64 {
    let f = factors_of(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// |SL_2(Z/nZ)| = n^3 prod (1 - 1/p^2).
pub fn sl2_order(n: &Modulus) -> u64 {
    n.factors()
        .iter()
        .map(|&(p, e)| p.pow(3 * e - 2) * (p * p - 1))
        .product()
}

/// |GL_2(Z/nZ)| = phi(n) |SL_2(Z/nZ)|.
pub fn gl2_order(n: &Modulus) -> u64 {
    euler_phi(n.n()) * sl2_order(n)
}

/// Units of Z/nZ in increasing order.
pub fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&x| gcd(x, n) == 1).collect()
}

/// Least positive quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    debug_assert!(p > 2 && is_prime(p));
    (2..p)
        .find(|&x| pow_mod(x, (p - 1) / 2, p) == p - 1)
        .expect("odd primes have non-residues")
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre(a: i64, p: u64) -> i64 {
    let a = reduce(a as i128, p);
    if a == 0 {
        0
    } else if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Chinese remaindering of residues `r_i mod m_i` with pairwise coprime moduli.
pub fn crt(residues: &[(u64, u64)]) -> (u64, u64) {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for &(r, mi) in residues {
        let mi = mi as u128;
        // x + m * t = r (mod mi)
        let inv = inv_mod((m % mi) as u64, mi as u64).expect("moduli must be coprime") as u128;
        let diff = (r as u128 + mi - x % mi) % mi;
        let t = diff * inv % mi;
        x += m * t;
        m *= mi;
        x %= m;
    }
    (x as u64, m as u64)
}

/// A 2x2 matrix over Z/nZ, entries kept in [0, n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct Mat2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub n: u64,
}

impl Mat2 {
    /// Builds `(a b; c d) mod n` from arbitrary integers.
    pub fn new(a: i64, b: i64, c: i64, d: i64, n: u64) -> Self {
        assert!(n >= 1, "modulus must be positive");
        let r = |x: i64| reduce(x as i128, n);
        Mat2 {
            a: r(a),
            b: r(b),
            c: r(c),
            d: r(d),
            n,
        }
    }

    pub fn from_residues(a: u64, b: u64, c: u64, d: u64, n: u64) -> Self {
        Mat2 {
            a: a % n,
            b: b % n,
            c: c % n,
            d: d % n,
            n,
        }
    }

    pub fn identity(n: u64) -> Self {
        Self::scalar(1, n)
    }

    pub fn scalar(l: u64, n: u64) -> Self {
        Self::from_residues(l, 0, 0, l, n)
    }

    /// S = (0 -1; 1 0)
    pub fn s(n: u64) -> Self {
        Self::new(0, -1, 1, 0, n)
    }

    /// R = (0 -1; 1 -1), of order 3 in PSL_2.
    pub fn r(n: u64) -> Self {
        Self::new(0, -1, 1, -1, n)
    }

    /// T = (1 1; 0 1)
    pub fn t(n: u64) -> Self {
        Self::new(1, 1, 0, 1, n)
    }

    pub fn det(&self) -> u64 {
        let n = self.n as u128;
        let ad = self.a as u128 * self.d as u128 % n;
        let bc = self.b as u128 * self.c as u128 % n;
        ((ad + n - bc) % n) as u64
    }

    pub fn trace(&self) -> u64 {
        (self.a + self.d) % self.n
    }

    pub fn is_invertible(&self) -> bool {
        gcd(self.det(), self.n) == 1
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        assert_eq!(self.n, o.n, "moduli differ");
        let n = self.n as u128;
        let f = |x: u64, y: u64, z: u64, w: u64| {
            ((x as u128 * y as u128 + z as u128 * w as u128) % n) as u64
        };
        Mat2 {
            a: f(self.a, o.a, self.b, o.c),
            b: f(self.a, o.b, self.b, o.d),
            c: f(self.c, o.a, self.d, o.c),
            d: f(self.c, o.b, self.d, o.d),
            n: self.n,
        }
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let di = inv_mod(self.det(), self.n)?;
        let n = self.n;
        let m = |x: u64| mul_mod(x, di, n);
        Some(Mat2 {
            a: m(self.d),
            b: m((n - self.b) % n),
            c: m((n - self.c) % n),
            d: m(self.a),
            n,
        })
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2 {
            b: self.c,
            c: self.b,
            ..*self
        }
    }

    pub fn neg(&self) -> Mat2 {
        let n = self.n;
        let g = |x: u64| (n - x) % n;
        Mat2 {
            a: g(self.a),
            b: g(self.b),
            c: g(self.c),
            d: g(self.d),
            n,
        }
    }

    pub fn pow(&self, mut k: u64) -> Mat2 {
        let mut acc = Mat2::identity(self.n);
        let mut base = *self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Entrywise reduction to a divisor of the modulus.
    pub fn reduce_to(&self, m: u64) -> Mat2 {
        assert!(self.n % m == 0, "{m} does not divide {}", self.n);
        Mat2::from_residues(self.a, self.b, self.c, self.d, m)
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::identity(self.n)
    }

    pub fn is_scalar(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }

    /// Dense index in [0, n^4).
    pub fn code(&self) -> u64 {
        ((self.a * self.n + self.b) * self.n + self.c) * self.n + self.d
    }

    pub fn from_code(code: u64, n: u64) -> Mat2 {
        Mat2 {
            d: code % n,
            c: code / n % n,
            b: code / (n * n) % n,
            a: code / (n * n * n),
            n,
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {}) mod {}", self.a, self.b, self.c, self.d, self.n)
    }
}

/// Splits a matrix into its reductions modulo the prime powers of `target`.
pub fn crt_split(m: &Mat2, target: &Modulus) -> Vec<Mat2> {
    assert_eq!(m.n, target.n(), "target must factor the matrix modulus");
    target.prime_powers().into_iter().map(|q| m.reduce_to(q)).collect()
}

/// Inverse of [`crt_split`]: glues matrices over pairwise coprime moduli.
pub fn crt_combine(parts: &[Mat2]) -> Mat2 {
    let glue = |f: fn(&Mat2) -> u64| crt(&parts.iter().map(|m| (f(m), m.n)).collect::<Vec<_>>());
    let (a, n) = glue(|m| m.a);
    let (b, _) = glue(|m| m.b);
    let (c, _) = glue(|m| m.c);
    let (d, _) = glue(|m| m.d);
    Mat2 { a, b, c, d, n }
}

/// Discriminant of a positive definite binary quadratic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadDiscriminant(i64);

/// Largest |D| accepted by the reduced-form enumeration.
pub const CLASS_NUMBER_BUDGET: u64 = 10_000_000;

impl QuadDiscriminant {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::invalid(format!(
                "{d} is not a negative discriminant (need D < 0, D = 0,1 mod 4)"
            )));
        }
        Ok(QuadDiscriminant(d))
    }

    pub fn value(self) -> i64 {
        self.0
    }

    /// True when D is the discriminant of the maximal order of its field.
    pub fn is_fundamental(self) -> bool {
        let d = self.0;
        let m = d.unsigned_abs();
        if d.rem_euclid(4) == 1 {
            return squarefree(m);
        }
        let q = m / 4;
        (q % 4 == 1 || q % 4 == 2) && squarefree(q)
    }
}

fn squarefree(n: u64) -> bool {
    factors_of(n).iter().all(|&(_, e)| e == 1)
}

/// Reduced primitive forms (a, b, c) of discriminant D:
/// -a < b <= a <= c, b >= 0 when a = c, gcd(a, b, c) = 1.
pub fn reduced_forms(d: QuadDiscriminant) -> Result<Vec<(i64, i64, i64)>> {
    let dv = d.value();
    if dv.unsigned_abs() > CLASS_NUMBER_BUDGET {
        return Err(Error::Budget {
            what: "class number enumeration",
            needed: dv.unsigned_abs(),
            limit: CLASS_NUMBER_BUDGET,
        });
    }
    let mut forms = Vec::new();
    let mut a = 1i64;
    // a <= sqrt(|D|/3) for reduced forms
    while 3 * a * a <= -dv {
        for b in (-a + 1)..=a {
            let num = b * b - dv;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if gcd_i(gcd_i(a, b), c) == 1 {
                forms.push((a, b, c));
            }
        }
        a += 1;
    }
    Ok(forms)
}

/// Number of reduced primitive positive definite forms of discriminant D.
/// With `allow_nonfundamental` false, non-fundamental discriminants are
/// rejected instead of giving the class number of the non-maximal order.
pub fn class_number(d: QuadDiscriminant, allow_nonfundamental: bool) -> Result<u64> {
    if !allow_nonfundamental && !d.is_fundamental() {
        return Err(Error::invalid(format!("{} is not fundamental", d.value())));
    }
    Ok(reduced_forms(d)?.len() as u64)
}

/// h(D) with the degenerate convention used in genus formulas: 0 when D is a
/// square or D = 2, 3 mod 4, otherwise the class number of the order.
pub fn class_number_or_zero(d: i64) -> Result<u64> {
    if d >= 0 {
        let r = (d as f64).sqrt() as i64;
        let square = (r - 1..=r + 1).any(|s| s >= 0 && s * s == d);
        if square || matches!(d.rem_euclid(4), 2 | 3) {
            return Ok(0);
        }
        return Err(Error::invalid(format!("{d} is a positive non-square discriminant")));
    }
    if matches!(d.rem_euclid(4), 2 | 3) {
        return Ok(0);
    }
    class_number(QuadDiscriminant::new(d)?, true)
}
