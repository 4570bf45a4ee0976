//! The cyclotomic field `ℚ(ζ_N)` represented as `ℚ[x] / Φ_N(x)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{self, Rational};

#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    order: u64,
    /// Monic `Φ_N`, coefficients from low to high degree.
    modulus: Vec<Rational>,
}

#[derive(Clone)]
pub struct Cyclo {
    field: Arc<CycloField>,
    coeffs: Vec<Rational>,
}

impl CycloField {
    pub fn new(order: u64) -> Arc<Self> {
        assert!(order >= 1);
        let modulus = cyclotomic_polynomial(order)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        Arc::new(CycloField { order, modulus })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero(self: &Arc<Self>) -> Cyclo {
        Cyclo { field: self.clone(), coeffs: vec![Rational::zero(); self.degree()] }
    }

    pub fn from_rational(self: &Arc<Self>, q: Rational) -> Cyclo {
        let mut z = self.zero();
        z.coeffs[0] = q;
        z
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> Cyclo {
        let e = k.rem_euclid(self.order as i64) as usize;
        let mut raw = vec![Rational::zero(); e + 1];
        raw[e] = Rational::one();
        self.reduce(raw)
    }

    fn reduce(self: &Arc<Self>, mut p: Vec<Rational>) -> Cyclo {
        let d = self.degree();
        while p.len() > d {
            let top = p.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = p.len() - d;
            for (i, m) in self.modulus[..d].iter().enumerate() {
                p[shift + i] -= &top * m;
            }
        }
        p.resize(d, Rational::zero());
        Cyclo { field: self.clone(), coeffs: p }
    }
}

impl Cyclo {
    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// The value as a rational number, when it lies in `ℚ`.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn scale(&self, q: &Rational) -> Cyclo {
        Cyclo { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs.iter().map(|c| crate::arith::format_rational(c).into()).collect(),
        )
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if i == 0 { format!("{c}") } else { format!("{c}*z^{i}") })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl arith::Field for Cyclo {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.from_rational(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn add(&self, other: &Self) -> Self {
        Cyclo {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        Cyclo {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        let d = self.coeffs.len();
        let mut raw = vec![Rational::zero(); (2 * d).saturating_sub(1).max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !Zero::is_zero(b) {
                    raw[i + j] += a * b;
                }
            }
        }
        self.field.reduce(raw)
    }
    fn neg(&self) -> Self {
        Cyclo { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
    fn inv(&self) -> Self {
        assert!(!arith::Field::is_zero(self), "inverse of zero");
        let a = trim(self.coeffs.clone());
        let m = trim(self.field.modulus.clone());
        let (g, s) = half_gcdext(a, m);
        // Φ_N is irreducible, so the gcd is a nonzero constant
        assert_eq!(g.len(), 1);
        let c = g[0].recip();
        self.field.reduce(s.into_iter().map(|x| x * &c).collect())
    }
    fn embed(&self, q: &Rational) -> Self {
        self.field.from_rational(q.clone())
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![Rational::zero()], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    let lead = b[db].clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(Rational::zero());
        }
    }
    (q, r)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let get = |p: &[Rational], i: usize| p.get(i).cloned().unwrap_or_else(Rational::zero);
    trim((0..n).map(|i| get(a, i) - get(b, i)).collect())
}

/// Returns `(g, s)` with `s·a ≡ g (mod m)`.
fn half_gcdext(a: Vec<Rational>, m: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (a, m);
    let (mut s0, mut s1) = (vec![Rational::one()], vec![Rational::zero()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (trim(r0), s0)
}

/// Integer coefficients of `Φ_n`, low to high degree.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - db];
    for shift in (0..q.len()).rev() {
        let c = r[shift + db].clone();
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Field};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn roots_of_unity_relations() {
        for n in [1u64, 2, 3, 4, 5, 6, 8, 12] {
            let k = CycloField::new(n);
            assert_eq!(k.zeta_pow(n as i64), k.from_rational(rat(1, 1)));
            // the n-th roots of unity sum to zero for n > 1
            let mut s = k.zero();
            for j in 0..n as i64 {
                s = s.add(&k.zeta_pow(j));
            }
            let expected = if n == 1 { 1 } else { 0 };
            assert_eq!(s.to_rational(), Some(rat(expected, 1)), "n = {n}");
            assert_eq!(k.zeta_pow(3).mul(&k.zeta_pow(-3)), k.from_rational(rat(1, 1)));
        }
    }

    #[test]
    fn inverses() {
        let k = CycloField::new(12);
        let a = k.zeta_pow(1).add(&k.from_rational(rat(2, 3))).add(&k.zeta_pow(5).scale(&rat(-1, 2)));
        let b = a.inv();
        assert_eq!(a.mul(&b), k.from_rational(rat(1, 1)));
        let k = CycloField::new(1);
        let a = k.from_rational(rat(-4, 7));
        assert_eq!(a.inv().to_rational(), Some(rat(-7, 4)));
    }

    #[test]
    fn minus_one_is_a_square_root_power() {
        let k = CycloField::new(2);
        assert_eq!(k.zeta_pow(1).to_rational(), Some(rat(-1, 1)));
        let k = CycloField::new(4);
        let i = k.zeta_pow(1);
        assert_eq!(i.mul(&i).to_rational(), Some(rat(-1, 1)));
    }
}
