//! Sparse multivariate polynomials over an exact field.

use std::collections::BTreeMap;

use crate::arith::{format_rational, Field, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> Poly<F> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(exponents: Vec<u32>, coeff: F) -> Self {
        let mut p = Poly::zero(exponents.len());
        if !coeff.is_zero() {
            p.terms.insert(exponents, coeff);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Vec<u32>, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, k: &F) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul(k));
        }
        out
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_term(e2, c.mul(&c.embed(&Rational::from_integer(e[var].into()))));
            }
        }
        out
    }

    /// The derivative along the direction `v`.
    pub fn directional(&self, v: &[Rational]) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (i, vi) in v.iter().enumerate() {
            if !Field::is_zero(vi) {
                let d = self.partial(i);
                for (e, c) in d.terms {
                    let k = c.embed(vi);
                    out.add_term(e, c.mul(&k));
                }
            }
        }
        out
    }

    /// Evaluation at a rational point; `zero` fixes the coefficient field.
    pub fn eval(&self, x: &[Rational], zero: &F) -> F {
        let mut acc = zero.clone();
        for (e, c) in &self.terms {
            let mut m = Rational::from_integer(1.into());
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    m *= xi;
                }
            }
            acc = acc.add(&c.mul(&c.embed(&m)));
        }
        acc
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let g = f(c);
            if !g.is_zero() {
                out.terms.insert(e.clone(), g);
            }
        }
        out
    }
}

impl Poly<Rational> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .rev()
                .map(|(e, c)| serde_json::json!({"exponents": e, "coeff": format_rational(c)}))
                .collect(),
        )
    }

    /// Human-readable form such as `x0^2 - 1/2*x1 + 1`.
    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| if p == 1 { format!("x{i}") } else { format!("x{i}^{p}") })
                .collect();
            let neg = c < &Rational::from_integer(0.into());
            let mag = if neg { -c.clone() } else { c.clone() };
            let one = mag == Rational::from_integer(1.into());
            let body = match (mono.is_empty(), one) {
                (true, _) => format!("{mag}"),
                (false, true) => mono.join("*"),
                (false, false) => format!("{mag}*{}", mono.join("*")),
            };
            if k == 0 {
                out.push_str(if neg { "-" } else { "" });
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

/// All exponent vectors in `nvars` variables of total degree at most
/// `max_degree`, highest degree first.
pub fn monomials(nvars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == nvars {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=budget {
            prefix.push(k);
            rec(nvars, budget - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, max_degree, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    out
}
