//! Sparse multivariate polynomials over the base field.
//!
//! These serve two roles: the numerator/denominator arithmetic of the
//! rational-function field K = k(t_1, ..., t_{N-1}), and the exponent-vector
//! bookkeeping shared with truncated series. The monomial order is graded
//! lexicographic with t_1 > t_2 > ...

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fields::coeff::{BaseField, Coeff};

/// An exponent vector under graded lexicographic order (t1 > t2 > ...).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, rhs: &Mono) -> Mono {
        debug_assert_eq!(self.0.len(), rhs.0.len());
        Mono(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, rhs: &Mono) -> bool {
        self.0.iter().zip(&rhs.0).all(|(a, b)| a <= b)
    }

    /// rhs / self, assuming divisibility.
    pub fn div_into(&self, rhs: &Mono) -> Mono {
        Mono(rhs.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `nvars` variables; keys carry no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    pub nvars: usize,
    pub field: BaseField,
    pub terms: BTreeMap<Mono, Coeff>,
}

impl Poly {
    pub fn zero(nvars: usize, field: BaseField) -> Self {
        Poly {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Coeff) -> Self {
        let field = c.field();
        let mut p = Poly::zero(nvars, field);
        if !c.is_zero() {
            p.terms.insert(Mono::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize, field: BaseField) -> Self {
        Poly::constant(nvars, field.one())
    }

    pub fn var(nvars: usize, i: usize, field: BaseField) -> Self {
        let mut p = Poly::zero(nvars, field);
        p.terms.insert(Mono::var(nvars, i), field.one());
        p
    }

    pub fn monomial(nvars: usize, m: Mono, c: Coeff) -> Self {
        let field = c.field();
        let mut p = Poly::zero(nvars, field);
        if !c.is_zero() {
            debug_assert_eq!(m.0.len(), nvars);
            p.terms.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.values().next().is_some_and(|c| c.is_one())
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Leading term in graded lex order.
    pub fn leading(&self) -> Option<(&Mono, &Coeff)> {
        self.terms.iter().next_back()
    }

    fn insert_add(&mut self, m: Mono, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars, self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_add(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars, self.field);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c);
        }
        out
    }

    /// Exact division; returns None when the division does not come out even.
    pub fn exact_div(&self, rhs: &Poly) -> Option<Poly> {
        if rhs.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quo = Poly::zero(self.nvars, self.field);
        let (lm, lc) = {
            let (m, c) = rhs.leading().unwrap();
            (m.clone(), c.clone())
        };
        let lc_inv = lc.inv().ok()?;
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading().unwrap();
                (m.clone(), c.clone())
            };
            if !lm.divides(&rm) {
                return None;
            }
            let qm = lm.div_into(&rm);
            let qc = rc.mul(&lc_inv);
            quo.insert_add(qm.clone(), qc.clone());
            let piece = Poly::monomial(self.nvars, qm, qc);
            rem = rem.sub(&piece.mul(rhs));
        }
        Some(quo)
    }

    pub fn eval_constants(&self) -> Option<Coeff> {
        if self.is_zero() {
            return Some(self.field.zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    /// Substitutes a constant for every variable (used by root trials).
    pub fn eval_at(&self, point: &[Coeff]) -> Coeff {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&point[i]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Views the polynomial as univariate in `var` with polynomial
    /// coefficients in the remaining variables (variable `var` removed).
    fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(self.nvars - 1, self.field); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut rest = m.0.clone();
            rest.remove(var);
            out[e].insert_add(Mono(rest), c.clone());
        }
        out
    }

    fn from_coeffs_in(nvars: usize, var: usize, coeffs: &[Poly], field: BaseField) -> Poly {
        let mut out = Poly::zero(nvars, field);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut full = m.0.clone();
                full.insert(var, e as u32);
                out.insert_add(Mono(full), v.clone());
            }
        }
        out
    }

    /// Monic GCD, implemented for at most two variables; `None` beyond that.
    pub fn gcd(&self, rhs: &Poly) -> Option<Poly> {
        debug_assert_eq!(self.nvars, rhs.nvars);
        if self.nvars > 2 {
            return None;
        }
        let g = gcd_rec(self, rhs)?;
        Some(make_monic(&g))
    }
}

fn make_monic(p: &Poly) -> Poly {
    match p.leading() {
        None => p.clone(),
        Some((_, lc)) => {
            let inv = lc.inv().expect("leading coefficient invertible");
            p.scale(&inv)
        }
    }
}

fn gcd_rec(a: &Poly, b: &Poly) -> Option<Poly> {
    if a.is_zero() {
        return Some(b.clone());
    }
    if b.is_zero() {
        return Some(a.clone());
    }
    match a.nvars {
        0 => Some(Poly::one(0, a.field)),
        1 => Some(gcd_univariate(a, b)),
        2 => gcd_bivariate(a, b),
        _ => None,
    }
}

/// Euclid on univariate polynomials over the field.
fn gcd_univariate(a: &Poly, b: &Poly) -> Poly {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    while !r1.is_zero() {
        let r2 = poly_rem_univ(&r0, &r1);
        r0 = r1;
        r1 = r2;
    }
    make_monic(&r0)
}

fn poly_rem_univ(a: &Poly, b: &Poly) -> Poly {
    let (lm, lc) = {
        let (m, c) = b.leading().unwrap();
        (m.clone(), c.clone())
    };
    let lc_inv = lc.inv().expect("field element invertible");
    let mut rem = a.clone();
    while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
        if rm.0[0] < lm.0[0] {
            break;
        }
        let qm = lm.div_into(&rm);
        let qc = rc.mul(&lc_inv);
        let piece = Poly::monomial(a.nvars, qm, qc);
        rem = rem.sub(&piece.mul(b));
    }
    rem
}

/// Primitive-part/content recursion: view as univariate in t1 over k[t2].
fn gcd_bivariate(a: &Poly, b: &Poly) -> Option<Poly> {
    let ca = content_in(a, 0);
    let cb = content_in(b, 0);
    let content_gcd = gcd_univariate(&ca, &cb);
    let pa = divide_coeffs(a, 0, &ca);
    let pb = divide_coeffs(b, 0, &cb);

    // Pseudo-remainder Euclid on primitive parts.
    let mut r0 = pa;
    let mut r1 = pb;
    loop {
        if r1.is_zero() {
            break;
        }
        if r0.degree_in(0) < r1.degree_in(0) {
            std::mem::swap(&mut r0, &mut r1);
            continue;
        }
        let r2 = pseudo_rem(&r0, &r1, 0)?;
        r0 = r1;
        r1 = primitive_part(&r2, 0);
    }
    let prim = primitive_part(&r0, 0);
    // Re-attach the content gcd (a univariate poly in t2).
    let content_lifted = lift_univariate(&content_gcd, 1, a.nvars, a.field);
    Some(prim.mul(&content_lifted))
}

fn content_in(p: &Poly, var: usize) -> Poly {
    let coeffs = p.coeffs_in(var);
    let mut g = Poly::zero(p.nvars - 1, p.field);
    for c in &coeffs {
        if !c.is_zero() {
            g = gcd_univariate(&g, c);
        }
    }
    g
}

fn divide_coeffs(p: &Poly, var: usize, content: &Poly) -> Poly {
    if content.is_one() || content.is_zero() {
        return p.clone();
    }
    let coeffs = p.coeffs_in(var);
    let divided: Vec<Poly> = coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                c.clone()
            } else {
                c.exact_div(content).expect("content divides coefficients")
            }
        })
        .collect();
    Poly::from_coeffs_in(p.nvars, var, &divided, p.field)
}

fn primitive_part(p: &Poly, var: usize) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, var);
    divide_coeffs(p, var, &c)
}

/// prem(a, b) in the main variable: lc(b)^(da-db+1) * a mod b.
fn pseudo_rem(a: &Poly, b: &Poly, var: usize) -> Option<Poly> {
    let da = a.degree_in(var);
    let db = b.degree_in(var);
    if da < db {
        return Some(a.clone());
    }
    let bc = b.coeffs_in(var);
    let lb = bc.last().unwrap().clone();
    let mut rem = a.clone();
    for _ in 0..=(da - db) {
        let dr = rem.degree_in(var);
        if rem.is_zero() || dr < db {
            break;
        }
        let rc = rem.coeffs_in(var);
        let lr = rc.last().unwrap().clone();
        // rem = lb*rem - lr * t^(dr-db) * b
        let shift = Mono::var(a.nvars, var);
        let mut shifted_b = b.clone();
        for _ in 0..(dr - db) {
            shifted_b = shifted_b.mul(&Poly::monomial(
                a.nvars,
                shift.clone(),
                a.field.one(),
            ));
        }
        let lb_full = lift_univariate(&lb, 1, a.nvars, a.field);
        let lr_full = lift_univariate(&lr, 1, a.nvars, a.field);
        rem = rem.mul(&lb_full).sub(&shifted_b.mul(&lr_full));
    }
    Some(rem)
}

/// Re-embeds a polynomial in the trailing variables into the full ring.
fn lift_univariate(p: &Poly, at: usize, nvars: usize, field: BaseField) -> Poly {
    let mut out = Poly::zero(nvars, field);
    for (m, c) in &p.terms {
        let mut full = vec![0u32; nvars];
        full[at..at + m.0.len()].copy_from_slice(&m.0);
        out.insert_add(Mono(full), c.clone());
    }
    out
}

/// Renders with variable names supplied by the caller.
pub fn format_poly(p: &Poly, names: &dyn Fn(usize) -> String) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (m, c) in p.terms.iter().rev() {
        let mono = format_mono(m, names);
        let cs = c.to_string();
        let (neg, mag) = match cs.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, cs),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&mono);
        } else {
            out.push_str(&mag);
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

pub fn format_mono(m: &Mono, names: &dyn Fn(usize) -> String) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 1 {
            parts.push(names(i));
        } else if e > 1 {
            parts.push(format!("{}^{}", names(i), e));
        }
    }
    parts.join("*")
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(self, &|i| format!("t{}", i + 1)))
    }
}

/// Checks that two polynomials live over the same field, for public APIs.
pub fn check_compatible(a: &Poly, b: &Poly) -> Result<()> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    if a.nvars != b.nvars {
        return Err(Error::NvarsMismatch(a.nvars, b.nvars));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> Poly {
        Poly::var(2, i, BaseField::Rationals)
    }

    #[test]
    fn grlex_order() {
        // t1^2 > t1 t2 > t2^2 > t1 > t2 > 1
        let m = |a, b| Mono(vec![a, b]);
        assert!(m(2, 0) > m(1, 1));
        assert!(m(1, 1) > m(0, 2));
        assert!(m(0, 2) > m(1, 0));
        assert!(m(1, 0) > m(0, 1));
        assert!(m(0, 1) > m(0, 0));
    }

    #[test]
    fn mul_and_exact_div() {
        let a = t(0).add(&t(1)); // t1 + t2
        let b = t(0).sub(&t(1)); // t1 - t2
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        // t1^2 - t2^2 is not divisible by t1
        assert!(prod.exact_div(&t(0)).is_none());
    }

    #[test]
    fn univariate_gcd() {
        // gcd(t1^2 - 1, t1 - 1) = t1 - 1
        let one = Poly::one(1, BaseField::Rationals);
        let t1 = Poly::var(1, 0, BaseField::Rationals);
        let a = t1.mul(&t1).sub(&one);
        let b = t1.sub(&one);
        assert_eq!(a.gcd(&b).unwrap(), b);
    }

    #[test]
    fn bivariate_gcd() {
        // gcd((t1+t2)*t1, (t1+t2)*t2) = t1+t2
        let g = t(0).add(&t(1));
        let a = g.mul(&t(0));
        let b = g.mul(&t(1));
        assert_eq!(a.gcd(&b).unwrap(), g);
    }

    #[test]
    fn gcd_over_f2() {
        // gcd(t^2 + t, t) = t over F_2
        let f = BaseField::Prime(2);
        let t1 = Poly::var(1, 0, f);
        let a = t1.mul(&t1).add(&t1);
        assert_eq!(a.gcd(&t1).unwrap(), t1);
    }

    #[test]
    fn display_poly() {
        let p = t(0).mul(&t(0)).sub(&Poly::one(2, BaseField::Rationals));
        assert_eq!(p.to_string(), "t1^2 - 1");
    }
}
