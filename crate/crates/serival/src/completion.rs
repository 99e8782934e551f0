//! The valuation ring V_N, its completion V_hat_N = K[[T_N]] realized by the
//! blow-up substitution T_i = t_i * T_N, and the distance |z - x/y|.
//!
//! T_N is the uniformizer. A `CompletedElement` stores T_N-degree ->
//! rational-function coefficients; negative starting degrees are
//! representable (elements of the fraction field K_hat_N) and flagged as
//! lying outside V_hat_N rather than rejected.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{BaseField, Mono, Poly, RatFunc};
use crate::series::{OrderValue, Series};

/// Caps on rational-function coefficient growth; the blow-up coefficients
/// are the known cost center, so exceeding the cap aborts with a diagnostic
/// instead of thrashing.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub ratfunc_degree_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            ratfunc_degree_cap: 4096,
        }
    }
}

impl Limits {
    fn check(&self, r: &RatFunc) -> Result<()> {
        let d = r.max_degree();
        if d > self.ratfunc_degree_cap {
            Err(Error::DegreeBudgetExceeded {
                degree: d,
                cap: self.ratfunc_degree_cap,
            })
        } else {
            Ok(())
        }
    }
}

/// A fraction x/y of series; lies in V_N exactly when ord(x) >= ord(y).
#[derive(Clone, Debug)]
pub struct Fraction {
    pub num: Series,
    pub den: Series,
}

impl Fraction {
    pub fn new(num: Series, den: Series) -> Result<Fraction> {
        if den.is_zero_at_precision() {
            return Err(Error::DivisorTruncatedZero);
        }
        Ok(Fraction { num, den })
    }

    /// The V_N membership criterion ord(num) >= ord(den). `None` when the
    /// numerator order is only bounded below and the bound does not settle
    /// the comparison (it always does here, since ord(num) >= prec > ord(den)).
    pub fn in_valuation_ring(&self) -> bool {
        let od = self.den.ord().exact().expect("den nonzero at precision");
        self.num.ord().lower_bound() >= od
    }
}

/// A truncated element of V_hat_N (or of its fraction field when the leading
/// degree is negative): T_N-degree -> coefficient in K, plus T_N-precision.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompletedElement {
    nratio: usize,
    field: BaseField,
    tprec: i64,
    coeffs: BTreeMap<i64, RatFunc>,
}

impl CompletedElement {
    pub fn zero(nratio: usize, field: BaseField, tprec: i64) -> CompletedElement {
        CompletedElement {
            nratio,
            field,
            tprec,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i64, RatFunc)>>(
        nratio: usize,
        field: BaseField,
        tprec: i64,
        coeffs: I,
    ) -> CompletedElement {
        let mut e = CompletedElement::zero(nratio, field, tprec);
        for (j, c) in coeffs {
            e.insert_add(j, c);
        }
        e
    }

    /// The constant c * T_N^j.
    pub fn monomial(nratio: usize, j: i64, c: RatFunc, tprec: i64) -> CompletedElement {
        let field = c.field();
        let mut e = CompletedElement::zero(nratio, field, tprec);
        e.insert_add(j, c);
        e
    }

    pub fn nratio(&self) -> usize {
        self.nratio
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn tprec(&self) -> i64 {
        self.tprec
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&i64, &RatFunc)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, j: i64) -> RatFunc {
        self.coeffs
            .get(&j)
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(self.nratio, self.field))
    }

    fn insert_add(&mut self, j: i64, c: RatFunc) {
        if c.is_zero() || j >= self.tprec {
            return;
        }
        match self.coeffs.entry(j) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c).expect("same field");
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Extension of the m-adic order to the completion.
    pub fn ord_hat(&self) -> OrderValue {
        match self.coeffs.keys().next() {
            Some(&j) => OrderValue::Exact(j),
            None => OrderValue::AtLeast(self.tprec),
        }
    }

    /// Lies in V_hat_N (as opposed to its fraction field) when the leading
    /// degree is nonnegative.
    pub fn is_integral(&self) -> bool {
        self.ord_hat().lower_bound() >= 0
    }

    fn check_compatible(&self, rhs: &CompletedElement) -> Result<()> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.nratio != rhs.nratio {
            return Err(Error::NvarsMismatch(self.nratio, rhs.nratio));
        }
        Ok(())
    }

    pub fn truncate(&self, tprec: i64) -> CompletedElement {
        let tprec = tprec.min(self.tprec);
        let mut out = CompletedElement::zero(self.nratio, self.field, tprec);
        for (&j, c) in &self.coeffs {
            out.insert_add(j, c.clone());
        }
        out
    }

    pub fn add(&self, rhs: &CompletedElement) -> Result<CompletedElement> {
        self.check_compatible(rhs)?;
        let mut out = self.truncate(rhs.tprec);
        for (&j, c) in &rhs.coeffs {
            out.insert_add(j, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> CompletedElement {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, rhs: &CompletedElement) -> Result<CompletedElement> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &CompletedElement) -> Result<CompletedElement> {
        self.mul_limited(rhs, &Limits::default())
    }

    pub fn mul_limited(&self, rhs: &CompletedElement, limits: &Limits) -> Result<CompletedElement> {
        self.check_compatible(rhs)?;
        let oa = self.ord_hat().lower_bound();
        let ob = rhs.ord_hat().lower_bound();
        let tprec = (self.tprec + ob)
            .min(rhs.tprec + oa)
            .min(self.tprec + rhs.tprec);
        let mut out = CompletedElement::zero(self.nratio, self.field, tprec);
        for (&ja, ca) in &self.coeffs {
            for (&jb, cb) in &rhs.coeffs {
                if ja + jb >= tprec {
                    continue;
                }
                let prod = ca.mul(cb)?;
                limits.check(&prod)?;
                out.insert_add(ja + jb, prod);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RatFunc) -> Result<CompletedElement> {
        let mut out = CompletedElement::zero(self.nratio, self.field, self.tprec);
        for (&j, v) in &self.coeffs {
            out.insert_add(j, v.mul(c)?);
        }
        Ok(out)
    }

    /// Multiplicative inverse; requires an exact leading coefficient.
    pub fn inv(&self, limits: &Limits) -> Result<CompletedElement> {
        let j0 = match self.ord_hat() {
            OrderValue::Exact(j) => j,
            OrderValue::AtLeast(_) => return Err(Error::DivisorTruncatedZero),
        };
        // self = T^j0 * (c0 + u), ord(u) >= 1 after rescaling.
        let c0 = self.coeff(j0);
        let c0_inv = c0.inv()?;
        // Unit part shifted to start at degree 0, with precision tprec - j0.
        let unit_prec = self.tprec - j0;
        let mut unit = CompletedElement::zero(self.nratio, self.field, unit_prec);
        for (&j, c) in &self.coeffs {
            unit.insert_add(j - j0, c.mul(&c0_inv)?);
        }
        // Geometric inversion of 1 + u: iterate inv_{n+1} = inv_n * (2 - unit*inv_n)
        // degree by degree; a straightforward triangular solve is clearer here.
        let mut inv_unit = CompletedElement::zero(self.nratio, self.field, unit_prec);
        inv_unit.insert_add(0, RatFunc::one(self.nratio, self.field));
        for n in 1..unit_prec {
            // coefficient of T^n in unit * inv must vanish
            let mut acc = RatFunc::zero(self.nratio, self.field);
            for (&j, c) in &unit.coeffs {
                if j >= 1 && j <= n {
                    let other = inv_unit.coeff(n - j);
                    if !other.is_zero() {
                        acc = acc.add(&c.mul(&other)?)?;
                    }
                }
            }
            let coeff_n = acc.neg();
            limits.check(&coeff_n)?;
            inv_unit.insert_add(n, coeff_n);
        }
        // inverse = T^{-j0} * c0^{-1} * inv_unit
        let mut out = CompletedElement::zero(self.nratio, self.field, unit_prec - j0);
        for (&j, c) in &inv_unit.coeffs {
            out.insert_add(j - j0, c.mul(&c0_inv)?);
        }
        Ok(out)
    }

    pub fn div(&self, rhs: &CompletedElement, limits: &Limits) -> Result<CompletedElement> {
        let rhs_inv = rhs.inv(limits)?;
        self.mul_limited(&rhs_inv, limits)
    }

    /// ord_hat(self - other) without materializing the difference: walks the
    /// coefficient maps in degree order and stops at the first disagreement.
    pub fn ord_of_difference(&self, other: &CompletedElement) -> Result<OrderValue> {
        self.check_compatible(other)?;
        let tprec = self.tprec.min(other.tprec);
        let mut a = self.coeffs.iter().filter(|(j, _)| **j < tprec).peekable();
        let mut b = other.coeffs.iter().filter(|(j, _)| **j < tprec).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ok(OrderValue::AtLeast(tprec)),
                (Some((&j, _)), None) => return Ok(OrderValue::Exact(j)),
                (None, Some((&j, _))) => return Ok(OrderValue::Exact(j)),
                (Some((&ja, ca)), Some((&jb, cb))) => {
                    if ja < jb {
                        return Ok(OrderValue::Exact(ja));
                    }
                    if jb < ja {
                        return Ok(OrderValue::Exact(jb));
                    }
                    if ca != cb {
                        return Ok(OrderValue::Exact(ja));
                    }
                    a.next();
                    b.next();
                }
            }
        }
    }

    pub fn pow(&self, e: u32, limits: &Limits) -> Result<CompletedElement> {
        let mut acc = CompletedElement::monomial(
            self.nratio,
            0,
            RatFunc::one(self.nratio, self.field),
            self.tprec + 16 * e as i64,
        );
        for _ in 0..e {
            acc = acc.mul_limited(self, limits)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for CompletedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 @{}", self.tprec);
        }
        let mut parts = Vec::new();
        for (&j, c) in &self.coeffs {
            let coeff = c.to_string();
            let wrapped = if coeff.contains(['+', '-', '/', '*']) && coeff.len() > 1 {
                format!("({coeff})")
            } else {
                coeff
            };
            let part = match j {
                0 => wrapped,
                1 => {
                    if wrapped == "1" {
                        "TN".to_string()
                    } else {
                        format!("{wrapped}*TN")
                    }
                }
                _ => {
                    if wrapped == "1" {
                        format!("TN^{j}")
                    } else {
                        format!("{wrapped}*TN^{j}")
                    }
                }
            };
            parts.push(part);
        }
        write!(f, "{} @{}", parts.join(" + "), self.tprec)
    }
}

/// The blow-up embedding O_N -> V_hat_N: substitutes T_i = t_i * T_N for
/// i < N, sending each homogeneous degree-m piece to T_N^m times a
/// polynomial of degree <= m in the ratio variables. Order is preserved.
/// For N = 1 the embedding is the identity (no ratio variables).
pub fn embed_blowup(s: &Series) -> CompletedElement {
    let nratio = s.nvars().saturating_sub(1);
    let mut out = CompletedElement::zero(nratio, s.field(), s.prec());
    for (m, c) in s.terms() {
        let deg = m.degree();
        // T1^e1 ... TN^eN  ->  t1^e1 ... t_{N-1}^e_{N-1} * TN^deg
        let tpart = Mono(m.0[..nratio].to_vec());
        let poly = Poly::monomial(nratio, tpart, c.clone());
        out.insert_add(deg, RatFunc::from_poly(poly));
    }
    out
}

/// Attempts to express the element as x / T_N^D with x in O_N. Succeeds
/// exactly when every coefficient is polynomial; D is the least shift making
/// all coefficient degrees fit the homogeneity bound deg c_j <= j + D.
/// Returns the coprime pair (x, T_N^D). Used to recognize rational roots.
pub fn unembed_as_fraction(e: &CompletedElement, nvars: usize, prec: i64) -> Option<(Series, Series)> {
    if e.is_zero_at_precision() {
        let zero = Series::zero(nvars, e.field, prec);
        let one = Series::one(nvars, e.field, prec);
        return Some((zero, one));
    }
    let mut shift = 0i64;
    for (&j, c) in &e.coeffs {
        if !c.is_polynomial() {
            return None;
        }
        let excess = c.num().total_degree() - j;
        shift = shift.max(excess);
    }
    if shift < 0 {
        shift = 0;
    }
    let mut num = Series::zero(nvars, e.field, prec);
    for (&j, c) in &e.coeffs {
        for (m, v) in &c.num().terms {
            // t-exponents m, total T_N-degree j + shift: the T_N exponent is
            // j + shift - deg(m) >= 0 by choice of shift.
            let tn_exp = (j + shift - m.degree()) as u32;
            let mut exps = m.0.clone();
            exps.push(tn_exp);
            num = num
                .add(&Series::monomial(nvars, Mono(exps), v.clone(), prec))
                .expect("same field");
        }
    }
    let den = Series::monomial(
        nvars,
        Mono({
            let mut v = vec![0u32; nvars];
            v[nvars - 1] = shift as u32;
            v
        }),
        e.field.one(),
        prec,
    );
    Some((num, den))
}

/// ord_hat(z - embed(x)/embed(y)): the log-scale distance of Theorem-style
/// inequalities, computed at the achievable precision.
pub fn distance(z: &CompletedElement, x: &Series, y: &Series, limits: &Limits) -> Result<OrderValue> {
    if y.is_zero_at_precision() {
        return Err(Error::DivisorTruncatedZero);
    }
    let xe = embed_blowup(x);
    let ye = embed_blowup(y);
    let q = xe.div(&ye, limits)?;
    let diff = z.sub(&q)?;
    Ok(diff.ord_hat())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::random_series_seeded;

    fn q() -> BaseField {
        BaseField::Rationals
    }

    fn t(i: usize, prec: i64) -> Series {
        Series::var(2, i, q(), prec)
    }

    #[test]
    fn embed_direct_substitution() {
        // N=2: T1^2 + T2^3 -> t1^2*T2^2 + T2^3
        let s = t(0, 6)
            .pow(2)
            .unwrap()
            .truncate(6)
            .add(&t(1, 6).pow(3).unwrap().truncate(6))
            .unwrap();
        let e = embed_blowup(&s);
        assert_eq!(e.tprec(), 6);
        let t1sq = Poly::monomial(1, Mono(vec![2]), q().one());
        assert_eq!(e.coeff(2), RatFunc::from_poly(t1sq));
        assert!(e.coeff(3).is_one());
        assert_eq!(e.ord_hat(), OrderValue::Exact(2));
    }

    #[test]
    fn embed_linear_combination() {
        // T1 - T2 -> (t1 - 1) * T2
        let s = t(0, 5).sub(&t(1, 5)).unwrap();
        let e = embed_blowup(&s);
        let t1 = Poly::var(1, 0, q());
        let expected = RatFunc::from_poly(t1.sub(&Poly::one(1, q())));
        assert_eq!(e.coeff(1), expected);
        assert_eq!(e.coeffs().count(), 1);
    }

    #[test]
    fn embed_three_variables() {
        // N=3: T1*T2 -> t1*t2*T3^2
        let s = Series::var(3, 0, q(), 5)
            .mul(&Series::var(3, 1, q(), 5))
            .unwrap();
        let e = embed_blowup(&s);
        let m = Poly::monomial(2, Mono(vec![1, 1]), q().one());
        assert_eq!(e.coeff(2), RatFunc::from_poly(m));
    }

    #[test]
    fn ord_hat_matches_ord_randomized() {
        for seed in 0..25u64 {
            let s = random_series_seeded(2, 7, q(), 0.5, seed);
            assert_eq!(embed_blowup(&s).ord_hat(), s.ord());
        }
        let z = Series::zero(2, q(), 6);
        assert_eq!(embed_blowup(&z).ord_hat(), OrderValue::AtLeast(6));
    }

    #[test]
    fn division_the_base_ring_lacks() {
        // embed(T1)/embed(T2) = t1, a unit of V_hat_2
        let limits = Limits::default();
        let quotient = embed_blowup(&t(0, 6)).div(&embed_blowup(&t(1, 6)), &limits).unwrap();
        assert_eq!(quotient.ord_hat(), OrderValue::Exact(0));
        let t1 = RatFunc::from_poly(Poly::var(1, 0, q()));
        assert_eq!(quotient.coeff(0), t1);
        assert!(quotient.is_integral());
        // embed(T2)/embed(T1) = 1/t1
        let rev = embed_blowup(&t(1, 6)).div(&embed_blowup(&t(0, 6)), &limits).unwrap();
        assert_eq!(rev.coeff(0), t1.inv().unwrap());
    }

    #[test]
    fn embedding_is_ring_homomorphism() {
        let limits = Limits::default();
        for seed in 0..20u64 {
            let a = random_series_seeded(2, 6, q(), 0.5, seed);
            let b = random_series_seeded(2, 6, q(), 0.5, seed + 1000);
            let sum = embed_blowup(&a.add(&b).unwrap());
            assert_eq!(sum, embed_blowup(&a).add(&embed_blowup(&b)).unwrap());
            let prod = embed_blowup(&a.mul(&b).unwrap());
            let eprod = embed_blowup(&a)
                .mul_limited(&embed_blowup(&b), &limits)
                .unwrap();
            // Same class at the shared precision.
            let d = prod.sub(&eprod.truncate(prod.tprec())).unwrap();
            assert!(d.is_zero_at_precision());
        }
    }

    #[test]
    fn product_identity_t1_squared() {
        // embed(T1-T2)*embed(T1+T2) = embed(T1^2-T2^2)
        let a = t(0, 8).sub(&t(1, 8)).unwrap();
        let b = t(0, 8).add(&t(1, 8)).unwrap();
        let lhs = embed_blowup(&a).mul(&embed_blowup(&b)).unwrap();
        let rhs = embed_blowup(&a.mul(&b).unwrap());
        assert_eq!(lhs.truncate(rhs.tprec()), rhs);
    }

    #[test]
    fn valuation_ring_criterion_matches_embedding() {
        for seed in 100..130u64 {
            let x = random_series_seeded(2, 6, q(), 0.4, seed);
            let y = random_series_seeded(2, 6, q(), 0.4, seed + 777);
            if y.is_zero_at_precision() {
                continue;
            }
            let frac = Fraction::new(x.clone(), y.clone()).unwrap();
            let quotient = embed_blowup(&x)
                .div(&embed_blowup(&y), &Limits::default())
                .unwrap();
            assert_eq!(frac.in_valuation_ring(), quotient.ord_hat().lower_bound() >= 0);
        }
    }

    #[test]
    fn distance_exact_hit_and_misses() {
        let limits = Limits::default();
        // z = embed(T1)/embed(T2), x = T1, y = T2: exact hit at full precision.
        let z = embed_blowup(&t(0, 6)).div(&embed_blowup(&t(1, 6)), &limits).unwrap();
        let d = distance(&z, &t(0, 6), &t(1, 6), &limits).unwrap();
        assert!(matches!(d, OrderValue::AtLeast(_)));
        // z = t1*T2 (= T1), x = 0, y = 1 -> ord 1
        let z2 = embed_blowup(&t(0, 6));
        let d2 = distance(
            &z2,
            &Series::zero(2, q(), 6),
            &Series::one(2, q(), 6),
            &limits,
        )
        .unwrap();
        assert_eq!(d2, OrderValue::Exact(1));
    }

    #[test]
    fn unembed_recognizes_rational_elements() {
        // t1 = T1/T2
        let t1c = CompletedElement::monomial(1, 0, RatFunc::from_poly(Poly::var(1, 0, q())), 6);
        let (u, v) = unembed_as_fraction(&t1c, 2, 6).unwrap();
        assert!(u.agrees_with(&t(0, 6)));
        assert!(v.agrees_with(&t(1, 6)));
        // t1*T2 = T1 needs no denominator
        let e = embed_blowup(&t(0, 6));
        let (u2, v2) = unembed_as_fraction(&e, 2, 6).unwrap();
        assert!(u2.agrees_with(&t(0, 6)));
        assert!(v2.agrees_with(&Series::one(2, q(), 6)));
        // 1/t1 is not polynomial-coefficient: rejected
        let bad = CompletedElement::monomial(
            1,
            0,
            RatFunc::from_poly(Poly::var(1, 0, q())).inv().unwrap(),
            6,
        );
        assert!(unembed_as_fraction(&bad, 2, 6).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let limits = Limits::default();
        let a = embed_blowup(
            &Series::one(2, q(), 8)
                .add(&t(0, 8))
                .unwrap()
                .mul(&t(1, 8))
                .unwrap(),
        );
        let inv = a.inv(&limits).unwrap();
        assert_eq!(inv.ord_hat(), OrderValue::Exact(-1));
        assert!(!inv.is_integral());
        let prod = a.mul_limited(&inv, &limits).unwrap();
        let one = CompletedElement::monomial(1, 0, RatFunc::one(1, q()), prod.tprec());
        assert!(prod.sub(&one).unwrap().is_zero_at_precision());
    }
}
