//! Polynomials Q(Z) over O_N, their homogeneous avatars P(X, Y), the
//! normalization Q_u, distinguishedness, the cofactor identity machinery in
//! the quotient ring O = O_{N+1}/(Q), and Hensel-Newton root lifting in the
//! completion.

mod hensel;
mod quotient;

pub use hensel::{
    hensel_lift, root_split, HatPoly, NewtonStep, RootSplit, SeedStrategy,
};
pub use quotient::{cofactor_expand, graded_order, CofactorExpansion, QuotElem, QuotientRing};

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::BaseField;
use crate::series::{OrderValue, Series};

/// Q(Z) = a_0 + a_1 Z + ... + a_d Z^d with series coefficients, a_d != 0.
#[derive(Clone, Debug)]
pub struct SeriesPoly {
    coeffs: Vec<Series>,
}

impl SeriesPoly {
    /// Builds from a_0..a_d; the leading coefficient must be nonzero at its
    /// precision and the degree at least 1.
    pub fn new(coeffs: Vec<Series>) -> Result<SeriesPoly> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidParameter(
                "polynomial degree must be at least 1".into(),
            ));
        }
        let lead = coeffs.last().unwrap();
        if lead.is_zero_at_precision() {
            return Err(Error::InvalidParameter(
                "leading coefficient is zero at its precision".into(),
            ));
        }
        let nvars = coeffs[0].nvars();
        let field = coeffs[0].field();
        for c in &coeffs {
            if c.nvars() != nvars {
                return Err(Error::NvarsMismatch(nvars, c.nvars()));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(SeriesPoly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &Series {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Series] {
        &self.coeffs
    }

    pub fn nvars(&self) -> usize {
        self.coeffs[0].nvars()
    }

    pub fn field(&self) -> BaseField {
        self.coeffs[0].field()
    }

    pub fn min_prec(&self) -> i64 {
        self.coeffs.iter().map(|c| c.prec()).min().unwrap()
    }

    /// True when the leading coefficient is exactly the constant 1.
    pub fn is_monic(&self) -> bool {
        let lead = self.coeffs.last().unwrap();
        lead.num_terms() == 1
            && lead
                .terms()
                .next()
                .is_some_and(|(m, c)| m.degree() == 0 && c.is_one())
    }

    /// Evaluates Q at a series argument (same ring).
    pub fn eval(&self, z: &Series) -> Result<Series> {
        // Horner from the top.
        let mut acc = self.coeffs.last().unwrap().clone();
        for a in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(z)?.add(a)?;
        }
        Ok(acc)
    }

    /// Formal derivative Q'(Z).
    pub fn derivative(&self) -> SeriesPoly {
        let field = self.field();
        let coeffs: Vec<Series> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a.scale(&field.from_i64(i as i64)))
            .collect();
        SeriesPoly { coeffs }
    }

    /// Applies the variable swap to every coefficient.
    pub fn swap_vars(&self, i: usize, j: usize) -> SeriesPoly {
        SeriesPoly {
            coeffs: self.coeffs.iter().map(|c| c.swap_vars(i, j)).collect(),
        }
    }
}

impl fmt::Display for SeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_at_precision() {
                continue;
            }
            let coeff = a.to_string();
            let coeff = coeff
                .rsplit_once(" @")
                .map(|(s, _)| s.to_string())
                .unwrap_or(coeff);
            let wrapped = if coeff.contains(['+', '-']) && coeff.len() > 1 {
                format!("({coeff})")
            } else {
                coeff
            };
            let part = match i {
                0 => wrapped,
                1 if wrapped == "1" => "Z".to_string(),
                1 => format!("{wrapped}*Z"),
                _ if wrapped == "1" => format!("Z^{i}"),
                _ => format!("{wrapped}*Z^{i}"),
            };
            parts.push(part);
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// The homogeneous reading P(X, Y) = a_0 Y^d + a_1 X Y^(d-1) + ... + a_d X^d
/// of a coefficient sequence; P(X, Y) = Y^d Q(X/Y) identically when the
/// leading coefficient is nonzero. Unlike `SeriesPoly`, a vanishing leading
/// (or trailing) coefficient is allowed: XY is a legitimate form.
#[derive(Clone, Debug)]
pub struct HomogForm {
    coeffs: Vec<Series>,
}

impl HomogForm {
    pub fn new(coeffs: Vec<Series>) -> Result<HomogForm> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidParameter(
                "homogeneous form must have degree at least 1".into(),
            ));
        }
        if coeffs.iter().all(|c| c.is_zero_at_precision()) {
            return Err(Error::InvalidParameter(
                "homogeneous form is zero at precision".into(),
            ));
        }
        Ok(HomogForm { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &Series {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Series] {
        &self.coeffs
    }

    pub fn nvars(&self) -> usize {
        self.coeffs[0].nvars()
    }

    pub fn field(&self) -> BaseField {
        self.coeffs[0].field()
    }

    pub fn swap_vars(&self, i: usize, j: usize) -> HomogForm {
        HomogForm {
            coeffs: self.coeffs.iter().map(|c| c.swap_vars(i, j)).collect(),
        }
    }
}

/// Which variable of P(X, Y) is set to 1 when reading it back as a
/// one-variable polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Dehomog {
    /// P(Z, 1): recovers the original Q(Z).
    YEqualsOne,
    /// P(1, Z): the reversed-coefficient polynomial.
    XEqualsOne,
}

pub fn homogenize(q: &SeriesPoly) -> HomogForm {
    HomogForm {
        coeffs: q.coeffs.clone(),
    }
}

/// Reads the form back as a polynomial in one variable. Trailing zero
/// coefficients (in the chosen reading) are trimmed; errors when the result
/// would have degree < 1.
pub fn dehomogenize(p: &HomogForm, which: Dehomog) -> Result<SeriesPoly> {
    let mut coeffs = p.coeffs.clone();
    if which == Dehomog::XEqualsOne {
        coeffs.reverse();
    }
    while coeffs.len() > 1 && coeffs.last().unwrap().is_zero_at_precision() {
        coeffs.pop();
    }
    SeriesPoly::new(coeffs)
}

/// P(x, y) = sum a_i x^i y^(d-i), with the usual truncated-product precision
/// propagation on every term.
pub fn eval_homog(p: &HomogForm, x: &Series, y: &Series) -> Result<Series> {
    let d = p.degree();
    // Powers are built once; their precision follows the product rule.
    let mut xpow = vec![Series::one(x.nvars(), x.field(), x.prec() + 8 * d as i64)];
    let mut ypow = vec![Series::one(y.nvars(), y.field(), y.prec() + 8 * d as i64)];
    for i in 1..=d {
        xpow.push(xpow[i - 1].mul(x)?);
        ypow.push(ypow[i - 1].mul(y)?);
    }
    let mut acc: Option<Series> = None;
    for i in 0..=d {
        let term = p.coeff(i).mul(&xpow[i])?.mul(&ypow[d - i])?;
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.unwrap())
}

/// Q_u(Z) = u^d a_d^(d-1) Q(Z / (u a_d)): the monic polynomial with
/// coefficients a_i u^(d-i) a_d^(d-i-1); distinguished once ord(u) is large
/// enough.
pub fn normalize_qu(q: &SeriesPoly, u: &Series) -> Result<SeriesPoly> {
    if u.is_zero_at_precision() {
        return Err(Error::InvalidParameter("u must be nonzero".into()));
    }
    let d = q.degree();
    let a_d = q.coeff(d);
    let mut coeffs = Vec::with_capacity(d + 1);
    for i in 0..d {
        // a_i * u^(d-i) * a_d^(d-i-1)
        let mut c = q.coeff(i).clone();
        c = c.mul(&u.pow((d - i) as u32)?)?;
        if d - i - 1 > 0 {
            c = c.mul(&a_d.pow((d - i - 1) as u32)?)?;
        }
        coeffs.push(c);
    }
    let one_prec = coeffs.iter().map(|c| c.prec()).min().unwrap_or(q.min_prec());
    coeffs.push(Series::one(q.nvars(), q.field(), one_prec));
    SeriesPoly::new(coeffs)
}

/// Chooses the smallest e >= 1 such that Q_{T_N^e} has initial form Z^d,
/// then returns (e, the normalized polynomial).
pub fn normalize_auto(q: &SeriesPoly) -> Result<(u32, SeriesPoly)> {
    let nvars = q.nvars();
    let max_ord: i64 = q
        .coeffs()
        .iter()
        .map(|c| c.ord().lower_bound())
        .max()
        .unwrap_or(0);
    let cap = (q.degree() as i64 * (max_ord + 1) + 2) as u32;
    for e in 1..=cap {
        let u = Series::var(nvars, nvars - 1, q.field(), q.min_prec()).pow(e)?;
        let qu = normalize_qu(q, &u)?;
        if is_distinguished(&qu).initial_is_zd {
            return Ok((e, qu));
        }
    }
    Err(Error::InvalidParameter(format!(
        "no exponent e <= {cap} makes Q_u distinguished; precision too small?"
    )))
}

/// What the initial form of Q(Z) looks like in the graded ring of O_{N+1}
/// with Z of weight 1.
#[derive(Clone, Debug)]
pub struct DistinguishedReport {
    /// deg Q.
    pub degree: usize,
    /// min_i (ord(a_i) + i), as far as precision can tell.
    pub initial_degree: OrderValue,
    /// The initial form is exactly (unit constant) * Z^d: ord(a_i) > d - i
    /// for every i < d and a_d is a unit. This is the precondition for the
    /// graded order formula.
    pub initial_is_zd: bool,
    /// Weierstrass dominance: a_d is a unit and ord(a_i) >= d - i for i < d.
    pub weakly_distinguished: bool,
    /// Some coefficient's truncation prevented certifying the predicates.
    pub insufficient_precision: bool,
    /// Human-readable rendering of the initial form contributors.
    pub initial_form: String,
}

/// Computes the initial form of Q for the (T_1..T_N, Z)-adic order and
/// reports whether it equals Z^d.
pub fn is_distinguished(q: &SeriesPoly) -> DistinguishedReport {
    let d = q.degree();
    let mut init_deg = OrderValue::AtLeast(i64::MAX / 2);
    for (i, a) in q.coeffs().iter().enumerate() {
        let contrib = match a.ord() {
            OrderValue::Exact(k) => OrderValue::Exact(k + i as i64),
            OrderValue::AtLeast(k) => OrderValue::AtLeast(k + i as i64),
        };
        init_deg = init_deg.min(contrib);
    }
    let lead_unit = q.coeff(d).ord() == OrderValue::Exact(0);
    let di = d as i64;
    let mut weakly = lead_unit;
    let mut strict = lead_unit;
    let mut uncertain = false;
    for (i, a) in q.coeffs().iter().enumerate().take(d) {
        let bound = di - i as i64;
        match a.ord() {
            OrderValue::Exact(k) => {
                if k < bound {
                    weakly = false;
                }
                if k <= bound {
                    strict = false;
                }
            }
            OrderValue::AtLeast(k) => {
                // ord >= k; certify only what the bound settles.
                if k < bound {
                    uncertain = true;
                    weakly = false;
                    strict = false;
                } else if k == bound {
                    uncertain = true;
                    strict = false;
                }
            }
        }
    }
    // Render the graded piece achieving the initial degree.
    let mut parts = Vec::new();
    if let OrderValue::Exact(deg) = init_deg {
        for (i, a) in q.coeffs().iter().enumerate() {
            if let OrderValue::Exact(k) = a.ord() {
                if k + i as i64 == deg {
                    let form = a.initial_form().expect("exact order");
                    let rendered = form.to_string();
                    let rendered = rendered
                        .rsplit_once(" @")
                        .map(|(s, _)| s.to_string())
                        .unwrap_or(rendered);
                    let z = match i {
                        0 => String::new(),
                        1 => "*Z".to_string(),
                        _ => format!("*Z^{i}"),
                    };
                    if rendered == "1" && !z.is_empty() {
                        parts.push(z[1..].to_string());
                    } else {
                        parts.push(format!("({rendered}){z}"));
                    }
                }
            }
        }
    }
    DistinguishedReport {
        degree: d,
        initial_degree: init_deg,
        initial_is_zd: strict,
        weakly_distinguished: weakly,
        insufficient_precision: uncertain,
        initial_form: if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::BaseField;
    use crate::series::random_series_seeded;

    fn q() -> BaseField {
        BaseField::Rationals
    }

    fn t(i: usize, prec: i64) -> Series {
        Series::var(2, i, q(), prec)
    }

    #[test]
    fn normalize_qu_degree_two_formula() {
        // (a0, a1, a2), u -> (a0 u^2 a2, a1 u, 1)
        let prec = 8;
        let a0 = random_series_seeded(2, prec, q(), 0.5, 1);
        let a1 = random_series_seeded(2, prec, q(), 0.5, 2);
        let a2 = Series::one(2, q(), prec).add(&t(0, prec)).unwrap();
        let u = t(1, prec);
        let qp = SeriesPoly::new(vec![a0.clone(), a1.clone(), a2.clone()]).unwrap();
        let qu = normalize_qu(&qp, &u).unwrap();
        assert!(qu.is_monic());
        let expect0 = a0.mul(&u.pow(2).unwrap()).unwrap().mul(&a2).unwrap();
        let expect1 = a1.mul(&u).unwrap();
        assert!(qu.coeff(0).agrees_with(&expect0.truncate(qu.coeff(0).prec())));
        assert!(qu.coeff(1).agrees_with(&expect1.truncate(qu.coeff(1).prec())));
    }

    #[test]
    fn normalize_qu_monic_unchanged() {
        let prec = 6;
        let a0 = t(0, prec);
        let a1 = t(1, prec);
        let a2 = Series::one(2, q(), prec);
        let qp = SeriesPoly::new(vec![a0.clone(), a1.clone(), a2]).unwrap();
        let qu = normalize_qu(&qp, &Series::one(2, q(), prec)).unwrap();
        assert!(qu.coeff(0).agrees_with(&a0.truncate(qu.coeff(0).prec())));
        assert!(qu.coeff(1).agrees_with(&a1.truncate(qu.coeff(1).prec())));
        assert!(qu.is_monic());
    }

    #[test]
    fn qu_becomes_distinguished() {
        // Q = T1 + T2 Z + Z^2 with u = T1: initial form of Q_u is Z^2.
        let prec = 8;
        let qp = SeriesPoly::new(vec![t(0, prec), t(1, prec), Series::one(2, q(), prec)]).unwrap();
        assert!(!is_distinguished(&qp).initial_is_zd);
        let qu = normalize_qu(&qp, &t(0, prec)).unwrap();
        let report = is_distinguished(&qu);
        assert!(report.initial_is_zd, "report: {report:?}");
        assert_eq!(report.initial_form, "Z^2");
    }

    #[test]
    fn distinguished_examples() {
        let prec = 10;
        // Z^d - T1^{d+1} is distinguished (d = 3 here).
        let d = 3usize;
        let mut coeffs = vec![t(0, prec).pow((d + 1) as u32).unwrap().truncate(prec).neg()];
        for _ in 1..d {
            coeffs.push(Series::zero(2, q(), prec));
        }
        coeffs.push(Series::one(2, q(), prec));
        let qp = SeriesPoly::new(coeffs).unwrap();
        let rep = is_distinguished(&qp);
        assert!(rep.initial_is_zd);
        assert!(rep.weakly_distinguished);

        // Z^2 - T1^2: initial form Z^2 - T1^2, not distinguished.
        let qp2 = SeriesPoly::new(vec![
            t(0, prec).pow(2).unwrap().truncate(prec).neg(),
            Series::zero(2, q(), prec),
            Series::one(2, q(), prec),
        ])
        .unwrap();
        let rep2 = is_distinguished(&qp2);
        assert!(!rep2.initial_is_zd);
        assert!(rep2.weakly_distinguished); // ord(a_0) = 2 >= d - 0 holds weakly
        assert!(rep2.initial_form.contains("Z^2"));

        // T1 + Z: degree-1 initial form T1 + Z, not Z^1.
        let qp3 = SeriesPoly::new(vec![t(0, prec), Series::one(2, q(), prec)]).unwrap();
        assert!(!is_distinguished(&qp3).initial_is_zd);
    }

    #[test]
    fn auto_normalization_finds_smallest_exponent() {
        let prec = 10;
        let qp = SeriesPoly::new(vec![t(0, prec), t(1, prec), Series::one(2, q(), prec)]).unwrap();
        let (e, qu) = normalize_auto(&qp).unwrap();
        assert!(is_distinguished(&qu).initial_is_zd);
        // e = 1 suffices: coefficients become (T1*T2^2, T2*T1... wait a1*u = T2^2)
        assert_eq!(e, 1);
    }

    #[test]
    fn homogenize_round_trip() {
        let prec = 8;
        // Q = Z^2 - T1^3 -> P = X^2 - T1^3 Y^2
        let a0 = t(0, prec).pow(3).unwrap().truncate(prec).neg();
        let qp = SeriesPoly::new(vec![a0, Series::zero(2, q(), prec), Series::one(2, q(), prec)])
            .unwrap();
        let p = homogenize(&qp);
        assert_eq!(p.degree(), 2);
        let back = dehomogenize(&p, Dehomog::YEqualsOne).unwrap();
        for i in 0..=2 {
            assert!(back.coeff(i).agrees_with(qp.coeff(i)));
        }
        let rev = dehomogenize(&p, Dehomog::XEqualsOne).unwrap();
        assert!(rev.coeff(2).agrees_with(qp.coeff(0)));
    }

    #[test]
    fn homogeneity_identity_randomized() {
        // P(x, y) agrees with y^d Q(x/y) evaluated through the completion.
        use crate::completion::{embed_blowup, Limits};
        let prec = 7;
        let limits = Limits::default();
        for seed in 0..6u64 {
            let a0 = random_series_seeded(2, prec, q(), 0.4, 100 + seed);
            let a1 = random_series_seeded(2, prec, q(), 0.4, 200 + seed);
            let a2 = Series::one(2, q(), prec);
            let qp = SeriesPoly::new(vec![a0, a1, a2]).unwrap();
            let p = homogenize(&qp);
            let x = random_series_seeded(2, prec, q(), 0.5, 300 + seed);
            let mut y = random_series_seeded(2, prec, q(), 0.5, 400 + seed);
            if y.is_zero_at_precision() {
                y = t(1, prec);
            }
            let lhs = embed_blowup(&eval_homog(&p, &x, &y).unwrap());
            // y^d * Q(x/y) in the completion
            let xe = embed_blowup(&x);
            let ye = embed_blowup(&y);
            let w = xe.div(&ye, &limits).unwrap();
            let hat = HatPoly::embed(&qp);
            let qv = hat.eval_limited(&w, &limits).unwrap();
            let rhs = qv
                .mul_limited(&ye.pow(2, &limits).unwrap(), &limits)
                .unwrap();
            let diff = lhs.sub(&rhs.truncate(lhs.tprec())).unwrap();
            assert!(
                diff.is_zero_at_precision(),
                "homogeneity failed at seed {seed}: {diff}"
            );
        }
    }

    #[test]
    fn eval_homog_examples() {
        let prec = 10;
        // P = X^2 - T1^3 Y^2 at (T1^2, T1) -> T1^4 - T1^5, order 4.
        let a0 = t(0, prec).pow(3).unwrap().truncate(prec).neg();
        let qp = SeriesPoly::new(vec![a0, Series::zero(2, q(), prec), Series::one(2, q(), prec)])
            .unwrap();
        let p = homogenize(&qp);
        let v = eval_homog(&p, &t(0, prec).pow(2).unwrap().truncate(prec), &t(0, prec)).unwrap();
        let expected = t(0, prec)
            .pow(4)
            .unwrap()
            .sub(&t(0, prec).pow(5).unwrap())
            .unwrap();
        assert!(v.agrees_with(&expected.truncate(v.prec())));
        assert_eq!(v.ord(), OrderValue::Exact(4));
        // (0, 0) -> 0
        let z = Series::zero(2, q(), prec);
        assert!(eval_homog(&p, &z, &z).unwrap().is_zero_at_precision());
        // P = XY at (T1, T2) -> T1 T2
        let pxy = HomogForm::new(vec![
            Series::zero(2, q(), prec),
            Series::one(2, q(), prec),
            Series::zero(2, q(), prec),
        ])
        .unwrap();
        let v2 = eval_homog(&pxy, &t(0, prec), &t(1, prec)).unwrap();
        assert!(v2.agrees_with(&t(0, prec).mul(&t(1, prec)).unwrap().truncate(v2.prec())));
    }
}
