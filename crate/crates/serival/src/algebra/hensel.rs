//! Newton iteration in the completion K[[T_N]] and root splitting
//! Q = R * prod (Z - z_k)^{n_k} by repeated lift-and-deflate.
//!
//! Seed discovery follows integral Newton-polygon slopes only: substitute
//! Z = T_N^m W, reduce mod T_N, and look for residual roots that are
//! constants of k or single ratio-monomials c * t^alpha found by bounded
//! trial. Non-integral slopes cannot carry roots in V_hat_N.

use num_rational::BigRational;

use crate::completion::{CompletedElement, Limits};
use crate::error::{Error, Result};
use crate::fields::{BaseField, Mono, Poly, RatFunc};
use crate::series::OrderValue;

use super::SeriesPoly;

/// A polynomial with coefficients in the completion.
#[derive(Clone, Debug)]
pub struct HatPoly {
    pub coeffs: Vec<CompletedElement>,
}

impl HatPoly {
    /// Embeds each series coefficient through the blow-up.
    pub fn embed(q: &SeriesPoly) -> HatPoly {
        HatPoly {
            coeffs: q
                .coeffs()
                .iter()
                .map(crate::completion::embed_blowup)
                .collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn nratio(&self) -> usize {
        self.coeffs[0].nratio()
    }

    pub fn field(&self) -> BaseField {
        self.coeffs[0].field()
    }

    /// Re-creates every coefficient with the given T_N-precision, treating
    /// the stored terms as exact data. Valid for embedded polynomials, whose
    /// coefficients are finite sums known exactly.
    pub fn assume_exact_to(&self, tprec: i64) -> HatPoly {
        HatPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    CompletedElement::from_coeffs(
                        c.nratio(),
                        c.field(),
                        tprec,
                        c.coeffs().map(|(j, r)| (*j, r.clone())),
                    )
                })
                .collect(),
        }
    }

    pub fn eval(&self, z: &CompletedElement) -> Result<CompletedElement> {
        self.eval_limited(z, &Limits::default())
    }

    pub fn eval_limited(&self, z: &CompletedElement, limits: &Limits) -> Result<CompletedElement> {
        let mut acc = self.coeffs.last().unwrap().clone();
        for a in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul_limited(z, limits)?.add(a)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> HatPoly {
        let field = self.field();
        let nratio = self.nratio();
        let coeffs: Vec<CompletedElement> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| {
                a.scale(&RatFunc::constant(nratio, field.from_i64(i as i64)))
                    .expect("same field")
            })
            .collect();
        HatPoly { coeffs }
    }

    /// Synthetic division by (Z - z); returns (quotient, remainder = Q(z)).
    pub fn deflate(
        &self,
        z: &CompletedElement,
        limits: &Limits,
    ) -> Result<(HatPoly, CompletedElement)> {
        let d = self.degree();
        let mut quot = vec![self.coeffs[d].clone()];
        // b_{i-1} = a_i + z * b_i, walking down.
        let mut carry = self.coeffs[d].clone();
        for i in (1..d).rev() {
            carry = self.coeffs[i].add(&carry.mul_limited(z, limits)?)?;
            quot.push(carry.clone());
        }
        let remainder = self.coeffs[0].add(&carry.mul_limited(z, limits)?)?;
        quot.reverse();
        Ok((HatPoly { coeffs: quot }, remainder))
    }
}

/// One Newton step's bookkeeping.
#[derive(Clone, Debug)]
pub struct NewtonStep {
    pub residual_order: OrderValue,
    pub derivative_order: i64,
}

/// Newton iteration z <- z - Q(z)/Q'(z) from a seed satisfying
/// ord Q(seed) > 2 ord Q'(seed). The residual order at least doubles
/// (minus the constant 2 ord Q') each step; the per-step log is returned
/// alongside the root.
pub fn hensel_lift(
    q: &HatPoly,
    seed: &CompletedElement,
    target_tprec: i64,
    limits: &Limits,
) -> Result<(CompletedElement, Vec<NewtonStep>)> {
    let work = q;
    let deriv = work.derivative();
    // The seed's stored digits are taken as exact; Newton refines the rest.
    let mut z = CompletedElement::from_coeffs(
        seed.nratio(),
        seed.field(),
        target_tprec,
        seed.coeffs().map(|(j, c)| (*j, c.clone())),
    );

    let r0 = work.eval_limited(&z, limits)?.ord_hat();
    if let OrderValue::AtLeast(_) = r0 {
        return Ok((z, vec![])); // already a root at precision
    }
    let d0 = deriv.eval_limited(&z, limits)?.ord_hat();
    let s0 = match d0 {
        OrderValue::Exact(s) => s,
        OrderValue::AtLeast(_) => return Err(Error::InseparableResidual),
    };
    match r0 {
        OrderValue::Exact(r) if r > 2 * s0 => {}
        _ => {
            return Err(Error::NewtonConditionFailed {
                residual: r0,
                derivative: d0,
            })
        }
    }

    let mut log = Vec::new();
    let max_iters = 4 * (64 - (target_tprec.max(2) as u64).leading_zeros() as i64) + 16;
    let mut last_r = r0.lower_bound();
    for _ in 0..max_iters {
        let qz = work.eval_limited(&z, limits)?;
        let r = qz.ord_hat();
        let dz = deriv.eval_limited(&z, limits)?;
        let s = match dz.ord_hat() {
            OrderValue::Exact(s) => s,
            OrderValue::AtLeast(_) => return Err(Error::InseparableResidual),
        };
        log.push(NewtonStep {
            residual_order: r,
            derivative_order: s,
        });
        match r {
            OrderValue::AtLeast(_) => return Ok((z, log)),
            OrderValue::Exact(rk) => {
                if rk >= target_tprec {
                    return Ok((z, log));
                }
                if log.len() > 1 && rk <= last_r {
                    return Err(Error::InvalidParameter(format!(
                        "Newton stalled: residual order {rk} did not improve past {last_r}"
                    )));
                }
                last_r = rk;
            }
        }
        let correction = qz.div(&dz, limits)?;
        z = z.sub(&correction)?;
    }
    Err(Error::InvalidParameter(
        "Newton iteration budget exhausted".into(),
    ))
}

/// How `root_split` finds its seeds.
#[derive(Clone, Debug)]
pub enum SeedStrategy {
    /// Integral Newton-polygon slopes with bounded residual-root trial.
    Auto,
    /// Caller-supplied seeds, lifted directly.
    UserSeeds(Vec<CompletedElement>),
}

/// The splitting Q = R * prod (Z - z_k)^{n_k} as far as discoverable roots
/// allow; `rootless_degree` is deg R.
#[derive(Clone, Debug)]
pub struct RootSplit {
    pub roots: Vec<(CompletedElement, usize)>,
    pub rootless_degree: usize,
    pub lifted_tprec: i64,
    /// Newton logs for each distinct root, in discovery order.
    pub logs: Vec<Vec<NewtonStep>>,
    /// Branches abandoned with a reason (non-integral slope, multiple
    /// residual root, ...), for the report.
    pub notes: Vec<String>,
}

/// Lifts every discoverable simple root of Q in V_hat_N to `tprec` digits
/// and reports multiplicities by repeated deflation.
pub fn root_split(
    q: &SeriesPoly,
    tprec: i64,
    strategy: &SeedStrategy,
    limits: &Limits,
) -> Result<RootSplit> {
    let hat = HatPoly::embed(q).assume_exact_to(tprec);
    let mut notes = Vec::new();
    let mut logs = Vec::new();
    let mut roots: Vec<(CompletedElement, usize)> = Vec::new();
    let mut current = hat;

    let user_seeds = match strategy {
        SeedStrategy::UserSeeds(seeds) => Some(seeds.clone()),
        SeedStrategy::Auto => None,
    };

    'outer: loop {
        if current.degree() == 0 {
            break;
        }
        let seeds = match &user_seeds {
            Some(seeds) => seeds
                .iter()
                .map(|s| {
                    CompletedElement::from_coeffs(
                        s.nratio(),
                        s.field(),
                        tprec,
                        s.coeffs().map(|(j, c)| (*j, c.clone())),
                    )
                })
                .collect(),
            None => auto_seeds(&current, &mut notes)?,
        };
        for seed in seeds {
            match hensel_lift(&current, &seed, tprec, limits) {
                Ok((z, log)) => {
                    // Converging back onto an already-extracted root (possible
                    // with repeated user seeds) is not a new branch.
                    if roots
                        .iter()
                        .any(|(r, _)| r.sub(&z).map(|d| d.is_zero_at_precision()).unwrap_or(false))
                    {
                        notes.push("seed converged to an already-extracted root".into());
                        continue;
                    }
                    logs.push(log);
                    let mut mult = 0usize;
                    loop {
                        let (quot, rem) = current.deflate(&z, limits)?;
                        match rem.ord_hat() {
                            OrderValue::Exact(k) if k < tprec / 2 => {
                                if mult == 0 {
                                    return Err(Error::DeflationResidual { residual_order: k });
                                }
                                break;
                            }
                            OrderValue::Exact(_) | OrderValue::AtLeast(_) => {
                                // Residual vanished to (half) working precision.
                                if rem.ord_hat().is_exact() {
                                    notes.push(format!(
                                        "deflation residual order {} absorbed at reduced precision",
                                        rem.ord_hat().lower_bound()
                                    ));
                                }
                                mult += 1;
                                current = quot;
                                if current.degree() == 0 {
                                    break;
                                }
                                // Does z still root the quotient? (multiplicity)
                                let again = current.eval_limited(&z, limits)?;
                                if again.ord_hat().is_exact() {
                                    break;
                                }
                            }
                        }
                    }
                    if mult > 0 {
                        roots.push((z, mult));
                        continue 'outer;
                    }
                }
                Err(Error::NewtonConditionFailed { residual, derivative }) => {
                    notes.push(format!(
                        "seed rejected: ord Q = {residual}, ord Q' = {derivative}"
                    ));
                }
                Err(Error::InseparableResidual) => {
                    notes.push("seed rejected: inseparable residual (derivative vanishes)".into());
                }
                Err(e) => return Err(e),
            }
        }
        break;
    }

    Ok(RootSplit {
        rootless_degree: current.degree(),
        roots,
        lifted_tprec: tprec,
        logs,
        notes,
    })
}

/// Integral-slope seed discovery on the current factor.
fn auto_seeds(f: &HatPoly, notes: &mut Vec<String>) -> Result<Vec<CompletedElement>> {
    let d = f.degree();
    let field = f.field();
    let nratio = f.nratio();
    let mut zero_seed = Vec::new();
    if f.coeffs[0].is_zero_at_precision() {
        // The constant term vanishes at precision: z = 0 is a root there.
        zero_seed.push(CompletedElement::zero(nratio, field, f.coeffs[0].tprec()));
    }
    // Support points (i, ord c_i) with exact orders.
    let pts: Vec<(i64, i64)> = f
        .coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.ord_hat().exact().map(|v| (i as i64, v)))
        .collect();
    if pts.len() < 2 {
        return Ok(zero_seed);
    }
    let mut slopes = Vec::new();
    for a in 0..pts.len() {
        for b in (a + 1)..pts.len() {
            let (i1, v1) = pts[a];
            let (i2, v2) = pts[b];
            let num = v1 - v2;
            let den = i2 - i1;
            if num < 0 {
                continue; // negative slope: root outside V_hat_N
            }
            if num % den != 0 {
                notes.push(format!(
                    "non-integral Newton slope {num}/{den}: no root in V_hat_N along this branch"
                ));
                continue;
            }
            let m = num / den;
            if !slopes.contains(&m) {
                slopes.push(m);
            }
        }
    }
    slopes.sort();

    let mut seeds = zero_seed;
    for m in slopes {
        // Residual polynomial: R_i = [T^(mu - m i)] c_i.
        let mu = f
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.ord_hat().lower_bound() + m * i as i64)
            .min()
            .unwrap();
        let residual: Vec<RatFunc> = f
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.coeff(mu - m * i as i64))
            .collect();
        for w0 in residual_root_trials(&residual, field, nratio)? {
            if w0.is_zero() {
                continue;
            }
            // A multiple residual root still gets attempted: it may be an
            // exact hit (e.g. a repeated linear factor); Newton itself
            // rejects the genuinely inseparable cases.
            let mut deriv_val = RatFunc::zero(nratio, field);
            let mut pw = RatFunc::one(nratio, field);
            for i in 1..=d {
                let coef = residual[i].scale(&field.from_i64(i as i64));
                deriv_val = deriv_val.add(&coef.mul(&pw)?)?;
                pw = pw.mul(&w0)?;
            }
            if deriv_val.is_zero() {
                notes.push(format!("multiple residual root at slope {m}"));
            }
            let tprec = f.coeffs[0].tprec();
            seeds.push(CompletedElement::monomial(nratio, m, w0, tprec));
        }
    }
    Ok(seeds)
}

/// Bounded trial set for residual roots in K: constants of k (all of F_p, a
/// short list of small rationals) and single monomials c * t^alpha with
/// |alpha| small. Anything outside this set needs user seeds.
fn residual_root_trials(
    residual: &[RatFunc],
    field: BaseField,
    nratio: usize,
) -> Result<Vec<RatFunc>> {
    let mut constants: Vec<crate::fields::Coeff> = Vec::new();
    match field {
        BaseField::Prime(p) => {
            for v in 1..p.min(256) {
                constants.push(field.from_i64(v as i64));
            }
        }
        BaseField::Rationals => {
            for (n, dnm) in [
                (1i64, 1i64),
                (-1, 1),
                (2, 1),
                (-2, 1),
                (1, 2),
                (-1, 2),
                (3, 1),
                (-3, 1),
                (1, 3),
                (-1, 3),
            ] {
                constants.push(
                    field
                        .from_rational(&BigRational::new(n.into(), dnm.into()))
                        .unwrap(),
                );
            }
        }
    }
    let mut monos: Vec<Mono> = vec![Mono::one(nratio)];
    if nratio > 0 {
        for var in 0..nratio {
            for e in 1..=3u32 {
                let mut m = vec![0u32; nratio];
                m[var] = e;
                monos.push(Mono(m));
            }
        }
    }
    let mut found = Vec::new();
    for m in &monos {
        for c in &constants {
            let w = RatFunc::from_poly(Poly::monomial(nratio, m.clone(), c.clone()));
            // Evaluate the residual polynomial at w.
            let mut val = RatFunc::zero(nratio, field);
            let mut pw = RatFunc::one(nratio, field);
            for r in residual {
                val = val.add(&r.mul(&pw)?)?;
                pw = pw.mul(&w)?;
            }
            if val.is_zero() && !found.contains(&w) {
                found.push(w);
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SeriesPoly;
    use crate::fields::BaseField;
    use crate::series::Series;

    fn q() -> BaseField {
        BaseField::Rationals
    }

    fn sp(coeffs: Vec<Series>) -> SeriesPoly {
        SeriesPoly::new(coeffs).unwrap()
    }

    /// Binomial-series oracle for sqrt(1 + T): coefficients C(1/2, k).
    fn sqrt_binomial_coeff(k: usize) -> BigRational {
        // C(1/2, k) = prod_{j=0..k-1} (1/2 - j) / k!
        let mut num = BigRational::from_integer(1.into());
        let half = BigRational::new(1.into(), 2.into());
        for j in 0..k {
            num *= &half - BigRational::from_integer((j as i64).into());
        }
        let mut fact = BigRational::from_integer(1.into());
        for j in 1..=k {
            fact *= BigRational::from_integer((j as i64).into());
        }
        num / fact
    }

    #[test]
    fn newton_matches_binomial_series() {
        // Q = Z^2 - (1+T) over Q, N = 1, seed 1 -> sqrt(1+T).
        let prec = 12;
        let one = Series::one(1, q(), prec);
        let a0 = one.add(&Series::var(1, 0, q(), prec)).unwrap().neg();
        let a1 = Series::zero(1, q(), prec);
        let a2 = one.clone();
        let qpoly = sp(vec![a0, a1, a2]);
        let hat = HatPoly::embed(&qpoly);
        let seed = CompletedElement::monomial(0, 0, RatFunc::one(0, q()), prec);
        let (z, log) = hensel_lift(&hat, &seed, prec, &Limits::default()).unwrap();
        assert!(!log.is_empty());
        for k in 0..prec as usize {
            let expected = sqrt_binomial_coeff(k);
            let got = z.coeff(k as i64);
            let expected_rf = RatFunc::constant(0, q().from_rational(&expected).unwrap());
            assert_eq!(got, expected_rf, "coefficient of T^{k}");
        }
    }

    #[test]
    fn residual_orders_strictly_increase() {
        // Z^2 - (T1^2 + T2^3), seed t1*T2.
        let prec = 32;
        let t1 = Series::var(2, 0, q(), prec);
        let t2 = Series::var(2, 1, q(), prec);
        let a0 = t1
            .pow(2)
            .unwrap()
            .add(&t2.pow(3).unwrap())
            .unwrap()
            .neg()
            .truncate(prec);
        let qpoly = sp(vec![a0, Series::zero(2, q(), prec), Series::one(2, q(), prec)]);
        let hat = HatPoly::embed(&qpoly);
        let seed = CompletedElement::monomial(
            1,
            1,
            RatFunc::from_poly(Poly::var(1, 0, q())),
            prec,
        );
        let (z, log) = hensel_lift(&hat, &seed, prec, &Limits::default()).unwrap();
        let final_res = hat.assume_exact_to(prec).eval(&z).unwrap();
        assert!(matches!(final_res.ord_hat(), OrderValue::AtLeast(k) if k >= prec));
        let mut last = 0i64;
        for step in &log {
            let r = step.residual_order.lower_bound();
            assert!(r > last || last == 0, "non-increasing residual");
            last = r;
        }
    }

    #[test]
    fn no_root_at_nonintegral_slope() {
        // Z^d - T1^{d+1} has no root in V_hat_N (slope (d+1)/d).
        let prec = 10;
        let d = 3usize;
        let t1 = Series::var(2, 0, q(), prec);
        let mut coeffs = vec![t1.pow((d + 1) as u32).unwrap().truncate(prec).neg()];
        for _ in 1..d {
            coeffs.push(Series::zero(2, q(), prec));
        }
        coeffs.push(Series::one(2, q(), prec));
        let qpoly = sp(coeffs);
        let split = root_split(&qpoly, prec, &SeedStrategy::Auto, &Limits::default()).unwrap();
        assert!(split.roots.is_empty());
        assert_eq!(split.rootless_degree, d);
        assert!(split
            .notes
            .iter()
            .any(|n| n.contains("non-integral Newton slope")));
    }

    #[test]
    fn splits_product_of_linear_factors() {
        // Q = (Z - T1)(Z - T2) = Z^2 - (T1+T2) Z + T1 T2 -> roots {t1*T2, T2}.
        let prec = 10;
        let t1 = Series::var(2, 0, q(), prec);
        let t2 = Series::var(2, 1, q(), prec);
        let a0 = t1.mul(&t2).unwrap().truncate(prec);
        let a1 = t1.add(&t2).unwrap().neg();
        let a2 = Series::one(2, q(), prec);
        let qpoly = sp(vec![a0, a1, a2]);
        let split = root_split(&qpoly, prec, &SeedStrategy::Auto, &Limits::default()).unwrap();
        assert_eq!(split.rootless_degree, 0);
        assert_eq!(split.roots.len(), 2);
        for (_, mult) in &split.roots {
            assert_eq!(*mult, 1);
        }
        // The two roots are the embeddings of T1 and T2.
        let e1 = crate::completion::embed_blowup(&t1);
        let e2 = crate::completion::embed_blowup(&t2);
        let found_t1 = split
            .roots
            .iter()
            .any(|(z, _)| z.sub(&e1.truncate(z.tprec())).unwrap().is_zero_at_precision());
        let found_t2 = split
            .roots
            .iter()
            .any(|(z, _)| z.sub(&e2.truncate(z.tprec())).unwrap().is_zero_at_precision());
        assert!(found_t1 && found_t2);
    }

    #[test]
    fn splits_squares_with_distinct_signs() {
        // Q = Z^2 - T1^2 -> roots {t1*T2, -t1*T2} over Q.
        let prec = 8;
        let t1 = Series::var(2, 0, q(), prec);
        let a0 = t1.pow(2).unwrap().truncate(prec).neg();
        let qpoly = sp(vec![a0, Series::zero(2, q(), prec), Series::one(2, q(), prec)]);
        let split = root_split(&qpoly, prec, &SeedStrategy::Auto, &Limits::default()).unwrap();
        assert_eq!(split.roots.len(), 2);
        assert_eq!(split.rootless_degree, 0);
    }

    #[test]
    fn rootless_quadratic_stays_whole() {
        // Z^2 + 1 over Q: no roots, q = 2.
        let prec = 6;
        let one = Series::one(2, q(), prec);
        let qpoly = sp(vec![one.clone(), Series::zero(2, q(), prec), one.clone()]);
        let split = root_split(&qpoly, prec, &SeedStrategy::Auto, &Limits::default()).unwrap();
        assert!(split.roots.is_empty());
        assert_eq!(split.rootless_degree, 2);
    }

    #[test]
    fn remultiplication_consistency() {
        // Re-multiplying the split reproduces Q at working precision.
        let prec = 10;
        let t1 = Series::var(2, 0, q(), prec);
        let t2 = Series::var(2, 1, q(), prec);
        let a0 = t1.mul(&t2).unwrap().truncate(prec);
        let a1 = t1.add(&t2).unwrap().neg();
        let a2 = Series::one(2, q(), prec);
        let qpoly = sp(vec![a0, a1, a2]);
        let split = root_split(&qpoly, prec, &SeedStrategy::Auto, &Limits::default()).unwrap();
        // Start from 1 and multiply the linear factors back together.
        let limits = Limits::default();
        let one = CompletedElement::monomial(1, 0, RatFunc::one(1, q()), prec);
        let mut acc = vec![one];
        for (z, mult) in &split.roots {
            for _ in 0..*mult {
                // acc(Z) *= (Z - z)
                let neg_z = z.neg();
                let mut next = vec![CompletedElement::zero(1, q(), prec); acc.len() + 1];
                for (i, c) in acc.iter().enumerate() {
                    next[i + 1] = next[i + 1].add(c).unwrap();
                    next[i] = next[i].add(&c.mul_limited(&neg_z, &limits).unwrap()).unwrap();
                }
                acc = next;
            }
        }
        let embedded = HatPoly::embed(&qpoly);
        for (i, c) in acc.iter().enumerate() {
            let diff = c.sub(&embedded.coeffs[i].truncate(c.tprec())).unwrap();
            assert!(
                diff.is_zero_at_precision(),
                "coefficient {i} differs: {diff}"
            );
        }
    }

    #[test]
    fn char2_square_found_with_multiplicity() {
        // Z^2 - T1^2 = (Z + T1)^2 over F_2: the exact root is recovered with
        // multiplicity 2 even though the residual root is multiple.
        let f = BaseField::Prime(2);
        let prec = 8;
        let t1 = Series::var(2, 0, f, prec);
        let a0 = t1.pow(2).unwrap().truncate(prec).neg();
        let qpoly = sp(vec![a0, Series::zero(2, f, prec), Series::one(2, f, prec)]);
        let split = root_split(&qpoly, prec, &SeedStrategy::Auto, &Limits::default()).unwrap();
        assert_eq!(split.roots.len(), 1);
        assert_eq!(split.roots[0].1, 2);
        assert_eq!(split.rootless_degree, 0);
        assert!(split.notes.iter().any(|n| n.contains("multiple residual root")));
    }

    #[test]
    fn inseparable_char2_newton_rejected() {
        // Z^2 - (T1^2 + T2^3) over F_2: derivative vanishes identically, and
        // the root is not exactly representable -> clear diagnostic, no root.
        let f = BaseField::Prime(2);
        let prec = 8;
        let t1 = Series::var(2, 0, f, prec);
        let t2 = Series::var(2, 1, f, prec);
        let a0 = t1
            .pow(2)
            .unwrap()
            .add(&t2.pow(3).unwrap())
            .unwrap()
            .truncate(prec)
            .neg();
        let qpoly = sp(vec![a0, Series::zero(2, f, prec), Series::one(2, f, prec)]);
        let split = root_split(&qpoly, prec, &SeedStrategy::Auto, &Limits::default()).unwrap();
        assert!(split.roots.is_empty());
        assert_eq!(split.rootless_degree, 2);
        assert!(split
            .notes
            .iter()
            .any(|n| n.contains("inseparable residual")));
    }
}
