//! The rational-function field K = k(t_1, ..., t_{N-1}).
//!
//! Canonical form: numerator and denominator coprime (polynomial GCD, for at
//! most two ratio variables) and denominator with leading coefficient 1 under
//! graded lex. Beyond two variables the GCD reduction is skipped and equality
//! falls back to cross-multiplication.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::coeff::{BaseField, Coeff};
use crate::fields::poly::{check_compatible, format_poly, Poly};

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Canonicalizes num/den. Errors when den = 0.
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        check_compatible(&num, &den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZeroInK);
        }
        let mut num = num;
        let mut den = den;
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: Poly::one(den.nvars, den.field),
            });
        }
        if num.nvars <= 2 {
            if let Some(g) = num.gcd(&den) {
                if !g.is_one() {
                    num = num.exact_div(&g).expect("gcd divides numerator");
                    den = den.exact_div(&g).expect("gcd divides denominator");
                }
            }
        }
        // Monic denominator under graded lex.
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = lc.inv()?;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(num: Poly) -> RatFunc {
        let den = Poly::one(num.nvars, num.field);
        RatFunc { num, den }
    }

    pub fn zero(nvars: usize, field: BaseField) -> RatFunc {
        RatFunc::from_poly(Poly::zero(nvars, field))
    }

    pub fn one(nvars: usize, field: BaseField) -> RatFunc {
        RatFunc::from_poly(Poly::one(nvars, field))
    }

    pub fn constant(nvars: usize, c: Coeff) -> RatFunc {
        RatFunc::from_poly(Poly::constant(nvars, c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars
    }

    pub fn field(&self) -> BaseField {
        self.num.field
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// True when the denominator is 1, i.e. the element is polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn max_degree(&self) -> usize {
        self.num.total_degree().max(self.den.total_degree()) as usize
    }

    pub fn add(&self, rhs: &RatFunc) -> Result<RatFunc> {
        // a/b + c/d = (ad + cb)/bd
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        RatFunc::new(num, den)
    }

    pub fn sub(&self, rhs: &RatFunc) -> Result<RatFunc> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZeroInK);
        }
        RatFunc::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZeroInK);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Coeff) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.nvars(), self.field());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// The constant value, when the element is a constant.
    pub fn as_constant(&self) -> Option<Coeff> {
        if !self.den.is_one() {
            return None;
        }
        self.num.eval_constants()
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars() <= 2 {
            // Canonical forms compare structurally.
            self.num == other.num && self.den == other.den
        } else {
            self.num.mul(&other.den) == other.num.mul(&self.den)
        }
    }
}

impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |i: usize| format!("t{}", i + 1);
        if self.den.is_one() {
            write!(f, "{}", format_poly(&self.num, &names))
        } else {
            let num = format_poly(&self.num, &names);
            let den = format_poly(&self.den, &names);
            let num = if self.num.terms.len() > 1 {
                format!("({num})")
            } else {
                num
            };
            let den = if self.den.terms.len() > 1 {
                format!("({den})")
            } else {
                den
            };
            write!(f, "{num}/{den}")
        }
    }
}
