//! Literal syntax for field elements, series, polynomials, and completed
//! elements, shared by the CLI, config files, and report witnesses.
//!
//! Grammar (informal):
//!   expr   := term (('+' | '-') term)*
//!   term   := factor (('*' | '/') factor)*
//!   factor := '-'* atom ('^' exponent)?
//!   atom   := integer | ident | '(' expr ')'
//!   exponent := '-'? integer | 'k' | '(' affine-in-k ')'
//!
//! Identifiers: T1..TN (or T for N = 1) in series and polynomial literals,
//! Z for the polynomial variable, X and Y for homogeneous forms, t1.. for
//! ratio variables, TN for the uniformizer of completed elements. A trailing
//! `@p` annotates the precision. Exponents may be affine in the family
//! parameter k, e.g. `T1^(k+1)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;

use crate::algebra::{HomogForm, SeriesPoly};
use crate::completion::CompletedElement;
use crate::error::{Error, Result};
use crate::fields::{BaseField, Poly, RatFunc};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        }
    }
    Ok(out)
}

/// Exponent that may depend affinely on the family parameter k.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineExp {
    pub k_coeff: i64,
    pub constant: i64,
}

impl AffineExp {
    fn constant(c: i64) -> Self {
        AffineExp {
            k_coeff: 0,
            constant: c,
        }
    }

    pub fn eval(&self, k: Option<i64>) -> Result<i64> {
        if self.k_coeff == 0 {
            return Ok(self.constant);
        }
        match k {
            Some(kv) => Ok(self.k_coeff * kv + self.constant),
            None => Err(Error::InvalidParameter(
                "literal uses the family parameter k but no k was supplied".into(),
            )),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Expr {
    Num(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, AffineExp),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn err_here(&self, msg: &str) -> Error {
        let pos = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|(p, _)| *p)
            .unwrap_or(0);
        Error::Parse {
            pos,
            msg: msg.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            let inner = self.factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let mut atom = match self.bump() {
            Some(Tok::Int(n)) => Expr::Num(n),
            Some(Tok::Ident(name)) => Expr::Var(name),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => inner,
                    _ => return Err(self.err_here("expected ')'")),
                }
            }
            _ => return Err(self.err_here("expected a number, variable, or '('")),
        };
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let e = self.exponent()?;
            atom = Expr::Pow(Box::new(atom), e);
        }
        Ok(atom)
    }

    fn exponent(&mut self) -> Result<AffineExp> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(AffineExp::constant(to_i64(&n)?)),
            Some(Tok::Minus) => match self.bump() {
                Some(Tok::Int(n)) => Ok(AffineExp::constant(-to_i64(&n)?)),
                _ => Err(self.err_here("expected an integer exponent")),
            },
            Some(Tok::Ident(s)) if s == "k" => Ok(AffineExp {
                k_coeff: 1,
                constant: 0,
            }),
            Some(Tok::LParen) => {
                let e = self.affine()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(self.err_here("expected ')' after exponent")),
                }
            }
            _ => Err(self.err_here("expected an exponent")),
        }
    }

    /// Affine expressions in k: sums of `c`, `k`, `c*k`.
    fn affine(&mut self) -> Result<AffineExp> {
        let mut acc = AffineExp::constant(0);
        let mut sign = 1i64;
        loop {
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let v = to_i64(&n)?;
                    if let Some(Tok::Star) = self.peek() {
                        self.bump();
                        match self.bump() {
                            Some(Tok::Ident(s)) if s == "k" => acc.k_coeff += sign * v,
                            _ => return Err(self.err_here("expected k after coefficient")),
                        }
                    } else {
                        acc.constant += sign * v;
                    }
                }
                Some(Tok::Ident(s)) if s == "k" => acc.k_coeff += sign,
                Some(Tok::Minus) => {
                    sign = -sign;
                    continue;
                }
                _ => return Err(self.err_here("expected k or an integer")),
            }
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    sign = 1;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }
}

fn to_i64(n: &BigInt) -> Result<i64> {
    let (sign, digits) = n.to_u64_digits();
    let mag = digits.first().copied().unwrap_or(0);
    if digits.len() > 1 || mag > i64::MAX as u64 {
        return Err(Error::InvalidParameter("exponent too large".into()));
    }
    Ok(match sign {
        num_bigint::Sign::Minus => -(mag as i64),
        _ => mag as i64,
    })
}

/// Splits a trailing `@p` precision annotation off a literal.
pub fn split_precision(src: &str) -> Result<(&str, Option<i64>)> {
    match src.rsplit_once('@') {
        None => Ok((src, None)),
        Some((body, prec)) => {
            let p: i64 = prec.trim().parse().map_err(|_| Error::Parse {
                pos: body.len(),
                msg: "malformed @precision annotation".into(),
            })?;
            Ok((body, Some(p)))
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty literal".into(),
        });
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err_here("trailing input"));
    }
    Ok(e)
}

/// Resolves an identifier of the form T<i> (or T, for N = 1) to a variable
/// index in 0..nvars.
fn series_var_index(name: &str, nvars: usize) -> Option<usize> {
    if name == "T" && nvars == 1 {
        return Some(0);
    }
    let rest = name.strip_prefix('T')?;
    let idx: usize = rest.parse().ok()?;
    if idx >= 1 && idx <= nvars {
        Some(idx - 1)
    } else {
        None
    }
}

fn ratio_var_index(name: &str, nratio: usize) -> Option<usize> {
    if name == "t" && nratio == 1 {
        return Some(0);
    }
    let rest = name.strip_prefix('t')?;
    let idx: usize = rest.parse().ok()?;
    if idx >= 1 && idx <= nratio {
        Some(idx - 1)
    } else {
        None
    }
}

// ---------------------------------------------------------------------
// Series literals
// ---------------------------------------------------------------------

fn eval_series(e: &Expr, nvars: usize, field: BaseField, prec: i64, k: Option<i64>) -> Result<Series> {
    match e {
        Expr::Num(n) => {
            let c = field.from_rational(&BigRational::from_integer(n.clone()))?;
            Ok(Series::constant(nvars, c, prec))
        }
        Expr::Var(name) => match series_var_index(name, nvars) {
            Some(i) => Ok(Series::var(nvars, i, field, prec)),
            None => Err(Error::InvalidParameter(format!(
                "unknown variable '{name}' in a series literal ({nvars} variables)"
            ))),
        },
        Expr::Neg(inner) => Ok(eval_series(inner, nvars, field, prec, k)?.neg()),
        Expr::Add(a, b) => eval_series(a, nvars, field, prec, k)?
            .add(&eval_series(b, nvars, field, prec, k)?),
        Expr::Sub(a, b) => eval_series(a, nvars, field, prec, k)?
            .sub(&eval_series(b, nvars, field, prec, k)?),
        Expr::Mul(a, b) => {
            let s = eval_series(a, nvars, field, prec, k)?
                .mul(&eval_series(b, nvars, field, prec, k)?)?;
            Ok(s.truncate(prec))
        }
        Expr::Div(a, b) => {
            let num = eval_series(a, nvars, field, prec, k)?;
            let den = eval_series(b, nvars, field, prec, k)?;
            match crate::series::exact_divide(&num, &den)? {
                crate::series::DivisionOutcome::Quotient(q) => Ok(q),
                crate::series::DivisionOutcome::NotDivisible { obstructed_degree } => {
                    Err(Error::InvalidParameter(format!(
                        "series literal divides inexactly (obstruction at degree {obstructed_degree})"
                    )))
                }
            }
        }
        Expr::Pow(base, exp) => {
            let e = exp.eval(k)?;
            if e < 0 {
                return Err(Error::InvalidParameter(
                    "negative exponent in a series literal".into(),
                ));
            }
            let b = eval_series(base, nvars, field, prec, k)?;
            Ok(b.pow(e as u32)?.truncate(prec))
        }
    }
}

/// Parses a series literal such as `1 + T1^2*T2 - 3*T2^3 @6`.
pub fn parse_series(src: &str, nvars: usize, field: BaseField, default_prec: i64) -> Result<Series> {
    parse_series_with_k(src, nvars, field, default_prec, None)
}

/// Parses a family-template series literal, substituting the parameter k.
pub fn parse_series_with_k(
    src: &str,
    nvars: usize,
    field: BaseField,
    default_prec: i64,
    k: Option<i64>,
) -> Result<Series> {
    let (body, prec) = split_precision(src)?;
    let e = parse_expr(body)?;
    eval_series(&e, nvars, field, prec.unwrap_or(default_prec), k)
}

// ---------------------------------------------------------------------
// Polynomial literals (Z and X/Y readings)
// ---------------------------------------------------------------------

/// Polynomial in auxiliary variables with series coefficients: exponent pair
/// (e_Z or (e_X, e_Y)) -> coefficient.
#[derive(Clone, Debug)]
struct PolyOverSeries {
    nvars: usize,
    field: BaseField,
    prec: i64,
    terms: BTreeMap<(u32, u32), Series>,
}

impl PolyOverSeries {
    fn constant(s: Series) -> Self {
        let nvars = s.nvars();
        let field = s.field();
        let prec = s.prec();
        let mut terms = BTreeMap::new();
        if !s.is_zero_at_precision() {
            terms.insert((0, 0), s);
        }
        PolyOverSeries {
            nvars,
            field,
            prec,
            terms,
        }
    }

    fn zero_like(&self) -> Self {
        PolyOverSeries {
            nvars: self.nvars,
            field: self.field,
            prec: self.prec,
            terms: BTreeMap::new(),
        }
    }

    fn insert_add(&mut self, key: (u32, u32), s: Series) -> Result<()> {
        if s.is_zero_at_precision() {
            return Ok(());
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(s);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&s)?;
                if sum.is_zero_at_precision() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    fn add(&self, rhs: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (key, s) in &rhs.terms {
            out.insert_add(*key, s.clone())?;
        }
        Ok(out)
    }

    fn neg(&self) -> Self {
        let mut out = self.clone();
        for s in out.terms.values_mut() {
            *s = s.neg();
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Result<Self> {
        let mut out = self.zero_like();
        for (ka, sa) in &self.terms {
            for (kb, sb) in &rhs.terms {
                let key = (ka.0 + kb.0, ka.1 + kb.1);
                out.insert_add(key, sa.mul(sb)?.truncate(self.prec))?;
            }
        }
        Ok(out)
    }

    fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = PolyOverSeries::constant(Series::one(self.nvars, self.field, self.prec));
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

fn eval_poly_over_series(
    e: &Expr,
    aux: &[&str],
    nvars: usize,
    field: BaseField,
    prec: i64,
) -> Result<PolyOverSeries> {
    match e {
        Expr::Var(name) if aux.contains(&name.as_str()) => {
            let slot = aux.iter().position(|a| a == name).unwrap() as u32;
            let mut out = PolyOverSeries::constant(Series::one(nvars, field, prec));
            out.terms.clear();
            let key = if slot == 0 { (1, 0) } else { (0, 1) };
            out.terms.insert(key, Series::one(nvars, field, prec));
            Ok(out)
        }
        Expr::Num(_) | Expr::Var(_) => Ok(PolyOverSeries::constant(eval_series(
            e, nvars, field, prec, None,
        )?)),
        Expr::Neg(inner) => Ok(eval_poly_over_series(inner, aux, nvars, field, prec)?.neg()),
        Expr::Add(a, b) => eval_poly_over_series(a, aux, nvars, field, prec)?
            .add(&eval_poly_over_series(b, aux, nvars, field, prec)?),
        Expr::Sub(a, b) => eval_poly_over_series(a, aux, nvars, field, prec)?
            .add(&eval_poly_over_series(b, aux, nvars, field, prec)?.neg()),
        Expr::Mul(a, b) => eval_poly_over_series(a, aux, nvars, field, prec)?
            .mul(&eval_poly_over_series(b, aux, nvars, field, prec)?),
        Expr::Div(a, b) => {
            let num = eval_poly_over_series(a, aux, nvars, field, prec)?;
            let den = eval_poly_over_series(b, aux, nvars, field, prec)?;
            // Division only by scalar constants here.
            if den.terms.len() == 1 {
                if let Some(s) = den.terms.get(&(0, 0)) {
                    if s.num_terms() == 1 {
                        if let Some((m, c)) = s.terms().next() {
                            if m.degree() == 0 {
                                let inv = c.inv()?;
                                let mut out = num.clone();
                                for v in out.terms.values_mut() {
                                    *v = v.scale(&inv);
                                }
                                return Ok(out);
                            }
                        }
                    }
                }
            }
            Err(Error::InvalidParameter(
                "polynomial literals may divide by constants only".into(),
            ))
        }
        Expr::Pow(base, exp) => {
            let ev = exp.eval(None)?;
            if ev < 0 {
                return Err(Error::InvalidParameter(
                    "negative exponent in a polynomial literal".into(),
                ));
            }
            eval_poly_over_series(base, aux, nvars, field, prec)?.pow(ev as u32)
        }
    }
}

/// Parses `Z^2 - (T1^2 + T2^3)` into a SeriesPoly.
pub fn parse_series_poly(
    src: &str,
    nvars: usize,
    field: BaseField,
    default_prec: i64,
) -> Result<SeriesPoly> {
    let (body, prec) = split_precision(src)?;
    let e = parse_expr(body)?;
    let p = eval_poly_over_series(&e, &["Z"], nvars, field, prec.unwrap_or(default_prec))?;
    let d = p.terms.keys().map(|(i, _)| *i).max().unwrap_or(0) as usize;
    if d < 1 {
        return Err(Error::InvalidParameter(
            "polynomial literal must mention Z".into(),
        ));
    }
    let mut coeffs =
        vec![Series::zero(nvars, field, prec.unwrap_or(default_prec)); d + 1];
    for ((i, _), s) in p.terms {
        coeffs[i as usize] = s;
    }
    SeriesPoly::new(coeffs)
}

/// Parses `X^2 - T1^3*Y^2` into a homogeneous form; errors when the literal
/// is not homogeneous in X and Y.
pub fn parse_homog(
    src: &str,
    nvars: usize,
    field: BaseField,
    default_prec: i64,
) -> Result<HomogForm> {
    let (body, prec) = split_precision(src)?;
    let e = parse_expr(body)?;
    let p = eval_poly_over_series(&e, &["X", "Y"], nvars, field, prec.unwrap_or(default_prec))?;
    let degrees: Vec<u32> = p.terms.keys().map(|(i, j)| i + j).collect();
    let Some(&d) = degrees.first() else {
        return Err(Error::InvalidParameter("empty homogeneous form".into()));
    };
    if degrees.iter().any(|&x| x != d) || d < 1 {
        return Err(Error::InvalidParameter(
            "literal is not homogeneous of positive degree in X, Y".into(),
        ));
    }
    let mut coeffs =
        vec![Series::zero(nvars, field, prec.unwrap_or(default_prec)); d as usize + 1];
    for ((i, _j), s) in p.terms {
        coeffs[i as usize] = s;
    }
    HomogForm::new(coeffs)
}

// ---------------------------------------------------------------------
// Rational-function and completed-element literals
// ---------------------------------------------------------------------

fn eval_ratfunc(e: &Expr, nratio: usize, field: BaseField) -> Result<RatFunc> {
    match e {
        Expr::Num(n) => Ok(RatFunc::constant(
            nratio,
            field.from_rational(&BigRational::from_integer(n.clone()))?,
        )),
        Expr::Var(name) => match ratio_var_index(name, nratio) {
            Some(i) => Ok(RatFunc::from_poly(Poly::var(nratio, i, field))),
            None => Err(Error::InvalidParameter(format!(
                "unknown ratio variable '{name}' ({nratio} available)"
            ))),
        },
        Expr::Neg(inner) => Ok(eval_ratfunc(inner, nratio, field)?.neg()),
        Expr::Add(a, b) => eval_ratfunc(a, nratio, field)?.add(&eval_ratfunc(b, nratio, field)?),
        Expr::Sub(a, b) => eval_ratfunc(a, nratio, field)?.sub(&eval_ratfunc(b, nratio, field)?),
        Expr::Mul(a, b) => eval_ratfunc(a, nratio, field)?.mul(&eval_ratfunc(b, nratio, field)?),
        Expr::Div(a, b) => eval_ratfunc(a, nratio, field)?.div(&eval_ratfunc(b, nratio, field)?),
        Expr::Pow(base, exp) => {
            let ev = exp.eval(None)?;
            let b = eval_ratfunc(base, nratio, field)?;
            let mut acc = RatFunc::one(nratio, field);
            for _ in 0..ev.unsigned_abs() {
                acc = acc.mul(&b)?;
            }
            if ev < 0 {
                acc = acc.inv()?;
            }
            Ok(acc)
        }
    }
}

/// Parses `(t1^2+1)/(t1-1)` into a canonical rational function.
pub fn parse_ratfunc(src: &str, nratio: usize, field: BaseField) -> Result<RatFunc> {
    eval_ratfunc(&parse_expr(src)?, nratio, field)
}

fn eval_completed(
    e: &Expr,
    nratio: usize,
    field: BaseField,
    tprec: i64,
) -> Result<CompletedElement> {
    let constant = |r: RatFunc| CompletedElement::monomial(nratio, 0, r, tprec);
    match e {
        Expr::Num(_) => Ok(constant(eval_ratfunc(e, nratio, field)?)),
        Expr::Var(name) if name == "TN" => Ok(CompletedElement::monomial(
            nratio,
            1,
            RatFunc::one(nratio, field),
            tprec,
        )),
        Expr::Var(_) => Ok(constant(eval_ratfunc(e, nratio, field)?)),
        Expr::Neg(inner) => Ok(eval_completed(inner, nratio, field, tprec)?.neg()),
        Expr::Add(a, b) => eval_completed(a, nratio, field, tprec)?
            .add(&eval_completed(b, nratio, field, tprec)?),
        Expr::Sub(a, b) => eval_completed(a, nratio, field, tprec)?
            .sub(&eval_completed(b, nratio, field, tprec)?),
        Expr::Mul(a, b) => eval_completed(a, nratio, field, tprec)?
            .mul(&eval_completed(b, nratio, field, tprec)?),
        Expr::Div(a, b) => {
            let num = eval_completed(a, nratio, field, tprec)?;
            let den = eval_completed(b, nratio, field, tprec)?;
            num.div(&den, &crate::completion::Limits::default())
        }
        Expr::Pow(base, exp) => {
            let ev = exp.eval(None)?;
            if let Expr::Var(name) = base.as_ref() {
                if name == "TN" {
                    return Ok(CompletedElement::monomial(
                        nratio,
                        ev,
                        RatFunc::one(nratio, field),
                        tprec,
                    ));
                }
            }
            if ev < 0 {
                let b = eval_completed(base, nratio, field, tprec)?;
                let inv = b.inv(&crate::completion::Limits::default())?;
                let mut acc = constant(RatFunc::one(nratio, field));
                for _ in 0..ev.unsigned_abs() {
                    acc = acc.mul(&inv)?;
                }
                return Ok(acc);
            }
            let b = eval_completed(base, nratio, field, tprec)?;
            let mut acc = constant(RatFunc::one(nratio, field));
            for _ in 0..ev {
                acc = acc.mul(&b)?;
            }
            Ok(acc)
        }
    }
}

/// Parses `(t1^2)*TN^2 + TN^3 @8` into a completed element.
pub fn parse_completed(
    src: &str,
    nratio: usize,
    field: BaseField,
    default_tprec: i64,
) -> Result<CompletedElement> {
    let (body, tprec) = split_precision(src)?;
    let e = parse_expr(body)?;
    eval_completed(&e, nratio, field, tprec.unwrap_or(default_tprec))
}

/// Parses a standalone field constant such as `3/4` or `-2`.
pub fn parse_coeff(src: &str, field: BaseField) -> Result<crate::fields::Coeff> {
    let r = parse_ratfunc(src, 0, BaseField::Rationals)?;
    let num = r.num().eval_constants().ok_or_else(|| {
        Error::InvalidParameter("expected a constant".into())
    })?;
    let den = r.den().eval_constants().ok_or_else(|| {
        Error::InvalidParameter("expected a constant".into())
    })?;
    let (crate::fields::Coeff::Rat(n), crate::fields::Coeff::Rat(d)) = (num, den) else {
        unreachable!("parsed over the rationals");
    };
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    field.from_rational(&(n / d))
}
