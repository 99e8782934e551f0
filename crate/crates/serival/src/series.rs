//! Truncated arithmetic in O_N = k[[T_1, ..., T_N]] with total-degree
//! precision tracking and the m-adic order.
//!
//! A `Series` is an equivalence class mod m^prec: terms of total degree >=
//! prec are unknown and never stored. Orders are kept in log scale — the norm
//! |x| = e^(-ord x) is never evaluated in floating point.

use std::collections::BTreeMap;
use std::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::fields::{format_mono, BaseField, Coeff, Mono};

/// The m-adic order of a truncated object: exact, or only known to be at
/// least the precision (truncated zero).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum OrderValue {
    Exact(i64),
    AtLeast(i64),
}

impl OrderValue {
    /// A lower bound valid in either case.
    pub fn lower_bound(self) -> i64 {
        match self {
            OrderValue::Exact(k) | OrderValue::AtLeast(k) => k,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, OrderValue::Exact(_))
    }

    pub fn exact(self) -> Option<i64> {
        match self {
            OrderValue::Exact(k) => Some(k),
            OrderValue::AtLeast(_) => None,
        }
    }

    /// Minimum of two order values: exact only when certain.
    pub fn min(self, other: OrderValue) -> OrderValue {
        use OrderValue::*;
        match (self, other) {
            (Exact(a), Exact(b)) => Exact(a.min(b)),
            (Exact(a), AtLeast(b)) | (AtLeast(b), Exact(a)) => {
                if a <= b {
                    Exact(a)
                } else {
                    AtLeast(b)
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }
}

impl fmt::Display for OrderValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderValue::Exact(k) => write!(f, "{k}"),
            OrderValue::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

/// A truncated element of O_N: sparse exponent-vector map plus a
/// total-degree precision.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series {
    nvars: usize,
    field: BaseField,
    prec: i64,
    terms: BTreeMap<Mono, Coeff>,
}

impl Series {
    pub fn zero(nvars: usize, field: BaseField, prec: i64) -> Series {
        assert!(prec >= 0, "precision must be nonnegative");
        Series {
            nvars,
            field,
            prec,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Coeff, prec: i64) -> Series {
        let field = c.field();
        let mut s = Series::zero(nvars, field, prec);
        s.insert_add(Mono::one(nvars), c);
        s
    }

    pub fn one(nvars: usize, field: BaseField, prec: i64) -> Series {
        Series::constant(nvars, field.one(), prec)
    }

    /// The variable T_{i+1}.
    pub fn var(nvars: usize, i: usize, field: BaseField, prec: i64) -> Series {
        let mut s = Series::zero(nvars, field, prec);
        s.insert_add(Mono::var(nvars, i), field.one());
        s
    }

    pub fn monomial(nvars: usize, m: Mono, c: Coeff, prec: i64) -> Series {
        let mut s = Series::zero(nvars, c.field(), prec);
        debug_assert_eq!(m.0.len(), nvars);
        s.insert_add(m, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, Coeff)>>(
        nvars: usize,
        field: BaseField,
        prec: i64,
        terms: I,
    ) -> Series {
        let mut s = Series::zero(nvars, field, prec);
        for (m, c) in terms {
            s.insert_add(m, c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Mono) -> Coeff {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    fn insert_add(&mut self, m: Mono, c: Coeff) {
        if c.is_zero() || m.degree() >= self.prec {
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

    /// True when no term is stored: the class of 0 mod m^prec.
    pub fn is_zero_at_precision(&self) -> bool {
        self.terms.is_empty()
    }

    /// The m-adic order: exact minimum total degree of a stored term, or
    /// at-least the precision for a truncated zero.
    pub fn ord(&self) -> OrderValue {
        match self.terms.keys().next() {
            Some(m) => OrderValue::Exact(m.degree()),
            None => OrderValue::AtLeast(self.prec),
        }
    }

    fn check_compatible(&self, rhs: &Series) -> Result<()> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.nvars != rhs.nvars {
            return Err(Error::NvarsMismatch(self.nvars, rhs.nvars));
        }
        Ok(())
    }

    /// Reduces the precision (forgetting high-degree information).
    pub fn truncate(&self, prec: i64) -> Series {
        let prec = prec.min(self.prec);
        let mut out = Series::zero(self.nvars, self.field, prec.max(0));
        for (m, c) in &self.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn add(&self, rhs: &Series) -> Result<Series> {
        self.check_compatible(rhs)?;
        let mut out = self.truncate(rhs.prec);
        for (m, c) in &rhs.terms {
            out.insert_add(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Series {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, rhs: &Series) -> Result<Series> {
        self.add(&rhs.neg())
    }

    /// Truncated product. The result precision is
    /// min(prec_a + ord(b), prec_b + ord(a), prec_a + prec_b), using lower
    /// bounds for the orders: the coefficient of a degree-n term is fully
    /// determined exactly when n is below that bound.
    pub fn mul(&self, rhs: &Series) -> Result<Series> {
        self.check_compatible(rhs)?;
        let oa = self.ord().lower_bound();
        let ob = rhs.ord().lower_bound();
        let prec = (self.prec + ob)
            .min(rhs.prec + oa)
            .min(self.prec + rhs.prec);
        let mut out = Series::zero(self.nvars, self.field, prec.max(0));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                if ma.degree() + mb.degree() >= prec {
                    continue;
                }
                out.insert_add(ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> Series {
        let mut out = Series::zero(self.nvars, self.field, self.prec);
        for (m, v) in &self.terms {
            out.insert_add(m.clone(), v.mul(c));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Mono, c: &Coeff) -> Series {
        let mut out = Series::zero(self.nvars, self.field, self.prec + m.degree());
        for (mm, v) in &self.terms {
            out.insert_add(mm.mul(m), v.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Result<Series> {
        let mut acc = Series::one(self.nvars, self.field, self.prec + e as i64 * 16);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The homogeneous part of degree ord(s); errors on truncated zero.
    pub fn initial_form(&self) -> Result<Series> {
        let k = match self.ord() {
            OrderValue::Exact(k) => k,
            OrderValue::AtLeast(_) => return Err(Error::TruncatedZero),
        };
        Ok(self.graded_piece(k))
    }

    /// The homogeneous component of the given total degree.
    pub fn graded_piece(&self, deg: i64) -> Series {
        let mut out = Series::zero(self.nvars, self.field, self.prec);
        for (m, c) in &self.terms {
            if m.degree() == deg {
                out.insert_add(m.clone(), c.clone());
            }
        }
        out
    }

    /// True when the two classes agree below the shared precision.
    pub fn agrees_with(&self, rhs: &Series) -> bool {
        if self.field != rhs.field || self.nvars != rhs.nvars {
            return false;
        }
        match self.sub(rhs) {
            Ok(d) => d.is_zero_at_precision(),
            Err(_) => false,
        }
    }

    /// Swaps variables T_{i+1} and T_{j+1} (the --swap-vars pre-rotation).
    pub fn swap_vars(&self, i: usize, j: usize) -> Series {
        let mut out = Series::zero(self.nvars, self.field, self.prec);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            e.swap(i, j);
            out.insert_add(Mono(e), c.clone());
        }
        out
    }

    /// Deterministic total order on the underlying data, used only for
    /// witness tie-breaking in scans.
    pub fn cmp_key(&self, other: &Series) -> std::cmp::Ordering {
        let a: Vec<_> = self.terms.iter().collect();
        let b: Vec<_> = other.terms.iter().collect();
        for ((ma, ca), (mb, cb)) in a.iter().zip(&b) {
            let o = ma.cmp(mb).then_with(|| ca.cmp_key(cb));
            if o != std::cmp::Ordering::Equal {
                return o;
            }
        }
        a.len().cmp(&b.len())
    }
}

/// Outcome of the divisibility test in O_N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivisionOutcome {
    /// x = q*y modulo the achievable precision.
    Quotient(Series),
    /// No quotient exists; the obstruction appears at this degree of q.
    NotDivisible { obstructed_degree: i64 },
}

/// Decides whether y divides x in O_N modulo the achievable precision, by
/// solving the triangular system on graded pieces: q_n * in(y) must equal the
/// degree-(n + ord y) piece of x - (partial product). Division of homogeneous
/// forms is exact polynomial division in the graded ring, which is a domain.
pub fn exact_divide(x: &Series, y: &Series) -> Result<DivisionOutcome> {
    x.check_compatible(y)?;
    let oy = match y.ord() {
        OrderValue::Exact(k) => k,
        OrderValue::AtLeast(_) => return Err(Error::DivisorTruncatedZero),
    };
    let prec = x.prec.min(y.prec) - oy;
    let init_y = y.initial_form().expect("exact order");
    let init_y_poly = series_to_poly(&init_y);
    let mut q = Series::zero(x.nvars, x.field, prec.max(0));
    // Residual r = x - q*y, maintained incrementally.
    let mut r = x.truncate(x.prec.min(y.prec));
    let start = r.ord().lower_bound() - oy;
    for n in start.max(0)..prec {
        let target = r.graded_piece(n + oy);
        if target.is_zero_at_precision() {
            continue;
        }
        let target_poly = series_to_poly(&target);
        match target_poly.exact_div(&init_y_poly) {
            None => return Ok(DivisionOutcome::NotDivisible { obstructed_degree: n }),
            Some(qn_poly) => {
                let qn = poly_to_series(&qn_poly, x.prec.min(y.prec));
                q = q.add(&qn.truncate(q.prec()))?;
                r = r.sub(&qn.mul(y)?.truncate(r.prec()))?;
            }
        }
    }
    Ok(DivisionOutcome::Quotient(q))
}

fn series_to_poly(s: &Series) -> crate::fields::Poly {
    let mut p = crate::fields::Poly::zero(s.nvars, s.field);
    for (m, c) in &s.terms {
        p.terms.insert(m.clone(), c.clone());
    }
    p
}

fn poly_to_series(p: &crate::fields::Poly, prec: i64) -> Series {
    Series::from_terms(
        p.nvars,
        p.field,
        prec,
        p.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
    )
}

/// Reproducible pseudorandom series: every monomial of total degree < prec
/// receives a nonzero coefficient with probability `density`.
pub fn random_series(
    nvars: usize,
    prec: i64,
    field: BaseField,
    density: f64,
    rng: &mut ChaCha8Rng,
) -> Series {
    let mut s = Series::zero(nvars, field, prec);
    for m in monomials_below(nvars, prec) {
        let roll = (rng.next_u32() as f64) / (u32::MAX as f64);
        if roll < density {
            let c = random_nonzero_coeff(field, rng);
            s.insert_add(m, c);
        }
    }
    s
}

/// Convenience wrapper seeding its own generator.
pub fn random_series_seeded(
    nvars: usize,
    prec: i64,
    field: BaseField,
    density: f64,
    seed: u64,
) -> Series {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_series(nvars, prec, field, density, &mut rng)
}

fn random_nonzero_coeff(field: BaseField, rng: &mut ChaCha8Rng) -> Coeff {
    match field {
        BaseField::Prime(p) => field.from_i64((1 + rng.next_u64() % (p - 1)) as i64),
        BaseField::Rationals => {
            // Small nonzero rationals of height <= 2.
            let pool = [1i64, -1, 2, -2];
            let n = pool[(rng.next_u32() % 4) as usize];
            let d = [1i64, 2][(rng.next_u32() % 2) as usize];
            let q = num_rational::BigRational::new(n.into(), d.into());
            BaseField::Rationals.from_rational(&q).unwrap()
        }
    }
}

/// All monomials in `nvars` variables of total degree < prec, ascending
/// graded lex.
pub fn monomials_below(nvars: usize, prec: i64) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    gen_monos(nvars, prec, 0, 0, &mut current, &mut out);
    out.sort();
    out
}

fn gen_monos(
    nvars: usize,
    prec: i64,
    var: usize,
    used: i64,
    current: &mut Vec<u32>,
    out: &mut Vec<Mono>,
) {
    if var == nvars {
        out.push(Mono(current.clone()));
        return;
    }
    let mut e = 0i64;
    while used + e < prec {
        current[var] = e as u32;
        gen_monos(nvars, prec, var + 1, used + e, current, out);
        e += 1;
    }
    current[var] = 0;
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 @{}", self.prec);
        }
        let names = |i: usize| format!("T{}", i + 1);
        let mut out = String::new();
        for (m, c) in self.terms.iter() {
            let mono = format_mono(m, &names);
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
        write!(f, "{out} @{}", self.prec)
    }
}
