//! The quotient O = O_{N+1}/(Q) for monic Q, with elements stored as
//! d-tuples over O_N in the basis 1, Zbar, ..., Zbar^(d-1), and the cofactor
//! machinery: b_i, h, and the f_i expansion together with the graded order
//! formula ord_O(g) = min_i { ord(g_i) + i }.

use crate::algebra::{is_distinguished, HatPoly, SeriesPoly};
use crate::completion::CompletedElement;
use crate::error::{Error, Result};
use crate::series::{OrderValue, Series};

/// Wraps a monic Q and provides quotient arithmetic.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    q: SeriesPoly,
}

/// An element of O_{N+1}/(Q) as a d-tuple over O_N.
#[derive(Clone, Debug)]
pub struct QuotElem {
    pub comps: Vec<Series>,
}

impl QuotientRing {
    pub fn new(q: SeriesPoly) -> Result<QuotientRing> {
        if !q.is_monic() {
            return Err(Error::NotMonic);
        }
        Ok(QuotientRing { q })
    }

    pub fn modulus(&self) -> &SeriesPoly {
        &self.q
    }

    pub fn degree(&self) -> usize {
        self.q.degree()
    }

    pub fn zero(&self) -> QuotElem {
        let d = self.degree();
        let z = Series::zero(self.q.nvars(), self.q.field(), self.q.min_prec());
        QuotElem {
            comps: vec![z; d],
        }
    }

    pub fn from_scalar(&self, s: &Series) -> QuotElem {
        let mut e = self.zero();
        e.comps[0] = s.clone();
        e
    }

    /// The class of Z.
    pub fn zbar(&self) -> QuotElem {
        let mut e = self.zero();
        if self.degree() >= 2 {
            e.comps[1] = Series::one(self.q.nvars(), self.q.field(), self.q.min_prec());
        } else {
            // d = 1: Zbar = -a_0.
            e.comps[0] = self.q.coeff(0).neg();
        }
        e
    }

    pub fn add(&self, a: &QuotElem, b: &QuotElem) -> Result<QuotElem> {
        let comps = a
            .comps
            .iter()
            .zip(&b.comps)
            .map(|(x, y)| x.add(y))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuotElem { comps })
    }

    pub fn sub(&self, a: &QuotElem, b: &QuotElem) -> Result<QuotElem> {
        let comps = a
            .comps
            .iter()
            .zip(&b.comps)
            .map(|(x, y)| x.sub(y))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuotElem { comps })
    }

    pub fn scale(&self, a: &QuotElem, s: &Series) -> Result<QuotElem> {
        let comps = a
            .comps
            .iter()
            .map(|x| x.mul(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuotElem { comps })
    }

    /// Product with reduction mod the monic modulus.
    pub fn mul(&self, a: &QuotElem, b: &QuotElem) -> Result<QuotElem> {
        let d = self.degree();
        let nv = self.q.nvars();
        let field = self.q.field();
        // Convolution up to degree 2d-2; generous precision, mul() clamps.
        let big = a
            .comps
            .iter()
            .chain(b.comps.iter())
            .map(|c| c.prec())
            .max()
            .unwrap_or(self.q.min_prec());
        let mut prod = vec![Series::zero(nv, field, big * 2 + 16); 2 * d - 1];
        for (i, x) in a.comps.iter().enumerate() {
            if x.is_zero_at_precision() {
                continue;
            }
            for (j, y) in b.comps.iter().enumerate() {
                if y.is_zero_at_precision() {
                    continue;
                }
                let t = x.mul(y)?;
                prod[i + j] = prod[i + j].add(&t)?;
            }
        }
        // Reduce top degrees using Z^d = -(a_0 + ... + a_{d-1} Z^{d-1}).
        // A head that vanished at its precision still carries an unknown
        // tail; the product precision rule accounts for it.
        for deg in (d..2 * d - 1).rev() {
            let c = prod[deg].clone();
            for i in 0..d {
                let term = c.mul(self.q.coeff(i))?;
                prod[deg - d + i] = prod[deg - d + i].sub(&term)?;
            }
        }
        prod.truncate(d);
        Ok(QuotElem { comps: prod })
    }

    /// Zbar^k as a tuple.
    pub fn zbar_pow(&self, k: usize) -> Result<QuotElem> {
        let mut acc = self.from_scalar(&Series::one(
            self.q.nvars(),
            self.q.field(),
            self.q.min_prec(),
        ));
        let z = self.zbar();
        for _ in 0..k {
            acc = self.mul(&acc, &z)?;
        }
        Ok(acc)
    }

    /// Componentwise "same class at shared precision".
    pub fn agrees(&self, a: &QuotElem, b: &QuotElem) -> bool {
        a.comps.iter().zip(&b.comps).all(|(x, y)| x.agrees_with(y))
    }

    pub fn is_zero_at_precision(&self, a: &QuotElem) -> bool {
        a.comps.iter().all(|c| c.is_zero_at_precision())
    }
}

/// ord_O(g) = min_i { ord(g_i) + i }, valid when the initial form of the
/// modulus is Z^d (checked).
pub fn graded_order(ring: &QuotientRing, g: &QuotElem) -> Result<OrderValue> {
    let report = is_distinguished(ring.modulus());
    if !report.initial_is_zd {
        return Err(Error::NotDistinguished);
    }
    let mut best = OrderValue::AtLeast(i64::MAX / 2);
    for (i, c) in g.comps.iter().enumerate() {
        let shifted = match c.ord() {
            OrderValue::Exact(k) => OrderValue::Exact(k + i as i64),
            OrderValue::AtLeast(k) => OrderValue::AtLeast(k + i as i64),
        };
        best = best.min(shifted);
    }
    Ok(best)
}

/// The b-sequence, h, and f-sequence of the cofactor identity
/// (x - Zbar y) h = P(x, y) in O.
#[derive(Clone, Debug)]
pub struct CofactorExpansion {
    /// b_0..b_{d-1}; always b_{d-1} = a_d.
    pub b: Vec<QuotElem>,
    /// h = b_{d-1} x^{d-1} + b_{d-2} x^{d-2} y + ... + b_0 y^{d-1}.
    pub h: QuotElem,
    /// f_0..f_{d-1} in O_N with h = f_0 + f_1 Zbar + ... + f_{d-1} Zbar^{d-1};
    /// absent when not requested.
    pub f: Option<Vec<Series>>,
}

/// Computes b_i := Zbar^{d-i-1} a_d + Zbar^{d-i-2} a_{d-1} + ... + a_{i+1},
/// h, and optionally the f-sequence. When a candidate root is supplied it is
/// validated against the modulus first. The recurrence
/// b_i = a_{i+1} + Zbar b_{i+1} is re-verified at working precision.
pub fn cofactor_expand(
    ring: &QuotientRing,
    zbar_root: Option<&CompletedElement>,
    x: &Series,
    y: &Series,
    want_f: bool,
) -> Result<CofactorExpansion> {
    let q = ring.modulus();
    let d = q.degree();
    if let Some(root) = zbar_root {
        let hat = HatPoly::embed(q);
        let residual = hat.eval(root)?;
        if let OrderValue::Exact(k) = residual.ord_hat() {
            return Err(Error::NotARoot(k));
        }
    }

    // Closed form via Horner from the top: b_{d-1} = a_d, b_i = a_{i+1} + Zbar b_{i+1}.
    let zbar = ring.zbar();
    let mut b = vec![ring.zero(); d];
    b[d - 1] = ring.from_scalar(q.coeff(d));
    for i in (0..d - 1).rev() {
        let t = ring.mul(&zbar, &b[i + 1])?;
        b[i] = ring.add(&ring.from_scalar(q.coeff(i + 1)), &t)?;
    }
    // Cross-check against the explicit power sum.
    for (i, bi) in b.iter().enumerate() {
        let mut acc = ring.zero();
        for j in (i + 1)..=d {
            let term = ring.scale(&ring.zbar_pow(j - i - 1)?, q.coeff(j))?;
            acc = ring.add(&acc, &term)?;
        }
        if !ring.agrees(bi, &acc) {
            return Err(Error::InvalidParameter(
                "cofactor recurrence disagrees with closed form".into(),
            ));
        }
    }

    // h = sum_i b_i x^i y^{d-1-i}
    let mut xpow = vec![Series::one(x.nvars(), x.field(), x.prec() + 8 * d as i64)];
    let mut ypow = vec![Series::one(y.nvars(), y.field(), y.prec() + 8 * d as i64)];
    for i in 1..d {
        xpow.push(xpow[i - 1].mul(x)?);
        ypow.push(ypow[i - 1].mul(y)?);
    }
    let mut h = ring.zero();
    for (i, bi) in b.iter().enumerate() {
        let scalar = xpow[i].mul(&ypow[d - 1 - i])?;
        h = ring.add(&h, &ring.scale(bi, &scalar)?)?;
    }

    let f = if want_f {
        if x.is_zero_at_precision() {
            return Err(Error::TruncatedZero);
        }
        // f_i = y^i * sum_{j >= i+1} a_j x^{j-i-1} y^{d-j}; the division by
        // x^{i+1} in the defining formula is exact and already carried out.
        let mut fs = Vec::with_capacity(d);
        for i in 0..d {
            let mut acc = Series::zero(x.nvars(), x.field(), x.prec() + 8 * d as i64);
            for j in (i + 1)..=d {
                let term = q
                    .coeff(j)
                    .mul(&xpow_full(x, j - i - 1, d)?)?
                    .mul(&ypow_full(y, d - j, d)?)?;
                acc = acc.add(&term)?;
            }
            fs.push(acc.mul(&ypow_full(y, i, d)?)?);
        }
        Some(fs)
    } else {
        None
    };

    Ok(CofactorExpansion { b, h, f })
}

fn xpow_full(x: &Series, e: usize, d: usize) -> Result<Series> {
    if e == 0 {
        return Ok(Series::one(x.nvars(), x.field(), x.prec() + 8 * d as i64));
    }
    x.pow(e as u32)
}

fn ypow_full(y: &Series, e: usize, d: usize) -> Result<Series> {
    xpow_full(y, e, d)
}
