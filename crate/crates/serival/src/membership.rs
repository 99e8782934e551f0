//! Truncated ideal membership by exact linear algebra over k, the
//! Artin-Rees inclusion probe (u, v) ∩ m^(i+i0) ⊆ (u, v) m^i, and the
//! nearest-solution projection x -> xbar with u*ybar - v*xbar = 0.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{Coeff, Mono, Poly};
use crate::series::{monomials_below, random_series, Series};

/// Coefficient series certifying w = sum eps_j * gen_j mod m^K with
/// ord(eps_j) >= shift.
#[derive(Clone, Debug)]
pub struct MembershipWitness {
    pub eps: Vec<Series>,
    pub shift: i64,
    pub precision: i64,
}

#[derive(Clone, Debug)]
pub enum MembershipOutcome {
    Witness(MembershipWitness),
    /// The linear system is infeasible at this truncation.
    No,
}

impl MembershipOutcome {
    pub fn is_witness(&self) -> bool {
        matches!(self, MembershipOutcome::Witness(_))
    }
}

/// Decides w ≡ sum eps_j gen_j mod m^K with ord(eps_j) >= shift, by exact
/// Gaussian elimination on the coefficient system below degree K. A returned
/// witness is re-verified by direct series arithmetic; a `No` is certified
/// infeasibility of the truncated system.
pub fn in_ideal_mod(
    w: &Series,
    gens: &[Series],
    shift: i64,
    precision: i64,
) -> Result<MembershipOutcome> {
    if shift > precision {
        return Err(Error::InvalidParameter(format!(
            "shift {shift} exceeds precision {precision}"
        )));
    }
    for s in gens.iter().chain(std::iter::once(w)) {
        if s.prec() < precision {
            return Err(Error::PrecisionExceeded {
                requested: precision,
                available: s.prec(),
            });
        }
    }
    let nvars = w.nvars();
    let field = w.field();

    // Unknowns: coefficients of each eps_j on monomials of degree in [shift, K).
    let eps_monos: Vec<Mono> = monomials_below(nvars, precision)
        .into_iter()
        .filter(|m| m.degree() >= shift)
        .collect();
    let eq_monos: Vec<Mono> = monomials_below(nvars, precision);
    let ncols = eps_monos.len() * gens.len();
    let nrows = eq_monos.len();

    let mono_index: std::collections::BTreeMap<Mono, usize> = eq_monos
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();

    // Row-major augmented matrix.
    let mut mat = vec![vec![field.zero(); ncols + 1]; nrows];
    for (j, g) in gens.iter().enumerate() {
        for (col_local, em) in eps_monos.iter().enumerate() {
            let col = j * eps_monos.len() + col_local;
            for (gm, gc) in g.terms() {
                let prod = em.mul(gm);
                if prod.degree() >= precision {
                    continue;
                }
                let row = mono_index[&prod];
                mat[row][col] = mat[row][col].add(gc);
            }
        }
    }
    for (wm, wc) in w.terms() {
        if wm.degree() >= precision {
            continue;
        }
        let row = mono_index[wm];
        mat[row][ncols] = wc.clone();
    }

    let solution = match solve_exact(&mut mat, ncols) {
        Some(sol) => sol,
        None => return Ok(MembershipOutcome::No),
    };

    let mut eps = Vec::with_capacity(gens.len());
    for j in 0..gens.len() {
        let terms = eps_monos.iter().enumerate().filter_map(|(l, m)| {
            let c = solution[j * eps_monos.len() + l].clone();
            if c.is_zero() {
                None
            } else {
                Some((m.clone(), c))
            }
        });
        eps.push(Series::from_terms(nvars, field, precision, terms));
    }

    // Soundness re-verification, independent of the solver path.
    let mut acc = Series::zero(nvars, field, precision);
    for (e, g) in eps.iter().zip(gens) {
        acc = acc.add(&e.mul(g)?.truncate(precision))?;
    }
    let diff = acc.sub(&w.truncate(precision))?;
    if !diff.is_zero_at_precision() {
        return Err(Error::InvalidParameter(
            "membership witness failed re-verification".into(),
        ));
    }
    for e in &eps {
        if e.ord().lower_bound() < shift {
            return Err(Error::InvalidParameter(
                "membership witness violates the order shift".into(),
            ));
        }
    }
    Ok(MembershipOutcome::Witness(MembershipWitness {
        eps,
        shift,
        precision,
    }))
}

/// Gaussian elimination with exact arithmetic; first nonzero pivot in column
/// order, free variables set to zero. Returns None when inconsistent.
fn solve_exact(mat: &mut [Vec<Coeff>], ncols: usize) -> Option<Vec<Coeff>> {
    let nrows = mat.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut rank = 0usize;
    for col in 0..ncols {
        let mut pivot = None;
        for (r, row) in mat.iter().enumerate().take(nrows).skip(rank) {
            if !row[col].is_zero() {
                pivot = Some(r);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        mat.swap(rank, p);
        let inv = mat[rank][col].inv().expect("nonzero pivot");
        for c in col..=ncols {
            mat[rank][c] = mat[rank][c].mul(&inv);
        }
        for r in 0..nrows {
            if r != rank && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in col..=ncols {
                    let t = mat[rank][c].mul(&factor);
                    mat[r][c] = mat[r][c].sub(&t);
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    // Inconsistent row: all-zero coefficients with nonzero RHS.
    for row in mat.iter() {
        if row[..ncols].iter().all(|c| c.is_zero()) && !row[ncols].is_zero() {
            return None;
        }
    }
    let field = mat[0][0].field();
    let mut sol = vec![field.zero(); ncols];
    for (col, pivot) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pivot {
            sol[col] = mat[*r][ncols].clone();
        }
    }
    Some(sol)
}

/// Empirical Artin-Rees certificate for a pair (u, v).
#[derive(Clone, Debug, Serialize)]
pub struct ArtinReesReport {
    /// Smallest shift passing every budgeted test; None when inconclusive.
    pub i0: Option<i64>,
    pub i_max: i64,
    pub precision: i64,
    pub tests_run: usize,
    /// For each rejected candidate shift, one failing w.
    pub counterexamples: Vec<(i64, String)>,
    pub conclusive: bool,
}

/// Probes candidate shifts i0 = 0, 1, ...: every enumerated or sampled
/// w in (u, v) ∩ m^(i+i0) must admit a witness in (u, v) m^i, for all
/// i <= i_max. The result is an empirical lower-bound certificate, valid for
/// the tested range and budget only.
pub fn artin_rees_probe(
    u: &Series,
    v: &Series,
    i_max: i64,
    precision: i64,
    budget: usize,
) -> Result<ArtinReesReport> {
    if u.is_zero_at_precision() || v.is_zero_at_precision() {
        return Err(Error::TruncatedZero);
    }
    let nvars = u.nvars();
    let field = u.field();
    let gens = [u.clone(), v.clone()];
    let mut tests_run = 0usize;
    let mut counterexamples = Vec::new();

    let i0_cap = precision - i_max - 1;
    for i0 in 0..=i0_cap.max(0) {
        let mut failed = None;
        'level: for i in 0..=i_max {
            // Combinations a*u + b*v filtered by ord(w) >= i + i0.
            let mut rng = ChaCha8Rng::seed_from_u64(0x5e71_u64 + i as u64);
            let mut candidates: Vec<Series> = Vec::new();
            // Monomial multiples make sharp counterexamples.
            for m in monomials_below(nvars, precision) {
                candidates.push(u.mul_monomial(&m, &field.one()).truncate(precision));
                candidates.push(v.mul_monomial(&m, &field.one()).truncate(precision));
            }
            for _ in 0..budget / (4 * (i_max as usize + 1)) {
                let a = random_series(nvars, precision, field, 0.4, &mut rng);
                let b = random_series(nvars, precision, field, 0.4, &mut rng);
                let w = a.mul(u)?.add(&b.mul(v)?)?.truncate(precision);
                candidates.push(w);
            }
            for w in candidates {
                if tests_run >= budget {
                    return Ok(ArtinReesReport {
                        i0: None,
                        i_max,
                        precision,
                        tests_run,
                        counterexamples,
                        conclusive: false,
                    });
                }
                if w.ord().lower_bound() < i + i0 || w.is_zero_at_precision() {
                    continue;
                }
                tests_run += 1;
                if !in_ideal_mod(&w, &gens, i, precision)?.is_witness() {
                    failed = Some((i0, w.to_string()));
                    break 'level;
                }
            }
        }
        match failed {
            None => {
                return Ok(ArtinReesReport {
                    i0: Some(i0),
                    i_max,
                    precision,
                    tests_run,
                    counterexamples,
                    conclusive: true,
                })
            }
            Some(ce) => counterexamples.push(ce),
        }
    }
    Ok(ArtinReesReport {
        i0: None,
        i_max,
        precision,
        tests_run,
        counterexamples,
        conclusive: false,
    })
}

#[derive(Clone, Debug)]
pub enum ProjectionOutcome {
    /// (xbar, ybar) with u*ybar - v*xbar ≡ 0 mod m^K and the perturbation
    /// orders at least the requested shift.
    Projected { xbar: Series, ybar: Series },
    /// The pair is genuinely far from the solution line at this precision.
    No,
}

/// Coprimality check for the polynomial representatives, available when the
/// ambient ring has at most two variables; `None` means undecidable here.
pub fn check_coprime(u: &Series, v: &Series) -> Option<bool> {
    if u.nvars() > 2 {
        return None;
    }
    let up = to_poly(u);
    let vp = to_poly(v);
    let g = up.gcd(&vp)?;
    Some(g.is_one())
}

fn to_poly(s: &Series) -> Poly {
    let mut p = Poly::zero(s.nvars(), s.field());
    for (m, c) in s.terms() {
        p.terms.insert(m.clone(), c.clone());
    }
    p
}

/// Moves (x, y) onto the solution line u*Y - v*X = 0 by a perturbation in
/// m^shift, when the membership system allows it: the constructive step of
/// the affine Artin bound. With w := u*y - v*x = c1*u + c2*v the corrected
/// pair is (x + c2, y - c1).
pub fn project_to_solution(
    x: &Series,
    y: &Series,
    u: &Series,
    v: &Series,
    shift: i64,
    precision: i64,
) -> Result<ProjectionOutcome> {
    let w = u.mul(y)?.sub(&v.mul(x)?)?.truncate(precision);
    if w.is_zero_at_precision() {
        return Ok(ProjectionOutcome::Projected {
            xbar: x.truncate(precision),
            ybar: y.truncate(precision),
        });
    }
    let gens = [u.clone(), v.clone()];
    match in_ideal_mod(&w, &gens, shift, precision)? {
        MembershipOutcome::No => Ok(ProjectionOutcome::No),
        MembershipOutcome::Witness(wit) => {
            let c1 = &wit.eps[0];
            let c2 = &wit.eps[1];
            let xbar = x.truncate(precision).add(c2)?;
            let ybar = y.truncate(precision).sub(c1)?;
            // Soundness: the corrected pair lies on the line mod m^K and the
            // perturbations obey the shift.
            let check = u.mul(&ybar)?.sub(&v.mul(&xbar)?)?.truncate(precision);
            if !check.is_zero_at_precision() {
                return Err(Error::InvalidParameter(
                    "projection failed re-verification".into(),
                ));
            }
            let dx = xbar.sub(&x.truncate(precision))?;
            let dy = ybar.sub(&y.truncate(precision))?;
            if dx.ord().lower_bound() < shift || dy.ord().lower_bound() < shift {
                return Err(Error::InvalidParameter(
                    "projection perturbation violates the order shift".into(),
                ));
            }
            Ok(ProjectionOutcome::Projected { xbar, ybar })
        }
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
    fn cubic_in_maximal_ideal_square() {
        // w = T1^3, gens (T1, T2), shift 2, K = 5 -> eps1 = T1^2, eps2 = 0.
        let w = t(0, 5).pow(3).unwrap().truncate(5);
        let gens = [t(0, 5), t(1, 5)];
        match in_ideal_mod(&w, &gens, 2, 5).unwrap() {
            MembershipOutcome::Witness(wit) => {
                assert!(wit.eps[0].agrees_with(&t(0, 5).pow(2).unwrap().truncate(5)));
                assert!(wit.eps[1].is_zero_at_precision());
            }
            MembershipOutcome::No => panic!("expected witness"),
        }
    }

    #[test]
    fn constants_unreachable() {
        // w = 1, gens (T1, T2), shift 0, K = 2 -> certified No.
        let w = Series::one(2, q(), 2);
        let gens = [t(0, 2), t(1, 2)];
        assert!(!in_ideal_mod(&w, &gens, 0, 2).unwrap().is_witness());
    }

    #[test]
    fn construct_then_solve_round_trip() {
        for seed in 0..10u64 {
            let prec = 6;
            let shift = 2;
            let u = t(0, prec).add(&t(1, prec).pow(2).unwrap().truncate(prec)).unwrap();
            let v = t(1, prec);
            let mut e1 = random_series_seeded(2, prec, q(), 0.5, 50 + seed);
            let mut e2 = random_series_seeded(2, prec, q(), 0.5, 150 + seed);
            // Force the shift.
            e1 = e1
                .mul_monomial(&Mono(vec![shift as u32, 0]), &q().one())
                .truncate(prec);
            e2 = e2
                .mul_monomial(&Mono(vec![0, shift as u32]), &q().one())
                .truncate(prec);
            let w = u.mul(&e1).unwrap().add(&v.mul(&e2).unwrap()).unwrap().truncate(prec);
            let out = in_ideal_mod(&w, &[u.clone(), v.clone()], shift, prec).unwrap();
            assert!(out.is_witness(), "seed {seed} lost a constructed witness");
        }
    }

    #[test]
    fn precision_guard() {
        let w = Series::one(2, q(), 3);
        let gens = [t(0, 3), t(1, 3)];
        assert!(matches!(
            in_ideal_mod(&w, &gens, 0, 5),
            Err(Error::PrecisionExceeded { .. })
        ));
    }

    #[test]
    fn regular_sequence_shift_one() {
        // (T1, T2) = m: m ∩ m^(i+i0) = m^(i+i0) ⊆ m*m^i = m^(i+1) forces
        // i0 >= 1, and degree counting shows 1 suffices (every monomial of
        // degree >= i+1 is T_j times a monomial of degree >= i). The solver
        // confirms at K = 8, i_max = 4: w = T1 itself defeats i0 = 0 at i = 1.
        let report = artin_rees_probe(&t(0, 8), &t(1, 8), 4, 8, 2000).unwrap();
        assert!(report.conclusive);
        assert_eq!(report.i0, Some(1));
        assert_eq!(report.counterexamples.len(), 1);
    }

    #[test]
    fn common_factor_needs_positive_shift() {
        // (T1^2, T1*T2) over F_2 at small K: the probe must reject i0 = 0
        // and 1 (w = T1*T2^(i+1) style counterexamples) and settle on 2.
        let f = BaseField::Prime(2);
        let prec = 7;
        let u = Series::var(2, 0, f, prec).pow(2).unwrap().truncate(prec);
        let v = Series::var(2, 0, f, prec)
            .mul(&Series::var(2, 1, f, prec))
            .unwrap()
            .truncate(prec);
        let report = artin_rees_probe(&u, &v, 3, prec, 4000).unwrap();
        assert!(report.conclusive);
        assert_eq!(report.i0, Some(2));
        assert!(report.counterexamples.len() >= 2);
    }

    #[test]
    fn principal_ideal_shift_one() {
        // (T1, T1) = (T1): w = T1*g with ord g >= i+i0-1; membership in
        // (T1)*m^i needs ord g >= i, so i0 = 1 is sharp (w = T1 at i = 1
        // defeats i0 = 0).
        let report = artin_rees_probe(&t(0, 6), &t(0, 6), 3, 6, 1500).unwrap();
        assert!(report.conclusive);
        assert_eq!(report.i0, Some(1));
    }

    #[test]
    fn projection_onto_line() {
        // u/v = T1/T2, (x, y) = (T1 + T2^5, T2), shift 4: correction in m^4.
        let prec = 8;
        let u = t(0, prec);
        let v = t(1, prec);
        let x = t(0, prec).add(&t(1, prec).pow(5).unwrap().truncate(prec)).unwrap();
        let y = t(1, prec);
        match project_to_solution(&x, &y, &u, &v, 4, prec).unwrap() {
            ProjectionOutcome::Projected { xbar, ybar } => {
                let check = u
                    .mul(&ybar)
                    .unwrap()
                    .sub(&v.mul(&xbar).unwrap())
                    .unwrap()
                    .truncate(prec);
                assert!(check.is_zero_at_precision());
                assert!(xbar.sub(&x.truncate(prec)).unwrap().ord().lower_bound() >= 4);
            }
            ProjectionOutcome::No => panic!("expected projection"),
        }
    }

    #[test]
    fn projection_zero_correction() {
        let prec = 6;
        let u = t(0, prec);
        let v = t(1, prec);
        // (x, y) already on the line: u*y - v*x = 0 for (T1, T2)... here
        // u*T2 - v*T1 = 0.
        match project_to_solution(&t(0, prec), &t(1, prec), &u, &v, 3, prec).unwrap() {
            ProjectionOutcome::Projected { xbar, ybar } => {
                assert!(xbar.agrees_with(&t(0, prec)));
                assert!(ybar.agrees_with(&t(1, prec)));
            }
            ProjectionOutcome::No => panic!("zero correction expected"),
        }
    }

    #[test]
    fn projection_far_pair_refused() {
        // (x, y) far from the line with a large shift: infeasible.
        let prec = 6;
        let u = t(0, prec);
        let v = t(1, prec);
        let x = Series::one(2, q(), prec);
        let y = Series::one(2, q(), prec);
        // w = T1 - T2 has order 1; witnesses in m^4 cannot reach it.
        match project_to_solution(&x, &y, &u, &v, 4, prec).unwrap() {
            ProjectionOutcome::No => {}
            ProjectionOutcome::Projected { .. } => panic!("expected No"),
        }
    }

    #[test]
    fn coprimality_for_two_variables() {
        assert_eq!(check_coprime(&t(0, 5), &t(1, 5)), Some(true));
        let u = t(0, 5).pow(2).unwrap().truncate(5);
        let v = t(0, 5).mul(&t(1, 5)).unwrap().truncate(5);
        assert_eq!(check_coprime(&u, &v), Some(false));
    }

    #[test]
    fn solver_matches_exhaustive_enumeration_f2() {
        // Oracle equivalence on small instances: F_2, N = 2, K = 4, against
        // the independent bitmask enumeration.
        let f = BaseField::Prime(2);
        let prec = 4;
        let monos = monomials_below(2, prec);
        let mono_of = |bits: u32| -> Series {
            let terms = monos
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, m)| (m.clone(), f.one()));
            Series::from_terms(2, f, prec, terms)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        use rand_core::RngCore;
        for case in 0..40 {
            let ub = 1 | (rng.next_u32() & 0x3ff);
            let vb = 1 | (rng.next_u32() & 0x3ff);
            let wb = rng.next_u32() & 0x3ff;
            let i = (rng.next_u32() % 3) as i64;
            let got = in_ideal_mod(&mono_of(wb), &[mono_of(ub), mono_of(vb)], i, prec)
                .unwrap()
                .is_witness();
            let found = exhaustive_bitmask_oracle(&monos, ub, vb, wb, i, prec);
            assert_eq!(got, found, "solver disagrees with enumeration (case {case})");
        }
    }

    /// Independent brute-force membership over F_2 mod m^prec: series are
    /// bitmasks over the monomial list; iterate all (eps1, eps2) supports.
    pub(crate) fn exhaustive_bitmask_oracle(
        monos: &[Mono],
        u: u32,
        v: u32,
        w: u32,
        shift: i64,
        prec: i64,
    ) -> bool {
        let n = monos.len();
        assert!(n <= 16);
        let index_of = |m: &Mono| monos.iter().position(|x| x == m);
        // mult[i][j] = Some(k) when monos[i]*monos[j] = monos[k] below prec.
        let mut mult = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = monos[i].mul(&monos[j]);
                if p.degree() < prec {
                    mult[i][j] = index_of(&p);
                }
            }
        }
        let eligible: Vec<usize> = (0..n).filter(|&i| monos[i].degree() >= shift).collect();
        let image = |gen: u32, mask: u32| -> u32 {
            let mut acc = 0u32;
            for (bit, &mi) in eligible.iter().enumerate() {
                if mask >> bit & 1 == 0 {
                    continue;
                }
                for gj in 0..n {
                    if gen >> gj & 1 == 1 {
                        if let Some(k) = mult[mi][gj] {
                            acc ^= 1 << k;
                        }
                    }
                }
            }
            acc
        };
        let total = 1u32 << eligible.len();
        let u_images: std::collections::HashSet<u32> =
            (0..total).map(|m| image(u, m)).collect();
        (0..total).any(|m2| u_images.contains(&(w ^ image(v, m2))))
    }
}
