//! The four Bailey pairs, the limiting Bailey-lemma identity, and the
//! computational routes to the partition-pair generating functions:
//! the symbolic-z single-sum route (q-binomial expansion), the one-variable
//! z = 1 route, the root-of-unity U/V bracket route, and the crank
//! generating function with its evaluation at roots of unity.

use crate::bivariate::BivariateSeries;
use crate::cyclotomic::Cyclotomic;
use crate::number::{rat, Frac, Rat};
use crate::qfunctions::{aqprod_infinite, euler_pentagonal, lambert_u, lambert_v, QError};
use crate::ring::{CyclotomicRing, IntegerRing, RationalRing, Ring};
use crate::series::{embed_rat_to_cyclo, LaurentSeries};
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum BaileyError {
    /// The (family, prime) combination has no stated U/V decomposition.
    UnsupportedCombination(u8, i64),
    Q(QError),
    Cyclo(crate::cyclotomic::CycloError),
}

impl fmt::Display for BaileyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaileyError::UnsupportedCombination(i, l) => {
                write!(f, "no U/V decomposition for family {} at zeta_{}", i, l)
            }
            BaileyError::Q(e) => write!(f, "{}", e),
            BaileyError::Cyclo(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for BaileyError {}

impl From<QError> for BaileyError {
    fn from(e: QError) -> Self {
        BaileyError::Q(e)
    }
}

impl From<crate::cyclotomic::CycloError> for BaileyError {
    fn from(e: crate::cyclotomic::CycloError) -> Self {
        BaileyError::Cyclo(e)
    }
}

/// Exponent of q in `beta_n` (the numerator over `(q;q)_{2n}`): 0, n, n^2, n^2 - n.
pub fn beta_exponent(family: u8, n: i64) -> i64 {
    match family {
        1 => 0,
        2 => n,
        3 => n * n,
        4 => n * n - n,
        _ => panic!("family index must be 1..=4"),
    }
}

/// Exponent of q multiplying the whole n-th term of `PP_i(z, q)`'s single-sum
/// form: n, 2n, n^2 + n, n^2.
pub fn pp_term_exponent(family: u8, n: i64) -> i64 {
    match family {
        1 => n,
        2 => 2 * n,
        3 => n * n + n,
        4 => n * n,
        _ => panic!("family index must be 1..=4"),
    }
}

/// `alpha_k` of the family's Bailey pair as a list of `(sign, exponent)`
/// monomials. `alpha_0 = 1`; for k >= 1 the three-case table applies.
pub fn alpha_terms(family: u8, k: i64) -> Vec<(i64, i64)> {
    assert!(k >= 0);
    if k == 0 {
        return vec![(1, 0)];
    }
    // (A, B): alpha_{3m} = q^{Am^2 - Bm} + q^{Am^2 + Bm}
    let (a, b) = match family {
        1 => (6, 1),
        2 => (6, 2),
        3 => (3, 1),
        4 => (3, 2),
        _ => panic!("family index must be 1..=4"),
    };
    match k % 3 {
        0 => {
            let m = k / 3;
            vec![(1, a * m * m - b * m), (1, a * m * m + b * m)]
        }
        1 => {
            let m = k / 3;
            let e = match family {
                1 => 6 * m * m + 5 * m + 1,
                2 => 6 * m * m + 2 * m,
                3 => 3 * m * m + m,
                4 => 3 * m * m + 4 * m + 1,
                _ => unreachable!(),
            };
            vec![(-1, e)]
        }
        _ => {
            let m = (k + 1) / 3;
            let e = match family {
                1 => 6 * m * m - 5 * m + 1,
                2 => 6 * m * m - 2 * m,
                3 => 3 * m * m - m,
                4 => 3 * m * m - 4 * m + 1,
                _ => unreachable!(),
            };
            vec![(-1, e)]
        }
    }
}

fn monomial_sum<R: Ring>(ring: &R, terms: &[(i64, i64)], depth: i64) -> LaurentSeries<R> {
    let mut acc = LaurentSeries::zero(ring.clone(), Frac::from_int(depth));
    for &(sign, e) in terms {
        let m = LaurentSeries::monomial(
            ring.clone(),
            ring.from_i64(sign),
            Frac::from_int(e),
            Frac::from_int(depth),
        );
        acc = acc.add(&m).expect("same ring");
    }
    acc
}

/// Check the defining Bailey-pair relation
/// `beta_n = sum_{k=0}^n alpha_k / ((q;q)_{n-k} (q;q)_{n+k})`
/// for all `n <= n_max` at the given series depth. Returns the first failing
/// `n`, or `None` when every index passes.
pub fn bailey_relation_check(family: u8, n_max: i64, depth: i64) -> Option<i64> {
    let ring = IntegerRing;
    // cache 1/(q;q)_j for j = 0..2*n_max
    let mut inv_poch = Vec::with_capacity((2 * n_max + 1) as usize);
    let mut poch = LaurentSeries::one(ring.clone(), Frac::from_int(depth));
    inv_poch.push(poch.invert().expect("unit"));
    for j in 1..=2 * n_max {
        let factor = monomial_sum(&ring, &[(1, 0), (-1, j)], depth);
        poch = poch.mul(&factor).expect("ring");
        inv_poch.push(poch.invert().expect("unit"));
    }
    let compare_depth = Frac::from_int(depth - 1);
    for n in 0..=n_max {
        let beta = inv_poch[(2 * n) as usize].shift(Frac::from_int(beta_exponent(family, n)));
        let mut sum = LaurentSeries::zero(ring.clone(), Frac::from_int(depth));
        for k in 0..=n {
            let alpha = monomial_sum(&ring, &alpha_terms(family, k), depth);
            let term = alpha
                .mul(&inv_poch[(n - k) as usize])
                .expect("ring")
                .mul(&inv_poch[(n + k) as usize])
                .expect("ring");
            sum = sum.add(&term).expect("ring");
        }
        match beta.compare_to_depth(&sum, compare_depth) {
            Ok(outcome) if outcome.is_pass() => {}
            _ => return Some(n),
        }
    }
    None
}

/// `PP_i(z, q)` as a bivariate series, from the single-sum form
/// `sum_{n >= 1} q^{e_i(n)} (q^{2n+1}; q)_inf / ((z q^n; q)_inf (z^{-1} q^n; q)_inf)`
/// with both inverse products expanded by the q-binomial theorem
/// `1/(x; q)_inf = sum_{k >= 0} x^k / (q;q)_k`.
pub fn pp_direct_bivariate(family: u8, depth: i64) -> BivariateSeries<IntegerRing> {
    let ring = IntegerRing;
    let one = ring.one();
    // cache 1/(q;q)_k to full depth
    let mut inv_poch: Vec<LaurentSeries<IntegerRing>> = Vec::new();
    {
        let mut poch = LaurentSeries::one(ring.clone(), Frac::from_int(depth));
        inv_poch.push(poch.invert().expect("unit"));
        let mut k = 1;
        while k < depth.max(1) {
            let factor = monomial_sum(&ring, &[(1, 0), (-1, k)], depth);
            poch = poch.mul(&factor).expect("ring");
            inv_poch.push(poch.invert().expect("unit"));
            k += 1;
        }
    }
    let mut acc = BivariateSeries::zero(ring.clone(), depth);
    let mut n = 1;
    while pp_term_exponent(family, n) < depth {
        let e = pp_term_exponent(family, n);
        let rem = depth - e;
        // sum_k z^{+-k} q^{nk} / (q;q)_k, truncated at q^rem
        let mut plus = BivariateSeries::zero(ring.clone(), rem);
        let mut minus = BivariateSeries::zero(ring.clone(), rem);
        let mut k = 0;
        while n * k < rem {
            for (exp, c) in inv_poch[k as usize].iter_nonzero() {
                let q_exp = n * k + exp.num();
                if q_exp < rem {
                    plus.add_assign_term(c.clone(), k, q_exp);
                    minus.add_assign_term(c.clone(), -k, q_exp);
                }
            }
            k += 1;
        }
        let product = plus.mul(&minus);
        let scalar = aqprod_infinite(&ring, &one, 2 * n + 1, 1, rem).expect("positive exponent");
        let term = product.scalar_series_mul(&scalar).monomial_mul(&one, 0, e);
        acc = acc.add(&term);
        n += 1;
    }
    acc
}

/// `PP_i(q) = PP_i(1, q)` computed directly from the one-variable form
/// `sum_{n >= 1} q^{e_i(n)} (q^{2n+1}; q)_inf / ((q^n; q)_inf)^2`.
pub fn pp_one_variable(family: u8, depth: i64) -> LaurentSeries<IntegerRing> {
    let ring = IntegerRing;
    let one = ring.one();
    let mut n_max = 0;
    while pp_term_exponent(family, n_max + 1) < depth {
        n_max += 1;
    }
    let mut acc = LaurentSeries::zero(ring.clone(), Frac::from_int(depth));
    if n_max == 0 {
        return acc;
    }
    // descending n: extend 1/(q^{n+1};q)_inf by the geometric factor
    // 1/(1-q^n), and (q^{2n+1};q)_inf by two linear factors per step
    let mut inv_tail = aqprod_infinite(&ring, &one, n_max + 1, 1, depth)
        .expect("positive exponent")
        .invert()
        .expect("unit");
    let mut upper = aqprod_infinite(&ring, &one, 2 * n_max + 1, 1, depth).expect("positive");
    let mut n = n_max;
    loop {
        let geometric = {
            let mut coeffs = vec![ring.zero(); depth.max(0) as usize];
            let mut e = 0;
            while e < depth {
                coeffs[e as usize] = ring.one();
                e += n;
            }
            LaurentSeries::from_integer_coeffs(ring.clone(), 0, coeffs, depth)
        };
        inv_tail = inv_tail.mul(&geometric).expect("ring");
        let inv_sq = inv_tail.mul(&inv_tail).expect("ring");
        let term = inv_sq
            .mul(&upper)
            .expect("ring")
            .shift(Frac::from_int(pp_term_exponent(family, n)));
        acc = acc.add(&term).expect("ring");
        if n == 1 {
            break;
        }
        let f1 = monomial_sum(&ring, &[(1, 0), (-1, 2 * n - 1)], depth);
        let f2 = monomial_sum(&ring, &[(1, 0), (-1, 2 * n)], depth);
        upper = upper.mul(&f1).expect("ring").mul(&f2).expect("ring");
        n -= 1;
    }
    acc
}

/// The crank generating function `(q;q)_inf / ((zq;q)_inf (z^{-1}q;q)_inf)`
/// evaluated at `z = zeta_l`, over Q(zeta_l).
pub fn crank_genfun_at_root(
    ell: i64,
    depth: i64,
) -> Result<LaurentSeries<CyclotomicRing>, BaileyError> {
    let ring = CyclotomicRing::new(ell)?;
    let zeta = ring.zeta_power(1).expect("cyclotomic");
    let zeta_inv = ring.zeta_power(-1).expect("cyclotomic");
    let num = euler_pentagonal(&ring, depth);
    let den = aqprod_infinite(&ring, &zeta, 1, 1, depth)?
        .mul(&aqprod_infinite(&ring, &zeta_inv, 1, 1, depth)?)
        .expect("ring");
    Ok(num.mul(&den.invert().expect("unit")).expect("ring"))
}

/// Symbolic coefficient appearing in the U/V bracket decompositions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketCoeff {
    /// 1
    One,
    /// zeta + zeta^{-1}
    ZetaPair,
    /// 1 + zeta^2 + zeta^{-2}
    ZetaPairSecond,
}

impl BracketCoeff {
    pub fn value(&self, ring: &CyclotomicRing) -> Cyclotomic {
        match self {
            BracketCoeff::One => ring.one(),
            BracketCoeff::ZetaPair => ring.add(
                &ring.zeta_power(1).expect("cyclotomic"),
                &ring.zeta_power(-1).expect("cyclotomic"),
            ),
            BracketCoeff::ZetaPairSecond => {
                let z2 = ring.zeta_power(2).expect("cyclotomic");
                let z2i = ring.zeta_power(-2).expect("cyclotomic");
                ring.add(&ring.one(), &ring.add(&z2, &z2i))
            }
        }
    }
}

/// One term `sign * coeff * q^shift * {U or V}^a_l(b)` of a bracket.
#[derive(Clone, Copy, Debug)]
pub struct BracketTerm {
    pub sign: i64,
    pub coeff: BracketCoeff,
    pub is_u: bool,
    pub a: i64,
    pub b: i64,
    pub q_shift: i64,
}

const fn term(
    sign: i64,
    coeff: BracketCoeff,
    is_u: bool,
    a: i64,
    b: i64,
    q_shift: i64,
) -> BracketTerm {
    BracketTerm {
        sign,
        coeff,
        is_u,
        a,
        b,
        q_shift,
    }
}

/// The declarative U/V decomposition of the bilateral-sum part of
/// `PP_i(zeta_l, q)`, one table entry per term of the stated equations.
/// The constant `1/((1 - zeta)(1 - zeta^{-1}))` is implicit in every bracket.
pub fn bracket_terms(family: u8, ell: i64) -> Result<&'static [BracketTerm], BaileyError> {
    use BracketCoeff::{One, ZetaPair, ZetaPairSecond};
    static PP1_Z3: [BracketTerm; 4] = [
        term(1, One, false, 6, 2, 0),
        term(-1, One, false, 6, 5, 0),
        term(-1, One, true, 6, 8, 2),
        term(1, One, true, 6, 11, 3),
    ];
    static PP2_Z3: [BracketTerm; 4] = [
        term(1, One, false, 6, 1, 0),
        term(-1, One, false, 6, 4, 0),
        term(-1, One, true, 6, 5, 1),
        term(1, One, true, 6, 8, 2),
    ];
    static PP2_Z5: [BracketTerm; 8] = [
        term(1, One, false, 6, 1, 0),
        term(1, ZetaPair, false, 6, 4, 0),
        term(-1, ZetaPair, false, 6, 7, 0),
        term(-1, One, false, 6, 10, 0),
        term(-1, One, true, 6, 5, 1),
        term(-1, ZetaPair, true, 6, 8, 2),
        term(1, ZetaPair, true, 6, 11, 3),
        term(1, One, true, 6, 14, 4),
    ];
    static PP3_Z5: [BracketTerm; 8] = [
        term(1, One, false, 3, 2, 0),
        term(1, ZetaPair, false, 3, 5, 0),
        term(-1, ZetaPair, false, 3, 8, 0),
        term(-1, One, false, 3, 11, 0),
        term(-1, One, true, 3, 4, 1),
        term(-1, ZetaPair, true, 3, 7, 2),
        term(1, ZetaPair, true, 3, 10, 3),
        term(1, One, true, 3, 13, 4),
    ];
    static PP4_Z5: [BracketTerm; 8] = [
        term(1, One, false, 3, 1, 0),
        term(1, ZetaPair, false, 3, 4, 0),
        term(-1, ZetaPair, false, 3, 7, 0),
        term(-1, One, false, 3, 10, 0),
        term(-1, One, true, 3, 7, 2),
        term(-1, ZetaPair, true, 3, 10, 3),
        term(1, ZetaPair, true, 3, 13, 4),
        term(1, One, true, 3, 16, 5),
    ];
    static PP3_Z7: [BracketTerm; 12] = [
        term(1, One, false, 3, 2, 0),
        term(1, ZetaPair, false, 3, 5, 0),
        term(1, ZetaPairSecond, false, 3, 8, 0),
        term(-1, ZetaPairSecond, false, 3, 11, 0),
        term(-1, ZetaPair, false, 3, 14, 0),
        term(-1, One, false, 3, 17, 0),
        term(-1, One, true, 3, 4, 1),
        term(-1, ZetaPair, true, 3, 7, 2),
        term(-1, ZetaPairSecond, true, 3, 10, 3),
        term(1, ZetaPairSecond, true, 3, 13, 4),
        term(1, ZetaPair, true, 3, 16, 5),
        term(1, One, true, 3, 19, 6),
    ];
    match (family, ell) {
        (1, 3) => Ok(&PP1_Z3),
        (2, 3) => Ok(&PP2_Z3),
        (2, 5) => Ok(&PP2_Z5),
        (3, 5) => Ok(&PP3_Z5),
        (4, 5) => Ok(&PP4_Z5),
        (3, 7) => Ok(&PP3_Z7),
        _ => Err(BaileyError::UnsupportedCombination(family, ell)),
    }
}

/// The six supported `(family, prime)` combinations.
pub const SUPPORTED_ROOTS: [(u8, i64); 6] = [(1, 3), (2, 3), (2, 5), (3, 5), (4, 5), (3, 7)];

/// The congruence each supported combination witnesses: `(family, l, r)` with
/// `pp_family(l n + r) ≡ 0 (mod l)`.
pub const CONGRUENCES: [(u8, i64, i64); 6] = [
    (1, 3, 0),
    (2, 3, 1),
    (2, 5, 1),
    (3, 5, 4),
    (3, 7, 1),
    (4, 5, 4),
];

/// `1 / ((1 - zeta)(1 - zeta^{-1}))` in Q(zeta_l).
pub fn one_minus_zeta_pair_inverse(ring: &CyclotomicRing) -> Cyclotomic {
    let z = ring.zeta_power(1).expect("cyclotomic");
    let zi = ring.zeta_power(-1).expect("cyclotomic");
    let a = ring.sub(&ring.one(), &z);
    let b = ring.sub(&ring.one(), &zi);
    ring.inv(&ring.mul(&a, &b)).expect("nonzero")
}

/// The U/V bracket: `1/((1-zeta)(1-zeta^{-1})) + sum of coefficient-weighted
/// U and V series`, equal to the bilateral-sum part of `PP_i(zeta_l, q)`.
pub fn pp_bracket(
    family: u8,
    ell: i64,
    depth: i64,
) -> Result<LaurentSeries<CyclotomicRing>, BaileyError> {
    let terms = bracket_terms(family, ell)?;
    let ring = CyclotomicRing::new(ell)?;
    let constant = one_minus_zeta_pair_inverse(&ring);
    let mut acc = LaurentSeries::monomial(ring.clone(), constant, Frac::ZERO, Frac::from_int(depth));
    for t in terms {
        let base = if t.is_u {
            lambert_u(t.a, ell, t.b, depth - t.q_shift)?
        } else {
            lambert_v(t.a, ell, t.b, depth - t.q_shift)?
        };
        let lifted = embed_rat_to_cyclo(&base, &ring);
        let mut c = t.coeff.value(&ring);
        if t.sign < 0 {
            c = ring.neg(&c);
        }
        let shifted = lifted.monomial_mul(&c, Frac::from_int(t.q_shift));
        acc = acc.add(&shifted).expect("ring");
    }
    Ok(acc)
}

/// The bilateral sums of `PP_i(zeta_l, q)` computed directly:
/// `sum_n q^{E_0(n)} / ((1-zeta q^{3n})(1-zeta^{-1} q^{3n}))
///  - sum_n q^{E_1(n)} / ((1-zeta q^{3n+1})(1-zeta^{-1} q^{3n+1}))`.
pub fn pp_bilateral_sums(
    family: u8,
    ell: i64,
    depth: i64,
) -> Result<LaurentSeries<CyclotomicRing>, BaileyError> {
    let ring = CyclotomicRing::new(ell)?;
    let exps: [fn(i64) -> i64; 2] = match family {
        1 => [|n| 6 * n * n + 2 * n, |n| 6 * n * n + 8 * n + 2],
        2 => [|n| 6 * n * n + n, |n| 6 * n * n + 5 * n + 1],
        3 => [|n| 3 * n * n + 2 * n, |n| 3 * n * n + 4 * n + 1],
        4 => [|n| 3 * n * n + n, |n| 3 * n * n + 7 * n + 2],
        _ => panic!("family index must be 1..=4"),
    };
    // quadratic leading coefficient of the exponents (6 or 3)
    let alpha = if family <= 2 { 6 } else { 3 };
    let mut acc = LaurentSeries::zero(ring.clone(), Frac::from_int(depth));
    for (which, e_fn) in exps.into_iter().enumerate() {
        let sign = if which == 0 { 1 } else { -1 };
        let offset = which as i64;
        let mut emit = |n: i64| -> bool {
            let d = 3 * n + offset;
            let e = e_fn(n);
            // negative denominator exponent pairs rewrite with a q^{-2d} shift
            let (e, m) = if d < 0 { (e - 2 * d, -d) } else { (e, d) };
            if e >= depth {
                return false;
            }
            let term = pair_denominator_term(&ring, m, e, sign, depth);
            acc = acc.add(&term).expect("ring");
            true
        };
        // the term minimum is piecewise quadratic (the rewrite subtracts 2d
        // on the negative-denominator branch); cover both branch vertices
        // unconditionally before extending outward
        let beta = e_fn(1) - e_fn(0) - alpha;
        let v_plain = -beta / (2 * alpha);
        let v_rewritten = -(beta - 6) / (2 * alpha);
        let lo = v_plain.min(v_rewritten).min(0) - 1;
        let hi = v_plain.max(v_rewritten).max(0) + 1;
        for n in lo..=hi {
            emit(n);
        }
        for (start, step) in [(hi + 1, 1i64), (lo - 1, -1)] {
            let mut misses = 0;
            let mut n = start;
            while misses < 2 {
                if emit(n) {
                    misses = 0;
                } else {
                    misses += 1;
                }
                n += step;
            }
        }
    }
    Ok(acc)
}

/// `sign * q^e / ((1 - zeta q^m)(1 - zeta^{-1} q^m))` as a cyclotomic series;
/// `m = 0` yields the constant `sign / ((1-zeta)(1-zeta^{-1}))`.
fn pair_denominator_term(
    ring: &CyclotomicRing,
    m: i64,
    e: i64,
    sign: i64,
    depth: i64,
) -> LaurentSeries<CyclotomicRing> {
    debug_assert!(m >= 0);
    let sign_elem = ring.from_i64(sign);
    if m == 0 {
        let c = ring.mul(&one_minus_zeta_pair_inverse(ring), &sign_elem);
        return LaurentSeries::monomial(ring.clone(), c, Frac::from_int(e), Frac::from_int(depth));
    }
    // (1 - zeta q^m)(1 - zeta^{-1} q^m) = 1 - (zeta + zeta^{-1}) q^m + q^{2m}
    let zpair = ring.add(
        &ring.zeta_power(1).expect("cyclotomic"),
        &ring.zeta_power(-1).expect("cyclotomic"),
    );
    let rel = depth - e;
    let mut coeffs = vec![ring.zero(); rel.max(1) as usize];
    coeffs[0] = ring.one();
    if m < rel {
        coeffs[m as usize] = ring.neg(&zpair);
    }
    if 2 * m < rel {
        coeffs[(2 * m) as usize] = ring.one();
    }
    let den = LaurentSeries::from_integer_coeffs(ring.clone(), 0, coeffs, rel);
    den.invert()
        .expect("unit")
        .monomial_mul(&sign_elem, Frac::from_int(e))
}

/// `PP_i(zeta_l, q)` assembled from the U/V bracket route:
/// `bracket / (q;q)_inf - crank / ((1 - zeta)(1 - zeta^{-1}))`.
pub fn pp_uv_at_root(
    family: u8,
    ell: i64,
    depth: i64,
) -> Result<LaurentSeries<CyclotomicRing>, BaileyError> {
    let ring = CyclotomicRing::new(ell)?;
    let bracket = pp_bracket(family, ell, depth)?;
    let euler_inv = euler_pentagonal(&RationalRing, depth).invert().expect("unit");
    let first = bracket
        .mul(&embed_rat_to_cyclo(&euler_inv, &ring))
        .expect("ring");
    let crank = crank_genfun_at_root(ell, depth)?;
    let second = crank.scale(&one_minus_zeta_pair_inverse(&ring));
    Ok(first.sub(&second).expect("ring"))
}

/// Evaluate `PP_i(z, q)` at `z = zeta_l` through the symbolic route.
pub fn pp_direct_at_root(
    family: u8,
    ell: i64,
    depth: i64,
) -> Result<LaurentSeries<CyclotomicRing>, BaileyError> {
    let f = pp_direct_bivariate(family, depth);
    Ok(crate::bivariate::eval_z_at_root(&f, ell, |c| {
        Rat::from_integer(c.clone())
    })?)
}

/// Both sides of the limiting case of Bailey's lemma at
/// `rho_1 = zeta, rho_2 = zeta^{-1}, a = 1`, returned as (lhs, rhs):
/// `sum_n (zeta, zeta^{-1}; q)_n q^n beta_n` and
/// `[(zeta q, zeta^{-1} q; q)_inf / (q;q)_inf^2] *
///  sum_n (zeta, zeta^{-1}; q)_n q^n alpha_n / ((zeta^{-1} q, zeta q; q)_n)`.
#[allow(clippy::type_complexity)]
pub fn bailey_lemma_sides(
    family: u8,
    ell: i64,
    depth: i64,
) -> Result<(LaurentSeries<CyclotomicRing>, LaurentSeries<CyclotomicRing>), BaileyError> {
    let ring = CyclotomicRing::new(ell)?;
    let zeta = ring.zeta_power(1).expect("cyclotomic");
    let zeta_inv = ring.zeta_power(-1).expect("cyclotomic");

    let rat_euler_inv = euler_pentagonal(&RationalRing, depth).invert().expect("unit");
    let euler_inv = embed_rat_to_cyclo(&rat_euler_inv, &ring);

    let mut lhs = LaurentSeries::zero(ring.clone(), Frac::from_int(depth));
    let mut n = 0;
    loop {
        if n > 0 && n + beta_exponent(family, n) >= depth {
            break;
        }
        let zp = cyclo_poch(&ring, &zeta, 0, n, depth);
        let zp_inv = cyclo_poch(&ring, &zeta_inv, 0, n, depth);
        let beta = embed_rat_to_cyclo(&rational_poch(2 * n, depth).invert().expect("unit"), &ring)
            .shift(Frac::from_int(beta_exponent(family, n)));
        let one_term = zp
            .mul(&zp_inv)
            .expect("ring")
            .mul(&beta)
            .expect("ring")
            .shift(Frac::from_int(n));
        lhs = lhs.add(&one_term).expect("ring");
        n += 1;
    }

    let prefactor = aqprod_infinite(&ring, &zeta, 1, 1, depth)?
        .mul(&aqprod_infinite(&ring, &zeta_inv, 1, 1, depth)?)
        .expect("ring")
        .mul(&euler_inv)
        .expect("ring")
        .mul(&euler_inv)
        .expect("ring");
    let mut alpha_sum = LaurentSeries::zero(ring.clone(), Frac::from_int(depth));
    let mut n = 0;
    loop {
        let alpha = alpha_terms(family, n);
        let lead = n + alpha.iter().map(|&(_, e)| e).min().unwrap();
        if n > 0 && lead >= depth {
            break;
        }
        let zp = cyclo_poch(&ring, &zeta, 0, n, depth);
        let zp_inv = cyclo_poch(&ring, &zeta_inv, 0, n, depth);
        let den = cyclo_poch(&ring, &zeta, 1, n, depth)
            .mul(&cyclo_poch(&ring, &zeta_inv, 1, n, depth))
            .expect("ring");
        let alpha_series = embed_rat_to_cyclo(&monomial_sum(&RationalRing, &alpha, depth), &ring);
        let one_term = zp
            .mul(&zp_inv)
            .expect("ring")
            .mul(&alpha_series)
            .expect("ring")
            .mul(&den.invert().expect("unit"))
            .expect("ring")
            .shift(Frac::from_int(n));
        alpha_sum = alpha_sum.add(&one_term).expect("ring");
        n += 1;
    }
    let rhs = prefactor.mul(&alpha_sum).expect("ring");
    Ok((lhs, rhs))
}

fn cyclo_poch(
    ring: &CyclotomicRing,
    c: &Cyclotomic,
    e: i64,
    n: i64,
    depth: i64,
) -> LaurentSeries<CyclotomicRing> {
    crate::qfunctions::aqprod_finite(ring, c, e, 1, n, depth)
}

fn rational_poch(n: i64, depth: i64) -> LaurentSeries<RationalRing> {
    crate::qfunctions::aqprod_finite(&RationalRing, &rat(1, 1), 1, 1, n, depth)
}
