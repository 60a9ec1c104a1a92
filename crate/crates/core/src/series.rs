//! Truncated Laurent series in q with rational exponents over a generic
//! exact coefficient ring.
//!
//! A series stores a dense coefficient run on the grid of exponents k/den,
//! together with an exclusive truncation order: coefficients at exponents at
//! or beyond the order are unknown, and arithmetic never claims them. The
//! truncation propagation rule for products is
//! `order = min(O_a + min_b, O_b + min_a)`.
//!
//! Multiplication walks the operand with fewer nonzero coefficients on the
//! outside, so sparse theta-type series multiply into dense ones at
//! `nnz * len` cost rather than `len^2`.

use crate::number::{lcm_i64, Frac};
use crate::ring::{Ring, RingError};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesError {
    RingMismatch(String, String),
    NonUnitLeadingCoefficient(String),
    FractionalExponents,
    InsufficientTruncation { needed: Frac, available: Frac },
    Ring(RingError),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::RingMismatch(a, b) => write!(f, "ring mismatch: {} vs {}", a, b),
            SeriesError::NonUnitLeadingCoefficient(c) => {
                write!(f, "leading coefficient {} is not a unit", c)
            }
            SeriesError::FractionalExponents => {
                write!(f, "operation requires integer exponents")
            }
            SeriesError::InsufficientTruncation { needed, available } => write!(
                f,
                "requested depth {} exceeds known truncation {}",
                needed, available
            ),
            SeriesError::Ring(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for SeriesError {}

impl From<RingError> for SeriesError {
    fn from(e: RingError) -> Self {
        SeriesError::Ring(e)
    }
}

/// Result of comparing two series coefficient-by-coefficient to a depth.
#[derive(Clone, Debug, PartialEq)]
pub enum CompareOutcome<R: Ring> {
    Pass {
        /// Number of coefficient slots that were compared.
        compared: u64,
    },
    Fail {
        exponent: Frac,
        lhs: R::Elem,
        rhs: R::Elem,
    },
}

impl<R: Ring> CompareOutcome<R> {
    pub fn is_pass(&self) -> bool {
        matches!(self, CompareOutcome::Pass { .. })
    }
}

#[derive(Clone, PartialEq)]
pub struct LaurentSeries<R: Ring> {
    ring: R,
    /// Exponent denominator; exponents live on the grid k/den.
    den: i64,
    /// Exponent numerator of `coeffs[0]`, in units of 1/den.
    min: i64,
    /// Dense coefficients; slots past the vector up to the order are zero.
    coeffs: Vec<R::Elem>,
    /// Exclusive truncation bound, in units of 1/den.
    order_num: i64,
}

impl<R: Ring> LaurentSeries<R> {
    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// The zero series, known up to (but not at) `order`.
    pub fn zero(ring: R, order: Frac) -> Self {
        let den = order.den();
        LaurentSeries {
            ring,
            den,
            min: order.num(),
            coeffs: Vec::new(),
            order_num: order.num(),
        }
        .normalized()
    }

    pub fn one(ring: R, order: Frac) -> Self {
        let c = ring.one();
        Self::monomial(ring, c, Frac::ZERO, order)
    }

    /// The single term `c * q^e`.
    pub fn monomial(ring: R, c: R::Elem, e: Frac, order: Frac) -> Self {
        let den = lcm_i64(e.den(), order.den());
        let min = e.on_grid(den);
        let order_num = order.on_grid(den);
        if min >= order_num || ring.is_zero(&c) {
            return Self::zero(ring, order);
        }
        LaurentSeries {
            ring,
            den,
            min,
            coeffs: vec![c],
            order_num,
        }
        .normalized()
    }

    /// Build from integer-exponent coefficients `coeffs[j]` at exponent `min + j`.
    /// Slots at or past `order` are discarded.
    pub fn from_integer_coeffs(ring: R, min: i64, mut coeffs: Vec<R::Elem>, order: i64) -> Self {
        let keep = (order - min).clamp(0, coeffs.len() as i64) as usize;
        coeffs.truncate(keep);
        LaurentSeries {
            ring,
            den: 1,
            min,
            coeffs,
            order_num: order,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        // trim leading zeros
        let lead = self
            .coeffs
            .iter()
            .position(|c| !self.ring.is_zero(c))
            .unwrap_or(self.coeffs.len());
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min += lead as i64;
        }
        // trim trailing zeros
        let tail = self
            .coeffs
            .iter()
            .rposition(|c| !self.ring.is_zero(c))
            .map(|p| p + 1)
            .unwrap_or(0);
        self.coeffs.truncate(tail);
        if self.coeffs.is_empty() {
            self.min = self.order_num;
        }
        // reduce the exponent denominator when everything sits on a coarser grid
        if self.den > 1 {
            let mut g = gcd(self.den, self.order_num.unsigned_abs() as i64);
            if !self.coeffs.is_empty() {
                g = gcd(g, self.min.unsigned_abs() as i64);
                for (j, c) in self.coeffs.iter().enumerate() {
                    if g == 1 {
                        break;
                    }
                    if !self.ring.is_zero(c) {
                        g = gcd(g, (self.min + j as i64).unsigned_abs() as i64);
                    }
                }
            }
            if g > 1 {
                let stride = g as usize;
                let new_len = if self.coeffs.is_empty() {
                    0
                } else {
                    (self.coeffs.len() - 1) / stride + 1
                };
                let mut new_coeffs = Vec::with_capacity(new_len);
                for j in (0..self.coeffs.len()).step_by(stride) {
                    new_coeffs.push(self.coeffs[j].clone());
                }
                debug_assert!(self
                    .coeffs
                    .iter()
                    .enumerate()
                    .all(|(j, c)| j % stride == 0 || self.ring.is_zero(c)));
                self.coeffs = new_coeffs;
                self.den /= g;
                self.min /= g;
                self.order_num /= g;
            }
        }
        self
    }

    /// Exclusive truncation order.
    pub fn order(&self) -> Frac {
        Frac::new(self.order_num, self.den)
    }

    /// Exponent of the lowest nonzero coefficient, if any.
    pub fn min_exponent(&self) -> Option<Frac> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(Frac::new(self.min, self.den))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn nnz(&self) -> usize {
        self.coeffs
            .iter()
            .filter(|c| !self.ring.is_zero(c))
            .count()
    }

    /// Effective minimum for truncation propagation (order for a zero series).
    fn min_eff(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.order_num
        } else {
            self.min
        }
    }

    /// Coefficient at exponent `e`; `None` when `e` is at or past the order.
    pub fn coeff_at(&self, e: Frac) -> Option<R::Elem> {
        if e >= self.order() {
            return None;
        }
        if self.den % e.den() != 0 {
            // off-grid exponents carry zero coefficients
            return Some(self.ring.zero());
        }
        let k = e.on_grid(self.den);
        let j = k - self.min;
        if j < 0 || j as usize >= self.coeffs.len() {
            Some(self.ring.zero())
        } else {
            Some(self.coeffs[j as usize].clone())
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), SeriesError> {
        if self.ring != other.ring {
            return Err(SeriesError::RingMismatch(
                self.ring.describe(),
                other.ring.describe(),
            ));
        }
        Ok(())
    }

    /// Rescale to a finer grid with denominator `l` (which `den` must divide).
    fn regrid(&self, l: i64) -> Self {
        if l == self.den {
            return self.clone();
        }
        let f = l / self.den;
        debug_assert!(f * self.den == l);
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * f as usize);
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                for _ in 0..f - 1 {
                    coeffs.push(self.ring.zero());
                }
            }
            coeffs.push(c.clone());
        }
        LaurentSeries {
            ring: self.ring.clone(),
            den: l,
            min: self.min * f,
            coeffs,
            order_num: self.order_num * f,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        let l = lcm_i64(self.den, other.den);
        let (fa, fb) = (l / self.den, l / other.den);
        let order_num = (self.order_num * fa).min(other.order_num * fb);
        let mins: Vec<i64> = [
            (!self.coeffs.is_empty()).then_some(self.min * fa),
            (!other.coeffs.is_empty()).then_some(other.min * fb),
        ]
        .into_iter()
        .flatten()
        .collect();
        if mins.is_empty() {
            return Ok(Self::zero(self.ring.clone(), Frac::new(order_num, l)));
        }
        let min = *mins.iter().min().unwrap();
        let len = (order_num - min).max(0) as usize;
        let mut acc = vec![self.ring.zero(); len];
        for (s, f) in [(self, fa), (other, fb)] {
            for (j, c) in s.coeffs.iter().enumerate() {
                let idx = (s.min + j as i64) * f - min;
                if idx >= 0 && (idx as usize) < len {
                    self.ring.add_assign(&mut acc[idx as usize], c);
                }
            }
        }
        Ok(LaurentSeries {
            ring: self.ring.clone(),
            den: l,
            min,
            coeffs: acc,
            order_num,
        }
        .normalized())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            ring: self.ring.clone(),
            den: self.den,
            min: self.min,
            coeffs: self.coeffs.iter().map(|c| self.ring.neg(c)).collect(),
            order_num: self.order_num,
        }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        if self.ring.is_zero(c) {
            return Self::zero(self.ring.clone(), self.order());
        }
        LaurentSeries {
            ring: self.ring.clone(),
            den: self.den,
            min: self.min,
            coeffs: self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect(),
            order_num: self.order_num,
        }
        .normalized()
    }

    /// Multiply by the monomial `c * q^e`.
    pub fn monomial_mul(&self, c: &R::Elem, e: Frac) -> Self {
        let l = lcm_i64(self.den, e.den());
        let shifted = self.regrid(l);
        let k = e.on_grid(l);
        LaurentSeries {
            ring: shifted.ring,
            den: l,
            min: shifted.min + k,
            coeffs: shifted.coeffs,
            order_num: shifted.order_num + k,
        }
        .scale(c)
    }

    /// Shift exponents by `e` (multiply by `q^e`).
    pub fn shift(&self, e: Frac) -> Self {
        self.monomial_mul(&self.ring.one(), e)
    }

    /// Truncated product with the standard propagation rule.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_ring(other)?;
        let l = lcm_i64(self.den, other.den);
        let (fa, fb) = (l / self.den, l / other.den);
        let order_num = (self.order_num * fa + other.min_eff() * fb)
            .min(other.order_num * fb + self.min_eff() * fa);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::zero(self.ring.clone(), Frac::new(order_num, l)));
        }
        let min = self.min * fa + other.min * fb;
        let len = (order_num - min).max(0) as usize;
        let mut acc = vec![self.ring.zero(); len];
        // outer loop over the sparser operand
        let (x, fx, y, fy) = if self.nnz() <= other.nnz() {
            (self, fa, other, fb)
        } else {
            (other, fb, self, fa)
        };
        for (j, c) in x.coeffs.iter().enumerate() {
            if x.ring.is_zero(c) {
                continue;
            }
            let base = (x.min + j as i64) * fx + y.min * fy - min;
            for (k, d) in y.coeffs.iter().enumerate() {
                if y.ring.is_zero(d) {
                    continue;
                }
                let idx = base + (k as i64) * fy;
                if idx >= len as i64 {
                    break;
                }
                self.ring.mul_add_assign(&mut acc[idx as usize], c, d);
            }
        }
        Ok(LaurentSeries {
            ring: self.ring.clone(),
            den: l,
            min,
            coeffs: acc,
            order_num,
        }
        .normalized())
    }

    /// Multiplicative inverse up to truncation. The lowest-order coefficient
    /// must be a unit; the relative precision is preserved.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let Some(first) = self.coeffs.first() else {
            return Err(SeriesError::NonUnitLeadingCoefficient("0".into()));
        };
        let c0 = first.clone();
        let c0_inv = self.ring.inv(&c0).map_err(|_| {
            SeriesError::NonUnitLeadingCoefficient(self.ring.format_elem(&c0))
        })?;
        let m = self.min;
        let rel = (self.order_num - m) as usize;
        // nonzero slots of the normalized unit part, skipping the constant
        let u: Vec<(usize, &R::Elem)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !self.ring.is_zero(c))
            .collect();
        let mut v = Vec::with_capacity(rel);
        v.push(c0_inv.clone());
        for n in 1..rel {
            let mut s = self.ring.zero();
            for &(k, uk) in &u {
                if k > n {
                    break;
                }
                self.ring.mul_add_assign(&mut s, uk, &v[n - k]);
            }
            let t = self.ring.neg(&self.ring.mul(&c0_inv, &s));
            v.push(t);
        }
        Ok(LaurentSeries {
            ring: self.ring.clone(),
            den: self.den,
            min: -m,
            coeffs: v,
            order_num: self.order_num - 2 * m,
        }
        .normalized())
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, k: i64) -> Result<Self, SeriesError> {
        if k < 0 {
            return self.invert()?.pow(-k);
        }
        // preserve the relative precision of the base for the k = 0 case
        let mut acc = Self::one(
            self.ring.clone(),
            Frac::new(self.order_num - self.min_eff(), self.den),
        );
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Substitute q -> q^k for integer k >= 1.
    pub fn substitute_q_power(&self, k: i64) -> Self {
        assert!(k >= 1, "q-power substitution requires k >= 1");
        if k == 1 {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * k as usize);
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                for _ in 0..k - 1 {
                    coeffs.push(self.ring.zero());
                }
            }
            coeffs.push(c.clone());
        }
        LaurentSeries {
            ring: self.ring.clone(),
            den: self.den,
            min: self.min * k,
            coeffs,
            order_num: self.order_num * k,
        }
        .normalized()
    }

    /// ℓ-dissection: returns `A_0 .. A_{ℓ-1}` with `f(q) = Σ_j q^j A_j(q^ℓ)`.
    pub fn dissect(&self, l: i64) -> Result<Vec<Self>, SeriesError> {
        assert!(l >= 1);
        if self.den != 1 {
            return Err(SeriesError::FractionalExponents);
        }
        let mut parts = Vec::with_capacity(l as usize);
        for j in 0..l {
            // A_j coefficients at m where m*l + j < order
            let order_j = ceil_div(self.order_num - j, l);
            let mut slots: Vec<(i64, R::Elem)> = Vec::new();
            for (s, c) in self.coeffs.iter().enumerate() {
                let e = self.min + s as i64;
                if e.rem_euclid(l) == j && !self.ring.is_zero(c) {
                    slots.push((e.div_euclid(l), c.clone()));
                }
            }
            let part = if let Some(&(mn, _)) = slots.first() {
                let len = (order_j - mn).max(0) as usize;
                let mut coeffs = vec![self.ring.zero(); len];
                for (m, c) in slots {
                    let idx = (m - mn) as usize;
                    if idx < len {
                        coeffs[idx] = c;
                    }
                }
                LaurentSeries {
                    ring: self.ring.clone(),
                    den: 1,
                    min: mn,
                    coeffs,
                    order_num: order_j,
                }
                .normalized()
            } else {
                Self::zero(self.ring.clone(), Frac::from_int(order_j))
            };
            parts.push(part);
        }
        Ok(parts)
    }

    /// Inverse of `dissect`: `Σ_j q^j parts[j](q^ℓ)`.
    pub fn reassemble(ring: R, parts: &[Self]) -> Result<Self, SeriesError> {
        let l = parts.len() as i64;
        let mut acc: Option<Self> = None;
        for (j, p) in parts.iter().enumerate() {
            let term = p.substitute_q_power(l).shift(Frac::from_int(j as i64));
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Self::zero(ring, Frac::ZERO)))
    }

    /// Compare coefficients at all exponents `<= depth` (inclusive).
    pub fn compare_to_depth(
        &self,
        other: &Self,
        depth: Frac,
    ) -> Result<CompareOutcome<R>, SeriesError> {
        self.check_ring(other)?;
        let available = self.order().min(other.order());
        if depth >= available {
            return Err(SeriesError::InsufficientTruncation {
                needed: depth,
                available,
            });
        }
        let l = lcm_i64(self.den, other.den);
        let a = self.regrid(l);
        let b = other.regrid(l);
        let lo = a.min_eff().min(b.min_eff());
        let hi = depth.scale_int(l).floor(); // inclusive bound on the l-grid
        let mut compared = 0u64;
        for k in lo..=hi {
            let e = Frac::new(k, l);
            let x = a.coeff_at(e).unwrap_or_else(|| self.ring.zero());
            let y = b.coeff_at(e).unwrap_or_else(|| self.ring.zero());
            compared += 1;
            if x != y {
                return Ok(CompareOutcome::Fail {
                    exponent: e,
                    lhs: x,
                    rhs: y,
                });
            }
        }
        Ok(CompareOutcome::Pass { compared })
    }

    /// True when every nonzero exponent has the same fractional part.
    pub fn single_coset_mod_1(&self) -> bool {
        let mut residue: Option<i64> = None;
        for (j, c) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            let r = (self.min + j as i64).rem_euclid(self.den);
            match residue {
                None => residue = Some(r),
                Some(r0) if r0 != r => return false,
                _ => {}
            }
        }
        true
    }

    /// Fractional part of the lowest nonzero exponent, if any.
    pub fn coset_mod_1(&self) -> Option<Frac> {
        self.min_exponent().map(|e| e.frac_part())
    }

    /// Iterate (exponent, coefficient) over stored nonzero slots.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (Frac, &R::Elem)> + '_ {
        self.coeffs.iter().enumerate().filter_map(move |(j, c)| {
            if self.ring.is_zero(c) {
                None
            } else {
                Some((Frac::new(self.min + j as i64, self.den), c))
            }
        })
    }

    /// Equality as truncated series (normalizes away padding; orders must match).
    pub fn series_eq(&self, other: &Self) -> bool {
        if self.ring != other.ring || self.order() != other.order() {
            return false;
        }
        let l = lcm_i64(self.den, other.den);
        let a = self.regrid(l);
        let b = other.regrid(l);
        a.min_eff() == b.min_eff() && a.coeffs == b.coeffs
    }

    /// Map coefficients into another ring.
    pub fn map_ring<S: Ring>(
        &self,
        ring: S,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> LaurentSeries<S> {
        LaurentSeries {
            ring,
            den: self.den,
            min: self.min,
            coeffs: self.coeffs.iter().map(f).collect(),
            order_num: self.order_num,
        }
        .normalized()
    }
}

impl<R: Ring> fmt::Debug for LaurentSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (shown, (e, c)) in self.iter_nonzero().enumerate() {
            if shown == 12 {
                write!(f, " + ...")?;
                break;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({})q^{}", self.ring.format_elem(c), e)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " [O(q^{})]", self.order())
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    crate::number::gcd_i64(a.unsigned_abs(), b.unsigned_abs()) as i64
}

fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    -((-a).div_euclid(b))
}

/// Lift an integer-coefficient series into the rationals.
pub fn embed_int_to_rat(
    s: &LaurentSeries<crate::ring::IntegerRing>,
) -> LaurentSeries<crate::ring::RationalRing> {
    s.map_ring(crate::ring::RationalRing, |c| {
        crate::number::Rat::from_integer(c.clone())
    })
}

/// Lift a rational-coefficient series into Q(ζ_ℓ).
pub fn embed_rat_to_cyclo(
    s: &LaurentSeries<crate::ring::RationalRing>,
    ring: &crate::ring::CyclotomicRing,
) -> LaurentSeries<crate::ring::CyclotomicRing> {
    s.map_ring(ring.clone(), |c| {
        crate::cyclotomic::Cyclotomic::from_rat(ring.order(), c.clone())
    })
}
