//! Series in (z, q): truncated in q, with each q^n coefficient a Laurent
//! polynomial in z. Storage is q-major (a column per power of q, sparse map
//! over z-exponents), which is the layout both consumers need: extracting the
//! z^m coefficient of q^n, and evaluating z at a root of unity.

use crate::cyclotomic::Cyclotomic;
use crate::ring::{CyclotomicRing, Ring};
use crate::series::LaurentSeries;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct BivariateSeries<R: Ring> {
    ring: R,
    /// Exclusive truncation order in q; exponents are integers `0 <= n < order`.
    order: i64,
    cols: Vec<BTreeMap<i64, R::Elem>>,
}

impl<R: Ring> BivariateSeries<R> {
    pub fn zero(ring: R, order: i64) -> Self {
        assert!(order >= 0);
        BivariateSeries {
            ring,
            order,
            cols: (0..order).map(|_| BTreeMap::new()).collect(),
        }
    }

    pub fn one(ring: R, order: i64) -> Self {
        let mut s = Self::zero(ring, order);
        if order > 0 {
            let one = s.ring.one();
            s.cols[0].insert(0, one);
        }
        s
    }

    /// The single term `c * z^m * q^n`.
    pub fn monomial(ring: R, c: R::Elem, z_exp: i64, q_exp: i64, order: i64) -> Self {
        assert!(q_exp >= 0);
        let mut s = Self::zero(ring, order);
        if q_exp < order && !s.ring.is_zero(&c) {
            s.cols[q_exp as usize].insert(z_exp, c);
        }
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// The coefficient of `z^m q^n` (the M-type coefficient array).
    pub fn coefficient(&self, m: i64, n: i64) -> Option<R::Elem> {
        if n < 0 || n >= self.order {
            return None;
        }
        Some(
            self.cols[n as usize]
                .get(&m)
                .cloned()
                .unwrap_or_else(|| self.ring.zero()),
        )
    }

    /// The full z-Laurent polynomial at q^n.
    pub fn column(&self, n: i64) -> Option<&BTreeMap<i64, R::Elem>> {
        if n < 0 || n >= self.order {
            None
        } else {
            Some(&self.cols[n as usize])
        }
    }

    pub fn add_assign_term(&mut self, c: R::Elem, z_exp: i64, q_exp: i64) {
        if q_exp < 0 || q_exp >= self.order || self.ring.is_zero(&c) {
            return;
        }
        let col = &mut self.cols[q_exp as usize];
        let entry = col.entry(z_exp).or_insert_with(|| self.ring.zero());
        let sum = self.ring.add(entry, &c);
        if self.ring.is_zero(&sum) {
            col.remove(&z_exp);
        } else {
            *entry = sum;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.ring == other.ring, "bivariate ring mismatch");
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.ring.clone(), order);
        for n in 0..order as usize {
            for src in [&self.cols[n], &other.cols[n]] {
                for (&m, c) in src {
                    out.add_assign_term(c.clone(), m, n as i64);
                }
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        let ring = self.ring.clone();
        for col in out.cols.iter_mut() {
            for c in col.values_mut() {
                *c = ring.neg(c);
            }
        }
        out
    }

    /// Truncated product. Both operands are power series in q (min exponent
    /// 0), so the result order is the min of the operand orders.
    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.ring == other.ring, "bivariate ring mismatch");
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.ring.clone(), order);
        for n1 in 0..order {
            if self.cols[n1 as usize].is_empty() {
                continue;
            }
            for n2 in 0..order - n1 {
                if other.cols[n2 as usize].is_empty() {
                    continue;
                }
                let target = (n1 + n2) as usize;
                for (&m1, c1) in &self.cols[n1 as usize] {
                    for (&m2, c2) in &other.cols[n2 as usize] {
                        let entry = out.cols[target]
                            .entry(m1 + m2)
                            .or_insert_with(|| self.ring.zero());
                        self.ring.mul_add_assign(entry, c1, c2);
                    }
                }
            }
        }
        out.prune();
        out
    }

    /// Multiply by a scalar q-power-series (integer exponents, min >= 0).
    pub fn scalar_series_mul(&self, s: &LaurentSeries<R>) -> Self {
        assert!(self.ring == *s.ring(), "bivariate ring mismatch");
        let s_order = s.order();
        assert!(
            s_order.is_integer(),
            "scalar factor must have integer exponents"
        );
        let order = self.order.min(s_order.num()).max(0);
        let mut out = Self::zero(self.ring.clone(), order);
        for (e, c) in s.iter_nonzero() {
            assert!(
                e.is_integer() && e.num() >= 0,
                "scalar factor must be a power series"
            );
            let shift = e.num();
            if shift >= out.order {
                break;
            }
            for n in 0..self.order.min(out.order - shift) {
                for (&m, d) in &self.cols[n as usize] {
                    let entry = out.cols[(n + shift) as usize]
                        .entry(m)
                        .or_insert_with(|| self.ring.zero());
                    self.ring.mul_add_assign(entry, c, d);
                }
            }
        }
        out.prune();
        out
    }

    /// Multiply by `c * z^j * q^e` with `e >= 0` (order grows by `e`).
    pub fn monomial_mul(&self, c: &R::Elem, z_exp: i64, q_exp: i64) -> Self {
        assert!(q_exp >= 0);
        let mut out = Self::zero(self.ring.clone(), self.order + q_exp);
        for n in 0..self.order {
            for (&m, d) in &self.cols[n as usize] {
                out.add_assign_term(self.ring.mul(c, d), m + z_exp, n + q_exp);
            }
        }
        out
    }

    fn prune(&mut self) {
        let ring = self.ring.clone();
        for col in self.cols.iter_mut() {
            col.retain(|_, c| !ring.is_zero(c));
        }
    }

    /// Truncate to a smaller q-order.
    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order).max(0);
        BivariateSeries {
            ring: self.ring.clone(),
            order,
            cols: self.cols[..order as usize].to_vec(),
        }
    }

    /// Set z = 1: collapse each column to the sum of its coefficients.
    pub fn eval_z_one(&self) -> LaurentSeries<R> {
        let coeffs: Vec<R::Elem> = self
            .cols
            .iter()
            .map(|col| {
                let mut s = self.ring.zero();
                for c in col.values() {
                    self.ring.add_assign(&mut s, c);
                }
                s
            })
            .collect();
        LaurentSeries::from_integer_coeffs(self.ring.clone(), 0, coeffs, self.order)
    }

    /// Check the z <-> z^{-1} symmetry of every stored column.
    pub fn is_z_symmetric(&self) -> bool {
        self.cols.iter().all(|col| {
            col.iter().all(|(m, c)| {
                col.get(&-m)
                    .map(|d| d == c)
                    .unwrap_or_else(|| self.ring.is_zero(c))
            })
        })
    }
}

/// Evaluate z at the primitive ℓ-th root of unity, mapping coefficients
/// through `lift` into Q(ζ_ℓ) and reducing z-exponents mod ℓ.
pub fn eval_z_at_root<R: Ring>(
    f: &BivariateSeries<R>,
    ell: i64,
    lift: impl Fn(&R::Elem) -> crate::number::Rat,
) -> Result<LaurentSeries<CyclotomicRing>, crate::cyclotomic::CycloError> {
    let ring = CyclotomicRing::new(ell)?;
    let mut coeffs: Vec<Cyclotomic> = Vec::with_capacity(f.order().max(0) as usize);
    for n in 0..f.order() {
        // group by residue of the z-exponent so each column costs at most
        // ell basis combinations
        let mut residue_sums: Vec<crate::number::Rat> =
            vec![crate::number::Rat::zero(); ell as usize];
        if let Some(col) = f.column(n) {
            for (&m, c) in col {
                let r = m.rem_euclid(ell) as usize;
                residue_sums[r] += lift(c);
            }
        }
        let mut acc = ring.zero();
        for (k, s) in residue_sums.iter().enumerate() {
            if !s.is_zero() {
                let term = ring.zeta_power(k as i64).expect("cyclotomic ring").scale(s);
                acc = ring.add(&acc, &term);
            }
        }
        coeffs.push(acc);
    }
    Ok(LaurentSeries::from_integer_coeffs(ring, 0, coeffs, f.order()))
}
