//! Dense univariate polynomials over [`Scalar`].
//!
//! Coefficients are stored in ascending order with no trailing structural
//! zeros, so `degree` is the index of the last stored coefficient and the
//! zero polynomial has degree -1. Under the float backend a coefficient is
//! only dropped when it is an exact binary zero; "numerically tiny" never
//! changes the recorded degree.

use crate::scalar::{Backend, Scalar, C64};

#[derive(Debug, Clone)]
pub struct Polynomial {
    backend: Backend,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(backend: Backend, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { backend, coeffs }
    }

    pub fn zero(backend: Backend) -> Self {
        Polynomial {
            backend,
            coeffs: Vec::new(),
        }
    }

    pub fn one(backend: Backend) -> Self {
        Polynomial::new(backend, vec![backend.one()])
    }

    pub fn constant(backend: Backend, c: Scalar) -> Self {
        Polynomial::new(backend, vec![c])
    }

    /// `z^k`.
    pub fn monomial(backend: Backend, k: usize) -> Self {
        let mut coeffs = vec![backend.zero(); k + 1];
        coeffs[k] = backend.one();
        Polynomial::new(backend, coeffs)
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.backend.zero())
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient; `None` for the zero
    /// polynomial.
    pub fn ord_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, z: &Scalar) -> Scalar {
        let mut acc = self.backend.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    /// Double-precision evaluation for reporting; use only on polynomials
    /// whose coefficients fit the double range.
    pub fn eval_c64(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    pub fn add(&self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) + &o.coeff(k));
        }
        Polynomial::new(self.backend, out)
    }

    pub fn sub(&self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) - &o.coeff(k));
        }
        Polynomial::new(self.backend, out)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial::new(self.backend, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero(self.backend);
        }
        let mut out = vec![self.backend.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::new(self.backend, out)
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        Polynomial::new(self.backend, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift_up(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![self.backend.zero(); k];
        out.extend(self.coeffs.iter().cloned());
        Polynomial::new(self.backend, out)
    }

    /// Divide by `z^k`; panics if the low-order coefficients are not zero.
    pub fn shift_down(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        assert!(
            self.coeffs.iter().take(k).all(|c| c.is_zero()),
            "shift_down would truncate nonzero terms"
        );
        Polynomial::new(self.backend, self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero(self.backend);
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| {
                let k = self.backend.from_int(k as i64);
                c * &k
            })
            .collect();
        Polynomial::new(self.backend, out)
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv();
                self.scale(&inv)
            }
        }
    }

    /// Quotient and remainder with `deg r < deg d`. The divisor must be
    /// nonzero.
    pub fn divrem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.degree() < d.degree() {
            return (Polynomial::zero(self.backend), self.clone());
        }
        let dl = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let mut quo = vec![self.backend.zero(); rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            if rem[top].is_zero() {
                continue;
            }
            let q = &rem[top] / &dl;
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[top - dd + j] = &rem[top - dd + j] - &(&q * dc);
            }
            quo[top - dd] = q;
        }
        (
            Polynomial::new(self.backend, quo),
            Polynomial::new(self.backend, rem.into_iter().take(dd).collect()),
        )
    }

    /// Sum of coefficient moduli, in double precision.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs_f64()).sum()
    }

    /// Grid maximum of `|p|` on the circle `|z| = radius`. This is a lower
    /// bound for the true sup norm; the grid is refined with the degree so
    /// the gap stays small for the degrees used here.
    pub fn sup_norm_on_circle(&self, radius: f64, grid: usize) -> f64 {
        let n = grid
            .max(crate::tolerances::MIN_SUP_GRID)
            .max(4 * (self.coeffs.len() + 1));
        let mut best = 0.0f64;
        for k in 0..n {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let z = C64::new(radius * t.cos(), radius * t.sin());
            let v = self.eval_c64(z).norm();
            if v > best {
                best = v;
            }
        }
        best
    }

    /// Monic greatest common divisor; exact backend only.
    pub fn gcd_exact(&self, o: &Polynomial) -> Polynomial {
        assert!(
            matches!(self.backend, Backend::Exact),
            "gcd requires the exact backend"
        );
        let mut a = self.clone();
        let mut b = o.clone();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let b_monic = b.monic();
            let (_, r) = a.divrem(&b_monic);
            a = b_monic;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Square-free decomposition (exact backend): returns pairs
    /// `(factor, multiplicity)` with each factor monic and square-free, and
    /// the product of `factor^multiplicity` equal to the monic input.
    pub fn square_free_decomposition(&self) -> Vec<(Polynomial, usize)> {
        assert!(
            matches!(self.backend, Backend::Exact),
            "square-free decomposition requires the exact backend"
        );
        let f = self.monic();
        if f.degree() <= 0 {
            return Vec::new();
        }
        let fp = f.derivative();
        let g = f.gcd_exact(&fp);
        if g.degree() <= 0 {
            return vec![(f, 1)];
        }
        let mut out = Vec::new();
        let (mut c, _) = f.divrem(&g);
        let (fp_over_g, _) = fp.divrem(&g);
        let mut d = fp_over_g.sub(&c.derivative());
        let mut i = 1usize;
        while c.degree() > 0 {
            let a = c.gcd_exact(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            let (c_next, _) = c.divrem(&a);
            let (d_over_a, _) = d.divrem(&a);
            d = d_over_a.sub(&c_next.derivative());
            c = c_next;
            i += 1;
        }
        out
    }

    /// Largest `k` with `z^k` dividing both, removed from a pair at once.
    pub fn common_zero_order(&self, o: &Polynomial) -> usize {
        match (self.ord_at_zero(), o.ord_at_zero()) {
            (Some(a), Some(b)) => a.min(b),
            _ => 0,
        }
    }

    /// Drop the first `k` coefficients without checking them. Callers use
    /// this to clear a `z^k` factor certified only up to the working
    /// tolerance, where [`Self::shift_down`] would reject float noise.
    pub fn drop_low(&self, k: usize) -> Polynomial {
        Polynomial::new(self.backend, self.coeffs.iter().skip(k).cloned().collect())
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .all(|(a, b)| a == b)
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "({c})")?;
            } else if k == 1 {
                write!(f, "({c})*z")?;
            } else {
                write!(f, "({c})*z^{k}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn ex() -> Backend {
        Backend::Exact
    }

    fn poly_i64(cs: &[i64]) -> Polynomial {
        Polynomial::new(ex(), cs.iter().map(|&c| ex().from_int(c)).collect())
    }

    #[test]
    fn degree_and_trim() {
        let p = Polynomial::new(ex(), vec![ex().from_int(1), ex().zero(), ex().zero()]);
        assert_eq!(p.degree(), 0);
        assert_eq!(Polynomial::zero(ex()).degree(), -1);
        assert_eq!(Polynomial::monomial(ex(), 3).degree(), 3);
    }

    #[test]
    fn arithmetic_ring_identities() {
        let p = poly_i64(&[1, -3, 2]);
        let q = poly_i64(&[0, 5, 0, 1]);
        let s = p.add(&q);
        assert_eq!(s.sub(&q), p);
        let m = p.mul(&q);
        let (quo, rem) = m.divrem(&q);
        assert_eq!(quo, p);
        assert!(rem.is_zero());
    }

    #[test]
    fn divrem_with_remainder() {
        // z^3 + 1 = (z^2)(z) + 1 against divisor z^2.
        let a = poly_i64(&[1, 0, 0, 1]);
        let d = poly_i64(&[0, 0, 1]);
        let (q, r) = a.divrem(&d);
        assert_eq!(q, poly_i64(&[0, 1]));
        assert_eq!(r, poly_i64(&[1]));
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (z-1)(z-2) and (z-1)(z+3) share z-1.
        let a = poly_i64(&[2, -3, 1]);
        let b = poly_i64(&[-3, 2, 1]);
        let g = a.gcd_exact(&b);
        assert_eq!(g, poly_i64(&[-1, 1]));
        // coprime pair
        let c = poly_i64(&[1, 1]);
        let d = poly_i64(&[2, 1]);
        assert_eq!(c.gcd_exact(&d).degree(), 0);
    }

    #[test]
    fn square_free_splits_multiplicities() {
        // (z-1)^2 (z+2)
        let p = poly_i64(&[2, -3, 0, 1]);
        let parts = p.square_free_decomposition();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (poly_i64(&[2, 1]), 1));
        assert_eq!(parts[1], (poly_i64(&[-1, 1]), 2));
        let rebuilt = parts.iter().fold(Polynomial::one(ex()), |acc, (f, m)| {
            let mut t = acc;
            for _ in 0..*m {
                t = t.mul(f);
            }
            t
        });
        assert_eq!(rebuilt, p.monic());
    }

    #[test]
    fn ord_and_shifts() {
        let p = poly_i64(&[0, 0, 7, 1]);
        assert_eq!(p.ord_at_zero(), Some(2));
        assert_eq!(p.shift_down(2), poly_i64(&[7, 1]));
        assert_eq!(p.shift_down(2).shift_up(2), p);
        assert_eq!(Polynomial::zero(ex()).ord_at_zero(), None);
    }

    #[test]
    fn eval_exact_and_double() {
        let p = poly_i64(&[1, -3, 2]); // 2z^2 - 3z + 1 = (2z-1)(z-1)
        let half = ex().from_rat_pair(Rat::new(BigInt::from(1), BigInt::from(2)), Rat::zero());
        assert!(p.eval(&half).is_zero());
        let v = p.eval_c64(C64::new(2.0, 0.0));
        assert!((v.re - 3.0).abs() < 1e-14 && v.im.abs() < 1e-14);
    }

    #[test]
    fn sup_norm_is_lower_bound_near_truth() {
        // |z - 1| on |z| = 1 has sup 2 (at z = -1).
        let p = poly_i64(&[-1, 1]);
        let s = p.sup_norm_on_circle(1.0, 64);
        assert!(s <= 2.0 + 1e-12 && s > 1.99);
    }

    #[test]
    fn l1_norm_mixed_parts() {
        let b = ex();
        let p = Polynomial::new(
            b,
            vec![
                b.from_rat_pair(Rat::new(BigInt::from(3), BigInt::from(1)), Rat::new(BigInt::from(4), BigInt::from(1))),
                b.from_int(-2),
            ],
        );
        assert!((p.l1_norm() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn monic_normalizes_leading() {
        let p = poly_i64(&[2, 0, 4]);
        let m = p.monic();
        assert_eq!(m.leading().unwrap(), &ex().one());
        assert_eq!(m.coeff(0), ex().from_rat_pair(Rat::new(BigInt::from(1), BigInt::from(2)), Rat::zero()));
    }
}
