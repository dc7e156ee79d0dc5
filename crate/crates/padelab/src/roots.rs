//! Root extraction and unit-disk normalization.
//!
//! Roots are located in three stages: exact square-free decomposition (exact
//! backend) so every refined zero is simple, double-precision companion
//! eigenvalues as seeds, then Newton refinement at twice the working
//! precision. Refined candidates lying within the clustering radius of one
//! another are merged and reported as one root with the cluster size as
//! multiplicity, so "multiplicity" always means "indistinguishable at the
//! working precision", never a guess.

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;

use crate::poly::Polynomial;
use crate::scalar::{digits_to_bits, Backend, CBig, Scalar, C64};
use crate::tolerances::cluster_radius;

#[derive(Debug, Clone)]
pub struct RootEntry {
    pub location: C64,
    pub multiplicity: usize,
    /// Measured residual of the monic polynomial at `location`, with a
    /// factor-two margin; the true value at the reported point is below this.
    pub residual_bound: f64,
}

#[derive(Debug, Clone, Default)]
pub struct RootSet {
    pub roots: Vec<RootEntry>,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn max_modulus(&self) -> Option<f64> {
        self.roots
            .iter()
            .map(|r| r.location.norm())
            .fold(None, |m, v| Some(m.map_or(v, |m: f64| m.max(v))))
    }

    pub fn min_modulus(&self) -> Option<f64> {
        self.roots
            .iter()
            .map(|r| r.location.norm())
            .fold(None, |m, v| Some(m.map_or(v, |m: f64| m.min(v))))
    }

    /// Locations repeated by multiplicity, in the stored order.
    pub fn with_multiplicity(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.total_multiplicity());
        for r in &self.roots {
            for _ in 0..r.multiplicity {
                out.push(r.location);
            }
        }
        out
    }
}

#[derive(Debug)]
pub enum RootError {
    ZeroPolynomial,
}

impl std::fmt::Display for RootError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RootError::ZeroPolynomial => write!(f, "root extraction on the zero polynomial"),
        }
    }
}

impl std::error::Error for RootError {}

/// Internal refined root: high-precision location, multiplicity, residual.
pub struct RefinedRoot {
    pub location: CBig,
    pub multiplicity: usize,
    pub residual_bound: f64,
}

fn to_cbig_coeffs(p: &Polynomial, bits: usize) -> Vec<CBig> {
    p.coeffs().iter().map(|c| c.to_cbig(bits)).collect()
}

fn eval_cbig(coeffs: &[CBig], z: &CBig) -> CBig {
    let bits = z.bits();
    let mut acc = CBig::zero(bits);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

fn derivative_cbig(coeffs: &[CBig], bits: usize) -> Vec<CBig> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale_re(&astro_float::BigFloat::from_f64(k as f64, bits)))
        .collect()
}

/// Full high-precision pipeline; the public [`find_roots`] projects this to
/// double precision.
pub fn refine_roots(p: &Polynomial, digits: u32) -> Result<Vec<RefinedRoot>, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let refine_bits = 2 * digits_to_bits(digits);
    if p.degree() == 0 {
        return Ok(Vec::new());
    }
    let ord = p.ord_at_zero().expect("nonzero polynomial");
    let body = p.shift_down(ord);
    let mut out = Vec::new();
    if ord > 0 {
        out.push(RefinedRoot {
            location: CBig::zero(refine_bits),
            multiplicity: ord,
            residual_bound: 0.0,
        });
    }
    if body.degree() >= 1 {
        let is_float = matches!(p.backend(), Backend::Float { .. });
        let factors: Vec<(Polynomial, usize)> = if is_float {
            vec![(body.monic(), 1)]
        } else {
            body.square_free_decomposition()
        };
        for (factor, mult) in factors {
            if factor.degree() < 1 {
                continue;
            }
            let cands = refine_squarefree(&factor, refine_bits, if is_float { 260 } else { 120 });
            for (loc, count, resid) in cluster(cands, cluster_radius(digits)) {
                out.push(RefinedRoot {
                    location: loc,
                    multiplicity: count * mult,
                    residual_bound: resid,
                });
            }
        }
    }
    let total: usize = out.iter().map(|r| r.multiplicity).sum();
    assert_eq!(
        total as isize,
        p.degree(),
        "root multiplicities must sum to the degree"
    );
    sort_refined(&mut out);
    Ok(out)
}

/// Locate all roots of `p` with multiplicities and residual bounds.
pub fn find_roots(p: &Polynomial, digits: u32) -> Result<RootSet, RootError> {
    let refined = refine_roots(p, digits)?;
    Ok(RootSet {
        roots: refined
            .into_iter()
            .map(|r| RootEntry {
                location: r.location.to_c64(),
                multiplicity: r.multiplicity,
                residual_bound: r.residual_bound,
            })
            .collect(),
    })
}

fn sort_refined(v: &mut [RefinedRoot]) {
    v.sort_by(|a, b| {
        let (ca, cb) = (a.location.to_c64(), b.location.to_c64());
        let ka = (ca.norm(), ca.arg());
        let kb = (cb.norm(), cb.arg());
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
}

fn refine_squarefree(factor: &Polynomial, refine_bits: usize, max_iter: usize) -> Vec<(CBig, f64)> {
    let monic = factor.monic();
    let seeds = companion_seeds(&monic);
    let coeffs = to_cbig_coeffs(&monic, refine_bits);
    let deriv = derivative_cbig(&coeffs, refine_bits);
    let step_stop = -0.9 * refine_bits as f64 * std::f64::consts::LN_2;
    seeds
        .into_iter()
        .map(|s| {
            let mut z = CBig::from_f64s(s.re, s.im, refine_bits);
            for _ in 0..max_iter {
                let fz = eval_cbig(&coeffs, &z);
                if fz.is_zero() {
                    break;
                }
                let dz = eval_cbig(&deriv, &z);
                if dz.is_zero() {
                    break;
                }
                let step = fz.div(&dz);
                z = z.sub(&step);
                let scale = if z.is_zero() { 0.0 } else { z.ln_abs().max(0.0) };
                if step.ln_abs() - scale < step_stop {
                    break;
                }
            }
            let resid = eval_cbig(&coeffs, &z);
            let bound = if resid.is_zero() {
                0.0
            } else {
                2.0 * resid.ln_abs().exp()
            };
            (z, bound)
        })
        .collect()
}

/// Merge refined candidates within `tol * max(1, |z|)` of each other.
fn cluster(mut cands: Vec<(CBig, f64)>, tol: f64) -> Vec<(CBig, usize, f64)> {
    cands.sort_by(|a, b| {
        let (ca, cb) = (a.0.to_c64(), b.0.to_c64());
        (ca.norm(), ca.re, ca.im)
            .partial_cmp(&(cb.norm(), cb.re, cb.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let pts: Vec<C64> = cands.iter().map(|c| c.0.to_c64()).collect();
    let mut used = vec![false; cands.len()];
    let mut out = Vec::new();
    for i in 0..cands.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![i];
        used[i] = true;
        let radius = tol * pts[i].norm().max(1.0);
        for (j, u) in used.iter_mut().enumerate().skip(i + 1) {
            if !*u && (pts[j] - pts[i]).norm() <= radius {
                members.push(j);
                *u = true;
            }
        }
        let bits = cands[i].0.bits();
        let mut sum = CBig::zero(bits);
        let mut worst = 0.0f64;
        for &m in &members {
            sum = sum.add(&cands[m].0);
            worst = worst.max(cands[m].1);
        }
        let k = astro_float::BigFloat::from_f64(members.len() as f64, bits);
        let inv = astro_float::BigFloat::from_f64(1.0, bits).div(
            &k,
            bits,
            astro_float::RoundingMode::ToEven,
        );
        out.push((sum.scale_re(&inv), members.len(), worst));
    }
    out
}

fn companion_seeds(monic: &Polynomial) -> Vec<C64> {
    let d = monic.degree() as usize;
    let c: Vec<C64> = monic.coeffs().iter().map(|v| v.to_c64()).collect();
    match d {
        1 => return vec![-c[0]],
        2 => {
            // z^2 + bz + c with the stable sign choice.
            let (b, cc) = (c[1], c[0]);
            let disc = (b * b - 4.0 * cc).sqrt();
            let q = if (b + disc).norm() >= (b - disc).norm() {
                -(b + disc) / 2.0
            } else {
                -(b - disc) / 2.0
            };
            let r1 = q;
            let r2 = if q.norm() == 0.0 { q } else { cc / q };
            return vec![r1, r2];
        }
        _ => {}
    }
    let mut m = DMatrix::<C64>::zeros(d, d);
    for i in 0..d {
        m[(i, d - 1)] = -c[i];
        if i + 1 < d {
            m[(i + 1, i)] = C64::new(1.0, 0.0);
        }
    }
    match Schur::try_new(m, f64::EPSILON, 20_000) {
        Some(schur) => {
            let (_, t) = schur.unpack();
            (0..d).map(|i| t[(i, i)]).collect()
        }
        None => durand_kerner(&c),
    }
}

/// Simultaneous-iteration fallback used only if the eigenvalue path fails.
fn durand_kerner(monic_coeffs: &[C64]) -> Vec<C64> {
    let d = monic_coeffs.len() - 1;
    let eval = |z: C64| -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in monic_coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let seed = C64::new(0.4, 0.9);
    let mut zs: Vec<C64> = (0..d).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..800 {
        let mut moved = 0.0f64;
        for j in 0..d {
            let mut den = C64::new(1.0, 0.0);
            for k in 0..d {
                if k != j {
                    den *= zs[j] - zs[k];
                }
            }
            if den.norm() == 0.0 {
                continue;
            }
            let delta = eval(zs[j]) / den;
            zs[j] -= delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-14 {
            break;
        }
    }
    zs
}

/// A polynomial rewritten in the canonical unit-disk form: roots on or
/// inside the closed unit disk contribute monic factors `(z - r)`, roots
/// outside contribute `(1 - z/r)`, so the rewritten polynomial is the input
/// times a constant. On-circle ties take the monic branch.
#[derive(Debug, Clone)]
pub struct NormalizedPoly {
    pub poly: Polynomial,
    /// `poly = scale * input`.
    pub scale: Scalar,
    pub roots: RootSet,
    /// True when the rewrite was carried out in exact arithmetic.
    pub exact: bool,
}

pub fn normalize_unit_disk(p: &Polynomial, digits: u32) -> Result<NormalizedPoly, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    if p.degree() == 0 {
        let scale = p.coeff(0).inv();
        return Ok(NormalizedPoly {
            poly: Polynomial::one(p.backend()),
            scale,
            roots: RootSet::default(),
            exact: true,
        });
    }
    // Exact rewrite whenever the nonzero roots solve a linear factor.
    if matches!(p.backend(), Backend::Exact) {
        let ord = p.ord_at_zero().expect("nonzero polynomial");
        let body = p.shift_down(ord);
        if body.degree() <= 1 {
            return Ok(exact_linear_normalize(p, ord, &body));
        }
    }
    let refined = refine_roots(p, digits)?;
    let bits = 2 * digits_to_bits(digits);
    let mut scale = CBig::one(bits).div(&p.leading().unwrap().to_cbig(bits));
    for r in &refined {
        if r.location.to_c64().norm() > 1.0 {
            let factor = CBig::one(bits).neg().div(&r.location);
            for _ in 0..r.multiplicity {
                scale = scale.mul(&factor);
            }
        }
    }
    let scale = Scalar::Float(scale);
    let float_backend = Backend::Float { digits };
    let poly = Polynomial::new(
        float_backend,
        p.coeffs().iter().map(|c| c * &scale).collect(),
    );
    Ok(NormalizedPoly {
        poly,
        scale,
        roots: RootSet {
            roots: refined
                .into_iter()
                .map(|r| RootEntry {
                    location: r.location.to_c64(),
                    multiplicity: r.multiplicity,
                    residual_bound: r.residual_bound,
                })
                .collect(),
        },
        exact: false,
    })
}

fn exact_linear_normalize(p: &Polynomial, ord: usize, body: &Polynomial) -> NormalizedPoly {
    let mut roots = Vec::new();
    if ord > 0 {
        roots.push(RootEntry {
            location: C64::new(0.0, 0.0),
            multiplicity: ord,
            residual_bound: 0.0,
        });
    }
    let scale = if body.degree() == 0 {
        body.coeff(0).inv()
    } else {
        let lead = body.coeff(1);
        let zeta = &body.coeff(0).neg() / &lead;
        let interior = zeta
            .norm_sqr_rat()
            .map(|ns| ns <= crate::scalar::Rat::from(num_bigint::BigInt::from(1)))
            .expect("exact backend");
        roots.push(RootEntry {
            location: zeta.to_c64(),
            multiplicity: 1,
            residual_bound: 0.0,
        });
        if interior {
            lead.inv()
        } else {
            // (1 - z/r) = (-1/r)(z - r)
            (&lead * &zeta).inv().neg()
        }
    };
    let mut sorted = roots;
    sorted.sort_by(|a, b| {
        (a.location.norm(), a.location.arg())
            .partial_cmp(&(b.location.norm(), b.location.arg()))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    NormalizedPoly {
        poly: p.scale(&scale),
        scale,
        roots: RootSet { roots: sorted },
        exact: true,
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

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn simple_real_roots() {
        // (z-1)(z-2)(z-3) = z^3 - 6z^2 + 11z - 6
        let p = poly_i64(&[-6, 11, -6, 1]);
        let rs = find_roots(&p, 30).unwrap();
        assert_eq!(rs.total_multiplicity(), 3);
        let locs: Vec<f64> = rs.roots.iter().map(|r| r.location.re).collect();
        for (got, want) in locs.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-13, "got {got}, want {want}");
        }
        for r in &rs.roots {
            assert!(r.residual_bound < 1e-40);
            assert_eq!(r.multiplicity, 1);
        }
    }

    #[test]
    fn multiple_root_via_square_free() {
        // (z-1)^2 (z+2)
        let p = poly_i64(&[2, -3, 0, 1]);
        let rs = find_roots(&p, 30).unwrap();
        assert_eq!(rs.roots.len(), 2);
        let one = rs.roots.iter().find(|r| r.location.re > 0.0).unwrap();
        assert_eq!(one.multiplicity, 2);
        assert!((one.location.re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn zero_roots_counted_once() {
        let p = poly_i64(&[0, 0, 0, 5]); // 5z^3
        let rs = find_roots(&p, 30).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].multiplicity, 3);
        assert_eq!(rs.roots[0].location.norm(), 0.0);
    }

    #[test]
    fn complex_conjugate_pair() {
        let p = poly_i64(&[1, 0, 1]); // z^2 + 1
        let rs = find_roots(&p, 30).unwrap();
        assert_eq!(rs.total_multiplicity(), 2);
        for r in &rs.roots {
            assert!((r.location.norm() - 1.0).abs() < 1e-13);
            assert!(r.location.re.abs() < 1e-13);
        }
    }

    #[test]
    fn float_backend_double_root_clusters() {
        let b = Backend::Float { digits: 30 };
        // (z - 1/3)^2 = z^2 - (2/3)z + 1/9 entered as floats
        let p = Polynomial::new(
            b,
            vec![
                b.from_rat_pair(rat(1, 9), Rat::zero()),
                b.from_rat_pair(rat(-2, 3), Rat::zero()),
                b.one(),
            ],
        );
        let rs = find_roots(&p, 30).unwrap();
        assert_eq!(rs.roots.len(), 1, "cluster should merge the double root");
        assert_eq!(rs.roots[0].multiplicity, 2);
        assert!((rs.roots[0].location.re - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn normalize_exterior_linear_exact() {
        // z - 3 -> 1 - z/3, scale -1/3, stays exact.
        let p = poly_i64(&[-3, 1]);
        let n = normalize_unit_disk(&p, 30).unwrap();
        assert!(n.exact);
        assert_eq!(
            n.poly,
            Polynomial::new(
                ex(),
                vec![ex().one(), ex().from_rat_pair(rat(-1, 3), Rat::zero())]
            )
        );
        assert_eq!(n.scale, ex().from_rat_pair(rat(-1, 3), Rat::zero()));
    }

    #[test]
    fn normalize_tie_takes_monic_branch() {
        let p = poly_i64(&[1, 1]); // root at -1, on the circle
        let n = normalize_unit_disk(&p, 30).unwrap();
        assert!(n.exact);
        assert_eq!(n.poly, p);
        assert_eq!(n.scale, ex().one());
    }

    #[test]
    fn normalize_mixed_pair() {
        // (z - 1/2)(z - 3) -> (z - 1/2)(1 - z/3) = -1/2 + (7/6)z - (1/3)z^2
        let p = poly_i64(&[3, -7, 2]).scale(&ex().from_rat_pair(rat(1, 2), Rat::zero()));
        let n = normalize_unit_disk(&p, 30).unwrap();
        let want = [-0.5, 7.0 / 6.0, -1.0 / 3.0];
        for (k, w) in want.iter().enumerate() {
            let got = n.poly.coeff(k).to_c64();
            assert!((got.re - w).abs() < 1e-13, "coeff {k}: {got} vs {w}");
            assert!(got.im.abs() < 1e-13);
        }
        assert_eq!(n.roots.total_multiplicity(), 2);
    }

    #[test]
    fn normalize_exterior_multiplicity() {
        // (z-2)^2 -> (1 - z/2)^2, scale 1/4.
        let p = poly_i64(&[4, -4, 1]);
        let n = normalize_unit_disk(&p, 30).unwrap();
        let got = n.scale.to_c64();
        assert!((got.re - 0.25).abs() < 1e-13 && got.im.abs() < 1e-13);
        let c = n.poly.coeff(1).to_c64();
        assert!((c.re + 1.0).abs() < 1e-13);
    }

    #[test]
    fn high_multiplicity_cluster_float() {
        let b = Backend::Float { digits: 30 };
        // (z-1)^3 in floats: companion seeds scatter, cluster must reunite.
        let p = Polynomial::new(
            b,
            vec![b.from_int(-1), b.from_int(3), b.from_int(-3), b.one()],
        );
        let rs = find_roots(&p, 30).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].multiplicity, 3);
        assert!((rs.roots[0].location.re - 1.0).abs() < 1e-8);
    }
}
