//! Tensor calculus on the plane: vector fields, symmetric 2-tensors and 2-forms.
//!
//! Curvature convention: `R = 2K` with `K` the Gaussian curvature, so the unit
//! sphere has `R = 2`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use serde::Serialize;

use crate::expr::{expr_sign, Certainty, Coord, Expr, Parameter, Sampler, Sign, ZeroTest, SAMPLES};

/// A yes/no answer together with how it was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub certainty: Certainty,
}

impl Verdict {
    pub fn proved(holds: bool) -> Self {
        Verdict { holds, certainty: Certainty::Proved }
    }

    /// Verdict of "all of these vanish identically".
    pub fn all_zero<I: IntoIterator<Item = ZeroTest>>(tests: I) -> Self {
        let mut certainty = Certainty::Proved;
        for t in tests {
            if !t.is_zero() {
                return Verdict { holds: false, certainty: t.certainty() };
            }
            certainty = certainty.min(t.certainty());
        }
        Verdict { holds: true, certainty }
    }

    /// Conjunction of verdicts.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self.holds, other.holds) {
            (true, true) => Verdict { holds: true, certainty: self.certainty.min(other.certainty) },
            (false, _) => self,
            (_, false) => other,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.holds, self.certainty)
    }
}

/// A result whose preconditions (nondegeneracy) were established with the given
/// certainty. `Sampled` means the determinant was only seen to be nonzero at
/// sample points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certified<T> {
    pub value: T,
    pub certainty: Certainty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("degenerate tensor: determinant is identically zero")]
    Degenerate,
}

/// `xx ∂x + yy ∂y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VectorField {
    pub xx: Expr,
    pub yy: Expr,
}

impl VectorField {
    pub fn new(xx: Expr, yy: Expr) -> Self {
        VectorField { xx, yy }
    }

    pub fn zero() -> Self {
        VectorField::new(Expr::zero(), Expr::zero())
    }

    pub fn dx() -> Self {
        VectorField::new(Expr::one(), Expr::zero())
    }

    pub fn dy() -> Self {
        VectorField::new(Expr::zero(), Expr::one())
    }

    pub fn component(&self, c: Coord) -> &Expr {
        match c {
            Coord::X => &self.xx,
            Coord::Y => &self.yy,
        }
    }

    pub fn components(&self) -> [Expr; 2] {
        [self.xx.clone(), self.yy.clone()]
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &Expr) -> Expr {
        &(&self.xx * &f.dx()) + &(&self.yy * &f.dy())
    }

    pub fn scale(&self, s: &Expr) -> Self {
        VectorField::new(&self.xx * s, &self.yy * s)
    }

    pub fn add(&self, o: &VectorField) -> Self {
        VectorField::new(&self.xx + &o.xx, &self.yy + &o.yy)
    }

    pub fn sub(&self, o: &VectorField) -> Self {
        VectorField::new(&self.xx - &o.xx, &self.yy - &o.yy)
    }

    pub fn is_zero(&self) -> Verdict {
        Verdict::all_zero([self.xx.is_zero(), self.yy.is_zero()])
    }

    pub fn is_zero_canonical(&self) -> bool {
        self.xx.is_zero_canonical() && self.yy.is_zero_canonical()
    }

    pub fn params(&self) -> BTreeSet<Parameter> {
        let mut p = self.xx.params();
        p.extend(self.yy.params());
        p
    }

    /// Divergence `∂x X^x + ∂y X^y`.
    pub fn divergence(&self) -> Expr {
        &self.xx.dx() + &self.yy.dy()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*dx + ({})*dy", self.xx, self.yy)
    }
}

/// Lie bracket `[X, Y]`.
pub fn bracket(x: &VectorField, y: &VectorField) -> VectorField {
    VectorField::new(&x.apply(&y.xx) - &y.apply(&x.xx), &x.apply(&y.yy) - &y.apply(&x.yy))
}

/// `X^x Y^y − X^y Y^x`; vanishes identically iff `X ∧ Y = 0`.
pub fn wedge_det(x: &VectorField, y: &VectorField) -> Expr {
    &(&x.xx * &y.yy) - &(&x.yy * &y.xx)
}

macro_rules! sym_tensor {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
        pub struct $name {
            pub xx: Expr,
            pub xy: Expr,
            pub yy: Expr,
        }

        impl $name {
            pub fn new(xx: Expr, xy: Expr, yy: Expr) -> Self {
                $name { xx, xy, yy }
            }

            pub fn zero() -> Self {
                $name::new(Expr::zero(), Expr::zero(), Expr::zero())
            }

            /// Diagonal `f (xx + yy)`.
            pub fn diagonal(f: Expr) -> Self {
                $name::new(f.clone(), Expr::zero(), f)
            }

            /// Component by index, `0 = x`, `1 = y`.
            pub fn at(&self, i: usize, j: usize) -> &Expr {
                match (i, j) {
                    (0, 0) => &self.xx,
                    (1, 1) => &self.yy,
                    _ => &self.xy,
                }
            }

            pub fn components(&self) -> [Expr; 3] {
                [self.xx.clone(), self.xy.clone(), self.yy.clone()]
            }

            pub fn det(&self) -> Expr {
                &(&self.xx * &self.yy) - &(&self.xy * &self.xy)
            }

            pub fn scale(&self, s: &Expr) -> Self {
                $name::new(&self.xx * s, &self.xy * s, &self.yy * s)
            }

            pub fn add(&self, o: &Self) -> Self {
                $name::new(&self.xx + &o.xx, &self.xy + &o.xy, &self.yy + &o.yy)
            }

            pub fn sub(&self, o: &Self) -> Self {
                $name::new(&self.xx - &o.xx, &self.xy - &o.xy, &self.yy - &o.yy)
            }

            pub fn is_zero(&self) -> Verdict {
                Verdict::all_zero([self.xx.is_zero(), self.xy.is_zero(), self.yy.is_zero()])
            }

            /// Nondegeneracy of the determinant.
            pub fn nondegenerate(&self) -> Result<Certainty, GeomError> {
                let t = self.det().is_zero();
                if t.is_zero() {
                    Err(GeomError::Degenerate)
                } else {
                    Ok(t.certainty())
                }
            }

            fn inverse_parts(&self) -> Result<(Expr, Expr, Expr, Certainty), GeomError> {
                let certainty = self.nondegenerate()?;
                let d = self.det();
                Ok((&self.yy / &d, -&(&self.xy / &d), &self.xx / &d, certainty))
            }
        }
    };
}

sym_tensor!(CovTensor2, "Symmetric covariant tensor `xx dx⊗dx + xy (dx⊗dy + dy⊗dx) + yy dy⊗dy`.");
sym_tensor!(ContraTensor2, "Symmetric contravariant tensor `xx ∂x⊗∂x + xy (∂x⊗∂y + ∂y⊗∂x) + yy ∂y⊗∂y`.");

impl CovTensor2 {
    /// `dx⊗dx + dy⊗dy`.
    pub fn euclidean() -> Self {
        CovTensor2::diagonal(Expr::one())
    }

    /// `dx⊗dy + dy⊗dx`.
    pub fn hyperbolic() -> Self {
        CovTensor2::new(Expr::zero(), Expr::one(), Expr::zero())
    }

    pub fn invert(&self) -> Result<Certified<ContraTensor2>, GeomError> {
        let (a, b, c, certainty) = self.inverse_parts()?;
        Ok(Certified { value: ContraTensor2::new(a, b, c), certainty })
    }
}

impl ContraTensor2 {
    pub fn invert(&self) -> Result<Certified<CovTensor2>, GeomError> {
        let (a, b, c, certainty) = self.inverse_parts()?;
        Ok(Certified { value: CovTensor2::new(a, b, c), certainty })
    }

    /// Symmetrized `Σ c_ij X_i ⊗ X_j` for a symmetric coefficient matrix.
    pub fn from_quadratic(c: &[Vec<Expr>], fields: &[VectorField]) -> Self {
        let mut out = ContraTensor2::zero();
        for (i, xi) in fields.iter().enumerate() {
            for (j, xj) in fields.iter().enumerate() {
                let k = &c[i][j];
                if k.is_zero_canonical() {
                    continue;
                }
                out.xx = &out.xx + &(k * &(&xi.xx * &xj.xx));
                out.xy = &out.xy + &(k * &(&xi.xx * &xj.yy));
                out.yy = &out.yy + &(k * &(&xi.yy * &xj.yy));
            }
        }
        out
    }
}

impl fmt::Display for CovTensor2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*dxdx + ({})*dxdy + ({})*dydy", self.xx, self.xy, self.yy)
    }
}

impl fmt::Display for ContraTensor2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*dxdx + ({})*dxdy + ({})*dydy", self.xx, self.xy, self.yy)
    }
}

/// `coefficient dx∧dy`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoForm {
    pub coefficient: Expr,
}

impl fmt::Display for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*dx^dy", self.coefficient)
    }
}

fn d(e: &Expr, i: usize) -> Expr {
    if i == 0 {
        e.dx()
    } else {
        e.dy()
    }
}

fn comp(x: &VectorField, i: usize) -> &Expr {
    if i == 0 {
        &x.xx
    } else {
        &x.yy
    }
}

/// `(ℒ_X g)_{μν} = X^α ∂_α g_{μν} + ∂_μ X^α g_{αν} + ∂_ν X^α g_{μα}`.
pub fn lie_derivative_cov(x: &VectorField, g: &CovTensor2) -> CovTensor2 {
    let entry = |m: usize, n: usize| {
        let mut acc = x.apply(g.at(m, n));
        for a in 0..2 {
            acc = &acc + &(&d(comp(x, a), m) * g.at(a, n));
            acc = &acc + &(&d(comp(x, a), n) * g.at(m, a));
        }
        acc
    };
    CovTensor2::new(entry(0, 0), entry(0, 1), entry(1, 1))
}

/// `(ℒ_X G)^{μν} = X^α ∂_α G^{μν} − ∂_α X^μ G^{αν} − ∂_α X^ν G^{μα}`.
pub fn lie_derivative_contra(x: &VectorField, g: &ContraTensor2) -> ContraTensor2 {
    let entry = |m: usize, n: usize| {
        let mut acc = x.apply(g.at(m, n));
        for a in 0..2 {
            acc = &acc - &(&d(comp(x, m), a) * g.at(a, n));
            acc = &acc - &(&d(comp(x, n), a) * g.at(m, a));
        }
        acc
    };
    ContraTensor2::new(entry(0, 0), entry(0, 1), entry(1, 1))
}

/// The potential `f` with `ℒ_X g = f g`, if the proportionality holds identically.
pub fn conformal_factor(x: &VectorField, g: &CovTensor2) -> Option<Certified<Expr>> {
    let l = lie_derivative_cov(x, g);
    let ratio = conformal_ratio_raw(&l, g)?;
    Some(ratio)
}

/// Killing test `ℒ_X g = 0`.
pub fn is_killing(x: &VectorField, g: &CovTensor2) -> Verdict {
    lie_derivative_cov(x, g).is_zero()
}

fn conformal_ratio_raw(g1: &CovTensor2, g2: &CovTensor2) -> Option<Certified<Expr>> {
    let pairs = [(&g1.xx, &g2.xx), (&g1.xy, &g2.xy), (&g1.yy, &g2.yy)];
    let (a, b) = pairs.iter().find(|(_, b)| !b.is_zero().is_zero())?;
    let s = *a / *b;
    let residual = g1.sub(&g2.scale(&s));
    let v = residual.is_zero();
    v.holds.then_some(Certified { value: s, certainty: v.certainty })
}

/// Sign of a scalar function over the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignReport {
    Positive,
    Negative,
    Indefinite,
    Zero,
    Unknown,
}

impl fmt::Display for SignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignReport::Positive => "positive",
            SignReport::Negative => "negative",
            SignReport::Indefinite => "indefinite",
            SignReport::Zero => "zero",
            SignReport::Unknown => "unknown",
        })
    }
}

/// Sign of `e` by term inspection, falling back to sampling.
pub fn sign_report(e: &Expr) -> (SignReport, Certainty) {
    if e.is_zero_canonical() {
        return (SignReport::Zero, Certainty::Proved);
    }
    match expr_sign(e) {
        Sign::Pos => return (SignReport::Positive, Certainty::Proved),
        Sign::Neg => return (SignReport::Negative, Certainty::Proved),
        _ => {}
    }
    let params: Vec<Parameter> = e.params().into_iter().collect();
    let mut sampler = Sampler::new(1);
    let (mut pos, mut neg, mut seen) = (false, false, 0u32);
    for _ in 0..4 * SAMPLES {
        if seen == SAMPLES {
            break;
        }
        let Ok(v) = e.eval_at(&sampler.point(&params)) else {
            continue;
        };
        seen += 1;
        if v.is_negligible() {
            continue;
        }
        if v.signum() > 0 {
            pos = true;
        } else {
            neg = true;
        }
    }
    let c = Certainty::Sampled { samples: seen };
    match (pos, neg) {
        (true, true) => (SignReport::Indefinite, c),
        (true, false) => (SignReport::Positive, c),
        (false, true) => (SignReport::Negative, c),
        (false, false) => (SignReport::Unknown, c),
    }
}

/// Scalar `s` with `g1 = s g2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConformalRatio {
    pub ratio: Expr,
    pub sign: SignReport,
    pub certainty: Certainty,
}

pub fn conformal_ratio(g1: &CovTensor2, g2: &CovTensor2) -> Option<ConformalRatio> {
    let r = conformal_ratio_raw(g1, g2)?;
    let (sign, _) = sign_report(&r.value);
    Some(ConformalRatio { ratio: r.value, sign, certainty: r.certainty })
}

/// `⋆1 = sqrt|det g| dx∧dy`.
pub fn hodge_unit(g: &CovTensor2) -> Result<Certified<TwoForm>, GeomError> {
    let certainty = g.nondegenerate()?;
    let w = g.det().abs().sqrt();
    Ok(Certified { value: TwoForm { coefficient: w }, certainty })
}

/// `g(X, Y)`.
pub fn pairing(g: &CovTensor2, x: &VectorField, y: &VectorField) -> Expr {
    let mut acc = Expr::zero();
    for i in 0..2 {
        for j in 0..2 {
            acc = &acc + &(g.at(i, j) * &(comp(x, i) * comp(y, j)));
        }
    }
    acc
}

/// A field `Z` with `g(Y, Z) = 0`.
pub fn perpendicular_generator(y: &VectorField, g: &CovTensor2) -> VectorField {
    VectorField::new(
        -&(&(&g.xy * &y.xx) + &(&g.yy * &y.yy)),
        &(&g.xx * &y.xx) + &(&g.xy * &y.yy),
    )
}

/// `d(i_X ω) = 0`.
pub fn is_locally_hamiltonian(x: &VectorField, w: &TwoForm) -> Verdict {
    let div = x.scale(&w.coefficient).divergence();
    Verdict::all_zero([div.is_zero()])
}

/// Scalar curvature from the Levi-Civita connection, `R = 2K`.
pub fn scalar_curvature(g: &CovTensor2) -> Result<Certified<Expr>, GeomError> {
    let inv = g.invert()?;
    let gi = inv.value;
    // dg[k][i][j] = ∂_k g_ij
    let dg: Vec<Vec<Vec<Expr>>> =
        (0..2).map(|k| (0..2).map(|i| (0..2).map(|j| d(g.at(i, j), k)).collect()).collect()).collect();
    // gamma[r][i][j] = Γ^r_ij
    let half = Expr::frac(1, 2);
    let gamma: Vec<Vec<Vec<Expr>>> = (0..2)
        .map(|r| {
            (0..2)
                .map(|i| {
                    (0..2)
                        .map(|j| {
                            let mut acc = Expr::zero();
                            for l in 0..2 {
                                let t = &(&dg[i][l][j] + &dg[j][l][i]) - &dg[l][i][j];
                                acc = &acc + &(gi.at(r, l) * &t);
                            }
                            &acc * &half
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    // R^r_{y x y} = ∂_x Γ^r_yy − ∂_y Γ^r_xy + Γ^r_xl Γ^l_yy − Γ^r_yl Γ^l_xy
    let riemann = |r: usize| {
        let mut acc = &d(&gamma[r][1][1], 0) - &d(&gamma[r][0][1], 1);
        for l in 0..2 {
            acc = &acc + &(&gamma[r][0][l] * &gamma[l][1][1]);
            acc = &acc - &(&gamma[r][1][l] * &gamma[l][0][1]);
        }
        acc
    };
    let r_xyxy = &(g.at(0, 0) * &riemann(0)) + &(g.at(0, 1) * &riemann(1));
    let k = &r_xyxy / &g.det();
    Ok(Certified { value: &k * &Expr::int(2), certainty: inv.certainty })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Scope;

    fn e(s: &str) -> Expr {
        Expr::parse(s, &Scope::new()).unwrap()
    }

    fn vf(a: &str, b: &str) -> VectorField {
        VectorField::new(e(a), e(b))
    }

    #[test]
    fn brackets() {
        assert_eq!(bracket(&VectorField::dx(), &vf("x", "y")), VectorField::dx());
        assert!(bracket(&VectorField::dx(), &vf("1", "1")).is_zero_canonical());
        let x1 = vf("0", "-x");
        let x2 = vf("-x/2", "y/2");
        assert_eq!(bracket(&x1, &x2), x1);
        assert_eq!(wedge_det(&vf("1", "1"), &vf("x", "y")), e("y - x"));
        assert!(wedge_det(&VectorField::dx(), &vf("x", "0")).is_zero_canonical());
    }

    #[test]
    fn lie_derivatives() {
        let ge = CovTensor2::euclidean();
        assert_eq!(lie_derivative_cov(&vf("x", "y"), &ge), ge.scale(&Expr::int(2)));
        assert!(lie_derivative_cov(&vf("y", "-x"), &ge).is_zero().holds);
        assert_eq!(lie_derivative_cov(&vf("x^2 - y^2", "2*x*y"), &ge), ge.scale(&e("4*x")));
        let g = ContraTensor2::new(Expr::one(), Expr::zero(), Expr::zero());
        assert_eq!(lie_derivative_contra(&vf("x", "0"), &g), g.scale(&Expr::int(-2)));
        let g0 = ContraTensor2::diagonal(e("(1 + x^2 + y^2)^2"));
        assert!(lie_derivative_contra(&vf("x^2 - y^2 + 1", "2*x*y"), &g0).is_zero().holds);
    }

    #[test]
    fn conformal() {
        let ge = CovTensor2::euclidean();
        assert_eq!(conformal_factor(&vf("x", "y"), &ge).unwrap().value, Expr::int(2));
        assert!(conformal_factor(&VectorField::dx(), &ge).unwrap().value.is_zero_canonical());
        assert!(conformal_factor(&vf("0", "x"), &ge).is_none());
        let r = conformal_ratio(&ge.scale(&Expr::int(4)), &ge).unwrap();
        assert_eq!((r.ratio, r.sign), (Expr::int(4), SignReport::Positive));
        let r = conformal_ratio(&ge.scale(&e("-1/(2*y^2)")), &ge).unwrap();
        assert_eq!(r.sign, SignReport::Negative);
        assert!(conformal_ratio(&CovTensor2::hyperbolic(), &ge).is_none());
    }

    #[test]
    fn inversion_and_hodge() {
        let g = ContraTensor2::diagonal(e("-2*y^2"));
        assert_eq!(g.invert().unwrap().value, CovTensor2::diagonal(e("-1/(2*y^2)")));
        let g = CovTensor2::diagonal(e("(1 + x^2 + y^2)^-2"));
        assert_eq!(hodge_unit(&g).unwrap().value.coefficient, e("(1 + x^2 + y^2)^-2"));
        assert!(CovTensor2::zero().invert().is_err());
    }

    #[test]
    fn curvature() {
        assert!(scalar_curvature(&CovTensor2::euclidean()).unwrap().value.is_zero_canonical());
        let g = CovTensor2::diagonal(e("(1 + x^2 + y^2)^-2"));
        assert_eq!(scalar_curvature(&g).unwrap().value, Expr::int(8));
    }

    #[test]
    fn orthogonality() {
        let gh = CovTensor2::hyperbolic();
        assert_eq!(pairing(&gh, &VectorField::dx(), &VectorField::dy()), Expr::one());
        let z = perpendicular_generator(&VectorField::dx(), &gh);
        assert!(wedge_det(&z, &VectorField::dx()).is_zero_canonical());
        let z = perpendicular_generator(&vf("1", "1"), &CovTensor2::euclidean());
        assert!(wedge_det(&z, &vf("1", "-1")).is_zero_canonical());
        let w = TwoForm { coefficient: Expr::one() };
        assert!(is_locally_hamiltonian(&vf("0", "-x"), &w).holds);
        assert!(!is_locally_hamiltonian(&vf("x", "0"), &w).holds);
    }
}
