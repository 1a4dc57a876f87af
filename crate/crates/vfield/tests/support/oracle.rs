//! Independent curvature oracles, written directly from textbook formulas and
//! sharing nothing with the library's curvature code beyond expression arithmetic.

use vfield::geom::CovTensor2;
use vfield::Expr;

fn half() -> Expr {
    Expr::frac(1, 2)
}

/// Gaussian curvature by the Brioschi formula in E, F, G.
pub fn brioschi_gauss(g: &CovTensor2) -> Expr {
    let (e, f, gg) = (g.xx.clone(), g.xy.clone(), g.yy.clone());
    let (e_u, e_v) = (e.dx(), e.dy());
    let (f_u, f_v) = (f.dx(), f.dy());
    let (g_u, g_v) = (gg.dx(), gg.dy());
    let h = half();
    let a11 = &(&(&(-&e_v.dy()) * &h) + &f_v.dx()) - &(&g_u.dx() * &h);
    let a12 = &e_u * &h;
    let a13 = &f_u - &(&e_v * &h);
    let a21 = &f_v - &(&g_u * &h);
    let a31 = &g_v * &h;
    let m1 = det3([
        [a11, a12, a13],
        [a21, e.clone(), f.clone()],
        [a31, f.clone(), gg.clone()],
    ]);
    let z = Expr::zero();
    let m2 = det3([
        [z, &e_v * &h, &g_u * &h],
        [&e_v * &h, e.clone(), f.clone()],
        [&g_u * &h, f.clone(), gg.clone()],
    ]);
    let w = &(&e * &gg) - &(&f * &f);
    &(&m1 - &m2) / &(&w * &w)
}

fn det3(m: [[Expr; 3]; 3]) -> Expr {
    let t1 = &m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]));
    let t2 = &m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]));
    let t3 = &m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]));
    &(&t1 - &t2) + &t3
}

/// Gaussian curvature of `e^{2φ} gE`: `K = −e^{−2φ} Δφ`, given `e^{−2φ}` and `φ`.
pub fn conformal_gauss(phi: &Expr, exp_minus_two_phi: &Expr) -> Expr {
    let lap = &phi.dx().dx() + &phi.dy().dy();
    -&(exp_minus_two_phi * &lap)
}

/// Scalar curvature from Christoffel symbols and the full Riemann tensor,
/// contracted as `R = g^{ij} R^k_{ikj}`.
pub fn christoffel_scalar(g: &CovTensor2) -> Expr {
    let gm = [[g.xx.clone(), g.xy.clone()], [g.xy.clone(), g.yy.clone()]];
    let det = &(&g.xx * &g.yy) - &(&g.xy * &g.xy);
    let inv = [[&g.yy / &det, -&(&g.xy / &det)], [-&(&g.xy / &det), &g.xx / &det]];
    let d = |e: &Expr, k: usize| if k == 0 { e.dx() } else { e.dy() };
    let mut gamma = vec![vec![vec![Expr::zero(); 2]; 2]; 2];
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Expr::zero();
                for l in 0..2 {
                    let t = &(&d(&gm[j][l], i) + &d(&gm[i][l], j)) - &d(&gm[i][j], l);
                    s = &s + &(&inv[k][l] * &t);
                }
                gamma[k][i][j] = &s * &half();
            }
        }
    }
    // R^r_{smn} = ∂_m Γ^r_{ns} − ∂_n Γ^r_{ms} + Γ^r_{mλ} Γ^λ_{ns} − Γ^r_{nλ} Γ^λ_{ms}
    let riem = |r: usize, s: usize, m: usize, n: usize| {
        let mut v = &d(&gamma[r][n][s], m) - &d(&gamma[r][m][s], n);
        for l in 0..2 {
            v = &v + &(&(&gamma[r][m][l] * &gamma[l][n][s]) - &(&gamma[r][n][l] * &gamma[l][m][s]));
        }
        v
    };
    let mut r = Expr::zero();
    for i in 0..2 {
        for j in 0..2 {
            let mut ric = Expr::zero();
            for k in 0..2 {
                ric = &ric + &riem(k, i, k, j);
            }
            r = &r + &(&inv[i][j] * &ric);
        }
    }
    r
}
