//! Two worked Lie systems: the Milne–Pinney equation and the projective
//! Schrödinger equation on CP¹, plus the arithmetic checks behind two errata.
//!
//! The Schrödinger fields come from writing `μ = z1/z2 = x + iy` in the Riccati
//! equation `dμ/dt = i(b̄ μ² + (λ2 − λ1) μ − b)`, `b = b1 + i b2`, and splitting real
//! and imaginary parts. Only the resulting real fields are shipped.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use serde::Serialize;

use crate::casimir::{casimir_metric_for, casimir_metric_with, CasimirMetricResult, CasimirOrigin};
use crate::expr::{Constraint, Expr, Parameter, Scope};
use crate::geom::{
    is_locally_hamiltonian, lie_derivative_cov, scalar_curvature, Certified, CovTensor2, Verdict, VectorField,
};
use crate::liealg::{
    classify_3d_semisimple, is_casimir, is_semisimple, killing_form, structure_constants, CasimirElement, LieAlgebra,
    LieError, Semisimple3, StructureConstants,
};
use crate::linalg::Matrix;

/// A t-dependent system `Σ b_i(t) X_i` with opaque coefficient labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieSystemDecomposition {
    pub name: String,
    pub algebra: LieAlgebra,
    /// Coefficient of each basis field; `None` when it does not appear.
    pub coefficients: Vec<Option<String>>,
}

impl LieSystemDecomposition {
    pub fn basis(&self) -> &[VectorField] {
        self.algebra.basis()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SystemGeometry {
    pub structure: StructureConstants,
    pub killing_form: Matrix<Expr>,
    pub cartan: Verdict,
    pub classification: Semisimple3,
    pub casimir: CasimirMetricResult,
    /// `ℒ_X ω = 0` for each basis field.
    pub hamiltonian: Vec<Verdict>,
    pub curvature: Option<Certified<Expr>>,
}

fn e(s: &str, scope: &Scope) -> Expr {
    Expr::parse(s, scope).expect("built-in expression")
}

fn fields(list: &[(&str, &str)], scope: &Scope) -> Vec<VectorField> {
    list.iter().map(|(a, b)| VectorField::new(e(a, scope), e(b, scope))).collect()
}

/// `x'' = −ω²(t) x + c/x³` as `X3 + ω²(t) X1`. A parameter without a value stays
/// symbolic and is declared nonzero; a valued parameter is substituted.
pub fn milne_pinney_system(c: &Parameter) -> Result<LieSystemDecomposition, LieError> {
    let (scope, ce) = match c.value() {
        Some(v) if v.is_zero() => return Err(LieError::Degenerate),
        Some(v) => (Scope::new(), Expr::rational(v.clone())),
        None => {
            let p = Parameter::new(c.name(), Constraint::Nonzero);
            (Scope::new().with(p.clone()), Expr::param(&p))
        }
    };
    let mut basis = fields(&[("0", "-x"), ("-x/2", "y/2")], &scope);
    basis.push(VectorField::new(Expr::y(), &ce / &Expr::x().pow(3)));
    Ok(LieSystemDecomposition {
        name: "milne-pinney".into(),
        algebra: LieAlgebra::new(basis, scope)?,
        coefficients: vec![Some("omega^2(t)".into()), None, Some("1".into())],
    })
}

/// `b1(t) X1 + b2(t) X2 + (λ2(t) − λ1(t)) X3` on CP¹.
pub fn projective_schrodinger_system() -> Result<LieSystemDecomposition, LieError> {
    let scope = Scope::new();
    let basis = fields(&[("-2*x*y", "x^2 - y^2 - 1"), ("x^2 - y^2 + 1", "2*x*y"), ("-y", "x")], &scope);
    Ok(LieSystemDecomposition {
        name: "projective-schrodinger".into(),
        algebra: LieAlgebra::new(basis, scope)?,
        coefficients: vec![Some("b1(t)".into()), Some("b2(t)".into()), Some("lambda2(t) - lambda1(t)".into())],
    })
}

/// Killing form, classification and the Casimir-induced metric, symplectic form
/// and curvature of a three-dimensional semisimple Lie system.
pub fn system_geometry(s: &LieSystemDecomposition) -> Result<SystemGeometry, LieError> {
    let v = &s.algebra;
    let sc = structure_constants(v)?;
    let kappa = killing_form(&sc);
    let cartan = is_semisimple(&kappa);
    let classification = classify_3d_semisimple(&kappa)?;
    let casimir = casimir_metric_with(v, &sc)?
        .into_iter()
        .find(|r| !r.is_degenerate())
        .ok_or(LieError::Degenerate)?;
    let hamiltonian = match &casimir.symplectic {
        Some(w) => v.basis().iter().map(|x| is_locally_hamiltonian(x, w)).collect(),
        None => Vec::new(),
    };
    let curvature = casimir.metric.as_ref().and_then(|g| scalar_curvature(g).ok());
    Ok(SystemGeometry { structure: sc, killing_form: kappa, cartan, classification, casimir, hamiltonian, curvature })
}

pub fn milne_pinney_geometry(c: &Parameter) -> Result<SystemGeometry, LieError> {
    system_geometry(&milne_pinney_system(c)?)
}

pub fn projective_schrodinger_geometry() -> Result<SystemGeometry, LieError> {
    system_geometry(&projective_schrodinger_system()?)
}

/// `ℒ_{X_i} g` for one basis field.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub field: usize,
    pub lie_derivative: CovTensor2,
    pub test: Verdict,
}

/// Invariance of a stated metric under an algebra.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricCheck {
    pub label: String,
    pub metric: CovTensor2,
    pub residuals: Vec<Residual>,
}

impl MetricCheck {
    pub fn run(label: &str, v: &LieAlgebra, g: CovTensor2) -> Self {
        let residuals = v
            .basis()
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let l = lie_derivative_cov(x, &g);
                let test = l.is_zero();
                Residual { field: i, lie_derivative: l, test }
            })
            .collect();
        MetricCheck { label: label.to_string(), metric: g, residuals }
    }

    pub fn passes(&self) -> bool {
        self.residuals.iter().all(|r| r.test.holds)
    }
}

/// Ad-invariance of a stated Casimir and the tensor it induces.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CasimirCheck {
    pub label: String,
    pub ad_invariant: bool,
    pub result: CasimirMetricResult,
}

/// The so(3) row in table coordinates.
pub fn so3_row() -> LieAlgebra {
    let scope = Scope::new();
    let basis = fields(&[("y", "-x"), ("1 + x^2 - y^2", "2*x*y"), ("2*x*y", "1 + y^2 - x^2")], &scope);
    LieAlgebra::new(basis, scope).expect("independent basis")
}

/// Runs the standard invariance check on `−2 log(1 + x² + y²) gE` and on
/// `(1 + x² + y²)^−2 gE` for the so(3) row.
pub fn so3_metric_checks() -> Vec<MetricCheck> {
    let scope = Scope::new();
    let v = so3_row();
    let log_metric = CovTensor2::diagonal(e("-2*log(1 + x^2 + y^2)", &scope));
    let casimir_metric = CovTensor2::diagonal(e("1/(1 + x^2 + y^2)^2", &scope));
    vec![
        MetricCheck::run("-2*log(1 + x^2 + y^2) gE", &v, log_metric),
        MetricCheck::run("(1 + x^2 + y^2)^-2 gE", &v, casimir_metric),
    ]
}

fn casimir(entries: &[((usize, usize), i64)]) -> CasimirElement {
    let mut m = vec![vec![Expr::zero(); 3]; 3];
    for &((i, j), v) in entries {
        m[i][j] = &m[i][j] + &Expr::int(v);
    }
    CasimirElement { matrix: m }
}

/// Runs ad-invariance and the Casimir construction on the Milne–Pinney Casimir
/// written with `−2 v1 v1` and with `−2 v2 v2`.
pub fn mp_casimir_checks(c: &Parameter) -> Result<Vec<CasimirCheck>, LieError> {
    let mp = milne_pinney_system(c)?;
    let sc = structure_constants(&mp.algebra)?;
    let mut out = Vec::new();
    for (label, cas) in [
        ("v1*v3 + v3*v1 - 2*v1*v1", casimir(&[((0, 2), 1), ((2, 0), 1), ((0, 0), -2)])),
        ("v1*v3 + v3*v1 - 2*v2*v2", casimir(&[((0, 2), 1), ((2, 0), 1), ((1, 1), -2)])),
    ] {
        let ad_invariant = is_casimir(&sc, &cas);
        let result = casimir_metric_for(&mp.algebra, &cas, CasimirOrigin::Given)?;
        out.push(CasimirCheck { label: label.to_string(), ad_invariant, result });
    }
    Ok(out)
}
