//! Casimir tensor fields and the metrics they induce.
//!
//! A quadratic Casimir `C = Σ C_ij v_i v_j` of the abstract algebra is pushed to
//! the contravariant tensor `G = Σ C_ij X_i ⊗ X_j`. Every basis field preserves
//! `G`, hence also `g = G⁻¹` whenever `G` is nondegenerate.

use alloc::vec::Vec;

use serde::Serialize;

use crate::expr::{Certainty, Expr, ZeroTest};
use crate::geom::{hodge_unit, lie_derivative_contra, lie_derivative_cov, ContraTensor2, CovTensor2, TwoForm, Verdict};
use crate::liealg::{
    inverse_killing_casimir, is_semisimple, killing_form, quadratic_casimirs, structure_constants, CasimirElement,
    LieAlgebra, LieError, StructureConstants,
};

/// Where a processed Casimir came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CasimirOrigin {
    /// Element of the echelon basis of the Casimir space.
    Basis { index: usize },
    /// `κ⁻¹` of a semisimple algebra.
    InverseKilling,
    /// Supplied by the caller.
    Given,
}

/// Invariance of `G` and `g` under one basis field.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Invariance {
    pub field: usize,
    pub tensor: Verdict,
    pub metric: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CasimirMetricResult {
    pub origin: CasimirOrigin,
    pub casimir: CasimirElement,
    pub tensor: ContraTensor2,
    pub det: Expr,
    pub det_test: ZeroTest,
    /// `G⁻¹`, absent when `det G` vanishes identically.
    pub metric: Option<CovTensor2>,
    pub symplectic: Option<TwoForm>,
    pub invariance: Vec<Invariance>,
}

impl CasimirMetricResult {
    pub fn is_degenerate(&self) -> bool {
        self.metric.is_none()
    }

    /// Every invariance verdict holds.
    pub fn all_invariant(&self) -> Verdict {
        let mut v = Verdict::proved(true);
        for i in &self.invariance {
            v = v.and(i.tensor);
            if let Some(m) = i.metric {
                v = v.and(m);
            }
        }
        v
    }

    /// Certainty that the metric exists.
    pub fn nondegeneracy(&self) -> Certainty {
        self.det_test.certainty()
    }
}

/// `Υ(C) = Σ C_ij X_i ⊗ X_j`.
pub fn upsilon(c: &CasimirElement, v: &LieAlgebra) -> Result<ContraTensor2, LieError> {
    if c.dim() != v.dim() {
        return Err(LieError::Mismatch { expected: v.dim(), got: c.dim() });
    }
    Ok(ContraTensor2::from_quadratic(&c.matrix, v.basis()))
}

/// Runs the construction for one Casimir element, whether or not it is ad-invariant.
pub fn casimir_metric_for(
    v: &LieAlgebra,
    c: &CasimirElement,
    origin: CasimirOrigin,
) -> Result<CasimirMetricResult, LieError> {
    let tensor = upsilon(c, v)?;
    let det = tensor.det();
    let det_test = det.is_zero();
    let metric = if det_test.is_zero() { None } else { tensor.invert().ok().map(|g| g.value) };
    let symplectic = metric.as_ref().and_then(|g| hodge_unit(g).ok()).map(|w| w.value);
    let invariance = v
        .basis()
        .iter()
        .enumerate()
        .map(|(i, x)| Invariance {
            field: i,
            tensor: lie_derivative_contra(x, &tensor).is_zero(),
            metric: metric.as_ref().map(|g| lie_derivative_cov(x, g).is_zero()),
        })
        .collect();
    Ok(CasimirMetricResult { origin, casimir: c.clone(), tensor, det, det_test, metric, symplectic, invariance })
}

/// All Casimir-induced tensors of `v`: one per basis Casimir, plus `κ⁻¹` when the
/// algebra is semisimple and the Casimir space has more than one dimension.
pub fn casimir_metric(v: &LieAlgebra) -> Result<Vec<CasimirMetricResult>, LieError> {
    let sc = structure_constants(v)?;
    casimir_metric_with(v, &sc)
}

pub fn casimir_metric_with(v: &LieAlgebra, sc: &StructureConstants) -> Result<Vec<CasimirMetricResult>, LieError> {
    let basis = quadratic_casimirs(sc);
    let mut out = Vec::new();
    for (index, c) in basis.iter().enumerate() {
        out.push(casimir_metric_for(v, c, CasimirOrigin::Basis { index })?);
    }
    if basis.len() > 1 && is_semisimple(&killing_form(sc)).holds {
        if let Some(c) = inverse_killing_casimir(sc) {
            out.push(casimir_metric_for(v, &c, CasimirOrigin::InverseKilling)?);
        }
    }
    Ok(out)
}
