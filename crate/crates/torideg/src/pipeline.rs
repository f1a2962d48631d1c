//! Assembly of a complete stratification run from a polytope and a marking
//! choice. The batch commands, the Python bindings and the test suites all
//! go through this entry point.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fanalgebra::AlgebraError;
use crate::monoidfan::FanError;
use crate::polytope::{FaceId, FaceLattice, LatticePolytope, PolytopeError};
use crate::stratify::{
    build_triangulation, extremal_data, ExtremalData, FlagTriangulation, Marking, MarkingError,
};
use crate::valuation::{LinearOrder, ValuationError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("polytope is not normal; witness at level {level}: {point:?}")]
    NotNormal { level: i64, point: Vec<i64> },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("invalid marking: {}", join_errors(.0))]
    Marking(Vec<MarkingError>),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error("{0}")]
    Input(String),
}

fn join_errors(errors: &[MarkingError]) -> String {
    errors
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<Vec<MarkingError>> for PipelineError {
    fn from(errors: Vec<MarkingError>) -> Self {
        PipelineError::Marking(errors)
    }
}

#[derive(Debug, Clone)]
pub enum MarkingMode {
    Barycentric,
    Integral,
    Explicit(Marking),
}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    pub multipliers: BTreeMap<FaceId, i64>,
    pub alternative_order: bool,
}

/// A fully assembled run: face lattice, validated marking, extremal data,
/// triangulation and the fixed linearization.
#[derive(Debug, Clone)]
pub struct Stratification {
    pub lattice: FaceLattice,
    pub marking: Marking,
    pub extremal: ExtremalData,
    pub tri: FlagTriangulation,
    pub order: LinearOrder,
}

/// Builds everything, gating on normality: a non-normal input polytope is
/// rejected with its witness.
pub fn assemble(
    polytope: LatticePolytope,
    mode: MarkingMode,
    options: BuildOptions,
) -> Result<Stratification, PipelineError> {
    let (normal, witness) = polytope.is_normal();
    if !normal {
        let w = witness.unwrap();
        return Err(PipelineError::NotNormal { level: w.level, point: w.point });
    }
    let lattice = polytope.face_lattice();
    let marking = match mode {
        MarkingMode::Barycentric => Marking::barycentric(&lattice),
        MarkingMode::Integral => Marking::integral(&lattice).map_err(|e| vec![e])?,
        MarkingMode::Explicit(m) => m,
    };
    let tri = build_triangulation(&marking, &lattice)?;
    let extremal = extremal_data(&marking, &options.multipliers).map_err(|e| vec![e])?;
    let order = if options.alternative_order {
        LinearOrder::alternative_for(&lattice)
    } else {
        LinearOrder::default_for(&lattice)
    };
    Ok(Stratification { lattice, marking, extremal, tri, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::{q_simplex, unit_square};

    #[test]
    fn assemble_barycentric() {
        let s = assemble(unit_square(), MarkingMode::Barycentric, BuildOptions::default())
            .unwrap();
        assert_eq!(s.tri.simplices.len(), 8);
        assert_eq!(s.order.ascending.len(), 9);
    }

    #[test]
    fn non_normal_input_is_rejected_with_witness() {
        let err = assemble(q_simplex(), MarkingMode::Barycentric, BuildOptions::default())
            .unwrap_err();
        match err {
            PipelineError::NotNormal { level, .. } => assert_eq!(level, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
