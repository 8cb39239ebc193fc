//! Order-condition algebra for the compact sixth-order template.

mod algebra;
mod bch;
mod identities;
mod newton;
mod poly;
mod tables;

pub use algebra::{free_dimension, relation, Algebra, AlgebraKind, BasisElement, Gen, LieElement, LieTree, MAX_GRADE};
pub use bch::{
    condition_polynomials, expand_in, expand_scheme, order_conditions, symmetric_bch, Expansion, CONDITION_LABELS,
};
pub use identities::{
    identity_a4_difference, quadruple_identity_check, quadruple_sides, vanishing_suite, verify_identity_a4, VANISHING,
};
pub use newton::{
    multi_start, newton_solve, parse_decimal, round_significant, table_constants, table_constants_exact,
    NewtonReport, OrderSystem,
};
pub use poly::{rat, CoeffPolynomial, FloatPoly, Monomial, NVARS};
pub use tables::{compare_tables, CellComparison, CellStatus, PrintedCell, PRINTED, SUSPECT_FACTOR};
