//! kG-modules over GF(2^e): constructions, homomorphisms, composition
//! factors, decompositions and Brauer quotients.

mod brauer;
mod decompose;
mod hecke;
mod hom;
mod io;
mod meataxe;
mod module;
mod rep;

pub use brauer::{
    brauer_quotient, brauer_quotient_over, fixed_coset_count, relative_trace,
    relative_trace_on_fixed, BrauerQuotient,
};
pub use decompose::{
    algebra_is_local, decompose, decompose_input, endomorphism_ring_is_local, is_indecomposable,
    isomorphic_by_decomposition, Certificate, Decomposition, EndSampler, EndomorphismEngine,
    EngineRegistry, GroupAlgebraEngine, HeckeEngine, ModuleInput, SpinEngine, Summand,
    DECOMPOSE_ITERATION_CAP,
};
pub use hecke::{suborbits, HeckeAlgebra, HeckeElement};
pub use hom::{
    end_basis, fixed_points, hom_basis, hom_basis_action, hom_dim, hom_dim_action,
    indecomposables_isomorphic, is_isomorphic, perm_of, SpinPresentation, HOM_UNKNOWN_CAP,
};
pub use io::{header_of, load_module, save_module, ModuleHeader};
pub use meataxe::{
    chop, chop_rep, chop_split, is_irreducible, split, splitting_degree, ChopResult, Factor, Split,
};
pub use module::{CosetSpace, GModule, MODULE_DIM_CAP};
pub use rep::{spin, spin_into, Action, MatrixRep};
