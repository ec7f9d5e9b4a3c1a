//! Relative traces and the Brauer construction.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{Echelon, FieldMatrix};
use crate::groups::{maximal_subgroups_2group, normalizer, Embedded, Subgroup};

use super::hom::fixed_points;
use super::module::GModule;

/// `Tr_R^Q` applied to the rows of `x`, which must be `R`-fixed:
/// the sum of `x t` over a right transversal `t` of `R` in `Q`.
pub fn relative_trace(
    v: &GModule,
    r: &Subgroup,
    q: &Subgroup,
    x: &FieldMatrix,
) -> Result<FieldMatrix> {
    if !r.is_subgroup_of(q) {
        return Err(Error::InvalidParameter(
            "trace source is not contained in the target".into(),
        ));
    }
    if r.order() == q.order() {
        return Err(Error::InvalidParameter(
            "relative trace needs a proper subgroup".into(),
        ));
    }
    let mut out = FieldMatrix::zeros(v.field(), x.rows(), v.dim());
    for t in r.right_transversal_in(q)? {
        out.add_assign(&v.act(x, t));
    }
    Ok(out)
}

/// The matrix of `Tr_R^Q` on a basis of `V^R`: rows are the traces of
/// the rows of `fixed_points(v, r)`.
pub fn relative_trace_on_fixed(v: &GModule, r: &Subgroup, q: &Subgroup) -> Result<FieldMatrix> {
    relative_trace(v, r, q, &fixed_points(v, r))
}

/// `V(Q) = V^Q / sum_{R < Q} Tr_R^Q(V^R)` with the action of a subgroup
/// `over` of `N_G(Q)`.
#[derive(Clone, Debug)]
pub struct BrauerQuotient {
    pub module: GModule,
    pub over: Embedded,
    /// Basis of `V^Q`.
    pub fixed: FieldMatrix,
    /// Dimension of the trace part.
    pub trace_dim: usize,
}

/// The Brauer quotient as a module for `N_G(Q)`.
pub fn brauer_quotient(v: &GModule, q: &Subgroup) -> Result<BrauerQuotient> {
    let n = normalizer(v.group(), q)?;
    brauer_quotient_over(v, q, &n)
}

/// The Brauer quotient as a module for a subgroup `over` normalising `Q`,
/// such as the centraliser.
pub fn brauer_quotient_over(v: &GModule, q: &Subgroup, over: &Subgroup) -> Result<BrauerQuotient> {
    if !Arc::ptr_eq(q.parent(), v.group()) || !Arc::ptr_eq(over.parent(), v.group()) {
        return Err(Error::InvalidParameter("subgroups of another group".into()));
    }
    if over.gens().iter().any(|&x| !q.is_normalized_by(x)) {
        return Err(Error::InvalidParameter(
            "acting subgroup does not normalise Q".into(),
        ));
    }
    let f = v.field();
    let fixed = fixed_points(v, q);
    let mut ech = Echelon::with_coordinates(f, v.dim());
    for r in 0..fixed.rows() {
        ech.insert(&fixed, r);
    }
    // traces from maximal subgroups suffice by transitivity
    let mut traces = Echelon::new(f, fixed.rows());
    for r in maximal_subgroups_2group(q)? {
        let tr = relative_trace_on_fixed(v, &r, q)?;
        for i in 0..tr.rows() {
            let c = ech
                .coordinates(&tr, i)
                .ok_or_else(|| Error::Structural("trace is not Q-fixed".into()))?;
            let row = FieldMatrix::from_fn(f, 1, fixed.rows(), |_, j| c[j]);
            traces.insert(&row, 0);
        }
    }
    let emb = Embedded::new(over, format!("{}<over>", v.group().name()))?;
    let vr = v.restrict(&emb)?;
    let sub = vr.submodule(ech.inserted())?;
    let module = if traces.is_empty() {
        sub
    } else {
        sub.quotient(traces.echelon_rows())?.0
    };
    Ok(BrauerQuotient {
        module,
        over: emb,
        fixed: ech.inserted().clone(),
        trace_dim: traces.len(),
    })
}

/// Number of cosets of `H` fixed by `Q` in `k[H\G]`.
pub fn fixed_coset_count(h: &Subgroup, q: &Subgroup) -> usize {
    let (coset_of, reps) = h.right_cosets();
    let g = h.parent();
    (0..reps.len())
        .filter(|&i| {
            q.gens()
                .iter()
                .all(|&x| coset_of[g.mul(reps[i], x) as usize] as usize == i)
        })
        .count()
}
