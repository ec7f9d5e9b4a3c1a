//! Right kG-modules given by one matrix per group generator.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{check_cap, Error, Result};
use crate::ffield::{Echelon, Field, FieldMatrix};
use crate::groups::{Elem, Embedded, Group, QuotientMap, Subgroup};
use crate::rng::SeededRng;

use super::rep::{self, Action, MatrixRep};

/// Largest module dimension any construction will materialise.
pub const MODULE_DIM_CAP: usize = 8000;

/// The coset space `H\G` behind a transitive permutation module.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    pub subgroup: Subgroup,
    /// Coset index of every element of `G`.
    pub coset_of: Vec<u32>,
    /// One representative per coset; `reps[0]` is the identity.
    pub reps: Vec<Elem>,
}

impl CosetSpace {
    pub fn new(h: &Subgroup) -> Result<CosetSpace> {
        check_cap("permutation module index", h.index(), MODULE_DIM_CAP)?;
        let (coset_of, reps) = h.right_cosets();
        Ok(CosetSpace {
            subgroup: h.clone(),
            coset_of,
            reps,
        })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn group(&self) -> &Arc<Group> {
        self.subgroup.parent()
    }

    /// The coset `(H r_i) x`.
    pub fn act(&self, i: usize, x: Elem) -> usize {
        self.coset_of[self.group().mul(self.reps[i], x) as usize] as usize
    }
}

#[derive(Clone)]
pub struct GModule {
    group: Arc<Group>,
    field: Arc<Field>,
    dim: usize,
    matrices: Arc<OnceLock<Vec<FieldMatrix>>>,
    /// Basis permutations per generator, for permutation modules.
    perms: Option<Arc<Vec<Vec<u32>>>>,
    cosets: Option<Arc<CosetSpace>>,
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GModule(dim {} for {} over {:?})",
            self.dim,
            self.group.name(),
            self.field
        )
    }
}

fn lock_with(m: Vec<FieldMatrix>) -> Arc<OnceLock<Vec<FieldMatrix>>> {
    let l = OnceLock::new();
    let _ = l.set(m);
    Arc::new(l)
}

impl GModule {
    /// From one matrix per generator of `group`. Only shapes and
    /// invertibility are checked here; see `validate`.
    pub fn new(
        group: &Arc<Group>,
        field: &Arc<Field>,
        matrices: Vec<FieldMatrix>,
    ) -> Result<GModule> {
        if matrices.len() != group.gens().len() {
            return Err(Error::Dimension(format!(
                "{} matrices for {} generators",
                matrices.len(),
                group.gens().len()
            )));
        }
        let dim = matrices.first().map_or(0, |m| m.rows());
        check_cap("module dimension", dim, MODULE_DIM_CAP)?;
        for m in &matrices {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Dimension(
                    "generator matrices must be square of equal size".into(),
                ));
            }
            if **m.field() != **field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(GModule {
            group: group.clone(),
            field: field.clone(),
            dim,
            matrices: lock_with(matrices),
            perms: None,
            cosets: None,
        })
    }

    pub fn zero(group: &Arc<Group>, field: &Arc<Field>) -> GModule {
        let m = vec![FieldMatrix::zeros(field, 0, 0); group.gens().len()];
        GModule::new(group, field, m).expect("zero module")
    }

    pub fn trivial(group: &Arc<Group>, field: &Arc<Field>) -> GModule {
        let m = vec![FieldMatrix::identity(field, 1); group.gens().len()];
        GModule::new(group, field, m).expect("trivial module")
    }

    /// The module with basis permuted by the generators.
    pub fn from_permutations(
        group: &Arc<Group>,
        field: &Arc<Field>,
        perms: Vec<Vec<u32>>,
    ) -> Result<GModule> {
        if perms.len() != group.gens().len() {
            return Err(Error::Dimension("one permutation per generator".into()));
        }
        let dim = perms.first().map_or(0, |p| p.len());
        check_cap("module dimension", dim, MODULE_DIM_CAP)?;
        Ok(GModule {
            group: group.clone(),
            field: field.clone(),
            dim,
            matrices: Arc::new(OnceLock::new()),
            perms: Some(Arc::new(perms)),
            cosets: None,
        })
    }

    /// `k[H\G]` with right translation; basis element `i` is the coset of
    /// `cosets.reps[i]`.
    pub fn permutation_module(h: &Subgroup, field: &Arc<Field>) -> Result<GModule> {
        let cs = CosetSpace::new(h)?;
        let g = h.parent();
        let perms: Vec<Vec<u32>> = g
            .gens()
            .iter()
            .map(|&s| (0..cs.len()).map(|i| cs.act(i, s) as u32).collect())
            .collect();
        let mut m = GModule::from_permutations(g, field, perms)?;
        m.cosets = Some(Arc::new(cs));
        Ok(m)
    }

    pub fn regular(g: &Arc<Group>, field: &Arc<Field>) -> Result<GModule> {
        GModule::permutation_module(&Subgroup::trivial(g), field)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ngens(&self) -> usize {
        self.group.gens().len()
    }

    pub fn perms(&self) -> Option<&[Vec<u32>]> {
        self.perms.as_deref().map(|v| v.as_slice())
    }

    pub fn cosets(&self) -> Option<&Arc<CosetSpace>> {
        self.cosets.as_ref()
    }

    pub fn is_permutation(&self) -> bool {
        self.perms.is_some()
    }

    pub fn matrices(&self) -> &[FieldMatrix] {
        self.matrices.get_or_init(|| {
            let perms = self.perms.as_ref().expect("module without matrices");
            perms
                .iter()
                .map(|p| {
                    let mut m = FieldMatrix::zeros(&self.field, self.dim, self.dim);
                    for (i, &j) in p.iter().enumerate() {
                        m.set(i, j as usize, 1);
                    }
                    m
                })
                .collect()
        })
    }

    pub fn gen_matrix(&self, s: usize) -> &FieldMatrix {
        &self.matrices()[s]
    }

    /// Rows of `v` times generator `s`.
    pub fn act_gen(&self, v: &FieldMatrix, s: usize) -> FieldMatrix {
        match &self.perms {
            Some(p) => {
                let mut out = FieldMatrix::zeros(&self.field, 0, self.dim);
                for r in 0..v.rows() {
                    out.push_row_from(&v.permute_row(r, &p[s]), 0);
                }
                out
            }
            None => v.mul(self.gen_matrix(s)),
        }
    }

    /// Rows of `v` times the group element `x`.
    pub fn act(&self, v: &FieldMatrix, x: Elem) -> FieldMatrix {
        let mut out = v.clone();
        for s in self.group.word(x) {
            out = self.act_gen(&out, s);
        }
        out
    }

    /// The matrix of a group element.
    pub fn matrix_of(&self, x: Elem) -> FieldMatrix {
        if let Some(p) = &self.perms {
            let mut img: Vec<u32> = (0..self.dim as u32).collect();
            for s in self.group.word(x) {
                for v in img.iter_mut() {
                    *v = p[s][*v as usize];
                }
            }
            let mut m = FieldMatrix::zeros(&self.field, self.dim, self.dim);
            for (i, &j) in img.iter().enumerate() {
                m.set(i, j as usize, 1);
            }
            return m;
        }
        self.group
            .word(x)
            .into_iter()
            .fold(FieldMatrix::identity(&self.field, self.dim), |acc, s| {
                acc.mul(self.gen_matrix(s))
            })
    }

    /// Matrices of every group element, indexed by element.
    pub fn all_matrices(&self) -> Result<Vec<FieldMatrix>> {
        check_cap(
            "group order times dimension squared",
            self.group.order() * self.dim * self.dim,
            400_000_000,
        )?;
        let n = self.group.order();
        let mut out: Vec<Option<FieldMatrix>> = vec![None; n];
        out[0] = Some(FieldMatrix::identity(&self.field, self.dim));
        for (x, parent, s) in self.group.bfs_order().into_iter().skip(1) {
            let m = out[parent as usize]
                .as_ref()
                .expect("parent first")
                .mul(self.gen_matrix(s));
            out[x as usize] = Some(m);
        }
        Ok(out
            .into_iter()
            .map(|m| m.expect("every element reached"))
            .collect())
    }

    /// Checks invertibility of the generators and the group relations:
    /// along every Cayley edge when `|G| <= 500`, else on 100 random words.
    pub fn validate(&self, rng: &mut SeededRng) -> Result<()> {
        for m in self.matrices() {
            if !m.is_invertible() && self.dim > 0 {
                return Err(Error::Structural("generator matrix is singular".into()));
            }
        }
        let g = &self.group;
        if g.order() <= 500 {
            let all = self.all_matrices()?;
            for x in g.elements() {
                for s in 0..self.ngens() {
                    if all[x as usize].mul(self.gen_matrix(s)) != all[g.mul_gen(x, s) as usize] {
                        return Err(Error::Structural("module relations fail".into()));
                    }
                }
            }
        } else {
            for _ in 0..100 {
                let len = 1 + rng.below(8);
                let mut x = 0;
                let mut m = FieldMatrix::identity(&self.field, self.dim);
                for _ in 0..len {
                    let s = rng.below(self.ngens());
                    x = g.mul_gen(x, s);
                    m = m.mul(self.gen_matrix(s));
                }
                if m != self.matrix_of(x) {
                    return Err(Error::Structural("module relations fail".into()));
                }
            }
        }
        Ok(())
    }

    /// The same module over a larger field.
    pub fn embed(&self, big: &Arc<Field>) -> Result<GModule> {
        if **big == *self.field {
            return Ok(self.clone());
        }
        if let Some(p) = &self.perms {
            let mut m = GModule::from_permutations(&self.group, big, (**p).clone())?;
            m.cosets = self.cosets.clone();
            return Ok(m);
        }
        let ms = self
            .matrices()
            .iter()
            .map(|m| m.embed(big))
            .collect::<Result<Vec<_>>>()?;
        GModule::new(&self.group, big, ms)
    }

    /// Contragredient module, `g -> rho(g)^-T`.
    pub fn dual(&self) -> GModule {
        if let Some(p) = &self.perms {
            return GModule::from_permutations(&self.group, &self.field, (**p).clone())
                .expect("same shape");
        }
        let ms = self
            .matrices()
            .iter()
            .map(|m| m.inverse().expect("invertible generator").transpose())
            .collect();
        GModule::new(&self.group, &self.field, ms).expect("same shape")
    }

    /// `V (x) W` over the field with the diagonal action.
    pub fn tensor(&self, w: &GModule) -> Result<GModule> {
        if !Arc::ptr_eq(&self.group, &w.group) {
            return Err(Error::InvalidParameter(
                "tensor factors over different groups".into(),
            ));
        }
        check_cap("tensor dimension", self.dim * w.dim, MODULE_DIM_CAP)?;
        let ms = self
            .matrices()
            .iter()
            .zip(w.matrices())
            .map(|(a, b)| a.kronecker(b))
            .collect::<Result<Vec<_>>>()?;
        GModule::new(&self.group, &self.field, ms)
    }

    /// `V (x) W` for the direct product `prod` of the two groups.
    pub fn outer_tensor(&self, w: &GModule, prod: &Arc<Group>) -> Result<GModule> {
        let Some((a, b)) = prod.factors() else {
            return Err(Error::InvalidParameter(
                "outer tensor needs a direct product".into(),
            ));
        };
        if !Arc::ptr_eq(a, &self.group) || !Arc::ptr_eq(b, &w.group) {
            return Err(Error::InvalidParameter(
                "factors do not match the product".into(),
            ));
        }
        check_cap("tensor dimension", self.dim * w.dim, MODULE_DIM_CAP)?;
        let iv = FieldMatrix::identity(&self.field, self.dim);
        let iw = FieldMatrix::identity(&self.field, w.dim);
        let mut ms = Vec::new();
        for m in self.matrices() {
            ms.push(m.kronecker(&iw)?);
        }
        for m in w.matrices() {
            ms.push(iv.kronecker(m)?);
        }
        GModule::new(prod, &self.field, ms)
    }

    /// Restriction to a subgroup, as a module for its standalone group.
    pub fn restrict(&self, sub: &Embedded) -> Result<GModule> {
        if !Arc::ptr_eq(sub.parent(), &self.group) {
            return Err(Error::InvalidParameter("subgroup of another group".into()));
        }
        if let Some(p) = &self.perms {
            let perms = sub
                .group
                .gens()
                .iter()
                .map(|&s| {
                    let x = sub.to_parent(s);
                    let mut img: Vec<u32> = (0..self.dim as u32).collect();
                    for t in self.group.word(x) {
                        for v in img.iter_mut() {
                            *v = p[t][*v as usize];
                        }
                    }
                    img
                })
                .collect();
            return GModule::from_permutations(&sub.group, &self.field, perms);
        }
        let ms = sub
            .group
            .gens()
            .iter()
            .map(|&s| self.matrix_of(sub.to_parent(s)))
            .collect();
        GModule::new(&sub.group, &self.field, ms)
    }

    /// `V (x)_{kH} kG` for `V` over the standalone group of `sub`; basis
    /// `v (x) t_i` over the right transversal of `sub`.
    pub fn induce(&self, sub: &Embedded) -> Result<GModule> {
        if !Arc::ptr_eq(&sub.group, &self.group) {
            return Err(Error::InvalidParameter(
                "module is not over the given subgroup".into(),
            ));
        }
        let idx = sub.subgroup.index();
        check_cap("induced dimension", self.dim * idx, MODULE_DIM_CAP)?;
        let g = sub.parent();
        let (coset_of, reps) = sub.subgroup.right_cosets();
        let d = self.dim;
        let mut ms = Vec::new();
        for &s in g.gens() {
            let mut m = FieldMatrix::zeros(&self.field, d * idx, d * idx);
            for (i, &t) in reps.iter().enumerate() {
                let ts = g.mul(t, s);
                let j = coset_of[ts as usize] as usize;
                let h = g.mul(ts, g.inv(reps[j]));
                let hm = self.matrix_of(sub.from_parent(h).expect("element of the subgroup"));
                for r in 0..d {
                    for c in 0..d {
                        let v = hm.get(r, c);
                        if v != 0 {
                            m.set(i * d + r, j * d + c, v);
                        }
                    }
                }
            }
            ms.push(m);
        }
        GModule::new(g, &self.field, ms)
    }

    /// The same module over `qm.target`; the kernel must act trivially.
    pub fn push_to_quotient(&self, qm: &QuotientMap) -> Result<GModule> {
        if !Arc::ptr_eq(&qm.source, &self.group) {
            return Err(Error::InvalidParameter("quotient of another group".into()));
        }
        let id = FieldMatrix::identity(&self.field, self.dim);
        for &z in qm.kernel.gens() {
            if self.matrix_of(z) != id {
                return Err(Error::KernelActsNontrivially);
            }
        }
        let sec = qm.section();
        let ms = qm
            .target
            .gens()
            .iter()
            .map(|&t| self.matrix_of(sec[t as usize]))
            .collect();
        GModule::new(&qm.target, &self.field, ms)
    }

    /// Spin of the rows of `seeds`: an echelon basis (with the spanning
    /// vectors in insertion order) of the submodule they generate.
    pub fn spin(&self, seeds: &FieldMatrix) -> Echelon {
        rep::spin(self, seeds)
    }

    /// The submodule with the given independent basis rows, in that basis.
    pub fn submodule(&self, basis: &FieldMatrix) -> Result<GModule> {
        GModule::new(&self.group, &self.field, rep::restrict_to(self, basis)?)
    }

    /// `V / U` for the submodule `U` spanned by the rows of `basis`. The
    /// quotient basis is the unit vectors at the returned columns.
    pub fn quotient(&self, basis: &FieldMatrix) -> Result<(GModule, Vec<usize>)> {
        let (ms, free) = rep::quotient_action(self, basis);
        Ok((GModule::new(&self.group, &self.field, ms)?, free))
    }

    pub fn to_rep(&self) -> MatrixRep {
        MatrixRep::new(&self.field, self.dim, self.matrices().to_vec()).expect("square generators")
    }

    /// The block-diagonal direct sum.
    pub fn direct_sum(&self, w: &GModule) -> Result<GModule> {
        if !Arc::ptr_eq(&self.group, &w.group) {
            return Err(Error::InvalidParameter(
                "summands over different groups".into(),
            ));
        }
        let d = self.dim + w.dim;
        let ms = self
            .matrices()
            .iter()
            .zip(w.matrices())
            .map(|(a, b)| {
                let mut m = FieldMatrix::zeros(&self.field, d, d);
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        m.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        m.set(self.dim + r, self.dim + c, b.get(r, c));
                    }
                }
                m
            })
            .collect();
        GModule::new(&self.group, &self.field, ms)
    }

    /// Conjugates every generator by the invertible `p`: new basis = rows of `p`.
    pub fn change_basis(&self, p: &FieldMatrix) -> Result<GModule> {
        let inv = p
            .inverse()
            .ok_or_else(|| Error::InvalidParameter("singular change of basis".into()))?;
        let ms = self.matrices().iter().map(|m| p.mul(m).mul(&inv)).collect();
        GModule::new(&self.group, &self.field, ms)
    }
}

impl Action for GModule {
    fn field(&self) -> &Arc<Field> {
        &self.field
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn ngens(&self) -> usize {
        self.group.gens().len()
    }
    fn act_gen(&self, v: &FieldMatrix, s: usize) -> FieldMatrix {
        GModule::act_gen(self, v, s)
    }
}
