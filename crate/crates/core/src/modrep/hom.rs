//! Homomorphism spaces between modules.
//!
//! The source is presented by spinning: a few root vectors, a spanning
//! tree of `(parent, generator)` edges, and one linear relation per
//! non-tree edge. A hom is fixed by the images of the roots, and each
//! relation imposes `dim W` linear conditions on those images.

use std::sync::Arc;

use crate::error::{check_cap, Error, Result};
use crate::ffield::{Echelon, Fe, Field, FieldMatrix};
use crate::groups::Subgroup;
use crate::rng::SeededRng;

use super::module::GModule;
use super::rep::Action;

/// Tries of random combinations before falling back to decompositions.
const ISO_TRIES: usize = 64;
/// Bound on `roots * dim W`, the number of unknowns of the hom system.
pub const HOM_UNKNOWN_CAP: usize = 6000;

/// A presentation of a module found by spinning.
#[derive(Clone, Debug)]
pub struct SpinPresentation {
    /// The spanning vectors, in order of discovery.
    pub basis: FieldMatrix,
    /// Root number of each spanning vector.
    pub root_of: Vec<usize>,
    /// `(parent, generator)` for non-root spanning vectors.
    pub parent: Vec<Option<(usize, usize)>>,
    /// Relations `basis[j] * s = sum_l c_l basis[l]`.
    pub relations: Vec<(usize, usize, Vec<Fe>)>,
    pub nroots: usize,
}

impl SpinPresentation {
    /// Spins random vectors until the whole module is covered.
    pub fn new<A: Action + ?Sized>(v: &A, rng: &mut SeededRng) -> SpinPresentation {
        let f = v.field();
        let d = v.dim();
        let mut ech = Echelon::with_coordinates(f, d);
        let mut root_of = Vec::new();
        let mut parent = Vec::new();
        let mut relations = Vec::new();
        let mut nroots = 0;
        let mut std_next = 0;
        let mut random_tries = 0;
        while ech.len() < d {
            // random roots keep the generating set small; fall back to
            // standard vectors so that termination is guaranteed
            let cand = if random_tries < 4 {
                random_tries += 1;
                FieldMatrix::random(f, 1, d, rng)
            } else {
                while ech.contains(&unit(f, d, std_next), 0) {
                    std_next += 1;
                }
                unit(f, d, std_next)
            };
            if !ech.insert(&cand, 0) {
                continue;
            }
            random_tries = 0;
            let root = nroots;
            nroots += 1;
            root_of.push(root);
            parent.push(None);
            let mut i = ech.len() - 1;
            while i < ech.len() {
                let b = ech.inserted().row(i);
                for s in 0..v.ngens() {
                    let w = v.act_gen(&b, s);
                    match ech.coordinates(&w, 0) {
                        Some(c) => relations.push((i, s, c)),
                        None => {
                            ech.insert(&w, 0);
                            root_of.push(root);
                            parent.push(Some((i, s)));
                        }
                    }
                }
                i += 1;
            }
        }
        SpinPresentation {
            basis: ech.inserted().clone(),
            root_of,
            parent,
            relations,
            nroots,
        }
    }
}

fn unit(f: &Arc<Field>, d: usize, i: usize) -> FieldMatrix {
    let mut m = FieldMatrix::zeros(f, 1, d);
    m.set(0, i, 1);
    m
}

fn check_pair(v: &GModule, w: &GModule) -> Result<()> {
    if !Arc::ptr_eq(v.group(), w.group()) {
        return Err(Error::InvalidParameter(
            "modules over different groups".into(),
        ));
    }
    if **v.field() != **w.field() {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// Solution space of the hom system: rows are root-image vectors of
/// length `nroots * dim W`, plus the path matrices to rebuild homs.
struct HomSystem {
    pres: SpinPresentation,
    /// `paths[j]`: the matrix taking root image to image of `basis[j]`.
    paths: Vec<FieldMatrix>,
    solutions: FieldMatrix,
}

fn solve_hom<A: Action + ?Sized, B: Action + ?Sized>(
    v: &A,
    w: &B,
    rng: &mut SeededRng,
) -> Result<HomSystem> {
    if v.ngens() != w.ngens() {
        return Err(Error::InvalidParameter(
            "actions with different generator counts".into(),
        ));
    }
    let pres = SpinPresentation::new(v, rng);
    let dw = w.dim();
    let f = v.field();
    let n = pres.nroots * dw;
    check_cap("hom system unknowns", n, HOM_UNKNOWN_CAP)?;
    let mut paths: Vec<FieldMatrix> = Vec::with_capacity(v.dim());
    for p in &pres.parent {
        let m = match p {
            None => FieldMatrix::identity(f, dw),
            Some((j, s)) => w.act_gen(&paths[*j], *s),
        };
        paths.push(m);
    }
    let mut ech = Echelon::new(f, n);
    'rel: for (j, s, c) in &pres.relations {
        // columns of  T_j rho(s) - sum c_l T_l, blockwise by root
        let mut m = FieldMatrix::zeros(f, n, dw);
        let lhs = w.act_gen(&paths[*j], *s);
        add_block(&mut m, pres.root_of[*j] * dw, &lhs, 1, f);
        for (l, &cl) in c.iter().enumerate() {
            if cl != 0 {
                add_block(&mut m, pres.root_of[l] * dw, &paths[l], cl, f);
            }
        }
        let cols = m.transpose();
        for r in 0..cols.rows() {
            ech.insert(&cols, r);
            if ech.len() == n {
                break 'rel;
            }
        }
    }
    let cons = ech.echelon_rows();
    let solutions = if cons.rows() == 0 {
        FieldMatrix::identity(f, n)
    } else {
        cons.nullspace_basis()
    };
    Ok(HomSystem {
        pres,
        paths,
        solutions,
    })
}

fn add_block(m: &mut FieldMatrix, row0: usize, b: &FieldMatrix, c: Fe, f: &Field) {
    for r in 0..b.rows() {
        for col in 0..b.cols() {
            let x = b.get(r, col);
            if x != 0 {
                let cur = m.get(row0 + r, col);
                m.set(row0 + r, col, cur ^ f.mul(c, x));
            }
        }
    }
}

impl HomSystem {
    fn to_matrix(
        &self,
        x: &FieldMatrix,
        xr: usize,
        dv: usize,
        dw: usize,
        binv: &FieldMatrix,
    ) -> FieldMatrix {
        let f = x.field();
        let mut images = FieldMatrix::zeros(f, dv, dw);
        for j in 0..dv {
            let root = self.pres.root_of[j];
            let p = &self.paths[j];
            for k in 0..dw {
                let c = x.get(xr, root * dw + k);
                if c != 0 {
                    images.axpy_row_from(j, p, k, c);
                }
            }
        }
        binv.mul(&images)
    }
}

/// A basis of `Hom_kG(V, W)` as `dim V x dim W` matrices acting on row vectors.
pub fn hom_basis(v: &GModule, w: &GModule, rng: &mut SeededRng) -> Result<Vec<FieldMatrix>> {
    check_pair(v, w)?;
    if v.dim() == 0 || w.dim() == 0 {
        return Ok(Vec::new());
    }
    if let Some(cs) = v.cosets() {
        if v.dim() * w.dim() > HOM_UNKNOWN_CAP {
            return permutation_hom_basis(v, &cs.subgroup, cs.reps.as_slice(), w);
        }
    }
    hom_basis_action(v, w, rng)
}

/// `Hom(k[H\G], W) = W^H`: the hom sends coset `H r_i` to `w r_i`.
fn permutation_hom_basis(
    v: &GModule,
    h: &Subgroup,
    reps: &[u32],
    w: &GModule,
) -> Result<Vec<FieldMatrix>> {
    let fixed = fixed_points(w, h);
    let mut out = Vec::new();
    for r in 0..fixed.rows() {
        let x = fixed.row(r);
        let mut m = FieldMatrix::zeros(v.field(), v.dim(), w.dim());
        for (i, &t) in reps.iter().enumerate() {
            let img = w.act(&x, t);
            m.axpy_row_from(i, &img, 0, 1);
        }
        out.push(m);
    }
    Ok(out)
}

/// Hom basis for two actions of the same generator list.
pub fn hom_basis_action<A: Action + ?Sized, B: Action + ?Sized>(
    v: &A,
    w: &B,
    rng: &mut SeededRng,
) -> Result<Vec<FieldMatrix>> {
    if v.dim() == 0 || w.dim() == 0 {
        return Ok(Vec::new());
    }
    let sys = solve_hom(v, w, rng)?;
    let binv = sys
        .pres
        .basis
        .inverse()
        .expect("spanning vectors form a basis");
    Ok((0..sys.solutions.rows())
        .map(|r| sys.to_matrix(&sys.solutions, r, v.dim(), w.dim(), &binv))
        .collect())
}

pub fn hom_dim_action<A: Action + ?Sized, B: Action + ?Sized>(
    v: &A,
    w: &B,
    rng: &mut SeededRng,
) -> Result<usize> {
    if v.dim() == 0 || w.dim() == 0 {
        return Ok(0);
    }
    Ok(solve_hom(v, w, rng)?.solutions.rows())
}

/// `dim Hom_kG(V, W)`.
pub fn hom_dim(v: &GModule, w: &GModule, rng: &mut SeededRng) -> Result<usize> {
    check_pair(v, w)?;
    if v.dim() == 0 || w.dim() == 0 {
        return Ok(0);
    }
    // transitive permutation modules on either side reduce to fixed points
    if let Some(cs) = v.cosets() {
        return Ok(fixed_points(w, &cs.subgroup).rows());
    }
    if let Some(cs) = w.cosets() {
        return Ok(fixed_points(&v.dual(), &cs.subgroup).rows());
    }
    hom_dim_action(v, w, rng)
}

/// Basis of `End_kG(V)`.
pub fn end_basis(v: &GModule, rng: &mut SeededRng) -> Result<Vec<FieldMatrix>> {
    hom_basis(v, v, rng)
}

/// Rows spanning `V^Q`, the vectors fixed by every element of `q`.
pub fn fixed_points(v: &GModule, q: &Subgroup) -> FieldMatrix {
    let f = v.field();
    let d = v.dim();
    if let Some(perms) = v.perms() {
        // orbit sums of Q on the permuted basis
        let g = v.group();
        let qperms: Vec<Vec<u32>> = q.gens().iter().map(|&x| perm_of(g, perms, x)).collect();
        let mut orbit = vec![usize::MAX; d];
        let mut rows = Vec::new();
        for start in 0..d {
            if orbit[start] != usize::MAX {
                continue;
            }
            let id = rows.len();
            let mut members = vec![start];
            orbit[start] = id;
            let mut i = 0;
            while i < members.len() {
                for p in &qperms {
                    let y = p[members[i]] as usize;
                    if orbit[y] == usize::MAX {
                        orbit[y] = id;
                        members.push(y);
                    }
                }
                i += 1;
            }
            rows.push(members);
        }
        let mut m = FieldMatrix::zeros(f, rows.len(), d);
        for (r, members) in rows.iter().enumerate() {
            for &c in members {
                m.set(r, c, 1);
            }
        }
        return m;
    }
    let id = FieldMatrix::identity(f, d);
    let mut stacked = FieldMatrix::zeros(f, 0, d);
    for &x in q.gens() {
        let a = v.matrix_of(x).add(&id).expect("same shape").transpose();
        stacked = stacked.vstack(&a).expect("same width");
    }
    if stacked.rows() == 0 {
        return id;
    }
    stacked.nullspace_basis()
}

/// Image of basis vector `i` under each element is `perm_of(..)[i]`.
pub fn perm_of(g: &crate::groups::Group, perms: &[Vec<u32>], x: u32) -> Vec<u32> {
    let mut img: Vec<u32> = (0..perms.first().map_or(0, |p| p.len()) as u32).collect();
    for s in g.word(x) {
        for v in img.iter_mut() {
            *v = perms[s][*v as usize];
        }
    }
    img
}

/// Decides `V ~= W`: dimensions, hom dimensions both ways, then a search
/// for an invertible hom among random combinations over a field with at
/// least four elements, and finally a summand-by-summand comparison.
pub fn is_isomorphic(v: &GModule, w: &GModule, rng: &mut SeededRng) -> Result<bool> {
    check_pair(v, w)?;
    if v.dim() != w.dim() {
        return Ok(false);
    }
    if v.dim() == 0 {
        return Ok(true);
    }
    let hvw = hom_basis(v, w, rng)?;
    if hvw.is_empty() {
        return Ok(false);
    }
    if hom_dim(w, v, rng)? != hvw.len() {
        return Ok(false);
    }
    if hom_dim(v, v, rng)? != hvw.len() {
        return Ok(false);
    }
    let big = if v.field().degree() == 1 {
        Field::gf(2)?
    } else {
        v.field().clone()
    };
    let basis: Vec<FieldMatrix> = hvw.iter().map(|m| m.embed(&big)).collect::<Result<_>>()?;
    for _ in 0..ISO_TRIES {
        let mut m = FieldMatrix::zeros(&big, v.dim(), v.dim());
        for b in &basis {
            let c = rng.element(&big);
            m.add_scaled(b, c);
        }
        if m.is_invertible() {
            return Ok(true);
        }
    }
    super::decompose::isomorphic_by_decomposition(v, w, rng)
}

/// Whether two indecomposable modules are isomorphic. With `I` the span of
/// all composites `W -> V -> W`, they are isomorphic exactly when `I`
/// contains a unit of the local ring `End(V)`, i.e. when the powers of
/// `I` never vanish.
pub fn indecomposables_isomorphic(v: &GModule, w: &GModule, rng: &mut SeededRng) -> Result<bool> {
    check_pair(v, w)?;
    if v.dim() != w.dim() {
        return Ok(false);
    }
    if v.dim() == 0 {
        return Ok(true);
    }
    let a = hom_basis(v, w, rng)?;
    let b = hom_basis(w, v, rng)?;
    if a.is_empty() || b.is_empty() {
        return Ok(false);
    }
    let d = v.dim();
    let f = v.field();
    let flat = |m: &FieldMatrix| FieldMatrix::from_fn(f, 1, d * d, |_, k| m.get(k / d, k % d));
    let mut ideal = Echelon::new(f, d * d);
    let mut gens = Vec::new();
    for x in &a {
        for y in &b {
            let p = x.mul(y);
            if ideal.insert(&flat(&p), 0) {
                gens.push(p);
            }
        }
    }
    // I^k for growing k; a unit in I makes every power nonzero
    let mut power = gens.clone();
    for _ in 0..=d * d {
        if power.is_empty() {
            return Ok(false);
        }
        if power.iter().any(|p| p.is_invertible()) {
            return Ok(true);
        }
        let mut next_ech = Echelon::new(f, d * d);
        let mut next = Vec::new();
        for p in &power {
            for g in &gens {
                let q = p.mul(g);
                if next_ech.insert(&flat(&q), 0) {
                    next.push(q);
                }
            }
        }
        if next.len() == power.len() {
            // I^k = I^(k+1) != 0 forces I to contain a unit
            return Ok(true);
        }
        power = next;
    }
    Ok(false)
}
