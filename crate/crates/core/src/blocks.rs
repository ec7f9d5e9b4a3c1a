//! Blocks of kG: the centre in the class-sum basis, its primitive
//! idempotents, block components of modules and Cartan matrices.
//!
//! Primitive idempotents are read off the Frobenius-fixed subalgebra.
//! On the commutative algebra `Z = Z(kG)` over `GF(q)` the map `x -> x^q`
//! is `GF(q)`-linear, and its fixed points form a split semisimple
//! subalgebra `GF(q)^m` whose idempotents are exactly those of `Z`. So
//! `m = dim ker(F - 1)` is the number of blocks, and idempotents of the
//! fixed algebra are found by splitting elements whose minimal polynomials
//! have distinct roots in `GF(q)`.

use std::sync::{Arc, OnceLock};

use crate::error::{check_cap, Error, Result};
use crate::ffield::{primary_idempotents, Echelon, Fe, Field, FieldMatrix, Poly, MAX_DEGREE};
use crate::groups::{classes, Group};
use crate::modrep::{
    chop, decompose_input, hom_dim, spin_into, EngineRegistry, GModule, ModuleInput,
};
use crate::rng::SeededRng;

/// Largest group whose centre is computed.
pub const CENTER_ORDER_CAP: usize = 100_000;
/// Largest group whose regular module is decomposed for a Cartan matrix.
pub const CARTAN_ORDER_CAP: usize = 8000;

/// `Z(kG)` with basis the class sums `C_0 = 1, C_1, ...`.
#[derive(Clone, Debug)]
pub struct CenterAlgebra {
    group: Arc<Group>,
    field: Arc<Field>,
    sizes: Vec<usize>,
    /// `products[i * r + j]`: the `k` with odd coefficient in `C_i C_j`.
    products: Vec<Vec<u16>>,
    fixed: OnceLock<FieldMatrix>,
}

/// An element of `Z(kG)`: coefficients on class sums.
#[derive(Clone, Debug)]
pub struct CentralIdempotent {
    pub group: Arc<Group>,
    pub field: Arc<Field>,
    pub coefficients: Vec<Fe>,
}

pub fn center_basis(g: &Arc<Group>, field: &Arc<Field>) -> Result<CenterAlgebra> {
    check_cap("group order for the centre", g.order(), CENTER_ORDER_CAP)?;
    let cl = classes(g)?;
    let r = cl.len();
    if r > u16::MAX as usize {
        return Err(Error::cap("number of classes", r, u16::MAX as usize));
    }
    // count x in C_i with x^-1 z_k in C_j, for a fixed z_k in C_k
    let mut parity = vec![0u8; r * r * r];
    for k in 0..r {
        let z = cl.rep(k);
        for x in g.elements() {
            let i = cl.class_of[x as usize] as usize;
            let j = cl.class_of[g.mul(g.inv(x), z) as usize] as usize;
            parity[(i * r + j) * r + k] ^= 1;
        }
    }
    let products = (0..r * r)
        .map(|ij| {
            (0..r)
                .filter(|&k| parity[ij * r + k] == 1)
                .map(|k| k as u16)
                .collect()
        })
        .collect();
    Ok(CenterAlgebra {
        group: g.clone(),
        field: field.clone(),
        sizes: cl.classes.iter().map(|c| c.len()).collect(),
        products,
        fixed: OnceLock::new(),
    })
}

impl CenterAlgebra {
    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Structure constant of `C_k` in `C_i C_j`, reduced mod 2.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Fe {
        self.products[i * self.dim() + j].contains(&(k as u16)) as Fe
    }

    pub fn one(&self) -> Vec<Fe> {
        let mut x = vec![0; self.dim()];
        x[0] = 1;
        x
    }

    pub fn basis_element(&self, i: usize) -> Vec<Fe> {
        let mut x = vec![0; self.dim()];
        x[i] = 1;
        x
    }

    pub fn mul(&self, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let r = self.dim();
        let mut out = vec![0; r];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = f.mul(x, y);
                for &k in &self.products[i * r + j] {
                    out[k as usize] ^= c;
                }
            }
        }
        out
    }

    /// `x^q` for `q` the field order.
    pub fn frobenius(&self, x: &[Fe]) -> Vec<Fe> {
        let mut y = x.to_vec();
        for _ in 0..self.field.degree() {
            y = self.mul(&y, &y);
        }
        y
    }

    /// Scalar by which `x` acts on the trivial module.
    pub fn augmentation(&self, x: &[Fe]) -> Fe {
        x.iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&c, &s)| if s % 2 == 1 { acc ^ c } else { acc })
    }

    fn row(&self, x: &[Fe]) -> FieldMatrix {
        FieldMatrix::from_fn(&self.field, 1, self.dim(), |_, j| x[j])
    }

    /// Basis of the Frobenius-fixed subalgebra `{x : x^q = x}`.
    pub fn frobenius_fixed(&self) -> FieldMatrix {
        self.fixed.get_or_init(|| self.compute_fixed()).clone()
    }

    fn compute_fixed(&self) -> FieldMatrix {
        let r = self.dim();
        let mut m = FieldMatrix::zeros(&self.field, r, r);
        for i in 0..r {
            let fx = self.frobenius(&self.basis_element(i));
            for (j, &c) in fx.iter().enumerate() {
                m.set(i, j, c);
            }
            m.set(i, i, m.get(i, i) ^ 1);
        }
        m.left_nullspace_basis()
    }

    /// Number of blocks over this field.
    pub fn block_count(&self) -> usize {
        self.frobenius_fixed().rows()
    }

    /// Dimension of `ker(F - 1)` on `eZ`; 1 exactly when `e` is primitive.
    pub fn fixed_dim_under(&self, e: &[Fe]) -> usize {
        let fixed = self.frobenius_fixed();
        let mut ech = Echelon::new(&self.field, self.dim());
        for i in 0..fixed.rows() {
            ech.insert(&self.row(&self.mul(e, &fixed.row_values(i))), 0);
        }
        ech.len()
    }

    fn combine(&self, powers: &[Vec<Fe>], p: &Poly) -> Vec<Fe> {
        let f = &self.field;
        let mut out = vec![0; self.dim()];
        for (k, &c) in p.coeffs().iter().enumerate() {
            if c != 0 {
                for (o, &x) in out.iter_mut().zip(&powers[k]) {
                    *o ^= f.mul(c, x);
                }
            }
        }
        out
    }

    /// Powers of `y` starting from `unit`, and its minimal polynomial.
    fn minimal_polynomial(&self, y: &[Fe], unit: &[Fe]) -> (Vec<Vec<Fe>>, Poly) {
        let mut ech = Echelon::with_coordinates(&self.field, self.dim());
        let mut powers = vec![unit.to_vec()];
        ech.insert(&self.row(unit), 0);
        loop {
            let next = self.mul(y, powers.last().expect("nonempty"));
            let v = self.row(&next);
            powers.push(next);
            if let Some(mut c) = ech.coordinates(&v, 0) {
                c.push(1);
                return (powers, Poly::new(&self.field, c));
            }
            ech.insert(&v, 0);
        }
    }

    /// The primitive idempotents, certified; not checked for field
    /// sufficiency.
    pub fn primitive_idempotents(&self, rng: &mut SeededRng) -> Result<Vec<Vec<Fe>>> {
        let fixed = self.frobenius_fixed();
        let m = fixed.rows();
        let mut idem = vec![self.one()];
        let mut stale = 0;
        while idem.len() < m {
            stale += 1;
            if stale > 200 {
                return Err(Error::IterationCap {
                    what: "block idempotents",
                    diagnostics: format!("{} of {m} idempotents found", idem.len()),
                });
            }
            let mut x = vec![0; self.dim()];
            for i in 0..m {
                let c = rng.element(&self.field);
                for (o, &v) in x.iter_mut().zip(fixed.row_values(i).iter()) {
                    *o ^= self.field.mul(c, v);
                }
            }
            let mut next = Vec::new();
            for e in &idem {
                let y = self.mul(e, &x);
                let (powers, mp) = self.minimal_polynomial(&y, e);
                let mut factors = mp.factor(rng);
                if factors.len() < 2 {
                    next.push(e.clone());
                    continue;
                }
                factors.sort_by(|a, b| a.0.coeffs().cmp(b.0.coeffs()));
                for (_, t) in primary_idempotents(&factors) {
                    next.push(self.combine(&powers, &t.rem(&mp)));
                }
            }
            if next.len() > idem.len() {
                stale = 0;
            }
            idem = next;
        }
        self.certify(&idem)?;
        Ok(idem)
    }

    /// Sum one, pairwise orthogonal, idempotent and primitive.
    pub fn certify(&self, idem: &[Vec<Fe>]) -> Result<()> {
        let r = self.dim();
        let zero = vec![0; r];
        let mut sum = zero.clone();
        for (a, e) in idem.iter().enumerate() {
            if self.mul(e, e) != *e {
                return Err(Error::Structural(format!(
                    "block idempotent {a} is not idempotent"
                )));
            }
            for f in &idem[a + 1..] {
                if self.mul(e, f) != zero {
                    return Err(Error::Structural(
                        "block idempotents are not orthogonal".into(),
                    ));
                }
            }
            if self.fixed_dim_under(e) != 1 {
                return Err(Error::Structural(format!(
                    "block idempotent {a} is not primitive"
                )));
            }
            for (s, &c) in sum.iter_mut().zip(e) {
                *s ^= c;
            }
        }
        if sum != self.one() {
            return Err(Error::Structural(
                "block idempotents do not sum to one".into(),
            ));
        }
        Ok(())
    }
}

impl PartialEq for CentralIdempotent {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group)
            && self.field.degree() == other.field.degree()
            && self.coefficients == other.coefficients
    }
}

impl Eq for CentralIdempotent {}

impl CentralIdempotent {
    /// Scalar on the trivial module.
    pub fn augmentation(&self) -> Fe {
        let cl = classes(&self.group).expect("classes were computed");
        self.coefficients
            .iter()
            .zip(&cl.classes)
            .fold(
                0,
                |acc, (&c, cls)| if cls.len() % 2 == 1 { acc ^ c } else { acc },
            )
    }

    pub fn is_principal(&self) -> bool {
        self.augmentation() == 1
    }

    /// Classes with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coefficients.len())
            .filter(|&i| self.coefficients[i] != 0)
            .collect()
    }

    /// Coefficient of the group element `x`.
    pub fn coefficient_of(&self, x: u32) -> Fe {
        let cl = classes(&self.group).expect("classes were computed");
        self.coefficients[cl.class_of[x as usize] as usize]
    }

    /// All coefficients lie in GF(2).
    pub fn is_rational(&self) -> bool {
        self.coefficients.iter().all(|&c| c <= 1)
    }

    /// The element as a vector of the regular module `k[1\G]`.
    pub fn regular_vector(&self, reg: &GModule) -> Result<FieldMatrix> {
        let cs = reg
            .cosets()
            .ok_or_else(|| Error::InvalidParameter("not a regular module".into()))?;
        if cs.len() != self.group.order() {
            return Err(Error::InvalidParameter("not a regular module".into()));
        }
        Ok(FieldMatrix::from_fn(&self.field, 1, cs.len(), |_, i| {
            self.coefficient_of(cs.reps[i])
        }))
    }
}

fn to_idempotent(z: &CenterAlgebra, c: Vec<Fe>) -> CentralIdempotent {
    CentralIdempotent {
        group: z.group.clone(),
        field: z.field.clone(),
        coefficients: c,
    }
}

/// The block idempotents over `field`, principal first. Fails when the
/// block count still grows over `GF(2^{2e})`.
pub fn block_idempotents(
    g: &Arc<Group>,
    field: &Arc<Field>,
    rng: &mut SeededRng,
) -> Result<Vec<CentralIdempotent>> {
    let z = center_basis(g, field)?;
    check_field_stable(&z)?;
    let mut idem: Vec<_> = z
        .primitive_idempotents(rng)?
        .into_iter()
        .map(|c| to_idempotent(&z, c))
        .collect();
    let principal = idem.iter().filter(|e| e.is_principal()).count();
    if principal != 1 {
        return Err(Error::Structural(format!(
            "{principal} blocks act as identity on the trivial module"
        )));
    }
    idem.sort_by_key(|e| (!e.is_principal(), e.support(), e.coefficients.clone()));
    Ok(idem)
}

fn check_field_stable(z: &CenterAlgebra) -> Result<()> {
    let e = z.field.degree();
    if 2 * e > MAX_DEGREE {
        return Err(Error::Structural(format!(
            "cannot recompute blocks over GF(2^{})",
            2 * e
        )));
    }
    let big = center_basis(&z.group, &Field::gf(2 * e)?)?;
    let (a, b) = (z.block_count(), big.block_count());
    if a != b {
        return Err(Error::Structural(format!(
            "block count not stable: {a} over GF(2^{e}), {b} over GF(2^{})",
            2 * e
        )));
    }
    Ok(())
}

/// The smallest `e` (doubling from `start`) over which the block count is
/// stable.
pub fn stable_field_degree(g: &Arc<Group>, start: u32) -> Result<u32> {
    let mut e = start.max(1);
    loop {
        let z = center_basis(g, &Field::gf(e)?)?;
        if check_field_stable(&z).is_ok() {
            return Ok(e);
        }
        e *= 2;
        if 2 * e > MAX_DEGREE {
            return Err(Error::Structural(
                "block count does not stabilise in range".into(),
            ));
        }
    }
}

/// The idempotent of the principal block. Its coefficients lie in GF(2),
/// so when `field` does not split the blocks it is computed over a
/// stable extension and read back.
pub fn principal_idempotent(
    g: &Arc<Group>,
    field: &Arc<Field>,
    rng: &mut SeededRng,
) -> Result<CentralIdempotent> {
    let z = center_basis(g, field)?;
    if z.block_count() == 1 {
        return Ok(to_idempotent(&z, z.one()));
    }
    let e = stable_field_degree(g, field.degree())?;
    let stable = if e == field.degree() {
        field.clone()
    } else {
        Field::gf(e)?
    };
    let p = block_idempotents(g, &stable, rng)?.remove(0);
    if !p.is_rational() {
        return Err(Error::Structural(
            "principal block idempotent is not defined over GF(2)".into(),
        ));
    }
    Ok(CentralIdempotent {
        group: g.clone(),
        field: field.clone(),
        coefficients: p.coefficients,
    })
}

/// `v e` with the induced action, and its basis in `v`'s coordinates.
pub fn block_component(v: &GModule, e: &CentralIdempotent) -> Result<(GModule, FieldMatrix)> {
    if !Arc::ptr_eq(v.group(), &e.group) || !Arc::ptr_eq(v.field(), &e.field) {
        return Err(Error::InvalidParameter(
            "module and idempotent differ in group or field".into(),
        ));
    }
    block_component_by(v, &|x| e.coefficient_of(x))
}

/// `v c` for the central element `c = sum coeff(x) x`.
pub fn block_component_by(
    v: &GModule,
    coeff: &dyn Fn(u32) -> Fe,
) -> Result<(GModule, FieldMatrix)> {
    let seeds = module_generators(v);
    let images = apply_central(v, coeff, &seeds)?;
    let ech = v.spin(&images);
    let basis = ech.inserted().clone();
    Ok((v.submodule(&basis)?, basis))
}

/// Rows generating `v` as a module: one basis vector per orbit for
/// permutation modules, otherwise the echelon pivots of a spin.
fn module_generators(v: &GModule) -> FieldMatrix {
    let f = v.field();
    let d = v.dim();
    let mut gens = Vec::new();
    if let Some(perms) = v.perms() {
        let mut seen = vec![false; d];
        for i in 0..d {
            if seen[i] {
                continue;
            }
            gens.push(i);
            let mut stack = vec![i];
            seen[i] = true;
            while let Some(a) = stack.pop() {
                for p in perms {
                    let b = p[a] as usize;
                    if !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
    } else {
        let mut ech = Echelon::new(f, d);
        for i in 0..d {
            let u = FieldMatrix::from_fn(f, 1, d, |_, j| (i == j) as Fe);
            if !ech.contains(&u, 0) {
                gens.push(i);
                spin_into(v, &u, &mut ech);
            }
        }
    }
    FieldMatrix::from_fn(f, gens.len(), d, |r, c| (gens[r] == c) as Fe)
}

/// Rows of `seeds` multiplied by the central element `e`.
fn apply_central(
    v: &GModule,
    coeff: &dyn Fn(u32) -> Fe,
    seeds: &FieldMatrix,
) -> Result<FieldMatrix> {
    let g = v.group();
    let f = v.field();
    let d = v.dim();
    check_cap(
        "group order times module dimension",
        g.order() * d,
        50_000_000,
    )?;
    let mut out = FieldMatrix::zeros(f, seeds.rows(), d);
    for r in 0..seeds.rows() {
        let mut img = vec![FieldMatrix::zeros(f, 1, d); g.order()];
        img[g.identity() as usize] = seeds.row(r);
        let mut acc = FieldMatrix::zeros(f, 1, d);
        for (x, parent, s) in g.bfs_order() {
            if x != g.identity() {
                img[x as usize] = v.act_gen(&img[parent as usize], s);
            }
            let c = coeff(x);
            if c != 0 {
                acc.add_scaled(&img[x as usize], c);
            }
        }
        for j in 0..d {
            out.set(r, j, acc.get(0, j));
        }
    }
    Ok(out)
}

/// The block `e kG` as a right ideal of the regular module.
pub fn regular_component(e: &CentralIdempotent) -> Result<(GModule, FieldMatrix)> {
    let reg = GModule::regular(&e.group, &e.field)?;
    let ech = reg.spin(&e.regular_vector(&reg)?);
    let basis = ech.inserted().clone();
    Ok((reg.submodule(&basis)?, basis))
}

/// Cartan matrix of a block: `entries[i][j]` is the multiplicity of the
/// simple `i` in the projective cover of the simple `j`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CartanMatrix {
    pub simple_dims: Vec<usize>,
    pub entries: Vec<Vec<usize>>,
}

impl CartanMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.entries.iter().map(|r| r.iter().sum()).collect()
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> i128 {
        let n = self.size();
        let mut a: Vec<Vec<i128>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        if n == 0 {
            1
        } else {
            sign * a[n - 1][n - 1]
        }
    }

    /// Equal up to a simultaneous reordering of rows and columns.
    pub fn permutation_congruent(&self, other: &CartanMatrix) -> bool {
        let n = self.size();
        if n != other.size() {
            return false;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            if (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == other.entries[perm[i]][perm[j]]))
            {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Cartan matrix of the block of `e`, from a decomposition of `e kG`
/// into projective indecomposables.
pub fn cartan_matrix(e: &CentralIdempotent, rng: &mut SeededRng) -> Result<CartanMatrix> {
    check_cap(
        "group order for Cartan matrices",
        e.group.order(),
        CARTAN_ORDER_CAP,
    )?;
    let (module, basis) = regular_component(e)?;
    let input = ModuleInput {
        module,
        regular_ideal: Some(basis),
    };
    let dec = decompose_input(&input, &EngineRegistry::default(), rng)?;
    let pims: Vec<GModule> = dec.summands.iter().map(|s| s.module.clone()).collect();
    // one simple per projective indecomposable: its head
    let mut simples: Vec<GModule> = Vec::new();
    let mut columns = Vec::new();
    for p in &pims {
        let factors = chop(p, rng)?;
        let mut col = Vec::new();
        for (s, k) in factors.simples() {
            let idx = match find_simple(&simples, s, rng)? {
                Some(i) => i,
                None => {
                    simples.push(s.clone());
                    simples.len() - 1
                }
            };
            col.push((idx, k));
        }
        columns.push(col);
    }
    let n = pims.len();
    if simples.len() != n {
        return Err(Error::Structural(format!(
            "{} simples against {n} projective indecomposables; the field may not split the block",
            simples.len()
        )));
    }
    let mut head = Vec::with_capacity(n);
    for p in &pims {
        let mut h = None;
        for (i, s) in simples.iter().enumerate() {
            if hom_dim(p, s, rng)? > 0 {
                if h.is_some() {
                    return Err(Error::Structural(
                        "projective indecomposable with two heads".into(),
                    ));
                }
                h = Some(i);
            }
        }
        head.push(
            h.ok_or_else(|| Error::Structural("projective indecomposable without a head".into()))?,
        );
    }
    // reorder simples so that simple j is the head of PIM j
    let mut pos = vec![usize::MAX; n];
    for (j, &h) in head.iter().enumerate() {
        pos[h] = j;
    }
    if pos.contains(&usize::MAX) {
        return Err(Error::Structural(
            "two projective indecomposables share a head".into(),
        ));
    }
    let mut entries = vec![vec![0; n]; n];
    for (j, col) in columns.iter().enumerate() {
        for &(i, k) in col {
            entries[pos[i]][j] += k;
        }
    }
    let mut simple_dims = vec![0; n];
    for (i, s) in simples.iter().enumerate() {
        simple_dims[pos[i]] = s.dim();
    }
    Ok(CartanMatrix {
        simple_dims,
        entries,
    })
}

fn find_simple(simples: &[GModule], s: &GModule, rng: &mut SeededRng) -> Result<Option<usize>> {
    for (i, t) in simples.iter().enumerate() {
        if t.dim() == s.dim() && hom_dim(t, s, rng)? > 0 {
            return Ok(Some(i));
        }
    }
    Ok(None)
}
