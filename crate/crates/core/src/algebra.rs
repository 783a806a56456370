//! Finite-dimensional local quotient algebras as concrete linear-algebra
//! objects: multiplication matrices, annihilators, ideals as subspaces,
//! socle, and dimensions of further quotients.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{gradient, Monomial, Polynomial, Rat};
use crate::linalg::{column_space, QMat};
use crate::sbasis::{standard_basis, standard_basis_tracked, MonomialOrder, StandardBasis};

/// A coordinate vector over the standard-monomial basis of an algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    pub coords: Vec<Rat>,
}

impl AlgebraElement {
    pub fn zero(dim: usize) -> Self {
        AlgebraElement {
            coords: vec![Rat::zero(); dim],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// A linear subspace of an algebra, held as a reduced-column-echelon basis
/// matrix so that equality and containment are decidable by comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    mat: QMat,
}

impl Subspace {
    pub fn from_columns(ambient: usize, cols: Vec<Vec<Rat>>) -> Self {
        Subspace {
            mat: column_space(&QMat::from_columns(ambient, cols)),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            mat: QMat::identity(ambient),
        }
    }

    pub fn trivial(ambient: usize) -> Self {
        Subspace {
            mat: QMat::zeros(ambient, 0),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn basis_matrix(&self) -> &QMat {
        &self.mat
    }

    pub fn basis_columns(&self) -> Vec<Vec<Rat>> {
        self.mat.columns()
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn contains_vector(&self, v: &[Rat]) -> bool {
        if v.iter().all(|c| c.is_zero()) {
            return true;
        }
        let stacked = self
            .mat
            .hstack(&QMat::from_columns(self.ambient_dim(), vec![v.to_vec()]));
        stacked.rank() == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other
            .basis_columns()
            .iter()
            .all(|v| self.contains_vector(v))
    }

    /// Intersection via the kernel of [A | -B].
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim(), other.ambient_dim());
        let k1 = self.dim();
        if k1 == 0 || other.dim() == 0 {
            return Subspace::trivial(self.ambient_dim());
        }
        let mut negb = other.mat.clone();
        for i in 0..negb.rows() {
            for j in 0..negb.cols() {
                let v = -negb[(i, j)].clone();
                negb[(i, j)] = v;
            }
        }
        let stacked = self.mat.hstack(&negb);
        let mut cols = Vec::new();
        for kvec in stacked.kernel() {
            let a_part = &kvec[..k1];
            cols.push(self.mat.mul_vec(a_part));
        }
        Subspace::from_columns(self.ambient_dim(), cols)
    }
}

/// A finite-dimensional quotient algebra with its standard-monomial basis,
/// canonical normal-form engine, and a cache of multiplication matrices.
#[derive(Debug)]
pub struct QuotientAlgebra {
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    engine: StandardBasis,
    mult_cache: RwLock<HashMap<Polynomial, Arc<QMat>>>,
}

impl QuotientAlgebra {
    /// Builds the quotient by `gens` in the local ring at the origin.
    pub fn build(gens: &[Polynomial]) -> Result<Self> {
        Self::build_with_order(gens, MonomialOrder::local(gens[0].nvars()))
    }

    /// Builds the quotient under an explicit order (global orders give the
    /// affine, multilocal quotient).
    pub fn build_with_order(gens: &[Polynomial], order: MonomialOrder) -> Result<Self> {
        let engine = standard_basis(gens, order)?;
        Self::from_engine(engine)
    }

    /// Like `build`, but with generator tracking enabled so membership
    /// decompositions over the original generators are available.
    pub fn build_tracked(gens: &[Polynomial], order: MonomialOrder) -> Result<Self> {
        let engine = standard_basis_tracked(gens, order)?;
        Self::from_engine(engine)
    }

    fn from_engine(engine: StandardBasis) -> Result<Self> {
        let basis: Vec<Monomial> = engine.standard_monomials()?.to_vec();
        if basis.is_empty() {
            return Err(Error::UnitIdeal);
        }
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(QuotientAlgebra {
            basis,
            index,
            engine,
            mult_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nvars(&self) -> usize {
        self.engine.nvars()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn engine(&self) -> &StandardBasis {
        &self.engine
    }

    /// Canonical image of a polynomial as a coordinate vector.
    pub fn project(&self, p: &Polynomial) -> Result<AlgebraElement> {
        let nf = self.engine.normal_form(p)?;
        let mut coords = vec![Rat::zero(); self.dim()];
        for (m, c) in nf.terms() {
            let i = *self
                .index
                .get(m)
                .expect("normal form is supported on the standard monomials");
            coords[i] = c.clone();
        }
        Ok(AlgebraElement { coords })
    }

    /// Polynomial representative of an element (its standard-monomial form).
    pub fn lift(&self, e: &AlgebraElement) -> Polynomial {
        assert_eq!(e.coords.len(), self.dim());
        Polynomial::from_terms(
            self.nvars(),
            e.coords
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (self.basis[i].clone(), c.clone())),
        )
    }

    pub fn unit_element(&self) -> AlgebraElement {
        self.project(&Polynomial::one(self.nvars()))
            .expect("1 projects without error")
    }

    /// Matrix of multiplication by `p` on the basis. Results are memoized;
    /// the cache behaves as a write-once map and is safe for concurrent
    /// readers.
    pub fn mult_matrix(&self, p: &Polynomial) -> Result<Arc<QMat>> {
        if let Some(m) = self.mult_cache.read().unwrap().get(p) {
            return Ok(m.clone());
        }
        let dim = self.dim();
        let mut mat = QMat::zeros(dim, dim);
        for (j, b) in self.basis.iter().enumerate() {
            let prod = p.mul(&Polynomial::monomial(b.clone(), Rat::one()));
            let col = self.project(&prod)?;
            for i in 0..dim {
                mat[(i, j)] = col.coords[i].clone();
            }
        }
        let arc = Arc::new(mat);
        let mut cache = self.mult_cache.write().unwrap();
        Ok(cache.entry(p.clone()).or_insert(arc).clone())
    }

    /// Product of two elements.
    pub fn mul_elements(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.project(&self.lift(a).mul(&self.lift(b)))
    }

    /// Annihilator ideal of `h`: the kernel of multiplication by `h`.
    pub fn annihilator(&self, h: &Polynomial) -> Result<Subspace> {
        let m = self.mult_matrix(h)?;
        Ok(Subspace::from_columns(self.dim(), m.kernel()))
    }

    /// Column space of (multiplication by p)^power: the ideal (p^power) as a
    /// subspace. Power 0 gives the full algebra.
    pub fn ideal_image(&self, p: &Polynomial, power: u32) -> Result<Subspace> {
        if power == 0 {
            return Ok(Subspace::full(self.dim()));
        }
        let m = self.mult_matrix(p)?.pow(power);
        Ok(Subspace {
            mat: column_space(&m),
        })
    }

    /// The socle: the annihilator of the maximal ideal, computed as the
    /// intersection of the kernels of multiplication by each variable.
    pub fn socle(&self) -> Result<Subspace> {
        let mut acc = Subspace::full(self.dim());
        for i in 0..self.nvars() {
            let v = Polynomial::var(i, self.nvars());
            acc = acc.intersect(&self.annihilator(&v)?);
        }
        Ok(acc)
    }

    /// dim A/(p) = dim A - rank(mult by p).
    pub fn quotient_dim(&self, p: &Polynomial) -> Result<usize> {
        let m = self.mult_matrix(p)?;
        Ok(self.dim() - m.rank())
    }

    /// Renders a subspace basis as polynomials in the given variable names.
    pub fn render_subspace(&self, s: &Subspace, names: &[String]) -> Vec<String> {
        s.basis_columns()
            .iter()
            .map(|col| {
                self.lift(&AlgebraElement {
                    coords: col.clone(),
                })
                .render(names)
            })
            .collect()
    }
}

/// The annihilator correspondence attached to a hypersurface germ f: with
/// B = O/(f, f_1, ..., f_n), h = f_0 and A = O/(f_0, ..., f_n), the two
/// ideals share the tail generators and swap f for f_0, and g -> k with
/// g*h = f*k modulo the shared tail is a linear bijection
/// Ann_B(h) -> Ann_A(f). This is the pair shape realized by the canonical
/// odd-parity tangent field, where the correspondence transports the
/// degeneration filtration of the h-weighted bilinear form.
#[derive(Debug)]
pub struct AnnCorrespondence {
    pub algebra_a: QuotientAlgebra,
    pub algebra_b: QuotientAlgebra,
    pub h: Polynomial,
    pub ann_b_h: Subspace,
    pub ann_a_f: Subspace,
    /// images of the Ann_B(h) basis columns, as coordinates in A
    pub forward_images: Vec<AlgebraElement>,
}

/// Builds the correspondence for `f` and verifies it: equal dimensions, the
/// image lies in Ann_A(f) and is linearly independent, and the backward map
/// recovers each basis vector exactly.
pub fn annihilator_correspondence(f: &Polynomial) -> Result<AnnCorrespondence> {
    let n = f.nvars();
    let order = MonomialOrder::local(n);
    let grad = gradient(f);
    let h = grad[0].clone();

    let mut gens_b = vec![f.clone()];
    gens_b.extend(grad[1..].iter().cloned());
    let algebra_b = QuotientAlgebra::build_tracked(&gens_b, order)?;
    let algebra_a = QuotientAlgebra::build_tracked(&grad, order)?;

    let ann_b_h = algebra_b.annihilator(&h)?;
    let ann_a_f = algebra_a.annihilator(f)?;
    if ann_b_h.dim() != ann_a_f.dim() {
        return Err(Error::Invalid(format!(
            "annihilator dimensions differ: {} vs {}",
            ann_b_h.dim(),
            ann_a_f.dim()
        )));
    }

    let mut forward_images = Vec::new();
    for col in ann_b_h.basis_columns() {
        let g = algebra_b.lift(&AlgebraElement { coords: col });
        let k = transport(&algebra_b, &algebra_a, &g, &h)?;
        if !ann_a_f.contains_vector(&k.coords) {
            return Err(Error::Invalid("forward image escapes Ann_A(f)".to_string()));
        }
        forward_images.push(k);
    }

    let img = QMat::from_columns(
        algebra_a.dim(),
        forward_images.iter().map(|e| e.coords.clone()).collect(),
    );
    if img.rank() != ann_b_h.dim() {
        return Err(Error::Invalid(
            "forward map is not injective on Ann_B(h)".to_string(),
        ));
    }

    for (col, k) in ann_b_h.basis_columns().iter().zip(&forward_images) {
        let kpoly = algebra_a.lift(k);
        let g_back = transport(&algebra_a, &algebra_b, &kpoly, f)?;
        if g_back.coords != *col {
            return Err(Error::Invalid(
                "round trip through the correspondence failed".to_string(),
            ));
        }
    }

    Ok(AnnCorrespondence {
        algebra_a,
        algebra_b,
        h,
        ann_b_h,
        ann_a_f,
        forward_images,
    })
}

/// One direction of the correspondence: decomposes `g * weight` over the
/// source ideal generators (tracked Mora division), reads off the
/// coefficient of the swapped head generator (index 0), and divides out the
/// Mora unit inside the target algebra.
fn transport(
    source: &QuotientAlgebra,
    target: &QuotientAlgebra,
    g: &Polynomial,
    weight: &Polynomial,
) -> Result<AlgebraElement> {
    let p = g.mul(weight);
    let div = source.engine().divide_tracked(&p)?;
    if !div.remainder.is_zero() {
        return Err(Error::Invalid(
            "transport input does not annihilate the weight".to_string(),
        ));
    }
    let c = &div.quotients[0];
    let c_in_target = target.project(c)?;
    let mu = target.mult_matrix(&div.unit)?;
    let x = mu
        .solve(&c_in_target.coords)
        .expect("Mora unit is invertible in the target algebra");
    Ok(AlgebraElement { coords: x })
}
