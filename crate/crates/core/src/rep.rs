//! Finite-dimensional representations of a bound quiver algebra and the
//! abelian-category toolkit over them: Hom spaces, kernels and cokernels with
//! their canonical maps, distinguished modules, radical series, and duality.

use crate::field::FieldSpec;
use crate::linalg::Mat;
use crate::quiver::{opposite_algebra, BoundAlgebra, Path};
use rand::Rng;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum RepError {
    #[error("arrow `{arrow}` needs a {rows}x{cols} matrix, got {got_rows}x{got_cols}")]
    ShapeMismatch {
        arrow: String,
        rows: usize,
        cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("relation `{0}` acts by a nonzero map")]
    RelationViolated(String),
    #[error("expected {expected} arrow maps, got {got}")]
    WrongArrowCount { expected: usize, got: usize },
    #[error("representations live over different algebras")]
    AlgebraMismatch,
}

/// A module over a [`BoundAlgebra`]: one scalar space per vertex, one exact
/// matrix per arrow (rows indexed by the target, columns by the source).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    algebra: Arc<BoundAlgebra>,
    dims: Vec<usize>,
    maps: Vec<Mat>,
}

impl Representation {
    pub fn new(
        algebra: Arc<BoundAlgebra>,
        dims: Vec<usize>,
        maps: Vec<Mat>,
    ) -> Result<Self, RepError> {
        let q = algebra.quiver();
        assert_eq!(dims.len(), q.vertex_count(), "one dimension per vertex");
        if maps.len() != q.arrow_count() {
            return Err(RepError::WrongArrowCount {
                expected: q.arrow_count(),
                got: maps.len(),
            });
        }
        for (i, m) in maps.iter().enumerate() {
            let a = q.arrow(i);
            if m.rows() != dims[a.target] || m.cols() != dims[a.source] {
                return Err(RepError::ShapeMismatch {
                    arrow: a.label.clone(),
                    rows: dims[a.target],
                    cols: dims[a.source],
                    got_rows: m.rows(),
                    got_cols: m.cols(),
                });
            }
        }
        Ok(Representation { algebra, dims, maps })
    }

    pub fn zero(algebra: Arc<BoundAlgebra>) -> Self {
        let field = algebra.field();
        let dims = vec![0; algebra.quiver().vertex_count()];
        let maps = algebra
            .quiver()
            .arrows()
            .iter()
            .map(|_| Mat::zero(field, 0, 0))
            .collect();
        Representation { algebra, dims, maps }
    }

    pub fn algebra(&self) -> &Arc<BoundAlgebra> {
        &self.algebra
    }

    pub fn field(&self) -> FieldSpec {
        self.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_at(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero_module(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn map(&self, arrow: usize) -> &Mat {
        &self.maps[arrow]
    }

    /// Composite action of a path (identity for stationary paths).
    pub fn path_action(&self, p: &Path) -> Mat {
        let field = self.field();
        let mut acc = Mat::identity(field, self.dims[p.start()]);
        for &a in p.arrows() {
            acc = self.maps[a].mul(&acc);
        }
        acc
    }

    /// Checks every ideal generator acts by zero; reports the first violation.
    pub fn validate(&self) -> Result<(), RepError> {
        for g in self.algebra.ideal().generators() {
            if !self.path_action(g).is_zero() {
                return Err(RepError::RelationViolated(g.display(self.algebra.quiver())));
            }
        }
        Ok(())
    }

    pub fn same_algebra(&self, other: &Representation) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra
    }
}

/// The simple module concentrated at `v`.
pub fn simple(algebra: &Arc<BoundAlgebra>, v: usize) -> Representation {
    let field = algebra.field();
    let mut dims = vec![0; algebra.quiver().vertex_count()];
    dims[v] = 1;
    let maps = algebra
        .quiver()
        .arrows()
        .iter()
        .map(|a| Mat::zero(field, dims[a.target], dims[a.source]))
        .collect();
    Representation {
        algebra: algebra.clone(),
        dims,
        maps,
    }
}

/// Basis layout of the indecomposable projective at `v`: for every nonzero
/// path from `v` (in basis order), its end vertex and its slot within that
/// vertex block.
pub fn projective_layout(algebra: &Arc<BoundAlgebra>, v: usize) -> Vec<(usize, usize, usize)> {
    let mut counts = vec![0usize; algebra.quiver().vertex_count()];
    algebra
        .paths_from(v)
        .into_iter()
        .map(|p| {
            let end = algebra.basis()[p].end();
            let local = counts[end];
            counts[end] += 1;
            (p, end, local)
        })
        .collect()
}

/// The indecomposable projective at `v`: basis the nonzero paths starting at
/// `v`, arrows acting by path extension.
pub fn projective(algebra: &Arc<BoundAlgebra>, v: usize) -> Representation {
    let field = algebra.field();
    let q = algebra.quiver();
    let layout = projective_layout(algebra, v);
    let paths: Vec<usize> = layout.iter().map(|(p, _, _)| *p).collect();
    let mut local = vec![usize::MAX; algebra.dimension()];
    let mut dims = vec![0; q.vertex_count()];
    for &(p, end, slot) in &layout {
        local[p] = slot;
        dims[end] = dims[end].max(slot + 1);
    }
    let mut maps: Vec<Mat> = q
        .arrows()
        .iter()
        .map(|a| Mat::zero(field, dims[a.target], dims[a.source]))
        .collect();
    for &p in &paths {
        let end = algebra.basis()[p].end();
        for a in q.arrows_from(end) {
            let single = Path::from_arrows(q, vec![a]).expect("arrow is a path");
            let ai = algebra.basis_index(&single).expect("arrows are basis paths");
            if let Some(ext) = algebra.compose_basis(p, ai) {
                maps[a].set(local[ext], local[p], field.one());
            }
        }
    }
    Representation {
        algebra: algebra.clone(),
        dims,
        maps,
    }
}

/// The indecomposable injective at `v`, computed as the dual of the opposite
/// algebra's projective at `v`.
pub fn injective(algebra: &Arc<BoundAlgebra>, v: usize) -> Representation {
    let op = Arc::new(opposite_algebra(algebra));
    let p = projective(&op, v);
    dual_onto(&p, algebra.clone())
}

/// The dual module over the opposite algebra: transpose every arrow action.
pub fn dual(r: &Representation) -> Representation {
    dual_onto(r, Arc::new(opposite_algebra(r.algebra())))
}

/// As [`dual`], but reusing an already-built opposite algebra.
pub fn dual_onto(r: &Representation, opposite: Arc<BoundAlgebra>) -> Representation {
    debug_assert_eq!(*opposite, opposite_algebra(r.algebra()));
    let maps = (0..opposite.quiver().arrow_count())
        .map(|a| {
            let label = &opposite.quiver().arrow(a).label;
            let orig = r
                .algebra()
                .quiver()
                .arrow_index(label)
                .expect("opposite keeps arrow labels");
            r.map(orig).transpose()
        })
        .collect();
    Representation {
        algebra: opposite,
        dims: r.dims.clone(),
        maps,
    }
}

/// A homomorphism of representations: one matrix per vertex commuting with
/// every arrow action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Representation,
    target: Representation,
    maps: Vec<Mat>,
}

impl Morphism {
    pub fn new(source: Representation, target: Representation, maps: Vec<Mat>) -> Self {
        assert!(source.same_algebra(&target));
        assert_eq!(maps.len(), source.dims.len());
        for (v, m) in maps.iter().enumerate() {
            assert_eq!(
                (m.rows(), m.cols()),
                (target.dims[v], source.dims[v]),
                "morphism component at vertex {v} has the wrong shape"
            );
        }
        Morphism { source, target, maps }
    }

    pub fn zero(source: Representation, target: Representation) -> Self {
        let field = source.field();
        let maps = (0..source.dims.len())
            .map(|v| Mat::zero(field, target.dims[v], source.dims[v]))
            .collect();
        Morphism::new(source, target, maps)
    }

    pub fn identity(r: &Representation) -> Self {
        let field = r.field();
        let maps = r.dims.iter().map(|&d| Mat::identity(field, d)).collect();
        Morphism::new(r.clone(), r.clone(), maps)
    }

    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn map(&self, v: usize) -> &Mat {
        &self.maps[v]
    }

    pub fn maps(&self) -> &[Mat] {
        &self.maps
    }

    /// Verifies every commuting square.
    pub fn validate(&self) -> bool {
        let q = self.source.algebra().quiver();
        (0..q.arrow_count()).all(|a| {
            let ar = q.arrow(a);
            self.target.map(a).mul(&self.maps[ar.source])
                == self.maps[ar.target].mul(self.source.map(a))
        })
    }

    /// `self` then `next`.
    pub fn then(&self, next: &Morphism) -> Morphism {
        assert_eq!(self.target, next.source, "composition mismatch");
        let maps = (0..self.maps.len())
            .map(|v| next.maps[v].mul(&self.maps[v]))
            .collect();
        Morphism::new(self.source.clone(), next.target.clone(), maps)
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        let maps = (0..self.maps.len())
            .map(|v| self.maps[v].add(&other.maps[v]))
            .collect();
        Morphism::new(self.source.clone(), self.target.clone(), maps)
    }

    pub fn scale(&self, s: &crate::field::Scalar) -> Morphism {
        let maps = self.maps.iter().map(|m| m.scale(s)).collect();
        Morphism::new(self.source.clone(), self.target.clone(), maps)
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Mat::is_zero)
    }

    pub fn is_iso(&self) -> bool {
        self.source.dims == self.target.dims && self.maps.iter().all(Mat::is_invertible)
    }

    pub fn inverse(&self) -> Option<Morphism> {
        let maps = self
            .maps
            .iter()
            .map(Mat::inverse)
            .collect::<Option<Vec<_>>>()?;
        Some(Morphism::new(
            self.target.clone(),
            self.source.clone(),
            maps,
        ))
    }

    /// All vertex components stacked into one coordinate vector.
    pub fn coordinates(&self) -> Vec<crate::field::Scalar> {
        self.maps.iter().flat_map(Mat::vectorize).collect()
    }
}

/// An ordered basis of `Hom(m, n)`.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub elements: Vec<Morphism>,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }
}

/// Solves the commuting-square system for all morphisms `m -> n`.
pub fn hom_basis(m: &Representation, n: &Representation) -> HomBasis {
    assert!(m.same_algebra(n), "hom between different algebras");
    let field = m.field();
    let q = m.algebra().quiver();
    let nv = q.vertex_count();

    // variable layout: per vertex, row-major entries of f_v (n_v x m_v)
    let mut offset = vec![0usize; nv + 1];
    for v in 0..nv {
        offset[v + 1] = offset[v] + n.dims[v] * m.dims[v];
    }
    let unknowns = offset[nv];

    let mut rows: Vec<Vec<crate::field::Scalar>> = Vec::new();
    for a in 0..q.arrow_count() {
        let ar = q.arrow(a);
        let (s, t) = (ar.source, ar.target);
        // n.map(a) * f_s - f_t * m.map(a) = 0, one equation per (i, j)
        for i in 0..n.dims[t] {
            for j in 0..m.dims[s] {
                let mut row = vec![field.zero(); unknowns];
                for k in 0..n.dims[s] {
                    let c = n.map(a).get(i, k).clone();
                    if !c.is_zero() {
                        let var = offset[s] + k * m.dims[s] + j;
                        row[var] = &row[var] + &c;
                    }
                }
                for k in 0..m.dims[t] {
                    let c = m.map(a).get(k, j).clone();
                    if !c.is_zero() {
                        let var = offset[t] + i * m.dims[t] + k;
                        row[var] = &row[var] - &c;
                    }
                }
                rows.push(row);
            }
        }
    }
    let system = if rows.is_empty() {
        Mat::zero(field, 0, unknowns)
    } else {
        Mat::from_rows(field, rows)
    };
    let kernel = system.kernel();

    let mut elements = Vec::new();
    for col in 0..kernel.cols() {
        let mut maps = Vec::with_capacity(nv);
        for v in 0..nv {
            let mut f = Mat::zero(field, n.dims[v], m.dims[v]);
            for i in 0..n.dims[v] {
                for j in 0..m.dims[v] {
                    f.set(i, j, kernel.get(offset[v] + i * m.dims[v] + j, col).clone());
                }
            }
            maps.push(f);
        }
        elements.push(Morphism::new(m.clone(), n.clone(), maps));
    }
    HomBasis { elements }
}

pub fn hom_dim(m: &Representation, n: &Representation) -> usize {
    hom_basis(m, n).dim()
}

fn induced_submodule(
    parent: &Representation,
    inclusions: Vec<Mat>,
) -> (Representation, Morphism) {
    let q = parent.algebra().quiver();
    let dims: Vec<usize> = inclusions.iter().map(Mat::cols).collect();
    let maps = (0..q.arrow_count())
        .map(|a| {
            let ar = q.arrow(a);
            let image = parent.map(a).mul(&inclusions[ar.source]);
            inclusions[ar.target]
                .solve(&image)
                .expect("submodule is closed under arrow actions")
        })
        .collect();
    let sub = Representation {
        algebra: parent.algebra().clone(),
        dims,
        maps,
    };
    let incl = Morphism::new(sub.clone(), parent.clone(), inclusions);
    (sub, incl)
}

/// Kernel with its canonical inclusion.
pub fn kernel(f: &Morphism) -> (Representation, Morphism) {
    let inclusions = f.maps().iter().map(Mat::kernel).collect();
    induced_submodule(f.source(), inclusions)
}

/// Image with its canonical inclusion into the target.
pub fn image(f: &Morphism) -> (Representation, Morphism) {
    let inclusions = f.maps().iter().map(Mat::column_space).collect();
    induced_submodule(f.target(), inclusions)
}

/// Cokernel with its canonical projection.
pub fn cokernel(f: &Morphism) -> (Representation, Morphism) {
    let q = f.target().algebra().quiver();
    let projections: Vec<Mat> = f.maps().iter().map(Mat::left_kernel).collect();
    let dims: Vec<usize> = projections.iter().map(Mat::rows).collect();
    let field = f.source().field();
    let maps = (0..q.arrow_count())
        .map(|a| {
            let ar = q.arrow(a);
            // X with X * pi_s = pi_t * action; pi_s has a right inverse
            let right_inv = projections[ar.source]
                .solve(&Mat::identity(field, dims[ar.source]))
                .expect("projection has full row rank");
            let x = projections[ar.target]
                .mul(f.target().map(a))
                .mul(&right_inv);
            debug_assert_eq!(
                x.mul(&projections[ar.source]),
                projections[ar.target].mul(f.target().map(a))
            );
            x
        })
        .collect();
    let coker = Representation {
        algebra: f.target().algebra().clone(),
        dims,
        maps,
    };
    let proj = Morphism::new(f.target().clone(), coker.clone(), projections);
    (coker, proj)
}

/// Blockwise direct sum with canonical injections and projections.
pub fn direct_sum(parts: &[Representation]) -> (Representation, Vec<Morphism>, Vec<Morphism>) {
    assert!(!parts.is_empty(), "direct sum needs at least one summand");
    let algebra = parts[0].algebra().clone();
    let field = algebra.field();
    let q = algebra.quiver();
    let nv = q.vertex_count();
    for p in parts {
        assert!(p.same_algebra(&parts[0]));
    }
    let dims: Vec<usize> = (0..nv).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
    let maps: Vec<Mat> = (0..q.arrow_count())
        .map(|a| {
            let blocks: Vec<Mat> = parts.iter().map(|p| p.map(a).clone()).collect();
            Mat::block_diag(field, &blocks)
        })
        .collect();
    let total = Representation {
        algebra,
        dims,
        maps,
    };
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut before = vec![0usize; nv];
    for part in parts {
        let mut inj_maps = Vec::new();
        let mut proj_maps = Vec::new();
        for v in 0..nv {
            let mut inj = Mat::zero(field, total.dims[v], part.dims[v]);
            let mut proj = Mat::zero(field, part.dims[v], total.dims[v]);
            for i in 0..part.dims[v] {
                inj.set(before[v] + i, i, field.one());
                proj.set(i, before[v] + i, field.one());
            }
            inj_maps.push(inj);
            proj_maps.push(proj);
        }
        injections.push(Morphism::new(part.clone(), total.clone(), inj_maps));
        projections.push(Morphism::new(total.clone(), part.clone(), proj_maps));
        for v in 0..nv {
            before[v] += part.dims[v];
        }
    }
    (total, injections, projections)
}

/// The radical `rad M = sum of arrow images`, with its inclusion.
pub fn radical(r: &Representation) -> (Representation, Morphism) {
    let q = r.algebra().quiver();
    let field = r.field();
    let inclusions: Vec<Mat> = (0..q.vertex_count())
        .map(|v| {
            let incoming: Vec<Mat> = q.arrows_into(v).map(|a| r.map(a).clone()).collect();
            Mat::hstack_all(field, r.dims[v], &incoming).column_space()
        })
        .collect();
    induced_submodule(r, inclusions)
}

/// The top `M / rad M`, with its projection. Arrows act by zero on the top.
pub fn top(r: &Representation) -> (Representation, Morphism) {
    let q = r.algebra().quiver();
    let field = r.field();
    let projections: Vec<Mat> = (0..q.vertex_count())
        .map(|v| {
            let incoming: Vec<Mat> = q.arrows_into(v).map(|a| r.map(a).clone()).collect();
            Mat::hstack_all(field, r.dims[v], &incoming).left_kernel()
        })
        .collect();
    let dims: Vec<usize> = projections.iter().map(Mat::rows).collect();
    let maps = (0..q.arrow_count())
        .map(|a| {
            let ar = q.arrow(a);
            Mat::zero(field, dims[ar.target], dims[ar.source])
        })
        .collect();
    let quotient = Representation {
        algebra: r.algebra().clone(),
        dims,
        maps,
    };
    let proj = Morphism::new(r.clone(), quotient.clone(), projections);
    (quotient, proj)
}

/// The socle: intersection of kernels of all outgoing arrow actions.
pub fn socle(r: &Representation) -> (Representation, Morphism) {
    let q = r.algebra().quiver();
    let field = r.field();
    let inclusions: Vec<Mat> = (0..q.vertex_count())
        .map(|v| {
            let outgoing: Vec<Mat> = q.arrows_from(v).map(|a| r.map(a).clone()).collect();
            Mat::vstack_all(field, r.dims[v], &outgoing).kernel()
        })
        .collect();
    induced_submodule(r, inclusions)
}

/// The submodule generated by the given vectors (one coordinate block per
/// vertex), with its inclusion.
pub fn submodule_spanned(
    r: &Representation,
    vectors: &[Vec<Vec<crate::field::Scalar>>],
) -> (Representation, Morphism) {
    let field = r.field();
    let q = r.algebra().quiver();
    let nv = q.vertex_count();
    // images of every generator under every basis path action
    let mut columns: Vec<Vec<Vec<crate::field::Scalar>>> = vec![Vec::new(); nv];
    for vecs in vectors {
        for p in r.algebra().basis() {
            let action = r.path_action(p);
            let src = p.start();
            let col = Mat::from_fn(field, r.dims[src], 1, |i, _| vecs[src][i].clone());
            let img = action.mul(&col);
            if !img.is_zero() {
                columns[p.end()].push(img.column(0));
            }
        }
    }
    let inclusions: Vec<Mat> = (0..nv)
        .map(|v| {
            let m = Mat::from_fn(field, r.dims[v], columns[v].len(), |i, j| {
                columns[v][j][i].clone()
            });
            m.column_space()
        })
        .collect();
    induced_submodule(r, inclusions)
}

/// A reproducible pseudo-random module: a quotient of a random projective by
/// the submodule generated by random vectors, capped at `max_total_dim`.
pub fn random_module(
    algebra: &Arc<BoundAlgebra>,
    rng: &mut impl Rng,
    max_total_dim: usize,
) -> Representation {
    let nv = algebra.quiver().vertex_count();
    let field = algebra.field();
    let mut parts = Vec::new();
    let mut total = 0usize;
    let mut order: Vec<usize> = (0..nv).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    for &v in &order {
        if rng.gen_range(0..3) > 0 {
            let p = projective(algebra, v);
            if total + p.total_dim() <= max_total_dim || parts.is_empty() {
                total += p.total_dim();
                parts.push(p);
            }
        }
    }
    if parts.is_empty() {
        parts.push(projective(algebra, order[0]));
    }
    let (p, _, _) = direct_sum(&parts);

    let gens = rng.gen_range(0..3);
    let vectors: Vec<Vec<Vec<crate::field::Scalar>>> = (0..gens)
        .map(|_| {
            (0..nv)
                .map(|v| {
                    (0..p.dims()[v])
                        .map(|_| field.from_int(rng.gen_range(-2..3)))
                        .collect()
                })
                .collect()
        })
        .collect();
    if vectors.is_empty() {
        return p;
    }
    let (_, incl) = submodule_spanned(&p, &vectors);
    let (quotient, _) = cokernel(&incl);
    quotient
}
