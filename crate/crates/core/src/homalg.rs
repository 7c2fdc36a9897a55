//! Minimal projective resolutions and what they certify: projective and
//! injective dimension, Ext groups, isomorphism testing, and direct-sum
//! decomposition into indecomposables.
//!
//! Dimension computations return certificates. `Finite(n)` means the minimal
//! syzygy chain ends in a projective after `n` steps; `Infinite` carries an
//! explicit isomorphism between two distinct nonzero syzygies, which forces
//! the chain to cycle forever; `Undetermined` reports the bound that ran out.

use crate::field::Scalar;
use crate::linalg::Mat;
use crate::quiver::{BoundAlgebra, Path};
use crate::rep::{
    direct_sum, dual, hom_basis, hom_dim, image, kernel, projective, radical, socle, top,
    HomBasis, Morphism, Representation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum HomalgError {
    #[error("resolution bound {bound} exhausted before degree {needed}")]
    BoundExhausted { bound: usize, needed: usize },
    #[error("decomposition failed: {0}")]
    SplitFailure(String),
    #[error("indecomposability cannot be certified over characteristic p")]
    CharacteristicUnsupported,
}

/// Syzygy-bound default: generous for desk-scale algebras.
pub fn default_bound(algebra: &BoundAlgebra) -> usize {
    4 * algebra.dimension() + 4
}

/// Builds the projective cover `P -> m`: one copy of `P(v)` for each basis
/// vector of `(top m)_v`, mapped through chosen lifts. The kernel lands in
/// `rad P`, so the cover is minimal.
pub fn projective_cover(m: &Representation) -> (Representation, Morphism) {
    let algebra = m.algebra().clone();
    let field = m.field();
    let q = algebra.quiver();
    let (t, proj) = top(m);
    if t.is_zero_module() {
        let zero = Representation::zero(algebra);
        return (zero.clone(), Morphism::zero(zero, m.clone()));
    }

    let mut parts = Vec::new();
    let mut part_maps: Vec<Vec<Mat>> = Vec::new(); // per part, per vertex
    for v in 0..q.vertex_count() {
        let tv = t.dim_at(v);
        if tv == 0 {
            continue;
        }
        // lift a basis of (top m)_v back into m_v
        let lifts = proj
            .map(v)
            .solve(&Mat::identity(field, tv))
            .expect("top projection is onto");
        let pv = projective(&algebra, v);
        for i in 0..tv {
            let u = Mat::from_fn(field, m.dim_at(v), 1, |r, _| lifts.get(r, i).clone());
            // column for each basis path of P(v): the path action applied to u
            let paths = algebra.paths_from(v);
            let mut local_cols: Vec<Vec<Mat>> =
                (0..q.vertex_count()).map(|_| Vec::new()).collect();
            for &p in &paths {
                let path: &Path = &algebra.basis()[p];
                let img = m.path_action(path).mul(&u);
                local_cols[path.end()].push(img);
            }
            let maps: Vec<Mat> = (0..q.vertex_count())
                .map(|w| Mat::hstack_all(field, m.dim_at(w), &local_cols[w]))
                .collect();
            parts.push(pv.clone());
            part_maps.push(maps);
        }
    }
    let (p, _, projections) = direct_sum(&parts);
    // assemble the cover map: sum of the per-part maps through the projections
    let mut cover = Morphism::zero(p.clone(), m.clone());
    for (maps, pr) in part_maps.into_iter().zip(&projections) {
        let part_to_m = Morphism::new(pr.target().clone(), m.clone(), maps);
        cover = cover.add(&pr.then(&part_to_m));
    }
    debug_assert!(cover.validate());
    (p, cover)
}

/// The syzygy: kernel of the minimal projective cover.
pub fn syzygy(m: &Representation) -> Representation {
    let (_, cover) = projective_cover(m);
    kernel(&cover).0
}

pub fn is_projective_rep(m: &Representation) -> bool {
    syzygy(m).is_zero_module()
}

/// An initial segment of a minimal projective resolution:
/// `P_n -> ... -> P_1 -> P_0 -> module`.
#[derive(Clone, Debug)]
pub struct ResolutionSegment {
    pub module: Representation,
    pub projectives: Vec<Representation>,
    /// `differentials[i]: P_{i+1} -> P_i`.
    pub differentials: Vec<Morphism>,
    pub augmentation: Morphism,
    /// True when the resolution reached zero within this segment.
    pub terminated: bool,
}

/// Builds the minimal resolution out to `P_steps` (or stops early at zero).
pub fn resolution_segment(m: &Representation, steps: usize) -> ResolutionSegment {
    let (p0, aug) = projective_cover(m);
    let mut projectives = vec![p0];
    let mut differentials = Vec::new();
    let (mut ker, mut incl) = kernel(&aug);
    let mut terminated = ker.is_zero_module();
    for _ in 0..steps {
        if terminated {
            break;
        }
        let (p_next, cover) = projective_cover(&ker);
        differentials.push(cover.then(&incl));
        projectives.push(p_next);
        let (k, i) = kernel(&cover);
        terminated = k.is_zero_module();
        ker = k;
        incl = i;
    }
    ResolutionSegment {
        module: m.clone(),
        projectives,
        differentials,
        augmentation: aug,
        terminated,
    }
}

/// Certificate-backed outcome of a dimension computation.
///
/// The `Infinite` witness is an isomorphism exhibiting a nonzero nonprojective
/// module `N` (a summand of the `lower`-th syzygy) recurring as a direct
/// summand of the `upper`-th syzygy along its own resolution. Such a
/// recurrence forces `pd N = infinity`: a finite projective dimension `p >= k`
/// would give `pd N <= pd(syzygy^k N) = pd N - k`, and `p < k` would make
/// `syzygy^k N` vanish while it still contains `N`. Full syzygy periodicity is
/// the special case where the whole syzygy recurs; tracking summands keeps the
/// search small even when syzygies grow (e.g. radical-square-zero local
/// algebras, where `syzygy(S) = S + S`).
#[derive(Clone, Debug)]
pub enum DimensionCertificate {
    Finite(usize),
    Infinite {
        lower: usize,
        upper: usize,
        witness: Morphism,
    },
    Undetermined { bound: usize },
}

impl DimensionCertificate {
    pub fn finite_value(&self) -> Option<usize> {
        match self {
            DimensionCertificate::Finite(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, DimensionCertificate::Infinite { .. })
    }

    pub fn is_undetermined(&self) -> bool {
        matches!(self, DimensionCertificate::Undetermined { .. })
    }

    /// Re-verifies the stored evidence without recomputing resolutions: the
    /// witness must be a valid isomorphism between nonzero modules, and the
    /// independent isomorphism test must confirm it.
    pub fn reverify(&self) -> bool {
        match self {
            DimensionCertificate::Finite(_) => true,
            DimensionCertificate::Undetermined { .. } => true,
            DimensionCertificate::Infinite { lower, upper, witness } => {
                lower < upper
                    && !witness.source().is_zero_module()
                    && witness.validate()
                    && witness.is_iso()
                    && is_isomorphic(witness.source(), witness.target(), 0).is_iso()
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DimensionCertificate::Finite(n) => format!("{n}"),
            DimensionCertificate::Infinite { lower, upper, .. } => {
                format!("infinite (syzygy {lower} recurs at {upper})")
            }
            DimensionCertificate::Undetermined { bound } => {
                format!("undetermined at bound {bound}")
            }
        }
    }
}

/// Projective dimension by depth-first search over the graph of
/// indecomposable syzygy summands, memoized per isomorphism class.
pub fn proj_dim(m: &Representation, bound: usize, seed: u64) -> DimensionCertificate {
    let mut search = SyzygySearch {
        bound,
        seed,
        classes: Vec::new(),
        state: Vec::new(),
        first_depth: Vec::new(),
        memo: Vec::new(),
    };
    let roots = match search.summand_classes(m, 0) {
        Ok(r) => r,
        Err(out) => return out,
    };
    let mut best = 0usize;
    for root in roots {
        match search.visit(root, 0) {
            Ok(p) => best = best.max(p),
            Err(out) => return out,
        }
    }
    DimensionCertificate::Finite(best)
}

struct SyzygySearch {
    bound: usize,
    seed: u64,
    classes: Vec<Representation>,
    /// 0 unvisited, 1 on the current DFS path, 2 finished
    state: Vec<u8>,
    first_depth: Vec<usize>,
    memo: Vec<usize>,
}

// early-exit certificates travel through Err; their payload is the result
#[allow(clippy::result_large_err)]
impl SyzygySearch {
    /// Nonprojective indecomposable summands of `m` as class indices, or an
    /// early certificate when a summand closes a cycle on the active path.
    /// `depth` is the syzygy level `m` sits at.
    fn summand_classes(
        &mut self,
        m: &Representation,
        depth: usize,
    ) -> Result<Vec<usize>, DimensionCertificate> {
        if m.is_zero_module() {
            return Ok(vec![]);
        }
        // fall back to the whole module when splitting is unavailable
        let parts = decompose_inner(m, self.seed, 0).unwrap_or_else(|_| vec![m.clone()]);
        let mut out = Vec::new();
        for part in parts {
            if is_projective_rep(&part) {
                continue;
            }
            let mut matched = None;
            for (c, rep) in self.classes.iter().enumerate() {
                if rep.dims() != part.dims() {
                    continue;
                }
                if let IsoResult::Isomorphic(w) = is_isomorphic(rep, &part, self.seed) {
                    matched = Some((c, w));
                    break;
                }
            }
            match matched {
                Some((c, witness)) => {
                    if self.state[c] == 1 {
                        // the class recurs inside its own resolution
                        return Err(DimensionCertificate::Infinite {
                            lower: self.first_depth[c],
                            upper: depth,
                            witness,
                        });
                    }
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
                None => {
                    self.classes.push(part);
                    self.state.push(0);
                    self.first_depth.push(0);
                    self.memo.push(0);
                    out.push(self.classes.len() - 1);
                }
            }
        }
        Ok(out)
    }

    fn visit(&mut self, class: usize, depth: usize) -> Result<usize, DimensionCertificate> {
        if self.state[class] == 2 {
            return Ok(self.memo[class]);
        }
        if depth > self.bound {
            return Err(DimensionCertificate::Undetermined { bound: self.bound });
        }
        self.state[class] = 1;
        self.first_depth[class] = depth;
        let omega = syzygy(&self.classes[class].clone());
        let children = self.summand_classes(&omega, depth + 1)?;
        let mut pd_omega = 0usize;
        for child in children {
            pd_omega = pd_omega.max(self.visit(child, depth + 1)?);
        }
        self.state[class] = 2;
        self.memo[class] = 1 + pd_omega;
        Ok(1 + pd_omega)
    }
}

/// Injective dimension, computed as the projective dimension of the dual
/// module over the opposite algebra.
pub fn inj_dim(m: &Representation, bound: usize, seed: u64) -> DimensionCertificate {
    proj_dim(&dual(m), bound, seed)
}

/// `dim Ext^k(m, n)` from a minimal resolution of `m`.
pub fn ext_dim(
    k: usize,
    m: &Representation,
    n: &Representation,
    bound: usize,
) -> Result<usize, HomalgError> {
    if k == 0 {
        return Ok(hom_dim(m, n));
    }
    if k + 1 > bound {
        return Err(HomalgError::BoundExhausted {
            bound,
            needed: k + 1,
        });
    }
    let res = resolution_segment(m, k + 1);
    let homs_at = |i: usize| -> HomBasis {
        if i < res.projectives.len() {
            hom_basis(&res.projectives[i], n)
        } else {
            HomBasis { elements: vec![] }
        }
    };
    // rank of postcomposition Hom(P_i, n) -> Hom(P_{i+1}, n)
    let delta_rank = |i: usize, basis: &HomBasis| -> usize {
        if i >= res.differentials.len() || basis.elements.is_empty() {
            return 0;
        }
        let d = &res.differentials[i];
        let rows: Vec<Vec<Scalar>> = basis
            .elements
            .iter()
            .map(|g| d.then(g).coordinates())
            .collect();
        if rows[0].is_empty() {
            return 0;
        }
        Mat::from_rows(n.field(), rows).rank()
    };
    let hom_k = homs_at(k);
    let rank_out = delta_rank(k, &hom_k);
    let hom_prev = homs_at(k - 1);
    let rank_in = delta_rank(k - 1, &hom_prev);
    Ok(hom_k.dim() - rank_out - rank_in)
}

/// Independent degree-one Ext computation for monomial algebras: per-arrow
/// cocycles subject to the relation conditions, modulo coboundaries of
/// vertexwise maps. An extension `0 -> n -> E -> m -> 0` has
/// `E_a = [[n_a, f_a], [0, m_a]]`, and each relation demands
/// `sum_j n_(suffix) f_(a_j) m_(prefix) = 0`.
pub fn ext1_cocycle_oracle(m: &Representation, n: &Representation) -> usize {
    assert!(m.same_algebra(n));
    let algebra = m.algebra();
    let field = m.field();
    let q = algebra.quiver();

    // variable layout: per arrow, row-major entries of f_a
    let mut offset = vec![0usize; q.arrow_count() + 1];
    for a in 0..q.arrow_count() {
        let ar = q.arrow(a);
        offset[a + 1] = offset[a] + n.dim_at(ar.target) * m.dim_at(ar.source);
    }
    let unknowns = offset[q.arrow_count()];

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for gen in algebra.ideal().generators() {
        let arrows = gen.arrows();
        let klen = arrows.len();
        let rows_out = n.dim_at(gen.end());
        let cols_in = m.dim_at(gen.start());
        for r in 0..rows_out {
            for c in 0..cols_in {
                let mut row = vec![field.zero(); unknowns];
                for j in 0..klen {
                    let aj = arrows[j];
                    let arj = q.arrow(aj);
                    // n-side suffix action after position j
                    let suffix = {
                        let mut acc = Mat::identity(field, n.dim_at(arj.target));
                        for &a in &arrows[j + 1..] {
                            acc = n.map(a).mul(&acc);
                        }
                        acc
                    };
                    // m-side prefix action before position j
                    let prefix = {
                        let mut acc = Mat::identity(field, m.dim_at(gen.start()));
                        for &a in &arrows[..j] {
                            acc = m.map(a).mul(&acc);
                        }
                        acc
                    };
                    for i in 0..n.dim_at(arj.target) {
                        for l in 0..m.dim_at(arj.source) {
                            let coeff = suffix.get(r, i) * prefix.get(l, c);
                            if !coeff.is_zero() {
                                let var = offset[aj] + i * m.dim_at(arj.source) + l;
                                row[var] = &row[var] + &coeff;
                            }
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    let constraint = if rows.is_empty() {
        Mat::zero(field, 0, unknowns)
    } else {
        Mat::from_rows(field, rows)
    };
    let cocycles = unknowns - constraint.rank();

    // coboundary map: g = (g_v) |-> (n_a g_s - g_t m_a)_a
    let mut goffset = vec![0usize; q.vertex_count() + 1];
    for v in 0..q.vertex_count() {
        goffset[v + 1] = goffset[v] + n.dim_at(v) * m.dim_at(v);
    }
    let gvars = goffset[q.vertex_count()];
    let mut brows: Vec<Vec<Scalar>> = Vec::new();
    for a in 0..q.arrow_count() {
        let ar = q.arrow(a);
        let (s, t) = (ar.source, ar.target);
        for i in 0..n.dim_at(t) {
            for j in 0..m.dim_at(s) {
                let mut row = vec![field.zero(); gvars];
                for k in 0..n.dim_at(s) {
                    let c = n.map(a).get(i, k).clone();
                    if !c.is_zero() {
                        let var = goffset[s] + k * m.dim_at(s) + j;
                        row[var] = &row[var] + &c;
                    }
                }
                for k in 0..m.dim_at(t) {
                    let c = m.map(a).get(k, j).clone();
                    if !c.is_zero() {
                        let var = goffset[t] + i * m.dim_at(t) + k;
                        row[var] = &row[var] - &c;
                    }
                }
                brows.push(row);
            }
        }
    }
    let coboundaries = if brows.is_empty() || gvars == 0 {
        0
    } else {
        // rank of the map as columns-in-f-space; transpose works equally
        Mat::from_rows(field, brows).rank()
    };
    cocycles - coboundaries
}

/// Invariant that rules out an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoObstruction {
    DimVector,
    HomDims,
    TopDims,
    SocleDims,
    UniserialShape,
}

#[derive(Clone, Debug)]
pub enum IsoResult {
    Isomorphic(Morphism),
    NotIsomorphic(IsoObstruction),
    Inconclusive,
}

impl IsoResult {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoResult::Isomorphic(_))
    }
}

/// Vertex sequence of the radical filtration when the module is uniserial.
pub fn uniserial_sequence(m: &Representation) -> Option<Vec<usize>> {
    if m.is_zero_module() {
        return None;
    }
    let mut seq = Vec::new();
    let mut layer = m.clone();
    loop {
        let (t, _) = top(&layer);
        if t.total_dim() != 1 {
            return None;
        }
        seq.push(t.dims().iter().position(|&d| d == 1).unwrap());
        let (r, _) = radical(&layer);
        if r.is_zero_module() {
            return Some(seq);
        }
        layer = r;
    }
}

fn has_parallel_arrows(algebra: &BoundAlgebra) -> bool {
    let q = algebra.quiver();
    for i in 0..q.arrow_count() {
        for j in i + 1..q.arrow_count() {
            if q.arrow(i).source == q.arrow(j).source && q.arrow(i).target == q.arrow(j).target {
                return true;
            }
        }
    }
    false
}

/// Decides isomorphism. Fast invariants give certified `No`; uniserial
/// modules are decided by their composition-series vertex sequence (exact
/// when the quiver has no parallel arrows); otherwise a seeded randomized
/// search plus a small deterministic sweep looks for an invertible element
/// of the Hom space.
pub fn is_isomorphic(m: &Representation, n: &Representation, seed: u64) -> IsoResult {
    assert!(m.same_algebra(n));
    if m.dims() != n.dims() {
        return IsoResult::NotIsomorphic(IsoObstruction::DimVector);
    }
    if m.is_zero_module() {
        return IsoResult::Isomorphic(Morphism::zero(m.clone(), n.clone()));
    }
    let homs = hom_basis(m, n);
    if hom_dim(n, m) != homs.dim() || hom_dim(m, m) != hom_dim(n, n) {
        return IsoResult::NotIsomorphic(IsoObstruction::HomDims);
    }
    if top(m).0.dims() != top(n).0.dims() {
        return IsoResult::NotIsomorphic(IsoObstruction::TopDims);
    }
    if socle(m).0.dims() != socle(n).0.dims() {
        return IsoResult::NotIsomorphic(IsoObstruction::SocleDims);
    }
    let no_parallel = !has_parallel_arrows(m.algebra());
    if no_parallel {
        if let (Some(a), Some(b)) = (uniserial_sequence(m), uniserial_sequence(n)) {
            if a != b {
                return IsoResult::NotIsomorphic(IsoObstruction::UniserialShape);
            }
        }
    }
    if homs.dim() == 0 {
        return IsoResult::Inconclusive;
    }

    // single basis elements first, then seeded random combinations
    for f in &homs.elements {
        if f.is_iso() {
            return IsoResult::Isomorphic(f.clone());
        }
    }
    let field = m.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..40 {
        let mut f = Morphism::zero(m.clone(), n.clone());
        for basis in &homs.elements {
            let c = rng.gen_range(-3i64..4);
            if c != 0 {
                f = f.add(&basis.scale(&field.from_int(c)));
            }
        }
        if f.is_iso() {
            return IsoResult::Isomorphic(f);
        }
    }
    // deterministic sweep over a small grid for low Hom dimensions
    if homs.dim() <= 4 {
        let d = homs.dim();
        let mut counters = vec![0i64; d];
        loop {
            let mut f = Morphism::zero(m.clone(), n.clone());
            for (c, basis) in counters.iter().zip(&homs.elements) {
                if *c != 0 {
                    f = f.add(&basis.scale(&field.from_int(*c)));
                }
            }
            if f.is_iso() {
                return IsoResult::Isomorphic(f);
            }
            let mut i = 0;
            loop {
                if i == d {
                    return IsoResult::Inconclusive;
                }
                counters[i] += 1;
                if counters[i] > 2 {
                    counters[i] = -2;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }
    IsoResult::Inconclusive
}

/// Assembles the action of an endomorphism as one square matrix over the
/// direct sum of all vertex spaces.
fn endo_matrix(f: &Morphism) -> Mat {
    Mat::block_diag(f.source().field(), f.maps())
}

/// Minimal polynomial of a square matrix via Krylov iteration on its powers.
fn minimal_polynomial(x: &Mat) -> Vec<Scalar> {
    let field = x.field();
    let n = x.rows();
    if n == 0 {
        return vec![field.one()];
    }
    let mut power = Mat::identity(field, n);
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    loop {
        let vec = power.vectorize();
        let mut stacked = rows.clone();
        stacked.push(vec.clone());
        let rank = Mat::from_rows(field, stacked.clone()).rank();
        if rank < stacked.len() {
            // dependence: solve rows^T * c = vec^T
            let basis = Mat::from_rows(field, rows.clone()).transpose();
            let rhs = Mat::from_fn(field, vec.len(), 1, |i, _| vec[i].clone());
            let sol = basis.solve(&rhs).expect("dependence just detected");
            // p(t) = t^k - sum c_i t^i  (monic)
            let mut coeffs: Vec<Scalar> = (0..rows.len()).map(|i| -sol.get(i, 0)).collect();
            coeffs.push(field.one());
            return coeffs;
        }
        rows.push(vec);
        power = power.mul(x);
    }
}

/// Rational roots of a polynomial with rational coefficients (low-order
/// candidates only; missing a root merely skips one split attempt).
fn rational_roots(coeffs: &[Scalar]) -> Vec<Scalar> {
    let field = coeffs[0].field();
    let eval = |lambda: &Scalar| -> Scalar {
        let mut acc = field.zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * lambda) + c;
        }
        acc
    };
    let mut roots = Vec::new();
    let mut candidates: Vec<Scalar> = vec![field.zero()];
    for n in 1..=12i64 {
        candidates.push(field.from_int(n));
        candidates.push(field.from_int(-n));
    }
    for d in 2..=4i64 {
        for n in 1..=6i64 {
            if let Some(c) = field.from_ratio(n, d) {
                candidates.push(c.clone());
                candidates.push(-&c);
            }
        }
    }
    for c in candidates {
        if eval(&c).is_zero() && !roots.contains(&c) {
            roots.push(c);
        }
    }
    roots
}

/// Tries to split `m` along the Fitting decomposition of `f - lambda`.
fn fitting_split(
    m: &Representation,
    f: &Morphism,
    lambda: &Scalar,
) -> Option<(Representation, Representation)> {
    let shifted = f.add(&Morphism::identity(m).scale(&-lambda));
    // raise to the total dimension so kernel and image stabilize
    let n = m.total_dim();
    let mut power = shifted.clone();
    let mut e = 1;
    while e < n {
        power = power.then(&shifted);
        e += 1;
    }
    let (ker, _) = kernel(&power);
    let (img, _) = image(&power);
    if ker.is_zero_module() || img.is_zero_module() {
        return None;
    }
    debug_assert_eq!(ker.total_dim() + img.total_dim(), n);
    Some((ker, img))
}

/// Decomposes into indecomposable summands (with repetitions). Over the
/// rationals, indecomposability is certified by the trace-form radical of the
/// endomorphism algebra; splittings come from rational eigenvalue projections
/// of candidate endomorphisms.
pub fn decompose(m: &Representation, seed: u64) -> Result<Vec<Representation>, HomalgError> {
    if m.is_zero_module() {
        return Ok(vec![]);
    }
    let parts = decompose_inner(m, seed, 0)?;
    // reassembly check: the direct sum of the parts must be isomorphic to m
    let (reassembled, _, _) = direct_sum(&parts);
    match is_isomorphic(&reassembled, m, seed) {
        IsoResult::Isomorphic(_) => Ok(parts),
        _ => Err(HomalgError::SplitFailure(
            "reassembled direct sum is not isomorphic to the input".into(),
        )),
    }
}

fn decompose_inner(
    m: &Representation,
    seed: u64,
    depth: usize,
) -> Result<Vec<Representation>, HomalgError> {
    if m.is_zero_module() {
        return Ok(vec![]);
    }
    if depth > m.total_dim() + 4 {
        return Err(HomalgError::SplitFailure("recursion depth exceeded".into()));
    }
    // uniserial modules are indecomposable in every characteristic
    if uniserial_sequence(m).is_some() {
        return Ok(vec![m.clone()]);
    }
    let endos = hom_basis(m, m);
    let d = endos.dim();
    if d == 1 {
        return Ok(vec![m.clone()]);
    }
    let field = m.field();
    let char_zero = field.characteristic() == 0;

    // candidate endomorphisms to split along
    let mut candidates: Vec<Morphism> = endos.elements.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(depth as u64));
    for _ in 0..16 {
        let mut f = Morphism::zero(m.clone(), m.clone());
        for basis in &endos.elements {
            let c = rng.gen_range(-2i64..3);
            if c != 0 {
                f = f.add(&basis.scale(&field.from_int(c)));
            }
        }
        candidates.push(f);
    }
    for f in &candidates {
        let x = endo_matrix(f);
        let minpoly = minimal_polynomial(&x);
        if minpoly.len() <= 2 {
            continue; // scalar endomorphism, no split
        }
        for root in rational_roots(&minpoly) {
            if let Some((a, b)) = fitting_split(m, f, &root) {
                let mut out = decompose_inner(&a, seed, depth + 1)?;
                out.extend(decompose_inner(&b, seed, depth + 1)?);
                return Ok(out);
            }
        }
    }

    // no split found: certify indecomposability or give up honestly
    if !char_zero {
        return Err(HomalgError::CharacteristicUnsupported);
    }
    let simple_quotient_dim = d - endo_radical_dim(&endos);
    if simple_quotient_dim == 1 {
        Ok(vec![m.clone()])
    } else {
        Err(HomalgError::SplitFailure(format!(
            "End/rad has dimension {simple_quotient_dim} but no rational splitting was found"
        )))
    }
}

/// Dimension of the radical of `End(m)` via the trace bilinear form
/// `T(x, y) = trace(L_x L_y)` (valid in characteristic zero).
fn endo_radical_dim(endos: &HomBasis) -> usize {
    let d = endos.dim();
    if d == 0 {
        return 0;
    }
    let field = endos.elements[0].source().field();
    // coordinates of each basis element, for expressing products
    let coord_mat = Mat::from_rows(
        field,
        endos.elements.iter().map(Morphism::coordinates).collect(),
    )
    .transpose();
    let express = |f: &Morphism| -> Vec<Scalar> {
        let coords = f.coordinates();
        let rhs = Mat::from_fn(field, coords.len(), 1, |i, _| coords[i].clone());
        let sol = coord_mat.solve(&rhs).expect("product stays in End");
        (0..d).map(|i| sol.get(i, 0).clone()).collect()
    };
    // left multiplication matrices
    let mut left_mul = Vec::with_capacity(d);
    for x in &endos.elements {
        let mut lm = Mat::zero(field, d, d);
        for (j, y) in endos.elements.iter().enumerate() {
            let prod = y.then(x);
            for (i, c) in express(&prod).into_iter().enumerate() {
                lm.set(i, j, c);
            }
        }
        left_mul.push(lm);
    }
    let trace = |m: &Mat| -> Scalar {
        let mut t = field.zero();
        for i in 0..m.rows() {
            t = &t + m.get(i, i);
        }
        t
    };
    let gram = Mat::from_fn(field, d, d, |i, j| trace(&left_mul[i].mul(&left_mul[j])));
    gram.kernel().cols()
}

/// Groups a decomposition into isomorphism classes with multiplicities.
pub fn group_summands(
    parts: Vec<Representation>,
    seed: u64,
) -> Vec<(Representation, usize)> {
    let mut grouped: Vec<(Representation, usize)> = Vec::new();
    for p in parts {
        if let Some(slot) = grouped
            .iter_mut()
            .find(|(rep, _)| is_isomorphic(rep, &p, seed).is_iso())
        {
            slot.1 += 1;
        } else {
            grouped.push((p, 1));
        }
    }
    grouped
}

/// The left regular module as the direct sum of all indecomposable
/// projectives.
pub fn regular_module(algebra: &Arc<BoundAlgebra>) -> Representation {
    let parts: Vec<Representation> = (0..algebra.quiver().vertex_count())
        .map(|v| projective(algebra, v))
        .collect();
    direct_sum(&parts).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::quiver::{nakayama_cyclic, nakayama_linear};
    use crate::rep::{random_module, simple};

    const Q: FieldSpec = FieldSpec::Rationals;

    fn a2() -> Arc<BoundAlgebra> {
        Arc::new(nakayama_linear(2, &[], Q).unwrap())
    }

    fn s3() -> Arc<BoundAlgebra> {
        Arc::new(nakayama_cyclic(3, 2, Q).unwrap())
    }

    #[test]
    fn cover_of_projective_is_identity_sized() {
        let a = s3();
        for v in 0..3 {
            let p = projective(&a, v);
            let (cover, epi) = projective_cover(&p);
            assert_eq!(cover.dims(), p.dims());
            assert!(epi.is_iso());
        }
    }

    #[test]
    fn cover_of_simple_is_projective_at_vertex() {
        let a = s3();
        for v in 0..3 {
            let (cover, epi) = projective_cover(&simple(&a, v));
            assert_eq!(cover.dims(), projective(&a, v).dims());
            assert!(epi.validate());
            // minimality: kernel inside the radical
            let (ker, _) = kernel(&epi);
            let (rad, _) = radical(&cover);
            for v in 0..3 {
                assert!(ker.dim_at(v) <= rad.dim_at(v));
            }
        }
    }

    #[test]
    fn cover_of_radical_is_next_projective() {
        let a = s3();
        for v in 0..3 {
            let (rad, _) = radical(&projective(&a, v));
            let (cover, _) = projective_cover(&rad);
            let next = a.quiver().arrow(a.quiver().arrows_from(v).next().unwrap()).target;
            assert_eq!(cover.dims(), projective(&a, next).dims());
        }
    }

    #[test]
    fn syzygies_over_a2() {
        let a = a2();
        assert!(syzygy(&simple(&a, 0)).is_zero_module()); // S_1 = P(1)
        let omega_s2 = syzygy(&simple(&a, 1));
        assert_eq!(omega_s2, simple(&a, 0));
    }

    #[test]
    fn syzygies_cycle_over_s3() {
        let a = s3();
        let mut m = simple(&a, 0);
        for _ in 0..3 {
            m = syzygy(&m);
        }
        assert!(is_isomorphic(&m, &simple(&a, 0), 0).is_iso());
        // each single syzygy is the next simple
        let omega = syzygy(&simple(&a, 0));
        let next = a.quiver().arrow(a.quiver().arrows_from(0).next().unwrap()).target;
        assert!(is_isomorphic(&omega, &simple(&a, next), 0).is_iso());
    }

    #[test]
    fn proj_dim_certificates() {
        let a = a2();
        let bound = default_bound(&a);
        assert_eq!(
            proj_dim(&projective(&a, 1), bound, 0).finite_value(),
            Some(0)
        );
        assert_eq!(proj_dim(&simple(&a, 1), bound, 0).finite_value(), Some(1));

        let c = s3();
        let cert = proj_dim(&simple(&c, 0), default_bound(&c), 0);
        assert!(cert.is_infinite());
        assert!(cert.reverify());
    }

    #[test]
    fn inj_dim_certificates() {
        let a = a2();
        let bound = default_bound(&a);
        // injectives have injective dimension zero
        let i1 = crate::rep::injective(&a, 0);
        assert_eq!(inj_dim(&i1, bound, 0).finite_value(), Some(0));
        // S_1 over A_2 embeds in I(1) with injective cokernel
        assert_eq!(inj_dim(&simple(&a, 0), bound, 0).finite_value(), Some(1));

        let c = s3();
        assert!(inj_dim(&simple(&c, 0), default_bound(&c), 0).is_infinite());
    }

    #[test]
    fn ext_vanishes_on_projectives() {
        let a = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for v in 0..3 {
            let p = projective(&a, v);
            let n = random_module(&a, &mut rng, 8);
            for k in 1..=3 {
                assert_eq!(ext_dim(k, &p, &n, 10).unwrap(), 0);
                assert_eq!(ext1_cocycle_oracle(&p, &n), 0);
            }
        }
    }

    #[test]
    fn ext1_frozen_values() {
        // oracle first: over A_2 there is one arrow 2 -> 1, no relations, and
        // Hom(S_2, S_1) vertexwise maps are all zero, so cocycles are the
        // scalars f_a with no conditions and no coboundaries: dimension 1.
        let a = a2();
        let s2 = simple(&a, 1);
        let s1 = simple(&a, 0);
        assert_eq!(ext1_cocycle_oracle(&s2, &s1), 1);
        assert_eq!(ext_dim(1, &s2, &s1, 10).unwrap(), 1);

        let c = s3();
        for v in 0..3 {
            let next = c.quiver().arrow(c.quiver().arrows_from(v).next().unwrap()).target;
            let sv = simple(&c, v);
            let sn = simple(&c, next);
            assert_eq!(ext1_cocycle_oracle(&sv, &sn), 1);
            assert_eq!(ext_dim(1, &sv, &sn, 10).unwrap(), 1);
        }
    }

    #[test]
    fn ext_oracle_agreement_random() {
        for a in [a2(), s3()] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..12 {
                let m = random_module(&a, &mut rng, 8);
                let n = random_module(&a, &mut rng, 8);
                assert_eq!(
                    ext_dim(1, &m, &n, 10).unwrap(),
                    ext1_cocycle_oracle(&m, &n)
                );
            }
        }
    }

    #[test]
    fn dimension_shift() {
        let a = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..6 {
            let m = random_module(&a, &mut rng, 8);
            let n = random_module(&a, &mut rng, 8);
            let om = syzygy(&m);
            for k in 1..=2 {
                assert_eq!(
                    ext_dim(k + 1, &m, &n, 12).unwrap(),
                    ext_dim(k, &om, &n, 12).unwrap()
                );
            }
        }
    }

    #[test]
    fn ext_bound_exhaustion_is_reported() {
        let a = s3();
        let s = simple(&a, 0);
        assert!(matches!(
            ext_dim(5, &s, &s, 3),
            Err(HomalgError::BoundExhausted { .. })
        ));
    }

    #[test]
    fn iso_detects_equal_and_different_simples() {
        let a = s3();
        let s0 = simple(&a, 0);
        assert!(is_isomorphic(&s0, &s0, 0).is_iso());
        assert!(matches!(
            is_isomorphic(&s0, &simple(&a, 1), 0),
            IsoResult::NotIsomorphic(IsoObstruction::DimVector)
        ));
    }

    #[test]
    fn uniserial_rule_decides_radicals() {
        let a = s3();
        for v in 0..3 {
            let (rad, _) = radical(&projective(&a, v));
            let next = a.quiver().arrow(a.quiver().arrows_from(v).next().unwrap()).target;
            assert_eq!(uniserial_sequence(&rad), Some(vec![next]));
            assert!(is_isomorphic(&rad, &simple(&a, next), 0).is_iso());
        }
    }

    #[test]
    fn decompose_certifies_indecomposables() {
        let a = s3();
        for v in 0..3 {
            let parts = decompose(&projective(&a, v), 0).unwrap();
            assert_eq!(parts.len(), 1);
        }
    }

    #[test]
    fn decompose_splits_sums() {
        let a = s3();
        let s0 = simple(&a, 0);
        let (double, _, _) = direct_sum(&[s0.clone(), s0.clone()]);
        let grouped = group_summands(decompose(&double, 0).unwrap(), 0);
        assert_eq!(grouped.len(), 1);
        assert_eq!(grouped[0].1, 2);

        let p1 = projective(&a, 0);
        let (rad2, _) = radical(&projective(&a, 1));
        let (mixed, _, _) = direct_sum(&[p1.clone(), rad2.clone()]);
        let parts = decompose(&mixed, 0).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts
            .iter()
            .any(|p| is_isomorphic(p, &p1, 0).is_iso()));
        assert!(parts
            .iter()
            .any(|p| is_isomorphic(p, &rad2, 0).is_iso()));
    }

    #[test]
    fn decompose_random_reassembly() {
        let a = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..8 {
            let m = random_module(&a, &mut rng, 10);
            let parts = decompose(&m, 0).unwrap();
            let total: usize = parts.iter().map(Representation::total_dim).sum();
            assert_eq!(total, m.total_dim());
        }
    }

    #[test]
    fn syzygies_have_no_projective_summands() {
        let a = s3();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..6 {
            let m = random_module(&a, &mut rng, 10);
            let om = syzygy(&m);
            if om.is_zero_module() {
                continue;
            }
            for part in decompose(&om, 0).unwrap() {
                assert!(!is_projective_rep(&part), "minimal syzygy has projective summand");
            }
        }
    }

    #[test]
    fn two_loop_local_algebra_has_infinite_dimensions() {
        // one vertex, loops x and y, radical square zero
        use crate::quiver::{build_algebra, MonomialIdeal, Path, Quiver};
        let quiver = Quiver::new(
            vec!["1".into()],
            vec![
                ("x".into(), "1".into(), "1".into()),
                ("y".into(), "1".into(), "1".into()),
            ],
        )
        .unwrap();
        let gens = ["x", "y"]
            .iter()
            .flat_map(|a| ["x", "y"].iter().map(move |b| (*a, *b)))
            .map(|(a, b)| Path::from_labels(&quiver, &[a, b]).unwrap())
            .collect();
        let ideal = MonomialIdeal::new(&quiver, gens).unwrap();
        let a = Arc::new(build_algebra(quiver, ideal, Q).unwrap());
        assert_eq!(a.dimension(), 3);
        // syzygies double in size, so only summand recurrence certifies this
        let s = simple(&a, 0);
        let cert = proj_dim(&s, default_bound(&a), 0);
        assert!(cert.is_infinite());
        assert!(cert.reverify());
        let inj = crate::rep::injective(&a, 0);
        let cert = proj_dim(&inj, default_bound(&a), 0);
        assert!(cert.is_infinite());
        assert!(cert.reverify());
    }

    #[test]
    fn resolution_terminates_on_finite_pd() {
        let a = a2();
        let res = resolution_segment(&simple(&a, 1), 5);
        assert!(res.terminated);
        assert_eq!(res.projectives.len(), 2);
        // exactness spot check: d_1 followed by the augmentation is zero
        assert!(res.differentials[0].then(&res.augmentation).is_zero());
    }
}
