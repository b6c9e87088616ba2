//! Rational polyhedra with respect to a fixed lattice: H/V conversion, face
//! lattices, normal fans, support functions and lattice-point queries.
//!
//! Halfspaces are written `⟨v, n⟩ ≥ −a` with `n` a primitive integer normal
//! and `a` rational. Polyhedra may be unbounded and may contain lines; in the
//! latter case vertex data refers to the pointed section `P ∩ L^⊥`, where `L`
//! is the lineality space, and `vertices()` is empty.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactmath::{
    clear_denominators, hermite_normal_form, integer_kernel, invert_rational, is_unimodular_basis, mat_mul, mat_vec,
    mat_vec_rational, primitive, rank, rat_from_int, solve_system, AffineLattice, IntMatrix, LatticeVector, Point,
    Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("empty polyhedron")]
    EmptyPolyhedron,
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: expected rank {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polytope is not full-dimensional (dimension {dim} in rank {rank})")]
    NotFullDimensional { dim: usize, rank: usize },
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("classification requires complete fan")]
    IncompleteFan,
    #[error("support function is not convex")]
    NotConvex,
    #[error("support function values are not linear on cone {cone}")]
    NotPiecewiseLinear { cone: usize },
    #[error("support function has {got} values for {expected} rays")]
    ValueCountMismatch { expected: usize, got: usize },
    #[error("zero normal vector")]
    ZeroNormal,
}

/// `⟨v, normal⟩ + offset ≥ 0` (or `= 0` when used as an equation).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: LatticeVector,
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(normal: LatticeVector, offset: Rational) -> Self {
        Halfspace { normal, offset }
    }

    pub fn from_i64(normal: &[i64], offset: i64) -> Self {
        Halfspace { normal: LatticeVector::from_i64(normal), offset: Rational::from_integer(offset.into()) }
    }

    pub fn value(&self, p: &Point) -> Rational {
        self.normal.dot_point(p) + &self.offset
    }

    pub fn slope(&self, d: &LatticeVector) -> BigInt {
        self.normal.dot(d)
    }

    /// Scales to a primitive normal, keeping the halfspace.
    pub fn normalized(&self) -> Result<Halfspace, PolytopeError> {
        let g = gcd_of(&self.normal);
        if g.is_zero() {
            return Err(PolytopeError::ZeroNormal);
        }
        Ok(Halfspace {
            normal: primitive(&self.normal).map_err(|_| PolytopeError::ZeroNormal)?,
            offset: &self.offset / rat_from_int(&g),
        })
    }
}

fn gcd_of(v: &LatticeVector) -> BigInt {
    use num_integer::Integer;
    v.0.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

impl fmt::Display for Halfspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<v,{}> >= {}", self.normal, -self.offset.clone())
    }
}

/// A nonempty face, stored by the generators it contains (vertices first,
/// then rays) and the facets tight on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub generators: FixedBitSet,
    pub facets: FixedBitSet,
    pub dim: usize,
}

/// Identity of a polyhedron independent of its H-representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolytopeKey {
    pub vertices: Vec<Point>,
    pub rays: Vec<LatticeVector>,
    pub lineality: Vec<LatticeVector>,
}

#[derive(Clone, Debug)]
pub struct LatticePolytope {
    rank: usize,
    facets: Vec<Halfspace>,
    equations: Vec<Halfspace>,
    lineality: Vec<LatticeVector>,
    anchors: Vec<Point>,
    rays: Vec<LatticeVector>,
    faces: Vec<Face>,
    dim: usize,
    edges: Vec<Vec<(LatticeVector, Option<usize>)>>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.key() == other.key()
    }
}

impl Eq for LatticePolytope {}

impl LatticePolytope {
    /// The polyhedron `{v : ⟨v,n_i⟩ ≥ −a_i}` in a lattice of rank `rank`.
    pub fn from_halfspaces(rank: usize, halfspaces: &[Halfspace]) -> Result<Self, PolytopeError> {
        Self::from_constraints(rank, halfspaces, &[])
    }

    /// Inequalities plus equations `⟨v,n⟩ + a = 0`.
    pub fn from_constraints(
        rank: usize,
        inequalities: &[Halfspace],
        equations: &[Halfspace],
    ) -> Result<Self, PolytopeError> {
        for h in inequalities.iter().chain(equations) {
            if h.normal.rank() != rank {
                return Err(PolytopeError::DimensionMismatch { expected: rank, got: h.normal.rank() });
            }
        }
        let mut ineqs = Vec::new();
        for h in inequalities {
            if h.normal.is_zero() {
                if h.offset.is_negative() {
                    return Err(PolytopeError::EmptyPolyhedron);
                }
                continue;
            }
            ineqs.push(h.normalized()?);
        }
        let mut eqs = Vec::new();
        for h in equations {
            if h.normal.is_zero() {
                if !h.offset.is_zero() {
                    return Err(PolytopeError::EmptyPolyhedron);
                }
                continue;
            }
            eqs.push(h.normalized()?);
        }
        let (anchors, rays, lineality) = enumerate_generators(rank, &ineqs, &eqs)?;
        Ok(Self::assemble(rank, ineqs, anchors, rays, lineality))
    }

    /// Convex hull of a finite set of points.
    pub fn from_vertices(points: &[Point]) -> Result<Self, PolytopeError> {
        Self::from_generators(points, &[], &[])
    }

    pub fn from_lattice_points(points: &[LatticeVector]) -> Result<Self, PolytopeError> {
        let pts: Vec<Point> = points.iter().map(LatticeVector::to_point).collect();
        Self::from_vertices(&pts)
    }

    pub fn from_i64_vertices(points: &[&[i64]]) -> Result<Self, PolytopeError> {
        let pts: Vec<Point> = points.iter().map(|p| Point::from_i64(p)).collect();
        Self::from_vertices(&pts)
    }

    /// `conv(points) + cone(rays) + span(lineality)`.
    pub fn from_generators(
        points: &[Point],
        rays: &[LatticeVector],
        lineality: &[LatticeVector],
    ) -> Result<Self, PolytopeError> {
        let first = points.first().ok_or(PolytopeError::EmptyInput)?;
        let n = first.rank();
        for r in points.iter().map(Point::rank).chain(rays.iter().chain(lineality).map(LatticeVector::rank)) {
            if r != n {
                return Err(PolytopeError::DimensionMismatch { expected: n, got: r });
            }
        }
        let p0 = first.clone();
        let mut dirs: Vec<Vec<BigInt>> = points.iter().skip(1).map(|p| clear_denominators(&p.sub(&p0))).collect();
        dirs.extend(rays.iter().map(|r| r.0.clone()));
        dirs.extend(lineality.iter().map(|r| r.0.clone()));
        let kernel = integer_kernel(&dirs, n);
        let equations: Vec<Halfspace> = kernel.iter().map(|k| Halfspace::new(k.clone(), -k.dot_point(&p0))).collect();
        let d = n - kernel.len();
        let lin_rank = rank(&lineality.iter().map(|l| l.0.clone()).collect::<Vec<_>>());
        let kernel_rows: IntMatrix = kernel.iter().map(|k| k.0.clone()).collect();
        let lin_rows: IntMatrix = lineality.iter().map(|l| l.0.clone()).collect();

        let mut candidates: BTreeSet<Halfspace> = BTreeSet::new();
        if d > lin_rank {
            // generators: points then rays
            let gens: Vec<Result<&Point, &LatticeVector>> = points.iter().map(Ok).chain(rays.iter().map(Err)).collect();
            let need = d - lin_rank;
            for combo in (0..gens.len()).combinations(need) {
                let Some(base_idx) = combo.iter().copied().find(|&i| gens[i].is_ok()) else {
                    continue;
                };
                let base = gens[base_idx].unwrap();
                let mut rows: IntMatrix = kernel_rows.clone();
                rows.extend(lin_rows.iter().cloned());
                for &i in &combo {
                    if i == base_idx {
                        continue;
                    }
                    match gens[i] {
                        Ok(p) => rows.push(clear_denominators(&p.sub(base))),
                        Err(r) => rows.push(r.0.clone()),
                    }
                }
                let ker = integer_kernel(&rows, n);
                if ker.len() != 1 {
                    continue;
                }
                let normal = primitive(&ker[0]).expect("kernel vectors are nonzero");
                let at_base = normal.dot_point(base);
                let vals: Vec<Rational> = points.iter().map(|p| normal.dot_point(p) - &at_base).collect();
                let slopes: Vec<BigInt> = rays.iter().map(|r| normal.dot(r)).collect();
                if vals.iter().all(|v| !v.is_negative()) && slopes.iter().all(|s| !s.is_negative()) {
                    candidates.insert(Halfspace::new(normal, -at_base));
                } else if vals.iter().all(|v| !v.is_positive()) && slopes.iter().all(|s| !s.is_positive()) {
                    let neg = normal.negated();
                    candidates.insert(Halfspace::new(neg, at_base));
                }
            }
        }
        let ineqs: Vec<Halfspace> = candidates.into_iter().collect();
        Self::from_constraints(n, &ineqs, &equations)
    }

    /// Builds the cached data from a complete list of generators.
    fn assemble(
        rank: usize,
        ineqs: Vec<Halfspace>,
        anchors: Vec<Point>,
        rays: Vec<LatticeVector>,
        lineality: Vec<LatticeVector>,
    ) -> Self {
        let nv = anchors.len();
        let ng = nv + rays.len();
        let tight_set = |h: &Halfspace| {
            let mut s = FixedBitSet::with_capacity(ng);
            for (i, v) in anchors.iter().enumerate() {
                if h.value(v).is_zero() {
                    s.insert(i);
                }
            }
            for (i, r) in rays.iter().enumerate() {
                if h.slope(r).is_zero() {
                    s.insert(nv + i);
                }
            }
            s
        };
        let full = {
            let mut s = FixedBitSet::with_capacity(ng);
            s.insert_range(..);
            s
        };
        let mut tight: Vec<(Halfspace, FixedBitSet)> = Vec::new();
        for h in ineqs {
            let t = tight_set(&h);
            if t == full || !t.ones().any(|i| i < nv) {
                continue;
            }
            tight.push((h, t));
        }
        // facets: maximal tight sets, first representative wins
        let mut facets: Vec<(Halfspace, FixedBitSet)> = Vec::new();
        for (i, (h, t)) in tight.iter().enumerate() {
            let dominated = tight.iter().enumerate().any(|(j, (_, u))| (t.is_subset(u) && t != u) || (t == u && j < i));
            if !dominated {
                facets.push((h.clone(), t.clone()));
            }
        }
        facets.sort_by(|a, b| a.0.cmp(&b.0));

        let v0 = anchors[0].clone();
        let mut dirs: IntMatrix = anchors.iter().skip(1).map(|p| clear_denominators(&p.sub(&v0))).collect();
        dirs.extend(rays.iter().map(|r| r.0.clone()));
        dirs.extend(lineality.iter().map(|r| r.0.clone()));
        let kernel = integer_kernel(&dirs, rank);
        let kernel = hermite_normal_form(&kernel).expect("uniform lengths").basis;
        let equations: Vec<Halfspace> = kernel
            .into_iter()
            .map(|k| {
                let off = -k.dot_point(&v0);
                Halfspace::new(k, off)
            })
            .collect();
        let lin_rank = lineality.len();

        let face_dim = |gens: &FixedBitSet| -> usize {
            let vs: Vec<usize> = gens.ones().filter(|&i| i < nv).collect();
            let base = &anchors[vs[0]];
            let mut rows: IntMatrix = vs[1..].iter().map(|&i| clear_denominators(&anchors[i].sub(base))).collect();
            rows.extend(gens.ones().filter(|&i| i >= nv).map(|i| rays[i - nv].0.clone()));
            crate::exactmath::rank(&rows) + lin_rank
        };

        let nf = facets.len();
        let facet_sets: Vec<FixedBitSet> = facets.iter().map(|(_, t)| t.clone()).collect();
        let mut faces: Vec<Face> = Vec::new();
        let mut seen: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut queue: VecDeque<FixedBitSet> = VecDeque::new();
        seen.insert(full.clone(), 0);
        queue.push_back(full);
        while let Some(g) = queue.pop_front() {
            let mut tight_facets = FixedBitSet::with_capacity(nf);
            for (fi, t) in facet_sets.iter().enumerate() {
                if g.is_subset(t) {
                    tight_facets.insert(fi);
                }
            }
            let dim = face_dim(&g);
            faces.push(Face { generators: g.clone(), facets: tight_facets, dim });
            for t in &facet_sets {
                let mut h = g.clone();
                h.intersect_with(t);
                if h == g || !h.ones().any(|i| i < nv) || seen.contains_key(&h) {
                    continue;
                }
                seen.insert(h.clone(), faces.len() + queue.len());
                queue.push_back(h);
            }
        }
        let dim = faces[0].dim;

        let mut edges: Vec<Vec<(LatticeVector, Option<usize>)>> = vec![Vec::new(); nv];
        if lin_rank == 0 {
            for f in faces.iter().filter(|f| f.dim == 1) {
                let vs: Vec<usize> = f.generators.ones().filter(|&i| i < nv).collect();
                let rs: Vec<usize> = f.generators.ones().filter(|&i| i >= nv).collect();
                match (vs.as_slice(), rs.as_slice()) {
                    ([a, b], []) => {
                        let d = clear_denominators(&anchors[*b].sub(&anchors[*a]));
                        let d = primitive(&LatticeVector(d)).expect("distinct vertices");
                        edges[*a].push((d.clone(), Some(*b)));
                        edges[*b].push((d.negated(), Some(*a)));
                    }
                    ([a], [r]) => edges[*a].push((rays[r - nv].clone(), None)),
                    _ => {}
                }
            }
            for e in edges.iter_mut() {
                e.sort();
            }
        }

        LatticePolytope {
            rank,
            facets: facets.into_iter().map(|(h, _)| h).collect(),
            equations,
            lineality,
            anchors,
            rays,
            faces,
            dim,
            edges,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.rank
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn equations(&self) -> &[Halfspace] {
        &self.equations
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// Vertices; empty when the polyhedron contains a line.
    pub fn vertices(&self) -> &[Point] {
        if self.is_pointed() {
            &self.anchors
        } else {
            &[]
        }
    }

    /// Vertices of the pointed section `P ∩ L^⊥` (equal to the vertices when pointed).
    pub fn anchors(&self) -> &[Point] {
        &self.anchors
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn is_compact(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    /// True when all vertices are lattice points.
    pub fn is_lattice_polytope(&self) -> bool {
        self.anchors.iter().all(Point::is_integral)
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn generator_count(&self) -> usize {
        self.anchors.len() + self.rays.len()
    }

    pub fn face_vertices(&self, face: &Face) -> Vec<usize> {
        face.generators.ones().filter(|&i| i < self.anchors.len()).collect()
    }

    pub fn face_rays(&self, face: &Face) -> Vec<usize> {
        let nv = self.anchors.len();
        face.generators.ones().filter(|&i| i >= nv).map(|i| i - nv).collect()
    }

    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == d)
    }

    /// Primitive edge directions at a vertex, with the far endpoint when bounded.
    pub fn edges_at(&self, vertex: usize) -> &[(LatticeVector, Option<usize>)] {
        &self.edges[vertex]
    }

    pub fn key(&self) -> PolytopeKey {
        PolytopeKey {
            vertices: self.anchors.clone(),
            rays: self.rays.clone(),
            lineality: hermite_normal_form(&self.lineality).map(|h| h.basis).unwrap_or_default(),
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.facets.iter().all(|h| !h.value(p).is_negative()) && self.equations.iter().all(|h| h.value(p).is_zero())
    }

    /// Point in the relative interior.
    pub fn relative_interior_contains(&self, p: &Point) -> bool {
        self.facets.iter().all(|h| h.value(p).is_positive()) && self.equations.iter().all(|h| h.value(p).is_zero())
    }

    /// Index of the vertex equal to `p`.
    pub fn vertex_index(&self, p: &Point) -> Option<usize> {
        if !self.is_pointed() {
            return None;
        }
        self.anchors.binary_search(p).ok()
    }

    /// A canonical point of the relative interior: vertex centroid plus the
    /// ray sum.
    pub fn interior_point(&self) -> Point {
        let n = self.rank;
        let k = Rational::from_integer(BigInt::from(self.anchors.len()));
        let mut c = vec![Rational::zero(); n];
        for v in &self.anchors {
            for (ci, vi) in c.iter_mut().zip(&v.0) {
                *ci += vi;
            }
        }
        for ci in c.iter_mut() {
            *ci /= &k;
        }
        for r in &self.rays {
            for (ci, ri) in c.iter_mut().zip(&r.0) {
                *ci += rat_from_int(ri);
            }
        }
        Point(c)
    }

    /// The face as a polyhedron in its own right.
    pub fn face_polytope(&self, face: &Face) -> LatticePolytope {
        let mut ineqs = Vec::new();
        for (i, h) in self.facets.iter().enumerate() {
            if !face.facets.contains(i) {
                ineqs.push(h.clone());
            }
        }
        let anchors: Vec<Point> = self.face_vertices(face).into_iter().map(|i| self.anchors[i].clone()).collect();
        let rays: Vec<LatticeVector> = self.face_rays(face).into_iter().map(|i| self.rays[i].clone()).collect();
        Self::assemble(self.rank, ineqs, anchors, rays, self.lineality.clone())
    }

    /// Intersection with further constraints.
    pub fn intersect(&self, inequalities: &[Halfspace], equations: &[Halfspace]) -> Result<Self, PolytopeError> {
        let mut ineqs = self.facets.clone();
        ineqs.extend_from_slice(inequalities);
        let mut eqs = self.equations.clone();
        eqs.extend_from_slice(equations);
        Self::from_constraints(self.rank, &ineqs, &eqs)
    }

    /// Index into `faces()` of the smallest face containing the given
    /// points and directions.
    pub fn smallest_face_containing(&self, points: &[Point], rays: &[LatticeVector]) -> usize {
        let nv = self.anchors.len();
        let mut g = self.faces[0].generators.clone();
        for h in &self.facets {
            let tight = points.iter().all(|p| h.value(p).is_zero()) && rays.iter().all(|r| h.slope(r).is_zero());
            if !tight {
                continue;
            }
            for i in 0..self.generator_count() {
                let on =
                    if i < nv { h.value(&self.anchors[i]).is_zero() } else { h.slope(&self.rays[i - nv]).is_zero() };
                if !on {
                    g.set(i, false);
                }
            }
        }
        self.faces.iter().position(|f| f.generators == g).expect("face lattice is closed under intersection")
    }

    /// Exactly `dim` edges at every vertex.
    pub fn is_simplicial(&self) -> bool {
        self.non_simple_vertex().is_none()
    }

    pub fn non_simple_vertex(&self) -> Option<usize> {
        if !self.is_pointed() {
            return None;
        }
        (0..self.anchors.len()).find(|&v| self.edges[v].len() != self.dim)
    }

    /// Simplicial with unimodular primitive edge vectors at every vertex,
    /// measured in the lattice of the affine hull.
    pub fn is_nonsingular(&self) -> bool {
        self.singular_vertex().is_none()
    }

    pub fn singular_vertex(&self) -> Option<usize> {
        if !self.is_pointed() {
            return None;
        }
        if let Some(v) = self.non_simple_vertex() {
            return Some(v);
        }
        let lat = self.affine_lattice();
        (0..self.anchors.len()).find(|&v| !self.is_vertex_unimodular(v, &lat))
    }

    pub fn is_vertex_nonsingular(&self, vertex: usize) -> bool {
        self.edges[vertex].len() == self.dim && self.is_vertex_unimodular(vertex, &self.affine_lattice())
    }

    fn is_vertex_unimodular(&self, vertex: usize, lat: &AffineLattice) -> bool {
        let vs: Vec<LatticeVector> = self.edges[vertex].iter().map(|(d, _)| lat.direction_coords(d)).collect();
        is_unimodular_basis(&vs).unwrap_or(false)
    }

    /// Lattice of the affine hull, anchored at the first vertex.
    pub fn affine_lattice(&self) -> AffineLattice {
        let v0 = self.anchors[0].clone();
        let mut dirs: Vec<Vec<Rational>> = self.anchors.iter().skip(1).map(|p| p.sub(&v0)).collect();
        dirs.extend(self.rays.iter().chain(&self.lineality).map(|r| r.to_point().0));
        AffineLattice::spanned(v0, &dirs)
    }

    /// All lattice points, in lexicographic order.
    pub fn lattice_points(&self) -> Result<Vec<LatticeVector>, PolytopeError> {
        if !self.is_compact() {
            return Err(PolytopeError::Unbounded);
        }
        let n = self.rank;
        let lo: Vec<BigInt> =
            (0..n).map(|i| self.anchors.iter().map(|v| v.0[i].ceil().to_integer()).min().unwrap()).collect();
        let hi: Vec<BigInt> =
            (0..n).map(|i| self.anchors.iter().map(|v| v.0[i].floor().to_integer()).max().unwrap()).collect();
        let mut out = Vec::new();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Ok(out);
        }
        let mut cur = lo.clone();
        loop {
            let lv = LatticeVector(cur.clone());
            if self.contains(&lv.to_point()) {
                out.push(lv);
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if cur[i] < hi[i] {
                    cur[i] += 1;
                    cur[i + 1..n].clone_from_slice(&lo[i + 1..n]);
                    break;
                }
            }
        }
    }

    /// Support function of the polytope's facets: value `−a_i` on each
    /// facet normal of the normal fan.
    pub fn support_function(&self) -> Result<SupportFunction, PolytopeError> {
        let fan = normal_fan(self)?;
        let values = self.facets.iter().map(|h| -h.offset.clone()).collect();
        SupportFunction::new(fan, values)
    }

    /// Image under an integral affine map.
    pub fn image(&self, map: &LatticeMap) -> Result<LatticePolytope, PolytopeError> {
        let pts: Vec<Point> = self.anchors.iter().map(|p| map.apply(p)).collect();
        let rays: Vec<LatticeVector> = self.rays.iter().map(|r| map.apply_direction(r)).collect();
        let lin: Vec<LatticeVector> = self.lineality.iter().map(|r| map.apply_direction(r)).collect();
        Self::from_generators(&pts, &rays, &lin)
    }
}

impl fmt::Display for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "polyhedron(dim {}, vertices [", self.dim)?;
        for (i, v) in self.anchors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")?;
        if !self.rays.is_empty() {
            write!(f, ", rays [{}]", self.rays.iter().join(", "))?;
        }
        write!(f, ")")
    }
}

type Generators = (Vec<Point>, Vec<LatticeVector>, Vec<LatticeVector>);

/// Vertices (of the pointed section), extreme rays and lineality basis.
fn enumerate_generators(n: usize, ineqs: &[Halfspace], eqs: &[Halfspace]) -> Result<Generators, PolytopeError> {
    let all_normals: IntMatrix = ineqs.iter().chain(eqs).map(|h| h.normal.0.clone()).collect();
    let lineality = integer_kernel(&all_normals, n);
    let lineality = hermite_normal_form(&lineality).expect("uniform lengths").basis;

    let mut base_rows: IntMatrix = Vec::new();
    let mut base_rhs: Vec<Rational> = Vec::new();
    let candidates = eqs
        .iter()
        .map(|h| (h.normal.0.clone(), -h.offset.clone()))
        .chain(lineality.iter().map(|l| (l.0.clone(), Rational::zero())));
    for (row, rhs) in candidates {
        let mut trial = base_rows.clone();
        trial.push(row.clone());
        if rank(&trial) > base_rows.len() {
            base_rows = trial;
            base_rhs.push(rhs);
        }
    }
    let free = n - base_rows.len();
    let on_eqs =
        |p: &Point| eqs.iter().all(|h| h.value(p).is_zero()) && lineality.iter().all(|l| l.dot_point(p).is_zero());
    let feasible = |p: &Point| ineqs.iter().all(|h| !h.value(p).is_negative()) && on_eqs(p);

    let mut vertices: BTreeSet<Point> = BTreeSet::new();
    for combo in (0..ineqs.len()).combinations(free) {
        let mut rows = base_rows.clone();
        let mut rhs = base_rhs.clone();
        for &i in &combo {
            rows.push(ineqs[i].normal.0.clone());
            rhs.push(-ineqs[i].offset.clone());
        }
        if let Some(x) = solve_system(&rows, &rhs) {
            let p = Point(x);
            if feasible(&p) {
                vertices.insert(p);
            }
        }
    }
    if vertices.is_empty() {
        return Err(PolytopeError::EmptyPolyhedron);
    }
    let mut rays: BTreeSet<LatticeVector> = BTreeSet::new();
    if free >= 1 {
        for combo in (0..ineqs.len()).combinations(free - 1) {
            let mut rows = base_rows.clone();
            rows.extend(combo.iter().map(|&i| ineqs[i].normal.0.clone()));
            let ker = integer_kernel(&rows, n);
            if ker.len() != 1 {
                continue;
            }
            let d = primitive(&ker[0]).expect("kernel vectors are nonzero");
            for s in [d.clone(), d.negated()] {
                if ineqs.iter().all(|h| !h.slope(&s).is_negative()) {
                    rays.insert(s);
                }
            }
        }
    }
    Ok((vertices.into_iter().collect(), rays.into_iter().collect(), lineality))
}

/// A fan given by primitive rays and cones as ray-index sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<LatticeVector>,
    cones: Vec<Vec<usize>>,
    maximal: Vec<usize>,
    complete: bool,
}

impl Fan {
    /// A fan from rays and (not necessarily face-closed) cones. Completeness
    /// is decided by checking that every maximal cone is full-dimensional and
    /// each of its facets is shared by exactly two maximal cones.
    pub fn new(rank: usize, rays: Vec<LatticeVector>, cones: Vec<Vec<usize>>) -> Result<Self, PolytopeError> {
        let rays: Vec<LatticeVector> =
            rays.iter().map(|r| primitive(r).map_err(|_| PolytopeError::ZeroNormal)).collect::<Result<_, _>>()?;
        let mut cones: Vec<Vec<usize>> = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        cones.sort();
        cones.dedup();
        let maximal = maximal_cones(&cones);
        let complete = fan_is_complete(rank, &rays, &cones, &maximal)?;
        Ok(Fan { rank, rays, cones, maximal, complete })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn maximal_cones(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.maximal.iter().map(|&i| &self.cones[i])
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Index of the cone with exactly these rays.
    pub fn cone_index(&self, rays: &[usize]) -> Option<usize> {
        let mut r = rays.to_vec();
        r.sort_unstable();
        self.cones.binary_search(&r).ok()
    }

    pub fn ray_index(&self, ray: &LatticeVector) -> Option<usize> {
        self.rays.iter().position(|r| r == ray)
    }
}

fn maximal_cones(cones: &[Vec<usize>]) -> Vec<usize> {
    (0..cones.len())
        .filter(|&i| {
            !cones
                .iter()
                .enumerate()
                .any(|(j, c)| j != i && c.len() > cones[i].len() && cones[i].iter().all(|r| c.contains(r)))
        })
        .collect()
}

fn fan_is_complete(
    rank: usize,
    rays: &[LatticeVector],
    cones: &[Vec<usize>],
    maximal: &[usize],
) -> Result<bool, PolytopeError> {
    if maximal.is_empty() {
        return Ok(false);
    }
    if rank == 0 {
        return Ok(true);
    }
    let mut facet_count: HashMap<Vec<usize>, usize> = HashMap::new();
    for &m in maximal {
        let cone = &cones[m];
        let rows: IntMatrix = cone.iter().map(|&r| rays[r].0.clone()).collect();
        if rank_of(&rows) != rank {
            return Ok(false);
        }
        let gens: Vec<LatticeVector> = cone.iter().map(|&r| rays[r].clone()).collect();
        let poly = LatticePolytope::from_generators(&[Point::origin(rank)], &gens, &[])?;
        for f in poly.faces_of_dim(rank - 1) {
            let mut rs: Vec<usize> =
                poly.face_rays(f).into_iter().map(|i| cone[gens_index(&gens, &poly.rays()[i])]).collect();
            rs.sort_unstable();
            *facet_count.entry(rs).or_default() += 1;
        }
    }
    Ok(facet_count.values().all(|&c| c == 2))
}

fn gens_index(gens: &[LatticeVector], r: &LatticeVector) -> usize {
    gens.iter().position(|g| g == r).expect("ray of cone is one of its generators")
}

fn rank_of(rows: &IntMatrix) -> usize {
    rank(rows)
}

/// Normal fan: one ray per facet (its inward normal) and one cone per face,
/// spanned by the normals of the facets containing it.
pub fn normal_fan(p: &LatticePolytope) -> Result<Fan, PolytopeError> {
    if !p.is_full_dimensional() {
        return Err(PolytopeError::NotFullDimensional { dim: p.dim(), rank: p.rank() });
    }
    let rays: Vec<LatticeVector> = p.facets().iter().map(|h| h.normal.clone()).collect();
    let mut cones: Vec<Vec<usize>> = p.faces().iter().map(|f| f.facets.ones().collect()).collect();
    cones.sort();
    cones.dedup();
    let maximal = maximal_cones(&cones);
    Ok(Fan { rank: p.rank(), rays, cones, maximal, complete: p.is_compact() })
}

/// A function on the support of a fan, linear on each cone, given by its
/// values on the primitive ray generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFunction {
    pub fan: Fan,
    pub values: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Convexity {
    Affine,
    StrictlyConvex,
    Convex,
    NotConvex,
}

impl fmt::Display for Convexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convexity::Affine => "affine",
            Convexity::StrictlyConvex => "strictly-convex",
            Convexity::Convex => "convex",
            Convexity::NotConvex => "none",
        })
    }
}

impl SupportFunction {
    pub fn new(fan: Fan, values: Vec<Rational>) -> Result<Self, PolytopeError> {
        if values.len() != fan.rays.len() {
            return Err(PolytopeError::ValueCountMismatch { expected: fan.rays.len(), got: values.len() });
        }
        let s = SupportFunction { fan, values };
        for m in s.fan.maximal.clone() {
            s.linear_on_cone(m)?;
        }
        Ok(s)
    }

    pub fn constant(fan: Fan, value: Rational) -> Self {
        let values = vec![value; fan.rays.len()];
        SupportFunction { fan, values }
    }

    /// The linear function agreeing with the values on the rays of cone `c`
    /// (one solution when the cone is not full-dimensional).
    pub fn linear_on_cone(&self, c: usize) -> Result<Vec<Rational>, PolytopeError> {
        let n = self.fan.rank;
        let cone = &self.fan.cones[c];
        let mut rows: IntMatrix = Vec::new();
        let mut rhs: Vec<Rational> = Vec::new();
        for &r in cone {
            let mut trial = rows.clone();
            trial.push(self.fan.rays[r].0.clone());
            if rank(&trial) > rows.len() {
                rows = trial;
                rhs.push(self.values[r].clone());
            }
        }
        // complete to a square system with unit vectors orthogonal in spirit
        for i in 0..n {
            if rows.len() == n {
                break;
            }
            let mut trial = rows.clone();
            trial.push(LatticeVector::unit(n, i).0);
            if rank(&trial) > rows.len() {
                rows = trial;
                rhs.push(Rational::zero());
            }
        }
        let m = solve_system(&rows, &rhs).expect("independent rows");
        for &r in cone {
            let v = self.fan.rays[r].dot_point(&Point(m.clone()));
            if v != self.values[r] {
                return Err(PolytopeError::NotPiecewiseLinear { cone: c });
            }
        }
        Ok(m)
    }

    /// Affine, strictly convex, convex or none, in the sense that the
    /// function is the minimum of its linear pieces.
    pub fn classify(&self) -> Result<Convexity, PolytopeError> {
        if !self.fan.complete {
            return Err(PolytopeError::IncompleteFan);
        }
        let linears: Vec<(usize, Vec<Rational>)> =
            self.fan.maximal.iter().map(|&c| self.linear_on_cone(c).map(|m| (c, m))).collect::<Result<_, _>>()?;
        if linears.windows(2).all(|w| w[0].1 == w[1].1) {
            return Ok(Convexity::Affine);
        }
        let mut strict = true;
        for (c, m) in &linears {
            let cone = &self.fan.cones[*c];
            for (r, ray) in self.fan.rays.iter().enumerate() {
                if cone.contains(&r) {
                    continue;
                }
                let v = ray.dot_point(&Point(m.clone()));
                if v < self.values[r] {
                    return Ok(Convexity::NotConvex);
                }
                if v == self.values[r] {
                    strict = false;
                }
            }
        }
        Ok(if strict { Convexity::StrictlyConvex } else { Convexity::Convex })
    }

    /// `{u : ⟨u, v_ρ⟩ ≥ φ(v_ρ)}`.
    pub fn divisor_polytope(&self) -> Result<LatticePolytope, PolytopeError> {
        if self.classify()? == Convexity::NotConvex {
            return Err(PolytopeError::NotConvex);
        }
        let hs: Vec<Halfspace> =
            self.fan.rays.iter().zip(&self.values).map(|(r, v)| Halfspace::new(r.clone(), -v.clone())).collect();
        LatticePolytope::from_halfspaces(self.fan.rank, &hs)
    }
}

/// An integral affine map `x ↦ matrix·x + translation` with unimodular matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub matrix: IntMatrix,
    pub translation: Point,
}

impl LatticeMap {
    pub fn identity(n: usize) -> Self {
        LatticeMap { matrix: crate::exactmath::identity(n), translation: Point::origin(n) }
    }

    pub fn apply(&self, p: &Point) -> Point {
        let v = mat_vec_rational(&self.matrix, &p.0);
        Point(v.into_iter().zip(&self.translation.0).map(|(a, b)| a + b).collect())
    }

    pub fn apply_direction(&self, d: &LatticeVector) -> LatticeVector {
        LatticeVector(mat_vec(&self.matrix, &d.0))
    }

    pub fn is_unimodular(&self) -> bool {
        crate::exactmath::determinant(&self.matrix).abs().is_one()
    }
}

/// All integral affine isomorphisms carrying `p` onto `q` (compact polytopes),
/// found by matching an edge basis at one vertex of `p` against ordered edge
/// tuples at every vertex of `q`.
pub fn lattice_equivalences(p: &LatticePolytope, q: &LatticePolytope) -> Vec<LatticeMap> {
    let mut out = Vec::new();
    if p.rank() != q.rank()
        || p.dim() != q.dim()
        || !p.is_compact()
        || !q.is_compact()
        || p.anchors.len() != q.anchors.len()
    {
        return out;
    }
    let k = p.dim();
    let n = p.rank();
    let lp = p.affine_lattice();
    let lq = q.affine_lattice();
    let cp: Vec<Vec<Rational>> = p.anchors.iter().map(|v| lp.coords(v).0).collect();
    let cq: BTreeSet<Vec<Rational>> = q.anchors.iter().map(|v| lq.coords(v).0).collect();

    // vertex of p with the fewest edges and an independent k-subset of them
    let p0 = (0..p.anchors.len()).min_by_key(|&v| p.edges[v].len()).expect("nonempty");
    let pe: Vec<LatticeVector> = p.edges[p0].iter().map(|(d, _)| lp.direction_coords(d)).collect();
    if k == 0 {
        let t: Vec<Rational> = q.anchors[0].sub(&p.anchors[0]);
        out.push(LatticeMap { matrix: crate::exactmath::identity(n), translation: Point(t) });
        return out;
    }
    let Some(basis) =
        pe.iter().cloned().combinations(k).find(|c| rank(&c.iter().map(|v| v.0.clone()).collect::<Vec<_>>()) == k)
    else {
        return out;
    };
    // columns = basis vectors
    let ep: Vec<Vec<Rational>> = (0..k).map(|i| basis.iter().map(|v| rat_from_int(&v.0[i])).collect()).collect();
    let Some(ep_inv) = invert_rational(&ep) else {
        return out;
    };
    for (qi, qv) in q.anchors.iter().enumerate() {
        if q.edges[qi].len() != p.edges[p0].len() {
            continue;
        }
        let qe: Vec<LatticeVector> = q.edges[qi].iter().map(|(d, _)| lq.direction_coords(d)).collect();
        for perm in qe.iter().permutations(k) {
            let eq: Vec<Vec<Rational>> = (0..k).map(|i| perm.iter().map(|v| rat_from_int(&v.0[i])).collect()).collect();
            let u = mul_rational(&eq, &ep_inv);
            if !u.iter().flatten().all(|x| x.is_integer()) {
                continue;
            }
            let ui: IntMatrix = u.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
            if !crate::exactmath::determinant(&ui).abs().is_one() {
                continue;
            }
            let cq0 = lq.coords(qv).0;
            let up0 = mat_vec_rational(&ui, &cp[p0]);
            let t: Vec<Rational> = cq0.iter().zip(&up0).map(|(a, b)| a - b).collect();
            let image: BTreeSet<Vec<Rational>> =
                cp.iter().map(|c| mat_vec_rational(&ui, c).into_iter().zip(&t).map(|(a, b)| a + b).collect()).collect();
            if image != cq {
                continue;
            }
            let map = ambient_map(&lp, &lq, &ui, &t);
            if !out.contains(&map) {
                out.push(map);
            }
        }
    }
    out
}

fn mul_rational(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols).map(|j| row.iter().zip(b).fold(Rational::zero(), |acc, (x, br)| acc + x * &br[j])).collect()
        })
        .collect()
}

/// Extends an intrinsic map `c ↦ u·c + t` to the ambient lattice.
fn ambient_map(lp: &AffineLattice, lq: &AffineLattice, u: &IntMatrix, t: &[Rational]) -> LatticeMap {
    let n = lp.ambient_rank();
    let k = lp.dim();
    let c = n - k;
    let mut block = crate::exactmath::identity(n);
    for i in 0..k {
        for j in 0..k {
            block[c + i][c + j] = u[i][j].clone();
        }
    }
    let matrix = mat_mul(&mat_mul(lq.frame(), &block), lp.frame_inverse());
    let bt = lq.embed(t);
    let mo = mat_vec_rational(&matrix, &lp.origin.0);
    let translation = Point(bt.0.iter().zip(&mo).map(|(a, b)| a - b).collect());
    LatticeMap { matrix, translation }
}

pub fn lattice_equivalent(p: &LatticePolytope, q: &LatticePolytope) -> Option<LatticeMap> {
    lattice_equivalences(p, q).into_iter().next()
}

/// Helper for tests and examples: rationals from integers.
pub fn ri(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(pts: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::from_i64_vertices(pts).unwrap()
    }

    fn simplex_dn(n: usize) -> LatticePolytope {
        let mut pts = vec![vec![-1i64; n]];
        for i in 0..n {
            let mut v = vec![-1i64; n];
            v[i] = n as i64;
            pts.push(v);
        }
        let p: Vec<Point> = pts.iter().map(|v| Point::from_i64(v)).collect();
        LatticePolytope::from_vertices(&p).unwrap()
    }

    fn hs(n: &[i64], a: i64) -> Halfspace {
        Halfspace::from_i64(n, a)
    }

    #[test]
    fn triangle_facets() {
        let t = poly(&[&[0, 0], &[3, 0], &[0, 3]]);
        let mut got: Vec<(LatticeVector, Rational)> =
            t.facets().iter().map(|h| (h.normal.clone(), h.offset.clone())).collect();
        got.sort();
        let mut want = vec![
            (LatticeVector::from_i64(&[1, 0]), ri(0)),
            (LatticeVector::from_i64(&[0, 1]), ri(0)),
            (LatticeVector::from_i64(&[-1, -1]), ri(3)),
        ];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(t.dim(), 2);
    }

    #[test]
    fn single_point_has_no_facets() {
        let p = poly(&[&[1, 2]]);
        assert_eq!(p.dim(), 0);
        assert!(p.facets().is_empty());
        assert_eq!(p.vertices().len(), 1);
        assert_eq!(p.faces().len(), 1);
    }

    #[test]
    fn tetrahedron_face_counts_match_brute_force() {
        let d3 = simplex_dn(3);
        assert_eq!(d3.facets().len(), 4);
        assert_eq!(d3.faces_of_dim(1).count(), 6);
        assert_eq!(d3.vertices().len(), 4);
        // brute force: every pair of vertices of a simplex spans an edge,
        // i.e. lies on exactly n-1 common facets
        let mut edges = 0;
        for (a, b) in (0..4).tuple_combinations() {
            let common = d3
                .facets()
                .iter()
                .filter(|h| h.value(&d3.vertices()[a]).is_zero() && h.value(&d3.vertices()[b]).is_zero())
                .count();
            if common == 2 {
                edges += 1;
            }
        }
        assert_eq!(edges, 6);
    }

    #[test]
    fn whole_space_and_unbounded() {
        let w = LatticePolytope::from_halfspaces(3, &[]).unwrap();
        assert!(w.vertices().is_empty());
        assert_eq!(w.faces().len(), 1);
        assert_eq!(w.dim(), 3);
        let fan = normal_fan(&w).unwrap();
        assert!(fan.rays().is_empty());
        assert_eq!(fan.cones(), &[Vec::<usize>::new()]);

        let seg = LatticePolytope::from_halfspaces(1, &[hs(&[1], 0), hs(&[-1], 2)]).unwrap();
        assert_eq!(seg.vertices(), &[Point::from_i64(&[0]), Point::from_i64(&[2])]);

        let quad = LatticePolytope::from_halfspaces(2, &[hs(&[1, 0], 0), hs(&[0, 1], 0)]).unwrap();
        assert_eq!(quad.vertices().len(), 1);
        assert_eq!(quad.rays().len(), 2);
        assert!(!quad.is_compact());
    }

    #[test]
    fn infeasible_system_is_rejected() {
        let r = LatticePolytope::from_halfspaces(1, &[hs(&[1], -3), hs(&[-1], 1)]);
        assert_eq!(r.unwrap_err(), PolytopeError::EmptyPolyhedron);
    }

    #[test]
    fn normal_fans() {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let f = normal_fan(&sq).unwrap();
        assert_eq!(f.rays().len(), 4);
        assert_eq!(f.maximal_cones().count(), 4);
        assert!(f.is_complete());

        let d2 = simplex_dn(2);
        let f = normal_fan(&d2).unwrap();
        let mut rays: Vec<LatticeVector> = f.rays().to_vec();
        rays.sort();
        let mut want = vec![
            LatticeVector::from_i64(&[1, 0]),
            LatticeVector::from_i64(&[0, 1]),
            LatticeVector::from_i64(&[-1, -1]),
        ];
        want.sort();
        assert_eq!(rays, want);

        let seg = poly(&[&[0], &[2]]);
        let f = normal_fan(&seg).unwrap();
        let mut rays = f.rays().to_vec();
        rays.sort();
        assert_eq!(rays, vec![LatticeVector::from_i64(&[-1]), LatticeVector::from_i64(&[1])]);

        assert!(matches!(normal_fan(&poly(&[&[0, 0], &[1, 1]])), Err(PolytopeError::NotFullDimensional { .. })));
    }

    #[test]
    fn simplicity_and_nonsingularity() {
        assert!(simplex_dn(2).is_nonsingular());
        assert!(simplex_dn(3).is_nonsingular());
        let cube =
            poly(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1]]);
        assert!(cube.is_nonsingular());
        let wp = poly(&[&[-1, -1, -1, -1], &[7, -1, -1, -1], &[-1, 3, -1, -1], &[-1, -1, 3, -1], &[-1, -1, -1, 3]]);
        assert!(wp.is_simplicial());
        assert!(!wp.is_nonsingular());
        assert!(wp.singular_vertex().is_some());
        let octahedron = poly(&[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]]);
        assert!(!octahedron.is_simplicial());
    }

    fn cp1_cp1_fan() -> Fan {
        let sq = poly(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        normal_fan(&sq).unwrap()
    }

    #[test]
    fn support_function_classification() {
        let fan = normal_fan(&simplex_dn(2)).unwrap();
        assert_eq!(SupportFunction::constant(fan.clone(), ri(0)).classify().unwrap(), Convexity::Affine);
        assert_eq!(SupportFunction::constant(fan, ri(-1)).classify().unwrap(), Convexity::StrictlyConvex);

        let fan = cp1_cp1_fan();
        let values: Vec<Rational> = fan.rays().iter().map(|r| if r.0[0].is_zero() { ri(0) } else { ri(-1) }).collect();
        let phi = SupportFunction::new(fan, values).unwrap();
        assert_eq!(phi.classify().unwrap(), Convexity::Convex);

        let quad = LatticePolytope::from_halfspaces(2, &[hs(&[1, 0], 0), hs(&[0, 1], 0)]).unwrap();
        let phi = quad.support_function().unwrap();
        assert_eq!(phi.classify(), Err(PolytopeError::IncompleteFan));
    }

    #[test]
    fn non_convex_support_function() {
        let fan = cp1_cp1_fan();
        let values: Vec<Rational> = fan.rays().iter().map(|r| if r.0[0].is_zero() { ri(0) } else { ri(1) }).collect();
        let phi = SupportFunction::new(fan, values).unwrap();
        assert_eq!(phi.classify().unwrap(), Convexity::NotConvex);
        assert_eq!(phi.divisor_polytope().unwrap_err(), PolytopeError::NotConvex);
    }

    #[test]
    fn divisor_polytopes() {
        let fan = normal_fan(&simplex_dn(2)).unwrap();
        let p = SupportFunction::constant(fan.clone(), ri(-1)).divisor_polytope().unwrap();
        assert_eq!(p, simplex_dn(2));
        let p = SupportFunction::constant(fan, ri(0)).divisor_polytope().unwrap();
        assert_eq!(p.vertices(), &[Point::origin(2)]);
        let seg = poly(&[&[0], &[1]]);
        let fan = normal_fan(&seg).unwrap();
        for d in 1..5 {
            let values: Vec<Rational> =
                fan.rays().iter().map(|r| if r.0[0].is_positive() { ri(0) } else { ri(-d) }).collect();
            let p = SupportFunction::new(fan.clone(), values).unwrap().divisor_polytope().unwrap();
            assert_eq!(p.lattice_points().unwrap().len() as i64, d + 1);
        }
    }

    #[test]
    fn lattice_point_counts() {
        assert_eq!(poly(&[&[0, 0], &[3, 0], &[0, 3]]).lattice_points().unwrap().len(), 10);
        assert_eq!(poly(&[&[0], &[5]]).lattice_points().unwrap().len(), 6);
        let d4 = poly(&[&[0, 0, 0], &[4, 0, 0], &[0, 4, 0], &[0, 0, 4]]);
        let pts = d4.lattice_points().unwrap();
        // brute force over the box
        let mut brute = 0;
        for x in 0..=4 {
            for y in 0..=4 {
                for z in 0..=4 {
                    if x + y + z <= 4 {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(pts.len(), brute);
        assert_eq!(brute, 35);
        let quad = LatticePolytope::from_halfspaces(2, &[hs(&[1, 0], 0), hs(&[0, 1], 0)]).unwrap();
        assert_eq!(quad.lattice_points().unwrap_err(), PolytopeError::Unbounded);
    }

    #[test]
    fn lattice_equivalence_examples() {
        let t = poly(&[&[0, 0], &[3, 0], &[0, 3]]);
        let m = lattice_equivalent(&t, &t).unwrap();
        assert!(m.is_unimodular());
        assert_eq!(t.image(&m).unwrap(), t);
        let shifted = poly(&[&[1, 1], &[4, 1], &[1, 4]]);
        assert!(lattice_equivalent(&t, &shifted).is_some());
        let sheared = poly(&[&[0, 0], &[3, 3], &[0, 3]]);
        assert!(lattice_equivalent(&t, &sheared).is_some());
        let fat = poly(&[&[0, 0], &[2, 0], &[0, 3]]);
        assert!(lattice_equivalent(&t, &fat).is_none());
        let non_unimodular = poly(&[&[0, 0], &[3, 0], &[3, 6]]);
        assert!(lattice_equivalent(&t, &non_unimodular).is_none());
    }

    #[test]
    fn lattice_equivalence_of_lower_dimensional_faces() {
        let a = poly(&[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0]]);
        let b = poly(&[&[0, 0, 1], &[0, 2, 1], &[0, 0, 3]]);
        let m = lattice_equivalent(&a, &b).unwrap();
        assert!(m.is_unimodular());
        assert_eq!(a.image(&m).unwrap(), b);
    }

    #[test]
    fn face_polytope_of_a_facet() {
        let d3 = simplex_dn(3);
        let facet = d3.faces_of_dim(2).next().unwrap().clone();
        let fp = d3.face_polytope(&facet);
        assert_eq!(fp.dim(), 2);
        assert_eq!(fp.vertices().len(), 3);
        assert_eq!(fp.equations().len(), 1);
        let again = LatticePolytope::from_vertices(fp.vertices()).unwrap();
        assert_eq!(again, fp);
    }

    fn point_set() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-3i64..4, 2), 1..7)
    }

    fn point_set3() -> impl Strategy<Value = Vec<Vec<i64>>> {
        prop::collection::vec(prop::collection::vec(-2i64..3, 3), 4..8)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn halfspace_round_trip_preserves_vertices(pts in point_set()) {
            let ps: Vec<Point> = pts.iter().map(|v| Point::from_i64(v)).collect();
            let p = LatticePolytope::from_vertices(&ps).unwrap();
            let q = LatticePolytope::from_constraints(2, p.facets(), p.equations()).unwrap();
            prop_assert_eq!(p.vertices(), q.vertices());
            for x in &ps {
                prop_assert!(p.contains(x));
            }
        }

        #[test]
        fn round_trip_in_rank_three(pts in point_set3()) {
            let ps: Vec<Point> = pts.iter().map(|v| Point::from_i64(v)).collect();
            let p = LatticePolytope::from_vertices(&ps).unwrap();
            let q = LatticePolytope::from_constraints(3, p.facets(), p.equations()).unwrap();
            prop_assert_eq!(p.vertices(), q.vertices());
            for v in p.vertices() {
                prop_assert!(ps.contains(v));
            }
        }

        #[test]
        fn normal_fan_complete_iff_compact(box_hi in 1i64..4, drop in 0usize..4) {
            let mut h = vec![hs(&[1, 0], 0), hs(&[0, 1], 0), hs(&[-1, 0], box_hi), hs(&[0, -1], box_hi)];
            if drop < 2 {
                h.remove(2 + drop);
            }
            let p = LatticePolytope::from_halfspaces(2, &h).unwrap();
            let f = normal_fan(&p).unwrap();
            prop_assert_eq!(f.is_complete(), p.is_compact());
            let rays = f.rays().to_vec();
            let cones = f.cones().to_vec();
            let g = Fan::new(2, rays, cones).unwrap();
            prop_assert_eq!(g.is_complete(), p.is_compact());
        }

        #[test]
        fn compact_nonsingular_support_is_strictly_convex(a in 1i64..4, b in 1i64..4) {
            let p = poly(&[&[0, 0], &[a, 0], &[0, b], &[a, b]]);
            prop_assert!(p.is_nonsingular());
            prop_assert_eq!(p.support_function().unwrap().classify().unwrap(), Convexity::StrictlyConvex);
        }

        #[test]
        fn lattice_equivalence_is_reflexive_and_symmetric(pts in point_set(), m in 0usize..4, tx in -3i64..3) {
            let ps: Vec<Point> = pts.iter().map(|v| Point::from_i64(v)).collect();
            let p = LatticePolytope::from_vertices(&ps).unwrap();
            let mats = [[[1i64, 0], [0, 1]], [[1, 1], [0, 1]], [[0, 1], [1, 0]], [[2, 1], [1, 1]]];
            let mat: IntMatrix = mats[m].iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let map = LatticeMap { matrix: mat, translation: Point::from_i64(&[tx, 1]) };
            let q = p.image(&map).unwrap();
            prop_assert!(lattice_equivalent(&p, &p).is_some());
            let fwd = lattice_equivalent(&p, &q);
            prop_assert!(fwd.is_some());
            prop_assert!(lattice_equivalent(&q, &p).is_some());
            prop_assert_eq!(p.image(&fwd.unwrap()).unwrap(), q);
        }
    }
}
