//! Partitions of a polyhedron into simple subpolyhedra, the semi-stability
//! count condition, weight vectors at partition vertices, and the dual
//! simplicial complex.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactmath::{
    clear_denominators, integer_kernel, primitive, rank, rat_from_int, rational_determinant, solve_system,
    AffineLattice, IntMatrix, LatticeVector, Point, Rational,
};
use crate::polytope::{lattice_equivalences, Halfspace, LatticeMap, LatticePolytope, PolytopeError, PolytopeKey};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("partition has no pieces")]
    NoPieces,
    #[error("piece {piece} lives in rank {got}, ambient rank is {expected}")]
    RankMismatch { piece: usize, expected: usize, got: usize },
    #[error("piece {piece} is not full-dimensional (dimension {dim})")]
    NotFullDimensional { piece: usize, dim: usize },
    #[error("piece {piece} is not contained in the polytope: {witness}")]
    NotContained { piece: usize, witness: String },
    #[error("{} is not simplicial at vertex {vertex}", piece.map_or("the ambient polytope".to_string(), |p| format!("piece {p}")))]
    NotSimplicial { piece: Option<usize>, vertex: Point },
    #[error("interior overlap between pieces {a} and {b} at {witness}")]
    InteriorOverlap { a: usize, b: usize, witness: Point },
    #[error("pieces leave a gap{}: normalized volume deficit {deficit}", witness.as_ref().map_or(String::new(), |w| format!(" at {w}")))]
    Gap { witness: Option<Point>, deficit: Rational },
    #[error("fan rays must span a polytope with the origin in its interior")]
    IncompleteFan,
    #[error("hyperplane offsets must be strictly increasing")]
    OffsetsNotIncreasing,
    #[error("{0} is not a vertex of the partition")]
    NotAVertex(Point),
    #[error("not semi-stable at {0}")]
    NotSemistableAt(Point),
    #[error("partition is not semi-stable: {0}")]
    NotSemistable(SemistabilityWitness),
    #[error("face {0} is not a proper face of the polytope")]
    NotAProperFace(usize),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// A face of the partition violating the count condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemistabilityWitness {
    pub face: usize,
    pub face_dim: usize,
    pub face_vertices: Vec<Point>,
    pub ambient_face_dim: usize,
    pub count: usize,
    pub expected: usize,
}

impl fmt::Display for SemistabilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-face [{}] in a {}-face of the polytope lies on {} pieces, expected {}",
            self.face_dim,
            self.face_vertices.iter().join(", "),
            self.ambient_face_dim,
            self.count,
            self.expected
        )
    }
}

/// A face of some piece, shared by the listed pieces.
#[derive(Clone, Debug)]
pub struct GammaFace {
    pub polytope: LatticePolytope,
    pub pieces: Vec<usize>,
    /// Index into the ambient polytope's `faces()`.
    pub ambient_face: usize,
    pub ambient_dim: usize,
}

impl GammaFace {
    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn is_interior(&self, n: usize) -> bool {
        self.ambient_dim == n
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub vertex: Point,
    /// `w_0` first, the rest ascending.
    pub weights: Vec<BigInt>,
    /// Primitive edge directions aligned with `weights`.
    pub edges: Vec<LatticeVector>,
}

impl WeightVector {
    pub fn is_balanced(&self) -> bool {
        self.weights.iter().all(One::is_one)
    }

    pub fn weight_of(&self, edge: &LatticeVector) -> Option<&BigInt> {
        self.edges.iter().position(|e| e == edge).map(|i| &self.weights[i])
    }
}

/// The simplicial complex with one vertex per piece and a simplex for each
/// interior face, recording the pieces that contain it; closed under subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualComplex {
    pub vertex_count: usize,
    pub simplices: BTreeSet<Vec<usize>>,
}

impl DualComplex {
    pub fn from_generators(vertex_count: usize, generators: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut simplices = BTreeSet::new();
        for mut g in generators {
            g.sort_unstable();
            g.dedup();
            for k in 1..=g.len() {
                for sub in g.iter().copied().combinations(k) {
                    simplices.insert(sub);
                }
            }
        }
        DualComplex { vertex_count, simplices }
    }

    /// Boundary of the simplex on `0..=n`.
    pub fn simplex_boundary(n: usize) -> Self {
        Self::from_generators(n + 1, (0..=n).combinations(n))
    }

    pub fn full_simplex(n: usize) -> Self {
        Self::from_generators(n + 1, [(0..=n).collect()])
    }

    pub fn dim(&self) -> usize {
        self.simplices.iter().map(|s| s.len() - 1).max().unwrap_or(0)
    }

    pub fn simplices_of_dim(&self, d: usize) -> impl Iterator<Item = &Vec<usize>> {
        self.simplices.iter().filter(move |s| s.len() == d + 1)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.simplices_of_dim(1).map(|s| (s[0], s[1])).collect()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        let mut s = simplex.to_vec();
        s.sort_unstable();
        self.simplices.contains(&s)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (a, b) in self.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().map(|s| if s.len() % 2 == 1 { 1 } else { -1 }).sum()
    }

    /// Equal up to relabelling the vertices.
    pub fn is_isomorphic(&self, other: &DualComplex) -> bool {
        if self.vertex_count != other.vertex_count || self.simplices.len() != other.simplices.len() {
            return false;
        }
        (0..self.vertex_count).permutations(self.vertex_count).any(|perm| {
            self.simplices.iter().all(|s| {
                let mut t: Vec<usize> = s.iter().map(|&v| perm[v]).collect();
                t.sort_unstable();
                other.simplices.contains(&t)
            })
        })
    }
}

/// Cached results of the semi-stability hierarchy. `None` means unknown
/// (the partition was not semi-stable, so the finer flags are undefined).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub semistable: bool,
    pub simplicial: bool,
    pub witness: Option<SemistabilityWitness>,
    pub balanced: Option<bool>,
    pub nonsingular: Option<bool>,
    pub mildly_singular: Option<bool>,
    pub weights: Vec<WeightVector>,
    pub maximal_vertices: Vec<Point>,
    pub singular_vertices: Vec<Point>,
    pub dual_dim: usize,
}

#[derive(Clone, Debug)]
pub struct Partition {
    ambient: LatticePolytope,
    pieces: Vec<LatticePolytope>,
    faces: Vec<GammaFace>,
    vertex_index: HashMap<Point, usize>,
    classification: OnceLock<Classification>,
}

impl Partition {
    /// Validates that `pieces` tile `ambient` and builds the face poset.
    pub fn new(ambient: LatticePolytope, pieces: Vec<LatticePolytope>) -> Result<Self, PartitionError> {
        Self::build(ambient, pieces, true)
    }

    /// As `new`, but pieces that are not simple polytopes are accepted and
    /// reported through `is_simplicial` instead of rejected.
    pub fn new_lenient(ambient: LatticePolytope, pieces: Vec<LatticePolytope>) -> Result<Self, PartitionError> {
        Self::build(ambient, pieces, false)
    }

    fn build(ambient: LatticePolytope, pieces: Vec<LatticePolytope>, strict: bool) -> Result<Self, PartitionError> {
        if pieces.is_empty() {
            return Err(PartitionError::NoPieces);
        }
        let n = ambient.rank();
        for (i, p) in pieces.iter().enumerate() {
            if p.rank() != n {
                return Err(PartitionError::RankMismatch { piece: i, expected: n, got: p.rank() });
            }
        }
        if !ambient.is_full_dimensional() {
            return Err(PolytopeError::NotFullDimensional { dim: ambient.dim(), rank: n }.into());
        }
        for (i, p) in pieces.iter().enumerate() {
            if !p.is_full_dimensional() {
                return Err(PartitionError::NotFullDimensional { piece: i, dim: p.dim() });
            }
        }
        for (i, p) in pieces.iter().enumerate() {
            check_contained(&ambient, p, i)?;
        }
        if let Some(v) = ambient.non_simple_vertex() {
            return Err(PartitionError::NotSimplicial { piece: None, vertex: ambient.vertices()[v].clone() });
        }
        if strict {
            if let Some((i, vertex)) = first_non_simple(&pieces) {
                return Err(PartitionError::NotSimplicial { piece: Some(i), vertex });
            }
        }
        for (a, b) in (0..pieces.len()).tuple_combinations() {
            if let Some(witness) = interior_overlap(&pieces[a], &pieces[b]) {
                return Err(PartitionError::InteriorOverlap { a, b, witness });
            }
        }
        check_coverage(&ambient, &pieces)?;
        Ok(Self::assemble(ambient, pieces))
    }

    /// Whether every piece is a simple polytope.
    pub fn is_simplicial(&self) -> bool {
        self.non_simple_vertex().is_none()
    }

    /// A piece and a vertex of it with more than `n` edges.
    pub fn non_simple_vertex(&self) -> Option<(usize, Point)> {
        first_non_simple(&self.pieces)
    }

    fn assemble(ambient: LatticePolytope, pieces: Vec<LatticePolytope>) -> Self {
        let mut by_key: BTreeMap<PolytopeKey, (LatticePolytope, Vec<usize>)> = BTreeMap::new();
        for (i, p) in pieces.iter().enumerate() {
            for f in p.faces() {
                let fp = p.face_polytope(f);
                if fp.dim() == 0 && ambient.vertex_index(&fp.anchors()[0]).is_some() {
                    continue;
                }
                by_key.entry(fp.key()).or_insert_with(|| (fp, Vec::new())).1.push(i);
            }
        }
        let mut faces: Vec<GammaFace> = by_key
            .into_values()
            .map(|(polytope, pieces)| {
                let mut dirs = polytope.rays().to_vec();
                dirs.extend(polytope.lineality().iter().cloned());
                let ambient_face = ambient.smallest_face_containing(polytope.anchors(), &dirs);
                let ambient_dim = ambient.faces()[ambient_face].dim;
                GammaFace { polytope, pieces, ambient_face, ambient_dim }
            })
            .collect();
        faces.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.polytope.key().cmp(&b.polytope.key())));
        let vertex_index = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.dim() == 0)
            .map(|(i, f)| (f.polytope.anchors()[0].clone(), i))
            .collect();
        Partition { ambient, pieces, faces, vertex_index, classification: OnceLock::new() }
    }

    /// The partition with a single piece.
    pub fn trivial(ambient: LatticePolytope) -> Result<Self, PartitionError> {
        let piece = ambient.clone();
        Self::new(ambient, vec![piece])
    }

    /// Pieces given as vertex lists.
    pub fn from_pieces(ambient: LatticePolytope, pieces: &[Vec<LatticeVector>]) -> Result<Self, PartitionError> {
        let ps = pieces.iter().map(|vs| LatticePolytope::from_lattice_points(vs)).collect::<Result<Vec<_>, _>>()?;
        Self::new(ambient, ps)
    }

    /// Pieces `Δ ∩ σ` for the maximal cones `σ` of the complete fan whose
    /// cones are spanned by the faces of `conv(rays)`.
    pub fn from_fan_rays(ambient: LatticePolytope, rays: &[LatticeVector]) -> Result<Self, PartitionError> {
        let pieces = Self::fan_pieces(&ambient, rays)?;
        Self::new(ambient, pieces)
    }

    /// The pieces `from_fan_rays` would use, unvalidated.
    pub fn fan_pieces(
        ambient: &LatticePolytope,
        rays: &[LatticeVector],
    ) -> Result<Vec<LatticePolytope>, PartitionError> {
        let n = ambient.rank();
        let prim: Vec<LatticeVector> =
            rays.iter().map(|r| primitive(r).map_err(|_| PolytopeError::ZeroNormal)).collect::<Result<_, _>>()?;
        if prim.iter().any(|r| r.rank() != n) {
            return Err(PartitionError::IncompleteFan);
        }
        let pts: Vec<Point> = prim.iter().map(LatticeVector::to_point).collect();
        let hull = LatticePolytope::from_vertices(&pts)?;
        if !hull.is_full_dimensional() || !hull.relative_interior_contains(&Point::origin(n)) {
            return Err(PartitionError::IncompleteFan);
        }
        let mut cones: Vec<Vec<usize>> =
            hull.facets().iter().map(|h| (0..prim.len()).filter(|&i| h.value(&pts[i]).is_zero()).collect()).collect();
        cones.sort();
        let mut pieces = Vec::new();
        for cone in cones {
            let gens: Vec<LatticeVector> = cone.iter().map(|&i| prim[i].clone()).collect();
            let c = LatticePolytope::from_generators(&[Point::origin(n)], &gens, &[])?;
            pieces.push(ambient.intersect(c.facets(), c.equations())?);
        }
        Ok(pieces)
    }

    /// Pieces cut out by the parallel hyperplanes `⟨x, m⟩ = c_1 < … < c_l`.
    pub fn from_hyperplanes(
        ambient: LatticePolytope,
        normal: &LatticeVector,
        offsets: &[BigInt],
    ) -> Result<Self, PartitionError> {
        if offsets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PartitionError::OffsetsNotIncreasing);
        }
        let mut pieces = Vec::new();
        for i in 0..=offsets.len() {
            let mut hs = Vec::new();
            if i > 0 {
                hs.push(Halfspace::new(normal.clone(), -rat_from_int(&offsets[i - 1])));
            }
            if i < offsets.len() {
                hs.push(Halfspace::new(normal.negated(), rat_from_int(&offsets[i])));
            }
            let piece = ambient.intersect(&hs, &[]).map_err(|e| match e {
                PolytopeError::EmptyPolyhedron => PartitionError::NotFullDimensional { piece: i, dim: 0 },
                e => e.into(),
            })?;
            if !piece.is_full_dimensional() {
                return Err(PartitionError::NotFullDimensional { piece: i, dim: piece.dim() });
            }
            pieces.push(piece);
        }
        Self::new(ambient, pieces)
    }

    pub fn ambient(&self) -> &LatticePolytope {
        &self.ambient
    }

    pub fn pieces(&self) -> &[LatticePolytope] {
        &self.pieces
    }

    pub fn rank(&self) -> usize {
        self.ambient.rank()
    }

    pub fn faces(&self) -> &[GammaFace] {
        &self.faces
    }

    pub fn faces_of_dim(&self, d: usize) -> impl Iterator<Item = (usize, &GammaFace)> {
        self.faces.iter().enumerate().filter(move |(_, f)| f.dim() == d)
    }

    /// Vertices of the partition (vertices of the ambient polytope excluded).
    pub fn vertices(&self) -> Vec<Point> {
        self.faces_of_dim(0).map(|(_, f)| f.polytope.anchors()[0].clone()).collect()
    }

    pub fn vertex_face(&self, p: &Point) -> Option<&GammaFace> {
        self.vertex_index.get(p).map(|&i| &self.faces[i])
    }

    /// Index of the face equal to the given polyhedron.
    pub fn face_index(&self, key: &PolytopeKey) -> Option<usize> {
        self.faces.iter().position(|f| &f.polytope.key() == key)
    }

    /// Interior walls `(i, j, face)` with `i < j`.
    pub fn walls(&self) -> Vec<(usize, usize, usize)> {
        let n = self.rank();
        if n == 0 {
            return Vec::new();
        }
        let mut out: Vec<(usize, usize, usize)> = self
            .faces_of_dim(n - 1)
            .filter(|(_, f)| f.pieces.len() == 2 && f.is_interior(n))
            .map(|(i, f)| (f.pieces[0], f.pieces[1], i))
            .collect();
        out.sort();
        out
    }

    /// The face-count condition: each `l`-face inside a `k`-face of the
    /// ambient polytope lies on exactly `k − l + 1` pieces.
    pub fn semistability_witness(&self) -> Option<SemistabilityWitness> {
        self.faces.iter().enumerate().find_map(|(i, f)| {
            let expected = f.ambient_dim + 1 - f.dim();
            (f.pieces.len() != expected || f.ambient_dim < f.dim()).then(|| SemistabilityWitness {
                face: i,
                face_dim: f.dim(),
                face_vertices: f.polytope.anchors().to_vec(),
                ambient_face_dim: f.ambient_dim,
                count: f.pieces.len(),
                expected,
            })
        })
    }

    pub fn is_semistable(&self) -> bool {
        self.semistability_witness().is_none()
    }

    /// Primitive directions of the partition edges at a vertex, restricted to
    /// the smallest face of the ambient polytope containing it.
    pub fn edges_at(&self, p: &Point) -> Result<Vec<LatticeVector>, PartitionError> {
        Ok(self.edge_faces_at(p)?.into_iter().map(|(d, _)| d).collect())
    }

    /// As `edges_at`, paired with the index of the edge face.
    pub fn edge_faces_at(&self, p: &Point) -> Result<Vec<(LatticeVector, usize)>, PartitionError> {
        let vf = self.vertex_face(p).ok_or_else(|| PartitionError::NotAVertex(p.clone()))?;
        let tau = vf.ambient_face;
        let mut out = Vec::new();
        for (i, f) in self.faces_of_dim(1) {
            if f.ambient_face != tau && !self.ambient_face_contains(tau, f.ambient_face) {
                continue;
            }
            if let Some(d) = edge_direction(&f.polytope, p) {
                out.push((d, i));
            }
        }
        out.sort();
        Ok(out)
    }

    /// All partition edges at a vertex.
    pub fn all_edges_at(&self, p: &Point) -> Vec<LatticeVector> {
        let mut out: Vec<LatticeVector> =
            self.faces_of_dim(1).filter_map(|(_, f)| edge_direction(&f.polytope, p)).collect();
        out.sort();
        out
    }

    /// Whether ambient face `b` is contained in ambient face `a`.
    fn ambient_face_contains(&self, a: usize, b: usize) -> bool {
        let fa = &self.ambient.faces()[a];
        let fb = &self.ambient.faces()[b];
        fb.generators.is_subset(&fa.generators)
    }

    /// The positive primitive relation among the edge directions at `p`.
    pub fn weight_vector(&self, p: &Point) -> Result<WeightVector, PartitionError> {
        let mut edges = self.edges_at(p)?;
        let vf = self.vertex_face(p).expect("checked by edges_at");
        if edges.len() != vf.ambient_dim + 1 {
            return Err(PartitionError::NotSemistableAt(p.clone()));
        }
        let n = self.rank();
        let rows: IntMatrix = (0..n).map(|i| edges.iter().map(|e| e.0[i].clone()).collect()).collect();
        let ker = integer_kernel(&rows, edges.len());
        if ker.len() != 1 {
            return Err(PartitionError::NotSemistableAt(p.clone()));
        }
        let mut w = primitive(&ker[0]).expect("kernel vectors are nonzero").0;
        if w.iter().all(|x| !x.is_positive()) {
            w = w.into_iter().map(|x| -x).collect();
        }
        if w.iter().any(|x| !x.is_positive()) {
            return Err(PartitionError::NotSemistableAt(p.clone()));
        }
        // w_0 stays first (lexicographically first edge); the rest ascend
        let mut rest: Vec<(BigInt, LatticeVector)> = w[1..].iter().cloned().zip(edges.drain(1..)).collect();
        rest.sort();
        let mut weights = vec![w[0].clone()];
        weights.extend(rest.iter().map(|(x, _)| x.clone()));
        edges.extend(rest.into_iter().map(|(_, e)| e));
        Ok(WeightVector { vertex: p.clone(), weights, edges })
    }

    /// Nonsingular in every piece having `p` as a vertex.
    pub fn is_vertex_nonsingular(&self, p: &Point) -> bool {
        self.pieces.iter().all(|piece| match piece.vertex_index(p) {
            Some(v) => piece.is_vertex_nonsingular(v),
            None => true,
        })
    }

    /// Runs the full hierarchy once and caches it.
    pub fn classify(&self) -> &Classification {
        self.classification.get_or_init(|| self.compute_classification())
    }

    fn compute_classification(&self) -> Classification {
        let dual_dim = self.dual_complex().dim();
        let witness = self.semistability_witness();
        if witness.is_some() {
            return Classification {
                semistable: false,
                simplicial: self.is_simplicial(),
                witness,
                balanced: None,
                nonsingular: None,
                mildly_singular: None,
                weights: Vec::new(),
                maximal_vertices: Vec::new(),
                singular_vertices: Vec::new(),
                dual_dim,
            };
        }
        let vertices = self.vertices();
        let mut weights = Vec::new();
        let mut balanced = true;
        for p in &vertices {
            match self.weight_vector(p) {
                Ok(w) => {
                    balanced &= w.is_balanced();
                    weights.push(w);
                }
                Err(_) => balanced = false,
            }
        }
        let singular_vertices: Vec<Point> =
            vertices.iter().filter(|p| !self.is_vertex_nonsingular(p)).cloned().collect();
        let maximal_vertices = self.maximal_vertices_for(dual_dim);
        let maximal_ok = maximal_vertices.iter().all(|p| !singular_vertices.contains(p));
        let simplicial = self.is_simplicial();
        Classification {
            semistable: true,
            simplicial,
            witness: None,
            balanced: Some(balanced),
            nonsingular: Some(simplicial && balanced && singular_vertices.is_empty()),
            mildly_singular: Some(balanced && maximal_ok),
            weights,
            maximal_vertices,
            singular_vertices,
            dual_dim,
        }
    }

    fn maximal_vertices_for(&self, dual_dim: usize) -> Vec<Point> {
        self.faces_of_dim(0)
            .filter(|(_, f)| f.ambient_dim == dual_dim)
            .map(|(_, f)| f.polytope.anchors()[0].clone())
            .collect()
    }

    /// Vertices lying in the relative interior of a face of the ambient
    /// polytope of dimension `dim K_Γ`.
    pub fn maximal_vertices(&self) -> Vec<Point> {
        self.maximal_vertices_for(self.dual_complex().dim())
    }

    pub fn is_balanced(&self) -> bool {
        self.classify().balanced == Some(true)
    }

    pub fn is_nonsingular(&self) -> bool {
        self.classify().nonsingular == Some(true)
    }

    pub fn is_mildly_singular(&self) -> bool {
        self.classify().mildly_singular == Some(true)
    }

    /// `K_Γ`: a simplex for each face in the interior of the ambient polytope.
    pub fn dual_complex(&self) -> DualComplex {
        let n = self.rank();
        DualComplex::from_generators(
            self.pieces.len(),
            self.faces.iter().filter(|f| f.is_interior(n)).map(|f| f.pieces.clone()),
        )
    }

    /// Dual complex of the central fibre of a generic member of the linear
    /// system: interior faces of positive dimension only (a generic section
    /// misses the torus-fixed points).
    pub fn hypersurface_dual_complex(&self) -> DualComplex {
        let n = self.rank();
        DualComplex::from_generators(
            self.pieces.len(),
            self.faces.iter().filter(|f| f.is_interior(n) && f.dim() >= 1).map(|f| f.pieces.clone()),
        )
    }

    /// The partition `{Δ_j ∩ τ}` of a proper face `τ` (index into the ambient
    /// `faces()`), written in the intrinsic lattice coordinates of `τ`.
    /// Returns the chart used for the coordinates as well.
    pub fn restrict(&self, face: usize) -> Result<(Partition, AffineLattice), PartitionError> {
        let af = self.ambient.faces().get(face).ok_or(PartitionError::NotAProperFace(face))?;
        if face == 0 || af.dim == self.rank() {
            return Err(PartitionError::NotAProperFace(face));
        }
        let tau = self.ambient.face_polytope(af);
        let chart = tau.affine_lattice();
        let to_chart = |p: &LatticePolytope| -> Result<LatticePolytope, PolytopeError> {
            let pts: Vec<Point> = p.anchors().iter().map(|v| chart.coords(v)).collect();
            let rays: Vec<LatticeVector> = p.rays().iter().map(|r| chart.direction_coords(r)).collect();
            let lin: Vec<LatticeVector> = p.lineality().iter().map(|r| chart.direction_coords(r)).collect();
            LatticePolytope::from_generators(&pts, &rays, &lin)
        };
        let ambient = to_chart(&tau)?;
        let mut pieces = Vec::new();
        for p in &self.pieces {
            let cut = match p.intersect(&[], tau.equations()) {
                Ok(c) => c,
                Err(PolytopeError::EmptyPolyhedron) => continue,
                Err(e) => return Err(e.into()),
            };
            if cut.dim() == tau.dim() {
                pieces.push(to_chart(&cut)?);
            }
        }
        Ok((Partition::new(ambient, pieces)?, chart))
    }

    /// A lattice isomorphism of the ambient polytopes carrying the set of
    /// pieces onto the other set of pieces.
    pub fn equivalence_to(&self, other: &Partition) -> Option<LatticeMap> {
        if self.pieces.len() != other.pieces.len() {
            return None;
        }
        let targets: BTreeSet<PolytopeKey> = other.pieces.iter().map(LatticePolytope::key).collect();
        lattice_equivalences(&self.ambient, &other.ambient).into_iter().find(|m| {
            self.pieces
                .iter()
                .map(|p| p.image(m).map(|q| q.key()))
                .collect::<Result<BTreeSet<_>, _>>()
                .is_ok_and(|imgs| imgs == targets)
        })
    }
}

/// Primitive direction of edge `e` leaving `p`, if `p` is one of its endpoints.
fn edge_direction(e: &LatticePolytope, p: &Point) -> Option<LatticeVector> {
    let vs = e.anchors();
    match (vs.len(), e.rays().len()) {
        (2, 0) => {
            let other = if &vs[0] == p {
                &vs[1]
            } else if &vs[1] == p {
                &vs[0]
            } else {
                return None;
            };
            primitive(&LatticeVector(clear_denominators(&other.sub(p)))).ok()
        }
        (1, 1) if &vs[0] == p => Some(e.rays()[0].clone()),
        _ => None,
    }
}

fn first_non_simple(pieces: &[LatticePolytope]) -> Option<(usize, Point)> {
    pieces.iter().enumerate().find_map(|(i, p)| p.non_simple_vertex().map(|v| (i, p.vertices()[v].clone())))
}

fn check_contained(ambient: &LatticePolytope, piece: &LatticePolytope, i: usize) -> Result<(), PartitionError> {
    for v in piece.anchors() {
        if !ambient.contains(v) {
            return Err(PartitionError::NotContained { piece: i, witness: format!("vertex {v}") });
        }
    }
    for r in piece
        .rays()
        .iter()
        .chain(piece.lineality())
        .chain(piece.lineality().iter().map(LatticeVector::negated).collect::<Vec<_>>().iter())
    {
        if ambient.facets().iter().any(|h| h.slope(r).is_negative())
            || ambient.equations().iter().any(|h| !h.slope(r).is_zero())
        {
            return Err(PartitionError::NotContained { piece: i, witness: format!("direction {r}") });
        }
    }
    Ok(())
}

/// A point interior to both pieces, if their interiors meet.
fn interior_overlap(a: &LatticePolytope, b: &LatticePolytope) -> Option<Point> {
    let separates = |h: &Halfspace, other: &LatticePolytope| {
        other.anchors().iter().all(|v| !h.value(v).is_positive())
            && other.rays().iter().all(|r| !h.slope(r).is_positive())
            && other.lineality().iter().all(|r| h.slope(r).is_zero())
    };
    if a.facets().iter().any(|h| separates(h, b)) || b.facets().iter().any(|h| separates(h, a)) {
        return None;
    }
    let both = a.intersect(b.facets(), b.equations()).ok()?;
    both.is_full_dimensional().then(|| both.interior_point())
}

/// `n!·vol` of a compact full-dimensional polytope, by pulling triangulation
/// over the face lattice.
pub fn normalized_volume(p: &LatticePolytope) -> Rational {
    assert!(p.is_compact(), "volume of an unbounded polyhedron");
    let n = p.rank();
    if p.dim() < n {
        return Rational::zero();
    }
    let mut total = Rational::zero();
    for simplex in pulling_triangulation(p, 0) {
        let v0 = &p.anchors()[simplex[0]];
        let rows: Vec<Vec<Rational>> = simplex[1..].iter().map(|&i| p.anchors()[i].sub(v0)).collect();
        total += rational_determinant(&rows).abs();
    }
    total
}

fn pulling_triangulation(p: &LatticePolytope, face: usize) -> Vec<Vec<usize>> {
    let f = &p.faces()[face];
    let verts = p.face_vertices(f);
    if f.dim == 0 {
        return vec![vec![verts[0]]];
    }
    let apex = verts[0];
    let mut out = Vec::new();
    for (gi, g) in p.faces().iter().enumerate() {
        if g.dim + 1 == f.dim && g.generators.is_subset(&f.generators) && !g.generators.contains(apex) {
            for mut s in pulling_triangulation(p, gi) {
                s.insert(0, apex);
                out.push(s);
            }
        }
    }
    out
}

/// Exact coverage: compares volumes inside a box meeting every cell of the
/// facet-hyperplane arrangement.
fn check_coverage(ambient: &LatticePolytope, pieces: &[LatticePolytope]) -> Result<(), PartitionError> {
    let n = ambient.rank();
    let (amb, clipped): (LatticePolytope, Vec<LatticePolytope>) = if ambient.is_compact() {
        (ambient.clone(), pieces.to_vec())
    } else {
        let bx = bounding_box(ambient, pieces);
        let clip = |p: &LatticePolytope| p.intersect(&bx, &[]);
        let mut cl = Vec::new();
        for p in pieces {
            cl.push(clip(p)?);
        }
        (clip(ambient)?, cl)
    };
    let whole = normalized_volume(&amb);
    let sum: Rational = clipped.iter().map(normalized_volume).fold(Rational::zero(), |a, b| a + b);
    if sum == whole {
        return Ok(());
    }
    let deficit = &whole - &sum;
    // look just outside each piece facet for an uncovered point
    let eps = Rational::new(BigInt::one(), BigInt::from(1000));
    let mut witness = None;
    'search: for p in &clipped {
        for f in p.faces().iter().filter(|f| f.dim + 1 == n) {
            let fp = p.face_polytope(f);
            let c = fp.interior_point();
            let fi = f.facets.ones().next().expect("facet face has a tight facet");
            let normal = &p.facets()[fi].normal;
            let q = Point(c.0.iter().zip(&normal.0).map(|(x, d)| x - &eps * rat_from_int(d)).collect());
            if amb.contains(&q) && !clipped.iter().any(|r| r.contains(&q)) {
                witness = Some(q);
                break 'search;
            }
        }
    }
    Err(PartitionError::Gap { witness, deficit })
}

/// Halfspaces of a box containing every vertex and a point on every
/// maximal-rank flat of the arrangement, enlarged by one.
fn bounding_box(ambient: &LatticePolytope, pieces: &[LatticePolytope]) -> Vec<Halfspace> {
    let n = ambient.rank();
    let mut planes: BTreeSet<Halfspace> = BTreeSet::new();
    for p in std::iter::once(ambient).chain(pieces) {
        for h in p.facets() {
            let canon = if h.normal.0.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
                Halfspace::new(h.normal.negated(), -h.offset.clone())
            } else {
                h.clone()
            };
            planes.insert(canon);
        }
    }
    let planes: Vec<Halfspace> = planes.into_iter().collect();
    let normals: IntMatrix = planes.iter().map(|h| h.normal.0.clone()).collect();
    let r = rank(&normals);
    let mut points: Vec<Point> = Vec::new();
    for p in std::iter::once(ambient).chain(pieces) {
        points.extend(p.anchors().iter().cloned());
    }
    for combo in (0..planes.len()).combinations(r) {
        let rows: IntMatrix = combo.iter().map(|&i| planes[i].normal.0.clone()).collect();
        if rank(&rows) < r {
            continue;
        }
        let mut sq = rows.clone();
        let mut rhs: Vec<Rational> = combo.iter().map(|&i| -planes[i].offset.clone()).collect();
        for i in 0..n {
            if sq.len() == n {
                break;
            }
            let mut trial = sq.clone();
            trial.push(LatticeVector::unit(n, i).0);
            if rank(&trial) > sq.len() {
                sq = trial;
                rhs.push(Rational::zero());
            }
        }
        if let Some(x) = solve_system(&sq, &rhs) {
            points.push(Point(x));
        }
    }
    let mut hs = Vec::new();
    for i in 0..n {
        let lo = points.iter().map(|p| p.0[i].floor()).min().unwrap_or_else(Rational::zero) - Rational::one();
        let hi = points.iter().map(|p| p.0[i].ceil()).max().unwrap_or_else(Rational::zero) + Rational::one();
        hs.push(Halfspace::new(LatticeVector::unit(n, i), -lo));
        hs.push(Halfspace::new(LatticeVector::unit(n, i).negated(), hi));
    }
    hs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::ri;
    use proptest::prelude::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c)
    }

    fn pt(c: &[i64]) -> Point {
        Point::from_i64(c)
    }

    fn poly(pts: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::from_i64_vertices(pts).unwrap()
    }

    fn triangle3() -> LatticePolytope {
        poly(&[&[0, 0], &[3, 0], &[0, 3]])
    }

    fn pieces(list: &[&[&[i64]]]) -> Vec<Vec<LatticeVector>> {
        list.iter().map(|p| p.iter().map(|v| lv(v)).collect()).collect()
    }

    pub(crate) fn simplex_dn(n: usize) -> LatticePolytope {
        let mut pts = vec![Point(vec![ri(-1); n])];
        for i in 0..n {
            let mut v = vec![ri(-1); n];
            v[i] = ri(n as i64);
            pts.push(Point(v));
        }
        LatticePolytope::from_vertices(&pts).unwrap()
    }

    pub(crate) fn sigma_rays(n: usize) -> Vec<LatticeVector> {
        let mut rays = vec![LatticeVector::unit(n, 0)];
        for i in 0..n {
            let mut v = LatticeVector::zero(n);
            if i + 1 < n {
                v.0[i + 1] = BigInt::one();
            }
            v.0[i] -= BigInt::one();
            rays.push(v);
        }
        rays
    }

    pub(crate) fn gamma_n(n: usize) -> Partition {
        Partition::from_fan_rays(simplex_dn(n), &sigma_rays(n)).unwrap()
    }

    fn gamma_d(d: i64, k: usize) -> Partition {
        let mut hs = vec![];
        for i in 0..3 {
            let mut e = vec![0; 3];
            e[i] = 1;
            hs.push(Halfspace::from_i64(&e, 0));
        }
        hs.push(Halfspace::from_i64(&[-1, -1, -1], d));
        let delta = LatticePolytope::from_halfspaces(3, &hs).unwrap();
        let m: Vec<i64> = (0..3).map(|i| if i < k { 1 } else { 0 }).collect();
        let offsets: Vec<BigInt> = (1..d).map(BigInt::from).collect();
        Partition::from_hyperplanes(delta, &lv(&m), &offsets).unwrap()
    }

    #[test]
    fn segment_cut_at_integers() {
        let seg = poly(&[&[0], &[4]]);
        let g = Partition::from_hyperplanes(seg, &lv(&[1]), &[1, 2, 3].map(BigInt::from)).unwrap();
        assert_eq!(g.pieces().len(), 4);
        assert!(g.is_semistable());
        assert!(g.is_nonsingular());
        assert_eq!(g.vertices().len(), 3);
    }

    #[test]
    fn overlapping_pieces_are_rejected() {
        let p = pieces(&[&[&[0, 0], &[3, 0], &[0, 3]], &[&[0, 0], &[1, 0], &[0, 1]]]);
        let err = Partition::from_pieces(triangle3(), &p).unwrap_err();
        assert!(matches!(err, PartitionError::InteriorOverlap { a: 0, b: 1, .. }), "{err}");
    }

    #[test]
    fn gaps_are_rejected_with_witness() {
        let p = pieces(&[&[&[0, 0], &[2, 0], &[0, 2]]]);
        let err = Partition::from_pieces(triangle3(), &p).unwrap_err();
        match err {
            PartitionError::Gap { witness, deficit } => {
                assert_eq!(deficit, ri(5));
                let w = witness.expect("witness");
                assert!(triangle3().contains(&w));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn non_simplicial_piece_is_rejected() {
        let sq = poly(&[&[-1, -1, -1], &[1, -1, -1], &[-1, 1, -1], &[1, 1, -1], &[0, 0, 1]]);
        let err = Partition::trivial(sq).unwrap_err();
        assert!(matches!(err, PartitionError::NotSimplicial { piece: None, .. }));
    }

    #[test]
    fn triptych() {
        let a = Partition::from_pieces(
            triangle3(),
            &pieces(&[&[&[0, 0], &[2, 0], &[0, 2]], &[&[2, 0], &[3, 0], &[0, 3], &[0, 2]]]),
        )
        .unwrap();
        assert!(a.is_semistable());
        let b = Partition::from_pieces(
            triangle3(),
            &pieces(&[
                &[&[0, 0], &[1, 0], &[1, 1], &[0, 2]],
                &[&[1, 0], &[3, 0], &[2, 1], &[1, 1]],
                &[&[1, 1], &[2, 1], &[0, 3], &[0, 2]],
            ]),
        )
        .unwrap();
        assert!(b.is_semistable());
        let c = Partition::from_pieces(
            triangle3(),
            &pieces(&[
                &[&[0, 0], &[1, 0], &[1, 1], &[0, 3]],
                &[&[0, 3], &[1, 1], &[1, 2]],
                &[&[1, 0], &[3, 0], &[1, 2]],
            ]),
        )
        .unwrap();
        let w = c.semistability_witness().unwrap();
        assert_eq!(w.face_vertices, vec![pt(&[1, 1])]);
        assert_eq!((w.count, w.expected), (2, 3));
    }

    #[test]
    fn weighted_projective_partition_has_non_simple_pieces() {
        let e0 = [-1i64; 4];
        let mut pts = vec![e0.to_vec()];
        for (i, k) in [(0usize, 8i64), (1, 4), (2, 4), (3, 4)] {
            let mut v = e0.to_vec();
            v[i] += k;
            pts.push(v);
        }
        let refs: Vec<&[i64]> = pts.iter().map(|v| v.as_slice()).collect();
        let delta = poly(&refs);
        let err = Partition::from_fan_rays(delta.clone(), &sigma_rays(4)).unwrap_err();
        assert!(matches!(err, PartitionError::NotSimplicial { piece: Some(_), .. }), "{err}");
        let g = Partition::new_lenient(delta.clone(), Partition::fan_pieces(&delta, &sigma_rays(4)).unwrap()).unwrap();
        let (_, v) = g.non_simple_vertex().unwrap();
        assert_eq!(g.vertex_face(&v).unwrap().ambient_dim, 1);
        // three pieces meet on an edge of Δ, one too many
        let w = g.semistability_witness().unwrap();
        assert_eq!(w.face_vertices, vec![pt(&[-1, -1, 2, 0])]);
        assert_eq!((w.ambient_face_dim, w.count, w.expected), (1, 3, 2));
        let c = g.classify();
        assert!(!c.semistable && !c.simplicial);
        assert_eq!(c.balanced, None);
        let origin = Point::origin(4);
        assert!(g.is_vertex_nonsingular(&origin));
        assert_eq!(g.weight_vector(&origin).unwrap().weights, vec![BigInt::one(); 5]);
    }

    #[test]
    fn trivial_partition_is_semistable() {
        let g = Partition::trivial(triangle3()).unwrap();
        assert!(g.is_semistable());
        assert!(g.vertices().is_empty());
        assert_eq!(g.dual_complex(), DualComplex::full_simplex(0));
    }

    #[test]
    fn gamma_n_pieces_and_weights() {
        for n in 2..=3 {
            let g = gamma_n(n);
            assert_eq!(g.pieces().len(), n + 1);
            assert!(g.is_semistable());
            assert!(g.is_nonsingular(), "n = {n}");
            let w = g.weight_vector(&Point::origin(n)).unwrap();
            assert_eq!(w.weights, vec![BigInt::one(); n + 1]);
        }
    }

    #[test]
    fn boundary_vertices_are_balanced() {
        let g = gamma_n(2);
        for p in g.vertices() {
            let vf = g.vertex_face(&p).unwrap();
            if vf.ambient_dim == 1 {
                assert_eq!(g.weight_vector(&p).unwrap().weights, vec![BigInt::one(), BigInt::one()]);
            }
        }
    }

    #[test]
    fn weight_vector_errors() {
        let g = gamma_n(2);
        assert_eq!(g.weight_vector(&pt(&[-1, -1])).unwrap_err(), PartitionError::NotAVertex(pt(&[-1, -1])));
    }

    #[test]
    fn dual_complexes() {
        let g = gamma_d(4, 1);
        let k = g.dual_complex();
        assert_eq!(k.simplices_of_dim(0).count(), 4);
        assert_eq!(k.edges(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(k.dim(), 1);
        let seg = poly(&[&[0], &[2]]);
        let one = Partition::from_hyperplanes(seg, &lv(&[1]), &[BigInt::one()]).unwrap();
        assert_eq!(one.dual_complex(), DualComplex::full_simplex(1));
        let g2 = gamma_n(2);
        assert_eq!(g2.dual_complex(), DualComplex::full_simplex(2));
        assert!(g2.hypersurface_dual_complex().is_isomorphic(&DualComplex::simplex_boundary(2)));
    }

    #[test]
    fn chain_partitions_classify() {
        for k in 1..=3 {
            let g = gamma_d(4, k);
            assert!(g.is_semistable(), "k = {k}");
            assert!(g.is_nonsingular(), "k = {k}");
            assert_eq!(g.dual_complex().dim(), 1);
        }
    }

    #[test]
    fn restriction_to_a_facet_of_gamma_3() {
        let g3 = gamma_n(3);
        let facet = g3.ambient().faces().iter().position(|f| f.dim == 2).unwrap();
        let (r, chart) = g3.restrict(facet).unwrap();
        assert_eq!(chart.dim(), 2);
        assert_eq!(r.pieces().len(), 3);
        assert!(r.is_nonsingular());
        let interior: Vec<_> = r.faces_of_dim(0).filter(|(_, f)| f.is_interior(2)).collect();
        assert_eq!(interior.len(), 1);
        // the facet is a dilated standard triangle, so the restriction is the
        // fan partition of that triangle about its interior vertex
        let centre = interior[0].1.polytope.anchors()[0].clone();
        let shifted: Vec<Point> = r.ambient().vertices().iter().map(|v| Point(v.sub(&centre))).collect();
        let fan = Partition::from_fan_rays(LatticePolytope::from_vertices(&shifted).unwrap(), &sigma_rays(2));
        let alt = [lv(&[1, 0]), lv(&[0, 1]), lv(&[-1, -1])];
        let fan2 = Partition::from_fan_rays(LatticePolytope::from_vertices(&shifted).unwrap(), &alt);
        let shifted_r = Partition::new(
            LatticePolytope::from_vertices(&shifted).unwrap(),
            r.pieces()
                .iter()
                .map(|p| {
                    LatticePolytope::from_vertices(
                        &p.vertices().iter().map(|v| Point(v.sub(&centre))).collect::<Vec<_>>(),
                    )
                    .unwrap()
                })
                .collect(),
        )
        .unwrap();
        assert!([fan, fan2].into_iter().flatten().any(|f| shifted_r.equivalence_to(&f).is_some()));
    }

    #[test]
    fn restriction_to_an_edge_is_integral() {
        let g = gamma_n(2);
        let edge = g.ambient().faces().iter().position(|f| f.dim == 1).unwrap();
        let (r, _) = g.restrict(edge).unwrap();
        assert_eq!(r.rank(), 1);
        assert!(r.is_semistable());
        assert!(r.vertices().iter().all(Point::is_integral));
    }

    #[test]
    fn restriction_of_chain_to_top_facet_is_trivial() {
        let g = gamma_d(4, 3);
        let top = g
            .ambient()
            .faces()
            .iter()
            .position(|f| f.dim == 2 && f.facets.ones().any(|i| g.ambient().facets()[i].normal == lv(&[-1, -1, -1])))
            .unwrap();
        let (r, _) = g.restrict(top).unwrap();
        assert_eq!(r.pieces().len(), 1);
    }

    #[test]
    fn whole_space_partitions() {
        let w = LatticePolytope::from_halfspaces(2, &[]).unwrap();
        let g = Partition::from_fan_rays(w.clone(), &sigma_rays(2)).unwrap();
        assert_eq!(g.pieces().len(), 3);
        assert!(g.is_nonsingular());
        assert_eq!(g.vertices(), vec![Point::origin(2)]);
        let line = LatticePolytope::from_halfspaces(1, &[]).unwrap();
        let g = Partition::from_hyperplanes(line, &lv(&[1]), &[0, 1, 2].map(BigInt::from)).unwrap();
        assert_eq!(g.pieces().len(), 4);
        assert!(g.is_nonsingular());
        assert!(Partition::trivial(w).unwrap().is_semistable());
    }

    #[test]
    fn unbounded_gap_is_detected() {
        let w = LatticePolytope::from_halfspaces(2, &[]).unwrap();
        let quad =
            LatticePolytope::from_halfspaces(2, &[Halfspace::from_i64(&[1, 0], 0), Halfspace::from_i64(&[0, 1], 0)])
                .unwrap();
        assert!(matches!(Partition::new(w, vec![quad]), Err(PartitionError::Gap { .. })));
    }

    #[test]
    fn bad_hyperplane_inputs() {
        let seg = poly(&[&[0], &[4]]);
        assert_eq!(
            Partition::from_hyperplanes(seg.clone(), &lv(&[1]), &[2, 1].map(BigInt::from)).unwrap_err(),
            PartitionError::OffsetsNotIncreasing
        );
        assert!(matches!(
            Partition::from_hyperplanes(seg, &lv(&[1]), &[4].map(BigInt::from)).unwrap_err(),
            PartitionError::NotFullDimensional { .. }
        ));
    }

    #[test]
    fn classification_is_idempotent() {
        let g = gamma_n(2);
        let a = g.classify().clone();
        let b = g.classify().clone();
        assert_eq!(a, b);
    }

    fn assert_structural_invariants(g: &Partition) {
        let n = g.rank();
        // intersections of l pieces have dimension n - l + 1
        for l in 2..=g.pieces().len().min(n + 1) {
            for combo in (0..g.pieces().len()).combinations(l) {
                let mut cur = g.pieces()[combo[0]].clone();
                let mut empty = false;
                for &j in &combo[1..] {
                    match cur.intersect(g.pieces()[j].facets(), g.pieces()[j].equations()) {
                        Ok(c) => cur = c,
                        Err(_) => {
                            empty = true;
                            break;
                        }
                    }
                }
                if !empty {
                    assert_eq!(cur.dim(), n + 1 - l, "pieces {combo:?}");
                }
            }
        }
        // n + 1 edges at interior vertices; edge sums vanish at nonsingular vertices
        for p in g.vertices() {
            let vf = g.vertex_face(&p).unwrap();
            if vf.ambient_dim == n {
                assert_eq!(g.all_edges_at(&p).len(), n + 1);
            }
            if g.is_vertex_nonsingular(&p) {
                let edges = g.edges_at(&p).unwrap();
                let sum = edges.iter().fold(LatticeVector::zero(n), |a, e| &a + e);
                assert!(sum.is_zero(), "edge sum at {p}");
            }
        }
        if g.is_nonsingular() {
            assert!(g.is_balanced());
        }
        // restriction preserves semi-stability
        for (fi, f) in g.ambient().faces().iter().enumerate() {
            if fi > 0 && f.dim >= 1 {
                let (r, _) = g.restrict(fi).unwrap();
                assert!(r.is_semistable());
            }
        }
    }

    #[test]
    fn structural_invariants_on_corpus() {
        assert_structural_invariants(&gamma_n(2));
        assert_structural_invariants(&gamma_n(3));
        assert_structural_invariants(&gamma_d(3, 1));
        assert_structural_invariants(&gamma_d(3, 2));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn random_segment_cuts_are_semistable(len in 2i64..9, mask in 0u32..256) {
            let cuts: Vec<BigInt> = (1..len).filter(|i| mask & (1 << i) != 0).map(BigInt::from).collect();
            let seg = LatticePolytope::from_i64_vertices(&[&[0], &[len]]).unwrap();
            let g = Partition::from_hyperplanes(seg, &lv(&[1]), &cuts).unwrap();
            prop_assert_eq!(g.pieces().len(), cuts.len() + 1);
            prop_assert!(g.is_semistable());
            prop_assert!(g.is_nonsingular());
        }

        #[test]
        fn random_rectangle_strips(w in 2i64..6, h in 1i64..4, cut in 1i64..5) {
            prop_assume!(cut < w);
            let r = LatticePolytope::from_i64_vertices(&[&[0, 0], &[w, 0], &[0, h], &[w, h]]).unwrap();
            let g = Partition::from_hyperplanes(r, &lv(&[1, 0]), &[BigInt::from(cut)]).unwrap();
            prop_assert!(g.is_semistable());
            prop_assert_eq!(g.walls().len(), 1);
            assert_structural_invariants(&g);
        }
    }
}
