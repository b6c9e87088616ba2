//! Lifting functions of a partition and the lifted polyhedron one dimension up.
//!
//! The extra coordinate `y` is always the last one: the lift of `Δ` lives in
//! `M_ℝ × ℝ` and is `{(x, y) | x ∈ Δ, y ≥ F(x)}`. "Concave" follows the
//! partition literature: `C(F, p) > 0`, which makes that region convex.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactmath::{
    clear_denominators, hermite_normal_form, primitive, rat_from_int, AffineFunction, LatticeVector, Point, Rational,
};
use crate::partition::{DualComplex, Partition, PartitionError};
use crate::polytope::{normal_fan, Convexity, Halfspace, LatticePolytope, PolytopeError, PolytopeKey, SupportFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftingError {
    #[error("partition not mildly singular: no nonsingular maximal vertex on the wall between pieces {0} and {1}")]
    NotMildlySingular(usize, usize),
    #[error("wall between pieces {0} and {1} has no usable base vertex")]
    NoBaseVertex(usize, usize),
    #[error("piecewise function is discontinuous across face {0}")]
    Discontinuous(usize),
    #[error("expected {expected} affine functions, got {got}")]
    PieceCountMismatch { expected: usize, got: usize },
    #[error("cocycle condition fails on pieces {0:?}")]
    NotACocycle([usize; 3]),
    #[error("cocycle integration failed between pieces {0} and {1}")]
    IntegrationFailed(usize, usize),
    #[error("dual complex is disconnected")]
    Disconnected,
    #[error("anchor piece {0} does not exist")]
    NoSuchPiece(usize),
    #[error("concavity undefined at vertices of the polytope ({0})")]
    ConcavityUndefined(Point),
    #[error("not a lifting function: concavity {concavity} at {vertex}")]
    NotALiftingFunction { vertex: Point, concavity: Rational },
    #[error("lifting function is not integral at {0}")]
    NotIntegral(Point),
    #[error("face {face} of the partition has {count} lifts, expected exactly one")]
    LiftCount { face: usize, count: usize },
    #[error("a face of the lifted polyhedron projects onto {0}, which is neither a face of the polytope nor of the partition")]
    BadProjection(String),
    #[error("lifted polyhedron has a non-integral vertex {0}")]
    NonIntegralVertex(Point),
    #[error("lifted polyhedron is singular at {0} although the partition is nonsingular with unit concavity")]
    ExpectedNonsingular(Point),
    #[error("hyperplanes are not parallel")]
    NotParallel,
    #[error("hyperplane offsets must be distinct")]
    RepeatedOffset,
    #[error("extension needs a compact lift by a single hyperplane")]
    NotSingleHyperplane,
    #[error("support function is not convex")]
    NotConvex,
    #[error("support function ray {0} is not a ray of the lifted fan")]
    ForeignRay(LatticeVector),
    #[error("no value below the cap keeps the extension convex")]
    ConvexityUnreachable,
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// A function on `Δ`, affine on each piece of a partition.
#[derive(Clone, Debug)]
pub struct PiecewiseAffine {
    partition: Arc<Partition>,
    per_piece: Vec<AffineFunction>,
}

impl PartialEq for PiecewiseAffine {
    fn eq(&self, other: &Self) -> bool {
        self.per_piece == other.per_piece
    }
}

/// Vertices plus one primitive step along each edge, when these lattice
/// points affinely generate `M`; then integrality on them is integrality on
/// all of `P ∩ M`, without enumerating it.
fn edge_step_points(piece: &LatticePolytope) -> Option<Vec<LatticeVector>> {
    let n = piece.rank();
    let vertices: Vec<LatticeVector> = piece.vertices().iter().map(Point::to_lattice).collect::<Option<_>>()?;
    let mut points = vertices.clone();
    let mut steps = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        for (d, _) in piece.edges_at(i) {
            let u = primitive(d).ok()?;
            points.push(v + &u);
            steps.push(u);
        }
    }
    let hnf = hermite_normal_form(&steps).ok()?;
    if hnf.rank != n {
        return None;
    }
    let index = hnf.basis.iter().fold(BigInt::one(), |acc, b| {
        let pivot = b.0.iter().find(|x| !x.is_zero()).cloned().unwrap_or_default();
        acc * pivot
    });
    index.abs().is_one().then_some(points)
}

impl PiecewiseAffine {
    /// Checks that the pieces agree on every shared face.
    pub fn new(partition: Arc<Partition>, per_piece: Vec<AffineFunction>) -> Result<Self, LiftingError> {
        let k = partition.pieces().len();
        if per_piece.len() != k {
            return Err(LiftingError::PieceCountMismatch { expected: k, got: per_piece.len() });
        }
        for (i, face) in partition.faces().iter().enumerate() {
            let first = &per_piece[face.pieces[0]];
            for &j in &face.pieces[1..] {
                let other = &per_piece[j];
                let same = face.polytope.anchors().iter().all(|p| first.eval(p) == other.eval(p))
                    && face
                        .polytope
                        .rays()
                        .iter()
                        .chain(face.polytope.lineality())
                        .all(|r| first.slope(r) == other.slope(r));
                if !same {
                    return Err(LiftingError::Discontinuous(i));
                }
            }
        }
        Ok(PiecewiseAffine { partition, per_piece })
    }

    pub fn zero(partition: Arc<Partition>) -> Self {
        let f = AffineFunction::zero(partition.rank());
        let per_piece = vec![f; partition.pieces().len()];
        PiecewiseAffine { partition, per_piece }
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn shared_partition(&self) -> Arc<Partition> {
        Arc::clone(&self.partition)
    }

    pub fn pieces(&self) -> &[AffineFunction] {
        &self.per_piece
    }

    pub fn piece(&self, i: usize) -> &AffineFunction {
        &self.per_piece[i]
    }

    /// Value at a point of `Δ`; `None` outside.
    pub fn eval(&self, x: &Point) -> Option<Rational> {
        let i = self.partition.pieces().iter().position(|p| p.contains(x))?;
        Some(self.per_piece[i].eval(x))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let per_piece = self.per_piece.iter().map(|f| f.scale(r)).collect();
        PiecewiseAffine { partition: Arc::clone(&self.partition), per_piece }
    }

    pub fn add_affine(&self, g: &AffineFunction) -> Self {
        let per_piece = self.per_piece.iter().map(|f| f + g).collect();
        PiecewiseAffine { partition: Arc::clone(&self.partition), per_piece }
    }

    /// `Some(g)` when `self − other` is the single affine function `g`.
    pub fn difference_if_affine(&self, other: &PiecewiseAffine) -> Option<AffineFunction> {
        let diffs: Vec<AffineFunction> = self.per_piece.iter().zip(&other.per_piece).map(|(a, b)| a - b).collect();
        diffs.windows(2).all(|w| w[0] == w[1]).then(|| diffs[0].clone())
    }

    /// `C(F, p)`: the sum of the increments of `F` along the primitive edge
    /// vectors at `p` (inside the smallest face of `Δ` containing `p`).
    pub fn concavity(&self, p: &Point) -> Result<Rational, LiftingError> {
        if self.partition.ambient().vertex_index(p).is_some() {
            return Err(LiftingError::ConcavityUndefined(p.clone()));
        }
        let edges = self.partition.edge_faces_at(p)?;
        let mut c = Rational::zero();
        for (d, e) in edges {
            let k = self.partition.faces()[e].pieces[0];
            c += self.per_piece[k].slope(&d);
        }
        Ok(c)
    }

    /// `C(F, p)` at every vertex of the partition.
    pub fn concavities(&self) -> Result<Vec<(Point, Rational)>, LiftingError> {
        self.partition.vertices().into_iter().map(|p| self.concavity(&p).map(|c| (p, c))).collect()
    }

    /// Values that must become integers under scaling: all values on lattice
    /// points of bounded pieces, and all coefficients on unbounded pieces
    /// (which contain unimodular simplices of every shape).
    fn integrality_witnesses(&self) -> Result<Vec<(Point, Rational)>, LiftingError> {
        let mut out = Vec::new();
        for (piece, f) in self.partition.pieces().iter().zip(&self.per_piece) {
            if piece.is_compact() {
                let points = match edge_step_points(piece) {
                    Some(points) => points,
                    None => piece.lattice_points()?,
                };
                for m in points {
                    let v = f.eval_lattice(&m);
                    out.push((m.to_point(), v));
                }
            } else {
                let at = piece.anchors()[0].clone();
                out.extend(f.coefficients().map(|c| (at.clone(), c.clone())));
            }
        }
        Ok(out)
    }

    /// Integer values on `Δ ∩ M`.
    pub fn is_integral(&self) -> Result<bool, LiftingError> {
        Ok(self.integrality_witnesses()?.iter().all(|(_, v)| v.is_integer()))
    }

    fn non_integral_point(&self) -> Result<Option<Point>, LiftingError> {
        Ok(self.integrality_witnesses()?.into_iter().find(|(_, v)| !v.is_integer()).map(|(p, _)| p))
    }

    /// The point `(x, F(x))`.
    pub fn lift_point(&self, x: &Point) -> Option<Point> {
        self.eval(x).map(|y| x.extended(y))
    }
}

impl fmt::Display for PiecewiseAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.per_piece.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{i}: {g}")?;
        }
        Ok(())
    }
}

/// The affine function of one wall, normalised at a base vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub pieces: (usize, usize),
    /// Index of the wall in the partition's faces.
    pub face: usize,
    pub base_vertex: Point,
    /// `f_ij`: zero on the wall, positive on piece `j`.
    pub function: AffineFunction,
}

/// `f_ij` for each wall, with `f_ji = −f_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WallCochain {
    walls: BTreeMap<(usize, usize), Wall>,
}

impl WallCochain {
    pub fn get(&self, i: usize, j: usize) -> Option<AffineFunction> {
        if i < j {
            self.walls.get(&(i, j)).map(|w| w.function.clone())
        } else {
            self.walls.get(&(j, i)).map(|w| -&w.function)
        }
    }

    pub fn walls(&self) -> impl Iterator<Item = &Wall> {
        self.walls.values()
    }

    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }

    /// Overrides `f_ij` (stored for `i < j`; reversed input is negated).
    pub fn set(&mut self, i: usize, j: usize, f: AffineFunction) {
        let (key, f) = if i < j { ((i, j), f) } else { ((j, i), -&f) };
        if let Some(w) = self.walls.get_mut(&key) {
            w.function = f;
        }
    }
}

/// Builds `f_ij` for every wall of a semi-stable partition.
pub fn wall_functions(partition: &Partition) -> Result<WallCochain, LiftingError> {
    let cls = partition.classify();
    if let Some(w) = &cls.witness {
        return Err(PartitionError::NotSemistable(w.clone()).into());
    }
    let need_maximal = cls.dual_dim > 1;
    let mut walls = BTreeMap::new();
    let vertices = partition.vertices();
    for (i, j, face) in partition.walls() {
        let wall = &partition.faces()[face].polytope;
        let on_wall: Vec<&Point> = vertices.iter().filter(|p| wall.vertex_index(p).is_some()).collect();
        let nonsingular: Vec<&Point> = on_wall.iter().copied().filter(|p| partition.is_vertex_nonsingular(p)).collect();
        let base = if need_maximal {
            nonsingular.iter().copied().filter(|p| cls.maximal_vertices.contains(p)).min()
        } else {
            nonsingular.iter().copied().min().or_else(|| on_wall.iter().copied().min())
        };
        let Some(p) = base else {
            return Err(if need_maximal {
                LiftingError::NotMildlySingular(i, j)
            } else {
                LiftingError::NoBaseVertex(i, j)
            });
        };
        let function = normalized_wall_function(partition, i, j, face, p)?;
        walls.insert((i, j), Wall { pieces: (i, j), face, base_vertex: p.clone(), function });
    }
    Ok(WallCochain { walls })
}

/// `f_ij,p`: vanishes on the wall, equals 1 at `p + w_0·τ_0` where `τ_0` is the
/// edge at `p` entering piece `j` off the wall.
fn normalized_wall_function(
    partition: &Partition,
    i: usize,
    j: usize,
    face: usize,
    p: &Point,
) -> Result<AffineFunction, LiftingError> {
    let wall = &partition.faces()[face].polytope;
    let h = partition.pieces()[i]
        .facets()
        .iter()
        .find(|h| {
            wall.anchors().iter().all(|v| h.value(v).is_zero())
                && wall.rays().iter().chain(wall.lineality()).all(|r| h.slope(r).is_zero())
        })
        .ok_or(LiftingError::NoBaseVertex(i, j))?;
    let into_j: Vec<LatticeVector> = partition
        .edge_faces_at(p)?
        .into_iter()
        .filter(|(d, e)| h.slope(d).is_negative() && partition.faces()[*e].pieces.contains(&j))
        .map(|(d, _)| d)
        .collect();
    let [tau0] = into_j.as_slice() else {
        return Err(LiftingError::NoBaseVertex(i, j));
    };
    let weights = partition.weight_vector(p)?;
    let w0 = weights.weight_of(tau0).ok_or(LiftingError::NoBaseVertex(i, j))?;
    let g = AffineFunction::new(h.normal.0.iter().map(rat_from_int).collect(), h.offset.clone());
    let at = rat_from_int(&(w0 * h.slope(tau0)));
    Ok(g.scale(&(Rational::one() / at)))
}

/// `f_ij + f_jk + f_ki = 0` on every 2-simplex; the failing triple otherwise.
pub fn check_cocycle(alpha: &WallCochain, complex: &DualComplex) -> Result<(), [usize; 3]> {
    for s in complex.simplices_of_dim(2) {
        let (i, j, k) = (s[0], s[1], s[2]);
        let sum = match (alpha.get(i, j), alpha.get(j, k), alpha.get(k, i)) {
            (Some(a), Some(b), Some(c)) => &(&a + &b) + &c,
            _ => return Err([i, j, k]),
        };
        if !sum.is_zero() {
            return Err([i, j, k]);
        }
    }
    Ok(())
}

/// Spanning-tree traversal used to integrate the cocycle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TreeOrder {
    #[default]
    BreadthFirst,
    DepthFirst,
}

/// Solves `f_j − f_i = f_ij` along a spanning tree of the dual complex with
/// `f_root = 0`, then checks every edge.
pub fn integrate_cocycle(
    alpha: &WallCochain,
    complex: &DualComplex,
    root: usize,
    order: TreeOrder,
) -> Result<Vec<AffineFunction>, LiftingError> {
    let k = complex.vertex_count;
    if root >= k {
        return Err(LiftingError::NoSuchPiece(root));
    }
    let rank = alpha.walls().next().map_or(0, |w| w.function.rank());
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for (a, b) in complex.edges() {
        if alpha.get(a, b).is_some() {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    }
    let mut f: Vec<Option<AffineFunction>> = vec![None; k];
    f[root] = Some(AffineFunction::zero(rank));
    let mut frontier: VecDeque<usize> = VecDeque::from([root]);
    while let Some(i) = match order {
        TreeOrder::BreadthFirst => frontier.pop_front(),
        TreeOrder::DepthFirst => frontier.pop_back(),
    } {
        let fi = f[i].clone().expect("visited");
        let next: Vec<usize> = adj[i].iter().copied().filter(|&j| f[j].is_none()).collect();
        for j in next {
            let fij = alpha.get(i, j).expect("adjacency built from walls");
            f[j] = Some(&fi + &fij);
            frontier.push_back(j);
        }
    }
    let f: Vec<AffineFunction> = f.into_iter().collect::<Option<_>>().ok_or(LiftingError::Disconnected)?;
    for (a, b) in complex.edges() {
        match alpha.get(a, b) {
            Some(fab) if &f[b] - &f[a] == fab => {}
            _ => return Err(LiftingError::IntegrationFailed(a, b)),
        }
    }
    Ok(f)
}

/// The rational lifting function, anchored to vanish on `anchor`.
pub fn lifting_function(
    partition: Arc<Partition>,
    anchor: usize,
    order: TreeOrder,
) -> Result<PiecewiseAffine, LiftingError> {
    let alpha = wall_functions(&partition)?;
    let complex = partition.dual_complex();
    check_cocycle(&alpha, &complex).map_err(LiftingError::NotACocycle)?;
    let rank = partition.rank();
    let per_piece = if partition.pieces().len() == 1 {
        if anchor != 0 {
            return Err(LiftingError::NoSuchPiece(anchor));
        }
        vec![AffineFunction::zero(rank)]
    } else {
        integrate_cocycle(&alpha, &complex, anchor, order)?
    };
    PiecewiseAffine::new(partition, per_piece)
}

/// `F' = R·F`, integral on `Δ ∩ M` with `R > 0` minimal.
#[derive(Clone, Debug)]
pub struct IntegralLifting {
    pub function: PiecewiseAffine,
    pub scale: Rational,
    pub concavities: Vec<(Point, Rational)>,
    /// The scaling was adjusted so that every concavity is 1.
    pub renormalized: bool,
    pub warning: Option<String>,
}

impl IntegralLifting {
    pub fn has_unit_concavity(&self) -> bool {
        self.concavities.iter().all(|(_, c)| c.is_one())
    }

    pub fn concavity_set(&self) -> BTreeSet<Rational> {
        self.concavities.iter().map(|(_, c)| c.clone()).collect()
    }
}

/// Smallest `r > 0` with `r·v ∈ ℤ` for every `v`: the least common multiple of
/// the rationals `den(v)/|num(v)|`.
pub fn minimal_integral_scale<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::zero();
    for v in values {
        if v.is_zero() {
            continue;
        }
        num = num.lcm(v.denom());
        den = den.gcd(&v.numer().abs());
    }
    if den.is_zero() {
        Rational::one()
    } else {
        Rational::new(num, den)
    }
}

pub fn minimal_integral_lifting(f: &PiecewiseAffine) -> Result<IntegralLifting, LiftingError> {
    let concavities = f.concavities()?;
    if let Some((p, c)) = concavities.iter().find(|(_, c)| !c.is_positive()) {
        return Err(LiftingError::NotALiftingFunction { vertex: p.clone(), concavity: c.clone() });
    }
    let values: Vec<Rational> = f.integrality_witnesses()?.into_iter().map(|(_, v)| v).collect();
    let mut scale = minimal_integral_scale(&values);
    let mut renormalized = false;
    let mut warning = None;
    let scaled: BTreeSet<Rational> = concavities.iter().map(|(_, c)| c * &scale).collect();
    if f.partition().is_balanced() && !scaled.is_empty() && scaled.iter().any(|c| !c.is_one()) {
        if scaled.len() == 1 {
            let c = scaled.into_iter().next().expect("one value");
            let candidate = &scale / &c;
            if values.iter().all(|v| (v * &candidate).is_integer()) {
                scale = candidate;
                renormalized = true;
            } else {
                warning = Some(format!("unit concavity would break integrality (common concavity {c})"));
            }
        } else {
            warning = Some("concavities differ between vertices; unit concavity needs more than scaling".into());
        }
    }
    let function = f.scale(&scale);
    let concavities = concavities.into_iter().map(|(p, c)| (p, c * &scale)).collect();
    Ok(IntegralLifting { function, scale, concavities, renormalized, warning })
}

/// `y ≤ ⟨a, x⟩ + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompactCap {
    pub a: LatticeVector,
    pub b: BigInt,
}

impl CompactCap {
    /// The smallest integral `b` putting the cap strictly above every lifted
    /// vertex; `a` defaults to zero.
    pub fn above(f: &PiecewiseAffine, a: Option<LatticeVector>) -> Result<Self, LiftingError> {
        let g = f.partition();
        if !g.ambient().is_compact() {
            return Err(PolytopeError::Unbounded.into());
        }
        let a = a.unwrap_or_else(|| LatticeVector::zero(g.rank()));
        let mut top: Option<Rational> = None;
        for v in g.ambient().vertices().iter().chain(g.vertices().iter()) {
            let y = f.eval(v).expect("vertex lies in the polytope") - a.dot_point(v);
            top = Some(top.map_or(y.clone(), |t| t.max(y)));
        }
        let b = top.expect("compact polytope has vertices").floor().to_integer() + 1;
        Ok(CompactCap { a, b })
    }

    fn halfspace(&self) -> Halfspace {
        Halfspace::new(self.a.extended(-BigInt::one()), rat_from_int(&self.b))
    }
}

/// `Δ̃ = {(x, y) | x ∈ Δ, y ≥ F(x)}`, optionally capped.
#[derive(Clone, Debug)]
pub struct LiftedPolytope {
    pub function: PiecewiseAffine,
    pub polytope: LatticePolytope,
    /// Partition face index → index into `polytope.faces()` of its lift.
    pub lift_map: Vec<usize>,
    pub cap: Option<CompactCap>,
    pub nonsingular: bool,
    pub concavities: Vec<(Point, Rational)>,
}

impl LiftedPolytope {
    pub fn base(&self) -> &Partition {
        self.function.partition()
    }

    /// Rank of the base lattice `M`.
    pub fn base_rank(&self) -> usize {
        self.base().rank()
    }

    pub fn vertical(&self) -> LatticeVector {
        let n = self.base_rank();
        LatticeVector::unit(n + 1, n)
    }

    pub fn lift_point(&self, x: &Point) -> Option<Point> {
        self.function.lift_point(x)
    }

    pub fn has_unit_concavity(&self) -> bool {
        self.concavities.iter().all(|(_, c)| c.is_one())
    }

    /// Index of the cap facet in `polytope.facets()`.
    pub fn cap_facet(&self) -> Option<usize> {
        let h = self.cap.as_ref()?.halfspace().normalized().ok()?;
        self.polytope.facets().iter().position(|g| *g == h)
    }

    /// The image of a face under the projection forgetting `y`.
    pub fn project_face(&self, face: usize) -> Result<LatticePolytope, LiftingError> {
        project(&self.polytope, face, self.base_rank())
    }
}

fn project(p: &LatticePolytope, face: usize, n: usize) -> Result<LatticePolytope, LiftingError> {
    let fp = p.face_polytope(&p.faces()[face]);
    let pts: Vec<Point> = fp.anchors().iter().map(|v| v.truncated(n)).collect();
    let drop = |r: &LatticeVector| -> Option<LatticeVector> {
        let t = LatticeVector(r.0[..n].to_vec());
        primitive(&t).ok()
    };
    let rays: Vec<LatticeVector> = fp.rays().iter().filter_map(drop).collect();
    let lin: Vec<LatticeVector> = fp.lineality().iter().filter_map(drop).collect();
    Ok(LatticePolytope::from_generators(&pts, &rays, &lin)?)
}

/// Builds and verifies the lifted polyhedron of an integral lifting function.
pub fn lift_polytope(f: &PiecewiseAffine, cap: Option<CompactCap>) -> Result<LiftedPolytope, LiftingError> {
    let g = f.partition();
    let n = g.rank();
    let concavities = f.concavities()?;
    if let Some((p, c)) = concavities.iter().find(|(_, c)| !c.is_positive()) {
        return Err(LiftingError::NotALiftingFunction { vertex: p.clone(), concavity: c.clone() });
    }
    if let Some(p) = f.non_integral_point()? {
        return Err(LiftingError::NotIntegral(p));
    }
    let mut hs: Vec<Halfspace> = g
        .ambient()
        .facets()
        .iter()
        .map(|h| Halfspace::new(h.normal.extended(BigInt::zero()), h.offset.clone()))
        .collect();
    for fj in f.pieces() {
        // y − ⟨l, x⟩ − c ≥ 0, cleared of denominators
        let mut coeffs: Vec<Rational> = fj.linear.iter().map(|a| -a.clone()).collect();
        coeffs.push(Rational::one());
        coeffs.push(-fj.constant.clone());
        let ints = clear_denominators(&coeffs);
        hs.push(Halfspace::new(LatticeVector(ints[..=n].to_vec()), rat_from_int(&ints[n + 1])));
    }
    if let Some(c) = &cap {
        hs.push(c.halfspace());
    }
    let polytope = LatticePolytope::from_halfspaces(n + 1, &hs)?;

    let mut lifted =
        LiftedPolytope { function: f.clone(), polytope, lift_map: Vec::new(), cap, nonsingular: false, concavities };
    let cap_facet = lifted.cap_facet();

    let gamma_keys: HashMap<PolytopeKey, usize> =
        g.faces().iter().enumerate().map(|(i, face)| (face.polytope.key(), i)).collect();
    let delta_keys: BTreeSet<PolytopeKey> =
        g.ambient().faces().iter().map(|face| g.ambient().face_polytope(face).key()).collect();
    let mut lifts: Vec<Vec<usize>> = vec![Vec::new(); g.faces().len()];
    for (fi, face) in lifted.polytope.faces().iter().enumerate() {
        let proj = lifted.project_face(fi)?;
        let key = proj.key();
        let on_cap = cap_facet.is_some_and(|c| face.facets.contains(c));
        if proj.dim() == face.dim && !on_cap {
            if let Some(&gi) = gamma_keys.get(&key) {
                lifts[gi].push(fi);
                continue;
            }
        }
        if !delta_keys.contains(&key) && !gamma_keys.contains_key(&key) {
            return Err(LiftingError::BadProjection(proj.to_string()));
        }
    }
    for (gi, l) in lifts.iter().enumerate() {
        if l.len() != 1 {
            return Err(LiftingError::LiftCount { face: gi, count: l.len() });
        }
    }
    lifted.lift_map = lifts.into_iter().map(|l| l[0]).collect();
    if let Some(v) = lifted.polytope.anchors().iter().find(|v| !v.is_integral()) {
        return Err(LiftingError::NonIntegralVertex(v.clone()));
    }
    let singular = lifted.polytope.singular_vertex();
    lifted.nonsingular = singular.is_none();
    if let Some(v) = singular {
        if g.is_nonsingular() && g.ambient().is_nonsingular() && lifted.has_unit_concavity() {
            return Err(LiftingError::ExpectedNonsingular(lifted.polytope.anchors()[v].clone()));
        }
    }
    Ok(lifted)
}

/// Lifting function, minimal integral scaling and lift in one go.
pub fn lift_partition(
    partition: Arc<Partition>,
    anchor: usize,
    cap: bool,
) -> Result<(IntegralLifting, LiftedPolytope), LiftingError> {
    let f = lifting_function(partition, anchor, TreeOrder::BreadthFirst)?;
    let integral = minimal_integral_lifting(&f)?;
    let cap = if cap { Some(CompactCap::above(&integral.function, None)?) } else { None };
    let lifted = lift_polytope(&integral.function, cap)?;
    Ok((integral, lifted))
}

/// Result of lifting along `l` parallel hyperplanes, both step by step and
/// in one shot from `F_{Γ,l}`.
#[derive(Clone, Debug)]
pub struct IteratedLift {
    pub normal: LatticeVector,
    pub offsets: Vec<BigInt>,
    /// `Δ_1, …, Δ_l`.
    pub steps: Vec<LatticePolytope>,
    /// Graph of `F_{Γ,l}` plus the nonnegative orthant.
    pub one_shot: LatticePolytope,
    /// Per piece of the base partition, the `l` components of `F_{Γ,l}`.
    pub functions: Vec<Vec<AffineFunction>>,
}

impl IteratedLift {
    pub fn polytope(&self) -> &LatticePolytope {
        self.steps.last().expect("at least one hyperplane")
    }

    pub fn agrees(&self) -> bool {
        self.polytope().key() == self.one_shot.key()
    }

    /// `F_{Γ,l}(x)` on the base polytope.
    pub fn eval(&self, base: &Partition, x: &Point) -> Option<Vec<Rational>> {
        let i = base.pieces().iter().position(|p| p.contains(x))?;
        Some(self.functions[i].iter().map(|f| f.eval(x)).collect())
    }
}

/// Lifts `Δ` once for each hyperplane `⟨m, x⟩ = c_i`.
pub fn iterated_lift(
    delta: &LatticePolytope,
    hyperplanes: &[(LatticeVector, BigInt)],
) -> Result<IteratedLift, LiftingError> {
    let n = delta.rank();
    let (m0, _) = hyperplanes.first().ok_or(LiftingError::NotParallel)?;
    let m = primitive(m0).map_err(|_| PolytopeError::ZeroNormal)?;
    let mut offsets = Vec::new();
    for (mi, ci) in hyperplanes {
        let p = primitive(mi).map_err(|_| PolytopeError::ZeroNormal)?;
        // ⟨k·m, x⟩ = c  ⇔  ⟨m, x⟩ = c / k
        let k = mi.0.iter().zip(&p.0).find(|(_, b)| !b.is_zero()).map(|(a, b)| a / b).expect("nonzero");
        let k = if p == m {
            k
        } else if p == m.negated() {
            -k
        } else {
            return Err(LiftingError::NotParallel);
        };
        if !(ci % &k).is_zero() {
            return Err(PartitionError::NotFullDimensional { piece: 0, dim: 0 }.into());
        }
        offsets.push(ci / &k);
    }
    offsets.sort();
    if offsets.windows(2).any(|w| w[0] == w[1]) {
        return Err(LiftingError::RepeatedOffset);
    }
    let l = offsets.len();
    let base = Partition::from_hyperplanes(delta.clone(), &m, &offsets)?;

    // step by step
    let mut steps = Vec::new();
    let mut current = delta.clone();
    for s in 0..l {
        let rank = n + s;
        let normal = LatticeVector(m.0.iter().cloned().chain(std::iter::repeat_n(BigInt::zero(), s)).collect());
        let remaining = Partition::from_hyperplanes(current.clone(), &normal, &offsets[s..])?;
        if !remaining.is_nonsingular() {
            return Err(PartitionError::NotSemistableAt(current.interior_point()).into());
        }
        let single = Arc::new(Partition::from_hyperplanes(current.clone(), &normal, &offsets[s..=s])?);
        let (_, lifted) = lift_partition(single, 0, false)?;
        debug_assert_eq!(lifted.polytope.rank(), rank + 1);
        current = lifted.polytope;
        steps.push(current.clone());
    }

    // one shot: components f_k = ⟨m, x⟩ − c_k on pieces beyond L_k
    let mut functions = Vec::new();
    for i in 0..=l {
        let comps = (0..l)
            .map(|k| {
                if k < i {
                    AffineFunction::new(m.0.iter().map(rat_from_int).collect(), -rat_from_int(&offsets[k]))
                } else {
                    AffineFunction::zero(n)
                }
            })
            .collect::<Vec<_>>();
        functions.push(comps);
    }
    let mut points = Vec::new();
    let mut rays: Vec<LatticeVector> = (0..l).map(|k| LatticeVector::unit(n + l, n + k)).collect();
    for (piece, comps) in base.pieces().iter().zip(&functions) {
        for v in piece.anchors() {
            points.push(Point(v.0.iter().cloned().chain(comps.iter().map(|f| f.eval(v))).collect()));
        }
        for r in piece.rays().iter().chain(piece.lineality()) {
            let slopes: Vec<BigInt> = comps.iter().map(|f| f.slope(r).to_integer()).collect();
            rays.push(LatticeVector(r.0.iter().cloned().chain(slopes.iter().cloned()).collect()));
        }
        for r in piece.lineality() {
            let slopes: Vec<BigInt> = comps.iter().map(|f| -f.slope(r).to_integer()).collect();
            rays.push(LatticeVector(r.negated().0.into_iter().chain(slopes).collect()));
        }
    }
    let one_shot = LatticePolytope::from_generators(&points, &rays, &[])?;
    Ok(IteratedLift { normal: m, offsets, steps, one_shot, functions })
}

/// Extends a convex support function on the fan of `Δ` to the fan of a compact
/// lift by a single hyperplane: `φ̃ = φ` on the old rays, `0` on the two new
/// upward rays, and the largest integer `a ≤ 0` on the cap ray keeping `φ̃`
/// convex.
pub fn extend_support_function(
    phi: &SupportFunction,
    lifted: &LiftedPolytope,
) -> Result<SupportFunction, LiftingError> {
    if lifted.cap.is_none() || lifted.base().walls().len() != 1 || lifted.base().pieces().len() != 2 {
        return Err(LiftingError::NotSingleHyperplane);
    }
    if phi.classify()? == Convexity::NotConvex {
        return Err(LiftingError::NotConvex);
    }
    let n = lifted.base_rank();
    let fan = normal_fan(&lifted.polytope)?;
    let mut base_values = Vec::new();
    let mut cap_rays = Vec::new();
    for (r, ray) in fan.rays().iter().enumerate() {
        let y = &ray.0[n];
        if y.is_zero() {
            let down = LatticeVector(ray.0[..n].to_vec());
            let idx = phi.fan.ray_index(&down).ok_or_else(|| LiftingError::ForeignRay(down.clone()))?;
            base_values.push(phi.values[idx].clone());
        } else if y.is_positive() {
            base_values.push(Rational::zero());
        } else {
            base_values.push(Rational::zero());
            cap_rays.push(r);
        }
    }
    let attempts = (0..=64i64).chain((7..48).map(|e| 1i64 << e));
    for a in attempts {
        let mut values = base_values.clone();
        for &r in &cap_rays {
            values[r] = Rational::from_integer(BigInt::from(-a));
        }
        if let Ok(s) = SupportFunction::new(fan.clone(), values) {
            if s.classify()? != Convexity::NotConvex {
                return Ok(s);
            }
        }
    }
    Err(LiftingError::ConvexityUnreachable)
}
