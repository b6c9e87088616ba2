//! The degeneration read off a lifted polyhedron: the lattice sequences,
//! central-fibre components and their dual complex, monomial charts of the
//! degeneration map, and the family of embedded hypersurfaces.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactmath::{
    hermite_normal_form, identity, integer_kernel, is_unimodular_basis, mat_mul, solve_system, transpose, IntMatrix,
    LatticeVector, Point, Rational,
};
use crate::lifting::{LiftedPolytope, LiftingError, PiecewiseAffine};
use crate::partition::{DualComplex, PartitionError};
use crate::polytope::{lattice_equivalent, normal_fan, Fan, LatticePolytope, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegenerationError {
    #[error("lifted polyhedron was not verified")]
    Unverified,
    #[error("partition is neither nonsingular nor mildly singular")]
    NotMildlySingular,
    #[error("family equations need a bounded polytope")]
    Unbounded,
    #[error("piece {0} does not exist")]
    NoSuchPiece(usize),
    #[error("negative exponent {exponent} at {point}")]
    NegativeExponent { point: LatticeVector, exponent: BigInt },
    #[error(transparent)]
    Lifting(#[from] LiftingError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// `0 → N →i N⊕ℤ →µ ℤ → 0` and its dual `0 → ℤ →j M⊕ℤ →ν M → 0`, as
/// integer matrices acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSequence {
    pub n: usize,
    pub i: IntMatrix,
    pub mu: IntMatrix,
    pub j: IntMatrix,
    pub nu: IntMatrix,
}

pub fn build_sequences(n: usize) -> LatticeSequence {
    let mut i = identity(n);
    i.push(vec![BigInt::zero(); n]);
    let mut mu = vec![vec![BigInt::zero(); n + 1]];
    mu[0][n] = BigInt::one();
    let j = transpose(&mu, n + 1);
    let nu: IntMatrix = identity(n + 1).into_iter().take(n).collect();
    LatticeSequence { n, i, mu, j, nu }
}

impl LatticeSequence {
    /// Both composites vanish, the right maps are onto and the kernels are
    /// exactly the images.
    pub fn is_exact(&self) -> bool {
        let n = self.n;
        let zero = |m: &IntMatrix| m.iter().all(|r| r.iter().all(Zero::is_zero));
        if !zero(&mat_mul(&self.mu, &self.i)) || !zero(&mat_mul(&self.nu, &self.j)) {
            return false;
        }
        let same_lattice =
            |a: Vec<LatticeVector>, b: Vec<LatticeVector>| match (hermite_normal_form(&a), hermite_normal_form(&b)) {
                (Ok(x), Ok(y)) => x == y,
                _ => false,
            };
        let columns = |m: &IntMatrix, cols: usize| -> Vec<LatticeVector> {
            transpose(m, cols).into_iter().map(LatticeVector).collect()
        };
        let onto = |m: &IntMatrix, cols: usize, rows: usize| {
            same_lattice(columns(m, cols), (0..rows).map(|k| LatticeVector::unit(rows, k)).collect())
        };
        onto(&self.mu, n + 1, 1)
            && onto(&self.nu, n + 1, n)
            && same_lattice(integer_kernel(&self.mu, n + 1), columns(&self.i, n))
            && same_lattice(integer_kernel(&self.nu, n + 1), columns(&self.j, 1))
    }
}

/// The degeneration map near the lift of a vertex: `t = ∏ x_k^{c_k}` in the
/// coordinates dual to the edge generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalChart {
    pub vertex: Point,
    pub lifted: Point,
    /// Dimension of the smallest face of `Δ` containing the vertex.
    pub face_dim: usize,
    /// Primitive edge vectors of the lifted polyhedron at the lifted vertex.
    pub generators: Vec<LatticeVector>,
    /// Coordinates of `j(1) = (0, …, 0, 1)` in the generator basis.
    pub exponents: Vec<BigInt>,
    /// Indices of the coordinates appearing in `t`.
    pub monomial: Vec<usize>,
}

impl LocalChart {
    pub fn factor_count(&self) -> usize {
        self.monomial.len()
    }

    /// Sum of the generators in the monomial.
    pub fn edge_sum(&self) -> LatticeVector {
        let rank = self.lifted.rank();
        self.monomial.iter().fold(LatticeVector::zero(rank), |acc, &k| &acc + &self.generators[k])
    }

    pub fn is_square_free(&self) -> bool {
        self.exponents.iter().all(|e| e.is_zero() || e.is_one())
    }
}

impl fmt::Display for LocalChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = self
            .monomial
            .iter()
            .map(
                |&k| if self.exponents[k].is_one() { format!("x_{k}") } else { format!("x_{k}^{}", self.exponents[k]) },
            )
            .join("*");
        write!(f, "t = {factors} at {}", self.vertex)
    }
}

/// Charts at every lower vertex of the lift; singular vertices are skipped
/// and reported.
pub fn local_charts(lifted: &LiftedPolytope) -> (Vec<LocalChart>, Vec<String>) {
    let base = lifted.base();
    let n = base.rank();
    let p = &lifted.polytope;
    let cap = lifted.cap_facet();
    let e_y = lifted.vertical();
    let mut charts = Vec::new();
    let mut warnings = Vec::new();
    for (vi, v) in p.vertices().iter().enumerate() {
        let on_cap = cap.is_some_and(|c| p.facets()[c].value(v).is_zero());
        if on_cap {
            continue;
        }
        let q = v.truncated(n);
        let face_dim = if base.ambient().vertex_index(&q).is_some() {
            0
        } else if let Some(f) = base.vertex_face(&q) {
            f.ambient_dim
        } else {
            continue;
        };
        let generators: Vec<LatticeVector> = p.edges_at(vi).iter().map(|(d, _)| d.clone()).collect();
        if generators.len() != n + 1 || !is_unimodular_basis(&generators).unwrap_or(false) {
            warnings.push(format!("singular lifted vertex {v}: chart omitted"));
            continue;
        }
        let columns: IntMatrix = transpose(&generators.iter().map(|g| g.0.clone()).collect::<Vec<_>>(), n + 1);
        let rhs: Vec<Rational> = e_y.0.iter().map(|x| Rational::from_integer(x.clone())).collect();
        let c = solve_system(&columns, &rhs).expect("unimodular basis");
        let exponents: Vec<BigInt> = c.iter().map(|x| x.to_integer()).collect();
        let monomial = (0..=n).filter(|&k| !exponents[k].is_zero()).collect();
        charts.push(LocalChart { vertex: q, lifted: v.clone(), face_dim, generators, exponents, monomial });
    }
    (charts, warnings)
}

#[derive(Clone, Debug)]
pub struct Component {
    pub piece: usize,
    pub polytope: LatticePolytope,
    pub nonsingular: bool,
    /// Lattice-equivalence class, numbered by first appearance.
    pub class: usize,
}

#[derive(Clone, Debug)]
pub struct DegenerationReport {
    pub sequence: LatticeSequence,
    pub total_polytope: LatticePolytope,
    pub fan: Fan,
    pub components: Vec<Component>,
    /// The dual complex of the partition.
    pub dual_graph: DualComplex,
    /// Dual complex of the central fibre of a generic hypersurface.
    pub hypersurface_dual_graph: DualComplex,
    pub charts: Vec<LocalChart>,
    pub weak: bool,
    pub singular_vertices: Vec<Point>,
    pub warnings: Vec<String>,
}

impl DegenerationReport {
    pub fn class_count(&self) -> usize {
        self.components.iter().map(|c| c.class).max().map_or(0, |m| m + 1)
    }

    /// Pieces grouped by class.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for c in &self.components {
            out[c.class].push(c.piece);
        }
        out
    }
}

/// Components are the pieces, compared up to lattice equivalence.
pub fn equivalence_classes(pieces: &[LatticePolytope]) -> Vec<usize> {
    let mut class: Vec<Option<usize>> = vec![None; pieces.len()];
    let mut reps: Vec<usize> = Vec::new();
    for i in 0..pieces.len() {
        let found = reps.iter().position(|&r| lattice_equivalent(&pieces[r], &pieces[i]).is_some());
        class[i] = Some(found.unwrap_or_else(|| {
            reps.push(i);
            reps.len() - 1
        }));
    }
    class.into_iter().map(|c| c.expect("assigned")).collect()
}

pub fn build_report(lifted: &LiftedPolytope) -> Result<DegenerationReport, DegenerationError> {
    let base = lifted.base();
    if lifted.lift_map.len() != base.faces().len() {
        return Err(DegenerationError::Unverified);
    }
    let cls = base.classify();
    if cls.nonsingular != Some(true) && cls.mildly_singular != Some(true) {
        return Err(DegenerationError::NotMildlySingular);
    }
    let classes = equivalence_classes(base.pieces());
    let components = base
        .pieces()
        .iter()
        .zip(classes)
        .enumerate()
        .map(|(piece, (p, class))| Component { piece, polytope: p.clone(), nonsingular: p.is_nonsingular(), class })
        .collect();
    let (charts, warnings) = local_charts(lifted);
    let singular_vertices = cls.singular_vertices.clone();
    Ok(DegenerationReport {
        sequence: build_sequences(base.rank()),
        total_polytope: lifted.polytope.clone(),
        fan: normal_fan(&lifted.polytope)?,
        components,
        dual_graph: base.dual_complex(),
        hypersurface_dual_graph: base.hypersurface_dual_complex(),
        charts,
        weak: !singular_vertices.is_empty(),
        singular_vertices,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficient {
    Symbol(String),
    Value(Rational),
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Symbol(s) => f.write_str(s),
            Coefficient::Value(v) => write!(f, "({v})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum CoefficientChoice {
    /// `a_0, a_1, …`
    #[default]
    Symbolic,
    /// Deterministic pseudo-random nonzero rationals.
    Seeded(u64),
    /// Given values; missing points stay symbolic.
    Explicit(BTreeMap<LatticeVector, Rational>),
}

/// `Σ_j λ^{F(m_j)} a_j x^{m_j}` over the lattice points of `Δ`.
#[derive(Clone, Debug)]
pub struct FamilyEquations {
    pub distinguished: usize,
    pub function: PiecewiseAffine,
    pub lattice_points: Vec<LatticeVector>,
    pub exponents: Vec<BigInt>,
    pub coefficients: Vec<Coefficient>,
    /// Per piece, indices of the lattice points it contains.
    pub component_supports: Vec<Vec<usize>>,
}

impl FamilyEquations {
    pub fn monomial_count(&self) -> usize {
        self.lattice_points.len()
    }

    pub fn render(&self) -> String {
        self.lattice_points
            .iter()
            .zip(&self.exponents)
            .zip(&self.coefficients)
            .map(|((m, e), a)| format!("l^{e}*{a}*x^{m}"))
            .join(" + ")
    }
}

pub fn family_equations(
    lifted: &LiftedPolytope,
    distinguished: usize,
    coefficients: &CoefficientChoice,
) -> Result<FamilyEquations, DegenerationError> {
    let base = lifted.base();
    if !base.ambient().is_compact() {
        return Err(DegenerationError::Unbounded);
    }
    let f0 = lifted.function.pieces().get(distinguished).ok_or(DegenerationError::NoSuchPiece(distinguished))?;
    let function = lifted.function.add_affine(&-f0);
    let lattice_points = base.ambient().lattice_points()?;
    let mut exponents = Vec::with_capacity(lattice_points.len());
    for m in &lattice_points {
        let v = function.eval(&m.to_point()).expect("lattice point of the polytope");
        let e = v.to_integer();
        if !v.is_integer() {
            return Err(LiftingError::NotIntegral(m.to_point()).into());
        }
        if e.is_negative() {
            return Err(DegenerationError::NegativeExponent { point: m.clone(), exponent: e });
        }
        exponents.push(e);
    }
    let symbol = |j: usize| Coefficient::Symbol(format!("a_{j}"));
    let coefficients: Vec<Coefficient> = match coefficients {
        CoefficientChoice::Symbolic => (0..lattice_points.len()).map(symbol).collect(),
        CoefficientChoice::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..lattice_points.len())
                .map(|_| {
                    let mut num: i64 = rng.gen_range(1..=9);
                    if rng.gen_bool(0.5) {
                        num = -num;
                    }
                    let den: i64 = rng.gen_range(1..=9);
                    Coefficient::Value(Rational::new(num.into(), den.into()))
                })
                .collect()
        }
        CoefficientChoice::Explicit(map) => lattice_points
            .iter()
            .enumerate()
            .map(|(j, m)| map.get(m).map_or_else(|| symbol(j), |v| Coefficient::Value(v.clone())))
            .collect(),
    };
    let component_supports = base
        .pieces()
        .iter()
        .map(|p| (0..lattice_points.len()).filter(|&j| p.contains(&lattice_points[j].to_point())).collect())
        .collect();
    Ok(FamilyEquations { distinguished, function, lattice_points, exponents, coefficients, component_supports })
}
