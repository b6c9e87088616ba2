//! Serializable reports. Numbers are exact: integers that fit in 64 bits are
//! JSON numbers, everything else is a decimal string (`"p/q"` for fractions).

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use toricdegen::partition::SemistabilityWitness;
use toricdegen::polytope::Halfspace;
use toricdegen::{
    AffineFunction, Classification, DegenerationReport, FamilyEquations, Fan, IntegralLifting, IteratedLift,
    LatticePolytope, LatticeSequence, LatticeVector, LiftedPolytope, LocalChart, Point, Rational, WeightVector,
};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Num(pub Rational);

impl Num {
    pub fn to_integer(&self) -> Option<BigInt> {
        self.0.is_integer().then(|| self.0.to_integer())
    }
}

impl From<&BigInt> for Num {
    fn from(v: &BigInt) -> Self {
        Num(Rational::from_integer(v.clone()))
    }
}

impl From<&Rational> for Num {
    fn from(v: &Rational) -> Self {
        Num(v.clone())
    }
}

impl From<i64> for Num {
    fn from(v: i64) -> Self {
        Num(Rational::from_integer(v.into()))
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Some(v) = self.0.numer().to_i64() {
                return s.serialize_i64(v);
            }
        }
        s.serialize_str(&self.0.to_string())
    }
}

struct NumVisitor;

impl Visitor<'_> for NumVisitor {
    type Value = Num;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a string holding an integer or fraction")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
        Ok(Num::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
        Ok(Num(Rational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
        Err(E::custom(format!("{v} is a floating-point number; write exact values as strings like \"3/2\"")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
        v.trim().parse::<Rational>().map(Num).map_err(|_| E::custom(format!("`{v}` is not an integer or fraction")))
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(NumVisitor)
    }
}

pub type Vector = Vec<Num>;

pub fn point(p: &Point) -> Vector {
    p.0.iter().map(Num::from).collect()
}

pub fn lattice(v: &LatticeVector) -> Vector {
    v.0.iter().map(Num::from).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub face_vertices: Vec<Vector>,
    pub face_dim: usize,
    pub polytope_face_dim: usize,
    pub pieces_containing: usize,
    pub expected: usize,
}

impl From<&SemistabilityWitness> for WitnessReport {
    fn from(w: &SemistabilityWitness) -> Self {
        WitnessReport {
            face_vertices: w.face_vertices.iter().map(point).collect(),
            face_dim: w.face_dim,
            polytope_face_dim: w.ambient_face_dim,
            pieces_containing: w.count,
            expected: w.expected,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightReport {
    pub vertex: Vector,
    pub edges: Vec<Vector>,
    pub weights: Vector,
    pub balanced: bool,
}

impl From<&WeightVector> for WeightReport {
    fn from(w: &WeightVector) -> Self {
        WeightReport {
            vertex: point(&w.vertex),
            edges: w.edges.iter().map(lattice).collect(),
            weights: w.weights.iter().map(Num::from).collect(),
            balanced: w.is_balanced(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub pieces: usize,
    pub vertices: usize,
    pub simplicial: bool,
    pub semistable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
    pub balanced: Option<bool>,
    pub nonsingular: Option<bool>,
    pub mildly_singular: Option<bool>,
    pub weights: Vec<WeightReport>,
    pub maximal_vertices: Vec<Vector>,
    pub singular_vertices: Vec<Vector>,
    pub dual_complex: Vec<Vec<usize>>,
    pub hypersurface_dual_complex: Vec<Vec<usize>>,
}

impl ClassificationReport {
    pub fn new(g: &toricdegen::Partition, c: &Classification) -> Self {
        ClassificationReport {
            pieces: g.pieces().len(),
            vertices: g.vertices().len(),
            simplicial: c.simplicial,
            semistable: c.semistable,
            witness: c.witness.as_ref().map(Into::into),
            balanced: c.balanced,
            nonsingular: c.nonsingular,
            mildly_singular: c.mildly_singular,
            weights: c.weights.iter().map(Into::into).collect(),
            maximal_vertices: c.maximal_vertices.iter().map(point).collect(),
            singular_vertices: c.singular_vertices.iter().map(point).collect(),
            dual_complex: g.dual_complex().simplices.into_iter().collect(),
            hypersurface_dual_complex: g.hypersurface_dual_complex().simplices.into_iter().collect(),
        }
    }
}

/// `⟨linear, x⟩ + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineReport {
    pub linear: Vector,
    pub constant: Num,
}

impl From<&AffineFunction> for AffineReport {
    fn from(f: &AffineFunction) -> Self {
        AffineReport { linear: f.linear.iter().map(Num::from).collect(), constant: Num::from(&f.constant) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcavityReport {
    pub vertex: Vector,
    pub concavity: Num,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingReport {
    pub anchor_piece: usize,
    /// The rational lifting function before scaling.
    pub rational: Vec<AffineReport>,
    /// The integral lifting function `R·F`.
    pub integral: Vec<AffineReport>,
    pub scale: Num,
    pub concavities: Vec<ConcavityReport>,
    pub concavity_set: Vector,
    pub renormalized: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl LiftingReport {
    pub fn new(anchor: usize, rational: &[AffineFunction], l: &IntegralLifting) -> Self {
        LiftingReport {
            anchor_piece: anchor,
            rational: rational.iter().map(Into::into).collect(),
            integral: l.function.pieces().iter().map(Into::into).collect(),
            scale: Num::from(&l.scale),
            concavities: l
                .concavities
                .iter()
                .map(|(p, c)| ConcavityReport { vertex: point(p), concavity: Num::from(c) })
                .collect(),
            concavity_set: l.concavity_set().iter().map(Num::from).collect(),
            renormalized: l.renormalized,
            warning: l.warning.clone(),
        }
    }
}

/// `⟨normal, x⟩ + offset ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceReport {
    pub normal: Vector,
    pub offset: Num,
}

impl From<&Halfspace> for HalfspaceReport {
    fn from(h: &Halfspace) -> Self {
        HalfspaceReport { normal: lattice(&h.normal), offset: Num::from(&h.offset) }
    }
}

/// H- and V-data plus the edge graph, labelled by vertex index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronReport {
    pub rank: usize,
    pub vertices: Vec<Vector>,
    pub rays: Vec<Vector>,
    pub lineality: Vec<Vector>,
    pub facets: Vec<HalfspaceReport>,
    pub equations: Vec<HalfspaceReport>,
    pub edges: Vec<[usize; 2]>,
    /// `(vertex, direction)` for each unbounded edge.
    pub unbounded_edges: Vec<(usize, Vector)>,
    pub nonsingular: bool,
}

impl From<&LatticePolytope> for PolyhedronReport {
    fn from(p: &LatticePolytope) -> Self {
        let mut edges = Vec::new();
        let mut unbounded_edges = Vec::new();
        if p.is_pointed() {
            for v in 0..p.vertices().len() {
                for (d, w) in p.edges_at(v) {
                    match w {
                        Some(w) if *w > v => edges.push([v, *w]),
                        Some(_) => {}
                        None => unbounded_edges.push((v, lattice(d))),
                    }
                }
            }
        }
        PolyhedronReport {
            rank: p.rank(),
            vertices: p.vertices().iter().map(point).collect(),
            rays: p.rays().iter().map(lattice).collect(),
            lineality: p.lineality().iter().map(lattice).collect(),
            facets: p.facets().iter().map(Into::into).collect(),
            equations: p.equations().iter().map(Into::into).collect(),
            edges,
            unbounded_edges,
            nonsingular: p.is_pointed() && p.is_nonsingular(),
        }
    }
}

/// `y ≤ ⟨a, x⟩ + b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapReport {
    pub a: Vector,
    pub b: Num,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiBaseReport {
    pub normal: Vector,
    pub offsets: Vector,
    pub steps: Vec<PolyhedronReport>,
    pub agrees_with_one_shot: bool,
}

impl From<&IteratedLift> for MultiBaseReport {
    fn from(it: &IteratedLift) -> Self {
        MultiBaseReport {
            normal: lattice(&it.normal),
            offsets: it.offsets.iter().map(Num::from).collect(),
            steps: it.steps.iter().map(Into::into).collect(),
            agrees_with_one_shot: it.agrees(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftReport {
    pub lifting: LiftingReport,
    pub polytope: PolyhedronReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<CapReport>,
    /// Index into `polytope` faces of the lift of each partition face.
    pub lifted_faces: usize,
    pub nonsingular: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multi_base: Option<MultiBaseReport>,
}

impl LiftReport {
    pub fn new(lifting: LiftingReport, lifted: &LiftedPolytope, multi_base: Option<MultiBaseReport>) -> Self {
        LiftReport {
            lifting,
            polytope: (&lifted.polytope).into(),
            cap: lifted.cap.as_ref().map(|c| CapReport { a: lattice(&c.a), b: Num::from(&c.b) }),
            lifted_faces: lifted.lift_map.len(),
            nonsingular: lifted.nonsingular,
            multi_base,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub i: Vec<Vector>,
    pub mu: Vec<Vector>,
    pub j: Vec<Vector>,
    pub nu: Vec<Vector>,
    pub exact: bool,
}

impl From<&LatticeSequence> for SequenceReport {
    fn from(s: &LatticeSequence) -> Self {
        let m = |rows: &Vec<Vec<BigInt>>| rows.iter().map(|r| r.iter().map(Num::from).collect()).collect();
        SequenceReport { i: m(&s.i), mu: m(&s.mu), j: m(&s.j), nu: m(&s.nu), exact: s.is_exact() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub piece: usize,
    pub vertices: Vec<Vector>,
    pub nonsingular: bool,
    pub class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartReport {
    pub vertex: Vector,
    pub lifted: Vector,
    pub face_dim: usize,
    pub generators: Vec<Vector>,
    pub exponents: Vector,
    pub monomial: String,
}

impl From<&LocalChart> for ChartReport {
    fn from(c: &LocalChart) -> Self {
        let text = c.to_string();
        ChartReport {
            vertex: point(&c.vertex),
            lifted: point(&c.lifted),
            face_dim: c.face_dim,
            generators: c.generators.iter().map(lattice).collect(),
            exponents: c.exponents.iter().map(Num::from).collect(),
            monomial: text.split(" at ").next().unwrap_or_default().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanReport {
    pub rays: Vec<Vector>,
    pub maximal_cones: Vec<Vec<usize>>,
}

impl From<&Fan> for FanReport {
    fn from(f: &Fan) -> Self {
        FanReport { rays: f.rays().iter().map(lattice).collect(), maximal_cones: f.maximal_cones().cloned().collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialReport {
    pub point: Vector,
    pub exponent: Num,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub distinguished_piece: usize,
    pub monomials: Vec<MonomialReport>,
    pub component_supports: Vec<Vec<usize>>,
    pub equation: String,
}

impl From<&FamilyEquations> for FamilyReport {
    fn from(f: &FamilyEquations) -> Self {
        FamilyReport {
            distinguished_piece: f.distinguished,
            monomials: f
                .lattice_points
                .iter()
                .zip(&f.exponents)
                .zip(&f.coefficients)
                .map(|((m, e), a)| MonomialReport {
                    point: lattice(m),
                    exponent: Num::from(e),
                    coefficient: a.to_string(),
                })
                .collect(),
            component_supports: f.component_supports.clone(),
            equation: f.render(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerationSummary {
    pub sequences: SequenceReport,
    pub fan: FanReport,
    pub components: Vec<ComponentReport>,
    pub classes: Vec<Vec<usize>>,
    pub dual_graph: Vec<Vec<usize>>,
    pub hypersurface_dual_graph: Vec<Vec<usize>>,
    pub charts: Vec<ChartReport>,
    pub weak: bool,
    pub singular_vertices: Vec<Vector>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyReport>,
}

impl DegenerationSummary {
    pub fn new(r: &DegenerationReport, family: Option<&FamilyEquations>) -> Self {
        DegenerationSummary {
            sequences: (&r.sequence).into(),
            fan: (&r.fan).into(),
            components: r
                .components
                .iter()
                .map(|c| ComponentReport {
                    piece: c.piece,
                    vertices: c.polytope.vertices().iter().map(point).collect(),
                    nonsingular: c.nonsingular,
                    class: c.class,
                })
                .collect(),
            classes: r.classes(),
            dual_graph: r.dual_graph.simplices.iter().cloned().collect(),
            hypersurface_dual_graph: r.hypersurface_dual_graph.simplices.iter().cloned().collect(),
            charts: r.charts.iter().map(Into::into).collect(),
            weak: r.weak,
            singular_vertices: r.singular_vertices.iter().map(point).collect(),
            warnings: r.warnings.clone(),
            family: family.map(Into::into),
        }
    }
}

/// One line of output per job.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: String,
    pub classification: ClassificationReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneration: Option<DegenerationSummary>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        let values = [
            Num::from(7),
            Num::from(-3),
            Num(Rational::new(3.into(), 2.into())),
            Num(Rational::from_integer("123456789012345678901234567890".parse().unwrap())),
        ];
        let text = serde_json::to_string(&values).unwrap();
        assert_eq!(text, r#"[7,-3,"3/2","123456789012345678901234567890"]"#);
        let back: Vec<Num> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, values);
    }

    #[test]
    fn floats_are_rejected() {
        assert!(serde_json::from_str::<Num>("1.5").is_err());
        assert!(serde_json::from_str::<Num>("\"x\"").is_err());
        assert_eq!(serde_json::from_str::<Num>("\" 4 \"").unwrap(), Num::from(4));
    }
}
