//! Job descriptions: which polytope, which partition, which options.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use toricdegen::polytope::Halfspace;
use toricdegen::{LatticePolytope, LatticeVector, Partition, Point};

use crate::error::CliError;
use crate::report::Num;

/// `⟨normal, x⟩ + offset ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceSpec {
    pub normal: Vec<Num>,
    pub offset: Num,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfspaceSpec>>,
    /// Needed when `halfspaces` is empty (the whole space).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneSpec {
    pub normal: Vec<Num>,
    pub offsets: Vec<Num>,
}

/// One family of parallel hyperplanes, or a list of them sharing a normal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Hyperplanes {
    One(HyperplaneSpec),
    Many(Vec<HyperplaneSpec>),
}

impl Hyperplanes {
    fn as_slice(&self) -> &[HyperplaneSpec] {
        match self {
            Hyperplanes::One(h) => std::slice::from_ref(h),
            Hyperplanes::Many(hs) => hs,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<Vec<Vec<Num>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan_rays: Option<Vec<Vec<Num>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyperplanes: Option<Hyperplanes>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub compact_cap: bool,
    #[serde(default)]
    pub anchor_piece: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficient_seed: Option<u64>,
    #[serde(default)]
    pub multi_base: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub polytope: PolytopeSpec,
    pub partition: PartitionSpec,
    #[serde(default)]
    pub options: Options,
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let spec: JobSpec = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        spec.check_forms()?;
        Ok(spec)
    }

    fn check_forms(&self) -> Result<(), CliError> {
        let p = &self.polytope;
        if p.vertices.is_some() == p.halfspaces.is_some() {
            return Err(CliError::Input("polytope needs exactly one of `vertices` or `halfspaces`".into()));
        }
        let q = &self.partition;
        let forms = [q.pieces.is_some(), q.fan_rays.is_some(), q.hyperplanes.is_some()];
        if forms.iter().filter(|&&b| b).count() != 1 {
            return Err(CliError::Input("partition needs exactly one of `pieces`, `fan_rays` or `hyperplanes`".into()));
        }
        Ok(())
    }

    pub fn polytope(&self) -> Result<LatticePolytope, CliError> {
        let p = &self.polytope;
        if let Some(vs) = &p.vertices {
            let pts: Vec<Point> = vs.iter().map(|v| point(v)).collect();
            if pts.is_empty() {
                return Err(CliError::Input("`vertices` is empty".into()));
            }
            if pts.iter().any(|q| q.rank() != pts[0].rank()) {
                return Err(CliError::Input("vertices have different lengths".into()));
            }
            return LatticePolytope::from_vertices(&pts).map_err(|e| CliError::Input(format!("polytope: {e}")));
        }
        let hs = p.halfspaces.as_deref().unwrap_or_default();
        let rank = match (hs.first(), p.rank) {
            (Some(h), None) => h.normal.len(),
            (Some(h), Some(r)) if r != h.normal.len() => {
                return Err(CliError::Input(format!("`rank` is {r} but normals have length {}", h.normal.len())))
            }
            (_, Some(r)) => r,
            (None, None) => return Err(CliError::Input("`rank` is required when `halfspaces` is empty".into())),
        };
        let mut out = Vec::with_capacity(hs.len());
        for h in hs {
            if h.normal.len() != rank {
                return Err(CliError::Input("halfspace normals have different lengths".into()));
            }
            out.push(Halfspace::new(lattice(&h.normal, "halfspace normal")?, h.offset.0.clone()));
        }
        LatticePolytope::from_halfspaces(rank, &out).map_err(|e| CliError::Input(format!("polytope: {e}")))
    }

    /// Builds and validates the partition; invalid tilings are mathematical
    /// rejections, malformed data are input errors.
    pub fn partition(&self) -> Result<Partition, CliError> {
        let delta = self.polytope()?;
        let n = delta.rank();
        let q = &self.partition;
        let result = if let Some(pieces) = &q.pieces {
            let mut ps = Vec::with_capacity(pieces.len());
            for piece in pieces {
                let vs: Vec<LatticeVector> =
                    piece.iter().map(|v| lattice(v, "piece vertex")).collect::<Result<_, _>>()?;
                if vs.iter().any(|v| v.rank() != n) {
                    return Err(CliError::Input(format!("piece vertices must have length {n}")));
                }
                ps.push(vs);
            }
            Partition::from_pieces(delta, &ps)
        } else if let Some(rays) = &q.fan_rays {
            let rays: Vec<LatticeVector> = rays.iter().map(|v| lattice(v, "fan ray")).collect::<Result<_, _>>()?;
            if rays.iter().any(|v| v.rank() != n) {
                return Err(CliError::Input(format!("fan rays must have length {n}")));
            }
            Partition::from_fan_rays(delta, &rays)
        } else {
            let h = q.hyperplanes.as_ref().expect("checked by check_forms");
            let (m, offsets) = hyperplanes(h, n)?;
            Partition::from_hyperplanes(delta, &m, &offsets)
        };
        result.map_err(CliError::from_partition)
    }

    /// The hyperplanes `⟨m, x⟩ = c_i` of a `hyperplanes` partition.
    pub fn hyperplane_list(&self) -> Result<Option<(LatticeVector, Vec<BigInt>)>, CliError> {
        match &self.partition.hyperplanes {
            Some(h) => Ok(Some(hyperplanes(h, self.polytope()?.rank())?)),
            None => Ok(None),
        }
    }
}

fn hyperplanes(h: &Hyperplanes, n: usize) -> Result<(LatticeVector, Vec<BigInt>), CliError> {
    let list = h.as_slice();
    let first = list.first().ok_or_else(|| CliError::Input("`hyperplanes` is empty".into()))?;
    let m = lattice(&first.normal, "hyperplane normal")?;
    if m.rank() != n {
        return Err(CliError::Input(format!("hyperplane normal must have length {n}")));
    }
    if m.is_zero() {
        return Err(CliError::Input("hyperplane normal is zero".into()));
    }
    let mut offsets = Vec::new();
    for h in list {
        if lattice(&h.normal, "hyperplane normal")? != m {
            return Err(CliError::Input("all hyperplanes must share one normal".into()));
        }
        for c in &h.offsets {
            offsets.push(c.to_integer().ok_or_else(|| CliError::Input(format!("offset {} is not an integer", c.0)))?);
        }
    }
    Ok((m, offsets))
}

fn point(v: &[Num]) -> Point {
    Point(v.iter().map(|x| x.0.clone()).collect())
}

fn lattice(v: &[Num], what: &str) -> Result<LatticeVector, CliError> {
    v.iter()
        .map(|x| x.to_integer().ok_or_else(|| CliError::Input(format!("{what} entry {} is not an integer", x.0))))
        .collect::<Result<Vec<_>, _>>()
        .map(LatticeVector)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_vertex_and_piece_forms() {
        let s = JobSpec::parse(
            r#"{"polytope": {"vertices": [[0], [2]]},
                "partition": {"pieces": [[[0], [1]], [[1], [2]]]},
                "options": {"compact_cap": true}}"#,
        )
        .unwrap();
        assert!(s.options.compact_cap);
        assert_eq!(s.partition().unwrap().pieces().len(), 2);
    }

    #[test]
    fn big_integers_as_strings() {
        let s = JobSpec::parse(
            r#"{"polytope": {"halfspaces": [{"normal": [1], "offset": 0},
                                            {"normal": [-1], "offset": "100000000000000000000"}]},
                "partition": {"hyperplanes": {"normal": [1], "offsets": ["50000000000000000000"]}}}"#,
        )
        .unwrap();
        let g = s.partition().unwrap();
        assert_eq!(g.vertices().len(), 1);
    }

    #[test]
    fn forms_must_be_unique() {
        let both = r#"{"polytope": {"vertices": [[0]], "halfspaces": []}, "partition": {"fan_rays": [[1]]}}"#;
        assert!(matches!(JobSpec::parse(both), Err(CliError::Input(_))));
        let none = r#"{"polytope": {"vertices": [[0], [1]]}, "partition": {}}"#;
        assert!(matches!(JobSpec::parse(none), Err(CliError::Input(_))));
        let unknown = r#"{"polytope": {"vertices": [[0], [1]]}, "partition": {"fan_rays": [[1], [-1]]}, "extra": 1}"#;
        assert!(matches!(JobSpec::parse(unknown), Err(CliError::Parse { .. })));
    }

    #[test]
    fn malformed_json_reports_location() {
        match JobSpec::parse("{\n  \"polytope\": [") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn whole_space_needs_rank() {
        let s = JobSpec::parse(
            r#"{"polytope": {"halfspaces": []}, "partition": {"hyperplanes": {"normal": [1], "offsets": [0]}}}"#,
        )
        .unwrap();
        assert!(matches!(s.polytope(), Err(CliError::Input(_))));
        let s = JobSpec::parse(
            r#"{"polytope": {"halfspaces": [], "rank": 1}, "partition": {"hyperplanes": {"normal": [1], "offsets": [0, 1]}}}"#,
        )
        .unwrap();
        assert_eq!(s.partition().unwrap().pieces().len(), 3);
    }

    #[test]
    fn non_integral_offsets_are_input_errors() {
        let s = JobSpec::parse(
            r#"{"polytope": {"vertices": [[0], [2]]}, "partition": {"hyperplanes": {"normal": [1], "offsets": ["1/2"]}}}"#,
        )
        .unwrap();
        assert!(matches!(s.partition(), Err(CliError::Input(_))));
    }

    #[test]
    fn hyperplane_lists_share_a_normal() {
        let s = JobSpec::parse(
            r#"{"polytope": {"vertices": [[0], [4]]},
                "partition": {"hyperplanes": [{"normal": [1], "offsets": [1]}, {"normal": [1], "offsets": [2, 3]}]}}"#,
        )
        .unwrap();
        assert_eq!(s.partition().unwrap().pieces().len(), 4);
        let (_, offsets) = s.hyperplane_list().unwrap().unwrap();
        assert_eq!(offsets.len(), 3);
        let s = JobSpec::parse(
            r#"{"polytope": {"vertices": [[0, 0], [4, 0], [0, 4]]},
                "partition": {"hyperplanes": [{"normal": [1, 0], "offsets": [1]}, {"normal": [0, 1], "offsets": [1]}]}}"#,
        )
        .unwrap();
        assert!(matches!(s.partition(), Err(CliError::Input(_))));
    }
}
