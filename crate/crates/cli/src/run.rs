use std::sync::Arc;

use rayon::prelude::*;

use toricdegen::{
    build_report, family_equations, iterated_lift, lift_polytope, lifting_function, minimal_integral_lifting,
    CoefficientChoice, CompactCap, Partition, TreeOrder,
};

use crate::error::CliError;
use crate::render;
use crate::report::{ClassificationReport, DegenerationSummary, LiftReport, LiftingReport, MultiBaseReport, Report};
use crate::spec::JobSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Verify,
    Lift,
    Degenerate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Lift => "lift",
            Command::Degenerate => "degenerate",
        }
    }
}

/// Command-line overrides of the options stored in the job itself.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub compact_cap: bool,
    pub anchor: Option<usize>,
    pub seed: Option<u64>,
    pub multi_base: bool,
    pub dot: bool,
    pub svg: bool,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    /// 0, or 1 when `verify` found the partition not semi-stable.
    pub exit_code: u8,
    pub dot: Option<String>,
    pub svg: Option<String>,
}

pub fn run_job(command: Command, input: &str, text: &str, o: &Overrides) -> Result<Outcome, CliError> {
    let spec = JobSpec::parse(text)?;
    let compact_cap = o.compact_cap || spec.options.compact_cap;
    let anchor = o.anchor.unwrap_or(spec.options.anchor_piece);
    let seed = o.seed.or(spec.options.coefficient_seed);
    let multi_base = o.multi_base || spec.options.multi_base;

    let g = Arc::new(spec.partition()?);
    if anchor >= g.pieces().len() {
        return Err(CliError::Input(format!("anchor piece {anchor} out of range (have {})", g.pieces().len())));
    }
    let mut report = Report {
        command: command.name().into(),
        input: input.into(),
        classification: ClassificationReport::new(&g, g.classify()),
        lift: None,
        degeneration: None,
    };
    let dot = o.dot.then(|| render::dual_graph_dot(&g));
    let svg = if o.svg { Some(render::partition_svg(&g)?) } else { None };
    let semistable = report.classification.semistable;
    if command == Command::Verify {
        return Ok(Outcome { report, exit_code: u8::from(!semistable), dot, svg });
    }
    if !semistable {
        let w = g.classify().witness.as_ref();
        return Err(CliError::Rejected {
            stage: "partition",
            message: w.map_or_else(|| "not semi-stable".into(), |w| format!("not semi-stable: {w}")),
            witness: w.map(Into::into),
        });
    }

    let rational = lifting_function(Arc::clone(&g), anchor, TreeOrder::BreadthFirst).map_err(CliError::from_lifting)?;
    let integral = minimal_integral_lifting(&rational).map_err(CliError::from_lifting)?;
    let cap = if compact_cap {
        if !g.ambient().is_compact() {
            return Err(CliError::Input("a compact cap needs a compact polytope".into()));
        }
        Some(CompactCap::above(&integral.function, None).map_err(CliError::from_lifting)?)
    } else {
        None
    };
    let lifted = lift_polytope(&integral.function, cap).map_err(CliError::from_lifting)?;
    let multi = if multi_base { Some(multi_base_report(&spec, &g)?) } else { None };
    report.lift = Some(LiftReport::new(LiftingReport::new(anchor, rational.pieces(), &integral), &lifted, multi));

    if command == Command::Degenerate {
        let r = build_report(&lifted).map_err(CliError::from_degeneration)?;
        let family = if g.ambient().is_compact() {
            let choice = seed.map_or(CoefficientChoice::Symbolic, CoefficientChoice::Seeded);
            Some(family_equations(&lifted, anchor, &choice).map_err(CliError::from_degeneration)?)
        } else {
            None
        };
        report.degeneration = Some(DegenerationSummary::new(&r, family.as_ref()));
    }
    Ok(Outcome { report, exit_code: 0, dot, svg })
}

fn multi_base_report(spec: &JobSpec, g: &Partition) -> Result<MultiBaseReport, CliError> {
    let (m, offsets) =
        spec.hyperplane_list()?.ok_or_else(|| CliError::Input("multi_base needs a `hyperplanes` partition".into()))?;
    let list: Vec<_> = offsets.into_iter().map(|c| (m.clone(), c)).collect();
    let it = iterated_lift(g.ambient(), &list).map_err(CliError::from_lifting)?;
    Ok((&it).into())
}

/// Runs independent jobs in parallel; results keep the input order.
pub fn run_batch(command: Command, jobs: &[(String, String)], o: &Overrides) -> Vec<Result<Outcome, CliError>> {
    jobs.par_iter().map(|(input, text)| run_job(command, input, text, o)).collect()
}
