//! Randomized verification of the class-𝓗 axioms: decreasing to
//! decreasing, HLP-monotone, and the restricted lower estimate
//! Sχ_(0,t) ≤ STχ_(0,t).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus;
use crate::error::Result;
use crate::operators::OperatorSpec;
use crate::phifun::EvaluationGrid;
use crate::profile::Profile;
use crate::stepfn::StepFunction;

pub const DECREASING_TOL: f64 = 1e-10;
pub const HLP_TOL: f64 = 1e-8;
pub const RLE_TOL: f64 = 1e-10;
pub const POINTWISE_TOL: f64 = 1e-10;
const MAX_WITNESSES: usize = 10;

/// Log mesh on which images are tabulated.
pub fn mesh() -> EvaluationGrid {
    EvaluationGrid { t_min: 1e-6, t_max: 1e6, count: 2000 }
}

/// Points t at which the restricted lower estimate is tested.
pub fn rle_points() -> Vec<f64> {
    crate::search::geomspace(1e-4, 1e4, 41)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Decreasing,
    Hlp,
    Rle,
    PointwiseDomination,
    AdjointTransfer,
}

/// A failing input with the two sides that were compared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub function: StepFunction,
    pub at: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub axiom: Axiom,
    pub pass: bool,
    pub checked: usize,
    pub failures: usize,
    pub tolerance: f64,
    pub witnesses: Vec<Witness>,
    /// Inputs on which T could not be evaluated.
    pub errors: Vec<String>,
    pub mesh: Option<EvaluationGrid>,
}

impl Section {
    fn collect(axiom: Axiom, tolerance: f64, mesh: Option<EvaluationGrid>, outcomes: Vec<Result<Option<Witness>>>) -> Self {
        let checked = outcomes.len();
        let mut witnesses = Vec::new();
        let mut errors = Vec::new();
        let mut failures = 0;
        for o in outcomes {
            match o {
                Ok(None) => {}
                Ok(Some(w)) => {
                    failures += 1;
                    if witnesses.len() < MAX_WITNESSES {
                        witnesses.push(w);
                    }
                }
                Err(e) => {
                    failures += 1;
                    errors.push(e.to_string());
                }
            }
        }
        Section { axiom, pass: failures == 0, checked, failures, tolerance, witnesses, errors, mesh }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassHReport {
    pub operator: OperatorSpec,
    pub seed: u64,
    pub corpus_size: usize,
    pub sections: Vec<Section>,
    pub pass: bool,
}

impl ClassHReport {
    pub fn section(&self, axiom: Axiom) -> Option<&Section> {
        self.sections.iter().find(|s| s.axiom == axiom)
    }
}

/// Tf ≥ 0 and nonincreasing on the mesh for every decreasing f in the corpus.
pub fn verify_decreasing(op: &OperatorSpec, corpus_size: usize, seed: u64) -> Section {
    let xs = mesh().points();
    let outcomes = corpus::decreasing_steps(corpus_size, seed)
        .par_iter()
        .map(|f| {
            let h = op.image(f.as_step())?;
            let mut prev = f64::INFINITY;
            for &x in &xs {
                let v = h.value(x)?;
                let bad_sign = v < -DECREASING_TOL;
                let rises = prev.is_finite() && v > prev + DECREASING_TOL * prev.abs().max(1.0);
                if bad_sign || rises {
                    let rhs = if bad_sign { 0.0 } else { prev };
                    return Ok(Some(Witness { function: f.as_step().clone(), at: x, lhs: v, rhs }));
                }
                prev = v;
            }
            Ok(None)
        })
        .collect();
    Section::collect(Axiom::Decreasing, DECREASING_TOL, Some(mesh()), outcomes)
}

/// Cell averages of a profile on the mesh, as a step function (the first
/// cell is (0, x₀]).
fn cell_averages(h: &Profile, xs: &[f64]) -> Result<StepFunction> {
    let p = h.primitives_on(xs)?;
    let mut vals = Vec::with_capacity(xs.len());
    vals.push((p[0] / xs[0]).max(0.0));
    for i in 1..xs.len() {
        vals.push(((p[i] - p[i - 1]) / (xs[i] - xs[i - 1])).max(0.0));
    }
    StepFunction::new(xs.to_vec(), vals)
}

/// Tf ≺ Tf*, with both sides tabulated as cell averages on the mesh and
/// rearranged as steps.
pub fn verify_hlp(op: &OperatorSpec, corpus_size: usize, seed: u64) -> Section {
    let xs = mesh().points();
    let outcomes = corpus::steps(corpus_size, seed)
        .par_iter()
        .map(|f| {
            let a = cell_averages(&op.image(f)?, &xs)?;
            let b = cell_averages(&op.image(f.rearrange().as_step())?, &xs)?;
            Ok(a.hlp_violation(&b, HLP_TOL).map(|(at, lhs, rhs)| Witness { function: f.clone(), at, lhs, rhs }))
        })
        .collect();
    Section::collect(Axiom::Hlp, HLP_TOL, Some(mesh()), outcomes)
}

/// Tf ≤ Tf* pointwise on the grid. Not an axiom; S′ fails it.
pub fn verify_pointwise(op: &OperatorSpec, functions: &[StepFunction], grid: &EvaluationGrid) -> Section {
    let xs = grid.points();
    let outcomes = functions
        .par_iter()
        .map(|f| {
            let a = op.image(f)?;
            let b = op.image(f.rearrange().as_step())?;
            for &x in &xs {
                let (l, r) = (a.value(x)?, b.value(x)?);
                if l > r + POINTWISE_TOL * r.abs().max(1.0) {
                    return Ok(Some(Witness { function: f.clone(), at: x, lhs: l, rhs: r }));
                }
            }
            Ok(None)
        })
        .collect();
    Section::collect(Axiom::PointwiseDomination, POINTWISE_TOL, Some(*grid), outcomes)
}

/// Sχ_(0,t)(s) ≤ STχ_(0,t)(s) + 1e-10 for t in `ts` and s on the grid.
pub fn verify_rle(op: &OperatorSpec, ts: &[f64], grid: &EvaluationGrid) -> Section {
    let xs = grid.points();
    let outcomes = ts
        .par_iter()
        .map(|&t| {
            let chi = StepFunction::indicator(0.0, t)?;
            let prim = op.image(&chi)?.primitives_on(&xs)?;
            for (&s, p) in xs.iter().zip(prim) {
                let lhs = (t / s).min(1.0);
                let rhs = p / s;
                if lhs > rhs + RLE_TOL {
                    return Ok(Some(Witness { function: chi, at: s, lhs, rhs }));
                }
            }
            Ok(None)
        })
        .collect();
    Section::collect(Axiom::Rle, RLE_TOL, Some(*grid), outcomes)
}

/// g ≺ T′g for decreasing g in the corpus, primitives compared on the mesh
/// and at the breakpoints of g.
pub fn verify_adjoint_transfer(op: &OperatorSpec, corpus_size: usize, seed: u64) -> Section {
    let transpose = op.transpose();
    let mesh_pts = mesh().points();
    let outcomes = corpus::decreasing_steps(corpus_size, seed)
        .par_iter()
        .map(|g| {
            let h = transpose.image(g.as_step())?;
            let mut xs: Vec<f64> = mesh_pts.iter().chain(g.breakpoints()).copied().collect();
            xs.sort_by(f64::total_cmp);
            xs.dedup();
            let prim = h.primitives_on(&xs)?;
            let gp = g.primitive();
            for (&x, p) in xs.iter().zip(prim) {
                let lhs = gp.eval(x);
                if lhs > p + HLP_TOL * lhs.max(1.0) {
                    return Ok(Some(Witness { function: g.as_step().clone(), at: x, lhs, rhs: p }));
                }
            }
            Ok(None)
        })
        .collect();
    Section::collect(Axiom::AdjointTransfer, HLP_TOL, Some(mesh()), outcomes)
}

/// All three axioms.
pub fn verify(op: &OperatorSpec, corpus_size: usize, seed: u64) -> ClassHReport {
    let sections = vec![
        verify_decreasing(op, corpus_size, seed),
        verify_hlp(op, corpus_size, seed),
        verify_rle(op, &rle_points(), &EvaluationGrid::default()),
    ];
    let pass = sections.iter().all(|s| s.pass);
    ClassHReport { operator: op.clone(), seed, corpus_size, sections, pass }
}

/// αT + βU; class 𝓗 is expected when α + β ≥ 1.
pub fn verify_combo_closure(
    t: &OperatorSpec,
    u: &OperatorSpec,
    alpha: f64,
    beta: f64,
    corpus_size: usize,
    seed: u64,
) -> ClassHReport {
    verify(&OperatorSpec::combo(alpha, t.clone(), beta, u.clone()), corpus_size, seed)
}
