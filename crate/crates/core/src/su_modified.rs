//! The generator over all candidate matrices, and the reconstruction that
//! turns an avoider into a circuit for `P` itself.
//!
//! For a candidate `A`, `C'` is the curve-learning circuit `i ↦ P(A^i·v)`,
//! `C''` computes discrete logs `x ↦ k` with `A^k·1 = x`, and
//! `C_A(x) = C'(C''(x) − C''(v))`, with `C_A(0) = P(0)` hardwired.

use std::cell::RefCell;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::matrix::{lex_index, lex_point, pack};
use crate::algebra::{Fe, Field, Matrix, PowerLadder, TruthTable};
use crate::decoding::dlcorr::FixedDlcorr;
use crate::decoding::isclose::is_close;
use crate::decoding::pcorr::FixedPcorr;
use crate::error::{Error, Result};
use crate::genmatrix::{build_candidate_set, CandidateSet, OrbitTable};
use crate::hitting::{HittingSet, Union};
use crate::oracle::Distinguisher;
use crate::owp_prg::{invert, CryptoG, HybridPredictor, IndexPermutation, InvertConfig, Sign};
use crate::rng::point_stream;
use crate::su_hsg::{
    rsu_reconstruct, DistinguisherPredictor, ElementPredictor, Hsu, PlantedPredictor, RsuCircuit, RsuConfig, SuParams,
    WalkMode,
};

/// Per candidate `A`, the SU part followed by the `CryptoG^(f_A)` part.
pub struct CombinedHittingSet {
    pub matrices: Vec<Matrix>,
    union: Union<'static>,
}

impl CombinedHittingSet {
    pub fn new(table: &Arc<TruthTable>, candidates: &CandidateSet, big_m: usize) -> Result<Self> {
        let mut parts: Vec<Box<dyn HittingSet>> = Vec::new();
        let mut matrices = Vec::new();
        for g in &candidates.matrices {
            let perm = Arc::new(IndexPermutation::new(table.field(), &g.a)?);
            parts.push(Box::new(Hsu::new(table, &g.a, big_m)?));
            parts.push(Box::new(CryptoG::new(&perm, big_m)?));
            matrices.push(g.a.clone());
        }
        Ok(CombinedHittingSet { matrices, union: Union::new(big_m, parts) })
    }

    /// The SU part (`part = 0`) or the CryptoG part (`part = 1`) of a
    /// candidate.
    pub fn part(&self, candidate: usize, part: usize) -> &dyn HittingSet {
        &*self.union.parts()[2 * candidate + part]
    }
}

impl HittingSet for CombinedHittingSet {
    fn bits(&self) -> usize {
        self.union.bits()
    }

    fn count(&self) -> u64 {
        self.union.count()
    }

    fn get(&self, idx: u64) -> u64 {
        self.union.get(idx)
    }
}

pub fn modified_generate(table: &Arc<TruthTable>, params: &SuParams) -> Result<CombinedHittingSet> {
    if table.p() != params.p || table.m() != params.m {
        return Err(Error::Usage("table does not match the parameters".into()));
    }
    let set = build_candidate_set(table.field(), params.m)?;
    CombinedHittingSet::new(table, &set, params.big_m)
}

/// `i` with `A^i·v = x`, from `j = C''(v)` and `k = C''(x)`.
pub fn shift_exponent(j: u64, k: u64, order: u64) -> u64 {
    if j < k {
        k - j
    } else {
        order - (j - k)
    }
}

pub fn exponent_shift(c2: &dyn Fn(&[Fe]) -> Option<u64>, v: &[Fe], x: &[Fe], order: u64) -> Option<u64> {
    Some(shift_exponent(c2(v)?, c2(x)?, order))
}

/// Candidate matrices with their orbit tables and power ladders.
pub struct SuContext {
    pub field: Arc<Field>,
    pub m: usize,
    pub candidates: CandidateSet,
    orbits: Vec<Arc<OrbitTable>>,
    ladders: Vec<Arc<PowerLadder>>,
}

impl SuContext {
    pub fn new(field: &Arc<Field>, m: usize) -> Result<Self> {
        let candidates = build_candidate_set(field, m)?;
        let orbits = candidates.matrices.iter().map(|g| OrbitTable::new(field, &g.a).map(Arc::new)).collect::<Result<_>>()?;
        let ladders = candidates.matrices.iter().map(|g| Arc::new(PowerLadder::for_order(field, &g.a))).collect();
        Ok(SuContext { field: field.clone(), m, candidates, orbits, ladders })
    }

    pub fn order(&self) -> u64 {
        (self.field.size() as u64).pow(self.m as u32) - 1
    }
}

/// Where the next-element predictions and the inversions come from.
#[derive(Clone, Copy)]
pub enum Avoider<'a> {
    /// Both derived from a distinguisher.
    Genuine(&'a dyn Distinguisher),
    /// Fixture: predictions read from `P`, inversions from the orbit table.
    Planted,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModifiedConfig {
    pub rsu: RsuConfig,
    pub walk: WalkMode,
    /// Shifts tried by `C''` per query.
    pub dl_reps: usize,
    /// Predictor instances per stride, genuine mode.
    pub predictor_instances: usize,
    pub pcorr_votes: usize,
    pub spot_checks: usize,
    /// Evaluate `C_A` on all of F_p^m at once.
    pub tabulate: bool,
}

impl ModifiedConfig {
    pub fn for_params(params: &SuParams) -> Self {
        let lp = params.p.trailing_zeros() as usize;
        ModifiedConfig {
            rsu: RsuConfig::default(),
            walk: WalkMode::Digits,
            dl_reps: 48 * params.m * lp,
            predictor_instances: 2 * params.big_m,
            pcorr_votes: 5,
            spot_checks: 100,
            tabulate: false,
        }
    }
}

/// `C''`: discrete logs through `dlcorr` with its shifts fixed.
struct DlogCircuit<'a> {
    field: Arc<Field>,
    ladder: Arc<PowerLadder>,
    oracle: Box<dyn Fn(&[Fe]) -> Option<u64> + 'a>,
    dl: FixedDlcorr,
}

impl DlogCircuit<'_> {
    fn eval(&self, x: &[Fe]) -> Option<u64> {
        self.dl.eval(&self.field, &self.ladder, &*self.oracle, x).found()
    }
}

/// `C_A`.
struct CandidateCircuit<'a> {
    p: usize,
    m: usize,
    p0: Fe,
    order: u64,
    walk: WalkMode,
    rsu: RsuCircuit<'a>,
    dlog: DlogCircuit<'a>,
    /// `C''(v)`.
    j: Option<u64>,
    /// `C_A` on every point, lexicographic order.
    table: Option<Vec<Option<Fe>>>,
}

impl CandidateCircuit<'_> {
    fn eval(&self, x: &[Fe]) -> Option<Fe> {
        if let Some(t) = &self.table {
            return t[lex_index(self.p, x)];
        }
        if x.iter().all(|c| c.is_zero()) {
            return Some(self.p0);
        }
        let i = shift_exponent(self.j?, self.dlog.eval(x)?, self.order);
        self.rsu.eval(i)
    }

    fn materialize(&mut self) {
        let n = (self.order + 1) as usize;
        let along = self.rsu.table(self.walk);
        let table = (0..n)
            .map(|idx| {
                if idx == 0 {
                    return Some(self.p0);
                }
                let along = along.as_ref()?;
                let k = self.dlog.eval(&lex_point(self.p, self.m, idx))?;
                Some(along[shift_exponent(self.j?, k, self.order) as usize - 1])
            })
            .collect();
        self.table = Some(table);
    }
}

/// The reconstructed circuit: majority `pcorr` over the selected `C_A`,
/// with fixed directions.
pub struct ReconCircuit<'a> {
    field: Arc<Field>,
    /// Index of the selected candidate.
    pub candidate: usize,
    pub a: Matrix,
    close: CandidateCircuit<'a>,
    corrector: FixedPcorr,
    table: RefCell<Option<Vec<Fe>>>,
}

impl ReconCircuit<'_> {
    pub fn eval(&self, x: &[Fe]) -> Fe {
        if let Some(t) = &*self.table.borrow() {
            return t[lex_index(self.field.size(), x)];
        }
        let g = |y: &[Fe]| self.close.eval(y).unwrap_or(Fe::ZERO);
        self.corrector.eval(&self.field, &g, x)
    }

    /// Values on all of F_p^m in lexicographic order; cached.
    pub fn tabulate(&self) -> Vec<Fe> {
        if let Some(t) = &*self.table.borrow() {
            return t.clone();
        }
        let p = self.field.size();
        let m = self.close.m;
        let t: Vec<Fe> = match &self.close.table {
            Some(close) => {
                let g: Vec<Fe> = close.iter().map(|v| v.unwrap_or(Fe::ZERO)).collect();
                self.corrector.tabulate(&self.field, m, &g)
            }
            None => (0..p.pow(m as u32)).map(|idx| self.eval(&lex_point(p, m, idx))).collect(),
        };
        *self.table.borrow_mut() = Some(t.clone());
        t
    }

    /// Learning steps spent by `C'`.
    pub fn learn_calls(&self) -> u64 {
        self.close.rsu.learn_calls()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CandidateStatus {
    /// Curve learning failed or could not start.
    RsuFailed(String),
    /// `C_A` failed the closeness test.
    Rejected,
    Selected,
    /// The final spot check failed for the selected candidate.
    SpotCheckFailed,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateReport {
    pub index: usize,
    pub generator: bool,
    pub status: CandidateStatus,
}

pub struct ModifiedOutcome<'a> {
    pub circuit: Option<ReconCircuit<'a>>,
    pub candidates: Vec<CandidateReport>,
}

/// Tries the candidates in order and returns the first `C_A` that passes
/// `IsClose` with `delta = 1/(4·|S|·p^m)`, wrapped in majority `pcorr`,
/// provided it also matches `P` on `spot_checks` random points.
pub fn modified_reconstruct<'a, R: Rng + ?Sized>(
    ctx: &SuContext,
    p_oracle: &'a dyn Fn(&[Fe]) -> Fe,
    avoider: Avoider<'a>,
    params: &SuParams,
    cfg: &ModifiedConfig,
    rng: &mut R,
) -> Result<ModifiedOutcome<'a>> {
    let field = &ctx.field;
    let f = &**field;
    let (p, m) = (params.p, params.m);
    if f.size() != p || ctx.m != m {
        return Err(Error::Usage("context does not match the parameters".into()));
    }
    params.check_decodable()?;
    let order = ctx.order();
    let zero = vec![Fe::ZERO; m];
    let p0 = p_oracle(&zero);
    let delta = 1.0 / (4.0 * ctx.candidates.len() as f64 * (order + 1) as f64);
    let mut reports = Vec::new();
    for (idx, g) in ctx.candidates.matrices.iter().enumerate() {
        let report = |status| CandidateReport { index: idx, generator: g.verified, status };
        let a = &g.a;
        let orbit = &ctx.orbits[idx];
        let (predictor, oracle): (Box<dyn ElementPredictor + 'a>, Box<dyn Fn(&[Fe]) -> Option<u64> + 'a>) = match avoider
        {
            Avoider::Planted => {
                let orbit = orbit.clone();
                let k = f.k();
                (
                    Box::new(PlantedPredictor { oracle: p_oracle }),
                    Box::new(move |x: &[Fe]| orbit.dlog.get(&pack(k, x)).copied()),
                )
            }
            Avoider::Genuine(d) => {
                let perm = Arc::new(IndexPermutation::new(field, a)?);
                let inv = InvertConfig::for_advantage(1.0 / params.big_m as f64, params.big_m);
                let big_m = params.big_m;
                let key: u64 = rng.gen();
                let inverter = move |x: &[Fe]| {
                    let y = pack(perm.field().k(), x);
                    let pred = HybridPredictor { perm: &perm, d, big_m, sign: Sign::Uniform };
                    let mut r = point_stream(key, y);
                    invert(&perm, &pred, y, &inv, &mut r).ok().flatten().filter(|&z| z != 0)
                };
                (
                    Box::new(DistinguisherPredictor::new(d, field, params, cfg.predictor_instances, rng)),
                    Box::new(inverter),
                )
            }
        };
        let rsu = match rsu_reconstruct(field, p_oracle, predictor, a, orbit, params, &cfg.rsu, rng) {
            Ok(Some(c)) => c,
            Ok(None) => {
                reports.push(report(CandidateStatus::RsuFailed("learning failed".into())));
                continue;
            }
            Err(e) => {
                reports.push(report(CandidateStatus::RsuFailed(e.to_string())));
                continue;
            }
        };
        let ladder = ctx.ladders[idx].clone();
        let dl = FixedDlcorr::new(f, &ladder, cfg.dl_reps, rng);
        let dlog = DlogCircuit { field: field.clone(), ladder, oracle, dl };
        let j = dlog.eval(&rsu.v);
        let mut close = CandidateCircuit { p, m, p0, order, walk: cfg.walk, rsu, dlog, j, table: None };
        // no valid field element equals u32::MAX, so a failed C_A never agrees
        let passed = is_close(
            f,
            m,
            &mut |x| close.eval(x).unwrap_or(Fe(u32::MAX)),
            delta,
            &mut |x| p_oracle(x),
            rng,
        );
        if !passed {
            reports.push(report(CandidateStatus::Rejected));
            continue;
        }
        if cfg.tabulate {
            close.materialize();
        }
        let circuit = ReconCircuit {
            field: field.clone(),
            candidate: idx,
            a: a.clone(),
            corrector: FixedPcorr::new(f, m, params.delta, cfg.pcorr_votes, rng),
            close,
            table: RefCell::new(None),
        };
        if cfg.tabulate {
            circuit.tabulate();
        }
        let spot_ok = (0..cfg.spot_checks).all(|_| {
            let x: Vec<Fe> = (0..m).map(|_| f.random(rng)).collect();
            circuit.eval(&x) == p_oracle(&x)
        });
        if !spot_ok {
            reports.push(report(CandidateStatus::SpotCheckFailed));
            return Ok(ModifiedOutcome { circuit: None, candidates: reports });
        }
        reports.push(report(CandidateStatus::Selected));
        return Ok(ModifiedOutcome { circuit: Some(circuit), candidates: reports });
    }
    Ok(ModifiedOutcome { circuit: None, candidates: reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_examples() {
        let f = Field::gf(2).unwrap();
        let a = Matrix::from_rows(vec![vec![f.x()]]).unwrap();
        let orbit = OrbitTable::new(&f, &a).unwrap();
        let c2 = |x: &[Fe]| orbit.dlog.get(&pack(2, x)).copied();
        let (x, x1) = (vec![Fe(2)], vec![Fe(3)]);
        assert_eq!(exponent_shift(&c2, &x, &x, 3), Some(3));
        assert_eq!(exponent_shift(&c2, &x, &x1, 3), Some(1));
        assert_eq!(exponent_shift(&c2, &x1, &x, 3), Some(2));
        assert_eq!(a.pow(&f, 2).mul_vec(&f, &x1), x);
    }
}
