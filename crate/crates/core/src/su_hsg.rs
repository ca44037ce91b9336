//! The Shaltiel–Umans generator over a truth table and a generator matrix,
//! and its reconstruction by interleaved curve learning.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::matrix::{ip2, lex_index, pack, unpack};
use crate::algebra::{Curve, Fe, Field, Matrix, PowerLadder, TruthTable, UniPoly};
use crate::decoding::fit::fits_full;
use crate::decoding::hadamard::decode_values;
use crate::decoding::sudan::{sudan_list_decode, AgreementThreshold};
use crate::error::{Error, Result};
use crate::genmatrix::OrbitTable;
use crate::hitting::HittingSet;
use crate::oracle::Distinguisher;
use crate::rng::keyed_hash;

fn log2p(p: usize) -> usize {
    p.trailing_zeros() as usize
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuParams {
    pub p: usize,
    pub m: usize,
    pub big_m: usize,
    pub delta: usize,
    /// Reference points per curve intersection.
    pub r: usize,
    /// Curve degree, `(m+1)·r − 1`.
    pub v: usize,
    /// Predictor list quality.
    pub rho: f64,
}

impl SuParams {
    /// Defaults `r = 2·m·log p`, `rho = 1/(8·M²·m·log p)`.
    pub fn new(p: usize, m: usize, big_m: usize, delta: usize) -> Result<Self> {
        if !p.is_power_of_two() || p < 2 || m == 0 || big_m == 0 || big_m > 64 {
            return Err(Error::Usage(format!("bad parameters p = {p}, m = {m}, M = {big_m}")));
        }
        let lp = log2p(p);
        let r = 2 * m * lp;
        let rho = 1.0 / (8.0 * (big_m * big_m * m * lp) as f64);
        Ok(SuParams { p, m, big_m, delta, r, v: (m + 1) * r - 1, rho })
    }

    pub fn with_r(mut self, r: usize) -> Self {
        self.r = r.max(1);
        self.v = (self.m + 1) * self.r - 1;
        self
    }

    /// Desk-scale parameters: the largest `r` up to the default for which
    /// curves remain decodable and fit in the field.
    pub fn relaxed(p: usize, m: usize, big_m: usize, delta: usize) -> Result<Self> {
        let base = Self::new(p, m, big_m, delta)?;
        (1..=base.r)
            .rev()
            .map(|r| base.clone().with_r(r))
            .find(|s| s.check_decodable().is_ok() && (m + 1) * s.r <= p)
            .ok_or_else(|| Error::Precondition(format!("no decodable curve degree for p = {p}, m = {m}, delta = {delta}")))
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    /// `p > Δ²·m⁷·M⁹`.
    pub fn paper_regime(&self) -> bool {
        let rhs = (self.delta as f64).powi(2) * (self.m as f64).powi(7) * (self.big_m as f64).powi(9);
        (self.p as f64) > rhs
    }

    /// Length of a predictor list, `rho^-2`, never more than `p`.
    pub fn list_size(&self) -> usize {
        ((1.0 / (self.rho * self.rho)).ceil() as usize).clamp(1, self.p)
    }

    /// `(v/(rho·p))^(v/2) + 8·rho^-3·(v·Δ/p)^r`, the failure bound of one
    /// curve-learning step.
    pub fn eps_lnc(&self) -> f64 {
        let (v, p) = (self.v as f64, self.p as f64);
        (v / (self.rho * p)).powf(v / 2.0) + 8.0 * self.rho.powi(-3) * (v * self.delta as f64 / p).powi(self.r as i32)
    }

    /// Degree of `P` restricted to a curve.
    pub fn curve_degree(&self) -> usize {
        self.delta * self.v
    }

    /// Errors unless a curve table with every value right can be decoded,
    /// which needs `p > 2·Δ·v` agreement out of `p` pairs.
    pub fn check_decodable(&self) -> Result<()> {
        let a = AgreementThreshold::minimal(self.p, self.curve_degree()).a;
        if a > self.p {
            return Err(Error::Precondition(format!(
                "curves of degree {} cannot be list-decoded over {} points (need agreement {a})",
                self.curve_degree(),
                self.p
            )));
        }
        Ok(())
    }

    /// `m·p^(m+1)`.
    pub fn hsu_count(&self) -> u64 {
        self.m as u64 * (self.p as u64).pow(self.m as u32 + 1)
    }
}

/// `(P(B·x), P(B²·x), …, P(B^M·x))` with `B = A^(p^j)`.
pub fn p_ary_prg(table: &TruthTable, a: &Matrix, j: usize, x: &[Fe], big_m: usize) -> Vec<Fe> {
    let f = &**table.field();
    let b = a.pow(f, (table.p() as u64).pow(j as u32));
    let mut w = x.to_vec();
    let mut out = Vec::with_capacity(big_m);
    for _ in 0..big_m {
        w = b.mul_vec(f, &w);
        out.push(table.eval(&w));
    }
    out
}

/// The union over strides `j`, seeds `x ∈ F_p^m`, and `r ∈ {0,1}^(log p)`
/// of `(<P(B_j^k·x), r>)_(k=1..M)`. Entry index `(j·p^m + x)·p + r`, with
/// `x` the packed integer of the vector.
#[derive(Clone, Debug)]
pub struct Hsu {
    table: Arc<TruthTable>,
    strides: Vec<Matrix>,
    big_m: usize,
}

impl Hsu {
    pub fn new(table: &Arc<TruthTable>, a: &Matrix, big_m: usize) -> Result<Self> {
        if big_m == 0 || big_m > 64 {
            return Err(Error::Usage(format!("M = {big_m} outside 1..=64")));
        }
        let f = &**table.field();
        let p = table.p() as u64;
        let strides = (0..table.m()).map(|j| a.pow(f, p.pow(j as u32))).collect();
        Ok(Hsu { table: table.clone(), strides, big_m })
    }

    pub fn entry(&self, j: usize, x: &[Fe], r: u64) -> u64 {
        let f = &**self.table.field();
        let b = &self.strides[j];
        let mut w = x.to_vec();
        let mut next = vec![Fe::ZERO; w.len()];
        let mut out = 0u64;
        for k in 0..self.big_m {
            b.mul_vec_into(f, &w, &mut next);
            std::mem::swap(&mut w, &mut next);
            out |= (ip2(self.table.eval(&w).0 as u64, r) as u64) << k;
        }
        out
    }
}

impl HittingSet for Hsu {
    fn bits(&self) -> usize {
        self.big_m
    }

    fn count(&self) -> u64 {
        let p = self.table.p() as u64;
        self.table.m() as u64 * p.pow(self.table.m() as u32 + 1)
    }

    fn get(&self, idx: u64) -> u64 {
        let p = self.table.p() as u64;
        let pm = p.pow(self.table.m() as u32);
        let r = idx % p;
        let x = (idx / p) % pm;
        let j = (idx / p / pm) as usize;
        let k = self.table.field().k();
        self.entry(j, &unpack(k, self.table.m(), x), r)
    }
}

pub fn hsu_generate(table: &Arc<TruthTable>, a: &Matrix, params: &SuParams) -> Result<Hsu> {
    if table.p() != params.p || table.m() != params.m {
        return Err(Error::Usage("table does not match the parameters".into()));
    }
    Hsu::new(table, a, params.big_m)
}

/// A list-valued guess for the next symbol of the p-ary generator with
/// stride `j`. `history[k−1]` is `u_k = P(A^(−k·p^j)·x)` for
/// `k = 1..M−1`; `target` is `x` itself, which only test fixtures read.
pub trait ElementPredictor {
    /// Appends the guesses to `out`.
    fn predict(&self, j: usize, history: &[Fe], target: &[Fe], out: &mut Vec<Fe>);
}

/// Answers `[P(target)]`. Test fixture standing in for a perfect predictor.
pub struct PlantedPredictor<'a> {
    pub oracle: &'a dyn Fn(&[Fe]) -> Fe,
}

impl ElementPredictor for PlantedPredictor<'_> {
    fn predict(&self, _: usize, _: &[Fe], target: &[Fe], out: &mut Vec<Fe>) {
        out.push((self.oracle)(target));
    }
}

/// The next-element predictor obtained from a distinguisher.
///
/// Each of `instances` fixed instances has a position `i ∈ [1, M]` and a
/// key. For each `r ∈ {0,1}^(log p)` it builds the string whose position
/// `i' < i` is `<u_(i−i'), r>`, whose position `i` is a key-derived bit `b`
/// and whose later positions are key-derived bits, then predicts `b` when
/// `D` rejects and `1 − b` otherwise. The predictions are Hadamard-decoded
/// at advantage `gamma`; the union over instances is truncated to
/// `list_size` entries.
pub struct DistinguisherPredictor<'a> {
    pub d: &'a dyn Distinguisher,
    pub field: Arc<Field>,
    pub big_m: usize,
    pub gamma: f64,
    pub list_size: usize,
    /// Per stride, the `(i, key)` of every instance.
    pub instances: Vec<Vec<(usize, u64)>>,
}

impl<'a> DistinguisherPredictor<'a> {
    pub fn new<R: Rng + ?Sized>(
        d: &'a dyn Distinguisher,
        field: &Arc<Field>,
        params: &SuParams,
        instances: usize,
        rng: &mut R,
    ) -> Self {
        let big_m = params.big_m;
        let instances = (0..params.m)
            .map(|_| (0..instances.max(1)).map(|_| (rng.gen_range(1..=big_m), rng.gen())).collect())
            .collect();
        DistinguisherPredictor {
            d,
            field: field.clone(),
            big_m,
            gamma: 1.0 / (big_m * big_m) as f64,
            list_size: params.list_size(),
            instances,
        }
    }
}

impl ElementPredictor for DistinguisherPredictor<'_> {
    fn predict(&self, j: usize, history: &[Fe], _: &[Fe], out: &mut Vec<Fe>) {
        let p = self.field.size() as u64;
        let m = self.big_m;
        let start = out.len();
        let mut preds = vec![0u8; p as usize];
        for &(i, key) in &self.instances[j] {
            let mut prefix_key = 0u64;
            for (q, u) in history.iter().take(i - 1).enumerate() {
                prefix_key = keyed_hash(prefix_key ^ (q as u64 + 1), u.0 as u64);
            }
            for r in 0..p {
                let mut w = 0u64;
                for ip in 1..i {
                    w |= (ip2(history[i - ip - 1].0 as u64, r) as u64) << (ip - 1);
                }
                let h = keyed_hash(key ^ prefix_key, r);
                let b = h & 1;
                w |= b << (i - 1);
                if i < m {
                    let tail = (h >> 1) & ((1u64 << (m - i)) - 1);
                    w |= tail << i;
                }
                preds[r as usize] = if self.d.accepts(w) { 1 - b as u8 } else { b as u8 };
            }
            for z in decode_values(&preds, self.gamma) {
                let e = Fe(z as u32);
                if !out[start..].contains(&e) {
                    out.push(e);
                }
            }
            if out.len() - start >= self.list_size {
                break;
            }
        }
        out.truncate(start + self.list_size);
    }
}

/// Values of `P` along a curve, indexed by the field element `t`.
pub type EvalTable = Vec<Fe>;

/// Learns the table of `P(C)` for the next curve `C`, given the tables of
/// `P(A^(−k·p^j)·C)` (`inputs[k−1]`, `k = 1..M−1`), the values of `P(C)` at
/// the reference points, the points `C(t)` (read only by fixtures) and a
/// predictor. `None` unless exactly one decoded candidate matches every
/// reference value.
pub fn learn_next_curve(
    f: &Field,
    params: &SuParams,
    j: usize,
    inputs: &[&EvalTable],
    refs: &[(Fe, Fe)],
    points: &dyn Fn(Fe, &mut [Fe]),
    predictor: &dyn ElementPredictor,
) -> Option<EvalTable> {
    let mut pairs: Vec<(Fe, Fe)> = Vec::with_capacity(f.size());
    let mut history = vec![Fe::ZERO; inputs.len()];
    let mut target = vec![Fe::ZERO; params.m];
    let mut list = Vec::new();
    for t in f.elements() {
        for (k, tab) in inputs.iter().enumerate() {
            history[k] = tab[t.0 as usize];
        }
        points(t, &mut target);
        list.clear();
        predictor.predict(j, &history, &target, &mut list);
        let first = pairs.len();
        for &e in &list {
            if !pairs[first..].iter().any(|&(_, y)| y == e) {
                pairs.push((t, e));
            }
        }
    }
    let d = params.curve_degree();
    if pairs.len() == f.size() && pairs.iter().enumerate().all(|(i, &(t, _))| t.0 as usize == i) {
        let ys: EvalTable = pairs.iter().map(|p| p.1).collect();
        if fits_full(f, d, &ys) {
            return refs.iter().all(|&(t, y)| ys[t.0 as usize] == y).then_some(ys);
        }
    }
    let th = AgreementThreshold::minimal(pairs.len(), d);
    let cands = sudan_list_decode(f, &pairs, d, th.a).ok()?;
    let mut matching = cands.into_iter().filter(|q| refs.iter().all(|&(t, y)| q.eval(f, t) == y));
    let q: UniPoly = matching.next()?;
    if matching.next().is_some() {
        return None;
    }
    Some(f.elements().map(|t| q.eval(f, t)).collect())
}

/// `{t : C1(t) = C2(t)}`.
pub fn intersection(f: &Field, c1: &Curve, c2: &Curve) -> Vec<Fe> {
    f.elements().filter(|&t| c1.eval(f, t) == c2.eval(f, t)).collect()
}

/// Two curves with `C1(1) ≠ 0` such that `C2` meets `C1` and each
/// `A^(p^j)·C1` in at least `r` points.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvePair {
    pub c1: Curve,
    pub c2: Curve,
    /// `[C1 ∩ C2]`; equals `[A^i C1 ∩ A^i C2]` for every `i`.
    pub same: Vec<Fe>,
    /// `[A^(p^j) C1 ∩ C2]`; equals `[A^(i+p^j) C1 ∩ A^i C2]` for every `i`.
    pub shifted: Vec<Vec<Fe>>,
}

/// Samples `C1` of degree `v` with `C1(1) ≠ 0`, picks `(m+1)·r` distinct
/// parameters, and interpolates `C2` to equal `C1` on the first `r` of them
/// and `A^(p^j)·C1` on the `j`-th next block of `r`.
pub fn sample_good_curves<R: Rng + ?Sized>(
    f: &Field,
    a: &Matrix,
    params: &SuParams,
    retries: usize,
    rng: &mut R,
) -> Result<CurvePair> {
    let (m, r, v, p) = (params.m, params.r, params.v, params.p);
    if (m + 1) * r > p {
        return Err(Error::Precondition(format!("(m+1)·r = {} parameters needed, field has {p}", (m + 1) * r)));
    }
    let shifts: Vec<Matrix> = (0..m).map(|j| a.pow(f, (p as u64).pow(j as u32))).collect();
    for _ in 0..retries.max(1) {
        let c1 = Curve::random(f, m, v, rng);
        if c1.eval(f, Fe::ONE).iter().all(|c| c.is_zero()) {
            continue;
        }
        let mut ts: Vec<Fe> = f.elements().collect();
        for i in 0..(m + 1) * r {
            let k = rng.gen_range(i..ts.len());
            ts.swap(i, k);
        }
        let mut pts: Vec<(Fe, Vec<Fe>)> = ts[..r].iter().map(|&t| (t, c1.eval(f, t))).collect();
        for (j, b) in shifts.iter().enumerate() {
            for &t in &ts[(j + 1) * r..(j + 2) * r] {
                pts.push((t, b.mul_vec(f, &c1.eval(f, t))));
            }
        }
        let c2 = Curve::interpolate(f, m, &pts);
        let same = intersection(f, &c1, &c2);
        let shifted: Vec<Vec<Fe>> = shifts.iter().map(|b| intersection(f, &c1.apply_matrix(f, b), &c2)).collect();
        if same.len() >= r && shifted.iter().all(|s| s.len() >= r) {
            return Ok(CurvePair { c1, c2, same, shifted });
        }
    }
    Err(Error::Construction("no good curve pair within the retry budget".into()))
}

/// Sizes of `[A^(i+p^j) C1 ∩ A^i C2]` and `[A^i C1 ∩ A^i C2]`, computed
/// directly.
pub fn audit_intersections(f: &Field, a: &Matrix, pair: &CurvePair, i: u64, j: usize) -> (usize, usize) {
    let p = f.size() as u64;
    let ai = a.pow(f, i);
    let aij = a.pow(f, i + p.pow(j as u32));
    let c1i = pair.c1.apply_matrix(f, &ai);
    let c2i = pair.c2.apply_matrix(f, &ai);
    let c1ij = pair.c1.apply_matrix(f, &aij);
    (intersection(f, &c1ij, &c2i).len(), intersection(f, &c1i, &c2i).len())
}

/// Points `A^e·C(t)` for all `e`. With a generator matrix they are read
/// from the orbit of the all-ones vector: `C(t) = A^(d_t)·1` gives
/// `A^e·C(t) = A^(e+d_t)·1`. Otherwise they are computed directly.
enum CurvePoints {
    /// `Some(d_t)`, or `None` where `C(t) = 0`.
    Orbit(Vec<Option<u64>>),
    Direct(Vec<Vec<Fe>>, Arc<PowerLadder>),
}

impl CurvePoints {
    fn new(f: &Field, orbit: &OrbitTable, a: &Matrix, c: &Curve) -> Self {
        let logs: Option<Vec<Option<u64>>> = f
            .elements()
            .map(|t| {
                let x = c.eval(f, t);
                if x.iter().all(|c| c.is_zero()) {
                    Some(None)
                } else {
                    orbit.dlog.get(&pack(f.k(), &x)).copied().map(Some)
                }
            })
            .collect();
        match logs {
            Some(logs) => CurvePoints::Orbit(logs),
            None => {
                let base = f.elements().map(|t| c.eval(f, t)).collect();
                CurvePoints::Direct(base, Arc::new(PowerLadder::for_order(f, a)))
            }
        }
    }

    fn point(&self, f: &Field, orbit: &OrbitTable, e: u64, t: Fe, out: &mut [Fe]) {
        let n = orbit.forward.len() as u64 - 1;
        match self {
            CurvePoints::Orbit(logs) => match logs[t.0 as usize] {
                None => out.fill(Fe::ZERO),
                Some(d) => {
                    let x = orbit.forward[((e + d) % n) as usize];
                    let k = f.k();
                    let mask = (1u64 << k) - 1;
                    for (i, c) in out.iter_mut().enumerate() {
                        *c = Fe(((x >> (k as usize * i)) & mask) as u32);
                    }
                }
            },
            CurvePoints::Direct(base, ladder) => {
                out.copy_from_slice(&ladder.apply(f, e % n, &base[t.0 as usize]));
            }
        }
    }
}

/// How the circuit reaches exponent `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WalkMode {
    /// `m` rounds over the base-p digits of `i`.
    Digits,
    /// Stride-0 learning through every exponent in increasing order.
    Sweep,
}

/// The circuit `i ↦ P(A^i·v)` produced by the reconstruction. Holds the
/// curves, the hardwired tables for exponents `0..M`, and a cache of the
/// tables learned so far.
pub struct RsuCircuit<'a> {
    field: Arc<Field>,
    params: SuParams,
    a: Matrix,
    orbit: Arc<OrbitTable>,
    pub curves: CurvePair,
    pub v: Vec<Fe>,
    orbits: [CurvePoints; 2],
    predictor: Box<dyn ElementPredictor + 'a>,
    cache: RefCell<HashMap<u64, [EvalTable; 2]>>,
    failed: RefCell<bool>,
    calls: RefCell<u64>,
}

impl<'a> RsuCircuit<'a> {
    fn order(&self) -> u64 {
        self.orbit.forward.len() as u64 - 1
    }

    /// Number of curve-learning invocations performed so far.
    pub fn learn_calls(&self) -> u64 {
        *self.calls.borrow()
    }

    fn tables(&self, e: u64) -> Option<[EvalTable; 2]> {
        self.cache.borrow().get(&(e % self.order())).cloned()
    }

    /// Interleaved learning of both tables at exponent `e` with stride `j`;
    /// all needed earlier tables must be cached.
    fn learn(&self, e: u64, j: usize) -> Option<()> {
        let n = self.order();
        let key = e % n;
        if self.cache.borrow().contains_key(&key) {
            return Some(());
        }
        if *self.failed.borrow() {
            return None;
        }
        let f = &*self.field;
        let stride = (self.params.p as u64).pow(j as u32) % n;
        let back = |k: u64| (key + n * self.params.big_m as u64 - (k * stride) % n) % n;
        let cache = self.cache.borrow();
        let prev: Vec<&[EvalTable; 2]> = (1..self.params.big_m as u64).map(|k| cache.get(&back(k))).collect::<Option<_>>()?;
        let ref_src = cache.get(&back(1))?;
        *self.calls.borrow_mut() += 2;
        let in1: Vec<&EvalTable> = prev.iter().map(|t| &t[0]).collect();
        let refs1: Vec<(Fe, Fe)> = self.curves.shifted[j].iter().map(|&t| (t, ref_src[1][t.0 as usize])).collect();
        let pts1 = |t: Fe, out: &mut [Fe]| self.orbits[0].point(f, &self.orbit, key, t, out);
        let t1 = learn_next_curve(f, &self.params, j, &in1, &refs1, &pts1, &*self.predictor);
        let t1 = match t1 {
            Some(t) => t,
            None => {
                drop(cache);
                *self.failed.borrow_mut() = true;
                return None;
            }
        };
        let in2: Vec<&EvalTable> = prev.iter().map(|t| &t[1]).collect();
        let refs2: Vec<(Fe, Fe)> = self.curves.same.iter().map(|&t| (t, t1[t.0 as usize])).collect();
        let pts2 = |t: Fe, out: &mut [Fe]| self.orbits[1].point(f, &self.orbit, key, t, out);
        let t2 = learn_next_curve(f, &self.params, j, &in2, &refs2, &pts2, &*self.predictor);
        drop(cache);
        match t2 {
            Some(t2) => {
                self.cache.borrow_mut().insert(key, [t1, t2]);
                Some(())
            }
            None => {
                *self.failed.borrow_mut() = true;
                None
            }
        }
    }

    /// `C(i)` for `i ∈ [1, p^m − 1]` by the digit walk; `None` when a
    /// learning step fails.
    pub fn eval(&self, i: u64) -> Option<Fe> {
        let n = self.order();
        if i == 0 || i > n {
            return None;
        }
        let p = self.params.p as u64;
        let big_m = self.params.big_m as u64;
        let mut low = 0u64;
        for l in 0..self.params.m {
            let pl = p.pow(l as u32);
            for k in big_m..big_m * p {
                self.learn(k * pl + low, l)?;
            }
            low += ((i / pl) % p) * pl;
        }
        self.tables(i).map(|t| t[0][1])
    }

    /// `C(i)` for every `i ∈ [1, p^m − 1]` by the stride-0 sweep.
    pub fn tabulate(&self) -> Option<Vec<Fe>> {
        let n = self.order();
        for e in self.params.big_m as u64..n {
            self.learn(e, 0)?;
        }
        (1..=n).map(|i| self.tables(i).map(|t| t[0][1])).collect()
    }

    /// Evaluates in the given mode.
    pub fn table(&self, mode: WalkMode) -> Option<Vec<Fe>> {
        match mode {
            WalkMode::Sweep => self.tabulate(),
            WalkMode::Digits => (1..=self.order()).map(|i| self.eval(i)).collect(),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RsuConfig {
    pub curve_retries: usize,
    /// Random indices evaluated before the circuit is returned.
    pub audit_points: usize,
}

impl Default for RsuConfig {
    fn default() -> Self {
        RsuConfig { curve_retries: 64, audit_points: 2 }
    }
}

/// Samples good curves, hardwires `P` along `A^e·C1` and `A^e·C2` for
/// `e < M`, and returns `v = C1(1)` with the circuit. `None` if an audited
/// evaluation fails.
pub fn rsu_reconstruct<'a, R: Rng + ?Sized>(
    field: &Arc<Field>,
    p_oracle: &dyn Fn(&[Fe]) -> Fe,
    predictor: Box<dyn ElementPredictor + 'a>,
    a: &Matrix,
    orbit: &Arc<OrbitTable>,
    params: &SuParams,
    cfg: &RsuConfig,
    rng: &mut R,
) -> Result<Option<RsuCircuit<'a>>> {
    params.check_decodable()?;
    let f = &**field;
    let curves = sample_good_curves(f, a, params, cfg.curve_retries, rng)?;
    let orbits = [CurvePoints::new(f, orbit, a, &curves.c1), CurvePoints::new(f, orbit, a, &curves.c2)];
    let m = params.m;
    let mut cache = HashMap::new();
    let n = orbit.forward.len() as u64 - 1;
    for e in 0..params.big_m as u64 {
        let mut x = vec![Fe::ZERO; m];
        let tabs = [0, 1].map(|c| {
            f.elements()
                .map(|t| {
                    orbits[c].point(f, orbit, e, t, &mut x);
                    p_oracle(&x)
                })
                .collect()
        });
        cache.insert(e % n, tabs);
    }
    let v = curves.c1.eval(f, Fe::ONE);
    let circuit = RsuCircuit {
        field: field.clone(),
        params: params.clone(),
        a: a.clone(),
        orbit: orbit.clone(),
        curves,
        v,
        orbits,
        predictor,
        cache: RefCell::new(cache),
        failed: RefCell::new(false),
        calls: RefCell::new(0),
    };
    for _ in 0..cfg.audit_points {
        if circuit.eval(rng.gen_range(1..=n)).is_none() {
            return Ok(None);
        }
    }
    Ok(Some(circuit))
}

/// `P` read from a truth table, as an oracle.
pub fn table_oracle(table: &TruthTable) -> impl Fn(&[Fe]) -> Fe + '_ {
    move |x| table.at_index(lex_index(table.p(), x))
}
